"""Hand-transcribed expected Bell-basis tables, used as regression targets.

Entries are ``(phase, S label, T label)`` with labels in the short form
``P+ P- S+ S-`` for Phi+, Phi-, Psi+, Psi-.  Every entry spells out both
labels, and the coefficient is the total phase of the two-pair state.
"""
from __future__ import annotations

from .bell import BellLabel, ROTATION_ROWS

_L = {"P+": BellLabel.PHI_PLUS, "P-": BellLabel.PHI_MINUS,
      "S+": BellLabel.PSI_PLUS, "S-": BellLabel.PSI_MINUS}

Entry = tuple[complex, BellLabel, BellLabel]


def _e(phase, s, t) -> Entry:
    return complex(phase), _L[s], _L[t]


def _rotation_row(axis: str, sign: int) -> dict[BellLabel, tuple[complex, BellLabel]]:
    s = sign
    if axis == "x":
        rows = {"P+": (s * 1j, "S+"), "P-": (1, "P-"), "S+": (s * 1j, "P+"), "S-": (1, "S-")}
    elif axis == "y":
        rows = {"P+": (1, "P+"), "P-": (-s, "S+"), "S+": (s, "P-"), "S-": (1, "S-")}
    else:
        rows = {"P+": (1, "P-"), "P-": (1, "P+"), "S+": (-s * 1j, "S+"), "S-": (-s * 1j, "S-")}
    return {_L[k]: (complex(ph), _L[v]) for k, (ph, v) in rows.items()}


# (axis, sign) -> input label -> (phase, output label)
ROTATIONS = {(axis, sign): _rotation_row(axis, sign) for axis, sign in ROTATION_ROWS}

# (S, T) initial -> entries for steps i, ii, iii, iv
DEUTSCH_REPLACEMENT: dict[tuple[BellLabel, BellLabel], dict[str, Entry]] = {}
_i = 1j
for init, row in [
    (("P+", "P+"), [(1, "P+", "P+"), (1, "P-", "P-"), (1, "P+", "P+"), (1, "P+", "P+")]),
    (("P+", "P-"), [(-1, "P+", "S+"), (_i, "P-", "S+"), (-1, "S+", "P-"), (1, "P-", "P-")]),
    (("P+", "S+"), [(1, "P+", "P-"), (1, "P-", "P+"), (1, "P-", "P+"), (1, "S+", "P+")]),
    (("P+", "S-"), [(1, "P+", "S-"), (-_i, "P-", "S-"), (1, "S-", "P-"), (1, "S-", "P-")]),
    (("P-", "P+"), [(1, "P-", "P+"), (1, "P+", "P-"), (1, "P+", "P-"), (1, "P+", "P-")]),
    (("P-", "P-"), [(-1, "P-", "S+"), (_i, "P+", "S+"), (-1, "S+", "P+"), (1, "P-", "P+")]),
    (("P-", "S+"), [(1, "P-", "P-"), (1, "P+", "P+"), (1, "P-", "P-"), (1, "S+", "P-")]),
    (("P-", "S-"), [(1, "P-", "S-"), (-_i, "P+", "S-"), (1, "S-", "P+"), (1, "S-", "P+")]),
    (("S+", "P+"), [(1, "S+", "P+"), (-_i, "S+", "P-"), (1, "P-", "S+"), (1, "S+", "S+")]),
    (("S+", "P-"), [(-1, "S+", "S+"), (1, "S+", "S+"), (1, "S-", "S-"), (1, "S-", "S-")]),
    (("S+", "S+"), [(1, "S+", "P-"), (-_i, "S+", "P+"), (1, "P+", "S+"), (1, "P+", "S+")]),
    (("S+", "S-"), [(1, "S+", "S-"), (-1, "S+", "S-"), (-1, "S+", "S-"), (1, "P-", "S-")]),
    (("S-", "P+"), [(1, "S-", "P+"), (-_i, "S-", "P-"), (1, "P-", "S-"), (1, "S+", "S-")]),
    (("S-", "P-"), [(-1, "S-", "S+"), (1, "S-", "S+"), (1, "S-", "S+"), (1, "S-", "S+")]),
    (("S-", "S+"), [(1, "S-", "P-"), (-_i, "S-", "P+"), (1, "P+", "S-"), (1, "P+", "S-")]),
    (("S-", "S-"), [(1, "S-", "S-"), (-1, "S-", "S-"), (-1, "S+", "S+"), (1, "P-", "S+")]),
]:
    DEUTSCH_REPLACEMENT[(_L[init[0]], _L[init[1]])] = dict(zip(("i", "ii", "iii", "iv"), (_e(*x) for x in row)))

# (S, T) initial -> step i entry plus branch entries; a missing branch entry
# means the row is rejected by the test in both branches.  Branch phases leave
# out the rotation coefficients, so only their labels are compared.
BENNETT: dict[tuple[BellLabel, BellLabel], dict[str, Entry]] = {}
for init, row in [
    (("P+", "P+"), [(1, "P-", "P-"), (1, "P-", "P-"), (1, "S+", "S+")]),
    (("P+", "P-"), [(1, "P+", "P-"), (1, "S+", "P-"), (1, "P+", "S+")]),
    (("P+", "S+"), [(_i, "S+", "P+"), (_i, "P+", "S+"), (_i, "P-", "P+")]),
    (("P+", "S-"), [(_i, "S-", "P+"), (_i, "S-", "S+"), (_i, "S-", "P+")]),
    (("P-", "P+"), [(1, "P-", "P+"), (1, "P-", "S+"), (1, "S+", "P+")]),
    (("P-", "P-"), [(1, "P+", "P+"), (1, "S+", "S+"), (1, "P+", "P+")]),
    (("P-", "S+"), [(_i, "S+", "P-"), (_i, "P+", "P-"), (_i, "P-", "S+")]),
    (("P-", "S-"), [(_i, "S-", "P-"), (_i, "S-", "P-"), (_i, "S-", "S+")]),
    (("S+", "P+"), [(_i, "P+", "S+"), (_i, "S+", "P+"), (_i, "P+", "P-")]),
    (("S+", "P-"), [(_i, "P-", "S+"), (_i, "P-", "P+"), (_i, "S+", "P-")]),
    (("S+", "S+"), [(1, "S-", "S-")]),
    (("S+", "S-"), [(1, "S+", "S-")]),
    (("S-", "P+"), [(_i, "P+", "S-")]),
    (("S-", "P-"), [(_i, "P-", "S-")]),
    (("S-", "S+"), [(1, "S-", "S+"), (1, "S-", "P+"), (1, "S-", "P-")]),
    (("S-", "S-"), [(1, "S+", "S+"), (1, "P+", "P+"), (1, "P-", "P-")]),
]:
    BENNETT[(_L[init[0]], _L[init[1]])] = dict(zip(("i", "ii-a", "ii-b"), (_e(*x) for x in row)))

# Test-result weights F^a q^b (q = (1-F)/3) of rows passing each branch, with
# a flag for rows whose kept source pair is the purified reference.
BENNETT_WEIGHTS: dict[str, dict[tuple[BellLabel, BellLabel], tuple[int, int, bool]]] = {
    "ii-a": {
        (_L["P+"], _L["P+"]): (2, 0, True),
        (_L["P+"], _L["P-"]): (1, 1, False),
        (_L["P-"], _L["S+"]): (0, 2, False),
        (_L["P-"], _L["S-"]): (0, 2, False),
        (_L["S+"], _L["P+"]): (1, 1, False),
        (_L["S+"], _L["P-"]): (0, 2, True),
        (_L["S-"], _L["S+"]): (0, 2, False),
        (_L["S-"], _L["S-"]): (0, 2, False),
    },
    "ii-b": {
        (_L["P+"], _L["S+"]): (0, 2, True),
        (_L["P+"], _L["S-"]): (1, 1, False),
        (_L["P-"], _L["P+"]): (0, 2, False),
        (_L["P-"], _L["P-"]): (0, 2, False),
        (_L["S+"], _L["P+"]): (0, 2, False),
        (_L["S+"], _L["P-"]): (0, 2, False),
        (_L["S-"], _L["S+"]): (1, 1, False),
        (_L["S-"], _L["S-"]): (2, 0, True),
    },
}
