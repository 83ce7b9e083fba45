"""Bell-basis algebra for one or more pairs shared between Alice and Bob.

Register layout for ``n`` pairs is ``(A_0, ..., A_{n-1}, B_0, ..., B_{n-1})``
with ``A_0`` the most significant qubit.  With two pairs, the source pair is
index 0 and the target pair index 1, so the amplitude index is
``8 a_S + 4 a_T + 2 b_S + b_T``.

Bell states are written with |1> = |up>:

    Phi+- = (|11> +- |00>) / sqrt 2,    Psi+- = (|10> +- |01>) / sqrt 2

Bilateral rotations are defined in the spin frame, where sigma_z |up> = +|up>.
That frame is the computational one conjugated by X on every qubit, i.e.
sigma_x -> X, sigma_y -> -Y, sigma_z -> -Z.  Two-qubit bilateral gates follow
the same frame: the CNOT control and the CPF flip are conditioned on |down>.
"""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from . import gates
from .errors import InvalidArgument

CLASSIFY_TOL = 1e-9
# 16 amplitudes, index 8 a_S + 4 a_T + 2 b_S + b_T (A0, A1, B0, B1 register)
TwoPairState = np.ndarray
S, T = 0, 1


class BellLabel(Enum):
    PHI_PLUS = (0, 0)
    PSI_PLUS = (1, 0)
    PHI_MINUS = (0, 1)
    PSI_MINUS = (1, 1)

    @property
    def bits(self) -> tuple[int, int]:
        """(amplitude bit, phase bit)."""
        return self.value

    @property
    def symbol(self) -> str:
        return _SYMBOLS[self]

    @classmethod
    def from_bits(cls, a: int, p: int) -> "BellLabel":
        return cls((a & 1, p & 1))

    @classmethod
    def parse(cls, text: str) -> "BellLabel":
        key = text.strip().replace("⁺", "+").replace("⁻", "-")
        key = key.replace("Φ", "Phi").replace("Ψ", "Psi").lower()
        for lab, sym in _SYMBOLS.items():
            if key == sym.lower():
                return lab
        raise InvalidArgument(f"unknown Bell label {text!r}")

    def __str__(self) -> str:
        return self.symbol


_SYMBOLS = {
    BellLabel.PHI_PLUS: "Phi+",
    BellLabel.PHI_MINUS: "Phi-",
    BellLabel.PSI_PLUS: "Psi+",
    BellLabel.PSI_MINUS: "Psi-",
}
# the order used for tables and for BellDiagonal weights elsewhere
LABELS = (BellLabel.PHI_PLUS, BellLabel.PHI_MINUS, BellLabel.PSI_PLUS, BellLabel.PSI_MINUS)


def bell_vector(label: BellLabel) -> np.ndarray:
    a, p = label.bits
    v = np.zeros(4, dtype=complex)
    sign = -1.0 if p else 1.0
    if a == 0:
        v[3], v[0] = 1.0, sign
    else:
        v[2], v[1] = 1.0, sign
    return v / math.sqrt(2)


def bell_matrix() -> np.ndarray:
    """Columns are the Bell vectors in ``LABELS`` order."""
    return np.stack([bell_vector(l) for l in LABELS], axis=1)


@dataclass(frozen=True)
class PhasedBell:
    label: BellLabel
    phase: complex = 1.0

    def __post_init__(self):
        if abs(abs(self.phase) - 1) > 1e-12:
            raise InvalidArgument(f"phase must be unit modulus, got {self.phase!r}")

    def __str__(self) -> str:
        return f"{format_phase(self.phase)}{self.label.symbol}"


def format_phase(c: complex, tol: float = 1e-9) -> str:
    """Render a unit phase as '', '-', 'i', '-i' or an exp(i..) fallback."""
    for val, txt in ((1, ""), (-1, "-"), (1j, "i"), (-1j, "-i")):
        if abs(c - val) < tol:
            return txt
    return f"exp({cmath.phase(c) / math.pi:.6g}i*pi)"


def parse_phase(text: str) -> complex:
    table = {"": 1, "+": 1, "-": -1, "i": 1j, "+i": 1j, "-i": -1j}
    key = text.strip()
    if key not in table:
        raise InvalidArgument(f"cannot parse phase {text!r}")
    return complex(table[key])


# ---------------------------------------------------------------------------
# multi-pair states


def wire(party: str, pair: int, n_pairs: int) -> int:
    if party not in ("A", "B"):
        raise InvalidArgument(f"party must be 'A' or 'B', got {party!r}")
    if not 0 <= pair < n_pairs:
        raise InvalidArgument(f"pair {pair} outside 0..{n_pairs - 1}")
    return pair if party == "A" else n_pairs + pair


def bell_product(labels: Sequence[BellLabel], phase: complex = 1.0) -> np.ndarray:
    """State vector of ``labels[0] (x) labels[1] (x) ...`` in register order."""
    n = len(labels)
    psi = np.array(phase, dtype=complex)
    # build with pair-major order (A_k, B_k) then move axes to (A..., B...)
    for lab in labels:
        psi = np.multiply.outer(psi, bell_vector(lab).reshape(2, 2))
    order = [2 * k for k in range(n)] + [2 * k + 1 for k in range(n)]
    return np.transpose(psi, order).reshape(-1)


def two_pair_state(s: BellLabel, t: BellLabel, phase: complex = 1.0) -> np.ndarray:
    return bell_product([s, t], phase)


# ---------------------------------------------------------------------------
# bilateral operations


class BKind(str, Enum):
    BX = "BX"
    BY = "BY"
    BZ = "BZ"
    BISWAP = "BISWAP"
    BSWAP = "BSWAP"
    BCNOT = "BCNOT"
    BCPF = "BCPF"
    # unilateral pi rotation exp(i pi sigma / 2) on one party's qubit
    UNI = "UNI"


ROTATION_KINDS = (BKind.BX, BKind.BY, BKind.BZ)
TWO_PAIR_KINDS = (BKind.BISWAP, BKind.BSWAP, BKind.BCNOT, BKind.BCPF)

_FLIP = gates.X
# spin-frame versions of the computational two-qubit gates
_SPIN_CNOT = np.kron(_FLIP, gates.I2) @ gates.CNOT @ np.kron(_FLIP, gates.I2)
_SPIN_CPF = np.kron(_FLIP, _FLIP) @ gates.CPF @ np.kron(_FLIP, _FLIP)
SPIN_PAULI = {"x": gates.X, "y": -gates.Y, "z": -gates.Z}


def rotation_qubit_matrix(axis: str, sign: int) -> np.ndarray:
    """One party's half of B^axis_sign, as a 2x2 matrix on the wire basis.

    x and y are exp(sign * i pi sigma / 4) in the spin frame.  The z rotation
    carries an extra exp(-sign * i pi / 4) per qubit so that its bilateral
    action on Phi+- is phase free; on a single qubit it is diag(-sign*i, 1).
    """
    if sign not in (1, -1):
        raise InvalidArgument(f"sign must be +1 or -1, got {sign!r}")
    if axis == "x":
        return gates.rotation("x", sign * math.pi / 2)
    if axis == "y":
        return gates.rotation("y", -sign * math.pi / 2)
    if axis == "z":
        return np.diag([-sign * 1j, 1.0]).astype(complex)
    raise InvalidArgument(f"unknown axis {axis!r}")


@dataclass(frozen=True)
class BilateralOp:
    """A bilateral gate.

    Rotations act on every pair in ``pairs``.  Two-pair gates take
    ``pairs = (source, target)``.  ``UNI`` is a unilateral pi rotation about
    ``axis`` by ``party`` on each listed pair.
    """

    kind: BKind
    pairs: tuple[int, ...] = (S,)
    sign: int = 1
    axis: str | None = None
    party: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", BKind(self.kind))
        object.__setattr__(self, "pairs", tuple(int(p) for p in self.pairs))
        if not self.pairs or len(set(self.pairs)) != len(self.pairs):
            raise InvalidArgument(f"invalid pair selector {self.pairs}")
        if self.kind in TWO_PAIR_KINDS and len(self.pairs) != 2:
            raise InvalidArgument(f"{self.kind.value} acts on exactly two pairs")
        if self.kind in ROTATION_KINDS and self.sign not in (1, -1):
            raise InvalidArgument("rotation sign must be +1 or -1")
        if self.kind is BKind.UNI:
            if self.axis not in ("x", "y", "z") or self.party not in ("A", "B"):
                raise InvalidArgument("unilateral rotation needs axis and party")

    @property
    def name(self) -> str:
        if self.kind in ROTATION_KINDS:
            return f"{self.kind.value}{'+' if self.sign > 0 else '-'}"
        return self.kind.value

    def local_gates(self, n_pairs: int) -> list[tuple[np.ndarray, tuple[int, ...]]]:
        """Expand into (matrix, wires) factors acting on an ``n_pairs`` register."""
        if any(p < 0 or p >= n_pairs for p in self.pairs):
            raise InvalidArgument(f"pairs {self.pairs} outside register of {n_pairs}")
        if self.kind in ROTATION_KINDS:
            u = rotation_qubit_matrix(self.kind.value[1].lower(), self.sign)
            return [(u, (wire(party, p, n_pairs),)) for p in self.pairs for party in "AB"]
        if self.kind is BKind.UNI:
            u = 1j * SPIN_PAULI[self.axis]
            return [(u, (wire(self.party, p, n_pairs),)) for p in self.pairs]
        u = {
            BKind.BISWAP: gates.ISWAP,
            BKind.BSWAP: gates.SWAP,
            BKind.BCNOT: _SPIN_CNOT,
            BKind.BCPF: _SPIN_CPF,
        }[self.kind]
        s, t = self.pairs
        return [(u, (wire(party, s, n_pairs), wire(party, t, n_pairs))) for party in "AB"]

    def inverse(self) -> "BilateralOp":
        if self.kind in ROTATION_KINDS:
            return BilateralOp(self.kind, self.pairs, -self.sign)
        if self.kind in (BKind.BSWAP, BKind.BCNOT, BKind.BCPF):
            return self
        raise InvalidArgument(f"no bilateral inverse for {self.name}")


def bx(sign: int = 1, *pairs: int) -> BilateralOp:
    return BilateralOp(BKind.BX, pairs or (S,), sign)


def by(sign: int = 1, *pairs: int) -> BilateralOp:
    return BilateralOp(BKind.BY, pairs or (S,), sign)


def bz(sign: int = 1, *pairs: int) -> BilateralOp:
    return BilateralOp(BKind.BZ, pairs or (S,), sign)


BISWAP = BilateralOp(BKind.BISWAP, (S, T))
BSWAP = BilateralOp(BKind.BSWAP, (S, T))
BCNOT = BilateralOp(BKind.BCNOT, (S, T))
BCPF = BilateralOp(BKind.BCPF, (S, T))


def apply_bilateral(op: BilateralOp, state: np.ndarray, n_pairs: int | None = None) -> np.ndarray:
    """Apply ``op`` to a pure state (vector) of ``n_pairs`` pairs."""
    state = np.asarray(state, dtype=complex)
    n_qubits = int(round(math.log2(state.shape[0])))
    if n_pairs is None:
        n_pairs = n_qubits // 2
    if 2**(2 * n_pairs) != state.shape[0]:
        raise InvalidArgument(f"state of length {state.shape[0]} is not {n_pairs} pairs")
    out = state
    for u, ws in op.local_gates(n_pairs):
        out = gates.apply(u, out, ws, 2 * n_pairs)
    return out


def apply_sequence(ops: Iterable[BilateralOp], state: np.ndarray) -> np.ndarray:
    """Apply ops in time order (first element first)."""
    for op in ops:
        state = apply_bilateral(op, state)
    return state


def bilateral_unitary(op: BilateralOp, n_pairs: int = 2) -> np.ndarray:
    u = np.eye(4**n_pairs, dtype=complex)
    for m, ws in op.local_gates(n_pairs):
        u = gates.embed(m, ws, 2 * n_pairs) @ u
    return u


def sequence_unitary(ops: Iterable[BilateralOp], n_pairs: int = 2) -> np.ndarray:
    """Unitary of ops applied in time order."""
    u = np.eye(4**n_pairs, dtype=complex)
    for op in ops:
        u = bilateral_unitary(op, n_pairs) @ u
    return u


# ---------------------------------------------------------------------------
# classification


class NotProduct:
    """Returned when a state is not a single Bell (x) Bell product."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NotProduct"


NOT_PRODUCT = NotProduct()


@dataclass(frozen=True)
class BellProduct:
    """Phased Bell (x) Bell product; the overall phase sits on the S slot."""

    s: PhasedBell
    t: PhasedBell

    @property
    def labels(self) -> tuple[BellLabel, BellLabel]:
        return self.s.label, self.t.label

    @property
    def phase(self) -> complex:
        return self.s.phase * self.t.phase

    def __str__(self) -> str:
        return f"{format_phase(self.phase)}{self.s.label.symbol}_S {self.t.label.symbol}_T"


def classify_bell_product(state: np.ndarray, tol: float = CLASSIFY_TOL) -> BellProduct | NotProduct:
    state = np.asarray(state, dtype=complex)
    if state.shape != (16,):
        raise InvalidArgument("expected a 16-dim two-pair state")
    best = None
    for ls in LABELS:
        for lt in LABELS:
            v = two_pair_state(ls, lt)
            c = np.vdot(v, state)
            if abs(c) > 0.5:
                best = (ls, lt, c)
                break
        if best:
            break
    if best is None:
        return NOT_PRODUCT
    ls, lt, c = best
    if abs(abs(c) - 1) > tol or np.max(np.abs(state - c * two_pair_state(ls, lt))) > tol:
        return NOT_PRODUCT
    return BellProduct(PhasedBell(ls, complex(c / abs(c))), PhasedBell(lt))


def classify_single(state: np.ndarray, tol: float = CLASSIFY_TOL) -> PhasedBell | NotProduct:
    state = np.asarray(state, dtype=complex)
    for lab in LABELS:
        c = np.vdot(bell_vector(lab), state)
        if abs(c) > 0.5:
            if abs(abs(c) - 1) > tol or np.max(np.abs(state - c * bell_vector(lab))) > tol:
                return NOT_PRODUCT
            return PhasedBell(lab, complex(c / abs(c)))
    return NOT_PRODUCT


# ---------------------------------------------------------------------------
# tables


class TableKind(str, Enum):
    ROTATIONS = "ROTATIONS"
    DEUTSCH_REPLACEMENT = "DEUTSCH_REPLACEMENT"
    BENNETT = "BENNETT"


@dataclass
class TableRow:
    initial: tuple[BellLabel, ...]
    entries: dict[str, BellProduct | PhasedBell | NotProduct] = field(default_factory=dict)
    name: str = ""


@dataclass
class BellTable:
    kind: TableKind
    columns: list[str]
    rows: list[TableRow]

    def to_dict(self) -> dict:
        def enc(e):
            if isinstance(e, NotProduct):
                return None
            if isinstance(e, PhasedBell):
                return {"label": e.label.symbol, "phase": _phase_json(e.phase)}
            return {"S": e.s.label.symbol, "T": e.t.label.symbol, "phase": _phase_json(e.phase)}

        return {
            "kind": self.kind.value,
            "columns": self.columns,
            "rows": [
                {"initial": [l.symbol for l in r.initial],
                 "entries": {k: enc(v) for k, v in r.entries.items()}}
                for r in self.rows
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        head = ["initial"] + self.columns
        body = []
        for r in self.rows:
            if len(r.initial) == 1:
                init = r.initial[0].symbol
            else:
                init = f"{r.initial[0].symbol}_S {r.initial[1].symbol}_T"
            cells = [init]
            for c in self.columns:
                e = r.entries.get(c)
                cells.append("-" if e is None or isinstance(e, NotProduct) else str(e))
            body.append(cells)
        widths = [max(len(x[i]) for x in [head] + body) for i in range(len(head))]
        lines = [" | ".join(h.ljust(w) for h, w in zip(head, widths))]
        lines.append("-+-".join("-" * w for w in widths))
        lines += [" | ".join(c.rjust(w) for c, w in zip(row, widths)) for row in body]
        return "\n".join(lines) + "\n"


def _phase_json(c: complex) -> list[float]:
    # snap tiny float noise so the JSON is stable across platforms
    re = round(c.real, 12) + 0.0
    im = round(c.imag, 12) + 0.0
    return [re, im]


ROTATION_ROWS = [(axis, sign) for axis in "xyz" for sign in (1, -1)]
DEUTSCH_STEPS = {
    "i": [by(1, T)],
    "ii": [bz(1, S), bz(1, T)],
    "iii": [BISWAP],
    "iv": [by(-1, S)],
}
BENNETT_STEP_I = [BISWAP]
BENNETT_BRANCH = {"ii-a": [bx(1, S), bx(1, T)], "ii-b": [by(1, S), by(1, T)]}


def rotation_name(axis: str, sign: int) -> str:
    return f"B{axis.upper()}{'+' if sign > 0 else '-'}"


def generate_table(which: TableKind | str) -> BellTable:
    which = TableKind(which)
    if which is TableKind.ROTATIONS:
        cols = [l.symbol for l in LABELS]
        rows = []
        for axis, sign in ROTATION_ROWS:
            u = np.kron(*(2 * [rotation_qubit_matrix(axis, sign)]))
            entries = {l.symbol: classify_single(u @ bell_vector(l)) for l in LABELS}
            rows.append(TableRow((), entries, rotation_name(axis, sign)))
        return BellTable(which, cols, rows)

    rows = []
    for ls in LABELS:
        for lt in LABELS:
            psi = two_pair_state(ls, lt)
            row = TableRow((ls, lt))
            if which is TableKind.DEUTSCH_REPLACEMENT:
                for name, ops in DEUTSCH_STEPS.items():
                    psi = apply_sequence(ops, psi)
                    row.entries[name] = classify_bell_product(psi)
            else:
                psi = apply_sequence(BENNETT_STEP_I, psi)
                row.entries["i"] = classify_bell_product(psi)
                for name, ops in BENNETT_BRANCH.items():
                    row.entries[name] = classify_bell_product(apply_sequence(ops, psi))
            rows.append(row)
    cols = list(DEUTSCH_STEPS) if which is TableKind.DEUTSCH_REPLACEMENT else ["i", *BENNETT_BRANCH]
    return BellTable(which, cols, rows)


def rotation_table_text(table: BellTable) -> str:
    head = ["op"] + table.columns
    body = [[r.name] + [str(r.entries[c]) for c in table.columns] for r in table.rows]
    widths = [max(len(x[i]) for x in [head] + body) for i in range(len(head))]
    lines = [" | ".join(h.ljust(w) for h, w in zip(head, widths))]
    lines.append("-+-".join("-" * w for w in widths))
    lines += [" | ".join(c.rjust(w) for c, w in zip(row, widths)) for row in body]
    return "\n".join(lines) + "\n"


def bcnot_replacement_operator() -> np.ndarray:
    """16x16 unitary of the four-step BiSWAP sequence (time order i..iv)."""
    return sequence_unitary([op for ops in DEUTSCH_STEPS.values() for op in ops])


def bcnot_then_swap_operator() -> np.ndarray:
    return bilateral_unitary(BSWAP) @ bilateral_unitary(BCNOT)


def check_bcnot_replacement(tol: float = gates.TOL) -> gates.PhaseMatch:
    """Does the BiSWAP sequence equal BCNOT followed by a pair swap?"""
    return gates.equal_up_to_global_phase(bcnot_replacement_operator(), bcnot_then_swap_operator(), tol)


# ---------------------------------------------------------------------------
# label-level rules


def bcnot_labels(s: BellLabel, t: BellLabel) -> tuple[BellLabel, BellLabel]:
    """Bell labels after a BCNOT with source ``s`` and target ``t``."""
    (as_, ps), (at, pt) = s.bits, t.bits
    return BellLabel.from_bits(as_, ps ^ pt), BellLabel.from_bits(at ^ as_, pt)


def cpf_rule(s: BellLabel, t: BellLabel) -> BellProduct:
    """Bilateral CPF acting on a Bell pair product, as a closed-form rule.

    Phi^p Phi^q -> Phi^p Phi^q, Phi^p Psi^q -> Phi^-p Psi^q,
    Psi^p Phi^q -> Psi^-p Phi^-q, Psi^p Psi^q -> -Psi^-p Psi^-q.
    """
    (as_, ps), (at, pt) = s.bits, t.bits
    phase = -1.0 if (as_ and at) else 1.0
    return BellProduct(PhasedBell(BellLabel.from_bits(as_, ps ^ at), phase),
                       PhasedBell(BellLabel.from_bits(at, pt ^ as_)))
