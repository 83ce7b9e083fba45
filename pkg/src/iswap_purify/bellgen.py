"""Bell pairs from one use of a native entangler plus a few rotations.

Rotation angles use ``rotation(axis, angle) = exp(+i angle/2 sigma)`` with the
computational Paulis, so ``exp(i pi sigma/4)`` is an angle of +pi/2.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from . import gates
from .bell import BellLabel, bell_vector
from .errors import InvalidArgument
from .gates import GateKind, GateSpec
from .rewrite import Circuit, GateOp, Wire, run, to_text

HALF_PI = np.pi / 2


class Entangler(str, Enum):
    ISWAP = "iSWAP"
    SQRTSWAP = "SqrtSWAP"


class InputState(str, Enum):
    """Single-qubit inputs; ``Y_PLUS`` is (|0> + i|1>)/sqrt(2)."""

    ZERO = "0"
    PLUS = "+"
    MINUS = "-"
    Y_PLUS = "+y"
    Y_MINUS = "-y"

    def vector(self) -> np.ndarray:
        s = 1 / np.sqrt(2)
        return {
            "0": np.array([1, 0], complex),
            "+": np.array([s, s], complex),
            "-": np.array([s, -s], complex),
            "+y": np.array([s, 1j * s]),
            "-y": np.array([s, -1j * s]),
        }[self.value]

    def preparation(self) -> tuple[str, float] | None:
        """Rotation taking |0> to this state (exactly, no extra phase)."""
        return {
            "0": None,
            "+": ("y", -HALF_PI),
            "-": ("y", HALF_PI),
            "+y": ("x", HALF_PI),
            "-y": ("x", -HALF_PI),
        }[self.value]


# (axis, angle, qubit) with qubits 0 and 1; listed in time order
Rotation = tuple[str, float, int]


@dataclass(frozen=True)
class BellRecipe:
    target: BellLabel
    inputs: tuple[InputState, InputState]
    entangler: Entangler
    post: tuple[Rotation, ...] = ()
    pre: tuple[Rotation, ...] = field(default=())

    def __post_init__(self):
        if self.entangler is None:
            raise InvalidArgument("a recipe needs exactly one entangler")
        object.__setattr__(self, "entangler", Entangler(self.entangler))
        object.__setattr__(self, "inputs", tuple(InputState(s) for s in self.inputs))
        if len(self.inputs) != 2:
            raise InvalidArgument("a recipe needs two input states")
        for axis, angle, q in (*self.pre, *self.post):
            if axis not in ("x", "y", "z") or q not in (0, 1) or not np.isfinite(angle):
                raise InvalidArgument(f"bad rotation {(axis, angle, q)!r}")

    def preparation(self) -> tuple[Rotation, ...]:
        out = []
        for q, s in enumerate(self.inputs):
            p = s.preparation()
            if p is not None:
                out.append((p[0], p[1], q))
        return tuple(out)

    def circuit(self) -> Circuit:
        """The whole sequence from |00>, as a one-pair circuit on A0, B0."""
        wires = (Wire("A", 0), Wire("B", 0))
        ops = [GateOp(GateSpec(GateKind.ROT, a, ax), (wires[q],))
               for ax, a, q in (*self.preparation(), *self.pre)]
        kind = GateKind.ISWAP if self.entangler is Entangler.ISWAP else GateKind.SQRTSWAP
        ops.append(GateOp(GateSpec(kind), wires))
        ops += [GateOp(GateSpec(GateKind.ROT, a, ax), (wires[q],)) for ax, a, q in self.post]
        return Circuit(1, ops)

    def to_text(self) -> str:
        return to_text(self.circuit())


def _layers(rots: Sequence[Rotation]) -> int:
    # greedy packing: a rotation joins the current layer unless its qubit is busy
    layers, busy = 0, set()
    for _, _, q in rots:
        if not layers or q in busy:
            layers += 1
            busy = set()
        busy.add(q)
    return layers


@dataclass(frozen=True)
class RecipeCounts:
    two_qubit_gates: int
    rotations: int
    preparation_rotations: int
    rotation_layers: int
    """Sequential rotation steps from |00>; the time budget counts these."""


def recipe_counts(r: BellRecipe) -> RecipeCounts:
    prep = r.preparation()
    rest = (*r.pre, *r.post)
    pre_layers = _layers((*prep, *r.pre))
    return RecipeCounts(1, len(rest), len(prep), pre_layers + _layers(r.post))


_ISWAP_TABLE = {
    BellLabel.PHI_MINUS: (InputState.Y_MINUS, 1),
    BellLabel.PSI_PLUS: (InputState.Y_MINUS, -1),
    BellLabel.PSI_MINUS: (InputState.Y_PLUS, 1),
    BellLabel.PHI_PLUS: (InputState.Y_PLUS, -1),
}

_SQRT_TABLE = {
    BellLabel.PSI_PLUS: (1, 1),
    BellLabel.PSI_MINUS: (-1, 1),
    BellLabel.PHI_PLUS: (1, -1),
    BellLabel.PHI_MINUS: (-1, -1),
}


def recipe_for(target: BellLabel, entangler: Entangler | str) -> BellRecipe:
    target = BellLabel.parse(target) if isinstance(target, str) else target
    entangler = Entangler(entangler)
    if entangler is Entangler.ISWAP:
        first, sign = _ISWAP_TABLE[target]
        return BellRecipe(target, (first, InputState.Y_MINUS), entangler,
                          post=(("y", sign * HALF_PI, 1),))
    zs, xs = _SQRT_TABLE[target]
    return BellRecipe(target, (InputState.PLUS, InputState.MINUS), entangler,
                      post=(("z", zs * HALF_PI, 0), ("y", HALF_PI, 1), ("x", xs * HALF_PI, 1)))


@dataclass(frozen=True)
class Execution:
    state: np.ndarray
    fidelity_to_target: float


def execute_recipe(r: BellRecipe) -> Execution:
    psi = np.zeros(4, complex)
    psi[0] = 1
    psi = run(r.circuit(), psi)
    return Execution(psi, float(abs(np.vdot(bell_vector(r.target), psi)) ** 2))


def all_recipes() -> list[BellRecipe]:
    from .bell import LABELS

    return [recipe_for(t, e) for e in Entangler for t in LABELS]


def verify_recipes(tol: float = gates.TOL) -> list[tuple[str, bool, float]]:
    out = []
    for r in all_recipes():
        f = execute_recipe(r).fidelity_to_target
        out.append((f"{r.entangler.value}->{r.target.symbol}", abs(1 - f) < tol, abs(1 - f)))
    return out
