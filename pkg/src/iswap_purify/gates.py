"""Dense gate algebra for the XY and Heisenberg two-qubit interactions.

Matrices act on the computational basis ordered |00>, |01>, |10>, |11>, with
qubit 1 the most-significant (left) tensor factor, and with the spin reading
|0> = |down>, |1> = |up>.  Pauli matrices here are the computational ones
(sigma_z |0> = +|0>); the bilateral Bell algebra in :mod:`iswap_purify.bell`
re-expresses them in the spin frame.

A rotation by ``angle`` about ``axis`` is ``exp(+i * angle/2 * sigma)``, so the
pi/2 rotation ``exp(i pi sigma / 4)`` corresponds to ``angle = pi/2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidArgument

TOL = 1e-12
# square complex array; unitaries and densities are checked with is_unitary / is_density
ComplexMatrix = np.ndarray

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"i": I2, "x": X, "y": Y, "z": Z}

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
SWAP = np.eye(4, dtype=complex)[[0, 2, 1, 3]]
CNOT = np.eye(4, dtype=complex)[[0, 1, 3, 2]]
CPF = np.diag([1, 1, 1, -1]).astype(complex)


def xy_evolution(theta: float) -> np.ndarray:
    """Evolution under J(XX + YY) with ``theta = 2 J t``.

    ``theta = pi/2`` is the iSWAP gate.
    """
    if not math.isfinite(theta):
        raise InvalidArgument(f"theta must be finite, got {theta!r}")
    c, s = math.cos(theta), math.sin(theta)
    return np.array(
        [[1, 0, 0, 0], [0, c, 1j * s, 0], [0, 1j * s, c, 0], [0, 0, 0, 1]],
        dtype=complex,
    )


def heisenberg_evolution(phi: float) -> np.ndarray:
    """``exp(i phi (XX + YY + ZZ))`` with ``phi = J_H t``.

    Uses XX + YY + ZZ = 2 SWAP - I: triplet states pick up ``exp(i phi)`` and
    the singlet ``exp(-3 i phi)``.
    """
    if not math.isfinite(phi):
        raise InvalidArgument(f"phi must be finite, got {phi!r}")
    singlet = np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2)
    p_singlet = np.outer(singlet, singlet.conj())
    p_triplet = np.eye(4) - p_singlet
    return np.exp(1j * phi) * p_triplet + np.exp(-3j * phi) * p_singlet


ISWAP = xy_evolution(math.pi / 2)
# Heisenberg evolution at J_H t = pi/8 with the triplet phase removed; the
# singlet then carries -i, so SQRT_SWAP @ SQRT_SWAP == SWAP exactly.
SQRT_SWAP = np.exp(-1j * math.pi / 8) * heisenberg_evolution(math.pi / 8)


def rotation(axis: str, angle: float) -> np.ndarray:
    """Single-qubit ``exp(i angle/2 sigma_axis)``."""
    if axis not in ("x", "y", "z"):
        raise InvalidArgument(f"unknown rotation axis {axis!r}")
    if not math.isfinite(angle):
        raise InvalidArgument(f"angle must be finite, got {angle!r}")
    return math.cos(angle / 2) * I2 + 1j * math.sin(angle / 2) * PAULI[axis]


def kron(*ops: np.ndarray) -> np.ndarray:
    return reduce(np.kron, ops, np.eye(1, dtype=complex))


def embed(op: np.ndarray, qubits: Sequence[int], n_qubits: int) -> np.ndarray:
    """Lift ``op`` acting on ``qubits`` (in that order) to ``n_qubits`` qubits."""
    k = len(qubits)
    if op.shape != (2**k, 2**k):
        raise InvalidArgument(f"operator shape {op.shape} does not match {k} qubits")
    if len(set(qubits)) != k or any(q < 0 or q >= n_qubits for q in qubits):
        raise InvalidArgument(f"invalid qubit indices {qubits} for {n_qubits} qubits")
    dim = 2**n_qubits
    return apply(op, np.eye(dim, dtype=complex), qubits, n_qubits)


def apply(op: np.ndarray, state: np.ndarray, qubits: Sequence[int], n_qubits: int) -> np.ndarray:
    """Apply ``op`` on ``qubits`` to a state vector, or to every column of a matrix."""
    k = len(qubits)
    if state.shape[0] != 2**n_qubits:
        raise InvalidArgument(f"state has leading dimension {state.shape[0]}, expected {2**n_qubits}")
    psi = state.reshape((2,) * n_qubits + state.shape[1:])
    t = op.reshape((2,) * (2 * k))
    out = np.tensordot(t, psi, axes=(list(range(k, 2 * k)), list(qubits)))
    # tensordot puts the new axes first; move them back into place
    out = np.moveaxis(out, list(range(k)), list(qubits))
    return out.reshape(state.shape)


class GateKind(str, Enum):
    XY = "XY"
    ISWAP = "ISWAP"
    SWAP = "SWAP"
    CNOT = "CNOT"
    CPF = "CPF"
    SQRTSWAP = "SQRTSWAP"
    HEIS = "HEIS"
    ROT = "ROT"
    H = "H"
    # unilateral pi rotations exp(i pi sigma/2) = i sigma, kept as their own
    # kinds so circuits can name them without a float parameter
    PX = "PX"
    PY = "PY"
    PZ = "PZ"


TWO_QUBIT = {GateKind.XY, GateKind.ISWAP, GateKind.SWAP, GateKind.CNOT, GateKind.CPF,
             GateKind.SQRTSWAP, GateKind.HEIS}


@dataclass(frozen=True)
class GateSpec:
    """A named gate.

    ``param`` is the dimensionless 2Jt (XY), J_H t (HEIS) or the rotation angle
    (ROT).  ``qubit``/``n_qubits`` place single-qubit gates inside a register;
    the default is a bare 2x2 matrix.
    """

    kind: GateKind
    param: float | None = None
    axis: str | None = None
    qubit: int = 0
    n_qubits: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", GateKind(self.kind))
        if self.param is not None and not math.isfinite(self.param):
            raise InvalidArgument("gate parameter must be finite")
        if self.kind in (GateKind.XY, GateKind.HEIS, GateKind.ROT) and self.param is None:
            raise InvalidArgument(f"{self.kind.value} needs a parameter")
        if self.kind is GateKind.ROT and self.axis not in ("x", "y", "z"):
            raise InvalidArgument(f"ROT needs an axis in x/y/z, got {self.axis!r}")

    @property
    def arity(self) -> int:
        return 2 if self.kind in TWO_QUBIT else 1


def _local_matrix(spec: GateSpec) -> np.ndarray:
    k = spec.kind
    if k is GateKind.XY:
        return xy_evolution(spec.param)
    if k is GateKind.HEIS:
        return heisenberg_evolution(spec.param)
    if k is GateKind.ROT:
        return rotation(spec.axis, spec.param)
    if k in (GateKind.PX, GateKind.PY, GateKind.PZ):
        return 1j * PAULI[k.value[1].lower()]
    return {
        GateKind.ISWAP: ISWAP,
        GateKind.SWAP: SWAP,
        GateKind.CNOT: CNOT,
        GateKind.CPF: CPF,
        GateKind.SQRTSWAP: SQRT_SWAP,
        GateKind.H: HADAMARD,
    }[k].copy()


def build_gate(spec: GateSpec) -> np.ndarray:
    """Unitary for ``spec``; single-qubit gates are embedded if ``n_qubits`` is set."""
    u = _local_matrix(spec)
    if spec.arity == 2:
        if spec.n_qubits not in (None, 2):
            raise InvalidArgument("two-qubit gates are built on exactly two qubits")
        return u
    if spec.n_qubits is None:
        if spec.qubit != 0:
            raise InvalidArgument("qubit index given without n_qubits")
        return u
    if not 0 <= spec.qubit < spec.n_qubits:
        raise InvalidArgument(f"qubit {spec.qubit} outside register of {spec.n_qubits}")
    return embed(u, [spec.qubit], spec.n_qubits)


def rot(axis: str, angle: float, qubit: int, n_qubits: int = 2) -> np.ndarray:
    return build_gate(GateSpec(GateKind.ROT, angle, axis, qubit, n_qubits))


def compose(gates: Sequence[np.ndarray]) -> np.ndarray:
    """Matrix product in list order: the last element acts first on a state."""
    gates = list(gates)
    if not gates:
        raise InvalidArgument("compose needs at least one matrix")
    dim = gates[0].shape[0]
    for g in gates:
        if g.ndim != 2 or g.shape != (dim, dim):
            raise InvalidArgument(f"dimension mismatch: {g.shape} vs ({dim}, {dim})")
    return reduce(np.matmul, gates)


@dataclass(frozen=True)
class PhaseMatch:
    equal: bool
    phase: complex | None
    residual: float


def equal_up_to_global_phase(a: np.ndarray, b: np.ndarray, tol: float = TOL) -> PhaseMatch:
    """Is ``a == c * b`` for some unit ``c``?

    ``c`` is the least-squares phase ``<b, a> / |<b, a>|``; equality is judged
    on the max-norm residual.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise InvalidArgument(f"dimension mismatch: {a.shape} vs {b.shape}")
    overlap = np.vdot(b, a)
    if abs(overlap) < 1e-300:
        return PhaseMatch(False, None, float(np.max(np.abs(a - b))))
    c = overlap / abs(overlap)
    residual = float(np.max(np.abs(a - c * b)))
    return PhaseMatch(residual < tol, complex(c), residual)


def is_unitary(u: np.ndarray, tol: float = TOL) -> bool:
    u = np.asarray(u)
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) < tol)


def is_density(rho: np.ndarray, tol: float = TOL) -> bool:
    rho = np.asarray(rho)
    if np.max(np.abs(rho - rho.conj().T)) >= tol:
        return False
    if abs(np.trace(rho) - 1) >= tol:
        return False
    return bool(np.min(np.linalg.eigvalsh((rho + rho.conj().T) / 2)) >= -1e-10)


# ---------------------------------------------------------------------------
# named identities


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    holds: bool
    residual: float
    phase: complex | None


def _identity_sides(name: str) -> tuple[np.ndarray, np.ndarray]:
    q = math.pi / 2
    p1p2 = rot("z", q, 0) @ rot("z", q, 1)
    h1 = kron(HADAMARD, I2)
    h2 = kron(I2, HADAMARD)
    if name == "CNOT_FROM_ISWAP":
        rhs = compose([rot("z", -q, 0), rot("x", q, 1), rot("z", q, 1), ISWAP,
                       rot("x", -q, 0), ISWAP, rot("z", q, 1)])
        return CNOT, rhs
    if name == "CPF_FROM_SQRTSWAP":
        rhs = compose([np.exp(-1j * q) * np.eye(4), rot("z", q, 0), rot("z", -q, 1),
                       SQRT_SWAP, rot("z", -math.pi, 0), SQRT_SWAP])
        return CPF, rhs
    if name == "CNOT_FROM_CPF":
        return CNOT, compose([rot("y", -q, 1), CPF, rot("y", q, 1)])
    if name == "ISWAP_SWAP_DIAG":
        return ISWAP, SWAP @ np.diag([1, 1j, 1j, 1])
    if name == "CPF_FROM_ISWAP":
        return CPF, compose([SWAP, ISWAP, p1p2])
    if name == "CPF_FROM_DIAG":
        return CPF, np.diag([1, 1j, 1j, 1]) @ p1p2
    if name == "SWAPCNOT_FROM_ISWAP":
        return SWAP @ CNOT, compose([h1, ISWAP, p1p2, h2])
    if name == "CNOT_REVERSED":
        return CNOT, compose([h2, p1p2, ISWAP, h1, SWAP])
    raise InvalidArgument(f"unknown identity {name!r}")


IDENTITIES = ("CNOT_FROM_ISWAP", "CPF_FROM_SQRTSWAP", "ISWAP_SWAP_DIAG", "CPF_FROM_ISWAP",
              "SWAPCNOT_FROM_ISWAP", "CNOT_REVERSED")
EXTRA_IDENTITIES = ("CNOT_FROM_CPF", "CPF_FROM_DIAG")


def check_identity(name: str, tol: float = TOL) -> IdentityCheck:
    """Build both sides of a named gate identity and fit the global phase."""
    lhs, rhs = _identity_sides(name)
    m = equal_up_to_global_phase(lhs, rhs, tol)
    return IdentityCheck(name, m.equal, m.residual, m.phase)


def check_all_identities(names: Iterable[str] = IDENTITIES, tol: float = TOL) -> list[IdentityCheck]:
    return [check_identity(n, tol) for n in names]
