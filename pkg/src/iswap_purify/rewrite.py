"""Circuit IR for bilateral protocols and the BCNOT -> BiSWAP rewrite.

A circuit acts on ``n_pairs`` Bell pairs laid out as in :mod:`iswap_purify.bell`.
Pair relabelling is tracked classically: ``relabel[k]`` is the physical pair
holding logical pair ``k`` at the end of the circuit, so no SWAP gate is ever
executed for bookkeeping.

Rewrite pipeline::

    insert_swaps -> replace_bcnot -> contract_rotations

The last step can turn a squared rotation into a ``Frame``: a Pauli record
that is not executed, only used to reinterpret measurement outcomes.

Text format, one op per line (``#`` starts a comment)::

    PAIRS 2
    BCNOT P0 P1
    BY+ P1
    RX A0 1.5707963267948966
    FRAME A1=Y B1=Y
    MEASZ A1
    RELABEL 1 0
"""
from __future__ import annotations

import json
import math
import random
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Iterable, Literal, Sequence, Union

import numpy as np

from . import bell, gates
from .bell import BilateralOp, BKind
from .errors import InvalidArgument, ParseError, PreconditionError, UnsupportedSize
from .gates import GateKind, GateSpec

MAX_UNITARY_PAIRS = 3
Direction = Literal["forward", "reversed", "alternate"]


@dataclass(frozen=True, order=True)
class Wire:
    party: str
    pair: int

    def __post_init__(self):
        if self.party not in ("A", "B") or self.pair < 0:
            raise InvalidArgument(f"invalid wire {self.party}{self.pair}")

    def index(self, n_pairs: int) -> int:
        return bell.wire(self.party, self.pair, n_pairs)

    def __str__(self) -> str:
        return f"{self.party}{self.pair}"

    @classmethod
    def parse(cls, text: str) -> "Wire":
        if len(text) < 2 or text[0] not in "AB" or not text[1:].isdigit():
            raise InvalidArgument(f"bad wire {text!r}")
        return cls(text[0], int(text[1:]))


@dataclass(frozen=True)
class BOp:
    op: BilateralOp


@dataclass(frozen=True)
class GateOp:
    spec: GateSpec
    wires: tuple[Wire, ...]

    def __post_init__(self):
        if len(self.wires) != self.spec.arity or len(set(self.wires)) != len(self.wires):
            raise InvalidArgument(f"{self.spec.kind.value} needs {self.spec.arity} distinct wires")


@dataclass(frozen=True)
class Measure:
    wire: Wire


@dataclass(frozen=True)
class Frame:
    """Pauli record on wires; ``paulis`` is a sorted tuple of (wire, 'X'|'Y'|'Z')."""

    paulis: tuple[tuple[Wire, str], ...]

    def __post_init__(self):
        ws = [w for w, _ in self.paulis]
        if len(set(ws)) != len(ws) or any(p not in "XYZ" or len(p) != 1 for _, p in self.paulis):
            raise InvalidArgument(f"invalid frame {self.paulis}")
        object.__setattr__(self, "paulis", tuple(sorted(self.paulis)))


Op = Union[BOp, GateOp, Measure, Frame]
CircuitOp = Op


def op_wires(op: Op, n_pairs: int | None = None) -> tuple[Wire, ...]:
    if isinstance(op, BOp):
        b = op.op
        if b.kind is BKind.UNI:
            return tuple(Wire(b.party, p) for p in b.pairs)
        return tuple(Wire(party, p) for p in b.pairs for party in "AB")
    if isinstance(op, GateOp):
        return op.wires
    if isinstance(op, Measure):
        return (op.wire,)
    return tuple(w for w, _ in op.paulis)


@dataclass
class Circuit:
    n_pairs: int
    ops: list[Op] = field(default_factory=list)
    relabel: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.n_pairs < 1:
            raise InvalidArgument("a circuit needs at least one pair")
        if self.relabel is None:
            self.relabel = tuple(range(self.n_pairs))
        self.relabel = tuple(int(x) for x in self.relabel)
        if sorted(self.relabel) != list(range(self.n_pairs)):
            raise InvalidArgument(f"relabel {self.relabel} is not a permutation")
        measured: set[Wire] = set()
        for op in self.ops:
            ws = op_wires(op)
            if any(w.pair >= self.n_pairs for w in ws):
                raise InvalidArgument(f"op {op} touches a pair outside 0..{self.n_pairs - 1}")
            if not isinstance(op, Measure) and measured & set(ws):
                raise InvalidArgument(f"op {op} acts on an already measured wire")
            if isinstance(op, Measure):
                if op.wire in measured:
                    raise InvalidArgument(f"wire {op.wire} measured twice")
                measured.add(op.wire)

    def copy(self) -> "Circuit":
        return Circuit(self.n_pairs, list(self.ops), self.relabel)

    @property
    def measured_wires(self) -> list[Wire]:
        return [op.wire for op in self.ops if isinstance(op, Measure)]

    def logical_measured(self) -> set[tuple[str, int]]:
        """Measured wires named by logical pair."""
        inv = {phys: k for k, phys in enumerate(self.relabel)}
        return {(w.party, inv[w.pair]) for w in self.measured_wires}

    def unitary_ops(self) -> list[Op]:
        return [op for op in self.ops if not isinstance(op, Measure)]


# ---------------------------------------------------------------------------
# text format

_GATE_NAMES = {
    "XY": GateKind.XY, "ISWAP": GateKind.ISWAP, "SWAP": GateKind.SWAP, "CNOT": GateKind.CNOT,
    "CPF": GateKind.CPF, "SQRTSWAP": GateKind.SQRTSWAP, "HEIS": GateKind.HEIS, "H": GateKind.H,
    "PX": GateKind.PX, "PY": GateKind.PY, "PZ": GateKind.PZ,
}
_PARAM_KINDS = {GateKind.XY, GateKind.HEIS}
_ROT_NAMES = {"RX": "x", "RY": "y", "RZ": "z"}
_TWO_PAIR = {k.value: k for k in bell.TWO_PAIR_KINDS}


def _fmt_pairs(pairs: Iterable[int]) -> str:
    return " ".join(f"P{p}" for p in pairs)


def format_op(op: Op) -> str:
    if isinstance(op, BOp):
        b = op.op
        if b.kind is BKind.UNI:
            return f"UNI {b.axis} {b.party} {_fmt_pairs(b.pairs)}"
        return f"{b.name} {_fmt_pairs(b.pairs)}"
    if isinstance(op, GateOp):
        s = op.spec
        ws = " ".join(str(w) for w in op.wires)
        if s.kind is GateKind.ROT:
            return f"R{s.axis.upper()} {ws} {s.param!r}"
        if s.kind in _PARAM_KINDS:
            return f"{s.kind.value} {ws} {s.param!r}"
        return f"{s.kind.value} {ws}"
    if isinstance(op, Measure):
        return f"MEASZ {op.wire}"
    return "FRAME " + " ".join(f"{w}={p}" for w, p in op.paulis)


def to_text(c: Circuit) -> str:
    lines = [f"PAIRS {c.n_pairs}"] + [format_op(op) for op in c.ops]
    if c.relabel != tuple(range(c.n_pairs)):
        lines.append("RELABEL " + " ".join(str(x) for x in c.relabel))
    return "\n".join(lines) + "\n"


def _parse_pairs(tokens: Sequence[str], lineno: int) -> tuple[int, ...]:
    out = []
    for t in tokens:
        if len(t) < 2 or t[0] != "P" or not t[1:].isdigit():
            raise ParseError(f"expected a pair like P0, got {t!r}", lineno)
        out.append(int(t[1:]))
    return tuple(out)


def _parse_op(tokens: list[str], lineno: int) -> Op:
    name, args = tokens[0], tokens[1:]
    rot = {"BX": BKind.BX, "BY": BKind.BY, "BZ": BKind.BZ}
    if name[:2] in rot and name[2:] in ("+", "-") and len(name) == 3:
        return BOp(BilateralOp(rot[name[:2]], _parse_pairs(args, lineno), 1 if name[2] == "+" else -1))
    if name in _TWO_PAIR:
        return BOp(BilateralOp(_TWO_PAIR[name], _parse_pairs(args, lineno)))
    if name == "UNI":
        if len(args) < 3:
            raise ParseError("UNI needs axis, party and pairs", lineno)
        return BOp(BilateralOp(BKind.UNI, _parse_pairs(args[2:], lineno), axis=args[0], party=args[1]))
    if name == "MEASZ":
        if len(args) != 1:
            raise ParseError("MEASZ takes one wire", lineno)
        return Measure(Wire.parse(args[0]))
    if name == "FRAME":
        paulis = []
        for a in args:
            w, _, p = a.partition("=")
            paulis.append((Wire.parse(w), p))
        return Frame(tuple(paulis))
    if name in _ROT_NAMES:
        if len(args) != 2:
            raise ParseError(f"{name} takes a wire and an angle", lineno)
        spec = GateSpec(GateKind.ROT, _parse_float(args[1], lineno), _ROT_NAMES[name])
        return GateOp(spec, (Wire.parse(args[0]),))
    if name in _GATE_NAMES:
        kind = _GATE_NAMES[name]
        param = None
        if kind in _PARAM_KINDS:
            if not args:
                raise ParseError(f"{name} needs a parameter", lineno)
            param, args = _parse_float(args[-1], lineno), args[:-1]
        return GateOp(GateSpec(kind, param), tuple(Wire.parse(a) for a in args))
    raise ParseError(f"unknown op {name!r}", lineno)


def _parse_float(text: str, lineno: int) -> float:
    try:
        x = float(text)
    except ValueError:
        raise ParseError(f"bad number {text!r}", lineno) from None
    if not math.isfinite(x):
        raise ParseError(f"non-finite number {text!r}", lineno)
    return x


def from_text(text: str) -> Circuit:
    n_pairs = None
    ops: list[Op] = []
    relabel = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "PAIRS":
            if n_pairs is not None or len(tokens) != 2 or not tokens[1].isdigit():
                raise ParseError("PAIRS must appear once with an integer", lineno)
            n_pairs = int(tokens[1])
            continue
        if n_pairs is None:
            raise ParseError("PAIRS must come first", lineno)
        if tokens[0] == "RELABEL":
            try:
                relabel = tuple(int(t) for t in tokens[1:])
            except ValueError:
                raise ParseError("RELABEL takes integers", lineno) from None
            continue
        if relabel is not None:
            raise ParseError("RELABEL must be the last line", lineno)
        try:
            op = _parse_op(tokens, lineno)
        except ParseError:
            raise
        except InvalidArgument as exc:
            raise ParseError(str(exc), lineno) from None
        if any(w.pair >= n_pairs for w in op_wires(op)):
            raise ParseError(f"{tokens[0]} touches a pair outside 0..{n_pairs - 1}", lineno)
        ops.append(op)
    if n_pairs is None:
        if ops or relabel:
            raise ParseError("missing PAIRS line")
        return Circuit(1)
    try:
        return Circuit(n_pairs, ops, relabel)
    except InvalidArgument as exc:
        raise ParseError(str(exc)) from None


# ---------------------------------------------------------------------------
# rewrite steps


def _rename_op(op: Op, phys: Sequence[int]) -> Op:
    """Move every pair index p of ``op`` to ``phys[p]``."""
    if isinstance(op, BOp):
        return BOp(replace(op.op, pairs=tuple(phys[p] for p in op.op.pairs)))
    if isinstance(op, GateOp):
        return GateOp(op.spec, tuple(Wire(w.party, phys[w.pair]) for w in op.wires))
    if isinstance(op, Measure):
        return Measure(Wire(op.wire.party, phys[op.wire.pair]))
    return Frame(tuple((Wire(w.party, phys[w.pair]), p) for w, p in op.paulis))


def _is_kind(op: Op, kind: BKind) -> bool:
    return isinstance(op, BOp) and op.op.kind is kind


def insert_swaps(c: Circuit) -> Circuit:
    """Follow every BCNOT by a BSWAP on the same pairs.

    Later ops are renamed and the relabelling updated so that
    ``circuit_unitary`` is unchanged.
    """
    phys = list(range(c.n_pairs))
    out: list[Op] = []
    for op in c.ops:
        new = _rename_op(op, phys)
        out.append(new)
        if _is_kind(new, BKind.BCNOT):
            s, t = new.op.pairs
            out.append(BOp(BilateralOp(BKind.BSWAP, (s, t))))
            for k, p in enumerate(phys):
                if p == s:
                    phys[k] = t
                elif p == t:
                    phys[k] = s
    return Circuit(c.n_pairs, out, tuple(phys[r] for r in c.relabel))


def _rot(kind: BKind, sign: int, pair: int) -> BOp:
    return BOp(BilateralOp(kind, (pair,), sign))


def replacement_sequence(s: int, t: int, direction: Literal["forward", "reversed"]) -> list[Op]:
    """Time-ordered ops equal to BCNOT(s -> t) followed by BSWAP(s, t)."""
    biswap = BOp(BilateralOp(BKind.BISWAP, (s, t)))
    if direction == "forward":
        return [_rot(BKind.BY, 1, t), _rot(BKind.BZ, 1, s), _rot(BKind.BZ, 1, t), biswap,
                _rot(BKind.BY, -1, s)]
    if direction == "reversed":
        return [_rot(BKind.BY, -1, t), biswap, _rot(BKind.BZ, 1, s), _rot(BKind.BZ, -1, t),
                _rot(BKind.BY, 1, s)]
    raise InvalidArgument(f"unknown direction {direction!r}")


def replace_bcnot(c: Circuit, direction: Direction = "forward") -> Circuit:
    """Replace each BCNOT + BSWAP pair by a single-BiSWAP sequence."""
    if direction not in ("forward", "reversed", "alternate"):
        raise InvalidArgument(f"unknown direction {direction!r}")
    out: list[Op] = []
    ops = c.ops
    i = n_done = 0
    while i < len(ops):
        op = ops[i]
        if _is_kind(op, BKind.BCNOT):
            nxt = ops[i + 1] if i + 1 < len(ops) else None
            if nxt is None or not _is_kind(nxt, BKind.BSWAP) or set(nxt.op.pairs) != set(op.op.pairs):
                raise PreconditionError(f"BCNOT at op {i} is not followed by a BSWAP on the same pairs")
            d = direction
            if d == "alternate":
                d = "forward" if n_done % 2 == 0 else "reversed"
            out.extend(replacement_sequence(*op.op.pairs, d))
            n_done += 1
            i += 2
            continue
        out.append(op)
        i += 1
    return Circuit(c.n_pairs, out, c.relabel)


_SQUARE_PAULI = {BKind.BX: "X", BKind.BY: "Y", BKind.BZ: "Z"}


def _single_rotation(op: Op) -> bool:
    return isinstance(op, BOp) and op.op.kind in bell.ROTATION_KINDS and len(op.op.pairs) == 1


def _split_rotations(ops: list[Op]) -> list[Op]:
    out = []
    for op in ops:
        if isinstance(op, BOp) and op.op.kind in bell.ROTATION_KINDS and len(op.op.pairs) > 1:
            out.extend(_rot(op.op.kind, op.op.sign, p) for p in op.op.pairs)
        else:
            out.append(op)
    return out


def contract_rotations(c: Circuit) -> Circuit:
    """Merge adjacent bilateral rotations on the same pair.

    An inverse pair is dropped.  Two equal rotations make a bilateral Pauli
    (up to phase), which becomes a ``Frame`` record.  Frames on the same axis
    commute with that axis's rotations and do not block a merge.
    """
    ops = _split_rotations(list(c.ops))
    changed = True
    while changed:
        changed = False
        for i, op in enumerate(ops):
            if not _single_rotation(op):
                continue
            ws = set(op_wires(op))
            axis = _SQUARE_PAULI[op.op.kind]
            for j in range(i + 1, len(ops)):
                other = ops[j]
                if not ws & set(op_wires(other)):
                    continue
                if isinstance(other, Frame) and all(p == axis for w, p in other.paulis if w in ws):
                    continue
                if _single_rotation(other) and other.op.kind is op.op.kind and other.op.pairs == op.op.pairs:
                    p = op.op.pairs[0]
                    if other.op.sign == op.op.sign:
                        frame = Frame(((Wire("A", p), axis), (Wire("B", p), axis)))
                        ops = ops[:i] + [frame] + ops[i + 1:j] + ops[j + 1:]
                    else:
                        ops = ops[:i] + ops[i + 1:j] + ops[j + 1:]
                    changed = True
                break
            if changed:
                break
    return Circuit(c.n_pairs, _merge_frames(ops), c.relabel)


def _merge_frames(ops: list[Op]) -> list[Op]:
    """Fuse consecutive frames on disjoint wires; identical Paulis cancel."""
    out: list[Op] = []
    for op in ops:
        if isinstance(op, Frame) and out and isinstance(out[-1], Frame):
            prev = dict(out[-1].paulis)
            merged = dict(prev)
            ok = True
            for w, p in op.paulis:
                if w in merged:
                    if merged[w] != p:
                        ok = False
                        break
                    del merged[w]
                else:
                    merged[w] = p
            if ok:
                out.pop()
                if merged:
                    out.append(Frame(tuple(merged.items())))
                continue
        out.append(op)
    return out


def rewrite(c: Circuit, direction: Direction = "forward") -> Circuit:
    """Steps (i)-(iii): insert swaps, replace BCNOTs, contract rotations."""
    return contract_rotations(replace_bcnot(insert_swaps(c), direction))


# ---------------------------------------------------------------------------
# templates


def _bits(s: str | Sequence[int], length: int | None = None, name: str = "bits") -> list[int]:
    if isinstance(s, str):
        if any(ch not in "01" for ch in s):
            raise InvalidArgument(f"{name} must be a 0/1 string, got {s!r}")
        out = [int(ch) for ch in s]
    else:
        out = [int(b) for b in s]
        if any(b not in (0, 1) for b in out):
            raise InvalidArgument(f"{name} must contain only 0 and 1")
    if length is not None and len(out) != length:
        raise InvalidArgument(f"{name} must have length {length}, got {len(out)}")
    return out


def hashing_template(n: int, s: str | Sequence[int]) -> Circuit:
    """One hashing step: reveal the parity of the Bell string restricted by ``s``.

    Each pair contributes according to its two bits of ``s`` (amplitude bit a,
    phase bit p of its Bell label):

    - ``00``: not involved
    - ``10``: a, no rotation
    - ``01``: p, via B^y_+ (which exchanges a and p)
    - ``11``: a xor p, via B^x_+ and a unilateral pi rotation about x on Alice

    The involved pairs are folded into the last involved pair by BCNOTs, and
    that pair is measured bilaterally in z.
    """
    if not isinstance(n, int) or n < 2:
        raise InvalidArgument(f"hashing needs n >= 2 pairs, got {n!r}")
    bits = _bits(s, 2 * n, "s")
    sym = [(bits[2 * j], bits[2 * j + 1]) for j in range(n)]
    involved = [j for j in range(n) if sym[j] != (0, 0)]
    ops: list[Op] = []
    if not involved:
        return Circuit(n, ops)
    for j in involved:
        if sym[j] == (0, 1):
            ops.append(_rot(BKind.BY, 1, j))
        elif sym[j] == (1, 1):
            ops.append(_rot(BKind.BX, 1, j))
            ops.append(GateOp(GateSpec(GateKind.PX), (Wire("A", j),)))
    m = involved[-1]
    for j in involved[:-1]:
        ops.append(BOp(BilateralOp(BKind.BCNOT, (j, m))))
    ops += [Measure(Wire("A", m)), Measure(Wire("B", m))]
    return Circuit(n, ops)


def breeding_template(n_impure: int) -> Circuit:
    """Parity of the amplitude bits of ``n_impure`` pairs, written into a pure ancilla.

    Pairs ``0..n_impure-1`` are the impure ones, pair ``n_impure`` is a
    pre-shared Phi+.  A BCNOT ladder accumulates the parity, copies it into the
    ancilla, and is undone so that only the ancilla is measured.
    """
    if not isinstance(n_impure, int) or n_impure < 2:
        raise InvalidArgument(f"breeding needs at least two impure pairs, got {n_impure!r}")
    anc = n_impure
    ladder = [BOp(BilateralOp(BKind.BCNOT, (j, j + 1))) for j in range(n_impure - 1)]
    ops: list[Op] = list(ladder)
    ops.append(BOp(BilateralOp(BKind.BCNOT, (n_impure - 1, anc))))
    ops += ladder[::-1]
    ops += [Measure(Wire("A", anc)), Measure(Wire("B", anc))]
    return Circuit(n_impure + 1, ops)


# ---------------------------------------------------------------------------
# simulation


_FRAME_PAULI = {"X": gates.X, "Y": gates.Y, "Z": gates.Z}


def op_factors(op: Op, n_pairs: int) -> list[tuple[np.ndarray, tuple[int, ...]]]:
    """(matrix, qubit indices) factors of an op; measurements have none."""
    if isinstance(op, BOp):
        return op.op.local_gates(n_pairs)
    if isinstance(op, GateOp):
        return [(gates.build_gate(op.spec), tuple(w.index(n_pairs) for w in op.wires))]
    if isinstance(op, Frame):
        return [(_FRAME_PAULI[p], (w.index(n_pairs),)) for w, p in op.paulis]
    return []


def relabel_states(c: Circuit, psi: np.ndarray) -> np.ndarray:
    """Reorder physical pairs into logical order (acts on vectors or matrix columns)."""
    n = c.n_pairs
    t = psi.reshape((2,) * (2 * n) + psi.shape[1:])
    perm = [c.relabel[k] for k in range(n)] + [n + c.relabel[k] for k in range(n)]
    perm += list(range(2 * n, t.ndim))
    return np.transpose(t, perm).reshape(psi.shape)


def run(c: Circuit, psi: np.ndarray, frames: bool = True, logical: bool = False) -> np.ndarray:
    """Apply the unitary part of ``c`` to ``psi`` (vector or matrix columns).

    ``frames=False`` skips Frame records, which is what hardware executes.
    """
    n = c.n_pairs
    for op in c.ops:
        if isinstance(op, Frame) and not frames:
            continue
        for u, ws in op_factors(op, n):
            psi = gates.apply(u, psi, ws, 2 * n)
    return relabel_states(c, psi) if logical else psi


def circuit_unitary(c: Circuit) -> np.ndarray:
    """Logical unitary of a measurement-free circuit, relabelling included."""
    if c.n_pairs > MAX_UNITARY_PAIRS:
        raise UnsupportedSize(f"{c.n_pairs} pairs exceed the {MAX_UNITARY_PAIRS}-pair unitary limit")
    if any(isinstance(op, Measure) for op in c.ops):
        raise PreconditionError("circuit_unitary needs a measurement-free circuit; use the prefix")
    dim = 4**c.n_pairs
    return run(c, np.eye(dim, dtype=complex), frames=True, logical=True)


def measurement_free_prefix(c: Circuit) -> Circuit:
    return Circuit(c.n_pairs, c.unitary_ops(), c.relabel)


@dataclass(frozen=True)
class Equivalence:
    equivalent: bool
    residual: float
    phase: complex | None = None
    same_measurements: bool = True


def check_rewrite_equivalence(original: Circuit, rewritten: Circuit, tol: float = 1e-10) -> Equivalence:
    """Unitary equality (up to global phase) of the measurement-free parts.

    Frames are applied at their recorded positions and relabelling is composed
    in, so measured wires are compared by logical pair.
    """
    if original.n_pairs != rewritten.n_pairs:
        return Equivalence(False, float("inf"), None, False)
    u1 = circuit_unitary(measurement_free_prefix(original))
    u2 = circuit_unitary(measurement_free_prefix(rewritten))
    m = gates.equal_up_to_global_phase(u1, u2, tol)
    same = original.logical_measured() == rewritten.logical_measured()
    return Equivalence(m.equal and same, m.residual, m.phase, same)


# ---------------------------------------------------------------------------
# Pauli frames


def _pauli_label(m: np.ndarray) -> str | None:
    """Name a 2x2 or 4x4 matrix that is a Pauli string up to phase."""
    k = int(round(math.log2(m.shape[0])))
    for combo in np.ndindex(*(4,) * k):
        names = ["I", "X", "Y", "Z"]
        p = gates.kron(*(gates.PAULI[names[c].lower()] for c in combo))
        if gates.equal_up_to_global_phase(m, p, 1e-9).equal:
            return "".join(names[c] for c in combo)
    return None


def propagate_frames(c: Circuit) -> dict[Wire, str]:
    """Net Pauli at the end of the circuit from all Frame records.

    Every executed gate after a frame must be Clifford; otherwise the frame
    cannot be carried classically and an error is raised.
    """
    n = c.n_pairs
    names = {k: "I" for k in range(2 * n)}
    wires = {Wire(p, k).index(n): Wire(p, k) for p in "AB" for k in range(n)}
    for op in c.ops:
        if isinstance(op, Frame):
            for w, p in op.paulis:
                idx = w.index(n)
                names[idx] = _multiply(names[idx], p)
            continue
        for u, ws in op_factors(op, n):
            cur = "".join(names[q] for q in ws)
            if cur == "I" * len(ws):
                continue
            pm = gates.kron(*(gates.PAULI[ch.lower()] for ch in cur))
            lab = _pauli_label(u @ pm @ u.conj().T)
            if lab is None:
                raise PreconditionError(f"frame cannot pass through non-Clifford op {format_op(op)}")
            for q, ch in zip(ws, lab):
                names[q] = ch
    return {wires[q]: p for q, p in names.items() if p != "I"}


def _multiply(a: str, b: str) -> str:
    if a == "I":
        return b
    if b == "I" or a == b:
        return "I" if a == b else a
    return ({"X", "Y", "Z"} - {a, b}).pop()


def outcome_flips(c: Circuit) -> dict[Wire, int]:
    """Which measured wires have their z outcome flipped by the frame."""
    net = propagate_frames(c)
    return {w: int(net.get(w, "I") in ("X", "Y")) for w in c.measured_wires}


# ---------------------------------------------------------------------------
# hashing parity


def hashing_parity(x: str | Sequence[int], s: str | Sequence[int]) -> int:
    """Parity revealed for Bell string ``x`` under subset string ``s``.

    Both are bit strings with two bits (a, p) per pair; the parity is the
    inner product of ``x`` and ``s`` mod 2.
    """
    xb = _bits(x, None, "x")
    sb = _bits(s, None, "s")
    if len(xb) != len(sb) or len(xb) % 2:
        raise InvalidArgument("x and s must have the same even length")
    return sum(a & b for a, b in zip(xb, sb)) % 2


def bell_string_labels(x: str | Sequence[int]) -> list[bell.BellLabel]:
    xb = _bits(x, None, "x")
    if len(xb) % 2:
        raise InvalidArgument("Bell strings have even length")
    return [bell.BellLabel.from_bits(xb[2 * j], xb[2 * j + 1]) for j in range(len(xb) // 2)]


def simulate_parity(c: Circuit, x: str | Sequence[int], tol: float = 1e-9) -> int:
    """Deterministic parity of the bilateral z measurement, by state vector.

    Frames are not executed; their effect is applied to the outcome instead.
    A circuit without measurements reveals parity 0.
    """
    labels = bell_string_labels(x)
    if len(labels) > c.n_pairs:
        raise InvalidArgument("Bell string longer than the circuit")
    labels = labels + [bell.BellLabel.PHI_PLUS] * (c.n_pairs - len(labels))
    meas = c.measured_wires
    if not meas:
        return 0
    psi = run(c, bell.bell_product(labels), frames=False)
    n = c.n_pairs
    probs = np.abs(psi) ** 2
    idx = np.arange(psi.shape[0])
    flips = outcome_flips(c)
    parity = np.zeros_like(idx)
    for w in meas:
        parity ^= (idx >> (2 * n - 1 - w.index(n))) & 1
        parity ^= flips[w]
    p1 = float(probs[parity == 1].sum())
    if min(p1, 1 - p1) > tol:
        raise AssertionError(f"parity is not deterministic (P(1) = {p1})")
    return int(p1 > 0.5)


# ---------------------------------------------------------------------------
# reports

ISWAP_EQUIVALENT = {BKind.BCNOT: 2, BKind.BSWAP: 3, BKind.BISWAP: 1, BKind.BCPF: 2}
_GATE_ISWAP_EQUIVALENT = {GateKind.CNOT: 2, GateKind.SWAP: 3, GateKind.ISWAP: 1, GateKind.XY: 1,
                          GateKind.CPF: 2}


def gate_counts(c: Circuit) -> dict[str, int]:
    """Executed ops by name; frames and measurements are listed separately."""
    cnt: Counter[str] = Counter()
    for op in c.ops:
        if isinstance(op, BOp):
            mult = len(op.op.pairs) if op.op.kind in bell.ROTATION_KINDS else 1
            cnt[op.op.name] += mult
        elif isinstance(op, GateOp):
            cnt[format_op(op).split()[0]] += 1
    return dict(sorted(cnt.items()))


def two_qubit_counts(c: Circuit) -> dict[str, int]:
    """Two-qubit gates per party, raw and in iSWAP-equivalents."""
    raw = equiv = 0
    for op in c.ops:
        if isinstance(op, BOp) and op.op.kind in ISWAP_EQUIVALENT:
            raw += 1
            equiv += ISWAP_EQUIVALENT[op.op.kind]
        elif isinstance(op, GateOp) and op.spec.arity == 2:
            raw += 1
            equiv += _GATE_ISWAP_EQUIVALENT.get(op.spec.kind, 1)
    return {"two_qubit_gates": raw, "iswap_equivalent": equiv}


FORBIDDEN_AFTER_REWRITE = {"BCNOT", "BSWAP", "CNOT", "SWAP"}


def rewrite_report(before: Circuit, after: Circuit) -> dict:
    gb, ga = gate_counts(before), gate_counts(after)
    return {
        "before": {"gates": gb, **two_qubit_counts(before)},
        "after": {"gates": ga, **two_qubit_counts(after),
                  "frames": sum(isinstance(op, Frame) for op in after.ops)},
        "relabel": list(after.relabel),
        "forbidden_remaining": sorted(FORBIDDEN_AFTER_REWRITE & set(ga)),
    }


def rewrite_report_json(before: Circuit, after: Circuit) -> str:
    return json.dumps(rewrite_report(before, after), indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# replacement identities


def _seq(ops: list[Op]) -> np.ndarray:
    return circuit_unitary(Circuit(2, ops))


def replacement_forms() -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """Named (lhs, rhs) 16x16 operator pairs for the single-BiSWAP identities.

    Matrix products are written right to left, i.e. the rightmost factor acts
    first, matching the usual operator notation.
    """
    S_, T_ = bell.S, bell.T
    bcnot = _seq([BOp(bell.BCNOT)])
    bswap = _seq([BOp(bell.BSWAP)])
    R = lambda k, sg, p: _seq([_rot(k, sg, p)])  # noqa: E731
    biswap = _seq([BOp(bell.BISWAP)])
    forward = bswap @ R(BKind.BY, -1, S_) @ biswap @ R(BKind.BZ, 1, S_) @ R(BKind.BZ, 1, T_) @ R(BKind.BY, 1, T_)
    naive_reverse = R(BKind.BY, 1, T_) @ R(BKind.BZ, 1, S_) @ R(BKind.BZ, 1, T_) @ biswap @ R(BKind.BY, -1, S_) @ bswap
    reverse_1 = R(BKind.BY, 1, T_) @ R(BKind.BZ, -1, S_) @ R(BKind.BZ, 1, T_) @ biswap @ R(BKind.BY, -1, S_) @ bswap
    reverse_2 = R(BKind.BY, -1, T_) @ R(BKind.BZ, 1, S_) @ R(BKind.BZ, 1, T_) @ biswap @ R(BKind.BY, 1, S_) @ bswap
    return {
        "forward": (bcnot, forward),
        "reverse_naive": (bcnot, naive_reverse),
        "reverse_zs_minus": (bcnot, reverse_1),
        "reverse_ys_plus": (bcnot, reverse_2),
        "forward_sequence": (bswap @ bcnot, _seq(replacement_sequence(S_, T_, "forward"))),
        "reversed_sequence": (bswap @ bcnot, _seq(replacement_sequence(S_, T_, "reversed"))),
    }


def check_replacement_forms(tol: float = gates.TOL) -> dict[str, gates.PhaseMatch]:
    return {k: gates.equal_up_to_global_phase(a, b, tol) for k, (a, b) in replacement_forms().items()}


# ---------------------------------------------------------------------------
# random circuits for property tests


def random_bcnot_circuit(rng: random.Random, n_pairs: int = 2, n_ops: int = 6) -> Circuit:
    """BCNOTs mixed with bilateral rotations, for equivalence sweeps."""
    ops: list[Op] = []
    for _ in range(n_ops):
        if rng.random() < 0.5 and n_pairs >= 2:
            s, t = rng.sample(range(n_pairs), 2)
            ops.append(BOp(BilateralOp(BKind.BCNOT, (s, t))))
        else:
            kind = rng.choice(bell.ROTATION_KINDS)
            ops.append(_rot(kind, rng.choice((1, -1)), rng.randrange(n_pairs)))
    return Circuit(n_pairs, ops)
