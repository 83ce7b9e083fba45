import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from iswap_purify import gates
from iswap_purify.errors import InvalidArgument
from iswap_purify.gates import GateKind, GateSpec

angles = st.floats(-2 * math.pi, 2 * math.pi, allow_nan=False)


def random_unitary(rng, n):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / abs(np.diag(r)))


@given(angles)
def test_xy_evolution_is_unitary(theta):
    assert gates.is_unitary(gates.xy_evolution(theta))


@given(angles)
def test_heisenberg_evolution_is_unitary(phi):
    assert gates.is_unitary(gates.heisenberg_evolution(phi))


def test_iswap_matrix():
    want = np.array([[1, 0, 0, 0], [0, 0, 1j, 0], [0, 1j, 0, 0], [0, 0, 0, 1]])
    assert np.allclose(gates.ISWAP, want, atol=1e-15)


def test_sqrt_swap_squares_to_swap():
    assert np.abs(gates.SQRT_SWAP @ gates.SQRT_SWAP - gates.SWAP).max() < 1e-15


def test_sqrt_swap_acts_on_singlet_with_minus_i():
    singlet = np.array([0, 1, -1, 0]) / math.sqrt(2)
    assert np.allclose(gates.SQRT_SWAP @ singlet, -1j * singlet)


@given(st.sampled_from("xyz"), angles)
def test_rotation_inverse(axis, a):
    u = gates.rotation(axis, a) @ gates.rotation(axis, -a)
    assert np.allclose(u, np.eye(2), atol=1e-13)


def test_rotation_sign_convention():
    # exp(+i a/2 sigma): a quarter turn about x sends |0> to (|0> + i|1>)/sqrt(2)
    v = gates.rotation("x", math.pi / 2) @ np.array([1, 0])
    assert np.allclose(v, np.array([1, 1j]) / math.sqrt(2))


@pytest.mark.parametrize("name", gates.IDENTITIES + gates.EXTRA_IDENTITIES)
def test_identities_hold(name):
    c = gates.check_identity(name)
    assert c.holds and c.residual < 1e-12
    assert abs(abs(c.phase) - 1) < 1e-12


def test_fitted_phases():
    phases = {c.name: c.phase for c in gates.check_all_identities(gates.IDENTITIES + gates.EXTRA_IDENTITIES)}
    assert phases["CNOT_FROM_ISWAP"] == pytest.approx(np.exp(-1j * math.pi / 4))
    assert phases["CPF_FROM_SQRTSWAP"] == pytest.approx(-1)
    assert phases["CNOT_REVERSED"] == pytest.approx(-1j)


def test_unknown_identity():
    with pytest.raises(InvalidArgument):
        gates.check_identity("NOPE")


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1), st.floats(-math.pi, math.pi))
def test_global_phase_fit_recovers_phase(seed, phi):
    u = random_unitary(np.random.default_rng(seed), 4)
    m = gates.equal_up_to_global_phase(np.exp(1j * phi) * u, u)
    assert m.equal
    assert m.phase == pytest.approx(np.exp(1j * phi), abs=1e-12)


def test_global_phase_fit_rejects_different():
    m = gates.equal_up_to_global_phase(gates.CNOT, gates.CPF)
    assert not m.equal and m.residual > 0.5


def test_shape_mismatch_rejected():
    with pytest.raises(InvalidArgument):
        gates.equal_up_to_global_phase(np.eye(2), np.eye(4))


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1), st.permutations(range(3)))
def test_apply_matches_embed(seed, perm):
    rng = np.random.default_rng(seed)
    u = random_unitary(rng, 4)
    psi = rng.normal(size=8) + 1j * rng.normal(size=8)
    qs = perm[:2]
    assert np.allclose(gates.apply(u, psi, qs, 3), gates.embed(u, qs, 3) @ psi)


def test_embed_cnot_reversed_wires():
    # CNOT with control on the second wire
    u = gates.embed(gates.CNOT, (1, 0), 2)
    assert np.allclose(u, gates.kron(gates.HADAMARD, gates.HADAMARD) @ gates.CNOT
                       @ gates.kron(gates.HADAMARD, gates.HADAMARD))


def test_build_gate_matches_constants():
    assert np.allclose(gates.build_gate(GateSpec(GateKind.ISWAP)), gates.ISWAP)
    assert np.allclose(gates.build_gate(GateSpec(GateKind.XY, math.pi / 2)), gates.ISWAP)
    assert np.allclose(gates.build_gate(GateSpec(GateKind.SQRTSWAP)), gates.SQRT_SWAP)
    assert np.allclose(gates.build_gate(GateSpec(GateKind.PX)), 1j * gates.X)


@pytest.mark.parametrize("kw", [
    dict(kind=GateKind.XY),
    dict(kind=GateKind.ROT, param=1.0, axis="w"),
    dict(kind=GateKind.ROT, param=float("nan"), axis="x"),
])
def test_gate_spec_validation(kw):
    with pytest.raises(InvalidArgument):
        GateSpec(**kw)


def test_nonfinite_evolution_rejected():
    with pytest.raises(InvalidArgument):
        gates.xy_evolution(float("inf"))


def test_compose_empty():
    with pytest.raises(InvalidArgument):
        gates.compose([])


def test_compose_is_matrix_product_order():
    a, b = gates.rot("x", 0.3, 0), gates.CNOT
    assert np.allclose(gates.compose([a, b]), a @ b)
