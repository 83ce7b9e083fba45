import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from iswap_purify import gates, purify
from iswap_purify.bell import BellLabel
from iswap_purify.errors import InvalidArgument
from iswap_purify.purify import BellDiagonal, PulseError

F_GRID = [round(0.5 + 0.05 * k, 2) for k in range(11)]
EPS = [0.0, 0.02, 0.05, 0.1]

fidelities = st.floats(0.25, 1.0)
simplex = st.lists(st.floats(0.01, 1.0), min_size=4, max_size=4).map(lambda w: [x / sum(w) for x in w])


def test_werner_weights():
    w = purify.werner(0.7)
    assert w.weights == pytest.approx((0.7, 0.1, 0.1, 0.1))
    assert purify.werner(0.7, BellLabel.PSI_MINUS).weight(BellLabel.PSI_MINUS) == pytest.approx(0.7)


@pytest.mark.parametrize("w", [(0.5, 0.5, 0.5, -0.5), (0.2, 0.2, 0.2, 0.2), (float("nan"), 0, 0, 1)])
def test_bell_diagonal_validation(w):
    with pytest.raises(InvalidArgument):
        BellDiagonal(*w)


@given(simplex)
def test_bell_diagonal_density_roundtrip(w):
    d = BellDiagonal(*w)
    assert gates.is_density(d.density())
    assert BellDiagonal.from_density(d.density()).weights == pytest.approx(d.weights, abs=1e-12)


def test_closed_form_at_07():
    # F = 0.7, q = 0.1: (0.49 + 0.01) / (0.49 + 0.14 + 0.05)
    r = purify.bennett_round_analytic(0.7)
    assert r.reference_fidelity == pytest.approx(0.5 / 0.68, abs=1e-15)
    assert r.pass_probability == pytest.approx(0.68, abs=1e-15)


def test_pulse_error_coefficients():
    e = PulseError(0.1)
    assert e.k1 + e.k2 == pytest.approx(1)
    assert PulseError(0).k3 == 1


@pytest.mark.parametrize("eps", [math.pi / 4, -1.0, float("inf")])
def test_pulse_error_guard(eps):
    with pytest.raises(InvalidArgument):
        PulseError(eps)


@pytest.mark.parametrize("variant", ["a", "b"])
@pytest.mark.parametrize("eps", EPS)
def test_oracle_matches_closed_form(variant, eps):
    err = PulseError(eps)
    for F in F_GRID:
        Fp, den = purify.bennett_map(F, err)
        o = purify.bennett_round_oracle_werner(F, variant, err)
        assert o.reference_fidelity == pytest.approx(Fp, abs=1e-12)
        assert o.pass_probability == pytest.approx(den, abs=1e-12)


def test_kept_state_is_bell_diagonal():
    o = purify.bennett_round_oracle_werner(0.8, "a")
    rho = o.kept_density
    diag = BellDiagonal.from_density(rho).density()
    assert np.abs(rho - diag).max() < 1e-12


def test_both_pairs_measure_the_same():
    agree = purify.measured_pair_agreement()
    assert agree == {"target": True, "source": True}
    assert purify.default_measured_pair() == "target"


def test_no_error_recovers_ideal():
    for F in F_GRID:
        assert purify.bennett_map(F, PulseError(0))[0] == pytest.approx(
            purify.bennett_round_analytic(F).reference_fidelity, abs=1e-15)


@given(simplex, st.booleans())
@settings(max_examples=25, deadline=None)
def test_deutsch_round_matches_recursion(w, use_biswap):
    A, B, C, D = w
    rho = BellDiagonal(*w).density()
    r = purify.deutsch_round_oracle(rho, rho, use_biswap)
    N = (A + B) ** 2 + (C + D) ** 2
    want = ((A * A + B * B) / N, 2 * C * D / N, (C * C + D * D) / N, 2 * A * B / N)
    assert r.pass_probability == pytest.approx(N, abs=1e-12)
    assert r.kept.weights == pytest.approx(want, abs=1e-12)


def test_twirl_group_size():
    assert len(purify.twirl_group()) == 24


def test_twirl_makes_werner():
    rho = BellDiagonal(0.7, 0.2, 0.05, 0.05).density()
    w = purify.twirl_to_werner(rho)
    assert w.weights == pytest.approx((0.7, 0.1, 0.1, 0.1), abs=1e-12)


@given(simplex)
@settings(max_examples=20, deadline=None)
def test_twirl_preserves_reference_weight(w):
    d = BellDiagonal(*w)
    out = purify.twirl_to_werner(d.density(), BellLabel.PHI_PLUS)
    assert out.A == pytest.approx(d.A, abs=1e-12)
    assert out.B == pytest.approx(out.C, abs=1e-12) and out.C == pytest.approx(out.D, abs=1e-12)


@pytest.mark.parametrize("F", F_GRID)
def test_cpf_round_equals_closed_form(F):
    a, b = purify.cpf_round(F), purify.bennett_round_analytic(F)
    assert a.reference_fidelity == pytest.approx(b.reference_fidelity, abs=1e-12)
    assert a.pass_probability == pytest.approx(b.pass_probability, abs=1e-12)


def test_iterate_reaches_target():
    t = purify.iterate(0.7, target_fidelity=0.99)
    assert t.status == "reached_target"
    Fs = [p.F for p in t.points]
    assert all(b > a for a, b in zip(Fs, Fs[1:]))
    assert Fs[-1] >= 0.99 and Fs[-2] < 0.99
    assert t.points[0].pass_probability == 1 and t.points[0].expected_pairs == 1


def test_iterate_expected_pairs():
    t = purify.iterate(0.7, max_rounds=2)
    p1, p2 = t.points[1].pass_probability, t.points[2].pass_probability
    assert t.points[2].expected_pairs == pytest.approx(4 / (p1 * p2))
    assert t.status == "max_rounds"


@pytest.mark.parametrize("F0,eps,status", [
    (0.5, 0.0, "non_convergent"),
    (0.505, 0.05, "non_convergent"),
    (1.0, 0.0, "reached_target"),
])
def test_iterate_edge_cases(F0, eps, status):
    t = purify.iterate(F0, PulseError(eps))
    assert t.status == status
    assert len(t.points) == 1


def test_iterate_bad_target():
    with pytest.raises(InvalidArgument):
        purify.iterate(0.7, target_fidelity=1.5)


def test_breakeven_is_fixed_point():
    err = PulseError(0.05)
    b = purify.breakeven_fidelity(err)
    assert purify.bennett_map(b, err)[0] == pytest.approx(b, abs=1e-14)
    assert purify.bennett_map(b - 1e-3, err)[0] < b - 1e-3
    assert purify.bennett_map(b + 1e-3, err)[0] > b + 1e-3


@pytest.mark.parametrize("eps,tol", [(1e-3, 1e-3), (1e-2, 3e-3), (2e-2, 1e-2)])
def test_breakeven_quadratic_coefficient(eps, tol):
    # (b - 1/2) / eps^2 tends to 3 as the pulse error vanishes
    b = purify.breakeven_fidelity(PulseError(eps))
    assert (b - 0.5) / eps**2 == pytest.approx(3, abs=tol)


def test_breakeven_grows_with_error():
    bs = [purify.breakeven_fidelity(PulseError(e)) for e in (0.01, 0.02, 0.05, 0.1)]
    assert all(b > a for a, b in zip(bs, bs[1:]))


def test_breakeven_absent_for_large_error():
    with pytest.raises(InvalidArgument):
        purify.breakeven_fidelity(PulseError(0.3))


def test_pure_input_passes_with_certainty():
    phi = BellDiagonal(1, 0, 0, 0).density()
    r = purify.bennett_round_oracle(phi, phi, "a")
    assert r.pass_probability == pytest.approx(1, abs=1e-12)
    assert r.reference_fidelity == pytest.approx(1, abs=1e-12)
    assert r.reference is BellLabel.PHI_MINUS


def test_twirl_fixed_points():
    w = purify.werner(0.8)
    assert purify.twirl_to_werner(w.density()).weights == pytest.approx(w.weights, abs=1e-12)
    pure = BellDiagonal(1, 0, 0, 0).density()
    assert purify.twirl_to_werner(pure).weights == pytest.approx((1, 0, 0, 0), abs=1e-12)
