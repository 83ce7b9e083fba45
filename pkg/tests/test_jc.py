import math

import pytest

from iswap_purify import jc
from iswap_purify.errors import InvalidArgument, SingularDetuning
from iswap_purify.jc import JCParams


def test_effective_symmetric():
    p = JCParams.symmetric(0.05)
    d = 2 * math.pi * 1e9
    assert jc.jc_effective(p).J == pytest.approx((0.05 * d) ** 2 / (2 * d))


def test_effective_device_example():
    # g/2pi = 200 MHz, Delta/2pi = 2 GHz
    p = JCParams.symmetric(0.1, delta_hz=2e9)
    assert jc.jc_effective(p).J / (2 * math.pi) == pytest.approx(10e6)


def test_validation_within_two_percent():
    v = jc.jc_validate(JCParams.symmetric(0.05))
    assert v.relative_error < 0.02
    assert v.max_top_level_population < 1e-6


def test_error_grows_with_coupling():
    errs = [jc.jc_validate(JCParams.symmetric(a)).relative_error for a in (0.02, 0.05, 0.10)]
    assert errs[0] < errs[1] < errs[2]
    # leading correction is 2 (chi / Delta)^2
    for a, e in zip((0.02, 0.05, 0.10), errs):
        assert e == pytest.approx(2 * a * a, rel=0.1)


def test_negative_detuning():
    v = jc.jc_validate(JCParams.symmetric(0.05, delta_hz=-1e9))
    assert v.relative_error < 0.02


def test_zero_coupling():
    v = jc.jc_validate(JCParams.symmetric(0.0))
    assert v.exchange_frequency_measured == 0 and v.relative_error == 0


def test_resonant_rejected():
    with pytest.raises(SingularDetuning):
        JCParams(1.0, 1.0, 0.5, 0.01, 0.01)


@pytest.mark.parametrize("kw", [dict(alpha=0.3), dict(alpha=0.05, cutoff=1)])
def test_guards(kw):
    with pytest.raises(InvalidArgument):
        JCParams.symmetric(**kw)


def test_opposite_detunings_cancel():
    d = 2 * math.pi * 1e9
    p = JCParams(2 * math.pi * 5e9, 2 * math.pi * 4e9, 2 * math.pi * 6e9, 0.05 * d, 0.05 * d)
    assert jc.jc_effective(p).J == 0


def test_explicit_window():
    p = JCParams.symmetric(0.05)
    period = math.pi / (2 * jc.jc_effective(p).J)
    v = jc.jc_validate(p, evolution_time=3 * period, steps=3000)
    assert v.relative_error < 0.02
    assert v.times[-1] < 3 * period


def test_bad_window():
    with pytest.raises(InvalidArgument):
        jc.jc_validate(JCParams.symmetric(0.05), evolution_time=-1.0)
