import json
import math

import pytest
from hypothesis import given, strategies as st

from iswap_purify import hardware
from iswap_purify.errors import InvalidArgument
from iswap_purify.hardware import Convention, HardwarePreset, Quantity

NS, PS = 1e-9, 1e-12


def test_quantity_units():
    assert Quantity(1, "GHz_cyclic").angular() == pytest.approx(2 * math.pi * 1e9)
    assert Quantity(1, "meV").cyclic() == pytest.approx(1e-3 / 4.135667696e-15)
    assert Quantity(1, "meV").angular() == pytest.approx(1e-3 / 6.582119569e-16)
    assert Quantity(5.0, "rad_per_s").cyclic() == pytest.approx(5 / (2 * math.pi))


@pytest.mark.parametrize("v,u", [(1, "furlong"), (-1, "Hz_cyclic"), (0, "meV")])
def test_quantity_validation(v, u):
    with pytest.raises(InvalidArgument):
        Quantity(v, u)


def test_presets_listed():
    assert {"sc-charge", "flux", "qd-charge", "qd-cavity"} <= set(hardware.available_presets())


def test_sc_charge():
    r = hardware.protocol_times(hardware.load_preset("sc-charge"))
    assert r.tau_iswap == pytest.approx(6.25 * NS, rel=1e-12)
    assert r.tau_rot == pytest.approx(125 * PS, rel=1e-12)
    assert r.tau_puri_bcnot == pytest.approx(13.125 * NS, rel=1e-12)
    assert r.tau_puri_biswap == pytest.approx(6.75 * NS, rel=1e-12)
    assert r.discrepancies == {}


def test_flux():
    r = hardware.protocol_times(hardware.load_preset("flux"))
    assert r.tau_iswap == pytest.approx(5 * NS, rel=1e-12)
    assert r.tau_puri_bcnot == pytest.approx(10.625 * NS, rel=1e-12)
    assert r.tau_puri_biswap == pytest.approx(5.5 * NS, rel=1e-12)


def test_qd_charge_cyclic():
    r = hardware.protocol_times(hardware.load_preset("qd-charge"))
    assert r.convention == "CYCLIC"
    assert r.tau_puri_bcnot == pytest.approx(85.3 * PS, rel=5e-3)
    assert r.tau_puri_biswap == pytest.approx(48.7 * PS, rel=5e-3)


def test_qd_charge_angular_would_differ():
    p = hardware.load_preset("qd-charge")
    q = HardwarePreset(p.name, Convention.ANGULAR, p.coupling, p.rotation_frequency)
    ratio = hardware.gate_times(p).tau_iswap / hardware.gate_times(q).tau_iswap
    assert ratio == pytest.approx(2 * math.pi)


def test_qd_cavity_flagged():
    r = hardware.protocol_times(hardware.load_preset("qd-cavity"))
    assert r.tau_puri_biswap == pytest.approx(70 * PS, rel=1e-12)
    d = r.discrepancies["tau_puri_biswap"]
    assert d["reference"] == pytest.approx(60 * PS)
    assert d["relative_difference"] > 0.1


@pytest.mark.parametrize("name", ["sc-charge", "flux", "qd-charge", "qd-cavity"])
def test_difference_identities(name):
    r = hardware.protocol_times(hardware.load_preset(name))
    assert r.delta_puri_adv == r.tau_puri_bcnot - r.tau_puri_biswap
    assert r.delta_bell_iswap_adv == r.tau_bell_cnot - r.tau_bell_iswap
    # the advantages equal rot + iswap and 3 rot + iswap
    assert r.delta_puri_adv == pytest.approx(r.tau_rot + r.tau_iswap, rel=1e-12)
    assert r.delta_bell_iswap_adv == pytest.approx(3 * r.tau_rot + r.tau_iswap, rel=1e-12)


@given(st.floats(0.1, 10))
def test_times_scale_inversely(c):
    p = hardware.load_preset("sc-charge")
    a, b = hardware.protocol_times(p), hardware.protocol_times(p.scaled(c))
    assert b.tau_puri_biswap == pytest.approx(a.tau_puri_biswap / c, rel=1e-12)


def test_sqrtswap_fields_only_with_heisenberg():
    p = hardware.load_preset("sc-charge")
    assert hardware.protocol_times(p).tau_sqrtswap is None
    q = HardwarePreset("h", Convention.ANGULAR, p.coupling, p.rotation_frequency,
                       heisenberg_coupling=Quantity(20, "MHz_cyclic"))
    r = hardware.protocol_times(q)
    assert r.tau_sqrtswap == pytest.approx(r.tau_iswap / 2)
    assert r.tau_bell_sqrtswap == pytest.approx(3 * r.tau_rot + r.tau_sqrtswap)
    assert r.delta_bell_sqrtswap_adv == pytest.approx(r.tau_rot + r.tau_sqrtswap)


def test_rounds_within_coherence():
    p = hardware.load_preset("sc-charge")
    assert hardware.rounds_within_coherence(p, measurement_time=0.0) == 74
    assert hardware.rounds_within_coherence(p, "bcnot", measurement_time=0.0) == 38
    with pytest.raises(InvalidArgument):
        hardware.rounds_within_coherence(p)
    with pytest.raises(InvalidArgument):
        hardware.rounds_within_coherence(hardware.load_preset("qd-cavity"), measurement_time=0.0)


def test_unknown_preset():
    with pytest.raises(InvalidArgument):
        hardware.load_preset("nope")


def test_env_dir_takes_priority(tmp_path, monkeypatch):
    d = {"name": "sc-charge", "convention": "ANGULAR",
         "coupling": {"value": 40, "unit": "MHz_cyclic"},
         "rotation_frequency": {"value": 1, "unit": "GHz_cyclic"}}
    (tmp_path / "sc-charge.json").write_text(json.dumps(d))
    monkeypatch.setenv(hardware.PRESET_DIR_ENV, str(tmp_path))
    r = hardware.protocol_times(hardware.load_preset("sc-charge"))
    assert r.tau_iswap == pytest.approx(3.125 * NS)


def test_preset_validation():
    with pytest.raises(InvalidArgument):
        HardwarePreset.from_dict({"name": "x", "convention": "DIRECT"})
    with pytest.raises(InvalidArgument):
        HardwarePreset.from_dict({"name": "x", "convention": "ANGULAR", "bogus": 1})


def test_report_json_deterministic():
    p = hardware.load_preset("flux")
    assert hardware.protocol_times(p).to_json() == hardware.protocol_times(p).to_json()


def test_table_text_rows():
    p = hardware.load_preset("sc-charge")
    t = hardware.table_text(p.name, hardware.protocol_times(p))
    assert "6.75 ns" in t and "13.12 ns" in t


def test_long_measurement_leaves_no_rounds():
    p = hardware.load_preset("sc-charge")
    assert hardware.rounds_within_coherence(p, measurement_time=1e-3) == 0
