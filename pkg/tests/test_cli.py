import json

import pytest

from iswap_purify import cli, purify, verify


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    assert "FAIL" not in out


def test_verify_tiny_tolerance_fails(capsys):
    code, out, _ = run(capsys, "verify", "--tol", "1e-20")
    assert code == 1
    assert "FAIL  identity CNOT_FROM_ISWAP" in out


def test_verify_corrupted_expectations(capsys, tmp_path):
    d = json.loads(verify.expectations_to_json())
    row = next(r for r in d["DEUTSCH_REPLACEMENT"] if r["initial"] == ["Psi+", "Phi-"])
    row["entries"]["iii"]["S"] = "Phi+"
    f = tmp_path / "expect.json"
    f.write_text(json.dumps(d))
    code, out, _ = run(capsys, "verify", "--expect", str(f))
    assert code == 1
    assert "Psi+_S Phi-_T step iii" in out


def test_verify_dumped_expectations_pass(capsys, tmp_path):
    f = tmp_path / "e.json"
    assert run(capsys, "verify", "--dump-expectations", str(f))[0] == 0
    assert run(capsys, "verify", "--expect", str(f))[0] == 0


def test_purify_csv(capsys):
    code, out, err = run(capsys, "purify", "--f0", "0.7", "--eps", "0")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "F0,eps,round,F,pass_prob,expected_pairs"
    Fs = [float(l.split(",")[3]) for l in lines[1:]]
    assert all(b > a for a, b in zip(Fs, Fs[1:])) and Fs[-1] >= 0.99
    assert "reached_target" in err
    # 17 significant digits survive a float round trip
    assert float(lines[2].split(",")[3]) == purify.bennett_round_analytic(0.7).reference_fidelity


def test_purify_fixed_point(capsys):
    code, out, err = run(capsys, "purify", "--f0", "0.5")
    assert out.splitlines()[1:] == ["0.5,0,0,0.5,1,1"]
    assert "non_convergent" in err


def test_purify_eps_sweep(capsys):
    _, out, _ = run(capsys, "purify", "--f0", "0.6", "--eps", "0,0.05,0.1", "--max-rounds", "3")
    final = {}
    for l in out.splitlines()[1:]:
        f0, eps, k, F, *_ = l.split(",")
        final[float(eps)] = float(F)
    assert final[0.0] > final[0.05] > final[0.1]


@pytest.mark.parametrize("argv", [
    ["purify", "--f0", "abc"],
    ["purify", "--f0", "1.5"],
    ["timing", "--preset", "nope"],
    ["timing"],
    ["bogus"],
])
def test_usage_errors(capsys, argv):
    try:
        code = cli.main(argv)
    except SystemExit as e:
        code = e.code
    capsys.readouterr()
    assert code == 2


def test_rewrite_files(capsys, tmp_path):
    src = tmp_path / "c.txt"
    src.write_text("PAIRS 2\nBCNOT P0 P1\nMEASZ A1\nMEASZ B1\n")
    out, rep = tmp_path / "o.txt", tmp_path / "r.json"
    assert run(capsys, "rewrite", "--in", str(src), "--out", str(out), "--report", str(rep))[0] == 0
    assert "BISWAP P0 P1" in out.read_text()
    r = json.loads(rep.read_text())
    assert r["after"]["gates"]["BISWAP"] == 1 and "BCNOT" not in r["after"]["gates"]


def test_rewrite_parse_error(capsys, tmp_path):
    src = tmp_path / "c.txt"
    src.write_text("PAIRS 2\nBCNOT P0 P1\nWHAT\n")
    code, _, err = run(capsys, "rewrite", "--in", str(src))
    assert code == 2 and "line 3" in err


def test_rewrite_empty(capsys, tmp_path):
    src = tmp_path / "c.txt"
    src.write_text("")
    assert run(capsys, "rewrite", "--in", str(src))[1] == ""


def test_timing(capsys):
    code, out, _ = run(capsys, "timing", "--preset", "sc-charge", "--format", "json",
                       "--measurement-time", "0")
    doc = json.loads(out)
    assert doc["report"]["tau_puri_biswap"] == pytest.approx(6.75e-9)
    assert doc["rounds_within_coherence"]["biswap"] == 74


def test_timing_preset_file(capsys, tmp_path):
    f = tmp_path / "p.json"
    f.write_text(json.dumps({"name": "x", "convention": "DIRECT",
                             "iswap_time": {"value": 30, "unit": "ps"},
                             "rotation_time": {"value": 10, "unit": "ps"}}))
    code, out, _ = run(capsys, "timing", "--preset-file", str(f), "--format", "text")
    assert code == 0 and "70 ps" in out


def test_tables(capsys):
    code, out, _ = run(capsys, "tables", "--which", "rotations")
    assert code == 0 and "BX+" in out
    code, out, _ = run(capsys, "tables", "--format", "json")
    assert set(json.loads(out)) == {"rotations", "replacement", "biswap-round"}


def test_jc(capsys):
    code, out, _ = run(capsys, "jc", "--params", '{"alpha": 0.05}', "--validate")
    doc = json.loads(out)
    assert code == 0 and doc["passed"] and doc["relative_error"] < 0.02


def test_jc_failing_tolerance(capsys):
    code, _, _ = run(capsys, "jc", "--params", '{"alpha": 0.1}', "--validate", "--rtol", "1e-4")
    assert code == 1


def test_jc_bad_params(capsys):
    assert run(capsys, "jc", "--params", '{"alpha": 0.5}')[0] == 2
