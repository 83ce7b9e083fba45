"""Named pass/fail checks over every exact property the package claims."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import bell, bellgen, gates, purify, reference_tables, rewrite
from .bell import LABELS, BellLabel, BellProduct, PhasedBell, TableKind

PHASE_TOL = 1e-9


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    residual: float = 0.0
    detail: str = ""

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        extra = f"  {self.detail}" if self.detail else ""
        return f"{tag}  {self.name}  residual={self.residual:.3e}{extra}"


# ---------------------------------------------------------------------------
# expectation files

def _label(text: str) -> BellLabel:
    return BellLabel.parse(text)


def _enc_entry(e) -> dict:
    ph, s, t = e
    return {"phase": [ph.real, ph.imag], "S": s.symbol, "T": t.symbol}


def _dec_entry(d) -> reference_tables.Entry:
    return complex(*d["phase"]), _label(d["S"]), _label(d["T"])


def expectations_to_json() -> str:
    rot = [{"op": bell.rotation_name(a, s),
            "entries": {l.symbol: {"phase": [ph.real, ph.imag], "label": out.symbol}
                        for l, (ph, out) in reference_tables.ROTATIONS[(a, s)].items()}}
           for a, s in bell.ROTATION_ROWS]

    def pairs(table):
        return [{"initial": [k[0].symbol, k[1].symbol],
                 "entries": {c: _enc_entry(e) for c, e in row.items()}}
                for k, row in table.items()]

    return json.dumps({"ROTATIONS": rot,
                       "DEUTSCH_REPLACEMENT": pairs(reference_tables.DEUTSCH_REPLACEMENT),
                       "BENNETT": pairs(reference_tables.BENNETT)}, indent=2)


@dataclass
class Expectations:
    rotations: dict
    deutsch: dict
    bennett: dict


def default_expectations() -> Expectations:
    return Expectations(reference_tables.ROTATIONS, reference_tables.DEUTSCH_REPLACEMENT,
                        reference_tables.BENNETT)


def expectations_from_json(text: str) -> Expectations:
    d = json.loads(text)
    rot = {}
    for a, s in bell.ROTATION_ROWS:
        row = next(r for r in d["ROTATIONS"] if r["op"] == bell.rotation_name(a, s))
        rot[(a, s)] = {_label(k): (complex(*v["phase"]), _label(v["label"]))
                       for k, v in row["entries"].items()}

    def pairs(rows):
        return {(_label(r["initial"][0]), _label(r["initial"][1])):
                {c: _dec_entry(e) for c, e in r["entries"].items()} for r in rows}

    return Expectations(rot, pairs(d["DEUTSCH_REPLACEMENT"]), pairs(d["BENNETT"]))


# ---------------------------------------------------------------------------
# individual checks

def _row_name(s: BellLabel, t: BellLabel) -> str:
    return f"{s.symbol}_S {t.symbol}_T"


def check_identities(tol: float = gates.TOL) -> list[CheckResult]:
    out = []
    for c in gates.check_all_identities((*gates.IDENTITIES, *gates.EXTRA_IDENTITIES), tol):
        out.append(CheckResult(f"identity {c.name}", c.holds, c.residual))
    return out


def check_rotation_table(exp: Expectations | None = None) -> CheckResult:
    exp = exp or default_expectations()
    table = bell.generate_table(TableKind.ROTATIONS)
    worst, bad = 0.0, []
    for (axis, sign), row in zip(bell.ROTATION_ROWS, table.rows):
        for lab in LABELS:
            got = row.entries[lab.symbol]
            ph, want = exp.rotations[(axis, sign)][lab]
            if not isinstance(got, PhasedBell) or got.label is not want:
                bad.append(f"{row.name} {lab.symbol}")
                continue
            r = abs(got.phase - ph)
            worst = max(worst, r)
            if r > PHASE_TOL:
                bad.append(f"{row.name} {lab.symbol}")
    return CheckResult("table rotations", not bad, worst, "; ".join(bad))


def _compare_pairs(table: bell.BellTable, expected: dict, phase_cols) -> tuple[list[str], float]:
    bad, worst = [], 0.0
    for row in table.rows:
        key = tuple(row.initial)
        want_row = expected[key]
        for col, got in row.entries.items():
            want = want_row.get(col)
            name = f"{_row_name(*key)} step {col}"
            if want is None:
                continue
            if not isinstance(got, BellProduct) or got.labels != (want[1], want[2]):
                bad.append(name)
                continue
            if col in phase_cols:
                r = abs(got.phase - want[0])
                worst = max(worst, r)
                if r > PHASE_TOL:
                    bad.append(name + " phase")
    return bad, worst


def check_deutsch_table(exp: Expectations | None = None) -> CheckResult:
    exp = exp or default_expectations()
    table = bell.generate_table(TableKind.DEUTSCH_REPLACEMENT)
    bad, worst = _compare_pairs(table, exp.deutsch, set(bell.DEUTSCH_STEPS))
    return CheckResult("table replacement sequence", not bad, worst, "; ".join(bad))


def check_bcnot_relabel(tol: float = gates.TOL) -> CheckResult:
    m = bell.check_bcnot_replacement(tol)
    return CheckResult("replacement equals BSWAP.BCNOT (operator)", m.equal, m.residual)


def check_bennett_table(exp: Expectations | None = None) -> CheckResult:
    """Step (i) labels and phases; branch columns by label."""
    exp = exp or default_expectations()
    table = bell.generate_table(TableKind.BENNETT)
    bad, worst = _compare_pairs(table, exp.bennett, {"i"})
    return CheckResult("table BiSWAP round", not bad, worst, "; ".join(bad))


def branch_bookkeeping(branch: str) -> dict[tuple[BellLabel, BellLabel], tuple[int, int, bool]]:
    """Rows passing the same-parity test on T, with F/q exponents and whether S ends as Phi-."""
    center = purify.VARIANT_CENTER[branch[-1]]
    table = bell.generate_table(TableKind.BENNETT)
    out = {}
    for row in table.rows:
        e = row.entries[branch]
        if not isinstance(e, BellProduct) or e.t.label.bits[0] != 0:
            continue
        a = sum(l is center for l in row.initial)
        out[tuple(row.initial)] = (a, 2 - a, e.s.label is BellLabel.PHI_MINUS)
    return out


def check_bennett_bookkeeping(tol: float = 1e-12) -> CheckResult:
    worst, bad = 0.0, []
    for branch, want in reference_tables.BENNETT_WEIGHTS.items():
        got = branch_bookkeeping(branch)
        if got != want:
            bad.append(f"{branch} weights")
        for k in range(11):
            F = round(0.5 + 0.05 * k, 2)
            q = (1 - F) / 3
            num = sum(F**a * q**b for a, b, boxed in got.values() if boxed)
            den = sum(F**a * q**b for a, b, _ in got.values())
            ref = purify.bennett_round_analytic(F)
            orc = purify.bennett_round_oracle_werner(F, branch[-1])
            r = max(abs(num / den - ref.reference_fidelity), abs(den - ref.pass_probability),
                    abs(orc.reference_fidelity - ref.reference_fidelity),
                    abs(orc.pass_probability - ref.pass_probability))
            worst = max(worst, r)
            if r > tol:
                bad.append(f"{branch} F={F}")
    return CheckResult("boxed-probability bookkeeping", not bad, worst, "; ".join(bad))


def check_cpf_rule(tol: float = gates.TOL) -> CheckResult:
    u = bell.bilateral_unitary(bell.BCPF)
    worst, bad = 0.0, []
    for s in LABELS:
        for t in LABELS:
            want = bell.cpf_rule(s, t)
            got = bell.classify_bell_product(u @ bell.two_pair_state(s, t))
            if not isinstance(got, BellProduct) or got.labels != want.labels:
                bad.append(_row_name(s, t))
                continue
            r = abs(got.phase - want.phase)
            worst = max(worst, r)
            if r > tol:
                bad.append(_row_name(s, t) + " phase")
    return CheckResult("CPF rule vs operator", not bad, worst, "; ".join(bad))


def check_cpf_round(tol: float = 1e-12) -> CheckResult:
    worst = 0.0
    for k in range(11):
        F = round(0.5 + 0.05 * k, 2)
        a, b = purify.cpf_round(F), purify.bennett_round_analytic(F)
        worst = max(worst, abs(a.reference_fidelity - b.reference_fidelity),
                    abs(a.pass_probability - b.pass_probability))
    return CheckResult("CPF round equals closed form", worst < tol, worst)


def check_pulse_error(tol: float = 1e-10) -> CheckResult:
    worst = 0.0
    for eps in (0.0, 0.02, 0.05, 0.1):
        err = purify.PulseError(eps)
        for k in range(11):
            F = round(0.5 + 0.05 * k, 2)
            Fp, den = purify.bennett_map(F, err)
            for v in ("a", "b"):
                o = purify.bennett_round_oracle_werner(F, v, err)
                worst = max(worst, abs(o.reference_fidelity - Fp), abs(o.pass_probability - den))
    return CheckResult("pulse-error oracle vs closed form", worst < tol, worst)


def check_recipes(tol: float = gates.TOL) -> list[CheckResult]:
    out = []
    for r in bellgen.all_recipes():
        f = bellgen.execute_recipe(r).fidelity_to_target
        c = bellgen.recipe_counts(r)
        budget = 2 if r.entangler is bellgen.Entangler.ISWAP else 3
        ok = abs(1 - f) < tol and c.two_qubit_gates == 1 and c.rotation_layers == budget
        out.append(CheckResult(f"Bell recipe {r.entangler.value} -> {r.target.symbol}", ok, abs(1 - f),
                               f"layers={c.rotation_layers}"))
    return out


def check_rewrites(tol: float = 1e-10) -> list[CheckResult]:
    out = []
    cases = [("hashing n=2 s=" + s, rewrite.hashing_template(2, s))
             for s in ("0100", "0101", "1111", "1011")]
    cases.append(("breeding 2", rewrite.breeding_template(2)))
    for name, c in cases:
        for direction in ("forward", "reversed", "alternate"):
            rw = rewrite.rewrite(c, direction)
            e = rewrite.check_rewrite_equivalence(c, rw, tol)
            counts = rewrite.gate_counts(rw)
            clean = not any(counts.get(k, 0) for k in rewrite.FORBIDDEN_AFTER_REWRITE)
            out.append(CheckResult(f"rewrite {name} {direction}", e.equivalent and clean, e.residual))
    return out


def check_parity(tol: float = 1e-9) -> CheckResult:
    bad = []
    for s in range(16):
        sb = format(s, "04b")
        if s == 0:
            continue
        c = rewrite.hashing_template(2, sb)
        circuits = [c, rewrite.rewrite(c, "forward"), rewrite.rewrite(c, "reversed")]
        for x in range(16):
            xb = format(x, "04b")
            want = rewrite.hashing_parity(xb, sb)
            for k, cc in enumerate(circuits):
                if rewrite.simulate_parity(cc, xb, tol) != want:
                    bad.append(f"x={xb} s={sb} circuit {k}")
    return CheckResult("hashing parity oracle vs simulation", not bad, 0.0, "; ".join(bad[:5]))


def run_all(tol: float | None = None, expectations: Expectations | None = None) -> list[CheckResult]:
    """Every check, with ``tol`` overriding the exact-match tolerances when given."""
    t12 = gates.TOL if tol is None else tol
    t10 = 1e-10 if tol is None else tol
    steps: list[Callable[[], list[CheckResult] | CheckResult]] = [
        lambda: check_identities(t12),
        lambda: check_rotation_table(expectations),
        lambda: check_deutsch_table(expectations),
        lambda: check_bcnot_relabel(t12),
        lambda: check_bennett_table(expectations),
        lambda: check_bennett_bookkeeping(t12),
        lambda: check_cpf_rule(t12),
        lambda: check_cpf_round(t12),
        lambda: check_pulse_error(t10),
        lambda: check_recipes(t12),
        lambda: check_rewrites(t10),
        lambda: check_parity(),
    ]
    out = []
    for f in steps:
        r = f()
        out.extend(r if isinstance(r, list) else [r])
    return out
