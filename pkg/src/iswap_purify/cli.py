"""Command-line front end.  Exit codes: 0 ok, 1 a check failed, 2 bad usage or input."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import bell, hardware, jc, purify, rewrite, verify
from .errors import InvalidArgument

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

CSV_HEADER = ("F0", "eps", "round", "F", "pass_prob", "expected_pairs")


def _g17(x: float) -> str:
    return format(x, ".17g")


def _floats(text: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


@dataclass
class RunConfig:
    f0: list[float] = field(default_factory=lambda: [0.7])
    eps: list[float] = field(default_factory=lambda: [0.0])
    target: float = 0.99
    max_rounds: int = 50

    def __post_init__(self):
        if not self.f0 or not self.eps:
            raise InvalidArgument("sweep grids must be non-empty")
        if self.max_rounds < 0:
            raise InvalidArgument("max-rounds must be nonnegative")


# ---------------------------------------------------------------------------
# commands


def cmd_verify(tol: float | None = None, expect: str | None = None, stream=None) -> int:
    stream = stream or sys.stdout
    exp = None
    if expect is not None:
        try:
            exp = verify.expectations_from_json(Path(expect).read_text(encoding="utf-8"))
        except (KeyError, ValueError, StopIteration) as exc:
            raise InvalidArgument(f"bad expectation file {expect}: {exc!r}") from None
    results = verify.run_all(tol, exp)
    for r in results:
        stream.write(r.line() + "\n")
    failed = [r for r in results if not r.passed]
    stream.write(f"{len(results) - len(failed)}/{len(results)} checks passed\n")
    return EXIT_FAIL if failed else EXIT_OK


def purify_csv(cfg: RunConfig) -> tuple[str, list[purify.Trajectory]]:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    trajs = []
    for eps in cfg.eps:
        err = purify.PulseError(eps)
        for f0 in cfg.f0:
            t = purify.iterate(f0, err, cfg.target, cfg.max_rounds)
            trajs.append(t)
            for p in t.points:
                w.writerow((_g17(f0), _g17(eps), p.round, _g17(p.F), _g17(p.pass_probability),
                            _g17(p.expected_pairs)))
    return buf.getvalue(), trajs


def cmd_purify(cfg: RunConfig, out: str | None = None) -> int:
    text, trajs = purify_csv(cfg)
    _emit(text, out)
    for t in trajs:
        sys.stderr.write(f"F0={_g17(t.F0)} eps={_g17(t.epsilon)} status={t.status} rounds={t.rounds}\n")
    return EXIT_OK


def cmd_rewrite(inp: str, out: str | None = None, report: str | None = None,
                direction: str = "forward") -> int:
    text = sys.stdin.read() if inp == "-" else Path(inp).read_text(encoding="utf-8")
    if not text.strip():
        _emit("", out)
        return EXIT_OK
    before = rewrite.from_text(text)
    after = rewrite.rewrite(before, direction)
    _emit(rewrite.to_text(after), out)
    rep = rewrite.rewrite_report_json(before, after) + "\n"
    if report is None:
        sys.stderr.write(rep)
    else:
        Path(report).write_text(rep, encoding="utf-8")
    return EXIT_OK


def timing_output(p: hardware.HardwarePreset, fmt: str = "both",
                  measurement_time: float | None = None) -> str:
    rep = hardware.protocol_times(p)
    doc = {"preset": p.name, "report": rep.to_dict()}
    meas = measurement_time if measurement_time is not None else p.measurement_time
    if meas is not None and p.dephasing_time is not None:
        doc["rounds_within_coherence"] = {
            proto: hardware.rounds_within_coherence(p, proto, meas) for proto in ("biswap", "bcnot")
        }
    parts = []
    if fmt in ("json", "both"):
        parts.append(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    if fmt in ("text", "both"):
        parts.append(hardware.table_text(p.name, rep))
    return "\n".join(parts)


def cmd_timing(preset: str | None = None, preset_file: str | None = None, fmt: str = "both",
               measurement_time: float | None = None, out: str | None = None) -> int:
    if (preset is None) == (preset_file is None):
        raise InvalidArgument("give exactly one of --preset and --preset-file")
    p = hardware.load_preset(preset) if preset else hardware.load_preset_file(preset_file)
    _emit(timing_output(p, fmt, measurement_time), out)
    return EXIT_OK


_TABLES = {"rotations": bell.TableKind.ROTATIONS,
           "replacement": bell.TableKind.DEUTSCH_REPLACEMENT,
           "biswap-round": bell.TableKind.BENNETT}


def tables_output(which: str, fmt: str) -> str:
    names = list(_TABLES) if which == "all" else [which]
    if fmt == "json":
        return json.dumps({n: bell.generate_table(_TABLES[n]).to_dict() for n in names}, indent=2) + "\n"
    parts = []
    for n in names:
        t = bell.generate_table(_TABLES[n])
        body = bell.rotation_table_text(t) if t.kind is bell.TableKind.ROTATIONS else t.to_text()
        parts.append(f"# {n}\n{body}")
    return "\n".join(parts)


def cmd_tables(which: str = "all", fmt: str = "text", out: str | None = None) -> int:
    _emit(tables_output(which, fmt), out)
    return EXIT_OK


def jc_params_from_dict(d: dict) -> jc.JCParams:
    """Either ``alpha`` (symmetric, with optional fq_hz, delta_hz) or explicit rad/s fields."""
    d = dict(d)
    cutoff = int(d.pop("cutoff", 5))
    if "alpha" in d:
        kw = {k: float(d.pop(k)) for k in ("fq_hz", "delta_hz") if k in d}
        alpha = float(d.pop("alpha"))
        if d:
            raise InvalidArgument(f"unknown fields {sorted(d)}")
        return jc.JCParams.symmetric(alpha, cutoff=cutoff, **kw)
    try:
        return jc.JCParams(cutoff=cutoff, **{k: float(v) for k, v in d.items()})
    except TypeError as exc:
        raise InvalidArgument(str(exc)) from None


def cmd_jc(params: str, validate: bool = False, rtol: float = 0.02, out: str | None = None) -> int:
    src = params
    if not params.lstrip().startswith("{"):
        src = Path(params).read_text(encoding="utf-8")
    try:
        p = jc_params_from_dict(json.loads(src))
    except json.JSONDecodeError as exc:
        raise InvalidArgument(f"bad JSON parameters: {exc}") from None
    eff = jc.jc_effective(p)
    doc = {"J_effective": eff.J, "omega_q1_dressed": eff.omega_q1, "omega_q2_dressed": eff.omega_q2}
    code = EXIT_OK
    if validate:
        v = jc.jc_validate(p)
        doc.update(v.to_dict())
        doc["rtol"] = rtol
        doc["passed"] = bool(v.relative_error <= rtol)
        code = EXIT_OK if doc["passed"] else EXIT_FAIL
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", out)
    return code


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="iswap-purify", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run every identity, table, recipe and rewrite check")
    v.add_argument("--tol", type=float, default=None, help="override all exact-match tolerances")
    v.add_argument("--expect", help="JSON file of expected Bell tables")
    v.add_argument("--dump-expectations", metavar="PATH", help="write the built-in expectations and exit")

    p = sub.add_parser("purify", help="iterate purification rounds and write a CSV trajectory")
    p.add_argument("--f0", type=_floats, default=[0.7], help="comma-separated initial fidelities")
    p.add_argument("--eps", type=_floats, default=[0.0], help="comma-separated pulse errors")
    p.add_argument("--target", type=float, default=0.99)
    p.add_argument("--max-rounds", type=int, default=50)
    p.add_argument("--out")

    r = sub.add_parser("rewrite", help="replace BCNOTs by BiSWAPs in a circuit file")
    r.add_argument("--in", dest="inp", required=True)
    r.add_argument("--out")
    r.add_argument("--report", help="gate-count report path (default: stderr)")
    r.add_argument("--direction", choices=("forward", "reversed", "alternate"), default="forward")

    t = sub.add_parser("timing", help="protocol times for a hardware preset")
    g = t.add_mutually_exclusive_group(required=True)
    g.add_argument("--preset")
    g.add_argument("--preset-file")
    t.add_argument("--format", choices=("json", "text", "both"), default="both")
    t.add_argument("--measurement-time", type=float, help="seconds per measurement")
    t.add_argument("--out")

    tb = sub.add_parser("tables", help="print the Bell-basis action tables")
    tb.add_argument("--which", choices=(*_TABLES, "all"), default="all")
    tb.add_argument("--format", choices=("text", "json"), default="text")
    tb.add_argument("--out")

    j = sub.add_parser("jc", help="effective exchange coupling from the cavity model")
    j.add_argument("--params", required=True, help="JSON file or inline JSON object")
    j.add_argument("--validate", action="store_true", help="check against direct simulation")
    j.add_argument("--rtol", type=float, default=0.02)
    j.add_argument("--out")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            if args.dump_expectations:
                _emit(verify.expectations_to_json() + "\n", args.dump_expectations)
                return EXIT_OK
            return cmd_verify(args.tol, args.expect)
        if args.command == "purify":
            cfg = RunConfig(args.f0, args.eps, args.target, args.max_rounds)
            return cmd_purify(cfg, args.out)
        if args.command == "rewrite":
            return cmd_rewrite(args.inp, args.out, args.report, args.direction)
        if args.command == "timing":
            return cmd_timing(args.preset, args.preset_file, args.format, args.measurement_time, args.out)
        if args.command == "tables":
            return cmd_tables(args.which, args.format, args.out)
        return cmd_jc(args.params, args.validate, args.rtol, args.out)
    except (InvalidArgument, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
