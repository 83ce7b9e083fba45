"""Gate-time cost model and device presets.

A preset gives a two-qubit coupling and a single-qubit rotation frequency.
Times follow ``tau = pi / (4 x)`` where ``x`` is read according to the
preset's convention:

- ``ANGULAR``: x is the angular frequency (rad/s).  A cyclic input f is
  turned into 2 pi f first, so tau = 1 / (8 f).
- ``CYCLIC``: x is the cyclic frequency f (Hz); energies use f = E / h.
- ``DIRECT``: gate times are given as-is.

The sqrt(SWAP) time is pi / (8 J_H), half the Heisenberg SWAP time, under
the same convention; it is only reported when a Heisenberg coupling is given.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass, field, fields
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Literal

from .errors import InvalidArgument

HBAR_EV_S = 6.582119569e-16
H_EV_S = 4.135667696e-15

PRESET_DIR_ENV = "ISWAP_PURIFY_PRESET_DIR"

_CYCLIC = {"Hz_cyclic": 1.0, "kHz_cyclic": 1e3, "MHz_cyclic": 1e6, "GHz_cyclic": 1e9}
_ENERGY = {"eV": 1.0, "meV": 1e-3, "ueV": 1e-6}
_TIME = {"s": 1.0, "ms": 1e-3, "us": 1e-6, "ns": 1e-9, "ps": 1e-12}


class Convention(str, Enum):
    ANGULAR = "ANGULAR"
    CYCLIC = "CYCLIC"
    DIRECT = "DIRECT"


@dataclass(frozen=True)
class Quantity:
    """A frequency-like value with an explicit unit string."""

    value: float
    unit: str

    def __post_init__(self):
        if self.unit not in _CYCLIC and self.unit not in _ENERGY and self.unit != "rad_per_s":
            raise InvalidArgument(f"unknown frequency unit {self.unit!r}")
        if not (math.isfinite(self.value) and self.value > 0):
            raise InvalidArgument(f"frequency must be positive, got {self.value!r}")

    def angular(self) -> float:
        if self.unit == "rad_per_s":
            return self.value
        if self.unit in _CYCLIC:
            return 2 * math.pi * self.value * _CYCLIC[self.unit]
        return self.value * _ENERGY[self.unit] / HBAR_EV_S

    def cyclic(self) -> float:
        if self.unit == "rad_per_s":
            return self.value / (2 * math.pi)
        if self.unit in _CYCLIC:
            return self.value * _CYCLIC[self.unit]
        return self.value * _ENERGY[self.unit] / H_EV_S

    def scaled(self, c: float) -> "Quantity":
        return Quantity(self.value * c, self.unit)


def parse_time(obj) -> float | None:
    """Seconds from ``{"value": v, "unit": u}``, a bare number (seconds) or None."""
    if obj is None:
        return None
    if isinstance(obj, (int, float)):
        t = float(obj)
    else:
        unit = obj.get("unit", "s")
        if unit not in _TIME:
            raise InvalidArgument(f"unknown time unit {unit!r}")
        t = float(obj["value"]) * _TIME[unit]
    if not (math.isfinite(t) and t >= 0):
        raise InvalidArgument(f"time must be nonnegative, got {t!r}")
    return t


@dataclass(frozen=True)
class HardwarePreset:
    name: str
    convention: Convention
    coupling: Quantity | None = None
    rotation_frequency: Quantity | None = None
    heisenberg_coupling: Quantity | None = None
    iswap_time: float | None = None
    rotation_time: float | None = None
    sqrtswap_time: float | None = None
    dephasing_time: float | None = None
    measurement_time: float | None = None
    reference_values: dict[str, float] = field(default_factory=dict)
    notes: str = ""

    def __post_init__(self):
        object.__setattr__(self, "convention", Convention(self.convention))
        if self.convention is Convention.DIRECT:
            if self.iswap_time is None or self.rotation_time is None:
                raise InvalidArgument("DIRECT presets need iswap_time and rotation_time")
            for t in (self.iswap_time, self.rotation_time, self.sqrtswap_time):
                if t is not None and not t > 0:
                    raise InvalidArgument("gate times must be positive")
        elif self.coupling is None or self.rotation_frequency is None:
            raise InvalidArgument(f"{self.convention.value} presets need coupling and rotation_frequency")
        for t in (self.dephasing_time, self.measurement_time):
            if t is not None and t < 0:
                raise InvalidArgument("times must be nonnegative")

    @classmethod
    def from_dict(cls, d: dict) -> "HardwarePreset":
        def q(key):
            v = d.get(key)
            return None if v is None else Quantity(float(v["value"]), v["unit"])

        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise InvalidArgument(f"unknown preset fields {sorted(extra)}")
        return cls(
            name=d["name"],
            convention=Convention(d["convention"]),
            coupling=q("coupling"),
            rotation_frequency=q("rotation_frequency"),
            heisenberg_coupling=q("heisenberg_coupling"),
            iswap_time=parse_time(d.get("iswap_time")),
            rotation_time=parse_time(d.get("rotation_time")),
            sqrtswap_time=parse_time(d.get("sqrtswap_time")),
            dephasing_time=parse_time(d.get("dephasing_time")),
            measurement_time=parse_time(d.get("measurement_time")),
            reference_values={k: parse_time(v) for k, v in d.get("reference_values", {}).items()},
            notes=d.get("notes", ""),
        )

    def scaled(self, c: float) -> "HardwarePreset":
        """Every frequency multiplied by ``c`` (DIRECT times divided by ``c``)."""
        kw = {}
        for name in ("coupling", "rotation_frequency", "heisenberg_coupling"):
            v = getattr(self, name)
            kw[name] = None if v is None else v.scaled(c)
        for name in ("iswap_time", "rotation_time", "sqrtswap_time"):
            v = getattr(self, name)
            kw[name] = None if v is None else v / c
        return HardwarePreset(self.name, self.convention, dephasing_time=self.dephasing_time,
                              measurement_time=self.measurement_time, **kw)


def _quarter_period(q: Quantity, convention: Convention, divisor: float = 4.0) -> float:
    x = q.angular() if convention is Convention.ANGULAR else q.cyclic()
    return math.pi / (divisor * x)


@dataclass(frozen=True)
class GateTimes:
    tau_rot: float
    tau_iswap: float
    tau_sqrtswap: float | None = None


def gate_times(p: HardwarePreset) -> GateTimes:
    if p.convention is Convention.DIRECT:
        return GateTimes(p.rotation_time, p.iswap_time, p.sqrtswap_time)
    sq = None
    if p.heisenberg_coupling is not None:
        sq = _quarter_period(p.heisenberg_coupling, p.convention, 8.0)
    return GateTimes(_quarter_period(p.rotation_frequency, p.convention),
                     _quarter_period(p.coupling, p.convention), sq)


@dataclass(frozen=True)
class TimingReport:
    convention: str
    tau_rot: float
    tau_iswap: float
    tau_cnot: float
    tau_puri_bcnot: float
    tau_puri_biswap: float
    delta_puri_adv: float
    tau_bell_cnot: float
    tau_bell_iswap: float
    delta_bell_iswap_adv: float
    tau_sqrtswap: float | None = None
    tau_cnot_heisenberg: float | None = None
    tau_bell_sqrtswap: float | None = None
    tau_bell_cnot_sqrtswap: float | None = None
    delta_bell_sqrtswap_adv: float | None = None
    discrepancies: dict[str, dict[str, float]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


DISCREPANCY_RTOL = 0.01


def protocol_times(p: HardwarePreset) -> TimingReport:
    g = gate_times(p)
    r, i = g.tau_rot, g.tau_iswap
    puri_bcnot = 5 * r + 2 * i
    puri_biswap = 4 * r + i
    bell_cnot = 5 * r + 2 * i
    bell_iswap = 2 * r + i
    kw = {}
    if g.tau_sqrtswap is not None:
        s = g.tau_sqrtswap
        kw = dict(
            tau_sqrtswap=s,
            tau_cnot_heisenberg=3 * r + 2 * s,
            tau_bell_sqrtswap=3 * r + s,
            tau_bell_cnot_sqrtswap=4 * r + 2 * s,
        )
        kw["delta_bell_sqrtswap_adv"] = kw["tau_bell_cnot_sqrtswap"] - kw["tau_bell_sqrtswap"]
    report = TimingReport(
        convention=p.convention.value,
        tau_rot=r,
        tau_iswap=i,
        tau_cnot=4 * r + 2 * i,
        tau_puri_bcnot=puri_bcnot,
        tau_puri_biswap=puri_biswap,
        delta_puri_adv=puri_bcnot - puri_biswap,
        tau_bell_cnot=bell_cnot,
        tau_bell_iswap=bell_iswap,
        delta_bell_iswap_adv=bell_cnot - bell_iswap,
        **kw,
    )
    disc = {}
    values = report.to_dict()
    for key, ref in p.reference_values.items():
        if key not in values:
            raise InvalidArgument(f"reference value for unknown field {key!r}")
        rel = abs(values[key] - ref) / ref
        if rel > DISCREPANCY_RTOL:
            disc[key] = {"computed": values[key], "reference": ref, "relative_difference": rel}
    return TimingReport(**{**asdict(report), "discrepancies": disc})


def rounds_within_coherence(p: HardwarePreset, protocol: Literal["biswap", "bcnot"] = "biswap",
                            measurement_time: float | None = None) -> int:
    """How many full rounds (gates plus measurement) fit in the dephasing time."""
    meas = p.measurement_time if measurement_time is None else measurement_time
    if meas is None:
        raise InvalidArgument("a measurement time is required")
    if p.dephasing_time is None:
        raise InvalidArgument(f"preset {p.name!r} has no dephasing time")
    if protocol not in ("biswap", "bcnot"):
        raise InvalidArgument(f"unknown protocol {protocol!r}")
    rep = protocol_times(p)
    per_round = (rep.tau_puri_biswap if protocol == "biswap" else rep.tau_puri_bcnot) + meas
    # guard against 500/6.25 style ratios landing a hair below an integer
    return int(math.floor(p.dephasing_time / per_round * (1 + 1e-12)))


# ---------------------------------------------------------------------------
# preset files


def preset_dirs() -> list[Path]:
    dirs = []
    env = os.environ.get(PRESET_DIR_ENV)
    if env:
        dirs.append(Path(env))
    dirs.append(Path(str(resources.files("iswap_purify") / "presets")))
    return dirs


def available_presets() -> list[str]:
    names = set()
    for d in preset_dirs():
        if d.is_dir():
            names |= {f.stem for f in d.glob("*.json")}
    return sorted(names)


def load_preset_file(path: str | Path) -> HardwarePreset:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidArgument(f"{path}: {exc}") from None
    try:
        return HardwarePreset.from_dict(data)
    except KeyError as exc:
        raise InvalidArgument(f"{path}: missing field {exc}") from None


def load_preset(name: str) -> HardwarePreset:
    for d in preset_dirs():
        f = d / f"{name}.json"
        if f.is_file():
            return load_preset_file(f)
    raise InvalidArgument(f"unknown preset {name!r}; available: {', '.join(available_presets())}")


# ---------------------------------------------------------------------------
# text output


def _fmt_time(t: float) -> str:
    for unit, scale in (("ns", 1e-9), ("ps", 1e-12)):
        if t >= scale:
            return f"{t / scale:.4g} {unit}"
    return f"{t:.4g} s"


def table_text(name: str, rep: TimingReport) -> str:
    """Table with new time, previous time and advantage per operation."""
    rows = [("purification", rep.tau_puri_biswap, rep.tau_puri_bcnot, rep.delta_puri_adv),
            ("Bell (iSWAP)", rep.tau_bell_iswap, rep.tau_bell_cnot, rep.delta_bell_iswap_adv)]
    if rep.tau_bell_sqrtswap is not None:
        rows.append(("Bell (sqrtSWAP)", rep.tau_bell_sqrtswap, rep.tau_bell_cnot_sqrtswap,
                     rep.delta_bell_sqrtswap_adv))
    head = ("operation", "new", "previous", "advantage")
    body = [(r[0],) + tuple(_fmt_time(x) for x in r[1:]) for r in rows]
    widths = [max(len(x[i]) for x in (head, *body)) for i in range(4)]
    lines = [f"preset {name} ({rep.convention}): tau_rot = {_fmt_time(rep.tau_rot)}, "
             f"tau_iswap = {_fmt_time(rep.tau_iswap)}"]
    lines.append(" | ".join(h.ljust(w) for h, w in zip(head, widths)))
    lines.append("-+-".join("-" * w for w in widths))
    lines += [" | ".join(c.ljust(w) for c, w in zip(row, widths)) for row in body]
    for key, d in sorted(rep.discrepancies.items()):
        lines.append(f"discrepancy: {key} computed {_fmt_time(d['computed'])}, "
                     f"reference {_fmt_time(d['reference'])}")
    return "\n".join(lines) + "\n"
