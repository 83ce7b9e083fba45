"""Cavity-mediated exchange: dispersive estimate against direct simulation.

Two qubits share one resonator mode,

    H = w a^dag a + sum_i (wq_i / 2) Z_i + (chi_i s+_i a + h.c.),

with Z = |e><e| - |g><g|.  Far from resonance the mode can be eliminated,
leaving an XY coupling ``J (XX + YY)`` with
``J = chi1 chi2 (D1 + D2) / (4 D1 D2)`` and ``D_i = w - wq_i``.  An excitation
then hops between the qubits as ``sin^2(2 J t)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm
from scipy.optimize import curve_fit

from .errors import CutoffTooSmall, InvalidArgument, SingularDetuning

MAX_DISPERSIVE_RATIO = 0.2
LEAKAGE_TOL = 1e-6


@dataclass(frozen=True)
class JCParams:
    """Angular frequencies in rad/s."""

    omega: float
    omega_q1: float
    omega_q2: float
    chi1: float
    chi2: float
    cutoff: int = 5

    def __post_init__(self):
        for name in ("omega", "omega_q1", "omega_q2", "chi1", "chi2"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidArgument(f"{name} must be finite")
        if self.cutoff < 2:
            raise InvalidArgument("Fock cutoff must be at least 2")
        for d, chi in ((self.delta1, self.chi1), (self.delta2, self.chi2)):
            if d == 0:
                raise SingularDetuning("qubit resonant with the mode")
            if abs(chi / d) > MAX_DISPERSIVE_RATIO * (1 + 1e-12):
                raise InvalidArgument(f"|chi/Delta| = {abs(chi / d):.3g} exceeds {MAX_DISPERSIVE_RATIO}")

    @property
    def delta1(self) -> float:
        return self.omega - self.omega_q1

    @property
    def delta2(self) -> float:
        return self.omega - self.omega_q2

    @classmethod
    def symmetric(cls, alpha: float, fq_hz: float = 5e9, delta_hz: float = 1e9, cutoff: int = 5) -> "JCParams":
        """Identical qubits at ``fq_hz`` detuned by ``delta_hz``, with chi = alpha Delta."""
        wq = 2 * math.pi * fq_hz
        d = 2 * math.pi * delta_hz
        return cls(wq + d, wq, wq, alpha * d, alpha * d, cutoff)


@dataclass(frozen=True)
class Effective:
    J: float
    omega_q1: float
    omega_q2: float


def jc_effective(p: JCParams) -> Effective:
    d1, d2 = p.delta1, p.delta2
    J = p.chi1 * p.chi2 * (d1 + d2) / (4 * d1 * d2)
    return Effective(J, p.omega_q1 + p.chi1 ** 2 / d1, p.omega_q2 + p.chi2 ** 2 / d2)


def jc_hamiltonian(p: JCParams) -> np.ndarray:
    """Ordering: qubit 1, qubit 2, mode; qubit basis (g, e)."""
    n = p.cutoff + 1
    a = np.diag(np.sqrt(np.arange(1, n)), 1)
    num = a.T @ a
    i2, im = np.eye(2), np.eye(n)
    z = np.diag([-1.0, 1.0])
    sp = np.array([[0.0, 0.0], [1.0, 0.0]])
    H = p.omega * np.kron(np.kron(i2, i2), num)
    H += p.omega_q1 / 2 * np.kron(np.kron(z, i2), im)
    H += p.omega_q2 / 2 * np.kron(np.kron(i2, z), im)
    c1 = p.chi1 * np.kron(np.kron(sp, i2), a)
    c2 = p.chi2 * np.kron(np.kron(i2, sp), a)
    H += c1 + c1.T + c2 + c2.T
    return H


def _basis_index(q1: int, q2: int, photons: int, cutoff: int) -> int:
    return (q1 * 2 + q2) * (cutoff + 1) + photons


@dataclass(frozen=True)
class JCValidation:
    J_effective: float
    exchange_frequency_expected: float
    exchange_frequency_measured: float
    relative_error: float
    max_top_level_population: float
    times: np.ndarray
    population: np.ndarray

    def to_dict(self) -> dict:
        return {
            "J_effective": self.J_effective,
            "exchange_frequency_expected": self.exchange_frequency_expected,
            "exchange_frequency_measured": self.exchange_frequency_measured,
            "relative_error": self.relative_error,
            "max_top_level_population": self.max_top_level_population,
        }


def _fit_exchange(t: np.ndarray, P: np.ndarray, guess: float) -> float:
    # refine the analytic guess with the FFT peak so a bad estimate still fits
    spec = np.abs(np.fft.rfft(P - P.mean()))
    freqs = np.fft.rfftfreq(len(P), t[1] - t[0])
    k = int(np.argmax(spec[1:])) + 1
    w0 = math.pi * freqs[k] if spec[k] > 0 else guess
    if abs(w0 - guess) > 0.5 * abs(guess):
        w0 = guess

    def model(tt, A, W, C):
        return A * np.sin(W * tt) ** 2 + C

    popt, _ = curve_fit(model, t, P, p0=(P.max() - P.min(), w0, P.min()))
    return abs(popt[1])


def jc_validate(p: JCParams, evolution_time: float | None = None, steps: int = 4000,
                periods: float = 4.0) -> JCValidation:
    """Evolve |e, g, 0> and fit the population of |g, e, 0> to A sin^2(W t) + C.

    W should match ``2 J`` up to corrections of order (chi / Delta)^2.  The
    default window covers ``periods`` exchange periods.
    """
    if steps < 16:
        raise InvalidArgument("need at least 16 steps")
    if evolution_time is not None and not (math.isfinite(evolution_time) and evolution_time > 0):
        raise InvalidArgument("evolution time must be positive")
    samples = steps
    eff = jc_effective(p)
    expected = abs(2 * eff.J)
    H = jc_hamiltonian(p)
    psi = np.zeros(H.shape[0], complex)
    psi[_basis_index(1, 0, 0, p.cutoff)] = 1
    target = _basis_index(0, 1, 0, p.cutoff)
    top = [_basis_index(a, b, p.cutoff, p.cutoff) for a in (0, 1) for b in (0, 1)]

    if evolution_time is not None:
        span = evolution_time
    elif expected == 0:
        span = 2 * math.pi / abs(p.delta1)
    else:
        span = periods * math.pi / expected
    dt = span / samples
    U = expm(-1j * H * dt)
    if np.linalg.norm(U.conj().T @ U - np.eye(len(U))) > 1e-10:
        raise InvalidArgument("time step too coarse for a unitary propagator")

    t = np.arange(samples) * dt
    P = np.empty(samples)
    leak = 0.0
    for k in range(samples):
        P[k] = abs(psi[target]) ** 2
        leak = max(leak, float(np.sum(np.abs(psi[top]) ** 2)))
        psi = U @ psi
    if leak > LEAKAGE_TOL:
        raise CutoffTooSmall(f"population {leak:.2e} reached the Fock cutoff {p.cutoff}")

    if P.max() < 1e-12:
        measured = 0.0
    else:
        measured = _fit_exchange(t, P, expected)
    rel = 0.0 if expected == 0 and measured == 0 else abs(measured - expected) / expected
    return JCValidation(eff.J, expected, measured, rel, leak, t, P)
