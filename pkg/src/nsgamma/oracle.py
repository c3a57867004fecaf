"""Brute-force cross-checks for the analytic spectrum.

Nothing here touches the closed-form pole expressions.  The dipole
acceleration is rebuilt from the product rule on sin(w2 t) sin(w3 t) e^{-a t},
the Fourier integral is done by fixed-order Gauss-Legendre panels in time,
and the photon count comes from an FFT of densely sampled d''(t).  The
routines are slow on purpose: they should be easy to audit.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np

from . import dynamics, spectrum
from .dynamics import FragmentParams
from .units import ALPHA_EM, HBAR_C, DomainError

ABS_SWITCH = 1e-12  # below this reference magnitude errors are absolute
ABS_TOL = 1e-15
_GL8 = np.polynomial.legendre.leggauss(8)
_GL12 = np.polynomial.legendre.leggauss(12)


class PrecisionWarning(UserWarning):
    """Truncation of the time window may dominate the oracle error."""


@dataclass(frozen=True)
class OracleReport:
    check_name: str
    reference_value: float
    test_value: float
    rel_error: float
    tolerance: float
    passed: bool
    kind: str = "check"  # check | warning | info; only checks gate the exit code

    def as_dict(self) -> dict:
        return asdict(self)


class FourierEstimate(NamedTuple):
    value: complex
    truncation: float  # bound on the neglected tail |int_T^inf ...|


def compare(name, reference, value, tolerance, kind="check", abs_tol=ABS_TOL) -> OracleReport:
    reference, value = float(reference), float(value)
    if abs(reference) > ABS_SWITCH:
        err, tol = abs(value - reference) / abs(reference), tolerance
    else:
        err, tol = abs(value - reference), abs_tol
    return OracleReport(name, reference, value, err, tol, bool(err <= tol), kind)


def accel_product_rule(params: FragmentParams, t):
    """d''(t) from the product form, independent of the sum/difference split."""
    t = np.asarray(t, dtype=float)
    w2, w3 = params.hw2.mev, params.hw3.mev
    a = 0.5 * (params.gamma2.mev + params.gamma3.mev)
    s2, c2 = np.sin(w2 * t), np.cos(w2 * t)
    s3, c3 = np.sin(w3 * t), np.cos(w3 * t)
    u = s2 * s3
    du = w2 * c2 * s3 + w3 * s2 * c3
    d2u = -(w2 * w2 + w3 * w3) * u + 2.0 * w2 * w3 * c2 * c3
    d0 = -params.kappa.fm * params.beta2_0 * params.beta3_0
    return d0 * np.exp(-a * t) * (d2u - 2.0 * a * du + a * a * u)


def numeric_fourier_accel(
    params: FragmentParams, hw: float, t_max_factor: float = 60.0, panels_per_period: int = 8
) -> FourierEstimate:
    """int_0^T exp(i hw t) d''(t) dt by 8-point Gauss-Legendre panels, T = factor/gamma."""
    gamma = params.gamma2.mev + params.gamma3.mev
    if not gamma > 0.0:
        raise DomainError("gamma must be positive")
    if t_max_factor < 20.0:
        warnings.warn(f"t_max_factor={t_max_factor} < 20", PrecisionWarning, stacklevel=2)
    w2, w3 = params.hw2.mev, params.hw3.mev
    fastest = hw + w2 + w3
    h = 2.0 * math.pi / fastest / panels_per_period
    t_max = t_max_factor / gamma
    n = math.ceil(t_max / h)
    h = t_max / n
    x, wts = _GL8
    total = 0j
    # chunked so memory stays bounded for long windows
    chunk = 1 << 15
    for start in range(0, n, chunk):
        k = np.arange(start, min(n, start + chunk))
        t = (k[:, None] + 0.5 * (x[None, :] + 1.0)) * h
        f = accel_product_rule(params, t) * np.exp(1j * hw * t)
        total += (f * wts).sum() * 0.5 * h
    a = 0.5 * gamma
    d0 = abs(params.kappa.fm * params.beta2_0 * params.beta3_0)
    trunc = d0 * (w2 + w3 + a) ** 2 * math.exp(-a * t_max) / a
    if trunc > 1e-6 * abs(total) and abs(total) > 0.0:
        warnings.warn(
            f"truncation bound {trunc:.3g} is large against |value| {abs(total):.3g}",
            PrecisionWarning,
            stacklevel=2,
        )
    return FourierEstimate(complex(total), trunc)


def numeric_time_energy(
    params: FragmentParams, t_max_factor: float = 40.0, panels_per_period: int = 4
) -> float:
    """(2/3) e^2 int_0^T d''(t)^2 dt with 12-point panels, in MeV."""
    gamma = params.gamma2.mev + params.gamma3.mev
    if not gamma > 0.0:
        raise DomainError("gamma must be positive")
    fastest = 2.0 * (params.hw2.mev + params.hw3.mev)
    t_max = t_max_factor / gamma
    n = math.ceil(t_max * fastest * panels_per_period / (2.0 * math.pi))
    h = t_max / n
    x, wts = _GL12
    sums = []
    chunk = 1 << 16
    for start in range(0, n, chunk):
        k = np.arange(start, min(n, start + chunk))
        t = (k[:, None] + 0.5 * (x[None, :] + 1.0)) * h
        sums.append(((accel_product_rule(params, t) ** 2) * wts).sum() * 0.5 * h)
    return 2.0 / 3.0 * ALPHA_EM / HBAR_C**2 * math.fsum(sums)


def numeric_photon_yield(
    params: FragmentParams, t_max_factor: float = 60.0, samples_per_period: int = 256,
    min_samples: int = 1 << 20,
) -> tuple[float, float]:
    """(photon count, energy) from an FFT of sampled d''(t) on a uniform grid.

    The transform uses the trapezoid rule in time (half weight at t = 0); the
    resulting uniform energy grid is summed with the trapezoid rule as well.
    """
    gamma = params.gamma2.mev + params.gamma3.mev
    if not gamma > 0.0:
        raise DomainError("gamma must be positive")
    w2, w3 = params.hw2.mev, params.hw3.mev
    window = t_max_factor / gamma
    dt = 2.0 * math.pi / (w2 + w3) / samples_per_period
    n = int(2 ** math.ceil(math.log2(max(window / dt, min_samples))))
    dt = window / n
    t = np.arange(n) * dt
    f = accel_product_rule(params, t)
    f[0] *= 0.5
    # numpy's ifft carries exp(+i w t) and a 1/n factor
    amp = np.fft.ifft(f) * n * dt
    w = 2.0 * math.pi * np.fft.fftfreq(n, dt)
    keep = w >= 0.0
    w, amp = w[keep], amp[keep]
    dens = 2.0 / (3.0 * math.pi) * ALPHA_EM / HBAR_C**2 * np.abs(amp) ** 2
    energy = np.trapezoid(dens, w)
    dn = np.zeros_like(dens)
    dn[1:] = dens[1:] / w[1:]
    return float(np.trapezoid(dn, w)), float(energy)


# -------------------------------------------------------------- suite


def _fd_check(params: FragmentParams, rng: np.random.Generator) -> OracleReport:
    gamma = params.gamma
    h = 1e-3 / params.sigma
    t = rng.uniform(2 * h, 10.0 / gamma, 100)
    d = lambda s: dynamics.dipole_t(params, s)  # noqa: E731
    fd = (-d(t + 2 * h) + 16 * d(t + h) - 30 * d(t) + 16 * d(t - h) - d(t - 2 * h)) / (12 * h * h)
    an = dynamics.dipole_accel_t(params, t)
    scale = np.max(np.abs(an))
    err = float(np.max(np.abs(an - fd)) / scale) if scale > 0 else float(np.max(np.abs(fd)))
    tol = 1e-6 if scale > 0 else ABS_TOL
    return OracleReport("accel_vs_finite_difference", 0.0, err, err, tol, err <= tol)


def run_validation_suite(params: FragmentParams, seed: int = 20190101) -> list[OracleReport]:
    """Every property check on one parameter set.  Never raises on a failed check."""
    rng = np.random.default_rng(seed)
    rows: list[OracleReport] = []
    narrow = params.narrow_resonance_ok
    if not narrow:
        lim = dynamics.NARROW_RESONANCE_LIMIT
        ratio = params.gamma / params.sigma
        rows.append(OracleReport("narrow_resonance", lim, ratio, ratio / lim, 1.0, False, "warning"))

    # time domain
    dec = dynamics.DipoleDecomposition.from_params(params)
    tt = np.linspace(0.0, 10.0 / params.gamma, 20001)
    prod = dynamics.dipole_t(params, tt)
    summ = dec.value(tt)
    scale = np.max(np.abs(prod))
    err = float(np.max(np.abs(prod - summ)) / scale) if scale > 0 else float(np.max(np.abs(summ)))
    rows.append(OracleReport("decomposition_equivalence", 0.0, err, err, 1e-13 if scale > 0 else ABS_TOL,
                             err <= (1e-13 if scale > 0 else ABS_TOL)))
    env = abs(params.D0) * np.exp(-0.5 * params.gamma * tt)
    excess = float(np.max(np.abs(prod) - env * (1 + 1e-14)))
    rows.append(OracleReport("envelope_bound", 0.0, max(excess, 0.0), max(excess, 0.0), 0.0, excess <= 0.0))
    rows.append(_fd_check(params, rng))

    # energies
    e_time = spectrum.total_energy_time_domain(params)
    e_freq = spectrum.frequency_energy(params, "exact")
    rows.append(compare("parseval_frequency_vs_time", e_time, e_freq, 1e-4))
    rows.append(compare("time_energy_vs_oracle", numeric_time_energy(params), e_time, 1e-6))

    # amplitudes
    peak = abs(spectrum.fourier_accel_exact(params, params.sigma))
    dc = abs(spectrum.fourier_accel_exact(params, 0.0))
    rows.append(compare("dc_null", 0.0, dc / peak if peak > 0 else dc, 1e-12, abs_tol=1e-12))
    for label, w in (("sigma", params.sigma), ("delta", params.delta)):
        if w <= 0.0:
            continue
        ref = numeric_fourier_accel(params, w)
        val = spectrum.fourier_accel_exact(params, w)
        rows.append(compare(f"fourier_vs_oracle_at_{label}", abs(ref.value), abs(val), 1e-6))
        rows.append(compare(f"fourier_phase_vs_oracle_at_{label}", 0.0,
                            abs(val - ref.value) / max(abs(ref.value), 1.0), 1e-6, abs_tol=1e-6))

    # photon yield
    n_quad = spectrum.photon_yield_from_params(params, "exact")
    if params.gamma >= 1e-3 * params.sigma:
        n_fft, _ = numeric_photon_yield(params)
        rows.append(compare("photon_yield_vs_fft_oracle", n_fft, n_quad, 1e-4))

    # dissipation linearity and the single-pole gap only make sense for a narrow line
    kind = "check" if narrow else "info"
    doubled = _with_gamma_scaled(params, 0.5)
    n2 = spectrum.photon_yield_from_params(doubled, "exact")
    if n_quad != 0.0:
        rows.append(compare("photon_yield_tau_linearity", 2.0, n2 / n_quad, 0.005, kind))
    else:
        rows.append(compare("photon_yield_tau_linearity", 0.0, n2, ABS_TOL, kind))
    if e_freq > 0.0:
        e_paper = spectrum.frequency_energy(params, "paper")
        rows.append(compare("paper_to_exact_energy_ratio", 16.0, e_paper / e_freq, 0.01, kind))
        if params.delta > 0.0:
            rows.append(_delta_line_row(params))
    return rows


def _with_gamma_scaled(params: FragmentParams, factor: float) -> FragmentParams:
    from dataclasses import replace

    from .units import Energy

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", dynamics.NarrowResonanceWarning)
        return replace(
            params,
            gamma2=Energy(params.gamma2.mev * factor),
            gamma3=Energy(params.gamma3.mev * factor),
        )


def _delta_line_row(params: FragmentParams) -> OracleReport:
    """Energy in the difference-frequency line relative to the main line.

    Each line is integrated over +/- 20 gamma around its pole; with equal widths
    the ratio is close to (Delta/Sigma)^4.
    """
    g = 20.0 * params.gamma
    d, s = params.delta, params.sigma
    e_d = spectrum.frequency_energy(params, "exact", lower=max(d - g, 0.0), upper=d + g)
    e_s = spectrum.frequency_energy(params, "exact", lower=max(s - g, 0.0), upper=s + g)
    return compare("delta_line_fraction", (d / s) ** 4, e_d / e_s, 0.05, "info")
