"""Damped surface oscillations and the dipole moment they carry.

Each mode rings down as beta_i(t) = beta_i0 * sin(w_i t) * exp(-g_i t / 2)
starting from the undeformed shape at the moment of rupture.  The dipole
d(t) = -kappa * beta_2(t) * beta_3(t) is then a pair of damped cosines at the
sum and difference frequencies,

    d(t) = (D0 / 2) * [cos(Delta t) - cos(Sigma t)] * exp(-gamma t / 2),

with D0 = -kappa * beta_20 * beta_30 and gamma = g_2 + g_3.

Times passed to the functions here are in MeV^-1 (natural units) unless a
:class:`~nsgamma.units.Time` is given; dipole values are in e*fm and the
acceleration in e*fm*MeV^2.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .shape import Polarizability, kappa_from_d0
from .units import DomainError, Energy, Length, Time, damping_from_lifetime

NARROW_RESONANCE_LIMIT = 0.1  # gamma / Sigma above this is flagged


class NarrowResonanceWarning(UserWarning):
    """Total width is not small compared with the sum frequency."""


@dataclass(frozen=True)
class FragmentParams:
    hw2: Energy
    hw3: Energy
    beta2_0: float
    beta3_0: float
    gamma2: Energy
    gamma3: Energy
    kappa: Polarizability

    def __post_init__(self):
        if not (self.hw2.mev > 0.0 and self.hw3.mev > 0.0):
            raise DomainError("mode energies must be positive")
        if self.gamma2.mev < 0.0 or self.gamma3.mev < 0.0:
            raise DomainError("mode widths must be non-negative")
        if not self.narrow_resonance_ok:
            warnings.warn(
                f"gamma/Sigma = {self.gamma / self.sigma:.3g} is not small; "
                "the single-pole form is a poor approximation",
                NarrowResonanceWarning,
                stacklevel=3,
            )

    @classmethod
    def from_lifetime(
        cls,
        hw2: Energy,
        hw3: Energy,
        beta2_0: float,
        beta3_0: float,
        tau: Time,
        kappa: Polarizability,
    ) -> FragmentParams:
        """Split the total width hbar/tau equally between the two modes."""
        g = damping_from_lifetime(tau).mev
        return cls(hw2, hw3, beta2_0, beta3_0, Energy(g / 2), Energy(g / 2), kappa)

    @classmethod
    def xe140_defaults(cls, **overrides) -> FragmentParams:
        """140Xe-like fragment: 2.2/2.8 MeV modes, beta0 = 0.7, d0 = 5 fm, tau = 1e-19 s."""
        b2 = overrides.pop("beta2_0", 0.7)
        b3 = overrides.pop("beta3_0", 0.7)
        tau = overrides.pop("tau", Time(1e-19))
        kappa = overrides.pop("kappa", None) or kappa_from_d0(Length(5.0), b2, b3)
        p = cls.from_lifetime(
            overrides.pop("hw2", Energy(2.2)),
            overrides.pop("hw3", Energy(2.8)),
            b2,
            b3,
            tau,
            kappa,
        )
        return replace(p, **overrides) if overrides else p

    @property
    def gamma(self) -> float:
        """Total width gamma2 + gamma3 in MeV."""
        return self.gamma2.mev + self.gamma3.mev

    @property
    def sigma(self) -> float:
        return self.hw2.mev + self.hw3.mev

    @property
    def delta(self) -> float:
        return abs(self.hw2.mev - self.hw3.mev)

    @property
    def D0(self) -> float:
        """Signed dipole scale -kappa * beta20 * beta30 in e*fm."""
        return -self.kappa.fm * self.beta2_0 * self.beta3_0

    @property
    def narrow_resonance_ok(self) -> bool:
        return self.gamma <= NARROW_RESONANCE_LIMIT * self.sigma

    def require_damped(self):
        if not self.gamma > 0.0:
            raise DomainError("total width gamma must be positive for spectral integrals")


@dataclass(frozen=True)
class DipoleDecomposition:
    """d(t) = (D0/2) [cos(delta t) - cos(sigma t)] exp(-half_gamma t)."""

    D0: float
    sigma: float
    delta: float
    half_gamma: float

    @classmethod
    def from_params(cls, params: FragmentParams) -> DipoleDecomposition:
        return cls(params.D0, params.sigma, params.delta, 0.5 * params.gamma)

    @property
    def terms(self) -> tuple[tuple[float, float], tuple[float, float]]:
        """(amplitude, frequency) of each damped cosine."""
        return ((0.5 * self.D0, self.delta), (-0.5 * self.D0, self.sigma))

    def value(self, t):
        t = _natural_time(t)
        env = np.exp(-self.half_gamma * t)
        return sum(A * np.cos(w * t) for A, w in self.terms) * env

    def first_derivative(self, t):
        t = _natural_time(t)
        a = self.half_gamma
        env = np.exp(-a * t)
        return sum(A * (-w * np.sin(w * t) - a * np.cos(w * t)) for A, w in self.terms) * env

    def second_derivative(self, t):
        t = _natural_time(t)
        a = self.half_gamma
        env = np.exp(-a * t)
        return (
            sum(
                A * ((a * a - w * w) * np.cos(w * t) + 2.0 * a * w * np.sin(w * t))
                for A, w in self.terms
            )
            * env
        )


def _natural_time(t):
    if isinstance(t, Time):
        t = t.natural
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0):
        raise DomainError("the signal is defined for t >= 0 only")
    return t


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def beta_t(params: FragmentParams, mode: int, t):
    if mode == 2:
        b0, w, g = params.beta2_0, params.hw2.mev, params.gamma2.mev
    elif mode == 3:
        b0, w, g = params.beta3_0, params.hw3.mev, params.gamma3.mev
    else:
        raise DomainError(f"mode must be 2 or 3, got {mode}")
    t = _natural_time(t)
    return _scalar(b0 * np.sin(w * t) * np.exp(-0.5 * g * t))


def dipole_t(params: FragmentParams, t):
    """Dipole moment d(t) in e*fm, from the product of the two mode amplitudes."""
    return _scalar(-params.kappa.fm * beta_t(params, 2, t) * beta_t(params, 3, t))


def dipole_accel_t(params: FragmentParams, t):
    """Exact second time derivative of d(t), e*fm*MeV^2."""
    return _scalar(DipoleDecomposition.from_params(params).second_derivative(t))
