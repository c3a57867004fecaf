"""Physical constants and the handful of dimensioned quantities used here.

All internal arithmetic is done in natural units (hbar = c = 1): energies in
MeV, times in MeV^-1, lengths in fm, charges in units of e.  The classes
below exist so that values cross module boundaries with their unit attached;
conversion to seconds or e*fm happens only at construction or output.

Constants are CODATA-2018 and fixed in source so that numbers are
bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class DomainError(ValueError):
    """An argument lies outside the domain of a physical operation."""


@dataclass(frozen=True)
class PhysConstants:
    hbar_c: float = 197.3269804  # MeV fm
    hbar: float = 6.582119569e-22  # MeV s
    alpha_em: float = 7.2973525693e-3

    @property
    def e_squared(self) -> float:
        """Elementary charge squared in MeV fm (Gaussian units)."""
        return self.alpha_em * self.hbar_c

    def as_dict(self) -> dict[str, float]:
        return {
            "hbar_c_mev_fm": self.hbar_c,
            "hbar_mev_s": self.hbar,
            "alpha_em": self.alpha_em,
            "e_squared_mev_fm": self.e_squared,
        }


CONSTANTS = PhysConstants()
HBAR = CONSTANTS.hbar
HBAR_C = CONSTANTS.hbar_c
ALPHA_EM = CONSTANTS.alpha_em


def _require_finite(value: float, what: str) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{what} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class Energy:
    """Energy in MeV; also used for angular frequencies (hbar*omega)."""

    mev: float

    def __post_init__(self):
        object.__setattr__(self, "mev", _require_finite(self.mev, "energy"))

    def to_lifetime(self) -> Time:
        """Lifetime tau = hbar / E."""
        if self.mev <= 0.0:
            raise DomainError(f"lifetime needs a positive energy, got {self.mev} MeV")
        return Time(HBAR / self.mev)


@dataclass(frozen=True)
class Time:
    """Time in seconds."""

    seconds: float

    def __post_init__(self):
        object.__setattr__(self, "seconds", _require_finite(self.seconds, "time"))

    @property
    def natural(self) -> float:
        """The same time in MeV^-1."""
        return self.seconds / HBAR

    @classmethod
    def from_natural(cls, t_inv_mev: float) -> Time:
        return cls(float(t_inv_mev) * HBAR)

    def to_energy(self) -> Energy:
        return damping_from_lifetime(self)


@dataclass(frozen=True)
class Length:
    """Length in fm."""

    fm: float

    def __post_init__(self):
        object.__setattr__(self, "fm", _require_finite(self.fm, "length"))


@dataclass(frozen=True)
class DipoleMoment:
    """Electric dipole moment in e*fm.  Signed."""

    efm: float

    def __post_init__(self):
        object.__setattr__(self, "efm", _require_finite(self.efm, "dipole moment"))


def damping_from_lifetime(tau: Time) -> Energy:
    """Width gamma = hbar / tau of a mode with lifetime `tau`.

    >>> round(damping_from_lifetime(Time(1e-19)).mev, 7)
    0.0065821
    """
    if not isinstance(tau, Time):
        raise TypeError(f"expected Time, got {type(tau).__name__}")
    if tau.seconds <= 0.0:
        raise DomainError(f"lifetime must be positive, got {tau.seconds} s")
    return Energy(HBAR / tau.seconds)
