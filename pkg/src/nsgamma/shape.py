"""Axially symmetric nuclear surface and the induced polarization dipole.

The surface is expanded in the mu = 0 spherical harmonics up to octupole
order,

    R(theta) = R0 * (1 + beta0 + sum_{l=1..3} beta_l * Y_l0(theta)),

with the dipole amplitude tied to the quadrupole-octupole product so that the
centre of mass stays put.  A pear shape (beta2 * beta3 != 0) separates the
charge and mass centres, giving a dipole moment d = -kappa * beta2 * beta3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .units import DipoleMoment, DomainError, Length

CM_COEFF = 0.743  # beta1 = -CM_COEFF * beta2 * beta3
MAX_ORDER = 3
BETA_BOUND = 2.0


class DegenerateShapeError(DomainError):
    """The parametrized surface has a non-positive radius somewhere."""


@dataclass(frozen=True)
class Polarizability:
    kappa: Length

    def __post_init__(self):
        if not isinstance(self.kappa, Length):
            raise TypeError("kappa must be a Length")
        if not self.kappa.fm > 0.0:
            raise DomainError(f"polarizability must be positive, got {self.kappa.fm} fm")

    @property
    def fm(self) -> float:
        return self.kappa.fm


@dataclass(frozen=True)
class Deformation:
    """Axial deformation amplitudes beta_0..beta_3 and the radius R0."""

    R0: Length
    beta0: float = 0.0
    beta1: float = 0.0
    beta2: float = 0.0
    beta3: float = 0.0

    def __post_init__(self):
        if not self.R0.fm > 0.0:
            raise DomainError(f"R0 must be positive, got {self.R0.fm} fm")
        for lam, b in enumerate((self.beta1, self.beta2, self.beta3), start=1):
            if not abs(b) < BETA_BOUND:
                raise DomainError(f"|beta{lam}| = {abs(b)} exceeds {BETA_BOUND}")

    @classmethod
    def constrained(cls, R0: Length, beta2: float, beta3: float, beta0: float = 0.0):
        """Pear shape with beta1 fixed by the centre-of-mass condition."""
        return cls(R0, beta0, constrained_beta1(beta2, beta3), beta2, beta3)

    @property
    def betas(self) -> tuple[float, float, float, float]:
        return (self.beta0, self.beta1, self.beta2, self.beta3)


def legendre_harmonic(lam: int, cos_theta):
    """Real axial harmonic Y_l0 = sqrt((2l+1)/4pi) P_l(cos theta), l <= 3."""
    if lam not in (0, 1, 2, 3):
        raise DomainError(f"harmonic order must be in 0..{MAX_ORDER}, got {lam}")
    x = np.asarray(cos_theta, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise DomainError("cos(theta) must lie in [-1, 1]")
    if lam == 0:
        p = np.ones_like(x)
    elif lam == 1:
        p = x
    elif lam == 2:
        p = 0.5 * (3.0 * x**2 - 1.0)
    else:
        p = 0.5 * (5.0 * x**3 - 3.0 * x)
    out = math.sqrt((2 * lam + 1) / (4.0 * math.pi)) * p
    return float(out) if out.ndim == 0 else out


def shape_radius(deformation: Deformation, cos_theta) -> Length:
    x = np.asarray(cos_theta, dtype=float)
    s = np.full_like(x, 1.0 + deformation.beta0)
    for lam, b in enumerate(deformation.betas[1:], start=1):
        if b:
            s = s + b * legendre_harmonic(lam, x)
    r = deformation.R0.fm * s
    if np.any(r <= 0.0):
        raise DegenerateShapeError("surface radius is non-positive for some angle")
    if np.ndim(r) == 0:
        return Length(float(r))
    # vectorized callers get a bare array in fm
    return r


def constrained_beta1(beta2: float, beta3: float) -> float:
    return -CM_COEFF * beta2 * beta3


def dipole_moment(kappa: Polarizability, beta2: float, beta3: float) -> DipoleMoment:
    return DipoleMoment(-kappa.fm * beta2 * beta3)


def kappa_from_d0(d0: Length, beta2_0: float, beta3_0: float) -> Polarizability:
    """Polarizability that gives a dipole of magnitude `d0` at the initial amplitudes."""
    prod = beta2_0 * beta3_0
    if prod == 0.0:
        raise DomainError("initial amplitude product is zero; kappa is undetermined")
    return Polarizability(Length(d0.fm / prod))
