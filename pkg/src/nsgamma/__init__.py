"""Non-statistical gamma rays from post-rupture surface oscillations of fission fragments."""

__version__ = "0.1.0"

from .dynamics import DipoleDecomposition, FragmentParams
from .spectrum import GridSpec, Spectrum, build_spectrum
from .units import CONSTANTS, Energy, Length, Time

__all__ = [
    "CONSTANTS",
    "DipoleDecomposition",
    "Energy",
    "FragmentParams",
    "GridSpec",
    "Length",
    "Spectrum",
    "Time",
    "build_spectrum",
]
