"""Completion solvers: ADMM variants plus the hard-interpolation baseline."""

from .adrm import adrm_reconstruct
from .admac import admac_reconstruct
from .halrtc import halrtc_reconstruct
from .radmac import MixtureState, radmac_reconstruct

__all__ = [
    "adrm_reconstruct",
    "admac_reconstruct",
    "halrtc_reconstruct",
    "radmac_reconstruct",
    "MixtureState",
]
