"""(p,q)-adic Fourier analysis on Z_p with exact and q-adic backends."""

__version__ = "0.1.0"

from .base import Config, ZpPoint, bit_length, ones_count, truncate_point
from .cyclo import CycloNum, cy_root
from .dualgroup import PHat, enumerate_ball, frac_mul, phat_make
from .fourier import DualFn, LCFn, character, conv_dual, conv_zp, fourier_fwd, fourier_inv, haar_integral
from .measures import MeasureHat, aq_hat, aq_partial_closed, aq_tilde, mu_tilde
from .qadic import FieldCtx, QAdicNum, field_setup, from_exact, qval
from .wtt import nondensity_witness, wtt_continuous_check

__all__ = [
    "Config", "ZpPoint", "bit_length", "ones_count", "truncate_point",
    "CycloNum", "cy_root",
    "PHat", "enumerate_ball", "frac_mul", "phat_make",
    "DualFn", "LCFn", "character", "conv_dual", "conv_zp", "fourier_fwd", "fourier_inv", "haar_integral",
    "MeasureHat", "aq_hat", "aq_partial_closed", "aq_tilde", "mu_tilde",
    "FieldCtx", "QAdicNum", "field_setup", "from_exact", "qval",
    "nondensity_witness", "wtt_continuous_check",
]
