"""Half-integral weight Eisenstein series on Gamma_0(4) and the zeros of E_inf."""

from .series import (
    EvalResult,
    TruncationPolicy,
    Weight,
    eval_E_0_fourier,
    eval_E_0_lattice,
    eval_E_half_lattice,
    eval_E_inf,
    evaluate,
    fourier_b,
)
from .zerofinder import ZeroReport, compile_report

__version__ = "0.1.0"
