"""Bounds on the rounding error of computed values of G^t log^j G.

The model assumes every library function returns 15 correct significant
digits (relative error 0.5e-15 for cos, 0.5e-14 absolute for log of
values whose leading digit is at the units place).  IEEE double with a
faithful libm is strictly better, so the model is conservative for the
numpy evaluation used here.  These are arithmetic facts about bounds, not
measurements of the host.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

COS_HALF_ULP = 0.5e-15
LOG_ABS_ERR = 0.5e-14
EXP_LINEAR = 1.8  # |e^v - 1| < 1.8 |v| for |v| < 0.5
LOG_CAP = 3.0  # |log G| and its computed value stay below this


@dataclass(frozen=True)
class CompErrorModel:
    g_err: float
    log_err: float
    pow_rel: float
    derived: float  # keeps the factor t in the error of G^t
    published_form: float  # (2j + 10) 1e-14 3^j G^t
    coarse_form: float  # 32e-14 3^(6+j)


def computational_error(j: int, t: float, g_min: float, g_max: float, weight: float = 6.0) -> CompErrorModel:
    """Bound |(G^t log^j G)* - G^t log^j G| for G in [g_min, g_max].

    ``weight`` is the sum of |cos coefficients| of G apart from the constant
    term (6 for G_+ and G_-).
    """
    if not 0 < g_min <= g_max:
        raise ValueError("need 0 < g_min <= g_max")
    g_err = weight * COS_HALF_ULP
    log_err = g_err / g_min + LOG_ABS_ERR
    if t * log_err >= 0.5:
        raise ValueError("linearisation of exp is invalid for this t")
    if max(abs(math.log(g_min)), math.log(g_max)) + log_err > LOG_CAP:
        raise ValueError("log G leaves the range assumed by the model")
    pow_rel = EXP_LINEAR * t * log_err
    gt = g_max**t
    logpow_err = log_err * j * LOG_CAP ** max(j - 1, 0)
    derived = pow_rel * gt * LOG_CAP**j + gt * logpow_err
    published_form = (2 * j + 10) * 1e-14 * 3**j * gt
    coarse_form = 32e-14 * 3 ** (6 + j)
    return CompErrorModel(g_err, log_err, pow_rel, derived, published_form, coarse_form)
