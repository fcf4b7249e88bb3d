"""Closed-form simple linear regression shared by both model directions.

The autocorrelation fit (n*Wz on z) and the autoregressive fit (z on Wz)
are the same two-parameter least-squares problem read in opposite
directions, so both modules delegate here. Standard errors use the
with-intercept formulas with n - 2 degrees of freedom, which makes the
slope t-test symmetric between the two directions (identical p-values).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .errors import DegenerateRegression

# Residual RMS below this fraction of the dependent scale is an exact
# fit: residuals are reported as zeros and p-values flagged degenerate
# instead of dividing 0 by 0.
EXACT_FIT_RTOL = 1e-12


@dataclass(frozen=True)
class OlsLine:
    """One fitted line y = intercept + slope * x with inference."""

    slope: float
    intercept: float
    residuals: np.ndarray = field(repr=False)
    r_squared: float
    se_slope: float
    se_intercept: float
    p_slope: float
    p_intercept: float
    n: int
    degenerate: bool  # exact fit: standard errors are 0, p-values forced


def fit_line(x: np.ndarray, y: np.ndarray) -> OlsLine:
    """Least-squares line of y on x via the 2x2 normal equations.

    Args:
        x: regressor values.
        y: dependent values, same length.

    Raises:
        DegenerateRegression: if x or y is constant.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.size
    xbar = x.mean()
    ybar = y.mean()
    xc = x - xbar
    yc = y - ybar
    sxx = float(xc @ xc)
    syy = float(yc @ yc)
    sxy = float(xc @ yc)
    if sxx == 0.0:
        raise DegenerateRegression("regressor is constant")
    if syy == 0.0:
        raise DegenerateRegression("dependent variable is constant")

    slope = sxy / sxx
    intercept = ybar - slope * xbar
    residuals = y - intercept - slope * x
    sse = float(residuals @ residuals)
    r_squared = sxy * sxy / (sxx * syy)

    if n <= 2 or sse <= (EXACT_FIT_RTOL**2) * syy:
        # Two points, or collinear data: the line is exact.
        return OlsLine(
            slope=slope,
            intercept=intercept,
            residuals=np.zeros(n),
            r_squared=1.0,
            se_slope=0.0,
            se_intercept=0.0,
            p_slope=0.0,
            p_intercept=0.0,
            n=n,
            degenerate=True,
        )

    sigma2 = sse / (n - 2)
    se_slope = math.sqrt(sigma2 / sxx)
    se_intercept = math.sqrt(sigma2 * (1.0 / n + xbar * xbar / sxx))
    p_slope = two_tailed_t_p(slope / se_slope, n - 2)
    p_intercept = two_tailed_t_p(intercept / se_intercept, n - 2)
    return OlsLine(
        slope=slope,
        intercept=intercept,
        residuals=residuals,
        r_squared=r_squared,
        se_slope=se_slope,
        se_intercept=se_intercept,
        p_slope=p_slope,
        p_intercept=p_intercept,
        n=n,
        degenerate=False,
    )


def two_tailed_t_p(t: float, df: int) -> float:
    """Two-tailed Student-t tail probability."""
    return float(2.0 * stats.t.sf(abs(t), df))
