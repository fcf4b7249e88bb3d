"""Closed-form least squares for the simplest spatial autoregressive model.

Fits z = a*o + rho*Wz + eps by the 2x2 normal equations and exposes the
exact algebra tying the fit back to Moran's index: rho_hat * I = n * R2,
delta = z'eps = n(1 - R2), and the lag-energy decomposition
n (Wz)'(Wz) = ((Wz)'o)^2 + I^2 / R2.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateLag, DimensionMismatch, ZeroMoran, ZeroRSquared, ZeroVariance
from .regression import fit_line
from .spatial_data import SpatialLag, StandardizedVector

ZERO_MORAN_TOL = 1e-12


@dataclass(frozen=True)
class SarFit:
    """Least-squares estimates for the autoregressive model."""

    a_hat: float
    rho_hat: float
    residuals: np.ndarray = field(repr=False)
    delta: float               # z'eps, equal to n(1 - R2)
    r_squared: float
    se_slope: float
    se_intercept: float
    p_slope: float
    p_intercept: float
    n: int
    degenerate: bool = False   # exact collinear fit; p-values not meaningful
    zero_moran: bool = False   # |I| below 1e-12; Moran cross-checks skipped


@dataclass(frozen=True)
class TheoreticalCoefficients:
    """Coefficients of the errorless model, where rho * I = n exactly."""

    a: float
    rho: float


def _check_lengths(z: StandardizedVector, wz: SpatialLag) -> None:
    if wz.values.shape[0] != z.n:
        raise DimensionMismatch(
            f"lag has {wz.values.shape[0]} entries but vector has {z.n}"
        )


def fit_sar_ols(z: StandardizedVector, wz: SpatialLag) -> SarFit:
    """Fit z on Wz with an intercept by the normal equations.

    The slope is the primary estimate of rho; the n*R2/I closed form is a
    cross-check elsewhere, never the computation, so an index near zero
    only sets the zero_moran flag instead of blocking the fit.

    Raises:
        DegenerateLag: if the lag vector is constant.
        DimensionMismatch: if z and wz disagree on length.
    """
    _check_lengths(z, wz)
    x = wz.values
    if np.ptp(x) == 0.0:
        raise DegenerateLag("spatial lag is constant; slope is undefined")
    line = fit_line(x, z.values)
    delta = float(z.values @ line.residuals)
    i_value = float(z.values @ x)
    return SarFit(
        a_hat=line.intercept,
        rho_hat=line.slope,
        residuals=line.residuals,
        delta=delta,
        r_squared=line.r_squared,
        se_slope=line.se_slope,
        se_intercept=line.se_intercept,
        p_slope=line.p_slope,
        p_intercept=line.p_intercept,
        n=z.n,
        degenerate=line.degenerate,
        zero_moran=abs(i_value) < ZERO_MORAN_TOL,
    )


def closed_form_from_moran(
    i_value: float, r_squared: float, wz_sum: float, n: int
) -> tuple[float, float]:
    """Recover (a_hat, rho_hat) from the index, R2, and the lag sum.

    rho_hat = n * R2 / I and a_hat = -(R2 / I) * (Wz)'o. Agrees with the
    normal equations to 1e-9 relative on any valid instance.

    Raises:
        ZeroMoran: if |i_value| < 1e-12.
    """
    if abs(i_value) < ZERO_MORAN_TOL:
        raise ZeroMoran("index is zero; closed form divides by it")
    rho_hat = n * r_squared / i_value
    a_hat = -(r_squared / i_value) * wz_sum
    return a_hat, rho_hat


def theoretical_coefficients(
    i_value: float, wz_sum: float, n: int
) -> TheoreticalCoefficients:
    """Coefficients of the errorless model: rho = n/I, a = -(Wz)'o / I.

    Coincides with closed_form_from_moran exactly when R2 = 1.

    Raises:
        ZeroMoran: if |i_value| < 1e-12.
    """
    if abs(i_value) < ZERO_MORAN_TOL:
        raise ZeroMoran("index is zero; theoretical coefficients undefined")
    return TheoreticalCoefficients(a=-wz_sum / i_value, rho=n / i_value)


def delta_inner(z: StandardizedVector, fit: SarFit) -> float:
    """Inner product z'eps; equals n(1 - R2) within 1e-9."""
    if fit.residuals.shape[0] != z.n:
        raise DimensionMismatch("residual vector does not match z")
    return float(z.values @ fit.residuals)


def lag_energy_gap(
    z: StandardizedVector, wz: SpatialLag, i_value: float, r_squared: float
) -> float:
    """Signed discrepancy of the lag-energy decomposition.

    Returns n*(Wz)'(Wz) - ((Wz)'o)^2 - I^2/R2, which vanishes whenever
    R2 is the squared correlation of z and Wz; |gap| stays below
    1e-9 * n * (Wz)'(Wz) on real data.

    Raises:
        ZeroRSquared: if r_squared < 1e-15 (the I^2/R2 term blows up).
    """
    _check_lengths(z, wz)
    if r_squared < 1e-15:
        raise ZeroRSquared("R2 is zero; lag-energy identity degenerates")
    energy = z.n * float(wz.values @ wz.values)
    return energy - wz.total**2 - i_value**2 / r_squared


def exact_fit_energy_gap(z: StandardizedVector, wz: SpatialLag, i_value: float) -> float:
    """Signed discrepancy of the errorless-model energy relation.

    Returns n*(Wz)'(Wz) - I^2 - ((Wz)'o)^2. Zero only when z and Wz are
    exactly collinear (R2 = 1); on noisy data the R2-corrected form in
    lag_energy_gap holds instead.
    """
    _check_lengths(z, wz)
    energy = z.n * float(wz.values @ wz.values)
    return energy - i_value**2 - wz.total**2


def centered_fit(z: StandardizedVector, wz: SpatialLag) -> SarFit:
    """Fit z on the mean-centered lag.

    The slope matches fit_sar_ols exactly; the intercept becomes the mean
    of the dependent variable, which is 0 for standardized z (within
    1e-12).

    Raises:
        DegenerateLag: if the lag vector is constant.
    """
    _check_lengths(z, wz)
    x = wz.values - wz.values.mean()
    if np.ptp(x) == 0.0:
        raise DegenerateLag("spatial lag is constant; slope is undefined")
    line = fit_line(x, z.values)
    delta = float(z.values @ line.residuals)
    i_value = float(z.values @ wz.values)
    return SarFit(
        a_hat=line.intercept,
        rho_hat=line.slope,
        residuals=line.residuals,
        delta=delta,
        r_squared=line.r_squared,
        se_slope=line.se_slope,
        se_intercept=line.se_intercept,
        p_slope=line.p_slope,
        p_intercept=line.p_intercept,
        n=z.n,
        degenerate=line.degenerate,
        zero_moran=abs(i_value) < ZERO_MORAN_TOL,
    )


def inverse_slope_relation(
    x: np.ndarray, y: np.ndarray
) -> tuple[float, float, float]:
    """Forward slope, inverse slope, and their product.

    b = cov(x,y)/var(x) regresses y on x, b' = cov(x,y)/var(y) regresses
    x on y; the product b*b' is the squared Pearson correlation.

    Raises:
        ZeroVariance: if either vector is constant.
        DimensionMismatch: on unequal lengths.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionMismatch("expected two 1-d vectors of equal length")
    dx = x - x.mean()
    dy = y - y.mean()
    var_x = float(dx @ dx)
    var_y = float(dy @ dy)
    if var_x == 0.0 or var_y == 0.0:
        raise ZeroVariance("constant vector has no regression slope")
    cov = float(dx @ dy)
    b = cov / var_x
    b_prime = cov / var_y
    return b, b_prime, b * b_prime
