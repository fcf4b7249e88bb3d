"""Moran's index three ways, plus normalized scatterplot datasets.

The index is computed as the quadratic form z'Wz, cross-checked by the
classical double-sum statistic, and recovered a third time as the slope
of the with-intercept regression of n*Wz on z. Because z has zero mean,
all three agree to machine precision; the regression additionally yields
the intercept (the entry sum of Wz), residuals, and a p-value.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateRegression, DimensionMismatch, ZeroVariance
from .regression import OlsLine, fit_line
from .spatial_data import (
    ProximityMatrix,
    RawSizeVector,
    SpatialLag,
    StandardizedVector,
    WeightMatrix,
    spatial_lag,
)

MODE_AUTOCORRELATION = "autocorrelation"
MODE_AUTOREGRESSION = "autoregression"


@dataclass(frozen=True)
class MoranResult:
    """Moran's index with the inner-regression estimates around it."""

    i_value: float
    intercept: float           # entry sum of Wz, the fitted constant
    r_squared: float           # squared Pearson correlation of z and Wz
    residuals_e: np.ndarray = field(repr=False)
    slope_p_value: float
    se_slope: float
    intercept_p_value: float
    se_intercept: float
    n: int
    degenerate: bool = False


@dataclass(frozen=True)
class TrendLine:
    slope: float
    intercept: float
    label: str


@dataclass(frozen=True)
class ScatterDataset:
    """Point cloud plus up to two trend lines for a normalized scatterplot.

    In autocorrelation mode the points are (z_i, n*(Wz)_i) and both lines
    carry slope I: the theoretical one through the origin, the empirical
    one shifted by the fitted constant. In autoregression mode the axes
    swap to ((Wz)_i, z_i) and the lines are the autoregressive fits.
    """

    points: np.ndarray = field(repr=False)  # shape (n, 2)
    theoretical_line: TrendLine | None
    empirical_line: TrendLine
    mode: str
    x_label: str
    y_label: str

    @property
    def n(self) -> int:
        return self.points.shape[0]


def moran_index(z: StandardizedVector, weights: WeightMatrix) -> float:
    """Moran's index as the quadratic form z'Wz.

    Raises:
        DimensionMismatch: if z and W disagree on n.
    """
    if weights.n != z.n:
        raise DimensionMismatch(
            f"weight matrix is {weights.n}x{weights.n} but vector has {z.n} entries"
        )
    return float(z.values @ (weights.matrix @ z.values))


def moran_double_sum(raw: RawSizeVector, proximity: ProximityMatrix) -> float:
    """Classical double-sum Moran statistic, kept as an independent oracle.

    Computes (n/S0) * sum_ij v_ij (x_i - xbar)(x_j - xbar) / sum_i (x_i - xbar)^2
    with explicit loops over the raw data. Deliberately shares no code
    with the quadratic-form path: the two must agree to 1e-12.

    Raises:
        ZeroVariance: if all sizes are equal.
    """
    x = raw.values
    n = raw.n
    if proximity.n != n:
        raise DimensionMismatch("proximity matrix does not match size vector")
    xbar = x.mean()
    dev = x - xbar
    denom = float(dev @ dev)
    if denom == 0.0:
        raise ZeroVariance("all size values are equal")
    v = proximity.matrix
    s0 = 0.0
    cross = 0.0
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            s0 += v[i, j]
            cross += v[i, j] * dev[i] * dev[j]
    return n * cross / (s0 * denom)


def inner_regression(z: StandardizedVector, weights: WeightMatrix) -> MoranResult:
    """Fit n*Wz on z with an intercept; the slope estimates Moran's index.

    The intercept estimates the entry sum of Wz, and the residuals are
    the empirical error term of the autocorrelation model.

    Raises:
        DegenerateRegression: if z or the lag is constant.
    """
    lag = spatial_lag(weights, z)
    line = fit_line(z.values, z.n * lag.values)
    return MoranResult(
        i_value=line.slope,
        intercept=line.intercept,
        r_squared=line.r_squared,
        residuals_e=line.residuals,
        slope_p_value=line.p_slope,
        se_slope=line.se_slope,
        intercept_p_value=line.p_intercept,
        se_intercept=line.se_intercept,
        n=z.n,
        degenerate=line.degenerate,
    )


def eigen_check(z: StandardizedVector, weights: WeightMatrix) -> float:
    """Residual of the outer-product eigen relation.

    z is an eigenvector of the rank-1 matrix (z z') W with eigenvalue I,
    so ((z z') W) z - I z vanishes identically; the returned max-norm
    residual measures only floating-point error and stays below 1e-10.
    """
    zv = z.values
    i_value = moran_index(z, weights)
    outer = np.outer(zv, zv) @ weights.matrix
    return float(np.max(np.abs(outer @ zv - i_value * zv)))


def rank_one_identity_slack(z: StandardizedVector, weights: WeightMatrix) -> float:
    """Scalar companion to eigen_check: |I^2 - ((Wz).z) * I|.

    Left-multiplying the eigen relation by (Wz)' collapses it to a scalar
    identity between I squared and the lag/vector inner product times I.
    """
    zv = z.values
    wz = weights.matrix @ zv
    i_value = float(zv @ wz)
    return abs(i_value * i_value - float(wz @ zv) * i_value)


def scatter_dataset(
    z: StandardizedVector,
    weights: WeightMatrix,
    mode: str = MODE_AUTOCORRELATION,
) -> ScatterDataset:
    """Build the normalized scatterplot dataset for either model direction.

    Args:
        z: standardized size vector.
        weights: globally normalized weight matrix.
        mode: "autocorrelation" plots (z, n*Wz) with slope-I lines;
            "autoregression" plots (Wz, z) with the autoregressive fit
            as the empirical line.

    Raises:
        ValueError: on an unknown mode.
    """
    from .sar import fit_sar_ols, theoretical_coefficients

    lag = spatial_lag(weights, z)
    i_value = moran_index(z, weights)
    if mode == MODE_AUTOCORRELATION:
        points = np.column_stack([z.values, z.n * lag.values])
        theoretical = TrendLine(slope=i_value, intercept=0.0, label="through-origin")
        empirical = TrendLine(slope=i_value, intercept=lag.total, label="fitted")
        return ScatterDataset(
            points=points,
            theoretical_line=theoretical,
            empirical_line=empirical,
            mode=mode,
            x_label="z",
            y_label="n Wz",
        )
    if mode == MODE_AUTOREGRESSION:
        fit = fit_sar_ols(z, lag)
        theoretical = None
        if abs(i_value) >= 1e-12:
            coeffs = theoretical_coefficients(i_value, lag.total, z.n)
            theoretical = TrendLine(
                slope=coeffs.rho, intercept=coeffs.a, label="exact-fit"
            )
        empirical = TrendLine(slope=fit.rho_hat, intercept=fit.a_hat, label="fitted")
        return ScatterDataset(
            points=np.column_stack([lag.values, z.values]),
            theoretical_line=theoretical,
            empirical_line=empirical,
            mode=mode,
            x_label="Wz",
            y_label="z",
        )
    raise ValueError(f"unknown scatter mode: {mode!r}")


def lag_residual_norm(z: StandardizedVector, weights: WeightMatrix) -> float:
    """Diagnostic only: max-norm of n*Wz - I*z.

    The constant-free proportionality between the lag and the vector is
    exact only for a perfectly collinear pair; this exposes how far a
    given dataset is from that idealization, with no accuracy claim.
    """
    lag = spatial_lag(weights, z)
    i_value = moran_index(z, weights)
    return float(np.max(np.abs(z.n * lag.values - i_value * z.values)))
