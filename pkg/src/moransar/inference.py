"""Significance tests and residual diagnostics.

Slope t-tests reproduce the paired p-values of the two regression
directions (the t statistic is direction-symmetric). The permutation
test is randomization inference for the index itself: it enumerates all
n! relabelings when that is no more work than the requested sample size,
otherwise draws Monte-Carlo permutations from per-permutation seeds that
are spawned up front, so the worker count cannot change the answer.

Residual diagnostics standardize the residuals by their population
standard deviation and report the residual index alongside the spatial
Durbin-Watson statistic, which equals twice Geary's contiguity ratio.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateSE,
    DimensionMismatch,
    InputError,
    MissingCriticalValues,
    ZeroVariance,
)
from .regression import two_tailed_t_p
from .spatial_data import StandardizedVector, WeightMatrix

TIE_TOL = 1e-12


@dataclass(frozen=True)
class SignificanceResult:
    statistic: float
    p_value: float
    method: str                 # "t_test" or "permutation"
    permutations_used: int = 0
    seed: int | None = None
    degenerate: bool = False    # exact fit: no sampling variability left
    exhaustive: bool = False    # all n! permutations enumerated


@dataclass(frozen=True)
class DwCriticalValues:
    n: int
    alpha: float
    d_l: float
    d_u: float

    def __post_init__(self) -> None:
        if not (0.0 < self.d_l < self.d_u < 2.0):
            raise InputError(
                f"critical values must satisfy 0 < d_l < d_u < 2, "
                f"got d_l={self.d_l}, d_u={self.d_u}"
            )


@dataclass(frozen=True)
class DwResult:
    dw: float
    geary_c: float
    i_e: float                      # residual Moran index
    classification: str | None = None


# Only the critical pair quoted for n=35 at the 5% level ships built in;
# every other (n, alpha) must come from a user-supplied table.
BUNDLED_DW_CRITICAL: dict[tuple[int, float], DwCriticalValues] = {
    (35, 0.05): DwCriticalValues(n=35, alpha=0.05, d_l=1.402, d_u=1.519),
}


def slope_t_test(slope: float, se: float, n: int) -> SignificanceResult:
    """Two-tailed t-test for a regression slope with n-2 degrees of freedom.

    An exact fit (se = 0) cannot be tested; it is reported as p = 0 with
    the degenerate flag rather than dividing by zero.

    Raises:
        DegenerateSE: if se is negative, or se > 0 with n < 3 (no
            degrees of freedom to estimate it from).
    """
    if se < 0.0 or not math.isfinite(se):
        raise DegenerateSE(f"standard error must be finite and nonnegative, got {se}")
    if se == 0.0:
        if slope == 0.0:
            return SignificanceResult(
                statistic=0.0, p_value=1.0, method="t_test", degenerate=True
            )
        return SignificanceResult(
            statistic=math.copysign(math.inf, slope),
            p_value=0.0,
            method="t_test",
            degenerate=True,
        )
    if n < 3:
        raise DegenerateSE("a positive standard error needs at least 3 observations")
    t = slope / se
    return SignificanceResult(
        statistic=t, p_value=two_tailed_t_p(t, n - 2), method="t_test"
    )


def _exceeds(i_star: float, i_obs: float, sidedness: str) -> bool:
    tol = TIE_TOL * max(1.0, abs(i_obs))
    if sidedness == "two-sided":
        return abs(i_star) >= abs(i_obs) - tol
    if sidedness == "greater":
        return i_star >= i_obs - tol
    if sidedness == "less":
        return i_star <= i_obs + tol
    raise InputError(f"unknown sidedness: {sidedness!r}")


def permutation_test(
    z: StandardizedVector,
    weights: WeightMatrix,
    m: int = 999,
    seed: int | None = None,
    sidedness: str = "two-sided",
    workers: int = 1,
) -> SignificanceResult:
    """Randomization p-value for the index under relabeling.

    When n! <= m the test enumerates every permutation and returns the
    exact randomization p (#extreme / n!). Otherwise it samples m
    permutations and returns the pseudo-p (1 + #extreme) / (m + 1).
    Per-permutation seeds are spawned from the master seed before any
    work is dispatched, so the result is bit-identical for any worker
    count.

    Raises:
        InputError: if m < 1 or workers < 1 or sidedness is unknown.
        DimensionMismatch: if z and weights disagree on n.
    """
    if m < 1:
        raise InputError(f"permutation count must be at least 1, got {m}")
    if workers < 1:
        raise InputError(f"worker count must be at least 1, got {workers}")
    if weights.n != z.n:
        raise DimensionMismatch("weight matrix does not match vector length")
    _exceeds(0.0, 0.0, sidedness)  # reject bad sidedness before any work

    w = weights.matrix
    zv = z.values
    n = z.n
    i_obs = float(zv @ (w @ zv))

    n_fact = math.factorial(n)
    if n_fact <= m:
        import itertools

        count = 0
        for perm in itertools.permutations(range(n)):
            zp = zv[list(perm)]
            if _exceeds(float(zp @ (w @ zp)), i_obs, sidedness):
                count += 1
        return SignificanceResult(
            statistic=i_obs,
            p_value=count / n_fact,
            method="permutation",
            permutations_used=n_fact,
            seed=seed,
            exhaustive=True,
        )

    child_seeds = np.random.SeedSequence(seed).spawn(m)

    def count_chunk(chunk: range) -> int:
        hits = 0
        for k in chunk:
            rng = np.random.default_rng(child_seeds[k])
            zp = zv[rng.permutation(n)]
            if _exceeds(float(zp @ (w @ zp)), i_obs, sidedness):
                hits += 1
        return hits

    if workers == 1:
        exceed = count_chunk(range(m))
    else:
        step = -(-m // workers)
        chunks = [range(lo, min(lo + step, m)) for lo in range(0, m, step)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            exceed = sum(pool.map(count_chunk, chunks))

    return SignificanceResult(
        statistic=i_obs,
        p_value=(1 + exceed) / (m + 1),
        method="permutation",
        permutations_used=m,
        seed=seed,
    )


def _standardize_residuals(residuals: np.ndarray, n_expected: int) -> np.ndarray:
    e = np.asarray(residuals, dtype=float)
    if e.ndim != 1 or e.shape[0] != n_expected:
        raise DimensionMismatch(
            f"residual vector has shape {e.shape}, expected ({n_expected},)"
        )
    if not np.all(np.isfinite(e)):
        raise InputError("residuals contain non-finite values")
    sigma = float(np.sqrt(np.mean((e - e.mean()) ** 2)))
    if sigma == 0.0:
        raise ZeroVariance("residuals are constant; diagnostics are undefined")
    return (e - e.mean()) / sigma


def residual_moran(residuals: np.ndarray, weights: WeightMatrix) -> float:
    """Index of the standardized residuals: e'We with population-sigma e.

    Raises:
        ZeroVariance: if the residuals are constant.
    """
    e = _standardize_residuals(residuals, weights.n)
    return float(e @ (weights.matrix @ e))


def spatial_durbin_watson(residuals: np.ndarray, weights: WeightMatrix) -> DwResult:
    """Spatial Durbin-Watson statistic of the residuals.

    With e standardized by its population sigma,
    DW = 2(n-1)/n * (o'W(e*e) - e'We), where e*e squares elementwise.
    Half of it is exactly Geary's contiguity ratio for symmetric W.

    Raises:
        ZeroVariance: if the residuals are constant.
    """
    n = weights.n
    e = _standardize_residuals(residuals, n)
    w = weights.matrix
    i_e = float(e @ (w @ e))
    weighted_square_sum = float(np.sum(w @ (e * e)))
    dw = (2.0 * (n - 1) / n) * (weighted_square_sum - i_e)
    return DwResult(dw=dw, geary_c=dw / 2.0, i_e=i_e)


def geary_pairwise(residuals: np.ndarray, weights: WeightMatrix) -> float:
    """Geary's contiguity ratio from the literal pairwise double sum.

    Deliberately loop-based and share-nothing with spatial_durbin_watson:
    the two must agree (DW = 2C) to 1e-10 on symmetric weights.

    Raises:
        ZeroVariance: if the residuals are constant.
    """
    n = weights.n
    e = _standardize_residuals(residuals, n)
    w = weights.matrix
    acc = 0.0
    for i in range(n):
        for j in range(n):
            diff = e[i] - e[j]
            acc += w[i, j] * diff * diff
    return (n - 1) * acc / (2.0 * n)


def critical_values_for(
    n: int,
    alpha: float,
    table: dict[tuple[int, float], DwCriticalValues] | None = None,
) -> DwCriticalValues:
    """Look up Durbin-Watson critical values, user table first.

    Raises:
        MissingCriticalValues: if neither the user table nor the bundled
            one covers (n, alpha).
    """
    if table is not None and (n, alpha) in table:
        return table[(n, alpha)]
    if (n, alpha) in BUNDLED_DW_CRITICAL:
        return BUNDLED_DW_CRITICAL[(n, alpha)]
    raise MissingCriticalValues(n=n, alpha=alpha)


def dw_interpret(dw: float, critical: DwCriticalValues) -> str:
    """Classify a Durbin-Watson value against (d_l, d_u) bands.

    Below d_l: positive autocorrelation. Above 4 - d_l: negative.
    Inside [d_u, 4 - d_u]: none. The two remaining bands are
    inconclusive.
    """
    if dw < critical.d_l:
        return "positive"
    if dw > 4.0 - critical.d_l:
        return "negative"
    if critical.d_u <= dw <= 4.0 - critical.d_u:
        return "none"
    return "inconclusive"
