"""Synthetic size vectors drawn from the autoregressive model.

Solves (Id - rho*W) x = a*o + eta directly, so the generated field obeys
the model by construction. Used by property tests and the demo verbs; in
real analyses the size vector comes from data files instead.
"""

from __future__ import annotations

import numpy as np

from .eigen import symmetric_eigenvalues
from .errors import DegenerateZeroField, DimensionMismatch, InputError, SingularResolvent
from .spatial_data import RawSizeVector, WeightMatrix, weights_from_distances

RESOLVENT_TOL = 1e-9


def simulate_sar(
    n: int,
    dist_or_weights: np.ndarray | WeightMatrix,
    a: float,
    rho: float,
    noise_sd: float,
    seed: int | None = None,
) -> RawSizeVector:
    """Draw one raw size vector from the autoregressive model.

    Args:
        n: element count; must match the supplied matrix.
        dist_or_weights: either a ready WeightMatrix or a raw distance
            matrix to be inverted and normalized first.
        a: intercept of the generating model.
        rho: autoregressive coefficient; must stay away from every
            reciprocal eigenvalue of W.
        noise_sd: standard deviation of the i.i.d. normal noise.
        seed: RNG seed; None draws fresh entropy.

    Raises:
        SingularResolvent: if rho sits at (or within 1e-9 of) a
            reciprocal eigenvalue, where Id - rho*W is singular.
        DegenerateZeroField: if a = 0 and noise_sd = 0 (the solution is
            identically zero and cannot be standardized downstream).
        InputError: if noise_sd is negative.
        DimensionMismatch: if n disagrees with the matrix shape.
    """
    if noise_sd < 0.0:
        raise InputError(f"noise_sd must be nonnegative, got {noise_sd}")
    if a == 0.0 and noise_sd == 0.0:
        raise DegenerateZeroField(
            "a=0 with noise_sd=0 solves to the zero vector; nothing to analyze"
        )
    if isinstance(dist_or_weights, WeightMatrix):
        weights = dist_or_weights
    else:
        weights = weights_from_distances(np.asarray(dist_or_weights, dtype=float))
    if weights.n != n:
        raise DimensionMismatch(
            f"requested n={n} but the matrix is {weights.n}x{weights.n}"
        )

    spectrum = symmetric_eigenvalues(weights.matrix)
    gaps = np.abs(1.0 - rho * spectrum.values)
    if float(gaps.min()) <= RESOLVENT_TOL:
        raise SingularResolvent(
            f"rho={rho} is within {RESOLVENT_TOL:g} of a reciprocal eigenvalue"
        )

    rng = np.random.default_rng(seed)
    field = a * np.ones(n)
    if noise_sd > 0.0:
        field = field + rng.normal(0.0, noise_sd, size=n)
    x = np.linalg.solve(np.eye(n) - rho * weights.matrix, field)
    return RawSizeVector.from_values(x)
