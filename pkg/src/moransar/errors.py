"""Exception hierarchy for the moransar package.

Three branches map onto the CLI exit codes: input/validation problems
(exit 1), numerical failures such as identity violations or eigensolver
non-convergence (exit 2), and I/O problems, which are plain OSError
(exit 3).
"""

from __future__ import annotations


class MoranSarError(Exception):
    """Base class for all package-specific errors."""


class InputError(MoranSarError):
    """Invalid or degenerate input data or configuration."""


class NumericalError(MoranSarError):
    """A numerical contract was violated (convergence, identity slack)."""


# ---------------------------------------------------------------------------
# Input / validation errors
# ---------------------------------------------------------------------------

class NonPositiveValue(InputError):
    """A value that must be strictly positive is zero or negative."""

    def __init__(self, index: int, value: float):
        self.index = index
        self.value = value
        super().__init__(f"value at index {index} is not positive: {value!r}")


class ZeroVariance(InputError):
    """All values are equal; standardization is undefined."""


class ZeroDistance(InputError):
    """An off-diagonal distance is zero; its reciprocal is undefined."""

    def __init__(self, i: int, j: int):
        self.i = i
        self.j = j
        super().__init__(f"distance between elements {i} and {j} is zero")


class AsymmetricInput(InputError):
    """A matrix required to be symmetric differs too much from its transpose."""

    def __init__(self, i: int, j: int, rel_asym: float):
        self.i = i
        self.j = j
        self.rel_asym = rel_asym
        super().__init__(
            f"entries ({i},{j}) and ({j},{i}) differ by relative {rel_asym:.3e} "
            f"(strict symmetry requested)"
        )


class DegenerateMatrix(InputError):
    """A proximity matrix with zero total weight cannot be normalized."""


class DimensionMismatch(InputError):
    """Vector/matrix dimensions do not agree."""


class DegenerateRegression(InputError):
    """The regressor is constant; the slope is undefined."""


class DegenerateLag(InputError):
    """The spatial lag vector is constant; the autoregression is undefined."""


class ZeroMoran(InputError):
    """Moran's index is zero; a closed form dividing by it is undefined."""


class ZeroRSquared(InputError):
    """R-squared is (numerically) zero; an identity dividing by it degenerates."""


class DegenerateSE(InputError):
    """A standard error of zero (exact fit) makes the t statistic undefined."""


class NotSymmetric(InputError):
    """The eigensolver was handed a matrix that is not symmetric."""


class MissingCriticalValues(InputError):
    """No Durbin-Watson critical values for the requested (n, alpha)."""

    def __init__(self, n: int, alpha: float):
        self.n = n
        self.alpha = alpha
        super().__init__(
            f"no Durbin-Watson critical values for n={n}, alpha={alpha}; "
            f"supply them via a critical-values CSV"
        )


class SingularResolvent(InputError):
    """rho equals a reciprocal eigenvalue of W; (Id - rho W) is singular."""


class DegenerateZeroField(InputError):
    """Simulation with zero intercept and zero noise yields the zero vector."""


class ParseError(InputError):
    """A CSV input file could not be parsed."""

    def __init__(self, path: str, line: int, message: str):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


class DuplicateId(InputError):
    """An element identifier occurs more than once."""


class IdMismatch(InputError):
    """Size-vector ids and distance-matrix ids do not match."""


class MissingPair(InputError):
    """A long-format distance list lacks an element pair."""

    def __init__(self, id_a: str, id_b: str):
        self.id_a = id_a
        self.id_b = id_b
        super().__init__(f"no distance given for pair ({id_a}, {id_b})")


class NonSquare(InputError):
    """A matrix-format distance file is not square."""


# ---------------------------------------------------------------------------
# Numerical errors
# ---------------------------------------------------------------------------

class NoConvergence(NumericalError):
    """The eigensolver did not reach its tolerance within the sweep budget."""

    def __init__(self, residual: float, sweeps: int):
        self.residual = residual
        self.sweeps = sweeps
        super().__init__(
            f"Jacobi sweeps did not converge after {sweeps} sweeps "
            f"(off-diagonal residual {residual:.3e})"
        )


class IdentityViolation(NumericalError):
    """An exact algebraic identity exceeded its numeric tolerance."""

    def __init__(self, name: str, slack: float, tolerance: float):
        self.name = name
        self.slack = slack
        self.tolerance = tolerance
        super().__init__(f"identity '{name}' violated: |slack|={slack:.3e} > {tolerance:.1e}")
