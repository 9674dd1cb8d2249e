"""Data generators: latent explanatory variables, correlated error pairs
and full model simulation.

The latent-variable menu covers both regimes the large-sample theory
distinguishes: finite-variance families (normal, uniform, centered
exponential) and two infinite-variance families with tail exponent exactly
2 (Student t with 2 degrees of freedom, symmetric Pareto with index 2).
The latter still lie in the domain of attraction of the normal law, with a
slowly varying normalizer growing to infinity; heavier tails would leave
that class and are deliberately not offered.

Randomness is counter-based and splittable: every stream is derived from
(seed, path) through ``numpy``'s SeedSequence/Philox machinery, so
parallel replications can never perturb each other and identical inputs
reproduce bit-identical draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .moments import check_intercept_flag

__all__ = [
    "XiDistribution",
    "ErrorSpec",
    "ModelSpec",
    "Latent",
    "Dataset",
    "substream",
    "sample_xi",
    "sample_errors",
    "simulate_dataset",
    "ROLE_XI",
    "ROLE_ERRORS",
]

# Sub-stream roles within one simulated dataset.  The latent draws depend
# on the xi role only, so changing the error specification leaves them
# bit-identical.
ROLE_XI = 0
ROLE_ERRORS = 1

SeedLike = Union[int, Sequence[int]]

_XI_FAMILIES = {
    "normal": ("mean", "sd"),
    "uniform": ("a", "b"),
    "centered_exponential": ("rate",),
    "student_t2": ("scale", "shift"),
    "symmetric_pareto2": ("scale", "shift"),
}

_INFINITE_VAR_FAMILIES = ("student_t2", "symmetric_pareto2")


@dataclass(frozen=True)
class XiDistribution:
    """Distribution of the latent explanatory variable.

    All families are nondegenerate (positive spread) and have a finite
    first absolute moment.  ``var_finite`` is derived from the family.
    """

    family: str
    params: tuple

    def __post_init__(self):
        if self.family not in _XI_FAMILIES:
            raise ValueError(f"unknown xi family {self.family!r}")
        names = _XI_FAMILIES[self.family]
        if len(self.params) != len(names):
            raise ValueError(
                f"{self.family} takes parameters {names}, got {self.params!r}")
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if self.family == "normal" and self.params[1] <= 0:
            raise ValueError("normal sd must be positive")
        if self.family == "uniform" and self.params[1] <= self.params[0]:
            raise ValueError("uniform needs a < b")
        if self.family == "centered_exponential" and self.params[0] <= 0:
            raise ValueError("exponential rate must be positive")
        if self.family in _INFINITE_VAR_FAMILIES and self.params[0] <= 0:
            raise ValueError("scale must be positive")

    @classmethod
    def normal(cls, mean: float, sd: float) -> "XiDistribution":
        return cls("normal", (mean, sd))

    @classmethod
    def uniform(cls, a: float, b: float) -> "XiDistribution":
        return cls("uniform", (a, b))

    @classmethod
    def centered_exponential(cls, rate: float) -> "XiDistribution":
        return cls("centered_exponential", (rate,))

    @classmethod
    def student_t2(cls, scale: float = 1.0, shift: float = 0.0) -> "XiDistribution":
        return cls("student_t2", (scale, shift))

    @classmethod
    def symmetric_pareto2(cls, scale: float = 1.0, shift: float = 0.0) -> "XiDistribution":
        return cls("symmetric_pareto2", (scale, shift))

    @property
    def var_finite(self) -> bool:
        return self.family not in _INFINITE_VAR_FAMILIES

    @property
    def mean(self) -> float:
        if self.family == "normal":
            return self.params[0]
        if self.family == "uniform":
            return 0.5 * (self.params[0] + self.params[1])
        if self.family == "centered_exponential":
            return 0.0
        # Both heavy-tailed families are symmetric about their shift.
        return self.params[1]

    @property
    def variance(self) -> Optional[float]:
        """Population variance; None for the infinite-variance families."""
        if self.family == "normal":
            return self.params[1] ** 2
        if self.family == "uniform":
            return (self.params[1] - self.params[0]) ** 2 / 12.0
        if self.family == "centered_exponential":
            return 1.0 / self.params[0] ** 2
        return None

    @property
    def second_moment(self) -> Optional[float]:
        var = self.variance
        if var is None:
            return None
        return var + self.mean ** 2


@dataclass(frozen=True)
class ErrorSpec:
    """Joint distribution of the mean-zero error pair (delta, epsilon).

    The covariance matrix [[lambda_theta, mu], [mu, theta]] must be
    positive definite.  ``base`` selects the standardized shape the
    triangular factor is applied to; both choices have finite fourth
    moments.
    """

    lambda_theta: float
    theta: float
    mu: float
    base: str = "gaussian"

    def __post_init__(self):
        if self.base not in ("gaussian", "scaled_uniform"):
            raise ValueError(f"unknown error base {self.base!r}")
        if self.lambda_theta <= 0 or self.theta <= 0:
            raise ValueError("error variances must be positive")
        if self.lambda_theta * self.theta - self.mu ** 2 <= 0:
            raise ValueError(
                "error covariance matrix is not positive definite: "
                f"lambda_theta*theta - mu^2 = "
                f"{self.lambda_theta * self.theta - self.mu ** 2!r}")

    def cholesky(self) -> tuple:
        """Entries (l11, l21, l22) of the lower-triangular factor."""
        l11 = math.sqrt(self.lambda_theta)
        l21 = self.mu / l11
        l22 = math.sqrt(self.theta - self.mu ** 2 / self.lambda_theta)
        return l11, l21, l22


@dataclass(frozen=True)
class ModelSpec:
    """Ground-truth description of a simulated model."""

    beta: float
    alpha: float
    c: int
    xi: XiDistribution
    err: ErrorSpec

    def __post_init__(self):
        check_intercept_flag(self.c)
        if self.c == 0 and self.alpha != 0.0:
            raise ValueError("alpha must be 0 when the intercept is known to be zero")

    def reliability_ratio(self) -> float:
        from .estimators import reliability_ratio
        return reliability_ratio(self.xi, self.err.theta, self.c)


@dataclass(frozen=True)
class Latent:
    """Simulation truth carried alongside a dataset.

    ``delta`` and ``epsilon`` are stored as the exact float residuals of
    the generated series (delta = y - beta*xi - alpha, epsilon = x - xi,
    evaluated in that order), so those identities reproduce them bitwise.
    They differ from the raw noise draws by at most a rounding ulp.
    """

    xi: np.ndarray
    delta: np.ndarray
    epsilon: np.ndarray


@dataclass(frozen=True)
class Dataset:
    """Observed pairs, optionally carrying the latent simulation truth."""

    y: np.ndarray
    x: np.ndarray
    latent: Optional[Latent] = None

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float)
        x = np.asarray(self.x, dtype=float)
        if y.ndim != 1 or x.ndim != 1:
            raise ValueError("y and x must be one-dimensional")
        if y.size != x.size:
            raise ValueError(f"length mismatch: y has {y.size}, x has {x.size}")
        if y.size == 0:
            raise ValueError("dataset must not be empty")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "x", x)

    @property
    def n(self) -> int:
        return self.y.size


def substream(seed: SeedLike, *path: int) -> np.random.Generator:
    """Deterministic child stream of ``seed`` at ``path``.

    Distinct paths give statistically independent streams; the mapping is
    pure, so concurrent callers with distinct paths are safe.
    """
    entropy = seed if isinstance(seed, int) else list(seed)
    ss = np.random.SeedSequence(entropy, spawn_key=tuple(path))
    return np.random.Generator(np.random.Philox(ss))


def sample_xi(dist: XiDistribution, n: int, rng: np.random.Generator) -> np.ndarray:
    """n independent draws of the latent explanatory variable."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    if dist.family == "normal":
        mean, sd = dist.params
        return mean + sd * rng.standard_normal(n)
    if dist.family == "uniform":
        a, b = dist.params
        return rng.uniform(a, b, n)
    if dist.family == "centered_exponential":
        rate = dist.params[0]
        return rng.exponential(1.0 / rate, n) - 1.0 / rate
    if dist.family == "student_t2":
        scale, shift = dist.params
        # t with 2 degrees of freedom: normal over sqrt(chi-square_2 / 2).
        z = rng.standard_normal(n)
        w = rng.chisquare(2.0, n)
        return shift + scale * z / np.sqrt(w / 2.0)
    scale, shift = dist.params
    # P(|xi - shift| > t) = (scale/t)^2 for t >= scale, symmetric sign.
    u = 1.0 - rng.random(n)  # uniform on (0, 1]
    magnitude = scale / np.sqrt(u)
    sign = 2.0 * rng.integers(0, 2, n).astype(float) - 1.0
    return shift + sign * magnitude


def sample_errors(err: ErrorSpec, n: int, rng: np.random.Generator) -> tuple:
    """n i.i.d. mean-zero (delta, epsilon) pairs with the prescribed covariance."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    l11, l21, l22 = err.cholesky()
    if err.base == "gaussian":
        w1 = rng.standard_normal(n)
        w2 = rng.standard_normal(n)
    else:
        half = math.sqrt(3.0)  # uniform on [-sqrt(3), sqrt(3)] has unit variance
        w1 = rng.uniform(-half, half, n)
        w2 = rng.uniform(-half, half, n)
    delta = l11 * w1
    epsilon = l21 * w1 + l22 * w2
    return delta, epsilon


def simulate_dataset(spec: ModelSpec, n: int, seed: SeedLike) -> Dataset:
    """Simulate n observations from ``spec``, carrying the latent truth.

    The xi draws consume the (seed, ROLE_XI) sub-stream only and the error
    draws the (seed, ROLE_ERRORS) sub-stream, so the two are independent
    and the latent series is unaffected by the error specification.
    """
    xi = sample_xi(spec.xi, n, substream(seed, ROLE_XI))
    delta, epsilon = sample_errors(spec.err, n, substream(seed, ROLE_ERRORS))
    y = spec.beta * xi + spec.alpha + delta
    x = xi + epsilon
    return Dataset(y=y, x=x, latent=Latent(
        xi=xi,
        delta=y - spec.beta * xi - spec.alpha,
        epsilon=x - xi,
    ))
