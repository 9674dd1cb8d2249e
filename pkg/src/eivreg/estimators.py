"""Point estimators for the slope and intercept of a linear structural
errors-in-variables model.

Observed pairs (y_i, x_i) follow

    y_i = beta*xi_i + alpha + delta_i,      x_i = xi_i + epsilon_i,

with latent xi_i and mean-zero error pairs (delta_i, epsilon_i).  Slope and
intercept are identified through side knowledge about the error moments,
in one of two forms:

* case 1: Var(delta) = lambda_theta and cov(delta, epsilon) = mu known;
* case 2: Var(epsilon) = theta and cov(delta, epsilon) = mu known.

The corresponding modified least squares estimators are

    beta_1 = (S_yy - lambda_theta) / (S_xy - mu)   if S_xy - mu != 0 and
                                                      S_yy - lambda_theta > 0,
    beta_2 = (S_xy - mu) / (S_xx - theta)          if S_xx - theta > 0,

with alpha_j = y_bar - x_bar * beta_j when the intercept is unknown.  The
side conditions above are the finite-sample "guards"; when one fails the
estimate is meaningless and a GuardViolation is raised (exact sign tests,
no tolerance).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import GuardViolation
from .moments import MomentSet, check_intercept_flag, moment_set

__all__ = [
    "SideInfo",
    "PointEstimate",
    "NaiveEstimates",
    "estimate",
    "estimate_from_moments",
    "naive_ratio_estimates",
    "reliability_ratio",
]

GUARD_SXY_MINUS_MU = "s_xy_minus_mu"
GUARD_SYY_MINUS_LAMBDA_THETA = "s_yy_minus_lambda_theta"
GUARD_SXX_MINUS_THETA = "s_xx_minus_theta"


@dataclass(frozen=True)
class SideInfo:
    """Identifiability side knowledge about the error moments.

    ``case`` selects which moments are treated as known: case 1 carries
    (lambda_theta, mu), case 2 carries (theta, mu).  ``c`` is the intercept
    flag: 0 when the intercept is known to be zero, 1 when it is unknown.
    """

    case: int
    mu: float
    lambda_theta: Optional[float] = None
    theta: Optional[float] = None
    c: int = 1

    def __post_init__(self):
        if self.case not in (1, 2):
            raise ValueError(f"case must be 1 or 2, got {self.case!r}")
        check_intercept_flag(self.c)
        if self.case == 1:
            if self.lambda_theta is None:
                raise ValueError("case 1 requires lambda_theta (Var delta)")
            if self.lambda_theta < 0:
                raise ValueError("lambda_theta must be nonnegative")
        else:
            if self.theta is None:
                raise ValueError("case 2 requires theta (Var epsilon)")
            if self.theta < 0:
                raise ValueError("theta must be nonnegative")

    @classmethod
    def case1(cls, lambda_theta: float, mu: float, c: int = 1) -> "SideInfo":
        return cls(case=1, mu=mu, lambda_theta=lambda_theta, c=c)

    @classmethod
    def case2(cls, theta: float, mu: float, c: int = 1) -> "SideInfo":
        return cls(case=2, mu=mu, theta=theta, c=c)


@dataclass(frozen=True)
class PointEstimate:
    """A slope/intercept fit together with its evaluated guard quantities."""

    beta_hat: float
    alpha_hat: Optional[float]
    j: int
    guards: dict


def guard_quantities(ms: MomentSet, side: SideInfo) -> dict:
    """The guard values an estimate under ``side`` would be checked against."""
    if side.case == 1:
        return {
            GUARD_SXY_MINUS_MU: ms.S_xy - side.mu,
            GUARD_SYY_MINUS_LAMBDA_THETA: ms.S_yy - side.lambda_theta,
        }
    return {GUARD_SXX_MINUS_THETA: ms.S_xx - side.theta}


def estimate_from_moments(ms: MomentSet, side: SideInfo) -> PointEstimate:
    if ms.n < 2:
        raise ValueError(f"need at least 2 observations, got {ms.n}")
    if ms.c != side.c:
        raise ValueError("moment set and side info disagree on the intercept flag")
    guards = guard_quantities(ms, side)
    if side.case == 1:
        den = guards[GUARD_SXY_MINUS_MU]
        num = guards[GUARD_SYY_MINUS_LAMBDA_THETA]
        if den == 0.0:
            raise GuardViolation(GUARD_SXY_MINUS_MU, den)
        if num <= 0.0:
            raise GuardViolation(GUARD_SYY_MINUS_LAMBDA_THETA, num)
        beta_hat = num / den
    else:
        den = guards[GUARD_SXX_MINUS_THETA]
        if den <= 0.0:
            raise GuardViolation(GUARD_SXX_MINUS_THETA, den)
        beta_hat = (ms.S_xy - side.mu) / den
    alpha_hat = ms.y_bar - ms.x_bar * beta_hat if side.c == 1 else None
    return PointEstimate(beta_hat=beta_hat, alpha_hat=alpha_hat, j=side.case, guards=guards)


def estimate(data, side: SideInfo) -> PointEstimate:
    """Modified least squares estimate of (slope, intercept) on a dataset.

    Raises GuardViolation when the side-specific finite-sample conditions
    fail; the exception names the failed guard.
    """
    return estimate_from_moments(moment_set(data.y, data.x, side.c), side)


@dataclass(frozen=True)
class NaiveEstimates:
    """Ratio estimators that ignore the error moments altogether.

    beta_a = S_yy / S_xy and beta_b = S_xy / S_xx.  Both are consistent
    when the latent explanatory variable has infinite variance; with finite
    variance beta_b is the ordinary least squares slope and suffers the
    usual attenuation toward zero.
    """

    beta_a: float
    beta_b: float
    alpha_a: Optional[float]
    alpha_b: Optional[float]


def naive_ratio_estimates(data, c: int = 1) -> NaiveEstimates:
    ms = moment_set(data.y, data.x, c)
    if ms.n < 2:
        raise ValueError(f"need at least 2 observations, got {ms.n}")
    if ms.S_xy == 0.0:
        raise GuardViolation("s_xy", ms.S_xy)
    if ms.S_xx <= 0.0:
        raise GuardViolation("s_xx", ms.S_xx)
    beta_a = ms.S_yy / ms.S_xy
    beta_b = ms.S_xy / ms.S_xx
    alpha_a = ms.y_bar - ms.x_bar * beta_a if c == 1 else None
    alpha_b = ms.y_bar - ms.x_bar * beta_b if c == 1 else None
    return NaiveEstimates(beta_a, beta_b, alpha_a, alpha_b)


def reliability_ratio(xi, var_epsilon: float, c: int = 1) -> float:
    """Signal-to-total variance ratio of the observed explanatory variable.

    For a latent variable with finite variance this is

        (E xi^2 - c (E xi)^2) / (E xi^2 - c (E xi)^2 + Var epsilon),

    assuming uncorrelated error components.  When Var(xi) is infinite the
    errors are negligible in comparison and the ratio is defined to be
    exactly 1.  A population-level quantity: ``xi`` is a distribution
    description, not a sample.
    """
    c = check_intercept_flag(c)
    if var_epsilon < 0:
        raise ValueError("var_epsilon must be nonnegative")
    if not xi.var_finite:
        return 1.0
    signal = xi.second_moment - c * xi.mean ** 2
    if signal == 0.0:
        raise ValueError("degenerate latent variable: zero signal variance")
    return signal / (signal + var_epsilon)
