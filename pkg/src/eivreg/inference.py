"""Pivotal statistics and large-sample confidence intervals for the slope
and intercept of the errors-in-variables model.

All pivots here are Studentized or self-normalized, so they are free of
unknown nuisance parameters beyond the error moments already assumed
known.  Writing a_i for the case-specific per-observation quantities

    case 1:  a_i = (s_{i,yy} - lambda_theta) - b*(s_{i,xy} - mu),
    case 2:  a_i = (s_{i,xy} - mu)           - b*(s_{i,xx} - theta),

with normalizer U = S_xy - mu (case 1) or S_xx - theta (case 2), the slope
pivots at a hypothesized slope b are

    studentized:             sqrt(n)*U*(beta_hat - b) / sqrt(sum (a_i - a_bar)^2 / (n-1)),
    self-normalized:         n*U*(beta_hat - b) / sqrt(sum a_i^2),
    self-normalized plug-in: n*U*(beta_hat - b) / sqrt(sum a_i(beta_hat)^2),

where the numerator is computed through the exact algebraic identity
U*(beta_hat - b) = a_bar(b).  Intercept pivots divide sqrt(n)*(alpha_hat -
alpha) by the centered standard deviation of the residuals

    v_i = (y_i - alpha0) - b*x_i - (x_bar / U) * a_i,

with (b, alpha0) either the true values or the plug-in estimate with
alpha0 = 0; the constant alpha0 cancels from every centered sum, which is
what makes the plug-in variant fully data-based.

Three interval families are provided: the plug-in slope interval and the
intercept interval (symmetric around the estimate), and the quadratic
slope intervals obtained by inverting the known-slope pivots in closed
form for case 1.  A grid/bisection inversion of the same pivots serves as
an independent oracle for the closed-form endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import ZeroNormalizer
from .estimators import SideInfo, estimate_from_moments
from .moments import MomentSet, fsum, moment_set
from .normal import norm_cdf, z_for_gamma

__all__ = [
    "SlopeResiduals",
    "InterceptResiduals",
    "IntervalEstimate",
    "GridSpec",
    "GridInversion",
    "slope_residuals",
    "intercept_residuals",
    "slope_statistic",
    "intercept_statistic",
    "quadratic_pivot",
    "ci_slope_plugin",
    "ci_intercept",
    "ci_slope_quadratic",
    "grid_invert_ci",
    "SLOPE_VARIANTS",
    "INTERCEPT_VARIANTS",
]

SLOPE_VARIANTS = ("studentized", "self_normalized", "self_normalized_plugin")
INTERCEPT_VARIANTS = ("known_slope", "plugin")

DEGENERACY_NONE = "none"
DEGENERACY_DISCRIMINANT = "negative_discriminant"
DEGENERACY_LEADING = "nonpositive_leading_coeff"


def _resolve_z(gamma: Optional[float], z: Optional[float]) -> Tuple[float, float]:
    """Critical value and confidence level from gamma or an explicit z."""
    if (gamma is None) == (z is None):
        raise ValueError("exactly one of gamma and z must be given")
    if gamma is not None:
        return z_for_gamma(gamma), 1.0 - gamma
    if z < 0:
        raise ValueError(f"z must be nonnegative, got {z!r}")
    return float(z), 2.0 * norm_cdf(z) - 1.0


def _slope_parts(ms: MomentSet, side: SideInfo) -> Tuple[float, np.ndarray, np.ndarray]:
    """Normalizer U and arrays (ay, ax) with slope terms ay - b*ax."""
    if side.case == 1:
        return ms.S_xy - side.mu, ms.s_yy - side.lambda_theta, ms.s_xy - side.mu
    return ms.S_xx - side.theta, ms.s_xy - side.mu, ms.s_xx - side.theta


def _moments(data, side: SideInfo) -> MomentSet:
    ms = moment_set(data.y, data.x, side.c)
    if ms.n < 2:
        raise ValueError(f"need at least 2 observations, got {ms.n}")
    return ms


@dataclass(frozen=True)
class SlopeResiduals:
    """Per-observation slope residual terms a_i and their normalizer."""

    j: int
    kind: str  # "known_beta" or "plugin"
    beta_used: float
    U: float
    terms: np.ndarray
    term_mean: float


def _slope_residuals_ms(ms: MomentSet, side: SideInfo, beta: Optional[float]) -> SlopeResiduals:
    U, ay, ax = _slope_parts(ms, side)
    if beta is None:
        b = estimate_from_moments(ms, side).beta_hat
        kind = "plugin"
    else:
        b = float(beta)
        kind = "known_beta"
    terms = ay - b * ax
    return SlopeResiduals(j=side.case, kind=kind, beta_used=b, U=U,
                          terms=terms, term_mean=fsum(terms) / ms.n)


def slope_residuals(data, side: SideInfo, *, beta: Optional[float] = None) -> SlopeResiduals:
    """Slope residual terms; pass ``beta`` for the known-slope version,
    omit it to plug in the estimate (propagates its guard checks)."""
    return _slope_residuals_ms(_moments(data, side), side, beta)


@dataclass(frozen=True)
class InterceptResiduals:
    """Per-observation intercept residual terms (up to an additive constant)."""

    j: int
    kind: str
    terms: np.ndarray
    term_mean: float


def _intercept_residuals_ms(ms: MomentSet, side: SideInfo, y: np.ndarray, x: np.ndarray,
                            beta: Optional[float], alpha: Optional[float]) -> InterceptResiduals:
    if side.c != 1:
        raise ValueError("intercept residuals require the unknown-intercept model (c = 1)")
    if (beta is None) != (alpha is None):
        raise ValueError("pass both beta and alpha for known values, or neither to plug in")
    r = _slope_residuals_ms(ms, side, beta)
    alpha0 = 0.0 if alpha is None else float(alpha)
    terms = (y - alpha0) - r.beta_used * x - (ms.x_bar / r.U) * r.terms
    return InterceptResiduals(j=side.case, kind=r.kind, terms=terms,
                              term_mean=fsum(terms) / ms.n)


def intercept_residuals(data, side: SideInfo, *, beta: Optional[float] = None,
                        alpha: Optional[float] = None) -> InterceptResiduals:
    """Intercept residual terms.

    Only centered sums of these terms enter any statistic, so the plug-in
    version sets the unknown intercept to 0; the constant cancels.
    """
    ms = _moments(data, side)
    return _intercept_residuals_ms(ms, side, data.y, data.x, beta, alpha)


def slope_statistic(data, side: SideInfo, beta: float, variant: str) -> float:
    """Value of a slope pivot at the hypothesized slope ``beta``.

    Raises ZeroNormalizer when the normalizing sum of squares vanishes
    (for example on exact-line data).
    """
    if variant not in SLOPE_VARIANTS:
        raise ValueError(f"unknown slope variant {variant!r}")
    ms = _moments(data, side)
    known = _slope_residuals_ms(ms, side, beta)
    n = ms.n
    # Exact identity: U * (beta_hat - beta) equals the mean of the
    # known-slope terms, so the numerator never goes through beta_hat.
    if variant == "studentized":
        ss = fsum((known.terms - known.term_mean) ** 2)
        if ss == 0.0:
            raise ZeroNormalizer("centered slope residuals are all zero")
        return math.sqrt(n) * known.term_mean / math.sqrt(ss / (n - 1))
    if variant == "self_normalized":
        ss = fsum(known.terms ** 2)
        if ss == 0.0:
            raise ZeroNormalizer("slope residuals are all zero")
        return n * known.term_mean / math.sqrt(ss)
    plug = _slope_residuals_ms(ms, side, None)
    ss = fsum(plug.terms ** 2)
    if ss == 0.0:
        raise ZeroNormalizer("plug-in slope residuals are all zero")
    return n * known.term_mean / math.sqrt(ss)


def intercept_statistic(data, side: SideInfo, alpha: float, *, beta: Optional[float] = None,
                        variant: str = "plugin") -> float:
    """Value of an intercept pivot at the hypothesized intercept ``alpha``.

    ``known_slope`` Studentizes with residuals at the true (beta, alpha);
    ``plugin`` uses the fully data-based residuals.  Both numerators are
    sqrt(n) * (alpha_hat - alpha).
    """
    if variant not in INTERCEPT_VARIANTS:
        raise ValueError(f"unknown intercept variant {variant!r}")
    if side.c != 1:
        raise ValueError("intercept statistics require c = 1")
    ms = _moments(data, side)
    est = estimate_from_moments(ms, side)
    if variant == "known_slope":
        if beta is None:
            raise ValueError("known_slope variant requires beta")
        res = _intercept_residuals_ms(ms, side, data.y, data.x, beta, alpha)
    else:
        res = _intercept_residuals_ms(ms, side, data.y, data.x, None, None)
    ss = fsum((res.terms - res.term_mean) ** 2)
    if ss == 0.0:
        raise ZeroNormalizer("centered intercept residuals are all zero")
    n = ms.n
    return math.sqrt(n) * (est.alpha_hat - alpha) / math.sqrt(ss / (n - 1))


@dataclass(frozen=True)
class IntervalEstimate:
    """A confidence interval with its degeneracy status.

    For the quadratic family the endpoints are unset when the inversion
    degenerates (the acceptance region is not a bounded interval); the
    ``degeneracy`` field names which of the two finite-sample events
    failed.  Degeneracy is reported, never silently widened to the whole
    line.
    """

    center: float
    lower: Optional[float]
    upper: Optional[float]
    level: float
    family: str
    j: int
    k: Optional[int] = None
    degeneracy: str = DEGENERACY_NONE


def ci_slope_plugin(data, side: SideInfo, gamma: Optional[float] = None, *,
                    z: Optional[float] = None) -> IntervalEstimate:
    """Symmetric slope interval from the self-normalized plug-in pivot:
    beta_hat -+ z * sqrt(sum a_i(beta_hat)^2) / (n*|U|)."""
    z, level = _resolve_z(gamma, z)
    ms = _moments(data, side)
    plug = _slope_residuals_ms(ms, side, None)
    half = z * math.sqrt(fsum(plug.terms ** 2)) / (ms.n * abs(plug.U))
    return IntervalEstimate(center=plug.beta_used, lower=plug.beta_used - half,
                            upper=plug.beta_used + half, level=level,
                            family="slope_plugin", j=side.case)


def ci_intercept(data, side: SideInfo, gamma: Optional[float] = None, *,
                 z: Optional[float] = None) -> IntervalEstimate:
    """Symmetric intercept interval:
    alpha_hat -+ z * sqrt(sum (v_i - v_bar)^2) / sqrt(n*(n-1))."""
    z, level = _resolve_z(gamma, z)
    if side.c != 1:
        raise ValueError("intercept interval requires c = 1")
    ms = _moments(data, side)
    est = estimate_from_moments(ms, side)
    res = _intercept_residuals_ms(ms, side, data.y, data.x, None, None)
    ss = fsum((res.terms - res.term_mean) ** 2)
    half = z * math.sqrt(ss) / math.sqrt(ms.n * (ms.n - 1))
    return IntervalEstimate(center=est.alpha_hat, lower=est.alpha_hat - half,
                            upper=est.alpha_hat + half, level=level,
                            family="intercept", j=side.case)


def _quadratic_coefficients(ms: MomentSet, side: SideInfo, k: int, z: float, beta1: float):
    """Coefficients of the inversion quadratic A*b^2 - 2*N*b + C <= 0.

    k = 1 inverts the Studentized pivot (terms centered at their sample
    means, degrees-of-freedom factor n*(n-1)); k = 2 the self-normalized
    pivot (raw terms, factor n^2).
    """
    n = ms.n
    if k == 1:
        gyy, gxy, f = ms.S_yy, ms.S_xy, n * (n - 1)
    else:
        gyy, gxy, f = side.lambda_theta, side.mu, n * n
    ay = ms.s_yy - gyy
    ax = ms.s_xy - gxy
    syy2 = fsum(ay * ay)
    sxy2 = fsum(ax * ax)
    cross = fsum(ay * ax)
    z2 = z * z
    fu2 = f * (ms.S_xy - side.mu) ** 2
    A = fu2 - z2 * sxy2
    N = fu2 * beta1 - z2 * cross
    C = fu2 * beta1 ** 2 - z2 * syy2
    # Quarter discriminant N^2 - A*C, written as the explicit difference of
    # a squared-residual term and a Gram determinant so the cancellation is
    # controlled.
    resid2 = fsum((ay - beta1 * ax) ** 2)
    d4 = z2 * fu2 * resid2 - z2 * z2 * (syy2 * sxy2 - cross * cross)
    return A, N, C, d4


def ci_slope_quadratic(data, side: SideInfo, k: int = 1, gamma: Optional[float] = None, *,
                       z: Optional[float] = None) -> IntervalEstimate:
    """Closed-form slope interval from inverting a known-slope pivot (case 1).

    The acceptance region {b : |pivot(b)| <= z} is a quadratic inequality
    in b; when its leading coefficient is positive and its discriminant
    nonnegative the region is the interval between the two roots.
    Otherwise the result carries the degeneracy kind and no endpoints.
    """
    if side.case != 1:
        raise ValueError("quadratic slope intervals are defined for case 1 side info")
    if k not in (1, 2):
        raise ValueError(f"k must be 1 or 2, got {k!r}")
    z, level = _resolve_z(gamma, z)
    ms = _moments(data, side)
    est = estimate_from_moments(ms, side)
    beta1 = est.beta_hat
    A, N, C, d4 = _quadratic_coefficients(ms, side, k, z, beta1)
    if A <= 0.0:
        return IntervalEstimate(center=beta1, lower=None, upper=None, level=level,
                                family="slope_quadratic", j=1, k=k,
                                degeneracy=DEGENERACY_LEADING)
    if d4 < 0.0:
        return IntervalEstimate(center=beta1, lower=None, upper=None, level=level,
                                family="slope_quadratic", j=1, k=k,
                                degeneracy=DEGENERACY_DISCRIMINANT)
    sd = math.sqrt(d4)
    # Roots (N -+ sd)/A, taking the subtraction-free expression for the
    # root that would otherwise cancel (root product is C/A).
    if N > 0.0:
        upper = (N + sd) / A
        lower = C / (N + sd)
    elif N < 0.0:
        lower = (N - sd) / A
        upper = C / (N - sd)
    else:
        upper = sd / A
        lower = -upper
    return IntervalEstimate(center=beta1, lower=lower, upper=upper, level=level,
                            family="slope_quadratic", j=1, k=k)


def _pivot_arrays(ms: MomentSet, side: SideInfo, k: int):
    n = ms.n
    if k == 1:
        ay = ms.s_yy - ms.S_yy
        ax = ms.s_xy - ms.S_xy
        num_factor = math.sqrt(n)
        den_scale = 1.0 / math.sqrt(n - 1)
    else:
        ay = ms.s_yy - side.lambda_theta
        ax = ms.s_xy - side.mu
        num_factor = float(n)
        den_scale = 1.0
    return ay, ax, num_factor, den_scale


def quadratic_pivot(data, side: SideInfo, k: int, beta: float) -> float:
    """|pivot| the quadratic interval of variant ``k`` inverts, at slope ``beta``.

    k = 1 is the Studentized pivot with terms centered at their sample
    means; k = 2 the self-normalized pivot with raw terms.
    """
    if side.case != 1:
        raise ValueError("pivot defined for case 1 side info")
    if k not in (1, 2):
        raise ValueError(f"k must be 1 or 2, got {k!r}")
    ms = _moments(data, side)
    est = estimate_from_moments(ms, side)
    ay, ax, num_factor, den_scale = _pivot_arrays(ms, side, k)
    t = ay - beta * ax
    den = math.sqrt(fsum(t * t)) * den_scale
    if den == 0.0:
        raise ZeroNormalizer("pivot normalizer is zero")
    U = ms.S_xy - side.mu
    return num_factor * abs(U) * abs(est.beta_hat - beta) / den


@dataclass(frozen=True)
class GridSpec:
    """Explicit search bracket and step for the grid inversion."""

    lo: float
    hi: float
    step: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("grid needs lo < hi")
        if not 0 < self.step <= (self.hi - self.lo):
            raise ValueError("grid step must be positive and at most the bracket width")


@dataclass(frozen=True)
class GridInversion:
    """Acceptance set of a pivot inversion located on a grid.

    ``intervals`` lists the connected components (normally exactly one),
    with finite boundaries sharpened by bisection on the raw pivot.
    ``unbounded`` is set when the set still touches the bracket edge after
    all expansions, meaning it is not a bounded interval.
    """

    intervals: tuple
    z: float
    step: float
    expansions: int
    unbounded: bool


_GRID_POINTS = 20001
_CHUNK_ELEMENTS = 2_000_000


def _acceptance_mask(grid: np.ndarray, ay: np.ndarray, ax: np.ndarray,
                     num_factor: float, den_scale: float,
                     U: float, beta1: float, z: float) -> np.ndarray:
    """Membership num(b) <= z*den(b) evaluated directly from the terms."""
    n_terms = ay.size
    mask = np.empty(grid.size, dtype=bool)
    block = max(1, _CHUNK_ELEMENTS // n_terms)
    for start in range(0, grid.size, block):
        b = grid[start:start + block]
        t = ay[None, :] - b[:, None] * ax[None, :]
        ss = np.einsum("ij,ij->i", t, t)
        den = np.sqrt(ss) * den_scale
        num = num_factor * abs(U) * np.abs(beta1 - b)
        mask[start:start + block] = num <= z * den
    return mask


def _bisect_boundary(b_in: float, b_out: float, ay, ax, num_factor, den_scale,
                     U, beta1, z, iterations: int = 80) -> float:
    """Boundary of the acceptance set between an inside and an outside point."""

    def g(b):
        t = ay - b * ax
        den = math.sqrt(float(np.dot(t, t))) * den_scale
        return num_factor * abs(U) * abs(beta1 - b) - z * den

    for _ in range(iterations):
        mid = 0.5 * (b_in + b_out)
        if mid == b_in or mid == b_out:
            break
        if g(mid) <= 0.0:
            b_in = mid
        else:
            b_out = mid
    return b_in


def grid_invert_ci(data, side: SideInfo, k: int = 1, gamma: Optional[float] = None, *,
                   z: Optional[float] = None, grid: Optional[GridSpec] = None,
                   max_expansions: int = 40) -> GridInversion:
    """Locate {b : |pivot(b)| <= z} by direct evaluation over a grid.

    Serves as an oracle for the closed-form quadratic intervals: it never
    touches the quadratic algebra, evaluating the raw pivot at every grid
    point instead.  The default bracket is the plug-in slope interval
    inflated tenfold with a grid of 10^-4 of its width, doubled (around
    the estimate) whenever the acceptance set touches its edge.  Finite
    component boundaries are then refined by bisection, so the returned
    endpoints are far more accurate than the grid step.
    """
    if side.case != 1:
        raise ValueError("grid inversion is defined for case 1 side info")
    if k not in (1, 2):
        raise ValueError(f"k must be 1 or 2, got {k!r}")
    z, _level = _resolve_z(gamma, z)
    ms = _moments(data, side)
    est = estimate_from_moments(ms, side)
    beta1 = est.beta_hat
    U = ms.S_xy - side.mu

    if z == 0.0:
        # |pivot| <= 0 only at the estimate itself.
        return GridInversion(intervals=((beta1, beta1),), z=0.0, step=0.0,
                             expansions=0, unbounded=False)

    ay, ax, num_factor, den_scale = _pivot_arrays(ms, side, k)

    if grid is not None:
        lo, hi, step = grid.lo, grid.hi, grid.step
    else:
        plug = _slope_residuals_ms(ms, side, None)
        half = z * math.sqrt(fsum(plug.terms ** 2)) / (ms.n * abs(U))
        if half == 0.0:
            half = 1e-8 * max(1.0, abs(beta1))
        half *= 10.0
        lo, hi = beta1 - half, beta1 + half
        step = (hi - lo) / (_GRID_POINTS - 1)

    expansions = 0
    while True:
        npts = int(round((hi - lo) / step)) + 1
        pts = np.linspace(lo, hi, npts)
        mask = _acceptance_mask(pts, ay, ax, num_factor, den_scale, U, beta1, z)
        touches = (mask.size and (mask[0] or mask[-1]))
        if not touches or grid is not None or expansions >= max_expansions:
            break
        expansions += 1
        width = hi - lo
        lo -= width / 2
        hi += width / 2
        step = (hi - lo) / (_GRID_POINTS - 1)

    idx = np.flatnonzero(mask)
    intervals = []
    unbounded = False
    if idx.size:
        breaks = np.flatnonzero(np.diff(idx) > 1)
        starts = np.concatenate(([0], breaks + 1))
        ends = np.concatenate((breaks, [idx.size - 1]))
        for s, e in zip(starts, ends):
            i_lo, i_hi = idx[s], idx[e]
            left = pts[i_lo]
            right = pts[i_hi]
            if i_lo > 0:
                left = _bisect_boundary(pts[i_lo], pts[i_lo - 1], ay, ax,
                                        num_factor, den_scale, U, beta1, z)
            else:
                unbounded = True
            if i_hi < pts.size - 1:
                right = _bisect_boundary(pts[i_hi], pts[i_hi + 1], ay, ax,
                                         num_factor, den_scale, U, beta1, z)
            else:
                unbounded = True
            intervals.append((left, right))
    return GridInversion(intervals=tuple(intervals), z=z, step=step,
                         expansions=expansions, unbounded=unbounded)
