"""Deterministic replication engine for the asymptotic claims.

Experiments:

* ``coverage14`` / ``coverage15`` / ``coverage16``: empirical coverage of
  the plug-in slope interval, the intercept interval and the quadratic
  slope interval.
* ``normality``: Kolmogorov-Smirnov distance of a chosen pivot, evaluated
  at the true parameter, to the standard normal.
* ``rate``: medians of the raw and normalizer-scaled estimation errors,
  for checking convergence rates across sample sizes.
* ``naive_consistency``: error medians of the moment-ratio estimators that
  ignore the error variances, next to the modified estimator's.
* ``degeneracy``: how often the quadratic interval inversion degenerates.

Every replication draws from the sub-stream keyed by (seed, n,
replication index), so adding sample sizes or replications never perturbs
existing draws and any worker count produces bit-identical reports.
Guard violations and degenerate inversions are counted per replication,
never raised; coverage is computed over the non-failed replications with
the failure rate reported alongside, so covered + missed + failed always
equals the replication count.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .diagnostics import empirical_bn, ks_distance_to_normal
from .errors import GuardViolation, ZeroNormalizer
from .estimators import SideInfo, estimate, naive_ratio_estimates
from .inference import (
    DEGENERACY_NONE,
    ci_intercept,
    ci_slope_plugin,
    ci_slope_quadratic,
    intercept_statistic,
    slope_statistic,
)
from .moments import fsum
from .samplers import ModelSpec, simulate_dataset

__all__ = ["ExperimentConfig", "ExperimentReport", "run_experiment",
           "EXPERIMENTS", "PIVOTS", "WORKERS_ENV"]

EXPERIMENTS = ("coverage14", "coverage15", "coverage16", "normality",
               "rate", "naive_consistency", "degeneracy")

PIVOTS = ("slope_studentized", "slope_self_normalized",
          "slope_self_normalized_plugin", "intercept_known_slope",
          "intercept_plugin")

# Worker-count override; the result must not (and does not) depend on it.
WORKERS_ENV = "EIVREG_WORKERS"


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: a generating model, side info, and the run plan.

    In a well-posed experiment the known moments in ``side`` equal the
    true moments of ``spec.err``; this is deliberately not enforced so
    that misspecification runs (for example forcing every guard to fail)
    remain expressible.
    """

    spec: ModelSpec
    side: SideInfo
    experiment: str
    n_values: Tuple[int, ...]
    replications: int
    gamma: float
    seed: int
    k: int = 1
    pivot: str = "slope_self_normalized_plugin"

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        if not self.n_values:
            raise ValueError("n_values must not be empty")
        if any(n < 2 for n in self.n_values):
            raise ValueError("every n must be at least 2")
        if self.replications < 1:
            raise ValueError("replications must be at least 1")
        if not 0.0 < self.gamma < 1.0:
            raise ValueError("gamma must lie strictly between 0 and 1")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        if self.k not in (1, 2):
            raise ValueError("k must be 1 or 2")
        if self.pivot not in PIVOTS:
            raise ValueError(f"unknown pivot {self.pivot!r}")
        if self.spec.c != self.side.c:
            raise ValueError("spec and side disagree on the intercept flag")
        if self.experiment in ("coverage16", "degeneracy") and self.side.case != 1:
            raise ValueError(f"{self.experiment} requires case 1 side info")
        if self.experiment == "coverage15" and self.side.c != 1:
            raise ValueError("coverage15 requires the unknown-intercept model")
        if (self.experiment == "normality"
                and self.pivot.startswith("intercept") and self.side.c != 1):
            raise ValueError("intercept pivots require the unknown-intercept model")


@dataclass(frozen=True)
class ExperimentReport:
    """Per-n summaries plus echoes of the seed and configuration."""

    experiment: str
    seed: int
    config: dict
    per_n: Tuple[dict, ...]

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "seed": self.seed,
            "config": self.config,
            "per_n": list(self.per_n),
        }


def _replicate(config: ExperimentConfig, n: int, rep: int) -> tuple:
    """One replication; returns a tagged outcome tuple (never raises on guards)."""
    data = simulate_dataset(config.spec, n, (config.seed, n, rep))
    spec, side = config.spec, config.side
    try:
        if config.experiment == "coverage14":
            ci = ci_slope_plugin(data, side, config.gamma)
            return ("ok", ci.lower <= spec.beta <= ci.upper, ci.upper - ci.lower)
        if config.experiment == "coverage15":
            ci = ci_intercept(data, side, config.gamma)
            return ("ok", ci.lower <= spec.alpha <= ci.upper, ci.upper - ci.lower)
        if config.experiment == "coverage16":
            ci = ci_slope_quadratic(data, side, config.k, config.gamma)
            if ci.degeneracy != DEGENERACY_NONE:
                return ("degenerate", ci.degeneracy)
            return ("ok", ci.lower <= spec.beta <= ci.upper, ci.upper - ci.lower)
        if config.experiment == "normality":
            if config.pivot == "slope_studentized":
                value = slope_statistic(data, side, spec.beta, "studentized")
            elif config.pivot == "slope_self_normalized":
                value = slope_statistic(data, side, spec.beta, "self_normalized")
            elif config.pivot == "slope_self_normalized_plugin":
                value = slope_statistic(data, side, spec.beta, "self_normalized_plugin")
            elif config.pivot == "intercept_known_slope":
                value = intercept_statistic(data, side, spec.alpha,
                                            beta=spec.beta, variant="known_slope")
            else:
                value = intercept_statistic(data, side, spec.alpha, variant="plugin")
            return ("ok", value)
        if config.experiment == "rate":
            est = estimate(data, side)
            bn = empirical_bn(data.latent.xi)
            abs_beta = abs(est.beta_hat - spec.beta)
            abs_alpha = abs(est.alpha_hat - spec.alpha) if side.c == 1 else None
            return ("ok", abs_beta, abs_alpha, bn * abs_beta)
        if config.experiment == "naive_consistency":
            naive = naive_ratio_estimates(data, side.c)
            est = estimate(data, side)
            return ("ok", abs(naive.beta_a - spec.beta), abs(naive.beta_b - spec.beta),
                    abs(est.beta_hat - spec.beta))
        # degeneracy
        ci = ci_slope_quadratic(data, side, config.k, config.gamma)
        if ci.degeneracy != DEGENERACY_NONE:
            return ("degenerate", ci.degeneracy)
        return ("ok",)
    except GuardViolation as exc:
        return ("guard", exc.guard)
    except ZeroNormalizer:
        return ("zero", None)


def _replicate_star(args) -> tuple:
    return _replicate(*args)


def _worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw is not None:
        count = int(raw)
        if count < 1:
            raise ValueError(f"{WORKERS_ENV} must be at least 1, got {raw!r}")
        return count
    return os.cpu_count() or 1


def _map_replications(config: ExperimentConfig, n: int) -> list:
    """Outcomes for replications 0..M-1, in replication order.

    Replications are independent; with several workers they run in a
    process pool, and the ordered collection makes the aggregate
    independent of scheduling.
    """
    reps = range(config.replications)
    workers = _worker_count()
    if workers == 1 or config.replications < 4:
        return [_replicate(config, n, r) for r in reps]
    args = [(config, n, r) for r in reps]
    chunk = max(1, config.replications // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_replicate_star, args, chunksize=chunk))


def _median(values: list) -> Optional[float]:
    if not values:
        return None
    return float(np.median(np.asarray(values, dtype=float)))


def _base_record(n: int, config: ExperimentConfig, outcomes: list) -> dict:
    failures = sum(1 for o in outcomes if o[0] in ("guard", "zero"))
    return {
        "n": n,
        "replications": config.replications,
        "failure_count": failures,
        "failure_rate": failures / config.replications,
    }


def _aggregate_coverage(n: int, config: ExperimentConfig, outcomes: list) -> dict:
    record = _base_record(n, config, outcomes)
    degenerate = sum(1 for o in outcomes if o[0] == "degenerate")
    # Degenerate inversions cannot be scored for coverage; they count as
    # failures but are also reported on their own.
    record["degenerate_count"] = degenerate
    record["failure_count"] += degenerate
    record["failure_rate"] = record["failure_count"] / config.replications
    covered = sum(1 for o in outcomes if o[0] == "ok" and o[1])
    missed = sum(1 for o in outcomes if o[0] == "ok" and not o[1])
    widths = [o[2] for o in outcomes if o[0] == "ok"]
    record["covered_count"] = covered
    record["miss_count"] = missed
    record["coverage"] = covered / (covered + missed) if covered + missed else None
    record["mean_width"] = fsum(widths) / len(widths) if widths else None
    return record


def _aggregate_normality(n: int, config: ExperimentConfig, outcomes: list) -> dict:
    record = _base_record(n, config, outcomes)
    values = [o[1] for o in outcomes if o[0] == "ok"]
    record["pivot_count"] = len(values)
    record["ks"] = ks_distance_to_normal(values) if values else None
    return record


def _aggregate_rate(n: int, config: ExperimentConfig, outcomes: list) -> dict:
    record = _base_record(n, config, outcomes)
    ok = [o for o in outcomes if o[0] == "ok"]
    record["median_abs_error"] = _median([o[1] for o in ok])
    alphas = [o[2] for o in ok if o[2] is not None]
    record["median_abs_error_intercept"] = _median(alphas)
    record["scaled_error_median"] = _median([o[3] for o in ok])
    return record


def _aggregate_naive(n: int, config: ExperimentConfig, outcomes: list) -> dict:
    record = _base_record(n, config, outcomes)
    ok = [o for o in outcomes if o[0] == "ok"]
    record["median_abs_error_naive_a"] = _median([o[1] for o in ok])
    record["median_abs_error_naive_b"] = _median([o[2] for o in ok])
    record["median_abs_error_modified"] = _median([o[3] for o in ok])
    # The ratio S_xy/S_xx is the headline naive estimator.
    record["median_abs_error"] = record["median_abs_error_naive_b"]
    return record


def _aggregate_degeneracy(n: int, config: ExperimentConfig, outcomes: list) -> dict:
    record = _base_record(n, config, outcomes)
    degenerate = sum(1 for o in outcomes if o[0] == "degenerate")
    record["degenerate_count"] = degenerate
    record["degeneracy_fraction"] = degenerate / config.replications
    return record


_AGGREGATORS = {
    "coverage14": _aggregate_coverage,
    "coverage15": _aggregate_coverage,
    "coverage16": _aggregate_coverage,
    "normality": _aggregate_normality,
    "rate": _aggregate_rate,
    "naive_consistency": _aggregate_naive,
    "degeneracy": _aggregate_degeneracy,
}


def _config_echo(config: ExperimentConfig) -> dict:
    spec, side = config.spec, config.side
    echo = {
        "experiment": config.experiment,
        "model": {
            "beta": spec.beta,
            "alpha": spec.alpha,
            "intercept_unknown": spec.c == 1,
            "xi": {"family": spec.xi.family,
                   "params": dict(zip(_PARAM_NAMES[spec.xi.family], spec.xi.params))},
            "errors": {"lambda_theta": spec.err.lambda_theta, "theta": spec.err.theta,
                       "mu": spec.err.mu, "base": spec.err.base},
        },
        "side": {"case": side.case, "lambda_theta": side.lambda_theta,
                 "mu": side.mu, "theta": side.theta},
        "n_values": list(config.n_values),
        "replications": config.replications,
        "gamma": config.gamma,
        "seed": config.seed,
    }
    if config.experiment in ("coverage16", "degeneracy"):
        echo["k"] = config.k
    if config.experiment == "normality":
        echo["pivot"] = config.pivot
    return echo


_PARAM_NAMES = {
    "normal": ("mean", "sd"),
    "uniform": ("a", "b"),
    "centered_exponential": ("rate",),
    "student_t2": ("scale", "shift"),
    "symmetric_pareto2": ("scale", "shift"),
}


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Run all replications for every n and aggregate per-n summaries."""
    aggregate = _AGGREGATORS[config.experiment]
    per_n = []
    for n in config.n_values:
        outcomes = _map_replications(config, n)
        per_n.append(aggregate(n, config, outcomes))
    return ExperimentReport(experiment=config.experiment, seed=config.seed,
                            config=_config_echo(config), per_n=tuple(per_n))
