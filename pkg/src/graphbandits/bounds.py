"""Closed-form regret bounds and the instance hardness functional."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .env import BanditInstance, gaps
from .errors import InputError
from .graph import DEFAULT_EXACT_LIMIT, independence_number, max_independent_set

__all__ = [
    "BoundReport",
    "alpha_log_factor",
    "bound_report",
    "confidence_scale",
    "gap_free_regret_bound",
    "hardness",
    "log_alpha_bound",
    "log_horizon_bound",
    "report_csv_header",
    "report_csv_row",
    "ucbn_regret_bound",
]


def _check_horizon(horizon) -> int:
    horizon = int(horizon)
    if horizon < 1:
        raise InputError(f"horizon must be at least 1, got {horizon}")
    return horizon


def _check_arms(num_arms) -> int:
    num_arms = int(num_arms)
    if num_arms < 1:
        raise InputError(f"num_arms must be at least 1, got {num_arms}")
    return num_arms


def _check_alpha(alpha) -> int:
    alpha = int(alpha)
    if alpha < 1:
        raise InputError(f"alpha must be at least 1, got {alpha}")
    return alpha


def _check_hardness(value) -> float:
    value = float(value)
    if not math.isfinite(value) or value < 0.0:
        raise InputError(f"hardness must be finite and nonnegative, got {value}")
    return value


def alpha_log_factor(alpha: int) -> float:
    """The independence factor log2(alpha) + 3 shared by the improved bounds."""
    return math.log2(_check_alpha(alpha)) + 3.0


def confidence_scale(horizon: int, num_arms: int, delta: float) -> float:
    """The sample-threshold scale 8 * ln(2 * horizon * num_arms / delta)."""
    horizon = _check_horizon(horizon)
    num_arms = _check_arms(num_arms)
    delta = float(delta)
    if not 0.0 < delta < 1.0:
        raise InputError(f"delta must lie in the open interval (0, 1), got {delta}")
    return 8.0 * math.log(2.0 * horizon * num_arms / delta)


def hardness(
    instance: BanditInstance,
    *,
    exact_limit: int = DEFAULT_EXACT_LIMIT,
    allow_approximate: bool = False,
) -> float:
    """Max over independent sets of suboptimal arms of the sum of 1/gap.

    Optimal arms are removed from the graph before the search (their
    inverse gap is undefined), so the maximization ranges over independent
    sets of the suboptimal induced subgraph. Returns 0 when no arm is
    suboptimal.
    """
    profile = gaps(instance)
    suboptimal = profile.suboptimal_arms()
    if not suboptimal:
        return 0.0
    sub, relabel = instance.graph.induced_subgraph(suboptimal)
    weights = [1.0 / float(profile.gaps[a]) for a in relabel]
    found = max_independent_set(
        sub, weights, exact_limit=exact_limit, allow_approximate=allow_approximate
    )
    return float(found.value)


def log_horizon_bound(scale: float, horizon: int, hardness_value: float) -> float:
    """Regret budget carrying the log-horizon factor: 4*scale*ln(T)*H + 1."""
    horizon = _check_horizon(horizon)
    return 4.0 * float(scale) * math.log(horizon) * _check_hardness(hardness_value) + 1.0


def log_alpha_bound(scale: float, alpha: int, hardness_value: float) -> float:
    """Regret budget with the independence factor: 4*scale*(log2(a)+3)*H + 1."""
    return (
        4.0 * float(scale) * alpha_log_factor(alpha) * _check_hardness(hardness_value)
        + 1.0
    )


def ucbn_regret_bound(
    horizon: int, num_arms: int, alpha: int, hardness_value: float
) -> float:
    """Pseudo-regret bound for UCB-N: 8*ln(2*K*T^2)*(log2(a)+3)*H + 2."""
    horizon = _check_horizon(horizon)
    num_arms = _check_arms(num_arms)
    return (
        8.0
        * math.log(2.0 * num_arms * float(horizon) * float(horizon))
        * alpha_log_factor(alpha)
        * _check_hardness(hardness_value)
        + 2.0
    )


def gap_free_regret_bound(horizon: int, num_arms: int, alpha: int) -> float:
    """Gap-independent bound: 2 + 4*sqrt(2*a*T*ln(2*K*T^2)*(log2(a)+3))."""
    horizon = _check_horizon(horizon)
    num_arms = _check_arms(num_arms)
    alpha = _check_alpha(alpha)
    inner = (
        2.0
        * alpha
        * float(horizon)
        * math.log(2.0 * num_arms * float(horizon) * float(horizon))
        * alpha_log_factor(alpha)
    )
    return 2.0 + 4.0 * math.sqrt(inner)


@dataclass(frozen=True)
class BoundReport:
    """Every closed-form bound evaluated on one instance and horizon."""

    horizon: int
    num_arms: int
    delta: float
    alpha: int
    hardness: float
    scale: float
    log_horizon_value: float
    log_alpha_value: float
    ucbn_bound: float
    gap_free_bound: float


def bound_report(
    instance: BanditInstance,
    horizon: int,
    delta: float | None = None,
    *,
    exact_limit: int = DEFAULT_EXACT_LIMIT,
    allow_approximate: bool = False,
) -> BoundReport:
    """Evaluate all bounds for ``instance`` at ``horizon``.

    ``delta`` defaults to 1/horizon, the setting under which the UCB-N
    bound is stated.
    """
    horizon = _check_horizon(horizon)
    if delta is None:
        delta = 1.0 / horizon
    alpha = independence_number(
        instance.graph, exact_limit=exact_limit, allow_approximate=allow_approximate
    )
    h = hardness(
        instance, exact_limit=exact_limit, allow_approximate=allow_approximate
    )
    scale = confidence_scale(horizon, instance.num_arms, delta)
    return BoundReport(
        horizon=horizon,
        num_arms=instance.num_arms,
        delta=float(delta),
        alpha=alpha,
        hardness=h,
        scale=scale,
        log_horizon_value=log_horizon_bound(scale, horizon, h),
        log_alpha_value=log_alpha_bound(scale, alpha, h),
        ucbn_bound=ucbn_regret_bound(horizon, instance.num_arms, alpha, h),
        gap_free_bound=gap_free_regret_bound(horizon, instance.num_arms, alpha),
    )


_CSV_COLUMNS = (
    "T",
    "K",
    "delta",
    "alpha",
    "H",
    "L",
    "lemma_original",
    "lemma_improved",
    "theorem",
    "corollary",
)


def report_csv_header() -> str:
    return ",".join(_CSV_COLUMNS)


def report_csv_row(report: BoundReport) -> str:
    values = (
        report.horizon,
        report.num_arms,
        report.delta,
        report.alpha,
        report.hardness,
        report.scale,
        report.log_horizon_value,
        report.log_alpha_value,
        report.ucbn_bound,
        report.gap_free_bound,
    )
    return ",".join(
        str(v) if isinstance(v, int) else format(float(v), ".12g") for v in values
    )
