"""Hot numeric loops with numba acceleration and a numpy fallback.

The backend is chosen by the GRAPHBANDITS_BACKEND environment variable:
``numba``, ``numpy``, or unset/``auto`` for numba when importable. Both
backends consume the same ``np.random.Generator`` stream and produce
bit-identical outputs, so nothing downstream depends on the flag.

Episode loops draw, per round, one uniform per arm (the reward vector) and,
for Thompson sampling, one Beta sample per arm, in arm order. The policy
objects in ``policies`` follow the same protocol, which keeps the fused
loops and the step-by-step path on identical trajectories.
"""
from __future__ import annotations

import math
import os

import numpy as np

from .errors import CapabilityError, ConfigError, InputError

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    njit = None
    HAVE_NUMBA = False

ENV_BACKEND = "GRAPHBANDITS_BACKEND"

__all__ = [
    "ENV_BACKEND",
    "HAVE_NUMBA",
    "active_backend",
    "run_episode_arrays",
    "scan_sequence_rows",
    "scan_sequences_range",
]


def active_backend(override: str | None = None) -> str:
    """Resolve the kernel backend from the environment (or ``override``)."""
    choice = override if override is not None else os.environ.get(ENV_BACKEND, "")
    choice = choice.strip().lower()
    if choice in ("", "auto"):
        return "numba" if HAVE_NUMBA else "numpy"
    if choice == "numpy":
        return "numpy"
    if choice == "numba":
        if not HAVE_NUMBA:
            raise CapabilityError(
                "backend 'numba' requested but numba is not importable"
            )
        return "numba"
    raise ConfigError(
        f"unknown backend {choice!r}; expected 'numba', 'numpy', or 'auto'"
    )


# ---------------------------------------------------------------------------
# episode loops


def _ucb_episode_numpy(means, adj, horizon, bonus, neighbor_updates, gen):
    num_arms = means.shape[0]
    counts = np.zeros(num_arms, dtype=np.float64)
    sums = np.zeros(num_arms, dtype=np.float64)
    pulls = np.empty(horizon, dtype=np.int64)
    for t in range(horizon):
        u = gen.random(num_arms)
        denom = np.maximum(counts, 1.0)
        index = sums / denom + np.sqrt(bonus / denom)
        index[counts == 0.0] = np.inf
        arm = int(np.argmax(index))
        pulls[t] = arm
        if neighbor_updates:
            row = adj[arm]
            counts[row] += 1.0
            sums[row] += u[row] < means[row]
        else:
            counts[arm] += 1.0
            if u[arm] < means[arm]:
                sums[arm] += 1.0
    return pulls, counts, sums


def _ts_episode_numpy(means, adj, horizon, gen):
    num_arms = means.shape[0]
    succ = np.zeros(num_arms, dtype=np.float64)
    fail = np.zeros(num_arms, dtype=np.float64)
    pulls = np.empty(horizon, dtype=np.int64)
    for t in range(horizon):
        u = gen.random(num_arms)
        theta = gen.beta(succ + 1.0, fail + 1.0)
        arm = int(np.argmax(theta))
        pulls[t] = arm
        row = adj[arm]
        wins = (u[row] < means[row]).astype(np.float64)
        succ[row] += wins
        fail[row] += 1.0 - wins
    return pulls, succ, fail


if HAVE_NUMBA:

    @njit(cache=True)
    def _ucb_episode_numba(means, adj, horizon, bonus, neighbor_updates, gen):
        num_arms = means.shape[0]
        counts = np.zeros(num_arms, dtype=np.float64)
        sums = np.zeros(num_arms, dtype=np.float64)
        pulls = np.empty(horizon, dtype=np.int64)
        u = np.empty(num_arms, dtype=np.float64)
        for t in range(horizon):
            for a in range(num_arms):
                u[a] = gen.random()
            arm = 0
            best = -np.inf
            for a in range(num_arms):
                if counts[a] == 0.0:
                    idx = np.inf
                else:
                    idx = sums[a] / counts[a] + math.sqrt(bonus / counts[a])
                if idx > best:
                    best = idx
                    arm = a
            pulls[t] = arm
            if neighbor_updates:
                for a in range(num_arms):
                    if adj[arm, a]:
                        counts[a] += 1.0
                        if u[a] < means[a]:
                            sums[a] += 1.0
            else:
                counts[arm] += 1.0
                if u[arm] < means[arm]:
                    sums[arm] += 1.0
        return pulls, counts, sums

    @njit(cache=True)
    def _ts_episode_numba(means, adj, horizon, gen):
        num_arms = means.shape[0]
        succ = np.zeros(num_arms, dtype=np.float64)
        fail = np.zeros(num_arms, dtype=np.float64)
        pulls = np.empty(horizon, dtype=np.int64)
        u = np.empty(num_arms, dtype=np.float64)
        theta = np.empty(num_arms, dtype=np.float64)
        for t in range(horizon):
            for a in range(num_arms):
                u[a] = gen.random()
            for a in range(num_arms):
                theta[a] = gen.beta(succ[a] + 1.0, fail[a] + 1.0)
            arm = 0
            best = -np.inf
            for a in range(num_arms):
                if theta[a] > best:
                    best = theta[a]
                    arm = a
            pulls[t] = arm
            for a in range(num_arms):
                if adj[arm, a]:
                    if u[a] < means[a]:
                        succ[a] += 1.0
                    else:
                        fail[a] += 1.0
        return pulls, succ, fail


def run_episode_arrays(
    policy: str,
    means: np.ndarray,
    adj: np.ndarray,
    horizon: int,
    gen: np.random.Generator,
    bonus: float = 0.0,
    backend: str | None = None,
):
    """Run one episode and return (pulls, per-arm state A, per-arm state B).

    For the UCB policies the state arrays are observation counts and reward
    sums; for Thompson sampling they are success and failure counts. ``bonus``
    is the squared exploration width times n and is ignored by ``ts-n``.
    """
    means = np.ascontiguousarray(means, dtype=np.float64)
    adj = np.ascontiguousarray(adj, dtype=np.bool_)
    horizon = int(horizon)
    if horizon < 1:
        raise InputError(f"horizon must be positive, got {horizon}")
    use = active_backend(backend)
    if policy == "ucb-n" or policy == "ucb1":
        neighbor = policy == "ucb-n"
        if use == "numba":
            return _ucb_episode_numba(
                means, adj, horizon, float(bonus), neighbor, gen
            )
        return _ucb_episode_numpy(means, adj, horizon, float(bonus), neighbor, gen)
    if policy == "ts-n":
        if use == "numba":
            return _ts_episode_numba(means, adj, horizon, gen)
        return _ts_episode_numpy(means, adj, horizon, gen)
    raise InputError(f"unknown policy {policy!r}")


# ---------------------------------------------------------------------------
# sequence scans
#
# A sequence assigns a count in 0..alpha to each phase p = 1..num_phases.
# Its terms are count * 2^p; a scan totals the terms, finds the peak term,
# and flags sequences whose total exceeds (log2(alpha) + 3 + slack) peaks.
# Sequences are indexed in mixed radix: digit p (base alpha + 1) holds the
# count of phase p + 1, least significant digit first.

_CHUNK = 1 << 16


def _scan_range_numpy(alpha, num_phases, start, stop, threshold, slack, max_record):
    base = alpha + 1
    radix = base ** np.arange(num_phases, dtype=np.int64)
    pow2 = np.int64(2) ** np.arange(1, num_phases + 1, dtype=np.int64)
    nonzero = 0
    violations: list[int] = []
    total_violations = 0
    best_ratio = -1.0
    best_index = -1
    for lo in range(start, stop, _CHUNK):
        hi = min(lo + _CHUNK, stop)
        idx = np.arange(lo, hi, dtype=np.int64)
        digits = (idx[:, None] // radix) % base
        terms = digits * pow2
        totals = terms.sum(axis=1)
        peaks = terms.max(axis=1)
        live = peaks > 0
        nonzero += int(np.count_nonzero(live))
        ratios = np.where(live, totals / np.maximum(peaks, 1), -1.0)
        pos = int(np.argmax(ratios))
        if ratios[pos] > best_ratio:
            best_ratio = float(ratios[pos])
            best_index = int(idx[pos])
        bad = live & (totals > threshold * peaks + slack)
        n_bad = int(np.count_nonzero(bad))
        if n_bad:
            total_violations += n_bad
            room = max_record - len(violations)
            if room > 0:
                violations.extend(int(i) for i in idx[bad][:room])
    return nonzero, total_violations, violations, best_ratio, best_index


def _scan_rows_numpy(rows, threshold, slack, max_record):
    rows = np.asarray(rows, dtype=np.int64)
    num_phases = rows.shape[1]
    pow2 = np.int64(2) ** np.arange(1, num_phases + 1, dtype=np.int64)
    terms = rows * pow2
    totals = terms.sum(axis=1)
    peaks = terms.max(axis=1)
    live = peaks > 0
    nonzero = int(np.count_nonzero(live))
    ratios = np.where(live, totals / np.maximum(peaks, 1), -1.0)
    best_index = int(np.argmax(ratios))
    best_ratio = float(ratios[best_index])
    if best_ratio < 0.0:
        best_index = -1
    bad = live & (totals > threshold * peaks + slack)
    total_violations = int(np.count_nonzero(bad))
    violations = [int(i) for i in np.flatnonzero(bad)[:max_record]]
    return nonzero, total_violations, violations, best_ratio, best_index


if HAVE_NUMBA:

    @njit(cache=True)
    def _scan_range_numba(alpha, num_phases, start, stop, threshold, slack, record):
        base = alpha + 1
        digits = np.empty(num_phases, dtype=np.int64)
        x = start
        for p in range(num_phases):
            digits[p] = x % base
            x //= base
        pow2 = np.empty(num_phases, dtype=np.int64)
        for p in range(num_phases):
            pow2[p] = 1 << (p + 1)
        nonzero = 0
        total_violations = 0
        best_ratio = -1.0
        best_index = -1
        for i in range(start, stop):
            total = 0
            peak = 0
            for p in range(num_phases):
                term = digits[p] * pow2[p]
                total += term
                if term > peak:
                    peak = term
            if peak > 0:
                nonzero += 1
                ratio = total / peak
                if ratio > best_ratio:
                    best_ratio = ratio
                    best_index = i
                if total > threshold * peak + slack:
                    if total_violations < record.shape[0]:
                        record[total_violations] = i
                    total_violations += 1
            p = 0
            while p < num_phases:
                digits[p] += 1
                if digits[p] < base:
                    break
                digits[p] = 0
                p += 1
        return nonzero, total_violations, best_ratio, best_index

    @njit(cache=True)
    def _scan_rows_numba(rows, threshold, slack, record):
        num_rows, num_phases = rows.shape
        pow2 = np.empty(num_phases, dtype=np.int64)
        for p in range(num_phases):
            pow2[p] = 1 << (p + 1)
        nonzero = 0
        total_violations = 0
        best_ratio = -1.0
        best_index = -1
        for i in range(num_rows):
            total = 0
            peak = 0
            for p in range(num_phases):
                term = rows[i, p] * pow2[p]
                total += term
                if term > peak:
                    peak = term
            if peak > 0:
                nonzero += 1
                ratio = total / peak
                if ratio > best_ratio:
                    best_ratio = ratio
                    best_index = i
                if total > threshold * peak + slack:
                    if total_violations < record.shape[0]:
                        record[total_violations] = i
                    total_violations += 1
        return nonzero, total_violations, best_ratio, best_index


def _check_scan_args(alpha, num_phases):
    if alpha < 1:
        raise InputError(f"alpha must be at least 1, got {alpha}")
    if num_phases < 1:
        raise InputError(f"num_phases must be at least 1, got {num_phases}")


def scan_sequences_range(
    alpha: int,
    num_phases: int,
    start: int,
    stop: int,
    threshold: float,
    slack: float,
    max_record: int = 16,
    backend: str | None = None,
):
    """Scan sequence indices [start, stop) in mixed-radix order.

    Returns (nonzero_count, violation_count, recorded_violation_indices,
    best_ratio, best_ratio_index). The best index is the first one attaining
    the maximum total/peak ratio; all-zero sequences are skipped.
    """
    _check_scan_args(alpha, num_phases)
    total = (alpha + 1) ** num_phases
    if not 0 <= start <= stop <= total:
        raise InputError(
            f"scan range [{start}, {stop}) outside [0, {total}]"
        )
    if start == stop:
        return 0, 0, [], -1.0, -1
    use = active_backend(backend)
    if use == "numba":
        record = np.full(max_record, -1, dtype=np.int64)
        nonzero, n_viol, best_ratio, best_index = _scan_range_numba(
            alpha, num_phases, start, stop, threshold, slack, record
        )
        recorded = [int(i) for i in record[: min(n_viol, max_record)]]
        return nonzero, int(n_viol), recorded, float(best_ratio), int(best_index)
    nonzero, n_viol, recorded, best_ratio, best_index = _scan_range_numpy(
        alpha, num_phases, start, stop, threshold, slack, max_record
    )
    return nonzero, n_viol, recorded, best_ratio, best_index


def scan_sequence_rows(
    rows: np.ndarray,
    threshold: float,
    slack: float,
    max_record: int = 16,
    backend: str | None = None,
):
    """Scan explicit sequences (one per row); indices refer to row numbers."""
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    if rows.ndim != 2 or rows.shape[0] == 0 or rows.shape[1] == 0:
        raise InputError(f"expected a nonempty 2-d array of counts, got {rows.shape}")
    if rows.min() < 0:
        raise InputError("sequence counts must be nonnegative")
    use = active_backend(backend)
    if use == "numba":
        record = np.full(max_record, -1, dtype=np.int64)
        nonzero, n_viol, best_ratio, best_index = _scan_rows_numba(
            rows, threshold, slack, record
        )
        recorded = [int(i) for i in record[: min(n_viol, max_record)]]
        return nonzero, int(n_viol), recorded, float(best_ratio), int(best_index)
    return _scan_rows_numpy(rows, threshold, slack, max_record)
