"""Water-level finding on response vectors.

Given responses c and a slack volume V, the water level gamma is the unique
solution of sum_i max(0, gamma - c_i) = V (for V > 0), i.e. the level
reached when a volume V of water is poured into a basin whose floor heights
are the c_i. The level equals the slack-constrained objective value at the
current predictor, and the covered indices define the sampling distribution
for stochastic supergradients. A two-basin variant additionally optimizes an
unregularized bias.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Pivot selection is randomized (expected linear time) but driven by a
# fixed-seed stream so that training runs are bit-reproducible.
_PIVOT_SEED = 0x5EED


@dataclass(frozen=True)
class WaterLevel:
    gamma: float
    covered_count: int
    covered_sum: float


@dataclass(frozen=True)
class WaterLevelBias:
    gamma: float
    bias: float
    covered_pos: int
    covered_neg: int


def _mom_select(arr: np.ndarray, k: int) -> float:
    """k-th smallest via median-of-medians pivots; worst-case linear."""
    while True:
        if arr.size <= 5:
            return float(np.sort(arr)[k])
        p = _mom_pivot(arr)
        below = arr[arr < p]
        n_eq = int(np.count_nonzero(arr == p))
        if k < below.size:
            arr = below
        elif k < below.size + n_eq:
            return p
        else:
            k -= below.size + n_eq
            arr = arr[arr > p]


def _mom_pivot(arr: np.ndarray) -> float:
    m = (arr.size // 5) * 5
    meds = np.median(arr[:m].reshape(-1, 5), axis=1)
    if m < arr.size:
        meds = np.append(meds, np.median(arr[m:]))
    return _mom_select(meds, meds.size // 2)


def _water_level(c: np.ndarray, volume: float, deterministic_pivot: bool) -> float:
    """Level gamma with sum_i max(0, gamma - c_i) == volume > 0."""
    rng = None if deterministic_pivot else np.random.default_rng(_PIVOT_SEED)
    arr = c
    lo_count = 0
    lo_sum = 0.0
    while arr.size:
        if deterministic_pivot:
            p = _mom_pivot(arr) if arr.size > 5 else float(np.median(arr))
        else:
            p = float(arr[rng.integers(arr.size)])
        below = arr < p
        m = lo_count + int(np.count_nonzero(below))
        s = lo_sum + float(arr[below].sum())
        if p * m - s >= volume:
            # Level is at or below the pivot; everything >= p stays dry.
            arr = arr[below]
        else:
            # Pivot (and its ties) are covered; recurse above.
            n_eq = int(np.count_nonzero(arr == p))
            lo_count = m + n_eq
            lo_sum = s + p * n_eq
            arr = arr[arr > p]
    return (volume + lo_sum) / lo_count


def _covered(c: np.ndarray, gamma: float, volume: float):
    if volume > 0.0:
        mask = c < gamma
    else:
        tol = 1e-12 * max(1.0, abs(gamma))
        mask = np.abs(c - gamma) <= tol
    return int(np.count_nonzero(mask)), float(c[mask].sum())


def find_gamma(c, volume: float, deterministic_pivot: bool = False) -> WaterLevel:
    """Find the water level for responses c and slack volume >= 0.

    Expected O(n) with randomized pivots; worst-case O(n) with
    deterministic_pivot (median-of-medians).
    """
    c = np.asarray(c, dtype=np.float64)
    if c.ndim != 1 or c.size == 0:
        raise ValueError("responses must be a nonempty 1-D vector")
    if not volume >= 0.0:
        raise ValueError("volume must be non-negative")
    if volume == 0.0:
        gamma = float(c.min())
    else:
        gamma = _water_level(c, float(volume), deterministic_pivot)
    count, total = _covered(c, gamma, volume)
    return WaterLevel(gamma=gamma, covered_count=count, covered_sum=total)


def support_set(c, level: WaterLevel, tol: float | None = None) -> np.ndarray:
    """Indices to sample supergradients from: strictly-below-level points,
    or the at-level set when nothing is strictly below (separable case)."""
    c = np.asarray(c, dtype=np.float64)
    gamma = level.gamma
    if tol is None:
        tol = 1e-12 * max(1.0, abs(gamma))
    strict = np.flatnonzero(c < gamma - tol)
    if strict.size:
        return strict
    return np.flatnonzero(c <= gamma + tol)


def objective_value(c, volume: float) -> float:
    """Slack-constrained objective at the predictor producing responses c.

    Equals the water level: the optimal slack fills the lowest responses to
    a common level and the adversarial distribution concentrates there.
    """
    return find_gamma(c, volume).gamma


def _slope_counts(c, y, b, volume):
    """Covered counts per class at bias b (d gamma / d b has sign k+ - k-)."""
    shifted = c + y * b
    level = find_gamma(shifted, volume)
    idx = support_set(shifted, level)
    pos = int(np.count_nonzero(y[idx] > 0))
    return pos, idx.size - pos


def find_gamma_and_bias(c, y, volume: float, max_iter: int = 200) -> WaterLevelBias:
    """Jointly find the water level and the unregularized bias.

    Maximizes gamma(b), the water level of the shifted responses
    c_i + y_i * b, over b. gamma(b) is concave with slope of the same sign
    as the covered-count imbalance between the two class basins, so a sign
    bisection converges; at the optimum the basins cover equally many
    indices whenever both still have dry capacity.
    """
    c = np.asarray(c, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if c.shape != y.shape or c.ndim != 1 or c.size == 0:
        raise ValueError("responses and labels must be matching nonempty vectors")
    if not (np.any(y > 0) and np.any(y < 0)):
        raise ValueError("both classes must be present; bias is unbounded otherwise")
    if not volume >= 0.0:
        raise ValueError("volume must be non-negative")

    spread = float(c.max() - c.min())
    half = spread + volume + 1.0
    lo, hi = -half, half
    # Expand until the slope brackets a maximum.
    for _ in range(64):
        if _slope_counts(c, y, lo, volume)[0] >= _slope_counts(c, y, lo, volume)[1]:
            break
        lo *= 2.0
    for _ in range(64):
        kp, kn = _slope_counts(c, y, hi, volume)
        if kn >= kp:
            break
        hi *= 2.0

    b = 0.5 * (lo + hi)
    for _ in range(max_iter):
        b = 0.5 * (lo + hi)
        kp, kn = _slope_counts(c, y, b, volume)
        if kp == kn:
            break
        if kp > kn:
            lo = b
        else:
            hi = b
        if hi - lo <= 1e-14 * max(1.0, abs(lo), abs(hi)):
            b = 0.5 * (lo + hi)
            break

    shifted = c + y * b
    level = find_gamma(shifted, volume)
    idx = support_set(shifted, level)
    pos = int(np.count_nonzero(y[idx] > 0))
    return WaterLevelBias(gamma=level.gamma, bias=float(b),
                          covered_pos=pos, covered_neg=idx.size - pos)
