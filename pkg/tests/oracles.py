"""Slow reference implementations used to pin down expected values.

Everything here is deliberately naive: sorting, dense grids, brute force.
Production code must match these, never the other way around.
"""

import numpy as np


def water_level_sorted(c, volume):
    """Sort-then-scan solution of sum_i max(0, gamma - c_i) = volume.

    O(n log n); walks the sorted responses until the water needed to reach
    the next floor exceeds the remaining volume.
    """
    c = np.sort(np.asarray(c, dtype=np.float64))
    if volume == 0.0:
        return float(c[0])
    n = c.size
    prefix = np.cumsum(c)
    for k in range(1, n + 1):
        gamma = (volume + prefix[k - 1]) / k
        if k == n or gamma <= c[k]:
            return float(gamma)
    raise AssertionError("unreachable")


def water_level_sorted_batch(c_sorted, prefix, volumes):
    """Vectorized sorted-scan oracle over many volumes for one response
    vector; c_sorted and prefix come from np.sort / np.cumsum."""
    n = c_sorted.size
    volumes = np.asarray(volumes, dtype=np.float64)
    out = np.empty(volumes.shape)
    for j, v in np.ndenumerate(volumes):
        if v == 0.0:
            out[j] = c_sorted[0]
            continue
        for k in range(1, n + 1):
            gamma = (v + prefix[k - 1]) / k
            if k == n or gamma <= c_sorted[k]:
                out[j] = gamma
                break
    return out


def water_level_sorted_fast(c, volume):
    """Vectorized variant of water_level_sorted for large batches of calls."""
    cs = np.sort(np.asarray(c, dtype=np.float64))
    if volume == 0.0:
        return float(cs[0])
    n = cs.size
    k = np.arange(1, n + 1)
    gammas = (volume + np.cumsum(cs)) / k
    feasible = np.empty(n, dtype=bool)
    feasible[:-1] = gammas[:-1] <= cs[1:]
    feasible[-1] = True
    return float(gammas[np.argmax(feasible)])


def water_level_rows(shifted, volume):
    """Water level of every row of a 2-D array for a common volume."""
    cs = np.sort(shifted, axis=1)
    m, n = cs.shape
    if volume == 0.0:
        return cs[:, 0].copy()
    k = np.arange(1, n + 1)
    gammas = (volume + np.cumsum(cs, axis=1)) / k
    feasible = np.empty((m, n), dtype=bool)
    feasible[:, :-1] = gammas[:, :-1] <= cs[:, 1:]
    feasible[:, -1] = True
    first = np.argmax(feasible, axis=1)
    return gammas[np.arange(m), first]


def bias_grid_oracle(c, y, volume, grid):
    """max over the grid of the water level of the shifted responses."""
    c = np.asarray(c, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    best_gamma, best_b = -np.inf, None
    for b in grid:
        gamma = water_level_sorted(c + y * b, volume)
        if gamma > best_gamma:
            best_gamma, best_b = gamma, b
    return best_gamma, best_b


def bias_grid_values(c, y, volume, grid):
    """gamma(b) over the whole grid (for comparing against a claimed max)."""
    c = np.asarray(c, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    return np.array([water_level_sorted(c + y * b, volume) for b in grid])


def slack_objective_dense(w, x, labels, nu):
    """Slack-constrained objective at explicit weights w: the water level of
    the margins y_i <w, x_i> with volume n*nu."""
    margins = labels * (x @ w)
    return water_level_sorted(margins, x.shape[0] * nu)


def best_weights_on_grid(x, labels, nu, radius=1.0, steps=200):
    """Dense polar grid search for the 2-D slack-constrained optimum inside
    the unit ball. Returns (w, objective)."""
    assert x.shape[1] == 2
    best = (-np.inf, None)
    for theta in np.linspace(0.0, 2.0 * np.pi, steps, endpoint=False):
        direction = np.array([np.cos(theta), np.sin(theta)])
        for r in np.linspace(radius / steps, radius, steps):
            w = r * direction
            val = slack_objective_dense(w, x, labels, nu)
            if val > best[0]:
                best = (val, w)
    return best[1], best[0]


def best_regularized_on_grid(x, labels, lam, radius=5.0, steps=200):
    """Dense 2-D grid search for the lambda-regularized hinge optimum.
    Returns (w, primal value)."""
    assert x.shape[1] == 2
    axis = np.linspace(-radius, radius, steps)
    best = (np.inf, None)
    for a in axis:
        margins_a = labels * x[:, 0] * a
        for b in axis:
            margins = margins_a + labels * x[:, 1] * b
            hinge = np.maximum(0.0, 1.0 - margins).mean()
            val = 0.5 * lam * (a * a + b * b) + hinge
            if val < best[0]:
                best = (val, np.array([a, b]))
    return best[1], best[0]


def sdca_delta_oracle(c_i, alpha_i, k_ii, box, grid_size=None):
    """Exact 1-D maximizer of the dual restricted to coordinate i.

    The restriction is the concave quadratic
        q(delta) = delta * (1 - c_i) - delta^2 * k_ii / 2
    over [-alpha_i, box - alpha_i]; the maximizer is the clamped vertex.
    """
    lo, hi = -alpha_i, box - alpha_i
    if k_ii == 0.0:
        return 0.0
    vertex = (1.0 - c_i) / k_ii
    return min(max(vertex, lo), hi)
