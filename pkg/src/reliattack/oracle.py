"""Independent validation machinery for the closed forms and attack solvers.

The fractional oracle never reuses the solvers' code paths: it evaluates the
target's exact Shapley value from the raw coalition-value table (a
liveness-transform over all coalitions plus the marginal-weight sum) and
optimizes by enumerating a budget-feasible grid, then descending with
improving swaps until no small transfer of probability mass helps.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import linprog

from .attacks import AttackPlan, AttackProblem
from .errors import DomainError, ResourceLimitError
from .reliability import ProfileLike, ReliabilityProfile, as_profile

_GRID_POINT_LIMIT = 4_000_000
_EVAL_CHUNK = 8192
_ORACLE_N_LIMIT = 16


@dataclass(frozen=True)
class OracleConfig:
    """Tuning knobs for the grid-and-swaps oracle.

    ``grid_resolution`` is the probability step of the initial grid (keep the
    default only for a few attackable players; coarsen it as their number
    grows - the swap refinement recovers the precision).
    """

    grid_resolution: float = 1.0 / 64.0
    swap_step: float = 1e-3
    max_refinements: int = 10_000
    tolerance: float = 1e-6

    def __post_init__(self) -> None:
        if not 0.0 < self.grid_resolution <= 0.25:
            raise DomainError(
                f"grid_resolution {self.grid_resolution} outside (0, 1/4]"
            )
        if self.swap_step <= 0:
            raise DomainError("swap_step must be positive")
        if self.max_refinements < 0:
            raise DomainError("max_refinements must be nonnegative")
        if self.tolerance <= 0:
            raise DomainError("tolerance must be positive")


@lru_cache(maxsize=4)
def _mask_index(n: int):
    size = 1 << n
    masks = np.arange(size, dtype=np.int64)
    with_bit = tuple(np.nonzero(masks & (1 << i))[0] for i in range(n))
    popcount = np.zeros(size, dtype=np.int64)
    for i in range(n):
        popcount[with_bit[i]] += 1
    return masks, with_bit, popcount


@lru_cache(maxsize=8)
def _marginal_weights(n: int) -> tuple[float, ...]:
    fn = factorial(n)
    return tuple(factorial(s) * factorial(n - 1 - s) / fn for s in range(n))


def _batch_target_shapley(vtable: np.ndarray, n: int, x: int, profiles: np.ndarray) -> np.ndarray:
    """Exact Shapley value of x for every profile row.

    Transforms the coalition-value table into reliability-extension values by
    folding in one player's liveness at a time, then contracts against the
    marginal weights s!(n-1-s)!/n!.
    """
    masks, with_bit, popcount = _mask_index(n)
    arr = np.repeat(vtable[None, :], profiles.shape[0], axis=0)
    for i in range(n):
        ids = with_bit[i]
        p_i = profiles[:, i : i + 1]
        arr[:, ids] = p_i * arr[:, ids] + (1.0 - p_i) * arr[:, ids ^ (1 << i)]
    xbit = 1 << (x - 1)
    rest = np.nonzero((masks & xbit) == 0)[0]
    weights = np.asarray(_marginal_weights(n))[popcount[rest]]
    return (arr[:, rest | xbit] - arr[:, rest]) @ weights


def _grid_axis(baseline: float, resolution: float) -> np.ndarray:
    steps = int(round(1.0 / resolution))
    pts = {min(1.0, i * resolution) for i in range(steps + 1)}
    pts.add(1.0)
    pts.add(baseline)
    return np.array(sorted(pts), dtype=np.float64)


def fractional_oracle(
    problem: AttackProblem,
    cfg: OracleConfig | None = None,
    *,
    attackable_cap: int = 6,
) -> AttackPlan:
    """Reference solution of a fractional attack problem.

    Enumerates every budget-feasible grid profile over the attackable
    players, then refines the best one with improving swaps (single-player
    nudges and pairwise transfers of probability mass, step shrinking below
    ``swap_step``) while they keep strictly decreasing the target's Shapley
    value; each accepted move is monotone and the move count is capped by
    ``max_refinements``.
    """
    cfg = cfg or OracleConfig()
    game = problem.game
    n = game.n
    if n > _ORACLE_N_LIMIT:
        raise ResourceLimitError(
            f"n = {n} exceeds the oracle coalition-table cap ({_ORACLE_N_LIMIT})"
        )
    attackable = problem.attackable()
    k = len(attackable)
    if k > attackable_cap:
        raise ResourceLimitError(
            f"{k} attackable players exceed the oracle cap ({attackable_cap})"
        )
    vtable = np.array([game.value_mask(m) for m in range(1 << n)], dtype=np.float64)
    costs = problem.costs
    baseline = np.array(costs.p_star, dtype=np.float64)
    x = problem.target
    budget = problem.budget

    cols = np.array([j - 1 for j in attackable], dtype=np.int64)
    base_l = np.array([costs.L[j - 1] for j in attackable])
    base_r = np.array([costs.R[j - 1] for j in attackable])
    base_p = baseline[cols]

    def cost_of(points: np.ndarray) -> np.ndarray:
        below = np.clip(base_p - points, 0.0, None)
        above = np.clip(points - base_p, 0.0, None)
        return (below * base_l + above * base_r).sum(axis=-1)

    def evaluate(points: np.ndarray) -> np.ndarray:
        full = np.repeat(baseline[None, :], points.shape[0], axis=0)
        full[:, cols] = points
        out = np.empty(points.shape[0])
        for lo in range(0, points.shape[0], _EVAL_CHUNK):
            hi = min(lo + _EVAL_CHUNK, points.shape[0])
            out[lo:hi] = _batch_target_shapley(vtable, n, x, full[lo:hi])
        return out

    if k == 0:
        prof = ReliabilityProfile(tuple(baseline))
        return AttackPlan(0.0, float(evaluate(base_p[None, :])[0]), profile=prof)

    axes = [_grid_axis(base_p[i], cfg.grid_resolution) for i in range(k)]
    total = 1
    for a in axes:
        total *= len(a)
    if total > _GRID_POINT_LIMIT:
        raise ResourceLimitError(
            f"grid of {total} profiles exceeds the oracle limit ({_GRID_POINT_LIMIT}); "
            "coarsen grid_resolution"
        )
    mesh = np.meshgrid(*axes, indexing="ij")
    grid = np.stack([m.ravel() for m in mesh], axis=1)
    grid_costs = cost_of(grid)
    feasible = grid[grid_costs <= budget + 1e-12]
    feasible_costs = grid_costs[grid_costs <= budget + 1e-12]
    # budget-exhausting variants: competing greedy basins can differ by less
    # than one grid step, so for every feasible point add copies with the
    # leftover budget spent entirely on one coordinate (up and down, exact)
    leftover = np.clip(budget - feasible_costs, 0.0, None)
    variants = [feasible]
    for i in range(k):
        up = feasible.copy()
        room = np.where(up[:, i] >= base_p[i], leftover / base_r[i], 0.0)
        up[:, i] = np.minimum(1.0, up[:, i] + room)
        variants.append(up)
        down = feasible.copy()
        room = np.where(down[:, i] <= base_p[i], leftover / base_l[i], 0.0)
        down[:, i] = np.maximum(0.0, down[:, i] - room)
        variants.append(down)
    cands = np.concatenate(variants, axis=0)
    cand_costs = cost_of(cands)
    keep = cand_costs <= budget + 1e-12
    cands = cands[keep]
    cand_costs = cand_costs[keep]
    values = evaluate(cands)
    # among exact value ties prefer the cheapest point (no wasted budget)
    tied = np.nonzero(values <= values.min() + 1e-15)[0]
    best_idx = int(tied[np.argmin(cand_costs[tied])])
    point = cands[best_idx].copy()
    value = float(values[best_idx])

    # improving-swap descent along the budget-feasibility surface
    floor_eps = min(cfg.swap_step, cfg.tolerance * 0.1)
    eps = max(cfg.grid_resolution / 2.0, cfg.swap_step)
    steps = 0
    while steps < cfg.max_refinements:
        moves = []
        for i in range(k):
            for direction in (eps, -eps):
                cand = point.copy()
                cand[i] = min(1.0, max(0.0, cand[i] + direction))
                moves.append(cand)
        # pairwise transfers in every sign combination: with piecewise costs a
        # coordinate below its baseline refunds budget by moving up, so
        # (+eps, +eps) and (-eps, -eps) are legitimate surface moves too
        for i in range(k):
            for j in range(i + 1, k):
                for di in (eps, -eps):
                    for dj in (eps, -eps):
                        cand = point.copy()
                        cand[i] = min(1.0, max(0.0, cand[i] + di))
                        cand[j] = min(1.0, max(0.0, cand[j] + dj))
                        moves.append(cand)
        cands = np.array(moves)
        cands = cands[np.abs(cands - point).sum(axis=1) > 1e-15]
        cands = cands[cost_of(cands) <= budget + 1e-12]
        if cands.size:
            cand_values = evaluate(cands)
            pick = int(np.argmin(cand_values))
            if cand_values[pick] < value - 1e-15:
                point = cands[pick].copy()
                value = float(cand_values[pick])
                steps += 1
                continue
        if eps <= floor_eps:
            break
        eps = max(eps / 2.0, floor_eps)

    full = baseline.copy()
    full[cols] = point
    profile = ReliabilityProfile(tuple(full))
    return AttackPlan(
        float(cost_of(point[None, :])[0]),
        value,
        profile=profile,
    )


def finite_difference(
    f: Callable[[ReliabilityProfile], float],
    profile: ProfileLike,
    j: int,
    h: float,
) -> float:
    """Central-difference slope of f in p_j, one-sided at the [0,1] boundary."""
    if h <= 0:
        raise DomainError(f"step h must be positive, got {h}")
    p = as_profile(profile)
    if not 1 <= j <= p.n:
        raise DomainError(f"player {j} outside 1..{p.n}")
    lo = max(0.0, p[j] - h)
    hi = min(1.0, p[j] + h)
    return (f(p.with_value(j, hi)) - f(p.with_value(j, lo))) / (hi - lo)


def fractional_knapsack_optimum(
    values: Sequence[float], weights: Sequence[float], capacity: float
) -> float:
    """Exact optimum of ``max v.z : w.z <= capacity, 0 <= z <= 1`` via LP.

    The independent check for the knapsack-equivalent credit attacks.
    """
    if capacity < 0:
        raise DomainError(f"capacity {capacity} is negative")
    if len(values) != len(weights):
        raise DomainError("values and weights must have equal length")
    if not values:
        return 0.0
    res = linprog(
        c=-np.asarray(values, dtype=np.float64),
        A_ub=np.asarray(weights, dtype=np.float64)[None, :],
        b_ub=np.array([capacity], dtype=np.float64),
        bounds=[(0.0, 1.0)] * len(values),
        method="highs",
    )
    if not res.success:
        raise RuntimeError(f"knapsack LP failed: {res.message}")
    return float(-res.fun)
