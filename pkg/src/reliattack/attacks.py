"""Budget-constrained attacks on a target player's Shapley value.

Fractional attacks move other players' reliabilities under piecewise-linear
costs; removal attacks zero them out at per-player prices.  The structured
solvers here (greedy on complete/star graphs, best-of-four on cycles,
fractional-knapsack greedy on two-author credit instances, exhaustive
full-obligation removal search) are each validated against independent
oracles by the test suite.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DomainError, ResourceLimitError
from .games import (
    ClosedNeighborhoodGame,
    CreditInstance,
    DistanceCutoffGame,
    FullCreditGame,
    FullObligationGame,
    Game,
    ThresholdNeighborhoodGame,
    _as_playerset,
    ball,
    cycle_sequence,
    is_complete,
    star_center,
)
from .reliability import ProfileLike, ReliabilityProfile, as_profile
from .shapley import shapley_closed, shapley_cycle_closed

_COST_EPS = 1e-12
_TIE_EPS = 1e-12


@dataclass(frozen=True)
class CostModel:
    """Per-player attack prices.

    ``p_star`` are baseline reliabilities in (0, 1]; lowering player j below
    baseline costs ``L[j-1]`` per unit, raising costs ``R[j-1]`` per unit,
    and removal (forcing p_j = 0) costs ``c[j-1]``.
    """

    p_star: tuple[float, ...]
    L: tuple[float, ...]
    R: tuple[float, ...]
    c: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "p_star", tuple(float(v) for v in self.p_star))
        object.__setattr__(self, "L", tuple(float(v) for v in self.L))
        object.__setattr__(self, "R", tuple(float(v) for v in self.R))
        object.__setattr__(self, "c", tuple(float(v) for v in self.c))
        n = len(self.p_star)
        if not (len(self.L) == len(self.R) == len(self.c) == n):
            raise DomainError("cost model vectors must all have length n")
        for i in range(n):
            if not 0.0 < self.p_star[i] <= 1.0:
                raise DomainError(f"baseline p*_{i + 1} = {self.p_star[i]} outside (0, 1]")
            if not self.L[i] > 0:
                raise DomainError(f"decrease slope L_{i + 1} must be positive")
            if not self.R[i] > 0:
                raise DomainError(f"increase slope R_{i + 1} must be positive")
            if self.c[i] < 0:
                raise DomainError(f"removal cost c_{i + 1} must be nonnegative")

    @classmethod
    def uniform(
        cls,
        p_star: Sequence[float],
        L: float = 1.0,
        R: float = 1.0,
        c: float = 0.0,
    ) -> "CostModel":
        n = len(p_star)
        return cls(tuple(p_star), (L,) * n, (R,) * n, (c,) * n)

    @property
    def n(self) -> int:
        return len(self.p_star)

    def baseline_profile(self) -> ReliabilityProfile:
        return ReliabilityProfile(self.p_star)

    def change_cost(self, j: int, p: float) -> float:
        """Cost of moving player j's reliability from baseline to p."""
        base = self.p_star[j - 1]
        if p < base:
            return self.L[j - 1] * (base - p)
        return self.R[j - 1] * (p - base)

    def profile_cost(self, profile: ProfileLike) -> float:
        p = as_profile(profile, self.n)
        return sum(self.change_cost(j, p[j]) for j in range(1, self.n + 1))

    def removal_cost(self, removed: Iterable[int]) -> float:
        return sum(self.c[j - 1] for j in removed)


@dataclass(frozen=True)
class AttackProblem:
    """Minimize the Shapley value of ``target`` spending at most ``budget``;
    exempt players (always including the target) keep their baselines."""

    game: Game
    target: int
    budget: float
    costs: CostModel
    exempt: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        n = self.game.n
        if not 1 <= self.target <= n:
            raise DomainError(f"target {self.target} outside 1..{n}")
        if self.budget < 0:
            raise DomainError(f"budget {self.budget} is negative")
        if self.costs.n != n:
            raise DomainError(f"cost model covers {self.costs.n} players, game has {n}")
        exempt = _as_playerset(self.exempt, n, "exempt set") | {self.target}
        object.__setattr__(self, "exempt", exempt)

    def attackable(self) -> list[int]:
        return [j for j in range(1, self.game.n + 1) if j not in self.exempt]


@dataclass(frozen=True)
class AttackPlan:
    """Outcome of an attack: the modified profile (fractional) or the removed
    set (removal), the budget actually spent, the targeting order, and the
    target's resulting Shapley value."""

    total_cost: float
    achieved: float
    profile: ReliabilityProfile | None = None
    removed: frozenset[int] | None = None
    order: tuple[int, ...] = ()
    note: str | None = None


def _greedy_raise(
    costs: CostModel,
    start: ReliabilityProfile,
    order: Sequence[int],
    slopes: dict[int, float],
    targets: dict[int, float],
    budget: float,
) -> tuple[ReliabilityProfile, tuple[int, ...]]:
    """Move each ordered player toward its target value (0 or 1) while the
    budget lasts, partially on the first unaffordable one."""
    vals = list(start.values)
    left = budget
    touched: list[int] = []
    for j in order:
        cur = vals[j - 1]
        tgt = targets[j]
        gap = abs(tgt - cur)
        if gap == 0.0:
            continue
        full = slopes[j] * gap
        if full <= left + _COST_EPS:
            vals[j - 1] = tgt
            left = max(0.0, left - full)
            touched.append(j)
        else:
            delta = left / slopes[j]
            if delta > 0.0:
                moved = cur + delta if tgt > cur else cur - delta
                vals[j - 1] = min(1.0, max(0.0, moved))
                touched.append(j)
            left = 0.0
            break
    return ReliabilityProfile(tuple(vals)), tuple(touched)


def _common_slope(values: Sequence[float], players: Sequence[int], name: str) -> float:
    slopes = {values[j - 1] for j in players}
    if len(slopes) > 1:
        raise DomainError(
            f"attackable players must share a common {name} slope, got {sorted(slopes)}"
        )
    return next(iter(slopes))


def greedy_fractional_attack(
    problem: AttackProblem, *, assume_large_cutoff: bool = False
) -> AttackPlan:
    """Optimal fractional attack on complete and star graphs.

    Raises attackable reliabilities to 1 in descending baseline order (on a
    star with the target at a leaf, the center always goes first), spending
    any residual budget partially on the first unaffordable player.  The
    ordering is optimal for the closed-neighborhood game; for the threshold
    and distance-cutoff variants the same greedy runs but the plan is marked
    as heuristic, to be confirmed against the oracle.
    """
    game = problem.game
    if isinstance(game, (ClosedNeighborhoodGame, ThresholdNeighborhoodGame)):
        note = None if isinstance(game, ClosedNeighborhoodGame) else (
            "greedy ordering is heuristic for this variant; verify with the oracle"
        )
    elif isinstance(game, DistanceCutoffGame):
        if not assume_large_cutoff:
            raise DomainError(
                "distance-cutoff greedy requires assume_large_cutoff=True "
                "(the ordering is only justified for large cutoffs)"
            )
        note = "greedy ordering assumes a large cutoff; verify with the oracle"
    else:
        raise DomainError(f"greedy attack does not apply to variant {game.variant!r}")

    graph = game.graph
    x = problem.target
    center = star_center(graph)
    if not is_complete(graph) and center is None:
        raise DomainError("greedy attack needs a complete or star graph")

    attackable = problem.attackable()
    if not attackable:
        base = problem.costs.baseline_profile()
        return AttackPlan(0.0, shapley_closed(game, base, x), profile=base, note=note)

    _common_slope(problem.costs.L, attackable, "decrease")
    r_slope = _common_slope(problem.costs.R, attackable, "increase")

    p_star = problem.costs.p_star
    by_baseline = sorted(attackable, key=lambda j: (-p_star[j - 1], j))
    if center is not None and center != x and center in set(attackable):
        order = [center] + [j for j in by_baseline if j != center]
    else:
        order = by_baseline

    profile, touched = _greedy_raise(
        problem.costs,
        problem.costs.baseline_profile(),
        order,
        {j: r_slope for j in order},
        {j: 1.0 for j in order},
        problem.budget,
    )
    return AttackPlan(
        problem.costs.profile_cost(profile),
        shapley_closed(game, profile, x),
        profile=profile,
        order=touched,
        note=note,
    )


def _cycle_ring(game: ClosedNeighborhoodGame, x: int) -> tuple[int, ...]:
    graph = game.graph
    if cycle_sequence(graph) is None:
        raise DomainError("cycle attack needs a cycle graph")
    ring = [x, min(graph.neighbors(x))]
    while len(ring) < graph.n:
        (nxt,) = graph.neighbors(ring[-1]) - {ring[-2]}
        ring.append(nxt)
    return tuple(ring)


def cycle_fractional_attack(problem: AttackProblem) -> AttackPlan:
    """Optimal fractional attack on a cycle: the best of four fixed greedy
    targeting orders over the target's two neighbors and two distance-two
    neighbors.  In two of the orders a distance-two node is deliberately
    raised before a direct neighbor.
    """
    game = problem.game
    if not isinstance(game, ClosedNeighborhoodGame):
        raise DomainError(
            f"cycle attack applies to the closed-neighborhood game only, got {game.variant!r}"
        )
    n = game.n
    if n < 5:
        raise DomainError(
            f"cycle attack needs n >= 5 (got n={n}); use the oracle for smaller cycles"
        )
    ring = _cycle_ring(game, problem.target)
    succ, succ2, pred2, pred = ring[1], ring[2], ring[-2], ring[-1]
    window = [succ, succ2, pred2, pred]

    attackable = set(problem.attackable())
    outside = sorted(attackable - set(window))
    if outside:
        warnings.warn(
            "ignoring attackable players outside the influence window of the "
            f"target: {outside}",
            UserWarning,
            stacklevel=2,
        )
    live = [j for j in window if j in attackable]
    base = problem.costs.baseline_profile()

    def evaluate(profile: ReliabilityProfile) -> float:
        relabeled = ReliabilityProfile(tuple(profile[v] for v in ring))
        return shapley_cycle_closed(relabeled)

    if not live:
        return AttackPlan(0.0, evaluate(base), profile=base)
    r_slope = _common_slope(problem.costs.R, live, "increase")

    orders = (
        ("P", [succ, pred, pred2, succ2]),
        ("Q", [succ, pred2, pred, succ2]),
        ("R", [pred, succ2, succ, pred2]),
        ("S", [pred, succ, succ2, pred2]),
    )
    best: tuple[float, str, ReliabilityProfile, tuple[int, ...]] | None = None
    for name, order in orders:
        seq = [j for j in order if j in attackable]
        profile, touched = _greedy_raise(
            problem.costs,
            base,
            seq,
            {j: r_slope for j in seq},
            {j: 1.0 for j in seq},
            problem.budget,
        )
        value = evaluate(profile)
        if best is None or value < best[0]:
            best = (value, name, profile, touched)
    value, name, profile, touched = best
    return AttackPlan(
        problem.costs.profile_cost(profile),
        value,
        profile=profile,
        order=touched,
        note=f"best-of-four targeting order {name}",
    )


def crossover_lambda_pq(p_star: ProfileLike) -> float:
    """Budget at which the cumulative decrease of cycle order P catches up
    with order Q: ``3/2 - p*_2 - p*_n`` (meaningful when
    ``p*_{n-1} - p*_n > 1/2``)."""
    p = as_profile(p_star)
    if p.n < 5:
        raise DomainError(f"cycle crossover needs n >= 5, got n={p.n}")
    return 1.5 - p[2] - p[p.n]


def credit_knapsack_attack(problem: AttackProblem) -> AttackPlan:
    """Optimal fractional attack on two-author credit instances.

    Full credit: raise coauthor reliabilities to 1 in descending order of
    joint contribution per unit increase cost.  Full obligation: lower them
    to 0 in descending order of joint contribution per unit decrease cost.
    This is the exact greedy solution of the equivalent fractional knapsack.
    Per-player slopes may differ.
    """
    game = problem.game
    if not isinstance(game, (FullCreditGame, FullObligationGame)):
        raise DomainError(
            f"knapsack attack applies to credit games only, got {game.variant!r}"
        )
    inst = game.instance
    x = problem.target
    contrib: dict[int, float] = {}
    for i in inst.papers_of(x):
        authors, score = inst.papers[i]
        if len(authors) != 2:
            raise DomainError(
                f"paper {sorted(authors)} of player {x} has {len(authors)} authors, expected 2"
            )
        (l,) = authors - {x}
        contrib[l] = contrib.get(l, 0.0) + score

    raising = isinstance(game, FullCreditGame)
    slope_vec = problem.costs.R if raising else problem.costs.L
    candidates = [l for l in sorted(contrib) if l not in problem.exempt]
    order = sorted(candidates, key=lambda l: (-contrib[l] / slope_vec[l - 1], l))
    profile, touched = _greedy_raise(
        problem.costs,
        problem.costs.baseline_profile(),
        order,
        {l: slope_vec[l - 1] for l in order},
        {l: 1.0 if raising else 0.0 for l in order},
        problem.budget,
    )
    return AttackPlan(
        problem.costs.profile_cost(profile),
        shapley_closed(game, profile, x),
        profile=profile,
        order=touched,
    )


def pairwise_exempt_set(game: Game, y: int) -> frozenset[int]:
    """Players whose reliabilities contribute to the Shapley value of y and
    are therefore untouchable in a pairwise attack protecting y."""
    if not 1 <= y <= game.n:
        raise DomainError(f"player {y} outside 1..{game.n}")
    if isinstance(game, (ClosedNeighborhoodGame, ThresholdNeighborhoodGame)):
        graph = game.graph
        out = {y} | graph.neighbors(y)
        for v in list(out):
            out |= graph.neighbors(v)
        return frozenset(out)
    if isinstance(game, DistanceCutoffGame):
        return ball(game.graph, {y}, 2.0 * game.cutoff) | {y}
    if isinstance(game, (FullCreditGame, FullObligationGame)):
        return game.instance.coauthors(y) | {y}
    raise DomainError(f"pairwise exemption undefined for variant {game.variant!r}")


@dataclass(frozen=True)
class RemovalCheck:
    """Result of probing removal subsets for a forbidden Shapley decrease."""

    passed: bool
    trials: int
    baseline: float
    counterexample: frozenset[int] | None = None
    counterexample_value: float | None = None


def removal_no_benefit_check(
    game: Game,
    x: int,
    trials: int | None,
    *,
    profile: ProfileLike | None = None,
    seed: int = 0,
    slack: float = 1e-9,
) -> RemovalCheck:
    """Check that no removal subset decreases the target's Shapley value.

    Applies to the centrality variants and the full-credit game, where the
    no-benefit theorems hold.  ``trials=None`` enumerates every removal
    subset; an integer samples that many random subsets (seeded).
    """
    if not isinstance(
        game,
        (ClosedNeighborhoodGame, ThresholdNeighborhoodGame, DistanceCutoffGame, FullCreditGame),
    ):
        raise DomainError(
            f"no-benefit check covers nc1/nc2/nc3/fc, not {game.variant!r}"
        )
    if not 1 <= x <= game.n:
        raise DomainError(f"player {x} outside 1..{game.n}")
    base_profile = (
        ReliabilityProfile.ones(game.n) if profile is None else as_profile(profile, game.n)
    )
    baseline = shapley_closed(game, base_profile, x)
    others = [j for j in range(1, game.n + 1) if j != x]
    if trials is None:
        subsets: Iterable[frozenset[int]] = (
            frozenset(others[i] for i in range(len(others)) if mask >> i & 1)
            for mask in range(1 << len(others))
        )
        count = 1 << len(others)
    else:
        rng = random.Random(seed)
        subsets = (
            frozenset(j for j in others if rng.random() < 0.5) for _ in range(trials)
        )
        count = trials
    for removed in subsets:
        value = shapley_closed(
            game, base_profile.with_values({j: 0.0 for j in removed}), x
        )
        if value < baseline - slack:
            return RemovalCheck(False, count, baseline, removed, value)
    return RemovalCheck(True, count, baseline)


def fo_removal_exhaustive(
    instance: CreditInstance,
    costs: CostModel,
    budget: float,
    x: int,
    *,
    exempt: frozenset[int] = frozenset(),
    coauthor_cap: int = 24,
) -> AttackPlan:
    """Exact optimal removal attack on the full-obligation game by exhaustive
    search over affordable coauthor subsets; ties prefer smaller subsets,
    then lexicographic order."""
    if costs.n != instance.n:
        raise DomainError(f"cost model covers {costs.n} players, instance has {instance.n}")
    if budget < 0:
        raise DomainError(f"budget {budget} is negative")
    game = FullObligationGame(instance)
    candidates = sorted(instance.coauthors(x) - exempt - {x})
    if len(candidates) > coauthor_cap:
        raise ResourceLimitError(
            f"{len(candidates)} removable coauthors exceed the exhaustive-search cap ({coauthor_cap})"
        )
    base = costs.baseline_profile()
    best: tuple[float, int, tuple[int, ...], float] | None = None
    for mask in range(1 << len(candidates)):
        removed = tuple(candidates[i] for i in range(len(candidates)) if mask >> i & 1)
        cost = costs.removal_cost(removed)
        if cost > budget + _COST_EPS:
            continue
        value = shapley_closed(game, base.with_values({j: 0.0 for j in removed}), x)
        key = (value, len(removed), removed, cost)
        if best is None or value < best[0] - _TIE_EPS:
            best = key
        elif abs(value - best[0]) <= _TIE_EPS and (len(removed), removed) < (best[1], best[2]):
            best = key
    value, _, removed, cost = best
    return AttackPlan(
        cost, value, removed=frozenset(removed), order=removed
    )


def _removal_exhaustive_over(
    game: Game,
    costs: CostModel,
    budget: float,
    x: int,
    candidates: list[int],
    cap: int,
) -> AttackPlan:
    if len(candidates) > cap:
        raise ResourceLimitError(
            f"{len(candidates)} removable players exceed the exhaustive-search cap ({cap})"
        )
    base = costs.baseline_profile()
    best: tuple[float, int, tuple[int, ...], float] | None = None
    for mask in range(1 << len(candidates)):
        removed = tuple(candidates[i] for i in range(len(candidates)) if mask >> i & 1)
        cost = costs.removal_cost(removed)
        if cost > budget + _COST_EPS:
            continue
        value = shapley_closed(game, base.with_values({j: 0.0 for j in removed}), x)
        if best is None or value < best[0] - _TIE_EPS:
            best = (value, len(removed), removed, cost)
        elif abs(value - best[0]) <= _TIE_EPS and (len(removed), removed) < (best[1], best[2]):
            best = (value, len(removed), removed, cost)
    value, _, removed, cost = best
    return AttackPlan(cost, value, removed=frozenset(removed), order=removed)


def removal_attack(problem: AttackProblem) -> AttackPlan:
    """Optimal removal attack for the studied games.

    Full obligation is solved by exhaustive subset search.  For the coverage
    variants, the full-credit game and threshold 1, no removal can decrease
    the target's value, so the empty removal is optimal.  The threshold game
    with threshold >= 2 genuinely admits beneficial removals (a neighbor's
    neighbor may be needed to reach the threshold), so it is searched
    exhaustively over the target's distance-two window.
    """
    game = problem.game
    if isinstance(game, FullObligationGame):
        return fo_removal_exhaustive(
            game.instance,
            problem.costs,
            problem.budget,
            problem.target,
            exempt=problem.exempt,
        )
    if isinstance(game, ThresholdNeighborhoodGame) and game.threshold >= 2:
        window = pairwise_exempt_set(game, problem.target)
        candidates = sorted(window - problem.exempt)
        return _removal_exhaustive_over(
            game, problem.costs, problem.budget, problem.target, candidates, cap=16
        )
    if isinstance(
        game,
        (ClosedNeighborhoodGame, ThresholdNeighborhoodGame, DistanceCutoffGame, FullCreditGame),
    ):
        base = problem.costs.baseline_profile()
        return AttackPlan(
            0.0,
            shapley_closed(game, base, problem.target),
            removed=frozenset(),
            note="removal attacks cannot decrease this target's value; empty removal is optimal",
        )
    raise DomainError(f"removal attack undefined for variant {game.variant!r}")


# ---------------------------------------------------------------------------
# budgeted max-coverage reduction


@dataclass(frozen=True)
class BMCReduction:
    """Removal-attack instance encoding a budgeted max-coverage question.

    Removing a coauthor set A of ``target`` decreases its Shapley value by
    exactly the total weight covered by the corresponding sets; the coverage
    answer is YES iff some affordable removal decreases it by ``threshold``.
    """

    instance: CreditInstance
    costs: CostModel
    budget: float
    target: int
    threshold: float


def _positive_int(value, what: str) -> int:
    if value != int(value) or int(value) <= 0:
        raise DomainError(f"{what} must be a positive integer, got {value!r}")
    return int(value)


def _validate_cover_input(
    element_weights: Sequence[float],
    sets: Sequence[tuple[Iterable[int], float]],
    *,
    positive_costs: bool,
) -> list[tuple[frozenset[int], float]]:
    n_elem = len(element_weights)
    for i, w in enumerate(element_weights, start=1):
        _positive_int(w, f"weight of element {i}")
    norm = []
    for j, (members, cost) in enumerate(sets, start=1):
        members = frozenset(members)
        for u in members:
            if not isinstance(u, int) or not 1 <= u <= n_elem:
                raise DomainError(f"set {j} references element {u!r}, expected 1..{n_elem}")
        if positive_costs:
            cost = _positive_int(cost, f"cost of set {j}")
        elif cost != int(cost) or int(cost) < 0:
            raise DomainError(f"cost of set {j} must be a nonnegative integer, got {cost!r}")
        norm.append((members, float(int(cost))))
    return norm


def covered_weight(
    element_weights: Sequence[float],
    sets: Sequence[tuple[Iterable[int], float]],
    chosen: Iterable[int],
) -> float:
    """Total weight of the elements covered by the chosen sets (1-based ids)."""
    union: set[int] = set()
    for j in chosen:
        if not 1 <= j <= len(sets):
            raise DomainError(f"set id {j} outside 1..{len(sets)}")
        union |= set(sets[j - 1][0])
    return float(sum(element_weights[u - 1] for u in union))


def bmc_reduce(
    element_weights: Sequence[float],
    sets: Sequence[tuple[Iterable[int], float]],
    budget: float,
    threshold: float,
) -> BMCReduction:
    """Encode budgeted max-coverage as a full-obligation removal attack.

    Player 1 is the target; player ``j+1`` stands for set j.  Element i
    becomes one paper authored by player 1 and the players of the sets
    covering i, scored by (number of authors) x (element weight), so each
    paper contributes exactly the element weight to the target's baseline
    Shapley value.  All baselines are 1; removal prices are the set costs.
    """
    norm = _validate_cover_input(element_weights, sets, positive_costs=True)
    budget = _positive_int(budget, "budget k")
    threshold = _positive_int(threshold, "threshold L")
    n = 1 + len(norm)
    papers = []
    for i, w in enumerate(element_weights, start=1):
        authors = {1} | {j + 1 for j, (members, _) in enumerate(norm, start=1) if i in members}
        papers.append((authors, len(authors) * int(w)))
    instance = CreditInstance.of(n, papers)
    costs = CostModel(
        (1.0,) * n,
        (1.0,) * n,
        (1.0,) * n,
        (0.0,) + tuple(cost for _, cost in norm),
    )
    return BMCReduction(instance, costs, float(budget), 1, float(threshold))


def bmc_solve_exact(
    element_weights: Sequence[float],
    sets: Sequence[tuple[Iterable[int], float]],
    budget: float,
    *,
    set_cap: int = 24,
) -> tuple[tuple[int, ...], float]:
    """Exhaustively maximize covered weight under the cost budget.

    Returns the chosen set ids (1-based) and the covered weight; ties prefer
    fewer sets, then lexicographic order.
    """
    norm = _validate_cover_input(element_weights, sets, positive_costs=False)
    if budget != int(budget) or budget < 0:
        raise DomainError(f"budget must be a nonnegative integer, got {budget!r}")
    m = len(norm)
    if m > set_cap:
        raise ResourceLimitError(f"{m} sets exceed the exhaustive-coverage cap ({set_cap})")
    best: tuple[float, int, tuple[int, ...]] | None = None
    for mask in range(1 << m):
        chosen = tuple(j + 1 for j in range(m) if mask >> j & 1)
        cost = sum(norm[j - 1][1] for j in chosen)
        if cost > budget + _COST_EPS:
            continue
        weight = covered_weight(element_weights, sets, chosen)
        if best is None or weight > best[0] + _TIE_EPS:
            best = (weight, len(chosen), chosen)
        elif abs(weight - best[0]) <= _TIE_EPS and (len(chosen), chosen) < (best[1], best[2]):
            best = (weight, len(chosen), chosen)
    weight, _, chosen = best
    return chosen, weight
