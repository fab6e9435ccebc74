"""Exact Shapley values of games and their reliability extensions.

Two independent routes are provided and cross-checked by the test suite:

* :func:`shapley_definitional` - the permutation average itself, evaluated
  over every permutation with exact marginal expectations; the audit oracle.
* :func:`shapley_closed` - per-variant closed forms in the participation
  probabilities, polynomial in local neighborhood / author-list sizes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial

import numpy as np

from .errors import DomainError, ResourceLimitError
from .games import (
    ClosedNeighborhoodGame,
    CreditInstance,
    DistanceCutoffGame,
    FullCreditGame,
    FullObligationGame,
    Game,
    Graph,
    ThresholdNeighborhoodGame,
)
from .reliability import (
    ProfileLike,
    ReliabilityProfile,
    _expected_value_mask,
    as_profile,
)

DEFAULT_PLAYER_CAP = 9


@dataclass(frozen=True)
class ShapleyVector:
    """Shapley values for players 1..n; sums to the grand-coalition value."""

    values: tuple[float, ...]

    @property
    def n(self) -> int:
        return len(self.values)

    def __getitem__(self, player: int) -> float:
        if not 1 <= player <= self.n:
            raise DomainError(f"player {player} outside 1..{self.n}")
        return self.values[player - 1]

    def __iter__(self):
        return iter(self.values)

    def total(self) -> float:
        return sum(self.values)


@lru_cache(maxsize=2)
def _permutation_masks(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All n! permutations plus the coalition bitmasks before/after each
    position, as arrays of shape (n!, n)."""
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    bits = np.left_shift(np.int64(1), perms)
    after = np.bitwise_or.accumulate(bits, axis=1)
    before = np.zeros_like(after)
    before[:, 1:] = after[:, :-1]
    return perms, before, after


def _value_table(game: Game) -> np.ndarray:
    return np.array([game.value_mask(m) for m in range(1 << game.n)], dtype=np.float64)


def _reliability_table(game: Game, p: ReliabilityProfile) -> np.ndarray:
    vals = p.values
    return np.array(
        [_expected_value_mask(game.value_mask, vals, m) for m in range(1 << game.n)],
        dtype=np.float64,
    )


def shapley_definitional(
    game: Game,
    profile: ProfileLike | None = None,
    *,
    player_cap: int = DEFAULT_PLAYER_CAP,
) -> ShapleyVector:
    """Shapley vector by full permutation enumeration (never sampling).

    With a profile, the marginals are exact expectations of the reliability
    extension; without one, the game itself is used.  Enumerating n! * 2^n
    terms is intentional - this is the oracle everything else is checked
    against - so n is limited by ``player_cap``.
    """
    n = game.n
    if n > player_cap:
        raise ResourceLimitError(
            f"n = {n} exceeds the definitional-oracle player cap ({player_cap})"
        )
    if profile is None:
        table = _value_table(game)
    else:
        table = _reliability_table(game, as_profile(profile, n))
    perms, before, after = _permutation_masks(n)
    marginals = table[after] - table[before]
    acc = np.zeros(n, dtype=np.float64)
    np.add.at(acc, perms.ravel(), marginals.ravel())
    return ShapleyVector(tuple(float(v) for v in acc / factorial(n)))


# ---------------------------------------------------------------------------
# closed forms


def _size_pmf(probs: list[float]) -> list[float]:
    """Distribution of the number of live players among independent
    Bernoulli(p) players: pmf[s] = P(exactly s live)."""
    pmf = [1.0]
    for q in probs:
        nxt = [0.0] * (len(pmf) + 1)
        for s, c in enumerate(pmf):
            nxt[s] += c * (1.0 - q)
            nxt[s + 1] += c * q
        pmf = nxt
    return pmf


def _dead_weight_poly(probs: list[float]) -> list[float]:
    """poly[s] = sum over the size-s subsets S of prod_{l in S} (1 - p_l)."""
    poly = [1.0]
    for q in probs:
        dead = 1.0 - q
        nxt = [0.0] * (len(poly) + 1)
        for s, c in enumerate(poly):
            nxt[s] += c
            nxt[s + 1] += c * dead
        poly = nxt
    return poly


def _nc1_inner(graph: Graph, p: ReliabilityProfile, x: int) -> float:
    total = 0.0
    for y in sorted(graph.closed_neighborhood(x)):
        others = sorted(graph.closed_neighborhood(y) - {x})
        pmf = _size_pmf([p[z] for z in others])
        total += sum(c / (s + 1) for s, c in enumerate(pmf))
    return total


def _nc2_inner(game: ThresholdNeighborhoodGame, p: ReliabilityProfile, x: int) -> float:
    graph, k = game.graph, game.threshold
    total = 0.0
    for y in sorted(graph.neighbors(x)):
        rest = sorted(graph.closed_neighborhood(y) - {x, y})
        pmf = _size_pmf([p[z] for z in rest])
        acc = 0.0
        for s1, c in enumerate(pmf):
            s = s1 + 1  # type-counted size when y itself is live
            alive = (s + 1 - k) / (s * (s + 1)) if s + 1 - k > 0 else 0.0
            dead = 1.0 / (s1 + 1) if s1 >= k - 1 else 0.0
            acc += c * (p[y] * alive + (1.0 - p[y]) * dead)
        total += acc
    nbrs = sorted(graph.neighbors(x))
    pmf = _size_pmf([p[z] for z in nbrs])
    total += sum(c * min(k, s + 1) / (s + 1) for s, c in enumerate(pmf))
    return total


def _nc3_inner(game: DistanceCutoffGame, p: ReliabilityProfile, x: int) -> float:
    total = 0.0
    for y in sorted(game.cutoff_neighborhood(x)):
        others = sorted(game.cutoff_neighborhood(y) - {x})
        pmf = _size_pmf([p[z] for z in others])
        total += sum(c / (s + 1) for s, c in enumerate(pmf))
    return total


def _fc_closed(game: FullCreditGame, p: ReliabilityProfile, x: int) -> float:
    inst = game.instance
    total = 0.0
    for i in inst.papers_of(x):
        authors, score = inst.papers[i]
        nk = len(authors)
        poly = _dead_weight_poly([p[l] for l in sorted(authors - {x})])
        total += score * sum(
            c / ((nk - s) * comb(nk, s)) for s, c in enumerate(poly)
        )
    return p[x] * total


def _fo_closed(game: FullObligationGame, p: ReliabilityProfile, x: int) -> float:
    total = 0.0
    for i in game.instance.papers_of(x):
        authors, score = game.instance.papers[i]
        prob = 1.0
        for l in sorted(authors):
            prob *= p[l]
        total += score / len(authors) * prob
    return total


def shapley_closed(game: Game, profile: ProfileLike, player: int) -> float:
    """Closed-form Shapley value of ``player`` in the reliability extension.

    Supports the five wire variants; table games have no closed form and must
    go through :func:`shapley_definitional`.
    """
    p = as_profile(profile, game.n)
    if not 1 <= player <= game.n:
        raise DomainError(f"player {player} outside 1..{game.n}")
    if isinstance(game, ClosedNeighborhoodGame):
        return p[player] * _nc1_inner(game.graph, p, player)
    if isinstance(game, ThresholdNeighborhoodGame):
        return p[player] * _nc2_inner(game, p, player)
    if isinstance(game, DistanceCutoffGame):
        return p[player] * _nc3_inner(game, p, player)
    if isinstance(game, FullCreditGame):
        return _fc_closed(game, p, player)
    if isinstance(game, FullObligationGame):
        return _fo_closed(game, p, player)
    raise DomainError(
        f"no closed form for game variant {game.variant!r}; use shapley_definitional"
    )


def shapley_vector_closed(game: Game, profile: ProfileLike) -> ShapleyVector:
    """Closed-form Shapley values of every player."""
    p = as_profile(profile, game.n)
    return ShapleyVector(tuple(shapley_closed(game, p, x) for x in range(1, game.n + 1)))


def shapley_fc_two_author(instance: CreditInstance, profile: ProfileLike, x: int) -> float:
    """Full-credit Shapley value of x when all of x's papers have exactly two
    authors: ``p_x * sum_l C(x,l) * (2 - p_l) / 2``."""
    p = as_profile(profile, instance.n)
    if not 1 <= x <= instance.n:
        raise DomainError(f"player {x} outside 1..{instance.n}")
    contrib: dict[int, float] = {}
    for i in instance.papers_of(x):
        authors, score = instance.papers[i]
        if len(authors) != 2:
            raise DomainError(
                f"paper {sorted(authors)} of player {x} has {len(authors)} authors, expected 2"
            )
        (l,) = authors - {x}
        contrib[l] = contrib.get(l, 0.0) + score
    return p[x] * sum(contrib[l] * (2.0 - p[l]) / 2.0 for l in sorted(contrib))


def shapley_cycle_closed(profile: ProfileLike) -> float:
    """Shapley value of player 1 in the closed-neighborhood game on the cycle
    1-2-...-n-1 (n >= 5); only p_1, p_2, p_3, p_{n-1}, p_n enter:

    ``p_1 * ((p_2 p_n + p_2 p_3 + p_{n-1} p_n)/3 - (p_3 + p_{n-1})/2
    - p_2 - p_n + 3)``
    """
    p = as_profile(profile)
    n = p.n
    if n < 5:
        raise DomainError(
            f"cycle closed form needs n >= 5 (got n={n}); use shapley_definitional"
        )
    return p[1] * (
        (p[2] * p[n] + p[2] * p[3] + p[n - 1] * p[n]) / 3.0
        - (p[3] + p[n - 1]) / 2.0
        - p[2]
        - p[n]
        + 3.0
    )


# ---------------------------------------------------------------------------
# gradients


def shapley_gradient_nc1(graph: Graph, profile: ProfileLike, x: int) -> tuple[float, ...]:
    """Gradient of the closed-neighborhood Shapley value of x in every p_j.

    Entries for j != x are nonpositive and vanish outside the distance-two
    ball of x; the entry for x itself is the (nonnegative) derivative in the
    target's own reliability.
    """
    p = as_profile(profile, graph.n)
    if not 1 <= x <= graph.n:
        raise DomainError(f"player {x} outside 1..{graph.n}")
    out = [0.0] * graph.n
    out[x - 1] = _nc1_inner(graph, p, x)
    hood_x = graph.closed_neighborhood(x)
    for j in range(1, graph.n + 1):
        if j == x:
            continue
        common = hood_x & graph.closed_neighborhood(j)
        if not common:
            continue
        total = 0.0
        for y in sorted(common):
            others = sorted(graph.closed_neighborhood(y) - {x, j})
            pmf = _size_pmf([p[z] for z in others])
            total += sum(c / ((s + 1) * (s + 2)) for s, c in enumerate(pmf))
        out[j - 1] = -p[x] * total
    return tuple(out)


def _central_difference(f, p: ReliabilityProfile, j: int, h: float) -> float:
    lo = max(0.0, p[j] - h)
    hi = min(1.0, p[j] + h)
    return (f(p.with_value(j, hi)) - f(p.with_value(j, lo))) / (hi - lo)


def shapley_gradient(game: Game, profile: ProfileLike, x: int, *, step: float = 1e-6) -> tuple[float, ...]:
    """Gradient of the closed-form Shapley value of x in every p_j.

    Analytic for the closed-neighborhood game; the other variants are
    differentiated numerically (central differences of the closed form) as a
    cross-check surface.
    """
    p = as_profile(profile, game.n)
    if isinstance(game, ClosedNeighborhoodGame):
        return shapley_gradient_nc1(game.graph, p, x)
    f = lambda q: shapley_closed(game, q, x)
    return tuple(
        _central_difference(f, p, j, step) for j in range(1, game.n + 1)
    )
