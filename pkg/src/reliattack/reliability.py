"""Reliability extension: independent per-player participation.

For a profile ``p`` and coalitions ``T <= S``, ``pi_prob(T, S, p)`` is the
probability that exactly the players of T are live among S.  The reliability
extension of a game v is ``vbar(S) = sum_{T<=S} v(T) * pi_prob(T, S, p)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import DomainError, ResourceLimitError
from .games import Coalition, Game, _as_playerset

DEFAULT_SUBSET_CAP = 20


@dataclass(frozen=True)
class ReliabilityProfile:
    """Per-player participation probabilities, indexed 1..n."""

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        for i, v in enumerate(self.values, start=1):
            if not 0.0 <= v <= 1.0:
                raise DomainError(f"p_{i} = {v} outside [0, 1]")

    @classmethod
    def ones(cls, n: int) -> "ReliabilityProfile":
        return cls((1.0,) * n)

    @classmethod
    def constant(cls, n: int, p: float) -> "ReliabilityProfile":
        return cls((p,) * n)

    @property
    def n(self) -> int:
        return len(self.values)

    def __getitem__(self, player: int) -> float:
        if not 1 <= player <= self.n:
            raise DomainError(f"player {player} outside 1..{self.n}")
        return self.values[player - 1]

    def __iter__(self):
        return iter(self.values)

    def with_value(self, player: int, p: float) -> "ReliabilityProfile":
        if not 1 <= player <= self.n:
            raise DomainError(f"player {player} outside 1..{self.n}")
        vals = list(self.values)
        vals[player - 1] = p
        return ReliabilityProfile(tuple(vals))

    def with_values(self, changes: dict[int, float]) -> "ReliabilityProfile":
        vals = list(self.values)
        for player, p in changes.items():
            if not 1 <= player <= self.n:
                raise DomainError(f"player {player} outside 1..{self.n}")
            vals[player - 1] = p
        return ReliabilityProfile(tuple(vals))


ProfileLike = ReliabilityProfile | Sequence[float]


def as_profile(p: ProfileLike, n: int | None = None) -> ReliabilityProfile:
    prof = p if isinstance(p, ReliabilityProfile) else ReliabilityProfile(tuple(p))
    if n is not None and prof.n != n:
        raise DomainError(f"profile has {prof.n} entries, expected {n}")
    return prof


def pi_prob(live: Coalition, among: Coalition, profile: ProfileLike) -> float:
    """Probability that exactly ``live`` is the live subset of ``among``."""
    p = as_profile(profile)
    t = _as_playerset(live, p.n, "live set")
    s = _as_playerset(among, p.n, "host set")
    if not t <= s:
        raise DomainError("live set must be a subset of the host set")
    prob = 1.0
    for i in sorted(s):
        prob *= p[i] if i in t else 1.0 - p[i]
    return prob


def pi_partial(live: Coalition, among: Coalition, profile: ProfileLike, j: int) -> float:
    """Partial derivative of ``pi_prob(live, among, p)`` in ``p_j``.

    Equals ``pi_prob(live - j, among - j)`` when j is live,
    ``-pi_prob(live, among - j)`` when j is in the host set but not live,
    and 0 when j is outside the host set.
    """
    p = as_profile(profile)
    t = _as_playerset(live, p.n, "live set")
    s = _as_playerset(among, p.n, "host set")
    if not t <= s:
        raise DomainError("live set must be a subset of the host set")
    if not 1 <= j <= p.n:
        raise DomainError(f"player {j} outside 1..{p.n}")
    if j not in s:
        return 0.0
    if j in t:
        return pi_prob(t - {j}, s - {j}, p)
    return -pi_prob(t, s - {j}, p)


def _expected_value_mask(value_mask: Callable[[int], float], pvals: Sequence[float], smask: int) -> float:
    """Exact expectation of the masked value function over independent
    liveness of the members of ``smask``; summation in ascending order of the
    compressed submask index for cross-run determinism."""
    members = []
    m = smask
    while m:
        low = m & -m
        members.append(low.bit_length())
        m ^= low
    k = len(members)
    total = 0.0
    for r in range(1 << k):
        tmask = 0
        prob = 1.0
        for idx, player in enumerate(members):
            if r >> idx & 1:
                tmask |= 1 << (player - 1)
                prob *= pvals[player - 1]
            else:
                prob *= 1.0 - pvals[player - 1]
        if prob:
            total += value_mask(tmask) * prob
    return total


def reliability_value(
    game: Game,
    profile: ProfileLike,
    coalition: Coalition,
    *,
    subset_cap: int = DEFAULT_SUBSET_CAP,
) -> float:
    """Value of the reliability extension of ``game`` at ``coalition``.

    Exact (enumerates the 2^|S| liveness outcomes), so ``|S|`` is limited by
    ``subset_cap``; raise the cap deliberately for larger exact runs.
    """
    p = as_profile(profile, game.n)
    s = _as_playerset(coalition, game.n)
    if len(s) > subset_cap:
        raise ResourceLimitError(
            f"coalition size {len(s)} exceeds the exact-expectation subset cap ({subset_cap})"
        )
    smask = 0
    for x in s:
        smask |= 1 << (x - 1)
    return _expected_value_mask(game.value_mask, p.values, smask)
