"""Graphs, coauthorship instances and the five coalition value functions.

Players are the integers ``1..n``.  Coalitions are plain sets of players;
internally every game also evaluates coalitions given as bitmasks (bit
``i-1`` set means player ``i`` is in), which is what the exact Shapley
machinery iterates over.
"""

from __future__ import annotations

import heapq
import itertools
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import DomainError

Coalition = Iterable[int]


def _as_playerset(players: Coalition, n: int, what: str = "coalition") -> frozenset[int]:
    s = frozenset(players)
    for x in s:
        if not isinstance(x, int) or not 1 <= x <= n:
            raise DomainError(f"{what} contains player {x!r}, expected integers in 1..{n}")
    return s


def _mask_of(players: frozenset[int]) -> int:
    m = 0
    for x in players:
        m |= 1 << (x - 1)
    return m


def _players_of(mask: int) -> frozenset[int]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


# ---------------------------------------------------------------------------
# graphs


@dataclass(frozen=True)
class Graph:
    """Finite simple undirected graph on players ``1..n``.

    ``edges`` holds normalized pairs ``(u, v)`` with ``u < v``.  ``weights``,
    when present, is parallel to ``edges`` and strictly positive.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    weights: tuple[float, ...] | None = None
    _adj: tuple[frozenset[int], ...] = field(init=False, repr=False, compare=False)
    _nbr_mask: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DomainError(f"graph needs at least one player, got n={self.n}")
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise DomainError(f"self-loop at player {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise DomainError(f"edge ({u},{v}) has endpoint outside 1..{self.n}")
            if u > v:
                raise DomainError(f"edge ({u},{v}) not normalized as (min,max)")
            if (u, v) in seen:
                raise DomainError(f"duplicate edge ({u},{v})")
            seen.add((u, v))
        if self.weights is not None:
            if len(self.weights) != len(self.edges):
                raise DomainError("weights must be parallel to edges")
            for w in self.weights:
                if not w > 0:
                    raise DomainError(f"edge weight {w} is not strictly positive")
        adj = [set() for _ in range(self.n + 1)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "_adj", tuple(frozenset(a) for a in adj))
        object.__setattr__(
            self, "_nbr_mask", tuple(_mask_of(a) for a in self._adj)
        )

    @classmethod
    def of(cls, n: int, edges: Iterable[Sequence[float]]) -> "Graph":
        """Build from ``[u, v]`` or ``[u, v, w]`` items, normalizing endpoint order."""
        plain: list[tuple[int, int]] = []
        wts: list[float] = []
        weighted = None
        for e in edges:
            e = list(e)
            if len(e) not in (2, 3):
                raise DomainError(f"edge {e} must be [u, v] or [u, v, w]")
            u, v = int(e[0]), int(e[1])
            if u > v:
                u, v = v, u
            plain.append((u, v))
            if len(e) == 3:
                if weighted is False:
                    raise DomainError("mixed weighted and unweighted edges")
                weighted = True
                wts.append(float(e[2]))
            else:
                if weighted is True:
                    raise DomainError("mixed weighted and unweighted edges")
                weighted = False
        order = sorted(range(len(plain)), key=lambda i: plain[i])
        return cls(
            n,
            tuple(plain[i] for i in order),
            tuple(wts[i] for i in order) if weighted else None,
        )

    @property
    def is_weighted(self) -> bool:
        return self.weights is not None

    def neighbors(self, x: int) -> frozenset[int]:
        if not 1 <= x <= self.n:
            raise DomainError(f"player {x} outside 1..{self.n}")
        return self._adj[x]

    def closed_neighborhood(self, x: int) -> frozenset[int]:
        return self.neighbors(x) | {x}

    def weight(self, u: int, v: int) -> float:
        """Weight of edge (u,v); 1.0 for every edge of an unweighted graph."""
        if u > v:
            u, v = v, u
        if self.weights is None:
            if v not in self._adj[u]:
                raise DomainError(f"({u},{v}) is not an edge")
            return 1.0
        try:
            return self.weights[self.edges.index((u, v))]
        except ValueError:
            raise DomainError(f"({u},{v}) is not an edge") from None

    def edge_weight_items(self) -> list[tuple[tuple[int, int], float]]:
        if self.weights is None:
            return [(e, 1.0) for e in self.edges]
        return list(zip(self.edges, self.weights))


def boundary(graph: Graph, coalition: Coalition) -> frozenset[int]:
    """Players outside the coalition adjacent to at least one member."""
    s = _as_playerset(coalition, graph.n)
    out: set[int] = set()
    for x in s:
        out |= graph.neighbors(x)
    return frozenset(out - s)


def ball(graph: Graph, coalition: Coalition, radius: float) -> frozenset[int]:
    """Players within (weighted) shortest-path distance ``radius`` of the
    coalition; distance ties at exactly ``radius`` are included.

    Unweighted graphs use hop distance.  An empty coalition has an empty ball.
    """
    if radius < 0:
        raise DomainError(f"radius {radius} is negative")
    s = _as_playerset(coalition, graph.n)
    if not s:
        return frozenset()
    dist = {x: 0.0 for x in s}
    pq: list[tuple[float, int]] = [(0.0, x) for x in sorted(s)]
    heapq.heapify(pq)
    while pq:
        d, u = heapq.heappop(pq)
        if d > dist.get(u, float("inf")):
            continue
        for v in sorted(graph.neighbors(u)):
            nd = d + graph.weight(u, v)
            if nd < dist.get(v, float("inf")):
                dist[v] = nd
                heapq.heappush(pq, (nd, v))
    return frozenset(x for x, d in dist.items() if d <= radius)


# graph builders used by the attack solvers and tests

def complete_graph(n: int) -> Graph:
    return Graph(n, tuple((u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)))


def star_graph(n: int, center: int = 1) -> Graph:
    if not 1 <= center <= n:
        raise DomainError(f"center {center} outside 1..{n}")
    return Graph(n, tuple(sorted((min(center, v), max(center, v)) for v in range(1, n + 1) if v != center)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise DomainError(f"a cycle needs n >= 3, got {n}")
    edges = sorted((u, u + 1) for u in range(1, n)) + [(1, n)]
    return Graph(n, tuple(sorted(edges)))


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((u, u + 1) for u in range(1, n)))


def is_complete(graph: Graph) -> bool:
    return len(graph.edges) == graph.n * (graph.n - 1) // 2


def star_center(graph: Graph) -> int | None:
    """Center of a star graph (one hub adjacent to all others, no other
    edges), or None if the graph is not a star.  Requires n >= 3."""
    if graph.n < 3 or len(graph.edges) != graph.n - 1:
        return None
    for c in range(1, graph.n + 1):
        if len(graph.neighbors(c)) == graph.n - 1:
            return c
    return None


def cycle_sequence(graph: Graph) -> tuple[int, ...] | None:
    """Players of a cycle graph in cyclic order starting at player 1,
    stepping first to 1's smaller-indexed neighbor; None if not a cycle."""
    n = graph.n
    if n < 3 or len(graph.edges) != n:
        return None
    if any(len(graph.neighbors(v)) != 2 for v in range(1, n + 1)):
        return None
    seq = [1, min(graph.neighbors(1))]
    while len(seq) < n:
        nxt = graph.neighbors(seq[-1]) - {seq[-2]}
        if len(nxt) != 1:
            return None
        seq.append(next(iter(nxt)))
    if seq[0] not in graph.neighbors(seq[-1]) or len(set(seq)) != n:
        return None
    return tuple(seq)


# ---------------------------------------------------------------------------
# coauthorship


@dataclass(frozen=True)
class CreditInstance:
    """Authors ``1..n`` plus papers, each a nonempty author set with a
    nonnegative score."""

    n: int
    papers: tuple[tuple[frozenset[int], float], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DomainError(f"need at least one author, got n={self.n}")
        norm = []
        for authors, score in self.papers:
            authors = _as_playerset(authors, self.n, "author set")
            if not authors:
                raise DomainError("paper with empty author set")
            if score < 0:
                raise DomainError(f"paper score {score} is negative")
            norm.append((authors, float(score)))
        object.__setattr__(self, "papers", tuple(norm))

    @classmethod
    def of(cls, n: int, papers: Iterable[tuple[Iterable[int], float]]) -> "CreditInstance":
        return cls(n, tuple((frozenset(a), float(s)) for a, s in papers))

    def papers_of(self, x: int) -> list[int]:
        """Indices (0-based into ``papers``) of the papers authored by x."""
        if not 1 <= x <= self.n:
            raise DomainError(f"player {x} outside 1..{self.n}")
        return [i for i, (authors, _) in enumerate(self.papers) if x in authors]

    def coauthors(self, x: int) -> frozenset[int]:
        out: set[int] = set()
        for i in self.papers_of(x):
            out |= self.papers[i][0]
        return frozenset(out - {x})


def coauthor_contributions(instance: CreditInstance, x: int) -> dict[int, float]:
    """Joint contribution of x with each coauthor: the total score of their
    shared papers.  Players with no shared paper are absent from the map."""
    contrib: dict[int, float] = {}
    for i in instance.papers_of(x):
        authors, score = instance.papers[i]
        for l in authors:
            if l != x:
                contrib[l] = contrib.get(l, 0.0) + score
    return {l: contrib[l] for l in sorted(contrib)}


def induced_subgraph_to_credit(graph: Graph) -> CreditInstance:
    """One two-author paper per edge, scored by the edge weight, so that the
    full-obligation game on the result reproduces the induced-subgraph game."""
    return CreditInstance.of(
        graph.n, [((u, v), w) for (u, v), w in graph.edge_weight_items()]
    )


# ---------------------------------------------------------------------------
# games


class Game(ABC):
    """A coalition value function on players ``1..n`` with ``value({}) == 0``."""

    variant: str
    n: int

    def value(self, coalition: Coalition) -> float:
        return self.value_mask(_mask_of(_as_playerset(coalition, self.n)))

    @abstractmethod
    def value_mask(self, mask: int) -> float:
        """Coalition value for a bitmask coalition (bit i-1 <=> player i)."""


def char_value(game: Game, coalition: Coalition) -> float:
    """Characteristic-function value of the coalition under the given game."""
    return game.value(coalition)


@dataclass(frozen=True)
class ClosedNeighborhoodGame(Game):
    """Value of S is the number of players in S or adjacent to S."""

    graph: Graph
    variant = "nc1"

    @property
    def n(self) -> int:
        return self.graph.n

    def value_mask(self, mask: int) -> float:
        cover = mask
        m = mask
        nbr = self.graph._nbr_mask
        while m:
            low = m & -m
            cover |= nbr[low.bit_length()]
            m ^= low
        return float(cover.bit_count())


@dataclass(frozen=True)
class ThresholdNeighborhoodGame(Game):
    """Value of S counts S plus the outside players with at least
    ``threshold`` neighbors inside S."""

    graph: Graph
    threshold: int
    variant = "nc2"

    def __post_init__(self) -> None:
        if self.threshold < 1:
            raise DomainError(f"threshold k must be >= 1, got {self.threshold}")

    @property
    def n(self) -> int:
        return self.graph.n

    def value_mask(self, mask: int) -> float:
        count = mask.bit_count()
        nbr = self.graph._nbr_mask
        for x in range(1, self.n + 1):
            if mask >> (x - 1) & 1:
                continue
            if (nbr[x] & mask).bit_count() >= self.threshold:
                count += 1
        return float(count)


@dataclass(frozen=True)
class DistanceCutoffGame(Game):
    """Value of S is the size of the ball of radius ``cutoff`` around S in a
    weighted graph (distance ties at the cutoff included)."""

    graph: Graph
    cutoff: float
    _ball_mask: tuple[int, ...] = field(init=False, repr=False, compare=False)
    variant = "nc3"

    def __post_init__(self) -> None:
        if not self.graph.is_weighted:
            raise DomainError("distance-cutoff game needs an edge-weighted graph")
        if not self.cutoff > 0:
            raise DomainError(f"cutoff must be positive, got {self.cutoff}")
        balls = [0] + [
            _mask_of(ball(self.graph, {x}, self.cutoff)) for x in range(1, self.graph.n + 1)
        ]
        object.__setattr__(self, "_ball_mask", tuple(balls))

    @property
    def n(self) -> int:
        return self.graph.n

    def cutoff_neighborhood(self, x: int) -> frozenset[int]:
        """Ball of radius ``cutoff`` around x (always contains x)."""
        if not 1 <= x <= self.n:
            raise DomainError(f"player {x} outside 1..{self.n}")
        return _players_of(self._ball_mask[x])

    def value_mask(self, mask: int) -> float:
        cover = 0
        m = mask
        while m:
            low = m & -m
            cover |= self._ball_mask[low.bit_length()]
            m ^= low
        return float(cover.bit_count())


@dataclass(frozen=True)
class FullCreditGame(Game):
    """A coalition earns every paper with at least one of its authors."""

    instance: CreditInstance
    _auth_masks: tuple[int, ...] = field(init=False, repr=False, compare=False)
    variant = "fc"

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "_auth_masks", tuple(_mask_of(a) for a, _ in self.instance.papers)
        )

    @property
    def n(self) -> int:
        return self.instance.n

    def value_mask(self, mask: int) -> float:
        return sum(
            score
            for (_, score), am in zip(self.instance.papers, self._auth_masks)
            if am & mask
        )


@dataclass(frozen=True)
class FullObligationGame(Game):
    """A coalition earns a paper only if it contains all of its authors."""

    instance: CreditInstance
    _auth_masks: tuple[int, ...] = field(init=False, repr=False, compare=False)
    variant = "fo"

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "_auth_masks", tuple(_mask_of(a) for a, _ in self.instance.papers)
        )

    @property
    def n(self) -> int:
        return self.instance.n

    def value_mask(self, mask: int) -> float:
        return sum(
            score
            for (_, score), am in zip(self.instance.papers, self._auth_masks)
            if am & mask == am
        )


class TableGame(Game):
    """Explicit subset -> value table; for oracle cross-tests only."""

    variant = "table"

    def __init__(self, n: int, table: Mapping[Iterable[int], float]):
        self.n = n
        norm: dict[frozenset[int], float] = {}
        for coalition, val in table.items():
            norm[_as_playerset(coalition, n, "table key")] = float(val)
        if norm.get(frozenset()) is None:
            raise DomainError("table must define the empty-coalition value")
        if norm[frozenset()] != 0.0:
            raise DomainError("table value of the empty coalition must be 0")
        self._table = norm

    def value_mask(self, mask: int) -> float:
        key = _players_of(mask)
        try:
            return self._table[key]
        except KeyError:
            raise DomainError(f"table has no value for coalition {sorted(key)}") from None


GameSpec = Game  # the dispatchable union of the variants above


# ---------------------------------------------------------------------------
# JSON wire format

_NC_VARIANTS = {"nc1", "nc2", "nc3"}
_CREDIT_VARIANTS = {"fc", "fo"}


def game_from_json(data: Mapping) -> Game:
    """Parse the game file schema.

    ``{"variant": "nc1"|"nc2"|"nc3"|"fc"|"fo", "n": int,
       "edges": [[u,v] | [u,v,w]], "k": int?, "d_cut": number?,
       "papers": [{"authors": [...], "score": number}]?}``
    """
    try:
        variant = data["variant"]
        n = int(data["n"])
    except KeyError as exc:
        raise DomainError(f"game file missing field {exc.args[0]!r}") from None
    if variant in _NC_VARIANTS:
        if "edges" not in data:
            raise DomainError(f"variant {variant!r} requires field 'edges'")
        if "papers" in data:
            raise DomainError(f"variant {variant!r} must not carry field 'papers'")
        graph = Graph.of(n, data["edges"])
        if variant == "nc1":
            return ClosedNeighborhoodGame(graph)
        if variant == "nc2":
            if "k" not in data:
                raise DomainError("variant 'nc2' requires field 'k'")
            return ThresholdNeighborhoodGame(graph, int(data["k"]))
        if "d_cut" not in data:
            raise DomainError("variant 'nc3' requires field 'd_cut'")
        return DistanceCutoffGame(graph, float(data["d_cut"]))
    if variant in _CREDIT_VARIANTS:
        if "papers" not in data:
            raise DomainError(f"variant {variant!r} requires field 'papers'")
        if "edges" in data:
            raise DomainError(f"variant {variant!r} must not carry field 'edges'")
        papers = []
        for i, paper in enumerate(data["papers"]):
            try:
                papers.append((paper["authors"], paper["score"]))
            except KeyError as exc:
                raise DomainError(
                    f"paper {i} missing field {exc.args[0]!r}"
                ) from None
        inst = CreditInstance.of(n, papers)
        return FullCreditGame(inst) if variant == "fc" else FullObligationGame(inst)
    raise DomainError(f"unknown game variant {variant!r}")


def game_to_json(game: Game) -> dict:
    """Inverse of :func:`game_from_json` for the five wire variants."""
    if isinstance(game, (ClosedNeighborhoodGame, ThresholdNeighborhoodGame, DistanceCutoffGame)):
        g = game.graph
        if g.is_weighted:
            edges = [[u, v, w] for (u, v), w in zip(g.edges, g.weights)]
        else:
            edges = [[u, v] for u, v in g.edges]
        out: dict = {"variant": game.variant, "n": g.n, "edges": edges}
        if isinstance(game, ThresholdNeighborhoodGame):
            out["k"] = game.threshold
        if isinstance(game, DistanceCutoffGame):
            out["d_cut"] = game.cutoff
        return out
    if isinstance(game, (FullCreditGame, FullObligationGame)):
        return {
            "variant": game.variant,
            "n": game.n,
            "papers": [
                {"authors": sorted(a), "score": s} for a, s in game.instance.papers
            ],
        }
    raise DomainError(f"game variant {game.variant!r} has no JSON form")


def all_coalitions(n: int) -> Iterable[frozenset[int]]:
    """Every coalition of 1..n in bitmask order (deterministic)."""
    for mask in range(1 << n):
        yield _players_of(mask)


def subsets_of(players: Coalition) -> Iterable[frozenset[int]]:
    """All subsets of the given player set, smallest first, deterministic."""
    ordered = sorted(set(players))
    for r in range(len(ordered) + 1):
        for combo in itertools.combinations(ordered, r):
            yield frozenset(combo)
