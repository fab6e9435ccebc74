"""Shared random-instance generators; everything is seeded and deterministic."""

from __future__ import annotations

import random

import pytest

from reliattack import (
    ClosedNeighborhoodGame,
    CreditInstance,
    DistanceCutoffGame,
    FullCreditGame,
    FullObligationGame,
    Graph,
    ReliabilityProfile,
    ThresholdNeighborhoodGame,
)


def random_graph(rng: random.Random, n: int, p_edge: float = 0.5, weighted: bool = False) -> Graph:
    edges = []
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            if rng.random() < p_edge:
                if weighted:
                    edges.append((u, v, rng.uniform(0.2, 2.0)))
                else:
                    edges.append((u, v))
    return Graph.of(n, edges)


def random_weighted_graph(rng: random.Random, n: int, p_edge: float = 0.6) -> Graph:
    edges = []
    weights = []
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            if rng.random() < p_edge:
                edges.append((u, v))
                weights.append(rng.uniform(0.2, 2.0))
    return Graph(n, tuple(edges), tuple(weights))


def random_credit(rng: random.Random, n: int, max_papers: int = 5) -> CreditInstance:
    papers = []
    for _ in range(rng.randint(1, max_papers)):
        size = rng.randint(1, min(n, 4))
        papers.append((rng.sample(range(1, n + 1), size), rng.uniform(0.0, 3.0)))
    return CreditInstance.of(n, papers)


def random_two_author_credit(rng: random.Random, n: int, x: int = 1) -> CreditInstance:
    """Instance where every paper of player x has exactly two authors."""
    papers = []
    others = [j for j in range(1, n + 1) if j != x]
    for l in rng.sample(others, rng.randint(1, len(others))):
        for _ in range(rng.randint(1, 2)):
            papers.append(((x, l), rng.uniform(0.2, 4.0)))
    for _ in range(rng.randint(0, 2)):
        if len(others) >= 2:
            papers.append((rng.sample(others, 2), rng.uniform(0.2, 2.0)))
    return CreditInstance.of(n, papers)


def random_profile(rng: random.Random, n: int, lo: float = 0.0, hi: float = 1.0) -> ReliabilityProfile:
    return ReliabilityProfile(tuple(rng.uniform(lo, hi) for _ in range(n)))


def random_game(rng: random.Random, variant: str, n: int):
    if variant == "nc1":
        return ClosedNeighborhoodGame(random_graph(rng, n))
    if variant.startswith("nc2"):
        k = int(variant[-1]) if len(variant) > 3 else rng.randint(1, 3)
        return ThresholdNeighborhoodGame(random_graph(rng, n), k)
    if variant == "nc3":
        return DistanceCutoffGame(random_weighted_graph(rng, n), rng.uniform(0.3, 2.5))
    if variant == "fc":
        return FullCreditGame(random_credit(rng, n))
    if variant == "fo":
        return FullObligationGame(random_credit(rng, n))
    raise ValueError(variant)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240817)
