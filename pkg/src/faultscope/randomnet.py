"""Seeded random topologies for batteries and figure-style experiments."""

from __future__ import annotations

import random
from typing import NamedTuple

from .errors import GenerationError
from .topology import Graph, Topology


DEFAULT_MAX_RETRIES = 1000


class GenResult(NamedTuple):
    topology: Topology
    retries: int


def _node_labels(n: int) -> tuple[str, ...]:
    width = len(str(n - 1))
    return tuple(f"n{i:0{width}d}" for i in range(n))


def _sample_edges(
    nodes: tuple[str, ...], p: float, rng: random.Random
) -> tuple[tuple[str, str], ...]:
    edges = []
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            if rng.random() < p:
                edges.append((nodes[i], nodes[j]))
    return tuple(edges)


def gen_er(
    n: int,
    p: float,
    seed: int,
    *,
    max_retries: int = DEFAULT_MAX_RETRIES,
) -> GenResult:
    """Seeded Erdos-Renyi topology, resampled until connected.

    Every unordered node pair gets an edge independently with probability
    ``p``. The driving generator persists across resamples, so a fixed seed
    yields one reproducible outcome together with the number of rejected
    disconnected draws.
    """
    if n < 2:
        raise ValueError("need at least two nodes")
    if not 0.0 < p <= 1.0:
        raise ValueError("edge probability must be in (0, 1]")
    nodes = _node_labels(n)
    rng = random.Random(seed)
    for attempt in range(max_retries + 1):
        candidate = Graph(nodes=nodes, edges=_sample_edges(nodes, p, rng))
        if candidate.is_connected():
            return GenResult(Topology(candidate.nodes, candidate.edges), attempt)
    raise GenerationError(
        f"no connected graph within {max_retries} retries (n={n}, p={p}, seed={seed})"
    )


def place_monitors(t: Topology, mu: int, seed: int) -> Topology:
    """Re-monitor ``t`` with a uniform random seeded choice of ``mu`` nodes."""
    if not 1 <= mu <= len(t.nodes):
        raise ValueError(f"monitor count must be in 1..{len(t.nodes)}")
    rng = random.Random(seed)
    chosen = rng.sample(sorted(t.nodes), mu)
    return t.with_monitors(frozenset(chosen))


def random_graph(n: int, p: float, seed: int) -> Graph:
    """One seeded ER draw with no connectivity requirement (cut batteries)."""
    if n < 1:
        raise ValueError("need at least one node")
    if not 0.0 <= p <= 1.0:
        raise ValueError("edge probability must be in [0, 1]")
    nodes = _node_labels(n)
    rng = random.Random(seed)
    return Graph(nodes=nodes, edges=_sample_edges(nodes, p, rng))
