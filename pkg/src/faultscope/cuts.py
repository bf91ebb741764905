"""Minimum vertex cuts between node pairs, in the convention the analyses need.

The cut between non-adjacent s and t is the classic one: the smallest set of
other nodes whose removal destroys every s-t path, computed via Menger's
theorem as a unit-capacity max flow on the node-split digraph (each node
other than s and t becomes an in/out pair joined by a capacity-1 arc; each
undirected link becomes two arcs of capacity exceeding |V|). Augmenting paths
are found by BFS, so each augmentation is a shortest path and the total work
is O(cut_size * links).

Adjacent pairs get the convention used throughout the identifiability
results: C_G(s, t) := V(G) \\ {t}, i.e. cut size |V(G)| - 1. All public
entry points honor it, including :func:`two_connected`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .topology import Graph


@dataclass(frozen=True)
class CutQueryResult:
    """Outcome of one minimum vertex-cut query."""

    source: str
    sink: str
    cut_size: int
    adjacent_case: bool = False


def _check_pair(g: Graph, s: str, t: str) -> None:
    if not g.has_node(s):
        raise ValueError(f"unknown node {s!r}")
    if not g.has_node(t):
        raise ValueError(f"unknown node {t!r}")
    if s == t:
        raise ValueError("source and sink must differ")


def _disjoint_path_count(g: Graph, s: str, t: str) -> int:
    # Node-split unit-capacity max flow. Indices: s -> 0, t -> 1, every other
    # node x -> (in, out) = (2i, 2i+1) with a capacity-1 internal arc.
    others = [n for n in g.nodes if n != s and n != t]
    node_in: dict[str, int] = {s: 0, t: 1}
    node_out: dict[str, int] = {s: 0, t: 1}
    nxt = 2
    for x in others:
        node_in[x] = nxt
        node_out[x] = nxt + 1
        nxt += 2

    big = len(g.nodes) + 1
    to: list[int] = []
    cap: list[int] = []
    adj: list[list[int]] = [[] for _ in range(nxt)]

    def add_arc(a: int, b: int, c: int) -> None:
        adj[a].append(len(to))
        to.append(b)
        cap.append(c)
        adj[b].append(len(to))
        to.append(a)
        cap.append(0)

    for x in others:
        add_arc(node_in[x], node_out[x], 1)
    for u, v in g.edges:
        add_arc(node_out[u], node_in[v], big)
        add_arc(node_out[v], node_in[u], big)

    src, dst = 0, 1
    flow = 0
    while True:
        prev_edge = [-1] * nxt
        prev_edge[src] = -2
        queue = deque([src])
        while queue and prev_edge[dst] == -1:
            u = queue.popleft()
            for eid in adj[u]:
                if cap[eid] > 0 and prev_edge[to[eid]] == -1:
                    prev_edge[to[eid]] = eid
                    queue.append(to[eid])
        if prev_edge[dst] == -1:
            return flow
        bottleneck = big
        node = dst
        while node != src:
            eid = prev_edge[node]
            bottleneck = min(bottleneck, cap[eid])
            node = to[eid ^ 1]
        node = dst
        while node != src:
            eid = prev_edge[node]
            cap[eid] -= bottleneck
            cap[eid ^ 1] += bottleneck
            node = to[eid ^ 1]
        flow += bottleneck


def min_vertex_cut_size(g: Graph, s: str, t: str) -> CutQueryResult:
    """Size of the minimum vertex cut between ``s`` and ``t``.

    Adjacent pairs return |V(G)| - 1 by convention (no third-node set can
    separate them); other pairs return the Menger value, which is 0 when the
    pair is already disconnected.
    """
    _check_pair(g, s, t)
    if g.has_edge(s, t):
        return CutQueryResult(s, t, len(g.nodes) - 1, adjacent_case=True)
    return CutQueryResult(s, t, _disjoint_path_count(g, s, t))


def gamma(g: Graph, group: Iterable[str], m: str) -> int:
    """Smallest cut between any member of ``group`` and the anchor ``m``."""
    members = sorted(set(group))
    if not members:
        raise ValueError("group must be non-empty")
    if m in members:
        raise ValueError("anchor must not belong to the group")
    best: int | None = None
    for w in members:
        size = min_vertex_cut_size(g, w, m).cut_size
        if best is None or size < best:
            best = size
            if best == 0:
                break
    assert best is not None
    return best


def biconnected_components(g: Graph) -> list[frozenset[str]]:
    """Node sets of the biconnected components, via the articulation-point
    DFS (iterative; linear in nodes + links). Isolated nodes yield no
    component."""
    adj = g.adjacency
    disc: dict[str, int] = {}
    low: dict[str, int] = {}
    comps: list[frozenset[str]] = []
    edge_stack: list[tuple[str, str]] = []
    clock = 0

    for root in g.nodes:
        if root in disc:
            continue
        disc[root] = low[root] = clock
        clock += 1
        stack: list[tuple[str, str | None, Iterable[str]]] = [(root, None, iter(adj[root]))]
        while stack:
            v, parent, it = stack[-1]
            child = next(it, None)  # type: ignore[arg-type]
            if child is None:
                stack.pop()
                if stack:
                    u = stack[-1][0]
                    low[u] = min(low[u], low[v])
                    if low[v] >= disc[u]:
                        comp: set[str] = set()
                        while True:
                            e = edge_stack.pop()
                            comp.update(e)
                            if e == (u, v):
                                break
                        comps.append(frozenset(comp))
                continue
            if child == parent:
                continue
            if child in disc:
                if disc[child] < disc[v]:
                    edge_stack.append((v, child))
                    low[v] = min(low[v], disc[child])
            else:
                disc[child] = low[child] = clock
                clock += 1
                edge_stack.append((v, child))
                stack.append((child, v, iter(adj[child])))
        # every edge of this DFS tree is popped when its subtree closes
        assert not edge_stack

    return comps


def _two_connected_set(g: Graph, anchor: str) -> frozenset[str]:
    """Nodes sharing a biconnected component of >= 3 nodes with ``anchor``.

    For non-adjacent pairs this is exactly "minimum cut >= 2"; callers must
    not use it for pairs joined by an edge (the adjacent-pair convention of
    :func:`min_vertex_cut_size` does not reduce to component membership).
    """
    out: set[str] = set()
    for comp in biconnected_components(g):
        if anchor in comp and len(comp) >= 3:
            out.update(comp)
    out.discard(anchor)
    return frozenset(out)


def two_connected(g: Graph, s: str, t: str) -> bool:
    """True iff the minimum vertex cut between ``s`` and ``t`` is at least 2.

    Equivalent to ``min_vertex_cut_size(g, s, t).cut_size >= 2`` but computed
    from the biconnected decomposition: for adjacent pairs the convention
    makes the answer |V(G)| >= 3; otherwise the pair must share a
    biconnected component (necessarily of >= 3 nodes).
    """
    _check_pair(g, s, t)
    if g.has_edge(s, t):
        return len(g.nodes) >= 3
    return t in _two_connected_set(g, s)
