"""Monitored network topologies and the virtual-monitor constructions.

The model is an undirected, connected graph whose nodes are partitioned into
monitors (reliable vantage points that source and sink probes) and
non-monitors (the nodes whose failures we try to localize). All analyses in
this package run either on the topology itself or on one of four derived
graphs that collapse monitor reachability into a single virtual monitor node.

Everything here is immutable and canonically ordered (nodes sorted by name),
so repeated runs are deterministic and instances are safely shareable across
threads and hashable for caching.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .errors import TopologyError

#: Reserved name of the virtual monitor added by the derived-graph builders.
VIRTUAL_MONITOR = "__m'"

_MONITOR_HEADER = re.compile(r"^#\s*monitors\s*:\s*(.*)$", re.IGNORECASE)


@dataclass(frozen=True)
class Graph:
    """An immutable simple undirected graph.

    Construction canonicalizes: nodes are sorted, each edge is stored as an
    ordered (min, max) pair and the edge list is sorted. Self-loops and
    parallel edges are rejected.
    """

    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        nodes = tuple(sorted(set(self.nodes)))
        node_set = set(nodes)
        canon = []
        for edge in self.edges:
            try:
                u, v = edge
            except ValueError:
                raise TopologyError(f"edge must have exactly two endpoints: {edge!r}")
            if u == v:
                raise TopologyError(f"self-loop on {u!r}")
            if u not in node_set or v not in node_set:
                raise TopologyError(f"edge {u!r}-{v!r} references an unknown node")
            canon.append((u, v) if u < v else (v, u))
        dupes = [e for e, n in Counter(canon).items() if n > 1]
        if dupes:
            raise TopologyError(f"duplicate edge {dupes[0][0]!r}-{dupes[0][1]!r}")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", tuple(sorted(canon)))

    @cached_property
    def adjacency(self) -> dict[str, tuple[str, ...]]:
        """Neighbor lists, sorted by name for deterministic traversal."""
        adj: dict[str, list[str]] = {n: [] for n in self.nodes}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return {n: tuple(sorted(ns)) for n, ns in adj.items()}

    @cached_property
    def _edge_set(self) -> frozenset[tuple[str, str]]:
        return frozenset(self.edges)

    def neighbors(self, v: str) -> tuple[str, ...]:
        try:
            return self.adjacency[v]
        except KeyError:
            raise ValueError(f"unknown node {v!r}") from None

    def degree(self, v: str) -> int:
        return len(self.neighbors(v))

    def has_node(self, v: str) -> bool:
        return v in self.adjacency

    def has_edge(self, u: str, v: str) -> bool:
        return ((u, v) if u < v else (v, u)) in self._edge_set

    def is_connected(self) -> bool:
        if not self.nodes:
            return True
        seen = {self.nodes[0]}
        frontier = [self.nodes[0]]
        while frontier:
            nxt = []
            for u in frontier:
                for w in self.adjacency[u]:
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        return len(seen) == len(self.nodes)


@dataclass(frozen=True)
class Topology(Graph):
    """A connected graph plus its monitor set.

    Zero monitors are permitted at construction (generators produce bare
    graphs first and place monitors afterwards); every analysis entry point
    requires at least one monitor.
    """

    monitors: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        super().__post_init__()
        object.__setattr__(self, "monitors", frozenset(self.monitors))
        unknown = self.monitors - set(self.nodes)
        if unknown:
            raise TopologyError(f"unknown monitor name {sorted(unknown)[0]!r}")
        if VIRTUAL_MONITOR in self.adjacency:
            raise TopologyError(f"node name {VIRTUAL_MONITOR!r} is reserved")
        if not self.is_connected():
            raise TopologyError("topology must be connected")

    @cached_property
    def non_monitors(self) -> tuple[str, ...]:
        return tuple(n for n in self.nodes if n not in self.monitors)

    @property
    def mu(self) -> int:
        """Number of monitors."""
        return len(self.monitors)

    @property
    def sigma(self) -> int:
        """Number of non-monitors (the largest conceivable failure set)."""
        return len(self.non_monitors)

    @property
    def xi(self) -> int:
        """Number of links."""
        return len(self.edges)

    @cached_property
    def monitor_neighbors(self) -> frozenset[str]:
        """Non-monitors adjacent to at least one monitor."""
        out = set()
        for m in self.monitors:
            for w in self.adjacency[m]:
                if w not in self.monitors:
                    out.add(w)
        return frozenset(out)

    @property
    def theta(self) -> int:
        """Number of non-monitors adjacent to some monitor."""
        return len(self.monitor_neighbors)

    def monitor_degree(self, v: str) -> int:
        return sum(1 for w in self.neighbors(v) if w in self.monitors)

    def nonmonitor_degree(self, v: str) -> int:
        return sum(1 for w in self.neighbors(v) if w not in self.monitors)

    def with_monitors(self, monitors: Iterable[str]) -> "Topology":
        return Topology(self.nodes, self.edges, frozenset(monitors))

    def require_monitored(self) -> None:
        if not self.monitors:
            raise TopologyError("analysis requires at least one monitor")


@dataclass(frozen=True)
class AuxiliaryGraph(Graph):
    """A derived graph containing the single virtual monitor node.

    ``kind`` names the construction; ``removed`` records the node the
    construction excluded, when it excludes one. Auxiliary graphs may be
    disconnected (e.g. the virtual monitor is isolated in the
    minus-monitor graph of a single-monitor topology).
    """

    virtual_monitor: str
    kind: str
    removed: str | None = None


def build_star(t: Topology) -> AuxiliaryGraph:
    """Replace all monitors with one virtual monitor tied to their neighborhood.

    Nodes: the non-monitors plus the virtual monitor. Edges: every
    non-monitor to non-monitor link, plus a link from the virtual monitor to
    each non-monitor that was adjacent to any monitor.
    """
    t.require_monitored()
    nodes = t.non_monitors + (VIRTUAL_MONITOR,)
    edges = [e for e in t.edges if e[0] not in t.monitors and e[1] not in t.monitors]
    edges += [(VIRTUAL_MONITOR, w) for w in sorted(t.monitor_neighbors)]
    return AuxiliaryGraph(nodes, tuple(edges), VIRTUAL_MONITOR, "star")


def build_minus_monitor(t: Topology, m: str) -> AuxiliaryGraph:
    """Like :func:`build_star`, but ignore links contributed by monitor ``m``.

    The virtual monitor connects only to non-monitors adjacent to some
    monitor other than ``m``.
    """
    t.require_monitored()
    if m not in t.monitors:
        raise ValueError(f"{m!r} is not a monitor")
    keep = set()
    for other in t.monitors:
        if other == m:
            continue
        keep.update(w for w in t.adjacency[other] if w not in t.monitors)
    nodes = t.non_monitors + (VIRTUAL_MONITOR,)
    edges = [e for e in t.edges if e[0] not in t.monitors and e[1] not in t.monitors]
    edges += [(VIRTUAL_MONITOR, w) for w in sorted(keep)]
    return AuxiliaryGraph(nodes, tuple(edges), VIRTUAL_MONITOR, "minus-monitor", m)


def build_extended(t: Topology) -> AuxiliaryGraph:
    """Keep the whole topology and attach the virtual monitor to every monitor."""
    t.require_monitored()
    nodes = t.nodes + (VIRTUAL_MONITOR,)
    edges = list(t.edges) + [(VIRTUAL_MONITOR, m) for m in sorted(t.monitors)]
    return AuxiliaryGraph(nodes, tuple(edges), VIRTUAL_MONITOR, "extended")


def build_extended_minus(t: Topology, w: str) -> AuxiliaryGraph:
    """Extended graph with non-monitor ``w`` (and its links) removed."""
    t.require_monitored()
    if w in t.monitors or w not in t.adjacency:
        raise ValueError(f"{w!r} is not a non-monitor of the topology")
    nodes = tuple(n for n in t.nodes if n != w) + (VIRTUAL_MONITOR,)
    edges = [e for e in t.edges if w not in e]
    edges += [(VIRTUAL_MONITOR, m) for m in sorted(t.monitors)]
    return AuxiliaryGraph(nodes, tuple(edges), VIRTUAL_MONITOR, "extended-minus", w)


def load_topology(text: str, monitors: Iterable[str] | None = None) -> Topology:
    """Parse an edge-list document into a :class:`Topology`.

    Format: UTF-8 text, one ``u v`` pair per line, ``#`` starts a comment.
    The monitor set comes either from a ``# monitors: m1 m2 ...`` header line
    or from the ``monitors`` argument (one name per entry); an explicit
    argument wins over the header.
    """
    header_monitors: list[str] | None = None
    edges: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        header = _MONITOR_HEADER.match(line)
        if header:
            if header_monitors is not None:
                raise TopologyError(f"line {lineno}: repeated monitors header")
            header_monitors = header.group(1).replace(",", " ").split()
            continue
        if line.startswith("#"):
            continue
        body = line.split("#", 1)[0]
        parts = body.split()
        if len(parts) != 2:
            raise TopologyError(f"line {lineno}: expected 'u v', got {body.strip()!r}")
        edges.append((parts[0], parts[1]))
    if not edges:
        raise TopologyError("no edges found")
    chosen = list(monitors) if monitors is not None else (header_monitors or [])
    if not chosen:
        raise TopologyError("zero monitors: supply a '# monitors:' header or a monitor list")
    nodes = {n for e in edges for n in e}
    return Topology(tuple(sorted(nodes)), tuple(edges), frozenset(chosen))


def parse_monitor_names(text: str) -> tuple[str, ...]:
    """Parse a monitor list document: names separated by whitespace or commas,
    ``#`` comments allowed."""
    names: list[str] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            names.extend(line.replace(",", " ").split())
    return tuple(names)


def format_topology(t: Topology) -> str:
    """Render a topology in the edge-list format accepted by :func:`load_topology`."""
    lines = []
    if t.monitors:
        lines.append("# monitors: " + " ".join(sorted(t.monitors)))
    lines.extend(f"{u} {v}" for u, v in t.edges)
    return "\n".join(lines) + "\n"
