"""Measurement paths under the three probing mechanisms.

A measurement path is a monitor-to-monitor node sequence; what an analysis
consumes is its trace, the set of non-monitors it visits (a probe fails iff
some traced node failed; monitors are assumed reliable). The three
mechanisms differ only in which paths are available:

* UP: probing along routing-determined paths; modeled as the hop-count
  shortest path per monitor pair with deterministic lexicographic
  tie-breaking, or as an externally supplied path file.
* CSP: any simple path between two distinct monitors (controllable
  source routing, but no repeated nodes).
* CAP: any monitor-to-monitor walk, same endpoint allowed, that uses each
  link at most once per direction. Only the set of achievable traces
  matters, and a node set is such a trace exactly when it is the
  non-monitor part of a connected subgraph containing a monitor; the
  enumerator walks those subsets and materializes one spanning-tree walk
  per distinct trace instead of listing walks (which blow up factorially).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .errors import EnumerationCapError, TopologyError
from .topology import Topology

#: Default enumeration guards for the exponential CSP/CAP enumerators.
DEFAULT_MAX_ENUM_NODES = 14
DEFAULT_MAX_ENUM_EDGES = 20


@dataclass(frozen=True)
class Path:
    """One measurement path: the node sequence and its non-monitor trace."""

    nodes: tuple[str, ...]
    trace: frozenset[str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "trace", frozenset(self.trace))


@dataclass(frozen=True)
class PathSet:
    """An ordered collection of measurement paths over a fixed non-monitor universe.

    ``universe`` lists every non-monitor of the topology (sorted), so nodes
    that no path visits still have a well-defined, empty incidence set.
    """

    paths: tuple[Path, ...]
    universe: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "paths", tuple(self.paths))
        object.__setattr__(self, "universe", tuple(self.universe))
        uni = set(self.universe)
        for p in self.paths:
            stray = p.trace - uni
            if stray:
                raise ValueError(f"path trace node {sorted(stray)[0]!r} outside the universe")

    @property
    def gamma(self) -> int:
        """Number of measurement paths."""
        return len(self.paths)

    @cached_property
    def incidence(self) -> dict[str, frozenset[int]]:
        """For each non-monitor v, the indices of the paths that traverse v."""
        inc: dict[str, set[int]] = {v: set() for v in self.universe}
        for i, p in enumerate(self.paths):
            for v in p.trace:
                inc[v].add(i)
        return {v: frozenset(s) for v, s in inc.items()}

    @cached_property
    def incidence_masks(self) -> dict[str, int]:
        """Incidence sets as bitmasks over path indices (fast set algebra)."""
        masks: dict[str, int] = {v: 0 for v in self.universe}
        for i, p in enumerate(self.paths):
            bit = 1 << i
            for v in p.trace:
                masks[v] |= bit
        return masks

    @cached_property
    def directly_measured(self) -> frozenset[str]:
        """Nodes that are the only non-monitor on some path.

        Such a path reads the node's state regardless of any other failure
        (the 2-hop monitor-node-monitor situation, generalized to any path
        whose interior monitors cannot fail).
        """
        return frozenset(next(iter(p.trace)) for p in self.paths if len(p.trace) == 1)


def _make_path(seq: Iterable[str], monitors: frozenset[str]) -> Path:
    nodes = tuple(seq)
    return Path(nodes, frozenset(n for n in nodes if n not in monitors))


def _require_enum_caps(t: Topology, max_nodes: int | None, max_edges: int | None, what: str) -> None:
    if max_nodes is not None and len(t.nodes) > max_nodes:
        raise EnumerationCapError(
            f"{what}: {len(t.nodes)} nodes exceeds the cap of {max_nodes}; "
            "raise max_nodes explicitly or use the cut-based analysis"
        )
    if max_edges is not None and t.xi > max_edges:
        raise EnumerationCapError(
            f"{what}: {t.xi} links exceeds the cap of {max_edges}; "
            "raise max_edges explicitly or use the cut-based analysis"
        )


def route_up(t: Topology) -> PathSet:
    """Hop-count shortest path for every unordered monitor pair.

    Deterministic tie-breaking: BFS runs from the lexicographically smaller
    monitor of the pair, and the path is reconstructed from the far end by
    always stepping to the lexicographically smallest neighbor that is one
    hop closer to the source. Fewer than two monitors yield an empty set.
    """
    t.require_monitored()
    monitors = sorted(t.monitors)
    adj = t.adjacency
    paths: list[Path] = []
    for a in monitors:
        dist = {a: 0}
        frontier = [a]
        while frontier:
            nxt = []
            for u in frontier:
                for w in adj[u]:
                    if w not in dist:
                        dist[w] = dist[u] + 1
                        nxt.append(w)
            frontier = nxt
        for b in monitors:
            if b <= a:
                continue
            seq = [b]
            node = b
            while node != a:
                node = min(w for w in adj[node] if dist[w] == dist[node] - 1)
                seq.append(node)
            seq.reverse()
            paths.append(_make_path(seq, t.monitors))
    return PathSet(tuple(paths), t.non_monitors)


def enumerate_csp(
    t: Topology,
    *,
    max_nodes: int | None = DEFAULT_MAX_ENUM_NODES,
    max_edges: int | None = DEFAULT_MAX_ENUM_EDGES,
) -> PathSet:
    """Every simple path between two distinct monitors.

    Interior nodes may themselves be monitors (a controllable simple route
    does not have to detour around one). Each path appears once, oriented
    from its lexicographically smaller endpoint; the result is sorted by
    (length, node sequence).
    """
    t.require_monitored()
    _require_enum_caps(t, max_nodes, max_edges, "simple-path enumeration")
    adj = t.adjacency
    found: list[tuple[str, ...]] = []
    for a in sorted(t.monitors):
        stack: list[tuple[str, tuple[str, ...]]] = [(a, (a,))]
        while stack:
            u, seq = stack.pop()
            for w in reversed(adj[u]):
                if w in seq:
                    continue
                nseq = seq + (w,)
                if w in t.monitors and w > a:
                    found.append(nseq)
                stack.append((w, nseq))
    found.sort(key=lambda s: (len(s), s))
    return PathSet(tuple(_make_path(s, t.monitors) for s in found), t.non_monitors)


def enumerate_cap(
    t: Topology,
    *,
    max_nodes: int | None = DEFAULT_MAX_ENUM_NODES,
    max_edges: int | None = DEFAULT_MAX_ENUM_EDGES,
) -> PathSet:
    """One walk per achievable trace under link-once-per-direction probing.

    Achievable traces are exactly the sets C cap N for connected subgraphs C
    that contain a monitor and at least two nodes (a probe crosses at least
    one link): any walk visits such a set, and conversely a depth-first
    closed walk of a spanning tree of C uses each tree link once per
    direction. Traces are deduplicated; each is materialized as the tree
    walk of the smallest qualifying subgraph found.
    """
    t.require_monitored()
    _require_enum_caps(t, max_nodes, max_edges, "walk enumeration")
    nodes = t.nodes
    n = len(nodes)
    index = {v: i for i, v in enumerate(nodes)}
    adj_masks = [0] * n
    for u, v in t.edges:
        adj_masks[index[u]] |= 1 << index[v]
        adj_masks[index[v]] |= 1 << index[u]
    monitor_mask = 0
    for m in t.monitors:
        monitor_mask |= 1 << index[m]
    nonmon_mask = ((1 << n) - 1) ^ monitor_mask

    chosen: dict[int, int] = {}  # trace mask -> subgraph mask (first = smallest)
    for mask in range(3, 1 << n):
        if mask & monitor_mask == 0 or mask.bit_count() < 2:
            continue
        trace = mask & nonmon_mask
        if trace in chosen:
            continue
        # connectivity of the induced subgraph, by bitmask BFS
        start = mask & (-mask)
        seen = start
        frontier = start
        while frontier:
            nxt = 0
            scan = frontier
            while scan:
                low = scan & (-scan)
                scan ^= low
                nxt |= adj_masks[low.bit_length() - 1] & mask & ~seen
            seen |= nxt
            frontier = nxt
        if seen == mask:
            chosen[trace] = mask

    def tree_walk(mask: int) -> tuple[str, ...]:
        members = [nodes[i] for i in range(n) if mask >> i & 1]
        start = min(m for m in members if m in t.monitors)
        member_set = set(members)
        seq = [start]
        visited = {start}
        def descend(u: str) -> None:
            for w in t.adjacency[u]:
                if w in member_set and w not in visited:
                    visited.add(w)
                    seq.append(w)
                    descend(w)
                    seq.append(u)
        descend(start)
        return tuple(seq)

    traces = sorted(chosen, key=lambda tr: (tr.bit_count(), [nodes[i] for i in range(n) if tr >> i & 1]))
    paths = [_make_path(tree_walk(chosen[tr]), t.monitors) for tr in traces]
    return PathSet(tuple(paths), t.non_monitors)


def affected(ps: PathSet, failures: Iterable[str]) -> frozenset[int]:
    """Indices of the paths disrupted when exactly ``failures`` fail."""
    fset = frozenset(failures)
    stray = fset - set(ps.universe)
    if stray:
        raise ValueError(f"failure set contains non-failable node {sorted(stray)[0]!r}")
    out: set[int] = set()
    for v in fset:
        out |= ps.incidence[v]
    return frozenset(out)


def simulate(ps: PathSet, states: Mapping[str, int]) -> tuple[int, ...]:
    """Path outcomes for a full node-state assignment (1 = failed).

    ``states`` must assign a state to exactly the non-monitor universe;
    anything else is a dimension mismatch.
    """
    if set(states) != set(ps.universe):
        raise ValueError("state vector must cover exactly the non-monitors")
    return tuple(1 if any(states[v] for v in p.trace) else 0 for p in ps.paths)


@dataclass(frozen=True)
class MeasurementSystem:
    """The explicit boolean measurement matrix of a path set.

    Row i column j is 1 iff path i traverses non-monitor j; applying the
    system to a state vector ORs the states of each row's nodes, which is
    exactly what :func:`simulate` computes without materializing the matrix.
    """

    rows: tuple[tuple[int, ...], ...]
    columns: tuple[str, ...]

    def apply(self, states: Mapping[str, int]) -> tuple[int, ...]:
        if set(states) != set(self.columns):
            raise ValueError("state vector must cover exactly the non-monitors")
        vec = [1 if states[c] else 0 for c in self.columns]
        return tuple(1 if any(r & s for r, s in zip(row, vec)) else 0 for row in self.rows)


def measurement_system(ps: PathSet) -> MeasurementSystem:
    rows = tuple(tuple(1 if c in p.trace else 0 for c in ps.universe) for p in ps.paths)
    return MeasurementSystem(rows, ps.universe)


def parse_paths(text: str, t: Topology) -> PathSet:
    """Parse a path file: one path per line, space-separated node names,
    ``#`` comments allowed.

    Each path must start and end at a monitor, use only known nodes, and
    step along existing links. Repeated nodes are allowed (walks); exact
    duplicate lines are dropped. Path order follows the file, so externally
    documented path numbering is preserved.
    """
    t.require_monitored()
    seqs: list[tuple[str, ...]] = []
    seen: set[tuple[str, ...]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        seq = tuple(line.split())
        if len(seq) < 2:
            raise TopologyError(f"line {lineno}: a path needs at least two nodes")
        for node in seq:
            if not t.has_node(node):
                raise TopologyError(f"line {lineno}: unknown node {node!r}")
        if seq[0] not in t.monitors or seq[-1] not in t.monitors:
            raise TopologyError(f"line {lineno}: path endpoints must be monitors")
        for u, v in zip(seq, seq[1:]):
            if not t.has_edge(u, v):
                raise TopologyError(f"line {lineno}: no link {u!r}-{v!r}")
        if seq not in seen:
            seen.add(seq)
            seqs.append(seq)
    return PathSet(tuple(_make_path(s, t.monitors) for s in seqs), t.non_monitors)


def format_paths(ps: PathSet) -> str:
    """Render a path set in the format accepted by :func:`parse_paths`."""
    return "\n".join(" ".join(p.nodes) for p in ps.paths) + ("\n" if ps.paths else "")
