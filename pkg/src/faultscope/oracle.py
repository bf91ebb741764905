"""Definitional ground truth by exhaustive enumeration.

Everything here works straight from the definitions, with no graph theory:
two failure sets are distinguishable iff they disrupt different paths, a set
S is k-identifiable iff every pair of failure sets of size <= k that differ
inside S is distinguishable, and the identifiability index is the largest
such k. These routines exist to validate the scalable analyses, so they are
deliberately simple and refuse instances beyond small caps.
"""

from __future__ import annotations

import warnings
from itertools import combinations
from typing import Iterable

from .errors import OracleCapError
from .probing import PathSet, affected
from .topology import Graph

DEFAULT_MAX_SIGMA = 10
DEFAULT_MAX_K = 5
DEFAULT_MAX_CUT_NODES = 8

#: A failure set is just a set of non-monitor names.
FailureSet = frozenset[str]


def _guard(value: int, limit: int, default: int, what: str) -> None:
    if value > limit:
        raise OracleCapError(
            f"{what} {value} exceeds the oracle cap {limit}; pass a larger cap "
            "explicitly if the wait is acceptable"
        )
    if value > default:
        warnings.warn(
            f"{what} {value} exceeds the default oracle cap {default}; "
            "brute force may be slow",
            stacklevel=3,
        )


def distinguishable(ps: PathSet, f1: Iterable[str], f2: Iterable[str]) -> bool:
    """True iff the two failure sets disrupt different sets of paths."""
    return affected(ps, f1) != affected(ps, f2)


def _failure_mask(ps: PathSet, failures: Iterable[str]) -> int:
    fp = 0
    for v in failures:
        fp |= ps.incidence_masks[v]
    return fp


def _check_group(ps: PathSet, group: Iterable[str]) -> list[str]:
    members = sorted(set(group))
    if not members:
        raise ValueError("the queried set must be non-empty")
    uni = set(ps.universe)
    for v in members:
        if v not in uni:
            raise ValueError(f"{v!r} is not a non-monitor of this path set")
    return members


def oracle_k_identifiable(
    ps: PathSet,
    group: Iterable[str],
    k: int,
    *,
    max_sigma: int = DEFAULT_MAX_SIGMA,
    max_k: int = DEFAULT_MAX_K,
) -> bool:
    """Exhaustively check k-identifiability of ``group``.

    Enumerates every failure set of size <= k, buckets them by the exact
    set of paths they disrupt, and looks inside each bucket for two sets
    that differ on ``group``.
    """
    members = _check_group(ps, group)
    sigma = len(ps.universe)
    if k < 1 or k > sigma:
        raise ValueError(f"k must be in 1..{sigma}")
    _guard(sigma, max_sigma, DEFAULT_MAX_SIGMA, "universe size")
    _guard(k, max_k, DEFAULT_MAX_K, "failure bound k")
    member_set = frozenset(members)
    buckets: dict[int, dict[FailureSet, None]] = {}
    for size in range(k + 1):
        for combo in combinations(ps.universe, size):
            fp = _failure_mask(ps, combo)
            proj = frozenset(combo) & member_set
            seen = buckets.setdefault(fp, {})
            if proj not in seen:
                if seen:
                    return False
                seen[proj] = None
    return True


def _projection_groups(ps: PathSet, *, max_sigma: int) -> list[list[int]]:
    """All failure sets as index bitmasks, grouped by disrupted-path fingerprint."""
    sigma = len(ps.universe)
    _guard(sigma, max_sigma, DEFAULT_MAX_SIGMA, "universe size")
    node_masks = [ps.incidence_masks[v] for v in ps.universe]
    groups: dict[int, list[int]] = {}
    for fmask in range(1 << sigma):
        fp = 0
        scan = fmask
        while scan:
            low = scan & (-scan)
            scan ^= low
            fp |= node_masks[low.bit_length() - 1]
        groups.setdefault(fp, []).append(fmask)
    return list(groups.values())


def _omega_from_groups(groups: list[list[int]], smask: int, sigma: int) -> int:
    # A pair of same-fingerprint failure sets that differ inside S rules out
    # every k >= max(|F1|, |F2|); the index is the smallest such threshold
    # minus one. Minimizing max(|F1|, |F2|) over cross-projection pairs means
    # pairing the two projections with the smallest minimal sizes.
    best: int | None = None
    for group in groups:
        if len(group) < 2:
            continue
        min_sizes: dict[int, int] = {}
        for fmask in group:
            proj = fmask & smask
            size = fmask.bit_count()
            if proj not in min_sizes or size < min_sizes[proj]:
                min_sizes[proj] = size
        if len(min_sizes) < 2:
            continue
        first, second = sorted(min_sizes.values())[:2]
        threshold = max(first, second)
        if best is None or threshold < best:
            best = threshold
    return sigma if best is None else best - 1


def oracle_omega(
    ps: PathSet,
    group: Iterable[str],
    *,
    max_sigma: int = DEFAULT_MAX_SIGMA,
) -> int:
    """Exact identifiability index of ``group``: the largest k (0..sigma) for
    which the set is k-identifiable. 0 means two single-failure scenarios
    differing on the group already look identical."""
    members = _check_group(ps, group)
    sigma = len(ps.universe)
    index = {v: i for i, v in enumerate(ps.universe)}
    smask = 0
    for v in members:
        smask |= 1 << index[v]
    groups = _projection_groups(ps, max_sigma=max_sigma)
    return _omega_from_groups(groups, smask, sigma)


def oracle_omega_all(
    ps: PathSet,
    *,
    max_sigma: int = DEFAULT_MAX_SIGMA,
) -> dict[str, int]:
    """Per-node exact indices, sharing one enumeration across all nodes."""
    sigma = len(ps.universe)
    groups = _projection_groups(ps, max_sigma=max_sigma)
    return {
        v: _omega_from_groups(groups, 1 << i, sigma)
        for i, v in enumerate(ps.universe)
    }


def oracle_max_identifiable_set(
    ps: PathSet,
    k: int,
    *,
    max_sigma: int = DEFAULT_MAX_SIGMA,
) -> frozenset[str]:
    """Exact maximal k-identifiable set: the nodes whose index reaches k."""
    sigma = len(ps.universe)
    if k < 1 or k > sigma:
        raise ValueError(f"k must be in 1..{sigma}")
    values = oracle_omega_all(ps, max_sigma=max_sigma)
    return frozenset(v for v, omega in values.items() if omega >= k)


def oracle_msc(
    ps: PathSet,
    v: str,
    *,
    max_sigma: int = DEFAULT_MAX_SIGMA,
) -> int:
    """Exact minimum set cover of v's paths by the other nodes' path sets.

    By convention the answer is sigma when some path traverses v and no
    other non-monitor (covering is infeasible, and that path pins v's state
    directly), and 0 when no path traverses v at all.
    """
    (member,) = _check_group(ps, [v])
    sigma = len(ps.universe)
    _guard(sigma, max_sigma, DEFAULT_MAX_SIGMA, "universe size")
    target = ps.incidence_masks[member]
    if target == 0:
        return 0
    if member in ps.directly_measured:
        return sigma
    candidates = [w for w in ps.universe if w != member and ps.incidence_masks[w] & target]
    for size in range(1, len(candidates) + 1):
        for combo in combinations(candidates, size):
            cover = 0
            for w in combo:
                cover |= ps.incidence_masks[w]
            if cover & target == target:
                return size
    raise AssertionError("cover must exist when no path traverses only v")


def brute_vertex_cut(
    g: Graph,
    s: str,
    t: str,
    *,
    max_nodes: int = DEFAULT_MAX_CUT_NODES,
) -> int:
    """Minimum vertex cut by trying every candidate node subset.

    Mirrors the engine's convention: adjacent pairs return |V| - 1, and a
    pair with no connecting path returns 0.
    """
    if not g.has_node(s) or not g.has_node(t):
        raise ValueError("unknown node in cut query")
    if s == t:
        raise ValueError("source and sink must differ")
    _guard(len(g.nodes), max_nodes, DEFAULT_MAX_CUT_NODES, "node count")
    if g.has_edge(s, t):
        return len(g.nodes) - 1

    def reachable(removed: frozenset[str]) -> bool:
        if s in removed or t in removed:
            return False
        seen = {s}
        frontier = [s]
        while frontier:
            nxt = []
            for u in frontier:
                for w in g.adjacency[u]:
                    if w not in seen and w not in removed:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        return t in seen

    others = [n for n in g.nodes if n != s and n != t]
    for size in range(len(others) + 1):
        for combo in combinations(others, size):
            if not reachable(frozenset(combo)):
                return size
    raise AssertionError("removing every other node must separate a non-adjacent pair")
