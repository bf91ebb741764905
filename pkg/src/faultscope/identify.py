"""Identifiability indices, k-identifiability tests and maximal identifiable sets.

A set S of non-monitors is k-identifiable when any two failure scenarios of
at most k nodes that differ inside S disrupt different measurement paths;
its index Omega(S) is the largest such k, and Omega(S) is always the minimum
of its members' per-node indices. This module computes those quantities per
probing mechanism without enumerating failure sets:

* CAP: exact. The per-node index equals the minimum vertex cut between the
  node and the virtual monitor in the star graph (build_star).
* CSP: cut conditions on the star graph and on each minus-monitor graph give
  a sufficient and a necessary bound one apart, with four special situations
  resolved exactly (two monitor neighbors; no two-connected escape; and the
  two near-full-failure regimes).
* UP: set-cover bounds. The minimum cover of a node's paths by the other
  nodes' paths brackets the index within one; the greedy cover size with the
  standard logarithmic guarantee gives computable bounds at any scale.

The brute-force oracle (:mod:`faultscope.oracle`) is the ground truth these
results are validated against; nothing here consults it unless a caller
explicitly opts into exact-cover tightening.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from types import MappingProxyType
from typing import Iterable, Mapping

from . import oracle as _oracle
from .cuts import _two_connected_set, min_vertex_cut_size
from .probing import PathSet
from .topology import (
    VIRTUAL_MONITOR,
    Topology,
    build_extended,
    build_extended_minus,
    build_minus_monitor,
    build_star,
)


class Mechanism(str, enum.Enum):
    """The three probing regimes, ordered weakest to strongest."""

    UP = "up"
    CSP = "csp"
    CAP = "cap"


class Status(enum.Enum):
    IDENTIFIABLE = "identifiable"
    NOT_IDENTIFIABLE = "not-identifiable"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class TriState:
    """A yes/no/unknown verdict plus the rule that decided it."""

    status: Status
    rule: str

    @property
    def is_identifiable(self) -> bool:
        return self.status is Status.IDENTIFIABLE

    @property
    def is_undetermined(self) -> bool:
        return self.status is Status.UNDETERMINED


@dataclass(frozen=True)
class IntBounds:
    """An integer interval [lo, hi] around an identifiability index."""

    lo: int
    hi: int

    def __post_init__(self) -> None:
        if not (0 <= self.lo <= self.hi):
            raise ValueError(f"invalid bounds [{self.lo}, {self.hi}]")

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def contains(self, value: int) -> bool:
        return self.lo <= value <= self.hi

    @classmethod
    def exactly(cls, value: int) -> "IntBounds":
        return cls(value, value)


@dataclass(frozen=True)
class CspInternals:
    """The two cut quantities the CSP results are stated in.

    ``delta_star``: cut to the virtual monitor in the star graph.
    ``delta_min``: the worst such cut over the minus-monitor graphs.
    ``pi``: the combined bound min(delta_min, delta_star - 1).
    """

    delta_star: int
    delta_min: int

    def __post_init__(self) -> None:
        if self.delta_min > self.delta_star:
            raise ValueError("delta_min can never exceed delta_star")

    @property
    def pi(self) -> int:
        return min(self.delta_min, self.delta_star - 1)


@dataclass(frozen=True)
class SetBounds:
    """Inner/outer approximations of a maximal k-identifiable set."""

    inner: frozenset[str]
    outer: frozenset[str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "inner", frozenset(self.inner))
        object.__setattr__(self, "outer", frozenset(self.outer))
        if not self.inner <= self.outer:
            raise ValueError("inner approximation must be contained in the outer one")

    @property
    def exact(self) -> bool:
        return self.inner == self.outer


def _check_members(t: Topology, group: Iterable[str]) -> tuple[str, ...]:
    members = tuple(sorted(set(group)))
    if not members:
        raise ValueError("the queried set must be non-empty")
    non_monitors = set(t.non_monitors)
    for v in members:
        if v not in non_monitors:
            raise ValueError(f"{v!r} is not a non-monitor of the topology")
    return members


def _check_k(k: int, sigma: int) -> None:
    if k < 1 or k > sigma:
        raise ValueError(f"k must be in 1..{sigma}")


# ---------------------------------------------------------------------------
# cached per-topology structures


@lru_cache(maxsize=256)
def _star(t: Topology):
    return build_star(t)


@lru_cache(maxsize=256)
def _minus_graphs(t: Topology):
    return tuple(build_minus_monitor(t, m) for m in sorted(t.monitors))


@lru_cache(maxsize=256)
def cap_values(t: Topology) -> Mapping[str, int]:
    """Per-node CAP index: cut to the virtual monitor in the star graph."""
    t.require_monitored()
    star = _star(t)
    return MappingProxyType(
        {v: min_vertex_cut_size(star, v, VIRTUAL_MONITOR).cut_size for v in t.non_monitors}
    )


@lru_cache(maxsize=256)
def csp_internals_all(t: Topology) -> Mapping[str, CspInternals]:
    """CSP cut quantities for every non-monitor at once."""
    t.require_monitored()
    stars = cap_values(t)
    minus = _minus_graphs(t)
    out: dict[str, CspInternals] = {}
    for v in t.non_monitors:
        delta_min = min(min_vertex_cut_size(g, v, VIRTUAL_MONITOR).cut_size for g in minus)
        out[v] = CspInternals(delta_star=stars[v], delta_min=delta_min)
    return MappingProxyType(out)


@lru_cache(maxsize=256)
def _csp_single_failure_nodes(t: Topology) -> frozenset[str]:
    # Exact single-failure identifiability under CSP, via biconnected
    # decompositions of the extended graphs: v qualifies when (a) v is
    # two-connected to the virtual monitor in the extended graph and (b) for
    # every other non-monitor w, v stays two-connected with w removed or w
    # stays two-connected with v removed (otherwise {v} and {w} can disrupt
    # identical path sets). One decomposition per removed node suffices.
    t.require_monitored()
    anchored = _two_connected_set(build_extended(t), VIRTUAL_MONITOR)
    reach = {
        w: _two_connected_set(build_extended_minus(t, w), VIRTUAL_MONITOR)
        for w in t.non_monitors
    }
    ok: set[str] = set()
    for v in t.non_monitors:
        if v not in anchored:
            continue
        if all(v in reach[w] or w in reach[v] for w in t.non_monitors if w != v):
            ok.add(v)
    return frozenset(ok)


@lru_cache(maxsize=256)
def _up_single_failure_nodes(ps: PathSet) -> frozenset[str]:
    # v's single failure is localizable iff some path sees v and no other
    # node disrupts exactly the same paths.
    masks = ps.incidence_masks
    ok: set[str] = set()
    for v in ps.universe:
        mv = masks[v]
        if mv and all(mv != masks[w] for w in ps.universe if w != v):
            ok.add(v)
    return frozenset(ok)


# ---------------------------------------------------------------------------
# CAP


def omega_cap(t: Topology, v: str) -> IntBounds:
    """Exact per-node index under unconstrained walk probing."""
    _check_members(t, [v])
    return IntBounds.exactly(cap_values(t)[v])


def k_identifiable_cap(t: Topology, group: Iterable[str], k: int) -> TriState:
    """Exact test: the group is k-identifiable iff every member's cut to the
    virtual monitor in the star graph reaches k. Never undetermined."""
    members = _check_members(t, group)
    _check_k(k, t.sigma)
    values = cap_values(t)
    if min(values[v] for v in members) >= k:
        return TriState(Status.IDENTIFIABLE, "star-cut")
    return TriState(Status.NOT_IDENTIFIABLE, "star-cut")


# ---------------------------------------------------------------------------
# CSP


def csp_internals(t: Topology, v: str) -> CspInternals:
    """The cut pair (delta_star, delta_min) behind the CSP results for ``v``."""
    _check_members(t, [v])
    return csp_internals_all(t)[v]


def _near_complete(t: Topology, v: str) -> bool:
    # v touches a monitor and every other non-monitor, and every other
    # non-monitor has two monitor neighbors of its own: the one shape where
    # (sigma-1)-identifiability survives a single monitor neighbor.
    others = [w for w in t.non_monitors if w != v]
    return (
        t.monitor_degree(v) >= 1
        and all(t.monitor_degree(w) >= 2 for w in others)
        and all(t.has_edge(v, w) for w in others)
    )


def omega_csp(t: Topology, v: str) -> IntBounds:
    """Per-node index under simple-path probing.

    Resolution order: (1) two monitor neighbors give the full index sigma;
    (2) a single two-connected escape (delta_star == 1) means no simple
    monitor-to-monitor path crosses v at all, index 0; (3)/(4) the two
    regimes the general bound cannot reach (pi > sigma - 2) are decided
    exactly, the second via the near-complete-neighborhood condition;
    (5) otherwise the index is pinned to [pi - 1, pi].
    """
    _check_members(t, [v])
    sigma = t.sigma
    ints = csp_internals_all(t)[v]
    if t.monitor_degree(v) >= 2:
        return IntBounds.exactly(sigma)
    if ints.delta_star == 1:
        return IntBounds.exactly(0)
    if ints.delta_min == sigma:
        return IntBounds.exactly(sigma)
    if ints.delta_min == sigma - 1 and ints.delta_star == sigma:
        return IntBounds.exactly(sigma - 1 if _near_complete(t, v) else sigma - 2)
    return IntBounds(max(ints.pi - 1, 0), ints.pi)


def k_identifiable_csp(t: Topology, group: Iterable[str], k: int) -> TriState:
    """k-identifiability under simple-path probing.

    The two near-full regimes (k == sigma and k == sigma - 1) and the single
    failure case (k == 1) dispatch to exact tests; in between, the cut
    conditions give a sufficient check and a necessary check one unit apart,
    so the verdict can be undetermined.
    """
    members = _check_members(t, group)
    sigma = t.sigma
    _check_k(k, sigma)
    if k == sigma:
        ok = all(t.monitor_degree(v) >= 2 for v in members)
        return TriState(
            Status.IDENTIFIABLE if ok else Status.NOT_IDENTIFIABLE,
            "all-two-monitor-neighbors",
        )
    if k == sigma - 1:
        ok = all(t.monitor_degree(v) >= 2 for v in members) or any(
            _near_complete(t, v) for v in members
        )
        return TriState(
            Status.IDENTIFIABLE if ok else Status.NOT_IDENTIFIABLE,
            "near-complete-neighborhood",
        )
    if k == 1:
        return one_identifiable(t, members, Mechanism.CSP)
    internals = csp_internals_all(t)
    g_star = min(internals[v].delta_star for v in members)
    g_minus = min(internals[v].delta_min for v in members)
    if g_star >= k + 2 and g_minus >= k + 1:
        return TriState(Status.IDENTIFIABLE, "cut-sufficient")
    if g_star < k + 1 or g_minus < k:
        return TriState(Status.NOT_IDENTIFIABLE, "cut-necessary")
    return TriState(Status.UNDETERMINED, "cut-gap")


# ---------------------------------------------------------------------------
# single-failure exact tests


def one_identifiable(
    t: Topology,
    group: Iterable[str],
    mechanism: Mechanism,
    ps: PathSet | None = None,
) -> TriState:
    """Exact 1-identifiability of ``group`` under the given mechanism.

    Never undetermined. Under CAP any connected monitored topology
    qualifies; under CSP the answer comes from biconnectivity of the
    extended graphs; under UP it is a direct comparison of path incidence
    (``ps`` required).
    """
    members = _check_members(t, group)
    mechanism = Mechanism(mechanism)
    if mechanism is Mechanism.CAP:
        t.require_monitored()
        return TriState(Status.IDENTIFIABLE, "any-monitor-reachable")
    if mechanism is Mechanism.CSP:
        anchored = _two_connected_set(build_extended(t), VIRTUAL_MONITOR)
        for v in members:
            if v not in anchored:
                return TriState(
                    Status.NOT_IDENTIFIABLE, f"single-failure-test:not-two-connected:{v}"
                )
        ok = _csp_single_failure_nodes(t)
        for v in members:
            if v not in ok:
                w = _first_confusable_csp(t, v)
                return TriState(
                    Status.NOT_IDENTIFIABLE, f"single-failure-test:confusable-pair:{v}~{w}"
                )
        return TriState(Status.IDENTIFIABLE, "single-failure-test")
    if ps is None:
        raise ValueError("routing-determined analysis needs a path set")
    _check_universe(t, ps)
    masks = ps.incidence_masks
    for v in members:
        if masks[v] == 0:
            return TriState(Status.NOT_IDENTIFIABLE, f"single-failure-test:no-path:{v}")
        for w in ps.universe:
            if w != v and masks[w] == masks[v]:
                return TriState(
                    Status.NOT_IDENTIFIABLE, f"single-failure-test:confusable-pair:{v}~{w}"
                )
    return TriState(Status.IDENTIFIABLE, "single-failure-test")


def _first_confusable_csp(t: Topology, v: str) -> str:
    reach_v = _two_connected_set(build_extended_minus(t, v), VIRTUAL_MONITOR)
    for w in t.non_monitors:
        if w == v:
            continue
        reach_w = _two_connected_set(build_extended_minus(t, w), VIRTUAL_MONITOR)
        if v not in reach_w and w not in reach_v:
            return w
    return "?"


def _check_universe(t: Topology, ps: PathSet) -> None:
    if tuple(ps.universe) != t.non_monitors:
        raise ValueError("path set universe does not match the topology's non-monitors")


# ---------------------------------------------------------------------------
# UP


def gsc(ps: PathSet, v: str) -> int:
    """Greedy cover size of v's paths by the other nodes' path sets.

    Each round picks the node covering the most still-uncovered paths, ties
    broken by name. By convention the result is sigma when some path sees
    only v (covering infeasible) and 0 when no path sees v.
    """
    _oracle._check_group(ps, [v])
    mask = ps.incidence_masks[v]
    if mask == 0:
        return 0
    if v in ps.directly_measured:
        return len(ps.universe)
    uncovered = mask
    count = 0
    candidates = [w for w in ps.universe if w != v]
    while uncovered:
        best_gain = 0
        best_mask = 0
        for w in candidates:
            gain = (ps.incidence_masks[w] & uncovered).bit_count()
            if gain > best_gain:
                best_gain = gain
                best_mask = ps.incidence_masks[w]
        assert best_gain > 0, "every remaining path must carry another node"
        uncovered &= ~best_mask
        count += 1
    return count


def omega_up(ps: PathSet, v: str, *, exact_cover: bool = False) -> IntBounds:
    """Per-node index under routing-determined probing.

    A node no path sees has index 0; a node some path sees alone has the
    full index sigma. Otherwise the index sits within one of the minimum
    cover size; the default bounds derive it from the greedy cover and its
    logarithmic guarantee, while ``exact_cover=True`` computes the true
    minimum cover (brute force, small instances only).
    """
    _oracle._check_group(ps, [v])
    sigma = len(ps.universe)
    mask = ps.incidence_masks[v]
    if mask == 0:
        return IntBounds.exactly(0)
    if v in ps.directly_measured:
        return IntBounds.exactly(sigma)
    if exact_cover:
        cover = _oracle.oracle_msc(ps, v)
        return IntBounds(max(cover - 1, 0), cover)
    greedy = gsc(ps, v)
    lo = math.ceil(greedy / (math.log(mask.bit_count()) + 1.0)) - 1
    return IntBounds(max(lo, 0), greedy)


def k_identifiable_up(
    ps: PathSet,
    group: Iterable[str],
    k: int,
    *,
    exact_cover: bool = False,
) -> TriState:
    """k-identifiability under routing-determined probing.

    k == sigma is exact (every member must be the only node on one of its
    paths); k == 1 is the direct incidence comparison; in between the
    per-node cover bounds decide, leaving a gap where neither side fires.
    """
    members = sorted(set(group))
    sigma = len(ps.universe)
    _oracle._check_group(ps, members)
    _check_k(k, sigma)
    if k == sigma:
        ok = all(v in ps.directly_measured for v in members)
        return TriState(
            Status.IDENTIFIABLE if ok else Status.NOT_IDENTIFIABLE,
            "all-directly-measured",
        )
    if k == 1:
        masks = ps.incidence_masks
        for v in members:
            if masks[v] == 0:
                return TriState(Status.NOT_IDENTIFIABLE, f"single-failure-test:no-path:{v}")
            for w in ps.universe:
                if w != v and masks[w] == masks[v]:
                    return TriState(
                        Status.NOT_IDENTIFIABLE,
                        f"single-failure-test:confusable-pair:{v}~{w}",
                    )
        return TriState(Status.IDENTIFIABLE, "single-failure-test")
    bounds = [omega_up(ps, v, exact_cover=exact_cover) for v in members]
    if min(b.lo for b in bounds) >= k:
        return TriState(Status.IDENTIFIABLE, "cover-sufficient")
    if min(b.hi for b in bounds) < k:
        return TriState(Status.NOT_IDENTIFIABLE, "cover-necessary")
    return TriState(Status.UNDETERMINED, "cover-gap")


# ---------------------------------------------------------------------------
# per-node tables, set queries, maximal sets


def per_node_bounds(
    t: Topology,
    mechanism: Mechanism,
    ps: PathSet | None = None,
    *,
    refine_single: bool = True,
    exact_cover: bool = False,
) -> dict[str, IntBounds]:
    """Index bounds for every non-monitor under one mechanism.

    With ``refine_single`` (the default for set-level queries) any bound of
    the form [0, hi>=1] is settled by the exact single-failure test: the
    node either is 1-identifiable (lower bound lifts to 1) or is not (the
    index is exactly 0). Per-node report rows use ``refine_single=False`` to
    show the raw theorem bounds.
    """
    t.require_monitored()
    mechanism = Mechanism(mechanism)
    if mechanism is Mechanism.CAP:
        return {v: IntBounds.exactly(value) for v, value in cap_values(t).items()}
    if mechanism is Mechanism.CSP:
        table = {v: omega_csp(t, v) for v in t.non_monitors}
        if refine_single:
            ok = _csp_single_failure_nodes(t)
            table = _refine_with_single(table, ok)
        return table
    if ps is None:
        raise ValueError("routing-determined analysis needs a path set")
    _check_universe(t, ps)
    table = {v: omega_up(ps, v, exact_cover=exact_cover) for v in ps.universe}
    if refine_single:
        table = _refine_with_single(table, _up_single_failure_nodes(ps))
    return table


def _refine_with_single(
    table: dict[str, IntBounds], ok: frozenset[str]
) -> dict[str, IntBounds]:
    out: dict[str, IntBounds] = {}
    for v, b in table.items():
        if b.lo == 0 and b.hi >= 1:
            out[v] = IntBounds(1, b.hi) if v in ok else IntBounds.exactly(0)
        else:
            out[v] = b
    return out


def omega_set(
    t: Topology,
    group: Iterable[str],
    mechanism: Mechanism,
    ps: PathSet | None = None,
    *,
    exact_cover: bool = False,
) -> IntBounds:
    """Index bounds for a set: the member-wise minimum of the per-node bounds."""
    members = _check_members(t, group)
    table = per_node_bounds(t, mechanism, ps, exact_cover=exact_cover)
    return IntBounds(
        min(table[v].lo for v in members),
        min(table[v].hi for v in members),
    )


def max_identifiable_set(
    t: Topology,
    k: int,
    mechanism: Mechanism,
    ps: PathSet | None = None,
    *,
    refine_single: bool = True,
    exact_cover: bool = False,
) -> SetBounds:
    """Inner/outer approximations of the maximal k-identifiable set.

    Thresholding the per-node bounds reproduces every special exact case:
    CAP is always exact, CSP is exact at k of sigma and sigma-1 (the
    two-monitor-neighbor and near-complete-neighborhood rules live in the
    per-node values), UP is exact at sigma, and the folded single-failure
    test makes k = 1 exact for every mechanism.
    """
    _check_k(k, t.sigma)
    table = per_node_bounds(
        t, mechanism, ps, refine_single=refine_single, exact_cover=exact_cover
    )
    inner = frozenset(v for v, b in table.items() if b.lo >= k)
    outer = frozenset(v for v, b in table.items() if b.hi >= k)
    return SetBounds(inner, outer)
