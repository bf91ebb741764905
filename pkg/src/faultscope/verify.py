"""Oracle-vs-theorem verification batteries.

Every battery draws seeded random instances, computes the closed-form
results, and checks them against the definitional brute-force oracle. A
battery never hides a violation: each mismatch is recorded with the
instance's generation parameters so it can be replayed exactly.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .cuts import min_vertex_cut_size, two_connected
from .identify import Mechanism, cap_values, gsc, max_identifiable_set, omega_csp
from .oracle import brute_vertex_cut, oracle_msc, oracle_omega_all
from .probing import PathSet, enumerate_cap, enumerate_csp, route_up
from .randomnet import gen_er, place_monitors, random_graph
from .reports import VERSION
from .topology import Topology

SCHEMA_VERIFY = "faultscope/verify v1"

ALL_CHECKS = ("cap", "csp", "up", "sets")


@dataclass(frozen=True)
class CheckFailure:
    instance: str
    check: str
    detail: str


@dataclass(frozen=True)
class VerificationReport:
    instances: int
    checks: int
    failures: tuple[CheckFailure, ...]

    @property
    def ok(self) -> bool:
        return not self.failures

    def merged(self, other: "VerificationReport") -> "VerificationReport":
        return VerificationReport(
            self.instances + other.instances,
            self.checks + other.checks,
            self.failures + other.failures,
        )

    def to_json(self) -> str:
        doc = {
            "schema": SCHEMA_VERIFY,
            "version": VERSION,
            "instances": self.instances,
            "checks": self.checks,
            "ok": self.ok,
            "failures": [
                {"instance": f.instance, "check": f.check, "detail": f.detail}
                for f in self.failures
            ],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def er_battery(
    count: int,
    seed: int,
    *,
    n_range: tuple[int, int] = (5, 10),
    p_range: tuple[float, float] = (0.3, 0.55),
    monitor_counts: Sequence[int] = (2, 3),
) -> list[Topology]:
    """Seeded list of small connected monitored ER instances."""
    rng = random.Random(seed)
    tops: list[Topology] = []
    for i in range(count):
        n = rng.randint(*n_range)
        p = rng.uniform(*p_range)
        mu = rng.choice(list(monitor_counts))
        base = gen_er(n, p, seed * 31 + i).topology
        tops.append(place_monitors(base, min(mu, n - 1), seed * 37 + i))
    return tops


def _instance_name(index: int, t: Topology) -> str:
    return f"er[{index}] n={len(t.nodes)} mu={t.mu} xi={t.xi}"


def verify_topologies(
    tops: Iterable[Topology],
    checks: Sequence[str] = ALL_CHECKS,
    *,
    corrupt: bool = False,
) -> VerificationReport:
    """Run the closed-form-vs-oracle checks on every given topology.

    ``cap``: the cut formula equals the oracle index exactly.
    ``csp``: the bound interval contains the oracle index; exact branches
    match it; the general case is never wider than one.
    ``up``: the oracle index sits in [MSC-1, MSC] and the greedy cover obeys
    its logarithmic guarantee.
    ``sets``: for every k and mechanism, the inner/outer maximal-set
    approximations sandwich the oracle's exact set.

    ``corrupt`` deliberately breaks the first CAP value; a battery that
    does not report that as a failure is itself broken (self-test hook).
    """
    unknown = set(checks) - set(ALL_CHECKS)
    if unknown:
        raise ValueError(f"unknown checks: {sorted(unknown)}")
    failures: list[CheckFailure] = []
    nchecks = 0
    ninstances = 0
    want_sets = "sets" in checks
    for index, t in enumerate(tops):
        ninstances += 1
        name = _instance_name(index, t)
        mech_paths: dict[Mechanism, PathSet] = {}
        mech_oracle: dict[Mechanism, dict[str, int]] = {}

        def load(mech: Mechanism) -> None:
            if mech in mech_paths:
                return
            if mech is Mechanism.CAP:
                ps = enumerate_cap(t, max_nodes=None, max_edges=None)
            elif mech is Mechanism.CSP:
                ps = enumerate_csp(t, max_nodes=None, max_edges=None)
            else:
                ps = route_up(t)
            mech_paths[mech] = ps
            mech_oracle[mech] = oracle_omega_all(ps)

        if "cap" in checks or want_sets:
            load(Mechanism.CAP)
        if "csp" in checks or want_sets:
            load(Mechanism.CSP)
        if "up" in checks or want_sets:
            load(Mechanism.UP)

        if "cap" in checks:
            values = dict(cap_values(t))
            if corrupt and index == 0 and t.non_monitors:
                first = t.non_monitors[0]
                values[first] += 1
            target = mech_oracle[Mechanism.CAP]
            for v in t.non_monitors:
                nchecks += 1
                if values[v] != target[v]:
                    failures.append(
                        CheckFailure(
                            name,
                            "cap-exact",
                            f"{v}: closed form {values[v]} != oracle {target[v]}",
                        )
                    )

        if "csp" in checks:
            target = mech_oracle[Mechanism.CSP]
            for v in t.non_monitors:
                nchecks += 1
                b = omega_csp(t, v)
                if not b.contains(target[v]):
                    failures.append(
                        CheckFailure(
                            name,
                            "csp-sandwich",
                            f"{v}: oracle {target[v]} outside [{b.lo}, {b.hi}]",
                        )
                    )
                elif not b.exact and b.hi - b.lo > 1:
                    failures.append(
                        CheckFailure(
                            name,
                            "csp-width",
                            f"{v}: general-case interval [{b.lo}, {b.hi}] wider than one",
                        )
                    )

        if "up" in checks:
            ps = mech_paths[Mechanism.UP]
            target = mech_oracle[Mechanism.UP]
            for v in ps.universe:
                nchecks += 1
                msc = oracle_msc(ps, v)
                greedy = gsc(ps, v)
                if not max(msc - 1, 0) <= target[v] <= msc:
                    failures.append(
                        CheckFailure(
                            name,
                            "up-sandwich",
                            f"{v}: oracle {target[v]} outside [{msc - 1}, {msc}]",
                        )
                    )
                pv = ps.incidence_masks[v].bit_count()
                limit = (
                    msc
                    if pv == 0 or v in ps.directly_measured
                    else math.ceil((math.log(pv) + 1.0) * msc)
                )
                if not msc <= greedy <= limit:
                    failures.append(
                        CheckFailure(
                            name,
                            "up-greedy",
                            f"{v}: GSC {greedy} outside [MSC {msc}, guarantee {limit}]",
                        )
                    )

        if want_sets:
            for mech in (Mechanism.CAP, Mechanism.CSP, Mechanism.UP):
                ps = mech_paths[mech] if mech is Mechanism.UP else None
                omega = mech_oracle[mech]
                for k in range(1, t.sigma + 1):
                    nchecks += 1
                    bounds = max_identifiable_set(t, k, mech, ps)
                    exact_set = frozenset(v for v, w in omega.items() if w >= k)
                    if not (bounds.inner <= exact_set <= bounds.outer):
                        failures.append(
                            CheckFailure(
                                name,
                                f"sets-{mech.value}",
                                f"k={k}: inner {sorted(bounds.inner)} / oracle "
                                f"{sorted(exact_set)} / outer {sorted(bounds.outer)}",
                            )
                        )
    return VerificationReport(ninstances, nchecks, tuple(failures))


def verify_cut_engine(
    count: int,
    seed: int,
    *,
    n_range: tuple[int, int] = (2, 8),
    p_range: tuple[float, float] = (0.1, 0.9),
) -> VerificationReport:
    """Max-flow cut engine vs exhaustive cut search on all node pairs."""
    rng = random.Random(seed)
    failures: list[CheckFailure] = []
    nchecks = 0
    for i in range(count):
        n = rng.randint(*n_range)
        p = rng.uniform(*p_range)
        g = random_graph(n, p, seed * 101 + i)
        name = f"graph[{i}] n={n} p={p:.3f}"
        for s, t in combinations(g.nodes, 2):
            nchecks += 2
            fast = min_vertex_cut_size(g, s, t).cut_size
            slow = brute_vertex_cut(g, s, t)
            if fast != slow:
                failures.append(
                    CheckFailure(name, "cut-equal", f"({s},{t}): flow {fast} != brute {slow}")
                )
            if two_connected(g, s, t) != (fast >= 2):
                failures.append(
                    CheckFailure(
                        name,
                        "two-connected",
                        f"({s},{t}): biconnectivity disagrees with cut {fast}",
                    )
                )
    return VerificationReport(count, nchecks, tuple(failures))


def verify_batch_spec(spec: dict, *, corrupt: bool = False) -> VerificationReport:
    """Run the battery described by a small declarative dict.

    ``kind`` selects the battery: ``er`` (default) draws monitored connected
    instances and runs the closed-form-vs-oracle checks; ``cuts`` exercises
    the cut engine alone. Common fields: ``count``, ``seed``; er batteries
    also accept ``n_range``, ``p_range``, ``monitor_counts`` and ``checks``.
    """
    kind = spec.get("kind", "er")
    count = int(spec.get("count", 50))
    seed = int(spec.get("seed", 0))
    if kind == "cuts":
        return verify_cut_engine(
            count,
            seed,
            n_range=_pair(spec.get("n_range", (2, 8))),
            p_range=_fpair(spec.get("p_range", (0.1, 0.9))),
        )
    if kind == "er":
        tops = er_battery(
            count,
            seed,
            n_range=_pair(spec.get("n_range", (5, 10))),
            p_range=_fpair(spec.get("p_range", (0.3, 0.55))),
            monitor_counts=tuple(int(m) for m in spec.get("monitor_counts", (2, 3))),
        )
        checks = tuple(spec.get("checks", ALL_CHECKS))
        return verify_topologies(tops, checks, corrupt=corrupt)
    raise ValueError(f"unknown battery kind {kind!r}")


def _pair(value) -> tuple[int, int]:
    a, b = value
    return (int(a), int(b))


def _fpair(value) -> tuple[float, float]:
    a, b = value
    return (float(a), float(b))
