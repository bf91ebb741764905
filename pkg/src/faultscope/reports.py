"""Report assembly and rendering: per-node tables, CCDF curves, batch averages.

Everything here is deterministic by construction: rows are built in sorted
or explicitly specified orders, floats are rendered with ``repr`` semantics,
and the CSV/JSON emitters never consult clocks or unordered containers, so a
fixed seed and flag set always reproduces a byte-identical report.
"""

from __future__ import annotations

import csv
import io
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .identify import (
    IntBounds,
    Mechanism,
    SetBounds,
    max_identifiable_set,
    per_node_bounds,
)
from .oracle import oracle_omega, oracle_omega_all
from .probing import PathSet, enumerate_cap, enumerate_csp, route_up
from .randomnet import gen_er
from .topology import Topology

VERSION = "0.1.0"
SCHEMA_ANALYSIS = "faultscope/analysis v1"
SCHEMA_CCDF = "faultscope/ccdf v1"

#: Flat column set shared by every analysis CSV section.
ANALYSIS_COLUMNS = (
    "section",
    "mechanism",
    "node",
    "k",
    "degree",
    "monitor_degree",
    "nonmonitor_degree",
    "lo",
    "hi",
    "exact",
    "inner",
    "outer",
)

CCDF_COLUMNS = ("k", "mechanism", "mu", "inner_fraction", "outer_fraction", "exact")


@dataclass(frozen=True)
class ReportMeta:
    """Provenance stamped into every rendered report."""

    version: str = VERSION
    seed: int | None = None
    flags: str = ""


@dataclass(frozen=True)
class AnalysisRow:
    node: str
    degree: int
    monitor_degree: int
    nonmonitor_degree: int
    bounds: tuple[tuple[Mechanism, IntBounds], ...]

    def bound(self, mechanism: Mechanism) -> IntBounds:
        for m, b in self.bounds:
            if m is mechanism:
                return b
        raise KeyError(mechanism)


@dataclass(frozen=True)
class SetRow:
    mechanism: Mechanism
    members: tuple[str, ...]
    bounds: IntBounds


@dataclass(frozen=True)
class MaxsetRow:
    mechanism: Mechanism
    k: int
    sets: SetBounds


@dataclass(frozen=True)
class AnalysisReport:
    """Per-node index table plus optional per-set and per-k sections."""

    meta: ReportMeta
    sigma: int
    mechanisms: tuple[Mechanism, ...]
    rows: tuple[AnalysisRow, ...]
    set_rows: tuple[SetRow, ...] = ()
    maxset_rows: tuple[MaxsetRow, ...] = ()

    def to_csv(self) -> str:
        buf = io.StringIO()
        _write_comments(buf, SCHEMA_ANALYSIS, self.meta)
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(ANALYSIS_COLUMNS)
        for row in self.rows:
            for mech, b in row.bounds:
                writer.writerow(
                    (
                        "node",
                        mech.value,
                        row.node,
                        "",
                        row.degree,
                        row.monitor_degree,
                        row.nonmonitor_degree,
                        b.lo,
                        b.hi,
                        _bool(b.exact),
                        "",
                        "",
                    )
                )
        for srow in self.set_rows:
            writer.writerow(
                (
                    "set",
                    srow.mechanism.value,
                    "+".join(srow.members),
                    "",
                    "",
                    "",
                    "",
                    srow.bounds.lo,
                    srow.bounds.hi,
                    _bool(srow.bounds.exact),
                    "",
                    "",
                )
            )
        for mrow in self.maxset_rows:
            writer.writerow(
                (
                    "maxset",
                    mrow.mechanism.value,
                    "",
                    mrow.k,
                    "",
                    "",
                    "",
                    "",
                    "",
                    _bool(mrow.sets.exact),
                    "+".join(sorted(mrow.sets.inner)),
                    "+".join(sorted(mrow.sets.outer)),
                )
            )
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "schema": SCHEMA_ANALYSIS,
            "version": self.meta.version,
            "seed": self.meta.seed,
            "flags": self.meta.flags,
            "sigma": self.sigma,
            "mechanisms": [m.value for m in self.mechanisms],
            "nodes": [
                {
                    "node": row.node,
                    "degree": row.degree,
                    "monitor_degree": row.monitor_degree,
                    "nonmonitor_degree": row.nonmonitor_degree,
                    "bounds": {
                        m.value: {"lo": b.lo, "hi": b.hi, "exact": b.exact}
                        for m, b in row.bounds
                    },
                }
                for row in self.rows
            ],
            "sets": [
                {
                    "mechanism": srow.mechanism.value,
                    "members": list(srow.members),
                    "lo": srow.bounds.lo,
                    "hi": srow.bounds.hi,
                    "exact": srow.bounds.exact,
                }
                for srow in self.set_rows
            ],
            "maxsets": [
                {
                    "mechanism": mrow.mechanism.value,
                    "k": mrow.k,
                    "inner": sorted(mrow.sets.inner),
                    "outer": sorted(mrow.sets.outer),
                    "exact": mrow.sets.exact,
                }
                for mrow in self.maxset_rows
            ],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


class CcdfRow(NamedTuple):
    k: int
    mechanism: Mechanism
    mu: int
    inner_fraction: float
    outer_fraction: float
    exact: bool


@dataclass(frozen=True)
class CcdfTable:
    """Fractions |S*(k)|/sigma per k, as inner/outer (or exact) curves."""

    meta: ReportMeta
    rows: tuple[CcdfRow, ...]

    def to_csv(self) -> str:
        buf = io.StringIO()
        _write_comments(buf, SCHEMA_CCDF, self.meta)
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CCDF_COLUMNS)
        for row in self.rows:
            writer.writerow(
                (
                    row.k,
                    row.mechanism.value,
                    row.mu,
                    repr(row.inner_fraction),
                    repr(row.outer_fraction),
                    _bool(row.exact),
                )
            )
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "schema": SCHEMA_CCDF,
            "version": self.meta.version,
            "seed": self.meta.seed,
            "flags": self.meta.flags,
            "rows": [
                {
                    "k": row.k,
                    "mechanism": row.mechanism.value,
                    "mu": row.mu,
                    "inner_fraction": row.inner_fraction,
                    "outer_fraction": row.outer_fraction,
                    "exact": row.exact,
                }
                for row in self.rows
            ],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _bool(value: bool) -> str:
    return "true" if value else "false"


def _write_comments(buf: io.StringIO, schema: str, meta: ReportMeta) -> None:
    buf.write(f"# schema: {schema}\n")
    buf.write(f"# version: {meta.version}\n")
    buf.write(f"# seed: {meta.seed if meta.seed is not None else '-'}\n")
    buf.write(f"# flags: {meta.flags or '-'}\n")


def normalize_mechanisms(mechanisms: Iterable[Mechanism | str]) -> tuple[Mechanism, ...]:
    """Deduplicate while preserving the requested order."""
    out: list[Mechanism] = []
    for m in mechanisms:
        mech = Mechanism(m)
        if mech not in out:
            out.append(mech)
    if not out:
        raise ValueError("at least one mechanism is required")
    return tuple(out)


def _mechanism_paths(t: Topology, mechanism: Mechanism, ps: PathSet | None) -> PathSet:
    """The measurement paths a mechanism is judged on.

    UP is defined by its routes (supplied or derived); CAP and CSP are
    topology-determined, so oracle-grade queries enumerate their canonical
    path sets.
    """
    if mechanism is Mechanism.UP:
        return ps if ps is not None else route_up(t)
    if mechanism is Mechanism.CSP:
        return enumerate_csp(t)
    return enumerate_cap(t)


def _bounds_table(
    t: Topology,
    mechanism: Mechanism,
    ps: PathSet | None,
    *,
    refine_single: bool,
    exact: bool,
) -> dict[str, IntBounds]:
    if exact:
        values = oracle_omega_all(_mechanism_paths(t, mechanism, ps))
        return {v: IntBounds.exactly(w) for v, w in values.items()}
    up_paths = ps if ps is not None else (route_up(t) if mechanism is Mechanism.UP else None)
    return per_node_bounds(t, mechanism, up_paths, refine_single=refine_single)


def analyze(
    t: Topology,
    mechanisms: Sequence[Mechanism | str],
    *,
    ps: PathSet | None = None,
    group: Iterable[str] | None = None,
    include_maxsets: bool = True,
    exact: bool = False,
    meta: ReportMeta | None = None,
) -> AnalysisReport:
    """Full per-node report, sorted non-increasing by the first mechanism's
    index bounds (ties by node id).

    Per-node rows show the raw theorem bounds; the per-set and per-k
    sections fold in the exact single-failure test, and ``exact=True``
    replaces everything with oracle values (within the oracle caps).
    """
    t.require_monitored()
    mechs = normalize_mechanisms(mechanisms)
    meta = meta or ReportMeta()
    tables = {
        m: _bounds_table(t, m, ps, refine_single=False, exact=exact) for m in mechs
    }
    rows = [
        AnalysisRow(
            node=v,
            degree=t.degree(v),
            monitor_degree=t.monitor_degree(v),
            nonmonitor_degree=t.nonmonitor_degree(v),
            bounds=tuple((m, tables[m][v]) for m in mechs),
        )
        for v in t.non_monitors
    ]
    first = mechs[0]
    rows.sort(key=lambda r: (-r.bound(first).hi, -r.bound(first).lo, r.node))

    set_rows: list[SetRow] = []
    if group is not None:
        members = tuple(sorted(set(group)))
        for m in mechs:
            folded = _bounds_table(t, m, ps, refine_single=True, exact=exact)
            unknown = [v for v in members if v not in folded]
            if not members or unknown:
                bad = unknown[0] if unknown else "(empty)"
                raise ValueError(f"queried set must be non-monitors, got {bad!r}")
            set_rows.append(
                SetRow(
                    mechanism=m,
                    members=members,
                    bounds=IntBounds(
                        min(folded[v].lo for v in members),
                        min(folded[v].hi for v in members),
                    ),
                )
            )

    maxset_rows: list[MaxsetRow] = []
    if include_maxsets:
        maxset_rows = _maxset_rows(t, mechs, None, ps=ps, exact=exact)

    return AnalysisReport(
        meta=meta,
        sigma=t.sigma,
        mechanisms=mechs,
        rows=tuple(rows),
        set_rows=tuple(set_rows),
        maxset_rows=tuple(maxset_rows),
    )


def _maxset_rows(
    t: Topology,
    mechs: tuple[Mechanism, ...],
    ks: Sequence[int] | None,
    *,
    ps: PathSet | None,
    exact: bool,
) -> list[MaxsetRow]:
    sigma = t.sigma
    wanted = list(ks) if ks is not None else list(range(1, sigma + 1))
    for k in wanted:
        if not 1 <= k <= sigma:
            raise ValueError(f"k must be in 1..{sigma}")
    exact_values: dict[Mechanism, dict[str, int]] = {}
    if exact:
        exact_values = {m: oracle_omega_all(_mechanism_paths(t, m, ps)) for m in mechs}
    rows: list[MaxsetRow] = []
    for k in wanted:
        for m in mechs:
            if exact:
                exact_set = frozenset(v for v, w in exact_values[m].items() if w >= k)
                rows.append(MaxsetRow(m, k, SetBounds(exact_set, exact_set)))
            else:
                up_paths = ps if ps is not None else (
                    route_up(t) if m is Mechanism.UP else None
                )
                rows.append(MaxsetRow(m, k, max_identifiable_set(t, k, m, up_paths)))
    return rows


def maxset_report(
    t: Topology,
    mechanisms: Sequence[Mechanism | str],
    ks: Sequence[int] | None = None,
    *,
    ps: PathSet | None = None,
    exact: bool = False,
    meta: ReportMeta | None = None,
) -> AnalysisReport:
    """Maximal k-identifiable sets only (all k by default)."""
    t.require_monitored()
    mechs = normalize_mechanisms(mechanisms)
    return AnalysisReport(
        meta=meta or ReportMeta(),
        sigma=t.sigma,
        mechanisms=mechs,
        rows=(),
        maxset_rows=tuple(_maxset_rows(t, mechs, ks, ps=ps, exact=exact)),
    )


def set_report(
    t: Topology,
    mechanisms: Sequence[Mechanism | str],
    group: Iterable[str],
    *,
    ps: PathSet | None = None,
    exact: bool = False,
    oracle: bool = False,
    meta: ReportMeta | None = None,
) -> AnalysisReport:
    """Index bounds for one queried set, without the per-node table.

    ``oracle=True`` computes the set's index directly with the brute-force
    oracle (as opposed to ``exact=True``, which uses oracle per-node values
    and still reports the member-wise minimum).
    """
    t.require_monitored()
    mechs = normalize_mechanisms(mechanisms)
    members = tuple(sorted(set(group)))
    set_rows: list[SetRow] = []
    for m in mechs:
        if oracle:
            value = oracle_omega(_mechanism_paths(t, m, ps), members)
            set_rows.append(SetRow(m, members, IntBounds.exactly(value)))
        else:
            folded = _bounds_table(t, m, ps, refine_single=True, exact=exact)
            unknown = [v for v in members if v not in folded]
            if not members or unknown:
                bad = unknown[0] if unknown else "(empty)"
                raise ValueError(f"queried set must be non-monitors, got {bad!r}")
            set_rows.append(
                SetRow(
                    m,
                    members,
                    IntBounds(
                        min(folded[v].lo for v in members),
                        min(folded[v].hi for v in members),
                    ),
                )
            )
    return AnalysisReport(
        meta=meta or ReportMeta(),
        sigma=t.sigma,
        mechanisms=mechs,
        rows=(),
        set_rows=tuple(set_rows),
    )


# ---------------------------------------------------------------------------
# CCDF curves


def _ccdf_rows_for(
    t: Topology,
    mechanism: Mechanism,
    ps: PathSet | None,
    *,
    exact: bool,
) -> list[tuple[int, float, float, bool]]:
    table = _bounds_table(t, mechanism, ps, refine_single=True, exact=exact)
    sigma = len(table)
    rows: list[tuple[int, float, float, bool]] = []
    for k in range(1, sigma + 1):
        inner = sum(1 for b in table.values() if b.lo >= k)
        outer = sum(1 for b in table.values() if b.hi >= k)
        rows.append((k, inner / sigma, outer / sigma, inner == outer))
    return rows


def ccdf(
    t: Topology,
    mechanisms: Sequence[Mechanism | str],
    *,
    ps: PathSet | None = None,
    exact: bool = False,
    meta: ReportMeta | None = None,
) -> CcdfTable:
    """Fraction of k-identifiable non-monitors for every k in 1..sigma."""
    t.require_monitored()
    mechs = normalize_mechanisms(mechanisms)
    mu = t.mu
    rows: list[CcdfRow] = []
    per_mech = {m: _ccdf_rows_for(t, m, ps, exact=exact) for m in mechs}
    for k in range(1, t.sigma + 1):
        for m in mechs:
            kk, inner, outer, ex = per_mech[m][k - 1]
            rows.append(CcdfRow(kk, m, mu, inner, outer, ex))
    return CcdfTable(meta=meta or ReportMeta(), rows=tuple(rows))


class BatchSpec(NamedTuple):
    """Declarative description of a seeded ER averaging experiment."""

    count: int
    n: int
    p: float
    mus: tuple[int, ...]
    seed: int
    mechanisms: tuple[Mechanism, ...]

    @classmethod
    def from_dict(cls, d: dict) -> "BatchSpec":
        try:
            return cls(
                count=int(d["count"]),
                n=int(d["n"]),
                p=float(d["p"]),
                mus=tuple(int(m) for m in d["mus"]),
                seed=int(d["seed"]),
                mechanisms=normalize_mechanisms(d.get("mechanisms", ["cap", "csp", "up"])),
            )
        except KeyError as exc:
            raise ValueError(f"batch spec is missing the {exc.args[0]!r} field") from None


def _ccdf_instance(
    task: tuple[int, float, int, int, tuple[int, ...], tuple[str, ...]],
) -> list[tuple[int, str, int, float, float, bool]]:
    """One batch instance, picklable for process pools.

    Monitor placements are nested across the mu values of one instance (a
    shared random node order is prefixed), so curves for different mu are
    comparable draw by draw.
    """
    n, p, seed, index, mus, mech_values = task
    base = gen_er(n, p, seed + index).topology
    rng = random.Random((seed + index) * 1_000_003 + 17)
    order = rng.sample(sorted(base.nodes), len(base.nodes))
    out: list[tuple[int, str, int, float, float, bool]] = []
    for mu in mus:
        t = base.with_monitors(frozenset(order[:mu]))
        for value in mech_values:
            mech = Mechanism(value)
            ps = route_up(t) if mech is Mechanism.UP else None
            for k, inner, outer, ex in _ccdf_rows_for(t, mech, ps, exact=False):
                out.append((k, value, mu, inner, outer, ex))
    return out


def ccdf_batch(
    spec: BatchSpec,
    *,
    jobs: int = 1,
    meta: ReportMeta | None = None,
) -> CcdfTable:
    """CCDF fractions averaged over ``count`` seeded ER instances.

    Instance i uses seed ``spec.seed + i``. Results are merged in instance
    order regardless of ``jobs``, so parallel runs are byte-identical to
    serial ones.
    """
    if spec.count < 1:
        raise ValueError("batch count must be at least 1")
    for mu in spec.mus:
        if not 1 <= mu < spec.n:
            raise ValueError(f"mu={mu} leaves no non-monitors to analyze (n={spec.n})")
    mech_values = tuple(m.value for m in normalize_mechanisms(spec.mechanisms))
    tasks = [
        (spec.n, spec.p, spec.seed, i, tuple(spec.mus), mech_values)
        for i in range(spec.count)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_ccdf_instance, tasks))
    else:
        results = [_ccdf_instance(task) for task in tasks]

    sums: dict[tuple[int, str, int], list] = {}
    for result in results:
        for k, value, mu, inner, outer, ex in result:
            acc = sums.setdefault((mu, value, k), [0.0, 0.0, True])
            acc[0] += inner
            acc[1] += outer
            acc[2] = acc[2] and ex
    rows: list[CcdfRow] = []
    for mu in spec.mus:
        sigma = spec.n - mu
        for k in range(1, sigma + 1):
            for value in mech_values:
                acc = sums[(mu, value, k)]
                rows.append(
                    CcdfRow(
                        k,
                        Mechanism(value),
                        mu,
                        acc[0] / spec.count,
                        acc[1] / spec.count,
                        acc[2],
                    )
                )
    return CcdfTable(meta=meta or ReportMeta(seed=spec.seed), rows=tuple(rows))
