"""Command line front end.

Subcommands: gen, analyze, maxset, ccdf, verify, oracle. Exit codes:
0 success, 1 usage error, 2 validation or input error, 3 verification
failure. All reports are deterministic for fixed flags and seeds.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import (
    EnumerationCapError,
    GenerationError,
    OracleCapError,
    TopologyError,
)
from .identify import Mechanism
from .oracle import oracle_k_identifiable, oracle_omega
from .probing import PathSet, parse_paths
from .randomnet import gen_er, place_monitors
from .reports import (
    VERSION,
    BatchSpec,
    ReportMeta,
    analyze,
    ccdf,
    ccdf_batch,
    maxset_report,
    normalize_mechanisms,
    set_report,
)
from .topology import Topology, format_topology, load_topology, parse_monitor_names
from .verify import ALL_CHECKS, verify_batch_spec, verify_topologies

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_VERIFY = 3

SCHEMA_ORACLE = "faultscope/oracle v1"


class _Parser(argparse.ArgumentParser):
    """argparse with the documented usage exit code (1, not argparse's 2)."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _mechanism_list(value: str) -> tuple[Mechanism, ...]:
    return normalize_mechanisms(v.strip() for v in value.split(",") if v.strip())


def _name_list(value: str) -> tuple[str, ...]:
    names = tuple(v.strip() for v in value.split(",") if v.strip())
    if not names:
        raise ValueError("empty node list")
    return names


def _check_list(value: str) -> tuple[str, ...]:
    checks = tuple(v.strip() for v in value.split(",") if v.strip())
    unknown = set(checks) - set(ALL_CHECKS)
    if unknown:
        raise ValueError(f"unknown checks: {sorted(unknown)}")
    if not checks:
        raise ValueError("empty check list")
    return checks


def _read_text(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _load_cli_topology(args: argparse.Namespace) -> Topology:
    text = _read_text(args.topology)
    monitors = None
    if args.monitors:
        spec = args.monitors
        monitors = parse_monitor_names(_read_text(spec[1:]) if spec.startswith("@") else spec)
    return load_topology(text, monitors=monitors)


def _load_cli_paths(args: argparse.Namespace, t: Topology) -> PathSet | None:
    if getattr(args, "paths", None) is None:
        return None
    return parse_paths(_read_text(args.paths), t)


def _load_batch_dict(raw: str) -> dict:
    text = _read_text(raw[1:]) if raw.startswith("@") else raw
    spec = json.loads(text)
    if not isinstance(spec, dict):
        raise ValueError("batch spec must be a JSON object")
    return spec


def _meta(args: argparse.Namespace, names: tuple[str, ...]) -> ReportMeta:
    tokens: list[str] = []
    for name in names:
        value = getattr(args, name, None)
        if value is None or value is False:
            continue
        if value is True:
            tokens.append(name)
        elif isinstance(value, tuple):
            rendered = ",".join(
                item.value if isinstance(item, Mechanism) else str(item) for item in value
            )
            tokens.append(f"{name}={rendered}")
        else:
            tokens.append(f"{name}={value}")
    return ReportMeta(
        version=VERSION,
        seed=getattr(args, "seed", None),
        flags=" ".join(sorted(tokens)),
    )


def _render(report, fmt: str) -> str:
    return report.to_csv() if fmt == "csv" else report.to_json()


# ---------------------------------------------------------------------------
# subcommands


def _cmd_gen(args: argparse.Namespace) -> int:
    result = gen_er(args.n, args.p, args.seed)
    t = result.topology
    if args.mu is not None:
        t = place_monitors(t, args.mu, args.seed)
    _write_output(format_topology(t), args.out)
    if result.retries:
        print(f"note: {result.retries} disconnected draws rejected", file=sys.stderr)
    return EXIT_OK


def _cmd_analyze(args: argparse.Namespace) -> int:
    t = _load_cli_topology(args)
    ps = _load_cli_paths(args, t)
    meta = _meta(args, ("topology", "paths", "mechanism", "set", "exact"))
    report = analyze(
        t,
        args.mechanism,
        ps=ps,
        group=args.set,
        exact=args.exact,
        meta=meta,
    )
    _write_output(_render(report, args.format), args.out)
    return EXIT_OK


def _cmd_maxset(args: argparse.Namespace) -> int:
    t = _load_cli_topology(args)
    ps = _load_cli_paths(args, t)
    meta = _meta(args, ("topology", "paths", "mechanism", "k", "exact"))
    if args.set is not None:
        report = set_report(t, args.mechanism, args.set, ps=ps, exact=args.exact, meta=meta)
    else:
        ks = [args.k] if args.k is not None else None
        report = maxset_report(t, args.mechanism, ks, ps=ps, exact=args.exact, meta=meta)
    _write_output(_render(report, args.format), args.out)
    return EXIT_OK


def _cmd_ccdf(args: argparse.Namespace) -> int:
    if args.batch is not None:
        if args.exact:
            raise ValueError("exact mode is per-topology; batch averages use the bounds")
        if args.topology is not None:
            raise ValueError("give either a topology or a batch spec, not both")
        spec_dict = _load_batch_dict(args.batch)
        if "mechanisms" not in spec_dict:
            spec_dict["mechanisms"] = [m.value for m in args.mechanism]
        if "seed" not in spec_dict and args.seed is not None:
            spec_dict["seed"] = args.seed
        # jobs is an execution knob, not an analysis parameter: parallel and
        # serial runs emit byte-identical reports, so it stays out of flags.
        spec = BatchSpec.from_dict(spec_dict)
        meta = _meta(args, ("batch", "mechanism"))
        table = ccdf_batch(spec, jobs=args.jobs, meta=ReportMeta(VERSION, spec.seed, meta.flags))
    else:
        if args.topology is None:
            raise ValueError("a topology file or a batch spec is required")
        t = _load_cli_topology(args)
        ps = _load_cli_paths(args, t)
        meta = _meta(args, ("topology", "paths", "mechanism", "exact"))
        table = ccdf(t, args.mechanism, ps=ps, exact=args.exact, meta=meta)
    _write_output(_render(table, args.format), args.out)
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    if args.topology is not None:
        t = _load_cli_topology(args)
        report = verify_topologies([t], args.checks, corrupt=args.corrupt)
    elif args.batch is not None:
        report = verify_batch_spec(_load_batch_dict(args.batch), corrupt=args.corrupt)
    else:
        spec = {
            "kind": args.kind,
            "count": args.count,
            "seed": args.seed if args.seed is not None else 0,
            "checks": list(args.checks),
        }
        report = verify_batch_spec(spec, corrupt=args.corrupt)
    _write_output(report.to_json(), args.out)
    return EXIT_OK if report.ok else EXIT_VERIFY


def _cmd_oracle(args: argparse.Namespace) -> int:
    t = _load_cli_topology(args)
    ps = parse_paths(_read_text(args.paths), t)
    members = tuple(args.set) if args.set is not None else t.non_monitors
    doc: dict = {
        "schema": SCHEMA_ORACLE,
        "version": VERSION,
        "set": sorted(set(members)),
    }
    if args.k is not None:
        doc["k"] = args.k
        doc["identifiable"] = oracle_k_identifiable(ps, members, args.k)
    else:
        doc["omega"] = oracle_omega(ps, members)
    _write_output(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser assembly


def _add_common_output(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--out", help="write the report to this file instead of stdout")
    sub.add_argument(
        "--format",
        choices=("csv", "json"),
        default="csv",
        help="report format (default csv)",
    )


def _add_topology_args(sub: argparse.ArgumentParser, *, required: bool = True) -> None:
    sub.add_argument(
        "--topology",
        required=required,
        help="edge-list file (one 'u v' per line; optional '# monitors:' header)",
    )
    sub.add_argument(
        "--monitors",
        help="monitor names, inline comma/space separated or @FILE",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="faultscope",
        description=(
            "Quantify how well a monitored network can localize node failures "
            "from boolean end-to-end path measurements."
        ),
    )
    parser.add_argument("--version", action="version", version=f"faultscope {VERSION}")
    subs = parser.add_subparsers(dest="command", required=True)

    gen = subs.add_parser("gen", help="generate a seeded connected random topology")
    gen.add_argument("--n", type=int, required=True, help="node count")
    gen.add_argument("--p", type=float, required=True, help="edge probability")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--mu", type=int, help="also place this many random monitors")
    gen.add_argument("--out", help="write the edge list here instead of stdout")
    gen.set_defaults(func=_cmd_gen)

    an = subs.add_parser("analyze", help="per-node identifiability report")
    _add_topology_args(an)
    an.add_argument("--paths", help="measurement path file (used by the up mechanism)")
    an.add_argument(
        "--mechanism",
        type=_mechanism_list,
        default=(Mechanism.CAP, Mechanism.CSP, Mechanism.UP),
        help="comma separated subset of cap,csp,up (default all)",
    )
    an.add_argument("--set", type=_name_list, help="also report bounds for this node set")
    an.add_argument("--exact", action="store_true", help="oracle-exact values (small instances)")
    an.add_argument("--seed", type=int, help="stamped into the report header")
    _add_common_output(an)
    an.set_defaults(func=_cmd_analyze)

    mx = subs.add_parser("maxset", help="maximal k-identifiable sets")
    _add_topology_args(mx)
    mx.add_argument("--paths", help="measurement path file (used by the up mechanism)")
    mx.add_argument(
        "--mechanism",
        type=_mechanism_list,
        default=(Mechanism.CAP, Mechanism.CSP, Mechanism.UP),
        help="comma separated subset of cap,csp,up (default all)",
    )
    mx.add_argument("--k", type=int, help="single k (default: every k in 1..sigma)")
    mx.add_argument("--set", type=_name_list, help="report the index bounds of this set instead")
    mx.add_argument("--exact", action="store_true", help="oracle-exact sets (small instances)")
    mx.add_argument("--seed", type=int, help="stamped into the report header")
    _add_common_output(mx)
    mx.set_defaults(func=_cmd_maxset)

    cc = subs.add_parser("ccdf", help="fraction of k-identifiable nodes per k")
    _add_topology_args(cc, required=False)
    cc.add_argument("--paths", help="measurement path file (used by the up mechanism)")
    cc.add_argument(
        "--mechanism",
        type=_mechanism_list,
        default=(Mechanism.CAP, Mechanism.CSP, Mechanism.UP),
        help="comma separated subset of cap,csp,up (default all)",
    )
    cc.add_argument(
        "--batch",
        help="JSON batch spec (inline or @FILE): count, n, p, mus, seed[, mechanisms]",
    )
    cc.add_argument("--jobs", type=int, default=1, help="parallel workers for batch mode")
    cc.add_argument("--exact", action="store_true", help="oracle-exact curve (small instances)")
    cc.add_argument("--seed", type=int, help="batch seed fallback / report header")
    _add_common_output(cc)
    cc.set_defaults(func=_cmd_ccdf)

    vf = subs.add_parser("verify", help="closed-form results vs brute-force oracle")
    _add_topology_args(vf, required=False)
    vf.add_argument("--batch", help="JSON battery spec (inline or @FILE)")
    vf.add_argument(
        "--kind",
        choices=("er", "cuts"),
        default="er",
        help="battery kind when no topology/batch is given",
    )
    vf.add_argument("--count", type=int, default=50, help="battery instance count")
    vf.add_argument("--seed", type=int, help="battery seed (default 0)")
    vf.add_argument(
        "--checks",
        type=_check_list,
        default=ALL_CHECKS,
        help="comma separated subset of cap,csp,up,sets",
    )
    vf.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)
    vf.add_argument("--out", help="write the JSON report here instead of stdout")
    vf.set_defaults(func=_cmd_verify)

    orc = subs.add_parser("oracle", help="definitional brute-force answers on a path file")
    _add_topology_args(orc)
    orc.add_argument("--paths", required=True, help="measurement path file")
    orc.add_argument("--set", type=_name_list, help="node set (default: all non-monitors)")
    orc.add_argument("--k", type=int, help="test k-identifiability instead of computing omega")
    orc.add_argument("--out", help="write the JSON answer here instead of stdout")
    orc.set_defaults(func=_cmd_oracle)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        TopologyError,
        GenerationError,
        EnumerationCapError,
        OracleCapError,
        ValueError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
