"""faultscope: how well can a monitored network localize node failures?

Given a topology, a set of monitor nodes and a probing mechanism, this
package computes which sets of simultaneous node failures are localizable
from binary end-to-end path measurements: per-node and per-set maximum
identifiability indices, k-identifiability tests, and the maximal
k-identifiable sets, for unconstrained walk probing (cap), simple-path
probing (csp) and routing-determined paths (up). A definitional brute-force
oracle and seeded verification batteries back every closed-form result.
"""

from .cuts import (
    CutQueryResult,
    biconnected_components,
    gamma,
    min_vertex_cut_size,
    two_connected,
)
from .errors import (
    EnumerationCapError,
    GenerationError,
    OracleCapError,
    TopologyError,
)
from .identify import (
    CspInternals,
    IntBounds,
    Mechanism,
    SetBounds,
    Status,
    TriState,
    cap_values,
    csp_internals,
    csp_internals_all,
    gsc,
    k_identifiable_cap,
    k_identifiable_csp,
    k_identifiable_up,
    max_identifiable_set,
    omega_cap,
    omega_csp,
    omega_set,
    omega_up,
    one_identifiable,
    per_node_bounds,
)
from .oracle import (
    FailureSet,
    brute_vertex_cut,
    distinguishable,
    oracle_k_identifiable,
    oracle_max_identifiable_set,
    oracle_msc,
    oracle_omega,
    oracle_omega_all,
)
from .probing import (
    MeasurementSystem,
    Path,
    PathSet,
    affected,
    enumerate_cap,
    enumerate_csp,
    format_paths,
    measurement_system,
    parse_paths,
    route_up,
    simulate,
)
from .randomnet import GenResult, gen_er, place_monitors, random_graph
from .reports import (
    VERSION,
    AnalysisReport,
    BatchSpec,
    CcdfTable,
    ReportMeta,
    analyze,
    ccdf,
    ccdf_batch,
    maxset_report,
    set_report,
)
from .topology import (
    VIRTUAL_MONITOR,
    AuxiliaryGraph,
    Graph,
    Topology,
    build_extended,
    build_extended_minus,
    build_minus_monitor,
    build_star,
    format_topology,
    load_topology,
    parse_monitor_names,
)
from .verify import (
    CheckFailure,
    VerificationReport,
    er_battery,
    verify_batch_spec,
    verify_cut_engine,
    verify_topologies,
)

__version__ = VERSION

__all__ = [
    "AnalysisReport",
    "AuxiliaryGraph",
    "BatchSpec",
    "CcdfTable",
    "CheckFailure",
    "CspInternals",
    "CutQueryResult",
    "EnumerationCapError",
    "FailureSet",
    "GenResult",
    "GenerationError",
    "Graph",
    "IntBounds",
    "MeasurementSystem",
    "Mechanism",
    "OracleCapError",
    "Path",
    "PathSet",
    "ReportMeta",
    "SetBounds",
    "Status",
    "Topology",
    "TopologyError",
    "TriState",
    "VERSION",
    "VIRTUAL_MONITOR",
    "VerificationReport",
    "affected",
    "analyze",
    "biconnected_components",
    "brute_vertex_cut",
    "build_extended",
    "build_extended_minus",
    "build_minus_monitor",
    "build_star",
    "cap_values",
    "ccdf",
    "ccdf_batch",
    "csp_internals",
    "csp_internals_all",
    "distinguishable",
    "enumerate_cap",
    "enumerate_csp",
    "er_battery",
    "format_paths",
    "format_topology",
    "gamma",
    "gen_er",
    "gsc",
    "k_identifiable_cap",
    "k_identifiable_csp",
    "k_identifiable_up",
    "load_topology",
    "max_identifiable_set",
    "maxset_report",
    "measurement_system",
    "min_vertex_cut_size",
    "omega_cap",
    "omega_csp",
    "omega_set",
    "omega_up",
    "one_identifiable",
    "oracle_k_identifiable",
    "oracle_max_identifiable_set",
    "oracle_msc",
    "oracle_omega",
    "oracle_omega_all",
    "parse_monitor_names",
    "parse_paths",
    "per_node_bounds",
    "place_monitors",
    "random_graph",
    "route_up",
    "set_report",
    "simulate",
    "two_connected",
    "verify_batch_spec",
    "verify_cut_engine",
    "verify_topologies",
    "__version__",
]
