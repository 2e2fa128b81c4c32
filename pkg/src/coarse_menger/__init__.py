"""Coarse packing-covering duality on finite graphs.

Exact desk-scale solvers for far-path packings, ball covers, tree and tangle
decompositions, plus quasi-isometry transfer of duality witnesses.
"""

from .covering import (
    CoverInstance,
    DualityReport,
    duality_sweep,
    gallai_check,
    min_ball_hitting,
    min_separating_balls,
    min_set_cover,
)
from .errors import (
    CapacityError,
    CoarseMengerError,
    InputError,
    InternalInconsistencyError,
    PreconditionError,
)
from .graph import CenteredSet, Graph, VertexSet, certify_centered, distance, set_distance
from .packing import (
    PackingInstance,
    PackingSolution,
    gallai_packing,
    max_far_packing,
    menger_packing,
)
from .paths import PathWitness, enumerate_chordless_paths, enumerate_paths, is_a_path
from .tangles import (
    Tangle,
    build_gfrtz_tangle,
    easy_tangle_trichotomy,
    enumerate_separations,
    tangle_decompose,
    verify_tangle,
)
from .transfer import (
    QuasiIsometry,
    WitnessFunctions,
    c_h_ledger,
    pullback_hitting_set,
    scale_witness,
    transfer_chain,
    transfer_constants,
    transfer_witness,
    verify_quasi_isometry,
)
from .trees import (
    TreeDecomposition,
    easy_tree_hitting,
    min_degree_decomposition,
    rooted_fat_minor_ep,
    tree_helly,
    two_disjoint_connected_transversals,
)
from .version import REPORT_SCHEMA, __version__

__all__ = [
    "CapacityError",
    "CenteredSet",
    "CoarseMengerError",
    "CoverInstance",
    "DualityReport",
    "Graph",
    "InputError",
    "InternalInconsistencyError",
    "PackingInstance",
    "PackingSolution",
    "PathWitness",
    "PreconditionError",
    "QuasiIsometry",
    "REPORT_SCHEMA",
    "Tangle",
    "TreeDecomposition",
    "VertexSet",
    "WitnessFunctions",
    "build_gfrtz_tangle",
    "c_h_ledger",
    "certify_centered",
    "distance",
    "duality_sweep",
    "easy_tangle_trichotomy",
    "easy_tree_hitting",
    "enumerate_chordless_paths",
    "enumerate_paths",
    "enumerate_separations",
    "gallai_check",
    "gallai_packing",
    "is_a_path",
    "max_far_packing",
    "menger_packing",
    "min_ball_hitting",
    "min_degree_decomposition",
    "min_separating_balls",
    "min_set_cover",
    "pullback_hitting_set",
    "rooted_fat_minor_ep",
    "scale_witness",
    "set_distance",
    "tangle_decompose",
    "transfer_chain",
    "transfer_constants",
    "transfer_witness",
    "tree_helly",
    "two_disjoint_connected_transversals",
    "verify_quasi_isometry",
    "verify_tangle",
    "__version__",
]
