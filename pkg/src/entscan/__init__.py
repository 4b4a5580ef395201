"""Entanglement detection for multipartite density matrices.

Separability criteria built from trace norms of index-relabeled matrices:
partial transposition, realignment across bipartite cuts, and the full
family of row/column label-subset transposes, plus the induced entanglement
measure and negativity.
"""

__version__ = "0.1.0"

from .criteria import (
    NORM_TOL,
    CriterionReport,
    SubsetResult,
    Verdict,
    bipartite_cuts,
    evaluate_subset,
    gpt_scan,
    measure_e,
    negativity,
    ppt_criterion,
    realignment_criterion,
)
from .errors import EntscanError, InvalidInputError, NumericalError
from .linalg import (
    PSD_TOL,
    DensityMatrix,
    conjugate,
    dagger,
    density_matrix,
    kron,
    partial_trace,
    pure_separability_check,
    singular_values,
    trace_norm,
    transpose,
    vec,
)
from .reshape import (
    Label,
    ReshapedMatrix,
    apply_flips,
    cut_and_realign,
    enumerate_label_subsets,
    format_label_set,
    generalized_transpose,
    parse_label_set,
    partial_transpose,
    realign,
)
from .states import (
    StateSpec,
    bell_state,
    generate,
    ghz_state,
    horodecki_2x4,
    horodecki_3x3,
    isotropic_state,
    max_mixed,
    mix,
    parse_state_spec,
    random_density,
    random_local_unitary,
    random_product_state,
    separable_mixture,
    spec_text,
    w_state,
    werner_state,
)

__all__ = [
    "__version__",
    "CriterionReport",
    "DensityMatrix",
    "EntscanError",
    "InvalidInputError",
    "Label",
    "NORM_TOL",
    "NumericalError",
    "PSD_TOL",
    "ReshapedMatrix",
    "StateSpec",
    "SubsetResult",
    "Verdict",
    "apply_flips",
    "bell_state",
    "bipartite_cuts",
    "conjugate",
    "cut_and_realign",
    "dagger",
    "density_matrix",
    "enumerate_label_subsets",
    "evaluate_subset",
    "format_label_set",
    "generalized_transpose",
    "generate",
    "ghz_state",
    "gpt_scan",
    "horodecki_2x4",
    "horodecki_3x3",
    "isotropic_state",
    "kron",
    "max_mixed",
    "measure_e",
    "mix",
    "negativity",
    "parse_label_set",
    "parse_state_spec",
    "partial_trace",
    "partial_transpose",
    "ppt_criterion",
    "pure_separability_check",
    "random_density",
    "random_local_unitary",
    "random_product_state",
    "realign",
    "realignment_criterion",
    "separable_mixture",
    "singular_values",
    "spec_text",
    "trace_norm",
    "transpose",
    "vec",
    "w_state",
    "werner_state",
]
