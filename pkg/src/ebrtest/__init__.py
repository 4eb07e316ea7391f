"""Eigenvalue-based randomness test for panel residual matrices.

Rejects residual randomness when the scaled largest eigenvalue of the
symmetrized (and, if rectangular, Gaussian-padded) standardized residual
matrix is improbably large under the Tracy-Widom (beta = 1) law.
"""

from .dgp import DgpSpec, gen_ar1, gen_iid, gen_linear_csd, gen_nonmono, generate
from .ebr import (
    DegenerateInputError,
    EbrConfig,
    EbrResult,
    PaddingOutcome,
    ResidualMatrix,
    ebr_test,
    pad_to_square,
    standardize,
    symmetrize,
    tw_scale,
)
from .goe import ks_distance, sample_scaled_largest
from .ingest import IngestSpec, ParseError, ingest, write_matrix
from .meta import __version__, design_fingerprint
from .power import (
    CorrelationSummary,
    ExperimentGrid,
    PowerReport,
    PowerRow,
    correlation_summary,
    emit_figure_data,
    pairwise_correlation_values,
    run_grid,
    write_report_csv,
    write_report_json,
)
from .spectral import all_eigenvalues, largest_eigenvalue
from .tracy_widom import (
    TableConstructionError,
    TwTable,
    build_tw1_table,
    load_or_build_table,
    solve_painleve_ii,
)

__all__ = [
    "CorrelationSummary",
    "DegenerateInputError",
    "DgpSpec",
    "EbrConfig",
    "EbrResult",
    "ExperimentGrid",
    "IngestSpec",
    "PaddingOutcome",
    "ParseError",
    "PowerReport",
    "PowerRow",
    "ResidualMatrix",
    "TableConstructionError",
    "TwTable",
    "__version__",
    "all_eigenvalues",
    "build_tw1_table",
    "correlation_summary",
    "design_fingerprint",
    "ebr_test",
    "emit_figure_data",
    "gen_ar1",
    "gen_iid",
    "gen_linear_csd",
    "gen_nonmono",
    "generate",
    "ingest",
    "ks_distance",
    "largest_eigenvalue",
    "load_or_build_table",
    "pad_to_square",
    "pairwise_correlation_values",
    "run_grid",
    "sample_scaled_largest",
    "solve_painleve_ii",
    "standardize",
    "symmetrize",
    "tw_scale",
    "write_matrix",
    "write_report_csv",
    "write_report_json",
]
