"""Stavskaya automaton: exact simulation, percolation coupling, and certified survival bounds.

The package has four layers:

- ``process``: the two-stage automaton on exact finite windows (spread with
  the right neighbour, then independent erasure), density statistics, and
  Monte Carlo replica estimates.
- ``percolation``: oriented site percolation on the space-time triangle and
  the seed-for-seed coupling between reachability and cell occupancy.
- ``contours``: dual-graph bond words, their exact integer weight polynomials,
  and the level tables produced both by enumeration and by recurrence.
- ``bounds``: the 3x3 transfer matrix over the weighted tables, its Perron
  root, and survival certificates (spectral radius below 1 plus an explicit
  window bound), including the certified threshold near alpha = 0.1143.
"""

from ._version import CODE_VERSION as __version__
from .bounds import (
    PHI,
    Certificate,
    ConvergenceError,
    GeneratingParams,
    PqOptimum,
    SearchSettings,
    SeriesDivergentError,
    TransferMatrix,
    build_dominating_matrix,
    build_matrix,
    certificate_from_json,
    certificate_to_json,
    certify_alpha,
    dominant_minors,
    evaluate_certificate,
    find_m_threshold,
    lambda_closed_form,
    max_certified_alpha,
    minor_shortcut_margin,
    optimize_pq,
    region_boundary_q,
    series_bound,
    series_partial_sums,
    spectral_radius,
)
from .contours import (
    DEFAULT_ENUMERATION_CAP,
    AlphaPolynomial,
    DualBondType,
    EnumerationLimitError,
    FiniteVertexBound,
    NicePath,
    enumerate_nice_paths,
    finite_vertex_bound,
    generating_sum,
    iter_nice_paths,
    s_table_recurrence,
    s_table_recurrence_matrix_convention,
    table_rows,
)
from .percolation import (
    PercolationSample,
    Triangle,
    coupled_run,
    coupling_check,
    reachable,
    sample_triangle,
)
from .process import (
    Configuration,
    ProbabilityEstimate,
    WindowExhaustedError,
    all_ones,
    all_zeros,
    apply_d,
    apply_r,
    density_replicas,
    prob_all_zero_estimate,
    simulate_density,
    stav_step,
    step_with_erasure_mask,
)
from .rng import RngStream

__all__ = [
    "__version__",
    "PHI",
    "AlphaPolynomial",
    "Certificate",
    "Configuration",
    "ConvergenceError",
    "DEFAULT_ENUMERATION_CAP",
    "DualBondType",
    "EnumerationLimitError",
    "FiniteVertexBound",
    "GeneratingParams",
    "NicePath",
    "PercolationSample",
    "PqOptimum",
    "ProbabilityEstimate",
    "RngStream",
    "SearchSettings",
    "SeriesDivergentError",
    "TransferMatrix",
    "Triangle",
    "WindowExhaustedError",
    "all_ones",
    "all_zeros",
    "apply_d",
    "apply_r",
    "build_dominating_matrix",
    "build_matrix",
    "certificate_from_json",
    "certificate_to_json",
    "certify_alpha",
    "coupled_run",
    "coupling_check",
    "density_replicas",
    "dominant_minors",
    "enumerate_nice_paths",
    "evaluate_certificate",
    "find_m_threshold",
    "finite_vertex_bound",
    "generating_sum",
    "iter_nice_paths",
    "lambda_closed_form",
    "max_certified_alpha",
    "minor_shortcut_margin",
    "optimize_pq",
    "prob_all_zero_estimate",
    "reachable",
    "region_boundary_q",
    "s_table_recurrence",
    "s_table_recurrence_matrix_convention",
    "sample_triangle",
    "series_bound",
    "series_partial_sums",
    "simulate_density",
    "spectral_radius",
    "stav_step",
    "step_with_erasure_mask",
    "table_rows",
]
