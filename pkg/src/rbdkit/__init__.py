"""Reliability block diagram evaluation for series pipeline systems.

Closed-form evaluation of series/parallel RBDs with exponential segment
failure times, executable checks for the properties every reliability curve
must satisfy, and a deterministic Monte Carlo oracle that cross-checks the
closed forms.
"""

__version__ = "0.1.0"

from rbdkit.core import (
    Block,
    CurveSource,
    DistributionKind,
    FailureModel,
    Leaf,
    MAX_LEAVES,
    MAX_TREE_DEPTH,
    ParallelNode,
    PropertyCheck,
    PropertyReport,
    RbdModel,
    ReliabilityCurve,
    Segment,
    SeriesNode,
    ValidationError,
    ValidationIssue,
    require_time,
    validate_model,
)
from rbdkit.distributions import (
    cdf,
    check_reliability_axioms,
    log_reliability,
    reliability,
)
from rbdkit.rbd import (
    evaluate,
    parallel_reliability,
    pipeline_reliability_closed_form,
    reliability_curve,
    series_min_bound,
    series_reliability,
)
from rbdkit.mc import (
    McConfig,
    McEstimate,
    check_mutual_independence,
    estimate_system_reliability,
    sample_failure_time,
    survival_event,
    survival_indicator_matrix,
)
from rbdkit.dsl import (
    ParseIssue,
    SpecDocument,
    SpecParseError,
    parse_spec,
    parse_spec_file,
    print_spec,
)

__all__ = [
    "Block",
    "CurveSource",
    "DistributionKind",
    "FailureModel",
    "Leaf",
    "MAX_LEAVES",
    "MAX_TREE_DEPTH",
    "McConfig",
    "McEstimate",
    "ParallelNode",
    "ParseIssue",
    "PropertyCheck",
    "PropertyReport",
    "RbdModel",
    "ReliabilityCurve",
    "Segment",
    "SeriesNode",
    "SpecDocument",
    "SpecParseError",
    "ValidationError",
    "ValidationIssue",
    "cdf",
    "check_mutual_independence",
    "check_reliability_axioms",
    "estimate_system_reliability",
    "evaluate",
    "log_reliability",
    "parallel_reliability",
    "parse_spec",
    "parse_spec_file",
    "pipeline_reliability_closed_form",
    "print_spec",
    "reliability",
    "reliability_curve",
    "require_time",
    "sample_failure_time",
    "series_min_bound",
    "series_reliability",
    "survival_event",
    "survival_indicator_matrix",
    "validate_model",
    "__version__",
]
