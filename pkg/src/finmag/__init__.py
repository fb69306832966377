"""Magnitude of finite metric spaces and its small-scale limit."""

from .closed_forms import (
    bipartite_magnitude,
    family_limit,
    forest_magnitude,
    homogeneous_profile,
    join_limit,
    join_magnitude,
    speyer_magnitude,
)
from .construct import ConstructionResult, construct_target_limit, minimal_family_size
from .engine import (
    MagnitudeReport,
    c_coefficients,
    f_n,
    formal_magnitude,
    magnitude_profile,
    numeric_magnitude,
    one_point_report,
    small_scale_limit,
)
from .genfun import GenPoly, GenRat, LimitResult, TruncatedSeries, genrat_limit_q1
from .spaces import FiniteMetricSpace, Graph, from_graph, join, l1_product, scale, uniform_space, validate_metric

__version__ = "0.1.0"
