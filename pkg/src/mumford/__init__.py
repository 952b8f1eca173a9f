"""Mumford curves over Q_p: Schottky groups, good fundamental domains, theta functions."""

__version__ = "0.1.0"

from .padic import Padic, PrecisionError, format_digits, parse_digits, parse_rational
from .proj import INF, Mat2, apply, eigen_data, enumerate_words, is_hyperbolic
from .berkovich import Ball, BerkPoint, MetricTree, distance, meet, retract, span_tree
from .domain import (
    GoodDomain,
    GoodPosition,
    Inconclusive,
    NonHyperbolic,
    Relation,
    check_good_domain,
    good_position,
    reduce_point,
)
from .curve import (
    PeriodMatrix,
    canonical_embed,
    embedded_quartic,
    fit_plane_quartic,
    period_matrix,
    quartic_residual,
    theta_m,
)
from .skeleton import MarkedMetricGraph, export_graph, pairing, tropical_curve
from .whittaker import (
    NotValid,
    SearchExhausted,
    normalize_presentation,
    ramification_points,
    ramification_to_whittaker,
    whittaker_group,
)

__all__ = [
    "Padic", "PrecisionError", "format_digits", "parse_digits", "parse_rational",
    "INF", "Mat2", "apply", "eigen_data", "enumerate_words", "is_hyperbolic",
    "Ball", "BerkPoint", "MetricTree", "distance", "meet", "retract", "span_tree",
    "GoodDomain", "GoodPosition", "Inconclusive", "NonHyperbolic", "Relation",
    "check_good_domain", "good_position", "reduce_point",
    "PeriodMatrix", "canonical_embed", "embedded_quartic", "fit_plane_quartic",
    "period_matrix", "quartic_residual", "theta_m",
    "MarkedMetricGraph", "export_graph", "pairing", "tropical_curve",
    "NotValid", "SearchExhausted", "normalize_presentation", "ramification_points",
    "ramification_to_whittaker", "whittaker_group",
]
