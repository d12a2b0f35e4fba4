"""Shape-constrained bounds and extremal-distribution analysis."""

from src.shape.bisection import (
    BisectionResult,
    BracketStep,
    bisect_alpha,
    match_alpha_to_bound,
)
from src.shape.distribution import (
    MixtureDistribution,
    count_modes,
    export_distribution,
    is_unimodal,
    mixture_cdf,
    mixture_pdf,
)
from src.shape.ler import LerBounds, ler_bounds

__all__ = [
    "BisectionResult",
    "BracketStep",
    "LerBounds",
    "MixtureDistribution",
    "bisect_alpha",
    "count_modes",
    "export_distribution",
    "is_unimodal",
    "ler_bounds",
    "match_alpha_to_bound",
    "mixture_cdf",
    "mixture_pdf",
]
