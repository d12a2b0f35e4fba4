"""Mixture component families and the expectation transforms they induce."""

from src.mixtures.components import (
    LognormalParams,
    atom_domain,
    component_cdf,
    component_pdf,
    component_window,
    lognormal_params,
    smoothed_uniform_cdf,
    smoothed_uniform_pdf,
)
from src.mixtures.transform import TransformedFunction, anchored_antiderivative, transform

__all__ = [
    "LognormalParams",
    "TransformedFunction",
    "anchored_antiderivative",
    "atom_domain",
    "component_cdf",
    "component_pdf",
    "component_window",
    "lognormal_params",
    "smoothed_uniform_cdf",
    "smoothed_uniform_pdf",
    "transform",
]
