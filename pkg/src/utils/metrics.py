"""Comparisons between bounds and reference values."""

from typing import Union

import numpy as np

ArrayLike = Union[float, np.ndarray]


def scaled_error(value: ArrayLike, reference: ArrayLike) -> ArrayLike:
    """
    Hybrid error |value - reference| / max(1, |reference|).

    Relative for references of magnitude at least 1, absolute below that.
    """
    value = np.asarray(value, dtype=float)
    reference = np.asarray(reference, dtype=float)
    out = np.abs(value - reference) / np.maximum(1.0, np.abs(reference))
    return float(out) if out.ndim == 0 else out


def percent_above(value: ArrayLike, reference: ArrayLike) -> ArrayLike:
    """100 (value - reference) / reference; nan where the reference is zero."""
    value = np.asarray(value, dtype=float)
    reference = np.asarray(reference, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(reference != 0, 100.0 * (value - reference) / reference, np.nan)
    return float(out) if out.ndim == 0 else out


def sup_distance(values: np.ndarray, reference: np.ndarray, mask=None) -> float:
    """max |values - reference| over the masked grid points."""
    diff = np.abs(np.asarray(values, dtype=float) - np.asarray(reference, dtype=float))
    if mask is not None:
        diff = diff[np.asarray(mask, dtype=bool)]
    return float(diff.max()) if diff.size else 0.0
