"""Piecewise polynomial algebra: evaluation, roots and global maxima."""

from src.polyalg.domain import Domain
from src.polyalg.piecewise import (
    MaxResult,
    Piece,
    PiecewiseFunction,
    global_max,
    linear_combination,
)
from src.polyalg.polynomial import Polynomial, antiderivative, divide_by_linear
from src.polyalg.roots import roots_real

__all__ = [
    "Domain",
    "MaxResult",
    "Piece",
    "PiecewiseFunction",
    "Polynomial",
    "antiderivative",
    "divide_by_linear",
    "global_max",
    "linear_combination",
    "roots_real",
]
