"""Figure data series."""

from src.figures.series import SERIES, Series, provenance, run_series, write_series
from src.figures.settings import FigureSettings, LossPolicy, MarketPolicy

__all__ = [
    "FigureSettings",
    "LossPolicy",
    "MarketPolicy",
    "SERIES",
    "Series",
    "provenance",
    "run_series",
    "write_series",
]
