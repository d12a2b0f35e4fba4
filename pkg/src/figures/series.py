"""
Figure data series: parameter sweeps written as CSV tables.

    fig1  LER bounds over the deductible, point masses vs unimodal at each mode
    fig2  LER gap (upper minus lower) for the same sweep
    fig3  market policy bound over alpha, percent above Black-Scholes
    fig4  PDF of the uniform-mixture extremal distribution vs the matching lognormal
    fig5  CDF of the same
    fig6  PDF of the lognormal mixtures at the unimodal and the bound-matching alpha
    fig7  CDF of the same
    fig8  smoothed-uniform bounds approaching the unimodal bound as eta grows
    fig9  smoothed-uniform densities approaching Uniform(a, b)
"""

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from src import __version__
from src.cg import CGSettings, MomentEnvelope, run_cg
from src.figures.settings import FigureSettings, LossPolicy, MarketPolicy
from src.mixtures import smoothed_uniform_pdf
from src.model import MixtureFamily
from src.oracles import black_scholes_call, lo_upper_bound
from src.shape import (
    MixtureDistribution,
    bisect_alpha,
    ler_bounds,
    match_alpha_to_bound,
    mixture_cdf,
    mixture_pdf,
)
from src.utils.errors import MomentSetInfeasibleError, ValidationError
from src.utils.metrics import percent_above

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.12g"
LOGNORMAL_QUANTILE = 1e-6


@dataclass
class Series:
    series_id: str
    table: pd.DataFrame
    converged: bool = True
    notes: Dict[str, float] = field(default_factory=dict)


def _family_label(family: MixtureFamily) -> str:
    return "dirac" if family.mode is None else f"m{family.mode:g}"


def _loss_families(loss: LossPolicy) -> List[MixtureFamily]:
    return [MixtureFamily.dirac()] + [MixtureFamily.khintchine_uniform(m) for m in loss.modes]


def _ler_row(loss: LossPolicy, d: float, cg: CGSettings) -> Tuple[dict, bool]:
    row, converged = {"d": d}, True
    for family in _loss_families(loss):
        label = _family_label(family)
        bounds = ler_bounds(loss.mu, loss.sigma**2, loss.b, d, family, cg)
        row[f"ler_lo_{label}"] = bounds.ler_lo
        row[f"ler_hi_{label}"] = bounds.ler_hi
        row[f"gap_{label}"] = bounds.gap
        converged = converged and bounds.converged
    return row, converged


def _ler_sweep(settings: FigureSettings, cg: CGSettings) -> Tuple[pd.DataFrame, bool]:
    logger.info(f"LER sweep over {len(settings.deductibles)} deductibles")
    rows = Parallel(n_jobs=settings.n_jobs)(
        delayed(_ler_row)(settings.loss, d, cg) for d in settings.deductibles
    )
    return pd.DataFrame([r for r, _ in rows]), all(c for _, c in rows)


def ler_bounds_series(settings: FigureSettings, cg: CGSettings) -> Series:
    table, converged = _ler_sweep(settings, cg)
    columns = ["d"] + [c for c in table.columns if c.startswith("ler_")]
    return Series("fig1", table[columns], converged)


def ler_gap_series(settings: FigureSettings, cg: CGSettings) -> Series:
    table, converged = _ler_sweep(settings, cg)
    columns = ["d"] + [c for c in table.columns if c.startswith("gap_")]
    return Series("fig2", table[columns], converged)


def _market_bound(market: MarketPolicy, family: MixtureFamily, cg: CGSettings):
    result = run_cg(market.problem(family), cg)
    return result.bound * market.discount, result.converged


def _alpha_row(market: MarketPolicy, alpha: float, cg: CGSettings) -> Tuple[float, bool]:
    if not alpha < market.sigma:
        return math.nan, True
    try:
        return _market_bound(market, MixtureFamily.lognormal(alpha), cg)
    except MomentSetInfeasibleError:
        logger.warning(f"alpha = {alpha:g}: no lognormal mixture matches the moments")
        return math.nan, True


def alpha_sweep_series(settings: FigureSettings, cg: CGSettings) -> Series:
    """Discounted upper bounds in percent above the Black-Scholes price."""
    market = settings.market
    bs = black_scholes_call(market.x0, market.x0, market.r, market.nu, market.t)
    lo = lo_upper_bound(market.mean, market.sigma, market.x0) * market.discount
    uniform, uniform_ok = _market_bound(
        market, MixtureFamily.khintchine_uniform(settings.market_mode), cg
    )
    logger.info(
        f"Market policy: Black-Scholes {bs:.8g}, Lo {lo:.8g}, uniform mixture {uniform:.8g}, "
        f"alpha must stay below {market.sigma:.6g}"
    )
    rows = Parallel(n_jobs=settings.n_jobs)(
        delayed(_alpha_row)(market, alpha, cg) for alpha in settings.alphas
    )
    bounds = np.array([b for b, _ in rows])
    table = pd.DataFrame(
        {
            "alpha": settings.alphas,
            "bound": bounds,
            "lognormal_pct": percent_above(bounds, bs),
            "lo_pct": percent_above(lo, bs),
            "uniform_pct": percent_above(uniform, bs),
        }
    )
    converged = uniform_ok and all(c for _, c in rows)
    return Series("fig3", table, converged, {"black_scholes": bs, "lo": lo, "uniform": uniform})


def _lognormal_window(market: MarketPolicy) -> Tuple[float, float]:
    dist = market.lognormal.distribution
    return float(dist.ppf(LOGNORMAL_QUANTILE)), float(dist.isf(LOGNORMAL_QUANTILE))


def _density_table(
    market: MarketPolicy, mixtures: Dict[str, MixtureDistribution], n_points: int, kind: str
) -> pd.DataFrame:
    lo, hi = _lognormal_window(market)
    for dist in mixtures.values():
        lo, hi = min(lo, dist.window[0]), max(hi, dist.window[1])
    u = np.linspace(max(lo, 0.0), hi, n_points)
    evaluate = mixture_pdf if kind == "pdf" else mixture_cdf
    table = {"u": u}
    for label, dist in mixtures.items():
        table[f"{kind}_{label}"] = evaluate(dist, u)
    lognormal = market.lognormal.distribution
    table[f"{kind}_lognormal"] = lognormal.pdf(u) if kind == "pdf" else lognormal.cdf(u)
    return pd.DataFrame(table)


def _uniform_mixture(settings: FigureSettings, cg: CGSettings):
    family = MixtureFamily.khintchine_uniform(settings.market_mode)
    result = run_cg(settings.market.problem(family), cg)
    return MixtureDistribution.from_result(result), result


def uniform_pdf_series(settings: FigureSettings, cg: CGSettings) -> Series:
    dist, result = _uniform_mixture(settings, cg)
    table = _density_table(settings.market, {"uniform": dist}, settings.export_points, "pdf")
    return Series("fig4", table, result.converged, {"bound": result.bound})


def uniform_cdf_series(settings: FigureSettings, cg: CGSettings) -> Series:
    dist, result = _uniform_mixture(settings, cg)
    table = _density_table(settings.market, {"uniform": dist}, settings.export_points, "cdf")
    return Series("fig5", table, result.converged, {"bound": result.bound})


def _lognormal_mixtures(settings: FigureSettings, cg: CGSettings):
    market = settings.market
    alpha_lo, alpha_hi = settings.market_alpha_bracket
    spec = market.problem(MixtureFamily.lognormal(alpha_hi))
    envelope = MomentEnvelope(market.mean, market.mean, market.sigma**2)
    star = bisect_alpha(
        spec,
        alpha_lo,
        alpha_hi,
        settings.bisection_epsilon,
        cg,
        envelope,
        settings.unimodality_grid,
    )
    uniform = run_cg(market.problem(MixtureFamily.khintchine_uniform(settings.market_mode)), cg)
    match = match_alpha_to_bound(
        spec,
        uniform.bound,
        alpha_lo,
        alpha_hi,
        settings.bisection_epsilon,
        cg,
        settings.unimodality_grid,
    )
    mixtures = {
        "alpha_star": MixtureDistribution.from_result(star.result),
        "alpha_match": MixtureDistribution.from_result(match.result),
    }
    notes = {"alpha_star": star.alpha_star, "alpha_match": match.alpha_star}
    converged = star.result.converged and match.result.converged and uniform.converged
    return mixtures, notes, converged


def lognormal_pdf_series(settings: FigureSettings, cg: CGSettings) -> Series:
    mixtures, notes, converged = _lognormal_mixtures(settings, cg)
    table = _density_table(settings.market, mixtures, settings.export_points, "pdf")
    return Series("fig6", table, converged, notes)


def lognormal_cdf_series(settings: FigureSettings, cg: CGSettings) -> Series:
    mixtures, notes, converged = _lognormal_mixtures(settings, cg)
    table = _density_table(settings.market, mixtures, settings.export_points, "cdf")
    return Series("fig7", table, converged, notes)


def smoothing_convergence_series(settings: FigureSettings, cg: CGSettings) -> Series:
    """Percent by which the smoothed-uniform bound falls short of the unimodal bound."""
    market, mode = settings.market, settings.market_mode
    uniform, uniform_ok = _market_bound(market, MixtureFamily.khintchine_uniform(mode), cg)
    rows = Parallel(n_jobs=settings.n_jobs)(
        delayed(_market_bound)(market, MixtureFamily.smoothed_uniform(mode, eta), cg)
        for eta in settings.etas
    )
    smoothed = np.array([b for b, _ in rows])
    table = pd.DataFrame(
        {
            "eta": settings.etas,
            "smoothed_bound": smoothed,
            "uniform_bound": uniform,
            "pct_difference": -percent_above(smoothed, uniform),
        }
    )
    return Series("fig8", table, uniform_ok and all(c for _, c in rows))


def smoothed_density_series(settings: FigureSettings, cg: CGSettings) -> Series:
    a, b = settings.density_interval
    u = settings.density_grid()
    table = {"u": u}
    for eta in settings.density_etas:
        table[f"f_eta_{eta:g}"] = smoothed_uniform_pdf(a, b, eta, u)
    table["uniform"] = np.where((u >= a) & (u <= b), 1.0 / (b - a), 0.0)
    return Series("fig9", pd.DataFrame(table))


SERIES: Dict[str, Callable[[FigureSettings, CGSettings], Series]] = {
    "fig1": ler_bounds_series,
    "fig2": ler_gap_series,
    "fig3": alpha_sweep_series,
    "fig4": uniform_pdf_series,
    "fig5": uniform_cdf_series,
    "fig6": lognormal_pdf_series,
    "fig7": lognormal_cdf_series,
    "fig8": smoothing_convergence_series,
    "fig9": smoothed_density_series,
}


def run_series(series_id: str, settings: FigureSettings, cg: CGSettings) -> Series:
    if series_id not in SERIES:
        raise ValidationError(
            f"Unknown series '{series_id}' (available: {', '.join(SERIES)})", field="series"
        )
    logger.info(f"Computing series {series_id}")
    return SERIES[series_id](settings, cg)


def provenance(series: Series, settings: FigureSettings, cg: CGSettings) -> str:
    epsilon = "auto" if cg.epsilon is None else f"{cg.epsilon:g}"
    parts = [
        f"semibounds {__version__}",
        f"series {series.series_id}",
        f"epsilon {epsilon}",
        f"grid_points {cg.grid_points}",
        f"unimodality_grid {settings.unimodality_grid}",
        f"export_points {settings.export_points}",
        f"converged {str(series.converged).lower()}",
    ]
    parts.extend(f"{k} {v:.10g}" for k, v in series.notes.items())
    return "# " + "; ".join(parts)


def write_series(series: Series, out_dir, header: str) -> Path:
    out_path = Path(out_dir)
    out_path.mkdir(parents=True, exist_ok=True)
    file_path = out_path / f"{series.series_id}.csv"
    with open(file_path, "w", encoding="utf-8", newline="") as f:
        f.write(header + "\n")
        series.table.to_csv(f, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.info(f"Wrote {len(series.table)} rows to {file_path}")
    return file_path
