"""Parameter grids and model set-ups of the figure series."""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from src.mixtures import LognormalParams, lognormal_params
from src.model import MixtureFamily, ProblemSpec, Sense, standard_policy_problem


def _grid(spec, default: List[float]) -> List[float]:
    if spec is None:
        return default
    if isinstance(spec, dict):
        start, stop, step = float(spec["start"]), float(spec["stop"]), float(spec["step"])
        count = int(round((stop - start) / step)) + 1
        return [start + i * step for i in range(count)]
    return [float(v) for v in spec]


@dataclass(frozen=True)
class LossPolicy:
    """Deductible policy on a bounded loss with known mean and standard deviation."""

    mu: float = 50.0
    sigma: float = 15.0
    b: float = 100.0
    modes: Tuple[float, ...] = (45.0, 50.0)

    def problem(self, d: float, family: Optional[MixtureFamily], sense: Sense) -> ProblemSpec:
        return standard_policy_problem(
            self.mu, self.sigma**2, d, self.b, family=family, sense=sense
        )


@dataclass(frozen=True)
class MarketPolicy:
    """At-the-money call on an asset with lognormal dynamics (spot, rate, volatility)."""

    x0: float = 49.5
    r: float = 0.01
    nu: float = 0.2
    t: float = 1.0

    @property
    def mean(self) -> float:
        return self.x0 * math.exp(self.r * self.t)

    @property
    def sigma(self) -> float:
        return self.mean * math.sqrt(math.expm1(self.nu**2 * self.t))

    @property
    def discount(self) -> float:
        return math.exp(-self.r * self.t)

    @property
    def lognormal(self) -> LognormalParams:
        """Lognormal with the policy's mean and standard deviation."""
        return lognormal_params(self.mean, self.sigma)

    @property
    def lognormal_mode(self) -> float:
        params = self.lognormal
        return math.exp(params.mu_x - params.sigma_x**2)

    def problem(self, family: Optional[MixtureFamily] = None) -> ProblemSpec:
        return standard_policy_problem(
            self.mean, self.sigma**2, self.x0, math.inf, family=family, sense=Sense.UPPER
        )


@dataclass
class FigureSettings:
    n_jobs: int = 1
    deductibles: List[float] = field(default_factory=lambda: [float(d) for d in range(101)])
    alphas: List[float] = field(
        default_factory=lambda: [1.0 + 0.5 * i for i in range(39)]
    )
    etas: List[float] = field(default_factory=lambda: [1.0, 5.0, 10.0, 50.0, 100.0])
    density_etas: List[float] = field(default_factory=lambda: [1.0, 5.0, 10.0, 50.0])
    density_interval: Tuple[float, float] = (20.0, 30.0)
    density_window: Tuple[float, float] = (15.0, 35.0)
    loss: LossPolicy = field(default_factory=LossPolicy)
    market: MarketPolicy = field(default_factory=MarketPolicy)
    uniform_mode: Optional[float] = None
    alpha_bracket: Tuple[float, Optional[float]] = (1.0, None)
    bisection_epsilon: float = 0.05
    export_points: int = 512
    unimodality_grid: int = 4096

    @classmethod
    def from_config(cls, config: dict) -> "FigureSettings":
        """Build settings from the ``figures`` and ``shape`` sections of the YAML config."""
        figures = config.get("figures", {}) or {}
        shape = config.get("shape", {}) or {}
        defaults = cls()
        loss = figures.get("loss", {}) or {}
        market = figures.get("market", {}) or {}
        bracket = figures.get("alpha_bracket") or list(defaults.alpha_bracket)
        return cls(
            n_jobs=int(figures.get("n_jobs", defaults.n_jobs)),
            deductibles=_grid(figures.get("deductibles"), defaults.deductibles),
            alphas=_grid(figures.get("alphas"), defaults.alphas),
            etas=_grid(figures.get("etas"), defaults.etas),
            density_etas=_grid(figures.get("density_etas"), defaults.density_etas),
            density_interval=tuple(figures.get("density_interval", defaults.density_interval)),
            density_window=tuple(figures.get("density_window", defaults.density_window)),
            loss=LossPolicy(
                mu=float(loss.get("mu", defaults.loss.mu)),
                sigma=float(loss.get("sigma", defaults.loss.sigma)),
                b=float(loss.get("b", defaults.loss.b)),
                modes=tuple(float(m) for m in loss.get("modes", defaults.loss.modes)),
            ),
            market=MarketPolicy(
                x0=float(market.get("x0", defaults.market.x0)),
                r=float(market.get("r", defaults.market.r)),
                nu=float(market.get("nu", defaults.market.nu)),
                t=float(market.get("t", defaults.market.t)),
            ),
            uniform_mode=figures.get("uniform_mode"),
            alpha_bracket=(
                float(bracket[0]),
                None if bracket[1] is None else float(bracket[1]),
            ),
            bisection_epsilon=float(
                shape.get("bisection_epsilon", defaults.bisection_epsilon)
            ),
            export_points=int(shape.get("export_points", defaults.export_points)),
            unimodality_grid=int(shape.get("unimodality_grid", defaults.unimodality_grid)),
        )

    @property
    def market_mode(self) -> float:
        """Mode used for the uniform mixtures of the market policy."""
        if self.uniform_mode is not None:
            return float(self.uniform_mode)
        return self.market.lognormal_mode

    @property
    def market_alpha_bracket(self) -> Tuple[float, float]:
        """Alpha bracket for the market policy; the open top defaults to 0.999 sigma."""
        lo, hi = self.alpha_bracket
        return lo, hi if hi is not None else 0.999 * self.market.sigma

    def density_grid(self) -> np.ndarray:
        return np.linspace(*self.density_window, self.export_points)
