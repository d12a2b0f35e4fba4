"""
Column-generation loop for semiparametric bounds.

Each iteration solves the master LP over the current atoms, prices a new atom with the
subproblem and stops once the largest reduced cost is at most epsilon. At that point the
bound is certified: the true optimum exceeds the master value by no more than the final
reduced cost.
"""

import logging
import time
from dataclasses import asdict, dataclass, field
from typing import List, Optional

import numpy as np

from src.cg.columns import TransformedProblem
from src.cg.master import (
    AtomSet,
    MasterSolution,
    solve_master,
    solve_phase_one_master,
)
from src.cg.subproblem import solve_subproblem
from src.model import MixtureFamily, ProblemSpec, Sense, monomial_power
from src.utils.errors import MomentSetInfeasibleError

logger = logging.getLogger(__name__)

PHASE_ONE_TOLERANCE = 1e-9
WEIGHT_TOLERANCE = 1e-12


@dataclass
class CGSettings:
    epsilon: Optional[float] = None
    max_iterations: int = 10000
    grid_points: int = 2048
    refine_candidates: int = 8
    prune_every: int = 50
    phase_one_grid: int = 33
    phase_one_max_iterations: int = 500
    dedup_tolerance: float = 1e-10
    pivot_tolerance: float = 1e-9
    feasibility_tolerance: float = 1e-8
    force_numeric: bool = False

    @classmethod
    def from_config(cls, config: dict) -> "CGSettings":
        """Build settings from the ``cg`` and ``lp`` sections of the YAML config."""
        cg = config.get("cg", {}) or {}
        lp = config.get("lp", {}) or {}
        defaults = cls()
        return cls(
            epsilon=cg.get("epsilon", defaults.epsilon),
            max_iterations=int(cg.get("max_iterations", defaults.max_iterations)),
            grid_points=int(cg.get("grid_points", defaults.grid_points)),
            refine_candidates=int(cg.get("refine_candidates", defaults.refine_candidates)),
            prune_every=int(cg.get("prune_every", defaults.prune_every)),
            phase_one_grid=int(cg.get("phase_one_grid", defaults.phase_one_grid)),
            phase_one_max_iterations=int(
                cg.get("phase_one_max_iterations", defaults.phase_one_max_iterations)
            ),
            dedup_tolerance=float(cg.get("dedup_tolerance", defaults.dedup_tolerance)),
            pivot_tolerance=float(lp.get("pivot_tolerance", defaults.pivot_tolerance)),
            feasibility_tolerance=float(
                lp.get("feasibility_tolerance", defaults.feasibility_tolerance)
            ),
            force_numeric=bool(cg.get("force_numeric", defaults.force_numeric)),
        )

    def with_overrides(self, **overrides) -> "CGSettings":
        values = asdict(self)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return CGSettings(**values)


@dataclass
class IterationRecord:
    iteration: int
    master_value: float  # M*_J in the caller's sense
    reduced_cost: float
    atom: float
    path: str


@dataclass
class BoundResult:
    bound: float
    gap: float
    sense: Sense
    family: MixtureFamily
    atoms: np.ndarray
    weights: np.ndarray
    iterations: int
    trace: List[IterationRecord] = field(default_factory=list)
    converged: bool = True
    stalled: bool = False
    capped: bool = False
    epsilon: float = 0.0
    search_cap: float = 0.0
    elapsed: float = 0.0

    @property
    def paths(self) -> List[str]:
        return [r.path for r in self.trace]

    def to_dict(self) -> dict:
        """JSON-ready summary with atoms in ascending order."""
        order = np.argsort(self.atoms)
        return {
            "bound": float(self.bound),
            "gap": float(self.gap),
            "sense": self.sense.value,
            "family": self.family.to_dict(),
            "iterations": self.iterations,
            "atoms": [float(a) for a in self.atoms[order]],
            "weights": [float(w) for w in self.weights[order]],
            "subproblem_paths": sorted(set(self.paths)),
            "converged": self.converged,
            "stalled": self.stalled,
            "capped": self.capped,
            "epsilon": self.epsilon,
            "search_cap": self.search_cap,
        }


def _seed_atoms(spec: ProblemSpec, problem: TransformedProblem, grid: int) -> List[float]:
    domain = problem.domain
    window = problem.search_window
    seeds = list(np.linspace(window.lower, window.upper, grid))
    for c in spec.constraints:
        if monomial_power(c.g) == 1:
            seeds.extend([c.sigma_lo, 0.5 * (c.sigma_lo + c.sigma_hi), c.sigma_hi])
    if spec.family.anchor is not None:
        seeds.append(spec.family.anchor)
    return [float(x) for x in seeds if domain.contains(x)]


def initialize_atoms(
    spec: ProblemSpec,
    settings: Optional[CGSettings] = None,
    problem: Optional[TransformedProblem] = None,
) -> AtomSet:
    """
    Feasible starting atoms from a seed grid and Phase-I column generation.

    Raises:
        MomentSetInfeasibleError: Phase I converges with a positive violation
    """
    settings = settings or CGSettings()
    if problem is None:
        problem = TransformedProblem.build(spec, settings.grid_points, settings.force_numeric)
    atoms = AtomSet(settings.dedup_tolerance * problem.scale)
    atoms.add_many(_seed_atoms(spec, problem, settings.phase_one_grid), problem)

    violation = np.inf
    for iteration in range(settings.phase_one_max_iterations):
        phase_one = solve_phase_one_master(
            atoms, problem, settings.pivot_tolerance, settings.feasibility_tolerance
        )
        violation = phase_one.violation
        if violation <= PHASE_ONE_TOLERANCE:
            logger.debug(f"Phase I feasible after {iteration} iterations with {len(atoms)} atoms")
            return atoms
        sub = solve_subproblem(phase_one.master, problem, settings.refine_candidates)
        if sub.reduced_cost <= PHASE_ONE_TOLERANCE or not atoms.add(sub.x_star, problem):
            break
    raise MomentSetInfeasibleError(violation)


def _record(trace, iteration, problem, master, sub):
    trace.append(
        IterationRecord(
            iteration=iteration,
            master_value=problem.sign * master.objective,
            reduced_cost=sub.reduced_cost,
            atom=sub.x_star,
            path=sub.path.value,
        )
    )
    logger.debug(
        f"CG iter {iteration}: M = {problem.sign * master.objective:.12g}, "
        f"S = {sub.reduced_cost:.3e}, x* = {sub.x_star:.10g} ({sub.path.value})"
    )


def prune_atoms(atoms: AtomSet, master: MasterSolution) -> int:
    """Drop atoms that carry no weight and are not basic; returns how many were dropped."""
    keep = (master.weights > WEIGHT_TOLERANCE) | master.basic_mask()
    atoms.keep(keep)
    return int((~keep).sum())


def run_cg(spec: ProblemSpec, settings: Optional[CGSettings] = None) -> BoundResult:
    """
    Semiparametric bound of ``spec`` by column generation.

    Non-convergence (iteration cap or a stalled duplicate atom) is reported through the
    result flags; the bound is then a one-sided approximation.
    """
    settings = settings or CGSettings()
    start = time.perf_counter()
    problem = TransformedProblem.build(spec, settings.grid_points, settings.force_numeric)
    epsilon = settings.epsilon if settings.epsilon is not None else spec.effective_epsilon
    atoms = initialize_atoms(spec, settings, problem)

    trace: List[IterationRecord] = []
    converged = stalled = capped = False
    master: Optional[MasterSolution] = None
    gap = np.inf
    iteration = 0
    while iteration < settings.max_iterations:
        iteration += 1
        master = solve_master(
            atoms, problem, settings.pivot_tolerance, settings.feasibility_tolerance
        )
        sub = solve_subproblem(master, problem, settings.refine_candidates)
        _record(trace, iteration, problem, master, sub)
        gap = max(sub.reduced_cost, 0.0)
        capped = capped or sub.capped
        if sub.reduced_cost <= epsilon:
            converged = True
            break

        if iteration % settings.prune_every == 0:
            prune_atoms(atoms, master)
        if not atoms.add(sub.x_star, problem):
            retry = solve_subproblem(
                master, problem, settings.refine_candidates, around=sub.x_star
            )
            if retry.reduced_cost <= epsilon:
                gap = max(retry.reduced_cost, 0.0)
                converged = True
                break
            if not atoms.add(retry.x_star, problem):
                stalled = True
                logger.warning(
                    f"CG stalled at iteration {iteration}: atom {retry.x_star:.10g} is already "
                    f"in the master (reduced cost {retry.reduced_cost:.3e})"
                )
                break

    if not converged and not stalled:
        # Iteration cap: the last priced atom has not been through the master yet
        master = solve_master(
            atoms, problem, settings.pivot_tolerance, settings.feasibility_tolerance
        )
        logger.warning(f"CG hit the iteration cap ({settings.max_iterations}), gap {gap:.3e}")
    if capped:
        logger.warning(
            f"Subproblem growth was capped at x = {problem.search_cap:g}; the support is "
            "effectively truncated"
        )

    support = master.weights > WEIGHT_TOLERANCE
    result = BoundResult(
        bound=problem.sign * master.objective,
        gap=float(gap),
        sense=spec.sense,
        family=spec.family,
        atoms=master.atoms[support],
        weights=master.weights[support],
        iterations=iteration,
        trace=trace,
        converged=converged,
        stalled=stalled,
        capped=capped,
        epsilon=epsilon,
        search_cap=problem.search_cap,
        elapsed=time.perf_counter() - start,
    )
    logger.debug(
        f"{spec.describe()}: bound {result.bound:.12g}, gap {result.gap:.3e}, "
        f"{iteration} iterations, {support.sum()} atoms"
    )
    return result
