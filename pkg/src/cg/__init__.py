"""Column generation for semiparametric bounds."""

from src.cg.columns import TransformedProblem
from src.cg.engine import (
    BoundResult,
    CGSettings,
    IterationRecord,
    initialize_atoms,
    prune_atoms,
    run_cg,
)
from src.cg.envelope import MomentEnvelope, moment_envelope
from src.cg.master import AtomSet, MasterSolution, solve_master, solve_phase_one_master
from src.cg.subproblem import (
    SubproblemPath,
    SubproblemResult,
    reduced_cost_function,
    solve_subproblem,
)

__all__ = [
    "AtomSet",
    "BoundResult",
    "CGSettings",
    "IterationRecord",
    "MasterSolution",
    "MomentEnvelope",
    "SubproblemPath",
    "SubproblemResult",
    "TransformedProblem",
    "initialize_atoms",
    "moment_envelope",
    "prune_atoms",
    "reduced_cost_function",
    "run_cg",
    "solve_master",
    "solve_phase_one_master",
    "solve_subproblem",
]
