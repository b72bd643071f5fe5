"""Beetle antennae search and its swarm variant for box-bounded minimization."""
from .bas import BasConfig, bas_step, run_bas
from .bsas import BsasConfig, CandidateRule, bsas_iteration, run_bsas
from .core import (
    BeetleIncumbent,
    ScheduleState,
    SearchProblem,
    SignConvention,
    StoppingRule,
    antenna_probes,
    clamp_to_bounds,
    denormalize_coords,
    detect_step,
    make_rng,
    normalize_coords,
    sample_unit_direction,
    update_schedule,
)
from .records import IterationTrace, OptimizationError, RunRecord

__version__ = "0.1.0"
