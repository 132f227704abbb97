"""spikesparse: sparse recovery with spiking-network solvers.

Four solvers for the minimum-l1 reconstruction of a signal over a
column-normalized dictionary, sharing one network architecture
(feedforward drive, lateral Gram feedback):

* linearized Bregman iteration (analog broadcasts),
* Bregman coordinate descent (one coordinate per step),
* an integrate-and-fire iteration whose nodes broadcast ternary spikes
  and whose solution is the scaled running spike average,
* an event-driven runner that reproduces the continuous-time spiking
  dynamics exactly by jumping between threshold crossings.

Plus noise models, convergence-rate diagnostics, an exhaustive
small-instance oracle, scripted experiments, and a CLI
(``spikesparse --help``).
"""

from . import io
from .diagnostics import (ComparisonReport, TraceRecord, compare, comm_cost, energy,
                          energy_from_coefficients, fit_loglog_slope, l0_count, residuals)
from .errors import (DimensionMismatch, Infeasible, InsufficientData, InvalidDimensions,
                     MalformedFile, NonFinite, SpikeSparseError, TooLarge, ZeroColumn,
                     ZeroReference, ZeroSignal)
from .estimators import BcdSolver, HdaSolver, HoppingSolver, LbiSolver
from .experiments import ExperimentConfig, PhaseCell, PhaseGrid, derive_seed, run_fig2, run_fig3, run_phase
from .hopping import HoppingState, SpikeEvent, hopping_run
from .noise import (NoiseModel, corrupt, cumulative_noise_norm, cumulative_noise_norm_curve,
                    fit_residual_scale, make_noise_model, static_noise_bound)
from .nonlinearity import shrink, threshold
from .oracle import KktReport, OracleSolution, oracle_basis_pursuit, verify_lasso_kkt
from .problems import (Dictionary, GroundTruth, ProblemInstance, as_dictionary, drive,
                       generate_instance, normalize_columns)
from .solvers import (BcdState, HdaState, LbiState, RunResult, SolverConfig, bcd_step,
                      hda_step, lbi_step, run, select_index, zero_state)

__version__ = "0.1.0"

__all__ = [
    "BcdSolver", "BcdState", "ComparisonReport", "Dictionary", "DimensionMismatch",
    "ExperimentConfig", "GroundTruth", "HdaSolver", "HdaState", "HoppingSolver",
    "HoppingState", "Infeasible", "InsufficientData", "InvalidDimensions", "KktReport",
    "LbiSolver", "LbiState", "MalformedFile", "NoiseModel", "NonFinite", "OracleSolution",
    "PhaseCell", "PhaseGrid", "ProblemInstance", "RunResult", "SolverConfig", "SpikeEvent",
    "SpikeSparseError", "TooLarge", "TraceRecord", "ZeroColumn", "ZeroReference",
    "ZeroSignal", "as_dictionary", "bcd_step", "comm_cost", "compare", "corrupt",
    "cumulative_noise_norm", "cumulative_noise_norm_curve", "derive_seed", "drive",
    "energy", "energy_from_coefficients", "fit_loglog_slope", "fit_residual_scale",
    "generate_instance", "hda_step", "hopping_run", "l0_count", "lbi_step",
    "make_noise_model", "normalize_columns", "oracle_basis_pursuit", "residuals", "run",
    "run_fig2", "run_fig3", "run_phase", "select_index", "shrink", "static_noise_bound",
    "threshold", "verify_lasso_kkt", "zero_state",
]
