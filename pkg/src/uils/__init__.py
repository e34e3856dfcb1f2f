"""Iterated local search for earliness-tardiness scheduling on single and
unrelated parallel machines."""
from .eval_direct import DirectEvaluator, comp_cost_block, direct_move_cost, prefix_costs
from .eval_piecewise import (PiecewiseEvaluator, block_cost_between, build_g_tables,
                             create_processing_list, eval_fn_at, penalty_fn)
from .eval_timing import TimingEvaluator, build_boundary_fns, eval_concat, optimal_timing
from .ils import IlsParams, UilsResult, construct_initial, perturb, uils
from .io import ParseError, RunRecord, load_instance, parse_instance, report, write_instance
from .model import (FeatureFlags, Instance, InstanceError, Schedule, ScheduleError, classify,
                    job_cost, solution_cost)
from .moves import Move, MoveKind, Neighborhood, NeighborhoodConfig, NeighborhoodType
from .piecewise import PiecewiseFn, Segment
from .search import make_evaluator, rvnd

__version__ = "0.1.0"
