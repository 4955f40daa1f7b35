"""Learned heuristics for classical planning.

PDDL parsing and grounding, forward search (greedy best-first and
uniform-cost), delete-relaxation heuristics (hadd, FF), feature extraction,
ridge and MLP regressors, instance generators and an evaluation harness.
"""

from .errors import HeurlearnError
from .ground import GroundTask, State, ground, make_task
from .heuristics import LearnedHeuristic, extract_features, ff, ff_value, goal_count, hadd
from .learn import Dataset, TrainConfig, mlp_train, ridge_fit
from .pddl import parse_domain, parse_problem
from .search import Plan, SearchLimits, greedy_best_first, uniform_cost_search, validate_plan

__version__ = "0.1.0"

__all__ = [
    "Dataset", "GroundTask", "HeurlearnError", "LearnedHeuristic", "Plan", "SearchLimits", "State",
    "TrainConfig", "extract_features", "ff", "ff_value", "goal_count", "greedy_best_first", "ground",
    "hadd", "make_task", "mlp_train", "parse_domain", "parse_problem", "ridge_fit",
    "uniform_cost_search", "validate_plan",
]
