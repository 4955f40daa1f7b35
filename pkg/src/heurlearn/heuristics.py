"""Hand-coded heuristics, feature extraction and learned-model evaluation."""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigurationError, DeadEndError
from .kernels import INF
from .schemas import FEATURE_NAMES, FF, SIMPLE


@dataclass(frozen=True)
class HaddTable:
    cost: np.ndarray
    """Per-atom additive cost; ``inf`` for relaxed-unreachable atoms."""
    supporter: np.ndarray
    """Index of the cheapest achieving action, -1 when none is needed."""


@dataclass(frozen=True)
class RelaxedPlanResult:
    ff_value: float
    op_count: float
    ignored_deletes_total: float
    ignored_deletes_avg: float

    @property
    def dead_end(self):
        return math.isinf(self.ff_value)


_DEAD_END = RelaxedPlanResult(math.inf, math.inf, math.inf, math.inf)


@dataclass(frozen=True)
class FeatureVector:
    schema: str
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != len(FEATURE_NAMES[self.schema]):
            raise ValueError(f"{self.schema} schema expects {len(FEATURE_NAMES[self.schema])} values")

    def as_array(self):
        return np.asarray(self.values, dtype=np.float64)


def goal_count(s, t):
    bits = s.bits
    return float(sum(1 for g in t.goal if not (bits >> g) & 1))


def _hadd_raw(s, t):
    arr = t.relaxed_arrays
    state = s.to_array(t.n_atoms)
    cost, sup = kernels.hadd(
        state, arr.cost, arr.pre_ptr, arr.pre_idx, arr.add_ptr, arr.add_idx, arr.pre_of_ptr, arr.pre_of_idx
    )
    return state, cost, sup


def hadd(s, t):
    """Additive-heuristic cost table over all atoms for state ``s``."""
    _, cost, sup = _hadd_raw(s, t)
    costs = cost.astype(np.float64)
    costs[cost >= INF] = np.inf
    return HaddTable(costs, sup)


def hadd_value(s, t):
    """Sum of additive costs of the goal atoms (the h_add estimate)."""
    table = hadd(s, t)
    return float(table.cost[list(t.goal)].sum()) if t.goal else 0.0


def ff(s, t):
    """FF relaxed plan extracted through hadd best supporters."""
    state, cost, sup = _hadd_raw(s, t)
    arr = t.relaxed_arrays
    value, ops, dels = kernels.relaxed_plan(
        state, arr.goal, cost, sup, arr.cost, arr.pre_ptr, arr.pre_idx, arr.del_count
    )
    if value < 0:
        return _DEAD_END
    return RelaxedPlanResult(
        float(value), float(ops), float(dels), float(dels) / ops if ops else 0.0
    )


def ff_value(s, t):
    return ff(s, t).ff_value


def nearest_rank_quartiles(values):
    """(Q1, Q2, Q3) with Q_k the ceil(k*n/4)-th smallest value (1-based)."""
    v = sorted(values)
    n = len(v)
    if n == 0:
        return (0.0, 0.0, 0.0)
    return tuple(float(v[max(1, math.ceil(k * n / 4)) - 1]) for k in (1, 2, 3))


_task_features = weakref.WeakKeyDictionary()


def task_features(t):
    """Per-task constants of the simple schema: variables, quartiles, goal size."""
    cached = _task_features.get(t)
    if cached is None:
        sizes = t.domain_sizes
        cached = (float(len(sizes)),) + nearest_rank_quartiles(sizes) + (float(len(t.goal)),)
        _task_features[t] = cached
    return cached


def extract_features(s, t, schema):
    if schema == SIMPLE:
        return FeatureVector(SIMPLE, task_features(t) + (goal_count(s, t),))
    if schema == FF:
        r = ff(s, t)
        if r.dead_end:
            raise DeadEndError("featurize dead end: FF reports an unreachable goal")
        return FeatureVector(
            FF, (r.ff_value, goal_count(s, t), r.op_count, r.ignored_deletes_total, r.ignored_deletes_avg)
        )
    raise ConfigurationError(f"unknown feature schema {schema!r}")


ROLE_SCHEMA = {"standalone": SIMPLE, "ff-correction": FF}


class LearnedHeuristic:
    """A trained model used as a state evaluator.

    Model/schema compatibility is checked once here. Under the ff schema a
    state FF recognises as a dead end evaluates to infinity; otherwise the
    prediction is clamped at zero.
    """

    def __init__(self, model, role=None):
        from .learn import check_model

        check_model(model)
        if role is not None:
            expected = ROLE_SCHEMA.get(role)
            if expected is None:
                raise ConfigurationError(f"unknown model role {role!r}")
            if model.schema != expected:
                raise ConfigurationError(
                    f"{role} heuristic needs a model trained on the {expected} schema, got {model.schema}"
                )
        self.model = model
        self.schema = model.schema

    def __call__(self, s, t):
        if self.schema == FF:
            r = ff(s, t)
            if r.dead_end:
                return math.inf
            x = (r.ff_value, goal_count(s, t), r.op_count, r.ignored_deletes_total, r.ignored_deletes_avg)
        else:
            x = task_features(t) + (goal_count(s, t),)
        return max(0.0, self.model.predict(np.asarray(x, dtype=np.float64)))


def learned_heuristic(s, t, m):
    return LearnedHeuristic(m)(s, t)


def blind(s, t):
    return 0.0


BUILTIN = {
    "goal-count": goal_count,
    "ff": ff_value,
    "add": hadd_value,
}
