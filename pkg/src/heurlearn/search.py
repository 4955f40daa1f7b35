"""Forward state-space search with node accounting and resource limits."""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass

from .errors import InvalidPlanError, PddlSyntaxError
from .ground import State, is_goal
from .pddl import read_sexpr, SList

SOLVED = "solved"
UNSOLVABLE = "exhausted_unsolvable"
TIMEOUT = "timeout"
NODE_LIMIT = "node_limit"

# wall clock is consulted on the 1st, 1025th, 2049th... expansion
CHECK_EVERY = 1024


@dataclass(frozen=True)
class SearchLimits:
    wall_clock_seconds: float | None = None
    max_generated: int | None = None

    def __post_init__(self):
        if self.wall_clock_seconds is not None and self.wall_clock_seconds <= 0:
            raise ValueError("wall_clock_seconds must be positive")
        if self.max_generated is not None and self.max_generated < 1:
            raise ValueError("max_generated must be positive")


@dataclass
class SearchStats:
    generated: int = 0
    expanded: int = 0
    evaluated: int = 0
    wall_time: float = 0.0
    result_kind: str = UNSOLVABLE

    def as_dict(self):
        return {
            "result_kind": self.result_kind,
            "generated": self.generated,
            "expanded": self.expanded,
            "evaluated": self.evaluated,
            "wall_time": self.wall_time,
        }


@dataclass(frozen=True)
class Plan:
    actions: tuple = ()

    @property
    def cost(self):
        return sum(a.cost for a in self.actions)

    def __len__(self):
        return len(self.actions)


def _extract(parents, bits, actions):
    steps = []
    while True:
        parent, ai = parents[bits]
        if parent is None:
            break
        steps.append(actions[ai])
        bits = parent
    return Plan(tuple(reversed(steps)))


class _Budget:
    def __init__(self, limits, start_time):
        self.start = time.perf_counter() if start_time is None else start_time
        self.deadline = None
        self.max_generated = None
        if limits is not None:
            if limits.wall_clock_seconds is not None:
                self.deadline = self.start + limits.wall_clock_seconds
            self.max_generated = limits.max_generated

    def timed_out(self, expanded):
        return (
            self.deadline is not None
            and (expanded - 1) % CHECK_EVERY == 0
            and time.perf_counter() >= self.deadline
        )

    def finish(self, stats, kind):
        stats.result_kind = kind
        stats.wall_time = time.perf_counter() - self.start
        return stats


def uniform_cost_search(t, lim=None, start_time=None, trace=None):
    """Optimal search: lowest g first, FIFO among equal g.

    Returns ``(plan or None, SearchStats)``. ``start_time`` (a
    ``time.perf_counter`` value) lets the time limit cover work done before
    the search, such as grounding. When ``trace`` is a list, the bitsets of
    expanded states are appended to it in order.
    """
    budget = _Budget(lim, start_time)
    stats = SearchStats()
    if t.unsolvable:
        return None, budget.finish(stats, UNSOLVABLE)
    actions = t.actions
    goal_mask = t.goal_mask
    init = t.init.bits
    best_g = {init: 0}
    parents = {init: (None, -1)}
    closed = set()
    counter = 0
    heap = [(0, counter, init)]
    stats.generated = stats.evaluated = 1
    max_gen = budget.max_generated
    while heap:
        g, _, bits = heapq.heappop(heap)
        if bits in closed or g > best_g[bits]:
            continue
        closed.add(bits)
        stats.expanded += 1
        if trace is not None:
            trace.append(bits)
        if bits & goal_mask == goal_mask:
            return _extract(parents, bits, actions), budget.finish(stats, SOLVED)
        if budget.timed_out(stats.expanded):
            return None, budget.finish(stats, TIMEOUT)
        for ai, a in enumerate(actions):
            if bits & a.pre_mask != a.pre_mask:
                continue
            if max_gen is not None and stats.generated >= max_gen:
                return None, budget.finish(stats, NODE_LIMIT)
            stats.generated += 1
            succ = (bits | a.add_mask) & ~a.del_mask
            ng = g + a.cost
            old = best_g.get(succ)
            if old is None or ng < old:
                if old is None:
                    stats.evaluated += 1
                best_g[succ] = ng
                parents[succ] = (bits, ai)
                counter += 1
                heapq.heappush(heap, (ng, counter, succ))
    return None, budget.finish(stats, UNSOLVABLE)


def greedy_best_first(t, h, lim=None, start_time=None, trace=None):
    """Eager greedy best-first search on ``h(state, task)``.

    Lowest h first, FIFO among ties. Each state is evaluated once, when
    first generated; states with infinite h are counted but never queued.
    """
    budget = _Budget(lim, start_time)
    stats = SearchStats()
    if t.unsolvable:
        return None, budget.finish(stats, UNSOLVABLE)
    actions = t.actions
    goal_mask = t.goal_mask
    init = t.init.bits
    parents = {init: (None, -1)}
    stats.generated = 1
    h0 = h(t.init, t)
    stats.evaluated = 1
    heap = []
    counter = 0
    if not math.isinf(h0):
        heap.append((h0, counter, init))
    max_gen = budget.max_generated
    while heap:
        _, _, bits = heapq.heappop(heap)
        stats.expanded += 1
        if trace is not None:
            trace.append(bits)
        if bits & goal_mask == goal_mask:
            return _extract(parents, bits, actions), budget.finish(stats, SOLVED)
        if budget.timed_out(stats.expanded):
            return None, budget.finish(stats, TIMEOUT)
        for ai, a in enumerate(actions):
            if bits & a.pre_mask != a.pre_mask:
                continue
            if max_gen is not None and stats.generated >= max_gen:
                return None, budget.finish(stats, NODE_LIMIT)
            stats.generated += 1
            succ = (bits | a.add_mask) & ~a.del_mask
            if succ in parents:
                continue
            parents[succ] = (bits, ai)
            hv = h(State(succ), t)
            stats.evaluated += 1
            if math.isinf(hv):
                continue
            counter += 1
            heapq.heappush(heap, (hv, counter, succ))
    return None, budget.finish(stats, UNSOLVABLE)


def trace_states(t, p):
    """States visited by executing ``p`` from the initial state, init included."""
    states = [t.init]
    s = t.init
    for i, a in enumerate(p.actions):
        if s.bits & a.pre_mask != a.pre_mask:
            missing = [t.atom_name(q) for q in a.pre if q not in s]
            raise InvalidPlanError(i, f"{a.label} not applicable; missing {', '.join(missing)}")
        s = State((s.bits | a.add_mask) & ~a.del_mask)
        states.append(s)
    return states


def validate_plan(t, p):
    try:
        states = trace_states(t, p)
    except InvalidPlanError:
        return False
    return is_goal(states[-1], t)


def parse_plan(text, t):
    """Read plan text (one ``(name args...)`` per line, ``;`` comments) against ``t``."""
    lookup = {(a.name, a.args): a for a in t.actions}
    steps = []
    body = "(" + text + "\n)"
    try:
        root = read_sexpr(body)
    except PddlSyntaxError as exc:
        raise InvalidPlanError(0, f"malformed plan text: {exc}") from None
    for i, item in enumerate(root.items):
        if not isinstance(item, SList) or not item.items:
            raise InvalidPlanError(i, "expected (action args...)")
        words = tuple(getattr(x, "text", None) for x in item.items)
        if None in words:
            raise InvalidPlanError(i, "nested list in plan step")
        a = lookup.get((words[0], words[1:]))
        if a is None:
            raise InvalidPlanError(i, f"unknown action ({' '.join(words)})")
        steps.append(a)
    return Plan(tuple(steps))
