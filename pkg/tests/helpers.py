"""Shared fixtures-as-functions and independent oracles for the test suite."""

import itertools
import os
import random

import networkx as nx

from heurlearn.ground import State, ground, make_task
from heurlearn.pddl import parse_domain, parse_problem

CORPUS = os.path.join(os.path.dirname(__file__), "corpus")


def corpus_path(name):
    return os.path.join(CORPUS, name)


def corpus_text(name):
    with open(corpus_path(name), encoding="utf-8") as fh:
        return fh.read()


def chain_task():
    dom = parse_domain(corpus_text("chain_domain.pddl"))
    return ground(dom, parse_problem(corpus_text("chain_problem.pddl"), dom))


def drive_problem(locations=("a", "b"), roads=(("a", "b"), ("b", "a")), trucks=("t1",), at=None, goal=None):
    """Problem text for the single-action drive domain."""
    at = at or {t: locations[0] for t in trucks}
    goal = goal if goal is not None else {trucks[0]: locations[-1]}
    init = [f"(at {t} {l})" for t, l in at.items()] + [f"(road {x} {y})" for x, y in roads]
    goals = " ".join(f"(at {t} {l})" for t, l in goal.items())
    return (
        f"(define (problem p) (:domain drive)\n"
        f"  (:objects {' '.join(trucks)} - vehicle {' '.join(locations)} - location)\n"
        f"  (:init {' '.join(init)})\n"
        f"  (:goal (and {goals})))\n"
    )


def drive_task(**kw):
    dom = parse_domain(corpus_text("drive_domain.pddl"))
    return ground(dom, parse_problem(drive_problem(**kw), dom))


def random_task(seed, n_atoms=8, n_actions=10, max_cost=3, goal_size=(1, 3), walk_goal=False):
    """Random STRIPS task over nullary atoms p0..p{n-1}.

    With ``walk_goal`` the goal is a subset of a randomly walked-to state.
    """
    rng = random.Random(seed)
    atoms = [f"p{i}" for i in range(n_atoms)]
    actions = []
    for k in range(n_actions):
        pre = rng.sample(atoms, rng.randint(0, 2))
        add = rng.sample(atoms, rng.randint(1, 2))
        dels = [a for a in rng.sample(atoms, rng.randint(0, 2)) if a not in add]
        actions.append((f"o{k}", pre, add, dels, rng.randint(1, max_cost)))
    init = rng.sample(atoms, rng.randint(1, 3))
    if not walk_goal:
        return make_task(atoms, actions, init, rng.sample(atoms, rng.randint(*goal_size)))
    # goal drawn from a state at the end of a random walk, so it is reachable
    state = set(init)
    for _ in range(rng.randint(1, 6)):
        app = [a for a in actions if set(a[1]) <= state]
        if not app:
            break
        _, _, add, dels, _ = rng.choice(app)
        state = (state - set(dels)) | set(add)
    pool = sorted(state)
    goal = rng.sample(pool, min(len(pool), rng.randint(*goal_size)))
    return make_task(atoms, actions, init, goal)


def reachable_states(task, limit=10_000):
    """Explicit forward enumeration of reachable states (independent of search)."""
    seen = {task.init.bits}
    frontier = [task.init.bits]
    while frontier:
        s = frontier.pop()
        for a in task.actions:
            if all((s >> p) & 1 for p in a.pre):
                succ = s
                for p in a.add:
                    succ |= 1 << p
                for p in a.del_:
                    succ &= ~(1 << p)
                if succ not in seen:
                    seen.add(succ)
                    frontier.append(succ)
                    if len(seen) > limit:
                        raise ValueError("state space too large")
    return [State(b) for b in sorted(seen)]


def dijkstra_cost(task):
    """Optimal plan cost via networkx Dijkstra over the explicit transition graph."""
    g = nx.DiGraph()
    states = reachable_states(task)
    for s in states:
        g.add_node(s.bits)
        for a in task.actions:
            if all(p in s for p in a.pre):
                bits = s.bits
                for p in a.add:
                    bits |= 1 << p
                for p in a.del_:
                    bits &= ~(1 << p)
                old = g.get_edge_data(s.bits, bits)
                if old is None or a.cost < old["weight"]:
                    g.add_edge(s.bits, bits, weight=a.cost)
    goals = [s.bits for s in states if all(p in s for p in task.goal)]
    if not goals:
        return None
    dist = nx.single_source_dijkstra_path_length(g, task.init.bits)
    return min(dist[b] for b in goals if b in dist)


def relaxed_closure(state_atoms, actions):
    facts = set(state_atoms)
    changed = True
    while changed:
        changed = False
        for a in actions:
            if set(a.pre) <= facts and not set(a.add) <= facts:
                facts |= set(a.add)
                changed = True
    return facts


def h_plus(state, task):
    """Optimal delete-relaxed plan cost by enumerating subsets of reachable actions."""
    atoms = set(state.atoms())
    reach = relaxed_closure(atoms, task.actions)
    useful = [a for a in task.actions if set(a.pre) <= reach]
    goal = set(task.goal)
    best = float("inf")
    for r in range(len(useful) + 1):
        for subset in itertools.combinations(useful, r):
            c = sum(a.cost for a in subset)
            if c < best and goal <= relaxed_closure(atoms, subset):
                best = c
    return best
