"""Seeded generators for small Transport, Parking and random-walk instances."""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass

from .errors import GenerationError
from .ground import State, ground
from .pddl import Atom, ProblemAst, format_domain, format_problem, parse_domain
from .search import SOLVED, SearchLimits, uniform_cost_search

TRANSPORT_DOMAIN = """\
(define (domain transport)
  (:requirements :strips :typing)
  (:types location locatable size - object
          vehicle package - locatable)
  (:predicates
    (road ?l1 ?l2 - location)
    (at ?x - locatable ?l - location)
    (in ?p - package ?v - vehicle)
    (capacity ?v - vehicle ?s - size)
    (capacity-predecessor ?s1 ?s2 - size))
  (:action drive
    :parameters (?v - vehicle ?l1 ?l2 - location)
    :precondition (and (at ?v ?l1) (road ?l1 ?l2))
    :effect (and (not (at ?v ?l1)) (at ?v ?l2)))
  (:action pick-up
    :parameters (?v - vehicle ?l - location ?p - package ?s1 ?s2 - size)
    :precondition (and (at ?v ?l) (at ?p ?l) (capacity-predecessor ?s1 ?s2) (capacity ?v ?s2))
    :effect (and (not (at ?p ?l)) (in ?p ?v) (capacity ?v ?s1) (not (capacity ?v ?s2))))
  (:action drop
    :parameters (?v - vehicle ?l - location ?p - package ?s1 ?s2 - size)
    :precondition (and (at ?v ?l) (in ?p ?v) (capacity-predecessor ?s1 ?s2) (capacity ?v ?s1))
    :effect (and (not (in ?p ?v)) (at ?p ?l) (capacity ?v ?s2) (not (capacity ?v ?s1))))
)
"""

# ``different`` stands in for inequality, which the supported fragment lacks;
# it stops a car from being moved behind itself.
PARKING_DOMAIN = """\
(define (domain parking)
  (:requirements :strips :typing :action-costs)
  (:types car curb)
  (:predicates
    (at-curb ?car - car)
    (at-curb-num ?car - car ?curb - curb)
    (behind-car ?car ?front-car - car)
    (car-clear ?car - car)
    (curb-clear ?curb - curb)
    (different ?c1 ?c2 - car))
  (:functions (total-cost) - number)
  (:action move-curb-to-curb
    :parameters (?car - car ?curbsrc ?curbdest - curb)
    :precondition (and (car-clear ?car) (curb-clear ?curbdest) (at-curb-num ?car ?curbsrc))
    :effect (and (not (curb-clear ?curbdest)) (curb-clear ?curbsrc)
                 (at-curb-num ?car ?curbdest) (not (at-curb-num ?car ?curbsrc))
                 (increase (total-cost) 1)))
  (:action move-curb-to-car
    :parameters (?car - car ?curbsrc - curb ?cardest - car)
    :precondition (and (car-clear ?car) (car-clear ?cardest) (at-curb-num ?car ?curbsrc)
                       (at-curb ?cardest) (different ?car ?cardest))
    :effect (and (not (car-clear ?cardest)) (curb-clear ?curbsrc) (behind-car ?car ?cardest)
                 (not (at-curb-num ?car ?curbsrc)) (not (at-curb ?car))
                 (increase (total-cost) 1)))
  (:action move-car-to-curb
    :parameters (?car - car ?carsrc - car ?curbdest - curb)
    :precondition (and (car-clear ?car) (curb-clear ?curbdest) (behind-car ?car ?carsrc))
    :effect (and (not (curb-clear ?curbdest)) (car-clear ?carsrc) (at-curb-num ?car ?curbdest)
                 (not (behind-car ?car ?carsrc)) (at-curb ?car)
                 (increase (total-cost) 1)))
  (:action move-car-to-car
    :parameters (?car - car ?carsrc - car ?cardest - car)
    :precondition (and (car-clear ?car) (car-clear ?cardest) (behind-car ?car ?carsrc)
                       (at-curb ?cardest) (different ?car ?cardest))
    :effect (and (not (car-clear ?cardest)) (car-clear ?carsrc) (behind-car ?car ?cardest)
                 (not (behind-car ?car ?carsrc))
                 (increase (total-cost) 1)))
)
"""

BLOCKS_DOMAIN = """\
(define (domain blocks)
  (:requirements :strips :typing)
  (:types block)
  (:predicates
    (on ?x ?y - block)
    (ontable ?x - block)
    (clear ?x - block)
    (handempty)
    (holding ?x - block))
  (:action pick-up
    :parameters (?x - block)
    :precondition (and (clear ?x) (ontable ?x) (handempty))
    :effect (and (not (ontable ?x)) (not (clear ?x)) (not (handempty)) (holding ?x)))
  (:action put-down
    :parameters (?x - block)
    :precondition (holding ?x)
    :effect (and (not (holding ?x)) (clear ?x) (handempty) (ontable ?x)))
  (:action stack
    :parameters (?x ?y - block)
    :precondition (and (holding ?x) (clear ?y))
    :effect (and (not (holding ?x)) (not (clear ?y)) (clear ?x) (handempty) (on ?x ?y)))
  (:action unstack
    :parameters (?x ?y - block)
    :precondition (and (on ?x ?y) (clear ?x) (handempty))
    :effect (and (holding ?x) (clear ?y) (not (clear ?x)) (not (handempty)) (not (on ?x ?y))))
)
"""

# generous budget for the solvability check at generation time
VERIFY_LIMITS = SearchLimits(wall_clock_seconds=30.0, max_generated=2_000_000)


def transport_domain():
    return parse_domain(TRANSPORT_DOMAIN)


def parking_domain():
    return parse_domain(PARKING_DOMAIN)


def blocks_domain():
    return parse_domain(BLOCKS_DOMAIN)


def _atom(pred, *args):
    return Atom(pred, tuple(args))


@dataclass(frozen=True)
class TransportConfig:
    locations: int = 3
    edges: int = 2
    trucks: int = 1
    packages: int = 1
    capacity: int = 1
    seed: int = 0

    def validate(self):
        if self.locations < 2:
            raise GenerationError("transport needs at least 2 locations")
        if self.trucks < 1 or self.packages < 1 or self.capacity < 1:
            raise GenerationError("trucks, packages and capacity must be positive")
        max_edges = self.locations * (self.locations - 1) // 2
        if not self.locations - 1 <= self.edges <= max_edges:
            raise GenerationError(
                f"edges must lie in [{self.locations - 1}, {max_edges}] for a connected simple graph"
            )


def _road_graph(n, edges, rng):
    """Random spanning tree plus extra distinct edges; returns sorted undirected pairs."""
    order = list(range(n))
    rng.shuffle(order)
    pairs = set()
    for i in range(1, n):
        u, v = order[i], order[rng.randrange(i)]
        pairs.add((min(u, v), max(u, v)))
    rest = sorted({(u, v) for u in range(n) for v in range(u + 1, n)} - pairs)
    rng.shuffle(rest)
    pairs.update(rest[: edges - len(pairs)])
    return sorted(pairs)


def gen_transport(cfg):
    """Transport instance on a connected random road graph with unit-cost actions."""
    cfg.validate()
    rng = random.Random(cfg.seed)
    locs = [f"l{i + 1}" for i in range(cfg.locations)]
    trucks = [f"t{i + 1}" for i in range(cfg.trucks)]
    pkgs = [f"p{i + 1}" for i in range(cfg.packages)]
    sizes = [f"s{i}" for i in range(cfg.capacity + 1)]
    init = []
    for u, v in _road_graph(cfg.locations, cfg.edges, rng):
        init += [_atom("road", locs[u], locs[v]), _atom("road", locs[v], locs[u])]
    for s1, s2 in zip(sizes, sizes[1:]):
        init.append(_atom("capacity-predecessor", s1, s2))
    for t in trucks:
        init.append(_atom("at", t, rng.choice(locs)))
        init.append(_atom("capacity", t, sizes[-1]))
    goal = []
    for p in pkgs:
        origin = rng.choice(locs)
        dest = rng.choice([l for l in locs if l != origin])
        init.append(_atom("at", p, origin))
        goal.append(_atom("at", p, dest))
    objects = (
        [(l, "location") for l in locs]
        + [(t, "vehicle") for t in trucks]
        + [(p, "package") for p in pkgs]
        + [(s, "size") for s in sizes]
    )
    name = f"transport-l{cfg.locations}-t{cfg.trucks}-p{cfg.packages}-c{cfg.capacity}-s{cfg.seed}"
    return transport_domain(), ProblemAst(name, "transport", tuple(objects), tuple(init), tuple(goal))


@dataclass(frozen=True)
class ParkingConfig:
    curbs: int = 2
    cars: int = 1
    seed: int = 0
    max_retries: int = 20

    def validate(self):
        if self.curbs < 2:
            raise GenerationError("parking needs at least 2 curbs")
        if not 1 <= self.cars <= 2 * self.curbs - 2:
            raise GenerationError(f"cars must lie in [1, {2 * self.curbs - 2}] for {self.curbs} curbs")


def _random_parking(cars, curbs, rng):
    """Place cars one at a time on a free curb or behind a car with nobody behind it."""
    front = {}
    back = {}
    for car in rng.sample(cars, len(cars)):
        slots = [("curb", c) for c in curbs if c not in front]
        slots += [("behind", c) for c in curbs if c in front and c not in back]
        kind, curb = rng.choice(slots)
        (front if kind == "curb" else back)[curb] = car
    return front, back


def _parking_atoms(front, back, curbs):
    atoms = []
    for curb in curbs:
        if curb in front:
            atoms += [_atom("at-curb", front[curb]), _atom("at-curb-num", front[curb], curb)]
            if curb in back:
                atoms += [_atom("behind-car", back[curb], front[curb]), _atom("car-clear", back[curb])]
            else:
                atoms.append(_atom("car-clear", front[curb]))
        else:
            atoms.append(_atom("curb-clear", curb))
    return atoms


def gen_parking(cfg):
    """Parking instance with random start and goal layouts, verified solvable by UCS."""
    cfg.validate()
    dom = parking_domain()
    cars = [f"car{i}" for i in range(cfg.cars)]
    curbs = [f"curb{i}" for i in range(cfg.curbs)]
    objects = tuple([(c, "car") for c in cars] + [(c, "curb") for c in curbs])
    different = [_atom("different", a, b) for a in cars for b in cars if a != b]
    for attempt in range(cfg.max_retries):
        rng = random.Random(f"parking-{cfg.seed}-{attempt}")
        start = _random_parking(cars, curbs, rng)
        end = _random_parking(cars, curbs, rng)
        if start == end:
            continue
        init = tuple(_parking_atoms(*start, curbs) + different)
        goal = []
        for curb, car in sorted(end[0].items()):
            goal.append(_atom("at-curb-num", car, curb))
        for curb, car in sorted(end[1].items()):
            goal.append(_atom("behind-car", car, end[0][curb]))
        name = f"parking-c{cfg.curbs}-n{cfg.cars}-s{cfg.seed}"
        prob = ProblemAst(name, "parking", objects, init, tuple(goal), total_cost_init=0, minimize_total_cost=True)
        plan, stats = uniform_cost_search(ground(dom, prob), VERIFY_LIMITS)
        if stats.result_kind == SOLVED:
            return dom, prob
    raise GenerationError(
        f"no solvable parking instance after {cfg.max_retries} attempts; try fewer cars"
    )


def blocks_demo(n_blocks=4):
    """A solved-state demonstration problem for random-walk generation."""
    blocks = [f"b{i + 1}" for i in range(n_blocks)]
    init = [_atom("handempty"), _atom("ontable", blocks[0]), _atom("clear", blocks[-1])]
    for upper, lower in zip(blocks[1:], blocks):
        init.append(_atom("on", upper, lower))
    goal = [_atom("on", u, l) for u, l in zip(blocks[1:], blocks)]
    prob = ProblemAst(f"blocks-demo-{n_blocks}", "blocks", tuple((b, "block") for b in blocks), tuple(init), tuple(goal))
    return blocks_domain(), prob


@dataclass(frozen=True)
class WalkConfig:
    walk_length: int = 5
    seed: int = 0
    max_retries: int = 10


def random_walk_problem(t, goal_state, cfg):
    """New problem whose initial state ends a random walk from ``goal_state``."""
    if goal_state.bits & t.goal_mask != t.goal_mask:
        raise GenerationError("walk must start from a goal state")
    if cfg.walk_length < 0:
        raise GenerationError("walk_length must be nonnegative")
    if cfg.walk_length > 0 and not any(goal_state.bits & a.pre_mask == a.pre_mask for a in t.actions):
        raise GenerationError("no applicable action in the goal state")
    for attempt in range(cfg.max_retries):
        rng = random.Random(f"walk-{cfg.seed}-{attempt}")
        bits = goal_state.bits
        for _ in range(cfg.walk_length):
            options = [a for a in t.actions if bits & a.pre_mask == a.pre_mask]
            if not options:
                break
            a = rng.choice(options)
            bits = (bits | a.add_mask) & ~a.del_mask
        end = State(bits)
        _, stats = uniform_cost_search(t.with_init(end), VERIFY_LIMITS)
        if stats.result_kind == SOLVED:
            init = tuple(t.atoms[i] for i in end.atoms())
            goal = tuple(t.atoms[i] for i in t.goal)
            name = f"{t.name}-walk{cfg.walk_length}-s{cfg.seed}"
            return ProblemAst(name, t.domain_name, t.objects, init, goal)
    raise GenerationError(f"random walk produced no solvable instance after {cfg.max_retries} attempts")


def config_dict(cfg):
    return asdict(cfg)


def emit(domain, problem):
    """PDDL text for a generated (domain, problem) pair."""
    return format_domain(domain), format_problem(problem)
