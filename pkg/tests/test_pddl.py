import pytest
from hypothesis import given, settings, strategies as st

from heurlearn import datagen
from heurlearn.errors import (
    ArityError,
    PddlError,
    PddlSyntaxError,
    UndeclaredError,
    UnknownTypeError,
    UnsupportedFeatureError,
)
from heurlearn.ground import GroundAction
from heurlearn.pddl import Atom, format_domain, format_problem, parse_domain, parse_problem, print_plan
from heurlearn.search import Plan, parse_plan

from helpers import chain_task, corpus_text, drive_problem, drive_task

DRIVE = corpus_text("drive_domain.pddl")

CORPUS_DOMAINS = [
    DRIVE,
    corpus_text("chain_domain.pddl"),
    datagen.TRANSPORT_DOMAIN,
    datagen.PARKING_DOMAIN,
    datagen.BLOCKS_DOMAIN,
]


def test_drive_schema():
    dom = parse_domain(DRIVE)
    (drive,) = dom.actions
    assert drive.name == "drive"
    assert [p for p, _ in drive.params] == ["?v", "?a", "?b"]
    assert [t for _, t in drive.params] == ["vehicle", "location", "location"]
    assert set(drive.pre) == {Atom("at", ("?v", "?a")), Atom("road", ("?a", "?b"))}
    assert drive.add == (Atom("at", ("?v", "?b")),)
    assert drive.del_ == (Atom("at", ("?v", "?a")),)
    assert drive.cost == 1
    assert not dom.uses_action_costs


def test_zero_actions():
    dom = parse_domain("(define (domain d) (:predicates (p)))")
    assert dom.actions == ()
    assert [p.name for p in dom.predicates] == ["p"]


def test_negative_precondition_rejected():
    text = DRIVE.replace("road(?a ?b)\n", "road(?a ?b)\n    (not at(?v ?a))\n")
    with pytest.raises(UnsupportedFeatureError, match="negative preconditions unsupported"):
        parse_domain(text)


@pytest.mark.parametrize(
    "text, exc",
    [
        ("(define (domain d) (:requirements :adl) (:predicates (p)))", UnsupportedFeatureError),
        ("(define (domain d) (:predicates (p ?x - thing)))", UnknownTypeError),
        (
            "(define (domain d) (:predicates (p ?x)) (:action a :parameters (?x) :precondition (p) :effect (p ?x)))",
            ArityError,
        ),
        ("(define (domain d) (:predicates (p))", PddlSyntaxError),
        ("(define (domain d) (:predicates (p)) (:action a :parameters () :precondition (q) :effect (p)))",
         UndeclaredError),
        ("(define (domain d) (:predicates (p ?x - (either a b))))", UnsupportedFeatureError),
        ("(define (domain d) (:predicates (p)) (:action a :parameters () :precondition (= p p) :effect (p)))",
         UnsupportedFeatureError),
        ("(define (domain d) (:predicates (p)) (:action a :parameters () :effect (and (p) (not (p)))))",
         PddlError),
    ],
)
def test_domain_errors(text, exc):
    with pytest.raises(exc):
        parse_domain(text)


def test_syntax_error_is_positioned():
    with pytest.raises(PddlSyntaxError) as info:
        parse_domain("(define (domain d)\n  (:predicates (p))\n  )\n)")
    assert info.value.line == 4


def test_case_insensitive():
    dom = parse_domain("(DEFINE (DOMAIN D) (:PREDICATES (P)))")
    assert dom.name == "d" and dom.predicates[0].name == "p"


def test_action_costs():
    dom = parse_domain(datagen.PARKING_DOMAIN)
    assert dom.uses_action_costs
    assert all(a.cost >= 1 for a in dom.actions)
    with pytest.raises(PddlError):
        parse_domain(
            "(define (domain d) (:requirements :strips) (:predicates (p))"
            " (:action a :parameters () :precondition (and) :effect (and (p) (increase (total-cost) 2))))"
        )


def test_minimal_problem():
    prob = parse_problem(drive_problem(), parse_domain(DRIVE))
    assert len(prob.init) == 3 and len(prob.goal) == 1


def test_empty_goal_and_total_cost_init():
    prob = parse_problem("(define (problem p) (:domain d) (:init (= (total-cost) 0)) (:goal (and)))")
    assert prob.goal == () and prob.total_cost_init == 0


def test_undeclared_object_named():
    text = drive_problem().replace("(at t1 a)", "(at t9 a)")
    with pytest.raises(UndeclaredError, match="t9"):
        parse_problem(text, parse_domain(DRIVE))


def test_negative_goal_rejected():
    with pytest.raises(UnsupportedFeatureError, match="negative goals unsupported"):
        parse_problem("(define (problem p) (:domain d) (:init) (:goal (not (q))))")


def test_other_fluent_rejected():
    with pytest.raises(UnsupportedFeatureError):
        parse_problem("(define (problem p) (:domain d) (:init (= (fuel) 3)) (:goal (and)))")


def test_duplicate_init_collapsed():
    prob = parse_problem("(define (problem p) (:domain d) (:init (q) (q)) (:goal (q)))")
    assert prob.init == (Atom("q", ()),)


def test_problem_type_error():
    text = drive_problem().replace("(road a b)", "(road t1 b)")
    with pytest.raises(PddlError):
        parse_problem(text, parse_domain(DRIVE))


@pytest.mark.parametrize("text", CORPUS_DOMAINS)
def test_domain_round_trip(text):
    dom = parse_domain(text)
    again = parse_domain(format_domain(dom))
    assert again == dom
    assert format_domain(again) == format_domain(dom)


def test_problem_round_trip():
    dom, prob = datagen.gen_transport(datagen.TransportConfig(3, 2, 1, 2, 1, seed=3))
    assert parse_problem(format_problem(prob), dom) == prob


def _drive(a, b):
    return GroundAction("drive", ("t1", a, b), (), (), (), 1)


def test_print_plan():
    assert print_plan(Plan((_drive("a", "b"),))) == "(drive t1 a b)\n; cost = 1"
    assert print_plan(Plan(())) == "; cost = 0"
    two = print_plan(Plan((_drive("a", "b"), _drive("b", "a")))).splitlines()
    assert two == ["(drive t1 a b)", "(drive t1 b a)", "; cost = 2"]


def test_print_plan_reparses():
    t = drive_task()
    plan = Plan((t.action("drive", "t1", "a", "b"),))
    assert parse_plan(print_plan(plan), t) == plan
    c = chain_task()
    plan = Plan(tuple(c.actions))
    assert parse_plan(print_plan(plan), c) == plan


@pytest.mark.parametrize("text", CORPUS_DOMAINS)
def test_truncation_total(text):
    data = text.encode()
    for cut in range(len(data)):
        try:
            parse_domain(data[:cut].decode("utf-8", errors="ignore"))
        except PddlError as exc:
            assert exc.line is None or exc.line >= 1


@settings(max_examples=200, deadline=None)
@given(st.text(alphabet="()?-: abcdefinpqrt\n;", max_size=80))
def test_fuzz_never_crashes(text):
    for parse in (parse_domain, parse_problem):
        try:
            parse(text)
        except PddlError:
            pass
