"""Parser and printer for typed STRIPS PDDL with action costs.

Supported fragment: ``:strips``, ``:typing`` and ``:action-costs`` (the latter
only as ``(increase (total-cost) k)`` with a literal ``k``). Negative
preconditions, conditional or quantified effects, equality and ``either``
types are rejected with a positioned diagnostic.

Atoms may be written either in the usual ``(at ?v ?a)`` form or in the
functional ``at(?v ?a)`` form, where the predicate name sits directly against
the opening parenthesis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import (
    ArityError,
    PddlError,
    PddlSyntaxError,
    UndeclaredError,
    UnknownTypeError,
    UnsupportedFeatureError,
)

SUPPORTED_REQUIREMENTS = (":strips", ":typing", ":action-costs")
ROOT_TYPE = "object"


class Atom(NamedTuple):
    predicate: str
    args: tuple[str, ...]

    def __str__(self):
        return "(" + " ".join((self.predicate,) + self.args) + ")"


@dataclass(frozen=True)
class PredicateDecl:
    name: str
    params: tuple[tuple[str, str], ...]

    @property
    def arity(self):
        return len(self.params)


@dataclass(frozen=True)
class ActionSchema:
    name: str
    params: tuple[tuple[str, str], ...]
    pre: tuple[Atom, ...]
    add: tuple[Atom, ...]
    del_: tuple[Atom, ...]
    cost: int = 1


@dataclass(frozen=True)
class DomainAst:
    name: str
    types: tuple[tuple[str, str], ...]
    predicates: tuple[PredicateDecl, ...]
    actions: tuple[ActionSchema, ...]
    uses_action_costs: bool = False
    requirements: tuple[str, ...] = ()
    constants: tuple[tuple[str, str], ...] = ()

    def predicate(self, name):
        for p in self.predicates:
            if p.name == name:
                return p
        return None

    @property
    def supertypes(self):
        """Map every declared type to the set of its ancestors (itself included)."""
        parent = dict(self.types)
        closure = {ROOT_TYPE: frozenset([ROOT_TYPE])}
        for t in parent:
            seen = [t]
            cur = t
            while cur != ROOT_TYPE:
                cur = parent.get(cur, ROOT_TYPE)
                if cur in seen:
                    raise PddlError(f"cyclic type hierarchy through '{cur}'")
                seen.append(cur)
            closure[t] = frozenset(seen)
        return closure

    def is_subtype(self, t, ancestor):
        return ancestor in self.supertypes.get(t, ())


@dataclass(frozen=True)
class ProblemAst:
    name: str
    domain_name: str
    objects: tuple[tuple[str, str], ...]
    init: tuple[Atom, ...]
    goal: tuple[Atom, ...]
    total_cost_init: int | None = None
    requirements: tuple[str, ...] = ()
    minimize_total_cost: bool = False


# ---------------------------------------------------------------------------
# s-expression reader


class Sym:
    __slots__ = ("text", "line", "col")

    def __init__(self, text, line, col):
        self.text = text
        self.line = line
        self.col = col

    def __repr__(self):
        return f"Sym({self.text!r})"


@dataclass
class SList:
    items: list = field(default_factory=list)
    line: int = 0
    col: int = 0

    def __len__(self):
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]

    @property
    def head(self):
        if self.items and isinstance(self.items[0], Sym):
            return self.items[0].text
        return None


_DELIMS = set("();")


def _tokenize(text):
    """Yield (kind, text, line, col); functional atoms ``p(x)`` become ``(p x)``."""
    i, n = 0, len(text)
    line, col = 1, 1
    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
        elif c.isspace():
            i += 1
            col += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c in "()":
            yield c, c, line, col
            i += 1
            col += 1
        else:
            start, scol = i, col
            while i < n and not text[i].isspace() and text[i] not in _DELIMS:
                i += 1
                col += 1
            word = text[start:i].lower()
            if i < n and text[i] == "(" and not word.startswith((":", "?")):
                yield "(", "(", line, scol
                yield "sym", word, line, scol
                i += 1
                col += 1
            else:
                yield "sym", word, line, scol


def read_sexpr(text):
    """Read exactly one top-level s-expression."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise PddlSyntaxError(f"input is not valid UTF-8 ({exc.reason})") from None
    stack = []
    root = None
    for kind, tok, line, col in _tokenize(text):
        if root is not None:
            raise PddlSyntaxError("unexpected content after end of definition", line, col)
        if kind == "(":
            stack.append(SList([], line, col))
        elif kind == ")":
            if not stack:
                raise PddlSyntaxError("unbalanced ')'", line, col)
            node = stack.pop()
            if stack:
                stack[-1].items.append(node)
            else:
                root = node
        else:
            if not stack:
                raise PddlSyntaxError(f"unexpected token '{tok}' outside any list", line, col)
            stack[-1].items.append(Sym(tok, line, col))
    if stack:
        open_ = stack[-1]
        raise PddlSyntaxError("unexpected end of input: unclosed '('", open_.line, open_.col)
    if root is None:
        raise PddlSyntaxError("empty input", 1, 1)
    return root


# ---------------------------------------------------------------------------
# helpers


def _pos(node):
    return node.line, node.col


def _expect_list(node, what):
    if not isinstance(node, SList):
        raise PddlSyntaxError(f"expected a list for {what}", *_pos(node))
    return node


def _expect_sym(node, what):
    if not isinstance(node, Sym):
        raise PddlSyntaxError(f"expected a name for {what}", *_pos(node))
    return node.text


def _parse_typed_list(items, what):
    """Parse ``a b - t c`` into [(a, t), (b, t), (c, object)]."""
    result = []
    pending = []
    i = 0
    while i < len(items):
        node = items[i]
        if isinstance(node, SList):
            raise PddlSyntaxError(f"unexpected list in {what}", *_pos(node))
        if node.text == "-":
            if i + 1 >= len(items):
                raise PddlSyntaxError(f"missing type after '-' in {what}", *_pos(node))
            tnode = items[i + 1]
            if isinstance(tnode, SList):
                if tnode.head == "either":
                    raise UnsupportedFeatureError("'either' types unsupported", *_pos(tnode))
                raise PddlSyntaxError(f"malformed type in {what}", *_pos(tnode))
            if not pending:
                raise PddlSyntaxError(f"type '{tnode.text}' names nothing in {what}", *_pos(tnode))
            result.extend((name, tnode.text) for name, _ in pending)
            pending = []
            i += 2
            continue
        pending.append((node.text, node))
        i += 1
    result.extend((name, ROOT_TYPE) for name, _ in pending)
    return result


def _check_requirements(node):
    reqs = []
    for item in node.items[1:]:
        req = _expect_sym(item, "requirement")
        if req not in SUPPORTED_REQUIREMENTS:
            raise UnsupportedFeatureError(f"unsupported requirement {req}", *_pos(item))
        reqs.append(req)
    return tuple(reqs)


def _parse_atom(node, what):
    node = _expect_list(node, what)
    if not node.items:
        raise PddlSyntaxError(f"empty atom in {what}", *_pos(node))
    pred = _expect_sym(node.items[0], f"predicate in {what}")
    args = []
    for a in node.items[1:]:
        if isinstance(a, SList):
            raise UnsupportedFeatureError(f"nested term in {what} unsupported", *_pos(a))
        args.append(a.text)
    return Atom(pred, tuple(args))


_UNSUPPORTED_CONNECTIVES = {
    "or": "disjunctive conditions unsupported",
    "imply": "implications unsupported",
    "exists": "quantified conditions unsupported",
    "forall": "quantified conditions unsupported",
    "when": "conditional effects unsupported",
    "=": "equality unsupported",
    "<": "numeric conditions unsupported",
    ">": "numeric conditions unsupported",
    "<=": "numeric conditions unsupported",
    ">=": "numeric conditions unsupported",
}


def _parse_condition(node, negation_message, what):
    """Flatten a positive conjunction into a list of atoms."""
    node = _expect_list(node, what)
    head = node.head
    if not node.items:
        return []
    if head == "and":
        out = []
        for child in node.items[1:]:
            out.extend(_parse_condition(child, negation_message, what))
        return out
    if head == "not":
        raise UnsupportedFeatureError(negation_message, *_pos(node))
    if head in _UNSUPPORTED_CONNECTIVES:
        raise UnsupportedFeatureError(_UNSUPPORTED_CONNECTIVES[head], *_pos(node))
    return [_parse_atom(node, what)]


def _parse_effect(node, adds, dels, costs):
    node = _expect_list(node, "effect")
    head = node.head
    if not node.items:
        return
    if head == "and":
        for child in node.items[1:]:
            _parse_effect(child, adds, dels, costs)
        return
    if head == "not":
        if len(node.items) != 2:
            raise PddlSyntaxError("'not' takes exactly one atom", *_pos(node))
        inner = _expect_list(node.items[1], "negated effect")
        if inner.head in _UNSUPPORTED_CONNECTIVES or inner.head in ("and", "not"):
            raise UnsupportedFeatureError("only atoms may be negated in effects", *_pos(inner))
        dels.append(_parse_atom(inner, "effect"))
        return
    if head == "increase":
        if len(node.items) != 3:
            raise PddlSyntaxError("malformed increase effect", *_pos(node))
        target = node.items[1]
        if not (isinstance(target, SList) and len(target) == 1 and target.head == "total-cost"):
            raise UnsupportedFeatureError("numeric fluents other than total-cost unsupported", *_pos(node))
        amount = node.items[2]
        if isinstance(amount, SList):
            raise UnsupportedFeatureError("only literal action costs are supported", *_pos(amount))
        try:
            value = int(amount.text)
        except ValueError:
            raise UnsupportedFeatureError(
                f"action cost must be a nonnegative integer, got '{amount.text}'", *_pos(amount)
            ) from None
        if value < 0:
            raise PddlError(f"negative action cost {value}", *_pos(amount))
        costs.append((value, node))
        return
    if head in ("decrease", "assign", "scale-up", "scale-down"):
        raise UnsupportedFeatureError("numeric effects unsupported", *_pos(node))
    if head == "forall":
        raise UnsupportedFeatureError("quantified effects unsupported", *_pos(node))
    if head in _UNSUPPORTED_CONNECTIVES:
        raise UnsupportedFeatureError(_UNSUPPORTED_CONNECTIVES[head], *_pos(node))
    adds.append(_parse_atom(node, "effect"))


def _dedupe(seq):
    return tuple(dict.fromkeys(seq))


def _header(root, kind):
    if root.head != "define" or len(root.items) < 2:
        raise PddlSyntaxError("expected (define ...)", *_pos(root))
    hdr = _expect_list(root.items[1], f"{kind} header")
    if hdr.head != kind or len(hdr.items) != 2:
        raise PddlSyntaxError(f"expected ({kind} <name>)", *_pos(hdr))
    return _expect_sym(hdr.items[1], f"{kind} name")


# ---------------------------------------------------------------------------
# domain


def parse_domain(text):
    """Parse domain text (str or UTF-8 bytes) into a validated :class:`DomainAst`."""
    root = read_sexpr(text)
    name = _header(root, "domain")
    requirements = ()
    types = []
    constants = []
    predicates = []
    raw_actions = []
    has_functions = False
    for section in root.items[2:]:
        section = _expect_list(section, "domain section")
        key = section.head
        if key == ":requirements":
            requirements = _check_requirements(section)
        elif key == ":types":
            types.extend(_parse_typed_list(section.items[1:], ":types"))
        elif key == ":constants":
            constants.extend(_parse_typed_list(section.items[1:], ":constants"))
        elif key == ":predicates":
            for decl in section.items[1:]:
                decl = _expect_list(decl, "predicate declaration")
                if not decl.items:
                    raise PddlSyntaxError("empty predicate declaration", *_pos(decl))
                pname = _expect_sym(decl.items[0], "predicate name")
                params = _parse_typed_list(decl.items[1:], f"predicate {pname}")
                predicates.append((PredicateDecl(pname, tuple(params)), decl))
        elif key == ":functions":
            _parse_functions(section)
            has_functions = True
        elif key == ":action":
            raw_actions.append(section)
        elif key in (":derived", ":axiom"):
            raise UnsupportedFeatureError("derived predicates unsupported", *_pos(section))
        elif key == ":durative-action":
            raise UnsupportedFeatureError("durative actions unsupported", *_pos(section))
        else:
            raise PddlSyntaxError(f"unknown domain section '{key}'", *_pos(section))

    uses_costs = ":action-costs" in requirements
    if has_functions and not uses_costs:
        raise UnsupportedFeatureError("(:functions) requires :action-costs")

    # types: implicit declaration of parents, closure check
    declared = {ROOT_TYPE}
    type_pairs = []
    for child, parent in types:
        if child == ROOT_TYPE:
            continue
        type_pairs.append((child, parent))
        declared.add(child)
    for _, parent in list(type_pairs):
        if parent not in declared:
            type_pairs.append((parent, ROOT_TYPE))
            declared.add(parent)
    type_pairs = _dedupe(type_pairs)
    seen_types = {}
    for child, parent in type_pairs:
        if child in seen_types and seen_types[child] != parent:
            raise PddlError(f"type '{child}' declared with two parents")
        seen_types[child] = parent

    def check_type(t, node):
        if t not in declared:
            raise UnknownTypeError(f"unknown type '{t}'", *_pos(node))

    for _, ctype in constants:
        check_type(ctype, root)

    pred_map = {}
    for decl, node in predicates:
        if decl.name in pred_map:
            raise PddlError(f"duplicate predicate '{decl.name}'", *_pos(node))
        for _, ptype in decl.params:
            check_type(ptype, node)
        pred_map[decl.name] = decl

    const_names = {c for c, _ in constants}
    actions = []
    action_names = set()
    for node in raw_actions:
        schema = _parse_action(node, pred_map, const_names, check_type, uses_costs)
        if schema.name in action_names:
            raise PddlError(f"duplicate action '{schema.name}'", *_pos(node))
        action_names.add(schema.name)
        actions.append(schema)

    dom = DomainAst(
        name=name,
        types=tuple(type_pairs),
        predicates=tuple(d for d, _ in predicates),
        actions=tuple(actions),
        uses_action_costs=uses_costs,
        requirements=requirements,
        constants=tuple(constants),
    )
    dom.supertypes  # raises on cycles
    return dom


def _parse_functions(section):
    items = section.items[1:]
    i = 0
    while i < len(items):
        node = items[i]
        if isinstance(node, Sym):
            if node.text == "-" and i + 1 < len(items):
                ftype = items[i + 1]
                if not (isinstance(ftype, Sym) and ftype.text == "number"):
                    raise UnsupportedFeatureError("only numeric functions supported", *_pos(node))
                i += 2
                continue
            raise PddlSyntaxError("malformed :functions section", *_pos(node))
        if not (len(node) == 1 and node.head == "total-cost"):
            raise UnsupportedFeatureError("numeric fluents other than total-cost unsupported", *_pos(node))
        i += 1


def _parse_action(node, pred_map, const_names, check_type, uses_costs):
    if len(node.items) < 2:
        raise PddlSyntaxError("action without a name", *_pos(node))
    name = _expect_sym(node.items[1], "action name")
    params = []
    pre_node = eff_node = None
    items = node.items[2:]
    if len(items) % 2:
        raise PddlSyntaxError(f"action '{name}': keyword without a value", *_pos(node))
    for key_node, value in zip(items[::2], items[1::2]):
        key = _expect_sym(key_node, "action keyword")
        if key == ":parameters":
            params = _parse_typed_list(_expect_list(value, ":parameters").items, ":parameters")
        elif key == ":precondition":
            pre_node = value
        elif key == ":effect":
            eff_node = value
        else:
            raise PddlSyntaxError(f"unknown action keyword '{key}'", *_pos(key_node))
    for var, ptype in params:
        if not var.startswith("?"):
            raise PddlSyntaxError(f"parameter '{var}' of '{name}' must start with '?'", *_pos(node))
        check_type(ptype, node)
    if len({v for v, _ in params}) != len(params):
        raise PddlError(f"action '{name}': duplicate parameter", *_pos(node))
    pre = []
    if pre_node is not None:
        pre = _parse_condition(pre_node, "negative preconditions unsupported", "precondition")
    adds, dels, costs = [], [], []
    if eff_node is not None:
        _parse_effect(eff_node, adds, dels, costs)
    if costs and not uses_costs:
        raise UnsupportedFeatureError(
            "action cost effect requires :action-costs requirement", *_pos(costs[0][1])
        )
    if len(costs) > 1:
        raise PddlError(f"action '{name}': more than one cost effect", *_pos(costs[1][1]))
    cost = costs[0][0] if costs else 1

    var_names = {v for v, _ in params}
    where = node
    for atom in pre + adds + dels:
        decl = pred_map.get(atom.predicate)
        if decl is None:
            raise UndeclaredError(f"undeclared predicate '{atom.predicate}' in action '{name}'", *_pos(where))
        if len(atom.args) != decl.arity:
            raise ArityError(
                f"arity mismatch: '{atom.predicate}' takes {decl.arity} arguments, got {len(atom.args)}"
                f" in action '{name}'",
                *_pos(where),
            )
        for arg in atom.args:
            if arg.startswith("?"):
                if arg not in var_names:
                    raise UndeclaredError(f"undeclared variable '{arg}' in action '{name}'", *_pos(where))
            elif arg not in const_names:
                raise UndeclaredError(f"undeclared constant '{arg}' in action '{name}'", *_pos(where))
    adds, dels = _dedupe(adds), _dedupe(dels)
    both = set(adds) & set(dels)
    if both:
        atom = sorted(both)[0]
        raise PddlError(f"action '{name}': {atom} is both added and deleted", *_pos(node))
    return ActionSchema(name, tuple(params), _dedupe(pre), adds, dels, cost)


# ---------------------------------------------------------------------------
# problem


def parse_problem(text, domain=None):
    """Parse problem text into a :class:`ProblemAst`.

    Object references in ``:init`` and ``:goal`` are checked against the
    declared objects (and the domain constants when ``domain`` is given).
    With a domain, predicates, arities and object types are validated too.
    """
    root = read_sexpr(text)
    name = _header(root, "problem")
    domain_name = None
    requirements = ()
    objects = []
    init = []
    goal = []
    total_cost = None
    metric = False
    obj_node = root
    for section in root.items[2:]:
        section = _expect_list(section, "problem section")
        key = section.head
        if key == ":domain":
            if len(section.items) != 2:
                raise PddlSyntaxError("expected (:domain <name>)", *_pos(section))
            domain_name = _expect_sym(section.items[1], "domain name")
        elif key == ":requirements":
            requirements = _check_requirements(section)
        elif key == ":objects":
            objects.extend(_parse_typed_list(section.items[1:], ":objects"))
            obj_node = section
        elif key == ":init":
            for item in section.items[1:]:
                item = _expect_list(item, "initial atom")
                if item.head == "=":
                    total_cost = _parse_total_cost_init(item)
                elif item.head == "not":
                    raise UnsupportedFeatureError("negative initial literals are implicit", *_pos(item))
                else:
                    atom = _parse_atom(item, ":init")
                    init.append((atom, item))
        elif key == ":goal":
            if len(section.items) != 2:
                raise PddlSyntaxError("expected (:goal <condition>)", *_pos(section))
            goal_node = section.items[1]
            for atom in _parse_condition(goal_node, "negative goals unsupported", "goal"):
                goal.append((atom, goal_node))
        elif key == ":metric":
            metric = _parse_metric(section)
        else:
            raise PddlSyntaxError(f"unknown problem section '{key}'", *_pos(section))
    if domain_name is None:
        raise PddlSyntaxError("problem lacks (:domain ...)", *_pos(root))

    known = {o for o, _ in objects}
    types = {ROOT_TYPE}
    consts = {}
    if domain is not None:
        types = set(domain.supertypes)
        consts = dict(domain.constants)
        for oname, otype in objects:
            if otype not in types:
                raise UnknownTypeError(f"undeclared type '{otype}' for object '{oname}'", *_pos(obj_node))
    elif any(t != ROOT_TYPE for _, t in objects):
        types = None
    if len(known) != len(objects):
        raise PddlError("duplicate object declaration", *_pos(obj_node))

    obj_types = dict(consts)
    obj_types.update(objects)
    for atom, node in init + goal:
        for arg in atom.args:
            if arg not in obj_types:
                raise UndeclaredError(f"undeclared object '{arg}' in {atom}", *_pos(node))
        if domain is not None:
            check_ground_atom(domain, atom, obj_types, node)

    return ProblemAst(
        name=name,
        domain_name=domain_name,
        objects=tuple(objects),
        init=_dedupe(a for a, _ in init),
        goal=_dedupe(a for a, _ in goal),
        total_cost_init=total_cost,
        requirements=requirements,
        minimize_total_cost=metric,
    )


def check_ground_atom(domain, atom, obj_types, node=None):
    pos = _pos(node) if node is not None else (None, None)
    decl = domain.predicate(atom.predicate)
    if decl is None:
        raise UndeclaredError(f"undeclared predicate '{atom.predicate}'", *pos)
    if len(atom.args) != decl.arity:
        raise ArityError(
            f"arity mismatch: '{atom.predicate}' takes {decl.arity} arguments, got {len(atom.args)}", *pos
        )
    sup = domain.supertypes
    for arg, (_, ptype) in zip(atom.args, decl.params):
        otype = obj_types.get(arg)
        if otype is None:
            raise UndeclaredError(f"undeclared object '{arg}' in {atom}", *pos)
        if ptype not in sup.get(otype, ()):
            raise PddlError(f"type error: '{arg}' of type '{otype}' is not a '{ptype}' in {atom}", *pos)


def _parse_total_cost_init(node):
    if len(node.items) != 3:
        raise PddlSyntaxError("malformed numeric initialisation", *_pos(node))
    target, value = node.items[1], node.items[2]
    if not (isinstance(target, SList) and len(target) == 1 and target.head == "total-cost"):
        raise UnsupportedFeatureError("numeric fluents other than total-cost unsupported", *_pos(node))
    if isinstance(value, SList):
        raise PddlSyntaxError("expected a number", *_pos(value))
    try:
        return int(value.text)
    except ValueError:
        raise PddlSyntaxError(f"expected an integer, got '{value.text}'", *_pos(value)) from None


def _parse_metric(node):
    items = node.items[1:]
    if (
        len(items) == 2
        and isinstance(items[0], Sym)
        and items[0].text == "minimize"
        and isinstance(items[1], SList)
        and len(items[1]) == 1
        and items[1].head == "total-cost"
    ):
        return True
    raise UnsupportedFeatureError("only (:metric minimize (total-cost)) is supported", *_pos(node))


# ---------------------------------------------------------------------------
# printing


def _typed(pairs):
    out = []
    for name, t in pairs:
        out.append(f"{name} - {t}")
    return " ".join(out)


def _atom_text(atom):
    return "(" + " ".join((atom.predicate,) + tuple(atom.args)) + ")"


def _conj(atoms):
    if len(atoms) == 1:
        return _atom_text(atoms[0])
    return "(and" + "".join(" " + _atom_text(a) for a in atoms) + ")"


def format_domain(dom):
    """Render a DomainAst as canonical PDDL text that reparses to an equal AST."""
    lines = [f"(define (domain {dom.name})"]
    if dom.requirements:
        lines.append("  (:requirements " + " ".join(dom.requirements) + ")")
    if dom.types:
        lines.append("  (:types")
        for child, parent in dom.types:
            lines.append(f"    {child} - {parent}")
        lines.append("  )")
    if dom.constants:
        lines.append("  (:constants " + _typed(dom.constants) + ")")
    lines.append("  (:predicates")
    for p in dom.predicates:
        params = (" " + _typed(p.params)) if p.params else ""
        lines.append(f"    ({p.name}{params})")
    lines.append("  )")
    if dom.uses_action_costs:
        lines.append("  (:functions (total-cost) - number)")
    for a in dom.actions:
        lines.append(f"  (:action {a.name}")
        lines.append(f"    :parameters ({_typed(a.params)})")
        lines.append(f"    :precondition (and{''.join(' ' + _atom_text(x) for x in a.pre)})")
        effects = [_atom_text(x) for x in a.add] + [f"(not {_atom_text(x)})" for x in a.del_]
        if dom.uses_action_costs:
            effects.append(f"(increase (total-cost) {a.cost})")
        lines.append(f"    :effect (and{''.join(' ' + e for e in effects)}))")
    lines.append(")")
    return "\n".join(lines) + "\n"


def format_problem(prob):
    lines = [f"(define (problem {prob.name})", f"  (:domain {prob.domain_name})"]
    if prob.requirements:
        lines.append("  (:requirements " + " ".join(prob.requirements) + ")")
    if prob.objects:
        lines.append("  (:objects")
        # group consecutive objects of equal type
        groups = []
        for name, t in prob.objects:
            if groups and groups[-1][1] == t:
                groups[-1][0].append(name)
            else:
                groups.append(([name], t))
        for names, t in groups:
            lines.append(f"    {' '.join(names)} - {t}")
        lines.append("  )")
    lines.append("  (:init")
    if prob.total_cost_init is not None:
        lines.append(f"    (= (total-cost) {prob.total_cost_init})")
    for atom in prob.init:
        lines.append(f"    {_atom_text(atom)}")
    lines.append("  )")
    lines.append(f"  (:goal (and{''.join(' ' + _atom_text(a) for a in prob.goal)}))")
    if prob.minimize_total_cost:
        lines.append("  (:metric minimize (total-cost))")
    lines.append(")")
    return "\n".join(lines) + "\n"


def print_plan(plan):
    """One ``(name args...)`` line per action, then ``; cost = C``."""
    lines = ["(" + " ".join((a.name,) + tuple(a.args)) + ")" for a in plan.actions]
    lines.append(f"; cost = {plan.cost}")
    return "\n".join(lines)
