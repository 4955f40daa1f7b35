"""Grounding, bitset states, the STRIPS transition function and mutex groups."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ContractError, GroundingError, UnknownTypeError
from .pddl import Atom, check_ground_atom


class State:
    """Set of true atoms, stored as a Python int bitset (bit i = atom i)."""

    __slots__ = ("bits",)

    def __init__(self, bits=0):
        self.bits = bits

    @classmethod
    def from_atoms(cls, indices):
        bits = 0
        for i in indices:
            bits |= 1 << i
        return cls(bits)

    def __contains__(self, i):
        return (self.bits >> i) & 1 == 1

    def __eq__(self, other):
        return isinstance(other, State) and self.bits == other.bits

    def __hash__(self):
        return hash(self.bits)

    def __len__(self):
        return bin(self.bits).count("1")

    def __repr__(self):
        return f"State({self.atoms()})"

    def atoms(self):
        out = []
        b = self.bits
        i = 0
        while b:
            if b & 1:
                out.append(i)
            b >>= 1
            i += 1
        return out

    def to_array(self, width):
        """uint8 vector of length ``width`` with 1 for true atoms."""
        nbytes = (width + 7) // 8
        raw = np.frombuffer(self.bits.to_bytes(nbytes, "little"), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little", count=width)


def _mask(indices):
    m = 0
    for i in indices:
        m |= 1 << i
    return m


@dataclass(frozen=True)
class GroundAction:
    name: str
    args: tuple[str, ...]
    pre: tuple[int, ...]
    add: tuple[int, ...]
    del_: tuple[int, ...]
    cost: int = 1
    pre_mask: int = field(init=False, repr=False, compare=False)
    add_mask: int = field(init=False, repr=False, compare=False)
    del_mask: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if set(self.add) & set(self.del_):
            raise ContractError(f"{self.label}: add and delete lists overlap")
        object.__setattr__(self, "pre_mask", _mask(self.pre))
        object.__setattr__(self, "add_mask", _mask(self.add))
        object.__setattr__(self, "del_mask", _mask(self.del_))

    @property
    def label(self):
        return "(" + " ".join((self.name,) + self.args) + ")"


@dataclass(frozen=True)
class MutexGroup:
    atom_indices: tuple[int, ...]
    open: bool


@dataclass(frozen=True)
class RelaxedArrays:
    """CSR encoding of the action set consumed by the relaxation kernels."""

    cost: np.ndarray
    pre_ptr: np.ndarray
    pre_idx: np.ndarray
    add_ptr: np.ndarray
    add_idx: np.ndarray
    del_count: np.ndarray
    pre_of_ptr: np.ndarray
    pre_of_idx: np.ndarray
    goal: np.ndarray


def _csr(lists):
    ptr = np.zeros(len(lists) + 1, dtype=np.int64)
    ptr[1:] = np.cumsum([len(x) for x in lists])
    flat = np.fromiter((i for x in lists for i in x), dtype=np.int64, count=int(ptr[-1]))
    return ptr, flat


@dataclass(frozen=True, eq=False)
class GroundTask:
    atoms: tuple[Atom, ...]
    actions: tuple[GroundAction, ...]
    init: State
    goal: tuple[int, ...]
    mutex_groups: tuple[MutexGroup, ...] = ()
    unsolvable: bool = False
    name: str = "task"
    domain_name: str = "domain"
    objects: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        n = len(self.atoms)
        if len(set(self.atoms)) != n:
            raise ContractError("duplicate atoms in task")
        if len(set(self.goal)) != len(self.goal) or any(not 0 <= g < n for g in self.goal):
            raise ContractError("goal indices must be distinct and in range")
        for a in self.actions:
            if any(not 0 <= i < n for i in a.pre + a.add + a.del_):
                raise ContractError(f"{a.label}: atom index out of range")

    @property
    def n_atoms(self):
        return len(self.atoms)

    @cached_property
    def atom_index(self):
        return {a: i for i, a in enumerate(self.atoms)}

    @cached_property
    def goal_mask(self):
        return _mask(self.goal)

    @cached_property
    def relaxed_arrays(self):
        pre_ptr, pre_idx = _csr([a.pre for a in self.actions])
        add_ptr, add_idx = _csr([a.add for a in self.actions])
        pre_of = [[] for _ in self.atoms]
        for ai, a in enumerate(self.actions):
            for p in a.pre:
                pre_of[p].append(ai)
        pre_of_ptr, pre_of_idx = _csr(pre_of)
        return RelaxedArrays(
            cost=np.array([a.cost for a in self.actions], dtype=np.int64),
            pre_ptr=pre_ptr,
            pre_idx=pre_idx,
            add_ptr=add_ptr,
            add_idx=add_idx,
            del_count=np.array([len(a.del_) for a in self.actions], dtype=np.int64),
            pre_of_ptr=pre_of_ptr,
            pre_of_idx=pre_of_idx,
            goal=np.array(self.goal, dtype=np.int64),
        )

    @cached_property
    def domain_sizes(self):
        return variable_domain_sizes(self.mutex_groups, self)

    def atom_name(self, i):
        return str(self.atoms[i])

    def state_atoms(self, s):
        return [self.atoms[i] for i in s.atoms()]

    def action(self, name, *args):
        for a in self.actions:
            if a.name == name and a.args == tuple(args):
                return a
        raise KeyError(f"no ground action ({' '.join((name,) + args)})")

    def with_init(self, state):
        return dataclasses.replace(self, init=state)


def applicable(s, a):
    return s.bits & a.pre_mask == a.pre_mask


def apply(s, a):
    """Successor state ``(s | add) & ~del``; ``s`` is left untouched."""
    if s.bits & a.pre_mask != a.pre_mask:
        raise ContractError(f"{a.label} is not applicable")
    return State((s.bits | a.add_mask) & ~a.del_mask)


def is_goal(s, t):
    return s.bits & t.goal_mask == t.goal_mask


# ---------------------------------------------------------------------------
# task construction


def _as_atom(x):
    if isinstance(x, Atom):
        return x
    if isinstance(x, str):
        return Atom(x, ())
    pred, *args = x
    return Atom(pred, tuple(args))


def make_task(atoms, actions, init, goal, name="task", domain_name="domain"):
    """Build a GroundTask directly from atoms and ``(name, pre, add, del[, cost])``.

    Atoms may be Atom tuples, plain strings (nullary predicates) or
    ``(pred, arg, ...)`` tuples; actions refer to atoms the same way.
    Atoms are kept in the order given. Mutex groups are detected.
    """
    atoms = tuple(_as_atom(a) for a in atoms)
    idx = {a: i for i, a in enumerate(atoms)}

    def ids(xs):
        return tuple(sorted({idx[_as_atom(x)] for x in xs}))

    ground_actions = []
    for spec in actions:
        aname, pre, add, dels = spec[:4]
        cost = spec[4] if len(spec) > 4 else 1
        add_ids = ids(add)
        del_ids = tuple(i for i in ids(dels) if i not in add_ids)
        ground_actions.append(GroundAction(aname, (), ids(pre), add_ids, del_ids, cost))
    task = GroundTask(
        atoms=atoms,
        actions=tuple(ground_actions),
        init=State.from_atoms(ids(init)),
        goal=ids(goal),
        name=name,
        domain_name=domain_name,
    )
    task = dataclasses.replace(task, unsolvable=not _relaxed_goal_reachable(task))
    return dataclasses.replace(task, mutex_groups=tuple(detect_mutex_groups(task)))


def _relaxed_goal_reachable(task):
    reached = task.init.bits
    changed = True
    while changed:
        changed = False
        for a in task.actions:
            if reached & a.pre_mask == a.pre_mask and reached | a.add_mask != reached:
                reached |= a.add_mask
                changed = True
    return reached & task.goal_mask == task.goal_mask


def ground(domain, problem):
    """Instantiate all relaxed-reachable actions of ``domain`` for ``problem``.

    Atoms are ordered lexicographically by predicate then arguments; actions
    by schema declaration order, then argument names. A goal that is not
    reachable under delete relaxation sets ``unsolvable`` on the result.
    """
    if problem.domain_name != domain.name:
        raise GroundingError(
            f"problem '{problem.name}' is for domain '{problem.domain_name}', not '{domain.name}'"
        )
    sup = domain.supertypes
    obj_types = {}
    for oname, otype in tuple(domain.constants) + tuple(problem.objects):
        if otype not in sup:
            raise UnknownTypeError(f"undeclared type '{otype}' for object '{oname}'")
        if obj_types.get(oname, otype) != otype:
            raise GroundingError(f"object '{oname}' declared with two types")
        obj_types[oname] = otype
    for atom in problem.init + problem.goal:
        check_ground_atom(domain, atom, obj_types)

    by_type = {t: [] for t in sup}
    for oname in sorted(obj_types):
        for t in sup[obj_types[oname]]:
            by_type[t].append(oname)

    reachable = set(problem.init)
    index = {}
    for atom in problem.init:
        index.setdefault(atom.predicate, []).append(atom.args)

    found = {}
    changed = True
    while changed:
        changed = False
        new_atoms = []
        for si, schema in enumerate(domain.actions):
            for args in _bindings(schema, index, by_type, obj_types, sup):
                key = (si, args)
                if key in found:
                    continue
                sub = dict(zip((v for v, _ in schema.params), args))
                found[key] = tuple(
                    tuple(Atom(x.predicate, tuple(sub.get(t, t) for t in x.args)) for x in part)
                    for part in (schema.pre, schema.add, schema.del_)
                )
                for atom in found[key][1]:
                    if atom not in reachable:
                        reachable.add(atom)
                        new_atoms.append(atom)
        for atom in new_atoms:
            index.setdefault(atom.predicate, []).append(atom.args)
            changed = True

    universe = set(problem.init) | set(problem.goal)
    for pre, add, dels in found.values():
        universe.update(pre, add, dels)
    atoms = tuple(sorted(universe))
    idx = {a: i for i, a in enumerate(atoms)}

    actions = []
    for (si, args) in sorted(found):
        pre, add, dels = found[(si, args)]
        schema = domain.actions[si]
        add_ids = tuple(sorted({idx[a] for a in add}))
        del_ids = tuple(sorted({idx[a] for a in dels} - set(add_ids)))
        actions.append(
            GroundAction(schema.name, args, tuple(sorted({idx[a] for a in pre})), add_ids, del_ids, schema.cost)
        )

    task = GroundTask(
        atoms=atoms,
        actions=tuple(actions),
        init=State.from_atoms(idx[a] for a in problem.init),
        goal=tuple(sorted(idx[a] for a in problem.goal)),
        unsolvable=not all(g in reachable for g in problem.goal),
        name=problem.name,
        domain_name=domain.name,
        objects=tuple(problem.objects),
    )
    return dataclasses.replace(task, mutex_groups=tuple(detect_mutex_groups(task)))


def _bindings(schema, index, by_type, obj_types, sup):
    """Yield argument tuples whose preconditions all occur in ``index``."""
    params = schema.params
    ptype = dict(params)
    # snapshot: atoms found during this pass are joined on the next one
    extents = {p: list(index.get(p, ())) for p in {a.predicate for a in schema.pre}}

    def rec(i, binding):
        if i == len(schema.pre):
            yield from _complete(0, binding)
            return
        atom = schema.pre[i]
        for values in extents[atom.predicate]:
            nb = binding
            ok = True
            for term, val in zip(atom.args, values):
                if term.startswith("?"):
                    cur = nb.get(term)
                    if cur is None:
                        if ptype[term] not in sup[obj_types[val]]:
                            ok = False
                            break
                        if nb is binding:
                            nb = dict(binding)
                        nb[term] = val
                    elif cur != val:
                        ok = False
                        break
                elif term != val:
                    ok = False
                    break
            if ok:
                yield from rec(i + 1, nb)

    def _complete(j, binding):
        if j == len(params):
            yield tuple(binding[v] for v, _ in params)
            return
        var, t = params[j]
        if var in binding:
            yield from _complete(j + 1, binding)
            return
        for obj in by_type.get(t, ()):
            nb = dict(binding)
            nb[var] = obj
            yield from _complete(j + 1, nb)

    yield from rec(0, {})


# ---------------------------------------------------------------------------
# mutex groups


def detect_mutex_groups(t):
    """Balance-checked mutex groups, made disjoint greedily by size.

    Candidates are atoms of one predicate agreeing on every argument but one.
    A candidate is kept when no action adds two of its atoms, every action
    adding one of its atoms also deletes exactly one of them (and requires
    that deleted atom), and at most one of its atoms holds initially.
    """
    buckets = {}
    for i, atom in enumerate(t.atoms):
        for j in range(len(atom.args)):
            key = (atom.predicate, j, atom.args[:j] + atom.args[j + 1 :])
            buckets.setdefault(key, []).append(i)
    adders = {}
    for ai, a in enumerate(t.actions):
        for p in a.add:
            adders.setdefault(p, []).append(ai)
    pre_sets = [set(a.pre) for a in t.actions]
    del_sets = [set(a.del_) for a in t.actions]
    add_sets = [set(a.add) for a in t.actions]

    accepted = []
    seen = set()
    for key in sorted(buckets):
        group = tuple(buckets[key])
        if len(group) < 2 or group in seen:
            continue
        seen.add(group)
        gset = set(group)
        if sum(1 for p in group if p in t.init) > 1:
            continue
        ok = True
        for ai in sorted({ai for p in group for ai in adders.get(p, ())}):
            if len(add_sets[ai] & gset) > 1:
                ok = False
                break
            deleted = del_sets[ai] & gset
            if len(deleted) != 1 or not deleted <= pre_sets[ai]:
                ok = False
                break
        if ok:
            accepted.append(group)

    accepted.sort(key=lambda g: (-len(g), g[0], g))
    covered = set()
    groups = []
    for g in accepted:
        rest = tuple(p for p in g if p not in covered)
        if len(rest) < 2:
            continue
        covered.update(rest)
        rset = set(rest)
        is_open = any(del_sets[ai] & rset and not add_sets[ai] & rset for ai in range(len(t.actions)))
        groups.append(MutexGroup(rest, is_open))
    return groups


def variable_domain_sizes(groups, t):
    """Sorted domain sizes: one variable per group plus a binary one per loose atom."""
    in_group = set()
    sizes = []
    for g in groups:
        sizes.append(len(g.atom_indices) + (1 if g.open else 0))
        in_group.update(g.atom_indices)
    sizes.extend(2 for i in range(len(t.atoms)) if i not in in_group)
    return sorted(sizes)


def dump_task(t):
    """Line-oriented text dump of a grounding, for diffing."""
    lines = [f"; task {t.name} ({t.domain_name})", f"; {len(t.atoms)} atoms, {len(t.actions)} actions"]
    for i, atom in enumerate(t.atoms):
        flags = ("I" if i in t.init else "-") + ("G" if i in t.goal else "-")
        lines.append(f"atom {i} {flags} {atom}")
    for a in t.actions:
        fmt = lambda xs: " ".join(str(t.atoms[i]) for i in xs)  # noqa: E731
        lines.append(f"action {a.label} cost={a.cost} pre=[{fmt(a.pre)}] add=[{fmt(a.add)}] del=[{fmt(a.del_)}]")
    for g in t.mutex_groups:
        lines.append(f"mutex open={int(g.open)} " + " ".join(str(t.atoms[i]) for i in g.atom_indices))
    return "\n".join(lines) + "\n"
