"""Solving, data collection, suite evaluation and report aggregation."""

from __future__ import annotations

import csv
import io
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields

import numpy as np

from .errors import ConfigurationError, HeurlearnError
from .ground import ground
from .heuristics import BUILTIN, ROLE_SCHEMA, LearnedHeuristic, extract_features
from .learn import Dataset, label_trace, read_model
from .pddl import parse_domain, parse_problem
from .schemas import n_features
from .search import SOLVED, greedy_best_first, uniform_cost_search, validate_plan

log = logging.getLogger(__name__)

SEARCH_KINDS = ("gbfs", "ucs")


def read_text(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def load_task(domain_path, problem_path):
    dom = parse_domain(read_text(domain_path))
    prob = parse_problem(read_text(problem_path), dom)
    return ground(dom, prob)


def make_heuristic(spec):
    """Resolve ``goal-count``, ``ff``, ``add``, ``standalone:PATH`` or ``ff-correction:PATH``."""
    if spec in BUILTIN:
        return BUILTIN[spec]
    role, sep, path = spec.partition(":")
    if sep and role in ROLE_SCHEMA:
        return LearnedHeuristic(read_model(path), role)
    raise ConfigurationError(
        f"unknown heuristic {spec!r}; use one of {', '.join(BUILTIN)} or standalone:/ff-correction: with a model path"
    )


def run_search(task, search, heuristic=None, limits=None, start_time=None):
    if search == "ucs":
        return uniform_cost_search(task, limits, start_time)
    if search == "gbfs":
        if heuristic is None:
            raise ConfigurationError("gbfs needs a heuristic")
        return greedy_best_first(task, heuristic, limits, start_time)
    raise ConfigurationError(f"unknown search kind {search!r}")


def problem_files(directory, exclude=()):
    """Sorted ``*.pddl`` problem files in ``directory``, skipping domain files."""
    excluded = {os.path.abspath(p) for p in exclude}
    out = []
    for name in sorted(os.listdir(directory)):
        path = os.path.join(directory, name)
        if not name.endswith(".pddl") or name == "domain.pddl" or os.path.abspath(path) in excluded:
            continue
        out.append(path)
    return out


# ---------------------------------------------------------------------------
# collection


@dataclass
class CollectSummary:
    solved: list
    skipped: list
    states: int

    def line(self):
        text = f"collected {self.states} states from {len(self.solved)} solved problems"
        if self.skipped:
            text += f"; skipped {len(self.skipped)} unsolved: {', '.join(self.skipped)}"
        return text


def collect(domain_path, problem_paths, schema, limits=None):
    """Solve each problem optimally and label every state on its plan."""
    if schema not in ROLE_SCHEMA.values():
        raise ConfigurationError(f"unknown feature schema {schema!r}")
    dom = parse_domain(read_text(domain_path))
    rows, labels, prov = [], [], []
    solved, skipped = [], []
    for path in problem_paths:
        pid = os.path.basename(path)
        task = ground(dom, parse_problem(read_text(path), dom))
        plan, stats = uniform_cost_search(task, limits)
        if plan is None:
            log.warning("skipping %s: %s", pid, stats.result_kind)
            skipped.append(pid)
            continue
        solved.append(pid)
        for step, (state, label) in enumerate(label_trace(task, plan)):
            rows.append(extract_features(state, task, schema).values)
            labels.append(label)
            prov.append((pid, step))
    data = Dataset(schema, np.array(rows, dtype=np.float64).reshape(-1, n_features(schema)), labels, prov)
    return data, CollectSummary(solved, skipped, len(labels))


# ---------------------------------------------------------------------------
# evaluation


@dataclass(frozen=True)
class PlannerConfig:
    name: str
    search: str
    heuristic: str | None

    @classmethod
    def parse(cls, text):
        """``NAME=SEARCH[:HEURISTIC]``, e.g. ``NN-FF=gbfs:ff-correction:nn.json``."""
        name, sep, rest = text.partition("=")
        if not sep or not name:
            raise ConfigurationError(f"planner config {text!r} must look like NAME=SEARCH:HEURISTIC")
        search, _, heur = rest.partition(":")
        if search not in SEARCH_KINDS:
            raise ConfigurationError(f"unknown search kind {search!r} in {text!r}")
        if search == "gbfs" and not heur:
            raise ConfigurationError(f"gbfs config {text!r} needs a heuristic")
        return cls(name, search, heur or None)


@dataclass(frozen=True)
class ReportRow:
    domain: str
    problem: str
    config: str
    result_kind: str
    plan_cost: int | None
    generated: int
    expanded: int
    wall_time: float


REPORT_COLUMNS = tuple(f.name for f in fields(ReportRow))


def discover_suite(suite):
    """Map a suite directory to (domain name, domain path, problem path) triples.

    Either ``suite/domain.pddl`` with problems beside it, or one such
    directory per domain below ``suite``.
    """
    suite = os.path.abspath(suite)
    dirs = []
    if os.path.isfile(os.path.join(suite, "domain.pddl")):
        dirs.append(suite)
    else:
        for name in sorted(os.listdir(suite)):
            sub = os.path.join(suite, name)
            if os.path.isfile(os.path.join(sub, "domain.pddl")):
                dirs.append(sub)
    if not dirs:
        raise ConfigurationError(f"no domain.pddl found in {suite} or its subdirectories")
    out = []
    for d in dirs:
        dom = os.path.join(d, "domain.pddl")
        for p in problem_files(d):
            out.append((os.path.basename(d), dom, p))
    return out


def run_pair(job):
    """Solve one (problem, config) pair; any failure becomes a row, never an exception."""
    domain, domain_path, problem_path, config, limits = job
    start = time.perf_counter()
    problem = os.path.basename(problem_path)
    try:
        heuristic = make_heuristic(config.heuristic) if config.search == "gbfs" else None
        task = load_task(domain_path, problem_path)
        plan, stats = run_search(task, config.search, heuristic, limits, start_time=start)
        cost = None
        kind = stats.result_kind
        if plan is not None:
            if not validate_plan(task, plan):
                kind = "invalid_plan"
            cost = plan.cost
        return ReportRow(domain, problem, config.name, kind, cost, stats.generated, stats.expanded,
                         time.perf_counter() - start)
    except (HeurlearnError, OSError) as exc:
        log.error("%s/%s with %s failed: %s", domain, problem, config.name, exc)
        return ReportRow(domain, problem, config.name, "error", None, 0, 0, time.perf_counter() - start)


def evaluate(suite, configs, limits, workers=1):
    jobs = [(d, dp, pp, c, limits) for d, dp, pp in discover_suite(suite) for c in configs]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run_pair, jobs))
    else:
        rows = [run_pair(j) for j in jobs]
    return sorted(rows, key=lambda r: (r.domain, r.problem, r.config))


def format_report(rows):
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(REPORT_COLUMNS)
    for r in rows:
        vals = list(astuple(r))
        vals[4] = "" if r.plan_cost is None else r.plan_cost
        vals[7] = f"{r.wall_time:.6f}"
        w.writerow(vals)
    return out.getvalue()


def parse_report(text):
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header) != REPORT_COLUMNS:
        raise ConfigurationError(f"report header must be {','.join(REPORT_COLUMNS)}")
    rows = []
    for lineno, rec in enumerate(reader, start=2):
        if not rec:
            continue
        if len(rec) != len(REPORT_COLUMNS):
            raise ConfigurationError(f"report line {lineno}: expected {len(REPORT_COLUMNS)} fields")
        try:
            rows.append(ReportRow(rec[0], rec[1], rec[2], rec[3], int(rec[4]) if rec[4] else None,
                                  int(rec[5]), int(rec[6]), float(rec[7])))
        except ValueError as exc:
            raise ConfigurationError(f"report line {lineno}: {exc}") from None
    return rows


# ---------------------------------------------------------------------------
# aggregation


def geometric_mean(values):
    values = list(values)
    if not values:
        return math.nan
    return math.exp(math.fsum(math.log(v) for v in values) / len(values))


def coverage(rows):
    """{(domain, config): solved count} and {domain: problem count}."""
    solved = {}
    problems = {}
    for r in rows:
        problems.setdefault(r.domain, set()).add(r.problem)
        key = (r.domain, r.config)
        solved[key] = solved.get(key, 0) + (r.result_kind == SOLVED)
    return solved, {d: len(p) for d, p in problems.items()}


def _ordered(seq):
    return list(dict.fromkeys(seq))


def coverage_table(rows):
    solved, totals = coverage(rows)
    domains = sorted(totals)
    configs = _ordered(r.config for r in rows)
    width = max([len(c) for c in configs] + [6])
    cols = [max(len(d), 4) for d in domains]
    lines = [" " * width + " | " + "  ".join(d.rjust(c) for d, c in zip(domains, cols))]
    lines.append("-" * len(lines[0]))
    for cfg in configs:
        cells = [str(solved.get((d, cfg), 0)).rjust(c) for d, c in zip(domains, cols)]
        lines.append(cfg.ljust(width) + " | " + "  ".join(cells))
    lines.append("problems: " + ", ".join(f"{d}={totals[d]}" for d in domains))
    return "\n".join(lines)


@dataclass
class RatioSummary:
    numerator: str
    denominator: str
    ratios: dict
    geometric_mean: float
    subset_ratios: dict | None = None
    subset_geometric_mean: float | None = None

    def lines(self):
        def fmt(v, n):
            return "n/a" if n == 0 else f"{v:.4f}"

        out = [f"ratio {self.numerator}/{self.denominator}: {fmt(self.geometric_mean, len(self.ratios))}"
               f" (geometric mean over {len(self.ratios)} problems solved by both)"]
        if self.subset_ratios is not None:
            out.append(f"ratio {self.numerator}/{self.denominator} on subset: "
                       f"{fmt(self.subset_geometric_mean, len(self.subset_ratios))}"
                       f" (over {len(self.subset_ratios)} problems)")
        return out


def ratio_summary(rows, numerator, denominator, subset=None):
    """Generated-state ratios numerator/denominator on commonly solved problems."""
    gen = {}
    for r in rows:
        if r.result_kind == SOLVED:
            gen[(r.domain, r.problem, r.config)] = r.generated
    ratios = {}
    for (d, p, c), g in gen.items():
        if c == numerator and (d, p, denominator) in gen:
            ratios[(d, p)] = g / gen[(d, p, denominator)]
    ratios = dict(sorted(ratios.items()))
    summary = RatioSummary(numerator, denominator, ratios, geometric_mean(ratios.values()))
    if subset is not None:
        wanted = set(subset)
        # "p001" selects p001.pddl as well
        sub = {k: v for k, v in ratios.items() if k[1] in wanted or os.path.splitext(k[1])[0] in wanted}
        summary.subset_ratios = sub
        summary.subset_geometric_mean = geometric_mean(sub.values())
    return summary
