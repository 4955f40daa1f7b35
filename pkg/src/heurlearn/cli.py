"""Command-line entry point: generate, solve, collect, train, evaluate, report.

Exit statuses of ``solve``: 0 solved (plan revalidated), 1 resource limit,
2 proven unsolvable, 3 invalid input or configuration. Usage errors also
exit with 3 so that 2 keeps its single meaning.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import random
import sys
import time

from . import datagen
from .errors import GenerationError, HeurlearnError
from .evaluation import (
    PlannerConfig,
    collect,
    evaluate,
    format_report,
    load_task,
    make_heuristic,
    parse_report,
    problem_files,
    ratio_summary,
    coverage_table,
    read_text,
    run_search,
)
from .ground import ground
from .learn import Dataset, TrainConfig, mlp_train, read_dataset, ridge_fit, training_mse, write_dataset, write_model
from .pddl import format_domain, format_problem, parse_domain, parse_problem, print_plan
from .search import NODE_LIMIT, SOLVED, TIMEOUT, SearchLimits, trace_states, uniform_cost_search, validate_plan

EXIT_SOLVED = 0
EXIT_LIMIT = 1
EXIT_UNSOLVABLE = 2
EXIT_ERROR = 3

log = logging.getLogger("heurlearn")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _limits(args):
    return SearchLimits(
        wall_clock_seconds=args.timeout if args.timeout and args.timeout > 0 else None,
        max_generated=args.max_generated,
    )


def _write(path, text):
    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# solve


def cmd_solve(args):
    start = time.perf_counter()
    stats_doc = {"result_kind": "error", "generated": 0, "expanded": 0, "evaluated": 0, "wall_time": 0.0}
    try:
        heuristic = None
        if args.search == "gbfs":
            heuristic = make_heuristic(args.heuristic)
        task = load_task(args.domain, args.problem)
        plan, stats = run_search(task, args.search, heuristic, _limits(args), start_time=start)
        stats_doc = stats.as_dict()
        if plan is not None:
            if not validate_plan(task, plan):
                print("internal error: search returned an invalid plan", file=sys.stderr)
                stats_doc["result_kind"] = "invalid_plan"
                return EXIT_ERROR
            _write(args.plan, print_plan(plan) + "\n")
            stats_doc["plan_cost"] = plan.cost
            stats_doc["plan_length"] = len(plan)
            print(f"solved: cost {plan.cost}, {len(plan)} actions, {stats.generated} generated, {stats.expanded} expanded")
            return EXIT_SOLVED
        print(f"no plan: {stats.result_kind} after {stats.generated} generated states")
        if stats.result_kind in (TIMEOUT, NODE_LIMIT):
            return EXIT_LIMIT
        return EXIT_UNSOLVABLE
    except (HeurlearnError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        stats_doc["error"] = str(exc)
        return EXIT_ERROR
    finally:
        stats_doc["wall_time"] = time.perf_counter() - start
        _write(args.stats, json.dumps(stats_doc, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# collect / train


def cmd_collect(args):
    try:
        probs = problem_files(args.problems, exclude=[args.domain])
        if not probs:
            print(f"error: no problems in {args.problems}", file=sys.stderr)
            return EXIT_ERROR
        data, summary = collect(args.domain, probs, args.schema, _limits(args))
    except (HeurlearnError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    write_dataset(data, args.out)
    print(summary.line())
    return 0


def cmd_train(args):
    try:
        data = Dataset.concat(read_dataset(p) for p in args.datasets)
        if len(data) == 0:
            print("error: dataset has no rows", file=sys.stderr)
            return EXIT_ERROR
        cfg = TrainConfig(
            learning_rate=args.lr,
            epochs=args.epochs,
            seed=args.seed,
            ridge_lambda=args.ridge_lambda,
            shuffle_each_epoch=not args.no_shuffle,
        )
        if args.kind == "ridge":
            model = ridge_fit(data, cfg.ridge_lambda)
            curve = None
        else:
            model, curve = mlp_train(data, cfg)
    except (HeurlearnError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    write_model(model, args.out)
    print(f"trained {args.kind} on {len(data)} rows ({data.schema} schema)")
    if curve is not None:
        step = max(1, len(curve) // 20)
        for epoch in list(range(step, len(curve) + 1, step)) + ([len(curve)] if len(curve) % step else []):
            print(f"epoch {epoch:5d}  mse {curve[epoch - 1]:.6g}")
    print(f"final training mse: {training_mse(model, data):.6g}")
    return 0


# ---------------------------------------------------------------------------
# generate


def _int_range(text):
    lo, _, hi = text.partition("-")
    try:
        lo = int(lo)
        hi = int(hi) if hi else lo
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or MIN-MAX, got {text!r}") from None
    if hi < lo:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _sample_configs(args, rng, i):
    seed = args.seed + i
    if args.domain_kind == "transport":
        locs = rng.randint(*args.locations)
        lo_e = locs - 1
        hi_e = locs * (locs - 1) // 2
        extra = rng.randint(*args.extra_edges)
        return datagen.TransportConfig(
            locations=locs,
            edges=min(hi_e, lo_e + extra),
            trucks=rng.randint(*args.trucks),
            packages=rng.randint(*args.packages),
            capacity=rng.randint(*args.capacity),
            seed=seed,
        )
    curbs = rng.randint(*args.curbs)
    cars = min(rng.randint(*args.cars), 2 * curbs - 2)
    return datagen.ParkingConfig(curbs=curbs, cars=cars, seed=seed)


def cmd_generate(args):
    os.makedirs(args.out, exist_ok=True)
    manifest = []
    try:
        if args.domain_kind in ("transport", "parking"):
            rng = random.Random(args.seed)
            domain = None
            for i in range(args.count):
                cfg = _sample_configs(args, rng, i)
                gen = datagen.gen_transport if args.domain_kind == "transport" else datagen.gen_parking
                domain, prob = gen(cfg)
                name = f"p{i + 1:03d}.pddl"
                _write(os.path.join(args.out, name), format_problem(prob))
                manifest.append((name, cfg.seed, json.dumps(datagen.config_dict(cfg))))
            if domain is None:
                domain = datagen.transport_domain() if args.domain_kind == "transport" else datagen.parking_domain()
            _write(os.path.join(args.out, "domain.pddl"), format_domain(domain))
        elif args.domain_kind == "blocks-demo":
            dom, prob = datagen.blocks_demo(args.blocks)
            _write(os.path.join(args.out, "domain.pddl"), format_domain(dom))
            _write(os.path.join(args.out, "demo.pddl"), format_problem(prob))
            manifest.append(("demo.pddl", "", json.dumps({"blocks": args.blocks})))
        else:  # walk
            dom = parse_domain(read_text(args.domain))
            task = ground(dom, parse_problem(read_text(args.problem), dom))
            plan, stats = uniform_cost_search(task)
            if plan is None:
                raise GenerationError(f"demonstration problem not solved ({stats.result_kind})")
            goal_state = trace_states(task, plan)[-1]
            for i in range(args.count):
                cfg = datagen.WalkConfig(walk_length=args.length, seed=args.seed + i)
                prob = datagen.random_walk_problem(task, goal_state, cfg)
                name = f"w{i + 1:03d}.pddl"
                _write(os.path.join(args.out, name), format_problem(prob))
                manifest.append((name, cfg.seed, json.dumps(datagen.config_dict(cfg))))
            _write(os.path.join(args.out, "domain.pddl"), format_domain(dom))
    except (HeurlearnError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("problem", "seed", "config"))
    writer.writerows(manifest)
    _write(os.path.join(args.out, "manifest.csv"), buf.getvalue())
    print(f"wrote {len(manifest)} problem(s) to {args.out}")
    return 0


# ---------------------------------------------------------------------------
# evaluate / report


def cmd_evaluate(args):
    try:
        specs = args.config or ["FF=gbfs:ff", "goal-count=gbfs:goal-count"]
        configs = [PlannerConfig.parse(c) for c in specs]
        names = [c.name for c in configs]
        if len(set(names)) != len(names):
            raise HeurlearnError("planner config names must be unique")
        rows = evaluate(args.suite, configs, _limits(args), workers=args.parallel_workers)
    except (HeurlearnError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    _write(args.out, format_report(rows))
    solved = sum(r.result_kind == SOLVED for r in rows)
    print(f"wrote {len(rows)} rows to {args.out} ({solved} solved)")
    return 0


def cmd_report(args):
    try:
        rows = parse_report(read_text(args.report))
    except (HeurlearnError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    print("Problems solved")
    print(coverage_table(rows))
    subset = [s for s in args.subset.split(",") if s] if args.subset else None
    for num, den in args.pair or []:
        print()
        summary = ratio_summary(rows, num, den, subset)
        for line in summary.lines():
            print(line)
        if args.per_problem:
            for (d, p), r in summary.ratios.items():
                print(f"  {d}/{p}: {r:.4f}")
    return 0


# ---------------------------------------------------------------------------


def _add_limits(p, timeout=60.0):
    p.add_argument("--timeout", type=float, default=timeout, help="wall-clock seconds (0 disables)")
    p.add_argument("--max-generated", type=int, default=None, help="generated-state budget")


def build_parser():
    parser = _Parser(prog="heurlearn", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve one problem")
    p.add_argument("domain")
    p.add_argument("problem")
    p.add_argument("--search", choices=("gbfs", "ucs"), default="gbfs")
    p.add_argument("--heuristic", default="ff",
                   help="goal-count, ff, add, standalone:MODEL or ff-correction:MODEL")
    p.add_argument("--plan", required=True, help="plan output path")
    p.add_argument("--stats", required=True, help="stats (JSON) output path")
    _add_limits(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("collect", help="build a labelled dataset from optimal plans")
    p.add_argument("domain")
    p.add_argument("problems", help="directory of problem files")
    p.add_argument("--schema", choices=("simple", "ff"), default="ff")
    p.add_argument("--out", required=True)
    _add_limits(p)
    p.set_defaults(func=cmd_collect)

    p = sub.add_parser("train", help="fit a ridge or MLP model")
    p.add_argument("datasets", nargs="+")
    p.add_argument("--kind", choices=("ridge", "mlp"), required=True)
    p.add_argument("--out", required=True)
    defaults = TrainConfig()
    p.add_argument("--lr", type=float, default=defaults.learning_rate)
    p.add_argument("--epochs", type=int, default=defaults.epochs)
    p.add_argument("--seed", type=int, default=defaults.seed)
    p.add_argument("--ridge-lambda", type=float, default=defaults.ridge_lambda)
    p.add_argument("--no-shuffle", action="store_true")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("generate", help="generate problem instances")
    gsub = p.add_subparsers(dest="domain_kind", required=True, parser_class=_Parser)
    g = gsub.add_parser("transport")
    g.add_argument("--locations", type=_int_range, default=(3, 4))
    g.add_argument("--extra-edges", type=_int_range, default=(0, 2))
    g.add_argument("--trucks", type=_int_range, default=(1, 1))
    g.add_argument("--packages", type=_int_range, default=(1, 3))
    g.add_argument("--capacity", type=_int_range, default=(1, 2))
    g = gsub.add_parser("parking")
    g.add_argument("--curbs", type=_int_range, default=(2, 3))
    g.add_argument("--cars", type=_int_range, default=(1, 4))
    g = gsub.add_parser("blocks-demo")
    g.add_argument("--blocks", type=int, default=4)
    g = gsub.add_parser("walk", help="random walks from the goal of a solved problem")
    g.add_argument("domain")
    g.add_argument("problem")
    g.add_argument("--length", type=int, default=6)
    for name, g in gsub.choices.items():
        g.add_argument("--out", required=True)
        if name != "blocks-demo":
            g.add_argument("--count", type=int, default=10)
            g.add_argument("--seed", type=int, default=0)
        g.set_defaults(func=cmd_generate)

    p = sub.add_parser("evaluate", help="run planner configs over a suite")
    p.add_argument("suite")
    p.add_argument("--config", action="append",
                   help="NAME=SEARCH:HEURISTIC (repeatable), e.g. NN-FF=gbfs:ff-correction:nn.json")
    p.add_argument("--out", required=True)
    p.add_argument("--parallel-workers", type=int, default=1)
    _add_limits(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("report", help="coverage table and generated-state ratios")
    p.add_argument("report")
    p.add_argument("--pair", nargs=2, action="append", metavar=("NUM", "DEN"),
                   help="config pair for generated-state ratios NUM/DEN")
    p.add_argument("--subset", help="comma-separated problem names for a restricted aggregate")
    p.add_argument("--per-problem", action="store_true")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
