import dataclasses
import json
import os
import shutil

import numpy as np
import pytest

from heurlearn.cli import main
from heurlearn.evaluation import ReportRow, format_report, parse_report
from heurlearn.learn import LinearModel, Standardizer, read_dataset, read_model, write_model

from helpers import corpus_path, drive_problem

CHAIN_DOMAIN = corpus_path("chain_domain.pddl")
CHAIN_PROBLEM = corpus_path("chain_problem.pddl")

STEPS_DOMAIN = """\
(define (domain steps)
  (:requirements :strips)
  (:predicates (s0) (s1) (s2) (s3))
  (:action up0 :parameters () :precondition (s0) :effect (and (s1) (not (s0))))
  (:action up1 :parameters () :precondition (s1) :effect (and (s2) (not (s1))))
  (:action up2 :parameters () :precondition (s2) :effect (and (s3) (not (s2)))))
"""


def write(path, text):
    with open(path, "w") as fh:
        fh.write(text)
    return str(path)


def solve(tmp_path, domain, problem, *extra):
    plan, stats = tmp_path / "plan.txt", tmp_path / "stats.json"
    for p in (plan, stats):
        if p.exists():
            p.unlink()
    code = main(["solve", str(domain), str(problem), "--plan", str(plan), "--stats", str(stats), *extra])
    assert stats.exists(), "stats file must always be written"
    return code, plan, json.loads(stats.read_text())


@pytest.fixture
def steps_dir(tmp_path):
    d = tmp_path / "steps"
    d.mkdir()
    write(d / "domain.pddl", STEPS_DOMAIN)
    for k in (1, 2, 3):
        write(d / f"p{k}.pddl", f"(define (problem p{k}) (:domain steps) (:init (s{3 - k})) (:goal (s3)))")
    return d


@pytest.fixture
def transport_suite(tmp_path):
    out = tmp_path / "suite"
    assert main(["generate", "transport", "--out", str(out), "--count", "3", "--seed", "5",
                 "--locations", "4", "--packages", "2-3"]) == 0
    return out


# ---------------------------------------------------------------------------
# solve


def test_solve_gbfs_goal_count(tmp_path):
    code, plan, stats = solve(tmp_path, CHAIN_DOMAIN, CHAIN_PROBLEM, "--heuristic", "goal-count", "--search", "gbfs")
    assert code == 0
    assert plan.read_text() == "(a1)\n(a2)\n; cost = 2\n"
    assert stats["result_kind"] == "solved" and stats["generated"] == 3


def test_solve_ucs(tmp_path):
    code, plan, stats = solve(tmp_path, CHAIN_DOMAIN, CHAIN_PROBLEM, "--search", "ucs")
    assert code == 0 and stats["plan_cost"] == 2


def test_solve_unsolvable(tmp_path):
    dom = corpus_path("drive_domain.pddl")
    prob = write(tmp_path / "p.pddl", drive_problem(locations=("a", "b", "c"), goal={"t1": "c"}))
    code, plan, stats = solve(tmp_path, dom, prob, "--heuristic", "ff")
    assert code == 2 and not plan.exists() and stats["result_kind"] == "exhausted_unsolvable"


def test_solve_node_limit(tmp_path, transport_suite):
    code, _, stats = solve(tmp_path, transport_suite / "domain.pddl", transport_suite / "p001.pddl",
                           "--search", "ucs", "--max-generated", "2")
    assert code == 1 and stats["result_kind"] == "node_limit"


def test_solve_parse_error(tmp_path, capsys):
    bad = write(tmp_path / "bad.pddl", "(define (problem x) (:domain chain) (:init (a)) (:goal (zz)))")
    code, _, stats = solve(tmp_path, CHAIN_DOMAIN, bad)
    assert code == 3 and "zz" in capsys.readouterr().err
    assert stats["result_kind"] == "error"


def test_solve_model_schema_mismatch(tmp_path):
    model = tmp_path / "model.bin"
    write_model(LinearModel(np.zeros(6), 1.0, Standardizer.identity(6), "simple"), model)
    code, _, _ = solve(tmp_path, CHAIN_DOMAIN, CHAIN_PROBLEM, "--heuristic", f"ff-correction:{model}")
    assert code == 3
    code, _, _ = solve(tmp_path, CHAIN_DOMAIN, CHAIN_PROBLEM, "--heuristic", f"standalone:{model}")
    assert code == 0


def test_usage_errors_exit_3(tmp_path):
    with pytest.raises(SystemExit) as info:
        main(["solve", CHAIN_DOMAIN])
    assert info.value.code == 3


# ---------------------------------------------------------------------------
# collect / train


def test_collect_rows_and_determinism(tmp_path, steps_dir, capsys):
    out1, out2 = tmp_path / "d1.csv", tmp_path / "d2.csv"
    for out in (out1, out2):
        assert main(["collect", str(steps_dir / "domain.pddl"), str(steps_dir), "--schema", "ff",
                     "--out", str(out)]) == 0
    assert "collected 9 states from 3 solved problems" in capsys.readouterr().out
    d = read_dataset(out1)
    assert len(d) == 9 and d.y.tolist() == [1, 0, 2, 1, 0, 3, 2, 1, 0]
    assert out1.read_bytes() == out2.read_bytes()


def test_collect_skips_unsolved(tmp_path, capsys):
    d = tmp_path / "mixed"
    d.mkdir()
    shutil.copy(corpus_path("drive_domain.pddl"), d / "domain.pddl")
    write(d / "ok.pddl", drive_problem())
    write(d / "stuck.pddl", drive_problem(locations=("a", "b", "c"), goal={"t1": "c"}))
    assert main(["collect", str(d / "domain.pddl"), str(d), "--schema", "simple", "--out",
                 str(tmp_path / "o.csv")]) == 0
    assert "skipped 1 unsolved: stuck.pddl" in capsys.readouterr().out


def test_collect_empty_dir(tmp_path, capsys):
    empty = tmp_path / "empty"
    empty.mkdir()
    assert main(["collect", CHAIN_DOMAIN, str(empty), "--out", str(tmp_path / "x.csv")]) == 3
    assert "no problems" in capsys.readouterr().err


def test_train_ridge_and_mlp(tmp_path, steps_dir, capsys):
    data = tmp_path / "d.csv"
    main(["collect", str(steps_dir / "domain.pddl"), str(steps_dir), "--schema", "ff", "--out", str(data)])
    capsys.readouterr()
    assert main(["train", str(data), "--kind", "ridge", "--out", str(tmp_path / "r.json")]) == 0
    assert "final training mse" in capsys.readouterr().out
    m = read_model(tmp_path / "r.json")
    d = read_dataset(data)
    assert np.corrcoef(m.predict_batch(d.X), d.y)[0, 1] > 0
    outs = []
    for name in ("a.json", "b.json"):
        assert main(["train", str(data), "--kind", "mlp", "--epochs", "50", "--seed", "3",
                     "--out", str(tmp_path / name)]) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1] and "epoch" in outs[0]
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_train_unknown_kind(tmp_path):
    with pytest.raises(SystemExit) as info:
        main(["train", "x.csv", "--kind", "svm", "--out", str(tmp_path / "m.json")])
    assert info.value.code == 3


def test_train_bad_dataset_row(tmp_path, capsys):
    bad = write(tmp_path / "bad.csv", "# schema: ff\nff_value,num_unsatisfied_goals,op_count,"
                "ignored_deletes_total,ignored_deletes_avg,cost_to_go\n1,2,3,4,5,6\n1,2,x,4,5,6\n")
    assert main(["train", bad, "--kind", "ridge", "--out", str(tmp_path / "m.json")]) == 3
    assert "row" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# generate


def test_generate_manifest(tmp_path):
    out = tmp_path / "g"
    assert main(["generate", "parking", "--out", str(out), "--count", "2", "--curbs", "3", "--cars", "3"]) == 0
    lines = (out / "manifest.csv").read_text().splitlines()
    assert lines[0] == "problem,seed,config" and len(lines) == 3
    assert sorted(os.listdir(out)) == ["domain.pddl", "manifest.csv", "p001.pddl", "p002.pddl"]


def test_generate_walk(tmp_path):
    demo = tmp_path / "demo"
    assert main(["generate", "blocks-demo", "--out", str(demo), "--blocks", "3"]) == 0
    walks = tmp_path / "walks"
    assert main(["generate", "walk", str(demo / "domain.pddl"), str(demo / "demo.pddl"), "--out", str(walks),
                 "--count", "3", "--length", "4"]) == 0
    assert main(["evaluate", str(walks), "--config", "U=ucs", "--out", str(tmp_path / "r.csv")]) == 0
    rows = parse_report((tmp_path / "r.csv").read_text())
    assert len(rows) == 3 and all(r.result_kind == "solved" for r in rows)


# ---------------------------------------------------------------------------
# evaluate / report


def _rows(path):
    return parse_report(path.read_text())


def test_evaluate_cross_product_and_workers(tmp_path, transport_suite):
    args = ["evaluate", str(transport_suite), "--config", "FF=gbfs:ff", "--config", "GC=gbfs:goal-count"]
    assert main(args + ["--out", str(tmp_path / "r1.csv"), "--parallel-workers", "1"]) == 0
    assert main(args + ["--out", str(tmp_path / "r4.csv"), "--parallel-workers", "4"]) == 0
    r1, r4 = _rows(tmp_path / "r1.csv"), _rows(tmp_path / "r4.csv")
    assert len(r1) == 6
    assert [dataclasses.replace(r, wall_time=0.0) for r in r1] == [dataclasses.replace(r, wall_time=0.0) for r in r4]


def test_evaluate_timeout(tmp_path, transport_suite):
    big = tmp_path / "big"
    assert main(["generate", "transport", "--out", str(big), "--count", "2", "--locations", "6",
                 "--trucks", "2", "--packages", "4", "--capacity", "2"]) == 0
    assert main(["evaluate", str(big), "--config", "U=ucs", "--timeout", "0.001",
                 "--out", str(tmp_path / "r.csv")]) == 0
    assert {r.result_kind for r in _rows(tmp_path / "r.csv")} == {"timeout"}


def test_evaluate_errors_become_rows(tmp_path, transport_suite):
    write(transport_suite / "zz_broken.pddl", "(define (problem")
    assert main(["evaluate", str(transport_suite), "--config", "GC=gbfs:goal-count",
                 "--out", str(tmp_path / "r.csv")]) == 0
    rows = _rows(tmp_path / "r.csv")
    assert len(rows) == 4 and rows[-1].result_kind == "error"


def _report(tmp_path, counts_a, counts_b, kinds=None):
    rows = []
    for i, (a, b) in enumerate(zip(counts_a, counts_b)):
        rows.append(ReportRow("d", f"p{i + 1:02d}", "A", "solved", 1, a, a, 0.0))
        rows.append(ReportRow("d", f"p{i + 1:02d}", "B", (kinds or {}).get(i, "solved"), 1, b, b, 0.0))
    return write(tmp_path / "report.csv", format_report(rows))


def test_report_identity_and_closed_form(tmp_path, capsys):
    main(["report", _report(tmp_path, [5, 7, 9], [5, 7, 9]), "--pair", "A", "B"])
    assert "ratio A/B: 1.0000" in capsys.readouterr().out
    main(["report", _report(tmp_path, [10, 1000], [100, 100]), "--pair", "A", "B"])
    assert "ratio A/B: 1.0000" in capsys.readouterr().out


def test_report_no_common(tmp_path, capsys):
    path = _report(tmp_path, [10], [20], kinds={0: "timeout"})
    main(["report", path, "--pair", "A", "B"])
    out = capsys.readouterr().out
    assert "ratio A/B: n/a" in out
    assert "A      |    1" in out and "B      |    0" in out


def test_report_subset(tmp_path, capsys):
    main(["report", _report(tmp_path, [10, 40, 90], [10, 10, 10]), "--pair", "A", "B", "--subset", "p02,p03"])
    out = capsys.readouterr().out
    assert "ratio A/B on subset: 6.0000" in out


def test_report_subset_accepts_stems(tmp_path, transport_suite, capsys):
    out = tmp_path / "r.csv"
    assert main(["evaluate", str(transport_suite), "--config", "A=gbfs:ff", "--config", "B=gbfs:goal-count",
                 "--out", str(out)]) == 0
    capsys.readouterr()
    main(["report", str(out), "--pair", "A", "B", "--subset", "p001,p002.pddl"])
    assert "on subset" in (text := capsys.readouterr().out) and "(over 2 problems)" in text
