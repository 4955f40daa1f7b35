#!/usr/bin/env python3
"""Compare the numba and pure-numpy kernel backends.

Times the relaxed-reachability kernels (hadd + relaxed plan) on states of a
generated Transport task and one MLP SGD epoch, checks both backends agree,
and prints a table. Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import time

import numpy as np

from heurlearn import datagen
from heurlearn.ground import ground
from heurlearn.kernels import get_backend


def sample_states(task, n, seed):
    rng = random.Random(seed)
    states, s = [], task.init
    for _ in range(n):
        states.append(s)
        app = [a for a in task.actions if s.bits & a.pre_mask == a.pre_mask]
        a = rng.choice(app)
        s = type(s)((s.bits | a.add_mask) & ~a.del_mask)
    return states


def relaxed_workload(task, states):
    arr = task.relaxed_arrays
    goal = np.array(sorted(task.goal), dtype=np.int64)
    del_count = np.array([len(a.del_) for a in task.actions], dtype=np.int64)
    inputs = [s.to_array(task.n_atoms) for s in states]

    def run(k):
        out = []
        for st in inputs:
            cost, sup = k.hadd(st, arr.cost, arr.pre_ptr, arr.pre_idx, arr.add_ptr, arr.add_idx,
                               arr.pre_of_ptr, arr.pre_of_idx)
            out.append(k.relaxed_plan(st, goal, cost, sup, arr.cost, arr.pre_ptr, arr.pre_idx, del_count))
        return out

    return run


def sgd_workload(n_rows, n_features, seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n_rows, n_features))
    y = X @ rng.normal(size=n_features) + 3.0
    order = rng.permutation(n_rows).astype(np.int64)
    shapes = [(n_features, n_features), (n_features,), (n_features, 3), (3,), (3, 1), (1,)]
    init = [rng.normal(scale=0.3, size=sh) for sh in shapes]

    def run(k):
        params = [p.copy() for p in init]
        k.mlp_sgd_epoch(*params, X, y, order, 0.001)
        return params

    return run


def best_time(fn, repeat):
    fn()  # warm-up (JIT compilation for numba)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--states", type=int, default=200)
    ap.add_argument("--rows", type=int, default=20000)
    args = ap.parse_args()

    cfg = datagen.TransportConfig(locations=8, edges=12, trucks=2, packages=6, capacity=3, seed=1)
    dom, prob = datagen.gen_transport(cfg)
    task = ground(dom, prob)
    states = sample_states(task, args.states, seed=0)
    workloads = {
        f"hadd+relaxed plan ({len(states)} states, {len(task.actions)} actions)": relaxed_workload(task, states),
        f"mlp sgd epoch ({args.rows} rows x 5)": sgd_workload(args.rows, 5, seed=0),
    }

    nb, npy = get_backend("numba"), get_backend("numpy")
    print(f"{'workload':<52} {'numba ms':>10} {'numpy ms':>10} {'speedup':>8}")
    for name, run in workloads.items():
        a, b = run(nb), run(npy)
        for x, y in zip(a, b):
            if not all(np.allclose(u, v) for u, v in zip(x, y)):
                raise SystemExit(f"backends disagree on {name}")
        t_nb = best_time(lambda: run(nb), args.repeat)
        t_np = best_time(lambda: run(npy), args.repeat)
        print(f"{name:<52} {t_nb * 1e3:10.2f} {t_np * 1e3:10.2f} {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
