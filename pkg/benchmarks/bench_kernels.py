"""Compare the compiled kernels with the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import time

import numpy as np

from intension import _pykernels, kernels
from intension.learners import LearnerConfig, fit_intensional
from intension.logic import universe_masks
from intension.state import sample_ostensive
from intension.tasks import ToyCpuSpec, gen_parity, gen_toycpu

try:
    from intension import _kernels
except ImportError:
    _kernels = None

NAMES = ("count_models", "accept_mask", "reject_counts", "rejection_sets", "exhaustive_weakest", "greedy_weaken")


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def use(module):
    for name in NAMES:
        setattr(kernels, name, getattr(module, name))


def cases():
    rng = np.random.default_rng(0)
    pos, neg, _ = universe_masks(12, 3)
    pick = rng.choice(pos.size, 40, replace=False)
    codes = np.arange(1 << 12, dtype=np.uint32)
    cpu = gen_toycpu(ToyCpuSpec(2))
    o_cpu = sample_ostensive(cpu, 32, np.random.default_rng(1))
    par = gen_parity(4)
    o_par = sample_ostensive(par, 5, np.random.default_rng(2))
    ex = rng.choice(pos.size, 18, replace=False)
    off, mem = _pykernels.rejection_sets(12, pos[ex], neg[ex])
    need = rng.choice(np.unique(mem), 40, replace=False)
    return [
        ("count_models n=12, 40 clauses", lambda k: k.count_models(12, pos[pick], neg[pick])),
        ("accept_mask 4096 states", lambda k: k.accept_mask(codes, pos[pick], neg[pick])),
        ("reject_counts n=12, k=3 universe", lambda k: k.reject_counts(codes[::7], pos, neg)),
        ("rejection_sets n=12, k=3 universe", lambda k: k.rejection_sets(12, pos, neg)),
        ("fit toy CPU w=2, m=32, k=10", lambda k: fit_intensional(o_cpu, LearnerConfig(cpu.n))),
        ("exhaustive_weakest 18 candidates", lambda k: k.exhaustive_weakest(12, off, mem, need)),
        ("greedy_weaken 18 candidates", lambda k: k.greedy_weaken(12, off, mem, need)),
        ("fit parity n=4, m=5, k=4", lambda k: fit_intensional(o_par, LearnerConfig(4))),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _kernels is None:
        print("compiled extension not built; only the fallback is available")
    backends = [("python", _pykernels)] + ([("cython", _kernels)] if _kernels else [])
    original = {name: getattr(kernels, name) for name in NAMES}
    print(f"{'case':<36}" + "".join(f"{b:>12}" for b, _ in backends) + ("     speedup" if _kernels else ""))
    try:
        for label, fn in cases():
            row = []
            for _, module in backends:
                use(module)
                row.append(best_of(lambda: fn(module), args.repeat))
            line = f"{label:<36}" + "".join(f"{t * 1e3:>10.2f}ms" for t in row)
            if len(row) == 2:
                line += f"{row[0] / row[1]:>11.1f}x"
            print(line)
    finally:
        for name, fn in original.items():
            setattr(kernels, name, fn)


if __name__ == "__main__":
    main()
