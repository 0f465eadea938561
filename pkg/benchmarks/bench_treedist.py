#!/usr/bin/env python3
"""Benchmark the compiled tree-edit-distance kernel against the pure-Python
fallback, standalone and inside a guided synthesis run.

Usage: python benchmarks/bench_treedist.py [--pairs 2000] [--seed 0]
"""

from __future__ import annotations

import argparse
import random
import time

from proofsynth._kernels import ted_py

try:
    from proofsynth._kernels import ted_cy
except ImportError:
    ted_cy = None

from proofsynth.datagen import raw_count, unrank_term
from proofsynth.treedist import prepare_term


def make_pairs(rng: random.Random, n_pairs: int, size: int):
    pairs = []
    for _ in range(n_pairs):
        a = prepare_term(unrank_term(size, rng.randrange(raw_count(size, 0))))
        b = prepare_term(unrank_term(size, rng.randrange(raw_count(size, 0))))
        intern: dict[str, int] = {}
        la = [intern.setdefault(l, len(intern)) for l in a.labels]
        lb = [intern.setdefault(l, len(intern)) for l in b.labels]
        pairs.append((la, a.lmds, a.keyroots, lb, b.lmds, b.keyroots))
    return pairs


def timed(kernel, pairs) -> tuple[float, list[int]]:
    start = time.perf_counter()
    out = [kernel(*p) for p in pairs]
    return time.perf_counter() - start, out


def bench_kernels(n_pairs: int, seed: int) -> None:
    print(f"{'size':>5} {'pure-python':>13} {'cython':>13} {'speedup':>8}")
    for size in (4, 6, 8, 10, 12):
        rng = random.Random(seed + size)
        pairs = make_pairs(rng, n_pairs, size)
        t_py, d_py = timed(ted_py.tree_distance, pairs)
        if ted_cy is None:
            print(f"{size:>5} {t_py / n_pairs * 1e6:>11.1f}us {'n/a':>13} {'n/a':>8}")
            continue
        t_cy, d_cy = timed(ted_cy.tree_distance, pairs)
        assert d_py == d_cy, "kernels disagree"
        print(
            f"{size:>5} {t_py / n_pairs * 1e6:>11.1f}us {t_cy / n_pairs * 1e6:>11.1f}us "
            f"{t_py / t_cy:>7.1f}x"
        )


def bench_synthesis(seed: int) -> None:
    import os
    import subprocess
    import sys

    # run in subprocesses so the kernel choice is made fresh at import
    snippet = (
        "import time, statistics;"
        "from proofsynth.datagen import sampled_pairs;"
        "from proofsynth.search import SynthesisConfig, CorruptedOracle, synthesize;"
        "from proofsynth.treedist import CostKind, kernel_backend;"
        f"pairs = sampled_pairs(40, seed={seed}, sizes=range(6, 10), normal_only=True);"
        "t0 = time.perf_counter();"
        "[synthesize(g, SynthesisConfig(cost_kind=CostKind.ED, max_pops=20000, seed=i,"
        " guide_source=CorruptedOracle(2)), reference=r) for i, (g, r) in enumerate(pairs)];"
        "print(f'{kernel_backend()}: {time.perf_counter() - t0:.2f}s for 40 guided searches')"
    )
    sys.stdout.flush()
    for env_extra in ({}, {"PROOFSYNTH_PURE": "1"}):
        env = {**os.environ, **env_extra}
        subprocess.run([sys.executable, "-c", snippet], env=env, check=True)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pairs", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    if ted_cy is None:
        print("compiled kernel not available; showing pure-python timings only")
    print("== tree_distance on random term pairs ==")
    bench_kernels(args.pairs, args.seed)
    print("\n== end-to-end guided synthesis (ED, corrupted guides) ==")
    bench_synthesis(args.seed)


if __name__ == "__main__":
    main()
