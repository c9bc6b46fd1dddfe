"""Compare the compiled kernel with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--steps N]

Times single-pair evaluation and full search steps on the 7-vertex torus and
the 3x10 torus, and checks that both backends walk the same trajectory.
"""

import argparse
import random
import time

from polyrealize import _backend
from polyrealize.functional import FunctionalMode, build_pair_table
from polyrealize.surface import generate

DIRS = ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1))


def random_pairs(count, seed=0):
    rng = random.Random(seed)
    pt = lambda: tuple(rng.randint(-50, 50) for _ in range(3))
    return [((pt(), pt(), pt()), (pt(), pt(), pt())) for _ in range(count)]


def bench_pairs(mod, pairs):
    t0 = time.perf_counter()
    for t1, t2 in pairs:
        mod.pair_contribution(t1, t2)
    return time.perf_counter() - t0


def walk(mod, t, steps, seed=0):
    """Random unit moves with greedy acceptance; returns (seconds, final value)."""
    rng = random.Random(seed)
    table = build_pair_table(t)
    coords = []
    while len(coords) < t.n:
        p = tuple(rng.randint(100, 150) for _ in range(3))
        if mod.point_in_general_position(coords, -1, p):
            coords.append(p)
    eng = mod.Engine(coords, table.rows, table.edges, 0, 250)
    mask = FunctionalMode().mask
    cur = eng.value(mask)
    xyz = [list(p) for p in coords]
    t0 = time.perf_counter()
    for _ in range(steps):
        v = rng.randrange(t.n)
        dx, dy, dz = DIRS[rng.randrange(6)]
        p = xyz[v]
        if eng.propose_move(v, p[0] + dx, p[1] + dy, p[2] + dz) == 1:
            new = eng.staged_value(mask)
            if new < cur:
                eng.commit()
                p[0] += dx
                p[1] += dy
                p[2] += dz
                cur = new
            else:
                eng.discard()
    return time.perf_counter() - t0, cur


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--steps", type=int, default=20000)
    ap.add_argument("--pairs", type=int, default=20000)
    args = ap.parse_args()

    py = _backend.python_backend()
    cy = _backend.compiled_backend()
    if cy is None:
        print("compiled backend not built; only the Python fallback is available")
        return

    pairs = random_pairs(args.pairs)
    tp, tc = bench_pairs(py, pairs), bench_pairs(cy, pairs)
    print(f"pair_contribution x{args.pairs}: python {tp:.3f}s  compiled {tc:.3f}s  "
          f"speedup {tp / tc:.1f}x")

    for name, t in [("moebius_torus", generate("moebius_torus")),
                    ("standard_torus 3 10", generate("standard_torus", 3, 10))]:
        sp, vp = walk(py, t, args.steps)
        sc, vc = walk(cy, t, args.steps)
        same = "identical" if vp == vc else "DIFFERENT"
        print(f"{name}: {args.steps} steps  python {sp:.3f}s  compiled {sc:.3f}s  "
              f"speedup {sp / sc:.1f}x  final values {same}")


if __name__ == "__main__":
    main()
