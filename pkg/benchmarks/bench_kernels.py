"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import sys
import timeit

from ilw import _pykernels, generate, kernels
from ilw.stability import _masks


def ladder_cases():
    rng = random.Random(0)
    out = []
    for _ in range(20):
        m = generate.matrix(rng, 15, 15, 1)
        rh, cl = _masks(m, 1, 0)
        out.append((rh, cl, *m.shape))
    m = generate.half_graph(14)
    rh, cl = _masks(m, 1, 0)
    out.append((rh, cl, 14, 14))
    return out


def box_cases():
    rng = random.Random(1)
    out = []
    for _ in range(5):
        boxes = [(rng.getrandbits(10) or 1, rng.getrandbits(10) or 1) for _ in range(16)]
        out.append(([b[0] for b in boxes], [b[1] for b in boxes]))
    return out


def shatter_cases():
    rng = random.Random(2)
    out = []
    for _ in range(200):
        n = 12
        lows = [rng.getrandbits(n) for _ in range(300)]
        highs = [rng.getrandbits(n) & ~lo for lo in lows]
        w = rng.getrandbits(n) or 1
        out.append((lows, highs, w, bin(w).count("1")))
    return out


def run(backend, repeat):
    ladders, boxes, shatters = ladder_cases(), box_cases(), shatter_cases()
    jobs = {
        "ladder_search": lambda: [backend.ladder_search(*c) for c in ladders],
        "ie_signed_boxes": lambda: [backend.ie_signed_boxes(*c) for c in boxes],
        "is_shattered": lambda: [backend.is_shattered(*c) for c in shatters],
    }
    return {name: min(timeit.repeat(job, number=1, repeat=repeat)) for name, job in jobs.items()}


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    if kernels.compiled is None:
        print("compiled kernels are not built; only the Python timings are shown")
    py = run(_pykernels, args.repeat)
    cc = run(kernels.compiled, args.repeat) if kernels.compiled is not None else {}
    print(f"{'kernel':<18}{'python (s)':>12}{'compiled (s)':>14}{'speedup':>10}")
    for name, t in py.items():
        if name in cc:
            print(f"{name:<18}{t:>12.4f}{cc[name]:>14.4f}{t / cc[name]:>9.1f}x")
        else:
            print(f"{name:<18}{t:>12.4f}{'-':>14}{'-':>10}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
