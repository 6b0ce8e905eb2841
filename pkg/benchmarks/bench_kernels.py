"""Time the compiled and pure-Python kernels on the same inputs.

    python benchmarks/bench_kernels.py [--repeat N] [--json out.json]
"""

import argparse
import json
import time

import numpy as np

from regtri._backend import available_backends, get_kernels
from regtri.construct import build_extremal, random_regular, validate_params
from regtri.graph import Graph


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def cases():
    g_big = build_extremal(validate_params(301, 126), verify=False)
    g_mid = random_regular(200, 40, 1)
    g_small = random_regular(25, 12, 3)
    edges = np.array(g_small.edges(), dtype=np.int64)
    g_cut = random_regular(20, 6, 4)
    return [
        ("edge_triangles G(301,126)", lambda k: k.edge_triangles(g_big.bits)),
        ("triangle_total random n=200 k=40", lambda k: k.triangle_total(g_mid.bits)),
        ("anneal n=25 k=12, 20000 steps",
         lambda k: k.anneal(g_small.bits, edges.copy(), 20000, 12.0, 0.999, 1e-3, 1, 1000, 12)[0]),
        ("regular_search minimize (9,4)", lambda k: k.regular_search(9, 4, 1)["best"]),
        ("max_cut n=20", lambda k: k.max_cut(g_cut.bits)[0]),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", help="also write results here")
    args = ap.parse_args(argv)
    backends = available_backends()
    rows = []
    print(f"{'case':40s}" + "".join(f"{b:>12s}" for b in backends) + f"{'speedup':>10s}")
    for name, fn in cases():
        timing = {}
        results = {}
        for b in backends:
            kern = get_kernels(b)
            timing[b], out = best_of(lambda: fn(kern), args.repeat if b != "python" else 1)
            results[b] = out
        if len(backends) == 2:
            a, p = results["cython"], results["python"]
            same = all(np.array_equal(x, y) for x, y in zip(a, p)) if isinstance(a, tuple) \
                else a == p
            if not same:
                raise SystemExit(f"backends disagree on {name}")
        speed = timing["python"] / timing["cython"] if len(backends) == 2 else float("nan")
        print(f"{name:40s}" + "".join(f"{timing[b]:12.4f}" for b in backends) + f"{speed:10.1f}x")
        rows.append({"case": name, "seconds": timing, "speedup": speed})
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
