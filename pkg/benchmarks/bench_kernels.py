"""Compare the compiled and pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times a full filtered search of {3,4} and {3,3,3} and the filter alone on
random pairings of {3,3,4}.  Both kernels must return identical results.
"""
import argparse
import random
import time

from momcensus.kernels import IMPLEMENTATION, Kernel, PyKernel
from momcensus.polyhedra import ROTATIONAL, DipyramidSpec
from momcensus.tables import kernel_tables


def best_of(repeat, fn):
    best, result = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t)
    return best, result


def random_pairing(rng, F):
    faces = list(range(F))
    rng.shuffle(faces)
    p = [0] * F
    for a, b in zip(faces[::2], faces[1::2]):
        p[a], p[b] = b, a
    return tuple(p)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if IMPLEMENTATION != "cython":
        print("compiled kernel not available; only the Python kernel will be timed")
    rows = []
    for sides in [(3, 4), (3, 3, 3)]:
        tables = kernel_tables(DipyramidSpec.of(sides), ROTATIONAL)
        results = {}
        for name, cls in [("compiled", Kernel), ("python", PyKernel)]:
            if name == "compiled" and IMPLEMENTATION != "cython":
                continue
            k = cls(tables)
            secs, res = best_of(args.repeat, lambda: k.search([], None, -1, True))
            results[name] = (secs, tuple(p for p, _ in res[0]), tuple(res[1][:3]))
        outs = {r[1:] for r in results.values()}
        assert len(outs) == 1, "kernels disagree"
        rows.append((f"search {','.join(map(str, sides))}", results))

    spec = DipyramidSpec.of((3, 3, 4))
    tables = kernel_tables(spec, ROTATIONAL)
    rng = random.Random(0)
    ps = [random_pairing(rng, spec.num_faces) for _ in range(20000)]
    results = {}
    for name, cls in [("compiled", Kernel), ("python", PyKernel)]:
        if name == "compiled" and IMPLEMENTATION != "cython":
            continue
        k = cls(tables)
        secs, res = best_of(args.repeat, lambda: [k.filter_pairing(p) for p in ps])
        results[name] = (secs, res)
    assert len({tuple(r[1]) for r in results.values()}) == 1, "kernels disagree"
    rows.append(("filter 20000 x {3,3,4}", results))

    print(f"{'task':28} {'compiled':>10} {'python':>10} {'speedup':>8}")
    for task, res in rows:
        c = res.get("compiled", (None,))[0]
        p = res["python"][0]
        speed = f"{p / c:7.1f}x" if c else "-"
        cs = f"{c:9.3f}s" if c else "-"
        print(f"{task:28} {cs:>10} {p:9.3f}s {speed:>8}")


if __name__ == "__main__":
    main()
