"""Compare the compiled and pure-Python rewriting kernels.

Two measurements:

* reduce: normal forms of random words of a fixed degree against a fixed,
  already completed rule set (the kernel alone);
* substitute: images of random words under a non-linear automorphism of
  A(5), whose images have degree up to 3.

Both backends must produce identical normal forms; the script exits with
status 1 otherwise.

    python3 bench/bench_kernels.py [--degree 12] [--words 400] [--repeat 3]
"""

from __future__ import annotations

import argparse
import random
import sys
import time

from skewcalc import catalog, kernels


def _best(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def bench_reduce(label, degree, nwords, repeat, seed):
    A = catalog.get(label).with_budget(degree)
    rs = A.rewrite(degree)
    ring = A.ring
    rules = {lw: r.tail for lw, r in rs.rules.items()}
    rng = random.Random(seed)
    r = len(A.alg.names)
    words = [tuple(rng.randrange(r) for _ in range(degree)) for _ in range(nwords)]
    poly = {w: ring.one for w in words}
    rows = {}
    for name, mod in kernels.backends().items():
        def run():
            red = mod.WordReducer(rules, ring.one, ring.zero)
            return red.nf(poly)
        rows[name] = _best(run, repeat)
    return rows


def bench_substitute(degree, nwords, repeat, seed):
    """Images of random words under a non-linear automorphism of A(5)."""
    from skewcalc import aut5

    g = aut5.make_auto(1, "T1", 0)
    A = aut5.a5(3 * degree)
    rs = A.rewrite(3 * degree)
    ring = A.ring
    images = [g.map(A).images[n].terms for n in A.alg.names]
    rules = {lw: r.tail for lw, r in rs.rules.items()}
    rng = random.Random(seed)
    poly = {tuple(rng.randrange(3) for _ in range(degree)): ring.one for _ in range(nwords)}
    rows = {}
    for name, mod in kernels.backends().items():
        def run():
            red = mod.WordReducer(rules, ring.one, ring.zero)
            return mod.substitute(poly, images, red, ring.one, ring.zero)
        rows[name] = _best(run, repeat)
    return rows


def _print(kind, label, rows):
    base = rows["python"][0]
    for name, (t, _) in rows.items():
        print(f"{kind:8s} {label:6s} {name:7s} {t * 1000:9.1f} ms   x{base / t:5.2f}")


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--degree", type=int, default=12)
    p.add_argument("--words", type=int, default=400)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--subst-degree", type=int, default=4)
    p.add_argument("--algebras", default="a5,a2,a6")
    args = p.parse_args(argv)
    backends = kernels.backends()
    if "cython" not in backends:
        print("compiled kernel not built; only the pure-Python backend is available")
    print(f"default backend: {kernels.BACKEND}")
    ok = True
    for label in args.algebras.split(","):
        rows = bench_reduce(label, args.degree, args.words, args.repeat, args.seed)
        _print("reduce", label, rows)
        ok &= len({repr(sorted(out.items())) for _, out in rows.values()}) == 1
    rows = bench_substitute(args.subst_degree, args.words // 4, args.repeat, args.seed)
    _print("subst", "a5", rows)
    ok &= len({repr(sorted(out.items())) for _, out in rows.values()}) == 1
    print("outputs identical across backends" if ok else "BACKENDS DISAGREE")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
