"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N] [--quick]

Each workload runs on both backends; results are checked equal before the
timings are reported.
"""

from __future__ import annotations

import argparse
import sys
import time

from bohrlogic import fixtures, kernels
from bohrlogic.contexts import build_poset
from bohrlogic.kochen_specker import rays_poset_seeds


def _workloads(quick: bool):
    m3 = fixtures.load_poset("m3_fixture.json")
    star = fixtures.load_poset("m2_star.json")
    cab = fixtures.load_rayset("cabello18.json")
    fam = fixtures.integer_rays3_family()
    wide = build_poset(rays_poset_seeds(cab))

    py = kernels.get_backend("python")
    m3_frame = py.enumerate_upsets(m3.up_images, 10**6)
    star_frame = py.enumerate_upsets(star.up_images, 10**6)
    star_table = [py.implies_bits(star.up_images, s, t) for s in star_frame for t in star_frame]
    wide_elems = [wide.up_images[g] for g in range(0, wide.total_atoms, 3)]

    def all_implications(mod, up, frame):
        return [mod.implies_bits(up, s, t) for s in frame for t in frame]

    def all_notnot(mod, up, frame):
        return [mod.notnot_bits(up, s) for s in frame]

    def search(mod, rs):
        return mod.exactly_one_search(len(rs.rays), [list(b) for b in rs.bases])

    out = [
        ("enumerate frame, M3 fixture (3376)", lambda m: m.enumerate_upsets(m3.up_images, 10**6)),
        ("S -> T over all pairs, M2 star", lambda m: all_implications(m, star.up_images, star_frame)),
        ("adjunction, all 65^3 triples", lambda m: m.adjunction_violations(star_frame, star_table)),
        ("prime elements, M2 star", lambda m: m.prime_elements(star_frame, (1 << star.total_atoms) - 1)),
        ("not-not over the M3 frame", lambda m: all_notnot(m, m3.up_images, m3_frame)),
        ("not-not, 73-atom poset (wide ints)", lambda m: all_notnot(m, wide.up_images, wide_elems)),
        ("exactly-one search, 18 rays", lambda m: search(m, cab)),
        ("exactly-one search, 109 rays", lambda m: search(m, fam)),
    ]
    if not quick:
        m3_prime_input = m3_frame[:400]
        out.append(("prime filter, 400 M3 opens", lambda m: m.prime_elements(m3_prime_input, (1 << m3.total_atoms) - 1)))
    return out


def _best(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--quick", action="store_true", help="one repetition, skip the slowest workload")
    args = ap.parse_args(argv)
    repeat = 1 if args.quick else args.repeat

    py = kernels.get_backend("python")
    if not kernels.compiled_available():
        print("compiled extension not built; only the Python backend is available")
    cy = kernels.get_backend("cython")

    rows = []
    for label, fn in _workloads(args.quick):
        if fn(py) != fn(cy):
            print(f"MISMATCH in {label}", file=sys.stderr)
            return 1
        tp, tc = _best(lambda: fn(py), repeat), _best(lambda: fn(cy), repeat)
        rows.append((label, tp, tc))

    width = max(len(r[0]) for r in rows)
    print(f"{'workload'.ljust(width)}  {'python':>10}  {'cython':>10}  {'speedup':>8}")
    for label, tp, tc in rows:
        print(f"{label.ljust(width)}  {tp * 1e3:8.2f}ms  {tc * 1e3:8.2f}ms  {tp / tc if tc else float('inf'):7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
