"""The compiled kernels must agree with the pure-Python reference bit for bit."""

import os
import random
import subprocess
import sys

import pytest

from bohrlogic import fixtures, kernels
from bohrlogic.frame import random_open

PY = kernels.get_backend("python")
CY = kernels.get_backend("cython")

needs_compiled = pytest.mark.skipif(not kernels.compiled_available(), reason="extension not built")


def _posets(posets, wide):
    return list(posets.values()) + [wide]


@needs_compiled
def test_heyting_kernels_agree(posets, cabello_poset):
    rng = random.Random(0)
    for p in _posets(posets, cabello_poset):
        up = p.up_images
        for _ in range(100):
            s = random_open(p, rng, rng.random()).bits
            t = random_open(p, rng, rng.random()).bits
            raw = rng.getrandbits(p.total_atoms)
            assert CY.implies_bits(up, s, t) == PY.implies_bits(up, s, t)
            assert CY.neg_bits(up, s) == PY.neg_bits(up, s)
            assert CY.notnot_bits(up, s) == PY.notnot_bits(up, s)
            assert CY.is_upset(up, raw) == PY.is_upset(up, raw)
            assert CY.is_upset(up, s)


@needs_compiled
def test_enumeration_and_primes_agree(posets):
    for p in posets.values():
        a = CY.enumerate_upsets(p.up_images, 10**6)
        assert a == PY.enumerate_upsets(p.up_images, 10**6)
        if len(a) <= 100:
            top = (1 << p.total_atoms) - 1
            assert CY.prime_elements(a, top) == PY.prime_elements(a, top)
    for mod in (CY, PY):
        with pytest.raises(kernels.CapExceeded):
            mod.enumerate_upsets(posets["m3_fixture.json"].up_images, 100)


@needs_compiled
def test_adjunction_counter_agrees(chain3):
    elems = PY.enumerate_upsets(chain3.up_images, 100)
    table = [PY.implies_bits(chain3.up_images, s, t) for s in elems for t in elems]
    assert CY.adjunction_violations(elems, table) == PY.adjunction_violations(elems, table) == 0
    broken = list(table)
    broken[5] = 0
    assert CY.adjunction_violations(elems, broken) == PY.adjunction_violations(elems, broken) > 0


@needs_compiled
def test_search_agrees():
    rng = random.Random(3)
    instances = [fixtures.load_rayset(n) for n in fixtures.KS_UNSAT + fixtures.KS_DIM2]
    cases = [(len(rs.rays), [list(b) for b in rs.bases]) for rs in instances]
    for _ in range(200):
        n = rng.randint(1, 14)
        blocks = [rng.sample(range(n), rng.randint(1, min(n, 4))) for _ in range(rng.randint(0, 8))]
        cases.append((n, blocks))
    for n, blocks in cases:
        assert CY.exactly_one_search(n, blocks) == PY.exactly_one_search(n, blocks)


def test_search_respects_blocks():
    rng = random.Random(4)
    for _ in range(100):
        n = rng.randint(1, 10)
        blocks = [rng.sample(range(n), rng.randint(1, min(n, 3))) for _ in range(rng.randint(0, 6))]
        val, _ = PY.exactly_one_search(n, blocks)
        brute = any(
            all(sum(code >> v & 1 for v in b) == 1 for b in blocks) for code in range(1 << n)
        )
        assert (val is not None) == brute
        if val is not None:
            assert all(sum(val[v] for v in b) == 1 for b in blocks)


def test_environment_forces_python():
    env = dict(os.environ, BOHR_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from bohrlogic import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


def test_default_backend():
    expected = "cython" if kernels.compiled_available() and not os.environ.get("BOHR_PURE_PYTHON") else "python"
    assert kernels.BACKEND == expected
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


def test_benchmark_script_runs(capsys):
    import runpy
    from pathlib import Path

    script = Path(__file__).resolve().parent.parent / "benchmarks" / "bench_kernels.py"
    module = runpy.run_path(str(script))
    assert module["main"](["--quick"]) == 0
    assert "speedup" in capsys.readouterr().out
