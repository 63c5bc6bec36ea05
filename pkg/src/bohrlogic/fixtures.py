"""Shipped example data and the code that generates it.

Every JSON file under ``data/`` can be rebuilt from the functions here
(``python3 -m bohrlogic.fixtures`` rewrites them); the tests check that the
shipped files and the builders agree.
"""

from __future__ import annotations

import json
from functools import reduce
from importlib import resources
from itertools import product
from math import gcd
from pathlib import Path

from .contexts import (
    ContextPoset,
    build_poset,
    conjugate_context,
    context_from_blocks,
    context_to_json,
    diagonal_context,
    poset_from_json,
    poset_to_json,
    sphere_context,
)
from .frame import m3_example_open, sigma_to_json
from .gelfand import RationalOpen, open_to_json
from .kochen_specker import RaySet, rayset_from_json, rayset_to_json, valuation_search
from .linalg import CMatrix, GaussianRational, diag, matrix_to_json, mul
from .states import State, state_to_json

DATA = "data"
_I = GaussianRational(0, 1)

# Exact rational rotations built from the 3-4-5 triangle.
_A, _B = (3, 5), (4, 5)


def _rot(axis: int) -> CMatrix:
    a = f"{_A[0]}/{_A[1]}"
    b = f"{_B[0]}/{_B[1]}"
    mb = f"-{b}"
    rows = {
        0: [[1, 0, 0], [0, a, mb], [0, b, a]],
        1: [[a, 0, mb], [0, 1, 0], [b, 0, a]],
        2: [[a, mb, 0], [b, a, 0], [0, 0, 1]],
    }[axis]
    return CMatrix.from_rows(rows)


def m3_unitaries() -> tuple[CMatrix, CMatrix]:
    """The two rational orthogonal matrices used to tilt the diagonal flag."""
    rx, ry, rz = _rot(0), _rot(1), _rot(2)
    return mul(rx, ry), mul(mul(ry, rz), rx)


def m3_poset() -> ContextPoset:
    """C·1, the diagonal D_2 = C·diag(1,1,0) + C·diag(0,0,1), D_3 = all diagonals,
    and two rotated copies of the pair D_2 ⊂ D_3."""
    d2 = context_from_blocks(3, [[0, 1], [2]])
    d3 = diagonal_context(3)
    seeds = [d2, d3]
    for u in m3_unitaries():
        seeds += [conjugate_context(d2, u), conjugate_context(d3, u)]
    return build_poset(seeds)


def chain3_poset() -> ContextPoset:
    """C·1 ⊂ D_2 ⊂ D_3 in M_3."""
    return build_poset([context_from_blocks(3, [[0, 1], [2]]), diagonal_context(3)])


def m2_star_poset() -> ContextPoset:
    """C·1 below the three maximal contexts of M_2 along the coordinate axes."""
    return build_poset([sphere_context(1, 0, 0), sphere_context(0, 1, 0), sphere_context(0, 0, 1)])


def m2_chain_poset() -> ContextPoset:
    """C·1 ⊂ one maximal context of M_2."""
    return build_poset([diagonal_context(2)])


def cabello18() -> RaySet:
    """18 rays of C^4 in 9 orthogonal bases, each ray in exactly two bases."""
    bases = [
        [(0, 0, 0, 1), (0, 0, 1, 0), (1, 1, 0, 0), (1, -1, 0, 0)],
        [(0, 0, 0, 1), (0, 1, 0, 0), (1, 0, 1, 0), (1, 0, -1, 0)],
        [(1, -1, 1, -1), (1, -1, -1, 1), (1, 1, 0, 0), (0, 0, 1, 1)],
        [(1, -1, 1, -1), (1, 1, 1, 1), (1, 0, -1, 0), (0, 1, 0, -1)],
        [(0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 1), (1, 0, 0, -1)],
        [(1, -1, -1, 1), (1, 1, 1, 1), (1, 0, 0, -1), (0, 1, -1, 0)],
        [(1, 1, -1, 1), (1, 1, 1, -1), (1, -1, 0, 0), (0, 0, 1, 1)],
        [(1, 1, -1, 1), (-1, 1, 1, 1), (1, 0, 1, 0), (0, 1, 0, -1)],
        [(1, 1, 1, -1), (-1, 1, 1, 1), (1, 0, 0, 1), (0, 1, -1, 0)],
    ]
    return _rayset_from_bases(4, bases)


def _primitive(v):
    g = reduce(gcd, (abs(x) for x in v))
    v = tuple(x // g for x in v)
    first = next(x for x in v if x)
    return v if first > 0 else tuple(-x for x in v)


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def integer_rays3_family() -> RaySet:
    """Rays of R^3 with entries in {0, ±1, ±2} (up to sign), plus, for each
    orthogonal pair among them, the third ray completing the basis."""
    base = sorted({_primitive(v) for v in product(range(-2, 3), repeat=3) if any(v)})
    bases = []
    for i, a in enumerate(base):
        for b in base[i + 1:]:
            if sum(x * y for x, y in zip(a, b)) == 0:
                bases.append([a, b, _primitive(_cross(a, b))])
    return _rayset_from_bases(3, bases)


def prune_unsat(rs: RaySet) -> RaySet:
    """Drop bases one at a time, in order, while no valuation exists."""
    if valuation_search(rs) is not None:
        raise ValueError("ray set admits a valuation")
    keep = list(rs.bases)
    changed = True
    while changed:
        changed = False
        for b in list(keep):
            trial = [x for x in keep if x != b]
            cand = _restrict(rs, trial)
            if valuation_search(cand) is None:
                keep = trial
                changed = True
    return _restrict(rs, keep)


def _restrict(rs: RaySet, bases) -> RaySet:
    vecs = [[tuple(int(x.re) for x in rs.rays[i]) for i in b] for b in bases]
    return _rayset_from_bases(rs.dim, vecs)


def integer_rays3_core() -> RaySet:
    return prune_unsat(integer_rays3_family())


def _rayset_from_bases(dim, bases) -> RaySet:
    """Canonicalize integer rays (primitive, first nonzero entry positive), sort
    them, and index the bases."""
    rays = sorted({_primitive(v) for b in bases for v in b})
    idx = {r: k for k, r in enumerate(rays)}
    out = sorted({tuple(sorted(idx[_primitive(v)] for v in b)) for b in bases})
    return RaySet(dim, tuple(rays), tuple(out))


def qubit_rays() -> RaySet:
    """Three orthonormal bases of C^2, one of them complex."""
    return RaySet(
        2,
        ((1, 0), (0, 1), (1, 1), (1, -1), (1, _I), (1, -_I)),
        ((0, 1), (2, 3), (4, 5)),
    )


def qubit_rays_pythagorean() -> RaySet:
    return RaySet(2, ((3, 4), (4, -3), (5, 12), (12, -5)), ((0, 1), (2, 3)))


# --- JSON documents --------------------------------------------------------------


def _with_comment(doc: dict, text: str) -> dict:
    return {"comment": text, **doc}


def documents() -> dict[str, dict]:
    m3 = m3_poset()
    chain = chain3_poset()
    d2, d3 = context_from_blocks(3, [[0, 1], [2]]), diagonal_context(3)
    docs = {
        "m3_fixture.json": _with_comment(
            poset_to_json(m3),
            "M_3: bottom, diagonal D_2 and D_3, and their conjugates by the rational "
            "rotations Rx*Ry and Ry*Rz*Rx (3-4-5 angles); closed under intersection.",
        ),
        "m3_example.json": _with_comment(
            sigma_to_json(m3_example_open(m3), "m3_fixture.json"),
            "S(C.1) = 0, rank-two atom on every (2,1) context, identity on every (1,1,1) context.",
        ),
        "chain3.json": _with_comment(poset_to_json(chain), "M_3 chain C.1 < D_2 < D_3."),
        "chain3_example.json": _with_comment(
            sigma_to_json(m3_example_open(chain), "chain3.json"),
            "The same S restricted to the chain.",
        ),
        "chain3_up_d2.json": _with_comment(
            {"poset": "chain3.json", "assignment": {"0": [], "1": [0, 1], "2": [0, 1, 2]}},
            "Indicator of the contexts containing D_2.",
        ),
        "m2_star.json": _with_comment(
            poset_to_json(m2_star_poset()),
            "M_2: bottom and the maximal contexts of the x, y and z axes of the Bloch sphere.",
        ),
        "m2_chain.json": _with_comment(poset_to_json(m2_chain_poset()), "M_2 chain C.1 < diagonal context."),
        "cabello18.json": _with_comment(
            rayset_to_json(cabello18()),
            "18 rays, 9 bases in C^4 (Cabello, Estebaranz, Garcia-Alcaine 1996); every ray "
            "lies in two bases and the number of bases is odd.",
        ),
        "ks3_integer.json": _with_comment(
            rayset_to_json(integer_rays3_core()),
            "Peres-style family in C^3 with integer entries: rays with entries in "
            "{0,+-1,+-2} and cross-product completions of their orthogonal pairs, "
            "pruned greedily to bases that still admit no valuation.",
        ),
        "ks2_qubit.json": _with_comment(rayset_to_json(qubit_rays()), "Three bases of C^2."),
        "ks2_pythagorean.json": _with_comment(
            rayset_to_json(qubit_rays_pythagorean()), "Two real bases of C^2 with 3-4-5 and 5-12-13 entries."
        ),
        "m3_seeds.json": _with_comment(
            {"n": 3, "seeds": [context_to_json(d2), context_to_json(d3)]},
            "Seeds for `bohr poset build`; the result is chain3.json.",
        ),
        "state_e3.json": _with_comment(
            state_to_json(State(diag([0, 0, 1]))), "Pure state on the third basis vector of C^3."
        ),
        "observable_122.json": _with_comment(
            {"matrix": matrix_to_json(diag([1, 2, 2]))}, "diag(1,2,2), an element of D_2 and D_3."
        ),
        "open_near_1.json": _with_comment(
            open_to_json(RationalOpen.interval("1/2", "3/2")), "The interval (1/2, 3/2)."
        ),
    }
    return docs


def write_all(directory: Path) -> None:
    for name, doc in documents().items():
        (directory / name).write_text(dump(doc))


def dump(doc) -> str:
    """One top-level key per line, values compact; keys sorted."""
    lines = [f" {json.dumps(k)}: {json.dumps(doc[k], sort_keys=True)}" for k in sorted(doc)]
    return "{\n" + ",\n".join(lines) + "\n}\n"


def path(name: str) -> Path:
    return Path(str(resources.files(__package__).joinpath(DATA).joinpath(name)))


def load_json(name: str):
    return json.loads(path(name).read_text())


def load_poset(name: str) -> ContextPoset:
    return poset_from_json(load_json(name))


def load_rayset(name: str) -> RaySet:
    return rayset_from_json(load_json(name))


FIXTURE_POSETS = ("m3_fixture.json", "chain3.json", "m2_star.json", "m2_chain.json")
KS_UNSAT = ("cabello18.json", "ks3_integer.json")
KS_DIM2 = ("ks2_qubit.json", "ks2_pythagorean.json")


if __name__ == "__main__":
    write_all(Path(__file__).parent / DATA)
