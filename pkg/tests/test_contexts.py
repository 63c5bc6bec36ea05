import random
from fractions import Fraction
from itertools import product

import pytest
import sympy

from bohrlogic.contexts import (
    Context,
    ContextError,
    IrrationalSpectrumError,
    bottom_context,
    build_poset,
    conjugate_context,
    context_from_blocks,
    context_from_commuting,
    context_from_json,
    context_leq,
    context_to_json,
    diagonal_context,
    enumerate_young,
    intersect,
    minimal_polynomial,
    p_sphere,
    partition_type,
    poset_from_json,
    poset_to_json,
    sphere_context,
    young_to_flag,
)
from bohrlogic.fixtures import m3_unitaries
from bohrlogic.linalg import CMatrix, DimensionError, GaussianRational, add, diag, identity, mul

from helpers import partition_count

HALF = Fraction(1, 2)


def test_atom_order_is_canonical():
    a = Context(2, (diag(0, 1), diag(1, 0)))
    b = Context(2, (diag(1, 0), diag(0, 1)))
    assert a == b and a.atoms == b.atoms


def test_context_validation():
    with pytest.raises(ContextError):
        Context(2, (diag(1, 0),))  # does not sum to 1
    with pytest.raises(ContextError):
        Context(2, (diag(1, 0), diag(1, 1)))
    with pytest.raises(ContextError):
        Context(2, (diag(2, 0), diag(-1, 1)))


def test_from_commuting_generators():
    assert partition_type(context_from_commuting([diag(1, 2, 3)])) == (1, 1, 1)
    assert partition_type(context_from_commuting([diag(1, 1, 2)])) == (2, 1)
    both = context_from_commuting([diag(1, 1, 2), diag(5, 7, 7)])
    assert both == diagonal_context(3)
    assert context_from_commuting([], n=3) == bottom_context(3)


def test_from_commuting_errors():
    x = CMatrix.from_rows([[0, 1], [1, 0]])
    with pytest.raises(ContextError):
        context_from_commuting([x, diag(1, 0)])
    with pytest.raises(IrrationalSpectrumError):
        context_from_commuting([CMatrix.from_rows([[1, 1], [1, 0]])])  # eigenvalues (1 ± √5)/2
    with pytest.raises(ContextError):
        context_from_commuting([CMatrix.from_rows([[0, 1], [0, 0]])])
    with pytest.raises(DimensionError):
        context_from_commuting([diag(1, 2), diag(1, 2, 3)])


def _to_sympy(a):
    return sympy.Matrix(a.rows, a.cols, [sympy.Rational(x.re) + sympy.I * sympy.Rational(x.im) for x in a.entries])


@pytest.mark.parametrize("seed", range(6))
def test_minimal_polynomial_against_sympy(seed):
    rng = random.Random(seed)
    u1, u2 = m3_unitaries()
    d = diag([rng.choice([1, 2, Fraction(-1, 3)]) for _ in range(3)])
    u = rng.choice([u1, u2, identity(3)])
    a = mul(mul(u, d), CMatrix(3, 3, [x.conjugate() for x in _transpose(u).entries]))
    coeffs = minimal_polynomial(a)
    x = sympy.Symbol("x")
    expected = sympy.Poly(sympy.Mul(*[(x - sympy.Rational(v)) for v in set(d[i, i].re for i in range(3))]), x)
    assert [sympy.Rational(c) for c in reversed(coeffs)] == expected.all_coeffs()


def _transpose(a):
    return CMatrix(a.cols, a.rows, [a[j, i] for i in range(a.cols) for j in range(a.rows)])


def _brute_intersection(c, d):
    """Atoms of c ∩ d: minimal nonzero projections of c that also lie in d."""
    common = []
    for mask in range(1, 1 << len(c.atoms)):
        if d.mask_of(c.projection(mask)) is not None:
            common.append(mask)
    minimal = [m for m in common if not any(o != m and o & m == o for o in common)]
    return Context(c.n, tuple(c.projection(m) for m in minimal))


def test_intersection_against_projection_oracle():
    u1, u2 = m3_unitaries()
    family = [bottom_context(3), context_from_blocks(3, [[0, 1], [2]]), context_from_blocks(3, [[0], [1, 2]]),
              diagonal_context(3)]
    family += [conjugate_context(c, u) for c in family[1:] for u in (u1, u2)]
    for c, d in product(family, repeat=2):
        m = intersect(c, d)
        assert m == _brute_intersection(c, d)
        assert context_leq(m, c) and context_leq(m, d)


def test_m2_maximal_contexts_meet_in_bottom():
    assert intersect(sphere_context(1, 0, 0), sphere_context(0, 0, 1)) == bottom_context(2)


def test_seeds_d2_d3_give_chain():
    p = build_poset([context_from_blocks(3, [[0, 1], [2]]), diagonal_context(3)])
    assert [partition_type(c) for c in p.contexts] == [(3,), (2, 1), (1, 1, 1)]
    assert all(p.leq[i][j] for i in range(3) for j in range(i, 3))


def test_m3_fixture_shape(m3):
    types = [partition_type(c) for c in m3.contexts]
    assert types == [(3,)] + [(2, 1)] * 3 + [(1, 1, 1)] * 3
    # each D_2 type sits under exactly one D_3 type
    for i in range(1, 4):
        assert sum(m3.leq[i][j] for j in range(4, 7)) == 1


def test_order_axioms_and_refinement_composition(posets):
    for p in posets.values():
        size = len(p)
        for i in range(size):
            assert p.leq[i][i] and p.leq[0][i]
            for j in range(size):
                if i != j and p.leq[i][j]:
                    assert not p.leq[j][i] and i < j  # index order extends inclusion
                for k in range(size):
                    if p.leq[i][j] and p.leq[j][k]:
                        assert p.leq[i][k]
                        for a in range(len(p.contexts[i].atoms)):
                            assert p.refine(j, k, p.refinement[(i, j)][a]) == p.refinement[(i, k)][a]
        for i, j in product(range(size), repeat=2):
            m = intersect(p.contexts[i], p.contexts[j])
            assert m in p.contexts


def test_refinement_is_matrix_sum(m3):
    for (i, j), images in m3.refinement.items():
        for a, img in enumerate(images):
            assert m3.contexts[j].projection(img) == m3.contexts[i].atoms[a]


@pytest.mark.parametrize("n", range(1, 11))
def test_young_counts_match_recurrence(n):
    for k in range(1, n + 1):
        parts = enumerate_young(k, n)
        assert len(parts) == partition_count(n, k)
        assert len(set(parts)) == len(parts)
        for p in parts:
            assert sum(p) == n and len(p) == k and list(p) == sorted(p, reverse=True)


def test_young_small_cases():
    assert enumerate_young(2, 2) == [(1, 1)]
    assert enumerate_young(1, 3) == [(3,)]
    assert young_to_flag((1, 1)) == (1, 2)
    assert young_to_flag((2, 1)) == (1, 3)
    with pytest.raises(ValueError):
        enumerate_young(3, 2)


def test_partition_types_of_fixture_cover_young():
    seen = {partition_type(c) for c in build_poset([diagonal_context(3), context_from_blocks(3, [[0], [1, 2]])]).contexts}
    assert seen == {tuple(p) for k in range(1, 4) for p in enumerate_young(k, 3)}


def _sphere_point(s, t):
    d = 1 + s * s + t * t
    return (2 * s / d, 2 * t / d, (s * s + t * t - 1) / d)


def test_sphere_projection_and_antipodes():
    rng = random.Random(7)
    for _ in range(20):
        x, y, z = _sphere_point(Fraction(rng.randint(-9, 9), rng.randint(1, 5)), Fraction(rng.randint(-9, 9), rng.randint(1, 5)))
        p, q = p_sphere(x, y, z), p_sphere(-x, -y, -z)
        assert add(p, q) == identity(2)
        assert sphere_context(x, y, z) == sphere_context(-x, -y, -z)
    assert p_sphere(0, 0, 1)[0, 1] == GaussianRational(0, HALF)
    with pytest.raises(ContextError):
        p_sphere(1, 1, 0)


def test_context_json_round_trip(m3):
    for c in m3.contexts:
        assert context_from_json(context_to_json(c)) == c
    gens = {"n": 2, "generators": [{"rows": 2, "cols": 2, "entries": [1, 0, 0, 2]}]}
    assert context_from_json(gens) == diagonal_context(2)


def test_poset_json_round_trip_and_validation(posets):
    for p in posets.values():
        doc = poset_to_json(p)
        q = poset_from_json(doc)
        assert q.contexts == p.contexts and q.leq == p.leq and q.refinement == p.refinement
    doc = poset_to_json(posets["chain3.json"])
    swapped = dict(doc, contexts=list(reversed(doc["contexts"])))
    with pytest.raises(ValueError):
        poset_from_json(swapped)
    bad = dict(doc, leq=[[1, 1, 1], [1, 1, 1], [0, 0, 1]])
    with pytest.raises(ValueError):
        poset_from_json(bad)
    missing_bottom = dict(doc, contexts=doc["contexts"][1:], leq=None)
    del missing_bottom["leq"], missing_bottom["refinement"]
    with pytest.raises(ValueError):
        poset_from_json(missing_bottom)
