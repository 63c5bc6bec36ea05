import random
from fractions import Fraction

import pytest
import sympy

from bohrlogic.contexts import partition_type
from bohrlogic.frame import FrameError, UpperSet, m3_example_open, random_open, top
from bohrlogic.linalg import CMatrix, DimensionError, GaussianRational, diag
from bohrlogic.states import (
    State,
    StateError,
    is_positive_semidefinite,
    measure_component,
    pairing,
    state_eval,
    state_from_json,
    state_to_json,
)

from helpers import random_state


def _hermitian(rng, n):
    e = {}
    for i in range(n):
        e[i, i] = GaussianRational(rng.randint(-2, 3))
        for j in range(i + 1, n):
            z = GaussianRational(rng.randint(-2, 2), rng.randint(-2, 2))
            e[i, j], e[j, i] = z, z.conjugate()
    return CMatrix(n, n, [e[i, j] for i in range(n) for j in range(n)])


def test_psd_against_sympy():
    rng = random.Random(4)
    agree = 0
    for _ in range(80):
        a = _hermitian(rng, rng.randint(1, 3))
        s = sympy.Matrix(a.rows, a.cols, [sympy.Rational(x.re) + sympy.I * sympy.Rational(x.im) for x in a.entries])
        expected = all(sympy.re(sympy.nsimplify(v)) >= 0 for v in s.eigenvals())
        assert is_positive_semidefinite(a) == expected
        agree += expected
    assert 0 < agree < 80  # both outcomes exercised


def test_state_validation():
    with pytest.raises(StateError):
        State(diag(1, 1))
    with pytest.raises(StateError):
        State(diag(2, -1))
    with pytest.raises(StateError):
        State(CMatrix.from_rows([[1, 1], [0, 0]]))
    with pytest.raises(StateError):
        State.pure([0, 0])
    psi = State.pure([1, 1])
    assert psi.rho == CMatrix.from_rows([["1/2", "1/2"], ["1/2", "1/2"]])


def test_measure_example(m3):
    psi = State(diag(0, 0, 1))
    s = m3_example_open(m3)
    mu = measure_component(psi, s, 0)
    assert mu[0] == 0
    diag_d2 = next(i for i, c in enumerate(m3.contexts) if c.contains(diag(1, 1, 0)) and partition_type(c) == (2, 1))
    assert mu[diag_d2] == 0
    for i, c in enumerate(m3.contexts):
        if partition_type(c) == (1, 1, 1):
            assert mu[i] == 1


def test_pairing_example(m3):
    psi = State(diag(0, 0, 1))
    upper = pairing(psi, m3_example_open(m3))
    assert upper.members == {i for i, c in enumerate(m3.contexts) if partition_type(c) == (1, 1, 1)}


def test_pairing_of_top_is_everything(posets):
    rng = random.Random(0)
    for p in posets.values():
        psi = random_state(p.n, rng)
        assert pairing(psi, top(p)).members == set(range(len(p)))


@pytest.mark.parametrize("name", ["chain3.json", "m2_star.json", "m3_fixture.json"])
def test_pairing_matches_measure(posets, name):
    p = posets[name]
    rng = random.Random(name)
    for _ in range(20):
        psi, s = random_state(p.n, rng), random_open(p, rng)
        mu = measure_component(psi, s, 0)
        assert pairing(psi, s).members == {i for i, v in mu.items() if v == 1}
        for i, v in mu.items():
            assert 0 <= v <= 1 and isinstance(v, Fraction)


def test_state_eval_requires_projection_and_dimension(chain3):
    psi = State(diag(0, 0, 1))
    with pytest.raises(ValueError):
        state_eval(psi, diag(2, 0, 0))
    with pytest.raises(DimensionError):
        pairing(State(diag(1, 0)), top(chain3))


def test_upper_set_validation(chain3):
    with pytest.raises(FrameError):
        UpperSet(chain3, {1})
    assert UpperSet.up_of(chain3, 1).sorted() == [1, 2]


def test_state_json_round_trip():
    rng = random.Random(9)
    for n in (2, 3):
        psi = random_state(n, rng)
        assert state_from_json(state_to_json(psi)).rho == psi.rho
    with pytest.raises(ValueError):
        state_from_json({"sigma": 1})
