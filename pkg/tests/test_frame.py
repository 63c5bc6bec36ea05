import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bohrlogic.contexts import partition_type
from bohrlogic.fixtures import load_json
from bohrlogic.frame import (
    CapExceeded,
    FrameError,
    SigmaOpen,
    bot,
    chi_up,
    double_neg,
    double_neg_by_definition,
    enumerate_frame,
    heyting_implies,
    heyting_neg,
    join,
    join_all,
    m3_example_open,
    meet,
    random_open,
    s_p,
    sigma_from_json,
    sigma_to_json,
    top,
)
from bohrlogic.linalg import diag, identity, proj_leq, proj_meet, zeros

from helpers import monotone_assignments

EXPECTED_SIZES = {"m2_chain.json": 5, "m2_star.json": 65, "chain3.json": 16, "m3_fixture.json": 3376}


@pytest.mark.parametrize("name", sorted(EXPECTED_SIZES))
def test_frame_size_matches_brute_force(posets, name):
    p = posets[name]
    frame = enumerate_frame(p)
    assert len(frame) == EXPECTED_SIZES[name]
    assert sorted(e.masks for e in frame) == sorted(monotone_assignments(p))


def test_frame_sizes_by_case_split():
    # M_2: S(⊥)=0 leaves 4 choices per maximal context; S(⊥)=1 forces the top
    assert EXPECTED_SIZES["m2_chain.json"] == 1 + 4
    assert EXPECTED_SIZES["m2_star.json"] == 1 + 4**3
    # M_3 fixture: each D_2 ⊂ D_3 pair contributes 15 monotone pairs
    assert EXPECTED_SIZES["m3_fixture.json"] == 1 + 15**3


def test_cap(star):
    with pytest.raises(CapExceeded):
        enumerate_frame(star, cap=64)
    assert len(enumerate_frame(star, cap=65)) == 65


def test_cap_from_environment(star, monkeypatch):
    monkeypatch.setenv("BOHR_CAP", "10")
    with pytest.raises(CapExceeded):
        enumerate_frame(star)


def test_rejects_non_monotone(chain3):
    with pytest.raises(FrameError):
        SigmaOpen.from_masks(chain3, [1, 0, 0])
    with pytest.raises(FrameError):
        SigmaOpen.from_masks(chain3, [0, 4, 0])  # D_2 has two atoms
    with pytest.raises(FrameError):
        SigmaOpen.from_assignment(chain3, {5: [0]})


def _implies_by_projections(s, t):
    """(S→T)(C): atoms e of C with e∧S(D) ≤ T(D) for every D ⊇ C, as matrices."""
    p = s.poset
    masks = []
    for c, ctx in enumerate(p.contexts):
        m = 0
        for a, e in enumerate(ctx.atoms):
            if all(proj_leq(proj_meet(p.contexts[d].projection(p.refinement[(c, d)][a]), s.value(d)), t.value(d))
                   for d in p.up(c)):
                m |= 1 << a
        masks.append(m)
    return SigmaOpen.from_masks(p, masks)


@pytest.mark.parametrize("name", ["chain3.json", "m2_star.json", "m3_fixture.json"])
def test_implication_against_projection_oracle(posets, name):
    p = posets[name]
    rng = random.Random(name)
    for _ in range(25):
        s, t = random_open(p, rng), random_open(p, rng)
        assert heyting_implies(s, t) == _implies_by_projections(s, t)


@pytest.mark.parametrize("name", ["chain3.json", "m2_star.json", "m2_chain.json"])
def test_implication_is_largest_solution(posets, name):
    p = posets[name]
    frame = enumerate_frame(p)
    rng = random.Random(1)
    pairs = [(s, t) for s in frame for t in frame]
    for s, t in rng.sample(pairs, min(400, len(pairs))):
        best = join_all(p, [r for r in frame if meet(r, s) <= t])
        assert heyting_implies(s, t) == best
        assert heyting_neg(s) == heyting_implies(s, bot(p))


def test_chain_meet_example(chain3):
    s = m3_example_open(chain3)
    t = chi_up(1, chain3)
    m = meet(s, t)
    assert m.value(0) == zeros(3)
    assert m.value(1) == diag(1, 1, 0)
    assert m.value(2) == identity(3)


def test_m3_excluded_middle_fails(m3):
    s = m3_example_open(m3)
    assert s.value(0) == zeros(3)
    nn = double_neg(s)
    assert nn.value(0) == identity(3)
    assert nn != s
    assert heyting_neg(s) == bot(m3)
    assert join(s, heyting_neg(s)) != top(m3)
    assert double_neg_by_definition(s) == nn


def test_example_fixture_file_matches(m3):
    assert sigma_from_json(load_json("m3_example.json"), m3) == m3_example_open(m3)


def test_example_values_are_rotated_diag110(m3):
    s = m3_example_open(m3)
    for i, c in enumerate(m3.contexts):
        if partition_type(c) == (2, 1):
            big = next(a for a, r in zip(c.atoms, c.ranks) if r == 2)
            assert s.value(i) == big


def test_chi_up_meets(star):
    tops = star.maximal_indices()
    assert len(tops) == 3
    a, b = tops[0], tops[1]
    assert meet(chi_up(a, star), chi_up(b, star)) == bot(star)
    assert meet(chi_up(0, star), chi_up(a, star)) == chi_up(a, star)
    assert chi_up(0, star) == top(star)


def test_s_p(star, chain3):
    x = star.contexts[star.maximal_indices()[0]].atoms[0]
    s = s_p(x, star)
    assert [m != 0 for m in s.masks] == [i == star.maximal_indices()[0] for i in range(len(star))]
    q = s_p(diag(1, 1, 0), chain3)
    assert [q.value(i) for i in range(3)] == [zeros(3), diag(1, 1, 0), diag(1, 1, 0)]
    assert s_p(identity(3), chain3) == top(chain3)


@pytest.mark.parametrize("name", ["chain3.json", "m2_star.json", "m3_fixture.json"])
def test_double_negation_closed_form(posets, name):
    p = posets[name]
    rng = random.Random(3)
    for _ in range(50):
        s = random_open(p, rng, density=rng.random())
        nn = double_neg(s)
        assert nn == double_neg_by_definition(s)
        assert s <= nn
        assert heyting_neg(nn) == heyting_neg(s)


@given(st.data())
def test_heyting_laws_on_star(star, data):
    frame = enumerate_frame(star)
    pick = st.sampled_from(frame)
    r, s, t = data.draw(pick), data.draw(pick), data.draw(pick)
    assert meet(s, heyting_implies(s, t)) <= t
    assert heyting_implies(s, s) == top(star)
    assert heyting_implies(join(r, s), t) == meet(heyting_implies(r, t), heyting_implies(s, t))
    assert heyting_implies(r, meet(s, t)) == meet(heyting_implies(r, s), heyting_implies(r, t))
    assert meet(r, join(s, t)) == join(meet(r, s), meet(r, t))


def test_sigma_json_round_trip(posets):
    rng = random.Random(5)
    for p in posets.values():
        for _ in range(10):
            s = random_open(p, rng)
            assert sigma_from_json(sigma_to_json(s), p) == s
    with pytest.raises(ValueError):
        sigma_from_json({"assignment": {"x": [0]}}, p)


def test_different_posets_do_not_mix(star, chain3):
    with pytest.raises(FrameError):
        meet(top(star), top(chain3))
