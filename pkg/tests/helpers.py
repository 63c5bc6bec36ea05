"""Random generators and brute-force oracles shared by the tests."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

from bohrlogic.contexts import ContextPoset
from bohrlogic.gelfand import RationalOpen
from bohrlogic.linalg import CMatrix, GaussianRational, add, diag, scale, zeros
from bohrlogic.states import State


def rand_frac(rng: random.Random, span: int = 4, den: int = 3) -> Fraction:
    return Fraction(rng.randint(-span * den, span * den), rng.randint(1, den))


def random_state(n: int, rng: random.Random, terms: int = 2) -> State:
    """Convex mixture of vector states with Gaussian-integer vectors."""
    weights = [Fraction(rng.randint(1, 5)) for _ in range(terms)]
    total = sum(weights)
    rho = zeros(n)
    for w in weights:
        while True:
            v = [GaussianRational(rng.randint(-2, 2), rng.randint(-2, 2)) for _ in range(n)]
            if any(not x.is_zero() for x in v):
                break
        rho = add(rho, scale(State.pure(v).rho, GaussianRational(w / total)))
    return State(rho)


def random_diag_observable(n: int, rng: random.Random) -> CMatrix:
    # small value pool so that eigenvalues repeat now and then
    pool = [rand_frac(rng, 2, 2) for _ in range(max(1, n - 1))]
    return diag([rng.choice(pool) for _ in range(n)])


def random_rational_open(rng: random.Random, pieces: int = 3) -> RationalOpen:
    parts = []
    for _ in range(rng.randint(0, pieces)):
        lo = None if rng.random() < 0.15 else rand_frac(rng, 3, 2)
        hi = None if rng.random() < 0.15 else rand_frac(rng, 3, 2)
        if lo is not None and hi is not None and lo > hi:
            lo, hi = hi, lo
        parts.append((lo, hi))
    return RationalOpen(tuple(parts))


def monotone_assignments(poset: ContextPoset) -> list[tuple[int, ...]]:
    """All monotone mask tuples, straight from the refinement maps."""
    ranges = [range(1 << len(c.atoms)) for c in poset.contexts]
    out = []
    for masks in product(*ranges):
        if all(
            poset.refine(i, j, masks[i]) & ~masks[j] == 0
            for (i, j) in poset.refinement
            if i != j
        ):
            out.append(masks)
    return out


def prime_filter(bits: list[int], top: int) -> list[int]:
    """Indices of prime elements by the definition, over all pairs."""
    out = []
    for k, p in enumerate(bits):
        if p == top:
            continue
        ok = True
        for u in bits:
            if not u & ~p:
                continue
            for w in bits:
                if w & ~p and not (u & w) & ~p:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(k)
    return out


def partition_count(n: int, k: int) -> int:
    """p(n, k) by p(n, k) = p(n-1, k-1) + p(n-k, k)."""
    if n == 0 and k == 0:
        return 1
    if n <= 0 or k <= 0 or k > n:
        return 0
    return partition_count(n - 1, k - 1) + partition_count(n - k, k)


def lower_sets(k: int) -> list[frozenset]:
    """Down-closed families of subsets of {0..k-1} (the UDL oracle)."""
    subsets = [frozenset(i for i in range(k) if m >> i & 1) for m in range(1 << k)]
    out = []
    for choice in range(1 << len(subsets)):
        fam = {subsets[i] for i in range(len(subsets)) if choice >> i & 1}
        if all(t in fam for s in fam for t in subsets if t <= s):
            out.append(frozenset(fam))
    return out
