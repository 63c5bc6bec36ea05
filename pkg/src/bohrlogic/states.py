"""Density-matrix states and the state-proposition pairing.

The pairing of a state ψ with a proposition S is the upper set of contexts
in which S(C) holds with probability one.  Values of the measure components
are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .contexts import Context, ContextError, ContextPoset
from .frame import SigmaOpen, UpperSet
from .linalg import (
    CMatrix,
    DimensionError,
    GaussianRational,
    NotAProjectionError,
    conj_transpose,
    is_hermitian,
    is_projection,
    matrix_from_json,
    matrix_to_json,
    mul,
    trace,
)


class StateError(ValueError):
    """Not a density matrix."""


def is_positive_semidefinite(a: CMatrix) -> bool:
    """Exact PSD test for a Hermitian matrix by symmetric elimination.

    A zero pivot forces its whole row to vanish; otherwise eliminate and
    recurse on the Schur complement.
    """
    if not is_hermitian(a):
        return False
    m = [list(r) for r in a.to_rows()]
    while m:
        p = m[0][0]
        if p.re < 0:
            return False
        if p.is_zero():
            if any(not x.is_zero() for x in m[0]):
                return False
            m = [row[1:] for row in m[1:]]
            continue
        rest = []
        for i in range(1, len(m)):
            f = m[i][0] / p
            rest.append([m[i][j] - f * m[0][j] for j in range(1, len(m))])
        m = rest
    return True


@dataclass(frozen=True)
class State:
    """A density matrix ρ; ψ(a) = tr(ρ a)."""

    rho: CMatrix

    def __post_init__(self):
        rho = self.rho
        if not rho.is_square():
            raise StateError("density matrix must be square")
        if not is_hermitian(rho):
            raise StateError("density matrix must be Hermitian")
        if trace(rho) != 1:
            raise StateError("density matrix must have trace 1")
        if not is_positive_semidefinite(rho):
            raise StateError("density matrix must be positive semidefinite")

    @property
    def n(self) -> int:
        return self.rho.rows

    @classmethod
    def pure(cls, vector) -> "State":
        """Vector state |Ψ><Ψ| / <Ψ|Ψ> for a nonzero Gaussian-rational vector."""
        v = [GaussianRational.coerce(x) for x in vector]
        norm = sum((x.norm2() for x in v), Fraction(0))
        if norm == 0:
            raise StateError("zero vector has no state")
        col = CMatrix(len(v), 1, v)
        outer = mul(col, conj_transpose(col))
        inv = GaussianRational(1 / norm)
        return cls(CMatrix(outer.rows, outer.cols, [inv * x for x in outer.entries]))


def state_eval(psi: State, p: CMatrix) -> Fraction:
    """ψ(p) = tr(ρ p) for a projection p."""
    if p.shape != psi.rho.shape:
        raise DimensionError(f"state is {psi.rho.shape}, projection is {p.shape}")
    if not is_projection(p):
        raise NotAProjectionError("state_eval takes a projection")
    value = trace(mul(psi.rho, p))
    assert value.is_real()
    return value.re


def measure_component(psi: State, s: SigmaOpen, c: int | Context) -> dict[int, Fraction]:
    """μ_C(S): D ↦ ψ(S(D)) for every D ⊇ C in the poset."""
    poset = s.poset
    i = c if isinstance(c, int) else poset.index(c)
    if not 0 <= i < len(poset):
        raise ContextError(f"context index {i} out of range")
    _check_dim(psi, poset)
    values = {j: state_eval(psi, s.value(j)) for j in poset.up(i)}
    for a in values:
        for b in values:
            if poset.leq[a][b] and values[a] > values[b]:
                raise AssertionError("measure component is not monotone")
    return values


def pairing(psi: State, s: SigmaOpen) -> UpperSet:
    """Contexts where S(C) is true with probability one."""
    poset = s.poset
    _check_dim(psi, poset)
    members = frozenset(j for j in range(len(poset)) if state_eval(psi, s.value(j)) == 1)
    return UpperSet(poset, members)


def _check_dim(psi: State, poset: ContextPoset) -> None:
    if psi.n != poset.n:
        raise DimensionError(f"state on C^{psi.n} paired with a poset over M_{poset.n}")


def state_from_json(obj) -> State:
    if not isinstance(obj, dict) or "rho" not in obj:
        raise ValueError("state must be an object with 'rho'")
    return State(matrix_from_json(obj["rho"]))


def state_to_json(psi: State) -> dict:
    return {"rho": matrix_to_json(psi.rho)}
