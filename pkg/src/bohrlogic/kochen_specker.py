"""Noncontextual valuations on finite ray sets, and points of the finite frame.

A valuation gives every ray 0 or 1 with exactly one 1 in each orthogonal
basis; for an observable diagonal in a basis its value is the eigenvalue on
the ray valued 1.  The searches here find such valuations (or certify there
are none) on finite families, and enumerate the prime elements of O(Σ) on
small posets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import kernels
from .contexts import Context, ContextPoset
from .frame import SigmaOpen, chi_up, default_cap, enumerate_frame, join_all, top
from .gelfand import RationalOpen, bohrified_transform
from .linalg import (
    CMatrix,
    GaussianRational,
    add,
    conj_transpose,
    identity,
    mul,
    scale,
    zeros,
)


class RaySetError(ValueError):
    """Malformed ray set."""


def _inner(u, v) -> GaussianRational:
    total = GaussianRational(0)
    for a, b in zip(u, v):
        total = total + a.conjugate() * b
    return total


def _proportional(u, v) -> bool:
    n = len(u)
    for i in range(n):
        for j in range(i + 1, n):
            if u[i] * v[j] != u[j] * v[i]:
                return False
    return True


@dataclass(frozen=True)
class RaySet:
    """Rays in C^dim and the orthogonal bases (index tuples) built from them."""

    dim: int
    rays: tuple
    bases: tuple

    def __post_init__(self):
        rays = tuple(tuple(GaussianRational.coerce(x) for x in r) for r in self.rays)
        bases = tuple(tuple(int(i) for i in b) for b in self.bases)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "bases", bases)
        for k, r in enumerate(rays):
            if len(r) != self.dim:
                raise RaySetError(f"ray {k} has length {len(r)}, expected {self.dim}")
            if all(x.is_zero() for x in r):
                raise RaySetError(f"ray {k} is zero")
        for a in range(len(rays)):
            for b in range(a + 1, len(rays)):
                if _proportional(rays[a], rays[b]):
                    raise RaySetError(f"rays {a} and {b} are proportional")
        for k, b in enumerate(bases):
            if len(b) != self.dim or len(set(b)) != len(b):
                raise RaySetError(f"basis {k} must list {self.dim} distinct rays")
            for i in b:
                if not 0 <= i < len(rays):
                    raise RaySetError(f"basis {k} refers to missing ray {i}")
            for x in range(len(b)):
                for y in range(x + 1, len(b)):
                    if not _inner(rays[b[x]], rays[b[y]]).is_zero():
                        raise RaySetError(f"basis {k}: rays {b[x]} and {b[y]} are not orthogonal")

    def ray_projection(self, i: int) -> CMatrix:
        v = self.rays[i]
        col = CMatrix(self.dim, 1, v)
        norm = sum((x.norm2() for x in v), Fraction(0))
        return scale(mul(col, conj_transpose(col)), GaussianRational(1 / norm))

    def basis_context(self, b: int) -> Context:
        return Context(self.dim, tuple(self.ray_projection(i) for i in self.bases[b]))

    def relabel(self, perm: Sequence[int]) -> "RaySet":
        """Ray ``i`` becomes ray ``perm[i]``."""
        rays = [None] * len(self.rays)
        for i, r in enumerate(self.rays):
            rays[perm[i]] = r
        return RaySet(self.dim, tuple(rays), tuple(tuple(perm[i] for i in b) for b in self.bases))


@dataclass(frozen=True)
class Valuation:
    """0/1 value per ray index."""

    values: tuple

    def __getitem__(self, i):
        return self.values[i]

    def relabel(self, perm: Sequence[int]) -> "Valuation":
        out = [0] * len(self.values)
        for i, x in enumerate(self.values):
            out[perm[i]] = x
        return Valuation(tuple(out))


def search_with_stats(rs: RaySet) -> tuple[Valuation | None, int]:
    """Backtracking search; returns the first valuation found and the node count."""
    values, nodes = kernels.exactly_one_search(len(rs.rays), [list(b) for b in rs.bases])
    return (None if values is None else Valuation(tuple(values))), nodes


def valuation_search(rs: RaySet) -> Valuation | None:
    return search_with_stats(rs)[0]


def first_violated_basis(v: Valuation, rs: RaySet) -> int | None:
    if len(v.values) != len(rs.rays):
        raise RaySetError("valuation and ray set disagree on the number of rays")
    for k, b in enumerate(rs.bases):
        if sum(v.values[i] for i in b) != 1:
            return k
    return None


def noncontextuality_check(v: Valuation, rs: RaySet) -> bool:
    """One value per ray is built in; what remains is exactly one 1 per basis."""
    return first_violated_basis(v, rs) is None


def basis_observable(rs: RaySet, b: int, eigenvalues: Sequence) -> CMatrix:
    """Σ λ_i P_i over the rays of basis ``b``."""
    out = zeros(rs.dim)
    for i, lam in zip(rs.bases[b], eigenvalues):
        out = add(out, scale(rs.ray_projection(i), GaussianRational(Fraction(lam))))
    return out


def induced_value(v: Valuation, rs: RaySet, b: int, a: CMatrix) -> Fraction:
    """Eigenvalue of ``a`` on the ray of basis ``b`` valued 1."""
    ones = [i for i in rs.bases[b] if v.values[i] == 1]
    if len(ones) != 1:
        raise RaySetError(f"basis {b} does not have exactly one ray valued 1")
    coeffs = rs.basis_context(b).coefficients(a)
    if coeffs is None:
        raise RaySetError(f"observable is not diagonal in basis {b}")
    ctx = rs.basis_context(b)
    target = rs.ray_projection(ones[0])
    k = ctx.atoms.index(target)
    if not coeffs[k].is_real():
        raise RaySetError("observable is not self-adjoint")
    return coeffs[k].re


def func_check(v: Valuation, rs: RaySet, b: int, a: CMatrix, alpha, beta) -> bool:
    """V(f(a)) == f(V(a)) for the affine map f(t) = alpha t + beta."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    fa = add(scale(a, GaussianRational(alpha)), scale(identity(rs.dim), GaussianRational(beta)))
    return induced_value(v, rs, b, fa) == alpha * induced_value(v, rs, b, a) + beta


def exhaustive_valuations(rs: RaySet, limit: int | None = None) -> list[Valuation]:
    """All valuations by brute force over 2^rays assignments (oracle use)."""
    n = len(rs.rays)
    out = []
    for code in range(1 << n):
        vals = tuple((code >> i) & 1 for i in range(n))
        if all(sum(vals[i] for i in b) == 1 for b in rs.bases):
            out.append(Valuation(vals))
            if limit is not None and len(out) >= limit:
                break
    return out


def parity_obstruction(rs: RaySet) -> bool:
    """True when an odd number of bases each use every ray an even number of times.

    Any valuation puts exactly one 1 in each basis, so the total count over
    bases equals the number of bases; if every ray occurs an even number of
    times that total must be even.
    """
    counts = [0] * len(rs.rays)
    for b in rs.bases:
        for i in b:
            counts[i] += 1
    return len(rs.bases) % 2 == 1 and all(c % 2 == 0 for c in counts)


def rays_poset_seeds(rs: RaySet) -> list[Context]:
    return [rs.basis_context(b) for b in range(len(rs.bases))]


# --- points of the finite frame --------------------------------------------------


@dataclass(frozen=True)
class FramePoint:
    """A prime element P of the frame: P != ⊤ and U∧V ≤ P ⇒ U ≤ P or V ≤ P."""

    element: SigmaOpen

    def validate(self, frame: Sequence[SigmaOpen]) -> None:
        p = self.element.bits
        if p == top(self.element.poset).bits:
            raise ValueError("a point cannot be the top element")
        for u in frame:
            if not u.bits & ~p:
                continue
            for w in frame:
                if w.bits & ~p and not (u.bits & w.bits) & ~p:
                    raise ValueError("element is not prime")


def find_points(poset: ContextPoset, cap: int | None = None) -> list[FramePoint]:
    """Prime elements of the enumerated frame (brute force over all pairs)."""
    cap = default_cap() if cap is None else cap
    frame = enumerate_frame(poset, cap)
    bits = [e.bits for e in frame]
    idx = kernels.prime_elements(bits, top(poset).bits)
    return [FramePoint(frame[i]) for i in idx]


def atom_point(poset: ContextPoset, g: int) -> FramePoint:
    """The point missing global atom ``g``: every atom not refining into ``g``."""
    bits = 0
    for h, img in enumerate(poset.up_images):
        if not img >> g & 1:
            bits |= 1 << h
    return FramePoint(SigmaOpen(poset, bits))


@dataclass(frozen=True)
class PointMap:
    """The frame map p* to the two-element frame: True for ``*``, False for ∅."""

    point: FramePoint

    def __call__(self, s: SigmaOpen) -> bool:
        return bool(s.bits & ~self.point.element.bits)

    def preserves_frame_laws(self, frame: Sequence[SigmaOpen]) -> bool:
        """Top, bottom, binary meets and binary joins over the whole frame.

        The frame is finite, so every join is a finite one and binary joins
        plus the empty join settle them all.
        """
        poset = self.point.element.poset
        if not self(top(poset)) or self(SigmaOpen(poset, 0)):
            return False
        for u in frame:
            for w in frame:
                if self(u & w) != (self(u) and self(w)):
                    return False
                if self(u | w) != (self(u) or self(w)):
                    return False
        return True

    def recovered(self, frame: Sequence[SigmaOpen]) -> SigmaOpen:
        """⋁{S : p*(S) = ∅}."""
        return join_all(self.point.element.poset, [s for s in frame if not self(s)])


def pt_of_point(p: FramePoint) -> PointMap:
    if p.element.bits == top(p.element.poset).bits:
        raise ValueError("a point cannot be the top element")
    return PointMap(p)


def point_choice(p: FramePoint, c: int) -> int | None:
    """Atom of context c singled out by the point, read through the Gelfand transform.

    Uses the observable a = Σ i·e_i on c and the opens S_(C,U) with U a small
    interval around each eigenvalue; returns None when p*(χ_↑C) = ∅.
    """
    poset = p.element.poset
    pmap = pt_of_point(p)
    if not pmap(chi_up(c, poset)):
        return None
    ctx = poset.contexts[c]
    a = zeros(poset.n)
    for i, e in enumerate(ctx.atoms):
        a = add(a, scale(e, GaussianRational(i)))
    hits = []
    for i in range(len(ctx.atoms)):
        u = RationalOpen.interval(Fraction(2 * i - 1, 2), Fraction(2 * i + 1, 2))
        if pmap(bohrified_transform(a, c, c, u, poset)):
            hits.append(i)
    if len(hits) != 1:
        raise AssertionError("a point must single out exactly one atom")
    return hits[0]


def section_search(poset: ContextPoset) -> dict[int, int] | None:
    """Choose one atom per context, compatible with every refinement map.

    Such a choice is the finite form of a map from contexts to points that
    is inverse-monotone and satisfies σ(D) ≱ χ_↑C ⇔ C ⊆ D.  Returns the
    first choice found (contexts bottom-up, atoms in index order) or None.
    """
    size = len(poset)
    choice: dict[int, int] = {}

    def allowed(d):
        cands = poset.contexts[d].full_mask
        for c in poset.down(d):
            if c != d:
                cands &= poset.refinement[(c, d)][choice[c]]
        return cands

    def rec(d):
        if d == size:
            return True
        cands = allowed(d)
        for a in range(len(poset.contexts[d].atoms)):
            if cands >> a & 1:
                choice[d] = a
                if rec(d + 1):
                    return True
                del choice[d]
        return False

    return dict(choice) if rec(0) else None


def section_points(poset: ContextPoset, choice: dict[int, int]) -> dict[int, FramePoint]:
    return {d: atom_point(poset, poset.offsets[d] + a) for d, a in choice.items()}


def check_section(poset: ContextPoset, sigma: dict[int, FramePoint]) -> bool:
    """Inverse monotonicity and the χ_↑C condition for a context → point map."""
    for c in range(len(poset)):
        for d in range(len(poset)):
            if poset.leq[c][d] and not sigma[d].element <= sigma[c].element:
                return False
            outside = not chi_up(c, poset) <= sigma[d].element
            if outside != poset.leq[c][d]:
                return False
    return True


# --- JSON ---------------------------------------------------------------------


def rayset_from_json(obj) -> RaySet:
    from .linalg import _parse_scalar

    if not isinstance(obj, dict) or not {"dim", "rays", "bases"} <= obj.keys():
        raise ValueError("ray set must have 'dim', 'rays' and 'bases'")
    rays = [tuple(_parse_scalar(x) for x in r) for r in obj["rays"]]
    return RaySet(obj["dim"], tuple(rays), tuple(tuple(b) for b in obj["bases"]))


def rayset_to_json(rs: RaySet) -> dict:
    def enc(x):
        return str(x.re) if x.is_real() else [str(x.re), str(x.im)]

    return {
        "dim": rs.dim,
        "rays": [[enc(x) for x in r] for r in rs.rays],
        "bases": [list(b) for b in rs.bases],
    }
