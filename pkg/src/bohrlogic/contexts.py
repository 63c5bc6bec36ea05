"""Classical contexts of M_n(C) and finite posets of them.

A context (unital commutative *-subalgebra) is stored by its partition of
unity: the minimal projections ("atoms") that span it.  Inclusion,
intersection and the Boolean algebra of projections in a context all become
questions about sums of atoms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .linalg import (
    ONE,
    ZERO,
    CMatrix,
    DimensionError,
    GaussianRational,
    add,
    commutes,
    conj_transpose,
    identity,
    is_hermitian,
    is_projection,
    matrix_from_json,
    matrix_to_json,
    mul,
    nullspace,
    rank_of_projection,
    scale,
    solve_linear_membership,
    sub,
    trace,
    zeros,
)


class ContextError(ValueError):
    """Invalid context data or an unsupported spectral computation."""


class IrrationalSpectrumError(ContextError):
    """A generator's minimal polynomial does not split over the rationals."""


def _atom_key(p: CMatrix):
    return (rank_of_projection(p), p.sort_key())


@dataclass(frozen=True)
class Context:
    """A unital commutative *-subalgebra given by its atoms.

    Atoms are kept in canonical order (rank, then entry-wise), so two
    ``Context`` values are equal iff they describe the same subalgebra.
    """

    n: int
    atoms: tuple[CMatrix, ...]

    def __post_init__(self):
        atoms = tuple(sorted(self.atoms, key=_atom_key))
        object.__setattr__(self, "atoms", atoms)
        _validate_partition(self.n, atoms)

    @cached_property
    def ranks(self) -> tuple[int, ...]:
        return tuple(rank_of_projection(a) for a in self.atoms)

    def __len__(self):
        return len(self.atoms)

    def projection(self, mask: int) -> CMatrix:
        """The element of P(C) that sums the atoms selected by ``mask``."""
        out = zeros(self.n)
        for i, a in enumerate(self.atoms):
            if mask >> i & 1:
                out = add(out, a)
        return out

    def coefficients(self, m: CMatrix):
        """Coefficients of ``m`` on the atoms, or ``None`` if ``m`` is not in C."""
        if m.shape != (self.n, self.n):
            raise DimensionError(f"expected a {self.n}x{self.n} matrix, got {m.shape}")
        coeffs = []
        out = zeros(self.n)
        for a, r in zip(self.atoms, self.ranks):
            c = trace(mul(m, a)) / r
            coeffs.append(c)
            if not c.is_zero():
                out = add(out, scale(a, c))
        return tuple(coeffs) if out == m else None

    def contains(self, m: CMatrix) -> bool:
        return self.coefficients(m) is not None

    def mask_of(self, p: CMatrix):
        """Atom bitmask of a projection lying in C, or ``None``."""
        coeffs = self.coefficients(p)
        if coeffs is None:
            return None
        mask = 0
        for i, c in enumerate(coeffs):
            if c == ONE:
                mask |= 1 << i
            elif not c.is_zero():
                return None
        return mask

    @property
    def full_mask(self) -> int:
        return (1 << len(self.atoms)) - 1

    def __repr__(self):
        return f"Context(n={self.n}, type={partition_type(self)})"


def _validate_partition(n: int, atoms: Sequence[CMatrix]) -> None:
    if not atoms:
        raise ContextError("a context needs at least one atom")
    total = zeros(n)
    for a in atoms:
        if a.shape != (n, n):
            raise ContextError(f"atom of shape {a.shape} in a context on C^{n}")
        if not is_projection(a):
            raise ContextError("every atom must be a projection")
        if a.is_zero():
            raise ContextError("atoms must be nonzero")
        total = add(total, a)
    if total != identity(n):
        raise ContextError("atoms must sum to the identity")
    for i in range(len(atoms)):
        for j in range(i + 1, len(atoms)):
            if not mul(atoms[i], atoms[j]).is_zero():
                raise ContextError("atoms must be mutually orthogonal")


def bottom_context(n: int) -> Context:
    return Context(n, (identity(n),))


def diagonal_context(n: int) -> Context:
    return context_from_blocks(n, [[i] for i in range(n)])


def context_from_blocks(n: int, blocks: Sequence[Sequence[int]]) -> Context:
    """Diagonal context whose atoms project onto the given coordinate blocks."""
    atoms = []
    for blk in blocks:
        d = [ONE if i in blk else ZERO for i in range(n)]
        atoms.append(CMatrix(n, n, [d[i] if i == j else ZERO for i in range(n) for j in range(n)]))
    return Context(n, tuple(atoms))


def conjugate_context(c: Context, u: CMatrix) -> Context:
    """``U C U*`` for an exact unitary ``U``."""
    ustar = conj_transpose(u)
    if mul(u, ustar) != identity(c.n):
        raise ContextError("conjugating matrix is not unitary")
    return Context(c.n, tuple(mul(mul(u, a), ustar) for a in c.atoms))


# --- spectral decomposition of rational-spectrum Hermitians -------------------


def minimal_polynomial(a: CMatrix) -> list[Fraction]:
    """Monic minimal polynomial of a Hermitian matrix, lowest degree first."""
    n = a.rows
    powers = [identity(n)]
    while True:
        nxt = mul(powers[-1], a)
        coeffs = solve_linear_membership(nxt, powers)
        if coeffs is not None:
            if any(not c.is_real() for c in coeffs):
                raise ContextError("non-real minimal polynomial; input is not Hermitian")
            return [-c.re for c in coeffs] + [Fraction(1)]
        powers.append(nxt)


def rational_eigenvalues(a: CMatrix) -> list[Fraction]:
    """Distinct eigenvalues of a Hermitian ``a``; raises if any is irrational."""
    import sympy

    poly = minimal_polynomial(a)
    x = sympy.Symbol("x")
    p = sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in poly])),
                   x, domain=sympy.QQ)
    roots = p.ground_roots()
    if sum(roots.values()) != p.degree():
        raise IrrationalSpectrumError(
            "minimal polynomial does not split over the rationals; spectrum is irrational"
        )
    return sorted(Fraction(int(r.p), int(r.q)) for r in roots)


def spectral_projections(a: CMatrix) -> list[tuple[Fraction, CMatrix]]:
    """Eigenvalue/eigenprojection pairs via Lagrange interpolation."""
    if not is_hermitian(a):
        raise ContextError("spectral decomposition requires a Hermitian matrix")
    eig = rational_eigenvalues(a)
    n = a.rows
    out = []
    for lam in eig:
        p = identity(n)
        for mu in eig:
            if mu != lam:
                factor = scale(sub(a, scale(identity(n), mu)), GaussianRational(1 / (lam - mu)))
                p = mul(p, factor)
        out.append((lam, p))
    return out


def context_from_commuting(generators: Sequence[CMatrix], n: int | None = None) -> Context:
    """Context generated by commuting Hermitians with rational spectra.

    Atoms are the nonzero products of the generators' eigenprojections.
    """
    gens = list(generators)
    if not gens:
        if n is None:
            raise ContextError("ambient dimension needed for an empty generating set")
        return bottom_context(n)
    n = gens[0].rows if n is None else n
    for g in gens:
        if g.shape != (n, n):
            raise DimensionError(f"generator of shape {g.shape} in M_{n}")
        if not is_hermitian(g):
            raise ContextError("generators must be Hermitian")
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if not commutes(gens[i], gens[j]):
                raise ContextError(f"generators {i} and {j} do not commute")
    blocks = [identity(n)]
    for g in gens:
        projs = [p for _, p in spectral_projections(g)]
        refined = []
        for b in blocks:
            for p in projs:
                q = mul(b, p)
                if not q.is_zero():
                    refined.append(q)
        blocks = refined
    return Context(n, tuple(blocks))


# --- order and intersection -------------------------------------------------


def refinement_map(c: Context, d: Context):
    """For ``c ⊆ d``: per atom of c, the bitmask of d-atoms summing to it.

    Returns ``None`` when c is not contained in d.
    """
    if c.n != d.n:
        raise DimensionError("contexts live in different matrix algebras")
    out = []
    for e in c.atoms:
        m = d.mask_of(e)
        if m is None:
            return None
        out.append(m)
    return tuple(out)


def context_leq(c: Context, d: Context) -> bool:
    return refinement_map(c, d) is not None


def intersect(c: Context, d: Context) -> Context:
    """The context ``c ∩ d``.

    Solve ``sum x_i e_i = sum y_j f_j`` exactly; atoms i and j of c merge when
    every solution has ``x_i = x_j``.
    """
    if c.n != d.n:
        raise DimensionError("contexts live in different matrix algebras")
    if c == d:
        return c
    k = len(c.atoms)
    columns = [list(e.entries) for e in c.atoms] + [
        [-x for x in f.entries] for f in d.atoms
    ]
    basis = nullspace(columns)
    parent = list(range(k))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(k):
        for j in range(i + 1, k):
            if all(v[i] == v[j] for v in basis):
                parent[find(j)] = find(i)
    groups: dict[int, list[int]] = {}
    for i in range(k):
        groups.setdefault(find(i), []).append(i)
    atoms = []
    for members in groups.values():
        s = zeros(c.n)
        for i in members:
            s = add(s, c.atoms[i])
        atoms.append(s)
    return Context(c.n, tuple(atoms))


# --- finite posets ------------------------------------------------------------


def _context_key(c: Context):
    return (len(c.atoms), tuple(sorted(c.ranks, reverse=True)), tuple(a.sort_key() for a in c.atoms))


@dataclass(frozen=True, eq=False)
class ContextPoset:
    """Finite intersection-closed family of contexts, bottom first.

    Contexts are sorted by atom count, so list order is a linear extension
    of inclusion.  ``refinement[(i, j)]`` (for ``contexts[i] ⊆ contexts[j]``)
    gives, per atom of context i, the bitmask of atoms of context j.
    """

    contexts: tuple[Context, ...]
    leq: tuple[tuple[bool, ...], ...] = field(repr=False)
    refinement: dict = field(repr=False)

    @property
    def n(self) -> int:
        return self.contexts[0].n

    def __len__(self):
        return len(self.contexts)

    def index(self, c: Context) -> int:
        try:
            return self.contexts.index(c)
        except ValueError:
            raise ContextError("context is not in the poset") from None

    def up(self, i: int) -> list[int]:
        return [j for j in range(len(self.contexts)) if self.leq[i][j]]

    def down(self, i: int) -> list[int]:
        return [j for j in range(len(self.contexts)) if self.leq[j][i]]

    def refine(self, i: int, j: int, mask: int) -> int:
        """Push an atom mask of context i into context j (requires i ⊆ j)."""
        images = self.refinement[(i, j)]
        out = 0
        for a, img in enumerate(images):
            if mask >> a & 1:
                out |= img
        return out

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for c in self.contexts:
            out.append(acc)
            acc += len(c.atoms)
        return tuple(out)

    @cached_property
    def total_atoms(self) -> int:
        return sum(len(c.atoms) for c in self.contexts)

    @cached_property
    def up_images(self) -> tuple[int, ...]:
        """For each global atom bit, the packed images of that atom in every D ⊇ C."""
        out = []
        for i, c in enumerate(self.contexts):
            for a in range(len(c.atoms)):
                packed = 0
                for j in self.up(i):
                    packed |= self.refinement[(i, j)][a] << self.offsets[j]
                out.append(packed)
        return tuple(out)

    def is_minimal(self, i: int) -> bool:
        return all(not self.leq[j][i] or j == i for j in range(len(self)))

    def maximal_indices(self) -> list[int]:
        return [i for i in range(len(self)) if all(not self.leq[i][j] or j == i for j in range(len(self)))]


def _close_under_intersection(seeds: Iterable[Context], n: int) -> list[Context]:
    found = {bottom_context(n)}
    frontier = list(dict.fromkeys(seeds))
    for c in frontier:
        if c.n != n:
            raise DimensionError("seed contexts must share the ambient dimension")
    while frontier:
        new = []
        for c in frontier:
            if c in found:
                continue
            for d in list(found):
                m = intersect(c, d)
                if m not in found and m not in new and m != c:
                    new.append(m)
            found.add(c)
        frontier = new
    return sorted(found, key=_context_key)


def poset_from_contexts(contexts: Sequence[Context]) -> ContextPoset:
    """Order a family that already contains bottom and is meet-closed."""
    contexts = tuple(sorted(dict.fromkeys(contexts), key=_context_key))
    size = len(contexts)
    leq = [[False] * size for _ in range(size)]
    refinement = {}
    for i in range(size):
        for j in range(size):
            if len(contexts[i].atoms) > len(contexts[j].atoms):
                continue
            r = refinement_map(contexts[i], contexts[j])
            if r is not None:
                leq[i][j] = True
                refinement[(i, j)] = r
    return ContextPoset(contexts, tuple(tuple(r) for r in leq), refinement)


def build_poset(seed_contexts: Sequence[Context], n: int | None = None) -> ContextPoset:
    """Smallest intersection-closed family containing the seeds and ``C·1``."""
    seeds = list(seed_contexts)
    if n is None:
        if not seeds:
            raise ContextError("ambient dimension needed when there are no seeds")
        n = seeds[0].n
    return poset_from_contexts(_close_under_intersection(seeds, n))


# --- partition-type combinatorics ---------------------------------------------


def partition_type(c: Context) -> tuple[int, ...]:
    return tuple(sorted(c.ranks, reverse=True))


def enumerate_young(k: int, n: int) -> list[tuple[int, ...]]:
    """Partitions of n into exactly k non-increasing parts, lexicographic order."""
    if not (1 <= k <= n):
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    out: list[tuple[int, ...]] = []

    def rec(remaining, parts_left, cap, prefix):
        if parts_left == 0:
            if remaining == 0:
                out.append(tuple(prefix))
            return
        lo = -(-remaining // parts_left)
        for part in range(lo, min(cap, remaining - (parts_left - 1)) + 1):
            prefix.append(part)
            rec(remaining - part, parts_left - 1, part, prefix)
            prefix.pop()

    rec(n, k, n, [])
    return sorted(out)


def young_to_flag(parts: Sequence[int]) -> tuple[int, ...]:
    """Part sizes to the increasing sequence ``0 < i_1 < ... < i_k = n``."""
    seq, acc = [], 0
    for p in reversed(sorted(parts, reverse=True)):
        acc += p
        seq.append(acc)
    return tuple(seq)


def p_sphere(x, y, z) -> CMatrix:
    """Rank-one projection ``(1/2)[[1+x, y+iz], [y-iz, 1-x]]`` for a rational point of S^2."""
    x, y, z = Fraction(x), Fraction(y), Fraction(z)
    if x * x + y * y + z * z != 1:
        raise ContextError(f"({x}, {y}, {z}) is not on the unit sphere")
    h = Fraction(1, 2)
    return CMatrix(2, 2, [
        GaussianRational(h * (1 + x)), GaussianRational(h * y, h * z),
        GaussianRational(h * y, -h * z), GaussianRational(h * (1 - x)),
    ])


def sphere_context(x, y, z) -> Context:
    """Maximal context ``{P, 1 - P}`` of M_2 for the sphere point (x, y, z)."""
    p = p_sphere(x, y, z)
    return Context(2, (p, sub(identity(2), p)))


# --- JSON ---------------------------------------------------------------------


def context_to_json(c: Context) -> dict:
    return {"n": c.n, "atoms": [matrix_to_json(a) for a in c.atoms]}


def context_from_json(obj) -> Context:
    if not isinstance(obj, dict):
        raise ValueError("context must be a JSON object")
    if "generators" in obj:
        gens = [matrix_from_json(m) for m in obj["generators"]]
        return context_from_commuting(gens, n=obj.get("n"))
    if "n" not in obj or "atoms" not in obj:
        raise ValueError("context needs 'n' and 'atoms' (or 'generators')")
    return Context(obj["n"], tuple(matrix_from_json(m) for m in obj["atoms"]))


def poset_to_json(p: ContextPoset) -> dict:
    refinement = {}
    for (i, j), images in sorted(p.refinement.items()):
        c = p.contexts[i]
        refinement[f"{i},{j}"] = [
            [b for b in range(len(p.contexts[j].atoms)) if img >> b & 1] for img in images
        ]
        assert len(images) == len(c.atoms)
    return {
        "n": p.n,
        "contexts": [context_to_json(c) for c in p.contexts],
        "leq": [[int(x) for x in row] for row in p.leq],
        "refinement": refinement,
    }


def poset_from_json(obj) -> ContextPoset:
    """Rebuild a poset and check any supplied order data against recomputation."""
    if not isinstance(obj, dict) or "contexts" not in obj:
        raise ValueError("poset must be an object with a 'contexts' list")
    contexts = [context_from_json(c) for c in obj["contexts"]]
    if not contexts:
        raise ValueError("poset has no contexts")
    poset = poset_from_contexts(contexts)
    if list(poset.contexts) != contexts:
        raise ValueError("poset contexts are not in canonical order")
    if _close_under_intersection(contexts, contexts[0].n) != list(poset.contexts):
        raise ValueError("poset is not closed under intersection or lacks the bottom context")
    if "leq" in obj and [[bool(x) for x in row] for row in obj["leq"]] != [list(r) for r in poset.leq]:
        raise ValueError("supplied 'leq' relation disagrees with the contexts")
    if "refinement" in obj and obj["refinement"] != poset_to_json(poset)["refinement"]:
        raise ValueError("supplied refinement maps disagree with the contexts")
    return poset
