"""Gelfand spectrum of C^k and the Gelfand transform, exactly.

For a context C ≅ C^k the lattice L_C is the lattice of 0/1 support
vectors, the spectrum's opens are its principal down-sets, and the
transform of a self-adjoint ``a`` sends an open U of R to the spectral
projection [a ∈ U].  Opens of R are finite unions of rational intervals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .contexts import Context, ContextError, ContextPoset
from .frame import SigmaOpen
from .linalg import CMatrix, diag, is_hermitian

SupportVector = tuple  # tuple of bools, one per atom


# --- support vectors -----------------------------------------------------------


def l_class(a: Sequence, context_size: int | None = None) -> SupportVector:
    """Class of a positive element of C^k in L = A+/~ (its support)."""
    vals = [Fraction(x) for x in a]
    if context_size is not None and len(vals) != context_size:
        raise ValueError(f"expected {context_size} entries, got {len(vals)}")
    if any(v < 0 for v in vals):
        raise ValueError("l_class is defined on the positive cone only")
    return tuple(v > 0 for v in vals)


def l_class_sa(a: Sequence) -> SupportVector:
    """Class of the positive part of a self-adjoint element."""
    return tuple(Fraction(x) > 0 for x in a)


def support_leq(x: SupportVector, y: SupportVector) -> bool:
    _check_len(x, y)
    return all(b or not a for a, b in zip(x, y))


def support_join(vectors: Iterable[SupportVector], k: int) -> SupportVector:
    out = [False] * k
    for v in vectors:
        if len(v) != k:
            raise ValueError("support vectors of different lengths")
        out = [a or b for a, b in zip(out, v)]
    return tuple(out)


def support_meet(x: SupportVector, y: SupportVector) -> SupportVector:
    _check_len(x, y)
    return tuple(a and b for a, b in zip(x, y))


def _check_len(x, y):
    if len(x) != len(y):
        raise ValueError("support vectors of different lengths")


def covers(x: SupportVector, u: Iterable[SupportVector]) -> bool:
    """Finite-dimensional covering relation: ``x ◁ U`` iff ``x <= ⋁U``."""
    return support_leq(x, support_join(u, len(x)))


def all_supports(k: int) -> list[SupportVector]:
    return [tuple(bool(b) for b in bits) for bits in product((0, 1), repeat=k)]


@dataclass(frozen=True)
class SpectrumOpen:
    """A principal down-set ↓x of L together with its projection diag(x)."""

    generator: SupportVector
    downset: frozenset
    projection: CMatrix

    @property
    def points(self) -> frozenset:
        """The corresponding open of the discrete spectrum {1, ..., k}."""
        return frozenset(i + 1 for i, b in enumerate(self.generator) if b)


def finite_spectrum(context_size: int) -> list[SpectrumOpen]:
    """All opens ↓x of the spectrum of C^k, with the iso x ↦ diag(x)."""
    if context_size < 1:
        raise ValueError("context size must be positive")
    elems = all_supports(context_size)
    out = []
    for x in elems:
        down = frozenset(y for y in elems if support_leq(y, x))
        out.append(SpectrumOpen(x, down, diag([int(b) for b in x])))
    return out


# --- opens of the real line ------------------------------------------------------


@dataclass(frozen=True)
class RationalOpen:
    """Finite disjoint union of open intervals; ``None`` endpoints are ±∞."""

    intervals: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "intervals", _normalize(self.intervals))

    @classmethod
    def interval(cls, lo, hi) -> "RationalOpen":
        return cls(((lo, hi),))

    @classmethod
    def whole(cls) -> "RationalOpen":
        return cls(((None, None),))

    @classmethod
    def empty(cls) -> "RationalOpen":
        return cls(())

    def __contains__(self, x) -> bool:
        x = Fraction(x)
        return any((lo is None or lo < x) and (hi is None or x < hi) for lo, hi in self.intervals)

    def union(self, other: "RationalOpen") -> "RationalOpen":
        return RationalOpen(self.intervals + other.intervals)

    def intersection(self, other: "RationalOpen") -> "RationalOpen":
        parts = []
        for a_lo, a_hi in self.intervals:
            for b_lo, b_hi in other.intervals:
                lo = _max_lo(a_lo, b_lo)
                hi = _min_hi(a_hi, b_hi)
                if lo is None or hi is None or lo < hi:
                    parts.append((lo, hi))
        return RationalOpen(tuple(parts))

    __or__ = union
    __and__ = intersection

    def affine_preimage(self, alpha, beta) -> "RationalOpen":
        """``{t : alpha*t + beta ∈ self}`` for rational ``alpha != 0``."""
        alpha, beta = Fraction(alpha), Fraction(beta)
        if alpha == 0:
            raise ValueError("affine map must be invertible")
        parts = []
        for lo, hi in self.intervals:
            a = None if lo is None else (lo - beta) / alpha
            b = None if hi is None else (hi - beta) / alpha
            parts.append((a, b) if alpha > 0 else (b, a))
        return RationalOpen(tuple(parts))


def _max_lo(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


def _min_hi(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _lo_key(lo):
    return (0, 0) if lo is None else (1, lo)


def _normalize(intervals) -> tuple:
    cleaned = []
    for lo, hi in intervals:
        lo = None if lo is None else Fraction(lo)
        hi = None if hi is None else Fraction(hi)
        if lo is not None and hi is not None and not lo < hi:
            continue
        cleaned.append((lo, hi))
    cleaned.sort(key=lambda iv: _lo_key(iv[0]))
    merged: list[list] = []
    for lo, hi in cleaned:
        # open intervals that only share an endpoint stay separate
        if merged and (merged[-1][1] is None or lo is None or lo < merged[-1][1]):
            last_hi = merged[-1][1]
            merged[-1][1] = None if last_hi is None or hi is None else max(last_hi, hi)
        else:
            merged.append([lo, hi])
    return tuple((lo, hi) for lo, hi in merged)


def _parse_endpoint(x, infinite: str):
    if isinstance(x, str) and x.strip().lower() in ("-inf", "inf", "+inf"):
        value = x.strip().lower()
        if (value == "-inf") != (infinite == "-inf"):
            raise ValueError(f"{x!r} is not allowed as a {'lower' if infinite == '-inf' else 'upper'} endpoint")
        return None
    if isinstance(x, (bool, float)) or not isinstance(x, (int, str)):
        raise ValueError(f"endpoint {x!r} is not an exact rational")
    return Fraction(x)


def open_from_json(obj) -> RationalOpen:
    if not isinstance(obj, dict) or not isinstance(obj.get("intervals"), list):
        raise ValueError("RationalOpen must be an object with an 'intervals' list")
    parts = []
    for iv in obj["intervals"]:
        if not isinstance(iv, list) or len(iv) != 2:
            raise ValueError("each interval is a [lo, hi] pair")
        parts.append((_parse_endpoint(iv[0], "-inf"), _parse_endpoint(iv[1], "inf")))
    return RationalOpen(tuple(parts))


def open_to_json(u: RationalOpen) -> dict:
    return {
        "intervals": [
            ["-inf" if lo is None else str(lo), "inf" if hi is None else str(hi)]
            for lo, hi in u.intervals
        ]
    }


# --- the transform ----------------------------------------------------------------


def gelfand_support(diag_values: Sequence, u: RationalOpen) -> SupportVector:
    """Indicator of ``a_i ∈ U`` for each coordinate."""
    return tuple(Fraction(v) in u for v in diag_values)


def eigenvalues_in_context(a: CMatrix, c: Context) -> tuple[Fraction, ...]:
    """Eigenvalue of ``a`` on each atom of c (``a`` must lie in c and be Hermitian)."""
    if not is_hermitian(a):
        raise ContextError("observable must be Hermitian")
    coeffs = c.coefficients(a)
    if coeffs is None:
        raise ContextError("observable does not lie in the context")
    return tuple(x.re for x in coeffs)


def spectral_mask(a: CMatrix, c: Context, u: RationalOpen) -> int:
    mask = 0
    for i, lam in enumerate(eigenvalues_in_context(a, c)):
        if lam in u:
            mask |= 1 << i
    return mask


def spectral_projection(a: CMatrix, c: Context, u: RationalOpen) -> CMatrix:
    """[a ∈ U]: the sum of atoms on which a's eigenvalue lies in U."""
    return c.projection(spectral_mask(a, c, u))


def bohrified_transform(a: CMatrix, c: int, d: int, u: RationalOpen, poset: ContextPoset) -> SigmaOpen:
    """E ↦ [a ∈ U] for E ⊇ D, 0 otherwise (a taken in context C ⊆ D).

    The result vanishes off ↑C, i.e. it lies in the part of the frame below
    the indicator of ↑C.
    """
    if not poset.leq[c][d]:
        raise ContextError("second context must contain the first")
    base = spectral_mask(a, poset.contexts[c], u)
    masks = [poset.refine(c, e, base) if poset.leq[d][e] else 0 for e in range(len(poset))]
    return SigmaOpen.from_masks(poset, masks)
