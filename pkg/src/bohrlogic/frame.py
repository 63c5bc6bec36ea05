"""The frame O(Σ) of monotone projection-valued maps on a context poset.

An element assigns to each context C a projection S(C) in P(C), monotone
along inclusions.  Since S(C) is a sum of atoms of C, it is stored as a
bitmask; all the masks are packed into one integer (context i occupies the
bits starting at ``poset.offsets[i]``).

Heyting operations quantify over "every D ⊇ C" *within the finite poset*:
the results are those of the truncated universe, not of the full continuum
of contexts.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from typing import Iterable, Mapping

from . import kernels
from .contexts import Context, ContextError, ContextPoset, partition_type
from .linalg import CMatrix, NotAProjectionError, is_projection
from .kernels import CapExceeded

DEFAULT_CAP = 10**6


class FrameError(ValueError):
    """Invalid frame element or mismatched posets."""


def default_cap() -> int:
    raw = os.environ.get("BOHR_CAP")
    if raw is None:
        return DEFAULT_CAP
    cap = int(raw)
    if cap < 1:
        raise ValueError("BOHR_CAP must be a positive integer")
    return cap


@dataclass(frozen=True)
class SigmaOpen:
    """One element of O(Σ) over ``poset``, packed into ``bits``."""

    poset: ContextPoset
    bits: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.poset.total_atoms:
            raise FrameError("bits outside the poset's atoms")
        if not kernels.is_upset(self.poset.up_images, self.bits):
            raise FrameError("assignment is not monotone along inclusions")

    @classmethod
    def from_masks(cls, poset: ContextPoset, masks: Iterable[int]) -> "SigmaOpen":
        masks = list(masks)
        if len(masks) != len(poset):
            raise FrameError(f"need {len(poset)} masks, got {len(masks)}")
        bits = 0
        for i, (m, c) in enumerate(zip(masks, poset.contexts)):
            if m < 0 or m >> len(c.atoms):
                raise FrameError(f"mask {m} does not select atoms of context {i}")
            bits |= m << poset.offsets[i]
        return cls(poset, bits)

    @classmethod
    def from_assignment(cls, poset: ContextPoset, assignment: Mapping[int, Iterable[int]]) -> "SigmaOpen":
        """Build from ``{context index: [atom indices]}``; missing contexts map to 0."""
        masks = [0] * len(poset)
        for i, atoms in assignment.items():
            i = int(i)
            if not 0 <= i < len(poset):
                raise FrameError(f"context index {i} out of range")
            for a in atoms:
                if not 0 <= a < len(poset.contexts[i].atoms):
                    raise FrameError(f"atom index {a} out of range for context {i}")
                masks[i] |= 1 << a
        return cls.from_masks(poset, masks)

    def mask(self, i: int) -> int:
        k = len(self.poset.contexts[i].atoms)
        return (self.bits >> self.poset.offsets[i]) & ((1 << k) - 1)

    @property
    def masks(self) -> tuple[int, ...]:
        return tuple(self.mask(i) for i in range(len(self.poset)))

    def value(self, i: int) -> CMatrix:
        """The projection S(C_i)."""
        return self.poset.contexts[i].projection(self.mask(i))

    def assignment(self) -> dict[int, list[int]]:
        return {
            i: [a for a in range(len(c.atoms)) if self.mask(i) >> a & 1]
            for i, c in enumerate(self.poset.contexts)
        }

    def __le__(self, other: "SigmaOpen") -> bool:
        _same_poset(self, other)
        return not self.bits & ~other.bits

    def __and__(self, other):
        return meet(self, other)

    def __or__(self, other):
        return join(self, other)

    def __repr__(self):
        return f"SigmaOpen(masks={self.masks})"


def _same_poset(s: SigmaOpen, t: SigmaOpen) -> None:
    if s.poset is not t.poset:
        raise FrameError("frame elements belong to different posets")


def is_valid(poset: ContextPoset, bits: int) -> bool:
    return 0 <= bits < (1 << poset.total_atoms) and kernels.is_upset(poset.up_images, bits)


def top(poset: ContextPoset) -> SigmaOpen:
    return SigmaOpen(poset, (1 << poset.total_atoms) - 1)


def bot(poset: ContextPoset) -> SigmaOpen:
    return SigmaOpen(poset, 0)


def meet(s: SigmaOpen, t: SigmaOpen) -> SigmaOpen:
    _same_poset(s, t)
    return SigmaOpen(s.poset, s.bits & t.bits)


def join(s: SigmaOpen, t: SigmaOpen) -> SigmaOpen:
    _same_poset(s, t)
    return SigmaOpen(s.poset, s.bits | t.bits)


def join_all(poset: ContextPoset, elements: Iterable[SigmaOpen]) -> SigmaOpen:
    bits = 0
    for e in elements:
        if e.poset is not poset:
            raise FrameError("frame elements belong to different posets")
        bits |= e.bits
    return SigmaOpen(poset, bits)


def heyting_implies(s: SigmaOpen, t: SigmaOpen) -> SigmaOpen:
    """(S→T)(C): atoms e of C such that, in every D ⊇ C of the poset, each atom
    of D below e lies outside S(D) or inside T(D)."""
    _same_poset(s, t)
    return SigmaOpen(s.poset, kernels.implies_bits(s.poset.up_images, s.bits, t.bits))


def heyting_neg(s: SigmaOpen) -> SigmaOpen:
    return SigmaOpen(s.poset, kernels.neg_bits(s.poset.up_images, s.bits))


def double_neg(s: SigmaOpen) -> SigmaOpen:
    """¬¬S, computed as ¬(¬S) and checked against the one-pass formula
    (meet over D ⊇ C of the least element of P(D) above every S(E), E ⊇ D)."""
    up = s.poset.up_images
    twice = kernels.neg_bits(up, kernels.neg_bits(up, s.bits))
    direct = kernels.notnot_bits(up, s.bits)
    if twice != direct:
        raise AssertionError("double negation disagrees with its closed form")
    return SigmaOpen(s.poset, twice)


def double_neg_by_definition(s: SigmaOpen) -> SigmaOpen:
    """¬¬S evaluated context by context from the nested meet/join formula."""
    poset = s.poset
    size = len(poset)
    joined = []
    for d in range(size):
        # least element of P(D) above all S(E), E ⊇ D: atoms of D meeting some S(E)
        m = 0
        for f in range(len(poset.contexts[d].atoms)):
            if any(poset.refinement[(d, e)][f] & s.mask(e) for e in poset.up(d)):
                m |= 1 << f
        joined.append(m)
    masks = []
    for c in range(size):
        m = 0
        for a in range(len(poset.contexts[c].atoms)):
            if all(not poset.refinement[(c, d)][a] & ~joined[d] for d in poset.up(c)):
                m |= 1 << a
        masks.append(m)
    return SigmaOpen.from_masks(poset, masks)


def chi_up(d: Context | int, poset: ContextPoset) -> SigmaOpen:
    """Identity on every context containing d, zero elsewhere."""
    i = d if isinstance(d, int) else poset.index(d)
    if not 0 <= i < len(poset):
        raise ContextError(f"context index {i} out of range")
    return SigmaOpen.from_masks(
        poset, [c.full_mask if poset.leq[i][j] else 0 for j, c in enumerate(poset.contexts)]
    )


def s_p(p: CMatrix, poset: ContextPoset) -> SigmaOpen:
    """S_p(C) = p when p lies in C, 0 otherwise."""
    if p.shape != (poset.n, poset.n) or not is_projection(p):
        raise NotAProjectionError("s_p needs a projection of the poset's size")
    masks = []
    for c in poset.contexts:
        m = c.mask_of(p)
        masks.append(0 if m is None else m)
    return SigmaOpen.from_masks(poset, masks)


def enumerate_frame(poset: ContextPoset, cap: int | None = None) -> list[SigmaOpen]:
    """Every element of the finite frame, ordered by packed value."""
    cap = default_cap() if cap is None else cap
    bits = kernels.enumerate_upsets(poset.up_images, cap)
    return [SigmaOpen(poset, b) for b in bits]


def random_open(poset: ContextPoset, rng: random.Random, density: float = 0.5) -> SigmaOpen:
    """A random element: walk contexts bottom-up, keep forced atoms, add others at random."""
    bits = 0
    for i, c in enumerate(poset.contexts):
        forced = 0
        for j in poset.down(i):
            if j != i:
                forced |= poset.refine(j, i, (bits >> poset.offsets[j]) & poset.contexts[j].full_mask)
        m = forced
        for a in range(len(c.atoms)):
            if rng.random() < density:
                m |= 1 << a
        bits |= m << poset.offsets[i]
    return SigmaOpen(poset, bits)


def m3_example_open(poset: ContextPoset) -> SigmaOpen:
    """The excluded-middle witness on an M_3 poset.

    Zero at ``C·1``, the rank-two atom on every context of type (2, 1) and
    the identity on every maximal (1, 1, 1) context.
    """
    if poset.n != 3:
        raise FrameError("the example lives on M_3")
    masks = []
    for c in poset.contexts:
        kind = partition_type(c)
        if kind == (3,):
            masks.append(0)
        elif kind == (2, 1):
            masks.append(sum(1 << a for a, r in enumerate(c.ranks) if r == 2))
        else:
            masks.append(c.full_mask)
    return SigmaOpen.from_masks(poset, masks)


# --- JSON ---------------------------------------------------------------------


def sigma_to_json(s: SigmaOpen, poset_ref="inline") -> dict:
    return {
        "poset": poset_ref,
        "assignment": {str(i): atoms for i, atoms in s.assignment().items()},
    }


def sigma_from_json(obj, poset: ContextPoset) -> SigmaOpen:
    if not isinstance(obj, dict) or "assignment" not in obj:
        raise ValueError("SigmaOpen must be an object with an 'assignment'")
    raw = obj["assignment"]
    if not isinstance(raw, dict):
        raise ValueError("'assignment' must map context indices to atom lists")
    try:
        assignment = {int(k): [int(a) for a in v] for k, v in raw.items()}
    except (TypeError, ValueError) as exc:
        raise ValueError("malformed assignment") from exc
    return SigmaOpen.from_assignment(poset, assignment)


__all__ = [
    "CapExceeded",
    "DEFAULT_CAP",
    "FrameError",
    "SigmaOpen",
    "bot",
    "chi_up",
    "default_cap",
    "double_neg",
    "double_neg_by_definition",
    "enumerate_frame",
    "heyting_implies",
    "heyting_neg",
    "is_valid",
    "join",
    "join_all",
    "m3_example_open",
    "meet",
    "random_open",
    "s_p",
    "sigma_from_json",
    "sigma_to_json",
    "top",
    "UpperSet",
]


@dataclass(frozen=True)
class UpperSet:
    """An upward-closed set of context indices (a truth value at ``C·1``)."""

    poset: ContextPoset
    members: frozenset

    def __post_init__(self):
        members = frozenset(int(i) for i in self.members)
        object.__setattr__(self, "members", members)
        for i in members:
            if not 0 <= i < len(self.poset):
                raise FrameError(f"context index {i} out of range")
            for j in self.poset.up(i):
                if j not in members:
                    raise FrameError(f"not upward closed: {i} in set but {j} ⊇ it is not")

    def __contains__(self, i):
        return i in self.members

    def sorted(self) -> list[int]:
        return sorted(self.members)

    @classmethod
    def up_of(cls, poset: ContextPoset, i: int) -> "UpperSet":
        return cls(poset, frozenset(poset.up(i)))
