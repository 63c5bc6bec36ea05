"""Exact matrix arithmetic over the Gaussian rationals Q(i).

Everything here is exact: entries are :class:`GaussianRational` values built
on :class:`fractions.Fraction`, so equality tests (idempotence, hermiticity,
range inclusion) are decided without tolerances.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


class NotAProjectionError(ValueError):
    """A matrix that must be an orthogonal projection is not one."""


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class GaussianRational:
    """A complex number ``re + i*im`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _to_fraction(re))
        object.__setattr__(self, "im", _to_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            raise TypeError("floating-point complex values are not exact")
        return cls(x, 0)

    def __add__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        norm = o.re * o.re + o.im * o.im
        if norm == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * o.re + self.im * o.im) / norm,
            (self.im * o.re - self.re * o.im) / norm,
        )

    def __rtruediv__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def sort_key(self):
        return (self.re, self.im)

    def __repr__(self):
        if self.im == 0:
            return f"GaussianRational({str(self.re)!r})"
        return f"GaussianRational({str(self.re)!r}, {str(self.im)!r})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


def _coerce_or_none(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return GaussianRational(x)
    return None


ZERO = GaussianRational(0)
ONE = GaussianRational(1)


class CMatrix:
    """Immutable dense matrix with Gaussian-rational entries (row-major)."""

    __slots__ = ("rows", "cols", "entries", "_hash")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        entries = tuple(GaussianRational.coerce(e) for e in entries)
        if rows < 1 or cols < 1:
            raise DimensionError("matrix dimensions must be positive")
        if len(entries) != rows * cols:
            raise DimensionError(
                f"expected {rows * cols} entries for a {rows}x{cols} matrix, got {len(entries)}"
            )
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("CMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "CMatrix":
        rows = [list(r) for r in rows]
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise DimensionError("ragged or empty row list")
        return cls(len(rows), len(rows[0]), [x for r in rows for x in r])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij) -> GaussianRational:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[GaussianRational]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return sub(self, other)

    def __matmul__(self, other):
        return mul(self, other)

    def __neg__(self):
        return scale(self, -1)

    def __eq__(self, other):
        if not isinstance(other, CMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.rows, self.cols, self.entries))
            object.__setattr__(self, "_hash", h)
        return h

    def sort_key(self):
        return tuple(e.sort_key() for e in self.entries)

    def __repr__(self):
        body = "; ".join(", ".join(str(e) for e in self.row(i)) for i in range(self.rows))
        return f"CMatrix([{body}])"


def identity(n: int) -> CMatrix:
    return CMatrix(n, n, [ONE if i == j else ZERO for i in range(n) for j in range(n)])


def zeros(rows: int, cols: int | None = None) -> CMatrix:
    cols = rows if cols is None else cols
    return CMatrix(rows, cols, [ZERO] * (rows * cols))


def diag(*values) -> CMatrix:
    if len(values) == 1 and isinstance(values[0], (list, tuple)):
        values = tuple(values[0])
    n = len(values)
    vals = [GaussianRational.coerce(v) for v in values]
    return CMatrix(n, n, [vals[i] if i == j else ZERO for i in range(n) for j in range(n)])


def _check_same_shape(a: CMatrix, b: CMatrix) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")


def add(a: CMatrix, b: CMatrix) -> CMatrix:
    _check_same_shape(a, b)
    return CMatrix(a.rows, a.cols, [x + y for x, y in zip(a.entries, b.entries)])


def sub(a: CMatrix, b: CMatrix) -> CMatrix:
    _check_same_shape(a, b)
    return CMatrix(a.rows, a.cols, [x - y for x, y in zip(a.entries, b.entries)])


def scale(a: CMatrix, c) -> CMatrix:
    c = GaussianRational.coerce(c)
    return CMatrix(a.rows, a.cols, [c * x for x in a.entries])


def mul(a: CMatrix, b: CMatrix) -> CMatrix:
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    # Work on Fraction pairs directly; the object-level product is too slow
    # for the poset-building loops.
    ar = [e.re for e in a.entries]
    ai = [e.im for e in a.entries]
    br = [e.re for e in b.entries]
    bi = [e.im for e in b.entries]
    n, m, p = a.rows, a.cols, b.cols
    out = []
    for i in range(n):
        base = i * m
        for j in range(p):
            sr = Fraction(0)
            si = Fraction(0)
            for k in range(m):
                xr, xi = ar[base + k], ai[base + k]
                if not xr and not xi:
                    continue
                yr, yi = br[k * p + j], bi[k * p + j]
                if not yr and not yi:
                    continue
                sr += xr * yr - xi * yi
                si += xr * yi + xi * yr
            out.append(GaussianRational(sr, si))
    return CMatrix(n, p, out)


def conj_transpose(a: CMatrix) -> CMatrix:
    return CMatrix(
        a.cols,
        a.rows,
        [a.entries[i * a.cols + j].conjugate() for j in range(a.cols) for i in range(a.rows)],
    )


def trace(a: CMatrix) -> GaussianRational:
    if not a.is_square():
        raise DimensionError("trace of a non-square matrix")
    total = ZERO
    for i in range(a.rows):
        total = total + a.entries[i * a.cols + i]
    return total


def is_hermitian(a: CMatrix) -> bool:
    return a.is_square() and conj_transpose(a) == a


def is_projection(a: CMatrix) -> bool:
    """True iff ``a`` is self-adjoint and idempotent."""
    return is_hermitian(a) and mul(a, a) == a


def commutes(a: CMatrix, b: CMatrix) -> bool:
    return mul(a, b) == mul(b, a)


def rank_of_projection(p: CMatrix) -> int:
    """Rank of a projection, read off exactly as its trace."""
    t = trace(p)
    if not t.is_real() or t.re.denominator != 1:
        raise NotAProjectionError("trace of a projection must be a non-negative integer")
    return int(t.re)


def proj_leq(p: CMatrix, q: CMatrix) -> bool:
    """Range inclusion ``p C^n ⊆ q C^n``, i.e. ``q p = p``."""
    if p.shape != q.shape:
        raise DimensionError(f"shape mismatch: {p.shape} vs {q.shape}")
    if not is_projection(p) or not is_projection(q):
        raise NotAProjectionError("proj_leq requires two projections")
    return mul(q, p) == p


def _require_commuting_projections(p: CMatrix, q: CMatrix) -> CMatrix:
    if not is_projection(p) or not is_projection(q):
        raise NotAProjectionError("meet/join require projections")
    pq = mul(p, q)
    if pq != mul(q, p):
        raise ValueError("meet/join are only provided for commuting projections")
    return pq


def proj_meet(p: CMatrix, q: CMatrix) -> CMatrix:
    """Meet of two commuting projections (``p q``)."""
    return _require_commuting_projections(p, q)


def proj_join(p: CMatrix, q: CMatrix) -> CMatrix:
    """Join of two commuting projections (``p + q - p q``)."""
    pq = _require_commuting_projections(p, q)
    return sub(add(p, q), pq)


def complement(p: CMatrix) -> CMatrix:
    return sub(identity(p.rows), p)


# --- exact linear solving -------------------------------------------------


def rref(rows: list[list[GaussianRational]]) -> tuple[list[list[GaussianRational]], list[int]]:
    """Reduced row echelon form; returns (matrix, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(m)):
            if not m[i][c].is_zero():
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = ONE / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def nullspace(columns: Sequence[Sequence[GaussianRational]]) -> list[list[GaussianRational]]:
    """Basis of ``{x : sum_j x_j columns[j] = 0}``, one vector per free variable."""
    k = len(columns)
    if k == 0:
        return []
    length = len(columns[0])
    rows = [[columns[j][i] for j in range(k)] for i in range(length)]
    red, pivots = rref(rows)
    free = [j for j in range(k) if j not in pivots]
    basis = []
    for f in free:
        vec = [ZERO] * k
        vec[f] = ONE
        for r, pc in enumerate(pivots):
            vec[pc] = -red[r][f]
        basis.append(vec)
    return basis


def solve_linear_membership(v: CMatrix, basis: Sequence[CMatrix]):
    """Coefficients ``x`` with ``v = sum x_j basis[j]``, or ``None``.

    Free variables (when ``basis`` is linearly dependent) are set to zero, so
    the answer is deterministic.
    """
    for b in basis:
        _check_same_shape(v, b)
    if not basis:
        return () if v.is_zero() else None
    k = len(basis)
    rows = [[b.entries[i] for b in basis] + [v.entries[i]] for i in range(len(v.entries))]
    red, pivots = rref(rows)
    if k in pivots:
        return None
    x = [ZERO] * k
    for r, pc in enumerate(pivots):
        x[pc] = red[r][k]
    return tuple(x)


def linear_combination(coeffs: Sequence, mats: Sequence[CMatrix]) -> CMatrix:
    if not mats:
        raise DimensionError("empty combination has no shape")
    out = zeros(mats[0].rows, mats[0].cols)
    for c, m in zip(coeffs, mats):
        c = GaussianRational.coerce(c)
        if not c.is_zero():
            out = add(out, scale(m, c))
    return out


def eigenvalues_of_projection_are_binary(p: CMatrix) -> bool:
    """Check that ``x^2 - x`` annihilates ``p`` (so its spectrum is in {0, 1})."""
    return sub(mul(p, p), p).is_zero()


# --- JSON encoding ------------------------------------------------------------


def _parse_scalar(x) -> GaussianRational:
    if isinstance(x, list):
        if len(x) != 2:
            raise ValueError(f"complex entry must be [re, im], got {x!r}")
        return GaussianRational(_parse_rational(x[0]), _parse_rational(x[1]))
    return GaussianRational(_parse_rational(x))


def _parse_rational(x) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise ValueError(f"entry {x!r} is not an exact rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad rational {x!r}") from exc
    raise ValueError(f"entry {x!r} is not an exact rational")


def matrix_from_json(obj) -> CMatrix:
    """Decode ``{"rows", "cols", "entries"}`` with row-major ``[re, im]`` entries.

    A bare integer or rational string is accepted for a real entry.
    """
    if not isinstance(obj, dict) or "entries" not in obj:
        raise ValueError("matrix must be an object with rows, cols, entries")
    rows, cols, raw = obj.get("rows"), obj.get("cols"), obj["entries"]
    if not isinstance(rows, int) or not isinstance(cols, int) or isinstance(rows, bool):
        raise ValueError("matrix rows/cols must be integers")
    if not isinstance(raw, list) or len(raw) != rows * cols:
        raise ValueError(f"matrix needs {rows}x{cols} row-major entries")
    return CMatrix(rows, cols, [_parse_scalar(e) for e in raw])


def matrix_to_json(m: CMatrix) -> dict:
    return {
        "rows": m.rows,
        "cols": m.cols,
        "entries": [[str(e.re), str(e.im)] for e in m.entries],
    }
