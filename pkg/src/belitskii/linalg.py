"""Exact arithmetic over the Gaussian rationals Q(i) and a small dense matrix kernel.

Everything here is exact: scalars are Gaussian integers over a common
denominator and matrices are immutable row-major tuples of scalars.  The
elimination routines work on plain lists of lists internally; the public
:class:`Matrix` wrapper is what the rest of the package passes around.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import MalformedScalar, Singular, SizeMismatch, ZeroDenominator

_FZERO = Fraction(0)
_FONE = Fraction(1)


class Scalar:
    """An element ``(a + b*i) / d`` of Q(i), kept with d > 0 and gcd(a, b, d) = 1.

    Integer numerators avoid most of the cost of Fraction arithmetic; ``re``
    and ``im`` give the parts back as Fractions.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, re: int | Fraction = 0, im: int | Fraction = 0):
        re, im = Fraction(re), Fraction(im)
        d = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        self.a = re.numerator * (d // re.denominator)
        self.b = im.numerator * (d // im.denominator)
        self.d = d

    @staticmethod
    def _make(re: Fraction, im: Fraction) -> "Scalar":
        return Scalar(re, im)

    @staticmethod
    def _raw(a: int, b: int, d: int) -> "Scalar":
        g = gcd(a, b, d)
        s = object.__new__(Scalar)
        if g == 1:
            s.a, s.b, s.d = a, b, d
        else:
            s.a, s.b, s.d = a // g, b // g, d // g
        return s

    @property
    def re(self) -> Fraction:
        return Fraction(self.a, self.d)

    @property
    def im(self) -> Fraction:
        return Fraction(self.b, self.d)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        d1, d2 = self.d, other.d
        if d1 == d2:
            return Scalar._raw(self.a + other.a, self.b + other.b, d1)
        return Scalar._raw(self.a * d2 + other.a * d1, self.b * d2 + other.b * d1, d1 * d2)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        d1, d2 = self.d, other.d
        if d1 == d2:
            return Scalar._raw(self.a - other.a, self.b - other.b, d1)
        return Scalar._raw(self.a * d2 - other.a * d1, self.b * d2 - other.b * d1, d1 * d2)

    def __rsub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        a, b, c, e = self.a, self.b, other.a, other.b
        if not b and not e:
            return Scalar._raw(a * c, 0, self.d * other.d)
        return Scalar._raw(a * c - b * e, a * e + b * c, self.d * other.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __neg__(self):
        s = object.__new__(Scalar)
        s.a, s.b, s.d = -self.a, -self.b, self.d
        return s

    def __pos__(self):
        return self

    def inverse(self) -> "Scalar":
        a, b, d = self.a, self.b, self.d
        if not b:
            if not a:
                raise ZeroDivisionError("inverse of zero")
            return Scalar._raw(d if a > 0 else -d, 0, abs(a))
        norm = a * a + b * b
        return Scalar._raw(a * d, -b * d, norm)

    def conjugate(self) -> "Scalar":
        s = object.__new__(Scalar)
        s.a, s.b, s.d = self.a, -self.b, self.d
        return s

    def norm(self) -> Fraction:
        return Fraction(self.a * self.a + self.b * self.b, self.d * self.d)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison -------------------------------------------------------
    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if type(other) is Scalar:
            return self.a == other.a and self.b == other.b and self.d == other.d
        if isinstance(other, (int, Fraction)):
            return not self.b and self.a == other * self.d
        return NotImplemented

    def __hash__(self):
        if not self.b:
            return hash(self.a) if self.d == 1 else hash(Fraction(self.a, self.d))
        return hash((self.a, self.b, self.d))

    def sort_key(self) -> tuple[Fraction, Fraction]:
        return (self.re, self.im)

    def is_real(self) -> bool:
        return not self.b

    def __repr__(self):
        return f"Scalar({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


ZERO = Scalar._make(_FZERO, _FZERO)
ONE = Scalar._make(_FONE, _FZERO)
I = Scalar._make(_FZERO, _FONE)


def _coerce_or_none(x) -> Scalar | None:
    if type(x) is Scalar:
        return x
    if type(x) is int:
        return Scalar._raw(x, 0, 1)
    if isinstance(x, (int, Fraction)):
        return Scalar(x)
    return None


def as_scalar(x) -> Scalar:
    """Coerce ints, Fractions, scalar strings and Scalars to :class:`Scalar`."""
    if type(x) is Scalar:
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, (int, Fraction)):
        return Scalar(x)
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"cannot convert {type(x).__name__} to Scalar")


_RAT = r"(\d+)(?:/(\d+))?"
_FULL_RE = re.compile(rf"^([+-]?){_RAT}(?:([+-])(?:{_RAT})?i)?$")
_IMAG_RE = re.compile(rf"^([+-]?)(?:{_RAT})?i$")


def _rat(num: str, den: str | None) -> Fraction:
    if den is None:
        return Fraction(int(num))
    d = int(den)
    if d == 0:
        raise ZeroDenominator(f"zero denominator in {num}/{den}")
    return Fraction(int(num), d)


def parse_scalar(text: str) -> Scalar:
    """Parse ``"3"``, ``"-1/2"``, ``"1/2-3/4i"``, ``"i"``, ``"-2/3i"`` and friends."""
    if not isinstance(text, str):
        raise MalformedScalar(f"expected a string, got {type(text).__name__}")
    m = _FULL_RE.match(text)
    if m:
        sign, num, den, isign, inum, iden = m.groups()
        re_part = _rat(num, den)
        if sign == "-":
            re_part = -re_part
        im_part = _FZERO
        if isign is not None:
            im_part = _FONE if inum is None else _rat(inum, iden)
            if isign == "-":
                im_part = -im_part
        return Scalar._make(re_part, im_part)
    m = _IMAG_RE.match(text)
    if m:
        sign, num, den = m.groups()
        im_part = _FONE if num is None else _rat(num, den)
        if sign == "-":
            im_part = -im_part
        return Scalar._make(_FZERO, im_part)
    raise MalformedScalar(f"malformed scalar {text!r}")


def format_scalar(x: Scalar) -> str:
    """Inverse of :func:`parse_scalar`; the output re-parses to an equal value."""
    re_part, im_part = x.re, x.im
    if not im_part:
        return str(re_part)
    if im_part == 1:
        im_txt = "i"
    elif im_part == -1:
        im_txt = "-i"
    else:
        im_txt = f"{im_part}i"
    if not re_part:
        return im_txt
    if im_txt.startswith("-"):
        return f"{re_part}{im_txt}"
    return f"{re_part}+{im_txt}"


def scalar_total_order(a: Scalar, b: Scalar) -> int:
    """Lexicographic order on (re, im); returns -1, 0 or 1."""
    ka, kb = a.sort_key(), b.sort_key()
    return (ka > kb) - (ka < kb)


# ---------------------------------------------------------------------------
# list-of-lists elimination primitives (internal, mutate their input)
# ---------------------------------------------------------------------------


def _rref_inplace(rows: list[list[Scalar]], ncols: int, track: list[list[Scalar]] | None = None) -> list[int]:
    """Gauss-Jordan elimination in place; returns pivot columns.

    When ``track`` is given the same row operations are applied to it.
    """
    pivots: list[int] = []
    nrows = len(rows)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = r
        while p < nrows and not rows[p][c]:
            p += 1
        if p == nrows:
            continue
        if p != r:
            rows[p], rows[r] = rows[r], rows[p]
            if track is not None:
                track[p], track[r] = track[r], track[p]
        prow = rows[r]
        piv = prow[c]
        if piv != ONE:
            inv = piv.inverse()
            prow[:] = [v * inv if v else v for v in prow]
            if track is not None:
                track[r] = [v * inv if v else v for v in track[r]]
        nz = [k for k in range(c, ncols) if prow[k]]
        tnz = [k for k, v in enumerate(track[r]) if v] if track is not None else ()
        for i in range(nrows):
            if i == r:
                continue
            row = rows[i]
            f = row[c]
            if not f:
                continue
            for k in nz:
                row[k] = row[k] - f * prow[k]
            if track is not None:
                trow, tp = track[i], track[r]
                for k in tnz:
                    trow[k] = trow[k] - f * tp[k]
        pivots.append(c)
        r += 1
    return pivots


def _nullspace_rows(rows: list[list[Scalar]], ncols: int) -> list[list[Scalar]]:
    """Basis of {v : rows . v = 0}; one basis vector per free column, in column order."""
    work = [list(r) for r in rows]
    pivots = _rref_inplace(work, ncols)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [ZERO] * ncols
        v[free] = ONE
        for i, pc in enumerate(pivots):
            val = work[i][free]
            if val:
                v[pc] = -val
        basis.append(v)
    return basis


def _rank_rows(rows: list[list[Scalar]], ncols: int) -> int:
    return len(_rref_inplace([list(r) for r in rows], ncols))


def _solve_rows(rows: list[list[Scalar]], ncols: int, rhs: Sequence[Scalar]) -> list[Scalar] | None:
    """One solution of rows . v = rhs (free variables zero), or None if inconsistent."""
    work = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    pivots = _rref_inplace(work, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    v = [ZERO] * ncols
    for i, pc in enumerate(pivots):
        v[pc] = work[i][ncols]
    return v


class Echelon:
    """Incrementally maintained echelon basis, used for independence tests."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self._rows: list[tuple[int, list[Scalar]]] = []

    def reduce(self, vec: Sequence[Scalar]) -> list[Scalar]:
        v = list(vec)
        for pc, row in self._rows:
            f = v[pc]
            if f:
                for k in range(pc, self.ncols):
                    if row[k]:
                        v[k] = v[k] - f * row[k]
        return v

    def add(self, vec: Sequence[Scalar]) -> bool:
        """Insert ``vec``; returns False if it was already in the span."""
        v = self.reduce(vec)
        for pc in range(self.ncols):
            if v[pc]:
                inv = v[pc].inverse()
                v = [x * inv if x else x for x in v]
                self._rows.append((pc, v))
                self._rows.sort(key=lambda t: t[0])
                return True
        return False

    def contains(self, vec: Sequence[Scalar]) -> bool:
        return not any(self.reduce(vec))

    def __len__(self):
        return len(self._rows)


# ---------------------------------------------------------------------------
# Matrix
# ---------------------------------------------------------------------------


class Matrix:
    """Immutable dense matrix over Q(i).  Zero-row and zero-column shapes are legal."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable = ()):
        entries = tuple(as_scalar(e) for e in entries)
        if rows < 0 or cols < 0 or len(entries) != rows * cols:
            raise SizeMismatch(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @staticmethod
    def _wrap(rows: int, cols: int, entries: tuple) -> "Matrix":
        m = object.__new__(Matrix)
        m.rows, m.cols, m.entries = rows, cols, entries
        return m

    @classmethod
    def from_rows(cls, data: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        data = [list(r) for r in data]
        if cols is None:
            cols = len(data[0]) if data else 0
        for r in data:
            if len(r) != cols:
                raise SizeMismatch("ragged rows")
        return cls(len(data), cols, (x for r in data for x in r))

    @classmethod
    def _from_lists(cls, data: list[list[Scalar]], cols: int) -> "Matrix":
        return cls._wrap(len(data), cols, tuple(x for r in data for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls._wrap(rows, cols, (ZERO,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._wrap(n, n, tuple(ONE if i == j else ZERO for i in range(n) for j in range(n)))

    @classmethod
    def diag(cls, values: Sequence) -> "Matrix":
        vals = [as_scalar(v) for v in values]
        n = len(vals)
        return cls._wrap(n, n, tuple(vals[i] if i == j else ZERO for i in range(n) for j in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx: tuple[int, int]) -> Scalar:
        i, j = idx
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Scalar, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[Scalar, ...]:
        return self.entries[j::self.cols] if self.cols else ()

    def to_lists(self) -> list[list[Scalar]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def to_strings(self) -> list[list[str]]:
        return [[format_scalar(x) for x in self.row(i)] for i in range(self.rows)]

    @property
    def T(self) -> "Matrix":
        return Matrix._wrap(self.cols, self.rows,
                            tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)))

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        return Matrix._wrap(r1 - r0, c1 - c0,
                            tuple(self.entries[i * self.cols + j] for i in range(r0, r1) for j in range(c0, c1)))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"Matrix({self.to_strings()!r})" if self.rows else f"Matrix.zeros({self.rows}, {self.cols})"

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise SizeMismatch(f"cannot add {self.shape} and {other.shape}")
        return Matrix._wrap(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise SizeMismatch(f"cannot subtract {other.shape} from {self.shape}")
        return Matrix._wrap(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Matrix":
        return Matrix._wrap(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, c) -> "Matrix":
        c = as_scalar(c)
        return Matrix._wrap(self.rows, self.cols, tuple(c * a for a in self.entries))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise SizeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        n, k, p = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        out = []
        for i in range(n):
            arow = [(t, a[i * k + t]) for t in range(k) if a[i * k + t]]
            for j in range(p):
                acc = ZERO
                for t, av in arow:
                    bv = b[t * p + j]
                    if bv:
                        acc = acc + av * bv
                out.append(acc)
        return Matrix._wrap(n, p, tuple(out))

    def __pow__(self, k: int) -> "Matrix":
        if not self.is_square():
            raise SizeMismatch("power of a non-square matrix")
        result, base = Matrix.identity(self.rows), self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result


def block_diag(*blocks: Matrix) -> Matrix:
    n = sum(b.rows for b in blocks)
    m = sum(b.cols for b in blocks)
    data = [[ZERO] * m for _ in range(n)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.rows):
            for j in range(b.cols):
                data[r0 + i][c0 + j] = b[i, j]
        r0 += b.rows
        c0 += b.cols
    return Matrix._from_lists(data, m)


def column(values: Sequence) -> Matrix:
    return Matrix(len(values), 1, values)


# ---------------------------------------------------------------------------
# kernel operations
# ---------------------------------------------------------------------------


def rref(M: Matrix) -> tuple[Matrix, list[int], Matrix]:
    """Reduced row echelon form ``R`` with an invertible ``T`` such that ``T @ M == R``."""
    rows = M.to_lists()
    track = Matrix.identity(M.rows).to_lists()
    pivots = _rref_inplace(rows, M.cols, track)
    return Matrix._from_lists(rows, M.cols), pivots, Matrix._from_lists(track, M.rows)


def rank(M: Matrix) -> int:
    return _rank_rows(M.to_lists(), M.cols)


def nullspace(M: Matrix) -> list[Matrix]:
    """Basis of the right kernel as column vectors; ``len == M.cols - rank(M)``."""
    return [column(v) for v in _nullspace_rows(M.to_lists(), M.cols)]


def invert(M: Matrix) -> Matrix:
    if not M.is_square():
        raise SizeMismatch(f"cannot invert a {M.rows}x{M.cols} matrix")
    rows = M.to_lists()
    track = Matrix.identity(M.rows).to_lists()
    pivots = _rref_inplace(rows, M.cols, track)
    if len(pivots) != M.rows:
        raise Singular(f"matrix has rank {len(pivots)} < {M.rows}")
    return Matrix._from_lists(track, M.rows)


def solve(M: Matrix, rhs: Matrix) -> Matrix | None:
    """A particular solution ``v`` of ``M @ v == rhs`` (single column), or None."""
    v = _solve_rows(M.to_lists(), M.cols, rhs.entries)
    return None if v is None else column(v)


def commutant_map(A: Matrix) -> Matrix:
    """Matrix of ``Y -> Y A - A Y`` acting on row-major ``vec(Y)``."""
    if not A.is_square():
        raise SizeMismatch("commutant map needs a square matrix")
    n = A.rows
    N = n * n
    data = [[ZERO] * N for _ in range(N)]
    for i in range(n):
        for j in range(n):
            out = i * n + j
            row = data[out]
            # (YA)_ij = sum_k Y_ik A_kj ; (AY)_ij = sum_k A_ik Y_kj
            for k in range(n):
                a = A[k, j]
                if a:
                    row[i * n + k] = row[i * n + k] + a
                a = A[i, k]
                if a:
                    row[k * n + j] = row[k * n + j] - a
    return Matrix._from_lists(data, N)
