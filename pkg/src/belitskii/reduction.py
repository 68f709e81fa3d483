"""Belitskii reduction of system triples (A, B, C) under (X, Y, Z).

The triple is stored as one block matrix ``[[A, B], [C, 0]]``; rows are the
Y-coordinates followed by the Z-coordinates and columns are the
Y-coordinates followed by the X-coordinates.  A group element acts as
``M -> S M R^-1`` with ``S = diag(Y, Z)`` and ``R = diag(Y, X)``.

The engine keeps, for the blocks reduced so far, the algebra of all
``(X, Y, Z)`` with ``S M = M R`` on the reduced region.  Its invertible
elements form the stabilizer ``G_k``.  The algebra is stored as an rref
basis in the coordinates ``vec(X) | vec(Y) | vec(Z)`` (row-major).

Blocks are taken in a fixed order: A first, then the blocks of B from the
bottom row strip upwards and left to right, then the blocks of C in the
same order.  A block only ever picks up additive terms from blocks below
it in its column and to its left in its row, all of which are reduced by
then, so each step is one of

* regularization: the additive terms cover the whole block, which is cleared;
* edge reduction: no additive terms, independent row/column groups, ``[0 I; 0 0]``;
* loop reduction: no additive terms, row and column groups tied, Weyr form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

from .errors import EmptyStateSpace, ReductionError, Singular, SizeMismatch
from .linalg import (
    ONE,
    ZERO,
    Echelon,
    Matrix,
    Scalar,
    _nullspace_rows,
    _rank_rows,
    _rref_inplace,
    _solve_rows,
    invert,
    rank,
)
from .weyr import EigenStructure, centralizer_dim, weyr_form


@dataclass(frozen=True)
class SystemTriple:
    m: int
    n: int
    l: int
    A: Matrix
    B: Matrix
    C: Matrix

    def __post_init__(self):
        if min(self.m, self.n, self.l) < 0:
            raise SizeMismatch("negative dimension")
        expected = {"A": (self.n, self.n), "B": (self.n, self.m), "C": (self.l, self.n)}
        for name, shape in expected.items():
            got = getattr(self, name).shape
            if got != shape:
                raise SizeMismatch(f"{name} has shape {got}, expected {shape} for d={self.d}")

    @classmethod
    def build(cls, A, B, C, m: int | None = None, n: int | None = None, l: int | None = None) -> "SystemTriple":
        """Build from nested lists (or Matrices); pass sizes the arrays leave ambiguous."""
        if n is None:
            n = A.rows if isinstance(A, Matrix) else len(A)
        if m is None:
            if isinstance(B, Matrix):
                m = B.cols
            else:
                m = len(B[0]) if len(B) else 0
        if l is None:
            l = C.rows if isinstance(C, Matrix) else len(C)
        return cls(m, n, l, _as_matrix(A, n, n), _as_matrix(B, n, m), _as_matrix(C, l, n))

    @property
    def d(self) -> tuple[int, int, int]:
        return (self.m, self.n, self.l)

    @property
    def total_dim(self) -> int:
        return self.m + self.n + self.l

    def direct_sum(self, other: "SystemTriple") -> "SystemTriple":
        from .linalg import block_diag

        return SystemTriple(self.m + other.m, self.n + other.n, self.l + other.l,
                            block_diag(self.A, other.A), block_diag(self.B, other.B),
                            block_diag(self.C, other.C))

    def restrict(self, xs: list[int], ys: list[int], zs: list[int]) -> "SystemTriple":
        """Sub-triple on the given coordinate subsets."""
        A = Matrix.from_rows([[self.A[i, j] for j in ys] for i in ys], cols=len(ys))
        B = Matrix.from_rows([[self.B[i, j] for j in xs] for i in ys], cols=len(xs))
        C = Matrix.from_rows([[self.C[i, j] for j in ys] for i in zs], cols=len(ys))
        return SystemTriple(len(xs), len(ys), len(zs), A, B, C)


def _as_matrix(data, rows: int, cols: int) -> Matrix:
    if isinstance(data, Matrix):
        return data
    data = [list(r) for r in data]
    if not data and (rows == 0 or cols == 0):
        return Matrix.zeros(rows, cols)
    return Matrix.from_rows(data, cols=cols)


@dataclass(frozen=True)
class GroupElement:
    X: Matrix
    Y: Matrix
    Z: Matrix

    @classmethod
    def identity(cls, m: int, n: int, l: int) -> "GroupElement":
        return cls(Matrix.identity(m), Matrix.identity(n), Matrix.identity(l))

    @property
    def d(self) -> tuple[int, int, int]:
        return (self.X.rows, self.Y.rows, self.Z.rows)

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        """Group product; ``(g @ h)`` acts as ``h`` first, then ``g``."""
        return GroupElement(self.X @ other.X, self.Y @ other.Y, self.Z @ other.Z)

    def inverse(self) -> "GroupElement":
        return GroupElement(invert(self.X), invert(self.Y), invert(self.Z))

    def is_invertible(self) -> bool:
        return all(rank(M) == M.rows for M in (self.X, self.Y, self.Z))


def apply_group(g: GroupElement, s: SystemTriple) -> SystemTriple:
    """``(Y A Y^-1, Y B X^-1, Z C Y^-1)``."""
    if g.d != s.d:
        raise SizeMismatch(f"group element of size {g.d} cannot act on d={s.d}")
    for M in (g.X, g.Y, g.Z):
        if not M.is_square():
            raise SizeMismatch("group element blocks must be square")
    Xi, Yi = invert(g.X), invert(g.Y)
    invert(g.Z)  # Singular if not invertible
    return SystemTriple(s.m, s.n, s.l, g.Y @ s.A @ Yi, g.Y @ s.B @ Xi, g.Z @ s.C @ Yi)


# ---------------------------------------------------------------------------
# trace records
# ---------------------------------------------------------------------------

EMPTY = "Empty"
EDGE = "EdgeIdentity"
WEYR = "WeyrBlock"


def block_sigma(kind: str, rows: int, cols: int, r: int | None = None,
                structure: EigenStructure | None = None) -> int:
    if kind == EMPTY:
        return rows * cols
    if kind == EDGE:
        return r * (rows + cols - r)
    if kind == WEYR:
        return rows * rows - centralizer_dim(structure)
    raise ValueError(f"unknown block kind {kind!r}")


@dataclass(frozen=True)
class BlockLocation:
    region: str  # "A", "B" or "C"
    row_range: tuple[int, int]
    col_range: tuple[int, int]


@dataclass(frozen=True)
class ReducedBlock:
    kind: str
    rows: int
    cols: int
    sigma: int
    location: BlockLocation
    rank: int | None = None
    structure: EigenStructure | None = None

    def __post_init__(self):
        if self.kind == EDGE and not (0 <= self.rank <= min(self.rows, self.cols)):
            raise ReductionError("edge rank out of range")
        if self.kind == WEYR and self.rows != self.cols:
            raise ReductionError("Weyr block must be square")


@dataclass(frozen=True)
class StabilizerDescription:
    """The algebra whose units fix every reduced block.

    ``basis`` rows are an rref basis in the coordinates vec(X) | vec(Y) | vec(Z);
    ``partitions`` lists the strip sizes per family at the end of the reduction.
    """

    d: tuple[int, int, int]
    basis: tuple[tuple[Scalar, ...], ...]
    partitions: dict = field(default_factory=dict, compare=False)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def elements(self) -> list[tuple[Matrix, Matrix, Matrix]]:
        return [_split_coords(row, *self.d) for row in self.basis]

    def contains(self, X: Matrix, Y: Matrix, Z: Matrix) -> bool:
        vec = list(X.entries) + list(Y.entries) + list(Z.entries)
        return _in_rref_span(self.basis, _pivots_of(self.basis), vec)


def _split_coords(row, m, n, l):
    oy, oz = m * m, m * m + n * n
    return (Matrix(m, m, row[:oy]), Matrix(n, n, row[oy:oz]), Matrix(l, l, row[oz:]))


def _pivots_of(basis) -> list[int]:
    pivots = []
    for row in basis:
        for k, v in enumerate(row):
            if v:
                pivots.append(k)
                break
    return pivots


def _in_rref_span(basis, pivots, vec) -> bool:
    acc = list(vec)
    for row, pc in zip(basis, pivots):
        f = acc[pc]
        if f:
            for k, v in enumerate(row):
                if v:
                    acc[k] = acc[k] - f * v
    return not any(acc)


@dataclass(frozen=True)
class CanonicalSystem:
    canonical: SystemTriple
    witness: GroupElement
    trace: tuple[ReducedBlock, ...]
    final_stabilizer: StabilizerDescription

    @property
    def sigmas(self) -> tuple[int, ...]:
        return tuple(b.sigma for b in self.trace)


# ---------------------------------------------------------------------------
# engine
# ---------------------------------------------------------------------------


@dataclass
class _Strip:
    family: str  # "X", "Y" or "Z"
    start: int
    size: int
    cls: int


class _Reducer:
    def __init__(self, s: SystemTriple, check: bool = True):
        self.s0 = s
        self.m, self.n, self.l = s.d
        m, n, l = s.d
        self.offset = {"X": 0, "Y": m * m, "Z": m * m + n * n}
        self.size = {"X": m, "Y": n, "Z": l}
        self.N = m * m + n * n + l * l
        self.check = check
        self.cur = s
        self.M = self._big(s)
        self.reduced = [[False] * (n + m) for _ in range(n + l)]
        for i in range(n, n + l):
            for j in range(n, n + m):
                self.reduced[i][j] = True  # the structural zero block
        self._next_cls = itertools.count()
        self.strips = {f: ([_Strip(f, 0, k, next(self._next_cls))] if k else []) for f, k in self.size.items()}
        self.basis = [[ONE if i == j else ZERO for j in range(self.N)] for i in range(self.N)]
        self.pivots = list(range(self.N))
        self.witness = [Matrix.identity(m), Matrix.identity(n), Matrix.identity(l)]
        self.trace: list[ReducedBlock] = []

    # -- coordinates ------------------------------------------------------
    def _big(self, s: SystemTriple) -> list[list[Scalar]]:
        n, m = s.n, s.m
        rows = []
        for i in range(n):
            rows.append(list(s.A.row(i)) + list(s.B.row(i)))
        for i in range(s.l):
            rows.append(list(s.C.row(i)) + [ZERO] * m)
        return rows

    def coord(self, fam: str, r: int, c: int) -> int:
        return self.offset[fam] + r * self.size[fam] + c

    def big_row(self, st: _Strip) -> int:
        return st.start if st.family == "Y" else self.n + st.start

    def big_col(self, st: _Strip) -> int:
        return st.start if st.family == "Y" else self.n + st.start

    def _masked(self) -> list[list[Scalar]]:
        return [[v if red else ZERO for v, red in zip(row, rrow)] for row, rrow in zip(self.M, self.reduced)]

    def functionals(self, R0: int, a: int, C0: int, b: int, Mt) -> list[dict[int, Scalar]]:
        """Linear forms on (X, Y, Z) giving the entries of (S Mt - Mt R) on a block."""
        n, m, l = self.n, self.m, self.l
        out = []
        for R in range(R0, R0 + a):
            for Cc in range(C0, C0 + b):
                f: dict[int, Scalar] = {}
                if R < n:
                    for p in range(n):
                        v = Mt[p][Cc]
                        if v:
                            k = self.coord("Y", R, p)
                            f[k] = f.get(k, ZERO) + v
                else:
                    r = R - n
                    for p in range(l):
                        v = Mt[n + p][Cc]
                        if v:
                            k = self.coord("Z", r, p)
                            f[k] = f.get(k, ZERO) + v
                if Cc < n:
                    for q in range(n):
                        v = Mt[R][q]
                        if v:
                            k = self.coord("Y", q, Cc)
                            f[k] = f.get(k, ZERO) - v
                else:
                    c = Cc - n
                    for q in range(m):
                        v = Mt[R][n + q]
                        if v:
                            k = self.coord("X", q, c)
                            f[k] = f.get(k, ZERO) - v
                out.append(f)
        return out

    @staticmethod
    def evaluate(funcs, vectors) -> list[list[Scalar]]:
        rows = []
        for f in funcs:
            items = [(k, v) for k, v in f.items() if v]
            row = []
            for vec in vectors:
                acc = ZERO
                for k, v in items:
                    w = vec[k]
                    if w:
                        acc = acc + v * w
                row.append(acc)
            rows.append(row)
        return rows

    # -- algebra maintenance ---------------------------------------------
    def _set_basis(self, vectors: list[list[Scalar]]):
        work = [list(v) for v in vectors]
        pivots = _rref_inplace(work, self.N)
        self.basis = work[:len(pivots)]
        self.pivots = pivots

    def restrict(self, funcs) -> int:
        """Intersect the algebra with the kernel of ``funcs``; returns the dimension drop."""
        old = len(self.basis)
        rows = self.evaluate(funcs, self.basis)
        if not any(any(r) for r in rows):
            return 0
        coeffs = _nullspace_rows(rows, old)
        new = []
        for cvec in coeffs:
            v = [ZERO] * self.N
            for t, c in enumerate(cvec):
                if c:
                    bt = self.basis[t]
                    for k in range(self.N):
                        if bt[k]:
                            v[k] = v[k] + c * bt[k]
            new.append(v)
        self._set_basis(new)
        return old - len(self.basis)

    def contains(self, vec) -> bool:
        return _in_rref_span(self.basis, self.pivots, vec)

    def _diag_coords(self) -> list[int]:
        out = []
        for fam, strips in self.strips.items():
            for st in strips:
                for r in range(st.start, st.start + st.size):
                    for c in range(st.start, st.start + st.size):
                        out.append(self.coord(fam, r, c))
        return out

    def radical_part(self) -> list[list[Scalar]]:
        """Basis of the algebra elements whose diagonal strip blocks vanish."""
        rows = [[b[k] for b in self.basis] for k in self._diag_coords()]
        coeffs = _nullspace_rows(rows, len(self.basis)) if rows else \
            [[ONE if i == j else ZERO for j in range(len(self.basis))] for i in range(len(self.basis))]
        out = []
        for cvec in coeffs:
            v = [ZERO] * self.N
            for t, c in enumerate(cvec):
                if c:
                    for k, x in enumerate(self.basis[t]):
                        if x:
                            v[k] = v[k] + c * x
            out.append(v)
        return out

    def _check_triangular(self):
        strip_of = {}
        for fam, strips in self.strips.items():
            idx = [0] * self.size[fam]
            for t, st in enumerate(strips):
                for i in range(st.start, st.start + st.size):
                    idx[i] = t
            strip_of[fam] = idx
        for fam in ("X", "Y", "Z"):
            k = self.size[fam]
            idx = strip_of[fam]
            for r in range(k):
                for c in range(k):
                    if idx[r] > idx[c]:
                        co = self.coord(fam, r, c)
                        if any(row[co] for row in self.basis):
                            raise ReductionError(f"stabilizer not block triangular in {fam} at ({r},{c})")

    # -- group application -----------------------------------------------
    def _class_strips(self, cls: int) -> list[_Strip]:
        return [st for fam in ("X", "Y", "Z") for st in self.strips[fam] if st.cls == cls]

    def _diag_element(self, assignments: dict[int, Matrix]) -> list[list[list[Scalar]]]:
        """Identity triple with the given matrices on every strip of the given classes."""
        mats = {f: Matrix.identity(k).to_lists() for f, k in self.size.items()}
        for cls, P in assignments.items():
            for st in self._class_strips(cls):
                T = mats[st.family]
                for i in range(st.size):
                    for j in range(st.size):
                        T[st.start + i][st.start + j] = P[i, j]
        return [mats["X"], mats["Y"], mats["Z"]]

    def _vec(self, mats) -> list[Scalar]:
        X, Y, Z = mats
        return [x for row in X for x in row] + [x for row in Y for x in row] + [x for row in Z for x in row]

    def _apply(self, mats):
        X, Y, Z = (Matrix._from_lists(M, len(M)) if M else Matrix.zeros(0, 0) for M in mats)
        g = GroupElement(X, Y, Z)
        before = self.M
        self.cur = apply_group(g, self.cur)
        self.M = self._big(self.cur)
        wx, wy, wz = self.witness
        self.witness = [X @ wx, Y @ wy, Z @ wz]
        if self.check:
            for i, row in enumerate(self.reduced):
                for j, red in enumerate(row):
                    if red and self.M[i][j] != before[i][j]:
                        raise ReductionError(f"transformation disturbed reduced entry ({i},{j})")

    # -- strips -------------------------------------------------------------
    def _split(self, st: _Strip, pieces: list[tuple[int, int]]):
        strips = self.strips[st.family]
        pos = strips.index(st)
        new = []
        start = st.start
        for size, cls in pieces:
            if size:
                new.append(_Strip(st.family, start, size, cls))
                start += size
        if start != st.start + st.size:
            raise ReductionError("split pieces do not tile the strip")
        strips[pos:pos + 1] = new

    # -- main loop ------------------------------------------------------------
    def _next_block(self, region: str):
        rfam, cfam = ("Y", "X") if region == "B" else ("Z", "Y")
        for rs in reversed(self.strips[rfam]):
            for cs in self.strips[cfam]:
                if not self.reduced[self.big_row(rs)][self.big_col(cs)]:
                    return rs, cs
        return None

    def run(self):
        if self.n:
            st = self.strips["Y"][0]
            self.process(st, st, "A")
        for region in ("B", "C"):
            while True:
                nxt = self._next_block(region)
                if nxt is None:
                    break
                self.process(*nxt, region)
        if self.check:
            self._check_triangular()

    def process(self, rs: _Strip, cs: _Strip, region: str):
        R0, C0 = self.big_row(rs), self.big_col(cs)
        a, b = rs.size, cs.size
        for i in range(R0, R0 + a):
            for j in range(C0, C0 + b):
                if self.reduced[i][j]:
                    raise ReductionError("block partially reduced")
        block = Matrix.from_rows([self.M[i][C0:C0 + b] for i in range(R0, R0 + a)], cols=b)
        additive = self.evaluate(self.functionals(R0, a, C0, b, self._masked()), self.basis)
        vr = _rank_rows(additive, len(self.basis)) if additive and self.basis else 0
        location = BlockLocation(region, (rs.start, rs.start + a), (cs.start, cs.start + b))

        if vr == a * b and vr > 0:
            kind, target = EMPTY, Matrix.zeros(a, b)
            rad = self.radical_part()
            rows = self.evaluate(self.functionals(R0, a, C0, b, self._masked()), rad)
            sol = _solve_rows(rows, len(rad), [-x for x in block.entries])
            if sol is None:
                raise ReductionError("additive freedom is not carried by off-diagonal parameters")
            nu = [ZERO] * self.N
            for t, c in enumerate(sol):
                if c:
                    for k, x in enumerate(rad[t]):
                        if x:
                            nu[k] = nu[k] + c * x
            mats = self._diag_element({})
            flat = self._vec(mats)
            g = [u + v for u, v in zip(flat, nu)]
            mats = self._unvec(g)
            extra = {}
        elif vr == 0:
            if rs.cls == cs.cls:
                if a != b:
                    raise ReductionError("linked strips of different sizes")
                form, P = weyr_form(block)
                kind, target = WEYR, form.W
                mats = self._diag_element({rs.cls: P})
                extra = {"form": form}
            else:
                r, P, Q = _edge_transforms(block)
                kind, target = EDGE, _edge_shape(a, b, r)
                mats = self._diag_element({rs.cls: P, cs.cls: Q})
                extra = {"r": r}
            if self.check and not self.contains(self._vec(mats)):
                raise ReductionError("block-diagonal transformation is not in the stabilizer")
        else:
            raise ReductionError(
                f"additive freedom of rank {vr} only partly covers a {a}x{b} block in region {region}")

        self._apply(mats)
        got = Matrix.from_rows([self.M[i][C0:C0 + b] for i in range(R0, R0 + a)], cols=b)
        if got != target:
            raise ReductionError(f"block reduced to {got!r}, expected {target!r}")
        for i in range(R0, R0 + a):
            for j in range(C0, C0 + b):
                self.reduced[i][j] = True
        drop = self.restrict(self.functionals(R0, a, C0, b, self._masked()))

        if kind == EMPTY:
            rec = ReducedBlock(EMPTY, a, b, block_sigma(EMPTY, a, b), location)
        elif kind == EDGE:
            r = extra["r"]
            rec = ReducedBlock(EDGE, a, b, block_sigma(EDGE, a, b, r=r), location, rank=r)
            if r:
                rho, rest_i, rest_j = (next(self._next_cls) for _ in range(3))
                row_strips, col_strips = self._class_strips(rs.cls), self._class_strips(cs.cls)
                for st in row_strips:
                    self._split(st, [(r, rho), (a - r, rest_i)])
                for st in col_strips:
                    self._split(st, [(b - r, rest_j), (r, rho)])
        else:
            form = extra["form"]
            rec = ReducedBlock(WEYR, a, b, block_sigma(WEYR, a, b, structure=form.structure), location,
                               structure=form.structure)
            ids = {}
            pieces = []
            for e, w in enumerate(form.strip_sizes):
                k = len(w)
                for t in range(1, k + 1):
                    for s in range(k, t - 1, -1):
                        size = w[s - 1] - (w[s] if s < k else 0)
                        if (e, s) not in ids:
                            ids[(e, s)] = next(self._next_cls)
                        pieces.append((size, ids[(e, s)]))
            for st in self._class_strips(rs.cls):
                self._split(st, pieces)
        if drop != rec.sigma:
            raise ReductionError(f"stabilizer dimension dropped by {drop}, formula gives {rec.sigma} for {rec}")
        self.trace.append(rec)

    def _unvec(self, vec):
        m, n, l = self.m, self.n, self.l
        oy, oz = m * m, m * m + n * n
        X = [list(vec[i * m:(i + 1) * m]) for i in range(m)]
        Y = [list(vec[oy + i * n:oy + (i + 1) * n]) for i in range(n)]
        Z = [list(vec[oz + i * l:oz + (i + 1) * l]) for i in range(l)]
        return [X, Y, Z]

    def result(self) -> CanonicalSystem:
        X, Y, Z = self.witness
        stab = StabilizerDescription(
            self.s0.d, tuple(tuple(r) for r in self.basis),
            {f: tuple(st.size for st in self.strips[f]) for f in ("X", "Y", "Z")})
        return CanonicalSystem(self.cur, GroupElement(X, Y, Z), tuple(self.trace), stab)


def _edge_shape(a: int, b: int, r: int) -> Matrix:
    """``[[0, I_r], [0, 0]]``: identity in the upper-right corner."""
    return Matrix._wrap(a, b, tuple(ONE if i < r and j == b - r + i else ZERO for i in range(a) for j in range(b)))


def _edge_transforms(M: Matrix) -> tuple[int, Matrix, Matrix]:
    """Rank ``r`` and invertible ``P``, ``Q`` with ``P M Q^-1 = [[0, I_r], [0, 0]]``."""
    a, b = M.shape
    rows = M.to_lists()
    work = [list(x) for x in rows]
    pivots = _rref_inplace(work, b)
    r = len(pivots)
    null = _nullspace_rows(rows, b)
    qcols = null + [[ONE if k == p else ZERO for k in range(b)] for p in pivots]
    Qinv = Matrix._wrap(b, b, tuple(qcols[j][i] for i in range(b) for j in range(b)))
    images = [[rows[i][p] for i in range(a)] for p in pivots]
    ech = Echelon(a)
    pcols = []
    for v in images:
        ech.add(v)
        pcols.append(v)
    for k in range(a):
        e = [ONE if i == k else ZERO for i in range(a)]
        if len(pcols) == a:
            break
        if ech.add(e):
            pcols.append(e)
    Pinv = Matrix._wrap(a, a, tuple(pcols[j][i] for i in range(a) for j in range(a)))
    return r, invert(Pinv), invert(Qinv)


# single-block versions of the three reduction steps


def edge_reduce(M: Matrix) -> tuple[int, Matrix, Matrix, Matrix]:
    """Reduce ``M`` under independent row and column transforms.

    Returns ``(r, E, P, Q)`` with ``E = [[0, I_r], [0, 0]]`` and ``P M Q^-1 = E``.
    """
    r, P, Q = _edge_transforms(M)
    return r, _edge_shape(M.rows, M.cols, r), P, Q


def regularize(M: Matrix, additive) -> tuple[Matrix, list[Scalar]]:
    """Clear ``M`` with the additive terms ``V_k`` (matrices of the same shape).

    Returns ``(residual, c)`` with ``residual = M + sum c_k V_k``; the residual
    is zero when the terms span the whole block, and otherwise is the normal
    form of ``M`` modulo their span.
    """
    additive = list(additive)
    ech = Echelon(M.rows * M.cols)
    for V in additive:
        ech.add(list(V.entries))
    residual = ech.reduce(list(M.entries))
    if not additive:
        return M, []
    cols = [list(V.entries) for V in additive]
    system = [[cols[k][i] for k in range(len(cols))] for i in range(M.rows * M.cols)]
    coeffs = _solve_rows(system, len(cols), [x - y for x, y in zip(residual, M.entries)])
    if coeffs is None:
        raise ReductionError("normal form is not reachable with the additive terms")
    return Matrix._wrap(M.rows, M.cols, tuple(residual)), coeffs


def loop_reduce(M: Matrix):
    """Reduce a square block under simultaneous conjugation: ``(WeyrForm, Y)`` with ``Y M Y^-1 = W``."""
    return weyr_form(M)


def _canonicalize(s: SystemTriple, check: bool = True) -> CanonicalSystem:
    red = _Reducer(s, check=check)
    red.run()
    return red.result()


def canonicalize(s: SystemTriple, check: bool = True) -> CanonicalSystem:
    """Belitskii canonical form of ``s`` with witness, trace and final stabilizer.

    ``check`` enables the internal consistency assertions (cheap at these sizes).
    """
    if s.n == 0 and (s.m or s.l):
        raise EmptyStateSpace(f"state space is empty for d={s.d}")
    return _canonicalize(s, check=check)


def are_equivalent(s1: SystemTriple, s2: SystemTriple) -> bool:
    if s1.d != s2.d:
        raise SizeMismatch(f"dimension vectors differ: {s1.d} vs {s2.d}")
    return canonicalize(s1).canonical == canonicalize(s2).canonical


def connecting_element(s1: SystemTriple, s2: SystemTriple) -> GroupElement | None:
    """``g`` with ``apply_group(g, s1) == s2``, or None when the systems are not equivalent."""
    if s1.d != s2.d:
        raise SizeMismatch(f"dimension vectors differ: {s1.d} vs {s2.d}")
    c1, c2 = canonicalize(s1), canonicalize(s2)
    if c1.canonical != c2.canonical:
        return None
    return c2.witness.inverse() @ c1.witness


__all__ = [
    "SystemTriple", "GroupElement", "apply_group", "canonicalize", "are_equivalent",
    "connecting_element", "CanonicalSystem", "ReducedBlock", "BlockLocation",
    "StabilizerDescription", "block_sigma", "EMPTY", "EDGE", "WEYR",
]
