"""Spectra over Q(i), Jordan partitions and the Weyr canonical form.

Polynomials are lists of :class:`Scalar` coefficients, highest degree first.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

import mpmath

from .errors import EigenvaluesNotInField, NotAnEigenvalue, SizeMismatch
from .linalg import (
    ONE,
    ZERO,
    Echelon,
    Matrix,
    Scalar,
    _nullspace_rows,
    _rank_rows,
    as_scalar,
    invert,
)

# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------


def _trim(p: list[Scalar]) -> list[Scalar]:
    i = 0
    while i < len(p) - 1 and not p[i]:
        i += 1
    return p[i:]


def poly_divmod(p: Sequence[Scalar], q: Sequence[Scalar]) -> tuple[list[Scalar], list[Scalar]]:
    p, q = _trim(list(p)), _trim(list(q))
    if not q[0]:
        raise ZeroDivisionError("division by the zero polynomial")
    if len(p) < len(q):
        return [ZERO], p
    inv_lead = q[0].inverse()
    rem = list(p)
    quot = []
    for i in range(len(p) - len(q) + 1):
        f = rem[i] * inv_lead
        quot.append(f)
        if f:
            for j in range(1, len(q)):
                rem[i + j] = rem[i + j] - f * q[j]
    r = _trim(rem[len(p) - len(q) + 1:] or [ZERO])
    return quot, r


def poly_gcd(p: Sequence[Scalar], q: Sequence[Scalar]) -> list[Scalar]:
    """Monic gcd."""
    a, b = _trim(list(p)), _trim(list(q))
    while any(b):
        _, r = poly_divmod(a, b)
        a, b = b, r
    inv = a[0].inverse()
    return [c * inv for c in a]


def poly_derivative(p: Sequence[Scalar]) -> list[Scalar]:
    deg = len(p) - 1
    if deg == 0:
        return [ZERO]
    return [p[i] * (deg - i) for i in range(deg)]


def poly_eval(p: Sequence[Scalar], x: Scalar) -> Scalar:
    acc = ZERO
    for c in p:
        acc = acc * x + c
    return acc


def poly_eval_matrix(p: Sequence[Scalar], A: Matrix) -> Matrix:
    acc = Matrix.zeros(A.rows, A.cols)
    eye = Matrix.identity(A.rows)
    for c in p:
        acc = acc @ A + eye.scale(c)
    return acc


def char_poly(A: Matrix) -> list[Scalar]:
    """Coefficients of det(xI - A), highest degree first (monic, degree n).

    Faddeev-LeVerrier recursion; exact because the field has characteristic zero.
    """
    if not A.is_square():
        raise SizeMismatch("characteristic polynomial of a non-square matrix")
    n = A.rows
    coeffs = [ONE]
    Mk = Matrix.zeros(n, n)
    eye = Matrix.identity(n)
    for k in range(1, n + 1):
        Mk = A @ Mk + eye.scale(coeffs[-1])
        AM = A @ Mk
        trace = ZERO
        for i in range(n):
            trace = trace + AM[i, i]
        coeffs.append(trace * Scalar(Fraction(-1, k)))
    return coeffs


# ---------------------------------------------------------------------------
# roots over Q(i)
# ---------------------------------------------------------------------------


def _denominator_lcm(p: Sequence[Scalar]) -> int:
    d = 1
    for c in p:
        d = lcm(d, c.re.denominator, c.im.denominator)
    return d


def _gaussian_integer_roots(q: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Gaussian-integer roots of a squarefree monic polynomial with Gaussian-integer coefficients.

    Candidates come from high-precision numerical roots and are verified exactly.
    """
    deg = len(q) - 1
    if deg == 0:
        return []

    def exact_eval(y: tuple[int, int]) -> tuple[int, int]:
        ar, ai = 0, 0
        yr, yi = y
        for cr, ci in q:
            ar, ai = ar * yr - ai * yi + cr, ar * yi + ai * yr + ci
        return ar, ai

    size = max(max(abs(a), abs(b)) for a, b in q)
    found: list[tuple[int, int]] = []
    for extra in (0, 40, 120):
        dps = 30 + len(str(size)) + extra
        with mpmath.workdps(dps):
            coeffs = [mpmath.mpc(a, b) for a, b in q]
            try:
                approx = mpmath.polyroots(coeffs, maxsteps=200 + 10 * extra, extraprec=2 * dps)
            except mpmath.libmp.NoConvergence:
                continue
        found = []
        for z in approx:
            base = (int(mpmath.nint(mpmath.re(z))), int(mpmath.nint(mpmath.im(z))))
            for dr in (0, -1, 1):
                for di in (0, -1, 1):
                    cand = (base[0] + dr, base[1] + di)
                    if cand not in found and exact_eval(cand) == (0, 0):
                        found.append(cand)
                        break
                else:
                    continue
                break
        if len(found) == deg:
            break
    return found


def split_roots(p: Sequence[Scalar]) -> tuple[list[tuple[Scalar, int]], list[Scalar]]:
    """Roots of ``p`` in Q(i) with multiplicities, plus the monic residual factor without roots."""
    p = _trim(list(p))
    inv = p[0].inverse()
    p = [c * inv for c in p]
    roots: list[tuple[Scalar, int]] = []
    zero_mult = 0
    while len(p) > 1 and not p[-1]:
        p = p[:-1]
        zero_mult += 1
    if zero_mult:
        roots.append((ZERO, zero_mult))
    if len(p) > 1:
        sqfree, _ = poly_divmod(p, poly_gcd(p, poly_derivative(p)))
        inv = sqfree[0].inverse()
        sqfree = [c * inv for c in sqfree]
        L = _denominator_lcm(sqfree)
        scaled = []
        for k, c in enumerate(sqfree):
            s = c * (L ** k)
            scaled.append((int(s.re), int(s.im)))
        for yr, yi in _gaussian_integer_roots(scaled):
            lam = Scalar(Fraction(yr, L), Fraction(yi, L))
            mult = 0
            while len(p) > 1:
                quot, rem = poly_divmod(p, [ONE, -lam])
                if any(rem):
                    break
                p = quot
                mult += 1
            if mult:
                roots.append((lam, mult))
    roots.sort(key=lambda t: t[0].sort_key())
    return roots, p


def eigenvalues(A: Matrix) -> list[Scalar]:
    """All eigenvalues with multiplicity, ascending in the (re, im) total order."""
    roots, residual = split_roots(char_poly(A))
    if len(residual) > 1:
        raise EigenvaluesNotInField([c for c in residual])
    return [lam for lam, mult in roots for _ in range(mult)]


# ---------------------------------------------------------------------------
# partitions
# ---------------------------------------------------------------------------


def conjugate_partition(part: Sequence[int]) -> tuple[int, ...]:
    part = [p for p in part if p > 0]
    if not part:
        return ()
    return tuple(sum(1 for p in part if p > k) for k in range(max(part)))


def _shifted(A: Matrix, lam: Scalar) -> Matrix:
    n = A.rows
    return Matrix._wrap(n, n, tuple(A.entries[i * n + j] - lam if i == j else A.entries[i * n + j]
                                    for i in range(n) for j in range(n)))


def weyr_characteristic(A: Matrix, lam: Scalar) -> tuple[int, ...]:
    """w_k = dim ker (A - lam)^k - dim ker (A - lam)^(k-1), until it vanishes."""
    n = A.rows
    N = _shifted(A, lam)
    w = []
    prev_null = 0
    P = Matrix.identity(n)
    while True:
        P = P @ N
        null = n - _rank_rows(P.to_lists(), n)
        if null == prev_null:
            break
        w.append(null - prev_null)
        prev_null = null
    return tuple(w)


def jordan_partition(A: Matrix, lam) -> tuple[int, ...]:
    if not A.is_square():
        raise SizeMismatch("Jordan partition of a non-square matrix")
    lam = as_scalar(lam)
    w = weyr_characteristic(A, lam)
    if not w:
        raise NotAnEigenvalue(f"{lam} is not an eigenvalue")
    return conjugate_partition(w)


# ---------------------------------------------------------------------------
# Weyr form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EigenStructure:
    """Eigenvalues in ascending order, each with its Jordan partition (weakly decreasing)."""

    eigenvalues: tuple[tuple[Scalar, tuple[int, ...]], ...]

    @property
    def size(self) -> int:
        return sum(sum(q) for _, q in self.eigenvalues)

    def weyr_characteristics(self) -> tuple[tuple[int, ...], ...]:
        return tuple(conjugate_partition(q) for _, q in self.eigenvalues)


@dataclass(frozen=True)
class WeyrForm:
    W: Matrix
    structure: EigenStructure
    strip_sizes: tuple[tuple[int, ...], ...]


def weyr_matrix(structure: EigenStructure) -> Matrix:
    """The Weyr matrix: per eigenvalue, lam*I plus [I; 0] blocks from strip t+1 into strip t."""
    n = structure.size
    data = [[ZERO] * n for _ in range(n)]
    offset = 0
    for lam, q in structure.eigenvalues:
        w = conjugate_partition(q)
        starts = []
        s = offset
        for wt in w:
            starts.append(s)
            s += wt
        for i in range(offset, s):
            data[i][i] = lam
        for t in range(1, len(w)):
            for j in range(w[t]):
                data[starts[t - 1] + j][starts[t] + j] = ONE
        offset = s
    return Matrix._from_lists(data, n)


def _jordan_chains(A: Matrix, lam: Scalar):
    """Chain tops ``v`` with heights ``h``: N^h v = 0, N^(h-1) v != 0, N = A - lam.

    Tops are picked greedily from the rref nullspace bases of N^k, highest k first,
    so the result is deterministic.
    """
    n = A.rows
    N = _shifted(A, lam)
    kernels: list[list[list[Scalar]]] = [[]]
    P = Matrix.identity(n)
    while True:
        P = P @ N
        ker = _nullspace_rows(P.to_lists(), n)
        if len(ker) == len(kernels[-1]):
            break
        kernels.append(ker)
    top = len(kernels) - 1
    Nl = N.to_lists()

    def apply_N(v):
        return [sum((Nl[i][k] * v[k] for k in range(n) if v[k] and Nl[i][k]), ZERO) for i in range(n)]

    chains: list[tuple[list[Scalar], int]] = []
    for k in range(top, 0, -1):
        ech = Echelon(n)
        for v in kernels[k - 1]:
            ech.add(v)
        for v, h in chains:
            u = v
            for _ in range(h - k):
                u = apply_N(u)
            ech.add(u)
        for cand in kernels[k]:
            if ech.add(cand):
                chains.append((cand, k))
    return chains, apply_N


def weyr_form(A: Matrix) -> tuple[WeyrForm, Matrix]:
    """Return the Weyr form and ``Y`` with ``Y @ A @ inv(Y) == W``."""
    if not A.is_square():
        raise SizeMismatch("Weyr form of a non-square matrix")
    n = A.rows
    roots, residual = split_roots(char_poly(A)) if n else ([], [ONE])
    if len(residual) > 1:
        raise EigenvaluesNotInField(list(residual))
    columns: list[list[Scalar]] = []
    eig = []
    for lam, _ in roots:
        chains, apply_N = _jordan_chains(A, lam)
        heights = [h for _, h in chains]
        eig.append((lam, tuple(heights)))
        # vector t (1-based) of a chain of height h is N^(h-t) v
        powers = []
        for v, h in chains:
            seq = [v]
            for _ in range(h - 1):
                seq.append(apply_N(seq[-1]))
            powers.append(seq)
        for t in range(1, max(heights) + 1):
            for (v, h), seq in zip(chains, powers):
                if h >= t:
                    columns.append(seq[h - t])
    structure = EigenStructure(tuple(eig))
    Q = Matrix._wrap(n, n, tuple(columns[j][i] for i in range(n) for j in range(n)))
    Y = invert(Q)
    W = weyr_matrix(structure)
    form = WeyrForm(W, structure, structure.weyr_characteristics())
    return form, Y


def eigen_structure(A: Matrix) -> EigenStructure:
    roots, residual = split_roots(char_poly(A)) if A.rows else ([], [ONE])
    if len(residual) > 1:
        raise EigenvaluesNotInField(list(residual))
    return EigenStructure(tuple((lam, jordan_partition(A, lam)) for lam, _ in roots))


def centralizer_dim(structure: EigenStructure) -> int:
    return sum((2 * j - 1) * qj for _, q in structure.eigenvalues for j, qj in enumerate(q, start=1))


def jordan_presentation(w: WeyrForm) -> tuple[Matrix, Matrix]:
    """Permutation ``P`` with ``P @ W @ P.T == J``, Jordan blocks by eigenvalue then decreasing size."""
    n = w.W.rows
    perm = [0] * n  # perm[jordan_index] = weyr_index
    offset = 0
    for (lam, q), strips in zip(w.structure.eigenvalues, w.strip_sizes):
        strip_start = [offset]
        for wt in strips:
            strip_start.append(strip_start[-1] + wt)
        jpos = offset
        for j, qj in enumerate(q):
            for t in range(qj):
                perm[jpos] = strip_start[t] + j
                jpos += 1
        offset += sum(q)
    P = Matrix._wrap(n, n, tuple(ONE if perm[i] == j else ZERO for i in range(n) for j in range(n)))
    return P, P @ w.W @ P.T
