"""Exact linear algebra over the rationals.

Vectors are tuples, matrices are sequences of row tuples. Entries may be
``int`` or :class:`fractions.Fraction`; results use ``Fraction`` unless
stated otherwise. Nothing here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vector = tuple
Matrix = Sequence[Sequence]


def frac_vector(v: Iterable) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)


def dot(u: Sequence, v: Sequence) -> Fraction:
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")
    return sum((Fraction(a) * b for a, b in zip(u, v)), Fraction(0))


def idot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def add(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v: Sequence) -> tuple:
    return tuple(c * a for a in v)


def is_zero(v: Sequence) -> bool:
    return all(x == 0 for x in v)


def mat_vec(M: Matrix, v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in M)


def vec_mat(v: Sequence, M: Matrix) -> tuple:
    if not M:
        return ()
    ncols = len(M[0])
    out = [Fraction(0)] * ncols
    for c, row in zip(v, M):
        if c:
            for j in range(ncols):
                out[j] += c * row[j]
    return tuple(out)


def transpose(M: Matrix, ncols: int | None = None) -> list[tuple]:
    if not M:
        return [() for _ in range(ncols or 0)]
    return [tuple(row[j] for row in M) for j in range(len(M[0]))]


def rref(M: Matrix, ncols: int | None = None) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form. Returns (nonzero rows, pivot columns)."""
    rows = [[Fraction(x) for x in row] for row in M]
    if not rows:
        return [], []
    n = len(rows[0]) if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(M: Matrix) -> int:
    return len(rref(M)[1])


def nullspace(M: Matrix, ncols: int) -> list[tuple[Fraction, ...]]:
    """Basis of {x : M x = 0} in Q^ncols."""
    R, pivots = rref(M, ncols) if M else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, pc in zip(R, pivots):
            x[pc] = -row[f]
        basis.append(tuple(x))
    return basis


def left_solve(B: Matrix, x: Sequence) -> tuple[Fraction, ...] | None:
    """Coefficients c with sum c_i B[i] = x, or None when x is not in the row span.

    The rows of B must be linearly independent when a unique answer matters.
    """
    k = len(B)
    n = len(x)
    if k == 0:
        return () if is_zero(x) else None
    # Solve B^T c = x.
    aug = [[Fraction(B[i][j]) for i in range(k)] + [Fraction(x[j])] for j in range(n)]
    R, pivots = rref(aug, k + 1)
    if k in pivots:
        return None
    c = [Fraction(0)] * k
    for row, pc in zip(R, pivots):
        c[pc] = row[k]
    return tuple(c)


def inverse(M: Matrix) -> list[tuple[Fraction, ...]]:
    n = len(M)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(M)]
    R, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ValueError("matrix is singular")
    return [tuple(row[n:]) for row in R]


def det(M: Matrix) -> Fraction:
    rows = [[Fraction(x) for x in row] for row in M]
    n = len(rows)
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            d = -d
        d *= rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] / rows[c][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return d


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b) if a and b else 0


def denominator_lcm(v: Iterable) -> int:
    m = 1
    for x in v:
        m = lcm(m, Fraction(x).denominator)
    return m


def primitive(v: Sequence) -> tuple[int, ...]:
    """Positive rescaling of a rational vector to a primitive integer vector."""
    m = denominator_lcm(v)
    ints = [int(Fraction(x) * m) for x in v]
    g = 0
    for a in ints:
        g = gcd(g, a)
    if g == 0:
        return tuple(0 for _ in ints)
    return tuple(a // g for a in ints)


def canonical_subspace(vectors: Iterable[Sequence], dim: int) -> tuple[tuple[int, ...], ...]:
    """Canonical integer basis of a rational span: RREF rows scaled to primitive."""
    vs = [tuple(v) for v in vectors]
    if not vs:
        return ()
    R, _ = rref(vs, dim)
    return tuple(primitive(row) for row in R)


def project_onto_complement(v: Sequence, basis: Sequence[Sequence]) -> tuple[Fraction, ...]:
    """Orthogonal (dot product) projection of v onto the complement of span(basis)."""
    v = frac_vector(v)
    if not basis:
        return v
    gram = [[dot(a, b) for b in basis] for a in basis]
    rhs = [dot(a, v) for a in basis]
    coeffs = left_solve(gram, rhs)
    if coeffs is None:
        raise ValueError("basis is degenerate")
    for c, b in zip(coeffs, basis):
        if c:
            v = tuple(x - c * y for x, y in zip(v, b))
    return v


def in_span(v: Sequence, basis: Sequence[Sequence]) -> bool:
    if is_zero(v):
        return True
    if not basis:
        return False
    return rank(list(basis) + [tuple(v)]) == rank(basis)


def fmt(x) -> str:
    """Exact string for a rational: ``"3"`` or ``"-1/2"``."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
