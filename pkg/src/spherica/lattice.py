"""Integer lattices in Z^d: Hermite normal form, membership, intersection,
and localization at a prime (``Z[1/p]``).

The characteristic exponent ``p = 1`` stands for characteristic zero, where
no localization happens.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from . import qlinalg as ql


class LatticeError(ValueError):
    pass


def hnf(rows: Iterable[Sequence[int]], ncols: int) -> list[list[int]]:
    """Row Hermite normal form of an integer matrix.

    Pivots are positive and entries above a pivot lie in ``[0, pivot)``. Zero
    rows are dropped, so the result is a basis of the row lattice.
    """
    A = [list(map(int, r)) for r in rows]
    for r in A:
        if len(r) != ncols:
            raise LatticeError(f"row {r} does not have {ncols} entries")
    A = [r for r in A if any(r)]
    r = 0
    for c in range(ncols):
        if r == len(A):
            break
        while True:
            nz = [i for i in range(r, len(A)) if A[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(A[i][c]))
            A[r], A[i0] = A[i0], A[r]
            piv = A[r]
            clean = True
            for i in range(r + 1, len(A)):
                if A[i][c]:
                    f = A[i][c] // piv[c]
                    if f:
                        A[i] = [a - f * b for a, b in zip(A[i], piv)]
                    if A[i][c]:
                        clean = False
            if clean:
                break
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-a for a in A[r]]
        piv = A[r]
        for i in range(r):
            f = A[i][c] // piv[c]
            if f:
                A[i] = [a - f * b for a, b in zip(A[i], piv)]
        r += 1
    return [row for row in A[:r] if any(row)]


def integer_left_kernel(M: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """Basis of ``{a in Z^k : a M = 0}`` for an integer ``k x ncols`` matrix."""
    k = len(M)
    if k == 0:
        return []
    aug = [list(map(int, M[i])) + [int(i == j) for j in range(k)] for i in range(k)]
    H = hnf(aug, ncols + k)
    return [tuple(row[ncols:]) for row in H if not any(row[:ncols])]


@dataclass(frozen=True)
class IntegerLattice:
    """A subgroup of Z^d stored by its Hermite normal form basis.

    Equality and hashing compare the canonical basis, so two lattices are
    equal exactly when they are the same subgroup.
    """

    ambient_dim: int
    basis: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def _check(self, x: Sequence) -> None:
        if len(x) != self.ambient_dim:
            raise LatticeError(f"vector has dimension {len(x)}, lattice lives in Z^{self.ambient_dim}")

    def coordinates(self, x: Sequence) -> tuple[int, ...] | None:
        """Integer coordinates of x in the basis, or None if x is not in the lattice."""
        self._check(x)
        if any(Fraction(v).denominator != 1 for v in x):
            return None
        rest = [int(v) for v in x]
        coords = []
        for b in self.basis:
            c = next(j for j, v in enumerate(b) if v)
            if rest[c] % b[c]:
                return None
            f = rest[c] // b[c]
            coords.append(f)
            if f:
                rest = [a - f * v for a, v in zip(rest, b)]
        return tuple(coords) if not any(rest) else None

    def rational_coordinates(self, x: Sequence) -> tuple[Fraction, ...] | None:
        self._check(x)
        return ql.left_solve(self.basis, x)

    def __contains__(self, x) -> bool:
        return self.coordinates(x) is not None

    def vector(self, coords: Sequence) -> tuple:
        """The combination ``sum coords[i] * basis[i]``."""
        out = [0] * self.ambient_dim
        for c, b in zip(coords, self.basis):
            if c:
                for k in range(self.ambient_dim):
                    out[k] += c * b[k]
        return tuple(out)


@dataclass(frozen=True)
class PLocalizedLattice:
    """``L (x) Z[1/p]`` viewed inside Q^d; ``p = 1`` means no localization."""

    base: IntegerLattice
    p: int


def normal_form(gens: Iterable[Sequence[int]], ambient_dim: int | None = None) -> IntegerLattice:
    gens = [tuple(g) for g in gens]
    if ambient_dim is None:
        if not gens:
            raise LatticeError("ambient dimension needed for an empty generator list")
        ambient_dim = len(gens[0])
    for g in gens:
        if any(Fraction(v).denominator != 1 for v in g):
            raise LatticeError(f"generator {g} is not integral")
    return IntegerLattice(ambient_dim, tuple(tuple(r) for r in hnf(gens, ambient_dim)))


def zero_lattice(dim: int) -> IntegerLattice:
    return IntegerLattice(dim, ())


def standard_lattice(dim: int) -> IntegerLattice:
    return IntegerLattice(dim, tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim)))


def member(x: Sequence, L: IntegerLattice) -> bool:
    return L.coordinates(x) is not None


def intersect(L1: IntegerLattice, L2: IntegerLattice) -> IntegerLattice:
    if L1.ambient_dim != L2.ambient_dim:
        raise LatticeError(f"dimension mismatch: {L1.ambient_dim} vs {L2.ambient_dim}")
    d = L1.ambient_dim
    k1 = len(L1.basis)
    stacked = list(L1.basis) + [tuple(-v for v in b) for b in L2.basis]
    ker = integer_left_kernel(stacked, d)
    return normal_form((L1.vector(a[:k1]) for a in ker), d)


def is_p_power(n, p: int) -> bool:
    """True iff the positive integer n is ``p^k`` for some k >= 0 (only 1 when p = 1)."""
    n = int(n)
    if n < 1:
        return False
    if p == 1:
        return n == 1
    while n % p == 0:
        n //= p
    return n == 1


def p_part(n: int, p: int) -> tuple[int, int]:
    """Split ``n = n_p * n'`` with ``n_p`` a power of p and ``n'`` coprime to p."""
    n = abs(int(n))
    if p == 1 or n == 0:
        return 1, n
    n_p = 1
    while n % p == 0:
        n //= p
        n_p *= p
    return n_p, n


def in_zp(x, p: int) -> bool:
    """Whether a rational lies in ``Z[1/p]`` (in Z when p = 1)."""
    return p_part(Fraction(x).denominator, p)[1] == 1


def member_p(x: Sequence, Lp: PLocalizedLattice | IntegerLattice, p: int | None = None) -> bool:
    """True iff ``p^k x`` lies in the base lattice for some k >= 0."""
    if isinstance(Lp, IntegerLattice):
        if p is None:
            raise LatticeError("p must be given with a plain IntegerLattice")
        Lp = PLocalizedLattice(Lp, p)
    c = Lp.base.rational_coordinates(x)
    if c is None:
        return False
    return all(in_zp(v, Lp.p) for v in c)


def preimage_lattice(T: Sequence[Sequence], p: int) -> list[tuple[int, ...]]:
    """Basis of ``{a in Z^r : a T in Z[1/p]^m}`` for a rational ``r x m`` matrix T.

    Writing ``T = T'/d`` with ``d = d_p d'``, the condition becomes
    ``a T' = 0 mod d'`` which is an integer kernel computation.
    """
    r = len(T)
    if r == 0:
        return []
    m = len(T[0])
    d = ql.denominator_lcm(v for row in T for v in row)
    _, d_rest = p_part(d, p)
    if d_rest == 1:
        return [tuple(int(i == j) for j in range(r)) for i in range(r)]
    Tint = [[int(Fraction(v) * d) for v in row] for row in T]
    stacked = Tint + [[d_rest * int(i == j) for j in range(m)] for i in range(m)]
    ker = integer_left_kernel(stacked, m)
    return [tuple(row) for row in hnf([k[:r] for k in ker], r)]


def saturated_span(vectors: Iterable[Sequence], dim: int) -> IntegerLattice:
    """``Q<vectors> cap Z^d``."""
    vs = [tuple(v) for v in vectors]
    if not vs or ql.rank(vs) == 0:
        return zero_lattice(dim)
    eqs = [ql.primitive(e) for e in ql.nullspace(vs, dim)]
    return orthogonal_lattice(eqs, dim)


def orthogonal_lattice(covectors: Iterable[Sequence], dim: int) -> IntegerLattice:
    """``{x in Z^d : u(x) = 0 for all given u}``."""
    us = [ql.primitive(u) for u in covectors if not ql.is_zero(u)]
    if not us:
        return standard_lattice(dim)
    cols = [tuple(u[j] for u in us) for j in range(dim)]
    return normal_form(integer_left_kernel(cols, len(us)), dim)


def saturation(L: IntegerLattice) -> IntegerLattice:
    return saturated_span(L.basis, L.ambient_dim)


def zs_cap_xip(rd, Xi: IntegerLattice, p: int) -> IntegerLattice:
    """``{x in ZS : p^k x in Xi for some k}`` in simple-root coordinates.

    The rational part is handled by saturating ``ZS cap Q Xi``; the p-power
    torsion condition is then a preimage computation of the coordinate map
    into the basis of Xi.
    """
    n = rd.n
    R = rd.simple_roots
    if Xi.rank == 0 or n == 0:
        return zero_lattice(n)
    eqs = [ql.primitive(e) for e in ql.nullspace(Xi.basis, Xi.ambient_dim)]
    if eqs:
        M = [tuple(ql.idot(row, e) for e in eqs) for row in R]
        A = integer_left_kernel(M, len(eqs))
    else:
        A = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    if not A:
        return zero_lattice(n)
    A = hnf(A, n)
    T = [Xi.rational_coordinates(rd.root_vector(a)) for a in A]
    pre = preimage_lattice(T, p)
    gens = []
    for coeffs in pre:
        v = [0] * n
        for c, a in zip(coeffs, A):
            for k in range(n):
                v[k] += c * a[k]
        gens.append(v)
    return normal_form(gens, n)


def is_primitive(x: Sequence, L: IntegerLattice) -> bool:
    """x is nonzero and not ``m * y`` with ``y in L`` and ``m >= 2``."""
    c = L.coordinates(x)
    if c is None:
        raise LatticeError(f"{tuple(x)} is not in the lattice")
    g = 0
    for v in c:
        g = gcd(g, v)
    return g == 1


def primitive_in(x: Sequence, L: IntegerLattice) -> tuple[int, ...] | None:
    """The primitive element of ``L cap Q_{>0} x``, or None if the ray misses L."""
    c = L.rational_coordinates(x)
    if c is None or ql.is_zero(x):
        return None
    prim = ql.primitive(c)
    return L.vector(prim)
