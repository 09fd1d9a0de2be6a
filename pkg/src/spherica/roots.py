"""Root data: simple roots, coroots and their pairing.

Built-in Cartan types are realized in the basis of fundamental weights, so
coroot ``i`` is the ``i``-th coordinate functional and simple root ``i`` is
row ``i`` of the Cartan matrix ``C[i][j] = <alpha_i, alpha_j^vee>``
(Bourbaki numbering). Products are block diagonal.

Root labels are ``a1..an`` for a simple type and ``g1.a1, g2.a1, ...`` for
products, where ``a<k>`` (global index) stays available as an alias.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from . import qlinalg as ql


class RootDatumError(ValueError):
    pass


@dataclass(frozen=True)
class RootDatum:
    """Simple roots and coroots in a fixed ambient character space.

    ``rank`` is the ambient dimension; it exceeds ``len(simple_roots)`` for
    Levi subsystems and non-semisimple data.
    """

    name: str
    rank: int
    simple_roots: tuple[tuple[int, ...], ...]
    coroots: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]
    aliases: Mapping[str, str] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        n = len(self.simple_roots)
        if len(self.coroots) != n or len(self.labels) != n:
            raise RootDatumError("simple roots, coroots and labels differ in length")
        if len(set(self.labels)) != n:
            raise RootDatumError("duplicate root labels")
        for v in self.simple_roots + self.coroots:
            if len(v) != self.rank:
                raise RootDatumError(f"vector {v} does not have ambient dimension {self.rank}")
        C = self.cartan_matrix()
        for i in range(n):
            if C[i][i] != 2:
                raise RootDatumError(f"<alpha_{i+1}, alpha_{i+1}^vee> = {C[i][i]}, expected 2")
            for j in range(n):
                if i != j and C[i][j] > 0:
                    raise RootDatumError(f"positive off-diagonal pairing at ({i+1},{j+1})")
        if n and ql.rank(self.simple_roots) != n:
            raise RootDatumError("simple roots are linearly dependent")

    @property
    def n(self) -> int:
        return len(self.simple_roots)

    @property
    def is_semisimple(self) -> bool:
        return self.n == self.rank

    def cartan_matrix(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(ql.idot(a, c) for c in self.coroots) for a in self.simple_roots)

    def index(self, label: str) -> int:
        label = label.strip()
        label = self.aliases.get(label, label)
        try:
            return self.labels.index(label)
        except ValueError:
            raise RootDatumError(f"unknown simple root label {label!r}") from None

    def resolve(self, label: str) -> str:
        return self.labels[self.index(label)]

    def pairing(self, chi: Sequence, i: int) -> Fraction:
        """``<chi, alpha_i^vee>``."""
        if len(chi) != self.rank:
            raise RootDatumError(f"character has dimension {len(chi)}, expected {self.rank}")
        return ql.dot(chi, self.coroots[i])

    def root_vector(self, coeffs: Sequence) -> tuple:
        """Ambient vector of ``sum coeffs[i] * alpha_i``."""
        if len(coeffs) != self.n:
            raise RootDatumError(f"root coordinates have length {len(coeffs)}, expected {self.n}")
        out = [0] * self.rank
        for c, a in zip(coeffs, self.simple_roots):
            if c:
                for k in range(self.rank):
                    out[k] += c * a[k]
        return tuple(out)

    def root_coords(self, x: Sequence) -> tuple[Fraction, ...] | None:
        """Rational simple-root coordinates of x, or None if x is not in QS."""
        return ql.left_solve(self.simple_roots, x)

    def restrict(self, labels: Iterable[str]) -> "RootDatum":
        """Levi subsystem on the given simple roots, same ambient space."""
        keep = sorted({self.index(lab) for lab in labels})
        kept_labels = {self.labels[i] for i in keep}
        aliases = {a: t for a, t in self.aliases.items() if t in kept_labels}
        base = self.name.split("|levi")[0]
        name = f"{base}|levi({','.join(self.labels[i] for i in keep)})"
        if len(keep) == self.n:
            name = self.name
        return RootDatum(
            name=name,
            rank=self.rank,
            simple_roots=tuple(self.simple_roots[i] for i in keep),
            coroots=tuple(self.coroots[i] for i in keep),
            labels=tuple(self.labels[i] for i in keep),
            aliases=aliases,
        )

    def parse_root(self, expr: str) -> tuple[int, ...]:
        """Parse ``"a1+2a2"`` / ``"g1.a1+3*g2.a1"`` into simple-root coordinates."""
        coeffs = [0] * self.n
        s = expr.replace(" ", "")
        if not s:
            raise RootDatumError("empty root expression")
        for sign, num, lab in _TERM.findall(s):
            c = int(num) if num else 1
            if sign == "-":
                c = -c
            coeffs[self.index(lab)] += c
        if _TERM.sub("", s):
            raise RootDatumError(f"cannot parse root expression {expr!r}")
        return tuple(coeffs)

    def format_root(self, coeffs: Sequence[int]) -> str:
        terms = []
        for c, lab in zip(coeffs, self.labels):
            if c == 0:
                continue
            body = lab if abs(c) == 1 else f"{abs(c)}{lab}"
            terms.append(("-" if c < 0 else "+") + body)
        if not terms:
            return "0"
        s = "".join(terms)
        return s[1:] if s.startswith("+") else s


_TERM = re.compile(r"([+-]?)(\d*)\*?((?:g\d+\.)?a\d+)")


# --- Cartan matrices ------------------------------------------------------

def _chain(n: int) -> list[list[int]]:
    C = [[0] * n for _ in range(n)]
    for i in range(n):
        C[i][i] = 2
        if i + 1 < n:
            C[i][i + 1] = C[i + 1][i] = -1
    return C


def cartan_matrix(kind: str, n: int) -> list[list[int]]:
    """Cartan matrix ``C[i][j] = <alpha_i, alpha_j^vee>`` of a simple type."""
    kind = kind.upper()
    if kind == "A" and n >= 1:
        return _chain(n)
    if kind == "B" and n >= 2:
        C = _chain(n)
        C[n - 2][n - 1] = -2
        return C
    if kind == "C" and n >= 2:
        C = _chain(n)
        C[n - 1][n - 2] = -2
        return C
    if kind == "D" and n >= 3:
        C = _chain(n)
        C[n - 2][n - 1] = C[n - 1][n - 2] = 0
        C[n - 3][n - 1] = C[n - 1][n - 3] = -1
        return C
    if kind == "E" and n in (6, 7, 8):
        C = [[0] * n for _ in range(n)]
        for i in range(n):
            C[i][i] = 2
        edges = [(1, 3), (3, 4), (4, 5), (2, 4)] + [(k, k + 1) for k in range(5, n)]
        for a, b in edges:
            C[a - 1][b - 1] = C[b - 1][a - 1] = -1
        return C
    if kind == "F" and n == 4:
        C = _chain(4)
        C[1][2] = -2
        return C
    if kind == "G" and n == 2:
        return [[2, -1], [-3, 2]]
    raise RootDatumError(f"unknown Cartan type {kind}{n}")


def check_finite_type(C: Sequence[Sequence[int]]) -> None:
    """Reject anything that is not a generalized Cartan matrix of finite type."""
    n = len(C)
    if any(len(row) != n for row in C):
        raise RootDatumError("Cartan matrix must be square")
    for i in range(n):
        if C[i][i] != 2:
            raise RootDatumError(f"diagonal entry {i+1} is {C[i][i]}, expected 2")
        for j in range(n):
            if i == j:
                continue
            if C[i][j] > 0:
                raise RootDatumError(f"entry ({i+1},{j+1}) = {C[i][j]} is positive")
            if (C[i][j] == 0) != (C[j][i] == 0):
                raise RootDatumError(f"entries ({i+1},{j+1}) and ({j+1},{i+1}) violate a_ij=0 <=> a_ji=0")
    # Finite type iff every principal minor is positive.
    for k in range(1, n + 1):
        for idx in combinations(range(n), k):
            sub = [[C[i][j] for j in idx] for i in idx]
            if ql.det(sub) <= 0:
                raise RootDatumError(
                    f"not of finite type: principal submatrix on nodes "
                    f"{[i + 1 for i in idx]} = {sub} has determinant {ql.det(sub)}"
                )


_FACTOR = re.compile(r"^([A-Ga-g])(\d+)$")


def _split_type(text: str) -> list[tuple[str, int]]:
    parts = re.split(r"\s*[x×*]\s*", text.strip())
    out = []
    for part in parts:
        m = _FACTOR.match(part)
        if not m:
            raise RootDatumError(f"unknown type string {text!r}")
        out.append((m.group(1).upper(), int(m.group(2))))
    return out


def from_cartan(C: Sequence[Sequence[int]], name: str = "cartan",
                blocks: Sequence[int] | None = None) -> RootDatum:
    C = [list(map(int, row)) for row in C]
    check_finite_type(C)
    n = len(C)
    coroots = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    if blocks and len(blocks) > 1:
        labels, aliases, k = [], {}, 0
        for b, size in enumerate(blocks, start=1):
            for j in range(1, size + 1):
                labels.append(f"g{b}.a{j}")
                k += 1
                aliases[f"a{k}"] = f"g{b}.a{j}"
    else:
        labels, aliases = [f"a{i}" for i in range(1, n + 1)], {}
    return RootDatum(
        name=name,
        rank=n,
        simple_roots=tuple(tuple(row) for row in C),
        coroots=coroots,
        labels=tuple(labels),
        aliases=aliases,
    )


def build_root_datum(datum) -> RootDatum:
    """Root datum from a type string (``"A2"``, ``"A1xA1"``) or a Cartan matrix."""
    if isinstance(datum, RootDatum):
        return datum
    if isinstance(datum, str):
        factors = _split_type(datum)
        sizes = [n for _, n in factors]
        total = sum(sizes)
        C = [[0] * total for _ in range(total)]
        off = 0
        for kind, n in factors:
            block = cartan_matrix(kind, n)
            for i in range(n):
                for j in range(n):
                    C[off + i][off + j] = block[i][j]
            off += n
        name = "x".join(f"{k}{n}" for k, n in factors)
        return from_cartan(C, name=name, blocks=sizes)
    return from_cartan(datum)


def coroot_restriction(rd: RootDatum, alpha_index: int, basis: Sequence[Sequence]) -> tuple[Fraction, ...]:
    """``alpha^r`` as a covector in the dual basis of ``basis``."""
    basis = [tuple(b) for b in basis]
    if basis and ql.rank(basis) != len(basis):
        raise RootDatumError("basis vectors are linearly dependent")
    return tuple(rd.pairing(b, alpha_index) for b in basis)


def adapted_coweight(rd: RootDatum, s_prime: Iterable[str]) -> tuple[Fraction, ...]:
    """Covector vanishing on ``s_prime`` and equal to 1 on the other simple roots.

    For built-in types this is the sum of the fundamental coweights outside
    ``s_prime``. When the ambient space is larger than the span of the roots
    the solution lying in that span is returned.
    """
    keep = {rd.index(a) for a in s_prime}
    target = [Fraction(0 if i in keep else 1) for i in range(rd.n)]
    R = rd.simple_roots
    if not R:
        return tuple(Fraction(0) for _ in range(rd.rank))
    gram = [[ql.dot(a, b) for b in R] for a in R]
    coeffs = ql.left_solve(gram, target)
    return ql.vec_mat(coeffs, R)
