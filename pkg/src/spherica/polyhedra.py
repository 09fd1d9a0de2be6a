"""Rational polyhedral cones and fans.

A :class:`ConeQ` carries both descriptions:

* V-side: extremal ``rays`` and a basis of the ``lineality`` space,
* H-side: ``facets`` (normals u with ``u(x) >= 0`` on the cone) and
  ``equations`` (normals vanishing on the cone).

Everything is stored as primitive integer vectors in a canonical form, so two
cones compare equal exactly when they are the same set. Rays are taken in the
orthogonal complement of the lineality space and facet normals in the
complement of the equations; the dual cone is obtained by swapping the two
sides, which keeps the form canonical.

Conversions use the double description method with exact integer pivots.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import qlinalg as ql
from .lattice import hnf, orthogonal_lattice


class ConeError(ValueError):
    pass


IntVec = tuple[int, ...]


# --- double description ----------------------------------------------------

def _combine(a_dot_p: int, n: Sequence[int], a_dot_n: int, p: Sequence[int]) -> IntVec:
    return ql.primitive(tuple(a_dot_p * x - a_dot_n * y for x, y in zip(n, p)))


def _double_description(ineqs: Sequence[IntVec], eqs: Sequence[IntVec], dim: int
                        ) -> tuple[list[IntVec], list[IntVec]]:
    """Generators of ``{x : a(x) >= 0 for a in ineqs, e(x) = 0 for e in eqs}``.

    Returns (rays, lineality basis). Rays are extremal modulo lineality.
    """
    constraints: list[IntVec] = []
    for e in eqs:
        constraints.append(tuple(e))
        constraints.append(tuple(-x for x in e))
    constraints.extend(tuple(a) for a in ineqs)

    lin: list[IntVec] = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    rays: list[IntVec] = []
    done: list[IntVec] = []

    for a in constraints:
        if ql.is_zero(a):
            continue
        k = next((i for i, l in enumerate(lin) if ql.idot(a, l) != 0), None)
        if k is not None:
            l0 = lin[k]
            s0 = ql.idot(a, l0)
            if s0 < 0:
                l0 = tuple(-x for x in l0)
                s0 = -s0
            new_lin = []
            for i, l in enumerate(lin):
                if i == k:
                    continue
                sl = ql.idot(a, l)
                new_lin.append(l if sl == 0 else _combine(s0, l, sl, l0))
            new_rays = []
            for r in rays:
                sr = ql.idot(a, r)
                new_rays.append(r if sr == 0 else _combine(s0, r, sr, l0))
            new_rays.append(ql.primitive(l0))
            lin, rays = new_lin, new_rays
            done.append(a)
            continue

        vals = [ql.idot(a, r) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zero = [i for i, v in enumerate(vals) if v == 0]
        if not neg:
            done.append(a)
            continue
        zsets = [frozenset(j for j, c in enumerate(done) if ql.idot(c, r) == 0) for r in rays]
        target_rank = dim - len(lin) - 2
        new_rays = [rays[i] for i in pos] + [rays[i] for i in zero]
        for i in pos:
            for j in neg:
                common = zsets[i] & zsets[j]
                if len(common) < target_rank:
                    continue
                if any(m != i and m != j and common <= zsets[m] for m in range(len(rays))):
                    continue
                if target_rank > 0 and ql.rank([done[c] for c in common]) < target_rank:
                    continue
                new_rays.append(_combine(vals[i], rays[j], vals[j], rays[i]))
        rays = new_rays
        done.append(a)
    return rays, lin


# --- canonical form --------------------------------------------------------

def _canonical_pair(vectors: Iterable[Sequence], subspace: Sequence[Sequence], dim: int) -> tuple[IntVec, ...]:
    out = set()
    for v in vectors:
        w = ql.project_onto_complement(v, subspace)
        if not ql.is_zero(w):
            out.add(ql.primitive(w))
    return tuple(sorted(out))


@dataclass(frozen=True)
class ConeQ:
    """A rational polyhedral cone with both descriptions in canonical form."""

    ambient_dim: int
    rays: tuple[IntVec, ...]
    lineality: tuple[IntVec, ...]
    facets: tuple[IntVec, ...]
    equations: tuple[IntVec, ...]

    @property
    def dim(self) -> int:
        return len(self.lineality) + (ql.rank(self.rays + self.lineality) - len(self.lineality)
                                      if self.rays else 0)

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @property
    def is_subspace(self) -> bool:
        return not self.rays

    def generators(self) -> list[IntVec]:
        """Rays plus both signs of the lineality basis."""
        return list(self.rays) + list(self.lineality) + [tuple(-x for x in l) for l in self.lineality]

    def span(self) -> tuple[IntVec, ...]:
        return ql.canonical_subspace(self.rays + self.lineality, self.ambient_dim)

    def contains(self, x: Sequence) -> bool:
        if len(x) != self.ambient_dim:
            raise ConeError(f"point has dimension {len(x)}, cone lives in dimension {self.ambient_dim}")
        return all(ql.dot(e, x) == 0 for e in self.equations) and all(ql.dot(f, x) >= 0 for f in self.facets)

    def contains_cone(self, other: "ConeQ") -> bool:
        return all(self.contains(g) for g in other.generators())

    def describe(self) -> str:
        parts = [f"dim {self.dim} in Q^{self.ambient_dim}"]
        if self.rays:
            parts.append("rays " + ", ".join(map(str, self.rays)))
        if self.lineality:
            parts.append("lineality " + ", ".join(map(str, self.lineality)))
        return "; ".join(parts)


def _build(rays, lin, facets, eqs, dim) -> ConeQ:
    lin_c = ql.canonical_subspace(lin, dim)
    eq_c = ql.canonical_subspace(eqs, dim)
    return ConeQ(
        ambient_dim=dim,
        rays=_canonical_pair(rays, lin_c, dim),
        lineality=lin_c,
        facets=_canonical_pair(facets, eq_c, dim),
        equations=eq_c,
    )


def _as_int(vectors: Iterable[Sequence], dim: int | None) -> tuple[list[IntVec], int]:
    vs = [tuple(v) for v in vectors]
    if dim is None:
        if not vs:
            raise ConeError("ambient dimension needed for empty input")
        dim = len(vs[0])
    for v in vs:
        if len(v) != dim:
            raise ConeError(f"vector {v} does not have dimension {dim}")
    return [ql.primitive(v) for v in vs if not ql.is_zero(v)], dim


def cone_from_inequalities(normals: Iterable[Sequence], dim: int | None = None,
                           equations: Iterable[Sequence] = ()) -> ConeQ:
    """``{x : u(x) >= 0 for u in normals, e(x) = 0 for e in equations}``.

    With no constraints this is the whole space.
    """
    eqs = [tuple(e) for e in equations]
    if dim is None and eqs:
        dim = len(eqs[0])
    ineq, dim = _as_int(normals, dim)
    eq_int, _ = _as_int(eqs, dim)
    rays, lin = _double_description(ineq, eq_int, dim)
    # Lineality of the dual is the equation space; its rays are the facets.
    facets, eq2 = _double_description(rays, lin, dim)
    return _build(rays, lin, facets, eq2, dim)


def cone_from_rays(rays: Iterable[Sequence], dim: int | None = None,
                   lineality: Iterable[Sequence] = ()) -> ConeQ:
    """Conic hull of ``rays`` plus the linear span of ``lineality``.

    Empty input gives the zero cone.
    """
    lins = [tuple(l) for l in lineality]
    if dim is None and lins:
        dim = len(lins[0])
    gens, dim = _as_int(rays, dim)
    lin_int, _ = _as_int(lins, dim)
    facets, eqs = _double_description(gens, lin_int, dim)
    rays2, lin2 = _double_description(facets, eqs, dim)
    return _build(rays2, lin2, facets, eqs, dim)


def zero_cone(dim: int) -> ConeQ:
    return cone_from_rays([], dim)


def full_space(dim: int) -> ConeQ:
    return cone_from_inequalities([], dim)


def dual_cone(C: ConeQ) -> ConeQ:
    """``{u : u(v) >= 0 for all v in C}`` in the dot-product identification."""
    return ConeQ(C.ambient_dim, C.facets, C.equations, C.rays, C.lineality)


def negate(C: ConeQ) -> ConeQ:
    neg = lambda vs: [tuple(-x for x in v) for v in vs]
    return _build(neg(C.rays), C.lineality, neg(C.facets), C.equations, C.ambient_dim)


def intersect_cones(C1: ConeQ, C2: ConeQ) -> ConeQ:
    if C1.ambient_dim != C2.ambient_dim:
        raise ConeError("dimension mismatch")
    return cone_from_inequalities(C1.facets + C2.facets, C1.ambient_dim, C1.equations + C2.equations)


def extremal_rays(C: ConeQ) -> list[IntVec]:
    """Canonical generators of a pointed cone."""
    if not C.is_pointed:
        raise ConeError(f"cone is not pointed: it contains the line through {C.lineality[0]}")
    return list(C.rays)


def relint_contains(C: ConeQ, x: Sequence) -> bool:
    return C.contains(x) and all(ql.dot(f, x) > 0 for f in C.facets)


def _face_from_rays(C: ConeQ, idx: frozenset[int]) -> ConeQ:
    return cone_from_rays([C.rays[i] for i in sorted(idx)], C.ambient_dim, C.lineality)


def faces(C: ConeQ) -> list[ConeQ]:
    """All faces of C, from the minimal one (its lineality space) up to C."""
    n_rays = len(C.rays)
    tight = [frozenset(i for i, r in enumerate(C.rays) if ql.idot(f, r) == 0) for f in C.facets]
    top = frozenset(range(n_rays))
    seen = {top}
    queue = deque([top])
    while queue:
        cur = queue.popleft()
        for t in tight:
            sub = cur & t
            if sub == cur:
                continue
            # Close up: intersect every facet that contains sub.
            closure = top
            for t2 in tight:
                if sub <= t2:
                    closure &= t2
            if closure not in seen:
                seen.add(closure)
                queue.append(closure)
    out = [_face_from_rays(C, s) for s in seen]
    out.sort(key=lambda F: (F.dim, F.rays))
    return out


def face_witness(F: ConeQ, C: ConeQ) -> IntVec | None:
    """A supporting functional u of C with ``C cap u^perp = F``, or None.

    The returned u is the sum of the facet normals of C that vanish on F.
    """
    if F.ambient_dim != C.ambient_dim or not C.contains_cone(F):
        return None
    gens = F.generators()
    tight = [f for f in C.facets if all(ql.idot(f, g) == 0 for g in gens)]
    minimal = cone_from_inequalities(C.facets, C.ambient_dim, C.equations + tuple(tight))
    if minimal != F:
        return None
    u = [0] * C.ambient_dim
    for f in tight:
        u = [a + b for a, b in zip(u, f)]
    return tuple(u)


def is_face(F: ConeQ, C: ConeQ) -> bool:
    return face_witness(F, C) is not None


# --- fans ------------------------------------------------------------------

@dataclass(frozen=True)
class Fan:
    ambient_dim: int
    cones: tuple[ConeQ, ...]

    @classmethod
    def from_cones(cls, cones: Iterable[ConeQ], ambient_dim: int | None = None,
                   close: bool = True) -> "Fan":
        """Collect cones, adding all their faces when ``close`` is set."""
        cones = list(cones)
        if ambient_dim is None:
            if not cones:
                raise ConeError("ambient dimension needed for an empty fan")
            ambient_dim = cones[0].ambient_dim
        members: dict[ConeQ, None] = {}
        for C in cones:
            if C.ambient_dim != ambient_dim:
                raise ConeError("cones of a fan must share the ambient space")
            for F in (faces(C) if close else [C]):
                members[F] = None
        ordered = sorted(members, key=lambda F: (F.dim, F.rays, F.lineality))
        return cls(ambient_dim, tuple(ordered))

    @property
    def is_pointed(self) -> bool:
        return all(C.is_pointed for C in self.cones)


@dataclass(frozen=True)
class FanViolation:
    kind: str
    cones: tuple[int, ...]
    message: str


@dataclass(frozen=True)
class FanReport:
    valid: bool
    violations: tuple[FanViolation, ...] = field(default=())
    pointed: bool = True


def validate_fan(F: Fan) -> FanReport:
    members = set(F.cones)
    violations = []
    for i, C in enumerate(F.cones):
        for G in faces(C):
            if G not in members:
                violations.append(FanViolation(
                    "face-closure", (i,), f"face [{G.describe()}] of cone {i} is not in the fan"))
    for i in range(len(F.cones)):
        for j in range(i + 1, len(F.cones)):
            A, B = F.cones[i], F.cones[j]
            I = intersect_cones(A, B)
            if not (is_face(I, A) and is_face(I, B)):
                violations.append(FanViolation(
                    "intersection", (i, j),
                    f"cones {i} and {j} meet in [{I.describe()}], which is not a face of both"))
    return FanReport(not violations, tuple(violations), F.is_pointed)


def support(F: Fan) -> list[ConeQ]:
    """Maximal cones of the fan; their union is the support."""
    out = []
    for C in F.cones:
        if not any(D != C and D.contains_cone(C) for D in F.cones):
            out.append(C)
    return out


@dataclass(frozen=True)
class LocalizedFan:
    fan: Fan
    v_lambda: tuple[IntVec, ...]
    c_lambda: ConeQ
    quotient_basis: tuple[IntVec, ...]
    lifted: tuple[ConeQ, ...]

    def project(self, v: Sequence) -> tuple[Fraction, ...]:
        """Image of a vector of N_Q in the quotient coordinates."""
        return tuple(ql.dot(w, v) for w in self.quotient_basis)


def quotient_basis(subspace: Sequence[Sequence], dim: int) -> tuple[IntVec, ...]:
    """Integral covectors giving coordinates on ``Q^dim / subspace``.

    They form the Hermite basis of the saturated lattice orthogonal to the
    subspace, so integral vectors map to integral vectors.
    """
    return orthogonal_lattice(subspace, dim).basis


def localize_fan(F: Fan, lambda_r: Sequence) -> LocalizedFan:
    """Localization of a fan at ``lambda_r``.

    The cone ``C(lambda)`` is the member holding ``-lambda_r`` in its relative
    interior, ``V(lambda)`` is its sum with ``Q_{>=0} lambda_r``, and the
    result is the fan of images of ``C + Q_{>=0} lambda_r`` (for members C
    containing ``-lambda_r``) in ``N_Q / V(lambda)``.
    """
    d = F.ambient_dim
    lam = tuple(Fraction(x) for x in lambda_r)
    if len(lam) != d:
        raise ConeError(f"lambda has dimension {len(lam)}, fan lives in dimension {d}")
    x = tuple(-v for v in lam)
    hits = [C for C in F.cones if relint_contains(C, x)]
    if not hits:
        raise ConeError("lambda not dominated by fan: -lambda lies outside its support")
    if len(hits) > 1:
        raise ConeError("fan corruption: several cones contain -lambda in their relative interior")
    c_lam = hits[0]
    lam_int = ql.primitive(lam) if not ql.is_zero(lam) else None
    extra = [lam_int] if lam_int else []
    lifted = [cone_from_rays(list(C.rays) + extra, d, C.lineality)
              for C in F.cones if C.contains(x)]
    subspaces = [C for C in lifted if C.is_subspace]
    if len(subspaces) != 1:
        raise ConeError("fan corruption: the localized collection does not have a unique linear member")
    V = subspaces[0].lineality
    if ql.canonical_subspace(c_lam.rays + c_lam.lineality, d) != V:
        raise ConeError("fan corruption: V(lambda) differs from the span of C(lambda)")
    W = quotient_basis(V, d)
    k = len(W)
    images = []
    for C in lifted:
        rays = [tuple(ql.idot(w, r) for w in W) for r in C.rays]
        lins = [tuple(ql.idot(w, l) for w in W) for l in C.lineality]
        images.append(cone_from_rays(rays, k, lins))
    fan = Fan.from_cones(images, k)
    return LocalizedFan(fan, V, c_lam, W, tuple(lifted))
