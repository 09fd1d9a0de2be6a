"""Combinatorial data of a spherical variety: colors, spherical roots, the
valuation cone, simple-root types, and the structural relations between them.

Conventions:

* ``Xi`` is an :class:`IntegerLattice` in the ambient character space of the
  root datum; its Hermite basis is *the* basis of Xi.
* Elements of ``N_Q = Hom(Xi, Q)`` (valuations, ``delta_D``, ``alpha^r``) are
  covectors on that basis.
* Spherical roots are integer vectors in simple-root coordinates.
* ``q`` values are powers of ``p``; the string :data:`UNKNOWN` marks a power
  of p that is not known (this arises from localization at Sigma).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import qlinalg as ql
from .lattice import (IntegerLattice, in_zp, is_p_power, member_p, primitive_in,
                      zs_cap_xip)
from .polyhedra import ConeQ, Fan, cone_from_inequalities, cone_from_rays, dual_cone, negate
from .roots import RootDatum

UNKNOWN = "p^?"
COLOR_TYPES = ("B", "A", "A'")
ROOT_TYPES = ("P", "B", "A", "A'")
UNDETERMINED_A = "A-or-A'"

PASS, FAIL, SKIPPED, UNDETERMINED = "pass", "fail", "skipped", "undetermined"


class SphericalError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


def normalize_ctype(t: str) -> str:
    t = t.strip().replace("′", "'")
    if t not in COLOR_TYPES:
        raise SphericalError(f"unknown color type {t!r}; expected one of B, A, A'")
    return t


@dataclass(frozen=True)
class ColorRecord:
    """A color: its type, the simple roots moving it, ``delta_D`` and the degrees.

    ``delta`` is None for a placeholder whose functional is unknown. When
    ``delta_exact`` is False the true functional is ``delta`` times an unknown
    power of p, so only signs of its values are reliable.
    """

    name: str
    ctype: str
    moved_by: tuple[str, ...]
    delta: tuple[Fraction, ...] | None
    q: Mapping[str, int | str]
    delta_exact: bool = True

    def __post_init__(self):
        object.__setattr__(self, "ctype", normalize_ctype(self.ctype))
        if not self.moved_by:
            raise SphericalError(f"color {self.name}: moved_by must be nonempty")
        if len(set(self.moved_by)) != len(self.moved_by):
            raise SphericalError(f"color {self.name}: repeated root in moved_by")
        if self.ctype == "A'" and len(self.moved_by) != 1:
            raise SphericalError(f"color {self.name}: a color of type A' is moved by exactly one root")
        if set(self.q) != set(self.moved_by):
            raise SphericalError(f"color {self.name}: q must be given exactly on moved_by")
        if self.delta is not None:
            object.__setattr__(self, "delta", tuple(Fraction(x) for x in self.delta))

    def q_of(self, label: str) -> int | str:
        return self.q[label]

    def value(self, xi_coords: Sequence) -> Fraction | None:
        """``delta_D`` evaluated at a character given in Xi coordinates."""
        if self.delta is None or xi_coords is None:
            return None
        return ql.dot(self.delta, xi_coords)


@dataclass(frozen=True)
class PSphericalSystem:
    """The data ``(p, G, Xi, Sigma, S^P, colors, delta, q)`` of a p-spherical system."""

    p: int
    rd: RootDatum
    xi: IntegerLattice
    sigma: tuple[tuple[int, ...], ...]
    sp: tuple[str, ...]
    colors: tuple[ColorRecord, ...]
    rk_xi_h: int | None = None
    fan: tuple[tuple[tuple[int, ...], ...], ...] | None = None
    catalog_path: str | None = None
    group: object = None
    meta: Mapping = field(default_factory=dict, compare=False)
    base_dir: str | None = field(default=None, compare=False)

    def __post_init__(self):
        rd = self.rd
        if self.p != 1 and not is_prime(self.p):
            raise SphericalError(f"p = {self.p} is neither 1 nor a prime")
        if self.xi.ambient_dim != rd.rank:
            raise SphericalError(f"Xi lives in Z^{self.xi.ambient_dim}, root datum has rank {rd.rank}")
        object.__setattr__(self, "sigma", tuple(tuple(int(c) for c in s) for s in self.sigma))
        for s in self.sigma:
            if len(s) != rd.n:
                raise SphericalError(f"spherical root {list(s)} needs {rd.n} simple-root coordinates")
            if ql.is_zero(s) or any(c < 0 for c in s):
                raise SphericalError(f"spherical root {list(s)} must be nonzero with nonnegative coordinates")
        if len(set(self.sigma)) != len(self.sigma):
            raise SphericalError("repeated spherical root")
        object.__setattr__(self, "sp", tuple(rd.resolve(a) for a in self.sp))
        if self.rk_xi_h is not None and self.rk_xi_h < 0:
            raise SphericalError("rk_xi_h must be nonnegative")
        names = set()
        moved = set()
        for D in self.colors:
            if D.name in names:
                raise SphericalError(f"duplicate color name {D.name}")
            names.add(D.name)
            for a in D.moved_by:
                if rd.resolve(a) != a:
                    raise SphericalError(f"color {D.name}: use the root label {rd.resolve(a)} instead of {a}")
                moved.add(a)
            for a, qa in D.q.items():
                if qa != UNKNOWN and not is_p_power(qa, self.p):
                    raise SphericalError(f"color {D.name}: q[{a}] = {qa} is not a power of p = {self.p}")
            if D.delta is not None and len(D.delta) != self.xi.rank:
                raise SphericalError(
                    f"color {D.name}: delta has {len(D.delta)} entries, Xi has rank {self.xi.rank}")
        for a in rd.labels:
            if a in self.sp and a in moved:
                raise SphericalError(f"{a} is in S^P but moves a color")
            if a not in self.sp and a not in moved:
                raise SphericalError(f"{a} is not in S^P and moves no color")

    # -- coordinates ------------------------------------------------------

    @property
    def xi_rank(self) -> int:
        return self.xi.rank

    def root_vector(self, coeffs: Sequence) -> tuple:
        return self.rd.root_vector(coeffs)

    def simple(self, i: int) -> tuple[int, ...]:
        return tuple(int(j == i) for j in range(self.rd.n))

    def xi_coords(self, coeffs: Sequence) -> tuple[Fraction, ...] | None:
        """Xi coordinates of a root-coordinate vector, or None if it leaves Xi_Q."""
        return self.xi.rational_coordinates(self.rd.root_vector(coeffs))

    def sigma_xi(self, s: Sequence[int]) -> tuple[Fraction, ...]:
        c = self.xi_coords(s)
        if c is None:
            raise SphericalError(f"spherical root {self.fmt_root(s)} is not in the span of Xi")
        return c

    def coroot_r(self, i: int) -> tuple[Fraction, ...]:
        """``alpha_i^r`` on the basis of Xi."""
        return tuple(self.rd.pairing(b, i) for b in self.xi.basis)

    def fmt_root(self, s: Sequence[int]) -> str:
        return self.rd.format_root(s)

    def colors_moved_by(self, label: str) -> list[ColorRecord]:
        return [D for D in self.colors if label in D.moved_by]

    def color(self, name: str) -> ColorRecord:
        for D in self.colors:
            if D.name == name:
                return D
        raise KeyError(name)

    def type_a_colors(self) -> list[ColorRecord]:
        return [D for D in self.colors if D.ctype == "A"]

    def is_simple_in_sigma(self, i: int) -> bool:
        return self.simple(i) in self.sigma

    def replace(self, **changes) -> "PSphericalSystem":
        from dataclasses import replace
        return replace(self, **changes)

    def fan_object(self) -> Fan | None:
        if self.fan is None:
            return None
        return Fan.from_cones([cone_from_rays(c, self.xi.rank) for c in self.fan], self.xi.rank)


# --- reports ---------------------------------------------------------------

@dataclass(frozen=True)
class Finding:
    check: str
    status: str
    message: str
    witness: Mapping = field(default_factory=dict)


@dataclass(frozen=True)
class CheckReport:
    name: str
    status: str
    findings: tuple[Finding, ...] = ()

    @property
    def failures(self) -> list[Finding]:
        return [f for f in self.findings if f.status == FAIL]


def aggregate(statuses: Iterable[str], empty: str = PASS) -> str:
    st = list(statuses)
    if FAIL in st:
        return FAIL
    if UNDETERMINED in st:
        return UNDETERMINED
    if st and all(s == SKIPPED for s in st):
        return SKIPPED
    return empty if not st else PASS


def make_report(name: str, findings: list[Finding]) -> CheckReport:
    return CheckReport(name, aggregate(f.status for f in findings), tuple(findings))


def fmt_vec(v: Sequence) -> list[str]:
    return [ql.fmt(x) for x in v]


# --- valuation cone and spherical roots --------------------------------------

def valuation_cone(sys: PSphericalSystem) -> ConeQ:
    """``{v in N_Q : sigma(v) <= 0 for all sigma in Sigma}``."""
    normals = [tuple(-x for x in sys.sigma_xi(s)) for s in sys.sigma]
    return cone_from_inequalities(normals, sys.xi.rank)


@dataclass(frozen=True)
class RootRecovery:
    ray: tuple[int, ...]
    direction: tuple[int, ...]
    root: tuple[int, ...]


def recover_roots(V: ConeQ, rd: RootDatum, Xi: IntegerLattice, p: int) -> list[RootRecovery]:
    """Spherical roots from a valuation cone, with the intermediate steps.

    For every extremal ray of ``-V^vee`` (given in Xi coordinates) record the
    primitive root-coordinate direction and the primitive element of
    ``ZS cap Xi_p`` on that ray.
    """
    if V.ambient_dim != Xi.rank:
        raise SphericalError(f"cone lives in dimension {V.ambient_dim}, Xi has rank {Xi.rank}")
    K = negate(dual_cone(V))
    if not K.is_pointed:
        raise SphericalError(
            f"-V^vee is not pointed (it contains the line through {K.lineality[0]}); "
            "V is not full-dimensional")
    L = zs_cap_xip(rd, Xi, p)
    out = []
    for ray in K.rays:
        chi = Xi.vector([Fraction(c) for c in ray])
        coords = rd.root_coords(chi)
        if coords is None:
            raise SphericalError(f"ray {list(ray)} of -V^vee is not in the span of the simple roots")
        if any(c < 0 for c in coords):
            raise SphericalError(f"ray {list(ray)} of -V^vee is not in Q>=0 S")
        direction = ql.primitive(coords)
        root = primitive_in(direction, L)
        if root is None:
            raise SphericalError(f"ray {fmt_vec(coords)} has no representative in ZS cap Xi_p")
        out.append(RootRecovery(tuple(ray), direction, tuple(int(x) for x in root)))
    out.sort(key=lambda r: r.root, reverse=True)
    return out


def spherical_roots_from_cone(V: ConeQ, rd: RootDatum, Xi: IntegerLattice, p: int) -> list[tuple[int, ...]]:
    return [r.root for r in recover_roots(V, rd, Xi, p)]


# --- types -------------------------------------------------------------------

def _delta_at_simple(sys: PSphericalSystem, D: ColorRecord, i: int) -> Fraction | None:
    return D.value(sys.xi_coords(sys.simple(i)))


def s_a(sys: PSphericalSystem) -> set[str]:
    """The simple roots of type A in the sense of the axioms.

    For p != 2 this is ``S cap Sigma``. For p = 2 only those ``alpha in S cap
    Sigma`` with ``delta_D(alpha) > 0`` for some type-A color D qualify.
    """
    rd = sys.rd
    out = set()
    for i, a in enumerate(rd.labels):
        if not sys.is_simple_in_sigma(i):
            continue
        if sys.p != 2:
            out.add(a)
            continue
        for D in sys.type_a_colors():
            v = _delta_at_simple(sys, D, i)
            if v is not None and v > 0:
                out.add(a)
                break
    return out


def classify_types(sys: PSphericalSystem) -> dict[str, str]:
    """Type of each simple root recovered from ``S^P``, ``Sigma`` and (for p = 2) delta."""
    rd = sys.rd
    out = {}
    sa = s_a(sys) if sys.p == 2 else set()
    for i, a in enumerate(rd.labels):
        e = sys.simple(i)
        if a in sys.sp:
            out[a] = "P"
        elif e in sys.sigma:
            if sys.p != 2:
                out[a] = "A"
            elif not sys.colors:
                out[a] = UNDETERMINED_A
            else:
                out[a] = "A" if a in sa else "A'"
        elif tuple(2 * c for c in e) in sys.sigma:
            out[a] = "A'"
        else:
            out[a] = "B"
    return out


COLOR_COUNT = {"P": 0, "B": 1, "A": 2, "A'": 1}


def effective_types(sys: PSphericalSystem) -> dict[str, str]:
    """Recovered types, with undetermined ones filled from declared color types."""
    types = classify_types(sys)
    for a, t in types.items():
        if t == UNDETERMINED_A:
            declared = {D.ctype for D in sys.colors_moved_by(a)}
            if len(declared) == 1 and declared <= {"A", "A'"}:
                types[a] = declared.pop()
    return types


def check_types(sys: PSphericalSystem) -> CheckReport:
    """Recovered types agree with declared color types and color counts."""
    findings = []
    for a, t in classify_types(sys).items():
        cols = sys.colors_moved_by(a)
        declared = sorted({D.ctype for D in cols})
        if t == UNDETERMINED_A:
            findings.append(Finding("types", UNDETERMINED,
                                    f"{a}: type A or A' cannot be decided at p=2 without colors",
                                    {"root": a}))
            continue
        if t == "P":
            ok = not cols
        else:
            ok = declared == [t] and len(cols) == COLOR_COUNT[t]
        findings.append(Finding(
            "types", PASS if ok else FAIL,
            f"{a}: recovered type {t}, moves {len(cols)} color(s) of declared type(s) {declared or '-'}"
            + ("" if ok else f"; expected {COLOR_COUNT[t]} color(s) of type {t}"),
            {"root": a, "recovered": t, "declared": declared, "colors": [D.name for D in cols]}))
    return make_report("types", findings)


# --- color relations -------------------------------------------------------------

def _q_value(D: ColorRecord, a: str) -> int | None:
    qa = D.q[a]
    return None if qa == UNKNOWN else int(qa)


def check_color_relations(sys: PSphericalSystem) -> CheckReport:
    """The relations between ``delta_D``, ``q_{D,alpha}`` and ``alpha^r`` by type."""
    rd = sys.rd
    types = effective_types(sys)
    findings: list[Finding] = []

    def add(status, msg, **w):
        findings.append(Finding("color-relations", status, msg, w))

    for i, a in enumerate(rd.labels):
        t = types[a]
        ar = sys.coroot_r(i)
        cols = sys.colors_moved_by(a)
        if t == "P":
            ok = ql.is_zero(ar)
            add(PASS if ok else FAIL, f"{a} (P): alpha^r = {fmt_vec(ar)} on Xi, expected 0",
                root=a, alpha_r=fmt_vec(ar))
            continue
        if t == UNDETERMINED_A:
            add(UNDETERMINED, f"{a}: type undetermined at p=2", root=a)
            continue
        if len(cols) != COLOR_COUNT[t]:
            add(FAIL, f"{a} ({t}) moves {len(cols)} colors, the relation needs {COLOR_COUNT[t]}",
                root=a, colors=[D.name for D in cols])
            continue
        if any(D.delta is None or not D.delta_exact for D in cols) or \
                any(_q_value(D, a) is None for D in cols):
            add(UNDETERMINED, f"{a} ({t}): delta or q known only up to a power of p", root=a)
            continue
        if t == "B":
            D = cols[0]
            lhs = ql.scale(_q_value(D, a), D.delta)
            ok = lhs == ar
            add(PASS if ok else FAIL,
                f"{a} (B): q_{{{D.name},{a}}} delta_{D.name} = {fmt_vec(lhs)} vs alpha^r = {fmt_vec(ar)}",
                root=a, color=D.name, lhs=fmt_vec(lhs), rhs=fmt_vec(ar))
        elif t == "A'":
            D = cols[0]
            lhs = ql.scale(2 * _q_value(D, a), D.delta)
            ok = lhs == ar
            add(PASS if ok else FAIL,
                f"{a} (A'): 2 q delta_{D.name} = {fmt_vec(lhs)} vs alpha^r = {fmt_vec(ar)}",
                root=a, color=D.name, lhs=fmt_vec(lhs), rhs=fmt_vec(ar))
            if sys.p != 2:
                avec = rd.simple_roots[i]
                in_p = member_p(avec, sys.xi, sys.p)
                odd = [fmt_vec(b) for b, v in zip(sys.xi.basis, ar) if v.denominator != 1 or v.numerator % 2]
                add(FAIL if in_p else PASS, f"{a} (A'): alpha {'lies' if in_p else 'does not lie'} in Xi_p",
                    root=a, clause="parity")
                add(FAIL if odd else PASS,
                    f"{a} (A'): <chi, alpha^vee> even on the basis of Xi"
                    + (f"; odd at {odd}" if odd else ""), root=a, clause="parity")
        else:  # A
            D1, D2 = cols
            lhs = ql.add(ql.scale(_q_value(D1, a), D1.delta), ql.scale(_q_value(D2, a), D2.delta))
            ok = lhs == ar
            add(PASS if ok else FAIL,
                f"{a} (A): q delta_{D1.name} + q delta_{D2.name} = {fmt_vec(lhs)} vs alpha^r = {fmt_vec(ar)}",
                root=a, colors=[D1.name, D2.name], lhs=fmt_vec(lhs), rhs=fmt_vec(ar))
            avec = rd.simple_roots[i]
            in_p = member_p(avec, sys.xi, sys.p)
            add(PASS if in_p else FAIL, f"{a} (A): alpha {'lies' if in_p else 'does not lie'} in Xi_p",
                root=a)
            ac = sys.xi_coords(sys.simple(i))
            for D in cols:
                v = None if ac is None else _q_value(D, a) * D.value(ac)
                ok = v == 1
                add(PASS if ok else FAIL,
                    f"{a} (A): q_{{{D.name},{a}}} delta_{D.name}(alpha) = {ql.fmt(v) if v is not None else 'undefined'}, expected 1",
                    root=a, color=D.name, value=ql.fmt(v) if v is not None else None)
    return make_report("color-relations", findings)


def check_delta_integrality(sys: PSphericalSystem) -> CheckReport:
    """``delta_D`` of a type-A color maps Xi to Z."""
    findings = []
    for D in sys.type_a_colors():
        if D.delta is None or not D.delta_exact:
            continue
        bad = [ql.fmt(x) for x in D.delta if x.denominator != 1]
        findings.append(Finding("delta-integrality", FAIL if bad else PASS,
                                f"delta_{D.name} on the basis of Xi: {fmt_vec(D.delta)}"
                                + (" is not integral" if bad else ""),
                                {"color": D.name, "delta": fmt_vec(D.delta)}))
    return make_report("delta-integrality", findings)


def _orthogonal(rd: RootDatum, i: int, j: int) -> bool:
    C = rd.cartan_matrix()
    return C[i][j] == 0 and C[j][i] == 0


def sharing_witness(sys: PSphericalSystem, i: int, j: int) -> tuple[tuple[int, ...], int, int] | None:
    """A spherical root ``q1 alpha_i + q2 alpha_j`` with p-powers q1, q2, one of them 1."""
    for s in sys.sigma:
        if any(c for k, c in enumerate(s) if k not in (i, j)):
            continue
        q1, q2 = s[i], s[j]
        if q1 and q2 and is_p_power(q1, sys.p) and is_p_power(q2, sys.p) and min(q1, q2) == 1:
            return s, q1, q2
    return None


def check_sharing_rules(sys: PSphericalSystem) -> CheckReport:
    """Rules for colors moved by more than one simple root."""
    rd = sys.rd
    types = effective_types(sys)
    findings: list[Finding] = []

    def add(status, msg, **w):
        findings.append(Finding("sharing", status, msg, w))

    for D in sys.colors:
        if len(D.moved_by) < 2:
            continue
        mt = sorted({types[a] for a in D.moved_by})
        if mt not in (["A"], ["B"]):
            add(FAIL, f"{D.name} is moved by {list(D.moved_by)} of types {mt}; "
                      "a shared color needs all movers of type B or all of type A",
                color=D.name, types=mt)
            continue
        add(PASS, f"{D.name}: movers {list(D.moved_by)} all of type {mt[0]}", color=D.name)
        if mt == ["A"]:
            movers = list(D.moved_by)
            for x in range(len(movers)):
                for y in range(x + 1, len(movers)):
                    a1, a2 = movers[x], movers[y]
                    p1 = [E.name for E in sys.colors_moved_by(a1) if E.name != D.name]
                    p2 = [E.name for E in sys.colors_moved_by(a2) if E.name != D.name]
                    clash = sorted(set(p1) & set(p2))
                    add(FAIL if clash else PASS,
                        f"{D.name} shared by {a1}, {a2}: partner colors {p1} and {p2}"
                        + (f" coincide in {clash}" if clash else " are distinct"),
                        color=D.name, roots=[a1, a2])
            continue
        if len(D.moved_by) > 2:
            add(FAIL, f"{D.name} (type B) is moved by {len(D.moved_by)} roots; at most two allowed",
                color=D.name, roots=list(D.moved_by))
            continue
        a1, a2 = D.moved_by
        i, j = rd.index(a1), rd.index(a2)
        if not _orthogonal(rd, i, j):
            add(FAIL, f"{D.name}: {a1} and {a2} are not orthogonal", color=D.name)
            continue
        w = sharing_witness(sys, i, j)
        if w is None:
            add(FAIL, f"{D.name}: no spherical root q1 {a1} + q2 {a2} with p-powers q1, q2",
                color=D.name, roots=[a1, a2])
            continue
        s, q1, q2 = w
        lhs = ql.scale(Fraction(1, q1), sys.coroot_r(i))
        rhs = ql.scale(Fraction(1, q2), sys.coroot_r(j))
        add(PASS if lhs == rhs else FAIL,
            f"{D.name}: witness {sys.fmt_root(s)}; q1^-1 {a1}^r = {fmt_vec(lhs)}, q2^-1 {a2}^r = {fmt_vec(rhs)}",
            color=D.name, witness=sys.fmt_root(s), lhs=fmt_vec(lhs), rhs=fmt_vec(rhs))
        qa1, qa2 = _q_value(D, a1), _q_value(D, a2)
        if qa1 is not None and qa2 is not None:
            ok = Fraction(qa2, qa1) == Fraction(q2, q1)
            add(PASS if ok else FAIL,
                f"{D.name}: degree ratio q_{{D,{a2}}}/q_{{D,{a1}}} = {ql.fmt(Fraction(qa2, qa1))}, "
                f"witness ratio q2/q1 = {ql.fmt(Fraction(q2, q1))}", color=D.name)
    # Converse: orthogonal type-B roots with a witnessing spherical root share a color.
    labels = rd.labels
    for i in range(rd.n):
        for j in range(i + 1, rd.n):
            a1, a2 = labels[i], labels[j]
            if types[a1] != "B" or types[a2] != "B" or not _orthogonal(rd, i, j):
                continue
            w = sharing_witness(sys, i, j)
            if w is None:
                continue
            shared = {E.name for E in sys.colors_moved_by(a1)} & {E.name for E in sys.colors_moved_by(a2)}
            add(PASS if shared else FAIL,
                f"{a1}, {a2} with spherical root {sys.fmt_root(w[0])} "
                + ("share a color" if shared else "must move the same color but do not"),
                roots=[a1, a2], witness=sys.fmt_root(w[0]))
    return make_report("sharing", findings)


def check_color_count(sys: PSphericalSystem) -> CheckReport:
    """``#colors = rank Xi + rank Xi(H)`` for semisimple groups."""
    if sys.rk_xi_h is None:
        return CheckReport("color-count", SKIPPED,
                           (Finding("color-count", SKIPPED, "rk_xi_h not given"),))
    if not sys.rd.is_semisimple:
        return CheckReport("color-count", SKIPPED,
                           (Finding("color-count", SKIPPED, "root datum is not semisimple"),))
    lhs, rhs = len(sys.colors), sys.xi.rank + sys.rk_xi_h
    f = Finding("color-count", PASS if lhs == rhs else FAIL,
                f"#colors = {lhs}, rank Xi + rk Xi(H) = {sys.xi.rank} + {sys.rk_xi_h} = {rhs}",
                {"colors": lhs, "rank_xi": sys.xi.rank, "rk_xi_h": sys.rk_xi_h})
    return CheckReport("color-count", f.status, (f,))


def zp_values(v: Sequence, p: int) -> bool:
    return all(in_zp(x, p) for x in v)


def rebase_delta(xi: IntegerLattice, rows: Sequence[Sequence[int]], delta: Sequence) -> tuple[Fraction, ...]:
    """Move a functional given by its values on ``rows`` to the basis of Xi.

    ``rows`` must be linearly independent generators of Xi (or of a lattice
    with the same rational span).
    """
    if len(delta) != len(rows):
        raise SphericalError(f"delta has {len(delta)} values for {len(rows)} rows")
    if rows and ql.rank(rows) != len(rows):
        raise SphericalError("delta on dependent rows is ambiguous")
    out = []
    for b in xi.basis:
        c = ql.left_solve(rows, b)
        if c is None:
            raise SphericalError(f"basis vector {list(b)} is not in the span of the given rows")
        out.append(ql.dot(c, delta))
    return tuple(out)
