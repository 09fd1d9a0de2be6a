"""Localization of p-spherical systems at a subset of S and at a set of
neighbors in Sigma, neighbor sets, and the inequalities they impose on
type-A colors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import qlinalg as ql
from .lattice import IntegerLattice, intersect, is_p_power, normal_form, orthogonal_lattice, saturated_span
from .polyhedra import (ConeQ, Fan, cone_from_inequalities, cone_from_rays, face_witness, faces,
                        localize_fan)
from .roots import adapted_coweight
from .spherical import (FAIL, PASS, UNDETERMINED, UNDETERMINED_A, UNKNOWN, ColorRecord, Finding,
                        PSphericalSystem, SphericalError, CheckReport, effective_types,
                        make_report, s_a, valuation_cone)


class LocalizationError(ValueError):
    pass


@dataclass(frozen=True)
class LocalizationResult:
    sys: PSphericalSystem
    provenance: dict = field(default_factory=dict)
    warnings: tuple[str, ...] = ()
    dropped: tuple[tuple[str, str], ...] = ()


# --- neighbors ---------------------------------------------------------------

@dataclass(frozen=True)
class NeighborTest:
    is_neighbor_set: bool
    witness: tuple[int, ...] | None
    message: str


def _sigma_cone(sys: PSphericalSystem, roots: Iterable[Sequence[int]]) -> ConeQ:
    return cone_from_rays([sys.sigma_xi(s) for s in roots], sys.xi.rank)


def neighbor_test(sigma_prime: Iterable[Sequence[int]], sys: PSphericalSystem) -> NeighborTest:
    """Face test of ``Q>=0 Sigma'`` inside ``Q>=0 Sigma``.

    On success the witness is an element v of the valuation cone (in the
    coordinates dual to the basis of Xi) with ``v(sigma) = 0`` exactly for
    sigma in Sigma'.
    """
    sub = [tuple(s) for s in sigma_prime]
    missing = [s for s in sub if s not in sys.sigma]
    if missing:
        return NeighborTest(False, None, f"{[sys.fmt_root(s) for s in missing]} not in Sigma")
    sub_set = set(sub)
    K = _sigma_cone(sys, sys.sigma)
    F = _sigma_cone(sys, sub_set)
    u = face_witness(F, K)
    names = [sys.fmt_root(s) for s in sorted(sub_set, reverse=True)]
    if u is None:
        return NeighborTest(False, None, f"the cone over {names} is not a face of the cone over Sigma")
    v = tuple(-x for x in u)
    zero = {s for s in sys.sigma if ql.dot(v, sys.sigma_xi(s)) == 0}
    if zero != sub_set:
        extra = [sys.fmt_root(s) for s in zero - sub_set]
        return NeighborTest(False, None, f"every face containing {names} also contains {extra}")
    return NeighborTest(True, v, f"supporting functional {list(u)} cuts out {names}")


def is_neighbor_set(sigma_prime: Iterable[Sequence[int]], sys: PSphericalSystem) -> bool:
    return neighbor_test(sigma_prime, sys).is_neighbor_set


def neighbor_witness(sigma_prime, sys: PSphericalSystem) -> tuple[int, ...] | None:
    return neighbor_test(sigma_prime, sys).witness


def are_neighbors(sys: PSphericalSystem, s1: Sequence[int], s2: Sequence[int]) -> bool:
    s1, s2 = tuple(s1), tuple(s2)
    if s1 == s2 or s1 not in sys.sigma or s2 not in sys.sigma:
        return False
    return is_neighbor_set([s1, s2], sys)


def neighbor_sets(sys: PSphericalSystem) -> list[tuple[tuple[int, ...], ...]]:
    """All sets of neighbors, ordered by cardinality."""
    K = _sigma_cone(sys, sys.sigma)
    coords = {s: sys.sigma_xi(s) for s in sys.sigma}
    out = set()
    for F in faces(K):
        out.add(tuple(sorted((s for s in sys.sigma if F.contains(coords[s])), reverse=True)))
    return sorted(out, key=lambda t: (len(t), t))


def is_simplicial(sys: PSphericalSystem) -> bool:
    return not sys.sigma or ql.rank([sys.sigma_xi(s) for s in sys.sigma]) == len(sys.sigma)


# --- restriction helpers -----------------------------------------------------

def _sub_in_xi(sys: PSphericalSystem, sub: IntegerLattice) -> list[tuple[int, ...]]:
    """Rows: the basis of a sublattice of Xi in the coordinates of Xi's basis."""
    rows = []
    for b in sub.basis:
        c = sys.xi.coordinates(b)
        assert c is not None, "sublattice is not contained in Xi"
        rows.append(c)
    return rows


def _restrict_delta(D: ColorRecord, M: Sequence[Sequence[int]]) -> tuple[Fraction, ...] | None:
    if D.delta is None:
        return None
    return tuple(ql.dot(row, D.delta) for row in M)


def _xi_from_xi_coords(sys: PSphericalSystem, L: IntegerLattice) -> IntegerLattice:
    return normal_form((sys.xi.vector(c) for c in L.basis), sys.xi.ambient_dim)


# --- localization at S ---------------------------------------------------------

def localize_at_S(sys: PSphericalSystem, s_prime: Iterable[str], mode: str = "minimal",
                  fan: Fan | None = None, lam: Sequence | None = None) -> LocalizationResult:
    """Pass to the Levi subsystem on ``s_prime``.

    ``mode="minimal"`` uses ``Xi cap <Sigma'>_Q``; ``mode="fan"`` uses
    ``Xi cap V(lambda)^perp`` for the given (or stored) fan and an adapted
    coweight ``lam`` (default: the canonical adapted coweight).
    """
    rd = sys.rd
    keep_labels = sorted({rd.resolve(a) for a in s_prime}, key=rd.index)
    keep = [rd.index(a) for a in keep_labels]
    lam_amb = tuple(Fraction(x) for x in lam) if lam is not None else adapted_coweight(rd, keep_labels)
    if len(lam_amb) != rd.rank:
        raise LocalizationError(f"lambda needs {rd.rank} coordinates")
    for i, a in enumerate(rd.labels):
        v = ql.dot(lam_amb, rd.simple_roots[i])
        if (i in keep and v != 0) or (i not in keep and v <= 0):
            raise LocalizationError(f"lambda is not adapted to {keep_labels}: lambda({a}) = {ql.fmt(v)}")

    provenance: dict = {}
    dropped = []
    warnings = []
    new_sigma = []
    for s in sys.sigma:
        lam_s = ql.dot(lam_amb, sys.root_vector(s))
        if lam_s == 0:
            t = tuple(s[i] for i in keep)
            new_sigma.append(t)
        else:
            dropped.append((f"sigma {sys.fmt_root(s)}", f"lambda(sigma) = {ql.fmt(lam_s)} != 0"))
    new_rd = rd.restrict(keep_labels)
    for t in new_sigma:
        provenance[f"sigma {new_rd.format_root(t)}"] = f"sigma {sys.fmt_root(_embed(t, keep, rd.n))}"

    r = sys.xi.rank
    new_fan = None
    if mode == "minimal":
        span = saturated_span([sys.root_vector(_embed(t, keep, rd.n)) for t in new_sigma], rd.rank)
        new_xi = intersect(sys.xi, span)
    elif mode == "fan":
        F = fan if fan is not None else sys.fan_object()
        if F is None:
            raise LocalizationError("fan mode needs a fan")
        V = valuation_cone(sys)
        for C in F.cones:
            if not V.contains_cone(C):
                raise LocalizationError(f"fan cone [{C.describe()}] is not inside the valuation cone")
        lam_r = tuple(ql.dot(lam_amb, b) for b in sys.xi.basis)
        try:
            loc = localize_fan(F, lam_r)
        except ValueError as e:
            raise LocalizationError(str(e)) from None
        sub = orthogonal_lattice(loc.v_lambda, r)
        new_xi = _xi_from_xi_coords(sys, sub)
        M = _sub_in_xi(sys, new_xi)
        k = len(M)
        images = [cone_from_rays([tuple(ql.idot(m, g) for m in M) for g in C.rays], k,
                                 [tuple(ql.idot(m, g) for m in M) for g in C.lineality])
                  for C in loc.lifted]
        quotient = Fan.from_cones(images, k)
        new_fan = tuple(C.rays for C in quotient.cones if C.rays and C.is_pointed
                        and not any(D != C and D.contains_cone(C) for D in quotient.cones))
    else:
        raise LocalizationError(f"unknown mode {mode!r}; use minimal or fan")

    M = _sub_in_xi(sys, new_xi)
    new_colors = []
    for D in sys.colors:
        movers = tuple(a for a in D.moved_by if a in keep_labels)
        if not movers:
            dropped.append((f"color {D.name}", f"moved only by {list(D.moved_by)}, outside S'"))
            continue
        new_colors.append(ColorRecord(D.name, D.ctype, movers, _restrict_delta(D, M),
                                      {a: D.q[a] for a in movers}, D.delta_exact))
        provenance[f"color {D.name}"] = f"color {D.name}"
    new_sp = tuple(a for a in sys.sp if a in keep_labels)
    group = {"type": _base_group(sys), "levi": list(keep_labels)}
    if len(keep_labels) == rd.n:
        group = sys.group
    meta = {"provenance": provenance, "dropped": [list(d) for d in dropped], "warnings": warnings,
            "derived_from": "localization at S'=" + ",".join(keep_labels) + f" ({mode})"}
    out = PSphericalSystem(
        p=sys.p, rd=new_rd, xi=new_xi, sigma=tuple(new_sigma), sp=new_sp, colors=tuple(new_colors),
        rk_xi_h=None, fan=new_fan, catalog_path=sys.catalog_path, group=group, meta=meta,
        base_dir=sys.base_dir)
    return LocalizationResult(out, provenance, tuple(warnings), tuple(dropped))


def _embed(t: Sequence[int], keep: Sequence[int], n: int) -> list[int]:
    full = [0] * n
    for c, i in zip(t, keep):
        full[i] = c
    return full


def _base_group(sys: PSphericalSystem):
    g = sys.group
    if isinstance(g, dict) and "levi" in g:
        return g["type"]
    if isinstance(g, dict):
        return g
    return g if g is not None else sys.rd.name.split("|levi")[0]


# --- localization at Sigma --------------------------------------------------------

def localize_at_Sigma(sys: PSphericalSystem, sigma_prime: Iterable[Sequence[int]]) -> LocalizationResult:
    """Pass to the orbit attached to a set of neighbors ``sigma_prime``."""
    rd = sys.rd
    sub = [tuple(s) for s in sigma_prime]
    test = neighbor_test(sub, sys)
    if not test.is_neighbor_set:
        raise LocalizationError(f"not a set of neighbors: {test.message}")
    v = test.witness
    r = sys.xi.rank
    V = valuation_cone(sys)
    tight = [f for f in V.facets if ql.idot(f, v) == 0]
    C = cone_from_inequalities(V.facets, r, V.equations + tuple(tight))
    span_c = C.span()
    sigma_xi = {s: sys.sigma_xi(s) for s in sys.sigma}
    in_perp = lambda c: c is not None and all(ql.dot(w, c) == 0 for w in span_c)
    kept = [s for s in sys.sigma if in_perp(sigma_xi[s])]
    if set(kept) != set(sub):
        raise LocalizationError("face computation inconsistent with the neighbor witness")

    sub_lat = orthogonal_lattice(span_c, r)
    new_xi = _xi_from_xi_coords(sys, sub_lat)
    M = _sub_in_xi(sys, new_xi)
    warnings = []
    dropped = []
    provenance: dict = {}
    exact = sys.p == 1
    if sys.p > 1:
        warnings.append("Xi of the localization is determined only up to p-saturation; "
                        "the lattice Xi cap <C>^perp is reported")

    types = effective_types(sys)
    in_v = {}
    for i, a in enumerate(rd.labels):
        vec = sys.simple(i)
        in_v[a] = in_perp(sys.xi_coords(vec))
    new_types = {}
    for a, t in types.items():
        if t in ("P", "B"):
            new_types[a] = t
        elif not in_v[a]:
            new_types[a] = "B"
        elif sys.p != 2 or t == "A":
            new_types[a] = t
        else:
            new_types[a] = UNDETERMINED_A
            warnings.append(f"{a}: type A or A' undetermined after localization at p=2; kept as A'")

    new_colors: list[ColorRecord] = []

    def q_of(movers):
        return {a: (1 if exact else UNKNOWN) for a in movers}

    for D in sys.colors:
        if D.ctype == "A":
            movers = tuple(a for a in D.moved_by if new_types[a] == "A")
            if movers:
                new_colors.append(ColorRecord(D.name, "A", movers, _restrict_delta(D, M),
                                              _keep_q(D, movers, exact), D.delta_exact and exact))
                provenance[f"color {D.name}"] = f"color {D.name}"
                if not exact:
                    warnings.append(f"color {D.name}: delta is the restriction of q*delta_{D.name} "
                                    "for an unknown power q of p")
            else:
                dropped.append((f"color {D.name}", "its roots are no longer of type A"))
        elif D.ctype == "A'":
            (a,) = D.moved_by
            if new_types[a] in ("A'", UNDETERMINED_A):
                i = rd.index(a)
                half = tuple(Fraction(x, 2) for x in _coroot_on(sys, M, i))
                new_colors.append(ColorRecord(D.name, "A'", (a,), half, q_of((a,)), exact))
                provenance[f"color {D.name}"] = f"color {D.name}"
            else:
                dropped.append((f"color {D.name}", f"{a} becomes type B"))

    # Type-B colors of the localization, grouped by the sharing rule in Sigma'.
    new_sigma_set = set(kept)
    C_mat = rd.cartan_matrix()
    b_roots = [a for a in rd.labels if new_types[a] == "B"]
    groups: list[list[str]] = []
    used: set[str] = set()
    for x, a1 in enumerate(b_roots):
        if a1 in used:
            continue
        grp = [a1]
        i = rd.index(a1)
        for a2 in b_roots[x + 1:]:
            j = rd.index(a2)
            if a2 not in used and C_mat[i][j] == 0 and C_mat[j][i] == 0 and \
                    _shares(new_sigma_set, i, j, sys.p):
                grp.append(a2)
                break
        used.update(grp)
        groups.append(grp)
    old_b = {frozenset(D.moved_by): D for D in sys.colors if D.ctype == "B"}
    for grp in groups:
        a = grp[0]
        src = old_b.get(frozenset(grp))
        name = src.name if src is not None else "B_" + "_".join(g.replace(".", "") for g in grp)
        delta = _coroot_on(sys, M, rd.index(a))
        if exact:
            qmap = {g: 1 for g in grp}
        else:
            qmap = q_of(grp)
            warnings.append(f"color {name}: delta = alpha^r / q for an unknown power q of p; "
                            "the stored value is alpha^r")
        new_colors.append(ColorRecord(name, "B", tuple(grp), delta, qmap, exact))
        provenance[f"color {name}"] = f"color {src.name}" if src is not None else \
            f"root {','.join(grp)} (formerly of type {types[a]})"
    kept_groups = {frozenset(g) for g in groups}
    for D in sys.colors:
        if D.ctype == "B" and frozenset(D.moved_by) not in kept_groups:
            dropped.append((f"color {D.name}", "its roots no longer share a color"))

    for s in kept:
        provenance[f"sigma {sys.fmt_root(s)}"] = f"sigma {sys.fmt_root(s)}"
    for s in sys.sigma:
        if s not in new_sigma_set:
            dropped.append((f"sigma {sys.fmt_root(s)}", "not orthogonal to the face <C>"))
    meta = {"provenance": provenance, "dropped": [list(d) for d in dropped], "warnings": warnings,
            "derived_from": "localization at Sigma'={" + ", ".join(sys.fmt_root(s) for s in sub) + "}"}
    out = PSphericalSystem(
        p=sys.p, rd=rd, xi=new_xi, sigma=tuple(s for s in sys.sigma if s in new_sigma_set), sp=sys.sp,
        colors=tuple(new_colors), rk_xi_h=None, fan=None, catalog_path=sys.catalog_path,
        group=sys.group, meta=meta, base_dir=sys.base_dir)
    return LocalizationResult(out, provenance, tuple(warnings), tuple(dropped))


def _shares(sigma: Iterable[Sequence[int]], i: int, j: int, p: int) -> bool:
    for s in sigma:
        if any(c for k, c in enumerate(s) if k not in (i, j)):
            continue
        if s[i] and s[j] and is_p_power(s[i], p) and is_p_power(s[j], p) and min(s[i], s[j]) == 1:
            return True
    return False


def _keep_q(D: ColorRecord, movers, exact: bool) -> dict:
    return {a: (D.q[a] if exact else UNKNOWN) for a in movers}


def _coroot_on(sys: PSphericalSystem, M, i: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(sys.rd.pairing(sys.xi.vector(row), i)) for row in M)


# --- inequalities --------------------------------------------------------------

def check_neighbor_inequalities(sys: PSphericalSystem) -> CheckReport:
    """Positivity rule and two-sided bound on ``delta_D(sigma)`` for neighbors of a type-A root."""
    rd = sys.rd
    sa = s_a(sys)
    findings = []
    try:
        coords = {s: sys.sigma_xi(s) for s in sys.sigma}
    except SphericalError as e:
        return CheckReport("neighbor-inequalities", UNDETERMINED,
                           (Finding("neighbor-inequalities", UNDETERMINED, str(e)),))
    for D in sys.type_a_colors():
        if D.delta is None:
            continue
        for a in D.moved_by:
            if a not in sa:
                continue
            i = rd.index(a)
            alpha = sys.simple(i)
            partners = {E.name for E in sys.colors_moved_by(a)}
            for s in sys.sigma:
                if s == alpha or not are_neighbors(sys, alpha, s):
                    continue
                name = sys.fmt_root(s)
                val = D.value(coords[s])
                simple_idx = next((k for k in range(rd.n) if s == sys.simple(k)), None)
                w = {"color": D.name, "alpha": a, "sigma": name, "value": ql.fmt(val)}
                if val > 0:
                    ok = simple_idx is not None and rd.labels[simple_idx] in sa and \
                        rd.labels[simple_idx] in D.moved_by
                    findings.append(Finding("neighbor-inequalities", PASS if ok else FAIL,
                                            f"delta_{D.name}({name}) = {ql.fmt(val)} > 0 with {a} moving "
                                            f"{D.name}: " + ("sigma is in S^A and moves it" if ok else
                                                             "requires sigma in S^A moving the same color"),
                                            w))
                    continue
                moves_partner = simple_idx is not None and any(
                    rd.labels[simple_idx] in E.moved_by for E in sys.colors if E.name in partners)
                if moves_partner:
                    continue
                qa = D.q[a]
                if qa == UNKNOWN or not D.delta_exact:
                    findings.append(Finding("neighbor-inequalities", UNDETERMINED,
                                            f"lower bound for delta_{D.name}({name}) needs q_{{{D.name},{a}}}", w))
                    continue
                lower = Fraction(rd.pairing(sys.root_vector(s), i), qa)
                ok = lower <= val <= 0
                findings.append(Finding("neighbor-inequalities", PASS if ok else FAIL,
                                        f"{ql.fmt(lower)} <= delta_{D.name}({name}) = {ql.fmt(val)} <= 0",
                                        {**w, "lower": ql.fmt(lower)}))
    return make_report("neighbor-inequalities", findings)
