"""Validator for the axioms A1-A8 of a p-spherical system.

Every axiom is evaluated exactly and lands in an :class:`AxiomReport` with
status pass, fail, skipped or undetermined. A fail always carries a witness.

``p2_mode`` (on automatically when p = 2) restricts A4 to spherical roots
that are neighbors of a root moving the color, and makes A7 vacuous. The set
``S^A`` itself always follows the actual characteristic exponent, so the
remaining axioms read the same in both modes.

Catalog files (for A3) are plain text, one entry per line::

    # comment
    group=A1xA1  root=a1+q*a2  sp={}        p=any
    group=*      root=a1       sp=any
    group=A3     root=a1+a2    sp=<={a3}    p=!2

``group`` is a type string (``*`` matches every group). ``root`` is a root
expression in which ``q*`` stands for one common power of p. ``sp`` is
``any``, a ``|``-separated list of admissible sets such as ``{}|{a3}``, or
``<={...}`` for all subsets of a set. ``p`` is ``any`` (default), a single
value, a comma-separated list, or ``!v`` for all values except v.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

from . import qlinalg as ql
from .lattice import in_zp, is_p_power, is_primitive, member_p, zs_cap_xip
from .spherical import (FAIL, PASS, SKIPPED, UNDETERMINED, UNKNOWN, Finding,
                        PSphericalSystem, aggregate, check_color_count,
                        check_color_relations, check_delta_integrality,
                        check_sharing_rules, check_types, fmt_vec, s_a)

SCHEMA_VERSION = "1.0"
AXIOMS = ("A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8")


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class AxiomResult:
    id: str
    status: str
    message: str
    findings: tuple[Finding, ...] = ()


@dataclass(frozen=True)
class AxiomReport:
    p: int
    p2_mode: bool
    axioms: tuple[AxiomResult, ...]
    checks: tuple = ()
    schema_version: str = SCHEMA_VERSION

    def status(self, axiom: str) -> str:
        return next(a.status for a in self.axioms if a.id == axiom)

    @property
    def failures(self) -> list[tuple[str, Finding]]:
        return [(a.id, f) for a in self.axioms for f in a.findings if f.status == FAIL]

    @property
    def failed_axioms(self) -> list[str]:
        return [a.id for a in self.axioms if a.status == FAIL]

    @property
    def failed_checks(self) -> list[str]:
        return [c.name for c in self.checks if c.status == FAIL]

    @property
    def ok(self) -> bool:
        return not self.failed_axioms and not self.failed_checks

    def to_dict(self) -> dict:
        def fd(f: Finding) -> dict:
            return {"check": f.check, "status": f.status, "message": f.message, "witness": dict(f.witness)}
        return {
            "schema_version": self.schema_version,
            "p": self.p,
            "p2_mode": self.p2_mode,
            "ok": self.ok,
            "axioms": [{"id": a.id, "status": a.status, "message": a.message,
                        "findings": [fd(f) for f in a.findings]} for a in self.axioms],
            "failures": [{"axiom": aid, **fd(f)} for aid, f in self.failures],
            "checks": [{"name": c.name, "status": c.status,
                        "findings": [fd(f) for f in c.findings]} for c in self.checks],
        }


# --- catalog ----------------------------------------------------------------

@dataclass(frozen=True)
class CatalogEntry:
    line: int
    group: str
    root: str
    sp_any: bool = False
    sp_sets: tuple[frozenset[str], ...] = ()
    sp_within: frozenset[str] | None = None
    p_rule: str = "any"

    def p_matches(self, p: int) -> bool:
        rule = self.p_rule
        if rule == "any":
            return True
        if rule.startswith("!"):
            return p != int(rule[1:])
        return p in {int(x) for x in rule.split(",")}

    def group_matches(self, rd) -> bool:
        if self.group == "*":
            return True
        base = rd.name.split("|levi")[0]
        return self.group.replace("×", "x").upper() == base.upper()


@dataclass(frozen=True)
class RootCatalog:
    entries: tuple[CatalogEntry, ...]
    source: str = ""


_SET = re.compile(r"^\{([^{}]*)\}$")


def _parse_set(text: str, lineno: int) -> frozenset[str]:
    m = _SET.match(text.strip())
    if not m:
        raise CatalogError(f"line {lineno}: cannot parse root set {text!r}")
    return frozenset(x.strip() for x in m.group(1).split(",") if x.strip())


def parse_catalog(text: str, source: str = "<string>") -> RootCatalog:
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = {}
        for tok in line.split():
            if "=" not in tok:
                raise CatalogError(f"{source}: line {lineno}: expected key=value, got {tok!r}")
            k, v = tok.split("=", 1)
            if k not in ("group", "root", "sp", "p"):
                raise CatalogError(f"{source}: line {lineno}: unknown key {k!r}")
            fields[k] = v
        for k in ("group", "root", "sp"):
            if k not in fields:
                raise CatalogError(f"{source}: line {lineno}: missing {k}=")
        sp = fields["sp"]
        kw: dict = {}
        try:
            if sp == "any":
                kw["sp_any"] = True
            elif sp.startswith("<="):
                kw["sp_within"] = _parse_set(sp[2:], lineno)
            else:
                kw["sp_sets"] = tuple(_parse_set(s, lineno) for s in sp.split("|"))
        except CatalogError as e:
            raise CatalogError(f"{source}: {e}") from None
        p_rule = fields.get("p", "any")
        if not re.fullmatch(r"any|!\d+|\d+(,\d+)*", p_rule):
            raise CatalogError(f"{source}: line {lineno}: bad p rule {p_rule!r}")
        if not re.fullmatch(r"[0-9a-z.*+q]+", fields["root"]):
            raise CatalogError(f"{source}: line {lineno}: bad root expression {fields['root']!r}")
        entries.append(CatalogEntry(lineno, fields["group"], fields["root"], p_rule=p_rule, **kw))
    return RootCatalog(tuple(entries), source)


def load_catalog(path) -> RootCatalog:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise CatalogError(f"cannot read catalog {path}: {e}") from None
    return parse_catalog(text, str(path))


_CAT_TERM = re.compile(r"([+]?)(?:(q)\*|(\d*)\*?)((?:g\d+\.)?a\d+)")


def _root_matches(expr: str, sigma: Sequence[int], rd, p: int) -> bool:
    """Whether sigma equals the expression for some common power q of p."""
    coeffs = [0] * rd.n
    qcoef = [0] * rd.n
    pos = 0
    for m in _CAT_TERM.finditer(expr):
        if m.start() != pos:
            return False
        pos = m.end()
        try:
            k = rd.index(m.group(4))
        except ValueError:
            return False
        if m.group(2):
            qcoef[k] += 1
        else:
            coeffs[k] += int(m.group(3)) if m.group(3) else 1
    if pos != len(expr):
        return False
    q = None
    for k in range(rd.n):
        if qcoef[k]:
            num = sigma[k] - coeffs[k]
            if num % qcoef[k]:
                return False
            cand = num // qcoef[k]
            if q is None:
                q = cand
            elif q != cand:
                return False
    if q is not None and not is_p_power(q, p):
        return False
    qv = q or 0
    return all(coeffs[k] + qv * qcoef[k] == sigma[k] for k in range(rd.n))


def _sp_admissible(entry: CatalogEntry, sp: frozenset[str], rd) -> bool:
    res = lambda S: frozenset(rd.resolve(a) for a in S)
    if entry.sp_any:
        return True
    if entry.sp_within is not None:
        return sp <= res(entry.sp_within)
    return any(sp == res(S) for S in entry.sp_sets)


def check_A3(sys: PSphericalSystem, cat: RootCatalog | None) -> AxiomResult:
    if cat is None:
        return AxiomResult("A3", SKIPPED, "no catalog supplied")
    findings = []
    sp = frozenset(sys.sp)
    for s in sys.sigma:
        hits = [e for e in cat.entries
                if e.group_matches(sys.rd) and e.p_matches(sys.p) and _root_matches(e.root, s, sys.rd, sys.p)]
        name = sys.fmt_root(s)
        if not hits:
            findings.append(Finding("A3", FAIL, f"{name} is not in the catalog", {"sigma": name}))
            continue
        good = [e for e in hits if _sp_admissible(e, sp, sys.rd)]
        if good:
            findings.append(Finding("A3", PASS, f"{name} compatible with S^P = {sorted(sp)} "
                                                f"(catalog line {good[0].line})", {"sigma": name}))
        else:
            findings.append(Finding("A3", FAIL,
                                    f"{name} is in the catalog (line {hits[0].line}) but S^P = {sorted(sp)} "
                                    "is not admissible", {"sigma": name, "sp": sorted(sp)}))
    return _result("A3", findings, "no spherical roots")


# --- helpers ------------------------------------------------------------------

def _result(aid: str, findings: list[Finding], vacuous: str) -> AxiomResult:
    if not findings:
        return AxiomResult(aid, PASS, f"vacuous: {vacuous}")
    st = aggregate(f.status for f in findings)
    msg = "; ".join(f.message for f in findings if f.status == st) if st != PASS else \
        f"{len(findings)} condition(s) hold"
    return AxiomResult(aid, st, msg, tuple(findings))


def _representable(sys: PSphericalSystem, s) -> tuple[Fraction, ...] | None:
    return sys.xi_coords(s)


def resolve_p2_mode(p: int, p2_mode) -> bool:
    if p2_mode in (None, "auto"):
        return p == 2
    if p2_mode in (True, "on"):
        return True
    if p2_mode in (False, "off"):
        return False
    raise ValueError(f"p2_mode must be auto, on or off, not {p2_mode!r}")


# --- axioms -------------------------------------------------------------------

def check_A1(sys: PSphericalSystem) -> AxiomResult:
    L = zs_cap_xip(sys.rd, sys.xi, sys.p)
    findings = []
    for s in sys.sigma:
        name = sys.fmt_root(s)
        if _representable(sys, s) is None:
            findings.append(Finding("A1", FAIL, f"{name} is not in the span of Xi", {"sigma": name}))
        elif s not in L:
            findings.append(Finding("A1", FAIL, f"{name} is not in ZS cap Xi_p", {"sigma": name}))
        elif not is_primitive(s, L):
            c = L.coordinates(s)
            from math import gcd
            g = 0
            for x in c:
                g = gcd(g, x)
            findings.append(Finding("A1", FAIL, f"{name} is {g} times an element of ZS cap Xi_p",
                                    {"sigma": name, "multiple": g}))
        else:
            findings.append(Finding("A1", PASS, f"{name} is primitive in ZS cap Xi_p", {"sigma": name}))
    return _result("A1", findings, "Sigma is empty")


def check_A2(sys: PSphericalSystem) -> AxiomResult:
    findings = []
    for a in sys.sp:
        ar = sys.coroot_r(sys.rd.index(a))
        findings.append(Finding("A2", PASS if ql.is_zero(ar) else FAIL,
                                f"{a}^r = {fmt_vec(ar)} on the basis of Xi", {"root": a, "alpha_r": fmt_vec(ar)}))
    return _result("A2", findings, "S^P is empty")


def check_A4(sys: PSphericalSystem, p2_mode: bool, sa: set[str]) -> AxiomResult:
    from .localization import are_neighbors
    rd = sys.rd
    sa_vecs = {sys.simple(rd.index(a)) for a in sa}
    findings = []
    for D in sys.type_a_colors():
        for s in sys.sigma:
            if s in sa_vecs:
                continue
            name = sys.fmt_root(s)
            if p2_mode:
                near = [a for a in D.moved_by if a in sa
                        and are_neighbors(sys, sys.simple(rd.index(a)), s)]
                if not near:
                    continue
            c = _representable(sys, s)
            v = D.value(c)
            if v is None:
                findings.append(Finding("A4", UNDETERMINED, f"delta_{D.name}({name}) cannot be evaluated",
                                        {"color": D.name, "sigma": name}))
                continue
            findings.append(Finding("A4", PASS if v <= 0 else FAIL,
                                    f"delta_{D.name}({name}) = {ql.fmt(v)}",
                                    {"color": D.name, "sigma": name, "value": ql.fmt(v)}))
    return _result("A4", findings, "no type-A color meets a root outside S^A")


def _positive_colors(sys: PSphericalSystem, i: int) -> tuple[list, Fraction | None]:
    c = sys.xi_coords(sys.simple(i))
    if c is None:
        return [], None
    return [D for D in sys.type_a_colors() if D.value(c) is not None and D.value(c) > 0], c


def check_A5(sys: PSphericalSystem, sa: set[str]) -> tuple[AxiomResult, dict]:
    rd = sys.rd
    findings = []
    pairs = {}
    for a in sorted(sa, key=rd.index):
        i = rd.index(a)
        pos, c = _positive_colors(sys, i)
        if c is None:
            findings.append(Finding("A5", UNDETERMINED, f"{a} is not in the span of Xi", {"root": a}))
            continue
        names = [D.name for D in pos]
        ok = len(pos) == 2
        if ok:
            pairs[a] = pos
        findings.append(Finding("A5", PASS if ok else FAIL,
                                f"{a}: type-A colors with delta(alpha) > 0 are {names}, need exactly two",
                                {"root": a, "colors": names}))
    for D in sys.type_a_colors():
        hits = []
        for a in sorted(sa, key=rd.index):
            c = sys.xi_coords(sys.simple(rd.index(a)))
            v = D.value(c)
            if v is not None and v > 0:
                hits.append(a)
        findings.append(Finding("A5", PASS if hits else FAIL,
                                f"{D.name}: positive on {hits}" if hits else
                                f"{D.name}: no alpha in S^A with delta_{D.name}(alpha) > 0",
                                {"color": D.name, "roots": hits}))
    return _result("A5", findings, "S^A and the type-A colors are empty"), pairs


def check_A6(sys: PSphericalSystem, sa: set[str], pairs: dict) -> AxiomResult:
    rd = sys.rd
    findings = []
    for a in sorted(sa, key=rd.index):
        if a not in pairs:
            findings.append(Finding("A6", UNDETERMINED, f"{a}: D+ and D- not determined (see A5)", {"root": a}))
            continue
        i = rd.index(a)
        Dp, Dm = pairs[a]
        if not (Dp.delta_exact and Dm.delta_exact):
            findings.append(Finding("A6", UNDETERMINED, f"{a}: delta known only up to a power of p", {"root": a}))
            continue
        c = sys.xi_coords(sys.simple(i))
        qs = []
        bad = False
        for D in (Dp, Dm):
            qv = 1 / D.value(c)
            qs.append(qv)
            if qv.denominator != 1 or not is_p_power(qv.numerator, sys.p):
                bad = True
                findings.append(Finding("A6", FAIL, f"{a}: q_{{{a},{D.name}}} = 1/delta_{D.name}({a}) = "
                                                    f"{ql.fmt(qv)} is not a power of p = {sys.p}",
                                        {"root": a, "color": D.name, "q": ql.fmt(qv)}))
        if bad:
            continue
        lhs = ql.add(ql.scale(qs[0], Dp.delta), ql.scale(qs[1], Dm.delta))
        ar = sys.coroot_r(i)
        findings.append(Finding("A6", PASS if lhs == ar else FAIL,
                                f"{a}: q+ delta_{Dp.name} + q- delta_{Dm.name} = {fmt_vec(lhs)}, "
                                f"alpha^r = {fmt_vec(ar)}",
                                {"root": a, "lhs": fmt_vec(lhs), "rhs": fmt_vec(ar)}))
    return _result("A6", findings, "S^A is empty")


def check_A7(sys: PSphericalSystem, p2_mode: bool) -> AxiomResult:
    if p2_mode:
        return AxiomResult("A7", PASS, "vacuous in p=2 mode")
    rd = sys.rd
    findings = []
    for i, a in enumerate(rd.labels):
        two = tuple(2 * x for x in sys.simple(i))
        if two not in sys.sigma:
            continue
        in_p = member_p(rd.simple_roots[i], sys.xi, sys.p)
        findings.append(Finding("A7", FAIL if in_p else PASS,
                                f"{a} {'lies' if in_p else 'does not lie'} in Xi_p", {"root": a}))
        half = ql.scale(Fraction(1, 2), sys.coroot_r(i))
        bad = [ql.fmt(x) for x in half if not in_zp(x, sys.p)]
        findings.append(Finding("A7", FAIL if bad else PASS,
                                f"(1/2){a}^r = {fmt_vec(half)} on the basis of Xi"
                                + (f"; {bad} not in Z_p" if bad else ""), {"root": a, "half": fmt_vec(half)}))
        for s in sys.sigma:
            if s == two:
                continue
            v = rd.pairing(sys.root_vector(s), i)
            findings.append(Finding("A7", PASS if v <= 0 else FAIL,
                                    f"{a}^r({sys.fmt_root(s)}) = {ql.fmt(v)}",
                                    {"root": a, "sigma": sys.fmt_root(s), "value": ql.fmt(v)}))
    return _result("A7", findings, "no 2 alpha in Sigma")


def _q_alpha(sys: PSphericalSystem, a: str):
    cols = sys.colors_moved_by(a)
    if len(cols) != 1:
        return None
    return cols[0].q[a]


def check_A8(sys: PSphericalSystem) -> AxiomResult:
    rd = sys.rd
    C = rd.cartan_matrix()
    findings = []
    for s in sys.sigma:
        supp = [k for k, c in enumerate(s) if c]
        if len(supp) != 2:
            continue
        i0, j0 = supp
        if C[i0][j0] != 0:
            continue
        for i, j in ((i0, j0), (j0, i0)):
            q = s[i]
            if s[j] != 1 or not is_p_power(q, sys.p):
                continue
            name = sys.fmt_root(s)
            a1, a2 = rd.labels[i], rd.labels[j]
            lhs = ql.scale(Fraction(1, q), sys.coroot_r(i))
            rhs = sys.coroot_r(j)
            findings.append(Finding("A8", PASS if lhs == rhs else FAIL,
                                    f"{name}: q^-1 {a1}^r = {fmt_vec(lhs)}, {a2}^r = {fmt_vec(rhs)}",
                                    {"sigma": name, "lhs": fmt_vec(lhs), "rhs": fmt_vec(rhs)}))
            q1, q2 = _q_alpha(sys, a1), _q_alpha(sys, a2)
            if q1 is None or q2 is None or UNKNOWN in (q1, q2):
                findings.append(Finding("A8", UNDETERMINED, f"{name}: q_{a1} or q_{a2} unknown", {"sigma": name}))
                continue
            ok = Fraction(q1, q) == q2
            findings.append(Finding("A8", PASS if ok else FAIL,
                                    f"{name}: q^-1 q_{a1} = {ql.fmt(Fraction(q1, q))}, q_{a2} = {q2}",
                                    {"sigma": name, "q": q, "q_a1": q1, "q_a2": q2}))
    return _result("A8", findings, "no spherical root q alpha_1 + alpha_2 with orthogonal roots")


def structural_checks(sys: PSphericalSystem) -> tuple:
    from .localization import check_neighbor_inequalities
    return (check_types(sys), check_color_relations(sys), check_delta_integrality(sys),
            check_sharing_rules(sys), check_color_count(sys), check_neighbor_inequalities(sys))


def validate(sys: PSphericalSystem, catalog: RootCatalog | None = None, p2_mode=None,
             structural: bool = True) -> AxiomReport:
    """Evaluate A1-A8 (and, unless disabled, the structural checks).

    When ``catalog`` is None the system's own ``catalog_path`` is used; A3 is
    skipped if neither is available.
    """
    mode = resolve_p2_mode(sys.p, p2_mode)
    if catalog is None and sys.catalog_path:
        path = Path(sys.catalog_path)
        if not path.is_absolute() and sys.base_dir:
            path = Path(sys.base_dir) / path
        catalog = load_catalog(path)
    sa = s_a(sys)
    sigma_ok = all(_representable(sys, s) is not None for s in sys.sigma)
    results = [check_A1(sys), check_A2(sys), check_A3(sys, catalog)]
    if sigma_ok:
        a5, pairs = check_A5(sys, sa)
        results += [check_A4(sys, mode, sa), a5, check_A6(sys, sa, pairs), check_A7(sys, mode), check_A8(sys)]
        checks = structural_checks(sys) if structural else ()
    else:
        why = "some spherical root is not in the span of Xi (see A1)"
        results += [AxiomResult(a, UNDETERMINED, why) for a in ("A4", "A5", "A6")]
        results += [check_A7(sys, mode), check_A8(sys)]
        checks = ()
    results.sort(key=lambda r: AXIOMS.index(r.id))
    return AxiomReport(sys.p, mode, tuple(results), checks)
