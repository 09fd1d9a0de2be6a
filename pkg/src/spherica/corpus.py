"""Generators for the fixture corpus: worked examples, their minimally broken
variants, and random systems for the property suites.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Mapping, Sequence

from . import qlinalg as ql
from .lattice import is_p_power, normal_form, preimage_lattice, primitive_in, zs_cap_xip
from .polyhedra import cone_from_rays
from .roots import RootDatum, build_root_datum
from .spherical import ColorRecord, PSphericalSystem, SphericalError, rebase_delta

INF = "inf"
CATALOG_NAME = "catalog_mini.txt"


def _check_q(q: int, p: int) -> None:
    if not is_p_power(q, p):
        raise SphericalError(f"q = {q} is not a power of p = {p}")


def _system(rd: RootDatum, p: int, rows, sigma, sp, colors, **kw) -> PSphericalSystem:
    """Assemble a system whose deltas are given by their values on ``rows``."""
    rows = [tuple(r) for r in rows]
    xi = normal_form(rows, rd.rank)
    recs = []
    for name, ctype, moved_by, delta, q in colors:
        labels = tuple(rd.resolve(a) for a in moved_by)
        qmap = {rd.resolve(a): v for a, v in q.items()}
        recs.append(ColorRecord(name, ctype, labels, rebase_delta(xi, rows, delta), qmap))
    return PSphericalSystem(p=p, rd=rd, xi=xi, sigma=tuple(tuple(s) for s in sigma),
                            sp=tuple(rd.resolve(a) for a in sp), colors=tuple(recs), **kw)


# --- worked examples -----------------------------------------------------------

def parse_f_spec(spec: str | Sequence, n: int) -> list:
    """``"inf,2"`` or ``["inf", 2]`` into a list of exponents with ``INF`` markers."""
    items = spec.split(",") if isinstance(spec, str) else list(spec)
    if len(items) != n:
        raise SphericalError(f"f needs {n} values, got {len(items)}")
    out = []
    for x in items:
        x = str(x).strip().lower()
        if x in ("inf", "infinity", "oo", "∞"):
            out.append(INF)
        elif x.isdigit():
            out.append(int(x))
        else:
            raise SphericalError(f"f value {x!r} is neither a nonnegative integer nor inf")
    return out


def wenzel_flag(group, f, p: int) -> PSphericalSystem:
    """``G/P`` for a subgroup scheme P containing the opposite Borel.

    Roots with ``f = inf`` form S^P; every other root moves its own type-B
    color with degree ``p^f``. The lattice Xi is zero.
    """
    rd = build_root_datum(group)
    fs = parse_f_spec(f, rd.n)
    if p == 1 and any(v not in (0, INF) for v in fs):
        raise SphericalError("in characteristic zero f takes only the values 0 and inf")
    sp = [a for a, v in zip(rd.labels, fs) if v == INF]
    colors = [(f"D_{a.replace('.', '')}", "B", [a], [], {a: p ** v})
              for a, v in zip(rd.labels, fs) if v != INF]
    return _system(rd, p, [], [], sp, colors, rk_xi_h=len(colors), group=_group_field(group, rd),
                   meta={"example": "wenzel-flag", "f": [str(v) for v in fs]})


def frobenius_diag(q: int, p: int) -> PSphericalSystem:
    """``SL(2) x SL(2) / SL(2)`` embedded through ``id x F_q``."""
    _check_q(q, p)
    rd = build_root_datum("A1xA1")
    sigma = (1, q)
    xi_row = rd.root_vector(sigma)
    d = rd.pairing(xi_row, 0)
    colors = [("D", "B", ["a1", "a2"], [d], {"a1": 1, "a2": q})]
    return _system(rd, p, [xi_row], [sigma], [], colors, rk_xi_h=0, group="A1xA1",
                   meta={"example": "frobenius-diag", "q": q})


def sl3_delta_table(q: int) -> dict[str, tuple[Fraction, Fraction]]:
    """Values ``(delta_D(alpha_1), delta_D(alpha_2))`` of the three colors."""
    iq = Fraction(1, q)
    return {"D0": (iq, Fraction(1)), "D1": (Fraction(1), Fraction(-q - 1)), "D2": (-1 - iq, Fraction(1))}


def sl3_unipotent(q: int, p: int) -> PSphericalSystem:
    """``SL(3)/H`` with H a one-dimensional torus times a twisted unipotent group.

    Both simple roots are of type A. The lattice Xi is the largest one in
    the weight lattice on which the three deltas are integral.
    """
    _check_q(q, p)
    rd = build_root_datum("A2")
    table = sl3_delta_table(q)
    R = rd.simple_roots
    amb = {D: ql.mat_vec(ql.inverse(R), vals) for D, vals in table.items()}
    T = [[amb[D][k] for D in ("D0", "D1", "D2")] for k in range(rd.rank)]
    xi = normal_form(preimage_lattice(T, 1), rd.rank)
    movers = {"D0": ["a1", "a2"], "D1": ["a1"], "D2": ["a2"]}
    qs = {"D0": {"a1": q, "a2": 1}, "D1": {"a1": 1}, "D2": {"a2": 1}}
    colors = tuple(ColorRecord(D, "A", tuple(movers[D]), tuple(ql.dot(amb[D], b) for b in xi.basis), qs[D])
                   for D in ("D0", "D1", "D2"))
    return PSphericalSystem(p=p, rd=rd, xi=xi, sigma=((1, 0), (0, 1)), sp=(), colors=colors,
                            rk_xi_h=1, group="A2",
                            meta={"example": "sl3-unipotent", "q": q,
                                  "delta_on_simple_roots": {D: [ql.fmt(v) for v in vals]
                                                            for D, vals in table.items()}})


def schalke_so4() -> PSphericalSystem:
    """The quadrangle configuration ``{a1, a1+a2, a2+a3, a3}`` in A3 at p = 2.

    The lattice is the root lattice and both end roots are given colors of
    type A'; only the spherical roots are prescribed by the example.
    """
    rd = build_root_datum("A3")
    rows = list(rd.simple_roots)
    sigma = [(1, 0, 0), (1, 1, 0), (0, 1, 1), (0, 0, 1)]
    colors = []
    for i, a in enumerate(rd.labels):
        ar = [rd.pairing(r, i) for r in rows]
        if a == "a2":
            colors.append((f"D_{a}", "B", [a], ar, {a: 1}))
        else:
            colors.append((f"D_{a}", "A'", [a], [x / 2 for x in ar], {a: 1}))
    return _system(rd, 2, rows, sigma, [], colors, group="A3", meta={"example": "schalke-so4"})


def a1a1_mixed(p: int = 3) -> PSphericalSystem:
    """A1 x A1 with ``a1`` of type A and ``a2`` of type A' (needs p != 2)."""
    if p == 2:
        raise SphericalError("a type-A' root with 2 a in Sigma needs p != 2")
    rd = build_root_datum("A1xA1")
    rows = [rd.root_vector((1, 0)), rd.root_vector((0, 2))]
    colors = [("Dp", "A", ["a1"], [1, 0], {"a1": 1}),
              ("Dm", "A", ["a1"], [1, 0], {"a1": 1}),
              ("E", "A'", ["a2"], [0, 2], {"a2": 1})]
    return _system(rd, p, rows, [(1, 0), (0, 2)], [], colors, group="A1xA1",
                   meta={"example": "a1a1-mixed"})


def _group_field(group, rd):
    return group if isinstance(group, str) else {"cartan": [list(r) for r in rd.cartan_matrix()]}


EXAMPLES = ("wenzel-flag", "frobenius-diag", "sl3-unipotent", "schalke-so4")


# --- minimally broken variants -------------------------------------------------

def _with_color(sys: PSphericalSystem, name: str, **changes) -> PSphericalSystem:
    from dataclasses import replace
    cols = tuple(replace(D, **changes) if D.name == name else D for D in sys.colors)
    return sys.replace(colors=cols)


def broken_a1() -> PSphericalSystem:
    """Frobenius data with the doubled, non-primitive root ``2(a1 + q a2)``."""
    s = frobenius_diag(3, 3)
    return s.replace(sigma=((2, 6),), meta={"mutation": "A1"})


def broken_a2() -> PSphericalSystem:
    """Flag data for A2 with a nonzero lattice on which ``a1^r`` does not vanish."""
    rd = build_root_datum("A2")
    row = (1, 0)
    colors = [("D_a2", "B", ["a2"], [rd.pairing(row, 1)], {"a2": 1})]
    return _system(rd, 5, [row], [], ["a1"], colors, group="A2", meta={"mutation": "A2"})


def broken_a3() -> PSphericalSystem:
    """A1 x A1 at p = 3 with ``a1 + 2 a2``, which no catalog lists for p = 3."""
    rd = build_root_datum("A1xA1")
    row = rd.root_vector((1, 2))
    colors = [("D1", "B", ["a1"], [rd.pairing(row, 0)], {"a1": 1}),
              ("D2", "B", ["a2"], [rd.pairing(row, 1)], {"a2": 1})]
    return _system(rd, 3, [row], [(1, 2)], [], colors, group="A1xA1", meta={"mutation": "A3"})


def broken_a4() -> PSphericalSystem:
    """Type-A colors taking a positive value on the root ``2 a2``."""
    s = a1a1_mixed(3)
    s = _with_color(s, "Dp", delta=(Fraction(1), Fraction(1)))
    s = _with_color(s, "Dm", delta=(Fraction(1), Fraction(-1)))
    return s.replace(meta={"mutation": "A4"})


def broken_a5() -> PSphericalSystem:
    """A third type-A color positive on ``a1``."""
    s = a1a1_mixed(3)
    d3 = tuple(a + b for a, b in zip(s.color("Dp").delta, s.color("Dm").delta))
    extra = ColorRecord("D3", "A", ("g1.a1",), d3, {"g1.a1": 1})
    return s.replace(colors=s.colors + (extra,), meta={"mutation": "A5"})


def broken_a6(q: int = 3, p: int = 3) -> PSphericalSystem:
    """The SL(3) example with ``delta_D1(a2)`` changed to ``-q``."""
    s = sl3_unipotent(q, p)
    rd = s.rd
    vals = (Fraction(1), Fraction(-q))
    amb = ql.mat_vec(ql.inverse(rd.simple_roots), vals)
    s = _with_color(s, "D1", delta=tuple(ql.dot(amb, b) for b in s.xi.basis))
    return s.replace(meta={"mutation": "A6", "q": q})


def broken_a7() -> PSphericalSystem:
    """A2 at p = 3 with ``2 a1`` and ``a1 + a2``; ``a1^r(a1 + a2) = 1 > 0``."""
    rd = build_root_datum("A2")
    rows = [rd.root_vector((2, 0)), rd.root_vector((1, 1))]
    ar = lambda i: [rd.pairing(r, i) for r in rows]
    colors = [("E", "A'", ["a1"], [x / 2 for x in ar(0)], {"a1": 1}),
              ("F", "B", ["a2"], ar(1), {"a2": 1})]
    return _system(rd, 3, rows, [(2, 0), (1, 1)], [], colors, group="A2", meta={"mutation": "A7"})


def broken_a8() -> PSphericalSystem:
    """Frobenius data with ``q_{D,a2}`` multiplied by p."""
    s = frobenius_diag(3, 3)
    s = _with_color(s, "D", q={"g1.a1": 1, "g2.a1": 9})
    return s.replace(meta={"mutation": "A8"})


MUTATIONS = {"A1": broken_a1, "A2": broken_a2, "A3": broken_a3, "A4": broken_a4,
             "A5": broken_a5, "A6": broken_a6, "A7": broken_a7, "A8": broken_a8}

MUTATION_FILES = {"A1": "frobenius_broken_a1.json", "A2": "wenzel_flag_broken_a2.json",
                  "A3": "a1a1_broken_a3.json", "A4": "a1a1_mixed_broken_a4.json",
                  "A5": "a1a1_mixed_broken_a5.json", "A6": "sl3_unipotent_broken_a6.json",
                  "A7": "a2_broken_a7.json", "A8": "frobenius_broken_a8.json"}

CATALOG_MINI = """\
# Mini catalog of spherical roots for the shipped fixtures.
# Fields: group, root (q* is a common power of p), admissible S^P, optional p rule.
group=A1xA1     root=a1+q*a2   sp={}
group=A1xA1     root=q*a1+a2   sp={}
group=A1xA1     root=a1        sp=<={a2}
group=A1xA1     root=a2        sp=<={a1}
group=A1xA1     root=2*a2      sp=<={a1}  p=!2
group=A1xA1     root=2*a1      sp=<={a2}  p=!2
group=A2        root=a1        sp=<={a2}
group=A2        root=a2        sp=<={a1}
group=A2        root=a1+a2     sp={}
group=A2        root=2*a1      sp={}      p=!2
group=A2        root=2*a2      sp={}      p=!2
group=A3        root=a1        sp=<={a3}
group=A3        root=a3        sp=<={a1}
group=A3        root=a1+a2     sp={}
group=A3        root=a2+a3     sp={}
"""


def valid_fixtures() -> dict[str, PSphericalSystem]:
    """The valid fixtures shipped in ``fixtures/``."""
    return {
        "sl3_unipotent.json": sl3_unipotent(3, 3),
        "frobenius_diag.json": frobenius_diag(3, 3),
        "schalke_so4.json": schalke_so4(),
        "wenzel_flag_a2.json": wenzel_flag("A2", [INF, 2], 5),
        "a1a1_mixed.json": a1a1_mixed(3),
    }


def with_catalog(sys: PSphericalSystem, path: str = CATALOG_NAME) -> PSphericalSystem:
    return sys.replace(catalog_path=path)


# --- random systems -------------------------------------------------------------

def product(systems: Sequence[PSphericalSystem]) -> PSphericalSystem:
    """Direct product of systems over simply named groups with a common p."""
    ps = {s.p for s in systems}
    if len(ps) != 1:
        raise SphericalError("a product needs a common p")
    p = ps.pop()
    rd = build_root_datum("x".join(s.rd.name for s in systems))
    rows, sigma, sp, colors = [], [], [], []
    off_amb = off_n = 0
    rk_h = 0
    for b, s in enumerate(systems):
        lab = {a: rd.labels[off_n + k] for k, a in enumerate(s.rd.labels)}
        pad = lambda v, m, off: tuple([0] * off + list(v) + [0] * (m - off - len(v)))
        block_rows = [pad(r, rd.rank, off_amb) for r in s.xi.basis]
        row_off = len(rows)
        rows += block_rows
        sigma += [pad(x, rd.n, off_n) for x in s.sigma]
        sp += [lab[a] for a in s.sp]
        for D in s.colors:
            colors.append((D.name, D.ctype, [lab[a] for a in D.moved_by], (row_off, D.delta),
                           {lab[a]: v for a, v in D.q.items()}))
        rk_h = None if rk_h is None or s.rk_xi_h is None else rk_h + s.rk_xi_h
        off_amb += s.rd.rank
        off_n += s.rd.n
    names = [c[0] for c in colors]
    r = len(rows)
    fixed = []
    for name, ctype, mb, (row_off, delta), q in colors:
        full = [Fraction(0)] * r
        full[row_off:row_off + len(delta)] = delta
        if names.count(name) > 1:
            name = f"{name}_{mb[0].split('.')[0]}"
        fixed.append((name, ctype, mb, full, q))
    return _system(rd, p, rows, sigma, sp, fixed, rk_xi_h=rk_h, group=rd.name)


def random_block(rng: random.Random, p: int) -> PSphericalSystem:
    pp = [p ** k for k in range(3)] if p > 1 else [1]
    choices = ["wenzel", "frobenius", "sl3"]
    if p != 2:
        choices.append("mixed")
    kind = rng.choice(choices)
    if kind == "wenzel":
        group = rng.choice(["A1", "A2", "B2"])
        n = build_root_datum(group).n
        vals = [0, INF] if p == 1 else [0, 1, 2, INF]
        return wenzel_flag(group, [rng.choice(vals) for _ in range(n)], p)
    if kind == "frobenius":
        return frobenius_diag(rng.choice(pp), p)
    if kind == "sl3":
        return sl3_unipotent(rng.choice(pp), p)
    return a1a1_mixed(p)


def random_system(rng: random.Random, p: int | None = None, max_blocks: int = 3) -> PSphericalSystem:
    """A product of randomly chosen example blocks; valid by construction."""
    if p is None:
        p = rng.choice([1, 2, 3, 5])
    blocks = [random_block(rng, p) for _ in range(rng.randint(1, max_blocks))]
    return blocks[0] if len(blocks) == 1 else product(blocks)


def random_sigma(rng: random.Random, p: int | None = None, max_roots: int = 5):
    """A random root datum, full-rank Xi and a Sigma meeting the round-trip hypotheses.

    Returns ``(rd, xi, p, sigma)``. Every root is the primitive element of
    ``ZS cap Xi_p`` on its ray and spans an extremal ray of the cone over Sigma.
    """
    if p is None:
        p = rng.choice([1, 2, 3, 5])
    rd = build_root_datum(rng.choice(["A2", "A3", "B2", "A1xA1", "A1xA1xA1", "G2"]))
    n = rd.n
    while True:
        M = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
        if ql.det(M) != 0:
            break
    xi = normal_form(M, rd.rank)
    L = zs_cap_xip(rd, xi, p)
    dirs = set()
    for _ in range(rng.randint(1, max_roots)):
        d = [rng.randint(0, 3) for _ in range(n)]
        if any(d):
            dirs.add(ql.primitive(d))
    K = cone_from_rays(list(dirs), n)
    sigma = sorted({tuple(int(x) for x in primitive_in(r, L)) for r in K.rays}, reverse=True)
    return rd, xi, p, sigma


def fan_fixtures() -> dict[str, dict]:
    """Fan files: the faces of the negative quadrant, and an overlapping pair."""
    quadrant = {"format_version": "1.0", "dim": 2, "cones": [[[-1, 0], [0, -1]]], "lambda": [1, 0]}
    bad = {"format_version": "1.0", "dim": 2, "cones": [[[1, 0], [0, 1]], [[1, 1], [1, -1]]], "lambda": [0, 0]}
    return {"quadrant_fan.json": quadrant, "overlapping_fan.json": bad}


def write_fixtures(directory) -> list[str]:
    """Write the shipped corpus into ``directory``; returns the file names."""
    from pathlib import Path

    from .io import dumps_system, emit
    from .spherical import valuation_cone

    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    written = []

    def put(name, text):
        (d / name).write_text(text)
        written.append(name)

    put(CATALOG_NAME, CATALOG_MINI)
    for name, s in valid_fixtures().items():
        put(name, dumps_system(with_catalog(s)))
    for aid, gen in MUTATIONS.items():
        s = gen()
        # The doubled root of the A1 variant is absent from every catalog.
        put(MUTATION_FILES[aid], dumps_system(s if aid == "A1" else with_catalog(s)))
    sl3 = sl3_unipotent(3, 3)
    V = valuation_cone(sl3)
    put("sl3_unipotent_fan.json", dumps_system(with_catalog(sl3.replace(fan=(V.rays,)))))
    for name, f in fan_fixtures().items():
        put(name, emit(f) + "\n")
    return written


if __name__ == "__main__":
    import sys

    target = sys.argv[1] if len(sys.argv) > 1 else "fixtures"
    for name in write_fixtures(target):
        print(name)
