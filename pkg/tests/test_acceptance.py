"""Acceptance suite: one test per criterion, each timed and reporting a PASS/FAIL line.

All comparisons are exact (Fraction/int equality, zero tolerance).
"""
from __future__ import annotations

import itertools
import random
import time
from fractions import Fraction
from math import gcd

import pytest

from spherica import corpus
from spherica.axioms import load_catalog, parse_catalog, validate
from spherica.io import load_system
from spherica.lattice import (PLocalizedLattice, intersect, is_primitive, member, member_p, normal_form,
                              p_part, zs_cap_xip)
from spherica.localization import is_neighbor_set, localize_at_S
from spherica.polyhedra import (Fan, cone_from_rays, dual_cone, extremal_rays, localize_fan, validate_fan)
from spherica.spherical import (PSphericalSystem, check_color_count, check_sharing_rules, sharing_witness,
                                spherical_roots_from_cone, valuation_cone)

from oracles import BruteLattice, brute_extremal_rays, in_cone, rank


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def verdict(number: int, title: str, ok: bool, elapsed: float, limit: float, detail: str = "") -> None:
    within = elapsed < limit
    status = "PASS" if ok and within else "FAIL"
    print(f"[criterion {number}] {status}: {title} ({elapsed:.3f}s, limit {limit:g}s){' - ' + detail if detail else ''}")
    assert ok, detail or title
    assert within, f"runtime {elapsed:.3f}s exceeds {limit}s"


def xi_dot(u, v):
    return sum(Fraction(a) * b for a, b in zip(u, v))


# --- 1 -----------------------------------------------------------------------

def test_criterion_1_sl3_delta_table(fixtures_dir):
    problems = []
    with Timer() as t:
        cases = [(p ** k, p) for p in (2, 3, 5) for k in (1, 2, 3)]
        systems = [corpus.sl3_unipotent(q, p) for q, p in cases]
        k33 = cases.index((3, 3))
        systems[k33] = load_system(fixtures_dir / "sl3_unipotent.json")  # the shipped fixture
        for (q, p), sys in zip(cases, systems):
            iq = Fraction(1, q)
            published = {"D0": (iq, 1), "D1": (1, -q - 1), "D2": (-1 - iq, 1)}
            c1, c2 = (sys.xi_coords(sys.simple(i)) for i in range(2))
            for name, (v1, v2) in published.items():
                D = sys.color(name)
                if (D.value(c1), D.value(c2)) != (v1, v2):
                    problems.append(f"q={q}: {name} values differ from the table")
            D0, D1, D2 = (sys.color(n).delta for n in ("D0", "D1", "D2"))
            a1r, a2r = sys.coroot_r(0), sys.coroot_r(1)
            if tuple(q * x + y for x, y in zip(D0, D1)) != a1r:
                problems.append(f"q={q}: q delta_D0 + delta_D1 != a1^r")
            if tuple(x + y for x, y in zip(D0, D2)) != a2r:
                problems.append(f"q={q}: delta_D0 + delta_D2 != a2^r")
            if validate(sys).failed_axioms:
                problems.append(f"q={q}: axioms fail")
    verdict(1, "SL(3) delta table satisfies both type-A relations for 9 (q, p)", not problems,
            t.elapsed, 1.0, "; ".join(problems))


# --- 2 -----------------------------------------------------------------------

def test_criterion_2_frobenius_diagonal():
    problems = []
    with Timer() as t:
        for p in (2, 3, 5):
            for q in (p, p * p):
                sys = corpus.frobenius_diag(q, p)
                if check_sharing_rules(sys).status != "pass":
                    problems.append(f"q={q}: B-sharing rule fails")
                w = sharing_witness(sys, 0, 1)
                if w is None or w[0] != (1, q):
                    problems.append(f"q={q}: witness {w} is not a1+q a2")
                D = sys.color("D")
                q1, q2 = D.q["g1.a1"], D.q["g2.a1"]
                lhs = tuple(Fraction(1, q1) * x for x in sys.coroot_r(0))
                rhs = tuple(Fraction(1, q2) * x for x in sys.coroot_r(1))
                if lhs != rhs or (q1, q2) != (1, q):
                    problems.append(f"q={q}: q1^-1 a1^r = {lhs} vs q2^-1 a2^r = {rhs}")
                if validate(sys).status("A8") != "pass":
                    problems.append(f"q={q}: A8 not pass")
    verdict(2, "Frobenius diagonal passes B-sharing, rescaled coroot identity and A8 for q in {p, p^2}",
            not problems, t.elapsed, 1.0, "; ".join(problems))


# --- 3 -----------------------------------------------------------------------

def test_criterion_3_schalke_quadrangle():
    problems = []
    with Timer() as t:
        sys = corpus.schalke_so4()
        a1, a12, a23, a3 = (1, 0, 0), (1, 1, 0), (0, 1, 1), (0, 0, 1)
        if set(sys.sigma) != {a1, a12, a23, a3}:
            problems.append("fixture Sigma differs")
        V = valuation_cone(sys)
        if len(V.facets) != 4:
            problems.append(f"{len(V.facets)} facets")
        for bad in ([a1, a23], [a12, a3]):
            if is_neighbor_set(bad, sys):
                problems.append(f"{bad} accepted")
        for good in ([a1, a12], [a12, a23], [a23, a3], [a3, a1]):
            if not is_neighbor_set(good, sys):
                problems.append(f"{good} rejected")
        back = spherical_roots_from_cone(V, sys.rd, sys.xi, sys.p)
        if sorted(back) != sorted(sys.sigma):
            problems.append(f"round trip gave {back}")
    verdict(3, "A3 quadrangle: 4 facets, diagonals rejected, edges accepted, roots recovered",
            not problems, t.elapsed, 1.0, "; ".join(problems))


# --- 4 -----------------------------------------------------------------------

B2 = [[2, -2], [-1, 2]]


def test_criterion_4_wenzel_flags():
    rng = random.Random(20240)
    problems = []
    cat = parse_catalog(corpus.CATALOG_MINI)
    with Timer() as t:
        for k in range(20):
            group = [ "A2", "A3", B2][k % 3]
            n = 3 if group == "A3" else 2
            p = rng.choice([2, 3, 5])
            f = [rng.choice(["0", "1", "2", "inf"]) for _ in range(n)]
            sys = corpus.wenzel_flag(group, f, p)
            rep = validate(sys, cat)
            label = f"{group if isinstance(group, str) else 'B2-matrix'} f={f} p={p}"
            if rep.failed_axioms or rep.failed_checks:
                problems.append(f"{label}: {rep.failed_axioms + rep.failed_checks}")
            if sys.xi.rank != 0:
                problems.append(f"{label}: Xi has rank {sys.xi.rank}")
            if len(sys.colors) != n - len(sys.sp) or sys.sp != tuple(
                    a for a, v in zip(sys.rd.labels, f) if v == "inf"):
                problems.append(f"{label}: {len(sys.colors)} colors, SP = {sys.sp}")
            for D in sys.colors:
                (a,) = D.moved_by
                if D.q[a] != p ** int(f[sys.rd.index(a)]):
                    problems.append(f"{label}: q of {D.name} is {D.q[a]}")
            if check_color_count(sys).status != "pass":
                problems.append(f"{label}: color count at rank 0")
    verdict(4, "20 Wenzel flags over A2, A3, B2 pass all axioms with Xi = 0 and #colors = #(S - SP)",
            not problems, t.elapsed, 5.0, "; ".join(problems[:5]))


# --- 5 -----------------------------------------------------------------------

def test_criterion_5_cone_oracle():
    rng = random.Random(55)
    problems = []
    done = 0
    with Timer() as t:
        while done < 200:
            d = rng.randint(1, 4)
            gens = [tuple(rng.randint(-5, 5) for _ in range(d)) for _ in range(rng.randint(1, 6))]
            C = cone_from_rays(gens, d)
            if not C.is_pointed:
                continue
            done += 1
            got = set(extremal_rays(C))
            want = brute_extremal_rays(gens)
            if got != want:
                problems.append(f"{gens}: {sorted(got)} vs oracle {sorted(want)}")
            D = dual_cone(C)
            if dual_cone(D) != C:
                problems.append(f"{gens}: dual is not involutive")
            for u in D.generators():
                if any(xi_dot(u, g) < 0 for g in gens):
                    problems.append(f"{gens}: dual generator {u} negative on the cone")
            for f in C.facets:
                tight = [g for g in gens if xi_dot(f, g) == 0]
                if rank(tight) != C.dim - 1:
                    problems.append(f"{gens}: facet {f} has the wrong tight rank")
    verdict(5, "200 random pointed cones: extremal rays match the Caratheodory oracle, duality involutive",
            not problems, t.elapsed, 30.0, "; ".join(problems[:3]))


# --- 6 -----------------------------------------------------------------------

def _random_lattice(rng, max_image=1500):
    while True:
        d = rng.randint(1, 4)
        gens = [tuple(rng.randint(-3, 3) for _ in range(d)) for _ in range(rng.randint(1, 4))]
        if not any(any(g) for g in gens):
            continue
        try:
            return d, gens, BruteLattice(gens, d, max_image)
        except ValueError:
            continue


def _combo(rng, gens, bound=3):
    d = len(gens[0])
    out = [0] * d
    for g in gens:
        c = rng.randint(-bound, bound)
        out = [a + c * b for a, b in zip(out, g)]
    return tuple(out)


def test_criterion_6_lattice_oracle():
    rng = random.Random(66)
    problems = []
    with Timer() as t:
        for _ in range(200):
            d, gens, orc = _random_lattice(rng)
            L = normal_form(gens, d)
            samples = [tuple(rng.randint(-6, 6) for _ in range(d)) for _ in range(12)]
            samples += [_combo(rng, gens) for _ in range(6)]
            samples += [tuple(v + (rng.randint(0, 1) if k == 0 else 0) for k, v in enumerate(_combo(rng, gens)))
                        for _ in range(4)]
            for x in samples:
                if member(x, L) != orc.contains(x):
                    problems.append(f"member {x} in {gens}")
                if orc.contains(x) and any(x) and is_primitive(x, L) != orc.is_primitive(x):
                    problems.append(f"is_primitive {x} in {gens}")
            # intersection against a second lattice in the same space
            gens2 = [tuple(rng.randint(-3, 3) for _ in range(d)) for _ in range(rng.randint(1, 4))]
            try:
                orc2 = BruteLattice(gens2, d, 1500)
            except ValueError:
                orc2 = None
            if orc2 is not None:
                I = intersect(L, normal_form(gens2, d))
                for b in I.basis:
                    if not (orc.contains(b) and orc2.contains(b)):
                        problems.append(f"intersect basis {b} of {gens} & {gens2}")
                cands = samples + [tuple(orc2.M * v for v in _combo(rng, gens)) for _ in range(6)]
                for x in cands:
                    if member(x, I) != (orc.contains(x) and orc2.contains(x)):
                        problems.append(f"intersect member {x} of {gens} & {gens2}")
            # p-localized membership against direct p^k search
            for p in (2, 3, 5):
                _, rest = p_part(orc.M, p)
                if orc.M // rest > p ** 6:
                    continue  # the direct search to k <= 6 would not be exhaustive
                Lp = PLocalizedLattice(L, p)
                xs = list(samples)
                for _ in range(4):
                    z = _combo(rng, gens)
                    g = 0
                    for v in z:
                        g = gcd(g, v)
                    pk = g // p_part(g, p)[1] if g else 1
                    xs.append(tuple(v // pk for v in z))
                for x in xs:
                    if member_p(x, Lp) != orc.contains_p(x, p, 6):
                        problems.append(f"member_p {x} in {gens} p={p}")
    verdict(6, "200 random lattices: member, intersect, is_primitive and member_p match brute force",
            not problems, t.elapsed, 30.0, "; ".join(problems[:3]))


# --- 7 -----------------------------------------------------------------------

def test_criterion_7_localization_laws():
    rng = random.Random(77)
    problems = []
    with Timer() as t:
        systems = [corpus.random_system(rng) for _ in range(50)]
        for k, sys in enumerate(systems):
            rep = validate(sys)
            if rep.failed_axioms:
                problems.append(f"random system {k} invalid: {rep.failed_axioms}")
            same = localize_at_S(sys, sys.rd.labels).sys
            if same.sigma != sys.sigma or same.colors != sys.colors:
                problems.append(f"system {k}: localization at S is not the identity")
            labels = list(sys.rd.labels)
            s1 = [a for a in labels if rng.random() < 0.7]
            s2 = [a for a in s1 if rng.random() < 0.7]
            direct = localize_at_S(sys, s2).sys
            composed = localize_at_S(localize_at_S(sys, s1).sys, s2).sys
            if (composed.sigma, composed.colors, composed.xi) != (direct.sigma, direct.colors, direct.xi):
                problems.append(f"system {k}: composition {s2} <= {s1} differs")
        F = Fan.from_cones([cone_from_rays([(-1, 0), (0, -1)])])
        zero = localize_fan(F, (0, 0))
        if zero.fan != F or zero.v_lambda != ():
            problems.append("localize_fan at 0 is not the identity")
        half = localize_fan(F, (1, 0))
        expected = Fan.from_cones([cone_from_rays([(-1,)], 1)])
        if half.fan != expected or not validate_fan(half.fan).valid:
            problems.append(f"quadrant at (1,0) gave {[C.rays for C in half.fan.cones]}")
        if half.c_lambda != cone_from_rays([(-1, 0)]):
            problems.append("C(lambda) is not the ray (-1, 0)")
    verdict(7, "localization at S: identity, composition on 50 random systems, fan localization examples",
            not problems, t.elapsed, 10.0, "; ".join(problems[:3]))


# --- 8 -----------------------------------------------------------------------

def test_criterion_8_mutation_coverage(fixtures_dir):
    problems = []
    with Timer() as t:
        for axiom, fname in corpus.MUTATION_FILES.items():
            sys = load_system(fixtures_dir / fname)
            rep = validate(sys)
            if rep.failed_axioms != [axiom]:
                problems.append(f"{fname}: failing axioms {rep.failed_axioms}, expected [{axiom}]")
            if axiom == "A3" and sys.catalog_path != corpus.CATALOG_NAME:
                problems.append("A3 mutation does not use the mini catalog")
        load_catalog(fixtures_dir / corpus.CATALOG_NAME)
    verdict(8, "each of A1-A8 has a fixture failing exactly that axiom", not problems, t.elapsed, 5.0,
            "; ".join(problems))


# --- 9 -----------------------------------------------------------------------

def test_criterion_9_sigma_round_trip():
    rng = random.Random(99)
    problems = []
    per_p = {1: 0, 2: 0, 3: 0, 5: 0}
    with Timer() as t:
        for k in range(100):
            p = (1, 2, 3, 5)[k % 4]
            rd, xi, p, sigma = corpus.random_sigma(rng, p=p)
            per_p[p] += 1
            L = zs_cap_xip(rd, xi, p)
            # the hypotheses, checked independently of the generator
            for a, b in itertools.combinations(sigma, 2):
                if rank([a, b]) < 2:
                    problems.append(f"{sigma}: {a} and {b} proportional")
            for s in sigma:
                if s not in L or not is_primitive(s, L):
                    problems.append(f"{sigma}: {s} not primitive in ZS cap Xi_p")
                if in_cone(s, [x for x in sigma if x != s]):
                    problems.append(f"{sigma}: {s} not extremal")
            sys = PSphericalSystem(p=p, rd=rd, xi=xi, sigma=tuple(sigma), sp=rd.labels, colors=())
            back = spherical_roots_from_cone(valuation_cone(sys), rd, xi, p)
            if sorted(back) != sorted(sigma):
                problems.append(f"p={p} {rd.name}: {sigma} -> {back}")
    verdict(9, f"Sigma -> V -> Sigma identity on 100 random sets (per p: {per_p})", not problems,
            t.elapsed, 10.0, "; ".join(problems[:3]))
