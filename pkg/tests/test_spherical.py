from __future__ import annotations

from fractions import Fraction

import pytest

from spherica import corpus
from spherica.lattice import normal_form
from spherica.polyhedra import cone_from_inequalities, cone_from_rays
from spherica.roots import build_root_datum
from spherica.spherical import (UNDETERMINED_A, SphericalError, check_color_count, check_color_relations,
                                check_sharing_rules, check_types, classify_types, recover_roots,
                                sharing_witness, spherical_roots_from_cone, valuation_cone)

from helpers import make_system, roots_on


def a2_simple(p=1):
    rd = build_root_datum("A2")
    rows = rd.simple_roots
    cols = []
    for i, a in enumerate(("a1", "a2")):
        ar = roots_on(rd, rows, i)
        other = [x - y for x, y in zip(ar, [1 if k == i else 0 for k in range(2)])]
        cols += [(f"P{a}", "A", [a], [int(k == i) for k in range(2)], {a: 1}),
                 (f"M{a}", "A", [a], other, {a: 1})]
    return make_system("A2", p, rows, [(1, 0), (0, 1)], [], cols)


def test_valuation_cone_examples():
    sys = a2_simple()
    V = valuation_cone(sys)
    # both pairings with the simple roots are <= 0
    s1, s2 = (sys.sigma_xi(s) for s in sys.sigma)
    assert set(V.facets) == {tuple(-x for x in s1), tuple(-x for x in s2)}
    for r in V.rays:
        assert sum(a * b for a, b in zip(r, s1)) <= 0 and sum(a * b for a, b in zip(r, s2)) <= 0
    empty = corpus.wenzel_flag("A2", ["0", "0"], 5)
    assert valuation_cone(empty).dim == 0  # Xi = 0, so N_Q = 0 is the whole space
    quad = corpus.schalke_so4()
    assert len(valuation_cone(quad).facets) == 4


def test_sigma_empty_gives_full_space():
    rd = build_root_datum("A2")
    rows = rd.simple_roots
    cols = [(f"D{i}", "B", [a], roots_on(rd, rows, i), {a: 1}) for i, a in enumerate(rd.labels)]
    sys = make_system("A2", 1, rows, [], [], cols)
    V = valuation_cone(sys)
    assert V.dim == 2 and not V.facets
    assert spherical_roots_from_cone(V, sys.rd, sys.xi, 1) == []


def test_unrepresentable_root_rejected():
    rd = build_root_datum("A2")
    row = rd.root_vector((1, 0))
    sys = make_system("A2", 1, [row], [(0, 1)], ["a2"],
                      [("D", "B", ["a1"], [2], {"a1": 1})])
    with pytest.raises(SphericalError, match="not in"):
        valuation_cone(sys)


def test_round_trips():
    rd = build_root_datum("A2")
    ZS = normal_form(rd.simple_roots, 2)
    V = valuation_cone(a2_simple())
    assert sorted(spherical_roots_from_cone(V, rd, ZS, 1)) == [(0, 1), (1, 0)]
    # half space v(a1 + a2) <= 0 in ZS coordinates
    s = a2_simple().sigma_xi((1, 1))
    half = cone_from_inequalities([tuple(-x for x in s)], 2)
    assert spherical_roots_from_cone(half, rd, ZS, 1) == [(1, 1)]
    quad = corpus.schalke_so4()
    got = spherical_roots_from_cone(valuation_cone(quad), quad.rd, quad.xi, 2)
    assert sorted(got) == sorted(quad.sigma)
    steps = recover_roots(valuation_cone(quad), quad.rd, quad.xi, 2)
    assert len(steps) == 4 and all(s.root in quad.sigma for s in steps)


def test_non_pointed_dual_rejected():
    rd = build_root_datum("A2")
    ZS = normal_form(rd.simple_roots, 2)
    with pytest.raises(SphericalError):
        spherical_roots_from_cone(cone_from_rays([(1, 0)], 2), rd, ZS, 1)


def test_classify_types_examples():
    rd = build_root_datum("A2")
    rows = [rd.root_vector((1, 0)), rd.root_vector((0, 2))]
    sys = make_system("A2", 5, rows, [(1, 0), (0, 2)], [],
                      [("Dp", "A", ["a1"], [1, 0], {"a1": 1}),
                       ("Dm", "A", ["a1"], [1, -2], {"a1": 1}),
                       ("E", "A'", ["a2"], [Fraction(-1, 2), 2], {"a2": 1})])
    assert classify_types(sys) == {"a1": "A", "a2": "A'"}
    flag = corpus.wenzel_flag("A2", ["inf", "inf"], 3)
    assert classify_types(flag) == {"a1": "P", "a2": "P"}
    for q, p in ((1, 1), (3, 3), (25, 5)):
        assert classify_types(corpus.frobenius_diag(q, p)) == {"g1.a1": "B", "g2.a1": "B"}


def test_p2_type_read_from_delta_sign():
    rd = build_root_datum("A1")
    rows = rd.simple_roots
    two_a = make_system("A1", 2, rows, [(1,)], [],
                        [("Dp", "A", ["a1"], [1], {"a1": 1}), ("Dm", "A", ["a1"], [1], {"a1": 1})])
    assert classify_types(two_a) == {"a1": "A"}
    one = make_system("A1", 2, rows, [(1,)], [], [("E", "A'", ["a1"], [1], {"a1": 1})])
    assert classify_types(one) == {"a1": "A'"}
    sys = corpus.schalke_so4()
    assert classify_types(sys) == {"a1": "A'", "a2": "B", "a3": "A'"}
    assert UNDETERMINED_A == "A-or-A'"


@pytest.mark.parametrize("q,p", [(2, 2), (4, 2), (3, 3), (9, 3), (27, 3), (5, 5), (125, 5)])
def test_sl3_relations(q, p):
    sys = corpus.sl3_unipotent(q, p)
    rep = check_color_relations(sys)
    assert rep.status == "pass", [f.message for f in rep.findings]
    D0, D1, D2 = (sys.color(n) for n in ("D0", "D1", "D2"))
    expected = corpus.sl3_delta_table(q)
    for i in range(2):
        c = sys.xi_coords(sys.simple(i))
        assert (D0.value(c), D1.value(c), D2.value(c)) == tuple(expected[n][i] for n in ("D0", "D1", "D2"))


def test_tampered_sl3_fails_relations():
    rep = check_color_relations(corpus.broken_a6())
    assert rep.status == "fail"


def test_frobenius_relations_and_sharing():
    for q, p in ((1, 1), (2, 2), (3, 3), (9, 3)):
        sys = corpus.frobenius_diag(q, p)
        assert check_color_relations(sys).status == "pass"
        rep = check_sharing_rules(sys)
        assert rep.status == "pass"
        w = sharing_witness(sys, 0, 1)
        assert w is not None and w[0] == (1, q)


def test_sharing_b_and_a_mismatch_fails():
    rd = build_root_datum("A1xA1")
    rows = [rd.root_vector((1, 0)), rd.root_vector((0, 1))]
    sys = make_system("A1xA1", 3, rows, [(1, 0)], [],
                      [("Dp", "A", ["a1", "a2"], [1, 1], {"a1": 1, "a2": 1}),
                       ("Dm", "A", ["a1"], [1, 0], {"a1": 1})])
    assert check_sharing_rules(sys).status == "fail"


def test_sl3_sharing_passes():
    assert check_sharing_rules(corpus.sl3_unipotent(3, 3)).status == "pass"


def test_color_count():
    assert check_color_count(corpus.sl3_unipotent(3, 3)).status == "pass"
    flag = corpus.wenzel_flag("A3", ["inf", 1, 0], 3)
    assert check_color_count(flag).status == "pass"
    assert check_color_count(flag.replace(rk_xi_h=None)).status == "skipped"
    assert check_color_count(flag.replace(rk_xi_h=5)).status == "fail"


def test_types_check_on_fixtures():
    for name, sys in corpus.valid_fixtures().items():
        assert check_types(sys).status == "pass", name


def test_type_a_positivity_after_relations():
    sys = corpus.sl3_unipotent(5, 5)
    for i, a in enumerate(sys.rd.labels):
        for D in sys.colors_moved_by(a):
            if D.ctype == "A":
                assert D.value(sys.xi_coords(sys.simple(i))) == Fraction(1, D.q[a])
