from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from spherica.polyhedra import (ConeError, Fan, cone_from_inequalities, cone_from_rays, dual_cone,
                                extremal_rays, face_witness, faces, full_space, is_face, localize_fan,
                                relint_contains, support, validate_fan, zero_cone)

from oracles import brute_extremal_rays, in_cone


def test_redundant_ray_removed():
    C = cone_from_rays([(1, 0), (0, 1), (1, 1)])
    assert set(extremal_rays(C)) == {(1, 0), (0, 1)}


def test_redundant_inequality_dropped():
    C = cone_from_inequalities([(1, 0), (0, 1), (1, 1)])
    assert set(C.facets) == {(1, 0), (0, 1)}
    assert C == cone_from_rays([(1, 0), (0, 1)])


def test_half_plane_has_lineality():
    C = cone_from_rays([(1, 0), (-1, 0), (0, 1)])
    assert C.facets == ((0, 1),)
    assert C.lineality == ((1, 0),)
    with pytest.raises(ConeError, match="not pointed"):
        extremal_rays(C)


def test_dual_examples():
    assert dual_cone(full_space(2)) == zero_cone(2)
    Q = cone_from_rays([(1, 0), (0, 1)])
    assert dual_cone(Q) == Q
    D = dual_cone(cone_from_rays([(1, 1)]))
    assert D == cone_from_inequalities([(1, 1)])
    assert D.lineality == ((1, -1),)


def test_extremal_rays_examples():
    quad = cone_from_rays([(1, 0, 0), (1, 1, 0), (0, 1, 1), (0, 0, 1)])
    assert set(extremal_rays(quad)) == {(1, 0, 0), (1, 1, 0), (0, 1, 1), (0, 0, 1)}
    assert len(quad.facets) == 4
    octant = cone_from_inequalities([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert set(extremal_rays(octant)) == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}
    assert set(extremal_rays(cone_from_rays([(1, 0), (1, 1), (1, 2)]))) == {(1, 0), (1, 2)}


def test_faces_and_relative_interior():
    Q = cone_from_rays([(1, 0), (0, 1)])
    fs = faces(Q)
    assert [F.rays for F in fs] == [(), ((0, 1),), ((1, 0),), ((0, 1), (1, 0))]
    assert relint_contains(Q, (1, 1))
    assert not relint_contains(Q, (1, 0))


def test_face_witness_on_quadrangle():
    quad = cone_from_rays([(1, 0, 0), (1, 1, 0), (0, 1, 1), (0, 0, 1)])
    edge = cone_from_rays([(1, 0, 0), (1, 1, 0)])
    u = face_witness(edge, quad)
    assert u is not None and is_face(edge, quad)
    assert tuple(u) == (0, 0, 1)
    diagonal = cone_from_rays([(1, 0, 0), (0, 1, 1)])
    assert face_witness(diagonal, quad) is None
    assert not is_face(diagonal, quad)


def test_fan_validation_examples():
    C0 = cone_from_rays([(-1, 0), (0, -1)])
    good = Fan.from_cones([C0])
    assert len(good.cones) == 4 and validate_fan(good).valid
    bad = Fan.from_cones([cone_from_rays([(1, 0), (0, 1)]), cone_from_rays([(1, 1), (1, -1)])])
    rep = validate_fan(bad)
    assert not rep.valid and any(v.kind == "intersection" for v in rep.violations)
    empty = Fan.from_cones([], 2)
    assert validate_fan(empty).valid and support(empty) == []


def test_fan_face_closure_violation():
    C0 = cone_from_rays([(-1, 0), (0, -1)])
    unclosed = Fan.from_cones([C0], close=False)
    rep = validate_fan(unclosed)
    assert not rep.valid and {v.kind for v in rep.violations} == {"face-closure"}


def test_localize_fan_examples():
    F = Fan.from_cones([cone_from_rays([(-1, 0), (0, -1)])])
    top = localize_fan(F, (1, 1))
    assert top.c_lambda == cone_from_rays([(-1, 0), (0, -1)])
    assert top.fan.ambient_dim == 0 and len(top.fan.cones) == 1
    half = localize_fan(F, (1, 0))
    assert half.c_lambda == cone_from_rays([(-1, 0)])
    assert half.fan.ambient_dim == 1
    assert {C.rays for C in half.fan.cones} == {(), ((-1,),)}
    zero = localize_fan(F, (0, 0))
    assert zero.v_lambda == () and zero.fan == F
    with pytest.raises(ConeError):
        localize_fan(F, (-1, 0))


def test_localize_fan_output_is_valid_fan():
    F = Fan.from_cones([cone_from_rays([(-1, 0, 0), (0, -1, 0), (0, 0, -1)]),
                        cone_from_rays([(-1, 0, 0), (0, -1, 0), (0, 0, 1)])])
    assert validate_fan(F).valid
    for lam in [(1, 0, 0), (1, 1, 0), (0, 1, 0), (1, 1, 1), (0, 0, 0)]:
        res = localize_fan(F, lam)
        assert validate_fan(res.fan).valid and res.fan.is_pointed
        # support is the image of the members containing C(lambda)
        for C in F.cones:
            if C.contains_cone(res.c_lambda):
                for r in C.rays:
                    img = res.project(r)
                    assert any(D.contains(img) for D in res.fan.cones)


small = st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=5)


@given(small)
@settings(max_examples=80, deadline=None)
def test_double_description_round_trip(rays):
    C = cone_from_rays(rays, 3)
    again = cone_from_inequalities(C.facets, 3, C.equations)
    assert again == C
    assert dual_cone(dual_cone(C)) == C
    for r in rays:
        assert C.contains(r)


def test_extremal_rays_against_oracle_small():
    rng = random.Random(11)
    checked = 0
    while checked < 30:
        d = rng.randint(2, 3)
        gens = [tuple(rng.randint(-2, 2) for _ in range(d)) for _ in range(rng.randint(1, 5))]
        C = cone_from_rays(gens, d)
        if not C.is_pointed:
            continue
        assert set(extremal_rays(C)) == brute_extremal_rays(gens)
        for r in extremal_rays(C):
            assert in_cone(r, gens)
        checked += 1
