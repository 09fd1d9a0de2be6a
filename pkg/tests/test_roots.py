from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from spherica.roots import (RootDatumError, adapted_coweight, build_root_datum, coroot_restriction,
                            from_cartan)


@pytest.mark.parametrize("type_name, matrix", [
    ("A2", ((2, -1), (-1, 2))),
    ("A1xA1", ((2, 0), (0, 2))),
    ("A3", ((2, -1, 0), (-1, 2, -1), (0, -1, 2))),
])
def test_builtin_cartan_matrices(type_name, matrix):
    assert build_root_datum(type_name).cartan_matrix() == matrix


def test_pairing_reproduces_cartan():
    for type_name in ("A2", "A3", "B2", "G2", "A1xA2"):
        rd = build_root_datum(type_name)
        C = rd.cartan_matrix()
        for i in range(rd.n):
            for j in range(rd.n):
                assert rd.pairing(rd.simple_roots[i], j) == C[i][j]


def test_pairing_examples():
    rd = build_root_datum("A2")
    assert rd.pairing(rd.root_vector((1, 0)), 0) == 2
    assert rd.pairing(rd.root_vector((0, 1)), 0) == -1
    rd2 = build_root_datum("A1xA1")
    for q in (1, 2, 9, 125):
        assert rd2.pairing(rd2.root_vector((1, q)), 0) == 2


def test_unknown_type_and_bad_matrix():
    with pytest.raises(RootDatumError):
        build_root_datum("Z7")
    with pytest.raises(RootDatumError):
        from_cartan([[2, -2], [-2, 2]])  # affine A1


def test_coroot_restriction_examples():
    rd = build_root_datum("A2")
    assert coroot_restriction(rd, 0, [rd.root_vector((1, 0)), rd.root_vector((0, 1))]) == (2, -1)
    assert coroot_restriction(rd, 0, [rd.root_vector((1, 1))]) == (1,)
    rd2 = build_root_datum("A1xA1")
    assert coroot_restriction(rd2, 0, [rd2.root_vector((1, 3))]) == (2,)
    with pytest.raises(RootDatumError):
        coroot_restriction(rd, 0, [rd.root_vector((1, 0)), rd.root_vector((2, 0))])


def test_adapted_coweight_examples():
    rd = build_root_datum("A2")
    a1, a2 = rd.root_vector((1, 0)), rd.root_vector((0, 1))

    def ev(lam, x):
        return sum(Fraction(u) * v for u, v in zip(lam, x))

    lam = adapted_coweight(rd, ["a1"])
    assert (ev(lam, a1), ev(lam, a2)) == (0, 1)
    assert all(v == 0 for v in adapted_coweight(rd, ["a1", "a2"]))
    lam = adapted_coweight(rd, [])
    assert (ev(lam, a1), ev(lam, a2)) == (1, 1)


coeffs = st.lists(st.integers(0, 4), min_size=3, max_size=3)


@given(coeffs, st.sets(st.sampled_from(["a1", "a2", "a3"])))
def test_adapted_coweight_vanishes_exactly_on_support(c, s_prime):
    rd = build_root_datum("A3")
    lam = adapted_coweight(rd, s_prime)
    x = rd.root_vector(c)
    value = sum(Fraction(u) * v for u, v in zip(lam, x))
    support = {f"a{i + 1}" for i, v in enumerate(c) if v}
    assert (value == 0) == support.issubset(s_prime)


@given(st.lists(st.integers(-5, 5), min_size=2, max_size=2), st.lists(st.integers(-5, 5), min_size=2, max_size=2),
       st.integers(-3, 3))
def test_pairing_is_linear(x, y, k):
    rd = build_root_datum("B2")
    for i in range(2):
        combo = [k * a + b for a, b in zip(x, y)]
        assert rd.pairing(combo, i) == k * rd.pairing(x, i) + rd.pairing(y, i)


def test_product_labels_and_root_parsing():
    rd = build_root_datum("A1xA2")
    assert rd.labels[0].startswith("g1.") and rd.labels[1].startswith("g2.")
    assert rd.parse_root(rd.format_root((1, 2, 0))) == (1, 2, 0)
