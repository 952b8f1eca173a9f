from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from mumford.padic import Padic, valuation
from mumford.proj import (
    INF,
    Mat2,
    apply,
    count_words,
    eigen_data,
    enumerate_words,
    invert_word,
    is_hyperbolic,
    orbit,
    parse_point,
    point_to_str,
    reduce_word,
    word_matrix,
)

from conftest import EX1, mats

small = st.integers(-30, 30)
matrices = st.builds(lambda a, b, c, d: Mat2(a, b, c, d), small, small, small, small).filter(
    lambda m: m.det() != 0
)
points = st.one_of(st.just(INF), st.fractions(max_denominator=50))


def test_example_generators_are_hyperbolic_with_known_fixed_points():
    g1, g2 = mats(EX1)
    lam1, lam2, f1, f2 = eigen_data(g1, 3)
    assert {lam1, lam2} == {27, 3}
    assert {f1, f2} == {1, 4}
    # iterating pushes points towards the attracting fixed point
    z = Fraction(7)
    for _ in range(6):
        z = apply(g1, z)
    assert valuation(z - f1, 3) > valuation(z - f2, 3)
    assert {eigen_data(g2, 3)[2], eigen_data(g2, 3)[3]} == {2, 5}


def test_involution_is_not_hyperbolic():
    s0 = Mat2.from_rows([[-1, 0], [Fraction(-2, 9), 1]])
    assert not is_hyperbolic(s0, 3)
    with pytest.raises(ValueError):
        eigen_data(s0, 3)


def test_padic_eigenvalues_when_discriminant_is_not_square():
    m = Mat2(1, 3, 3, 18)
    lam1, lam2, f1, f2 = eigen_data(m, 3, N=20)
    assert isinstance(lam1, Padic)
    assert (lam1 + lam2 - 19).is_zero() and (lam1 * lam2 - 9).is_zero()


def test_apply_at_infinity_and_poles():
    m = Mat2(1, 2, 3, 4)
    assert apply(m, INF) == Fraction(1, 3)
    assert apply(m, Fraction(-4, 3)) is INF
    assert apply(Mat2(1, 1, 0, 1), INF) is INF


def test_word_counts():
    assert count_words(2, 5) == 485
    assert count_words(3, 5) == 4687
    assert sum(1 for _ in enumerate_words(2, 5)) == 485


def test_orbit_visits_each_reduced_word_once():
    g = mats(EX1)
    maps = {1: g[0], -1: g[0].adjugate(), 2: g[1], -2: g[1].adjugate()}
    seen = {}
    for w, (x,) in orbit(maps, 4, (Fraction(10),)):
        assert reduce_word(w) == w
        seen[w] = x
    assert len(seen) == count_words(2, 4)
    for w in [(1, 2), (-2, -1, 2), (2, 2, -1, 2)]:
        assert seen[w] == apply(word_matrix(g, w), Fraction(10))


def test_involution_orbit_uses_alternating_words():
    s = [Mat2.from_rows([[-1, 0], [Fraction(-2, 9), 1]]), Mat2.from_rows([[-11, 20], [-2, 11]])]
    maps = {1: s[0], 2: s[1]}
    words = [w for w, _ in orbit(maps, 3, (Fraction(5),), inverse=lambda h: h)]
    assert words == [(), (1,), (2, 1), (1, 2, 1), (2,), (1, 2), (2, 1, 2)]


def test_parse_point():
    assert parse_point("inf") is INF and parse_point("∞") is INF
    assert parse_point("81/4") == Fraction(81, 4)
    assert point_to_str(INF) == "inf" and point_to_str(Fraction(9, 20)) == "9/20"


@given(matrices, matrices, points)
def test_action_is_a_group_action(m1, m2, z):
    assert apply(m1 * m2, z) == apply(m1, apply(m2, z))


@given(matrices, points)
def test_inverse_undoes(m, z):
    assert apply(m.inverse(), apply(m, z)) == z


@given(matrices, st.integers(1, 10**6))
def test_projective_invariance(m, k):
    scaled = Mat2(m.a * k, m.b * k, m.c * k, m.d * k)
    assert scaled.projectively_equal(m)
    assert scaled.primitive() == m.primitive()


@given(matrices, st.sampled_from([2, 3, 5]))
def test_hyperbolic_matrices_have_two_distinct_fixed_points(m, p):
    assume(is_hyperbolic(m, p))
    lam1, lam2, f1, f2 = eigen_data(m, p, N=20)
    if isinstance(f1, Padic) or isinstance(f2, Padic):
        return
    assert f1 != f2
    assert apply(m, f1) == f1 and apply(m, f2) == f2


@given(st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=12))
def test_word_reduction(w):
    r = reduce_word(w)
    assert all(r[k] != -r[k + 1] for k in range(len(r) - 1))
    assert reduce_word(r + invert_word(r)) == ()
    assert reduce_word(list(w) + list(invert_word(tuple(w)))) == ()
