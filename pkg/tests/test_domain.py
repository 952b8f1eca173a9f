import time
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from mumford import (
    Ball,
    GoodPosition,
    Inconclusive,
    Mat2,
    NonHyperbolic,
    Relation,
    apply,
    check_good_domain,
    good_position,
    is_hyperbolic,
    period_matrix,
    reduce_point,
)
from mumford.proj import word_matrix

from conftest import EX1, EX2, EX3, from_fixed_points, mats

P = 3


def balls(centers, p=P):
    # centers of B_1..B_g, B'_1..B'_g, all of radius p^-2
    return [Ball(c, 2, p) for c in centers]


def abelianize(w, g):
    v = [0] * g
    for h in w:
        v[abs(h) - 1] += 1 if h > 0 else -1
    return v


def matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def transpose(A):
    return [list(r) for r in zip(*A)]


@pytest.mark.parametrize(
    "gens, centers",
    [(EX1, [4, 5, 1, 2]), (EX2, [2, 5, 1, 4]), (EX3, [1, 2, 4, 3, 6, 5])],
    ids=["genus2-a", "genus2-b", "genus3"],
)
def test_known_domains_are_good(gens, centers):
    ok, why = check_good_domain(mats(gens), balls(centers))
    assert ok, why


def test_swapped_balls_are_rejected():
    ok, why = check_good_domain(mats(EX1), balls([1, 5, 4, 2]))
    assert not ok and "generator 1" in why


def test_overlapping_balls_are_rejected():
    ok, why = check_good_domain(mats(EX1), [Ball(4, 1, P), Ball(5, 2, P), Ball(1, 2, P), Ball(2, 2, P)])
    assert not ok


@pytest.mark.parametrize("gens, centers", [(EX1, [4, 5, 1, 2]), (EX2, [2, 5, 1, 4]), (EX3, [1, 2, 4, 3, 6, 5])])
def test_search_reproduces_known_domain(gens, centers):
    v = good_position(mats(gens), P)
    assert isinstance(v, GoodPosition)
    F = v.domain
    assert v.m <= 3 and F.c == 2
    assert [tuple(w) for w in F.words] == [(i + 1,) for i in range(len(gens))]
    assert F.balls == balls(centers)
    assert F.infinity_interior()


def test_generator_product_still_certifies():
    g1, g2 = mats(EX1)
    v = good_position([g1, g1 * g2], P)
    assert isinstance(v, GoodPosition)
    assert [tuple(w) for w in v.domain.words] == [(1,), (-2, 1)]


def test_relation_is_reported():
    g1, _ = mats(EX1)
    v = good_position([g1, g1 * g1], P)
    assert isinstance(v, Relation)
    M = word_matrix([g1, g1 * g1], v.word)
    assert M.is_scalar()


def test_involution_is_reported_with_witness():
    s0 = Mat2.from_rows([[-1, 0], [Fraction(-2, 9), 1]])
    g1, _ = mats(EX1)
    v = good_position([g1, s0], P)
    assert isinstance(v, NonHyperbolic)
    assert tuple(v.word) == (2,)
    assert not is_hyperbolic(v.matrix, P)


def test_adversarial_generators_are_inconclusive_quickly():
    g1, g2 = mats(EX1)
    t0 = time.time()
    with pytest.raises(Inconclusive) as err:
        good_position([g1, (g1**100) * g2], P, max_m=12)
    assert err.value.m_tried <= 12
    assert time.time() - t0 < 60


def test_reduce_point_lands_in_domain():
    F = good_position(mats(EX1), P).domain
    for z in [Fraction(4 + 9 * 5), Fraction(1, 7), Fraction(2 + 3**6), Fraction(-17)]:
        q, w = reduce_point(F, z)
        assert apply(word_matrix(F.gens, w), z) == q
        assert not any(b.contains(q) for b in F.balls)


# -- properties -------------------------------------------------------------


@st.composite
def schottky_pairs(draw):
    p = draw(st.sampled_from([3, 5]))
    rs = draw(st.permutations(range(p)))[:2]
    k = draw(st.integers(2, 4))
    gens = []
    for r in rs:
        u, v = draw(st.permutations(range(p)))[:2]
        a = r + p * u + p * p * draw(st.integers(0, 4))
        b = r + p * v + p * p * draw(st.integers(0, 4))
        gens.append(from_fixed_points(a, b, p**k))
    return p, gens


@settings(max_examples=30, deadline=None)
@given(schottky_pairs())
def test_random_schottky_groups_certify(case):
    p, gens = case
    v = good_position(gens, p, max_m=6)
    assert isinstance(v, GoodPosition)
    ok, why = check_good_domain(v.domain.gens, v.domain.balls)
    assert ok, why


@settings(max_examples=30, deadline=None)
@given(schottky_pairs(), st.integers(-5, 5), st.integers(1, 5), st.integers(-5, 5))
def test_conjugation_keeps_the_verdict(case, a, b, d):
    p, gens = case
    h = Mat2(a, b, 1, d)
    if h.det() == 0:
        return
    conj = [(h * x * h.inverse()).primitive() for x in gens]
    v1 = good_position(gens, p, max_m=6)
    v2 = good_position(conj, p, max_m=6)
    assert isinstance(v2, GoodPosition)
    assert v1.domain.c == v2.domain.c


@settings(max_examples=8, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.lists(st.tuples(st.integers(0, 1), st.sampled_from([1, -1])), min_size=1, max_size=2))
def test_nielsen_moves_keep_val_q_up_to_basis_change(moves):
    gens = mats(EX1)
    C = [[1, 0], [0, 1]]  # current generators in terms of the originals
    for i, e in moves:
        j = 1 - i
        gens[i] = gens[i] * (gens[j] if e > 0 else gens[j].inverse())
        C[i] = [C[i][k] + e * C[j][k] for k in range(2)]
    v = good_position(gens, P)
    assert isinstance(v, GoodPosition)
    F = v.domain
    A = matmul([abelianize(w, 2) for w in F.words], C)
    Q = period_matrix(F.gens, F, 3)
    base = [[2, 0], [0, 2]]
    assert Q.valuations() == matmul(matmul(A, base), transpose(A))
