import functools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fhlie.liering import LieRing
from fhlie.pgroup import bch
from fhlie.pgroup.example1 import example1_group as _example1_group
from oracles import BCH_LYNDON, bch_matrix, example1_group_law


@functools.lru_cache(maxsize=None)
def example1_group(n):
    return _example1_group(n)


def rational_matrix(rows):
    return np.array([[Fraction(x) for x in r] for r in rows], dtype=object)


def strictly_upper(rng, size, lo=-3, hi=3):
    return [[rng.randint(lo, hi) if j > i else 0 for j in range(size)] for i in range(size)]


# -- coefficients


def test_low_weight_coefficients():
    c = bch.bch_coefficients(4)
    for word, val in BCH_LYNDON.items():
        assert c.coefficient(word) == val
    assert c.coefficient((0,)) == c.coefficient((1,)) == 1


def test_denominator_valuations():
    c = bch.bch_coefficients(6)
    assert c.denominator_valuation(2, 2) == 1
    assert c.denominator_valuation(3, 3) == 1


def test_bad_weight():
    with pytest.raises(ValueError):
        bch.bch_coefficients(0)


@pytest.mark.parametrize("seed", range(6))
def test_series_against_matrix_logarithm(seed):
    import random

    rng = random.Random(seed)
    size = 5
    X, Y = strictly_upper(rng, size), strictly_upper(rng, size)
    expect = bch_matrix([[Fraction(v) for v in r] for r in X], [[Fraction(v) for v in r] for r in Y])
    got = bch.bch_rational(rational_matrix(X), rational_matrix(Y), lambda a, b: a.dot(b) - b.dot(a), size - 1)
    assert [[got[i, j] for j in range(size)] for i in range(size)] == expect


# -- the group on Example 1's carrier


def test_n2_associative_exhaustively():
    T = example1_group(2).T
    codes = np.arange(T.order)
    a, b, c = (x.ravel() for x in np.meshgrid(codes, codes, codes, indexing="ij"))
    assert (T.mul(T.mul(a, b), c) == T.mul(a, T.mul(b, c))).all()


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_associative_on_random_triples(n):
    T = example1_group(n).T
    rng = np.random.default_rng(n)
    a, b, c = (rng.integers(0, T.order, 10**4) for _ in range(3))
    assert (T.mul(T.mul(a, b), c) == T.mul(a, T.mul(b, c))).all()


@pytest.mark.parametrize("n", range(2, 8))
def test_truncation_certificate(n):
    T = example1_group(n).T
    assert T.certificate
    assert not T.kappa[T.w_t + 1]
    assert T.w_t <= bch.tail_horizon(2, n)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_inverse_and_identity(n):
    T = example1_group(n).T
    codes = np.arange(min(T.order, 4096))
    assert (T.mul(codes, T.inv(codes)) == 0).all()
    assert (T.mul(codes, 0) == codes).all()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_agrees_with_independent_law(n):
    T = example1_group(n).T
    law = example1_group_law(n)
    rng = np.random.default_rng(100 + n)
    A = rng.integers(0, 2**n, (3000, 3))
    B = rng.integers(0, 2**n, (3000, 3))
    assert (T.multiply_vectors(A, B) == law(A, B)).all()


def test_n2_law_is_not_plain_addition():
    # 4[x,y]' vanishes mod 4 but 2[x,y]' does not
    T = example1_group(2).T
    x, y = np.array([1, 0, 0]), np.array([0, 1, 0])
    assert tuple(T.multiply_vectors(x, y)) == (1, 1, 2)


# -- other carriers


def heis_reduced(p, a):
    return LieRing.from_brackets(3, p**a, {(0, 1): (0, 0, 1)})


@pytest.mark.parametrize("p,a", [(3, 2), (3, 3), (5, 2), (2, 3)])
def test_heisenberg_carrier(p, a):
    G = bch.BchGroup(heis_reduced(p, a))
    rng = np.random.default_rng(p * a)
    x, y, z = (rng.integers(0, G.order, 5000) for _ in range(3))
    assert (G.mul(G.mul(x, y), z) == G.mul(x, G.mul(y, z))).all()
    # class two: x*y = x + y + [x,y]/2 on the carrier
    u, v = np.array([1, 0, 0]), np.array([0, 1, 0])
    scale = p ** (2 if p == 2 else 1)
    from fhlie.exactalg import fraction_mod

    assert tuple(G.multiply_vectors(u, v)) == (1, 1, fraction_mod(Fraction(scale, 2), p**a))


def test_abelian_carrier_is_vector_addition():
    G = bch.BchGroup(LieRing.abelian(2, 27))
    assert int(G.mul(G.element([5, 7]), G.element([25, 3]))) == G.element([3, 10])


def test_from_carrier_requires_divisibility():
    with pytest.raises(bch.BchError):
        bch.BchGroup.from_carrier(heis_reduced(3, 2))
    carrier = LieRing.from_brackets(3, 9, {(0, 1): (0, 0, 3)})
    G = bch.BchGroup.from_carrier(carrier)
    assert G.carrier.consts == carrier.consts


def test_invalid_reduced_ring_rejected():
    L = LieRing.from_brackets(3, 3, {(0, 1): (0, 1, 0), (0, 2): (0, 0, 1), (1, 2): (1, 0, 0)})
    with pytest.raises(bch.BchError):
        bch.BchGroup(L)


@given(st.integers(0, 10**6))
def test_linear_automorphisms_of_example1(seed):
    ex = example1_group(3)
    rng = np.random.default_rng(seed)
    sample = rng.integers(0, ex.T.order, 30)
    for M in ex.f + [ex.h]:
        assert ex.T.is_automorphism(M, sample)
