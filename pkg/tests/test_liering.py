import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fhlie import exactalg as ea
from fhlie.labcli.dashboards import graded_ring_from_blocks
from fhlie.liering import (
    LieMap,
    LieRing,
    LieRingError,
    extend_by_omega,
    format_lie_ring,
    parse_lie_ring,
    phi_components,
    zero_sums_are_torsion,
)
from fhlie.pgroup.example1 import example1_f, example1_h, example1_ring
from oracles import example1_bracket, span_elements


def e(i, d=3):
    return tuple(int(j == i) for j in range(d))


def brute_closure(gens, bracket, d, m, ideal):
    """Fixpoint of element-wise bracketing on explicit element sets."""
    cur = span_elements(gens, d, m)
    everything = list(itertools.product(range(m), repeat=d))
    while True:
        others = everything if ideal else cur
        new = {tuple(x % m for x in bracket(u, v)) for u in cur for v in others}
        nxt = span_elements(list(cur | new), d, m)
        if nxt == cur:
            return cur
        cur = nxt


# -- Example 1 ring


@pytest.mark.parametrize("n", [3, 4, 5])
def test_example1_brackets(n):
    L = example1_ring(n)
    assert L.bracket(e(0), e(1)) == (0, 0, 4)
    assert L.bracket(e(1), e(2)) == (4, 0, 0)
    assert L.bracket(e(2), e(0)) == (0, 4, 0)
    assert L.validate()


def test_bracket_alternating_and_dimension_check():
    L = example1_ring(4)
    rng = random.Random(0)
    for _ in range(50):
        x = [rng.randrange(16) for _ in range(3)]
        assert L.bracket(x, x) == (0, 0, 0)
    with pytest.raises(LieRingError):
        L.bracket((1, 0), (0, 1, 0))


def test_bracket_matches_independent_cross_product():
    L = example1_ring(5)
    rng = random.Random(1)
    for _ in range(100):
        x = [rng.randrange(32) for _ in range(3)]
        y = [rng.randrange(32) for _ in range(3)]
        assert L.bracket(x, y) == tuple(c % 32 for c in example1_bracket(x, y))


# -- validation


def test_abelian_ring_is_valid():
    assert LieRing.abelian(4, 9).validate().ok


def test_tampered_skew_reported():
    L = example1_ring(3)
    C = L.consts
    C[0][1] = [0, 0, 3]  # [e1,e2] no longer -[e2,e1]
    v = LieRing(8, C).validate()
    assert not v.ok and v.violation.kind == "skew" and v.violation.indices == (0, 1)


def test_tampered_alternating_reported():
    C = LieRing.abelian(2, 4).consts
    C[1][1] = [1, 0]
    v = LieRing(4, C).validate()
    assert v.violation.kind == "alternating" and v.violation.indices == (1,)


def test_jacobi_violation_reported():
    # [e1,e2]=e2, [e1,e3]=e3, [e2,e3]=e1 fails Jacobi over Z/3
    L = LieRing.from_brackets(3, 3, {(0, 1): (0, 1, 0), (0, 2): (0, 0, 1), (1, 2): (1, 0, 0)})
    v = L.validate()
    assert not v.ok and v.violation.kind == "jacobi"


def test_text_roundtrip():
    L = example1_ring(4)
    L2 = parse_lie_ring(format_lie_ring(L))
    assert L2.modulus == 16 and L2.consts == L.consts
    with pytest.raises(LieRingError):
        parse_lie_ring("2 3 2\n2 1 0 0\n")
    with pytest.raises(LieRingError):
        parse_lie_ring("")


# -- closures and series


def test_ideal_of_whole_ring():
    L = example1_ring(3)
    assert L.closure(L.full(), "ideal") == L.full()


def test_ideal_of_e1_mod8():
    L = example1_ring(3)
    I = L.ideal([e(0)])
    assert I == L.span([e(0), (0, 4, 0), (0, 0, 4)])
    assert set(I.elements()) == brute_closure([e(0)], example1_bracket, 3, 8, ideal=True)


def test_subring_of_multiple_is_a_line():
    L = example1_ring(4)
    rng = random.Random(3)
    for _ in range(10):
        x = [2 * rng.randrange(8) for _ in range(3)]
        assert L.subring([x]) == L.span([x])


def test_closure_rejects_unknown_mode():
    L = example1_ring(3)
    with pytest.raises(ValueError):
        L.closure(L.full(), "left")


@pytest.mark.parametrize("n", range(2, 8))
def test_example1_lower_central_series(n):
    L = example1_ring(n)
    s = L.lower_central_series()
    assert s.length == -(-n // 2)
    for i, term in enumerate(s.terms):
        assert term == L.full().scale(4**i)


def test_abelian_class_one():
    assert LieRing.abelian(2, 8).nilpotency_class() == 1


def test_example1_derived_length_mod8():
    assert example1_ring(3).derived_length() == 2


def test_series_stall_reported():
    # sl2 over Z/3 is perfect, so neither series reaches zero
    L = LieRing.from_brackets(3, 3, {(0, 1): (0, 0, 1), (0, 2): (1, 0, 0), (1, 2): (0, 2, 0)})
    assert L.validate()
    s = L.lower_central_series()
    assert s.length is None and not s.stabilized_at_zero
    assert L.derived_length() is None


# -- fixed subrings


@pytest.mark.parametrize("n", range(2, 7))
def test_fixed_subring_f1(n):
    L = example1_ring(n)
    m = 2**n
    C = L.fixed_subring(LieMap(example1_f()[0], m))
    half = m // 2
    assert C == L.span([e(0), (0, half, 0), (0, 0, half)])
    assert C.order == 2 ** (n + 2)
    F = C
    for f in example1_f()[1:]:
        F = F.intersect(L.fixed_subring(LieMap(f, m)))
    assert F.order == 8


@pytest.mark.parametrize("n", range(2, 6))
def test_fixed_subring_h(n):
    L = example1_ring(n)
    C = L.fixed_subring(LieMap(example1_h(), 2**n))
    assert C == L.span([(1, 1, 1)])
    assert L.abelian_type(C).invariant_factors == (2**n,)


def test_fixed_subring_identity_and_non_automorphism():
    L = example1_ring(3)
    assert L.fixed_subring(LieMap(ea.identity(3), 8)) == L.full()
    with pytest.raises(LieRingError):
        L.fixed_subring(LieMap([[2, 0, 0], [0, 1, 0], [0, 0, 1]], 8))


# -- omega extension and components


def test_z4_times_three():
    L = LieRing.abelian(1, 4)
    ext = extend_by_omega(L, [[3]], 1)
    assert ext.E == 1 and ext.ring.d == 1
    pc = phi_components(ext)
    assert set(pc[0].elements()) == {(0,), (2,)}
    assert pc[1] == L.full()
    assert pc.ok


def test_identity_k0_single_component():
    L = example1_ring(3)
    pc = phi_components(extend_by_omega(L, ea.identity(3), 0))
    assert pc.n == 1 and pc[0] == L.full() and pc.ok


def test_order_checked():
    L = LieRing.abelian(2, 9)
    with pytest.raises(LieRingError):
        extend_by_omega(L, ea.identity(2), 1)
    with pytest.raises(LieRingError):
        extend_by_omega(L, [[0, 1], [1, 0]], 1)  # order 2, not 3


def test_example1_components_of_f1_n2():
    L = example1_ring(2)
    f1 = example1_f()[0]
    pc = phi_components(extend_by_omega(L, f1, 1))
    assert pc.ok
    assert set(pc[0].elements()) == {v for v in itertools.product(range(4), repeat=3)
                                     if all((a - b) % 4 == 0 for a, b in zip(ea.mat_vec(f1, v, 4), v))}
    assert set(pc[1].elements()) == {v for v in itertools.product(range(4), repeat=3)
                                     if all((a + b) % 4 == 0 for a, b in zip(ea.mat_vec(f1, v, 4), v))}


def test_zero_sums_bruteforce_on_small_ring():
    rng = random.Random(4)
    L, phi = graded_ring_from_blocks(rng, 3, 2, 3, 1)
    pc = phi_components(extend_by_omega(L, phi, 1))
    W = extend_by_omega(L, phi, 1).ring
    m = W.modulus
    comps = [list(c.elements()) for c in pc.components]
    for ws in itertools.product(*[c[:12] for c in comps]):
        total = tuple(sum(x) % m for x in zip(*ws))
        if total == (0,) * W.d:
            assert all(all(3 * x % m == 0 for x in w) for w in ws)
    assert zero_sums_are_torsion(pc, W.relations)


@st.composite
def graded_instance(draw):
    p = draw(st.sampled_from([2, 3, 5]))
    a = draw(st.integers(1, 4 if p < 5 else 2))
    k = draw(st.integers(1, 2 if p == 2 else 1))
    d = draw(st.integers(max(2, ea.euler_phi(p**k)), 6))
    seed = draw(st.integers(0, 10**6))
    L, phi = graded_ring_from_blocks(random.Random(seed), p, a, d, k)
    return L, phi, p, k


def _order_exponent(phi, m, p, k):
    M = LieMap(phi, m)
    for j in range(k + 1):
        if M.has_order(p**j):
            return j
    raise AssertionError("phi has no p-power order")


@given(graded_instance())
def test_graded_rings_component_laws(inst):
    L, phi, p, k = inst
    assert L.validate()
    k = _order_exponent(phi, L.modulus, p, k)
    ext = extend_by_omega(L, phi, k)
    pc = phi_components(ext)
    assert pc.ok, pc.checks
    W = ext.ring
    assert W.order() == L.order() ** ext.E
    CV = L.fixed_subring(LieMap(phi, L.modulus))
    assert W.order(ext.fixed_points(ext.phi_ext.matrix)) == L.order(CV) ** ext.E


@given(graded_instance())
def test_series_agree_with_naive_recomputation(inst):
    L = inst[0]
    for kind, series in (("lcs", L.lower_central_series()), ("der", L.derived_series())):
        for prev, nxt in zip(series.terms, series.terms[1:]):
            other = L.full() if kind == "lcs" else prev
            assert nxt == L.span([L.bracket(u, v) for u in prev.rows for v in other.rows])
        if series.length is not None:
            assert series.terms[-1] == L.zero()


@given(graded_instance(), st.integers(0, 10**6))
def test_bilinear_and_change_of_basis(inst, seed):
    L = inst[0]
    m, d = L.modulus, L.d
    rng = random.Random(seed)
    x, y, z = ([rng.randrange(m) for _ in range(d)] for _ in range(3))
    c = rng.randrange(m)
    lhs = L.bracket([(a + c * b) % m for a, b in zip(x, y)], z)
    rhs = tuple((a + c * b) % m for a, b in zip(L.bracket(x, z), L.bracket(y, z)))
    assert lhs == rhs
    assert L.bracket(x, y) == tuple(-v % m for v in L.bracket(y, x))
    while True:
        B = [[rng.randrange(m) for _ in range(d)] for _ in range(d)]
        if ea.is_invertible_mod(B, m):
            break
    L2 = L.change_basis(B)
    assert L2.validate()
    assert L2.nilpotency_class() == L.nilpotency_class()
    assert L2.bracket(ea.mat_vec(B, x, m), ea.mat_vec(B, y, m)) == ea.mat_vec(B, L.bracket(x, y), m)
