import itertools
import math
import random

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from fhlie import exactalg as ea
from fhlie import frobenius as fb
from fhlie.labcli.dashboards import graded_ring_from_blocks, suite_groups
from fhlie.liering import LieRing
from fhlie.pgroup import groups as gr
from fhlie.pgroup.example1 import example1_group
from oracles import charpoly_bruteforce

# -- FH data


def test_validate_fh_examples():
    assert fb.validate_fh(fb.FHSpec(5, 1, 2, 4))
    assert fb.validate_fh(fb.FHSpec(7, 1, 3, 2))
    bad = fb.validate_fh(fb.FHSpec(2, 2, 2, 3))
    assert not bad and any("not Frobenius" in v for v in bad.violations)


@pytest.mark.parametrize("spec", [(6, 1, 2, 5), (5, 0, 2, 1), (5, 1, 1, 1), (5, 1, 2, 5), (7, 1, 3, 3), (9, 1, 2, 8)])
def test_validate_fh_violations(spec):
    assert not fb.validate_fh(fb.FHSpec(*spec))


@pytest.mark.parametrize("p", [3, 5, 7, 11])
@pytest.mark.parametrize("k", [1, 2])
def test_valid_specs_are_frobenius(p, k):
    n = p**k
    for q in range(2, n):
        for r in range(2, n):
            spec = fb.FHSpec(p, k, q, r)
            if fb.validate_fh(spec):
                # every nontrivial power of h fixes only 0 in Z/n
                for j in range(1, q):
                    assert [x for x in range(n) if pow(r, j, n) * x % n == x] == [0]
                orbits = [spec.orbit(i) for i in spec.regular_orbit_representatives()]
                assert sorted(itertools.chain(*orbits)) == list(range(1, n))


def test_two_is_never_frobenius():
    for k in (1, 2, 3):
        n = 2**k
        for q in range(2, 6):
            for r in range(1, n):
                assert not fb.validate_fh(fb.FHSpec(2, k, q, r))


# -- free modules


def charpoly_sympy(h, p):
    return [int(c) % p for c in reversed(sympy.Matrix(h).charpoly().all_coeffs())]


def free_by_charpoly(h, p, q):
    d = len(h)
    if d % q:
        return False
    target = [0] * (d + 1)
    # (x^q - 1)^(d/q) expanded over Z then reduced mod p
    s = d // q
    for i in range(s + 1):
        target[i * q] = math.comb(s, i) * (-1) ** (s - i) % p
    return charpoly_sympy(h, p) == target


def regular_rep(q):
    return [[1 if r == (c + 1) % q else 0 for c in range(q)] for r in range(q)]


def conjugate(M, B, p):
    return ea.mat_mul(ea.mat_mul(B, M, p), ea.mat_inverse_mod(B, p), p)


def test_free_module_examples():
    for p, q in [(3, 2), (2, 3), (5, 4), (7, 6), (2, 5)]:
        assert fb.free_module_check(regular_rep(q), p, q)
    assert not fb.free_module_check([[1]], 3, 2)
    with pytest.raises(fb.HypothesisError):
        fb.free_module_check(regular_rep(3), 3, 3)
    with pytest.raises(fb.HypothesisError):
        fb.free_module_check([[2]], 5, 2)


H_CASES = [(p, q) for p in (2, 3, 5, 7) for q in range(2, 13) if q % p]


@settings(max_examples=150)
@given(st.sampled_from(H_CASES), st.integers(1, 12), st.integers(0, 10**9), st.booleans())
def test_free_module_check_against_oracles(case, d, seed, make_free):
    p, q = case
    rng = random.Random(seed)
    if make_free:
        if q > 12:
            return
        copies = max(1, d // q)
        h = ea.block_diag(*[regular_rep(q)] * copies)
        while True:
            B = [[rng.randrange(p) for _ in range(len(h))] for _ in range(len(h))]
            if ea.is_invertible_mod(B, p):
                break
        h = conjugate(h, B, p)
    else:
        h = fb.random_h_module(p, q, d, rng)
    assert ea.mat_pow(h, q, p) == ea.identity(len(h))
    if len(h) <= 6:
        assert charpoly_bruteforce(h, p) == fb.charpoly_mod_p(h, p)
    got = fb.free_module_check(h, p, q)
    assert got == fb.free_module_oracle(h, p, q) == free_by_charpoly(h, p, q)
    if make_free:
        assert got


def test_polynomial_invariant_factors_divide():
    rng = random.Random(5)
    for _ in range(20):
        p = rng.choice([2, 3, 5])
        d = rng.randint(1, 7)
        A = [[rng.randrange(p) for _ in range(d)] for _ in range(d)]
        inv = fb.polynomial_invariant_factors(A, p)
        prod = [1]
        for f in inv:
            prod = fb.poly_mul_p(prod, f, p)
        assert prod == fb.charpoly_mod_p(A, p)
        for f, g in zip(inv, inv[1:]):
            assert fb.poly_divmod_p(g, f, p)[1] in ([], [0])


FPF = [(3, (5, 1, 2, 4)), (3, (5, 1, 4, 2)), (7, (5, 1, 2, 4)), (5, (3, 1, 2, 2)), (5, (3, 2, 2, 8)),
       (3, (7, 1, 2, 6)), (2, (7, 1, 3, 2)), (11, (5, 1, 2, 4))]


@pytest.mark.parametrize("ell,spec", FPF)
@pytest.mark.parametrize("copies", [1, 2])
def test_fpf_sections_are_free(ell, spec, copies):
    spec = fb.FHSpec(*spec)
    phi, h = fb.fpf_section_module(ell, spec, copies, random.Random(ell * copies))
    d = len(phi)
    for j in range(1, spec.n):
        assert ea.kernel(ea.mat_add(ea.mat_pow(phi, j, ell), ea.mat_scale(ea.identity(d), -1), ell), ell).is_zero()
    hinv = ea.mat_inverse_mod(h, ell)
    assert ea.mat_mul(ea.mat_mul(hinv, phi, ell), h, ell) == ea.mat_pow(phi, spec.r, ell)
    assert fb.free_module_check(h, ell, spec.q)
    assert fb.free_module_oracle(h, ell, spec.q)
    assert free_by_charpoly(h, ell, spec.q)


def test_fpf_section_needs_other_prime():
    with pytest.raises(fb.HypothesisError):
        fb.fpf_section_module(5, fb.FHSpec(5, 1, 2, 4))


# -- modules and the section lemma


SECTION_SPECS = [((3, 1, 2, 2), (1, 2, 3)), ((5, 1, 2, 4), (1, 2)), ((3, 2, 2, 8), (1, 2)),
                 ((7, 1, 2, 6), (1,)), ((3, 1, 2, 2), (4,)), ((5, 1, 2, 4), (3,))]


def test_mismatched_prime_rejected():
    with pytest.raises(fb.HypothesisError):
        fb.FHModule(fb.abelian_module([9, 9]), ea.identity(2), [[0, 1], [1, 0]], fb.FHSpec(5, 1, 2, 4))


def test_module_problems_reported():
    V = fb.FHModule(fb.abelian_module([3, 3]), [[1, 1], [0, 1]], [[1, 0], [0, 1]], fb.FHSpec(3, 1, 2, 2))
    probs = V.problems()
    assert any("h does not have order" in s for s in probs)
    with pytest.raises(fb.HypothesisError):
        V.check()


def test_module_text_roundtrip():
    V = fb.induced_module(fb.FHSpec(3, 1, 2, 2), 2, ((0, 0, 1), (1, 0, 2)), ((0, -1),))
    W = fb.parse_module(fb.format_module(V))
    assert W.phi == V.phi and W.h == V.h and W.spec == V.spec
    with pytest.raises(ValueError):
        fb.parse_module("3 1 2 2\n")


@pytest.mark.parametrize("seed", range(5))
def test_module_text_roundtrip_scrambled(seed):
    # random coordinates make the relations non-diagonal; the writer re-diagonalizes
    V = fb.random_fh_module(fb.FHSpec(3, 1, 2, 2), 2, random.Random(seed))
    W = fb.parse_module(fb.format_module(V))
    assert not W.problems()
    assert W.ring.abelian_type() == V.ring.abelian_type()
    for a, b in ((W.phi, V.phi), (W.h, V.h)):
        assert W.ring.abelian_type(W.centralizer(a)) == V.ring.abelian_type(V.centralizer(b))
    assert fb.abelian_section_lemma(W).quotient_type == fb.abelian_section_lemma(V).quotient_type


def test_identity_phi_degenerate():
    V = fb.FHModule(fb.abelian_module([9, 9]), ea.identity(2), [[0, 1], [1, 0]], fb.FHSpec(3, 1, 2, 2))
    rep = fb.abelian_section_lemma(V)
    assert rep.ok, rep.checks
    assert rep.U_type == V.ring.abelian_type()
    assert rep.quotient_type.order == 1
    # with phi = 1 the nonzero components are n-torsion
    assert rep.theta.Y.scale(3).is_zero()


def test_free_permutation_module_mod_p():
    spec = fb.FHSpec(5, 1, 2, 4)
    V = fb.induced_module(spec, 1)
    assert fb.free_module_check(V.h, 5, 2)
    rep = fb.abelian_section_lemma(V)
    assert rep.ok
    assert rep.quotient_type.order <= rep.C_V_H.order**spec.q


def test_non_abelian_section_rejected():
    V = fb.FHModule(LieRing.from_brackets(3, 3, {(0, 1): (0, 0, 1)}), ea.identity(3), ea.identity(3),
                    fb.FHSpec(3, 1, 2, 2))
    with pytest.raises(fb.HypothesisError):
        fb.abelian_section_lemma(V)


def _section_instances():
    out = []
    for i, (spec, avals) in enumerate(SECTION_SPECS):
        for a in avals:
            for seed in range(6 if a < 3 else 3):
                out.append((spec, a, 1000 * i + 10 * a + seed))
    return out


SECTIONS = _section_instances()


def test_enough_section_instances():
    assert len(SECTIONS) >= 50


@pytest.mark.parametrize("spec,a,seed", SECTIONS)
def test_section_lemma_random(spec, a, seed):
    spec = fb.FHSpec(*spec)
    V = fb.random_fh_module(spec, a, random.Random(seed), max_dim=12)
    assert not V.problems()
    rep = fb.abelian_section_lemma(V)
    failed = [k for k, v in rep.checks.items() if not v]
    assert not failed
    th = rep.theta
    assert th.kernel.scale(spec.n) + th.ext.ring.relations == th.ext.ring.relations


# -- lemmas on fixed points


def test_lemma1_abelian_trivial_n():
    G = gr.abelian_group([4, 2])
    N = gr.trivial(G)
    inv = G.inv(np.arange(G.order))
    rep = fb.lemma_checks(G, N, inv)
    assert rep.C_G == rep.C_G_mod_N and rep.ok


def test_lemma1_example1_bruteforce():
    ex = example1_group(3)
    T = ex.T
    N = gr.omega(T, 1)  # 4L/8L
    f1 = ex.maps()[0][0]
    rep = fb.lemma_checks(T, N, f1)
    x = np.arange(T.order)
    img = f1(x)
    lhs_cosets = set()
    label = gr.cosets(T, N)
    for g in x:
        if N.mask[int(T.mul(T.inv(g), img[g]))]:
            lhs_cosets.add(int(label[g]))
    assert rep.C_G == int((img == x).sum())
    assert rep.C_G_mod_N == len(lhs_cosets)
    assert rep.C_G_mod_N <= rep.C_G


def test_lemma2_non_coprime_counterexample():
    G = gr.cyclic_group(4)
    N = gr.subgroup_closure(G, [2])
    inv = G.inv(np.arange(4))
    rep = fb.lemma_checks(G, N, inv)
    assert not rep.coprime and not rep.covering
    assert rep.ok  # the equality is only checked under coprimality


def test_lemma_invariance_required():
    G = gr.abelian_group([2, 2])
    swap = np.array([0, 2, 1, 3])
    N = gr.subgroup_closure(G, [1])
    if (N.mask[swap[N.elements()]]).all():
        pytest.skip("coding made N invariant")
    with pytest.raises(fb.HypothesisError):
        fb.lemma_checks(G, N, swap)


@pytest.mark.parametrize("name", ["C4", "C2xC2", "D8", "Q8", "C3xC3", "Heis3"])
def test_lemma_suite_exhaustive(name):
    G = suite_groups([name])[name]
    auts = gr.automorphisms(G)
    normals = [H for H in gr.all_subgroups(G)
               if all(H.mask[gr.conjugate(G, H.elements(), g)].all() for g in G.generators())]
    for img in auts:
        for N in normals:
            if not N.mask[img[N.elements()]].all():
                continue
            rep = fb.lemma_checks(G, N, img)
            assert rep.ok, (name, rep)


def test_rank_bound_examples():
    A = LieRing.abelian(2, 9)
    ok, rank, s, n = fb.rank_bound_check(A, [[1, 3], [0, 1]])
    assert ok and (rank, s, n) == (2, 3, 3)
    ok, rank, s, n = fb.rank_bound_check(A, [[0, 8], [1, 8]])
    assert ok and (rank, s, n) == (2, 1, 3)


@settings(max_examples=40)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 3), st.integers(2, 6), st.integers(0, 10**6))
def test_rank_bound_random(p, a, d, seed):
    rng = random.Random(seed)
    L, phi = graded_ring_from_blocks(rng, p, a, d, 1)
    A = LieRing.abelian(L.d, L.modulus)
    ok, rank, s, n = fb.rank_bound_check(A, phi)
    assert ok, (rank, s, n)
