"""Pipelines behind the CLI: each returns a :class:`Report`."""

from __future__ import annotations

import random
from typing import Callable, Sequence

import numpy as np

from .. import exactalg as ea
from .. import freelie as fl
from .. import frobenius as fb
from ..exactalg import Matrix, Span
from ..liering import LieRing, extend_by_omega, phi_components
from ..pgroup import example1 as e1
from ..pgroup import groups as gr
from .report import Report


# ---------------------------------------------------------------------------
# Lie rings


def lie_validate(L: LieRing) -> Report:
    rep = Report(f"Lie ring over Z/{L.modulus}, d={L.d}")
    v = L.validate()
    rep.check("alternating, skew, Jacobi and relation closure", v.ok, "" if v.ok else str(v.violation))
    return rep.finish()


def lie_series(L: LieRing) -> Report:
    rep = lie_validate(L)
    if rep.failures:
        return rep
    lcs, der = L.lower_central_series(), L.derived_series()
    t = rep.table("series", ["kind", "term", "order", "type"])
    for name, s in (("lower_central", lcs), ("derived", der)):
        for i, S in enumerate(s.terms):
            t.add(name, i + 1, L.order(S), str(L.abelian_type(S)))
    rep.note(f"nilpotency class: {L.nilpotency_class()}; derived length: {L.derived_length()}")
    return rep.finish()


def lie_components(L: LieRing, phi: Matrix, k: int, h: Matrix | None = None, r: int | None = None) -> Report:
    rep = Report(f"phi-components over Z/{L.modulus}, n={L.p ** k}")
    ext = extend_by_omega(L, phi, k, h, r)
    pc = phi_components(ext)
    W = ext.ring
    t = rep.table("components", ["j", "order", "type"])
    for j in range(ext.n):
        t.add(j, W.order(pc[j]), str(W.abelian_type(pc[j])))
    anchors = {
        "n*W in sum of components": "n W lies in the sum of the components",
        "zero sums are n-torsion": "zero sums of component elements are n-torsion",
        "bracket grading": "[W_s, W_t] <= W_(s+t)",
        "h permutes components": "W_j^h = W_(rj)",
    }
    for key, ok in pc.checks.items():
        rep.check(anchors.get(key, key), ok)
    CV = ea.preimage(ea.mat_add(phi, ea.mat_scale(ea.identity(L.d), -1), L.modulus), L.relations)
    rep.check("|W| = |V|^E(n)", W.order() == L.order() ** ext.E)
    rep.check("|C_W(phi)| = |C_V(phi)|^E(n)", W.order(ext.fixed_points(ext.phi_ext.matrix)) == L.order(CV) ** ext.E)
    return rep.finish()


def random_lie_instance(rng: random.Random, p: int, a: int, d: int, k: int = 1):
    """A Lie ring with an automorphism of order ``p^k``: a random
    ``phi``-graded ring assembled from cyclotomic blocks (see
    :func:`graded_ring_from_blocks`)."""
    return graded_ring_from_blocks(rng, p, a, d, k)


def graded_ring_from_blocks(rng: random.Random, p: int, a: int, d: int, k: int = 1):
    """``L = (Z/p^a)^d`` with ``phi`` block diagonal and a bracket that
    commutes with ``phi``.

    ``phi`` is a direct sum of powers of the companion matrix of
    ``Phi_{p^j}`` (order ``p^j``) and identity blocks.  The bracket is made
    ``phi``-equivariant by averaging a random alternating map over the cyclic
    group and then restricting to a Jacobi-satisfying nilpotent shape: the
    coordinates are split into a lower and upper half and only
    ``[lower, lower] -> upper`` is allowed, so every Jacobi term vanishes.
    """
    m = p**a
    n = p**k
    blocks = []
    size = 0
    while size < d:
        j = rng.randrange(k + 1)
        C = ea.cyclotomic_matrix(p, j, a) if j else [[1]]
        if size + len(C) > d:
            C = [[1]]
        u = rng.choice([x for x in range(1, n) if x % p])
        blocks.append(ea.mat_pow(C, u, m))
        size += len(C)
    if not any(len(B) > 1 or B != [[1]] for B in blocks):
        C = ea.cyclotomic_matrix(p, k, a)
        if len(C) <= d:
            blocks = [C] + [[[1]]] * (d - len(C))
    phi = ea.block_diag(*blocks)
    # split by blocks so that phi preserves both halves
    bounds, pos = [], 0
    for B in blocks:
        bounds.append((pos, pos + len(B)))
        pos += len(B)
    cut = rng.randrange(len(bounds) + 1)
    low = [i for s, e in bounds[:cut] for i in range(s, e)]
    high = [i for s, e in bounds[cut:] for i in range(s, e)]
    consts = [[[0] * d for _ in range(d)] for _ in range(d)]
    if low and high:
        # random phi-equivariant alternating map Lambda^2(low) -> high:
        # average B(x,y) over x -> phi^t x with the inverse twist on the output
        R = {(i, j): [rng.randrange(m) if t in high else 0 for t in range(d)] for i in low for j in low if i < j}
        Pinv = ea.mat_inverse_mod(phi, m)
        ord_phi = n

        def raw(x, y):
            out = [0] * d
            for (i, j), v in R.items():
                c = x[i] * y[j] - x[j] * y[i]
                if c:
                    out = [(o + c * vv) % m for o, vv in zip(out, v)]
            return out

        E = ea.identity(d)
        for i in low:
            for j in low:
                if i >= j:
                    continue
                acc = [0] * d
                for t in range(ord_phi):
                    Pt = ea.mat_pow(phi, t, m)
                    Pit = ea.mat_pow(Pinv, t, m)
                    val = raw(ea.mat_vec(Pt, E[i], m), ea.mat_vec(Pt, E[j], m))
                    acc = [(x + y) % m for x, y in zip(acc, ea.mat_vec(Pit, val, m))]
                consts[i][j] = acc
                consts[j][i] = [(-x) % m for x in acc]
    return LieRing(m, consts), phi


# ---------------------------------------------------------------------------
# Example 1


def example1_sweep(ns: Sequence[int], budget: int = gr.DEFAULT_BUDGET, oracle: bool = True) -> Report:
    rep = Report("BCH 2-group T = L/2^n L with a Frobenius group of order 12")
    t = rep.table("example1", ["n", "order", "C_T(F)", "C_T(H)", "C_T(H) cyclic", "C_T(H) diagonal",
                               "derived_length", "derived_length_oracle", "lower_central_factors", "powerful",
                               "uniform_ranks", "uniform_abelian", "seconds"])
    lengths = []
    for n in ns:
        r = e1.example1_report(n, budget, oracle)
        t.add(r.n, r.order, r.C_F, r.C_H_order, r.C_H_cyclic, r.C_H_diagonal, r.derived_length,
              r.derived_length_oracle, r.lower_central_factors, r.powerful, r.uniform_ranks, r.uniform_abelian,
              f"{r.seconds:.2f}")
        rep.check(f"|C_T(F)| = 8 (n={n})", r.C_F == 8, f"measured {r.C_F}")
        rep.check(f"C_T(H) cyclic of order 2^n (n={n})", r.C_H_cyclic and r.C_H_order == 2**n and r.C_H_diagonal,
                  f"order {r.C_H_order}")
        if oracle:
            rep.check(f"derived length agrees with the closure oracle (n={n})",
                      r.derived_length == r.derived_length_oracle, f"{r.derived_length} vs {r.derived_length_oracle}")
        rep.check(f"T powerful (n={n})", r.powerful)
        rep.check(f"uniformly powerful sections abelian where claimed (n={n})", r.uniform_abelian)
        lengths.append((n, r.derived_length))
    if len(lengths) > 1:
        rep.check("derived length nondecreasing in n", all(a[1] <= b[1] for a, b in zip(lengths, lengths[1:])))
    for n, expect in ((2, 1), (3, 2)):
        got = dict(lengths).get(n)
        if got is not None:
            rep.check(f"derived length {expect} at n={n}", got == expect, f"measured {got}")
    return rep.finish()


# ---------------------------------------------------------------------------
# free Lie ring


def prop2(inst: fl.Prop2Instance, oracles: bool = True) -> Report:
    rep = Report(f"multiple-of-commutator verifier, n={inst.n}, q={inst.q}, r={inst.r}, indices={inst.indices}")
    res = fl.proposition2_min_w(inst)
    t = rep.table("prop2", ["p", "k", "n", "q", "r", "c", "f", "indices", "min_w", "witness_size", "generators",
                            "verified"])
    t.add(inst.p, inst.k, inst.n, inst.q, inst.r, inst.c, inst.f, inst.indices, res.min_w, res.witness_size,
          res.generators, res.verified)
    for line in res.trace:
        rep.note("  " + line)
    if res.witness:
        w = rep.table("witness", ["coefficient", "bracket"])
        for c, tree in res.witness:
            w.add(c, fl.format_tree(tree, inst.letter_name))
        rep.check("witness re-expands to n^w times the target", res.verified)
    if oracles:
        lat = fl.prop2_lattice_oracle(inst)
        rep.check("minimal w agrees with the Hermite-form slice oracle", lat == res.min_w, f"oracle {lat}")
        bs = fl.prop2_bounded_search(inst)
        agree = (bs is None and res.min_w is None) or (bs is not None and res.min_w is not None and res.min_w <= bs)
        if res.min_w is not None and res.witness_size <= 2 and all(abs(c) <= 2 for c, _ in res.witness):
            agree = agree and bs == res.min_w
        rep.check("existence agrees with bounded exhaustive search", agree, f"search {bs}")
    return rep.finish()


# ---------------------------------------------------------------------------
# Frobenius actions


def fh_validate(spec: fb.FHSpec) -> Report:
    rep = Report(f"FH data p={spec.p} k={spec.k} n={spec.n} q={spec.q} r={spec.r}")
    v = fb.validate_fh(spec)
    rep.check("r is a primitive q-th root of unity and H acts fixed-point-freely on F", v.ok,
              "; ".join(v.violations))
    return rep.finish()


def section_lemma(V: fb.FHModule, rep: Report | None = None, tag: str = "") -> Report:
    rep = rep or Report("abelian section lemma")
    problems = V.problems()
    if problems:
        rep.check(f"FH-module hypotheses{tag}", False, "; ".join(problems))
        return rep.finish()
    res = fb.abelian_section_lemma(V)
    if not rep.tables:
        rep.table("section", ["instance", "V", "f", "U", "V/U", "C_V(H)", "C_V(F)", "Y/Ker theta", "C_W(H)"])
    th = res.theta
    W = th.ext.ring
    rep.tables[0].add(tag.strip(" ()") or "input", res.V_type, res.f, res.U_type, res.quotient_type, res.C_V_H,
                      res.C_V_F, W.abelian_type(th.Y, th.kernel), W.abelian_type(th.C_W_H))
    for name, ok in res.checks.items():
        rep.check(name + tag, ok)
    return rep.finish()


def section_lemma_random(spec: fb.FHSpec, a: int, count: int, seed: int, max_dim: int = 8) -> Report:
    rng = random.Random(seed)
    rep = Report(f"abelian section lemma on {count} random modules, seed {seed}")
    for i in range(count):
        section_lemma(fb.random_fh_module(spec, a, rng, max_dim), rep, f" (#{i})")
    return _collapse(rep)


def _collapse(rep: Report) -> Report:
    """Merge per-instance verdicts with the same name prefix into one line."""
    merged: dict[str, list] = {}
    for v in rep.verdicts:
        base = v.name.rsplit(" (#", 1)[0]
        merged.setdefault(base, []).append(v)
    out = []
    for base, vs in merged.items():
        bad = [v.name.rsplit(" (#", 1)[-1].rstrip(")") for v in vs if not v.passed]
        out.append(type(vs[0])(base, not bad, f"{len(vs) - len(bad)}/{len(vs)} instances"
                               + (f"; failing #{','.join(bad)}" if bad else "")))
    rep.verdicts = out
    return rep


# ---------------------------------------------------------------------------
# fixed points in sections


SUITE = ("C4", "C2xC2", "C4xC2", "C3xC3", "D8", "Q8", "D16", "Heis3")


def suite_groups(names: Sequence[str] | None = None) -> dict[str, object]:
    makers: dict[str, Callable] = {
        "C4": lambda: gr.cyclic_group(4),
        "C2xC2": lambda: gr.abelian_group([2, 2]),
        "C4xC2": lambda: gr.abelian_group([4, 2]),
        "C3xC3": lambda: gr.abelian_group([3, 3]),
        "D8": lambda: gr.dihedral_group(4),
        "Q8": gr.quaternion_group,
        "D16": lambda: gr.dihedral_group(8),
        "Heis3": lambda: gr.heisenberg_group(3),
    }
    names = list(makers) if names is None or list(names) == ["all"] else list(names)
    unknown = [x for x in names if x not in makers]
    if unknown:
        raise ValueError(f"unknown groups {unknown}; choose from {sorted(makers)}")
    return {name: makers[name]() for name in names}


def lemma_suite(names: Sequence[str] | None = None, seed: int = 0, rank_instances: int = 20) -> Report:
    rep = Report("fixed points of automorphisms on sections")
    t = rep.table("lemma_suite", ["group", "order", "automorphisms", "subgroups", "invariant pairs", "coprime pairs"])
    l1 = l2 = True
    pairs = coprime = 0
    for name, G in suite_groups(names).items():
        auts = gr.automorphisms(G)
        subs = gr.all_subgroups(G)
        np_, nc = 0, 0
        for a in auts:
            for N in subs:
                if not N.mask[a[N.elements()]].all():
                    continue
                r = fb.lemma_checks(G, N, a)
                np_ += 1
                nc += r.coprime
                l1 &= r.C_G_mod_N <= r.C_G
                if r.coprime:
                    l2 &= r.covering
        t.add(name, G.order, len(auts), len(subs), np_, nc)
        pairs += np_
        coprime += nc
    rep.check("|C_{G/N}(a)| <= |C_G(a)| for every invariant N", l1, f"{pairs} pairs")
    rep.check("C_{G/N}(a) = C_G(a)N/N when (|N|, |a|) = 1", l2, f"{coprime} coprime pairs")
    G = gr.cyclic_group(4)
    N = gr.subgroup_closure(G, [2])
    r = fb.lemma_checks(G, N, (-np.arange(4)) % 4)
    rep.check("covering fails without coprimality (C4, N = 2C4, inversion)", not r.covering and not r.coprime,
              f"|C_G/N| = {r.C_G_mod_N}, |C_G N/N| = 1")
    rng = random.Random(seed)
    ok, shown = True, []
    for _ in range(rank_instances):
        p = rng.choice([2, 3, 5])
        a = rng.randrange(1, 4)
        k = rng.randrange(1, 3) if p < 5 else 1
        A, phi = graded_ring_from_blocks(rng, p, a, rng.randrange(2, 7), k)
        A = LieRing.abelian(A.d, A.modulus)
        holds, rank, s, n = fb.rank_bound_check(A, phi)
        ok &= holds
        shown.append(f"{rank}<={s}*{n}")
    rep.check("rank A <= s p^k for phi of order p^k with |C_A(phi)| = p^s", ok, ", ".join(shown[:6]) + " ...")
    return rep.finish()


# ---------------------------------------------------------------------------
# theorem-level measurements


def _abelian_candidates(L: LieRing) -> list[tuple[str, Span]]:
    R, m, d = L.relations, L.modulus, L.d
    out: list[tuple[str, Span]] = []
    for i in range(L.a + 1):
        out.append((f"agemo_{i}", L.full().scale(L.p**i) + R))
    for i in range(L.a + 1):
        out.append((f"omega_{i}", ea.preimage(ea.mat_scale(ea.identity(d), L.p**i, m), R)))
    seen, uniq = [], []
    for name, S in out:
        dup = next((n for n, T in seen if T == S), None)
        if dup is None:
            seen.append((name, S))
            uniq.append((name, S))
    return uniq


def theorem2_dashboard(L: LieRing, phi: Matrix, h: Matrix, spec: fb.FHSpec) -> Report:
    """Characteristic subgroups of an abelian ``P`` with an FH action: for
    each candidate ``Q`` the index and the conclusions it witnesses."""
    if not L.is_abelian_table():
        raise fb.HypothesisError("the linear dashboard needs an abelian P; use group_dashboard")
    problems = _action_problems(L, phi, h, spec)
    if problems:
        raise fb.HypothesisError("; ".join(problems))
    m = L.modulus
    CH = ea.preimage(ea.mat_add(h, ea.mat_scale(ea.identity(L.d), -1), m), L.relations)
    tH = L.abelian_type(CH)
    rep = Report(f"candidates Q in P = {L.abelian_type()} under FH (n={spec.n}, q={spec.q})")
    rep.note(f"C_P(H) = {tH}: order {tH.order}, rank {tH.rank}, exponent {tH.exponent}")
    t = rep.table("candidates", ["Q", "order", "index", "type", "(a) |Q| <= |C_P(H)|^q", "(b) rank <= r q",
                                 "(c) exp <= p^2e"])
    for name, Q in _abelian_candidates(L):
        tq = L.abelian_type(Q)
        a = tq.order <= tH.order**spec.q
        b = tq.rank <= tH.rank * spec.q
        c = tq.exponent <= tH.exponent**2
        t.add(name, tq.order, L.order() // tq.order, str(tq), a, b, c)
    _witness_verdicts(rep)
    return rep.finish()


def _action_problems(L: LieRing, phi: Matrix, h: Matrix, spec: fb.FHSpec) -> list[str]:
    """FH hypotheses on a linear action; the module's prime may differ from
    ``p`` here, which is how fixed-point-free kernels arise."""
    from ..liering import LieMap

    out = list(fb.validate_fh(spec).violations)
    m, R = L.modulus, L.relations
    for name, M in (("phi", phi), ("h", h)):
        if not L.is_automorphism(M):
            out.append(f"{name} is not an automorphism")
    if out:
        return out
    if not LieMap(phi, m, R).has_order(spec.n):
        out.append(f"phi does not have order {spec.n}")
    if not LieMap(h, m, R).has_order(spec.q):
        out.append(f"h does not have order {spec.q}")
    lhs = ea.mat_mul(ea.mat_mul(ea.mat_inverse_mod(h, m), phi, m), h, m)
    rhs = ea.mat_pow(phi, spec.r, m)
    if any(tuple(x - y for x, y in zip(a, b)) not in R for a, b in zip(ea.transpose(lhs), ea.transpose(rhs))):
        out.append("h^-1 phi h != phi^r")
    return out


def group_dashboard(G, phi: Callable, h: Callable, spec: fb.FHSpec, budget: int = gr.DEFAULT_BUDGET) -> Report:
    """The same search for an enumerable group with code-level ``phi``, ``h``."""
    CH = gr.centralizer_of_automorphism(G, h, budget)
    ch_ab = gr.is_abelian(G, CH)
    eH = _subgroup_exponent(G, CH)
    rH = _abelian_rank(G, CH) if ch_ab else None
    rep = Report(f"candidates Q in a group of order {G.order} under FH (n={spec.n}, q={spec.q})")
    rep.note(f"C_P(H): order {CH.order}, exponent {eH}, rank {rH if rH is not None else 'not computed'}")
    cands = []
    for i in range(1, 8):
        A = gr.agemo(G, i, budget=budget)
        cands.append((f"agemo_{i}", A))
        if A.is_trivial():
            break
    cands.insert(0, ("P", gr.whole(G)))
    for i in range(1, 8):
        O = gr.omega(G, i, budget=budget)
        cands.append((f"omega_{i}", O))
        if O.order == G.order:
            break
    for kind in ("lower_central", "derived"):
        s = gr.group_series(G, kind, budget)
        for i, S in enumerate(s.terms[1:], start=2):
            cands.append((f"{kind}_{i}", S))
    t = rep.table("candidates", ["Q", "order", "index", "abelian", "(a) |Q| <= |C_P(H)|^q", "(b) rank <= r q",
                                 "(c) exp <= p^2e"])
    seen: list = []
    for name, Q in cands:
        if any(Q == S for S in seen):
            continue
        seen.append(Q)
        ab = gr.is_abelian(G, Q)
        b = None
        if ab and rH is not None:
            b = _abelian_rank(G, Q) <= rH * spec.q
        t.add(name, Q.order, G.order // Q.order, ab, Q.order <= CH.order**spec.q, b,
              _subgroup_exponent(G, Q) <= eH**2)
    _witness_verdicts(rep)
    return rep.finish()


def _witness_verdicts(rep: Report) -> None:
    t = rep.tables[0]
    for j, col in enumerate(t.header[4:], start=4):
        names = [row[0] for row in t.rows if row[j] is True]
        best = min((row for row in t.rows if row[j] is True), key=lambda row: row[2], default=None)
        detail = f"witnesses {', '.join(names)}; smallest index {best[2]} ({best[0]})" if best else "no candidate"
        rep.check(f"some characteristic candidate witnesses {col.split(' ', 1)[0]}", bool(names), detail)


def _subgroup_exponent(G, H) -> int:
    x = H.elements()
    e = 1
    while not (gr.power(G, x, e) == 0).all():
        e *= G.p
    return e


def _abelian_rank(G, H) -> int:
    x = H.elements()
    k = int((gr.power(G, x, G.p) == 0).sum())
    return ea.prime_power(k)[1] if k > 1 else 0


def witnesses(rep: Report, column: str) -> list[str]:
    t = rep.tables[0]
    j = list(t.header).index(column)
    return [row[0] for row in t.rows if row[j] is True]


# ---------------------------------------------------------------------------
# named groups


def named_group(name: str):
    """Suite groups plus ``UT<d>_<m>``, ``Heis<m>``, ``D<2n>``, ``C<n>``,
    ``example1-<n>``."""
    import re

    if name in SUITE:
        return suite_groups([name])[name]
    if m := re.fullmatch(r"example1-(\d+)", name):
        return e1.example1_group(int(m[1])).T
    if m := re.fullmatch(r"UT(\d+)_(\d+)", name):
        return gr.unitriangular_group(int(m[1]), int(m[2]))
    if m := re.fullmatch(r"Heis(\d+)", name):
        return gr.heisenberg_group(int(m[1]))
    if m := re.fullmatch(r"D(\d+)", name):
        return gr.dihedral_group(int(m[1]) // 2)
    if m := re.fullmatch(r"C(\d+(?:xC\d+)*)", name):
        return gr.abelian_group([int(x) for x in m[1].split("xC")])
    raise ValueError(f"unknown group {name!r}")


def group_report(G, name: str = "", budget: int = gr.DEFAULT_BUDGET) -> Report:
    from ..pgroup.lie import associated_lie_ring

    rep = Report(f"group {name or G!r} of order {G.order}")
    lcs = gr.group_series(G, "lower_central", budget)
    t = rep.table("group", ["group", "order", "exponent", "class", "derived_length", "lower_central_factors",
                            "powerful", "uniform_ranks", "lie_order", "lie_class"])
    A = associated_lie_ring(G, budget)
    v = A.ring.validate()
    powerful = gr.powerful_check(G, budget).powerful
    ranks = [s.rank for s in gr.uniformly_powerful_series(G, budget)] if powerful else None
    t.add(name, G.order, gr.group_exponent(G), lcs.length, gr.derived_length(G, budget), lcs.factor_orders(),
          powerful, ranks, A.ring.order(),
          A.ring.nilpotency_class())
    rep.check("associated Lie ring satisfies the Lie axioms", v.ok, "" if v.ok else str(v.violation))
    rep.check("|L(P)| = |P|", A.ring.order() == G.order)
    rep.check("class L(P) = class P", A.ring.nilpotency_class() == lcs.length)
    rep.check("derived length agrees with the closure oracle",
              gr.derived_length(G, budget) == gr.derived_length(G, budget, method="oracle"))
    return rep.finish()


def theorem2_fpf(ell: int, spec: fb.FHSpec, copies: int = 1, seed: int = 0) -> Report:
    """The dashboard on an ``F_ell``-section with ``F`` fixed-point-free,
    plus the free-module checks on it."""
    rng = random.Random(seed)
    phi, h = fb.fpf_section_module(ell, spec, copies, rng)
    L = LieRing.abelian(len(phi), ell)
    rep = theorem2_dashboard(L, phi, h, spec)
    CP = ea.preimage(ea.mat_add(phi, ea.mat_scale(ea.identity(L.d), -1), ell), L.relations)
    CH = ea.preimage(ea.mat_add(h, ea.mat_scale(ea.identity(L.d), -1), ell), L.relations)
    rep.check("F acts fixed-point-freely", CP.order == 1)
    rep.check("section is a free F_ell H-module (canonical-form test)", fb.free_module_check(h, ell, spec.q))
    rep.check("free-module criterion agrees with the rational canonical form oracle",
              fb.free_module_check(h, ell, spec.q) == fb.free_module_oracle(h, ell, spec.q))
    rep.check("Q = P witnesses (a) with |P| = |C_P(H)|^|H|", L.order() == L.order(CH) ** spec.q)
    return rep.finish()


# ---------------------------------------------------------------------------
# scenario runner


def run(sc) -> Report:
    from ..liering import parse_lie_ring

    budget = sc.budget or gr.DEFAULT_BUDGET
    P = sc.params
    if sc.kind == "example1-sweep":
        if not (e1.N_RANGE.start <= P["n_min"] <= P["n_max"] < e1.N_RANGE.stop):
            raise ValueError(f"need {e1.N_RANGE.start} <= n_min <= n_max <= {e1.N_RANGE.stop - 1}")
        return example1_sweep(range(P["n_min"], P["n_max"] + 1), budget, P["oracle"])
    if sc.kind == "prop2":
        inst = fl.Prop2Instance(P["p"], P["k"], P["q"], P["r"], P["c"], P["indices"], P["wmax"])
        if P["f"] is not None and P["f"] != inst.f:
            raise ValueError(f"f = {P['f']} but {inst.f} indices were given")
        return prop2(inst, P["oracles"])
    if sc.kind == "section-lemma":
        if P["input"]:
            return section_lemma(fb.parse_module(sc.path("input").read_text()))
        missing = [k for k in ("p", "q", "r") if P[k] is None]
        if missing:
            raise ValueError(f"section-lemma needs either input or {', '.join(missing)}")
        spec = fb.FHSpec(P["p"], P["k"], P["q"], P["r"])
        return section_lemma_random(spec, P["a"], P["count"], sc.seed, P["max_dim"])
    if sc.kind == "lemma-suite":
        return lemma_suite(P["groups"], sc.seed, P["rank_instances"])
    if sc.kind == "lie-components":
        if P["input"]:
            L = parse_lie_ring(sc.path("input").read_text())
            if not P["phi"]:
                raise ValueError("lie-components with input needs phi")
            phi, _ = ea.parse_matrix(sc.path("phi").read_text())
            h = ea.parse_matrix(sc.path("h").read_text())[0] if P["h"] else None
            return lie_components(L, phi, P["k"], h, P["r"])
        if None in (P["p"], P["a"], P["d"]):
            raise ValueError("lie-components needs either input and phi, or p, a and d")
        rng = random.Random(sc.seed)
        rep = Report(f"phi-components on {P['count']} random rings, seed {sc.seed}")
        for i in range(P["count"]):
            L, phi = graded_ring_from_blocks(rng, P["p"], P["a"], P["d"], P["k"])
            sub = lie_components(L, phi, P["k"])
            rep.verdicts += [type(v)(f"{v.name} (#{i})", v.passed, v.detail) for v in sub.verdicts]
        return _collapse(rep).finish()
    if sc.kind == "group-report":
        return group_report(named_group(P["group"]), P["group"], budget)
    if sc.kind == "theorem2":
        spec = fb.FHSpec(P["p"], P["k"], P["q"], P["r"])
        if P["ell"] is not None:
            return theorem2_fpf(P["ell"], spec, P["copies"], sc.seed)
        V = fb.parse_module(sc.path("input").read_text()) if P["input"] else \
            fb.random_fh_module(spec, P["a"], random.Random(sc.seed))
        return theorem2_dashboard(V.ring, V.phi, V.h, V.spec)
    raise ValueError(f"unknown kind {sc.kind}")
