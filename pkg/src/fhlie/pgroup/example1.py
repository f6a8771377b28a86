"""The 2-group ``T = L / 2^n L`` built from the Lie ring with
``[e1,e2] = 4e3``, ``[e2,e3] = 4e1``, ``[e3,e1] = 4e2``, together with the
action of the Frobenius group of order 12 (Klein four kernel, cyclic complement
of order 3)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import exactalg as ea
from ..liering import LieRing
from . import groups as gr
from .bch import BchGroup

N_RANGE = range(2, 8)


def _ring(n: int, scale: int) -> LieRing:
    m = 2**n
    return LieRing.from_brackets(3, m, {(0, 1): (0, 0, scale), (1, 2): (scale, 0, 0), (0, 2): (0, -scale, 0)})


def example1_ring(n: int) -> LieRing:
    """The carrier modulo ``2^n``."""
    return _ring(n, 4)


def example1_f() -> list[ea.Matrix]:
    """``f_i`` fixes ``e_i`` and negates the other two basis vectors."""
    out = []
    for i in range(3):
        out.append([[1 if r == c == i else (-1 if r == c else 0) for c in range(3)] for r in range(3)])
    return out


def example1_h() -> ea.Matrix:
    """``e_i -> e_(i+1 mod 3)`` as a matrix acting on columns."""
    return [[1 if r == (c + 1) % 3 else 0 for c in range(3)] for r in range(3)]


@dataclass
class Example1:
    n: int
    T: BchGroup
    f: list[ea.Matrix]
    h: ea.Matrix
    checks: dict[str, bool] = field(default_factory=dict)

    def maps(self):
        return [self.T.linear_map(M) for M in self.f], self.T.linear_map(self.h)


def example1_group(n: int, verify: bool = True) -> Example1:
    if n not in N_RANGE:
        raise ValueError(f"n must lie in {N_RANGE.start}..{N_RANGE.stop - 1}")
    T = BchGroup(_ring(n, 1))
    ex = Example1(n, T, example1_f(), example1_h())
    if verify:
        m = T.modulus
        for name, M in [("f1", ex.f[0]), ("f2", ex.f[1]), ("f3", ex.f[2]), ("h", ex.h)]:
            sample = None
            if T.order <= 2**9:
                sample = np.arange(T.order)
            ex.checks[f"{name} preserves the group law"] = T.is_automorphism(M, sample)
        hinv = ea.mat_inverse_mod(ex.h, m)
        ex.checks["h permutes f1 -> f2 -> f3"] = all(
            ea.mat_mul(ea.mat_mul(hinv, ex.f[i], m), ex.h, m) == ea.mat_scale(ex.f[(i - 1) % 3], 1, m) for i in range(3)
        )
        if not all(ex.checks.values()):
            raise AssertionError(f"Example 1 construction failed: {ex.checks}")
    return ex


@dataclass
class Example1Report:
    n: int
    order: int
    C_F: int
    C_H_order: int
    C_H_cyclic: bool
    C_H_diagonal: bool
    derived_length: int
    derived_length_oracle: int | None
    lower_central_factors: list[int]
    powerful: bool
    uniform_ranks: list[int]
    uniform_abelian: bool
    seconds: float = 0.0


def example1_report(n: int, budget: int = gr.DEFAULT_BUDGET, oracle: bool = True) -> Example1Report:
    import time

    t0 = time.perf_counter()
    ex = example1_group(n)
    T = ex.T
    gr._budget_check(T.order, budget)
    fs, hmap = ex.maps()
    CF = gr.centralizer_of_automorphism(T, fs, budget, check=False)
    CH = gr.centralizer_of_automorphism(T, hmap, budget, check=False)
    diag = np.flatnonzero(CH.mask)
    vecs = T.decode(diag)
    diagonal = bool((vecs[:, 0] == vecs[:, 1]).all() and (vecs[:, 1] == vecs[:, 2]).all())
    cyclic = _is_cyclic(T, CH)
    dl = gr.derived_length(T, budget)
    dl_oracle = gr.derived_length(T, budget, method="oracle") if oracle else None
    lcs = gr.group_series(T, "lower_central", budget)
    segs = gr.uniformly_powerful_series(T, budget)
    return Example1Report(
        n, T.order, CF.order, CH.order, cyclic, diagonal, dl, dl_oracle, lcs.factor_orders(),
        gr.powerful_check(T, budget).powerful, [s.rank for s in segs], all(s.abelian for s in segs),
        time.perf_counter() - t0,
    )


def _is_cyclic(G, H: gr.Subgroup) -> bool:
    """A finite ``p``-group is cyclic iff some element's order equals ``|H|``."""
    x = H.elements()
    return bool((gr.power(G, x, H.order // G.p) != 0).any()) if H.order > 1 else True
