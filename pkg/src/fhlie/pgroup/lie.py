"""The associated Lie ring ``L(P) = sum_i gamma_i / gamma_(i+1)`` of an
enumerable nilpotent ``p``-group."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .. import exactalg as ea
from ..exactalg import Span
from ..liering import LieMap, LieRing
from . import groups as gr


@dataclass
class FactorCoordinates:
    """Discrete logs in ``gamma_i / gamma_(i+1)`` with respect to chosen
    generator representatives."""

    reps: list[int]  # group codes of the generators
    label: np.ndarray  # coset label of each element of gamma_i, -1 elsewhere
    coords: dict[int, tuple[int, ...]]  # coset label -> exponent vector
    relations: list[tuple[int, ...]]


def _factor_coordinates(G, top: gr.Subgroup, bottom: gr.Subgroup) -> FactorCoordinates:
    label = gr.cosets(G, bottom, within=top)
    reps = list(top.gens)
    k = len(reps)
    coords: dict[int, tuple[int, ...]] = {0: (0,) * k}
    rels: set[tuple[int, ...]] = set()
    frontier = [(0, 0)]  # (coset label, representative code)
    while frontier:
        nxt = []
        for lab, code in frontier:
            c = coords[lab]
            for j, g in enumerate(reps):
                y = int(G.mul(code, g))
                ly = int(label[y])
                v = list(c)
                v[j] += 1
                v = tuple(v)
                if ly in coords:
                    diff = tuple(a - b for a, b in zip(v, coords[ly]))
                    if any(diff):
                        rels.add(diff)
                else:
                    coords[ly] = v
                    nxt.append((ly, y))
        frontier = nxt
    return FactorCoordinates(reps, label, coords, sorted(rels))


@dataclass
class AssociatedLieRing:
    ring: LieRing
    series: gr.GroupSeries
    factors: list[FactorCoordinates]
    offsets: list[int]  # first coordinate of each degree

    def degree_of(self, coord: int) -> int:
        return max(i for i, o in enumerate(self.offsets) if o <= coord)

    def vector_of(self, code: int, degree: int) -> tuple[int, ...]:
        """Coordinates of ``g gamma_(i+1)`` placed in degree ``i`` (0-based)."""
        return _vector(self.factors, self.offsets, self.ring.d, self.ring.modulus, code, degree)


def _vector(factors, offsets, D: int, m: int, code: int, degree: int) -> tuple[int, ...]:
    F = factors[degree]
    lab = int(F.label[code])
    if lab < 0:
        raise ValueError("element does not lie in this term of the series")
    out = [0] * D
    for j, x in enumerate(F.coords[lab]):
        out[offsets[degree] + j] = x % m
    return tuple(out)


def associated_lie_ring(G, budget: int = gr.DEFAULT_BUDGET) -> AssociatedLieRing:
    lcs = gr.group_series(G, "lower_central", budget)
    if lcs.length is None:
        raise gr.GroupError("group is not nilpotent")
    c = lcs.length
    factors = [_factor_coordinates(G, lcs.terms[i], lcs.terms[i + 1]) for i in range(c)]
    offsets = []
    D = 0
    for F in factors:
        offsets.append(D)
        D += len(F.reps)
    m = gr.group_exponent(G) if G.order > 1 else 1
    if m == 1:
        return AssociatedLieRing(LieRing(2, []), lcs, factors, offsets)
    rel_rows = []
    for i, F in enumerate(factors):
        for r in F.relations:
            v = [0] * D
            for j, x in enumerate(r):
                v[offsets[i] + j] = x % m
            rel_rows.append(v)
    R = Span(rel_rows, D, m)
    consts = [[[0] * D for _ in range(D)] for _ in range(D)]
    for i, Fi in enumerate(factors):
        for j, Fj in enumerate(factors):
            if i + j + 1 >= c:
                continue
            for a, x in enumerate(Fi.reps):
                for b, y in enumerate(Fj.reps):
                    z = int(gr.commutator(G, x, y))
                    consts[offsets[i] + a][offsets[j] + b] = list(_vector(factors, offsets, D, m, z, i + j + 1))
    ring = LieRing(m, consts, R)
    return AssociatedLieRing(ring, lcs, factors, offsets)


def induced_map(A: AssociatedLieRing, G, alpha: Callable) -> LieMap:
    """The graded map of ``L(P)`` induced by an automorphism of ``P``."""
    D = A.ring.d
    M = ea.zeros(D, D)
    for i, F in enumerate(A.factors):
        for a, x in enumerate(F.reps):
            col = A.vector_of(int(alpha(np.array([x]))[0]), i)
            for r in range(D):
                M[r][A.offsets[i] + a] = col[r]
    return LieMap(M, A.ring.modulus, A.ring.relations)
