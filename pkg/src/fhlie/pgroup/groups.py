"""Brute-force engine for enumerable finite groups.

A group exposes ``order``, ``identity`` (the code 0), and vectorized ``mul``
and ``inv`` on integer codes ``0 .. order-1``.  Subgroups are boolean masks
over the codes together with a generating list.  Commutators are
``[x, y] = x^-1 y^-1 x y``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .. import exactalg as ea

DEFAULT_BUDGET = 2**21


class BudgetExceeded(RuntimeError):
    pass


class GroupError(ValueError):
    pass


class TableGroup:
    """A group given by its Cayley table (code 0 is the identity)."""

    def __init__(self, table: np.ndarray, name: str = "", p: int | None = None):
        table = np.asarray(table, dtype=np.int64)
        N = table.shape[0]
        if table.shape != (N, N) or not (table[0] == np.arange(N)).all():
            raise GroupError("code 0 must be the identity")
        self.table = table
        self.order = N
        self.name = name
        self._inv = np.argmin(table, axis=1)  # position of the identity in each row
        if not (table[np.arange(N), self._inv] == 0).all():
            raise GroupError("not a group table")
        self.p = p if p is not None else (ea.prime_power(N)[0] if N > 1 else None)

    identity = 0

    def __repr__(self):
        return f"TableGroup({self.name or self.order})"

    def mul(self, a, b):
        return self.table[np.asarray(a), np.asarray(b)]

    def inv(self, a):
        return self._inv[np.asarray(a)]

    def generators(self) -> np.ndarray:
        if getattr(self, "_gens", None) is None:
            self._gens = np.array(small_generating_set(self), dtype=np.int64)
        return self._gens

    @classmethod
    def from_elements(cls, elements: Sequence, mul: Callable, identity, name: str = "", key=None) -> "TableGroup":
        key = key or (lambda x: x)
        elements = list(elements)
        idx = {key(e): i for i, e in enumerate(elements)}
        i0 = idx[key(identity)]
        order = [i0] + [i for i in range(len(elements)) if i != i0]
        elements = [elements[i] for i in order]
        idx = {key(e): i for i, e in enumerate(elements)}
        N = len(elements)
        table = np.empty((N, N), dtype=np.int64)
        for i, x in enumerate(elements):
            for j, y in enumerate(elements):
                table[i, j] = idx[key(mul(x, y))]
        G = cls(table, name)
        G.labels = elements
        return G

    @classmethod
    def generated_by(cls, gens: Sequence, mul: Callable, identity, name: str = "", key=None,
                     budget: int = 4096) -> "TableGroup":
        key = key or (lambda x: x)
        seen = {key(identity): identity}
        frontier = [identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = mul(x, g)
                    ky = key(y)
                    if ky not in seen:
                        seen[ky] = y
                        nxt.append(y)
                        if len(seen) > budget:
                            raise BudgetExceeded(f"group exceeds {budget} elements")
            frontier = nxt
        return cls.from_elements(list(seen.values()), mul, identity, name, key)


def direct_product(G: TableGroup, H: TableGroup, name: str = "") -> TableGroup:
    a, b = G.order, H.order
    i = np.arange(a * b)
    x, y = i // b, i % b
    table = G.table[x[:, None], x[None, :]] * b + H.table[y[:, None], y[None, :]]
    return TableGroup(table, name or f"{G.name} x {H.name}")


def cyclic_group(n: int) -> TableGroup:
    i = np.arange(n)
    return TableGroup((i[:, None] + i[None, :]) % n, f"C{n}")


def abelian_group(factors: Sequence[int]) -> TableGroup:
    G = cyclic_group(factors[0])
    for f in factors[1:]:
        G = direct_product(G, cyclic_group(f))
    G.name = " x ".join(f"C{f}" for f in factors)
    return G


def matrix_group(gens: Sequence[ea.Matrix], m: int, name: str = "", budget: int = 4096) -> TableGroup:
    d = len(gens[0])
    key = lambda A: tuple(map(tuple, A))  # noqa: E731
    return TableGroup.generated_by(
        [key(g) for g in gens], lambda A, B: key(ea.mat_mul(A, B, m)), key(ea.identity(d)), name, budget=budget
    )


def dihedral_group(n: int) -> TableGroup:
    """Order ``2n``: pairs ``(i, s)`` meaning ``r^i s^s``."""
    els = [(i, s) for s in range(2) for i in range(n)]

    def mul(x, y):
        i, s = x
        j, t = y
        return ((i + (-j if s else j)) % n, s ^ t)

    return TableGroup.from_elements(els, mul, (0, 0), f"D{2 * n}")


def quaternion_group() -> TableGroup:
    i = [[0, -1], [1, 0]]
    j = [[0, 1j], [1j, 0]]

    def mul(A, B):
        return tuple(tuple(sum(A[r][k] * B[k][c] for k in range(2)) for c in range(2)) for r in range(2))

    key = lambda A: tuple(tuple(complex(x) for x in row) for row in A)  # noqa: E731
    I = ((1, 0), (0, 1))
    gens = [tuple(map(tuple, i)), tuple(map(tuple, j))]
    return TableGroup.generated_by(gens, mul, I, "Q8", key)


def heisenberg_group(m: int) -> TableGroup:
    return matrix_group([[[1, 1, 0], [0, 1, 0], [0, 0, 1]], [[1, 0, 0], [0, 1, 1], [0, 0, 1]]], m, f"Heis({m})")


def unitriangular_group(d: int, m: int) -> TableGroup:
    gens = []
    for i in range(d - 1):
        A = ea.identity(d)
        A[i][i + 1] = 1
        gens.append(A)
    return matrix_group(gens, m, f"UT({d},{m})")


# ---------------------------------------------------------------------------
# subgroups


@dataclass
class Subgroup:
    group: object
    mask: np.ndarray
    gens: list[int]

    @property
    def order(self) -> int:
        return int(self.mask.sum())

    def elements(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def __contains__(self, g) -> bool:
        return bool(self.mask[int(g)])

    def contains_all(self, codes) -> bool:
        return bool(self.mask[np.asarray(codes)].all())

    def __le__(self, other: "Subgroup") -> bool:
        return bool((~self.mask | other.mask).all())

    def __eq__(self, other):
        return isinstance(other, Subgroup) and bool((self.mask == other.mask).all())

    def is_trivial(self) -> bool:
        return self.order == 1

    def __repr__(self):
        return f"Subgroup(order={self.order})"


def _budget_check(size: int, budget: int):
    if size > budget:
        raise BudgetExceeded(f"group of order {size} exceeds the element budget {budget}")


def _extend(G, mask: np.ndarray, gens: list[int]) -> None:
    """Close ``mask`` (already a subgroup for ``gens[:-1]``) under ``gens``."""
    g_arr = np.array(gens, dtype=np.int64)
    frontier = np.flatnonzero(mask)
    while len(frontier):
        prod = np.unique(G.mul(frontier[:, None], g_arr[None, :]).ravel())
        prod = prod[~mask[prod]]
        mask[prod] = True
        frontier = prod


def subgroup_closure(G, S: Iterable[int], budget: int = DEFAULT_BUDGET, within: Subgroup | None = None) -> Subgroup:
    """Least subgroup containing ``S`` (and ``within`` if given), by breadth
    first search on right multiplication by generators.  The generator list
    kept is irredundant: each one lies outside the span of the earlier ones."""
    _budget_check(G.order, budget)
    if within is not None:
        mask, gens = within.mask.copy(), list(within.gens)
    else:
        mask, gens = np.zeros(G.order, dtype=bool), []
        mask[0] = True
    cand = np.asarray(list(S) if not isinstance(S, np.ndarray) else S, dtype=np.int64).ravel()
    cand = cand[~mask[cand]]
    while len(cand):
        g = int(cand[0])
        gens.append(g)
        _extend(G, mask, gens)
        cand = cand[~mask[cand]]
    return Subgroup(G, mask, gens)


def whole(G) -> Subgroup:
    gens = [int(g) for g in G.generators()]
    return Subgroup(G, np.ones(G.order, dtype=bool), gens)


def trivial(G) -> Subgroup:
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    return Subgroup(G, mask, [])


def commutator(G, a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    return G.mul(G.mul(G.inv(a), G.inv(b)), G.mul(a, b))


def conjugate(G, a, x):
    """``a^x = x^-1 a x``."""
    return G.mul(G.mul(G.inv(np.asarray(x)), a), x)


def normal_closure(G, S: Iterable[int], over: Sequence[int] | None = None, budget: int = DEFAULT_BUDGET) -> Subgroup:
    """Least subgroup containing ``S`` and normalized by ``over`` (default:
    generators of ``G``)."""
    xs = np.array(list(G.generators()) if over is None else list(over), dtype=np.int64)
    H = subgroup_closure(G, S, budget)
    while True:
        if not H.gens or not len(xs):
            return H
        g = np.array(H.gens, dtype=np.int64)
        conj = conjugate(G, g[:, None], xs[None, :]).ravel()
        missing = [int(c) for c in np.unique(conj) if not H.mask[c]]
        if not missing:
            return H
        H = subgroup_closure(G, missing, budget, within=H)


def commutator_subgroup(G, A: Subgroup, B: Subgroup, budget: int = DEFAULT_BUDGET) -> Subgroup:
    """``[A, B]`` for normal subgroups ``A`` and ``B``."""
    if not A.gens or not B.gens:
        return trivial(G)
    a = np.array(A.gens, dtype=np.int64)
    b = np.array(B.gens, dtype=np.int64)
    cs = np.unique(commutator(G, a[:, None], b[None, :]).ravel())
    return normal_closure(G, cs, budget=budget)


def derived_subgroup_oracle(G, D: Subgroup, budget: int = DEFAULT_BUDGET) -> Subgroup:
    """``<[g, s] : g in D, s a generator of D>``.

    Independent of the normal-closure route: the subgroup ``K`` so generated
    is normalized by ``D`` because ``x^-1 [g,s] x = [gx,s][x,s]^-1``, and the
    generators of ``D`` are central modulo ``K``.
    """
    if not D.gens:
        return trivial(G)
    g = D.elements()
    s = np.array(D.gens, dtype=np.int64)
    cs = np.unique(commutator(G, g[:, None], s[None, :]).ravel())
    return subgroup_closure(G, cs, budget)


def all_commutators_closure(G, D: Subgroup, budget: int = DEFAULT_BUDGET) -> Subgroup:
    """Closure of every commutator of two elements of ``D`` (small ``D`` only)."""
    g = D.elements()
    cs = np.unique(commutator(G, g[:, None], g[None, :]).ravel())
    return subgroup_closure(G, cs, budget)


@dataclass
class GroupSeries:
    kind: str
    terms: list[Subgroup]
    length: int | None  # class or derived length; None if the series stalls

    def orders(self) -> list[int]:
        return [t.order for t in self.terms]

    def factor_orders(self) -> list[int]:
        o = self.orders()
        return [o[i] // o[i + 1] for i in range(len(o) - 1)]


def group_series(G, kind: str = "lower_central", budget: int = DEFAULT_BUDGET,
                 method: str = "normal") -> GroupSeries:
    """Lower central or derived series. ``method="oracle"`` computes derived
    terms through :func:`derived_subgroup_oracle` instead."""
    if kind not in ("lower_central", "derived"):
        raise ValueError(f"unknown series kind {kind!r}")
    _budget_check(G.order, budget)
    Gs = whole(G)
    terms = [Gs]
    while not terms[-1].is_trivial():
        cur = terms[-1]
        if kind == "lower_central":
            nxt = commutator_subgroup(G, cur, Gs, budget)
        elif method == "oracle":
            nxt = derived_subgroup_oracle(G, cur, budget)
        elif method == "all-pairs":
            nxt = all_commutators_closure(G, cur, budget)
        else:
            nxt = commutator_subgroup(G, cur, cur, budget)
        if nxt == cur:
            return GroupSeries(kind, terms, None)
        terms.append(nxt)
    return GroupSeries(kind, terms, len(terms) - 1)


def nilpotency_class(G, budget: int = DEFAULT_BUDGET) -> int | None:
    return group_series(G, "lower_central", budget).length


def derived_length(G, budget: int = DEFAULT_BUDGET, method: str = "normal") -> int | None:
    return group_series(G, "derived", budget, method).length


def power(G, a, e: int):
    """``a^e`` by repeated squaring, vectorized."""
    a = np.asarray(a, dtype=np.int64)
    out = np.zeros_like(a)
    base = a
    while e:
        if e & 1:
            out = G.mul(out, base)
        base = G.mul(base, base)
        e >>= 1
    return out


def group_exponent(G) -> int:
    x = np.arange(G.order)
    e = 1
    while not (power(G, x, e) == 0).all():
        e *= G.p
    return e


def omega(G, i: int, within: Subgroup | None = None, budget: int = DEFAULT_BUDGET) -> Subgroup:
    x = np.arange(G.order) if within is None else within.elements()
    return subgroup_closure(G, x[power(G, x, G.p**i) == 0], budget)


def agemo(G, i: int, within: Subgroup | None = None, budget: int = DEFAULT_BUDGET) -> Subgroup:
    x = np.arange(G.order) if within is None else within.elements()
    return subgroup_closure(G, np.unique(power(G, x, G.p**i)), budget)


def omega_agemo(G, i: int, budget: int = DEFAULT_BUDGET) -> tuple[Subgroup, Subgroup]:
    return omega(G, i, budget=budget), agemo(G, i, budget=budget)


# ---------------------------------------------------------------------------
# automorphisms


def is_automorphism(G, alpha: Callable, exhaustive: bool | None = None) -> bool:
    """``alpha`` maps codes to codes; checked on all pairs when the group is
    small, else on generators and a bijectivity scan."""
    x = np.arange(G.order)
    img = alpha(x)
    if len(np.unique(img)) != G.order or img[0] != 0:
        return False
    if exhaustive is None:
        exhaustive = G.order <= 2**10
    if exhaustive:
        a, b = x[:, None], x[None, :]
    else:
        g = G.generators()
        a, b = x[:, None], g[None, :]
    return bool((alpha(G.mul(a, b)) == G.mul(alpha(a), alpha(b))).all())


def centralizer_of_automorphism(G, alpha: Callable | Sequence[Callable], budget: int = DEFAULT_BUDGET,
                                check: bool = True) -> Subgroup:
    """Fixed points of one automorphism or of a list of them."""
    _budget_check(G.order, budget)
    alphas = [alpha] if callable(alpha) else list(alpha)
    x = np.arange(G.order)
    mask = np.ones(G.order, dtype=bool)
    for a in alphas:
        if check and not is_automorphism(G, a):
            raise GroupError("map is not an automorphism")
        mask &= a(x) == x
    fixed = np.flatnonzero(mask)
    H = subgroup_closure(G, fixed, budget)
    assert (H.mask == mask).all(), "fixed points must form a subgroup"
    return H


def cosets(G, N: Subgroup, within: Subgroup | None = None) -> np.ndarray:
    """Label every element of ``within`` (default ``G``) by its coset ``gN``;
    labels are ``0 .. k-1`` with the identity coset 0, others ``-1``."""
    label = np.full(G.order, -1, dtype=np.int64)
    n = N.elements()
    todo = np.arange(G.order) if within is None else within.elements()
    k = 0
    for g in todo:
        if label[g] < 0:
            label[G.mul(g, n)] = k
            k += 1
    return label


# ---------------------------------------------------------------------------
# powerful groups


@dataclass
class PowerfulReport:
    powerful: bool
    witness: tuple[int, int] | None  # generators whose commutator escapes the agemo


def powerful_check(G, budget: int = DEFAULT_BUDGET) -> PowerfulReport:
    level = 2 if G.p == 2 else 1
    A = agemo(G, level, budget=budget)
    g = [int(x) for x in G.generators()]
    for a in g:
        for b in g:
            c = int(commutator(G, a, b))
            if not A.mask[c]:
                return PowerfulReport(False, (a, b))
    # A is normal, so containing the commutators of generators is enough
    return PowerfulReport(True, None)


def is_abelian(G, H: Subgroup, modulo: Subgroup | None = None) -> bool:
    """Exhaustive commuting check of ``H`` (modulo a normal subgroup)."""
    e = H.elements()
    c = commutator(G, e[:, None], e[None, :])
    if modulo is None:
        return bool((c == 0).all())
    return bool(modulo.mask[c].all())


@dataclass
class UniformSegment:
    start: int  # P^{p^start}
    stop: int  # P^{p^stop}
    rank: int
    abelian_level: int  # start + [(t+1)/2]
    abelian: bool


def uniformly_powerful_series(G, budget: int = DEFAULT_BUDGET) -> list[UniformSegment]:
    """Split ``P > P^p > P^(p^2) > ... > 1`` into runs of equal factor rank;
    each run ``S`` has exponent ``p^t`` and ``S^(p^[(t+1)/2])`` is checked to
    be abelian (modulo the bottom of the run)."""
    if not powerful_check(G, budget).powerful:
        raise GroupError("group is not powerful")
    terms = [whole(G)]
    while not terms[-1].is_trivial():
        terms.append(agemo(G, len(terms), budget=budget))
    ranks = []
    for i in range(len(terms) - 1):
        q = terms[i].order // terms[i + 1].order
        ranks.append(ea.prime_power(q)[1] if q > 1 else 0)
    segs = []
    i = 0
    while i < len(ranks):
        j = i
        while j < len(ranks) and ranks[j] == ranks[i]:
            j += 1
        t = j - i
        lev = i + (t + 1) // 2
        ab = is_abelian(G, terms[lev], modulo=terms[j]) if lev < len(terms) else True
        segs.append(UniformSegment(i, j, ranks[i], lev, ab))
        i = j
    return segs


def small_generating_set(G) -> list[int]:
    """Greedy generators: add the smallest code not yet generated."""
    H = trivial(G)
    gens = []
    while H.order < G.order:
        g = int(np.flatnonzero(~H.mask)[0])
        gens.append(g)
        H = subgroup_closure(G, [g], within=H) if H.gens else subgroup_closure(G, [g])
    return gens


# ---------------------------------------------------------------------------
# automorphisms given by generator images


def homomorphism_from_images(G, images: Sequence[int]) -> np.ndarray | None:
    """The code map extending ``gens[i] -> images[i]``, or ``None`` if the
    assignment does not define an automorphism."""
    gens = [int(g) for g in G.generators()]
    img = np.full(G.order, -1, dtype=np.int64)
    img[0] = 0
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g, a in zip(gens, images):
                y = int(G.mul(x, g))
                v = int(G.mul(img[x], a))
                if img[y] < 0:
                    img[y] = v
                    nxt.append(y)
                elif img[y] != v:
                    return None
        frontier = nxt
    if (img < 0).any() or len(np.unique(img)) != G.order:
        return None
    x = np.arange(G.order)
    if not (img[G.mul(x[:, None], x[None, :])] == G.mul(img[x][:, None], img[x][None, :])).all():
        return None
    return img


def automorphisms(G, limit: int = 10**5) -> list[np.ndarray]:
    """All automorphisms as code arrays (small groups only)."""
    import itertools

    gens = [int(g) for g in G.generators()]
    if G.order ** len(gens) > limit:
        raise BudgetExceeded(f"{G.order}^{len(gens)} candidate generator images exceed {limit}")
    order_of = {}
    x = np.arange(G.order)
    for e in range(1, G.order + 1):
        hit = (power(G, x, e) == 0)
        for c in np.flatnonzero(hit):
            order_of.setdefault(int(c), e)
        if len(order_of) == G.order:
            break
    out = []
    pools = [[c for c in range(G.order) if order_of[c] == order_of[g]] for g in gens]
    for images in itertools.product(*pools):
        img = homomorphism_from_images(G, images)
        if img is not None:
            out.append(img)
    return out


def automorphism_order(G, img: np.ndarray) -> int:
    x = np.arange(G.order)
    cur, t = img.copy(), 1
    while not (cur == x).all():
        cur = img[cur]
        t += 1
    return t


def all_subgroups(G, budget: int = DEFAULT_BUDGET) -> list[Subgroup]:
    """Every subgroup, found as closures of growing generating sets."""
    seen: dict[bytes, Subgroup] = {}
    todo = [trivial(G)]
    seen[todo[0].mask.tobytes()] = todo[0]
    while todo:
        H = todo.pop()
        for g in np.flatnonzero(~H.mask):
            K = subgroup_closure(G, [int(g)], budget, within=H)
            key = K.mask.tobytes()
            if key not in seen:
                seen[key] = K
                todo.append(K)
    return list(seen.values())
