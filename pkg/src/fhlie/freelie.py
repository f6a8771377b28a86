"""Free Lie ring over the integers in the Lyndon basis.

Elements are kept as maps from Lyndon words to integer coefficients. Brackets
are computed in the free associative algebra, where ``[u, v] = uv - vu``, and
rewritten into the Lyndon basis: the standard bracketing ``P_w`` of a Lyndon
word ``w`` equals ``w`` plus lexicographically larger words, so repeatedly
subtracting ``c * P_u`` for the smallest word ``u`` of the support recovers the
coefficients (and keeps them integral).

The generators carry ``Z/nZ`` indices for the Frobenius-action bookkeeping:
generator ``(s, t)`` stands for ``h^t`` applied to the ``s``-th orbit
representative and has index ``r^t * i_s mod n``.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence, Union

from sympy import divisors
from sympy.functions.combinatorial.numbers import mobius

from . import exactalg as ea

Word = tuple[int, ...]
Tree = Union[int, tuple]  # a letter, or a pair (left, right)
Coeff = Union[int, Fraction]


class WeightOverflow(ValueError):
    pass


# ---------------------------------------------------------------------------
# Lyndon words


def lyndon_words(num_letters: int, max_len: int) -> Iterator[Word]:
    """All Lyndon words of length <= max_len, in lexicographic order (Duval)."""
    if num_letters < 1:
        return
    w = [-1]
    while w:
        w[-1] += 1
        yield tuple(w)
        m = len(w)
        while len(w) < max_len:
            w.append(w[len(w) - m])
        while w and w[-1] == num_letters - 1:
            w.pop()


def is_lyndon(w: Word) -> bool:
    return len(w) > 0 and all(w < w[i:] for i in range(1, len(w)))


@lru_cache(maxsize=None)
def standard_factorization(w: Word) -> tuple[Word, Word]:
    """``w = u v`` with ``v`` the longest proper Lyndon suffix."""
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise ValueError(f"{w} has no standard factorization")


@lru_cache(maxsize=None)
def lyndon_tree(w: Word) -> Tree:
    if len(w) == 1:
        return w[0]
    u, v = standard_factorization(w)
    return (lyndon_tree(u), lyndon_tree(v))


def witt_dimension(num_letters: int, weight: int) -> int:
    total = sum(int(mobius(dd)) * num_letters ** (weight // dd) for dd in divisors(weight))
    return total // weight


def basis(num_letters: int, w_max: int) -> dict[int, list[Word]]:
    out: dict[int, list[Word]] = {w: [] for w in range(1, w_max + 1)}
    for word in lyndon_words(num_letters, w_max):
        out[len(word)].append(word)
    return out


# ---------------------------------------------------------------------------
# free associative algebra


def _poly_add(acc: dict, other: dict, c: Coeff = 1) -> None:
    for k, v in other.items():
        nv = acc.get(k, 0) + c * v
        if nv:
            acc[k] = nv
        else:
            acc.pop(k, None)


def poly_mul(a: dict, b: dict, max_len: int | None = None) -> dict:
    out: dict = {}
    for u, x in a.items():
        for v, y in b.items():
            if max_len is not None and len(u) + len(v) > max_len:
                continue
            k = u + v
            nv = out.get(k, 0) + x * y
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
    return out


def poly_commutator(a: dict, b: dict) -> dict:
    out = poly_mul(a, b)
    _poly_add(out, poly_mul(b, a), -1)
    return out


@lru_cache(maxsize=None)
def _lyndon_poly_cached(w: Word) -> tuple:
    if len(w) == 1:
        return ((w, 1),)
    u, v = standard_factorization(w)
    return tuple(poly_commutator(lyndon_poly(u), lyndon_poly(v)).items())


def lyndon_poly(w: Word) -> dict:
    """``P_w`` expanded in the free associative algebra."""
    return dict(_lyndon_poly_cached(w))


def tree_poly(t: Tree) -> dict:
    if isinstance(t, int):
        return {(t,): 1}
    return poly_commutator(tree_poly(t[0]), tree_poly(t[1]))


def to_lyndon(poly: dict) -> dict[Word, Coeff]:
    """Coordinates of a Lie polynomial in the Lyndon basis."""
    rest = dict(poly)
    out: dict[Word, Coeff] = {}
    while rest:
        u = min(rest)
        c = rest[u]
        if not is_lyndon(u):
            raise ValueError(f"not a Lie polynomial (leading word {u})")
        out[u] = c
        _poly_add(rest, lyndon_poly(u), -c)
    return out


def from_lyndon(coeffs: dict[Word, Coeff]) -> dict:
    out: dict = {}
    for w, c in coeffs.items():
        _poly_add(out, lyndon_poly(w), c)
    return out


# ---------------------------------------------------------------------------
# elements


@dataclass(frozen=True)
class FreeElement:
    """Integer combination of Lyndon basis brackets; zero terms are dropped."""

    terms: tuple[tuple[Word, int], ...] = ()

    @classmethod
    def of(cls, coeffs: dict[Word, Coeff]) -> "FreeElement":
        return cls(tuple(sorted((w, c) for w, c in coeffs.items() if c)))

    @classmethod
    def generator(cls, letter: int) -> "FreeElement":
        return cls((((letter,), 1),))

    @classmethod
    def from_tree(cls, t: Tree) -> "FreeElement":
        return cls.of(to_lyndon(tree_poly(t)))

    @property
    def coeffs(self) -> dict[Word, int]:
        return dict(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other: "FreeElement") -> "FreeElement":
        acc = self.coeffs
        _poly_add(acc, other.coeffs)
        return FreeElement.of(acc)

    def __sub__(self, other: "FreeElement") -> "FreeElement":
        return self + other * -1

    def __mul__(self, c: int) -> "FreeElement":
        return FreeElement.of({w: c * x for w, x in self.terms})

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    @property
    def weights(self) -> set[int]:
        return {len(w) for w, _ in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.weights) <= 1

    def map_letters(self, sigma) -> "FreeElement":
        poly: dict = {}
        for w, c in self.terms:
            img = {tuple(sigma(x) for x in word): v for word, v in lyndon_poly(w).items()}
            _poly_add(poly, img, c)
        return FreeElement.of(to_lyndon(poly))


def bracket_expand(u: FreeElement, v: FreeElement, w_max: int | None = None) -> FreeElement:
    if w_max is not None and u and v and max(u.weights) + max(v.weights) > w_max:
        raise WeightOverflow(f"bracket exceeds weight {w_max}")
    return FreeElement.of(to_lyndon(poly_commutator(from_lyndon(u.coeffs), from_lyndon(v.coeffs))))


def left_normed(letters: Sequence[Tree]) -> Tree:
    t = letters[0]
    for x in letters[1:]:
        t = (t, x)
    return t


def tree_leaves(t: Tree) -> list[int]:
    if isinstance(t, int):
        return [t]
    return tree_leaves(t[0]) + tree_leaves(t[1])


def subtrees(t: Tree) -> Iterator[Tree]:
    yield t
    if not isinstance(t, int):
        yield from subtrees(t[0])
        yield from subtrees(t[1])


def all_bracketings(leaves: Sequence[int]) -> Iterator[Tree]:
    """Every binary bracketing of the given leaf sequence, in order."""
    if len(leaves) == 1:
        yield leaves[0]
        return
    for i in range(1, len(leaves)):
        for a in all_bracketings(leaves[:i]):
            for b in all_bracketings(leaves[i:]):
                yield (a, b)


def format_tree(t: Tree, name=str) -> str:
    if isinstance(t, int):
        return name(t)
    return f"[{format_tree(t[0], name)},{format_tree(t[1], name)}]"


# ---------------------------------------------------------------------------
# indexed generators and the Frobenius action


@dataclass(frozen=True)
class GeneratorLabel:
    orbit: int  # s, 1-based
    power: int  # t in 0..q-1
    index: int  # r^t * i_s mod n


@dataclass(frozen=True)
class Prop2Instance:
    p: int
    k: int
    q: int
    r: int
    c: int
    indices: tuple[int, ...]
    w_cap: int = 8

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(i) % self.n for i in self.indices))

    @property
    def n(self) -> int:
        return self.p**self.k

    @property
    def f(self) -> int:
        return len(self.indices)

    @property
    def num_letters(self) -> int:
        return self.q * self.f

    def letter(self, s: int, t: int) -> int:
        return (s - 1) * self.q + t % self.q

    def label(self, letter: int) -> GeneratorLabel:
        s, t = divmod(letter, self.q)
        return GeneratorLabel(s + 1, t, pow(self.r, t, self.n) * self.indices[s] % self.n)

    def letter_index(self, letter: int) -> int:
        return self.label(letter).index

    def letter_name(self, letter: int) -> str:
        lab = self.label(letter)
        return f"y{lab.index}" + "'" * (lab.orbit - 1) if self.f <= 4 else f"y{lab.index}_{lab.orbit}"

    def word_index(self, w: Word) -> int:
        return sum(self.letter_index(x) for x in w) % self.n

    def tree_index(self, t: Tree) -> int:
        return sum(self.letter_index(x) for x in tree_leaves(t)) % self.n

    def has_zero_sum_subtree(self, t: Tree) -> bool:
        return any(self.tree_index(s) == 0 for s in subtrees(t))

    def validate(self) -> list[str]:
        from .frobenius import FHSpec, validate_fh

        problems = list(validate_fh(FHSpec(self.p, self.k, self.q, self.r)).violations)
        if any(i == 0 for i in self.indices):
            problems.append("all indices must be nonzero modulo n")
        if not self.indices:
            problems.append("at least one index is needed")
        return problems

    def target_tree(self) -> Tree:
        return left_normed([self.letter(s, 0) for s in range(1, self.f + 1)])


def index_of(e: FreeElement, inst: Prop2Instance) -> set[int]:
    return {inst.word_index(w) for w, _ in e.terms}


def h_action(e: FreeElement, inst: Prop2Instance, times: int = 1) -> FreeElement:
    """Apply ``h``: generator ``(s, t)`` goes to ``(s, t + 1 mod q)``."""
    q = inst.q

    def sigma(x: int) -> int:
        s, t = divmod(x, q)
        return s * q + (t + times) % q

    return e.map_letters(sigma)


def homogeneous_part(e: FreeElement, i: int, inst: Prop2Instance) -> FreeElement:
    return FreeElement(tuple((w, c) for w, c in e.terms if inst.word_index(w) == i % inst.n))


def hat_projection(z: FreeElement, i: int, inst: Prop2Instance) -> FreeElement:
    """``sum_s omega^(-i s) z^(phi^s)``.

    ``phi`` multiplies a basis bracket of index ``j`` by ``omega^j``, so the
    geometric sums collapse and only ``n`` times the index-``i`` part survives.
    """
    return homogeneous_part(z, i, inst) * inst.n


# ---------------------------------------------------------------------------
# weight slices of the ideal generated by the zero-index component


def content(w: Sequence[int], num_letters: int) -> tuple[int, ...]:
    cnt = Counter(w)
    return tuple(cnt.get(i, 0) for i in range(num_letters))


@lru_cache(maxsize=None)
def _words_by_content(num_letters: int, weight: int) -> dict[tuple[int, ...], tuple[Word, ...]]:
    out: dict[tuple[int, ...], list[Word]] = {}
    for w in lyndon_words(num_letters, weight):
        if len(w) == weight:
            out.setdefault(content(w, num_letters), []).append(w)
    return {k: tuple(v) for k, v in out.items()}


@dataclass
class SliceLattice:
    """A weight slice of an integer sublattice of the free Lie ring, stored as
    one Hermite-form lattice per multidegree (the ideals here are
    multihomogeneous)."""

    num_letters: int
    weight: int
    blocks: dict[tuple[int, ...], ea.IntLattice] = field(default_factory=dict)

    def coords(self, md: tuple[int, ...]) -> tuple[Word, ...]:
        return _words_by_content(self.num_letters, self.weight).get(md, ())

    def vector(self, e: FreeElement, md: tuple[int, ...]) -> list[int]:
        cf = e.coeffs
        return [cf.get(w, 0) for w in self.coords(md)]

    def add(self, e: FreeElement) -> None:
        by_md: dict[tuple[int, ...], dict] = {}
        for w, c in e.terms:
            if len(w) != self.weight:
                raise ValueError("element of the wrong weight")
            by_md.setdefault(content(w, self.num_letters), {})[w] = c
        for md, part in by_md.items():
            basis_md = self.coords(md)
            lat = self.blocks.setdefault(md, ea.IntLattice(len(basis_md)))
            lat.add([part.get(w, 0) for w in basis_md])

    def __contains__(self, e: FreeElement) -> bool:
        by_md: dict[tuple[int, ...], dict] = {}
        for w, c in e.terms:
            if len(w) != self.weight:
                return False
            by_md.setdefault(content(w, self.num_letters), {})[w] = c
        for md, part in by_md.items():
            lat = self.blocks.get(md)
            vec = [part.get(w, 0) for w in self.coords(md)]
            if lat is None or vec not in lat:
                return False
        return True

    def _nonzero_blocks(self):
        return {md: lat.rows for md, lat in self.blocks.items() if lat.rank}

    def __eq__(self, other):
        return (
            isinstance(other, SliceLattice)
            and (self.num_letters, self.weight) == (other.num_letters, other.weight)
            and self._nonzero_blocks() == other._nonzero_blocks()
        )

    @property
    def rank(self) -> int:
        return sum(lat.rank for lat in self.blocks.values())

    def is_zero(self) -> bool:
        return self.rank == 0


def zero_index_basis(inst: Prop2Instance, weight: int) -> list[Word]:
    return [
        w for w in lyndon_words(inst.num_letters, weight) if len(w) == weight and inst.word_index(w) == 0
    ]


def zero_sum_generators(inst: Prop2Instance, weight: int, md: tuple[int, ...] | None = None) -> Iterator[Tree]:
    """Left-normed brackets ``[b, g_1, ..., g_j]`` with ``b`` a zero-index
    basis bracket; restricted to multidegree ``md`` when given."""
    g = inst.num_letters
    for w0 in range(2, weight + 1):
        for b in zero_index_basis(inst, w0):
            cb = content(b, g)
            if md is not None:
                if any(x > y for x, y in zip(cb, md)):
                    continue
                rest = [i for i in range(g) for _ in range(md[i] - cb[i])]
                tails = set(itertools.permutations(rest))
            else:
                tails = itertools.product(range(g), repeat=weight - w0)
            for tail in tails:
                yield left_normed([lyndon_tree(b), *tail])


def zero_sum_component(inst: Prop2Instance, weight: int) -> SliceLattice:
    lat = SliceLattice(inst.num_letters, weight)
    for t in zero_sum_generators(inst, weight):
        lat.add(FreeElement.from_tree(t))
    return lat


def zero_sum_component_bruteforce(inst: Prop2Instance, weight: int) -> SliceLattice:
    """Span of every bracketing of weight ``weight`` that contains a subbracket
    with zero index sum (independent of the left-normed generation)."""
    lat = SliceLattice(inst.num_letters, weight)
    for leaves in itertools.product(range(inst.num_letters), repeat=weight):
        for t in all_bracketings(list(leaves)):
            if inst.has_zero_sum_subtree(t):
                e = FreeElement.from_tree(t)
                if e:
                    lat.add(e)
    return lat


def index_slice(inst: Prop2Instance, weight: int, i: int = 0) -> SliceLattice:
    """The lattice spanned by all basis brackets of weight ``weight`` and index ``i``."""
    lat = SliceLattice(inst.num_letters, weight)
    for w in lyndon_words(inst.num_letters, weight):
        if len(w) == weight and inst.word_index(w) == i % inst.n:
            lat.add(FreeElement.of({w: 1}))
    return lat


# ---------------------------------------------------------------------------
# the multiple-of-a-commutator verifier


@dataclass
class Prop2Report:
    instance: Prop2Instance
    target: Tree
    min_w: int | None
    witness: list[tuple[int, Tree]]
    generators: int
    verified: bool
    trace: list[str] = field(default_factory=list)

    @property
    def witness_size(self) -> int:
        return len(self.witness)


def expand_witness(witness: Sequence[tuple[int, Tree]]) -> FreeElement:
    total = FreeElement()
    for c, t in witness:
        total = total + FreeElement.from_tree(t) * c
    return total


def proposition2_min_w(inst: Prop2Instance) -> Prop2Report:
    """Smallest ``w <= inst.w_cap`` such that ``n^w`` times the left-normed
    commutator of the orbit representatives is an integer combination of
    weight-``f`` brackets that each contain a zero-sum subbracket."""
    problems = inst.validate()
    if problems:
        raise ValueError("invalid instance: " + "; ".join(problems))
    n, f = inst.n, inst.f
    target_tree = inst.target_tree()
    target = FreeElement.from_tree(target_tree)
    name = inst.letter_name
    trace = [f"target {format_tree(target_tree, name)} has index {inst.tree_index(target_tree)} mod {n}"]
    if inst.has_zero_sum_subtree(target_tree):
        trace.append("target already contains a zero-sum subbracket")
        return Prop2Report(inst, target_tree, 0, [(1, target_tree)], 1, True, trace)
    md = content(tree_leaves(target_tree), inst.num_letters)
    # J is multihomogeneous, so only brackets with the target's letters matter
    gens: list[Tree] = []
    vecs: list[list[int]] = []
    seen: set = set()
    coords = _words_by_content(inst.num_letters, f).get(md, ())
    for t in zero_sum_generators(inst, f, md):
        e = FreeElement.from_tree(t)
        cf = e.coeffs
        v = tuple(cf.get(w, 0) for w in coords)
        if any(v) and v not in seen and tuple(-x for x in v) not in seen:
            seen.add(v)
            gens.append(t)
            vecs.append(list(v))
    trace.append(f"{len(gens)} distinct generating brackets in the target multidegree")
    b = [target.coeffs.get(w, 0) for w in coords]
    if not gens:
        trace.append("no bracket in the target multidegree has a zero-sum subbracket")
        return Prop2Report(inst, target_tree, None, [], 0, True, trace)
    A = ea.transpose(vecs)
    for w in range(inst.w_cap + 1):
        x = ea.integer_solve(A, [n**w * y for y in b])
        if x is not None:
            witness = [(c, t) for c, t in zip(x, gens) if c]
            ok = expand_witness(witness) == target * n**w
            trace.append(f"n^{w} * target solved with {len(witness)} terms; re-expansion {'ok' if ok else 'FAILED'}")
            return Prop2Report(inst, target_tree, w, witness, len(gens), ok, trace)
    trace.append(f"no representation for w <= {inst.w_cap}")
    return Prop2Report(inst, target_tree, None, [], len(gens), True, trace)


def prop2_tsv(rep: Prop2Report) -> str:
    inst = rep.instance
    head = "p\tk\tn\tq\tr\tc\tf\tindices\tmin_w\twitness_size\tgenerators\tverified"
    row = [inst.p, inst.k, inst.n, inst.q, inst.r, inst.c, inst.f, ",".join(map(str, inst.indices)),
           "none" if rep.min_w is None else rep.min_w, rep.witness_size, rep.generators, rep.verified]
    return head + "\n" + "\t".join(str(x) for x in row) + "\n"


def hat_projection_direct(z: FreeElement, i: int, inst: Prop2Instance) -> dict[Word, list[int]]:
    """The projection computed literally in ``Z[omega]``: coefficients are
    coordinate vectors in the basis ``1, omega, ..., omega^(E-1)``."""
    n, p, k = inst.n, inst.p, inst.k
    E = ea.euler_phi(n)
    phi = ea.cyclotomic_poly_prime_power(p, k)

    def omega_power(e: int) -> list[int]:
        # reduce x^e modulo Phi over Z
        poly = [0] * (e % n) + [1]
        while len(poly) > E:
            lead = poly.pop()
            off = len(poly) - E
            for j in range(E):
                poly[off + j] -= lead * phi[j]
        return poly + [0] * (E - len(poly))

    out: dict[Word, list[int]] = {}
    for w, c in z.terms:
        j = inst.word_index(w)
        acc = [0] * E
        for s in range(n):
            for a, x in enumerate(omega_power((s * (j - i)) % n)):
                acc[a] += c * x
        if any(acc):
            out[w] = acc
    return out


def prop2_lattice_oracle(inst: Prop2Instance) -> int | None:
    """Least ``w <= w_cap`` with ``n^w`` target in the full weight-``f`` slice
    of ``J`` (all multidegrees, Hermite-form membership)."""
    lat = zero_sum_component(inst, inst.f)
    target = FreeElement.from_tree(inst.target_tree())
    for w in range(inst.w_cap + 1):
        if target * inst.n**w in lat:
            return w
    return None


def prop2_bounded_search(inst: Prop2Instance, box: int = 2, max_terms: int = 2) -> int | None:
    """Least ``w <= w_cap`` for which ``n^w`` target is a combination of at
    most two bracketings (any letters, any shape) that contain a zero-sum
    subbracket, with coefficients in ``[-box, box]``."""
    if max_terms not in (1, 2):
        raise ValueError("max_terms must be 1 or 2")
    f, g = inst.f, inst.num_letters
    cands: dict[tuple, FreeElement] = {}
    for leaves in itertools.product(range(g), repeat=f):
        for t in all_bracketings(list(leaves)):
            if f == 1 or inst.has_zero_sum_subtree(t):
                e = FreeElement.from_tree(t)
                if e:
                    cands.setdefault(e.terms, e)
    elems = list(cands.values())
    lookup = {e.terms: e for e in elems}
    target = FreeElement.from_tree(inst.target_tree())
    coeffs = [c for c in range(-box, box + 1) if c]
    for w in range(inst.w_cap + 1):
        goal = target * inst.n**w
        for c in coeffs:
            for e in elems:
                rest = goal - e * c
                if not rest:
                    return w
                if max_terms == 2:
                    for c2 in coeffs:
                        # rest = c2 * e2 requires rest divisible by c2
                        if all(v % c2 == 0 for _, v in rest.terms):
                            if FreeElement.of({k: v // c2 for k, v in rest.terms}).terms in lookup:
                                return w
    return None
