"""The Hausdorff series ``log(exp x exp y)`` and the groups it defines on
powerful Lie rings over ``Z/p^a``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np

from .. import exactalg as ea
from .. import freelie as fl
from ..liering import LieRing, LieMap

X, Y = 0, 1


def _exp(letter: int, w_max: int) -> dict:
    return {(letter,) * j: Fraction(1, factorial(j)) for j in range(w_max + 1)}


@lru_cache(maxsize=None)
def _series(w_max: int) -> tuple:
    z = fl.poly_mul(_exp(X, w_max), _exp(Y, w_max), w_max)
    z.pop((), None)
    total: dict = {}
    power = {(): Fraction(1)}
    for j in range(1, w_max + 1):
        power = fl.poly_mul(power, z, w_max)
        fl._poly_add(total, power, Fraction((-1) ** (j + 1), j))
    by_weight: dict[int, dict] = {}
    for word, c in total.items():
        by_weight.setdefault(len(word), {})[word] = c
    out = []
    for w in range(1, w_max + 1):
        coeffs = fl.to_lyndon(by_weight.get(w, {}))
        out.append(tuple(sorted(coeffs.items())))
    return tuple(out)


@dataclass(frozen=True)
class BchCoefficients:
    """Lyndon coordinates of the series up to ``w_max``; ``terms[w]`` lists
    ``(lyndon word in x=0, y=1, coefficient)``."""

    w_max: int
    terms: dict[int, tuple[tuple[fl.Word, Fraction], ...]]

    def coefficient(self, word: fl.Word) -> Fraction:
        return dict(self.terms.get(len(word), ())).get(tuple(word), Fraction(0))

    def denominator_valuation(self, w: int, p: int) -> int:
        """Largest power of ``p`` in a weight-``w`` denominator."""
        return max((-ea.fraction_valuation(c, p) for _, c in self.terms.get(w, ()) if c), default=0)


def bch_coefficients(w_max: int) -> BchCoefficients:
    if w_max < 1:
        raise ValueError("need w_max >= 1")
    s = _series(w_max)
    return BchCoefficients(w_max, {w: s[w - 1] for w in range(1, w_max + 1)})


def bch_rational(x, y, bracket, w_max: int):
    """Evaluate the series on elements of a nilpotent algebra given
    ``+``, scalar ``*`` and ``bracket``; used by the matrix oracle."""
    coeffs = bch_coefficients(w_max)
    cache: dict = {}

    def ev(t):
        if t in cache:
            return cache[t]
        v = (x, y)[t] if isinstance(t, int) else bracket(ev(t[0]), ev(t[1]))
        cache[t] = v
        return v

    total = None
    for w in range(1, w_max + 1):
        for word, c in coeffs.terms[w]:
            term = ev(fl.lyndon_tree(word)) * c
            total = term if total is None else total + term
    return total


class BchError(ValueError):
    pass


def _beta(p: int) -> int:
    return 2 if p == 2 else 1


def tail_horizon(p: int, a: int) -> int:
    """Weight beyond which every series term vanishes modulo ``p^a`` on a
    carrier with ``[L, L] <= p^beta L``: the term of weight ``w`` is divisible
    by ``p^(beta(w-1) - floor((w-1)/(p-1)))``."""
    b = _beta(p)

    def bound(w):
        return b * (w - 1) - (w - 1) // (p - 1)

    w = 1
    while bound(w + 1) < a:
        w += 1
    return w


class BchGroup:
    """``(Z/p^a)^d`` with ``x * y = log(exp x exp y)`` evaluated through the
    bracket of a powerful carrier.

    The carrier is ``p^beta L'`` (``beta = 2`` for ``p = 2``, else 1) for a
    Lie ring ``L'`` given by its constants: a weight-``w`` bracket of the
    carrier is ``p^(beta(w-1))`` times the same bracket in ``L'``, so the
    series coefficients are rescaled to ``p``-integral ones and every term is
    evaluated exactly modulo ``p^a``.  Passing ``L'`` rather than the carrier
    matters when ``p^beta`` vanishes modulo ``p^a``.  Elements are coded as
    ``x_0 + x_1 m + ... + x_(d-1) m^(d-1)``.
    """

    def __init__(self, reduced: LieRing, w_max: int | None = None):
        L = reduced
        if not L.relations.is_zero():
            raise BchError("the carrier must be free over Z/p^a")
        rep = L.validate()
        if not rep.ok:
            raise BchError(f"not a Lie ring: {rep.violation}")
        p, a, m = L.p, L.a, L.modulus
        b = _beta(p)
        self.p, self.a, self.modulus, self.d = p, a, m, L.d
        self.reduced_ring = L
        self.reduced = np.array(L.consts, dtype=np.int64) % m
        self.carrier = LieRing(m, ((self.reduced * p**b) % m).tolist())
        self._flat = self.reduced.reshape(L.d * L.d, L.d)
        horizon = tail_horizon(p, a) if w_max is None else w_max
        coeffs = bch_coefficients(horizon + 1)
        self.kappa: dict[int, list[tuple[fl.Tree, int]]] = {}
        for w in range(1, horizon + 2):
            row = []
            for word, c in coeffs.terms[w]:
                k = c * p ** (b * (w - 1))
                if k.denominator % p == 0:
                    raise BchError("truncation too small or carrier not powerful")
                kk = ea.fraction_mod(k, m)
                if kk:
                    row.append((fl.lyndon_tree(word), kk))
            self.kappa[w] = row
        self.w_t = max(w for w in range(1, horizon + 1) if self.kappa[w])
        # every weight-(W_t+1) term vanishes once rescaled and reduced
        self.certificate = not self.kappa[self.w_t + 1]
        if not self.certificate:
            raise BchError("truncation too small or carrier not powerful")
        self.order = m**self.d
        self._powers = m ** np.arange(self.d, dtype=np.int64)

    @classmethod
    def from_carrier(cls, carrier: LieRing, w_max: int | None = None) -> "BchGroup":
        """Divide the carrier's constants (as integers in ``[0, p^a)``) by
        ``p^beta``; refuses constants that are not divisible."""
        p, m = carrier.p, carrier.modulus
        q = p ** _beta(p)
        C = np.array(carrier.consts, dtype=np.int64) % m
        if (C % q).any():
            raise BchError(f"carrier not powerful: constants are not divisible by {q}")
        # quotients of residues are only defined mod p^(a-beta); dividing
        # both [e_i,e_j] and [e_j,e_i] separately would break skew symmetry
        d = carrier.d
        brackets = {(i, j): (C[i, j] // q).tolist() for i in range(d) for j in range(i + 1, d)}
        return cls(LieRing.from_brackets(d, m, brackets, carrier.relations), w_max)

    def __repr__(self):
        return f"BchGroup(p={self.p}, a={self.a}, d={self.d}, W_t={self.w_t})"

    # coding
    def encode(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=np.int64) % self.modulus) @ self._powers

    def decode(self, codes) -> np.ndarray:
        c = np.asarray(codes, dtype=np.int64)
        return (c[..., None] // self._powers) % self.modulus

    @property
    def identity(self) -> int:
        return 0

    def _bracket(self, U: np.ndarray, V: np.ndarray) -> np.ndarray:
        n, d = U.shape
        outer = (U[:, :, None] * V[:, None, :]).reshape(n, d * d)
        return (outer @ self._flat) % self.modulus

    def multiply_vectors(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        A = np.asarray(A, dtype=np.int64) % self.modulus
        B = np.asarray(B, dtype=np.int64) % self.modulus
        A, B = np.broadcast_arrays(A, B)
        shape = A.shape
        A = A.reshape(-1, self.d)
        B = B.reshape(-1, self.d)
        cache: dict = {}

        def ev(t):
            if t not in cache:
                cache[t] = (A, B)[t] if isinstance(t, int) else self._bracket(ev(t[0]), ev(t[1]))
            return cache[t]

        out = (A + B) % self.modulus
        for w in range(2, self.w_t + 1):
            for tree, k in self.kappa[w]:
                out = (out + k * ev(tree)) % self.modulus
        return out.reshape(shape)

    def mul(self, a, b) -> np.ndarray:
        return self.encode(self.multiply_vectors(self.decode(a), self.decode(b)))

    def inv(self, a) -> np.ndarray:
        return self.encode(-self.decode(a))

    def element(self, v) -> int:
        return int(self.encode(np.array(v)))

    def linear_map(self, M: ea.Matrix):
        """Code-level action of a linear automorphism ``x -> M x``."""
        A = np.array(M, dtype=np.int64)

        def act(codes):
            return self.encode(self.decode(codes) @ A.T)

        return act

    def is_automorphism(self, M: ea.Matrix, sample=None) -> bool:
        if not self.carrier.is_automorphism(M):
            return False
        act = self.linear_map(M)
        g = self.generators() if sample is None else np.asarray(sample)
        a, b = np.meshgrid(g, g)
        return bool((act(self.mul(a, b)) == self.mul(act(a), act(b))).all())

    def generators(self) -> np.ndarray:
        return self.encode(np.eye(self.d, dtype=np.int64))


def carrier_map(G: BchGroup, M: ea.Matrix) -> LieMap:
    return LieMap(M, G.modulus, G.carrier.relations)
