"""Finite Lie rings given by structure constants over ``Z/p^a``.

A :class:`LieRing` lives on ``(Z/p^a)^d`` modulo an optional relation span
``R`` (an ideal), which lets non-free abelian groups such as ``Z/9 + Z/3``
carry a Lie structure. Every sub-object returned by this module is a
:class:`~fhlie.exactalg.Span` that contains ``R``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import exactalg as ea
from .exactalg import Matrix, Span


class LieRingError(ValueError):
    pass


def _as_tensor(consts, d: int, m: int) -> np.ndarray:
    dtype = np.int64 if d * m * m < 2**62 else object
    C = np.zeros((d, d, d), dtype=dtype)
    for i in range(d):
        for j in range(d):
            for k in range(d):
                C[i, j, k] = int(consts[i][j][k]) % m
    return C


@dataclass(frozen=True)
class Violation:
    kind: str  # "alternating" | "skew" | "jacobi" | "relations"
    indices: tuple[int, ...]

    def __str__(self):
        return f"{self.kind} violated at {self.indices}"


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violation: Violation | None = None

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class Series:
    terms: tuple[Span, ...]
    length: int | None  # class / derived length; None if it stalled above zero

    @property
    def stabilized_at_zero(self) -> bool:
        return self.length is not None


class LieRing:
    """Lie ring on ``(Z/m)^d / relations`` with the given structure constants.

    ``consts[i][j]`` is the coordinate vector of ``[e_i, e_j]``. Use
    :meth:`from_brackets` to give only the pairs ``i < j``.
    """

    def __init__(self, modulus: int, consts, relations: Span | None = None):
        self.p, self.a = ea.prime_power(modulus)
        self.modulus = modulus
        self.d = len(consts)
        self.C = _as_tensor(consts, self.d, modulus)
        if relations is None:
            relations = Span.zero(self.d, modulus)
        if relations.d != self.d or relations.modulus != modulus:
            raise LieRingError("relations live in a different module")
        self.relations = relations

    @classmethod
    def from_brackets(cls, d: int, modulus: int, brackets: dict, relations: Span | None = None) -> "LieRing":
        consts = [[[0] * d for _ in range(d)] for _ in range(d)]
        for (i, j), vec in brackets.items():
            if i == j:
                raise LieRingError("diagonal bracket given")
            consts[i][j] = [x % modulus for x in vec]
            consts[j][i] = [-x % modulus for x in vec]
        return cls(modulus, consts, relations)

    @classmethod
    def abelian(cls, d: int, modulus: int, relations: Span | None = None) -> "LieRing":
        return cls(modulus, [[[0] * d for _ in range(d)] for _ in range(d)], relations)

    @property
    def consts(self) -> list[list[list[int]]]:
        return [[[int(x) for x in self.C[i, j]] for j in range(self.d)] for i in range(self.d)]

    def is_abelian_table(self) -> bool:
        return not np.any(self.C)

    # -- elements -----------------------------------------------------------

    def bracket(self, x: Sequence[int], y: Sequence[int]) -> ea.Vector:
        if len(x) != self.d or len(y) != self.d:
            raise LieRingError("dimension mismatch")
        m = self.modulus
        X = np.array([int(v) % m for v in x], dtype=self.C.dtype)
        Y = np.array([int(v) % m for v in y], dtype=self.C.dtype)
        T = np.tensordot(X, self.C, axes=(0, 0)) % m
        out = np.tensordot(Y, T, axes=(0, 0)) % m
        return tuple(int(v) for v in out)

    def bracket_table(self, xs: Sequence[Sequence[int]], ys: Sequence[Sequence[int]]) -> np.ndarray:
        """All brackets ``[x, y]`` as an array of shape ``(len(xs), len(ys), d)``."""
        m = self.modulus
        dt = self.C.dtype
        X = np.array([[int(v) % m for v in x] for x in xs], dtype=dt).reshape(len(xs), self.d)
        Y = np.array([[int(v) % m for v in y] for y in ys], dtype=dt).reshape(len(ys), self.d)
        T = np.tensordot(X, self.C, axes=(1, 0)) % m  # (a, j, k)
        return np.einsum("ajk,bj->abk", T, Y) % m

    def reduce(self, v: Sequence[int]) -> ea.Vector:
        return self.relations.reduce(v)

    def equal(self, x, y) -> bool:
        return tuple(a - b for a, b in zip(x, y)) in self.relations

    # -- spans --------------------------------------------------------------

    def full(self) -> Span:
        return Span.full(self.d, self.modulus)

    def zero(self) -> Span:
        return self.relations

    def span(self, vectors: Sequence[Sequence[int]]) -> Span:
        return self.relations.add_vectors(vectors)

    def order(self, S: Span | None = None) -> int:
        S = self.full() if S is None else S
        return (S + self.relations).order // self.relations.order

    def abelian_type(self, S: Span | None = None, T: Span | None = None) -> ea.AbelianType:
        """Type of ``S / T`` (defaults: the whole ring, the zero ideal)."""
        S = (self.full() if S is None else S) + self.relations
        T = self.relations if T is None else T + self.relations
        return ea.invariant_factors(S, T)

    def bracket_span(self, A: Span, B: Span) -> Span:
        if not A.rows or not B.rows:
            return self.relations
        tab = self.bracket_table(A.rows, B.rows)
        vecs = tab.reshape(-1, self.d).tolist()
        return self.relations.add_vectors(vecs)

    def closure(self, S: Span, mode: str = "subring") -> Span:
        if mode not in ("subring", "ideal"):
            raise ValueError(f"unknown closure mode {mode!r}")
        cur = S + self.relations
        whole = self.full()
        for _ in range(self.d * self.a + 2):
            other = cur if mode == "subring" else whole
            nxt = cur + self.bracket_span(cur, other)
            if nxt == cur:
                return cur
            cur = nxt
        raise LieRingError("closure did not stabilize")

    def ideal(self, vectors: Sequence[Sequence[int]]) -> Span:
        return self.closure(self.span(vectors), "ideal")

    def subring(self, vectors: Sequence[Sequence[int]]) -> Span:
        return self.closure(self.span(vectors), "subring")

    def lower_central_series(self) -> Series:
        terms = [self.full()]
        for _ in range(self.d * self.a + 1):
            if terms[-1] == self.relations:
                return Series(tuple(terms), len(terms) - 1)
            nxt = self.bracket_span(terms[-1], self.full())
            if nxt == terms[-1]:
                return Series(tuple(terms), None)
            terms.append(nxt)
        return Series(tuple(terms), None)

    def derived_series(self) -> Series:
        terms = [self.full()]
        for _ in range(self.d * self.a + 1):
            if terms[-1] == self.relations:
                return Series(tuple(terms), len(terms) - 1)
            nxt = self.bracket_span(terms[-1], terms[-1])
            if nxt == terms[-1]:
                return Series(tuple(terms), None)
            terms.append(nxt)
        return Series(tuple(terms), None)

    def nilpotency_class(self) -> int | None:
        return self.lower_central_series().length

    def derived_length(self) -> int | None:
        return self.derived_series().length

    # -- checks -------------------------------------------------------------

    def validate(self) -> ValidationReport:
        d, m, C = self.d, self.modulus, self.C
        R = self.relations
        for i in range(d):
            if tuple(int(x) for x in C[i, i]) not in R:
                return ValidationReport(False, Violation("alternating", (i,)))
        for i in range(d):
            for j in range(i + 1, d):
                s = tuple(int(x) + int(y) for x, y in zip(C[i, j], C[j, i]))
                if s not in R:
                    return ValidationReport(False, Violation("skew", (i, j)))
        for r in R.rows:
            for i in range(d):
                if self.bracket(r, ea.identity(d)[i]) not in R:
                    return ValidationReport(False, Violation("relations", (i,)))
        # J[i,j,k] = [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]
        A = np.tensordot(C, C, axes=(2, 0)) % m  # [[e_i,e_j],e_k] as (i,j,k,:)
        J = (A + A.transpose(1, 2, 0, 3) + A.transpose(2, 0, 1, 3)) % m
        for idx in zip(*np.nonzero((J != 0).any(axis=3))):
            i, j, k = (int(t) for t in idx)
            if tuple(int(x) for x in J[i, j, k]) not in R:
                return ValidationReport(False, Violation("jacobi", (i, j, k)))
        return ValidationReport(True)

    def is_automorphism(self, M: Matrix) -> bool:
        m, d = self.modulus, self.d
        R = self.relations
        if not R.image(M) <= R:
            return False
        if R + self.full().image(M) != self.full():
            return False
        E = ea.identity(d)
        images = [ea.mat_vec(M, E[i], m) for i in range(d)]
        tab = self.bracket_table(images, images)
        for i in range(d):
            for j in range(i + 1, d):
                lhs = ea.mat_vec(M, [int(x) for x in self.C[i, j]], m)
                rhs = tab[i, j]
                if tuple(int(x) - int(y) for x, y in zip(lhs, rhs)) not in R:
                    return False
        return True

    def fixed_subring(self, alpha: "LieMap") -> Span:
        if not self.is_automorphism(alpha.matrix):
            raise LieRingError("map is not an automorphism of the ring")
        M = ea.mat_add(alpha.matrix, ea.mat_scale(ea.identity(self.d), -1), self.modulus)
        fixed = ea.preimage(M, self.relations, self.d)
        assert self.bracket_span(fixed, fixed) <= fixed
        return fixed

    def change_basis(self, B: Matrix) -> "LieRing":
        """The same ring in new coordinates ``x' = B x`` (``B`` invertible)."""
        m, d = self.modulus, self.d
        Binv = ea.mat_inverse_mod(B, m)
        cols = [ea.mat_vec(Binv, ea.identity(d)[i], m) for i in range(d)]  # old coords of new e_i
        tab = self.bracket_table(cols, cols)
        consts = [[list(ea.mat_vec(B, [int(x) for x in tab[i, j]], m)) for j in range(d)] for i in range(d)]
        return LieRing(m, consts, self.relations.image(B))

    def __repr__(self):
        return f"LieRing(d={self.d}, m={self.modulus}, |R|={self.relations.order})"


@dataclass(frozen=True)
class LieMap:
    """A linear map ``x -> matrix @ x`` on a ring's carrier."""

    matrix: Matrix
    modulus: int
    relations: Span | None = None

    @property
    def d(self) -> int:
        return len(self.matrix)

    def _rel(self) -> Span:
        return self.relations if self.relations is not None else Span.zero(self.d, self.modulus)

    def __call__(self, x):
        return ea.mat_vec(self.matrix, x, self.modulus)

    def __matmul__(self, other: "LieMap") -> "LieMap":
        return LieMap(ea.mat_mul(self.matrix, other.matrix, self.modulus), self.modulus, self.relations)

    def power(self, e: int) -> "LieMap":
        if e < 0:
            return self.inverse().power(-e)
        return LieMap(ea.mat_pow(self.matrix, e, self.modulus), self.modulus, self.relations)

    def inverse(self) -> "LieMap":
        return LieMap(ea.mat_inverse_mod(self.matrix, self.modulus), self.modulus, self.relations)

    def is_identity(self) -> bool:
        R = self._rel()
        I = ea.identity(self.d)
        return all(tuple(a - b for a, b in zip(self.matrix_col(i), I[i])) in R for i in range(self.d))

    def matrix_col(self, i: int) -> ea.Vector:
        return tuple(row[i] for row in self.matrix)

    def has_order(self, n: int) -> bool:
        """Exact multiplicative order check by fast exponentiation."""
        if not self.power(n).is_identity():
            return False
        from sympy import primefactors

        return all(not self.power(n // q).is_identity() for q in primefactors(n))


# ---------------------------------------------------------------------------
# extension of scalars by a primitive p^k-th root of unity


def _omega_power_columns(p: int, k: int, a: int, count: int) -> list[list[int]]:
    """Coordinates of ``omega^s`` for ``s < count`` in the basis ``1..omega^(E-1)``."""
    m = p**a
    if k == 0:
        return [[1] for _ in range(count)]
    Cm = ea.cyclotomic_matrix(p, k, a)
    E = len(Cm)
    v = [1] + [0] * (E - 1)
    out = []
    for _ in range(count):
        out.append(v)
        v = list(ea.mat_vec(Cm, v, m))
    return out


@dataclass
class OmegaExtension:
    """``L (x) Z[omega]`` with coordinates ``(j, i) -> j*d + i`` where block
    ``j`` holds ``L (x) omega^j``."""

    base: LieRing
    p: int
    k: int
    ring: LieRing
    phi_ext: LieMap
    omega_ext: LieMap
    h_ext: LieMap | None = None
    r: int | None = None

    @property
    def n(self) -> int:
        return self.p**self.k

    @property
    def E(self) -> int:
        return ea.euler_phi(self.n)

    def lift(self, M: Matrix) -> Matrix:
        return ea.kron(ea.identity(self.E), M)

    def embed(self, v: Sequence[int], block: int = 0) -> ea.Vector:
        d = self.base.d
        out = [0] * (d * self.E)
        out[block * d : (block + 1) * d] = list(v)
        return tuple(out)

    def fixed_points(self, M: Matrix) -> Span:
        m = self.ring.modulus
        D = ea.mat_add(M, ea.mat_scale(ea.identity(len(M)), -1), m)
        return ea.preimage(D, self.ring.relations)


def extend_by_omega(L: LieRing, phi: Matrix | LieMap, k: int, h: Matrix | LieMap | None = None,
                    r: int | None = None, exact_order: bool = True) -> OmegaExtension:
    """``exact_order=False`` only asks ``phi^(p^k) = 1``: sections may carry
    a non-faithful action of ``F``."""
    phi_m = phi.matrix if isinstance(phi, LieMap) else phi
    h_m = h.matrix if isinstance(h, LieMap) else h
    p, a, d, m = L.p, L.a, L.d, L.modulus
    n = p**k
    M = LieMap(phi_m, m, L.relations)
    if not (M.has_order(n) if exact_order else M.power(n).is_identity()):
        raise LieRingError(f"phi does not have order {'' if exact_order else 'dividing '}{n}")
    if not L.is_automorphism(phi_m):
        raise LieRingError("phi is not an automorphism")
    E = ea.euler_phi(n)
    pw = _omega_power_columns(p, k, a, 2 * E - 1)
    PW = np.zeros((E, E, E), dtype=L.C.dtype)
    for s in range(E):
        for t in range(E):
            PW[s, t] = pw[s + t]
    big = np.einsum("ijl,stu->sitjul", L.C, PW) % m
    D = d * E
    big = big.reshape(D, D, D)
    rel = []
    for row in L.relations.rows:
        for j in range(E):
            v = [0] * D
            v[j * d : (j + 1) * d] = list(row)
            rel.append(v)
    ring = LieRing(m, big.tolist(), Span(rel, D, m))
    Ik = ea.identity(E)
    phi_ext = LieMap(ea.kron(Ik, phi_m), m, ring.relations)
    omega_m = ea.kron(ea.cyclotomic_matrix(p, k, a), ea.identity(d)) if k else ea.identity(D)
    omega_ext = LieMap(omega_m, m, ring.relations)
    h_ext = None
    if h_m is not None:
        h_ext = LieMap(ea.kron(Ik, h_m), m, ring.relations)
    return OmegaExtension(L, p, k, ring, phi_ext, omega_ext, h_ext, r)


@dataclass
class PhiComponents:
    components: list[Span]
    n: int
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def __getitem__(self, j: int) -> Span:
        return self.components[j % self.n]


def phi_components(ext: OmegaExtension, verify: bool = True) -> PhiComponents:
    W = ext.ring
    m, D, n = W.modulus, W.d, ext.n
    R = W.relations
    comps = []
    for j in range(n):
        Om = ext.omega_ext.power(j).matrix
        A = ea.mat_add(ext.phi_ext.matrix, ea.mat_scale(Om, -1), m)
        comps.append(ea.preimage(A, R, D))
    out = PhiComponents(comps, n)
    if verify:
        out.checks.update(verify_components(ext, out))
    return out


def components_sum(pc: PhiComponents, R: Span) -> Span:
    total = R
    for c in pc.components:
        total = total + c
    return total


def verify_components(ext: OmegaExtension, pc: PhiComponents) -> dict[str, bool]:
    W = ext.ring
    D, n = W.d, ext.n
    R = W.relations
    checks = {}
    total = components_sum(pc, R)
    checks["n*W in sum of components"] = all(
        tuple(n * x for x in e) in total for e in ea.identity(D)
    )
    checks["zero sums are n-torsion"] = zero_sums_are_torsion(pc, R)
    if not W.is_abelian_table():
        checks["bracket grading"] = all(
            W.bracket_span(pc[s], pc[t]) <= pc[s + t] for s in range(n) for t in range(n)
        )
    if ext.h_ext is not None and ext.r is not None:
        checks["h permutes components"] = all(
            pc[j].image(ext.h_ext.matrix) + R == pc[ext.r * j] for j in range(n)
        )
    return checks


def zero_sums_are_torsion(pc: PhiComponents, R: Span) -> bool:
    """If ``w_0 + ... + w_{n-1} = 0`` with ``w_i`` in ``W_i`` then ``n w_i = 0``.

    All solutions form a module; it is enough to test its generators.
    """
    n = pc.n
    gens = [(i, g) for i, c in enumerate(pc.components) for g in c.rows]
    if not gens:
        return True
    D, m = R.d, R.modulus
    A = [[g[row] for _, g in gens] for row in range(D)]
    sols = ea.preimage(A, R, len(gens))
    for c in sols.rows:
        parts = [[0] * D for _ in range(n)]
        for coeff, (i, g) in zip(c, gens):
            if coeff:
                parts[i] = [(x + coeff * y) % m for x, y in zip(parts[i], g)]
        if any(tuple(n * x for x in w) not in R for w in parts):
            return False
    return True


def format_lie_ring(L: LieRing) -> str:
    out = [f"{L.p} {L.a} {L.d}"]
    for i in range(L.d):
        for j in range(i + 1, L.d):
            out.append(f"{i + 1} {j + 1} " + " ".join(str(int(x)) for x in L.C[i, j]))
    return "\n".join(out) + "\n"


def parse_lie_ring(text: str) -> LieRing:
    """Line 1 ``p a d``; then ``i j c_1 ... c_d`` for ``i < j`` (1-based)."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise LieRingError("empty Lie ring text")
    p, a, d = map(int, lines[0].split())
    m = p**a
    ea.prime_power(m)
    brackets = {}
    for ln in lines[1:]:
        parts = list(map(int, ln.split()))
        if len(parts) != d + 2:
            raise LieRingError(f"bad line {ln!r}: expected i j and {d} coefficients")
        i, j = parts[0] - 1, parts[1] - 1
        if not (0 <= i < j < d):
            raise LieRingError(f"bad index pair in {ln!r}")
        brackets[(i, j)] = parts[2:]
    return LieRing.from_brackets(d, m, brackets)
