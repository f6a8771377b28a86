"""Exact linear algebra over ``Z/p^a`` and over the integers.

Submodules of ``(Z/p^a)^d`` are stored as :class:`Span` objects whose rows are
in Howell normal form, so that equality and membership are decidable by
comparing or reducing against the rows. Integer lattices use Hermite normal
form, and linear systems over ``Z`` are solved through the Smith form.

No floating point is used anywhere in this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from sympy import factorint

Matrix = list[list[int]]
Vector = tuple[int, ...]


class ModulusError(ValueError):
    pass


@lru_cache(maxsize=None)
def prime_power(m: int) -> tuple[int, int]:
    """Return ``(p, a)`` with ``m == p**a``; reject anything else."""
    if m < 2:
        raise ModulusError(f"modulus must be a prime power > 1, got {m}")
    f = factorint(m)
    if len(f) != 1:
        raise ModulusError(f"modulus {m} is not a prime power")
    ((p, a),) = f.items()
    return p, a


def valuation(x: int, p: int, cap: int | None = None) -> int:
    """p-adic valuation of ``x``; ``cap`` is returned for zero."""
    if x == 0:
        if cap is None:
            raise ValueError("valuation of 0")
        return cap
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def fraction_valuation(x: Fraction, p: int) -> int:
    return valuation(x.numerator, p) - valuation(x.denominator, p)


def fraction_mod(x: Fraction, m: int) -> int:
    """Image of a rational with denominator prime to ``m`` in ``Z/m``."""
    d = x.denominator % m
    if math.gcd(d, m) != 1:
        raise ArithmeticError(f"{x} is not integral modulo {m}")
    return x.numerator * pow(d, -1, m) % m


@dataclass(frozen=True)
class Residue:
    value: int
    modulus: int

    def __post_init__(self):
        prime_power(self.modulus)
        object.__setattr__(self, "value", self.value % self.modulus)

    def _coerce(self, other) -> int:
        if isinstance(other, Residue):
            if other.modulus != self.modulus:
                raise ModulusError("mixed moduli")
            return other.value
        return int(other)

    def __add__(self, other):
        return Residue(self.value + self._coerce(other), self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        return Residue(self.value - self._coerce(other), self.modulus)

    def __rsub__(self, other):
        return Residue(self._coerce(other) - self.value, self.modulus)

    def __mul__(self, other):
        return Residue(self.value * self._coerce(other), self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.modulus)

    def __int__(self):
        return self.value


# ---------------------------------------------------------------------------
# matrices over Z/m as nested lists of python ints


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def mat_mul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], m: int | None = None) -> Matrix:
    Bt = list(zip(*B))
    out = [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]
    if m is not None:
        out = [[x % m for x in row] for row in out]
    return out


def mat_vec(A: Sequence[Sequence[int]], v: Sequence[int], m: int | None = None) -> Vector:
    out = tuple(sum(a * b for a, b in zip(row, v)) for row in A)
    if m is not None:
        out = tuple(x % m for x in out)
    return out


def mat_add(A, B, m: int | None = None) -> Matrix:
    out = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]
    if m is not None:
        out = [[x % m for x in row] for row in out]
    return out


def mat_scale(A, c: int, m: int | None = None) -> Matrix:
    out = [[c * a for a in row] for row in A]
    if m is not None:
        out = [[x % m for x in row] for row in out]
    return out


def mat_pow(A: Matrix, e: int, m: int) -> Matrix:
    result = identity(len(A))
    base = [[x % m for x in row] for row in A]
    while e:
        if e & 1:
            result = mat_mul(result, base, m)
        e >>= 1
        if e:
            base = mat_mul(base, base, m)
    return result


def transpose(A: Sequence[Sequence[int]]) -> Matrix:
    return [list(col) for col in zip(*A)]


def block_diag(*blocks: Matrix) -> Matrix:
    n = sum(len(b) for b in blocks)
    out = zeros(n, n)
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(b)
    return out


def kron(A: Matrix, B: Matrix) -> Matrix:
    ra, ca, rb, cb = len(A), len(A[0]), len(B), len(B[0])
    return [[A[i // rb][j // cb] * B[i % rb][j % cb] for j in range(ca * cb)] for i in range(ra * rb)]


def mat_inverse_mod(A: Matrix, m: int) -> Matrix:
    """Inverse over ``Z/p^a``; raises if ``A`` is singular."""
    p, _ = prime_power(m)
    n = len(A)
    M = [[x % m for x in row] + [int(i == j) for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] % p), None)
        if piv is None:
            raise ArithmeticError("matrix is not invertible")
        M[c], M[piv] = M[piv], M[c]
        inv = pow(M[c][c], -1, m)
        M[c] = [x * inv % m for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                t = M[r][c]
                M[r] = [(x - t * y) % m for x, y in zip(M[r], M[c])]
    return [row[n:] for row in M]


def is_invertible_mod(A: Matrix, m: int) -> bool:
    try:
        mat_inverse_mod(A, m)
    except ArithmeticError:
        return False
    return True


# ---------------------------------------------------------------------------
# Howell normal form


def _howell_rows(rows: Iterable[Sequence[int]], d: int, m: int) -> tuple[Vector, ...]:
    p, a = prime_power(m)
    work = [[x % m for x in r] for r in rows]
    work = [r for r in work if any(r)]
    for r in work:
        if len(r) != d:
            raise ValueError(f"row of length {len(r)} in ambient dimension {d}")
    out: list[list[int]] = []
    pivots: list[tuple[int, int]] = []
    for c in range(d):
        best, best_v = None, a
        for idx, r in enumerate(work):
            if r[c]:
                v = valuation(r[c], p)
                if v < best_v:
                    best, best_v = idx, v
        if best is None:
            continue
        row = work.pop(best)
        unit = row[c] // p**best_v
        inv = pow(unit, -1, m)
        row = [x * inv % m for x in row]
        pv = p**best_v
        rest = []
        for r in work:
            if r[c]:
                t = r[c] // pv
                r = [(x - t * y) % m for x, y in zip(r, row)]
            if any(r):
                rest.append(r)
        # the annihilated pivot row carries the Howell property to later columns
        ann = [x * p ** (a - best_v) % m for x in row]
        if any(ann):
            rest.append(ann)
        work = rest
        out.append(row)
        pivots.append((c, pv))
    for j, (c, pv) in enumerate(pivots):
        for i in range(j):
            t = out[i][c] // pv
            if t:
                out[i] = [(x - t * y) % m for x, y in zip(out[i], out[j])]
    return tuple(tuple(r) for r in out)


class Span:
    """A submodule of ``(Z/p^a)^d`` held in Howell normal form.

    Two spans are equal exactly when their row tuples are equal.
    """

    __slots__ = ("d", "modulus", "p", "a", "rows", "__dict__")

    def __init__(self, rows: Iterable[Sequence[int]], d: int, modulus: int):
        self.p, self.a = prime_power(modulus)
        self.d = d
        self.modulus = modulus
        self.rows = _howell_rows(rows, d, modulus)

    @classmethod
    def zero(cls, d: int, modulus: int) -> "Span":
        return cls((), d, modulus)

    @classmethod
    def full(cls, d: int, modulus: int) -> "Span":
        return cls(identity(d), d, modulus)

    def __repr__(self):
        return f"Span(d={self.d}, m={self.modulus}, order={self.p}^{self.log_order})"

    def __eq__(self, other):
        return (
            isinstance(other, Span)
            and (self.d, self.modulus, self.rows) == (other.d, other.modulus, other.rows)
        )

    def __hash__(self):
        return hash((self.d, self.modulus, self.rows))

    def _check(self, other: "Span"):
        if (self.d, self.modulus) != (other.d, other.modulus):
            raise ValueError("spans live in different ambient modules")

    @cached_property
    def pivots(self) -> tuple[tuple[int, int], ...]:
        out = []
        for r in self.rows:
            c = next(i for i, x in enumerate(r) if x)
            out.append((c, r[c]))
        return tuple(out)

    @cached_property
    def log_order(self) -> int:
        return sum(self.a - valuation(pv, self.p) for _, pv in self.pivots)

    @property
    def order(self) -> int:
        return self.p**self.log_order

    def is_zero(self) -> bool:
        return not self.rows

    def reduce(self, v: Sequence[int]) -> Vector:
        m = self.modulus
        res = [x % m for x in v]
        for row, (c, pv) in zip(self.rows, self.pivots):
            x = res[c]
            if x:
                t, rem = divmod(x, pv)
                if t:
                    res = [(y - t * z) % m for y, z in zip(res, row)]
        return tuple(res)

    def __contains__(self, v: Sequence[int]) -> bool:
        if len(v) != self.d:
            raise ValueError("dimension mismatch")
        return not any(self.reduce(v))

    def contains(self, other: "Span") -> bool:
        self._check(other)
        return all(r in self for r in other.rows)

    def __le__(self, other: "Span") -> bool:
        return other.contains(self)

    def __add__(self, other: "Span") -> "Span":
        self._check(other)
        return Span(self.rows + other.rows, self.d, self.modulus)

    def add_vectors(self, vs: Iterable[Sequence[int]]) -> "Span":
        return Span(list(self.rows) + [list(v) for v in vs], self.d, self.modulus)

    def scale(self, c: int) -> "Span":
        return Span([[c * x for x in r] for r in self.rows], self.d, self.modulus)

    def image(self, A: Sequence[Sequence[int]]) -> "Span":
        """Image under ``x -> A x`` with ``A`` an ``e x d`` matrix."""
        e = len(A)
        return Span([mat_vec(A, r, self.modulus) for r in self.rows], e, self.modulus)

    def intersect(self, other: "Span") -> "Span":
        self._check(other)
        # x = sum a_i r_i = sum b_j s_j; kernel of [R^T | -S^T] projected through R^T
        gens = list(self.rows) + [[-x for x in s] for s in other.rows]
        if not self.rows or not other.rows:
            return Span.zero(self.d, self.modulus)
        K = kernel(transpose(gens), self.modulus)
        k = len(self.rows)
        vecs = []
        for coeffs in K.rows:
            vecs.append(
                [sum(coeffs[i] * self.rows[i][c] for i in range(k)) for c in range(self.d)]
            )
        return Span(vecs, self.d, self.modulus)

    def elements(self):
        """Enumerate all members (only for small spans)."""
        seen = {tuple([0] * self.d)}
        frontier = list(seen)
        m = self.modulus
        while frontier:
            nxt = []
            for v in frontier:
                for r in self.rows:
                    w = tuple((x + y) % m for x, y in zip(v, r))
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        return seen

    def omega(self, i: int) -> "Span":
        """Elements of ``self`` killed by ``p**i``."""
        within = preimage(mat_scale(identity(self.d), self.p**i), Span.zero(self.d, self.modulus))
        return self.intersect(within)


def howell_form(M: Sequence[Sequence[int]], modulus: int, d: int | None = None) -> Span:
    if d is None:
        if not M:
            raise ValueError("ambient dimension needed for an empty matrix")
        d = len(M[0])
    return Span(M, d, modulus)


def kernel(A: Sequence[Sequence[int]], modulus: int, d: int | None = None) -> Span:
    """``{x : A x = 0}`` for ``A`` an ``e x d`` matrix over ``Z/modulus``."""
    e = len(A)
    if d is None:
        if e == 0:
            raise ValueError("ambient dimension needed for an empty matrix")
        d = len(A[0])
    for row in A:
        if len(row) != d:
            raise ValueError("ragged matrix")
    aug = [[A[r][i] for r in range(e)] + [int(i == j) for j in range(d)] for i in range(d)]
    H = Span(aug, e + d, modulus)
    vecs = [row[e:] for row, (c, _) in zip(H.rows, H.pivots) if c >= e]
    return Span(vecs, d, modulus)


def preimage(A: Sequence[Sequence[int]], target: Span, d: int | None = None) -> Span:
    """``{x : A x in target}``."""
    e = target.d
    if d is None:
        d = len(A[0]) if A else 0
    if len(A) != e:
        raise ValueError("dimension mismatch")
    g = len(target.rows)
    big = [list(A[i]) + [-target.rows[j][i] for j in range(g)] for i in range(e)]
    K = kernel(big, target.modulus, d + g)
    return Span([r[:d] for r in K.rows], d, target.modulus)


# ---------------------------------------------------------------------------
# abelian p-groups


@dataclass(frozen=True)
class AbelianType:
    """Invariant factors ``p^e1 >= p^e2 >= ...`` of a finite abelian p-group."""

    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        fs = tuple(sorted((int(x) for x in self.invariant_factors if x != 1), reverse=True))
        primes = {prime_power(x)[0] for x in fs}
        if len(primes) > 1:
            raise ValueError("invariant factors for more than one prime")
        object.__setattr__(self, "invariant_factors", fs)

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[0] if self.invariant_factors else 1

    def __str__(self):
        if not self.invariant_factors:
            return "1"
        return " x ".join(f"Z/{x}" for x in self.invariant_factors)


def invariant_factors(generators: Span, relations: Span | None = None) -> AbelianType:
    """Type of ``generators / relations``.

    Uses the layer counts ``|p^j Q|`` of the quotient ``Q``; the number of
    invariant factors exceeding ``p^j`` is ``log_p |p^j Q : p^{j+1} Q|``.
    """
    if relations is None:
        relations = Span.zero(generators.d, generators.modulus)
    if not generators.contains(relations):
        raise ValueError("relations are not contained in the generators")
    p, a = generators.p, generators.a
    logs = []
    for j in range(a + 1):
        layer = generators.scale(p**j) + relations
        logs.append(layer.log_order - relations.log_order)
    factors = []
    for j in range(a):
        above = logs[j] - logs[j + 1]  # factors of order > p^j
        after = logs[j + 1] - logs[j + 2] if j + 2 <= a else 0
        factors += [p ** (j + 1)] * (above - after)
    return AbelianType(tuple(factors))


# ---------------------------------------------------------------------------
# cyclotomic companion matrices


def euler_phi(n: int) -> int:
    return math.prod((p - 1) * p ** (e - 1) for p, e in factorint(n).items()) if n > 1 else 1


def cyclotomic_poly_prime_power(p: int, k: int) -> list[int]:
    """Coefficients (constant first) of ``sum_{j<p} x^{j p^{k-1}}``."""
    step = p ** (k - 1)
    coeffs = [0] * ((p - 1) * step + 1)
    for j in range(p):
        coeffs[j * step] = 1
    return coeffs


def cyclotomic_matrix(p: int, k: int, a: int) -> Matrix:
    """Companion matrix of the ``p^k``-th cyclotomic polynomial mod ``p^a``.

    It represents multiplication by a primitive ``p^k``-th root of unity on
    ``Z[x]/(Phi)`` in the basis ``1, x, ..., x^(E-1)``.
    """
    if k < 1 or a < 1:
        raise ValueError("need k >= 1 and a >= 1")
    m = p**a
    phi = cyclotomic_poly_prime_power(p, k)
    E = len(phi) - 1
    C = zeros(E, E)
    for i in range(E - 1):
        C[i + 1][i] = 1
    for i in range(E):
        C[i][E - 1] = -phi[i] % m
    return C


def multiplicative_order_divides(A: Matrix, e: int, m: int) -> bool:
    return mat_pow(A, e, m) == identity(len(A))


# ---------------------------------------------------------------------------
# integer lattices


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, s, t)`` with ``s a + t b = g = gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


class IntLattice:
    """Sublattice of ``Z^n`` in row Hermite normal form (positive pivots,
    entries above each pivot reduced into ``[0, pivot)``)."""

    def __init__(self, n: int, vectors: Iterable[Sequence[int]] = ()):
        self.n = n
        self._rows: dict[int, list[int]] = {}
        for v in vectors:
            self.add(v)

    def add(self, v: Sequence[int]) -> bool:
        """Insert ``v``; return True if the lattice grew."""
        v = list(v)
        if len(v) != self.n:
            raise ValueError("dimension mismatch")
        grew = False
        c = 0
        while True:
            while c < self.n and v[c] == 0:
                c += 1
            if c == self.n:
                break
            row = self._rows.get(c)
            if row is None:
                if v[c] < 0:
                    v = [-x for x in v]
                self._rows[c] = v
                grew = True
                break
            if v[c] % row[c] == 0:
                t = v[c] // row[c]
                v = [x - t * y for x, y in zip(v, row)]
                continue
            g, s, t = xgcd(row[c], v[c])
            new = [s * x + t * y for x, y in zip(row, v)]
            a, b = row[c] // g, v[c] // g
            v = [a * y - b * x for x, y in zip(row, v)]
            self._rows[c] = new
            grew = True
        if grew:
            self._normalize()
        return grew

    def _normalize(self):
        cols = sorted(self._rows)
        for j, c in enumerate(cols):
            piv = self._rows[c]
            for cc in cols[:j]:
                r = self._rows[cc]
                t = r[c] // piv[c]
                if t:
                    self._rows[cc] = [x - t * y for x, y in zip(r, piv)]

    @property
    def rows(self) -> tuple[Vector, ...]:
        return tuple(tuple(self._rows[c]) for c in sorted(self._rows))

    @property
    def rank(self) -> int:
        return len(self._rows)

    def reduce(self, v: Sequence[int]) -> list[int]:
        v = list(v)
        for c in sorted(self._rows):
            if v[c]:
                row = self._rows[c]
                t = v[c] // row[c]
                if t:
                    v = [x - t * y for x, y in zip(v, row)]
        return v

    def __contains__(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def __eq__(self, other):
        return isinstance(other, IntLattice) and self.n == other.n and self.rows == other.rows

    def __repr__(self):
        return f"IntLattice(n={self.n}, rank={self.rank})"


def smith_form(A: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, D, V)`` with ``U A V = D`` diagonal, ``U``, ``V`` unimodular
    and each diagonal entry dividing the next."""
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(map(int, row)) for row in A]
    U = identity(m)
    V = identity(n)

    def row_op(M, i, j, a, b, c, d):
        # rows (i, j) <- (a*Ri + b*Rj, c*Ri + d*Rj)
        Ri, Rj = M[i], M[j]
        M[i] = [a * x + b * y for x, y in zip(Ri, Rj)]
        M[j] = [c * x + d * y for x, y in zip(Ri, Rj)]

    def col_op(M, i, j, a, b, c, d):
        for row in M:
            x, y = row[i], row[j]
            row[i] = a * x + b * y
            row[j] = c * x + d * y

    t = 0
    while t < min(m, n):
        nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        D[t], D[i] = D[i], D[t]
        U[t], U[i] = U[i], U[t]
        col_op(D, t, j, 0, 1, 1, 0)
        col_op(V, t, j, 0, 1, 1, 0)
        while True:
            changed = False
            for i in range(t + 1, m):
                if D[i][t] and D[i][t] % D[t][t] == 0:
                    q = D[i][t] // D[t][t]
                    row_op(D, t, i, 1, 0, -q, 1)
                    row_op(U, t, i, 1, 0, -q, 1)
                elif D[i][t]:
                    g, s, u = xgcd(D[t][t], D[i][t])
                    a, b = D[t][t] // g, D[i][t] // g
                    row_op(D, t, i, s, u, -b, a)
                    row_op(U, t, i, s, u, -b, a)
                    changed = True
            for j in range(t + 1, n):
                if D[t][j] and D[t][j] % D[t][t] == 0:
                    q = D[t][j] // D[t][t]
                    col_op(D, t, j, 1, 0, -q, 1)
                    col_op(V, t, j, 1, 0, -q, 1)
                elif D[t][j]:
                    g, s, u = xgcd(D[t][t], D[t][j])
                    a, b = D[t][t] // g, D[t][j] // g
                    col_op(D, t, j, s, u, -b, a)
                    col_op(V, t, j, s, u, -b, a)
                    changed = True
            if changed:
                continue
            piv = D[t][t]
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % piv),
                None,
            )
            if bad is None:
                break
            # fold an offending row into the pivot row to restore divisibility
            row_op(D, t, bad[0], 1, 1, 0, 1)
            row_op(U, t, bad[0], 1, 1, 0, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, D, V


def integer_solve(A: Sequence[Sequence[int]], b: Sequence[int]) -> list[int] | None:
    """An integer ``x`` with ``A x = b``, or ``None`` if there is none."""
    m = len(A)
    if m != len(b):
        raise ValueError("dimension mismatch")
    n = len(A[0]) if m else 0
    if n == 0:
        return [] if not any(b) else None
    U, D, V = smith_form(A)
    c = mat_vec(U, b)
    y = [0] * n
    for i in range(m):
        dii = D[i][i] if i < n else 0
        if dii == 0:
            if c[i]:
                return None
        else:
            q, r = divmod(c[i], dii)
            if r:
                return None
            y[i] = q
    return list(mat_vec(V, y))


# ---------------------------------------------------------------------------
# text format: "d e m" then e rows of d integers


def parse_matrix(text: str) -> tuple[Matrix, int]:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty matrix text")
    d, e, m = map(int, lines[0].split())
    rows = [list(map(int, ln.split())) for ln in lines[1 : 1 + e]]
    if len(rows) != e or any(len(r) != d for r in rows):
        raise ValueError(f"expected {e} rows of {d} integers")
    prime_power(m)
    return [[x % m for x in r] for r in rows], m


def format_matrix(A: Sequence[Sequence[int]], m: int) -> str:
    e = len(A)
    d = len(A[0]) if e else 0
    out = [f"{d} {e} {m}"]
    out += [" ".join(str(x % m) for x in row) for row in A]
    return "\n".join(out) + "\n"
