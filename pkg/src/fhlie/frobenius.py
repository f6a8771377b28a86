"""Frobenius groups ``F H`` with cyclic kernel acting on abelian groups and
Lie rings, and the checks built on the eigencomponent decomposition."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from . import exactalg as ea
from .exactalg import AbelianType, Matrix, Span
from .liering import LieMap, LieRing, OmegaExtension, PhiComponents, extend_by_omega, phi_components


class HypothesisError(ValueError):
    pass


@dataclass(frozen=True)
class FHSpec:
    """Kernel ``F = <phi>`` of order ``n = p^k``, complement ``H = <h>`` of
    order ``q``, and ``r`` with ``phi^(h^-1) = phi^r``."""

    p: int
    k: int
    q: int
    r: int

    @property
    def n(self) -> int:
        return self.p**self.k

    def orbit(self, j: int) -> list[int]:
        out, x = [], j % self.n
        for _ in range(self.q):
            out.append(x)
            x = x * self.r % self.n
        return out

    def regular_orbit_representatives(self) -> list[int]:
        """Smallest index of every ``H``-orbit on the nonzero indices."""
        seen, reps = set(), []
        for j in range(1, self.n):
            if j not in seen:
                reps.append(j)
                seen.update(self.orbit(j))
        return reps


@dataclass(frozen=True)
class FHReport:
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def validate_fh(spec: FHSpec) -> FHReport:
    bad = []
    p, k, q, r = spec.p, spec.k, spec.q, spec.r
    try:
        ea.prime_power(p)
        if ea.prime_power(p)[1] != 1:
            bad.append(f"p={p} is not prime")
    except ea.ModulusError:
        bad.append(f"p={p} is not prime")
        return FHReport(tuple(bad))
    if k < 1:
        bad.append("the kernel must be nontrivial (k >= 1)")
        return FHReport(tuple(bad))
    if q < 2:
        bad.append("the complement must be nontrivial (q >= 2)")
        return FHReport(tuple(bad))
    n = spec.n
    if math.gcd(r, n) != 1:
        bad.append(f"r={r} is not a unit modulo {n}")
        return FHReport(tuple(bad))
    if pow(r, q, n) != 1:
        bad.append(f"r^q = {pow(r, q, n)} != 1 modulo {n}")
    for j in range(1, q):
        if pow(r, j, n) == 1:
            bad.append(f"r^{j} = 1 modulo {n}: r does not have order q")
            break
    for j in range(1, q):
        if pow(r, j, p) == 1:
            fixed = [x for x in range(n) if (pow(r, j, n) * x - x) % n == 0]
            bad.append(f"h^{j} fixes {len(fixed)} elements of F (r^{j} = 1 modulo {p}); not Frobenius")
            break
    return FHReport(tuple(bad))


# ---------------------------------------------------------------------------
# polynomials over F_p (constant term first, trailing zeros trimmed)


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a, p):
    return _trim([x % p for x in a])


def poly_mul_p(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return poly_mod(out, p)


def poly_sub_p(a, b, p):
    n = max(len(a), len(b))
    return poly_mod([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)], p)


def poly_divmod_p(a, b, p):
    a = poly_mod(a, p)
    b = poly_mod(b, p)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        shift = len(a) - len(b)
        q[shift] = c
        for i, y in enumerate(b):
            a[shift + i] = (a[shift + i] - c * y) % p
        _trim(a)
    return _trim(q), a


def poly_monic(a, p):
    a = poly_mod(a, p)
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [x * inv % p for x in a]


def poly_pow_p(a, e, p):
    out = [1]
    for _ in range(e):
        out = poly_mul_p(out, a, p)
    return out


def charpoly_mod_p(A: Matrix, p: int) -> list[int]:
    """Characteristic polynomial over ``F_p`` via Hessenberg reduction."""
    n = len(A)
    H = [[x % p for x in row] for row in A]
    for c in range(n - 2):
        piv = next((r for r in range(c + 1, n) if H[r][c]), None)
        if piv is None:
            continue
        if piv != c + 1:
            H[c + 1], H[piv] = H[piv], H[c + 1]
            for row in H:
                row[c + 1], row[piv] = row[piv], row[c + 1]
        inv = pow(H[c + 1][c], -1, p)
        for r in range(c + 2, n):
            t = H[r][c] * inv % p
            if t:
                H[r] = [(x - t * y) % p for x, y in zip(H[r], H[c + 1])]
                for row in H:
                    row[c + 1] = (row[c + 1] + t * row[r]) % p
    # P_0 = 1; P_m = (x - h_mm) P_{m-1} - sum_i h_{i,m} (prod sub-diagonals) P_{i-1}
    polys = [[1]]
    for m in range(n):
        cur = poly_mul_p([-H[m][m], 1], polys[m], p)
        prod = 1
        for i in range(m - 1, -1, -1):
            prod = prod * H[i + 1][i] % p
            term = [x * prod * H[i][m] % p for x in polys[i]]
            cur = poly_sub_p(cur, term, p)
        polys.append(cur)
    return polys[n]


def polynomial_invariant_factors(A: Matrix, p: int) -> list[list[int]]:
    """Non-unit invariant factors of ``x I - A`` over ``F_p[x]`` (monic,
    each dividing the next), computed by a polynomial Smith reduction."""
    n = len(A)
    M = [[poly_mod(([-A[i][j]] if i != j else [-A[i][j], 1]), p) for j in range(n)] for i in range(n)]
    diag = []
    for t in range(n):
        while True:
            cand = [(len(M[i][j]), i, j) for i in range(t, n) for j in range(t, n) if M[i][j]]
            if not cand:
                break
            _, i, j = min(cand)
            M[t], M[i] = M[i], M[t]
            for row in M:
                row[t], row[j] = row[j], row[t]
            piv = M[t][t]
            dirty = False
            for i in range(t + 1, n):
                if M[i][t]:
                    q, _ = poly_divmod_p(M[i][t], piv, p)
                    M[i] = [poly_sub_p(x, poly_mul_p(q, y, p), p) for x, y in zip(M[i], M[t])]
                    dirty = dirty or bool(M[i][t])
            for j in range(t + 1, n):
                if M[t][j]:
                    q, _ = poly_divmod_p(M[t][j], piv, p)
                    for row in M:
                        row[j] = poly_sub_p(row[j], poly_mul_p(q, row[t], p), p)
                    dirty = dirty or bool(M[t][j])
            if dirty:
                continue
            bad = next(
                ((i, j) for i in range(t + 1, n) for j in range(t + 1, n)
                 if M[i][j] and poly_divmod_p(M[i][j], piv, p)[1]),
                None,
            )
            if bad is None:
                break
            M[t] = [poly_mod([a + b for a, b in _zip_pad(x, y)], p) for x, y in zip(M[t], M[bad[0]])]
        if not M[t][t]:
            raise ArithmeticError("x I - A cannot be singular")
        diag.append(poly_monic(M[t][t], p))
    return [f for f in diag if len(f) > 1]


def _zip_pad(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)]


def free_module_check(h: Matrix, p: int, q: int) -> bool:
    """Whether ``F_p^d`` with ``h`` acting is a free ``F_p<h>``-module.

    Since ``p`` does not divide ``q`` the polynomial ``x^q - 1`` is squarefree
    modulo ``p`` and the module is semisimple, hence determined by the
    characteristic polynomial of ``h``.
    """
    if q % p == 0:
        raise HypothesisError(f"p={p} divides q={q}")
    d = len(h)
    if ea.mat_pow(h, q, p) != ea.identity(d):
        raise HypothesisError("h^q is not the identity")
    if d % q:
        return False
    target = poly_pow_p(poly_mod([-1] + [0] * (q - 1) + [1], p), d // q, p)
    return charpoly_mod_p(h, p) == target


def free_module_oracle(h: Matrix, p: int, q: int) -> bool:
    """The same question answered by the rational canonical form: free means
    every invariant factor equals ``x^q - 1``."""
    d = len(h)
    if d % q:
        return False
    inv = polynomial_invariant_factors(h, p)
    xq = poly_mod([-1] + [0] * (q - 1) + [1], p)
    return inv == [xq] * (d // q)


# ---------------------------------------------------------------------------
# modules with an FH action


@dataclass
class FHModule:
    ring: LieRing
    phi: Matrix
    h: Matrix
    spec: FHSpec

    def __post_init__(self):
        if self.ring.p != self.spec.p:
            raise HypothesisError(
                f"module is a {self.ring.p}-group but the kernel has order {self.spec.n}"
            )

    @property
    def modulus(self) -> int:
        return self.ring.modulus

    def phi_map(self) -> LieMap:
        return LieMap(self.phi, self.modulus, self.ring.relations)

    def h_map(self) -> LieMap:
        return LieMap(self.h, self.modulus, self.ring.relations)

    def problems(self) -> list[str]:
        out = list(validate_fh(self.spec).violations)
        L, m, R = self.ring, self.modulus, self.ring.relations
        for name, M in (("phi", self.phi), ("h", self.h)):
            if not L.is_automorphism(M):
                out.append(f"{name} is not an automorphism")
        if out:
            return out
        # F may act with a kernel on a section, so only phi^n = 1 is required
        if not self.phi_map().power(self.spec.n).is_identity():
            out.append(f"phi^{self.spec.n} != 1")
        if not self.h_map().has_order(self.spec.q):
            out.append(f"h does not have order {self.spec.q}")
        hinv = ea.mat_inverse_mod(self.h, m)
        lhs = ea.mat_mul(ea.mat_mul(hinv, self.phi, m), self.h, m)
        rhs = ea.mat_pow(self.phi, self.spec.r, m)
        if any(
            tuple(x - y for x, y in zip(cl, cr)) not in R
            for cl, cr in zip(ea.transpose(lhs), ea.transpose(rhs))
        ):
            out.append("h^-1 phi h != phi^r")
        return out

    def check(self) -> None:
        problems = self.problems()
        if problems:
            raise HypothesisError("; ".join(problems))

    def extension(self) -> OmegaExtension:
        return extend_by_omega(self.ring, self.phi, self.spec.k, self.h, self.spec.r, exact_order=False)

    def centralizer(self, M: Matrix) -> Span:
        m = self.modulus
        D = ea.mat_add(M, ea.mat_scale(ea.identity(len(M)), -1), m)
        return ea.preimage(D, self.ring.relations)


@dataclass
class ThetaData:
    ext: OmegaExtension
    components: PhiComponents
    representatives: list[int]
    Y: Span
    theta: Matrix
    kernel: Span
    C_W_H: Span
    checks: dict[str, bool]


def theta_map(V: FHModule, ext: OmegaExtension | None = None, pc: PhiComponents | None = None) -> ThetaData:
    """``Y`` (one component per regular ``H``-orbit) and the orbit-sum map
    ``y -> y + y^h + ... + y^(h^(q-1))`` into ``C_W(H)``."""
    V.check()
    spec = V.spec
    ext = ext or V.extension()
    pc = pc or phi_components(ext, verify=False)
    W = ext.ring
    m, D, R = W.modulus, W.d, W.relations
    reps = spec.regular_orbit_representatives()
    Y = R
    for j in reps:
        Y = Y + pc[j]
    theta = ea.zeros(D, D)
    Hp = ea.identity(D)
    for _ in range(spec.q):
        theta = ea.mat_add(theta, Hp, m)
        Hp = ea.mat_mul(ext.h_ext.matrix, Hp, m)
    C_W_H = ext.fixed_points(ext.h_ext.matrix)
    ker = Y.intersect(ea.preimage(theta, R, D))
    ty = W.abelian_type(Y, ker)
    tc = W.abelian_type(C_W_H)
    checks = {
        "theta lands in C_W(H)": Y.image(theta) + R <= C_W_H,
        "p^k kills Ker theta": ker.scale(spec.n) + R == R,
        "|Y/Ker theta| <= |C_W(H)|": ty.order <= tc.order,
        "rank(Y/Ker theta) <= rank C_W(H)": ty.rank <= tc.rank,
        "exp(Y/Ker theta) <= exp C_W(H)": ty.exponent <= tc.exponent,
    }
    return ThetaData(ext, pc, reps, Y, theta, ker, C_W_H, checks)


@dataclass
class SectionReport:
    spec: FHSpec
    V_type: AbelianType
    W_order_log: int
    f: int
    U_type: AbelianType
    quotient_type: AbelianType
    C_V_H: AbelianType
    C_V_F: AbelianType
    context: tuple[int, int, int]  # (|C_P(F)|, rank r of C_P(H), exponent p^e of C_P(H))
    theta: ThetaData
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def abelian_section_lemma(V: FHModule, context: tuple[int, int, int] | None = None) -> SectionReport:
    """Build ``U = Omega_{f+k}(V)`` and re-verify every claimed bound."""
    if not V.ring.is_abelian_table():
        raise HypothesisError("the section must be abelian")
    V.check()
    spec = V.spec
    p, k, q, n = spec.p, spec.k, spec.q, spec.n
    L = V.ring
    ext = V.extension()
    pc = phi_components(ext)
    th = theta_map(V, ext, pc)
    W = ext.ring
    RW = W.relations
    E = ext.E

    exp_W0 = W.abelian_type(pc[0]).exponent
    p_f = max(n, exp_W0)
    f = ea.prime_power(p_f)[1] if p_f > 1 else 0

    def omega_in(Lring: LieRing, i: int) -> Span:
        return ea.preimage(ea.mat_scale(ea.identity(Lring.d), p**i), Lring.relations)

    U = omega_in(L, f + k)
    quot = ea.invariant_factors(L.full(), U)
    C_V_H = V.centralizer(V.h)
    C_V_F = V.centralizer(V.phi)
    tH = L.abelian_type(C_V_H)
    tF = L.abelian_type(C_V_F)
    if context is None:
        context = (tF.order, tH.rank, tH.exponent)
    _, r_rank, p_e = context

    checks: dict[str, bool] = {f"components: {key}": val for key, val in pc.checks.items()}
    checks.update({f"theta: {key}": val for key, val in th.checks.items()})
    checks["|W| = |V|^E"] = W.order() == L.order() ** E
    checks["|C_W(phi)| = |C_V(phi)|^E"] = W.order(ext.fixed_points(ext.phi_ext.matrix)) == L.order(C_V_F) ** E
    s = ea.prime_power(tF.order)[1] if tF.order > 1 else 0
    checks["rank V <= s p^k"] = L.abelian_type().rank <= s * n
    # U's defining data
    omega_f_W = omega_in(W, f)
    omega_fk_W = omega_in(W, f + k)
    checks["W_0 + Ker theta <= Omega_f(W)"] = (pc[0] + th.kernel) <= omega_f_W
    hY = th.Y
    orbit_sum = th.Y
    for _ in range(q - 1):
        hY = hY.image(ext.h_ext.matrix) + RW
        orbit_sum = orbit_sum + hY
    pkW = W.full().scale(n) + RW
    checks["image of p^k W in W/Omega_f(W) lies in image of Y + ... + Y^(h^(q-1))"] = pkW <= orbit_sum + omega_f_W
    img_order = W.order(pkW + omega_f_W) // W.order(omega_f_W)
    checks["|image of p^k W in W/Omega_f(W)| = |W/Omega_{f+k}(W)|"] = img_order == W.order() // W.order(omega_fk_W)
    ty = W.abelian_type(th.Y, th.kernel)
    tCW = W.abelian_type(th.C_W_H)
    quotW = W.order() // W.order(omega_fk_W)
    checks["|W/Omega_{f+k}(W)| <= |Y/Ker theta|^q <= |C_W(H)|^q"] = quotW <= ty.order**q <= tCW.order**q
    checks["|Omega_{f+k}(W)| = |Omega_{f+k}(V)|^E"] = W.order(omega_fk_W) == L.order(U) ** E
    # conclusions
    checks["(a) |V/U| <= |C_V(H)|^q"] = quot.order <= tH.order**q
    checks["(b) rank(V/U) <= r q"] = quot.rank <= r_rank * q
    checks["(c) exp(V/U) <= p^e"] = quot.exponent <= p_e
    return SectionReport(
        spec, L.abelian_type(), ea.prime_power(W.order())[1] if W.order() > 1 else 0, f,
        L.abelian_type(U), quot, tH, tF, context, th, checks,
    )


# ---------------------------------------------------------------------------
# module file: "p k q r", invariant factors, then phi and h as matrix blocks


def abelian_module(factors: Sequence[int]) -> LieRing:
    """The abelian group ``Z/f_1 + ... + Z/f_d`` on ``(Z/max f)^d``."""
    m = max(factors)
    d = len(factors)
    rel = [[f if i == j else 0 for j in range(d)] for i, f in enumerate(factors)]
    return LieRing.abelian(d, m, Span(rel, d, m))


def parse_module(text: str) -> FHModule:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if len(lines) < 2:
        raise ValueError("module file needs an FH line and an invariant-factor line")
    p, k, q, r = map(int, lines[0].split())
    factors = list(map(int, lines[1].split()))
    ring = abelian_module(factors)
    d, m = ring.d, ring.modulus
    rest = lines[2:]
    mats = []
    for _ in range(2):
        if not rest:
            raise ValueError("missing matrix block")
        dd, e, mm = map(int, rest[0].split())
        block = "\n".join(rest[: e + 1])
        M, mm = ea.parse_matrix(block)
        if (dd, e) != (d, d):
            raise ValueError(f"matrix must be {d} x {d}")
        if mm != m:
            M = [[x % m for x in row] for row in M]
        mats.append(M)
        rest = rest[e + 1 :]
    return FHModule(ring, mats[0], mats[1], FHSpec(p, k, q, r))


def _diagonal_factors(L: LieRing) -> list[int] | None:
    """Orders of the basis vectors if the relations are diagonal, else None."""
    m, d = L.modulus, L.d
    factors = []
    for i in range(d):
        e = [0] * d
        e[i] = 1
        factors.append(L.abelian_type(L.span([e])).order)
    diag = Span([[f if i == j else 0 for j in range(d)] for i, f in enumerate(factors)], d, m)
    return factors if diag == L.relations else None


def format_module(V: FHModule) -> str:
    """The text form; coordinates are first changed so that the relations
    become diagonal (Smith form of the relation lattice)."""
    factors = _diagonal_factors(V.ring)
    if factors is None:
        m, d = V.modulus, V.ring.d
        A = [list(r) for r in V.ring.relations.rows] + ea.mat_scale(ea.identity(d), m)
        _, _, Q = ea.smith_form(A)
        # rows of A Q are diagonal, so x -> Q^T x diagonalizes the relations
        V = _conjugate(V, [[x % m for x in row] for row in ea.transpose(Q)])
        factors = _diagonal_factors(V.ring)
        assert factors is not None
    s = V.spec
    out = [f"{s.p} {s.k} {s.q} {s.r}", " ".join(map(str, factors))]
    out.append(ea.format_matrix(V.phi, V.modulus).strip())
    out.append(ea.format_matrix(V.h, V.modulus).strip())
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# constructions


def _random_invertible(d: int, m: int, rng) -> Matrix:
    while True:
        B = [[rng.randrange(m) for _ in range(d)] for _ in range(d)]
        if ea.is_invertible_mod(B, m):
            return B


def _conjugate(V: FHModule, B: Matrix) -> FHModule:
    m = V.modulus
    Binv = ea.mat_inverse_mod(B, m)
    conj = lambda M: ea.mat_mul(ea.mat_mul(B, M, m), Binv, m)  # noqa: E731
    return FHModule(V.ring.change_basis(B), conj(V.phi), conj(V.h), V.spec)


def induced_module(spec: FHSpec, a: int, blocks: Sequence[tuple[int, int, int]] = ((0, 0, 1),),
                   trivial: Sequence[tuple[int, int]] = ()) -> FHModule:
    """``V = U + U^h + ... + U^(h^(q-1))`` with ``h`` shifting the copies.

    ``U`` is a sum of cyclic ``Z/p^b [x]/Phi_{p^j}`` pieces, each triple
    ``(b_drop, k_drop, u)`` giving ``b = a - b_drop``, ``j = k - k_drop`` and
    ``phi = x^u`` on it.  ``trivial`` adds ``Z/p^b`` summands (given as
    ``(b_drop, sign)``) on which ``phi`` is the identity and ``h`` acts as
    ``sign``.
    """
    p, k, q, r, n = spec.p, spec.k, spec.q, spec.r, spec.n
    m = p**a
    A_blocks, sizes = [], []
    for b_drop, k_drop, u in blocks:
        j = k - k_drop
        C = ea.cyclotomic_matrix(p, j, a) if j else [[1]]
        A_blocks.append(ea.mat_pow(C, u % n, m))
        sizes += [p ** (a - b_drop)] * len(C)
    A = ea.block_diag(*A_blocks)
    e = len(A)
    phi = ea.block_diag(*[ea.mat_pow(A, pow(r, t, n), m) for t in range(q)])
    shift = ea.zeros(q * e, q * e)
    for t in range(q):
        for i in range(e):
            shift[((t + 1) % q) * e + i][t * e + i] = 1
    factors = sizes * q
    phi_t, h_t = [], []
    for b_drop, sign in trivial:
        factors.append(p ** (a - b_drop))
        phi_t.append([[1]])
        h_t.append([[sign % m]])
    phi = ea.block_diag(phi, *phi_t)
    h = ea.block_diag(shift, *h_t)
    return FHModule(abelian_module(factors), phi, h, spec)


def random_fh_module(spec: FHSpec, a: int, rng, max_dim: int = 12) -> FHModule:
    """A random abelian FH-module over ``Z/p^a`` in scrambled coordinates."""
    E = ea.euler_phi(spec.n)
    size = spec.q * E
    if size > max_dim:
        raise HypothesisError(f"the smallest induced module has dimension {size} > {max_dim}")
    blocks = [(0, 0, 1)]
    for _ in range(rng.randrange(3)):
        k_drop = rng.randrange(spec.k + 1)
        extra = spec.q * (ea.euler_phi(spec.p ** (spec.k - k_drop)) if k_drop < spec.k else 1)
        if size + extra <= max_dim:
            u = rng.choice([x for x in range(1, spec.n) if x % spec.p])
            blocks.append((rng.randrange(a), k_drop, u))
            size += extra
    signs = [1, -1] if spec.q % 2 == 0 else [1]
    trivial = [(rng.randrange(a), rng.choice(signs)) for _ in range(min(rng.randrange(3), max_dim - size))]
    V = induced_module(spec, a, blocks, trivial)
    return _conjugate(V, _random_invertible(V.ring.d, V.modulus, rng))


def fpf_section_module(ell: int, spec: FHSpec, copies: int = 1, rng=None) -> tuple[Matrix, Matrix]:
    """``(phi, h)`` on ``(F_ell [x]/Phi_n)^copies`` with ``phi = x`` and
    ``h : x -> x^(r^-1)``; here ``ell`` is a prime other than ``p`` so ``F``
    acts without fixed points."""
    if ell == spec.p:
        raise HypothesisError("the section's prime must differ from p")
    n, r = spec.n, spec.r
    E = ea.euler_phi(n)
    C = _companion(ea.cyclotomic_poly_prime_power(spec.p, spec.k)[:-1], ell)
    rinv = pow(r, -1, n)
    # x^j -> x^(j rinv): reduce monomials modulo Phi_n with C acting on e_0
    H = ea.transpose([list(ea.mat_vec(ea.mat_pow(C, j * rinv % n, ell), ea.identity(E)[0], ell)) for j in range(E)])
    phi = ea.block_diag(*[C] * copies)
    h = ea.block_diag(*[H] * copies)
    if rng is not None:
        B = _random_invertible(len(phi), ell, rng)
        Binv = ea.mat_inverse_mod(B, ell)
        phi = ea.mat_mul(ea.mat_mul(B, phi, ell), Binv, ell)
        h = ea.mat_mul(ea.mat_mul(B, h, ell), Binv, ell)
    return phi, h


def _companion(coeffs: Sequence[int], m: int) -> Matrix:
    """Companion matrix of the monic polynomial with ``coeffs`` (constant
    term first, leading 1 omitted)."""
    e = len(coeffs)
    C = ea.zeros(e, e)
    for i in range(e - 1):
        C[i + 1][i] = 1
    for i in range(e):
        C[i][e - 1] = (-coeffs[i]) % m
    return C


def random_h_module(p: int, q: int, d: int, rng) -> Matrix:
    """A random matrix with ``h^q = 1`` over ``F_p``: companion blocks of
    random divisors of ``x^q - 1`` in scrambled coordinates."""
    from sympy.polys.domains import ZZ
    from sympy.polys.galoistools import gf_factor_sqf

    xq = [1] + [0] * (q - 1) + [p - 1]
    # factors come leading coefficient first; store them constant first
    irr = [[int(c) for c in reversed(f)] for f in gf_factor_sqf(xq, p, ZZ)[1]]
    blocks, size = [], 0
    while size < d:
        chosen = [g for g in irr if rng.random() < 0.5] or [rng.choice(irr)]
        f = [1]
        for g in chosen:
            f = poly_mul_p(f, g, p)
        if size + len(f) - 1 > d:
            f = [p - 1, 1]
        blocks.append(_companion(f[:-1], p))
        size += len(f) - 1
    h = ea.block_diag(*blocks)
    B = _random_invertible(d, p, rng)
    return ea.mat_mul(ea.mat_mul(B, h, p), ea.mat_inverse_mod(B, p), p)


# ---------------------------------------------------------------------------
# fixed points in sections


@dataclass(frozen=True)
class LemmaReport:
    C_G: int
    C_G_mod_N: int
    coprime: bool
    covering: bool  # C_{G/N}(alpha) == C_G(alpha) N / N
    checks: dict

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def lemma_checks(G, N, alpha) -> LemmaReport:
    """Fixed points of ``alpha`` (a code array or callable) on ``G`` and on
    the coset space ``G/N``; ``N`` must be ``alpha``-invariant."""
    import numpy as np

    from .pgroup import groups as gr

    x = np.arange(G.order)
    img = np.asarray(alpha(x) if callable(alpha) else alpha)
    if not (N.mask[img[N.elements()]]).all():
        raise HypothesisError("N is not alpha-invariant")
    fixed = img == x
    # gN is fixed iff g^-1 alpha(g) lies in N
    fixed_cosets = N.mask[G.mul(G.inv(x), img)]
    c_g = int(fixed.sum())
    c_gn = int(fixed_cosets.sum()) // N.order
    label = gr.cosets(G, N)
    covered = set(label[fixed].tolist())
    covering = covered == set(label[fixed_cosets].tolist())
    coprime = math.gcd(N.order, gr.automorphism_order(G, img)) == 1
    checks = {"|C_{G/N}(alpha)| <= |C_G(alpha)|": c_gn <= c_g}
    if coprime:
        checks["C_{G/N}(alpha) = C_G(alpha)N/N when (|N|, |alpha|) = 1"] = covering
    return LemmaReport(c_g, c_gn, coprime, covering, checks)


def rank_bound_check(A: LieRing, phi: Matrix) -> tuple[bool, int, int, int]:
    """``rank A <= s p^k`` for an automorphism of order ``p^k`` of an abelian
    ``p``-group with ``|C_A(phi)| = p^s``; returns (holds, rank, s, p^k)."""
    m = A.modulus
    M = LieMap(phi, m, A.relations)
    n = 1
    while not M.power(n).is_identity():
        n *= A.p
        if n > A.order():
            raise HypothesisError("phi does not have p-power order")
    C = ea.preimage(ea.mat_add(phi, ea.mat_scale(ea.identity(A.d), -1), m), A.relations)
    o = A.order(C)
    s = ea.prime_power(o)[1] if o > 1 else 0
    rank = A.abelian_type().rank
    return rank <= s * n, rank, s, n
