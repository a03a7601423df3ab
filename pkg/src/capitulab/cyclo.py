"""Exact arithmetic in cyclotomic fields and the cyclotomic-unit calculus.

Elements of Q(zeta_f) are rational-coefficient vectors modulo the f-th
cyclotomic polynomial, so every identity here is an exact polynomial
identity: the norm relations between levels, the Frobenius group-ring
exponents, the quadratic Gauss-sum descent of theta squared, and the
unit-power confirmation behind the index = class number law.  Floating
point appears in exactly one place, proposing the candidate exponent
that the exact power computation then confirms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import factorize, is_prime, is_squarefree, kronecker
from .quadf import FundUnit, fundamental_unit


@lru_cache(maxsize=None)
def cyclotomic_poly(f: int) -> tuple[int, ...]:
    """Phi_f by the division recursion over divisors, ascending coefficients."""
    if f < 1:
        raise ValueError("level must be >= 1")
    num = [-1] + [0] * (f - 1) + [1]  # x^f - 1
    for d in range(1, f):
        if f % d == 0:
            num = _int_poly_div(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _int_poly_div(num, den):
    num = num[:]
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        q, r = divmod(num[i + len(den) - 1], den[-1])
        assert r == 0
        out[i] = q
        for j, dj in enumerate(den):
            num[i + j] -= q * dj
    assert all(v == 0 for v in num)
    return out


def _phi_deg(f: int) -> int:
    return len(cyclotomic_poly(f)) - 1


def _reduce_int(vec, phi):
    """Remainder of an integer coefficient vector modulo monic phi."""
    vec = list(vec)
    deg = len(phi) - 1
    for i in range(len(vec) - 1, deg - 1, -1):
        c = vec[i]
        if c:
            for j in range(deg + 1):
                vec[i - deg + j] -= c * phi[j]
    return vec[:deg]


def _reduce_frac(vec, phi):
    vec = [Fraction(v) for v in vec]
    deg = len(phi) - 1
    for i in range(len(vec) - 1, deg - 1, -1):
        c = vec[i]
        if c:
            for j in range(deg + 1):
                vec[i - deg + j] -= c * phi[j]
    return vec[:deg]


class CycElem:
    """Element of Q(zeta_f), reduced modulo Phi_f."""

    __slots__ = ("level", "coeffs")

    def __init__(self, level: int, coeffs, reduce: bool = True):
        self.level = level
        phi = cyclotomic_poly(level)
        if reduce:
            if all(isinstance(c, int) for c in coeffs):
                red = _reduce_int(coeffs, phi)
            else:
                red = _reduce_frac(coeffs, phi)
        else:
            red = list(coeffs)
        deg = len(phi) - 1
        red = list(red) + [0] * (deg - len(red))
        self.coeffs = tuple(Fraction(c) for c in red)

    # -- constructors ------------------------------------------------------
    @staticmethod
    def rational(level: int, value) -> "CycElem":
        return CycElem(level, [Fraction(value)])

    @staticmethod
    def zeta(level: int) -> "CycElem":
        return CycElem(level, [0, 1])

    # constants ------------------------------------------------------------
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and all(c == 0 for c in self.coeffs[1:])

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def is_integral_vector(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    # -- ring operations ----------------------------------------------------
    def _check(self, other: "CycElem"):
        if self.level != other.level:
            raise ValueError(f"level mismatch: {self.level} vs {other.level}")

    def __eq__(self, other):
        return (
            isinstance(other, CycElem)
            and self.level == other.level
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.level, self.coeffs))

    def __add__(self, other: "CycElem") -> "CycElem":
        self._check(other)
        return CycElem(self.level, [a + b for a, b in zip(self.coeffs, other.coeffs)], reduce=False)

    def __sub__(self, other: "CycElem") -> "CycElem":
        self._check(other)
        return CycElem(self.level, [a - b for a, b in zip(self.coeffs, other.coeffs)], reduce=False)

    def __neg__(self) -> "CycElem":
        return CycElem(self.level, [-a for a in self.coeffs], reduce=False)

    def __mul__(self, other: "CycElem") -> "CycElem":
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if all(x.denominator == 1 for x in a) and all(x.denominator == 1 for x in b):
            ai = [x.numerator for x in a]
            bi = [x.numerator for x in b]
            out = [0] * (len(ai) + len(bi) - 1)
            for i, x in enumerate(ai):
                if x:
                    for j, y in enumerate(bi):
                        if y:
                            out[i + j] += x * y
            return CycElem(self.level, out)
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] += x * y
        return CycElem(self.level, out)

    def scale(self, q) -> "CycElem":
        q = Fraction(q)
        return CycElem(self.level, [q * c for c in self.coeffs], reduce=False)

    def inverse(self) -> "CycElem":
        """Extended Euclid against Phi_f over Q."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        phi = [Fraction(c) for c in cyclotomic_poly(self.level)]
        r0, r1 = phi, list(self.coeffs)
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while any(r1):
            while r1 and r1[-1] == 0:
                r1.pop()
            if not r1:
                break
            q, r = _frac_poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _frac_poly_sub(s0, _frac_poly_mul(q, s1))
        while r0 and r0[-1] == 0:
            r0.pop()
        if len(r0) != 1:
            raise ZeroDivisionError("element is a zero divisor (not coprime to Phi_f)")
        inv_lead = 1 / r0[0]
        return CycElem(self.level, [inv_lead * c for c in s0])

    def __pow__(self, k: int) -> "CycElem":
        if k < 0:
            return self.inverse() ** (-k)
        result = CycElem.rational(self.level, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def galois(self, a: int) -> "CycElem":
        """sigma_a: zeta -> zeta^a, for a coprime to the level."""
        f = self.level
        if math.gcd(a, f) != 1:
            raise ValueError(f"sigma_{a} is not a Galois element at level {f}")
        raw = [Fraction(0)] * f
        for i, c in enumerate(self.coeffs):
            if c:
                raw[(a * i) % f] += c
        return CycElem(f, raw)

    def __repr__(self):
        return f"CycElem(level={self.level}, coeffs={[str(c) for c in self.coeffs]})"


def _frac_poly_divmod(a, b):
    a = a[:]
    db = len(b) - 1
    lead = b[-1]
    q = [Fraction(0)] * max(0, len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] / lead
        if c:
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] -= c * b[j]
    while a and a[-1] == 0:
        a.pop()
    return q, a


def _frac_poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _frac_poly_sub(a, b):
    n = max(len(a), len(b))
    return [
        (a[i] if i < len(a) else Fraction(0)) - (b[i] if i < len(b) else Fraction(0))
        for i in range(n)
    ]


def eta(f: int) -> CycElem:
    """The cyclotomic number 1 - zeta_f (f > 1)."""
    if f < 2:
        raise ValueError("eta needs level > 1")
    return CycElem.rational(f, 1) - CycElem.zeta(f)


def embed(x: CycElem, f: int) -> CycElem:
    """Image of x under Q(zeta_m) -> Q(zeta_f), zeta_m -> zeta_f^(f/m)."""
    m = x.level
    if f % m:
        raise ValueError(f"{m} does not divide {f}")
    step = f // m
    raw = [Fraction(0)] * (step * (len(x.coeffs) - 1) + 1)
    for i, c in enumerate(x.coeffs):
        raw[step * i] = c
    return CycElem(f, raw)


@lru_cache(maxsize=None)
def _embedding_columns(f: int, m: int) -> tuple[tuple[Fraction, ...], ...]:
    cols = []
    z = CycElem.zeta(f) ** (f // m)
    cur = CycElem.rational(f, 1)
    for _ in range(_phi_deg(m)):
        cols.append(cur.coeffs)
        cur = cur * z
    return tuple(cols)


def descend(x: CycElem, m: int) -> CycElem:
    """Re-express x in Q(zeta_m); error when x is not in the subfield."""
    f = x.level
    if f % m:
        raise ValueError(f"{m} does not divide {f}")
    if f == m:
        return x
    cols = _embedding_columns(f, m)
    ncols = len(cols)
    nrows = _phi_deg(f)
    # Gaussian elimination on the augmented [cols | x]
    mat = [[cols[j][i] for j in range(ncols)] + [x.coeffs[i]] for i in range(nrows)]
    piv_rows = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, nrows) if mat[i][col] != 0), None)
        if piv is None:
            raise ArithmeticError("embedding columns are dependent (impossible)")
        mat[r], mat[piv] = mat[piv], mat[r]
        lead = mat[r][col]
        mat[r] = [v / lead for v in mat[r]]
        for i in range(nrows):
            if i != r and mat[i][col] != 0:
                c = mat[i][col]
                mat[i] = [v - c * w for v, w in zip(mat[i], mat[r])]
        piv_rows.append(r)
        r += 1
    for i in range(r, nrows):
        if mat[i][ncols] != 0:
            raise ArithmeticError(f"element does not lie in the level-{m} subfield")
    sol = [mat[i][ncols] for i in range(ncols)]
    return CycElem(m, sol)


def norm_to_level(x: CycElem, m: int) -> CycElem:
    """prod sigma_a(x) over a = 1 mod m, re-expressed at level m."""
    f = x.level
    if m < 2 or f % m:
        raise ValueError("m must be a divisor of the level, m > 1")
    if m == f:
        return x
    prod = CycElem.rational(f, 1)
    for a in range(1, f):
        if a % m == 1 and math.gcd(a, f) == 1:
            prod = prod * x.galois(a)
    return descend(prod, m)


@dataclass(frozen=True)
class GroupRingExp:
    """Element of Z[(Z/m)^*] acting as an exponent on level-m elements."""

    modulus: int
    terms: tuple[tuple[int, int], ...]  # (residue, coefficient), residue reduced

    @staticmethod
    def identity(m: int) -> "GroupRingExp":
        return GroupRingExp(m, ((1 % m, 1),))

    @staticmethod
    def from_dict(m: int, d: dict[int, int]) -> "GroupRingExp":
        items = tuple(sorted((a % m, c) for a, c in d.items() if c))
        return GroupRingExp(m, items)

    def as_dict(self) -> dict[int, int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def mul_one_minus(self, b: int) -> "GroupRingExp":
        """Multiply by (1 - tau_b)."""
        m = self.modulus
        out: dict[int, int] = {}
        for a, c in self.terms:
            out[a] = out.get(a, 0) + c
            key = a * b % m
            out[key] = out.get(key, 0) - c
        return GroupRingExp.from_dict(m, out)

    def __add__(self, other: "GroupRingExp") -> "GroupRingExp":
        assert self.modulus == other.modulus
        out = dict(self.terms)
        for a, c in other.terms:
            out[a] = out.get(a, 0) + c
        return GroupRingExp.from_dict(self.modulus, out)

    def apply_split(self, x: CycElem) -> tuple[CycElem, CycElem]:
        """(numerator, denominator) with x^self = num/den, both integral products."""
        if x.level != self.modulus:
            raise ValueError("element level does not match exponent modulus")
        num = CycElem.rational(x.level, 1)
        den = CycElem.rational(x.level, 1)
        for a, c in self.terms:
            conj = x.galois(a)
            if c > 0:
                num = num * conj**c
            elif c < 0:
                den = den * conj ** (-c)
        return num, den

    def apply(self, x: CycElem) -> CycElem:
        num, den = self.apply_split(x)
        return num * den.inverse()


def frobenius_omega(m: int, extra_primes) -> GroupRingExp:
    """Omega = prod over ell of (1 - tau_{ell^-1 mod m})."""
    out = GroupRingExp.identity(m)
    for ell in sorted(set(extra_primes)):
        if math.gcd(ell, m) != 1:
            raise ValueError(f"{ell} shares a factor with the modulus {m}")
        out = out.mul_one_minus(pow(ell, -1, m))
    return out


def verify_norm_relation(f: int, m: int):
    """Exact check of N(eta_f -> level m) == eta_m ** Omega.

    Returns (holds, witness); the witness carries both sides so a
    failure is reproducible.
    """
    if not (1 < m < f) or f % m:
        raise ValueError("need m | f with 1 < m < f")
    lhs = norm_to_level(eta(f), m)
    extra = [p for p, _ in factorize(f).factors if m % p != 0]
    omega = frobenius_omega(m, extra)
    num, den = omega.apply_split(eta(m))
    holds = lhs * den == num
    witness = {
        "f": f,
        "m": m,
        "omega": omega.as_dict(),
        "lhs": [str(c) for c in lhs.coeffs],
        "rhs_num": [str(c) for c in num.coeffs],
        "rhs_den": [str(c) for c in den.coeffs],
    }
    return holds, witness


def omega_invertibility(d: int, p: int, e: int, frobenius_residue: int) -> int:
    """v_p of the absolute norm of psi(1 - tau^{-1}) for an inert Frobenius.

    The norm is Phi_e(1) up to sign (e = order of the character, e > 1);
    value 0 certifies that Omega*e_phi is invertible in Z_p[mu_{g_phi}].
    """
    if e <= 1:
        raise ValueError("the trivial character is excluded")
    if d % e:
        raise ValueError("character order must divide d")
    if math.gcd(frobenius_residue, d) != 1:
        raise ValueError("Frobenius residue must generate (the inert case)")
    phi1 = sum(cyclotomic_poly(e))
    norm = abs(phi1)
    assert norm >= 1
    v = 0
    while norm % p == 0:
        norm //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# cyclotomic numbers theta and the unit-index machinery
#
# Construction happens in the naive group algebra Z[x]/(x^n - 1) where the
# factors zeta^a - zeta^-a are cyclic shifts, with one reduction mod Phi_n
# at the end.


def _raw_sparse_product(n: int, pairs) -> list[int]:
    vec = [0] * n
    vec[0] = 1
    for i_pos, i_neg in pairs:
        out = [0] * n
        for idx, c in enumerate(vec):
            if c:
                out[(idx + i_pos) % n] += c
                out[(idx + i_neg) % n] -= c
        vec = out
    return vec


def is_fundamental_discriminant(D: int) -> bool:
    if D <= 1:
        return False
    if D % 4 == 1:
        return is_squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def half_system(D: int) -> list[int]:
    """One representative of each pair {a, D-a} in ker(chi_D)."""
    return [
        a
        for a in range(1, (D + 1) // 2)
        if math.gcd(a, D) == 1 and kronecker(D, a) == 1
    ]


def sqrt_disc(D: int) -> CycElem:
    """sqrt(D) inside Q(zeta_2D) via the quadratic Gauss sum."""
    n = 2 * D
    raw = [0] * n
    for b in range(1, D):
        if math.gcd(b, D) == 1:
            raw[(2 * b) % n] += kronecker(D, b)
    g = CycElem(n, raw)
    assert g * g == CycElem.rational(n, D), "Gauss sum square check failed"
    return g


@dataclass(frozen=True)
class CycNumber:
    conductor: int
    half_system: tuple[int, ...]
    value: CycElem  # at level 2*conductor
    square_u: Fraction
    square_v: Fraction  # theta^2 = (u + v sqrt(D)) / 2


def theta_chi(D: int) -> CycNumber:
    """theta = prod over the half-system of (zeta_2D^a - zeta_2D^-a),
    with theta^2 descended to (u + v sqrt(D))/2 coordinates."""
    if not is_fundamental_discriminant(D):
        raise ValueError(f"{D} is not a real fundamental discriminant")
    n = 2 * D
    A = half_system(D)
    theta = CycElem(n, _raw_sparse_product(n, [(a % n, (n - a) % n) for a in A]))
    g = sqrt_disc(D)
    sq = theta * theta
    u, v = _solve_one_gauss(sq.scale(2), g)
    return CycNumber(conductor=D, half_system=tuple(A), value=theta, square_u=u, square_v=v)


def _solve_one_gauss(rhs: CycElem, g: CycElem) -> tuple[Fraction, Fraction]:
    """Exact (u, v) with rhs = u*1 + v*g; error when rhs is outside K."""
    j = next((i for i in range(1, len(g.coeffs)) if g.coeffs[i] != 0), None)
    if j is None:
        raise ArithmeticError("descent system singular: Gauss sum is rational")
    v = rhs.coeffs[j] / g.coeffs[j]
    u = rhs.coeffs[0] - v * g.coeffs[0]
    check = CycElem.rational(rhs.level, u) + g.scale(v)
    if check != rhs:
        raise ArithmeticError("element does not lie in the quadratic subfield")
    return u, v


def _solve_two_elems(rhs: CycElem, e1: CycElem, e2: CycElem) -> tuple[Fraction, Fraction]:
    """Exact (x, y) with rhs = x*e1 + y*e2 for independent e1, e2."""
    n = len(rhs.coeffs)
    for i in range(n):
        for j in range(i + 1, n):
            det = e1.coeffs[i] * e2.coeffs[j] - e1.coeffs[j] * e2.coeffs[i]
            if det != 0:
                x = (rhs.coeffs[i] * e2.coeffs[j] - rhs.coeffs[j] * e2.coeffs[i]) / det
                y = (e1.coeffs[i] * rhs.coeffs[j] - e1.coeffs[j] * rhs.coeffs[i]) / det
                if e1.scale(x) + e2.scale(y) == rhs:
                    return x, y
                raise ArithmeticError("element does not lie in the rank-2 span")
    raise ArithmeticError("descent system singular")


def cyclotomic_unit_exponent(f: int, dps: int = 100) -> int:
    """Exponent h' with (conjugate quotient of theta) = +-eps^(+-h').

    For prime conductor the cyclotomic number itself is not a unit
    (theta^2 = +-sqrt(f) * eps^-+h); the Galois quotient
    sigma_c(theta)/theta is, and its exponent against the fundamental
    unit realizes the unit index.  A 100-digit log proposes the
    exponent, exact power arithmetic in O_K confirms it.
    """
    import mpmath

    if not (is_prime(f) and f % 4 == 1):
        raise ValueError("f must be a prime = 1 mod 4")
    n = 2 * f
    A = half_system(f)
    theta = CycElem(n, _raw_sparse_product(n, [(a % n, (n - a) % n) for a in A]))
    c = next(a for a in range(2, f) if kronecker(f, a) == -1)
    c_lift = c if c % 2 == 1 else c + f
    theta_conj = theta.galois(c_lift)
    g = sqrt_disc(f)
    x, y = _solve_two_elems(theta_conj.scale(2), theta, g * theta)
    if x.denominator != 1 or y.denominator != 1:
        raise ArithmeticError("conjugate quotient is not integral")
    x, y = x.numerator, y.numerator
    if abs(x * x - f * y * y) != 4:
        raise ArithmeticError("conjugate quotient of theta is not a unit")
    eps = fundamental_unit(f)
    attempts = 0
    while True:
        mpmath.mp.dps = dps
        sf = mpmath.sqrt(f)
        uval = abs(x + y * sf) / 2
        eval_ = (eps.x + eps.y * sf) / 2
        cand = int(mpmath.nint(abs(mpmath.log(uval)) / mpmath.log(eval_)))
        for h in (cand, cand - 1, cand + 1):
            if h < 0:
                continue
            px, py = eps.power(h)
            if (x, y) in ((px, py), (-px, -py), (px, -py), (-px, py)):
                return h
        attempts += 1
        if attempts >= 3:
            raise ArithmeticError(
                f"exact confirmation failed around candidate {cand} for f={f}"
            )
        dps *= 2
