"""Irreducible p-adic characters of a cyclic group of prime-to-p order.

A character of order e | d is a Frobenius orbit (x -> p*x mod e) of
primitive residues; its degree is the residue degree of Q_p(mu_e).
Module decomposition realizes the fundamental idempotents as integer
polynomials in the generator action: factor x**d - 1 mod p by orbits,
Hensel-lift to the module's exponent, and lift the mod-p idempotents
with e -> 3e^2 - 2e^3.  That keeps everything in exact integer
arithmetic; no p-adic root of unity is ever constructed numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import divisors, factorize, mult_order, valuation
from .abgroup import FinAbGroup, Subgroup, subgroup_from_rows


@dataclass(frozen=True)
class PadicCharacter:
    d: int
    e: int
    orbit: frozenset[int]
    degree: int

    def is_trivial(self) -> bool:
        return self.e == 1

    def sort_key(self):
        return (self.e, min(self.orbit))

    def __repr__(self):
        return f"phi(e={self.e}, orbit={sorted(self.orbit)}, deg={self.degree})"


def enumerate_phi(d: int, p: int) -> list[PadicCharacter]:
    """All irreducible p-adic characters of a cyclic group of order d."""
    if d < 1:
        raise ValueError("d must be >= 1")
    if d % p == 0:
        raise ValueError(f"p={p} divides d={d}: non-semi-simple case not supported")
    out = []
    for e in divisors(d):
        if e == 1:
            out.append(PadicCharacter(d, 1, frozenset({0}), 1))
            continue
        deg = mult_order(p, e)
        seen: set[int] = set()
        for a in range(1, e):
            if a in seen or math.gcd(a, e) != 1:
                continue
            orbit = set()
            x = a
            while x not in orbit:
                orbit.add(x)
                x = x * p % e
            seen |= orbit
            assert len(orbit) == deg
            out.append(PadicCharacter(d, e, frozenset(orbit), deg))
    out.sort(key=PadicCharacter.sort_key)
    assert sum(phi.degree for phi in out) == d
    return out


# ---------------------------------------------------------------------------
# polynomial helpers over Z/p^M (dense ascending coefficient lists)


def _poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a, b, mod):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % mod
    return _poly_trim(out)


def _poly_divmod(a, b, mod):
    # b monic
    a = [x % mod for x in a]
    q = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b):
        c = a[-1]
        k = len(a) - len(b)
        q[k] = c
        for i, bi in enumerate(b):
            a[i + k] = (a[i + k] - c * bi) % mod
        _poly_trim(a)
        if len(a) >= len(b) and a[-1] == 0:
            _poly_trim(a)
    return _poly_trim(q), a


def _poly_xgcd_modp(a, b, p):
    # over F_p; returns (g monic, u, v) with u*a + v*b = g
    r0, r1 = [x % p for x in a], [x % p for x in b]
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while _poly_trim(r1[:]):
        lead = r1[-1]
        inv = pow(lead, -1, p)
        r1m = [(x * inv) % p for x in r1]
        q, r = _poly_divmod(r0, r1m, p)
        q = [(x * inv) % p for x in q]
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1, p), p)
        t0, t1 = t1, _poly_sub(t0, _poly_mul(q, t1, p), p)
    inv = pow(r0[-1], -1, p)
    return (
        [(x * inv) % p for x in r0],
        [(x * inv) % p for x in s0],
        [(x * inv) % p for x in t0],
    )


def _poly_sub(a, b, mod):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % mod for i in range(n)]
    return _poly_trim(out)


def _poly_add(a, b, mod):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % mod for i in range(n)]
    return _poly_trim(out)


# ---------------------------------------------------------------------------
# arithmetic in F_{p^s} = F_p[y]/(h), elements = ascending coeff tuples


class _Fq:
    def __init__(self, p: int, s: int):
        self.p = p
        self.s = s
        self.h = self._find_irreducible()

    def _mul(self, a, b):
        p, h = self.p, self.h
        out = _poly_mul(list(a), list(b), p)
        _, r = _poly_divmod(out, h, p)
        return tuple(r + [0] * (self.s - len(r)))[: self.s]

    def _pow(self, a, n):
        r = self.one
        while n:
            if n & 1:
                r = self._mul(r, a)
            a = self._mul(a, a)
            n >>= 1
        return r

    @property
    def one(self):
        return tuple([1] + [0] * (self.s - 1))

    @property
    def zero(self):
        return tuple([0] * self.s)

    def _find_irreducible(self):
        p, s = self.p, self.s
        if s == 1:
            return [0, 1]
        # lexicographic scan over monic polynomials of degree s
        counter = 0
        while True:
            coeffs = []
            c = counter
            for _ in range(s):
                coeffs.append(c % p)
                c //= p
            counter += 1
            cand = coeffs + [1]
            if self._is_irreducible(cand):
                return cand

    def _is_irreducible(self, h):
        p, s = self.p, len(h) - 1
        if h[0] == 0:
            return False

        def pow_mod(a, n):
            r = [1]
            while n:
                if n & 1:
                    r = _poly_divmod(_poly_mul(r, a, p), h, p)[1]
                a = _poly_divmod(_poly_mul(a, a, p), h, p)[1]
                n >>= 1
            return r

        def frob_power(k):
            # x^(p^k) mod h by k successive p-th powers
            cur = [0, 1]
            for _ in range(k):
                cur = pow_mod(cur, p)
            return cur

        # x^(p^s) == x mod h, and x^(p^(s/q)) != x for every prime q | s
        if _poly_trim(_poly_sub(frob_power(s), [0, 1], p)):
            return False
        for q, _ in factorize(s).factors:
            diff = _poly_sub(frob_power(s // q), [0, 1], p)
            g, _, _ = _poly_xgcd_modp(diff or [0], h, p)
            if len(g) > 1:
                return False
        return True

    def element_of_order(self, d: int):
        """Element of exact multiplicative order d (d | p^s - 1)."""
        q = self.p**self.s
        assert (q - 1) % d == 0
        qs = [r for r, _ in factorize(d).factors]
        counter = 1
        while True:
            # enumerate field elements deterministically
            coeffs = []
            c = counter
            for _ in range(self.s):
                coeffs.append(c % self.p)
                c //= self.p
            counter += 1
            z = tuple(coeffs)
            if z == self.zero:
                continue
            w = self._pow(z, (q - 1) // d)
            if w == self.zero:
                continue
            if all(self._pow(w, d // r) != self.one for r in qs):
                return w


@dataclass(frozen=True)
class HenselFactorization:
    """x**d - 1 split into orbit factors, lifted to precision p**M."""

    d: int
    p: int
    precision: int
    factors: tuple[tuple[PadicCharacter, tuple[int, ...]], ...]

    def factor_map(self) -> dict[PadicCharacter, tuple[int, ...]]:
        return dict(self.factors)


def _orbit_factors_mod_p(d: int, p: int, phis) -> dict[PadicCharacter, list[int]]:
    s = mult_order(p, d)
    fq = _Fq(p, s)
    omega = fq.element_of_order(d)
    # cache powers of the primitive d-th root
    pw = [fq.one]
    for _ in range(d - 1):
        pw.append(fq._mul(pw[-1], omega))
    out = {}
    for phi in phis:
        roots = [pw[(d // phi.e) * a % d] for a in sorted(phi.orbit)] if phi.e > 1 else [pw[0]]
        poly = [fq.one]  # coefficients in F_q, ascending
        for r in roots:
            neg_r = tuple((-c) % p for c in r)
            nxt = [fq.zero] * (len(poly) + 1)
            for i, ci in enumerate(poly):
                nxt[i + 1] = tuple((a + b) % p for a, b in zip(nxt[i + 1], ci))
                nxt[i] = tuple((a + b) % p for a, b in zip(nxt[i], fq._mul(ci, neg_r)))
            poly = nxt
        ints = []
        for c in poly:
            if any(c[1:]):
                raise AssertionError("orbit factor has a coefficient outside F_p")
            ints.append(c[0])
        assert len(ints) == phi.degree + 1
        out[phi] = ints
    return out


def _hensel_pair(f, g, h, p, M):
    """Lift f = g*h from mod p to mod p**M (g, h monic and coprime mod p)."""
    _, u, v = _poly_xgcd_modp(g, h, p)  # u*g + v*h = 1 mod p
    gk, hk = [x % p for x in g], [x % p for x in h]
    mod = p
    for _ in range(M - 1):
        mod *= p
        diff = _poly_sub([x % mod for x in f], _poly_mul(gk, hk, mod), mod)
        e = [x // (mod // p) for x in diff]  # defect divided by p^k, in [0, p)
        g0 = [x % p for x in gk]
        q, r = _poly_divmod(_poly_mul(v, e, p), g0, p)
        ucorr = _poly_add(_poly_mul(u, e, p), _poly_mul(q, hk, p), p)
        gk = _poly_add(gk, [(mod // p) * x % mod for x in r], mod)
        hk = _poly_add(hk, [(mod // p) * x % mod for x in ucorr], mod)
    return gk, hk


def factor_xd_minus_1(d: int, p: int, M: int) -> HenselFactorization:
    """Distinct-orbit factorization of x**d - 1, Hensel-lifted mod p**M."""
    if d % p == 0:
        raise ValueError("p must not divide d")
    if M < 1:
        raise ValueError("precision must be >= 1")
    phis = enumerate_phi(d, p)
    mod_p = _orbit_factors_mod_p(d, p, phis)
    modulus = p**M
    f = [0] * (d + 1)
    f[0], f[d] = modulus - 1, 1
    lifted: list[tuple[PadicCharacter, tuple[int, ...]]] = []
    remaining = [x % modulus for x in f]
    rem_phis = list(phis)
    while len(rem_phis) > 1:
        phi = rem_phis.pop(0)
        g = mod_p[phi]
        h = [1]
        for other in rem_phis:
            h = _poly_mul(h, mod_p[other], p)
        gk, hk = _hensel_pair(remaining, g, h, p, M)
        lifted.append((phi, tuple(gk)))
        remaining = hk
    lifted.append((rem_phis[0], tuple(remaining)))
    # exact verification of the lift
    prod = [1]
    for _, g in lifted:
        prod = _poly_mul(prod, list(g), modulus)
    assert prod == _poly_trim([x % modulus for x in f]), "Hensel product check failed"
    lifted.sort(key=lambda t: t[0].sort_key())
    return HenselFactorization(d, p, M, tuple(lifted))


@lru_cache(maxsize=None)
def idempotents(d: int, p: int, M: int) -> dict[PadicCharacter, tuple[int, ...]]:
    """Fundamental idempotents of (Z/p^M)[x]/(x**d - 1), one per character.

    Cached; callers must not mutate the returned dict.
    """
    fact = factor_xd_minus_1(d, p, M)
    modulus = p**M
    f = [0] * (d + 1)
    f[0], f[d] = -1 % modulus, 1
    out = {}
    total = [0]
    for phi, g in fact.factors:
        cof, rem = _poly_divmod(f, list(g), modulus)
        assert not rem
        # inverse of the cofactor mod (g, p), then idempotent-lift mod p^M
        _, u, _ = _poly_xgcd_modp(cof, list(g), p)
        e = _poly_divmod(_poly_mul(cof, u, modulus), f, modulus)[1]
        e = [x % modulus for x in e]
        for _ in range(max(1, M).bit_length() + 1):
            e2 = _poly_divmod(_poly_mul(e, e, modulus), f, modulus)[1]
            e3 = _poly_divmod(_poly_mul(e2, e, modulus), f, modulus)[1]
            e = _poly_sub([3 * x % modulus for x in e2], [2 * x % modulus for x in e3], modulus)
            e = _poly_divmod(e, f, modulus)[1]
        e2 = _poly_divmod(_poly_mul(e, e, modulus), f, modulus)[1]
        assert _poly_trim(_poly_sub(e2, e, modulus)) == [], "idempotent lift failed"
        out[phi] = tuple(e)
        total = _poly_add(total, e, modulus)
    assert _poly_trim([x % modulus for x in total]) == [1], "idempotents do not sum to 1"
    return out


# ---------------------------------------------------------------------------
# Galois modules


@dataclass(frozen=True)
class GaloisModule:
    """FinAbGroup with the action of a generator of a cyclic group of order d.

    sigma is a square matrix over Z: generator i maps to the vector
    sigma[i] (row convention, applied as v -> v @ sigma).
    """

    group: FinAbGroup
    sigma: tuple[tuple[int, ...], ...]
    d: int

    def __post_init__(self):
        r = self.group.rank
        sig = tuple(tuple(int(x) for x in row) for row in self.sigma)
        object.__setattr__(self, "sigma", sig)
        if len(sig) != r or any(len(row) != r for row in sig):
            raise ValueError("sigma must be square of size rank(group)")
        divs = self.group.divisors
        for i in range(r):
            for j in range(r):
                if (divs[i] * sig[i][j]) % divs[j] != 0:
                    raise ValueError("sigma does not respect the divisor relations")
        power = _matrix_identity(r)
        for _ in range(self.d):
            power = _matrix_mul_mod(power, sig, divs)
        if power != _matrix_identity_mod(r, divs):
            raise ValueError("sigma**d is not the identity on the group")

    def apply(self, coords) -> tuple[int, ...]:
        v = self.group.reduce(coords)
        divs = self.group.divisors
        out = [0] * len(v)
        for i, c in enumerate(v):
            if c:
                for j in range(len(v)):
                    out[j] += c * self.sigma[i][j]
        return tuple(x % d for x, d in zip(out, divs))

    def apply_poly(self, coeffs, coords) -> tuple[int, ...]:
        """Evaluate sum coeffs[k] * sigma**k at the vector."""
        divs = self.group.divisors
        acc = [0] * len(divs)
        cur = self.group.reduce(coords)
        for k, c in enumerate(coeffs):
            if c:
                for j in range(len(divs)):
                    acc[j] += c * cur[j]
            if k + 1 < len(coeffs):
                cur = self.apply(cur)
        return tuple(x % d for x, d in zip(acc, divs))


def _matrix_identity(r):
    return tuple(tuple(1 if i == j else 0 for j in range(r)) for i in range(r))


def _matrix_identity_mod(r, divs):
    return tuple(tuple((1 if i == j else 0) % divs[j] for j in range(r)) for i in range(r))


def _matrix_mul_mod(a, b, divs):
    r = len(a)
    out = []
    for i in range(r):
        row = []
        for j in range(r):
            row.append(sum(a[i][k] * b[k][j] for k in range(r)) % divs[j])
        out.append(tuple(row))
    return tuple(out)


def component_subgroups(module: GaloisModule, p: int) -> dict[PadicCharacter, Subgroup]:
    """phi-component of the module as a subgroup, per character."""
    group = module.group
    if group.is_trivial():
        return {phi: subgroup_from_rows(group, ()) for phi in enumerate_phi(module.d, p)}
    expo = group.exponent()
    M = valuation(expo, p)
    if p**M != expo:
        raise ValueError("module group is not a p-group")
    eps = idempotents(module.d, p, max(M, 1))
    r = group.rank
    basis_vecs = [tuple(1 if j == i else 0 for j in range(r)) for i in range(r)]
    out = {}
    for phi, e in sorted(eps.items(), key=lambda t: t[0].sort_key()):
        rows = [module.apply_poly(e, v) for v in basis_vecs]
        out[phi] = subgroup_from_rows(group, rows)
    total = 1
    for sub in out.values():
        total *= sub.order
    if total != group.order:
        raise ArithmeticError("component orders do not multiply to the group order")
    return out


def decompose(module: GaloisModule, p: int) -> dict[PadicCharacter, FinAbGroup]:
    """Map each p-adic character to the structure of its component."""
    if module.d % p == 0:
        raise ValueError("p divides d: non-semi-simple case not supported")
    return {phi: sub.snf_structure for phi, sub in component_subgroups(module, p).items()}


def monogenic_exponent(order_phi: int, rho: int) -> int | None:
    """a with p**(rho*a) = order; None when the component cannot be monogenic."""
    if order_phi == 1:
        return 0
    fac = factorize(order_phi).factors
    if len(fac) != 1:
        raise ValueError("order must be a prime power")
    _, v = fac[0]
    return v // rho if v % rho == 0 else None


def chi_resolve(d: int, per_subfield: dict[int, Fraction | int]) -> dict[int, Fraction]:
    """Recover per-character values from per-subfield products.

    per_subfield[t] is the product of the values over all characters of
    the degree-t subfield; induction over the divisor lattice isolates
    each character's value.
    """
    divs = divisors(d)
    missing = [t for t in divs if t not in per_subfield]
    if missing:
        raise ValueError(f"per_subfield lacks divisors {missing}")
    out: dict[int, Fraction] = {}
    for t in divs:
        prod = Fraction(1)
        for s in divs:
            if s != t and t % s == 0:
                prod *= out[s]
        val = Fraction(per_subfield[t]) / prod
        if val <= 0:
            raise ValueError(f"inconsistent data: non-positive value at divisor {t}")
        out[t] = val
    return out
