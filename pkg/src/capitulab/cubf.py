"""Cyclic cubic fields by conductor, their defining polynomials, and
Gaussian-period polynomials for the subcyclotomic layers.

A conductor f has 3-valuation 0 or 2, squarefree prime-to-3 part, and
every prime divisor of that part is 1 mod 3.  Writing 4f = a^2 + 27b^2
with the sign normalizations below reproduces the classical defining
polynomial; the first admissible b is chosen so printed polynomials
match published tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .arith import factorize, is_prime, is_squarefree, primitive_root, valuation


@dataclass(frozen=True)
class CyclicCubicField:
    f: int
    h3: int
    a: int
    b: int
    poly: tuple[int, ...]  # ascending coefficients, monic cubic

    def poly_str(self) -> str:
        return poly_to_string(self.poly)


def poly_to_string(coeffs) -> str:
    """PARI-style rendering: x^3 + x^2 - 54*x - 169."""
    deg = len(coeffs) - 1
    parts = []
    for k in range(deg, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        if k == 0:
            term = str(abs(c))
        elif k == 1:
            term = "x" if abs(c) == 1 else f"{abs(c)}*x"
        else:
            term = f"x^{k}" if abs(c) == 1 else f"{abs(c)}*x^{k}"
        if not parts:
            parts.append(term if c > 0 else f"-{term}")
        else:
            parts.append(f"+ {term}" if c > 0 else f"- {term}")
    return " ".join(parts) if parts else "0"


def canonical_poly_string(s: str) -> str:
    """Spacing-insensitive comparison key for printed polynomials."""
    return s.replace(" ", "")


def is_cubic_conductor(f: int) -> bool:
    h = valuation(f, 3)
    if h not in (0, 2):
        return False
    F = f // 3**h
    if F == 1:
        return h == 2
    if not is_squarefree(F):
        return False
    return all(p % 3 == 1 for p, _ in factorize(F).factors)


def enumerate_conductors(bf: int, Bf: int) -> list[int]:
    """All cyclic-cubic conductors in [bf, Bf]."""
    return [f for f in range(max(bf, 7), Bf + 1) if is_cubic_conductor(f)]


def defining_polynomials(f: int) -> list[CyclicCubicField]:
    """One field per (a, b) solution of 4f = a^2 + 27 b^2, ascending b.

    A conductor with t prime factors carries 2^(t-1) distinct cyclic
    cubic fields, one per admissible representation.

    h3 = 0: a = -a if a = 1 mod 3, P = x^3 + x^2 + (1-f)/3 x + (f(a-3)+1)/27.
    h3 = 2: skip 3 | b, a = -a if a = 3 mod 9, P = x^3 - f/3 x - f a/27.
    """
    if not is_cubic_conductor(f):
        raise ValueError(f"{f} is not the conductor of a cyclic cubic field")
    h = valuation(f, 3)
    bmax = math.isqrt(4 * f // 27)
    out = []
    for b in range(1, bmax + 1):
        if h == 2 and b % 3 == 0:
            continue
        A = 4 * f - 27 * b * b
        if A <= 0:
            continue
        a = math.isqrt(A)
        if a * a != A:
            continue
        if h == 0:
            if a % 3 == 1:
                a = -a
            c1 = (1 - f) // 3
            c0 = (f * (a - 3) + 1) // 27
            poly = (c0, c1, 1, 1)
        else:
            if a % 9 == 3:
                a = -a
            poly = (-f * a // 27, -f // 3, 0, 1)
        out.append(CyclicCubicField(f=f, h3=h, a=a, b=b, poly=poly))
    if not out:
        raise AssertionError(f"no representation 4f = a^2 + 27b^2 found for conductor {f}")
    return out


def defining_polynomial(f: int) -> CyclicCubicField:
    """The field of conductor f with the smallest admissible b."""
    return defining_polynomials(f)[0]


def poly_discriminant(coeffs) -> int:
    """Discriminant of a monic cubic x^3 + a x^2 + b x + c."""
    c, b, a, lead = coeffs
    assert lead == 1
    return 18 * a * b * c - 4 * a**3 * c + a * a * b * b - 4 * b**3 - 27 * c * c


def has_root_mod(coeffs, ell: int) -> bool:
    for x in range(ell):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * x + c) % ell
        if acc == 0:
            return True
    return False


def inert_primes(field: CyclicCubicField, p: int, N: int, bound: int,
                 congruence_modulus: int | None = None) -> list[int]:
    """Primes ell <= bound, ell = 1 mod 2p^N, ell prime to f, with the cubic
    irreducible mod ell (degree 3: no root suffices)."""
    assert len(field.poly) == 4, "root-absence test is only valid for cubics"
    modulus = congruence_modulus if congruence_modulus is not None else 2 * p**N
    out = []
    for ell in range(3, bound + 1, 2):
        if (ell - 1) % modulus or field.f % ell == 0 or not is_prime(ell):
            continue
        if not has_root_mod(field.poly, ell):
            out.append(ell)
    return out


def gaussian_period_poly(ell: int, deg: int) -> tuple[int, ...]:
    """Minimal polynomial of the degree-deg Gaussian periods of Q(zeta_ell).

    Expands prod_j (x - eta_j) with exact arithmetic in Z[zeta_ell]
    (vectors modulo x^ell - 1; an element is rational iff all nonzero-
    index coordinates agree).
    """
    if not is_prime(ell) or ell < 3:
        raise ValueError("ell must be an odd prime")
    if (ell - 1) % deg:
        raise ValueError(f"{deg} does not divide {ell - 1}")
    e, f0 = deg, (ell - 1) // deg
    g = primitive_root(ell)
    pw = [1]
    for _ in range(ell - 2):
        pw.append(pw[-1] * g % ell)
    periods = []
    for j in range(e):
        vec = [0] * ell
        for t in range(f0):
            vec[pw[j + e * t]] += 1
        periods.append(vec)

    def sparse_mul(dense, sparse):
        out = [0] * ell
        for i, ci in enumerate(sparse):
            if ci:
                for j, dj in enumerate(dense):
                    if dj:
                        out[(i + j) % ell] += ci * dj
        return out

    one = [0] * ell
    one[0] = 1
    coeffs = [one]  # polynomial in x with Z[zeta] coefficients, ascending
    for eta in periods:
        neg = [-v for v in eta]
        nxt = [[0] * ell for _ in range(len(coeffs) + 1)]
        for k, ck in enumerate(coeffs):
            for i in range(ell):
                nxt[k + 1][i] += ck[i]
            prod = sparse_mul(ck, neg)
            for i in range(ell):
                nxt[k][i] += prod[i]
        coeffs = nxt
    out = []
    for vec in coeffs:
        tail = set(vec[1:])
        if len(tail) != 1:
            raise AssertionError("period polynomial coefficient is not rational")
        out.append(vec[0] - vec[1])
    assert out[-1] == 1
    return tuple(out)
