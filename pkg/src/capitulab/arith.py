"""Integer kernel shared by every other module.

Primality, factorization, Kronecker symbols, multiplicative orders,
primitive roots and the squarefree core.  Everything is arbitrary
precision and deterministic for the input ranges the package uses
(Miller-Rabin with the witness set that is proven below 2**64).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Witnesses making Miller-Rabin deterministic for n < 3.3 * 10**24;
# in particular for everything below 2**64.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def is_prime(n: int) -> bool:
    """Primality test, deterministic for n < 2**64."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Factorization:
    """Complete factorization: value == prod(p**e for p, e in factors)."""

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        prev = 1
        for p, e in self.factors:
            if p <= prev or e < 1 or not is_prime(p):
                raise ValueError(f"invalid factor list for {self.value}")
            prev = p
            prod *= p**e
        if prod != self.value:
            raise ValueError(f"factors do not reconstruct {self.value}")

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


def _pollard_rho(n: int) -> int:
    # Brent's cycle variant; n odd composite, no factor below the
    # trial-division bound.
    if n % 2 == 0:
        return 2
    seed = 1
    while True:
        seed += 1
        y, c, m = seed, seed + 1, 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


_TRIAL_BOUND = 10**6


def factorize(n: int) -> Factorization:
    """Prime factorization by trial division, then Pollard rho."""
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    value = n
    fac: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            fac[p] = fac.get(p, 0) + 1
            n //= p
    # wheel over 6k+-1 up to the trial bound
    d = 7
    step = 4
    while d <= _TRIAL_BOUND and d * d <= n:
        while n % d == 0:
            fac[d] = fac.get(d, 0) + 1
            n //= d
        d += step
        step = 6 - step
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            fac[m] = fac.get(m, 0) + 1
            continue
        g = _pollard_rho(m)
        stack.append(g)
        stack.append(m // g)
    return Factorization(value, tuple(sorted(fac.items())))


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    divs = [1]
    for p, e in factorize(n).factors:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def core(n: int) -> int:
    """Squarefree kernel: product of the distinct primes of n."""
    if n < 1:
        raise ValueError("core expects n >= 1")
    out = 1
    for p, _ in factorize(n).factors:
        out *= p
    return out


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(n).factors)


def valuation(n: int, p: int) -> int:
    """Largest v with p**v | n (n != 0)."""
    if n == 0:
        raise ValueError("valuation of 0 is undefined")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), standard conventions."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    if a % 2 == 0 and n % 2 == 0:
        return 0
    k = 1
    if n < 0:
        n = -n
        if a < 0:
            k = -k
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v % 2 == 1:
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            k = -k
    # now n odd positive: Jacobi with reciprocity
    a %= n
    while a:
        v = 0
        while a % 2 == 0:
            a //= 2
            v += 1
        if v % 2 == 1 and n % 8 in (3, 5):
            k = -k
        if a % 4 == 3 and n % 4 == 3:
            k = -k
        a, n = n % a, a
    return k if n == 1 else 0


def _carmichael(n: int) -> int:
    lam = 1
    for p, e in factorize(n).factors:
        if p == 2:
            block = 1 if e == 1 else (2 if e == 2 else 2 ** (e - 2))
        else:
            block = p ** (e - 1) * (p - 1)
        lam = lam * block // math.gcd(lam, block)
    return lam


def mult_order(a: int, n: int) -> int:
    """Least k >= 1 with a**k == 1 mod n; error when gcd(a, n) != 1."""
    if n < 1:
        raise ValueError("modulus must be >= 1")
    if n == 1:
        return 1
    a %= n
    if math.gcd(a, n) != 1:
        raise ValueError(f"mult_order({a}, {n}): arguments not coprime")
    t = _carmichael(n)
    for p, _ in factorize(t).factors:
        while t % p == 0 and pow(a, t // p, n) == 1:
            t //= p
    return t


def primitive_root(ell: int) -> int:
    """Smallest positive primitive root modulo an odd prime."""
    if ell < 3 or not is_prime(ell):
        raise ValueError(f"{ell} is not an odd prime")
    qs = [p for p, _ in factorize(ell - 1).factors]
    g = 2
    while True:
        if all(pow(g, (ell - 1) // q, ell) != 1 for q in qs):
            return g
        g += 1


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a*x + b*y == g == gcd(a, b)."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0
