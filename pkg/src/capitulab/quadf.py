"""Class groups of real quadratic fields through binary quadratic forms.

The engine enumerates all reduced indefinite forms of the fundamental
discriminant, splits them into proper-equivalence cycles with the
reduction neighbor operator, merges mirror cycles into wide classes
when the fundamental unit has norm +1, and resolves the group
structure by discrete logs against the enumerated class set followed
by a Smith normal form of the relation rows.  Everything is exact
integer arithmetic; the fundamental unit comes from the continued
fraction of the integral generator (x**2 - D*y**2 = +-4 minimal
solution, no floating point).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .arith import divisors, is_prime, is_squarefree, kronecker, valuation, xgcd
from .abgroup import FinAbGroup, smith_invariants


def fundamental_discriminant(m: int) -> int:
    """D = m if m = 1 mod 4 else 4m, for squarefree m > 1."""
    if m <= 1:
        raise ValueError("m must be > 1")
    if not is_squarefree(m):
        raise ValueError(f"{m} is not squarefree")
    return m if m % 4 == 1 else 4 * m


@dataclass(frozen=True)
class QuadForm:
    a: int
    b: int
    c: int

    @property
    def D(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_primitive(self) -> bool:
        return math.gcd(math.gcd(self.a, self.b), self.c) == 1

    def is_reduced(self) -> bool:
        """|sqrt(D) - 2|a|| < b < sqrt(D), checked in exact arithmetic."""
        D = self.D
        b = self.b
        if b <= 0 or b * b >= D:
            return False
        t = 2 * abs(self.a) - b
        if t >= 0 and t * t >= D:
            return False
        s = 2 * abs(self.a) + b
        return D < s * s

    def opposite(self) -> "QuadForm":
        # inverse class
        return QuadForm(self.a, -self.b, self.c)

    def mirror(self) -> "QuadForm":
        # composition with the class representing -1
        return QuadForm(-self.a, self.b, -self.c)

    def key(self):
        return (self.a, self.b, self.c)


@dataclass(frozen=True)
class FundUnit:
    """Fundamental unit (x + y*sqrt(D))/2, minimal with y >= 1."""

    D: int
    x: int
    y: int
    norm: int

    def value(self):
        import mpmath

        return (self.x + self.y * mpmath.sqrt(self.D)) / 2

    def power(self, k: int) -> tuple[int, int]:
        """Coordinates of ((x + y sqrt D)/2)**k for k >= 0."""
        px, py = 2, 0  # the unit 1
        bx, by = self.x, self.y
        k0 = k
        while k0:
            if k0 & 1:
                px, py = (px * bx + py * by * self.D) // 2, (px * by + py * bx) // 2
            bx, by = (bx * bx + by * by * self.D) // 2, 2 * bx * by // 2
            k0 >>= 1
        return px, py


def fundamental_unit(m: int) -> FundUnit:
    """Continued-fraction expansion of the integral generator of Q(sqrt m)."""
    D = fundamental_discriminant(m)
    s = D % 2
    sq = math.isqrt(D)
    # complete quotient (P + sqrt D)/Q, starting at the algebraic integer
    P, Q = s, 2
    a = (P + sq) // Q
    a0 = a
    # convergent denominators q_{-1} = 0, q_0 = 1
    q_prev, q = 0, 1
    first_state = None
    steps = 0
    while True:
        P = a * Q - P
        Q = (D - P * P) // Q
        a = (P + sq) // Q
        if first_state is None:
            first_state = (P, Q)
        else:
            if (P, Q) == first_state:
                break
        q_prev, q = q, a * q + q_prev
        steps += 1
    # period length steps; automorph from the cycle of the reduced tail
    ell = steps
    y = q_prev
    x = q_prev * s + 2 * (q - a0 * q_prev)
    norm = (-1) ** ell
    assert x * x - D * y * y == 4 * norm
    return FundUnit(D, x, y, norm)


# ---------------------------------------------------------------------------
# reduction, cycles, composition


def _rho(f: QuadForm) -> QuadForm:
    """Reduction neighbor through the trailing coefficient."""
    D = f.D
    sq = math.isqrt(D)
    c = f.c
    ac = abs(c)
    t = (-f.b) % (2 * ac)
    if ac > sq:
        # bring r into (-|c|, |c|]
        r = t if t <= ac else t - 2 * ac
    else:
        # unique r in (sqrt(D) - 2|c|, sqrt(D))
        r = sq - (sq - t) % (2 * ac)
    return QuadForm(c, r, (r * r - D) // (4 * c))


def reduce_form(f: QuadForm) -> QuadForm:
    while not f.is_reduced():
        f = _rho(f)
    return f


def principal_form(D: int) -> QuadForm:
    b = D % 2
    return QuadForm(1, b, (b * b - D) // 4)


def _compose_raw(f1: QuadForm, f2: QuadForm) -> QuadForm:
    """Gauss composition (Shanks-style solution of the congruences)."""
    a1, b1, c1 = f1.a, f1.b, f1.c
    a2, b2, c2 = f2.a, f2.b, f2.c
    s = (b1 + b2) // 2
    n = b2 - s
    d, u, _ = xgcd(a2, a1)
    y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, u, v = xgcd(s, d)
        x2, y2 = u, -v
    v1 = a1 // d1
    v2 = a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (c2 * d1 + r * (b2 + v2 * r)) // v1
    return QuadForm(a3, b3, c3)


@dataclass
class QuadClassGroup:
    D: int
    m: int
    narrow: FinAbGroup
    wide: FinAbGroup
    representatives: tuple[QuadForm, ...]
    unit: FundUnit

    @property
    def narrow_number(self) -> int:
        return self.narrow.order

    @property
    def wide_number(self) -> int:
        return self.wide.order


def reduced_forms(D: int) -> list[QuadForm]:
    """All reduced primitive forms of positive non-square discriminant D."""
    out = []
    sq = math.isqrt(D)
    if sq * sq == D:
        raise ValueError("discriminant must not be a square")
    for b in range(1, sq + 1):
        if (D - b * b) % 4:
            continue
        A4 = (D - b * b) // 4
        if A4 <= 0:
            continue
        for u in divisors(A4):
            t = 2 * u - b
            if t >= 0 and t * t >= D:
                continue
            s = 2 * u + b
            if D >= s * s:
                continue
            c = A4 // u
            if math.gcd(math.gcd(u, b), c) != 1:
                continue
            out.append(QuadForm(u, b, -c))
            out.append(QuadForm(-u, b, c))
    return out


class _ClassSet:
    """Cycle partition of the reduced forms plus the narrow group law."""

    def __init__(self, D: int):
        self.D = D
        forms = reduced_forms(D)
        self.cycle_of: dict[tuple[int, int, int], int] = {}
        self.cycles: list[list[QuadForm]] = []
        for f in forms:
            if f.key() in self.cycle_of:
                continue
            cid = len(self.cycles)
            cyc = []
            g = f
            while g.key() not in self.cycle_of:
                self.cycle_of[g.key()] = cid
                cyc.append(g)
                g = _rho(g)
            assert self.cycle_of[g.key()] == cid, "rho left the starting cycle"
            self.cycles.append(cyc)
        # representatives with positive leading coefficient (every cycle
        # alternates the sign of a, so one always exists)
        self.reps = [min((f for f in c if f.a > 0), key=QuadForm.key) for c in self.cycles]
        self.principal = self.class_of(principal_form(D))

    def class_of(self, f: QuadForm) -> int:
        return self.cycle_of[reduce_form(f).key()]

    def compose(self, i: int, j: int) -> int:
        return self.class_of(_compose_raw(self.reps[i], self.reps[j]))

    def power(self, i: int, k: int) -> int:
        r = self.principal
        b = i
        while k:
            if k & 1:
                r = self.compose(r, b)
            b = self.compose(b, b)
            k >>= 1
        return r


def _group_structure(elements, identity, compose) -> tuple[FinAbGroup, list]:
    """Structure of a finite abelian black-box group given all elements.

    Picks generators greedily, records each one's relative order against
    the previously spanned subgroup as a triangular relation row, and
    Smith-normalizes the relation matrix.
    """
    span = {identity: ()}
    gens: list = []
    rel_rows: list[list[int]] = []
    for el in elements:
        if el in span:
            continue
        gens.append(el)
        k = len(gens)
        # powers of el until we fall into the current span
        power = el
        r = 1
        while power not in span:
            r += 1
            power = compose(power, el)
        inside = span[power]  # el**r == prod(gens[i]**inside[i])
        row = list(inside) + [0] * (k - 1 - len(inside)) + [-r]
        rel_rows = [old + [0] for old in rel_rows]
        rel_rows.append(row)
        new_span = {}
        cur = identity
        for j in range(r):
            if j:
                cur = compose(cur, el)
            for base, vec in span.items():
                new_span[compose(base, cur)] = vec + (j,)
        span = new_span
    if not gens:
        return FinAbGroup(()), []
    inv = [d for d in smith_invariants(rel_rows) if d > 1]
    return FinAbGroup(tuple(sorted(inv, reverse=True))), gens


@lru_cache(maxsize=None)
def class_group(m: int, max_discriminant: int = 10**8) -> QuadClassGroup:
    """Wide and narrow class group of Q(sqrt m) for squarefree m > 1.

    The form enumeration is O(sqrt(D) * divisor counts); discriminants
    past max_discriminant are rejected instead of silently grinding.
    """
    D = fundamental_discriminant(m)
    if D > max_discriminant:
        raise ValueError(f"discriminant {D} beyond the configured bound {max_discriminant}")
    unit = fundamental_unit(m)
    cs = _ClassSet(D)
    n_narrow = len(cs.cycles)
    if unit.norm == -1:
        to_wide = list(range(n_narrow))
    else:
        delta = cs.class_of(principal_form(D).mirror())
        to_wide = [min(i, cs.compose(i, delta)) for i in range(n_narrow)]
    wide_ids = sorted(set(to_wide))
    index_of = {cid: k for k, cid in enumerate(wide_ids)}

    def wcompose(i: int, j: int) -> int:
        return index_of[to_wide[cs.compose(wide_ids[i], wide_ids[j])]]

    wide_identity = index_of[to_wide[cs.principal]]
    wide_struct, _ = _group_structure(range(len(wide_ids)), wide_identity, wcompose)
    narrow_struct, _ = _group_structure(range(n_narrow), cs.principal, cs.compose)
    assert narrow_struct.order == n_narrow
    assert wide_struct.order == len(wide_ids)
    reps = tuple(cs.reps[cid] for cid in wide_ids)
    return QuadClassGroup(D=D, m=m, narrow=narrow_struct, wide=wide_struct,
                          representatives=reps, unit=unit)


def p_class_group(m: int, p: int) -> FinAbGroup:
    """p-primary part of the wide class group."""
    wide = class_group(m).wide
    return FinAbGroup(tuple(p ** valuation(d, p) for d in wide.divisors if d % p == 0))


def is_inert(m: int, ell: int) -> bool:
    """ell inert in Q(sqrt m), i.e. kronecker(D, ell) = -1."""
    D = fundamental_discriminant(m)
    if D % ell == 0:
        raise ValueError(f"{ell} ramifies in discriminant {D}")
    return kronecker(D, ell) == -1


def inert_prime_stream(m: int, p: int, N: int, bound: int) -> list[int]:
    """Ascending primes ell <= bound, ell = 1 mod 2p^N, inert in Q(sqrt m)."""
    D = fundamental_discriminant(m)
    modulus = 2 * p**N
    out = []
    for ell in range(3, bound + 1, 2):
        if (ell - 1) % modulus or D % ell == 0 or not is_prime(ell):
            continue
        if kronecker(D, ell) == -1:
            out.append(ell)
    return out
