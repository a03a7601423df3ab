"""Finite abelian groups in invariant-factor form.

Groups are stored in the PARI ``clgp`` convention: a divisor chain
d_1 >= d_2 >= ... with d_{i+1} | d_i and every d_i >= 2 (the trivial
group is the empty chain).  Subgroups are resolved through exact
integer Hermite/Smith normal forms; matrix sizes here never exceed a
handful of rows, so no modular shortcuts are taken.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .arith import valuation, xgcd


@dataclass(frozen=True)
class FinAbGroup:
    divisors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "divisors", tuple(int(d) for d in self.divisors))
        prev = None
        for d in self.divisors:
            if d < 2:
                raise ValueError("divisors must be >= 2 (trivial group is the empty chain)")
            if prev is not None and prev % d != 0:
                raise ValueError(f"divisor chain violated: {d} does not divide {prev}")
            prev = d

    @property
    def order(self) -> int:
        return math.prod(self.divisors)

    @property
    def rank(self) -> int:
        return len(self.divisors)

    def exponent(self) -> int:
        return self.divisors[0] if self.divisors else 1

    def is_trivial(self) -> bool:
        return not self.divisors

    def reduce(self, coords) -> tuple[int, ...]:
        if len(coords) != len(self.divisors):
            raise ValueError(
                f"vector of length {len(coords)} in group of rank {len(self.divisors)}"
            )
        return tuple(int(c) % d for c, d in zip(coords, self.divisors))

    def elements(self):
        """All elements; only for small groups (tests, oracles)."""
        out = [()]
        for d in self.divisors:
            out = [v + (x,) for v in out for x in range(d)]
        return out


TRIVIAL = FinAbGroup(())


def exponent(group: FinAbGroup) -> int:
    return group.exponent()


def element_order(group: FinAbGroup, coords) -> int:
    """Least k >= 1 with k*v == 0 componentwise."""
    v = group.reduce(coords)
    k = 1
    for c, d in zip(v, group.divisors):
        o = d // math.gcd(c, d)
        k = k * o // math.gcd(k, o)
    return k


# ---------------------------------------------------------------------------
# exact integer normal forms


def smith_invariants(mat: list[list[int]]) -> list[int]:
    """Nonzero diagonal of the Smith normal form, ascending (s1 | s2 | ...)."""
    m = [row[:] for row in mat]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    t = 0
    out = []
    while t < min(rows, cols):
        # find a nonzero pivot in the trailing block
        pr = pc = -1
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                v = abs(m[i][j])
                if v and (best is None or v < best):
                    best, pr, pc = v, i, j
        if best is None:
            break
        m[t], m[pr] = m[pr], m[t]
        for row in m:
            row[t], row[pc] = row[pc], row[t]
        while True:
            # clear column t
            done = True
            for i in range(t + 1, rows):
                if m[i][t]:
                    q = m[i][t] // m[t][t]
                    for j in range(t, cols):
                        m[i][j] -= q * m[t][j]
                    if m[i][t]:
                        m[t], m[i] = m[i], m[t]
                        done = False
            if not done:
                continue
            # clear row t
            for j in range(t + 1, cols):
                if m[t][j]:
                    q = m[t][j] // m[t][t]
                    for i in range(t, rows):
                        m[i][j] -= q * m[i][t]
                    if m[t][j]:
                        for row in m:
                            row[t], row[j] = row[j], row[t]
                        done = False
            if done:
                break
        # pivot must divide the rest of the block
        piv = m[t][t]
        offender = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if m[i][j] % piv:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            for j in range(t, cols):
                m[t][j] += m[offender][j]
            continue
        out.append(abs(piv))
        t += 1
    return [d for d in out if d]


def hermite_basis(mat: list[list[int]]) -> list[list[int]]:
    """Row-HNF basis (upper triangular, positive pivots) of the row lattice.

    The input lattice must have full column rank; callers stack the
    ambient divisor diagonal to guarantee that.
    """
    m = [row[:] for row in mat if any(row)]
    cols = len(mat[0])
    basis: list[list[int]] = []
    for j in range(cols):
        # combine all rows with a nonzero j-entry into one
        pivot = None
        rest = []
        for row in m:
            if row[j] == 0:
                rest.append(row)
                continue
            if pivot is None:
                pivot = row
                continue
            g, x, y = xgcd(pivot[j], row[j])
            a, b = pivot[j] // g, row[j] // g
            pivot, row = (
                [x * u + y * v for u, v in zip(pivot, row)],
                [-b * u + a * v for u, v in zip(pivot, row)],
            )
            rest.append(row)
        if pivot is None:
            raise ValueError("lattice does not have full column rank")
        if pivot[j] < 0:
            pivot = [-u for u in pivot]
        basis.append(pivot)
        m = rest
    # reduce entries above each pivot (not required, keeps numbers small)
    for i in reversed(range(cols)):
        for k in range(i):
            q = basis[k][i] // basis[i][i]
            if q:
                basis[k] = [u - q * v for u, v in zip(basis[k], basis[i])]
    return basis


def _solve_left(basis: list[list[int]], target: list[int]) -> list[int] | None:
    # x with x @ basis == target, basis upper triangular; None if not integral
    n = len(basis)
    x = [0] * n
    rem = list(target)
    for j in range(n):
        q, r = divmod(rem[j], basis[j][j])
        if r:
            return None
        x[j] = q
        for k in range(j, n):
            rem[k] -= q * basis[j][k]
    return x if all(r == 0 for r in rem) else None


# ---------------------------------------------------------------------------
# subgroups


@dataclass(frozen=True)
class Subgroup:
    ambient: FinAbGroup
    generators: tuple[tuple[int, ...], ...]
    snf_structure: FinAbGroup = field(init=False)
    order: int = field(init=False)
    _basis: tuple[tuple[int, ...], ...] = field(init=False, repr=False)

    def __post_init__(self):
        amb = self.ambient
        rows = [list(amb.reduce(g)) for g in self.generators]
        object.__setattr__(self, "generators", tuple(tuple(r) for r in rows))
        r = amb.rank
        if r == 0:
            object.__setattr__(self, "snf_structure", TRIVIAL)
            object.__setattr__(self, "order", 1)
            object.__setattr__(self, "_basis", ())
            return
        diag = [[amb.divisors[i] if j == i else 0 for j in range(r)] for i in range(r)]
        basis = hermite_basis(rows + diag)
        # C with C @ basis == diag describes the subgroup as coker(C)
        cmat = []
        for i in range(r):
            target = [amb.divisors[i] if j == i else 0 for j in range(r)]
            x = _solve_left(basis, target)
            assert x is not None  # diag lattice is contained in the span
            cmat.append(x)
        inv = [d for d in smith_invariants(cmat) if d > 1]
        structure = FinAbGroup(tuple(sorted(inv, reverse=True)))
        object.__setattr__(self, "snf_structure", structure)
        object.__setattr__(self, "order", structure.order)
        object.__setattr__(self, "_basis", tuple(tuple(b) for b in basis))

    def contains(self, coords) -> bool:
        if self.ambient.rank == 0:
            return True
        v = list(self.ambient.reduce(coords))
        return _solve_left(list(map(list, self._basis)), v) is not None


def subgroup_from_rows(ambient: FinAbGroup, rows) -> Subgroup:
    """Subgroup generated by the given vectors (SNF of the relation matrix)."""
    return Subgroup(ambient, tuple(tuple(r) for r in rows))


def trivial_subgroup(ambient: FinAbGroup) -> Subgroup:
    return Subgroup(ambient, ())


def full_subgroup(ambient: FinAbGroup) -> Subgroup:
    r = ambient.rank
    gens = tuple(tuple(1 if j == i else 0 for j in range(r)) for i in range(r))
    return Subgroup(ambient, gens)


def quotient_order(group: FinAbGroup, sub: Subgroup) -> int:
    if sub.ambient != group:
        raise ValueError("subgroup does not live in the given group")
    return group.order // sub.order


def power_map_image(group: FinAbGroup, sub: Subgroup, k: int) -> Subgroup:
    """Image of S under x -> k*x."""
    if sub.ambient != group:
        raise ValueError("subgroup does not live in the given group")
    return Subgroup(group, tuple(tuple(k * c for c in g) for g in sub.generators))


def torsion_subgroup(group: FinAbGroup, k: int) -> FinAbGroup:
    """Structure of G[k] = {x : k*x = 0}; divisors gcd(d_i, k)."""
    return FinAbGroup(tuple(d for d in (math.gcd(di, k) for di in group.divisors) if d > 1))


def p_primary(group: FinAbGroup, p: int):
    """p-part of the group plus the coordinate projection onto it.

    The projection realizes, coordinatewise, the canonical ring
    idempotent of Z/d = Z/p^v x Z/q: on the p-part generator it is
    plain reduction mod p^v.  Coordinates of tame (v = 0) divisors are
    dropped.
    """
    vals = [valuation(d, p) for d in group.divisors]
    part = FinAbGroup(tuple(p**v for v in vals if v > 0))

    def project(coords) -> tuple[int, ...]:
        v = group.reduce(coords)
        return tuple(c % p**e for c, e in zip(v, vals) if e > 0)

    return part, project


def span_elements(ambient: FinAbGroup, rows) -> set[tuple[int, ...]]:
    """Brute-force closure of the rows; oracle for subgroup_from_rows."""
    rows = [ambient.reduce(r) for r in rows]
    zero = tuple(0 for _ in ambient.divisors)
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for v in frontier:
            for g in rows:
                w = tuple((a + b) % d for a, b, d in zip(v, g, ambient.divisors))
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen
