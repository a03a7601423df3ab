"""Named verification suites behind `capitulab verify` and /v1/verify.

Each suite returns a report dict {suite, passed, checks, failures,
elapsed_s}; failures carry enough detail to replay the offending case.
"""

from __future__ import annotations

import random
import time

from .arith import is_prime, is_squarefree
from .abgroup import FinAbGroup, span_elements, subgroup_from_rows
from .chevalley import ChevalleyInput, ambiguous_number, simulate_filtration
from .cyclo import cyclotomic_unit_exponent, verify_norm_relation
from .galchar import GaloisModule, component_subgroups, enumerate_phi, factor_xd_minus_1
from .quadf import class_group


def _report(suite: str, checks: int, failures: list, t0: float) -> dict:
    return {
        "suite": suite,
        "passed": not failures,
        "checks": checks,
        "failures": failures[:25],
        "elapsed_s": round(time.monotonic() - t0, 3),
    }


def suite_cyclo_norms(pairs: int = 200, fmax: int = 200, seed: int = 20887) -> dict:
    """Exact norm-relation identities on randomized (f, m) pairs.

    The prime-power collapse (25, 5) and the split-Frobenius zero
    exponent (21, 3) are always included.
    """
    t0 = time.monotonic()
    rng = random.Random(seed)
    todo = [(25, 5), (21, 3)]
    while len(todo) < pairs:
        f = rng.randrange(4, fmax + 1)
        divs = [m for m in range(2, f) if f % m == 0]
        if divs:
            todo.append((f, rng.choice(divs)))
    failures = []
    for f, m in todo:
        ok, witness = verify_norm_relation(f, m)
        if not ok:
            failures.append({"f": f, "m": m, "witness": witness})
    return _report("cyclo-norms", len(todo), failures, t0)


def _random_p_group(rng: random.Random, p: int, max_order: int) -> FinAbGroup:
    divisors = []
    order = 1
    a = rng.randint(1, 4)
    while True:
        d = p**a
        if order * d > max_order:
            break
        divisors.append(d)
        order *= d
        if rng.random() < 0.4:
            break
        a = rng.randint(1, a)
    return FinAbGroup(tuple(divisors))


def suite_chevalley(simulations: int = 10_000, seed: int = 1933) -> dict:
    """Ledger invariants on simulated filtrations plus the r = 1 law."""
    t0 = time.monotonic()
    rng = random.Random(seed)
    failures = []
    checks = 0
    for i in range(simulations):
        p = rng.choice([2, 2, 3, 3, 5, 7])
        HK = _random_p_group(rng, p, 2**10)
        ledger = simulate_filtration(HK, n=rng.randint(1, 4), seed=rng.randrange(2**30))
        checks += 1
        ok = (
            all(ledger.steps[i] >= ledger.steps[i + 1] for i in range(len(ledger.steps) - 1))
            and ledger.steps[-1] == 1
            and all(s * o == ledger.hK for s, o in zip(ledger.steps, ledger.norm_image_orders))
        )
        prod = 1
        for s in ledger.steps:
            prod *= s
        if not ok or prod != ledger.hL:
            failures.append({"case": i, "hK": ledger.hK, "steps": list(ledger.steps)})
    for i in range(500):
        p = rng.choice([2, 3, 5, 7])
        n = rng.randint(1, 4)
        hK = p ** rng.randint(0, 8)
        checks += 1
        got = ambiguous_number(ChevalleyInput(p=p, n=n, hK=hK, ram=(p**n,), norm_index=1))
        if got != hK:
            failures.append({"r1-law": (p, n, hK, got)})
    return _report("chevalley", checks, failures, t0)


def suite_analytic_index(bound: int = 500) -> dict:
    """Cyclotomic-unit exponent equals the wide class number, prime f = 1 mod 4."""
    t0 = time.monotonic()
    failures = []
    checks = 0
    for f in range(5, bound):
        if f % 4 != 1 or not is_prime(f):
            continue
        checks += 1
        expo = cyclotomic_unit_exponent(f)
        h = class_group(f).wide.order
        if expo != h:
            failures.append({"f": f, "exponent": expo, "class_number": h})
    return _report("analytic-index", checks, failures, t0)


def _random_module(rng: random.Random, dmax: int = 12, max_order: int = 2**12):
    """Random Galois module from valid action families.

    Blocks are homocyclic (Z/p^a)^r with sigma a companion matrix of a
    Hensel factor of x^d - 1 (single phi-component) or a cyclic block
    permutation (r | d); block-diagonal sums keep the divisor chain by
    sorting blocks on p^a.
    """
    p = rng.choice([2, 2, 3, 5, 7, 11])
    while True:
        d = rng.randint(1, dmax)
        if d % p:
            break
    blocks = []
    order = 1
    while True:
        a = rng.randint(1, 3)
        kind = rng.random()
        if kind < 0.5:
            fact = factor_xd_minus_1(d, p, a)
            phi, g = rng.choice(fact.factors)
            r = phi.degree
            mod = p**a
            comp = [[0] * r for _ in range(r)]
            for i in range(r - 1):
                comp[i][i + 1] = 1
            for j in range(r):
                comp[r - 1][j] = (-g[j]) % mod
            sigma_block = [list(row) for row in comp]
        else:
            r = rng.choice([t for t in range(1, d + 1) if d % t == 0])
            sigma_block = [[1 if j == (i + 1) % r else 0 for j in range(r)] for i in range(r)]
        if order * (p**a) ** r > max_order:
            if blocks:
                break
            continue
        order *= (p**a) ** r
        blocks.append((p**a, sigma_block))
        if rng.random() < 0.5:
            break
    blocks.sort(key=lambda t: -t[0])
    divisors = []
    for dv, blk in blocks:
        divisors.extend([dv] * len(blk))
    size = len(divisors)
    sigma = [[0] * size for _ in range(size)]
    off = 0
    for dv, blk in blocks:
        r = len(blk)
        for i in range(r):
            for j in range(r):
                sigma[off + i][off + j] = blk[i][j]
        off += r
    group = FinAbGroup(tuple(divisors))
    return GaloisModule(group, tuple(tuple(row) for row in sigma), d), p


def suite_characters(trials: int = 500, seed: int = 1977) -> dict:
    """Soundness of the phi-decomposition on random Galois modules."""
    t0 = time.monotonic()
    rng = random.Random(seed)
    failures = []
    checks = 0
    for d in range(1, 40):
        for p in (2, 3, 5, 7, 11, 13):
            if d % p == 0:
                continue
            checks += 1
            phis = enumerate_phi(d, p)
            if sum(phi.degree for phi in phis) != d:
                failures.append({"degrees": (d, p)})
    for i in range(trials):
        module, p = _random_module(rng)
        checks += 1
        try:
            comps = component_subgroups(module, p)
        except Exception as exc:  # pragma: no cover - failure path
            failures.append({"case": i, "error": repr(exc)})
            continue
        total = 1
        for sub in comps.values():
            total *= sub.order
        ok = total == module.group.order
        # sigma-stability of every component
        for sub in comps.values():
            for gen in sub.generators:
                if not sub.contains(module.apply(gen)):
                    ok = False
        # the components must span the whole group (with the order product
        # above this forces pairwise trivial intersections)
        allgens = [g for sub in comps.values() for g in sub.generators]
        if subgroup_from_rows(module.group, allgens).order != module.group.order:
            ok = False
        if module.group.order <= 256:
            subs = list(comps.values())
            for a in range(len(subs)):
                for b in range(a + 1, len(subs)):
                    small, big = sorted((subs[a], subs[b]), key=lambda s: s.order)
                    common = sum(
                        1
                        for el in span_elements(module.group, small.generators)
                        if big.contains(el)
                    )
                    if common != 1:
                        ok = False
        if not ok:
            failures.append({
                "case": i,
                "divisors": list(module.group.divisors),
                "d": module.d,
                "p": p,
            })
    # Hensel product exactness at several precisions
    for d, p, M in [(3, 2, 4), (4, 3, 3), (6, 5, 2), (12, 7, 2), (8, 3, 3), (5, 2, 5)]:
        checks += 1
        fact = factor_xd_minus_1(d, p, M)
        mod = p**M
        prod = [1]
        for _, g in fact.factors:
            out = [0] * (len(prod) + len(g) - 1)
            for a, ca in enumerate(prod):
                for b, cb in enumerate(g):
                    out[a + b] = (out[a + b] + ca * cb) % mod
            prod = out
        expect = [0] * (d + 1)
        expect[0], expect[d] = (mod - 1) % mod, 1
        if prod != expect:
            failures.append({"hensel": (d, p, M)})
    return _report("characters", checks, failures, t0)


SUITES = {
    "cyclo-norms": suite_cyclo_norms,
    "chevalley": suite_chevalley,
    "analytic-index": suite_analytic_index,
    "characters": suite_characters,
}


def run_suite(name: str, **params) -> dict:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](**params)
