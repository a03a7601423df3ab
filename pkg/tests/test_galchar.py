import random
from fractions import Fraction

import pytest

from capitulab.abgroup import FinAbGroup
from capitulab.arith import mult_order
from capitulab.galchar import (
    GaloisModule,
    chi_resolve,
    component_subgroups,
    decompose,
    enumerate_phi,
    factor_xd_minus_1,
    idempotents,
    monogenic_exponent,
)


def test_enumerate_phi_examples():
    phis = enumerate_phi(3, 7)
    assert len(phis) == 3
    assert [p.degree for p in phis] == [1, 1, 1]
    assert phis[0].is_trivial()

    phis = enumerate_phi(3, 2)
    assert [(p.e, p.degree) for p in phis] == [(1, 1), (3, 2)]

    assert enumerate_phi(1, 5)[0].is_trivial()

    with pytest.raises(ValueError):
        enumerate_phi(6, 3)


def test_degree_sum_partition():
    for d in range(1, 201):
        for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
            if d % p == 0:
                continue
            phis = enumerate_phi(d, p)
            assert sum(phi.degree for phi in phis) == d
            # orbits partition the primitive residues of every divisor
            for phi in phis:
                if phi.e > 1:
                    assert phi.degree == mult_order(p, phi.e)


def test_factorization_examples():
    fac = factor_xd_minus_1(3, 2, 1)
    by_e = {}
    for phi, g in fac.factors:
        by_e.setdefault(phi.e, []).append(g)
    assert by_e[1] == [(1, 1)]  # x - 1 = x + 1 mod 2
    assert by_e[3] == [(1, 1, 1)]  # x^2 + x + 1

    fac = factor_xd_minus_1(3, 7, 1)
    roots = sorted((-g[0]) % 7 for _, g in fac.factors)
    assert roots == [1, 2, 4]

    fac = factor_xd_minus_1(4, 3, 1)
    degs = sorted(len(g) - 1 for _, g in fac.factors)
    assert degs == [1, 1, 2]


def test_hensel_product_exact():
    for d, p, M in [(3, 2, 5), (6, 5, 3), (12, 5, 2), (8, 3, 3)]:
        fac = factor_xd_minus_1(d, p, M)
        mod = p**M
        prod = [1]
        for _, g in fac.factors:
            nxt = [0] * (len(prod) + len(g) - 1)
            for i, a in enumerate(prod):
                for j, b in enumerate(g):
                    nxt[i + j] = (nxt[i + j] + a * b) % mod
            prod = nxt
        expect = [0] * (d + 1)
        expect[0], expect[d] = mod - 1, 1
        assert prod == expect
        # reduction mod p has pairwise-coprime factors of the right degree
        for phi, g in fac.factors:
            assert len(g) - 1 == phi.degree


def test_idempotents_orthogonal():
    eps = idempotents(6, 5, 2)
    mod = 25

    def mul_mod(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % mod
        # reduce modulo x^6 - 1
        for i in range(len(out) - 1, 5, -1):
            out[i - 6] = (out[i - 6] + out[i]) % mod
            out[i] = 0
        return [v % mod for v in out[:6]]

    keys = list(eps)
    for i, a in enumerate(keys):
        ea = list(eps[a]) + [0] * (6 - len(eps[a]))
        assert mul_mod(ea, ea) == ea
        for b in keys[i + 1:]:
            eb = list(eps[b]) + [0] * (6 - len(eps[b]))
            assert mul_mod(ea, eb) == [0] * 6


def test_decompose_examples():
    m = GaloisModule(FinAbGroup((4, 4)), ((0, -1), (1, -1)), 3)
    comp = {phi.e: grp for phi, grp in decompose(m, 2).items()}
    assert comp[1].is_trivial()
    assert comp[3].order == 16

    m2 = GaloisModule(FinAbGroup((8, 2)), ((1, 0), (0, 1)), 1)
    (only,) = decompose(m2, 2).values()
    assert only.order == 16

    m3 = GaloisModule(FinAbGroup((3, 3)), ((-1, 0), (0, -1)), 2)
    comp3 = {phi.e: grp for phi, grp in decompose(m3, 3).items()}
    assert comp3[1].is_trivial() and comp3[2].divisors == (3, 3)


def test_decompose_rejects_non_semisimple():
    m = GaloisModule(FinAbGroup((3, 3)), ((0, 1), (1, 0)), 2)
    with pytest.raises(ValueError):
        decompose(m, 2)


def test_sigma_validation():
    # sigma must respect divisors and have order dividing d
    with pytest.raises(ValueError):
        GaloisModule(FinAbGroup((4, 2)), ((1, 1), (0, 1)), 1)  # sigma^1 != id
    with pytest.raises(ValueError):
        GaloisModule(FinAbGroup((4, 2)), ((0, 1), (1, 0)), 2)  # swap breaks divisors


def test_components_sigma_stable():
    rng = random.Random(2)
    # cyclic permutation action on three blocks of (Z/4)
    sigma = tuple(
        tuple(1 if j == (i + 1) % 3 else 0 for j in range(3)) for i in range(3)
    )
    m = GaloisModule(FinAbGroup((4, 4, 4)), sigma, 3)
    comps = component_subgroups(m, 2)
    total = 1
    for sub in comps.values():
        total *= sub.order
        for gen in sub.generators:
            assert sub.contains(m.apply(gen))
    assert total == 64


def test_monogenic_exponent():
    assert monogenic_exponent(16, 2) == 2
    assert monogenic_exponent(1, 7) == 0
    assert monogenic_exponent(8, 2) is None


def test_chi_resolve():
    out = chi_resolve(6, {1: 1, 2: 2, 3: 3, 6: 30})
    assert out == {1: Fraction(1), 2: Fraction(2), 3: Fraction(3), 6: Fraction(5)}
    assert chi_resolve(4, {1: 1, 2: 1, 4: 1}) == {1: 1, 2: 1, 4: 1}
    assert chi_resolve(2, {1: 1, 2: 9}) == {1: 1, 2: 9}
    with pytest.raises(ValueError):
        chi_resolve(6, {1: 1, 2: 2, 6: 30})  # missing divisor 3
