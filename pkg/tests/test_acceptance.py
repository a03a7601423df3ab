"""Acceptance criteria, one test per criterion.

Each test prints a single PASS line (visible with pytest -s) carrying
the measured wall time against the stated budget.  Every expected value
here is either a published one or was frozen from an independent
oracle; nothing is tuned to the implementation under test.
"""

import random
import time

from capitulab.abgroup import FinAbGroup, full_subgroup, span_elements, subgroup_from_rows
from capitulab.captrace import (
    Classification,
    analyze,
    consistency_check,
    parse_transcripts,
    stability_summaries,
)
from capitulab.chevalley import ChevalleyInput, ambiguous_number, simulate_filtration, stability_criterion
from capitulab.cubf import canonical_poly_string, defining_polynomials
from capitulab.cyclo import cyclotomic_unit_exponent, verify_norm_relation
from capitulab.quadf import class_group, p_class_group
from capitulab.reports import published_corpus_text
from capitulab.arith import is_prime
from capitulab.verify import suite_characters

from test_cubf import PUBLISHED_POLYS


def _stamp(k, detail, t0, budget):
    elapsed = time.monotonic() - t0
    assert elapsed < budget, f"criterion {k} exceeded budget: {elapsed:.1f}s >= {budget}s"
    print(f"PASS criterion {k}: {detail} [{elapsed:.2f}s < {budget}s]")


def test_criterion_1_cubic_polynomials():
    t0 = time.monotonic()
    for f, expect in PUBLISHED_POLYS.items():
        produced = [canonical_poly_string(k.poly_str()) for k in defining_polynomials(f)]
        assert canonical_poly_string(expect) in produced, (f, produced)
    _stamp(1, f"{len(PUBLISHED_POLYS)} published cubic polynomials reproduced", t0, 1.0)


def test_criterion_2_quadratic_class_groups():
    t0 = time.monotonic()
    expected_wide = {
        1129: (9,), 1654: (9,), 3137: (9,), 8761: (27,), 9217: (18,),
        32009: (3, 3), 68119: (50,), 119029: (50,),
    }
    for m, wide in expected_wide.items():
        assert class_group(m).wide.divisors == wide, m
    assert p_class_group(32009, 3).divisors == (3, 3)
    assert p_class_group(24859, 5).divisors == (25,)
    _stamp(2, "9 published class-group structures recomputed from scratch", t0, 60.0)


def test_criterion_3_capitulation_verdicts():
    t0 = time.monotonic()
    records = parse_transcripts(published_corpus_text())
    assert len(records) >= 30
    # prose annotations from the experiment tables
    annotated = {
        ("cubic", 1777, 41, 1): "Incomplete", ("cubic", 1777, 41, 2): "Complete",
        ("cubic", 1777, 113, 1): "Incomplete", ("cubic", 1777, 113, 2): "Incomplete",
        ("cubic", 1777, 257, 1): "None", ("cubic", 1777, 257, 2): "Incomplete",
        ("cubic", 1777, 337, 1): "Incomplete", ("cubic", 1777, 337, 2): "Complete",
        ("cubic", 1777, 2129, 1): "None", ("cubic", 1777, 2129, 2): "Incomplete",
        ("cubic", 2817, 449, 1): "Incomplete", ("cubic", 2817, 449, 2): "Complete",
        ("cubic", 4297, 449, 1): "Incomplete", ("cubic", 4297, 449, 2): "Incomplete",
        ("cubic", 5409, 113, 1): "Incomplete", ("cubic", 5409, 113, 2): "Incomplete",
        ("cubic", 7687, 17, 1): "Incomplete", ("cubic", 7687, 17, 2): "Complete",
        ("cubic", 20887, 193, 1): "Incomplete", ("cubic", 20887, 193, 2): "Incomplete",
        ("cubic", 31923, 97, 1): "None", ("cubic", 31923, 97, 2): "None",
        ("cubic", 31923, 257, 1): "Incomplete", ("cubic", 31923, 257, 2): "Complete",
        ("cubic", 313, 29, 1): "Complete", ("cubic", 1261, 43, 1): "Complete",
        ("cubic", 1567, 29, 1): "None", ("cubic", 8563, 71, 1): "Incomplete",
        ("quadratic", 1129, 13, 1): "None",
        ("quadratic", 1129, 307, 1): "Incomplete", ("quadratic", 1129, 307, 2): "Complete",
        ("quadratic", 1129, 19, 1): "Incomplete", ("quadratic", 1129, 19, 2): "Complete",
        ("quadratic", 1129, 73, 1): "None", ("quadratic", 1129, 73, 2): "None",
        ("quadratic", 3137, 199, 1): "None", ("quadratic", 3137, 199, 2): "Incomplete",
        ("quadratic", 8761, 19, 1): "None", ("quadratic", 8761, 19, 2): "Incomplete",
        ("quadratic", 32009, 19, 1): "Incomplete", ("quadratic", 32009, 19, 2): "Complete",
        ("quadratic", 42817, 19, 2): "Incomplete",
        ("quadratic", 24859, 251, 1): "Incomplete", ("quadratic", 24859, 401, 1): "Incomplete",
        ("quadratic", 27689, 101, 1): "Incomplete",
        ("quadratic", 68119, 251, 1): "None",
        ("quadratic", 68819, 101, 1): "Incomplete", ("quadratic", 68819, 151, 1): "None",
        ("quadratic", 69403, 251, 1): "Incomplete", ("quadratic", 69403, 401, 1): "Incomplete",
        ("quadratic", 88211, 101, 1): "None", ("quadratic", 88211, 151, 1): "Incomplete",
        ("quadratic", 119029, 251, 1): "None", ("quadratic", 119029, 401, 1): "Incomplete",
    }
    seen = 0
    for rec in records:
        key = (rec.kind, rec.label, rec.ell, rec.n)
        verdict = analyze(rec)
        if key in annotated:
            assert verdict.classification.value == annotated[key], key
            seen += 1
        if key == ("cubic", 1777, 41, 1):
            assert verdict.J_structure.divisors == (2, 2)
        if key == ("quadratic", 32009, 19, 1):
            assert verdict.ker_order == 3
        if key == ("quadratic", 1129, 13, 1):
            assert verdict.classification is Classification.NONE
    assert seen == len(annotated)
    _stamp(3, f"{seen} annotated verdicts match the published prose "
              f"({len(records)} records ingested)", t0, 1.0)


def test_criterion_4_stability_predictor():
    t0 = time.monotonic()
    # m=1129, ell=19: orders 9 = 9 from the base field, exponent 3^2
    verdict = stability_criterion(9, 9, exponent_e=2, N=2)
    assert verdict.stable and verdict.capitulation_layer == 2
    records = parse_transcripts(published_corpus_text())
    summaries = stability_summaries(records)
    mine = [s for s in summaries if (s["label"], s["ell"]) == (1129, 19)]
    assert mine and mine[0]["stable_from_layer"] == 0
    assert mine[0]["predicted_capitulation_layer"] == 2
    assert mine[0]["corroborated"] is True

    # f=1777, ell=41: 16 -> 64 -> 256 never stabilizes, the criterion
    # abstains; capitulation at n=2 happens anyway (sufficient, not necessary)
    assert not stability_criterion(16, 64, exponent_e=2, N=2).stable
    assert not [s for s in summaries if (s["label"], s["ell"]) == (1777, 41)]
    rec41 = next(r for r in records if (r.label, r.ell, r.n) == (1777, 41, 2))
    assert analyze(rec41).classification is Classification.COMPLETE
    _stamp(4, "stability predicts layer 2 for m=1129/ell=19 and abstains on "
              "f=1777/ell=41 (still Complete at n=2)", t0, 5.0)


def test_criterion_5_cyclotomic_norm_identity():
    t0 = time.monotonic()
    rng = random.Random(20887)
    pairs = [(25, 5), (21, 3)]
    while len(pairs) < 200:
        f = rng.randrange(4, 201)
        divs = [m for m in range(2, f) if f % m == 0]
        if divs:
            pairs.append((f, rng.choice(divs)))
    for f, m in pairs:
        holds, witness = verify_norm_relation(f, m)
        assert holds, (f, m, witness)
    _stamp(5, "200 exact norm relations including (25,5) and (21,3)", t0, 120.0)


def test_criterion_6_analytic_index():
    t0 = time.monotonic()
    checked = 0
    for f in range(5, 500):
        if f % 4 != 1 or not is_prime(f):
            continue
        expo = cyclotomic_unit_exponent(f)
        h = class_group(f).wide.order
        assert expo == h, (f, expo, h)
        if f == 229:
            assert expo == 3
        checked += 1
    _stamp(6, f"unit-index exponent equals class number for {checked} prime "
              "conductors below 500", t0, 300.0)


def test_criterion_7_chevalley_and_ledgers():
    t0 = time.monotonic()
    rng = random.Random(1933)
    for _ in range(2000):
        p = rng.choice([2, 3, 5, 7])
        n = rng.randint(1, 4)
        hK = p ** rng.randint(0, 8)
        assert ambiguous_number(ChevalleyInput(p=p, n=n, hK=hK, ram=(p**n,))) == hK
    for i in range(10_000):
        p = rng.choice([2, 3, 5])
        divisors = []
        order = 1
        a = rng.randint(1, 3)
        while order * p**a <= 2**10:
            divisors.append(p**a)
            order *= p**a
            a = rng.randint(1, a)
            if rng.random() < 0.4:
                break
        led = simulate_filtration(FinAbGroup(tuple(divisors)), n=2, seed=i)
        assert all(x >= y for x, y in zip(led.steps, led.steps[1:]))
        assert led.steps[-1] == 1
        prod = 1
        for s in led.steps:
            prod *= s
        assert prod == led.hL
    _stamp(7, "r=1 law on 2000 inputs, ledger invariants on 10^4 simulations",
           t0, 30.0)


def test_criterion_8_phi_decomposition():
    t0 = time.monotonic()
    report = suite_characters(trials=500)
    assert report["passed"], report["failures"][:5]
    _stamp(8, f"{report['checks']} decomposition/Hensel checks "
              "(500 random modules)", t0, 120.0)


def test_criterion_9_pairing_invariant():
    t0 = time.monotonic()
    records = parse_transcripts(published_corpus_text())
    cubic2 = [r for r in records if r.kind == "cubic" and r.p == 2]
    assert cubic2
    for rec in cubic2:
        finds = consistency_check(rec, analyze(rec))
        assert not [f for f in finds if f.code == "pairing"], rec.label
    corrupted = parse_transcripts(
        'record kind=cubic f=1777 poly="x^3 + x^2 - 592*x + 724" '
        "p=2 ell=41 N=2 n=1\n"
        "CK = [4,4]\nCKn = [8,4,2,2]\n"
        "nu = [0,0,0,1]\nnu = [2,2,1,1]\nnu = [0,0,0,0]\nnu = [0,0,0,0]\nend\n"
    )[0]
    finds = consistency_check(corrupted, analyze(corrupted))
    assert any(f.code == "pairing" and f.severity == "violation" for f in finds)
    _stamp(9, f"{len(cubic2)} cubic p=2 fixtures pair up; corrupted fixture "
              "rejected", t0, 5.0)


def test_criterion_10_subgroup_oracle_equivalence():
    t0 = time.monotonic()
    from test_abgroup import all_groups_up_to

    rng = random.Random(256)
    checked = 0
    for G in all_groups_up_to(256):
        for trial in range(3):
            k = rng.randint(1, 3)
            rows = [tuple(rng.randrange(d) for d in G.divisors) for _ in range(k)]
            sub = subgroup_from_rows(G, rows)
            closure = span_elements(G, rows)
            assert sub.order == len(closure), (G.divisors, rows)
            assert all(sub.contains(el) for el in closure)
            checked += 1
        # and the full group itself
        assert full_subgroup(G).order == G.order
    _stamp(10, f"subgroup engine agrees with brute-force closure on "
               f"{checked} generator sets over all groups of order <= 256",
           t0, 120.0)
