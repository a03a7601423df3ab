import pytest

from capitulab.abgroup import FinAbGroup
from capitulab.captrace import (
    Classification,
    TowerRecord,
    TranscriptError,
    analyze,
    analyze_corpus,
    batch_report,
    consistency_check,
    parse_transcripts,
    stability_findings,
    stability_summaries,
)
from capitulab.reports import published_corpus_text

EXAMPLE_FIXTURE = """
record kind=cubic f=2817 poly="x^3 - 939*x + 6886" p=2 ell=449 N=2 n=1
CK = [12,4]
CKn = [24,8,2,2]
nu = [12,0,0,1]
nu = [12,0,1,0]
nu = [0,0,0,0]
nu = [0,0,0,0]
end

record kind=cubic f=2817 poly="x^3 - 939*x + 6886" p=2 ell=449 N=2 n=2
CK = [12,4]
CKn = [48,16,2,2]
nu = [0,0,0,0]
nu = [0,0,0,0]
nu = [0,0,0,0]
nu = [0,0,0,0]
end

record kind=quadratic m=32009 poly="x^2 - 32009" p=3 ell=19 N=2 n=1
CK = [3,3]
CKn = [9,3]
nu = [3,0]
nu = [0,0]
end

record kind=quadratic m=32009 poly="x^2 - 32009" p=3 ell=19 N=2 n=2
CK = [3,3]
CKn = [9,3]
nu = [0,0]
nu = [0,0]
end
"""


def record(kind="quadratic", label=32009, p=3, ell=19, N=2, n=1,
           CK=(3, 3), CKn=(9, 3), rows=((3, 0), (0, 0)), poly="x^2 - 32009"):
    return TowerRecord(kind=kind, label=label, poly=poly, p=p, ell=ell, N=N, n=n,
                       CK=FinAbGroup(CK), CKn=FinAbGroup(CKn), nu_rows=tuple(rows))


def test_analyze_examples():
    # f=1777, ell=41, n=1: J-image (Z/2)^2, kernel of order 4
    rec = record(kind="cubic", label=1777, p=2, ell=41, N=2, n=1,
                 CK=(4, 4), CKn=(4, 4, 2, 2),
                 rows=((0, 0, 0, 1), (2, 2, 1, 1), (0, 0, 0, 0), (0, 0, 0, 0)),
                 poly="x^3 + x^2 - 592*x + 724")
    v = analyze(rec)
    assert v.classification is Classification.INCOMPLETE
    assert v.J_structure.divisors == (2, 2)
    assert v.ker_order == 4 and v.implied_unit_norm_index == 4

    # complete capitulation: all rows zero
    rec = record(kind="cubic", label=2817, p=2, ell=449, N=2, n=2,
                 CK=(12, 4), CKn=(48, 16, 2, 2), rows=((0,) * 4,) * 4,
                 poly="x^3 - 939*x + 6886")
    v = analyze(rec)
    assert v.classification is Classification.COMPLETE and v.ker_order == 16

    # no capitulation: the transfer is injective
    rec = record(label=1129, ell=13, N=1, n=1, CK=(9,), CKn=(27,), rows=((3,),),
                 poly="x^2 - 1129")
    v = analyze(rec)
    assert v.classification is Classification.NONE
    assert v.J_image.order == 9 and v.ker_order == 1


def test_verdict_invariant():
    rec = record()
    v = analyze(rec)
    assert v.ker_order * v.J_image.order == 9


def test_record_validation():
    with pytest.raises(ValueError):
        record(ell=7)  # 7 != 1 mod 2*3^2
    with pytest.raises(ValueError):
        record(n=3)  # n > N
    with pytest.raises(ValueError):
        record(rows=((3, 0),))  # wrong number of rows
    with pytest.raises(ValueError):
        record(kind="quartic")


def test_parse_transcripts():
    records = parse_transcripts(EXAMPLE_FIXTURE)
    assert len(records) == 4
    assert records[0].kind == "cubic" and records[0].label == 2817
    assert records[0].nu_rows[0] == (12, 0, 0, 1)
    assert records[2].CKn.divisors == (9, 3)
    assert parse_transcripts("") == []
    assert parse_transcripts("# only a comment\n") == []


def test_parse_errors_carry_positions():
    bad = EXAMPLE_FIXTURE.replace("nu = [12,0,0,1]", "nu = [12,0,0]", 1)
    with pytest.raises(TranscriptError) as err:
        parse_transcripts(bad)
    assert "arity 3" in str(err.value) and "line" in str(err.value)

    with pytest.raises(TranscriptError):
        parse_transcripts("record kind=cubic f=7 p=2 ell=17 N=3 n=1\nCK = [2,2]\n")
    with pytest.raises(TranscriptError):
        parse_transcripts("CK = [2,2]\n")


def test_batch_report():
    records = parse_transcripts(EXAMPLE_FIXTURE)
    rep = batch_report(records)
    assert rep["records"] == 4
    assert rep["verdicts"] == {"Complete": 2, "Incomplete": 2}
    # duplicated record doubles the counts (multiset semantics)
    rep2 = batch_report(records + records)
    assert rep2["verdicts"] == {"Complete": 4, "Incomplete": 4}
    single = batch_report(records[:1])
    assert single["records"] == 1


def test_consistency_layer_exponent():
    rec = record(kind="cubic", label=2817, p=2, ell=449, N=2, n=2,
                 CK=(12, 4), CKn=(48, 16, 2, 2), rows=((0,) * 4,) * 4,
                 poly="x^3 - 939*x + 6886")
    v = analyze(rec)
    finds = consistency_check(rec, v)
    assert any(f.code == "layer-exponent" and f.severity == "info" for f in finds)

    # complete capitulation below the exponent layer is impossible
    rec = record(kind="cubic", label=9999, p=2, ell=17, N=3, n=1,
                 CK=(4, 4), CKn=(4, 4), rows=((0, 0), (0, 0)), poly="x^3 - x - 1")
    v = analyze(rec)
    finds = consistency_check(rec, v)
    assert any(f.code == "layer-exponent" and f.severity == "violation" for f in finds)


def test_consistency_chevalley_divisibility():
    rec = record(label=1129, ell=19, N=2, n=1, CK=(9,), CKn=(3,), rows=((0,),),
                 poly="x^2 - 1129")
    v = analyze(rec)
    finds = consistency_check(rec, v)
    assert any(f.code == "chevalley-divisibility" and f.severity == "violation"
               for f in finds)


def test_consistency_pairing():
    # cubic with p=2 must have paired 2-part invariants
    good = record(kind="cubic", label=1777, p=2, ell=41, N=2, n=1,
                  CK=(4, 4), CKn=(4, 4, 2, 2),
                  rows=((0, 0, 0, 1), (2, 2, 1, 1), (0, 0, 0, 0), (0, 0, 0, 0)),
                  poly="x^3 + x^2 - 592*x + 724")
    assert not [f for f in consistency_check(good, analyze(good)) if f.code == "pairing"]

    corrupted = record(kind="cubic", label=1777, p=2, ell=41, N=2, n=1,
                       CK=(4, 4), CKn=(8, 4, 2, 2),
                       rows=((0, 0, 0, 1), (2, 2, 1, 1), (0, 0, 0, 0), (0, 0, 0, 0)),
                       poly="x^3 + x^2 - 592*x + 724")
    finds = consistency_check(corrupted, analyze(corrupted))
    assert any(f.code == "pairing" and f.severity == "violation" for f in finds)

    # p = 7 on a cubic field has residue degree 1: no pairing constraint
    sevens = record(kind="cubic", label=8563, p=7, ell=71, N=1, n=1,
                    CK=(49,), CKn=(49,), rows=((7,),),
                    poly="x^3 + x^2 - 2854*x + 57721")
    assert not [f for f in consistency_check(sevens, analyze(sevens))
                if f.code == "pairing"]


def test_stability_cross_check():
    records = parse_transcripts(EXAMPLE_FIXTURE)
    quad = [r for r in records if r.kind == "quadratic"]
    summaries = stability_summaries(quad)
    assert summaries == [{
        "kind": "quadratic", "label": 32009, "p": 3, "ell": 19,
        "stable_from_layer": 1, "order": 27,
        "predicted_capitulation_layer": 2,
        "corroborated": True, "witness_layer": 2,
    }]
    finds = stability_findings(quad)
    assert any(f.code == "stability-corroborated" for f in finds)

    # contradiction: fake a non-complete record at the predicted layer
    tampered = [quad[0], record(n=2, rows=((3, 0), (0, 0)))]
    finds = stability_findings(tampered)
    assert any(f.code == "stability-contradicted" and f.severity == "violation"
               for f in finds)


def test_corpus_cross_validated_against_engines():
    """Fixture base-field data agrees with the from-scratch engines."""
    from capitulab.cubf import canonical_poly_string, defining_polynomials
    from capitulab.quadf import class_group, is_inert

    records = parse_transcripts(published_corpus_text())
    for rec in records:
        if rec.kind == "quadratic":
            assert class_group(rec.label).wide.divisors == rec.CK.divisors, rec.label
            assert is_inert(rec.label, rec.ell), (rec.label, rec.ell)
        else:
            produced = {
                canonical_poly_string(k.poly_str())
                for k in defining_polynomials(rec.label)
            }
            assert canonical_poly_string(rec.poly) in produced, rec.label


def test_full_corpus_round_trip():
    records = parse_transcripts(published_corpus_text())
    assert len(records) >= 30
    reports = analyze_corpus(records)
    assert len(reports) == len(records)
    # determinism
    again = analyze_corpus(parse_transcripts(published_corpus_text()))
    assert reports == again
    # every complete verdict respects the exponent bound, and no violations
    # anywhere in the shipped corpus
    for rep in reports:
        assert not [f for f in rep["findings"] if f["severity"] == "violation"], rep
        assert rep["ker_order"] * rep["J_image"]["order"] > 0
