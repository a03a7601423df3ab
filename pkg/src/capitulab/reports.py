"""Report builders behind the service endpoints.

Every function returns a plain JSON-serializable dict with stable key
order, so responses can be golden-tested and diffed line by line
against the experiment corpus.
"""

from __future__ import annotations

import importlib.resources
import os
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .arith import is_squarefree, valuation
from .abgroup import FinAbGroup
from .captrace import TowerRecord, analyze_corpus, parse_transcripts, stability_summaries
from .chevalley import simulate_filtration
from .cubf import canonical_poly_string, defining_polynomials, enumerate_conductors, inert_primes
from .cyclo import cyclotomic_unit_exponent, theta_chi, verify_norm_relation
from .galchar import GaloisModule, chi_resolve, decompose, enumerate_phi
from .quadf import class_group, inert_prime_stream, p_class_group
from .verify import run_suite


def published_corpus_text() -> str:
    res = importlib.resources.files("capitulab") / "fixtures" / "published_experiments.txt"
    return res.read_text(encoding="utf-8")


def load_records(fixtures_text: str | None, published_corpus: bool) -> list[TowerRecord]:
    records: list[TowerRecord] = []
    if published_corpus:
        records.extend(parse_transcripts(published_corpus_text()))
    if fixtures_text:
        records.extend(parse_transcripts(fixtures_text))
    return records


def analyze_report(text: str) -> dict:
    from .captrace import batch_report

    records = parse_transcripts(text)
    return {
        "records": len(records),
        "verdicts": analyze_corpus(records),
        "summary": batch_report(records),
    }


# ---------------------------------------------------------------------------
# quadratic command


def build_quad_report(m: int, p: int, N: int = 2, Bell: int = 500, vHK: int = 1,
                      records: list[TowerRecord] | None = None) -> dict:
    if m <= 1 or not is_squarefree(m):
        raise ValueError(f"m={m} must be a squarefree integer > 1")
    cg = class_group(m)
    part = p_class_group(m, p)
    v = valuation(part.order, p) if part.order > 1 else 0
    skip = "below vHK" if v < vHK else None
    stream = inert_prime_stream(m, p, N, Bell)
    mine = [r for r in (records or []) if r.kind == "quadratic" and r.label == m and r.p == p]
    verdicts = analyze_corpus(mine)
    stability = [
        {
            "ell": s["ell"],
            "stable_from_layer": s["stable_from_layer"],
            "capitulation_layer": s["predicted_capitulation_layer"],
        }
        for s in stability_summaries(mine)
    ]
    return {
        "m": m,
        "p": p,
        "D": cg.D,
        "class_group": list(cg.wide.divisors),
        "narrow_class_group": list(cg.narrow.divisors),
        "p_class_group": list(part.divisors),
        "fundamental_unit": {"x": str(cg.unit.x), "y": str(cg.unit.y), "norm": cg.unit.norm},
        "skip": skip,
        "inert_primes": stream,
        "verdicts": verdicts,
        "stability": stability,
    }


# ---------------------------------------------------------------------------
# cubic sweep


def _conductor_jobs(args) -> list[dict]:
    f, p, N, Nn, Bell = args
    jobs = []
    for field in defining_polynomials(f):
        ells = inert_primes(field, p, N, Bell)
        jobs.append({
            "f": f,
            "poly": field.poly_str(),
            "a": field.a,
            "b": field.b,
            "ells": ells,
            "layers": list(range(1, Nn + 1)),
        })
    return jobs


def build_cubic_sweep(config: dict, records: list[TowerRecord] | None = None) -> dict:
    cfg = {
        "p": 2, "N": 2, "Nn": 2, "bf": 7, "Bf": 5000, "vHK": 4, "vHKn": 6, "Bell": 500,
    }
    cfg.update({k: int(v) for k, v in config.items() if v is not None})
    if cfg["Nn"] > cfg["N"] or cfg["vHK"] > cfg["vHKn"] or cfg["bf"] > cfg["Bf"]:
        raise ValueError("config must satisfy Nn <= N, vHK <= vHKn, bf <= Bf")
    conductors = enumerate_conductors(cfg["bf"], cfg["Bf"])
    workers = int(os.environ.get("CAPITULAB_WORKERS", "1"))
    arglist = [(f, cfg["p"], cfg["N"], cfg["Nn"], cfg["Bell"]) for f in conductors]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_conductor = list(pool.map(_conductor_jobs, arglist))
    else:
        per_conductor = [_conductor_jobs(a) for a in arglist]

    by_key: dict = {}
    for r in records or []:
        if r.kind == "cubic" and r.p == cfg["p"]:
            by_key.setdefault((r.label, r.ell), []).append(r)

    jobs = []
    attached: list[TowerRecord] = []
    for group in per_conductor:
        for job in group:
            f = job["f"]
            for ell in job["ells"]:
                recs = [
                    r for r in by_key.get((f, ell), [])
                    if canonical_poly_string(r.poly) == canonical_poly_string(job["poly"])
                    and r.n <= cfg["Nn"]
                ]
                status = "fixture-attached" if recs else "external-data-needed"
                if recs:
                    hk = 1
                    for d in recs[0].CK.divisors:
                        hk *= cfg["p"] ** valuation(d, cfg["p"])
                    if valuation(hk, cfg["p"]) < cfg["vHK"]:
                        status = "skipped-below-vHK"
                    else:
                        attached.extend(recs)
                jobs.append({
                    "f": f,
                    "poly": job["poly"],
                    "ell": ell,
                    "layers": job["layers"],
                    "status": status,
                })
    seen = set()
    unique_attached = []
    for r in attached:
        k = (r.kind, r.label, r.ell, r.n)
        if k not in seen:
            seen.add(k)
            unique_attached.append(r)
    return {
        "config": cfg,
        "conductors": conductors,
        "jobs": jobs,
        "verdicts": analyze_corpus(unique_attached),
    }


# ---------------------------------------------------------------------------
# small commands


def simulate_report(divisors: list[int], n: int, seed: int, count: int) -> dict:
    HK = FinAbGroup(tuple(divisors))
    ledgers = []
    for i in range(count):
        led = simulate_filtration(HK, n=n, seed=seed + i)
        ledgers.append({
            "hK": led.hK,
            "norm_image_orders": list(led.norm_image_orders),
            "steps": list(led.steps),
            "hL": led.hL,
        })
    return {"divisors": list(divisors), "n": n, "seed": seed, "ledgers": ledgers}


def cyclo_norm_report(f: int, m: int) -> dict:
    holds, witness = verify_norm_relation(f, m)
    return {"f": f, "m": m, "holds": holds, "witness": witness}


def cyclo_theta_report(D: int) -> dict:
    num = theta_chi(D)
    return {
        "conductor": D,
        "half_system": list(num.half_system),
        "square_u": str(num.square_u),
        "square_v": str(num.square_v),
        "value_level": num.value.level,
        "value_coeffs": [str(c) for c in num.value.coeffs],
    }


def cyclo_index_report(f: int) -> dict:
    expo = cyclotomic_unit_exponent(f)
    h = class_group(f).wide.order
    return {"f": f, "exponent": expo, "class_number": h, "match": expo == h}


def characters_enumerate_report(d: int, p: int) -> dict:
    phis = enumerate_phi(d, p)
    return {
        "d": d,
        "p": p,
        "characters": [
            {"e": phi.e, "orbit": sorted(phi.orbit), "degree": phi.degree}
            for phi in phis
        ],
    }


def characters_decompose_report(divisors: list[int], sigma: list[list[int]],
                                d: int, p: int) -> dict:
    module = GaloisModule(FinAbGroup(tuple(divisors)), tuple(tuple(r) for r in sigma), d)
    comps = decompose(module, p)
    return {
        "d": d,
        "p": p,
        "divisors": list(divisors),
        "components": [
            {
                "e": phi.e,
                "orbit": sorted(phi.orbit),
                "degree": phi.degree,
                "structure": list(grp.divisors),
                "order": grp.order,
            }
            for phi, grp in sorted(comps.items(), key=lambda t: t[0].sort_key())
        ],
    }


def characters_resolve_report(d: int, per_subfield: dict[int, str | int]) -> dict:
    data = {int(k): Fraction(v) for k, v in per_subfield.items()}
    values = chi_resolve(d, data)
    return {"d": d, "values": {str(t): str(v) for t, v in sorted(values.items())}}


def verify_report(suite: str, params: dict | None = None) -> dict:
    return run_suite(suite, **(params or {}))
