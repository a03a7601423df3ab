"""Capitulation experiments: transcript records, verdicts, consistency.

A TowerRecord is one computation from the experiment corpus: a base
field (cubic conductor f or quadratic radicand m), an auxiliary inert
prime ell, the layer n inside the cyclic p-tower of K(mu_ell), the
class groups of K and K_n, and the algebraic-norm rows nu(h_i)
expressed on the K_n class-group generators.  The rows generate
J(H_K) inside the p-part of H_{K_n}; the verdict reads off the
capitulation kernel from the quotient.

Generators printed by class-group software are not canonical, so every
quantity derived here depends only on the subgroup generated by the
rows, never on the individual rows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .arith import is_prime, mult_order, valuation
from .abgroup import FinAbGroup, Subgroup, p_primary, subgroup_from_rows
from .chevalley import stability_criterion


class Classification(str, Enum):
    COMPLETE = "Complete"
    INCOMPLETE = "Incomplete"
    NONE = "None"


@dataclass(frozen=True)
class TowerRecord:
    kind: str  # "cubic" | "quadratic"
    label: int  # conductor f or radicand m
    poly: str
    p: int
    ell: int
    N: int
    n: int
    CK: FinAbGroup
    CKn: FinAbGroup
    nu_rows: tuple[tuple[int, ...], ...]
    source_line: int = 0

    def __post_init__(self):
        if self.kind not in ("cubic", "quadratic"):
            raise ValueError(f"unknown kind {self.kind!r}")
        if not is_prime(self.p) or not is_prime(self.ell):
            raise ValueError(f"p={self.p} and ell={self.ell} must be prime")
        if not (1 <= self.n <= self.N):
            raise ValueError(f"layer n={self.n} outside [1, N={self.N}]")
        if (self.ell - 1) % (2 * self.p**self.N):
            raise ValueError(
                f"ell={self.ell} is not 1 mod 2*{self.p}^{self.N}"
            )
        rows = tuple(self.CKn.reduce(r) for r in self.nu_rows)
        if len(rows) != self.CKn.rank:
            raise ValueError(
                f"{len(rows)} nu rows for {self.CKn.rank} CKn generators"
            )
        object.__setattr__(self, "nu_rows", rows)

    def key(self):
        return (self.kind, self.label, self.p, self.ell)

    def pairing_constrained(self) -> bool:
        # cubic fields with residue degree 2 characters: Z_p[mu_3]-modules
        return self.kind == "cubic" and mult_order(self.p, 3) == 2


@dataclass(frozen=True)
class CapitulationVerdict:
    classification: Classification
    J_image: Subgroup
    ker_order: int
    implied_unit_norm_index: int

    @property
    def J_structure(self) -> FinAbGroup:
        return self.J_image.snf_structure


def analyze(rec: TowerRecord) -> CapitulationVerdict:
    """Verdict from the norm rows: project to the p-part, span, divide."""
    hk_part, _ = p_primary(rec.CK, rec.p)
    hkn_part, project = p_primary(rec.CKn, rec.p)
    rows = [project(r) for r in rec.nu_rows]
    image = subgroup_from_rows(hkn_part, rows)
    hk = hk_part.order
    if hk % image.order:
        raise ArithmeticError(
            f"record {rec.kind} {rec.label} ell={rec.ell} n={rec.n}: "
            f"J-image order {image.order} does not divide #H_K = {hk}"
        )
    ker = hk // image.order
    if image.order == 1:
        cls = Classification.COMPLETE
    elif ker == 1:
        cls = Classification.NONE
    else:
        cls = Classification.INCOMPLETE
    return CapitulationVerdict(
        classification=cls,
        J_image=image,
        ker_order=ker,
        implied_unit_norm_index=ker,
    )


@dataclass(frozen=True)
class Finding:
    severity: str  # "info" | "violation"
    code: str
    message: str


def _pairs_up(divisors: tuple[int, ...]) -> bool:
    return len(divisors) % 2 == 0 and all(
        divisors[i] == divisors[i + 1] for i in range(0, len(divisors), 2)
    )


def consistency_check(rec: TowerRecord, verdict: CapitulationVerdict,
                      companions: list[TowerRecord] | None = None) -> list[Finding]:
    """Cross-checks of one record against the Chevalley/stability layer.

    companions: other records of the same (kind, label, p, ell) tower,
    used for the stability cross-check between consecutive layers.
    """
    out: list[Finding] = []
    p = rec.p
    hk_part, _ = p_primary(rec.CK, p)
    hkn_part, _ = p_primary(rec.CKn, p)
    e = valuation(hk_part.exponent(), p)

    if verdict.classification is Classification.COMPLETE:
        if rec.n >= e:
            out.append(Finding("info", "layer-exponent",
                               f"complete capitulation at n={rec.n} >= e={e}"))
        else:
            out.append(Finding("violation", "layer-exponent",
                               f"complete capitulation at n={rec.n} < e={e} "
                               "contradicts N o J = p^n-power law"))

    if hkn_part.order % hk_part.order:
        out.append(Finding("violation", "chevalley-divisibility",
                           f"#H_Kn = {hkn_part.order} is not a multiple of "
                           f"#H_K = {hk_part.order}"))

    if rec.pairing_constrained():
        for name, grp in (("CK", hk_part), ("CKn", hkn_part)):
            if not _pairs_up(grp.divisors):
                out.append(Finding(
                    "violation", "pairing",
                    f"{name} {p}-part {list(grp.divisors)} does not pair up: "
                    f"not a Z_{p}[mu_3]-module"))

    if companions:
        out.extend(stability_findings([rec] + list(companions), focus=rec))
    return out


def stability_summaries(records: list[TowerRecord]) -> list[dict]:
    """Structured stability analysis per tower (kind, label, p, ell).

    Stability between layers n0 and n0+1 predicts complete capitulation
    of H_K by layer n0 + e', where p^e' is the exponent of the transfer
    image at layer n0 (e' = exponent of H_K itself when n0 = 0).  A
    deeper record at or past the predicted layer corroborates or
    contradicts the prediction.
    """
    out: list[dict] = []
    towers: dict = {}
    for r in records:
        towers.setdefault(r.key(), {})[r.n] = r
    for key, by_layer in sorted(towers.items()):
        kind, label, p, ell = key
        layers = sorted(by_layer)
        base = by_layer[layers[0]]
        hk_part, _ = p_primary(base.CK, p)
        orders = {0: hk_part.order}
        for n in layers:
            part, _ = p_primary(by_layer[n].CKn, p)
            orders[n] = part.order
        for n0 in [0] + layers:
            if n0 + 1 not in orders or orders[n0 + 1] != orders[n0]:
                continue
            verdict = stability_criterion(orders[n0], orders[n0 + 1],
                                          valuation(hk_part.exponent(), p), base.N)
            assert verdict.stable
            if n0 == 0:
                e_img = valuation(hk_part.exponent(), p)
            else:
                e_img = valuation(analyze(by_layer[n0]).J_structure.exponent(), p)
            predicted = n0 + e_img
            summary = {
                "kind": kind, "label": label, "p": p, "ell": ell,
                "stable_from_layer": n0,
                "order": orders[n0],
                "predicted_capitulation_layer": predicted,
                "corroborated": None,
            }
            for n in layers:
                if n >= predicted:
                    v = analyze(by_layer[n])
                    summary["corroborated"] = v.classification is Classification.COMPLETE
                    summary["witness_layer"] = n
                    break
            out.append(summary)
            break  # report the earliest stabilizing layer only
    return out


def stability_findings(records: list[TowerRecord], focus: TowerRecord | None = None) -> list[Finding]:
    """Stability cross-checks over the layers of one tower, as findings."""
    out: list[Finding] = []
    for s in stability_summaries(records):
        if focus is not None and (s["kind"], s["label"], s["p"], s["ell"]) != focus.key():
            continue
        n0 = s["stable_from_layer"]
        msg = (f"stability from K{n0 or ''}: #H_K{n0 or ''} = #H_K{n0 + 1} = "
               f"{s['order']} predicts complete capitulation by layer "
               f"{s['predicted_capitulation_layer']}")
        out.append(Finding("info", "stability", msg))
        if s["corroborated"] is True:
            out.append(Finding("info", "stability-corroborated",
                               f"layer {s['witness_layer']} record is Complete as predicted"))
        elif s["corroborated"] is False:
            out.append(Finding("violation", "stability-contradicted",
                               f"layer {s['witness_layer']} record is not Complete, "
                               "stability predicted Complete by layer "
                               f"{s['predicted_capitulation_layer']}"))
    return out


# ---------------------------------------------------------------------------
# fixture parsing


class TranscriptError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _parse_group(text: str, lineno: int) -> FinAbGroup:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise TranscriptError(lineno, f"expected [d1,d2,...], got {text!r}")
    inner = text[1:-1].strip()
    if not inner:
        return FinAbGroup(())
    try:
        divisors = tuple(int(t) for t in inner.split(","))
        return FinAbGroup(divisors)
    except ValueError as exc:
        raise TranscriptError(lineno, str(exc)) from None


def _parse_vector(text: str, lineno: int) -> tuple[int, ...]:
    text = text.strip().rstrip("~")
    if not (text.startswith("[") and text.endswith("]")):
        raise TranscriptError(lineno, f"expected [c1,c2,...], got {text!r}")
    inner = text[1:-1].strip()
    if not inner:
        return ()
    try:
        return tuple(int(t) for t in inner.split(","))
    except ValueError:
        raise TranscriptError(lineno, f"bad coordinate in {text!r}") from None


def _parse_header(line: str, lineno: int) -> dict:
    rest = line[len("record"):].strip()
    fields = {}
    pos = 0
    while pos < len(rest):
        eq = rest.find("=", pos)
        if eq < 0:
            raise TranscriptError(lineno, f"expected key=value at {rest[pos:]!r}")
        key = rest[pos:eq].strip()
        if eq + 1 < len(rest) and rest[eq + 1] == '"':
            end = rest.find('"', eq + 2)
            if end < 0:
                raise TranscriptError(lineno, "unterminated quoted value")
            fields[key] = rest[eq + 2:end]
            pos = end + 1
        else:
            end = rest.find(" ", eq + 1)
            if end < 0:
                end = len(rest)
            fields[key] = rest[eq + 1:end]
            pos = end
        while pos < len(rest) and rest[pos] == " ":
            pos += 1
    return fields


def parse_transcripts(text: str) -> list[TowerRecord]:
    """Parse the line-oriented fixture format; errors carry line numbers."""
    records: list[TowerRecord] = []
    state = None  # None | dict being filled
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("record "):
            if state is not None:
                raise TranscriptError(lineno, "previous record not closed with 'end'")
            fields = _parse_header(line, lineno)
            if "f" in fields and "m" in fields:
                raise TranscriptError(lineno, "record has both f= and m=")
            kind = fields.get("kind")
            if kind == "cubic" and "f" not in fields:
                raise TranscriptError(lineno, "cubic record needs f=")
            if kind == "quadratic" and "m" not in fields:
                raise TranscriptError(lineno, "quadratic record needs m=")
            state = {"fields": fields, "CK": None, "CKn": None, "nu": [],
                     "lineno": lineno}
            continue
        if state is None:
            raise TranscriptError(lineno, f"unexpected content outside record: {line!r}")
        if line == "end":
            f = state["fields"]
            try:
                label = int(f["f"] if "f" in f else f["m"])
                rec = TowerRecord(
                    kind=f["kind"],
                    label=label,
                    poly=f.get("poly", ""),
                    p=int(f["p"]),
                    ell=int(f["ell"]),
                    N=int(f["N"]),
                    n=int(f["n"]),
                    CK=state["CK"],
                    CKn=state["CKn"],
                    nu_rows=tuple(state["nu"]),
                    source_line=state["lineno"],
                )
            except (KeyError, TypeError) as exc:
                raise TranscriptError(state["lineno"], f"incomplete record: {exc}") from None
            except ValueError as exc:
                raise TranscriptError(state["lineno"], str(exc)) from None
            records.append(rec)
            state = None
            continue
        if "=" not in line:
            raise TranscriptError(lineno, f"expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key == "CK":
            state["CK"] = _parse_group(value, lineno)
        elif key == "CKn":
            state["CKn"] = _parse_group(value, lineno)
        elif key == "nu":
            vec = _parse_vector(value, lineno)
            if state["CKn"] is None:
                raise TranscriptError(lineno, "nu before CKn")
            if len(vec) != state["CKn"].rank:
                raise TranscriptError(
                    lineno,
                    f"record at line {state['lineno']}, nu row "
                    f"{len(state['nu']) + 1}: arity {len(vec)} vs rank {state['CKn'].rank}",
                )
            state["nu"].append(vec)
        else:
            raise TranscriptError(lineno, f"unknown field {key!r}")
    if state is not None:
        raise TranscriptError(state["lineno"], "record not closed with 'end'")
    return records


# ---------------------------------------------------------------------------
# reports


def verdict_report(rec: TowerRecord, verdict: CapitulationVerdict,
                   findings: list[Finding]) -> dict:
    return {
        "kind": rec.kind,
        "label": rec.label,
        "poly": rec.poly,
        "p": rec.p,
        "ell": rec.ell,
        "N": rec.N,
        "n": rec.n,
        "CK": list(rec.CK.divisors),
        "CKn": list(rec.CKn.divisors),
        "classification": verdict.classification.value,
        "J_image": {
            "order": verdict.J_image.order,
            "structure": list(verdict.J_structure.divisors),
        },
        "ker_order": verdict.ker_order,
        "implied_unit_norm_index": verdict.implied_unit_norm_index,
        "findings": [
            {"severity": f.severity, "code": f.code, "message": f.message}
            for f in findings
        ],
    }


def analyze_corpus(records: list[TowerRecord]) -> list[dict]:
    """Verdict + findings per record, with tower companions resolved."""
    towers: dict = {}
    for r in records:
        towers.setdefault(r.key(), []).append(r)
    out = []
    for rec in records:
        verdict = analyze(rec)
        companions = [r for r in towers[rec.key()] if r is not rec]
        findings = consistency_check(rec, verdict, companions)
        out.append(verdict_report(rec, verdict, findings))
    return out


def batch_report(records: list[TowerRecord]) -> dict:
    """Verdict counts and CKn-structure histograms, multiset semantics."""
    verdict_counts: dict[str, int] = {}
    histograms: dict = {}
    for rec in records:
        v = analyze(rec)
        verdict_counts[v.classification.value] = (
            verdict_counts.get(v.classification.value, 0) + 1
        )
        part, _ = p_primary(rec.CK, rec.p)
        partn, _ = p_primary(rec.CKn, rec.p)
        group_key = (rec.kind, rec.p, tuple(part.divisors))
        hist = histograms.setdefault(group_key, {})
        struct = tuple(partn.divisors)
        hist[struct] = hist.get(struct, 0) + 1
    return {
        "records": len(records),
        "verdicts": dict(sorted(verdict_counts.items())),
        "by_base": [
            {
                "kind": kind,
                "p": p,
                "CK_p_part": list(ck),
                "CKn_p_part_counts": [
                    {"structure": list(s), "count": c}
                    for s, c in sorted(hist.items())
                ],
            }
            for (kind, p, ck), hist in sorted(histograms.items())
        ],
    }
