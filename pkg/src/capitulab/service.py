"""FastAPI service exposing the calculus as JSON request/response ops.

The CLI is a thin client of this app; long sweeps and fixture analysis
run server-side so several clients can share one compute instance.
Domain errors (bad fixtures, invalid parameters, inconsistent data)
surface as HTTP 400 with the exact diagnostic.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from . import reports
from .captrace import TranscriptError


class HealthResponse(BaseModel):
    status: str
    version: str


class FindingModel(BaseModel):
    severity: str
    code: str
    message: str


class JImageModel(BaseModel):
    order: int
    structure: list[int]


class VerdictModel(BaseModel):
    kind: str
    label: int
    poly: str
    p: int
    ell: int
    N: int
    n: int
    CK: list[int]
    CKn: list[int]
    classification: str
    J_image: JImageModel
    ker_order: int
    implied_unit_norm_index: int
    findings: list[FindingModel]


class AnalyzeRequest(BaseModel):
    text: str = Field(description="fixture text in the transcript format")


class StructureCountModel(BaseModel):
    structure: list[int]
    count: int


class BaseHistogramModel(BaseModel):
    kind: str
    p: int
    CK_p_part: list[int]
    CKn_p_part_counts: list[StructureCountModel]


class BatchSummaryModel(BaseModel):
    records: int
    verdicts: dict[str, int]
    by_base: list[BaseHistogramModel]


class AnalyzeResponse(BaseModel):
    records: int
    verdicts: list[VerdictModel]
    summary: BatchSummaryModel


class SweepConfigModel(BaseModel):
    p: int = 2
    N: int = 2
    Nn: int = 2
    bf: int = 7
    Bf: int = 5000
    vHK: int = 4
    vHKn: int = 6
    Bell: int = 500


class CubicSweepRequest(BaseModel):
    config: SweepConfigModel = SweepConfigModel()
    fixtures_text: str | None = None
    published_corpus: bool = False


class JobModel(BaseModel):
    f: int
    poly: str
    ell: int
    layers: list[int]
    status: str


class CubicSweepResponse(BaseModel):
    config: SweepConfigModel
    conductors: list[int]
    jobs: list[JobModel]
    verdicts: list[VerdictModel]


class QuadRequest(BaseModel):
    m: int
    p: int = 3
    N: int = 2
    Bell: int = 500
    vHK: int = 1
    fixtures_text: str | None = None
    published_corpus: bool = False


class UnitModel(BaseModel):
    x: str
    y: str
    norm: int


class StabilityModel(BaseModel):
    ell: int
    stable_from_layer: int
    capitulation_layer: int | None


class QuadResponse(BaseModel):
    m: int
    p: int
    D: int
    class_group: list[int]
    narrow_class_group: list[int]
    p_class_group: list[int]
    fundamental_unit: UnitModel
    skip: str | None
    inert_primes: list[int]
    verdicts: list[VerdictModel]
    stability: list[StabilityModel]


class VerifyRequest(BaseModel):
    suite: str
    params: dict[str, int] = {}


class VerifyResponse(BaseModel):
    suite: str
    passed: bool
    checks: int
    failures: list[dict]
    elapsed_s: float


class SimulateRequest(BaseModel):
    divisors: list[int]
    n: int = 1
    seed: int = 0
    count: int = 1


class LedgerModel(BaseModel):
    hK: int
    norm_image_orders: list[int]
    steps: list[int]
    hL: int


class SimulateResponse(BaseModel):
    divisors: list[int]
    n: int
    seed: int
    ledgers: list[LedgerModel]


class CycloNormRequest(BaseModel):
    f: int
    m: int


class CycloNormResponse(BaseModel):
    f: int
    m: int
    holds: bool
    witness: dict


class CycloThetaRequest(BaseModel):
    f: int


class CycloThetaResponse(BaseModel):
    conductor: int
    half_system: list[int]
    square_u: str
    square_v: str
    value_level: int
    value_coeffs: list[str]


class CycloIndexRequest(BaseModel):
    f: int


class CycloIndexResponse(BaseModel):
    f: int
    exponent: int
    class_number: int
    match: bool


class CharacterModel(BaseModel):
    e: int
    orbit: list[int]
    degree: int


class CharEnumerateRequest(BaseModel):
    d: int
    p: int


class CharEnumerateResponse(BaseModel):
    d: int
    p: int
    characters: list[CharacterModel]


class CharDecomposeRequest(BaseModel):
    divisors: list[int]
    sigma: list[list[int]]
    d: int
    p: int


class ComponentModel(CharacterModel):
    structure: list[int]
    order: int


class CharDecomposeResponse(BaseModel):
    d: int
    p: int
    divisors: list[int]
    components: list[ComponentModel]


class CharResolveRequest(BaseModel):
    d: int
    per_subfield: dict[int, str]


class CharResolveResponse(BaseModel):
    d: int
    values: dict[str, str]


app = FastAPI(title="capitulab", version=__version__)

_DOMAIN_ERRORS = (ValueError, ArithmeticError, KeyError, TranscriptError, ZeroDivisionError)


def _guard(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except _DOMAIN_ERRORS as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


@app.get("/v1/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/v1/analyze", response_model=AnalyzeResponse)
def analyze(req: AnalyzeRequest) -> AnalyzeResponse:
    return AnalyzeResponse(**_guard(reports.analyze_report, req.text))


@app.post("/v1/cubic-sweep", response_model=CubicSweepResponse)
def cubic_sweep(req: CubicSweepRequest) -> CubicSweepResponse:
    records = _guard(reports.load_records, req.fixtures_text, req.published_corpus)
    out = _guard(reports.build_cubic_sweep, req.config.model_dump(), records)
    return CubicSweepResponse(**out)


@app.post("/v1/quad", response_model=QuadResponse)
def quad(req: QuadRequest) -> QuadResponse:
    records = _guard(reports.load_records, req.fixtures_text, req.published_corpus)
    out = _guard(
        reports.build_quad_report, req.m, req.p, req.N, req.Bell, req.vHK, records
    )
    return QuadResponse(**out)


@app.post("/v1/verify", response_model=VerifyResponse)
def verify(req: VerifyRequest) -> VerifyResponse:
    return VerifyResponse(**_guard(reports.verify_report, req.suite, req.params))


@app.post("/v1/simulate", response_model=SimulateResponse)
def simulate(req: SimulateRequest) -> SimulateResponse:
    return SimulateResponse(
        **_guard(reports.simulate_report, req.divisors, req.n, req.seed, req.count)
    )


@app.post("/v1/cyclo/norm", response_model=CycloNormResponse)
def cyclo_norm(req: CycloNormRequest) -> CycloNormResponse:
    return CycloNormResponse(**_guard(reports.cyclo_norm_report, req.f, req.m))


@app.post("/v1/cyclo/theta", response_model=CycloThetaResponse)
def cyclo_theta(req: CycloThetaRequest) -> CycloThetaResponse:
    return CycloThetaResponse(**_guard(reports.cyclo_theta_report, req.f))


@app.post("/v1/cyclo/index", response_model=CycloIndexResponse)
def cyclo_index(req: CycloIndexRequest) -> CycloIndexResponse:
    return CycloIndexResponse(**_guard(reports.cyclo_index_report, req.f))


@app.post("/v1/characters/enumerate", response_model=CharEnumerateResponse)
def characters_enumerate(req: CharEnumerateRequest) -> CharEnumerateResponse:
    return CharEnumerateResponse(**_guard(reports.characters_enumerate_report, req.d, req.p))


@app.post("/v1/characters/decompose", response_model=CharDecomposeResponse)
def characters_decompose(req: CharDecomposeRequest) -> CharDecomposeResponse:
    return CharDecomposeResponse(
        **_guard(reports.characters_decompose_report, req.divisors, req.sigma, req.d, req.p)
    )


@app.post("/v1/characters/resolve", response_model=CharResolveResponse)
def characters_resolve(req: CharResolveRequest) -> CharResolveResponse:
    return CharResolveResponse(
        **_guard(reports.characters_resolve_report, req.d, req.per_subfield)
    )
