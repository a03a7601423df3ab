import pytest

from capitulab.cli import _InProcessClient
from capitulab.reports import published_corpus_text


@pytest.fixture(scope="module")
def client():
    with _InProcessClient() as c:
        yield c


def test_health(client):
    import asyncio
    import httpx

    from capitulab.service import app

    async def go():
        async with httpx.AsyncClient(
            transport=httpx.ASGITransport(app=app), base_url="http://t"
        ) as c:
            return await c.get("/v1/health")

    resp = asyncio.run(go())
    assert resp.status_code == 200
    body = resp.json()
    assert body["status"] == "ok" and "version" in body


def test_analyze_endpoint(client):
    resp = client.post("/v1/analyze", json={"text": published_corpus_text()})
    assert resp.status_code == 200
    body = resp.json()
    assert body["records"] >= 30
    by = {(v["kind"], v["label"], v["ell"], v["n"]): v for v in body["verdicts"]}
    v = by[("cubic", 1777, 41, 1)]
    assert v["classification"] == "Incomplete"
    assert v["J_image"]["structure"] == [2, 2]
    assert by[("cubic", 2817, 449, 2)]["classification"] == "Complete"
    assert by[("quadratic", 1129, 13, 1)]["classification"] == "None"


def test_analyze_rejects_bad_fixture(client):
    resp = client.post("/v1/analyze", json={"text": "record kind=cubic f=7\nend\n"})
    assert resp.status_code == 400
    assert "line" in resp.json()["detail"]


def test_quad_endpoint(client):
    resp = client.post("/v1/quad", json={"m": 32009, "p": 3, "Bell": 100,
                                         "published_corpus": True})
    assert resp.status_code == 200
    body = resp.json()
    assert body["p_class_group"] == [3, 3]
    assert 19 in body["inert_primes"]
    assert body["stability"] == [
        {"ell": 19, "stable_from_layer": 1, "capitulation_layer": 2}
    ]
    # skip marker for a small class group
    resp = client.post("/v1/quad", json={"m": 5, "p": 3})
    assert resp.json()["skip"] == "below vHK"
    resp = client.post("/v1/quad", json={"m": 12, "p": 3})
    assert resp.status_code == 400  # not squarefree


def test_cubic_sweep_endpoint(client):
    resp = client.post("/v1/cubic-sweep", json={
        "config": {"p": 2, "N": 2, "Nn": 2, "bf": 2810, "Bf": 2820,
                   "vHK": 4, "vHKn": 6, "Bell": 500},
        "published_corpus": True,
    })
    assert resp.status_code == 200
    body = resp.json()
    assert body["conductors"] == [2817]
    attached = [j for j in body["jobs"] if j["status"] == "fixture-attached"]
    assert attached and attached[0]["ell"] == 449
    classes = {(v["ell"], v["n"]): v["classification"] for v in body["verdicts"]}
    assert classes == {(449, 1): "Incomplete", (449, 2): "Complete"}
    # without fixtures every job is an external-data stub
    resp = client.post("/v1/cubic-sweep", json={
        "config": {"p": 2, "N": 2, "Nn": 2, "bf": 2810, "Bf": 2820,
                   "vHK": 4, "vHKn": 6, "Bell": 500},
    })
    assert all(j["status"] == "external-data-needed" for j in resp.json()["jobs"])


def test_verify_endpoint(client):
    resp = client.post("/v1/verify", json={
        "suite": "cyclo-norms", "params": {"pairs": 10, "fmax": 60},
    })
    assert resp.status_code == 200
    body = resp.json()
    assert body["passed"] is True and body["checks"] == 10
    resp = client.post("/v1/verify", json={"suite": "nope"})
    assert resp.status_code == 400


def test_simulate_endpoint(client):
    resp = client.post("/v1/simulate", json={"divisors": [9], "n": 2,
                                             "seed": 7, "count": 3})
    body = resp.json()
    assert len(body["ledgers"]) == 3
    for led in body["ledgers"]:
        assert led["steps"][0] == 9 and led["steps"][-1] == 1
    # deterministic given the seed
    again = client.post("/v1/simulate", json={"divisors": [9], "n": 2,
                                              "seed": 7, "count": 3}).json()
    assert again == body


def test_cyclo_endpoints(client):
    resp = client.post("/v1/cyclo/norm", json={"f": 15, "m": 5})
    assert resp.json()["holds"] is True
    resp = client.post("/v1/cyclo/norm", json={"f": 15, "m": 4})
    assert resp.status_code == 400
    resp = client.post("/v1/cyclo/theta", json={"f": 5})
    body = resp.json()
    assert body["square_u"] == "-5" and body["square_v"] == "1"
    resp = client.post("/v1/cyclo/index", json={"f": 229})
    assert resp.json() == {"f": 229, "exponent": 3, "class_number": 3, "match": True}


def test_characters_endpoints(client):
    resp = client.post("/v1/characters/enumerate", json={"d": 3, "p": 7})
    assert [c["degree"] for c in resp.json()["characters"]] == [1, 1, 1]
    resp = client.post("/v1/characters/decompose", json={
        "divisors": [4, 4], "sigma": [[0, -1], [1, -1]], "d": 3, "p": 2,
    })
    comps = resp.json()["components"]
    assert comps[0]["order"] == 1 and comps[1]["order"] == 16
    resp = client.post("/v1/characters/resolve", json={
        "d": 6, "per_subfield": {"1": "1", "2": "2", "3": "3", "6": "30"},
    })
    assert resp.json()["values"] == {"1": "1", "2": "2", "3": "3", "6": "5"}
    resp = client.post("/v1/characters/resolve", json={
        "d": 6, "per_subfield": {"1": "1", "2": "2", "6": "30"},
    })
    assert resp.status_code == 400
