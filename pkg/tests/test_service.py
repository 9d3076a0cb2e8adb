import numpy as np
import pytest
from fastapi.testclient import TestClient

from rvbkit.basis import state_from_dict, state_to_dict
from rvbkit.service import create_app
from rvbkit.states import named_state


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app(), raise_server_exceptions=False)


def test_health(client):
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json()["status"] == "ok"


def test_rumer_endpoint(client):
    resp = client.post("/rumer", json={"n": 6})
    assert resp.status_code == 200
    data = resp.json()
    assert data["count"] == 5
    assert {"n", "pairs"} == set(data["matchings"][0])
    resp = client.post("/rumer", json={"n": 4, "all_matchings": True})
    assert resp.json()["count"] == 3


def test_rumer_invalid_size_is_400(client):
    resp = client.post("/rumer", json={"n": 5})
    assert resp.status_code == 400
    assert resp.json()["detail"]["code"] == "InvalidSize"


def test_state_family(client):
    resp = client.post("/state", json={"n": 4, "family": "hs"})
    assert resp.status_code == 200
    data = resp.json()
    assert data["n"] == 4 and len(data["amplitudes"]) == 6
    st = state_from_dict(data)
    assert abs(abs(st.overlap(named_state("hs"))) - 1) < 1e-12


def test_state_family_n_mismatch(client):
    resp = client.post("/state", json={"n": 6, "family": "hs"})
    assert resp.status_code == 422


def test_state_unknown_family(client):
    resp = client.post("/state", json={"family": "ghz"})
    assert resp.status_code == 404


def test_state_from_matching(client):
    resp = client.post("/state", json={"matching": {"n": 4, "pairs": [[1, 2], [3, 4]]}})
    assert resp.status_code == 200
    assert len(resp.json()["amplitudes"]) == 4


def test_state_needs_exactly_one_source(client):
    assert client.post("/state", json={"n": 4}).status_code == 422
    both = {"family": "hs", "matching": {"n": 4, "pairs": [[1, 2], [3, 4]]}}
    assert client.post("/state", json=both).status_code == 422


def test_measure_round_trip(client):
    state = state_to_dict(named_state("six-b"))
    resp = client.post("/measure", json={"state": state})
    assert resp.status_code == 200
    data = resp.json()
    assert data["homogeneous"] and data["isotropic"]
    assert data["e2v"] == pytest.approx(data["e2v_max"], abs=1e-9)
    assert len(data["pairs"]) == 15
    assert data["certificate"]["valid"]
    assert all(p["werner_p"] == pytest.approx(0.2, abs=1e-10) for p in data["pairs"])


def test_measure_pair_subset(client):
    state = state_to_dict(named_state("hs"))
    resp = client.post("/measure", json={"state": state, "pairs": [[1, 2]]})
    assert resp.status_code == 200
    assert len(resp.json()["pairs"]) == 1


def test_measure_rejects_bad_state(client):
    bad = {"n": 4, "amplitudes": [{"bits": "uuud", "re": 1.0}]}
    resp = client.post("/measure", json={"state": bad})
    assert resp.status_code == 422


def test_solve_exact(client):
    resp = client.post("/solve", json={"n": 6, "method": "exact"})
    assert resp.status_code == 200
    data = resp.json()
    assert data["count"] == 5 and data["rank"] == 5
    assert len(data["states"]) == 5 and len(data["certificates"]) == 5
    assert all(c["valid"] for c in data["certificates"])


def test_solve_exact_unsupported_size(client):
    resp = client.post("/solve", json={"n": 8, "method": "exact"})
    assert resp.status_code == 400
    assert resp.json()["detail"]["code"] == "Unsupported"


def test_solve_torus(client):
    resp = client.post("/solve", json={"n": 4, "method": "torus", "seed": 3, "restarts": 8})
    assert resp.status_code == 200
    data = resp.json()
    assert data["count"] == 2 and data["rank"] == 2


def test_spectrum_endpoint(client):
    resp = client.post("/spectrum", json={"model": "iirhm", "n": 6, "j_star": 1.0})
    data = resp.json()
    assert data["ground_degeneracy"] == 5
    assert data["ground_energy"] == pytest.approx(-0.45, abs=1e-10)
    resp = client.post("/spectrum", json={"model": "heisenberg_ring", "n": 4})
    assert resp.json()["ground_energy"] == pytest.approx(-2.0, abs=1e-10)


def test_curve_endpoint(client):
    resp = client.post("/curve", json={"what": "e2vmax", "n_max": 20})
    data = resp.json()
    assert data["limit"] == 2.0
    rows = data["rows"]
    assert [r["n"] for r in rows] == list(range(4, 21, 2))
    ratios = [r["ratio"] for r in rows]
    assert all(b > a for a, b in zip(ratios, ratios[1:]))
    resp = client.post("/curve", json={"what": "iconc", "n_max": 10})
    assert resp.json()["limit"] == pytest.approx(np.sqrt(1.5))
    assert client.post("/curve", json={"what": "e2vmax", "n_max": 7}).status_code == 422
