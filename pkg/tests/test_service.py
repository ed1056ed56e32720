import math

import pytest
from fastapi.testclient import TestClient

from heunvar import __version__
from heunvar.api import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    r = client.get("/health")
    assert r.status_code == 200
    assert r.json() == {"status": "ok", "version": __version__}


def test_truncate_endpoint(client):
    r = client.post("/truncate", json={"s": 0, "b": 1, "n_min": 0, "n_max": 1})
    assert r.status_code == 200
    body = r.json()
    assert body["columns"] == ["n", "i", "a_root", "w", "coefficients"]
    assert [row[:4] for row in body["rows"]] == [
        [0, 1, -0.5, 1.75], [1, 1, 0.5, 3.75], [1, 2, -2.5, 3.75]]
    assert body["config"]["command"] == "truncate"


def test_truncate_rejects_bad_range(client):
    r = client.post("/truncate", json={"n_min": 3, "n_max": 1})
    assert r.status_code == 400
    assert "n-min" in r.json()["detail"]


def test_heun_roots_endpoint(client):
    r = client.post("/heun-roots", json={"n0": 1, "b": 1.0, "d": 0.0})
    assert r.status_code == 200
    rows = r.json()["rows"]
    assert [row[1] for row in rows] == [5.0, -1.0]
    assert all(row[6] == "OK" for row in rows)


def test_heun_roots_b_zero_maps_to_422(client):
    r = client.post("/heun-roots", json={"n0": 1, "b": 0.0, "d": 1.0})
    assert r.status_code == 422
    assert "b=0" in r.json()["detail"]


def test_heun_roots_nan_becomes_null(client):
    r = client.post("/heun-roots", json={"n0": 3, "b": 1.0, "d": 0.0})
    assert r.status_code == 200
    for row in r.json()["rows"]:
        assert row[3] is None and row[4] is None
        assert row[6] == "NA"


def test_curves_endpoint_oscillator(client):
    r = client.post("/curves", json={"s": 0, "b": 0, "a_min": 0, "a_max": 0,
                                     "nu_max": 2})
    assert r.status_code == 200
    values = [row[2] for row in r.json()["rows"]]
    assert values == pytest.approx([2.0, 6.0, 10.0], abs=1e-8)


def test_figure_endpoint(client):
    r = client.post("/figure", json={"a_step": 0.25, "n_max": 3,
                                     "nu_max": 3})
    assert r.status_code == 200
    body = r.json()
    assert set(body) == {"curves", "points", "metadata"}
    audits = body["metadata"]["audits"]
    assert audits["vertical_line_ok"] is True
    assert audits["points_total"] == len(body["points"]["rows"])
    a0 = [row for row in body["points"]["rows"] if row[0] == 0]
    assert len(a0) == 1 and math.isclose(a0[0][2], -0.5, abs_tol=1e-12)


def test_verify_endpoint(client):
    # coarse grid to keep the round trip fast; match_tol scaled to the
    # correspondingly larger interpolation error
    r = client.post("/verify", json={"a_step": 0.25, "self_test": True,
                                     "match_tol": 1e-3})
    assert r.status_code == 200
    body = r.json()
    assert body["all_passed"] is True
    names = [c["name"] for c in body["checks"]]
    assert "self-test-corrupted-w" in names
    for check in body["checks"]:
        assert set(check) == {"name", "measured", "allowed", "passed",
                              "detail"}


def test_verify_endpoint_reports_failure_as_200(client):
    r = client.post("/verify", json={"match_tol": 1e-13, "a_step": 0.25})
    assert r.status_code == 200
    body = r.json()
    assert body["all_passed"] is False
    failing = {c["name"] for c in body["checks"] if not c["passed"]}
    assert "curve-membership" in failing


def test_request_validation_from_pydantic(client):
    r = client.post("/curves", json={"a_step": -1.0})
    assert r.status_code == 422
