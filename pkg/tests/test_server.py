"""HTTP service: endpoints, error mapping, CLI/HTTP byte identity."""
import json
import os
import subprocess
import sys
import time

import httpx
import numpy as np
import pytest
from fastapi.testclient import TestClient

from periodlab import api, cli
from periodlab.homology import symplectic_j
from periodlab.server import create_app

J6 = symplectic_j(3)


@pytest.fixture(scope="module")
def client():
    with TestClient(create_app()) as c:
        yield c


# ------------------------------------------------------------- endpoints

def test_post_curve(client):
    resp = client.post("/api/curve", json={"curve": "klein-zw"})
    assert resp.status_code == 200
    payload = resp.json()
    assert payload["model"] == "zw"
    assert payload["sheet_count"] == 7
    assert len(payload["branch_points"]) == 3


def test_post_lift_follows_a_closed_cycle(client, adapted_basis):
    names = adapted_basis.names()
    a1 = adapted_basis.cycles[names.index("a1")]
    resp = client.post("/api/lift", json={
        "curve": "klein-zw",
        "points": [api.cnum(p) for p in a1.points],
        "start_sheet": a1.start_sheet,
    })
    assert resp.status_code == 200
    payload = resp.json()
    assert payload["closes"] is True
    assert payload["sheets"] == list(a1.sheets)


def test_post_intersect(client, adapted_blob):
    resp = client.post("/api/intersect",
                       json={"cycles": adapted_blob, "pair": ["a1", "b1"]})
    assert resp.status_code == 200
    assert resp.json()["intersection"] == 1


def test_post_basis_check(client, adapted_blob):
    resp = client.post("/api/basis-check", json={"set": adapted_blob})
    assert resp.status_code == 200
    payload = resp.json()
    assert payload["canonical"] is True
    assert np.array_equal(np.array(payload["matrix"]), J6)


def test_post_transform_identity(client, adapted_blob):
    resp = client.post("/api/transform",
                       json={"src": adapted_blob, "dst": adapted_blob})
    assert resp.status_code == 200
    payload = resp.json()
    assert payload["symplectic"] is True
    assert np.array_equal(np.array(payload["matrix"]), np.eye(6, dtype=int))


def test_post_periods_elliptic(client, elliptic_blob):
    resp = client.post("/api/periods", json={
        "cycles": elliptic_blob,
        "differentials": [{"numerator": "1", "denominator": "2*y"}],
        "tol": 1e-8,
    })
    assert resp.status_code == 200
    payload = resp.json()
    tau = payload["tau"][0][0]
    assert abs(tau["re"]) < 1e-6 and abs(tau["im"] - 1) < 1e-6
    assert payload["riemann"]["pass"] is True


def test_get_klein_reference(client):
    resp = client.get("/api/klein/reference")
    assert resp.status_code == 200
    payload = resp.json()
    assert set(payload["targets"]) == {"rl", "yoshida", "tadokoro",
                                       "tretkoff", "schindler", "rga"}
    assert "tau_theorem" in payload


# ---------------------------------------------------------- error mapping

def test_malformed_body_is_400(client):
    resp = client.post("/api/curve", content=b"{not json",
                       headers={"content-type": "application/json"})
    assert resp.status_code == 400
    assert resp.json() == {"reason": "request body is not valid JSON"}


def test_unparseable_curve_is_400(client):
    resp = client.post("/api/curve", json={"curve": "y^2 -* x"})
    assert resp.status_code == 400
    assert "reason" in resp.json()


def test_unknown_cycle_refs_are_400(client):
    resp = client.post("/api/intersect", json={"cycle1": "deadbeef:x",
                                               "cycle2": "deadbeef:y"})
    assert resp.status_code == 400


def test_wrong_sheet_annotation_is_422_with_segment(client, adapted_blob):
    bad = json.loads(api.dumps(adapted_blob))
    spec = bad["cycles"][0]["points"][3]
    spec["sheet"] = (spec["sheet"] + 1) % 7
    resp = client.post("/api/basis-check", json={"set": bad})
    assert resp.status_code == 422
    payload = resp.json()
    assert payload["segment"] == 2
    assert "expected sheet" in payload["reason"]


def test_lift_too_near_a_branch_point_is_422(client):
    resp = client.post("/api/lift", json={"curve": "y^2 - x",
                                          "points": [0.0],
                                          "start_sheet": 0})
    assert resp.status_code == 422
    payload = resp.json()
    assert "coincident" in payload["reason"]
    assert "segment" in payload


def test_lift_through_a_branch_point_is_422(client):
    resp = client.post("/api/lift", json={"curve": "y^2 - x",
                                          "points": [1.0, 0.0],
                                          "start_sheet": 0})
    assert resp.status_code == 422
    assert "continuation failed on segment 0" in resp.json()["reason"]


def test_transform_transports_between_models(client):
    """A basis on the ts model compared against one on the zw model goes
    through the birational point map and still lands on a symplectic M."""
    from periodlab import klein
    ts = klein.build_model("ts")
    rl_blob = api.cycle_file("klein-ts", klein.build_rl_basis().cycles,
                             ts.curve.base_point)
    adapted = api.cycle_file("klein-zw", klein.build_adapted_basis().cycles,
                             klein.build_model("zw").curve.base_point)
    resp = client.post("/api/transform", json={"src": rl_blob,
                                               "dst": adapted})
    assert resp.status_code == 200
    payload = resp.json()
    assert payload["symplectic"] is True
    m = np.array(payload["matrix"])
    assert m.shape == (6, 6)
    assert m.dtype.kind == "i"


def test_transform_rejects_unrelated_curves(client, elliptic_blob,
                                            adapted_blob):
    resp = client.post("/api/transform", json={"src": elliptic_blob,
                                               "dst": adapted_blob})
    assert resp.status_code == 400
    assert "different curves" in resp.json()["reason"]


def test_cross_origin_requests_are_allowed(client):
    """The painter UI is served from a different origin than the API."""
    resp = client.post("/api/curve", json={"curve": "klein-zw"},
                       headers={"Origin": "http://localhost:8000"})
    assert resp.status_code == 200
    assert resp.headers["access-control-allow-origin"] == "*"
    pre = client.options("/api/lift", headers={
        "Origin": "http://localhost:8000",
        "Access-Control-Request-Method": "POST",
        "Access-Control-Request-Headers": "content-type"})
    assert pre.status_code == 200
    assert pre.headers["access-control-allow-origin"] == "*"


# ------------------------------------------- CLI and HTTP byte identity

def cli_json(capsys, argv):
    cli.main(argv)
    return capsys.readouterr().out.strip()


def test_curve_payload_matches_cli(client, capsys):
    out = cli_json(capsys, ["branch-points", "--model", "klein-zw", "--json"])
    resp = client.post("/api/curve", json={"curve": "klein-zw"})
    assert out == resp.text


def test_basis_check_payload_matches_cli(client, capsys, tmp_path,
                                         adapted_blob):
    f = tmp_path / "adapted.json"
    f.write_text(api.dumps(adapted_blob))
    out = cli_json(capsys, ["basis-check", "--cycles", str(f), "--json"])
    resp = client.post("/api/basis-check", json={"set": adapted_blob})
    assert out == resp.text


def test_intersect_payload_matches_cli(client, capsys, tmp_path,
                                       adapted_blob):
    f = tmp_path / "adapted.json"
    f.write_text(api.dumps(adapted_blob))
    out = cli_json(capsys, ["intersect", "--cycles", str(f),
                            "--pair", "a1,b1", "--json"])
    resp = client.post("/api/intersect",
                       json={"cycles": adapted_blob, "pair": ["a1", "b1"]})
    assert out == resp.text


def test_transform_payload_matches_cli(client, capsys, tmp_path,
                                       adapted_blob):
    f = tmp_path / "adapted.json"
    f.write_text(api.dumps(adapted_blob))
    out = cli_json(capsys, ["transform", "--src", str(f), "--dst", str(f),
                            "--json"])
    resp = client.post("/api/transform",
                       json={"src": adapted_blob, "dst": adapted_blob})
    assert out == resp.text


def test_periods_payload_matches_cli(client, capsys, tmp_path,
                                     elliptic_blob):
    f = tmp_path / "elliptic.json"
    f.write_text(api.dumps(elliptic_blob))
    diffs = '[{"numerator":"1","denominator":"2*y"}]'
    out = cli_json(capsys, ["periods", "--cycles", str(f),
                            "--differentials", diffs, "--tol", "1e-8",
                            "--json"])
    resp = client.post("/api/periods", json={
        "cycles": elliptic_blob,
        "differentials": [{"numerator": "1", "denominator": "2*y"}],
        "tol": 1e-8,
    })
    assert out == resp.text


# ------------------------------------------------------------- live serve

def test_serve_smoke():
    """`periodlab serve` must come up on PERIODLAB_PORT and answer."""
    port = 8931
    env = dict(os.environ, PERIODLAB_PORT=str(port))
    proc = subprocess.Popen(
        [sys.executable, "-c", "from periodlab.cli import main; main(['serve'])"],
        env=env, stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL)
    url = f"http://127.0.0.1:{port}/api/klein/reference"
    try:
        deadline = time.time() + 60
        resp = None
        while time.time() < deadline:
            try:
                resp = httpx.get(url, timeout=2.0)
                break
            except httpx.HTTPError:
                time.sleep(0.25)
        assert resp is not None, "service never came up"
        assert resp.status_code == 200
        assert "tau_theorem" in resp.json()
    finally:
        proc.terminate()
        try:
            proc.wait(timeout=10)
        except subprocess.TimeoutExpired:
            proc.kill()
