import json

import pytest

from app import app
from conftest import manifest_path

SO3 = {
    "n": 3, "codim": 1,
    "poisson": [
        {"indices": [1, 2], "coeff": "z3"},
        {"indices": [2, 3], "coeff": "z1"},
        {"indices": [3, 1], "coeff": "-z2"},
    ],
}

SYMPLECTIC = {
    "n": 4, "codim": 2,
    "poisson": [{"indices": [1, 3], "coeff": "1"}, {"indices": [2, 4], "coeff": "1"}],
}


@pytest.fixture
def client():
    app.config["TESTING"] = True
    with app.test_client() as c:
        yield c


def test_index(client):
    body = client.get("/").get_json()
    assert body["library"] == "coisocalc"
    assert "mc-extend" in body["commands"]


def test_check_route(client):
    body = client.post("/polycalc/check", json=SO3).get_json()
    assert body["poisson"] is True
    assert body["coisotropic"] is True


def test_check_route_rejects_repeated_index(client):
    resp = client.post("/polycalc/check", json={"n": 2, "poisson": [{"indices": [1, 1], "coeff": "1"}]})
    assert resp.status_code == 400
    assert "error" in resp.get_json()


def test_poisson_bracket_route(client):
    body = client.post("/polycalc/poisson-bracket", json={**SO3, "f": "z1", "g": "z2"}).get_json()
    assert body["result"] == "-1*z3"


def test_schouten_route(client):
    payload = {"n": 2, "xi": [{"indices": [1], "coeff": "1"}], "eta": [{"indices": [], "coeff": "z1"}]}
    body = client.post("/polycalc/schouten", json=payload).get_json()
    assert body["result"] == [{"indices": [], "coeff": "1"}]


def test_t1_route(client):
    body = client.post("/mc-deform/t1", json={**SYMPLECTIC, "degree": 0}).get_json()
    assert body["dimension"] == 2


def test_obstructions_route_needs_chart(client):
    assert client.post("/mc-deform/obstructions", json={}).status_code == 400


def test_extend_streams_obstruction(client):
    payload = {
        "n": 2, "codim": 2,
        "poisson": [{"indices": [1, 2], "coeff": "z1^2"}],
        "field": [{"indices": [1], "coeff": "1"}],
        "order": 3,
    }
    resp = client.post("/mc-deform/extend", json=payload)
    assert resp.status_code == 200
    events = [json.loads(line) for line in resp.get_data(as_text=True).splitlines() if line]
    assert events[0]["type"] == "progress"
    assert events[0]["status"] == "obstructed"
    assert events[-1]["type"] == "done"


def test_tot_routes(client):
    assert "disk_three_open" in client.get("/tot-cech/fixtures").get_json()
    body = client.post("/tot-cech/verify", json={"fixture": "disk_three_open"}).get_json()
    assert body["matches_expected"] is True
    assert client.post("/tot-cech/verify", json={}).status_code == 400
    assert client.post("/tot-cech/verify", json={"fixture": "no_such_fixture"}).status_code == 404


def test_linf_routes(client):
    body = client.post("/linf-voronov/derived-brackets", json={"fixture": "sl2_eps", "arity": 4}).get_json()
    assert body["brackets"] == {"2,2": {"5": "-2"}}
    body = client.post("/linf-voronov/verify", json={"fixture": "sl2_eps"}).get_json()
    assert body["linf_relations"] is True


def test_cli_run_route(client):
    with open(manifest_path("so3"), encoding="utf-8") as fh:
        text = fh.read()
    body = client.post("/cli/run/check-poisson", data=text).get_json()
    assert body["results"] == {"result": True}
    assert client.post("/cli/run/nonsense", data=text).status_code == 404
    assert client.post("/cli/run/check-poisson", data="").status_code == 400
    assert client.post("/cli/run/check-poisson", data="{not json").status_code == 400


def test_cli_run_route_overrides(client):
    with open(manifest_path("symplectic_c4"), encoding="utf-8") as fh:
        text = fh.read()
    body = client.post("/cli/run/t1?degree=0", data=text).get_json()
    assert body["results"]["dimension"] == 2


def test_truncated_slices_are_flagged_over_http(client):
    payload = {
        "n": 4, "codim": 2, "degree": 0, "cap": 2,
        "poisson": [{"indices": [1, 3], "coeff": "1 + z1"}, {"indices": [2, 4], "coeff": "1"}],
    }
    for route in ("/mc-deform/t1", "/mc-deform/obstructions"):
        body = client.post(route, json=payload).get_json()
        assert body["truncated"] is True
        assert body["window"] == "0..2"
        assert body["cap"] == 2
    body = client.post("/mc-deform/t1", json={**SYMPLECTIC, "degree": 1}).get_json()
    assert body["truncated"] is False
    assert body["window"] == "1"


@pytest.mark.parametrize("route, payload", [
    ("/mc-deform/t1", {**SYMPLECTIC, "degree": 99}),
    ("/mc-deform/obstructions", {**SYMPLECTIC, "degree": -1}),
    ("/mc-deform/t1", {**SYMPLECTIC, "degree": 0, "cap": 50}),
    ("/mc-deform/extend", {**SYMPLECTIC, "field": [{"indices": [1], "coeff": "z3"}], "order": 10000}),
    ("/linf-voronov/derived-brackets", {"fixture": "sl2_eps", "arity": 40}),
    ("/tot-cech/verify", {"fixture": "disk_three_open", "t_degree": 100}),
])
def test_out_of_range_settings_are_rejected(client, route, payload):
    resp = client.post(route, json=payload)
    assert resp.status_code == 400
    assert "must be between" in resp.get_json()["error"]


def test_cli_run_route_rejects_out_of_range_override(client):
    with open(manifest_path("symplectic_c4"), encoding="utf-8") as fh:
        text = fh.read()
    assert client.post("/cli/run/t1?degree=99", data=text).status_code == 400


@pytest.mark.parametrize("fixture", [["sl2_eps"], 7, "../fixtures/sl2_eps", "/etc/passwd", "nested/sl2_eps"])
def test_fixture_must_be_a_plain_name(client, fixture):
    for route in ("/tot-cech/verify", "/linf-voronov/verify", "/linf-voronov/derived-brackets"):
        resp = client.post(route, json={"fixture": fixture})
        assert resp.status_code == 400
        assert "error" in resp.get_json()


def test_manifest_fixture_cannot_leave_fixtures_dir(client):
    resp = client.post("/cli/run/tot-verify", data='{"fixture": "../manifests/so3"}')
    assert resp.status_code == 400
