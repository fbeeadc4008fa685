"""Fixture parsing, claim cross-validation, cache-first remote fetch."""

import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer
from pathlib import Path

import pytest

from avcyclic import ingest
from avcyclic.errors import CapabilityError, InputError
from avcyclic.ingest import ExternalClassRecord

FIXTURE = Path(__file__).parent / "fixtures" / "external_records.jsonl"


def test_bundled_fixture_loads_cleanly():
    load = ingest.load_fixture(FIXTURE)
    assert len(load.records) == 20
    assert load.rejected == ()
    first = load.records[0]
    assert first.label == "1.2.2_m1_1"
    assert (first.q, first.g) == (2, 1)
    assert first.poly == (2, -1, 1)
    assert first.poly_monic_first == (1, -1, 2)
    assert first.is_ordinary_claimed is True
    assert first.point_count_claimed == 2
    assert first.p_r == (2, 1)


def test_malformed_lines_reported_with_numbers(tmp_path):
    f = tmp_path / "mixed.jsonl"
    good = {"label": "a", "q": 2, "g": 1, "poly": [2, -1, 1]}
    f.write_text(
        json.dumps(good) + "\n"
        + "this is not json\n"
        + "\n"  # blank lines are fine
        + json.dumps({"label": "b", "q": 6, "g": 1, "poly": [6, -1, 1]}) + "\n"
        + json.dumps({"label": "c", "q": 2, "g": 1, "poly": [2, -1]}) + "\n"
        + json.dumps({"label": "d", "q": 2, "g": 1, "poly": [2, -1, 3]}) + "\n"
        + json.dumps({"label": "", "q": 2, "g": 1, "poly": [2, -1, 1]}) + "\n"
        + json.dumps({"q": 2, "g": 1, "poly": [2, -1, 1]}) + "\n",
        encoding="utf-8",
    )
    load = ingest.load_fixture(f)
    assert [r.label for r in load.records] == ["a"]
    assert [line for line, _ in load.rejected] == [2, 4, 5, 6, 7, 8]
    reasons = dict(load.rejected)
    assert "prime power" in reasons[4]
    assert "monic" in reasons[6]
    assert "missing field" in reasons[8]


def test_zero_valid_records_is_an_error(tmp_path):
    f = tmp_path / "empty.jsonl"
    f.write_text("not json either\n", encoding="utf-8")
    with pytest.raises(InputError) as e:
        ingest.load_fixture(f)
    assert e.value.code == "no_valid_records"
    g = tmp_path / "blank.jsonl"
    g.write_text("\n\n", encoding="utf-8")
    with pytest.raises(InputError):
        ingest.load_fixture(g)


def test_bad_q_property():
    rec = ExternalClassRecord("x", 12, 1, (12, -1, 1))
    with pytest.raises(InputError) as e:
        rec.p_r
    assert e.value.code == "bad_q"


def test_cross_validate_bundled_fixture_is_clean():
    load = ingest.load_fixture(FIXTURE)
    report = ingest.cross_validate(load.records)
    assert report["record_count"] == 20
    assert report["mismatch_count"] == 0
    assert report["mismatches"] == []


def test_cross_validate_detects_flipped_claims():
    base = ExternalClassRecord("good", 2, 1, (2, -1, 1), True, 2)
    flipped = ExternalClassRecord("bad-flag", 2, 1, (2, -1, 1), False, 2)
    wrong_count = ExternalClassRecord("bad-count", 2, 1, (2, -1, 1), True, 3)
    silent = ExternalClassRecord("no-claims", 2, 1, (2, -1, 1))
    report = ingest.cross_validate([base, flipped, wrong_count, silent])
    assert report["record_count"] == 4
    assert report["mismatch_count"] == 2
    fields = {(m["label"], m["field"]) for m in report["mismatches"]}
    assert fields == {("bad-flag", "is_ordinary"), ("bad-count", "point_count")}
    by_label = {m["label"]: m for m in report["mismatches"]}
    assert by_label["bad-count"]["claimed"] == 3
    assert by_label["bad-count"]["computed"] == 2


def test_fetch_remote_requires_opt_in(tmp_path):
    with pytest.raises(CapabilityError):
        ingest.fetch_remote(2, 1, "http://127.0.0.1:1/none", cache_dir=tmp_path)


def test_fetch_remote_cache_hit_never_needs_network(tmp_path):
    cache = tmp_path / "external_q2_g1.jsonl"
    cache.write_text(
        json.dumps({"label": "a", "q": 2, "g": 1, "poly": [2, -1, 1]}) + "\n",
        encoding="utf-8",
    )
    load = ingest.fetch_remote(2, 1, "http://127.0.0.1:1/none", cache_dir=tmp_path)
    assert [r.label for r in load.records] == ["a"]


def test_cache_dir_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv(ingest.CACHE_ENV_VAR, str(tmp_path))
    cache = tmp_path / "external_q3_g1.jsonl"
    cache.write_text(
        json.dumps({"label": "e", "q": 3, "g": 1, "poly": [3, -1, 1]}) + "\n",
        encoding="utf-8",
    )
    load = ingest.fetch_remote(3, 1, "http://127.0.0.1:1/none")
    assert [r.label for r in load.records] == ["e"]


class _StubHandler(BaseHTTPRequestHandler):
    payload: bytes = b"[]"
    status: int = 200

    def do_GET(self):
        self.send_response(self.status)
        self.send_header("Content-Type", "application/json")
        self.end_headers()
        self.wfile.write(self.payload)

    def log_message(self, *args):
        pass


@pytest.fixture()
def stub_server():
    server = HTTPServer(("127.0.0.1", 0), _StubHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_address[1]}/records"
    server.shutdown()
    thread.join(timeout=5)


def test_fetch_remote_round_trip(tmp_path, stub_server):
    _StubHandler.status = 200
    _StubHandler.payload = json.dumps([
        {"label": "srv", "q": 2, "g": 1, "poly": [2, -1, 1],
         "is_ordinary_claimed": True, "point_count_claimed": 2},
    ]).encode()
    load = ingest.fetch_remote(2, 1, stub_server, allow_network=True, cache_dir=tmp_path)
    assert [r.label for r in load.records] == ["srv"]
    cache = tmp_path / "external_q2_g1.jsonl"
    assert cache.exists()
    # second call with the network forbidden hits the cache
    again = ingest.fetch_remote(2, 1, "http://127.0.0.1:1/none", cache_dir=tmp_path)
    assert again == load


def test_fetch_remote_malformed_body_leaves_no_cache(tmp_path, stub_server):
    _StubHandler.status = 200
    _StubHandler.payload = b"not json"
    with pytest.raises(InputError) as e:
        ingest.fetch_remote(5, 1, stub_server, allow_network=True, cache_dir=tmp_path)
    assert e.value.code == "malformed_body"
    assert not (tmp_path / "external_q5_g1.jsonl").exists()
    _StubHandler.payload = json.dumps({"not": "an array"}).encode()
    with pytest.raises(InputError) as e:
        ingest.fetch_remote(5, 1, stub_server, allow_network=True, cache_dir=tmp_path)
    assert e.value.code == "malformed_body"
    assert not (tmp_path / "external_q5_g1.jsonl").exists()


def test_fetch_remote_http_error(tmp_path, stub_server):
    _StubHandler.status = 404
    _StubHandler.payload = b"[]"
    with pytest.raises(InputError) as e:
        ingest.fetch_remote(7, 1, stub_server, allow_network=True, cache_dir=tmp_path)
    assert e.value.code == "fetch_failed"
