import json
import urllib.error
import urllib.request

import pytest

from teachkg import ReadOnlyStore, build_kg
from teachkg.pkg import build_all_pkgs
from teachkg.server import Snapshot, serve_in_thread
from teachkg.store import TKG

from test_cq import TABLE


@pytest.fixture
def served(sample_corpus):
    kg = build_kg(sample_corpus)
    pkgs = build_all_pkgs(kg.store)
    server, thread = serve_in_thread(Snapshot.of(kg, pkgs))
    yield server
    server.shutdown()
    server.server_close()
    thread.join(5)


def fetch(server, path, method="GET"):
    url = f"http://127.0.0.1:{server.server_address[1]}{path}"
    req = urllib.request.Request(url, method=method)
    try:
        with urllib.request.urlopen(req, timeout=5) as resp:
            return resp.status, resp.read().decode("utf-8"), resp.headers["Content-Type"]
    except urllib.error.HTTPError as exc:
        return exc.code, exc.read().decode("utf-8"), exc.headers["Content-Type"]


def get_json(server, path):
    status, body, _ = fetch(server, path)
    return status, json.loads(body)


def test_cqs(served):
    status, body = get_json(served, "/cqs")
    assert status == 200 and [c["wording"] for c in body] == TABLE


def test_prerequisites(served):
    status, body = get_json(served, "/topics/tkg:sparql/prerequisites")
    assert status == 200 and [r["id"] for r in body["rows"]] == ["tkg:rdf"]
    status, body = get_json(served, "/topics/tkg:sparql/prerequisites?transitive=true")
    assert [r["id"] for r in body["rows"]] == ["tkg:rdf"]


def test_errors(served):
    assert get_json(served, "/materials/tkg:unknown/topics")[0] == 404
    assert get_json(served, "/nowhere")[0] == 404
    assert get_json(served, "/courses/tkg:kg-master/similar?k=0")[0] == 400
    assert get_json(served, "/courses/tkg:kg-master/similar?k=two")[0] == 400
    assert get_json(served, "/topics/tkg:sparql/prerequisites?transitive=maybe")[0] == 400
    status, body, _ = fetch(served, "/cqs", method="POST")
    assert status == 405 and "read-only" in body
    assert fetch(served, "/cqs", method="DELETE")[0] == 405


def test_access(served):
    status, body = get_json(served, "/materials/tkg:kgm-03-notes/access?requester=eve")
    assert status == 200 and body["outcome"] == "contact-instructor"
    status, body = get_json(served, "/materials/tkg:kgm-01-slides/access?requester=eve")
    assert body["outcome"] == "open" and body["location"] == "materials/kgm-01-slides.txt"


def test_export_and_freeze(served):
    status, body, ctype = fetch(served, "/export.ttl")
    assert status == 200 and ctype.startswith("text/turtle") and "tkg:prerequisiteOf" in body
    with pytest.raises(ReadOnlyStore):
        served.snapshot.kg.store.add("tkg:a", TKG.teaches, "tkg:b")


def test_swap(served, sample_corpus):
    old = served.snapshot
    fresh = build_kg(sample_corpus, infer=False)
    served.swap(Snapshot.of(fresh))
    assert get_json(served, "/topics/tkg:sparql/prerequisites")[0] == 409
    served.swap(old)
    assert get_json(served, "/topics/tkg:sparql/prerequisites")[0] == 200
