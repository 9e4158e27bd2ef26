import json

import pytest

from teachkg import load_corpus, parse_turtle_subset
from teachkg.cli import run_cli
from teachkg.server import Snapshot, handle

from test_cq import TABLE


@pytest.fixture
def store(tmp_path, capsys):
    path = str(tmp_path / "kg.ttl")
    assert run_cli(["build", "--store", path]) == 0
    assert run_cli(["extract-topics", "--store", path]) == 0
    assert run_cli(["infer-prereqs", "--store", path]) == 0
    capsys.readouterr()
    return path


def run(capsys, *argv):
    code = run_cli(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_query_list(capsys):
    code, out, _ = run(capsys, "query", "list")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 17
    assert [line.split("\t")[2] for line in lines] == TABLE


def test_pipeline_and_prerequisite(capsys, tmp_path):
    path = str(tmp_path / "kg.ttl")
    assert run(capsys, "build", "--store", path)[0] == 0
    code, out, _ = run(capsys, "query", "prerequisites-of", "tkg:sparql", "--store", path)
    assert code == 2  # not inferred yet
    assert run(capsys, "extract-topics", "--store", path)[0] == 0
    code, out, _ = run(capsys, "infer-prereqs", "--store", path, "--report", "-")
    assert code == 0 and out.startswith("tkg:rdf -> tkg:sparql\n")
    report = json.loads(out.split("\n", 1)[1])
    assert [r for r in report if r["kept"]][0]["ratio"] == 1.0
    code, out, _ = run(capsys, "query", "prerequisites-of", "tkg:sparql", "--store", path)
    assert (code, out) == (0, "tkg:rdf\n")


def test_exit_codes(capsys, tmp_path, store):
    code, _, err = run(capsys, "build", "--corpus", str(tmp_path), "--store", str(tmp_path / "x"))
    assert code == 2 and "MissingFile" in err and "topics.json" in err
    assert run(capsys, "build", "--bogus")[0] == 1
    assert run(capsys, "infer-prereqs", "--store", store, "--threshold", "0.3")[0] == 1
    assert run(capsys, "query", "who-knows", "tkg:rdf", "--store", store)[0] == 1
    assert run(capsys, "query", "who-teaches", "tkg:nothing", "--store", store)[0] == 2
    assert run(capsys, "query", "similar-courses", "tkg:kg-master", "--k", "0", "--store", store)[0] == 1
    assert run(capsys, "export", "--store", store, "--format", "dot", "--layers", "moons")[0] == 1
    assert run(capsys, "synth", "--courses", "0", "--lectures", "3", "--out", str(tmp_path / "s"))[0] == 1


def test_resolve(capsys, tmp_path, store):
    code, out, _ = run(capsys, "resolve", "tkg:kgm-01-slides", "--as", "eve", "--store", store)
    assert (code, out) == (0, "open\tmaterials/kgm-01-slides.txt\n")
    code, out, _ = run(capsys, "resolve", "tkg:kgm-03-notes", "--as", "eve", "--store", store, "--json")
    assert json.loads(out)["outcome"] == "contact-instructor"
    grants = tmp_path / "grants.json"
    grants.write_text('[{"requester": "eve", "material": "tkg:kgm-03-notes"}]')
    code, out, _ = run(capsys, "resolve", "tkg:kgm-03-notes", "--as", "eve", "--store", store,
                       "--grants", str(grants))
    assert out.startswith("granted")


def test_exports(capsys, tmp_path, store):
    out_ttl = tmp_path / "out.ttl"
    assert run(capsys, "export", "--store", store, "--out", str(out_ttl))[0] == 0
    with open(store, encoding="utf-8") as fh:
        assert out_ttl.read_text(encoding="utf-8") == fh.read()
    code, out, _ = run(capsys, "export", "--store", store, "--format", "dot")
    assert out.startswith("digraph teachkg {")
    code, out, _ = run(capsys, "export", "--store", store, "--format", "json")
    assert len(json.loads(out)["triples"]) == len(parse_turtle_subset(out_ttl.read_text()))


def test_synth(capsys, tmp_path):
    out = tmp_path / "synth"
    assert run(capsys, "synth", "--courses", "3", "--lectures", "4", "--seed", "5",
               "--out", str(out))[0] == 0
    assert len(load_corpus(out).manifests) == 3
    assert (out / "ground_truth.json").is_file()


def test_cli_and_http_agree(capsys, store, sample_corpus):
    from teachkg import TeachingKG, TripleStore
    kg = TeachingKG.from_corpus(sample_corpus,
                                store=TripleStore(parse_turtle_subset(open(store).read())))
    snap = Snapshot.of(kg)
    cases = [
        (["prerequisites-of", "tkg:sparql"], "/topics/tkg:sparql/prerequisites", {}),
        (["who-teaches", "tkg:rdf"], "/topics/tkg:rdf/teachers", {}),
        (["similar-courses", "tkg:kg-master", "--k", "2"], "/courses/tkg:kg-master/similar",
         {"k": ["2"]}),
        (["similarity-to", "tkg:kgm-01-slides", "tkg:swb-01-slides"],
         "/materials/tkg:kgm-01-slides/similarity/tkg:swb-01-slides", {}),
        (["topics-covered", "tkg:kgm-01-slides"], "/materials/tkg:kgm-01-slides/topics", {}),
    ]
    for argv, path, query in cases:
        code, out, _ = run(capsys, "query", *argv, "--json", "--store", store)
        assert code == 0
        status, payload, _ = handle(snap, path, query)
        assert status == 200 and json.loads(out) == payload, argv


def test_config_and_env(capsys, tmp_path, monkeypatch):
    from teachkg import sample_corpus_path
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"corpus_root": str(sample_corpus_path()),
                               "inference": {"transitive_reduction": True}}))
    path = str(tmp_path / "kg.ttl")
    assert run(capsys, "build", "--store", path, "--config", str(cfg))[0] == 0
    monkeypatch.setenv("TEACHKG_CORPUS", str(tmp_path / "nowhere"))
    code, _, err = run(capsys, "build", "--store", path)
    assert code == 2 and "nowhere" in err
