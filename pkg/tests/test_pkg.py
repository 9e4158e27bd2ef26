import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import synth_params
from teachkg import (AccessOutcome, Corpus, Lecturer, Literal, NamespaceViolation, NodeId,
                     Triple, answer, assert_entity, build_kg, build_pkg, materialize, merge_pkg,
                     parse_manifest, resolve_material)
from teachkg.pkg import build_all_pkgs, check_namespace, parse_grants, read_pkg, write_pkg
from teachkg.store import TKG
from teachkg.testkit import generate_corpus

from test_cq import _all_questions


def _one_course():
    doc = {
        "id": "tkg:c", "title": "C", "audience": "students", "level": "master",
        "lecturers": [{"id": "tkg:ann", "name": "Ann", "affiliation": "Uni", "contact": "ann@x"}],
        "lectures": [{"index": i, "title": f"L{i}", "topics": ["tkg:rdf"],
                      "materials": [{"id": f"tkg:m{i}", "title": "M", "kind": "notes",
                                     "open_access": i == 1}]}
                     for i in (1, 2, 3)],
    }
    return materialize(Corpus(manifests=[parse_manifest(json.dumps(doc))]))


def _course_union(store, p):
    out = set()
    for c in p.owned_courses:
        for lid in store.objects(c, TKG.hasLecture):
            out |= store.objects(lid, TKG.hasMaterial)
    return out


def test_owns_course_materials():
    store = _one_course()
    p = build_pkg(store, "tkg:ann")
    assert p.owned_courses == {"tkg:c"}
    assert len(p.owned_materials) == 3
    assert build_pkg(store, "tkg:ann").graph == p.graph


def test_ownership_closure_on_sample(sample_corpus):
    store = materialize(sample_corpus)
    for p in build_all_pkgs(store):
        assert p.owned_materials == _course_union(store, p)


def test_idle_lecturer_has_identity_only():
    store = _one_course()
    assert_entity(store, Lecturer(id=NodeId("tkg:bob"), name="Bob", contact="bob@x"))
    p = build_pkg(store, "tkg:bob")
    assert p.owned_courses == frozenset() and p.owned_materials == frozenset()
    assert {t.p for t in p.graph} == {NodeId("rdf:type"), NodeId("pkg:owner"),
                                      NodeId("pkg:name"), NodeId("pkg:contact")}


def test_merge_is_idempotent_and_namespaced(sample_corpus):
    store = materialize(sample_corpus)
    before = store.triple_set()
    for p in build_all_pkgs(store):
        merge_pkg(store, p)
    added = store.triple_set() - before
    assert added and all(t.s.prefix == "pkg" and t.p.prefix in ("pkg", "rdf") for t in added)
    snapshot = store.triple_set()
    for p in build_all_pkgs(materialize(sample_corpus)):
        merge_pkg(store, p)
    assert store.triple_set() == snapshot


def test_foreign_assertions_rejected():
    store = _one_course()
    p = build_pkg(store, "tkg:ann")
    p.graph.insert(Triple(NodeId("tkg:other-course"), NodeId("pkg:note"), Literal("mine")))
    with pytest.raises(NamespaceViolation):
        merge_pkg(store, p)
    q = build_pkg(store, "tkg:ann")
    q.graph.insert(Triple(q.node, TKG.covers, NodeId("tkg:rdf")))
    with pytest.raises(NamespaceViolation):
        check_namespace(q)
    with pytest.raises(NamespaceViolation):
        q.grant("eve", "tkg:not-mine")


def test_resolution_rules(sample_corpus):
    store = materialize(sample_corpus)
    pkgs = build_all_pkgs(store)
    opened = resolve_material(store, pkgs, "tkg:kgm-01-slides", "eve")
    assert opened.outcome is AccessOutcome.OPEN
    assert opened.location == "materials/kgm-01-slides.txt"

    closed = resolve_material(store, pkgs, "tkg:kgm-03-notes", "eve")
    jonas = store.value(NodeId("tkg:jonas-weber"), TKG.contact).value
    assert closed.outcome is AccessOutcome.CONTACT_INSTRUCTOR
    assert (closed.owner, closed.contact) == ("tkg:jonas-weber", jonas)

    owner = next(p for p in pkgs if p.owner.id == "tkg:jonas-weber")
    owner.grant("eve", "tkg:kgm-03-notes")
    granted = resolve_material(store, pkgs, "tkg:kgm-03-notes", "eve")
    assert granted.outcome is AccessOutcome.GRANTED
    assert resolve_material(store, pkgs, "tkg:kgm-03-notes", "mallory").outcome \
        is AccessOutcome.CONTACT_INSTRUCTOR

    assert resolve_material(store, [], "tkg:kgm-03-notes", "eve").outcome is AccessOutcome.DENIED


def test_file_round_trip(tmp_path, sample_corpus):
    store = materialize(sample_corpus)
    p = build_pkg(store, "tkg:jonas-weber")
    p.grant("eve", "tkg:kgm-03-notes")
    path = write_pkg(p, tmp_path)
    q = read_pkg(store, path)
    assert q.graph == p.graph and q.grants == p.grants
    assert (q.owned_courses, q.owned_materials) == (p.owned_courses, p.owned_materials)


def test_pkg_file_without_prefix(tmp_path, sample_corpus):
    bad = tmp_path / "x.ttl"
    bad.write_text("@prefix tkg: <https://w3id.org/teachkg#> .\ntkg:a tkg:b tkg:c .\n")
    with pytest.raises(NamespaceViolation):
        read_pkg(materialize(sample_corpus), bad)


def test_grants_schema():
    assert parse_grants('[{"requester": "eve", "material": "tkg:m"}]') == {("eve", "tkg:m")}
    from teachkg import SchemaViolation
    with pytest.raises(SchemaViolation):
        parse_grants('[{"requester": "eve"}]')


def _non_access_answers(kg):
    out = []
    for q in _all_questions(kg):
        if q.variant != "is-open-access":
            out.append(answer(kg, q).to_json())
    return out


def test_isolation_on_sample(sample_kg):
    before = _non_access_answers(sample_kg)
    for p in build_all_pkgs(sample_kg.store):
        merge_pkg(sample_kg.store, p)
    assert _non_access_answers(sample_kg) == before


@settings(max_examples=15)
@given(synth_params, st.data())
def test_open_only_when_open_access(p, data):
    corpus, _ = generate_corpus(p)
    kg = build_kg(corpus)
    store = kg.store
    pkgs = build_all_pkgs(store)
    for x in pkgs:
        assert x.owned_materials == _course_union(store, x)
        for m in sorted(x.owned_materials):
            if data.draw(st.booleans()):
                x.grant("eve", m)
    for m in sorted(store.instances(TKG.Material)):
        res = resolve_material(store, pkgs, m, "eve")
        is_open = Literal(True) in store.objects(m, TKG.openAccess)
        assert (res.outcome is AccessOutcome.OPEN) == is_open
    before = _non_access_answers(kg)
    for x in pkgs:
        merge_pkg(store, x)
    assert _non_access_answers(kg) == before
