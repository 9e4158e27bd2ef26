import pytest
from hypothesis import given
from hypothesis import strategies as st

from teachkg import (CycleDetected, InvalidEntity, Literal, MalformedTriple, NodeId,
                     ReadOnlyStore, Topic, Triple, TripleStore, UnknownEntity, assert_entity,
                     match_pattern, topic_ancestors)
from teachkg.store import RDF, TKG, insert_triple

RDF_T, SPARQL = NodeId("tkg:rdf"), NodeId("tkg:sparql")

nodes = st.sampled_from([NodeId(f"tkg:n{i}") for i in range(5)])
preds = st.sampled_from([TKG.covers, TKG.hasSubtopic, TKG.label])
objects = st.one_of(nodes, st.builds(Literal, st.integers(-3, 3)),
                    st.builds(Literal, st.text(max_size=4)), st.builds(Literal, st.booleans()))
triples = st.builds(Triple, nodes, preds, objects)


def test_insert_is_set_semantics():
    s = TripleStore()
    t = Triple(RDF_T, TKG.prerequisiteOf, SPARQL)
    assert insert_triple(s, t) is True
    assert insert_triple(s, t) is False
    assert len(s) == 1


def test_literal_predicate_rejected():
    s = TripleStore()
    with pytest.raises(MalformedTriple):
        s.insert((RDF_T, Literal("p"), SPARQL))
    with pytest.raises(MalformedTriple):
        s.add("not an id", TKG.covers, SPARQL)


def test_empty_store_matches_nothing():
    s = TripleStore()
    assert match_pattern(s) == []
    assert match_pattern(s, p=TKG.teaches) == []
    assert match_pattern(s, RDF_T, TKG.covers, SPARQL) == []


def test_frozen_store_rejects_writes():
    s = TripleStore([Triple(RDF_T, TKG.prerequisiteOf, SPARQL)]).freeze()
    with pytest.raises(ReadOnlyStore):
        s.add(SPARQL, TKG.prerequisiteOf, RDF_T)
    with pytest.raises(ReadOnlyStore):
        s.remove(Triple(RDF_T, TKG.prerequisiteOf, SPARQL))


def test_literal_datatypes():
    assert Literal(True).datatype == "xsd:boolean"
    assert Literal(3).datatype == "xsd:integer"
    assert Literal(0.5).datatype == "xsd:decimal"
    assert Literal("x").datatype == "xsd:string"
    with pytest.raises(InvalidEntity):
        Literal(float("nan"))
    with pytest.raises(InvalidEntity):
        Literal(1, "xsd:string")


def test_malformed_node_ids():
    for bad in ("rdf", "foo:bar", "tkg:", "tkg:a b"):
        with pytest.raises(InvalidEntity):
            NodeId(bad)


@given(st.lists(triples, max_size=30), st.lists(triples, max_size=10))
def test_indexes_agree(inserted, removed):
    s = TripleStore(inserted)
    for t in removed:
        s.remove(t)
    expected = set(inserted) - set(removed)
    assert s.triple_set() == expected
    assert len(s) == len(expected)
    assert match_pattern(s) == sorted(expected, key=Triple.key)
    # every bound/unbound combination goes through a different index path
    for t in expected:
        for pattern in [(t.s, None, None), (None, t.p, None), (None, None, t.o),
                        (t.s, t.p, None), (t.s, None, t.o), (None, t.p, t.o), tuple(t)]:
            want = sorted((x for x in expected
                           if all(q is None or q == v for q, v in zip(pattern, x))),
                          key=Triple.key)
            assert match_pattern(s, *pattern) == want


def test_assert_entity_idempotent():
    s = TripleStore()
    dr = Topic(id=NodeId("tkg:data-representation"), label="Data Representation")
    rr = Topic(id=NodeId("tkg:rdfs-representation"), label="RDFS representation",
               parent=dr.id)
    assert_entity(s, dr)
    assert assert_entity(s, rr) == rr.id
    before = s.triple_set()
    assert_entity(s, rr)
    assert s.triple_set() == before
    assert topic_ancestors(s, rr.id) == [dr.id]
    assert topic_ancestors(s, dr.id) == []


def test_self_parent_rejected():
    s = TripleStore()
    with pytest.raises(InvalidEntity):
        assert_entity(s, Topic(id=NodeId("tkg:a"), label="A", parent=NodeId("tkg:a")))


def test_injected_cycle_detected():
    s = TripleStore()
    for t in ("tkg:a", "tkg:b", "tkg:c"):
        s.add(t, RDF.type, TKG.Topic)
    s.add("tkg:a", TKG.hasSubtopic, "tkg:b")
    s.add("tkg:b", TKG.hasSubtopic, "tkg:c")
    s.add("tkg:c", TKG.hasSubtopic, "tkg:a")
    with pytest.raises(CycleDetected):
        topic_ancestors(s, "tkg:c")


def test_ancestors_of_unknown_topic():
    with pytest.raises(UnknownEntity):
        topic_ancestors(TripleStore(), "tkg:nothing")


def test_teaches_pairs_on_sample(sample_corpus):
    from teachkg import materialize
    s = materialize(sample_corpus)
    pairs = {(x.id, m.course.id) for m in sample_corpus.manifests for x in m.lecturers}
    got = match_pattern(s, p=TKG.teaches)
    assert {(t.s, t.o) for t in got} == pairs
    assert len(got) == 4
