import json
import re

import pytest

from teachkg import (TripleStore, build_kg, export_dot, export_json, export_turtle, materialize,
                     parse_turtle_subset)
from teachkg.export import dot_node_count

NODE = re.compile(r'^  "([^"]+)" \[', re.M)
EDGE = re.compile(r'^  "([^"]+)" -> "([^"]+)"', re.M)


def _expected_nodes(corpus):
    topics = {t.id for t in corpus.topic_table()}
    lectures = sum(len(m.course.lectures) for m in corpus.manifests)
    courses = len(corpus.manifests)
    lecturers = {x.id for m in corpus.manifests for x in m.lecturers}
    materials = {m.id for m in corpus.materials()}
    return len(topics) + lectures + courses + len(lecturers) + len(materials)


def test_empty_store():
    assert export_dot(TripleStore()) == "digraph teachkg {}\n"


def test_node_count_on_sample(sample_corpus):
    # 8 topics, 16 lectures, 3 courses, 4 lecturers, 25 materials
    store = materialize(sample_corpus)
    dot = export_dot(store)
    nodes = NODE.findall(dot)
    assert len(nodes) == len(set(nodes)) == _expected_nodes(sample_corpus) == 56
    assert dot_node_count(store) == 56
    # every edge joins two declared nodes
    for a, b in EDGE.findall(dot):
        assert a in nodes and b in nodes


def test_dot_is_deterministic(sample_corpus):
    a = export_dot(build_kg(sample_corpus).store)
    b = export_dot(build_kg(sample_corpus).store)
    assert a == b
    assert '"tkg:rdf" -> "tkg:sparql"' in a


def test_layers(sample_corpus):
    store = materialize(sample_corpus)
    only_topics = export_dot(store, ["topics"])
    assert len(NODE.findall(only_topics)) == len(sample_corpus.topic_table())
    with pytest.raises(ValueError):
        export_dot(store, ["planets"])


def test_turtle_fixed_point(sample_kg):
    text = export_turtle(sample_kg.store)
    assert export_turtle(sample_kg.store) == text
    again = export_turtle(TripleStore(parse_turtle_subset(text)))
    assert again == text


def test_json_export(sample_corpus):
    store = materialize(sample_corpus)
    doc = json.loads(export_json(store))
    assert len(doc["triples"]) == len(store)
    assert doc["prefixes"]["tkg"]
