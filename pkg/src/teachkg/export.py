"""Canonical exports: Turtle (re-exported), GraphViz DOT and JSON."""

import json

from .schema import course_lectures
from .store import PREFIXES, TKG, Literal
from .turtle import export_turtle  # noqa: F401  (public re-export)

PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")

LAYERS = ("topics", "courses", "lecturers", "materials")

_SHAPES = {
    TKG.Topic: "box",
    TKG.Course: "ellipse",
    TKG.Lecture: "ellipse",
    TKG.Lecturer: "diamond",
    TKG.Material: "note",
}

_LAYER_OF = {
    TKG.Topic: "topics",
    TKG.Course: "courses",
    TKG.Lecture: "courses",
    TKG.Lecturer: "lecturers",
    TKG.Material: "materials",
}

_EDGES = (TKG.hasSubtopic, TKG.prerequisiteOf, TKG.hasLecture, TKG.hasMaterial,
          TKG.covers, TKG.teaches)


def _quote(s):
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _label(store, node):
    v = store.value(node, TKG.label)
    return v.value if isinstance(v, Literal) else node.local


def export_dot(store, layers=None):
    """GraphViz digraph of topics, courses, lectures, lecturers and materials.

    ``layers`` restricts output to a subset of LAYERS; edges are kept only
    when both endpoints are shown.
    """
    layers = set(LAYERS if layers is None else layers)
    unknown = layers - set(LAYERS)
    if unknown:
        raise ValueError(f"unknown layer(s): {', '.join(sorted(unknown))}")
    colors = {}
    for i, c in enumerate(sorted(store.instances(TKG.Course))):
        color = PALETTE[i % len(PALETTE)]
        colors[c] = color
        for _, lid in course_lectures(store, c):
            colors.setdefault(lid, color)

    nodes = {}
    for cls, shape in _SHAPES.items():
        if _LAYER_OF[cls] not in layers:
            continue
        for n in store.instances(cls):
            nodes[n] = shape
    if not nodes:
        return "digraph teachkg {}\n"

    lines = ["digraph teachkg {", "  rankdir=LR;"]
    for n in sorted(nodes):
        attrs = [f"label={_quote(_label(store, n))}", f"shape={nodes[n]}"]
        if n in colors:
            attrs.append(f"color={_quote(colors[n])}")
        lines.append(f"  {_quote(n)} [{', '.join(attrs)}];")
    edges = []
    for p in _EDGES:
        for t in store.iter_match(p=p):
            if t.s in nodes and t.o in nodes:
                edges.append((t.s, t.o, p))
    for s, o, p in sorted(edges):
        attrs = [f"label={_quote(p.local)}"]
        if p == TKG.prerequisiteOf:
            attrs.append("style=dashed")
        lines.append(f"  {_quote(s)} -> {_quote(o)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_json(store):
    """{prefixes, triples} with triples in canonical order."""
    triples = sorted(store, key=lambda t: t.key())
    doc = {"prefixes": dict(PREFIXES), "triples": [t.to_json() for t in triples]}
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def dot_node_count(store):
    return sum(len(store.instances(cls)) for cls in _SHAPES)


__all__ = ["export_turtle", "export_dot", "export_json", "PALETTE", "LAYERS"]
