"""Per-lecturer Personal Knowledge Graphs and access resolution.

A PKG holds the lecturer's identity, what they own (courses and materials)
and a flat list of access grants ``(requester, material)``.  Its triples
live in the ``pkg:`` namespace, so merging one into the domain graph never
alters the domain triples.
"""

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import FrozenSet, Optional, Set, Tuple

from .errors import NamespaceViolation, SchemaViolation, UnknownEntity
from .ingest import _load_json
from .schema import Lecturer, read_lecturer, require
from .store import RDF, TKG, Literal, NodeId, Triple, TripleStore
from .turtle import export_turtle, parse_turtle_document

PKG_CLASS = NodeId("pkg:PersonalKG")
P_OWNER = NodeId("pkg:owner")
P_NAME = NodeId("pkg:name")
P_AFFILIATION = NodeId("pkg:affiliation")
P_CONTACT = NodeId("pkg:contact")
P_OWNS_COURSE = NodeId("pkg:ownsCourse")
P_OWNS_MATERIAL = NodeId("pkg:ownsMaterial")


class AccessOutcome(Enum):
    OPEN = "open"
    GRANTED = "granted"
    CONTACT_INSTRUCTOR = "contact-instructor"
    DENIED = "denied"


@dataclass(frozen=True)
class AccessResolution:
    outcome: AccessOutcome
    location: Optional[str] = None
    contact: Optional[str] = None
    owner: Optional[NodeId] = None

    def to_json(self):
        out = {"outcome": self.outcome.value}
        for key in ("location", "contact", "owner"):
            value = getattr(self, key)
            if value is not None:
                out[key] = str(value)
        return out


@dataclass
class PersonalKG:
    owner: Lecturer
    graph: TripleStore
    owned_courses: FrozenSet[NodeId] = frozenset()
    owned_materials: FrozenSet[NodeId] = frozenset()
    grants: Set[Tuple[str, NodeId]] = field(default_factory=set)

    @property
    def node(self):
        return pkg_node(self.owner.id)

    def grant(self, requester, material):
        material = NodeId(material)
        if material not in self.owned_materials:
            raise NamespaceViolation(f"{self.owner.id} does not own {material}")
        self.grants.add((str(requester), material))


def pkg_node(lecturer_id):
    return NodeId("pkg:" + NodeId(lecturer_id).local)


def build_pkg(store, lecturer):
    """Identity plus ownership of every course the lecturer teaches and the
    materials in them (and any material they authored)."""
    owner = read_lecturer(store, lecturer)
    courses = frozenset(c for c in store.objects(owner.id, TKG.teaches)
                        if store.is_a(c, TKG.Course))
    materials = set()
    for c in courses:
        for lid in store.objects(c, TKG.hasLecture):
            materials |= store.objects(lid, TKG.hasMaterial)
    materials |= {m for m in store.subjects(TKG.author, owner.id) if store.is_a(m, TKG.Material)}
    node = pkg_node(owner.id)
    graph = TripleStore()
    graph.insert(Triple(node, RDF.type, PKG_CLASS))
    graph.insert(Triple(node, P_OWNER, owner.id))
    graph.insert(Triple(node, P_NAME, Literal(owner.name)))
    if owner.affiliation:
        graph.insert(Triple(node, P_AFFILIATION, Literal(owner.affiliation)))
    if owner.contact:
        graph.insert(Triple(node, P_CONTACT, Literal(owner.contact)))
    for c in courses:
        graph.insert(Triple(node, P_OWNS_COURSE, c))
    for m in materials:
        graph.insert(Triple(node, P_OWNS_MATERIAL, m))
    return PersonalKG(owner=owner, graph=graph, owned_courses=courses,
                      owned_materials=frozenset(materials))


def check_namespace(p):
    """Raise NamespaceViolation if any PKG triple could touch domain data."""
    owned = p.owned_courses | p.owned_materials | {p.owner.id}
    for t in p.graph.match():
        if t.s.prefix != "pkg" and t.s not in owned:
            raise NamespaceViolation(f"PKG of {p.owner.id} asserts about non-owned {t.s}")
        if t.p == RDF.type:
            if not (isinstance(t.o, NodeId) and t.o.prefix == "pkg"):
                raise NamespaceViolation(f"PKG types must be pkg: classes: {t.o}")
        elif t.p.prefix != "pkg":
            raise NamespaceViolation(f"PKG predicates must be in pkg: namespace: {t.p}")


def merge_pkg(store, p):
    """Insert the PKG's triples into ``store`` (in place) and return it."""
    check_namespace(p)
    with store.lock:
        for t in p.graph:
            store.insert(t)
    return store


def _owners(store, pkgs, m):
    owners = [p for p in pkgs if m in p.owned_materials]
    author = store.value(m, TKG.author)
    owners.sort(key=lambda p: (p.owner.id != author, p.owner.id))
    return owners


def resolve_material(store, pkgs, m, requester):
    """How ``requester`` can get hold of material ``m``."""
    m = require(store, m, TKG.Material, "material")
    path = store.value(m, TKG.textPath)
    location = path.value if isinstance(path, Literal) else str(m)
    if Literal(True) in store.objects(m, TKG.openAccess):
        return AccessResolution(AccessOutcome.OPEN, location=location)
    owners = _owners(store, pkgs, m)
    if not owners:
        return AccessResolution(AccessOutcome.DENIED)
    for p in owners:
        if (str(requester), m) in p.grants:
            return AccessResolution(AccessOutcome.GRANTED, location=location, owner=p.owner.id)
    first = owners[0]
    return AccessResolution(AccessOutcome.CONTACT_INSTRUCTOR, contact=first.owner.contact,
                            owner=first.owner.id)


def build_all_pkgs(store):
    return [build_pkg(store, x) for x in sorted(store.instances(TKG.Lecturer))]


# files ------------------------------------------------------------------------

def parse_grants(data, source=None):
    doc = _load_json(data, source)
    if not isinstance(doc, list):
        raise SchemaViolation("$", "grants must be an array", source)
    out = set()
    for i, row in enumerate(doc):
        if not isinstance(row, dict) or set(row) != {"requester", "material"}:
            raise SchemaViolation(f"[{i}]", "expected {requester, material}", source)
        if not isinstance(row["requester"], str) or not row["requester"]:
            raise SchemaViolation(f"[{i}].requester", "must be a non-empty string", source)
        try:
            out.add((row["requester"], NodeId(row["material"])))
        except Exception:
            raise SchemaViolation(f"[{i}].material", "malformed material id", source) from None
    return out


def dump_grants(grants):
    rows = [{"requester": r, "material": str(m)} for r, m in sorted(grants)]
    return json.dumps(rows, indent=2) + "\n"


def write_pkg(p, directory):
    """Write ``<lecturer>.ttl`` and ``<lecturer>.grants.json`` into ``directory``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    stem = p.owner.id.local
    ttl = directory / f"{stem}.ttl"
    ttl.write_text(export_turtle(p.graph), encoding="utf-8")
    (directory / f"{stem}.grants.json").write_text(dump_grants(p.grants), encoding="utf-8")
    return ttl


def read_pkg(store, ttl_path, grants_path=None):
    """Load a PKG file (plus optional grants sidecar) against ``store``."""
    ttl_path = Path(ttl_path)
    prefixes, triples = parse_turtle_document(ttl_path.read_text(encoding="utf-8"))
    if "pkg" not in prefixes:
        raise NamespaceViolation(f"{ttl_path}: PKG files must declare the pkg: prefix")
    graph = TripleStore(triples)
    nodes = sorted(graph.subjects(RDF.type, PKG_CLASS))
    if len(nodes) != 1:
        raise NamespaceViolation(f"{ttl_path}: expected exactly one pkg:PersonalKG node")
    owner_id = graph.value(nodes[0], P_OWNER)
    if owner_id is None:
        raise NamespaceViolation(f"{ttl_path}: PKG has no pkg:owner")
    try:
        owner = read_lecturer(store, owner_id)
    except UnknownEntity:
        raise
    p = PersonalKG(owner=owner, graph=graph,
                   owned_courses=frozenset(graph.objects(nodes[0], P_OWNS_COURSE)),
                   owned_materials=frozenset(graph.objects(nodes[0], P_OWNS_MATERIAL)))
    if grants_path is None:
        candidate = ttl_path.with_name(ttl_path.stem + ".grants.json")
        grants_path = candidate if candidate.is_file() else None
    if grants_path is not None:
        grants_path = Path(grants_path)
        p.grants = parse_grants(grants_path.read_bytes(), str(grants_path))
    return p
