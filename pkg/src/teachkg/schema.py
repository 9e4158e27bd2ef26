"""Typed domain model (topics, courses, lectures, materials, ...) and its
encoding into triples."""

from dataclasses import dataclass, field
from typing import FrozenSet, Optional, Tuple

from .errors import CycleDetected, DuplicateIdConflict, InvalidEntity, UnknownEntity
from .store import RDF, RDFS, TKG, Literal, NodeId, Triple, term_str

MATERIAL_KINDS = ("slides", "lab", "exercise", "notes", "reading")
LEVELS = ("bachelor", "master", "phd", "professional")
SOURCES = ("declared", "extracted")

UNCATEGORIZED = NodeId("tkg:uncategorized")


@dataclass(frozen=True)
class Topic:
    id: NodeId
    label: str
    aliases: FrozenSet[str] = frozenset()
    parent: Optional[NodeId] = None
    description: Optional[str] = None
    source: str = "declared"


@dataclass(frozen=True)
class Lecturer:
    id: NodeId
    name: str
    affiliation: str = ""
    contact: str = ""


@dataclass(frozen=True)
class Material:
    id: NodeId
    title: str
    kind: str
    text_path: Optional[str] = None
    open_access: bool = True
    license: Optional[str] = None
    datasets: FrozenSet[NodeId] = frozenset()
    author: Optional[NodeId] = None


@dataclass(frozen=True)
class Lecture:
    index: int
    title: str
    materials: Tuple[NodeId, ...]
    # manifest order is kept: the first entry anchors extracted subtopics
    declared_topics: Tuple[NodeId, ...] = ()


@dataclass(frozen=True)
class Course:
    id: NodeId
    title: str
    audience: str
    level: str
    lecturers: FrozenSet[NodeId]
    lectures: Tuple[Lecture, ...] = field(default=())


@dataclass(frozen=True)
class DatasetRef:
    id: NodeId
    label: str
    url: Optional[str] = None


def lecture_id(course_id, index):
    return NodeId(f"tkg:{NodeId(course_id).local}-lecture-{index}")


# validation -----------------------------------------------------------------

def _check_id(value, what):
    try:
        return NodeId(value)
    except InvalidEntity:
        raise InvalidEntity(f"{what}: malformed id {value!r}") from None


def validate(entity):
    """Raise InvalidEntity if ``entity`` breaks its own invariants."""
    _check_id(entity.id, type(entity).__name__)
    if isinstance(entity, Topic):
        if not entity.label:
            raise InvalidEntity(f"{entity.id}: empty label")
        folded = [entity.label.casefold()] + [a.casefold() for a in entity.aliases]
        if len(set(folded)) != len(folded):
            raise InvalidEntity(f"{entity.id}: label and aliases must differ after case-folding")
        if entity.parent is not None:
            _check_id(entity.parent, "parent")
            if entity.parent == entity.id:
                raise InvalidEntity(f"{entity.id}: topic cannot be its own parent")
        if entity.source not in SOURCES:
            raise InvalidEntity(f"{entity.id}: bad source {entity.source!r}")
    elif isinstance(entity, Lecturer):
        if not entity.name:
            raise InvalidEntity(f"{entity.id}: lecturer name must be non-empty")
    elif isinstance(entity, Material):
        if entity.kind not in MATERIAL_KINDS:
            raise InvalidEntity(f"{entity.id}: kind must be one of {', '.join(MATERIAL_KINDS)}")
        if not isinstance(entity.open_access, bool):
            raise InvalidEntity(f"{entity.id}: open_access must be boolean")
        for d in entity.datasets:
            _check_id(d, "dataset")
        if entity.author is not None:
            _check_id(entity.author, "author")
    elif isinstance(entity, DatasetRef):
        if not entity.label:
            raise InvalidEntity(f"{entity.id}: dataset label must be non-empty")
    elif isinstance(entity, Course):
        if entity.level not in LEVELS:
            raise InvalidEntity(f"{entity.id}: level must be one of {', '.join(LEVELS)}")
        if not entity.lecturers:
            raise InvalidEntity(f"{entity.id}: a course needs at least one lecturer")
        seen = set()
        for lec in entity.lectures:
            if not isinstance(lec.index, int) or isinstance(lec.index, bool) or lec.index < 1:
                raise InvalidEntity(f"{entity.id}: lecture index must be a positive integer")
            if lec.index in seen:
                raise InvalidEntity(f"{entity.id}: duplicate lecture index {lec.index}")
            seen.add(lec.index)
            if not lec.materials:
                raise InvalidEntity(f"{entity.id}: lecture {lec.index} has no materials")
    else:
        raise InvalidEntity(f"cannot assert {type(entity).__name__}")


# encoding -------------------------------------------------------------------

def _lit(v):
    return Literal(v)


def _slots(entity):
    """Return {(subject, predicate, direction): set(values)} for the entity.

    direction ``"out"`` means values are objects of (subject, predicate);
    ``"in"`` means values are subjects of (?, predicate, subject).
    """
    i = entity.id
    out = {}

    def put(s, p, values, direction="out"):
        out[(s, p, direction)] = set(values)

    if isinstance(entity, Topic):
        put(i, RDF.type, [TKG.Topic])
        put(i, TKG.label, [_lit(entity.label)])
        put(i, TKG.alias, [_lit(a) for a in entity.aliases])
        put(i, RDFS.comment, [_lit(entity.description)] if entity.description else [])
        put(i, TKG.source, [_lit(entity.source)])
        put(i, TKG.hasSubtopic, [NodeId(entity.parent)] if entity.parent else [], "in")
    elif isinstance(entity, Lecturer):
        put(i, RDF.type, [TKG.Lecturer])
        put(i, TKG.label, [_lit(entity.name)])
        put(i, TKG.affiliation, [_lit(entity.affiliation)] if entity.affiliation else [])
        put(i, TKG.contact, [_lit(entity.contact)] if entity.contact else [])
    elif isinstance(entity, Material):
        put(i, RDF.type, [TKG.Material])
        put(i, TKG.label, [_lit(entity.title)])
        put(i, TKG.kind, [_lit(entity.kind)])
        put(i, TKG.openAccess, [_lit(entity.open_access)])
        put(i, TKG.textPath, [_lit(entity.text_path)] if entity.text_path else [])
        put(i, TKG.license, [_lit(entity.license)] if entity.license else [])
        put(i, TKG.usesDataset, [NodeId(d) for d in entity.datasets])
        put(i, TKG.author, [NodeId(entity.author)] if entity.author else [])
    elif isinstance(entity, DatasetRef):
        put(i, RDF.type, [TKG.Dataset])
        put(i, TKG.label, [_lit(entity.label)])
        put(i, TKG.url, [_lit(entity.url)] if entity.url else [])
    elif isinstance(entity, Course):
        put(i, RDF.type, [TKG.Course])
        put(i, TKG.label, [_lit(entity.title)])
        put(i, TKG.hasAudience, [_lit(entity.audience)])
        put(i, TKG.hasLevel, [_lit(entity.level)])
        put(i, TKG.teaches, [NodeId(x) for x in entity.lecturers], "in")
        put(i, TKG.hasLecture, [lecture_id(i, lec.index) for lec in entity.lectures])
        for lec in entity.lectures:
            lid = lecture_id(i, lec.index)
            put(lid, RDF.type, [TKG.Lecture])
            put(lid, TKG.label, [_lit(lec.title)])
            put(lid, TKG.index, [_lit(lec.index)])
            put(lid, TKG.partOfCourse, [i])
            put(lid, TKG.hasMaterial, [NodeId(m) for m in lec.materials])
    return out


# lecture covers edges are shared with extraction, so they are checked as a
# subset rather than as an owned slot
def _declared_covers(entity):
    if not isinstance(entity, Course):
        return []
    return [Triple(lecture_id(entity.id, lec.index), TKG.covers, NodeId(t))
            for lec in entity.lectures for t in lec.declared_topics]


_CLASS = {Topic: TKG.Topic, Lecturer: TKG.Lecturer, Material: TKG.Material,
          DatasetRef: TKG.Dataset, Course: TKG.Course}


def _slot_triples(key, values):
    s, p, direction = key
    if direction == "out":
        return [Triple(s, p, v) for v in values]
    return [Triple(v, p, s) for v in values]


def _existing(store, key):
    s, p, direction = key
    if direction == "out":
        return set(store.objects(s, p))
    return set(store.subjects(p, s))


def assert_entity(store, entity):
    """Encode ``entity`` into ``store`` and return its id.

    Re-asserting an identical entity is a no-op; a differing one raises
    DuplicateIdConflict.
    """
    validate(entity)
    eid = NodeId(entity.id)
    cls = _CLASS[type(entity)]
    slots = _slots(entity)
    types = store.objects(eid, RDF.type)
    if types:
        if cls not in types:
            raise DuplicateIdConflict(eid, "already used by a different kind of entity")
        for key, values in slots.items():
            if _existing(store, key) != values:
                raise DuplicateIdConflict(eid, f"{key[1]} differs")
        for t in _declared_covers(entity):
            if t not in store:
                raise DuplicateIdConflict(eid, f"{t.s} covers differs")
        return eid
    if isinstance(entity, Topic) and entity.parent is not None:
        chain = _ancestor_chain(store, NodeId(entity.parent))
        if eid in chain:
            raise InvalidEntity(f"{eid}: parent chain would form a cycle")
    if isinstance(entity, Course):
        for lec in entity.lectures:
            lid = lecture_id(eid, lec.index)
            if store.objects(lid, RDF.type):
                raise DuplicateIdConflict(lid, "lecture id already in use")
    with store.lock:
        for key, values in slots.items():
            for t in _slot_triples(key, values):
                store.insert(t)
        for t in _declared_covers(entity):
            store.insert(t)
    return eid


# hierarchy ------------------------------------------------------------------

def parent_of(store, topic):
    parents = store.subjects(TKG.hasSubtopic, topic)
    if not parents:
        return None
    return min(parents)


def _ancestor_chain(store, start):
    """``start`` followed by its ancestors; raises on a cycle."""
    chain = [start]
    seen = {start}
    cur = parent_of(store, start)
    while cur is not None:
        if cur in seen:
            raise CycleDetected(chain + [cur])
        chain.append(cur)
        seen.add(cur)
        cur = parent_of(store, cur)
    return chain


def topic_ancestors(store, t):
    """Ancestors of topic ``t``, nearest parent first, root last."""
    t = NodeId(t)
    if not store.is_a(t, TKG.Topic):
        raise UnknownEntity(t, "topic")
    return _ancestor_chain(store, t)[1:]


def topic_descendants(store, t):
    """All topics below ``t`` in the hierarchy (not including ``t``)."""
    out = set()
    stack = [NodeId(t)]
    while stack:
        for child in store.objects(stack.pop(), TKG.hasSubtopic):
            if child not in out and child != t:
                out.add(child)
                stack.append(child)
    return out


# readers --------------------------------------------------------------------

def _str_value(store, s, p, default=None):
    v = store.value(s, p)
    return v.value if isinstance(v, Literal) else default


def require(store, node, cls, kind):
    """Return ``node`` as a NodeId, or raise UnknownEntity unless it is a ``cls``."""
    try:
        node = NodeId(node)
    except InvalidEntity:
        raise UnknownEntity(node, kind) from None
    if not store.is_a(node, cls):
        raise UnknownEntity(node, kind)
    return node


def _safe_id(value):
    try:
        return NodeId(value)
    except InvalidEntity:
        raise UnknownEntity(value) from None


def read_topic(store, t):
    t = require(store, _safe_id(t), TKG.Topic, "topic")
    return Topic(
        id=t,
        label=_str_value(store, t, TKG.label, t.local),
        aliases=frozenset(a.value for a in store.objects(t, TKG.alias)),
        parent=parent_of(store, t),
        description=_str_value(store, t, RDFS.comment),
        source=_str_value(store, t, TKG.source, "declared"),
    )


def read_lecturer(store, x):
    x = require(store, _safe_id(x), TKG.Lecturer, "lecturer")
    return Lecturer(
        id=x,
        name=_str_value(store, x, TKG.label, ""),
        affiliation=_str_value(store, x, TKG.affiliation, ""),
        contact=_str_value(store, x, TKG.contact, ""),
    )


def read_material(store, m):
    m = require(store, _safe_id(m), TKG.Material, "material")
    return Material(
        id=m,
        title=_str_value(store, m, TKG.label, ""),
        kind=_str_value(store, m, TKG.kind, "notes"),
        text_path=_str_value(store, m, TKG.textPath),
        open_access=bool(_str_value(store, m, TKG.openAccess, False)),
        license=_str_value(store, m, TKG.license),
        datasets=frozenset(store.objects(m, TKG.usesDataset)),
        author=store.value(m, TKG.author),
    )


def course_lectures(store, c):
    """Lecture nodes of course ``c`` as (index, lecture id), ordered by index."""
    out = []
    for lid in store.objects(c, TKG.hasLecture):
        idx = store.value(lid, TKG.index)
        out.append((idx.value if isinstance(idx, Literal) else 0, lid))
    out.sort()
    return out


def read_course(store, c):
    c = require(store, _safe_id(c), TKG.Course, "course")
    lectures = []
    for idx, lid in course_lectures(store, c):
        lectures.append(Lecture(
            index=idx,
            title=_str_value(store, lid, TKG.label, ""),
            materials=tuple(sorted(store.objects(lid, TKG.hasMaterial))),
            declared_topics=tuple(sorted(store.objects(lid, TKG.covers))),
        ))
    return Course(
        id=c,
        title=_str_value(store, c, TKG.label, ""),
        audience=_str_value(store, c, TKG.hasAudience, ""),
        level=_str_value(store, c, TKG.hasLevel, ""),
        lecturers=frozenset(store.subjects(TKG.teaches, c)),
        lectures=tuple(lectures),
    )


def read_dataset(store, d):
    d = require(store, _safe_id(d), TKG.Dataset, "dataset")
    return DatasetRef(id=d, label=_str_value(store, d, TKG.label, ""),
                      url=_str_value(store, d, TKG.url))


def sorted_terms(values):
    return sorted(values, key=term_str)
