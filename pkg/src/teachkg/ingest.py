"""Course manifest / topic declaration parsing and graph materialization.

Corpus directory layout::

    topics.json            [{id, label, aliases?, parent?, description?}]
    datasets.json          optional, [{id, label, url?}]
    courses/<name>.json    one course manifest each
    materials/<file>       UTF-8 plain text referenced by materials' "file"
"""

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .errors import (DuplicateLectureIndex, InvalidEntity, JsonSyntax, MissingFile,
                     SchemaViolation)
from .schema import (LEVELS, MATERIAL_KINDS, Course, DatasetRef, Lecture, Lecturer,
                     Material, Topic, assert_entity)
from .store import TKG, NodeId, TripleStore


@dataclass(frozen=True)
class CourseManifest:
    course: Course
    lecturers: Tuple[Lecturer, ...]
    materials: Tuple[Material, ...]
    source: Optional[str] = None

    @property
    def id(self):
        return self.course.id


@dataclass
class Corpus:
    manifests: List[CourseManifest] = field(default_factory=list)
    topics: List[Topic] = field(default_factory=list)
    datasets: List[DatasetRef] = field(default_factory=list)
    documents: Dict[NodeId, str] = field(default_factory=dict)
    root: Optional[Path] = None

    def materials(self):
        """All materials, first definition wins, in manifest order."""
        seen = {}
        for man in self.manifests:
            for m in man.materials:
                seen.setdefault(m.id, m)
        return list(seen.values())

    def topic_table(self):
        """Declared topics plus topics referenced only from manifests."""
        table = {t.id: t for t in self.topics}
        for man in self.manifests:
            for lec in man.course.lectures:
                for tid in lec.declared_topics:
                    if tid not in table:
                        table[tid] = Topic(id=tid, label=tid.local)
        return list(table.values())

    def dataset_table(self):
        table = {d.id: d for d in self.datasets}
        for m in self.materials():
            for did in sorted(m.datasets):
                if did not in table:
                    table[did] = DatasetRef(id=did, label=did.local)
        return list(table.values())


# JSON helpers ---------------------------------------------------------------

def _load_json(data, source=None):
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise JsonSyntax(1, exc.start + 1, "input is not valid UTF-8", source) from None
    try:
        return json.loads(data)
    except json.JSONDecodeError as exc:
        raise JsonSyntax(exc.lineno, exc.colno, exc.msg, source) from None


class _Checker:
    def __init__(self, source=None):
        self.source = source

    def fail(self, path, reason):
        raise SchemaViolation(path, reason, self.source)

    def obj(self, value, path, required, optional=()):
        if not isinstance(value, dict):
            self.fail(path or "$", "must be an object")
        for key in value:
            if key not in required and key not in optional:
                self.fail(_join(path, key), "unknown key")
        for key in required:
            if key not in value:
                self.fail(_join(path, key), "required key missing")
        return value

    def array(self, value, path, non_empty=False):
        if not isinstance(value, list):
            self.fail(path, "must be an array")
        if non_empty and not value:
            self.fail(path, "must be non-empty")
        return value

    def string(self, value, path, non_empty=True):
        if not isinstance(value, str):
            self.fail(path, "must be a string")
        if non_empty and not value.strip():
            self.fail(path, "must be non-empty")
        return value

    def boolean(self, value, path):
        if not isinstance(value, bool):
            self.fail(path, "must be a boolean")
        return value

    def node_id(self, value, path):
        self.string(value, path)
        if ":" not in value:
            value = "tkg:" + value
        try:
            nid = NodeId(value)
        except InvalidEntity:
            self.fail(path, f"malformed id {value!r}")
        if nid.prefix != "tkg":
            self.fail(path, "domain ids must use the tkg: prefix")
        return nid

    def choice(self, value, path, options):
        self.string(value, path)
        if value not in options:
            self.fail(path, f"must be one of {', '.join(options)}")
        return value


def _join(path, key):
    return f"{path}.{key}" if path else key


# manifests ------------------------------------------------------------------

_COURSE_KEYS = ("id", "title", "audience", "level", "lecturers", "lectures")
_LECTURER_KEYS = ("id", "name", "affiliation", "contact")
_LECTURE_KEYS = ("index", "title", "topics", "materials")
_MATERIAL_KEYS = ("id", "title", "kind", "open_access")
_MATERIAL_OPTIONAL = ("file", "license", "datasets", "author")


def parse_manifest(data, source=None):
    """Parse and validate one course manifest (bytes or str of JSON)."""
    ck = _Checker(source)
    doc = ck.obj(_load_json(data, source), "", _COURSE_KEYS)
    cid = ck.node_id(doc["id"], "id")
    title = ck.string(doc["title"], "title")
    audience = ck.string(doc["audience"], "audience")
    level = ck.choice(doc["level"], "level", LEVELS)

    lecturers = []
    for i, raw in enumerate(ck.array(doc["lecturers"], "lecturers", non_empty=True)):
        path = f"lecturers[{i}]"
        ck.obj(raw, path, _LECTURER_KEYS)
        lecturers.append(Lecturer(
            id=ck.node_id(raw["id"], path + ".id"),
            name=ck.string(raw["name"], path + ".name"),
            affiliation=ck.string(raw["affiliation"], path + ".affiliation", non_empty=False),
            contact=ck.string(raw["contact"], path + ".contact", non_empty=False),
        ))

    materials = {}
    lectures = []
    seen_index = {}
    for i, raw in enumerate(ck.array(doc["lectures"], "lectures")):
        path = f"lectures[{i}]"
        ck.obj(raw, path, _LECTURE_KEYS)
        index = raw["index"]
        if not isinstance(index, int) or isinstance(index, bool) or index < 1:
            ck.fail(path + ".index", "must be a positive integer")
        if index in seen_index:
            raise DuplicateLectureIndex(path + ".index", index, source)
        seen_index[index] = i
        topics = []
        for j, t in enumerate(ck.array(raw["topics"], path + ".topics")):
            tid = ck.node_id(t, f"{path}.topics[{j}]")
            if tid not in topics:
                topics.append(tid)
        mids = []
        for j, mraw in enumerate(ck.array(raw["materials"], path + ".materials", non_empty=True)):
            m = _parse_material(ck, mraw, f"{path}.materials[{j}]")
            prev = materials.get(m.id)
            if prev is not None and prev != m:
                ck.fail(f"{path}.materials[{j}].id", f"{m.id} redefined with different fields")
            materials[m.id] = m
            if m.id not in mids:
                mids.append(m.id)
        lectures.append(Lecture(index=index, title=ck.string(raw["title"], path + ".title"),
                                materials=tuple(mids), declared_topics=tuple(topics)))

    lectures.sort(key=lambda lec: lec.index)
    course = Course(id=cid, title=title, audience=audience, level=level,
                    lecturers=frozenset(x.id for x in lecturers), lectures=tuple(lectures))
    return CourseManifest(course=course, lecturers=tuple(lecturers),
                          materials=tuple(materials.values()), source=source)


def _parse_material(ck, raw, path):
    ck.obj(raw, path, _MATERIAL_KEYS, _MATERIAL_OPTIONAL)
    text_path = None
    if "file" in raw:
        name = ck.string(raw["file"], path + ".file")
        if name.startswith("/") or ".." in Path(name).parts:
            ck.fail(path + ".file", "must be a relative path inside materials/")
        text_path = "materials/" + name
    license_ = ck.string(raw["license"], path + ".license") if "license" in raw else None
    datasets = []
    for j, d in enumerate(ck.array(raw.get("datasets", []), path + ".datasets")):
        datasets.append(ck.node_id(d, f"{path}.datasets[{j}]"))
    author = ck.node_id(raw["author"], path + ".author") if "author" in raw else None
    return Material(
        id=ck.node_id(raw["id"], path + ".id"),
        title=ck.string(raw["title"], path + ".title"),
        kind=ck.choice(raw["kind"], path + ".kind", MATERIAL_KINDS),
        text_path=text_path,
        open_access=ck.boolean(raw["open_access"], path + ".open_access"),
        license=license_,
        datasets=frozenset(datasets),
        author=author,
    )


def parse_topics(data, source=None):
    ck = _Checker(source)
    out = []
    ids = set()
    for i, raw in enumerate(ck.array(_load_json(data, source), "topics")):
        path = f"topics[{i}]"
        ck.obj(raw, path, ("id", "label"), ("aliases", "parent", "description"))
        tid = ck.node_id(raw["id"], path + ".id")
        if tid in ids:
            ck.fail(path + ".id", f"duplicate topic id {tid}")
        ids.add(tid)
        aliases = [ck.string(a, f"{path}.aliases[{j}]")
                   for j, a in enumerate(ck.array(raw.get("aliases", []), path + ".aliases"))]
        parent = ck.node_id(raw["parent"], path + ".parent") if raw.get("parent") is not None else None
        desc = ck.string(raw["description"], path + ".description") if "description" in raw else None
        topic = Topic(id=tid, label=ck.string(raw["label"], path + ".label"),
                      aliases=frozenset(aliases), parent=parent, description=desc)
        folded = [topic.label.casefold()] + [a.casefold() for a in aliases]
        if len(set(folded)) != len(folded):
            ck.fail(path + ".aliases", "label and aliases must differ after case-folding")
        out.append(topic)
    for i, t in enumerate(out):
        if t.parent is not None and t.parent not in ids:
            ck.fail(f"topics[{i}].parent", f"unknown topic {t.parent}")
    return out


def parse_datasets(data, source=None):
    ck = _Checker(source)
    out = []
    for i, raw in enumerate(ck.array(_load_json(data, source), "datasets")):
        path = f"datasets[{i}]"
        ck.obj(raw, path, ("id", "label"), ("url",))
        url = ck.string(raw["url"], path + ".url") if raw.get("url") is not None else None
        out.append(DatasetRef(id=ck.node_id(raw["id"], path + ".id"),
                              label=ck.string(raw["label"], path + ".label"), url=url))
    return out


def sample_corpus_path():
    """Directory of the bundled three-course sample corpus."""
    return Path(str(resources.files("teachkg").joinpath("data/sample")))


def load_corpus(root):
    """Load a corpus directory; see the module docstring for the layout."""
    root = Path(root)
    topics_path = root / "topics.json"
    if not topics_path.is_file():
        raise MissingFile(topics_path)
    topics = parse_topics(topics_path.read_bytes(), str(topics_path))
    datasets = []
    ds_path = root / "datasets.json"
    if ds_path.is_file():
        datasets = parse_datasets(ds_path.read_bytes(), str(ds_path))
    manifests = []
    course_dir = root / "courses"
    if course_dir.is_dir():
        for path in sorted(course_dir.glob("*.json")):
            manifests.append(parse_manifest(path.read_bytes(), str(path)))
    corpus = Corpus(manifests=manifests, topics=topics, datasets=datasets, root=root)
    for m in corpus.materials():
        if m.text_path is None:
            continue
        path = root / m.text_path
        if not path.is_file():
            raise MissingFile(path)
        corpus.documents[m.id] = path.read_text(encoding="utf-8")
    return corpus


def materialize(corpus):
    """Assert every entity and relation of ``corpus`` into a fresh store."""
    store = TripleStore()
    for t in corpus.topic_table():
        assert_entity(store, t)
    for d in corpus.dataset_table():
        assert_entity(store, d)
    for man in corpus.manifests:
        for x in man.lecturers:
            assert_entity(store, x)
        for m in man.materials:
            assert_entity(store, m)
        assert_entity(store, man.course)
    for m in corpus.materials():
        if m.author is not None and not store.is_a(m.author, TKG.Lecturer):
            raise InvalidEntity(f"{m.id}: author {m.author} is not a lecturer of any course")
    return store


# writing --------------------------------------------------------------------

def manifest_to_json(man):
    """Inverse of parse_manifest, used to emit corpora to disk."""
    mats = {m.id: m for m in man.materials}
    lectures = []
    for lec in man.course.lectures:
        items = []
        for mid in lec.materials:
            m = mats[mid]
            d = {"id": str(m.id), "title": m.title, "kind": m.kind}
            if m.text_path:
                d["file"] = m.text_path[len("materials/"):]
            d["open_access"] = m.open_access
            if m.license:
                d["license"] = m.license
            if m.datasets:
                d["datasets"] = sorted(str(x) for x in m.datasets)
            if m.author:
                d["author"] = str(m.author)
            items.append(d)
        lectures.append({"index": lec.index, "title": lec.title,
                         "topics": [str(t) for t in lec.declared_topics], "materials": items})
    c = man.course
    lecturers = sorted(man.lecturers, key=lambda x: x.id)
    return {
        "id": str(c.id), "title": c.title, "audience": c.audience, "level": c.level,
        "lecturers": [{"id": str(x.id), "name": x.name, "affiliation": x.affiliation,
                       "contact": x.contact} for x in lecturers],
        "lectures": lectures,
    }


def _dump(obj):
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def write_corpus(corpus, root):
    """Write ``corpus`` in the directory layout load_corpus reads."""
    root = Path(root)
    (root / "courses").mkdir(parents=True, exist_ok=True)
    (root / "materials").mkdir(exist_ok=True)
    topics = []
    for t in corpus.topics:
        d = {"id": str(t.id), "label": t.label}
        if t.aliases:
            d["aliases"] = sorted(t.aliases)
        if t.parent:
            d["parent"] = str(t.parent)
        if t.description:
            d["description"] = t.description
        topics.append(d)
    (root / "topics.json").write_text(_dump(topics), encoding="utf-8")
    datasets = [{"id": str(d.id), "label": d.label, **({"url": d.url} if d.url else {})}
                for d in corpus.datasets]
    (root / "datasets.json").write_text(_dump(datasets), encoding="utf-8")
    for man in corpus.manifests:
        name = man.course.id.local + ".json"
        (root / "courses" / name).write_text(_dump(manifest_to_json(man)), encoding="utf-8")
    for m in corpus.materials():
        if m.text_path:
            (root / m.text_path).write_text(corpus.documents.get(m.id, ""), encoding="utf-8")
    return root
