"""In-memory triple store with SPO / POS / OSP indexes."""

import math
import re
import threading
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional, Union

from .errors import InvalidEntity, MalformedTriple, ReadOnlyStore

PREFIXES = {
    "tkg": "https://w3id.org/teachkg/ns#",
    "pkg": "https://w3id.org/teachkg/pkg#",
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "rdfs": "http://www.w3.org/2000/01/rdf-schema#",
    "xsd": "http://www.w3.org/2001/XMLSchema#",
}

_LOCAL_RE = re.compile(r"[A-Za-z0-9_\-]+\Z")


class NodeId(str):
    """A ``prefix:localname`` identifier; behaves like the plain string."""

    __slots__ = ()

    def __new__(cls, value):
        if isinstance(value, NodeId):
            return value
        if not isinstance(value, str):
            raise InvalidEntity(f"node id must be a string, got {value!r}")
        prefix, sep, local = value.partition(":")
        if not sep or prefix not in PREFIXES or not _LOCAL_RE.match(local):
            raise InvalidEntity(f"malformed node id {value!r}")
        return super().__new__(cls, value)

    @property
    def prefix(self):
        return self.partition(":")[0]

    @property
    def local(self):
        return self.partition(":")[2]

    def __repr__(self):
        return f"NodeId({str(self)!r})"


def is_node_id(value):
    if isinstance(value, NodeId):
        return True
    try:
        NodeId(value)
    except InvalidEntity:
        return False
    return True


def tkg(local):
    return NodeId("tkg:" + local)


_DATATYPES = {
    bool: "xsd:boolean",
    int: "xsd:integer",
    float: "xsd:decimal",
    str: "xsd:string",
}


@dataclass(frozen=True)
class Literal:
    """A typed literal; the datatype is inferred from the Python value."""

    value: Union[str, int, float, bool]
    datatype: Optional[str] = None

    def __post_init__(self):
        expected = _DATATYPES.get(type(self.value))
        if expected is None:
            raise InvalidEntity(f"unsupported literal value {self.value!r}")
        if isinstance(self.value, float) and not math.isfinite(self.value):
            raise InvalidEntity("float literals must be finite")
        if self.datatype is None:
            object.__setattr__(self, "datatype", expected)
        elif self.datatype != expected:
            raise InvalidEntity(f"datatype {self.datatype} does not match {self.value!r}")

    def turtle(self):
        return format_literal(self.value)


def _format_decimal(x):
    text = repr(x)
    if "e" in text or "E" in text:
        from decimal import Decimal
        text = format(Decimal(text), "f")
    if "." not in text:
        text += ".0"
    return text


_ESCAPES = {'"': '\\"', "\\": "\\\\", "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def _escape_string(s):
    out = []
    for ch in s:
        if ch in _ESCAPES:
            out.append(_ESCAPES[ch])
        elif ord(ch) < 0x20 or ord(ch) == 0x7F:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return '"' + "".join(out) + '"'


def format_literal(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return _format_decimal(value)
    return _escape_string(value)


Term = Union[NodeId, Literal]


def term_str(term):
    """Canonical string form used for ordering and serialization."""
    if isinstance(term, Literal):
        return term.turtle()
    return str(term)


class Triple(NamedTuple):
    s: NodeId
    p: NodeId
    o: Term

    def key(self):
        return (str(self.s), str(self.p), term_str(self.o))

    def to_json(self):
        return {"s": str(self.s), "p": str(self.p), "o": term_str(self.o)}


def make_triple(s, p, o):
    """Build a triple, coercing plain strings for s/p into NodeIds."""
    if isinstance(p, Literal):
        raise MalformedTriple("predicate must be a node id, not a literal")
    if isinstance(s, Literal):
        raise MalformedTriple("subject must be a node id, not a literal")
    try:
        s, p = NodeId(s), NodeId(p)
    except InvalidEntity as exc:
        raise MalformedTriple(str(exc)) from None
    if not isinstance(o, Literal):
        try:
            o = NodeId(o)
        except InvalidEntity as exc:
            raise MalformedTriple(str(exc)) from None
    return Triple(s, p, o)


class _Vocab:
    def __init__(self, prefix, names):
        for name in names:
            setattr(self, name, NodeId(f"{prefix}:{name}"))


TKG = _Vocab("tkg", [
    # relations
    "hasSubtopic", "prerequisiteOf", "teaches", "partOfCourse", "hasLecture",
    "hasMaterial", "covers", "usesDataset", "similarTo", "hasLevel",
    "hasAudience", "openAccess", "label", "alias", "kind", "contact",
    "affiliation", "extractedFrom",
    # attributes outside the core relation list
    "index", "source", "textPath", "license", "url", "author", "score",
    "prerequisitesInferred",
    # classes
    "Topic", "Lecturer", "Material", "Lecture", "Course", "Dataset",
])
RDF = _Vocab("rdf", ["type", "Statement", "subject", "predicate", "object"])
RDFS = _Vocab("rdfs", ["comment"])

PIPELINE = tkg("pipeline")


class TripleStore:
    """Set of triples kept in three nested-dict indexes.

    ``spo[s][p]`` holds objects, ``pos[p][o]`` subjects, ``osp[o][s]``
    predicates.  Writers take ``lock``; a frozen store rejects writes.
    """

    def __init__(self, triples=()):
        self.prefixes = dict(PREFIXES)
        self._spo = {}
        self._pos = {}
        self._osp = {}
        self._size = 0
        self.version = 0
        self.frozen = False
        self.lock = threading.RLock()
        for t in triples:
            self.insert(t)

    def __len__(self):
        return self._size

    def __iter__(self) -> Iterator[Triple]:
        for s, by_p in self._spo.items():
            for p, objs in by_p.items():
                for o in objs:
                    yield Triple(s, p, o)

    def __contains__(self, t):
        s, p, o = t
        return o in self._spo.get(s, {}).get(p, ())

    def __eq__(self, other):
        if not isinstance(other, TripleStore):
            return NotImplemented
        return self.triple_set() == other.triple_set()

    def triple_set(self):
        return set(self)

    def copy(self):
        new = TripleStore()
        for t in self:
            new._add(t)
        return new

    def freeze(self):
        self.frozen = True
        return self

    def _check_writable(self):
        if self.frozen:
            raise ReadOnlyStore("store snapshot is read-only")

    def insert(self, t):
        """Insert ``t``; return True iff it was not already present."""
        if not isinstance(t, Triple):
            if not isinstance(t, tuple) or len(t) != 3:
                raise MalformedTriple(f"not a triple: {t!r}")
            t = make_triple(*t)
        elif isinstance(t.p, Literal) or isinstance(t.s, Literal):
            raise MalformedTriple("subject and predicate must be node ids")
        self._check_writable()
        with self.lock:
            return self._add(t)

    def add(self, s, p, o):
        return self.insert(make_triple(s, p, o))

    def _add(self, t):
        s, p, o = t
        objs = self._spo.setdefault(s, {}).setdefault(p, set())
        if o in objs:
            return False
        objs.add(o)
        self._pos.setdefault(p, {}).setdefault(o, set()).add(s)
        self._osp.setdefault(o, {}).setdefault(s, set()).add(p)
        self._size += 1
        self.version += 1
        return True

    def remove(self, t):
        """Remove ``t``; return True iff it was present."""
        self._check_writable()
        s, p, o = t
        with self.lock:
            objs = self._spo.get(s, {}).get(p)
            if not objs or o not in objs:
                return False
            _discard(self._spo, s, p, o)
            _discard(self._pos, p, o, s)
            _discard(self._osp, o, s, p)
            self._size -= 1
            self.version += 1
            return True

    def iter_match(self, s=None, p=None, o=None):
        """Unordered matches; ``match`` is the sorted public variant."""
        if s is not None:
            by_p = self._spo.get(s)
            if not by_p:
                return
            if p is not None:
                objs = by_p.get(p, ())
                if o is not None:
                    if o in objs:
                        yield Triple(s, p, o)
                    return
                for obj in objs:
                    yield Triple(s, p, obj)
            elif o is not None:
                for pred in self._osp.get(o, {}).get(s, ()):
                    yield Triple(s, pred, o)
            else:
                for pred, objs in by_p.items():
                    for obj in objs:
                        yield Triple(s, pred, obj)
        elif p is not None:
            by_o = self._pos.get(p)
            if not by_o:
                return
            if o is not None:
                for subj in by_o.get(o, ()):
                    yield Triple(subj, p, o)
            else:
                for obj, subjs in by_o.items():
                    for subj in subjs:
                        yield Triple(subj, p, obj)
        elif o is not None:
            for subj, preds in self._osp.get(o, {}).items():
                for pred in preds:
                    yield Triple(subj, pred, o)
        else:
            yield from self

    def match(self, s=None, p=None, o=None):
        return sorted(self.iter_match(s, p, o), key=Triple.key)

    # convenience readers -------------------------------------------------

    def objects(self, s, p):
        return self._spo.get(s, {}).get(p, set())

    def subjects(self, p, o):
        return self._pos.get(p, {}).get(o, set())

    def value(self, s, p, default=None):
        """The single object of (s, p); smallest canonical one if several."""
        objs = self.objects(s, p)
        if not objs:
            return default
        if len(objs) == 1:
            return next(iter(objs))
        return min(objs, key=term_str)

    def has_subject(self, s):
        return s in self._spo

    def instances(self, cls):
        return self.subjects(RDF.type, cls)

    def is_a(self, node, cls):
        return cls in self.objects(node, RDF.type)


def match_pattern(store, s=None, p=None, o=None):
    return store.match(s, p, o)


def insert_triple(store, t):
    return store.insert(t)


def _discard(index, a, b, c):
    inner = index[a]
    leaf = inner[b]
    leaf.discard(c)
    if not leaf:
        del inner[b]
        if not inner:
            del index[a]
