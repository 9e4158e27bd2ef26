"""The seventeen competency questions and their evaluation."""

from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

from .errors import InvalidParams, UnsupportedBeforeInference
from .prereq import prerequisites_inferred
from .schema import require, topic_descendants
from .similarity import (material_similarity, similar_courses, similar_materials,
                         suggested_resources)
from .store import RDF, TKG, Literal, NodeId, Triple, TripleStore, term_str


@dataclass(frozen=True)
class CQSpec:
    name: str
    variant: str
    group: str
    params: Tuple[str, ...]
    wording: str

    @property
    def signature(self):
        return " ".join(self.params)


_TOPIC, _COURSE, _DATASET, _MATERIAL = "topic", "course", "dataset", "material"

CQS = (
    CQSpec("who-teaches", "WhoTeaches", _TOPIC, ("X",), "Who is teaching X?"),
    CQSpec("materials-for", "MaterialsFor", _TOPIC, ("X",), "Which are the materials for X?"),
    CQSpec("prerequisites-of", "PrerequisitesOf", _TOPIC, ("X",), "Which are the prerequisites of X?"),
    CQSpec("labs-for", "LabsFor", _TOPIC, ("X",), "Which are the labs for X?"),
    CQSpec("target-audience", "TargetAudience", _COURSE, ("Y",), "Who is the target audience for Y?"),
    CQSpec("educational-level", "EducationalLevel", _COURSE, ("Y",), "Which educational level does Y target?"),
    CQSpec("who-teaches-course", "WhoTeachesCourse", _COURSE, ("Y",), "Who is teaching Y?"),
    CQSpec("linked-slides", "LinkedSlides", _COURSE, ("Y",), "Which slides are linked to Y?"),
    CQSpec("labs-of", "LabsOf", _COURSE, ("Y",), "Which labs are part of Y?"),
    CQSpec("similar-courses", "SimilarCourses", _COURSE, ("Y", "k"), "Which courses are similar to Y?"),
    CQSpec("suggested-resources", "SuggestedResources", _COURSE, ("Y", "k"),
           "Which are suggested resources for Y?"),
    CQSpec("exercises-for", "ExercisesFor", _DATASET, ("D",), "Which exercises exist for D?"),
    CQSpec("courses-using", "CoursesUsing", _DATASET, ("D",), "Which courses use D?"),
    CQSpec("courses-using-similar", "CoursesUsingSimilar", _MATERIAL, ("M", "k"),
           "Which courses use a material similar to M?"),
    CQSpec("similarity-to", "SimilarityTo", _MATERIAL, ("M", "M2"),
           "How much similar is M to another material?"),
    CQSpec("topics-covered", "TopicsCovered", _MATERIAL, ("M",), "Which topics does M cover?"),
    CQSpec("is-open-access", "IsOpenAccess", _MATERIAL, ("M",), "Is M open access?"),
)

_BY_NAME = {c.name: c for c in CQS}
_BY_NAME.update({c.variant: c for c in CQS})

_CLASS = {_TOPIC: TKG.Topic, _COURSE: TKG.Course, _DATASET: TKG.Dataset, _MATERIAL: TKG.Material}


def list_cqs():
    """(variant name, parameter signature, wording) in question-table order."""
    return [(c.name, c.signature, c.wording) for c in CQS]


def cq_spec(name):
    try:
        return _BY_NAME[name]
    except KeyError:
        raise InvalidParams(f"unknown competency question {name!r}") from None


@dataclass(frozen=True)
class CompetencyQuestion:
    variant: str
    target: NodeId
    k: Optional[int] = None
    other: Optional[NodeId] = None
    transitive: bool = False

    def __post_init__(self):
        spec = cq_spec(self.variant)
        object.__setattr__(self, "variant", spec.name)
        if "k" in spec.params:
            if not isinstance(self.k, int) or isinstance(self.k, bool) or self.k < 1:
                raise InvalidParams(f"{spec.name} needs a positive integer k")
        elif self.k is not None:
            raise InvalidParams(f"{spec.name} takes no k")
        if "M2" in spec.params:
            if self.other is None:
                raise InvalidParams(f"{spec.name} needs a second material")
        elif self.other is not None:
            raise InvalidParams(f"{spec.name} takes a single entity")
        if self.transitive and spec.name != "prerequisites-of":
            raise InvalidParams("transitive only applies to prerequisites-of")

    @property
    def spec(self):
        return _BY_NAME[self.variant]

    def params_json(self):
        out = {self.spec.params[0]: str(self.target)}
        if self.k is not None:
            out["k"] = self.k
        if self.other is not None:
            out["M2"] = str(self.other)
        if self.transitive:
            out["transitive"] = True
        return out


@dataclass(frozen=True)
class AnswerRow:
    value: Union[NodeId, Literal]
    score: Optional[float] = None
    provenance: Tuple[Triple, ...] = ()
    components: Optional[dict] = None

    def to_json(self):
        if isinstance(self.value, Literal):
            out = {"value": self.value.value}
        else:
            out = {"id": str(self.value)}
        if self.score is not None:
            out["score"] = round(self.score, 4)
        if self.components is not None:
            out["components"] = {k: round(v, 4) for k, v in self.components.items()}
        out["provenance"] = [t.to_json() for t in self.provenance]
        return out


@dataclass
class AnswerSet:
    question: CompetencyQuestion
    rows: list = field(default_factory=list)

    def __len__(self):
        return len(self.rows)

    def values(self):
        return [r.value for r in self.rows]

    def to_json(self):
        return {"question": self.question.variant, "wording": self.question.spec.wording,
                "params": self.question.params_json(),
                "rows": [r.to_json() for r in self.rows]}


# evaluation -----------------------------------------------------------------

class _KGView:
    def __init__(self, store):
        self.store = store
        self.vectors = {}
        self.alpha = 0.5


def _rows(groups, scores=None):
    """groups: value -> set of triples; sorted by score desc then value."""
    scores = scores or {}
    rows = [AnswerRow(v, scores.get(v), tuple(sorted(ts, key=Triple.key)))
            for v, ts in groups.items()]
    rows.sort(key=lambda r: (-(r.score or 0.0), term_str(r.value)))
    return rows


def _lectures_covering(store, topic):
    out = {}
    for t in {topic} | topic_descendants(store, topic):
        for s in store.subjects(TKG.covers, t):
            if store.is_a(s, TKG.Lecture):
                out.setdefault(s, set()).add(Triple(s, TKG.covers, t))
    return out


def _course_materials(store, course):
    out = {}
    for lid in store.objects(course, TKG.hasLecture):
        for m in store.objects(lid, TKG.hasMaterial):
            out.setdefault(m, set()).update(
                {Triple(course, TKG.hasLecture, lid), Triple(lid, TKG.hasMaterial, m)})
    return out


def _has_kind(store, m, kind):
    return Literal(kind) in store.objects(m, TKG.kind)


def _kind_filter(store, groups, kind):
    return {m: ts | {Triple(m, TKG.kind, Literal(kind))}
            for m, ts in groups.items() if _has_kind(store, m, kind)}


def _materials_for(store, x):
    groups = {}
    for lid, cov in _lectures_covering(store, x).items():
        for m in store.objects(lid, TKG.hasMaterial):
            groups.setdefault(m, set()).update(cov | {Triple(lid, TKG.hasMaterial, m)})
    return groups


def _who_teaches(store, x):
    groups = {}
    for lid, cov in _lectures_covering(store, x).items():
        for c in store.objects(lid, TKG.partOfCourse):
            for lect in store.subjects(TKG.teaches, c):
                groups.setdefault(lect, set()).update(
                    cov | {Triple(lid, TKG.partOfCourse, c), Triple(lect, TKG.teaches, c)})
    return groups


def _prerequisites(store, x, transitive):
    if not prerequisites_inferred(store):
        raise UnsupportedBeforeInference()
    if not transitive:
        return {a: {Triple(a, TKG.prerequisiteOf, x)} for a in store.subjects(TKG.prerequisiteOf, x)}
    # breadth-first towards the sources; provenance is one shortest path
    nxt = {x: None}
    queue = deque([x])
    while queue:
        cur = queue.popleft()
        for a in sorted(store.subjects(TKG.prerequisiteOf, cur)):
            if a not in nxt:
                nxt[a] = cur
                queue.append(a)
    groups = {}
    for a in nxt:
        if a == x:
            continue
        path, cur = set(), a
        while cur != x:
            path.add(Triple(cur, TKG.prerequisiteOf, nxt[cur]))
            cur = nxt[cur]
        groups[a] = path
    return groups


def _literal_rows(store, y, pred):
    return {v: {Triple(y, pred, v)} for v in store.objects(y, pred)}


def _courses_of_material(store, m):
    out = {}
    for lid in store.subjects(TKG.hasMaterial, m):
        for c in store.objects(lid, TKG.partOfCourse):
            out.setdefault(c, set()).update(
                {Triple(lid, TKG.hasMaterial, m), Triple(lid, TKG.partOfCourse, c)})
    return out


def _topics_covered(store, m):
    groups = {}
    for lid in store.subjects(TKG.hasMaterial, m):
        for t in store.objects(lid, TKG.covers):
            groups.setdefault(t, set()).update(
                {Triple(lid, TKG.hasMaterial, m), Triple(lid, TKG.covers, t)})
    for t in store.objects(m, TKG.covers):
        groups.setdefault(t, set()).add(Triple(m, TKG.covers, t))
    return groups


def answer(kg, cq):
    """Evaluate ``cq`` against ``kg`` (a TeachingKG or a bare TripleStore)."""
    if isinstance(kg, TripleStore):
        kg = _KGView(kg)
    store = kg.store
    spec = cq.spec
    x = require(store, cq.target, _CLASS[spec.group], spec.group)
    name = spec.name
    scores = {}
    if name == "who-teaches":
        groups = _who_teaches(store, x)
    elif name == "materials-for":
        groups = _materials_for(store, x)
    elif name == "labs-for":
        groups = _kind_filter(store, _materials_for(store, x), "lab")
    elif name == "prerequisites-of":
        groups = _prerequisites(store, x, cq.transitive)
    elif name == "target-audience":
        groups = _literal_rows(store, x, TKG.hasAudience)
    elif name == "educational-level":
        groups = _literal_rows(store, x, TKG.hasLevel)
    elif name == "who-teaches-course":
        groups = {lect: {Triple(lect, TKG.teaches, x)} for lect in store.subjects(TKG.teaches, x)}
    elif name == "linked-slides":
        groups = _kind_filter(store, _course_materials(store, x), "slides")
    elif name == "labs-of":
        groups = _kind_filter(store, _course_materials(store, x), "lab")
    elif name == "similar-courses":
        groups = {}
        for c, s in similar_courses(kg, x, cq.k):
            groups[c] = {Triple(x, RDF.type, TKG.Course), Triple(c, RDF.type, TKG.Course)}
            scores[c] = s.value
    elif name == "suggested-resources":
        groups = {}
        course_topics = set()
        for lid in store.objects(x, TKG.hasLecture):
            course_topics |= store.objects(lid, TKG.covers)
        for m, s in suggested_resources(kg, x, cq.k):
            prov = set()
            for lid in store.subjects(TKG.hasMaterial, m):
                shared = store.objects(lid, TKG.covers) & course_topics
                if shared:
                    prov.add(Triple(lid, TKG.hasMaterial, m))
                    prov.update(Triple(lid, TKG.covers, t) for t in shared)
            groups[m] = prov
            scores[m] = s.value
    elif name == "exercises-for":
        groups = {m: {Triple(m, TKG.usesDataset, x)} for m in store.subjects(TKG.usesDataset, x)
                  if store.is_a(m, TKG.Material)}
        groups = _kind_filter(store, groups, "exercise")
    elif name == "courses-using":
        groups = {}
        for m in store.subjects(TKG.usesDataset, x):
            for c, ts in _courses_of_material(store, m).items():
                groups.setdefault(c, set()).update(ts | {Triple(m, TKG.usesDataset, x)})
    elif name == "courses-using-similar":
        groups = {}
        for m, s in similar_materials(kg, x, cq.k):
            for c, ts in _courses_of_material(store, m).items():
                groups.setdefault(c, set()).update(ts)
                scores[c] = max(scores.get(c, 0.0), s.value)
    elif name == "similarity-to":
        other = require(store, cq.other, TKG.Material, "material")
        s = material_similarity(kg, x, other)
        prov = (Triple(x, RDF.type, TKG.Material), Triple(other, RDF.type, TKG.Material))
        row = AnswerRow(other, s.value, tuple(sorted(set(prov), key=Triple.key)),
                        {"cosine": s.cosine, "topic_jaccard": s.topic_jaccard})
        return AnswerSet(cq, [row])
    elif name == "topics-covered":
        groups = _topics_covered(store, x)
    elif name == "is-open-access":
        groups = _literal_rows(store, x, TKG.openAccess)
        if not groups:
            groups = {Literal(False): set()}
    else:  # pragma: no cover - registry and dispatch are kept in step
        raise InvalidParams(name)
    return AnswerSet(cq, _rows(groups, scores))


def ask(kg, variant, target, k=None, other=None, transitive=False):
    """Shorthand: build the question and answer it."""
    return answer(kg, CompetencyQuestion(variant, target, k=k, other=other, transitive=transitive))
