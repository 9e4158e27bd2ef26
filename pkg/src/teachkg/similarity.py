"""Similarity between materials and courses.

A score mixes a lexical and a structural signal::

    value = alpha * cosine + (1 - alpha) * topic_jaccard

``cosine`` compares TF-IDF vectors, ``topic_jaccard`` the sets of topics
covered by the lectures a material (or course) belongs to.
"""

import math
from dataclasses import dataclass

from .errors import InvalidParams
from .schema import require
from .store import TKG


@dataclass(frozen=True)
class SimilarityScore:
    value: float
    cosine: float
    topic_jaccard: float
    alpha: float = 0.5

    def to_json(self):
        return {"value": round(self.value, 4), "cosine": round(self.cosine, 4),
                "topic_jaccard": round(self.topic_jaccard, 4), "alpha": self.alpha}


def _weights(v):
    if v is None:
        return {}
    return v.weights if hasattr(v, "weights") else v


def cosine(v1, v2):
    """Cosine of two term vectors (TermVector or plain dict); 0 if either is empty."""
    w1, w2 = _weights(v1), _weights(v2)
    return _cosine(w1, w2, _norm(w1), _norm(w2))


def _norm(w):
    return math.sqrt(math.fsum(x * x for x in w.values()))


def _cosine(w1, w2, n1, n2):
    if not w1 or not w2:
        return 0.0
    if w1 == w2:
        return 1.0
    if len(w2) < len(w1):
        w1, w2 = w2, w1
    dot = math.fsum(w * w2[t] for t, w in w1.items() if t in w2)
    if dot == 0.0:
        return 0.0
    return min(1.0, dot / (n1 * n2))


def jaccard(a, b):
    if not a and not b:
        return 0.0
    return len(a & b) / len(a | b)


def combine(cos, jac, alpha):
    # written around jac so that cos == jac gives exactly that value
    return min(1.0, max(0.0, jac + alpha * (cos - jac)))


def _check_alpha(alpha):
    if not 0.0 <= alpha <= 1.0:
        raise InvalidParams("alpha must lie in [0, 1]")
    return alpha


class _Layout:
    """Material/lecture/course wiring read once from the store."""

    def __init__(self, store):
        self.store = store
        self.material_topics = {}
        self.material_courses = {}
        self.course_materials = {}
        self.course_topics = {}
        for m in store.instances(TKG.Material):
            topics, courses = set(), set()
            for lid in store.subjects(TKG.hasMaterial, m):
                topics |= store.objects(lid, TKG.covers)
                courses |= store.objects(lid, TKG.partOfCourse)
            self.material_topics[m] = frozenset(topics)
            self.material_courses[m] = frozenset(courses)
        for c in store.instances(TKG.Course):
            mats, topics = set(), set()
            for lid in store.objects(c, TKG.hasLecture):
                mats |= store.objects(lid, TKG.hasMaterial)
                topics |= store.objects(lid, TKG.covers)
            self.course_materials[c] = sorted(mats)
            self.course_topics[c] = frozenset(topics)
        self.cosines = {}
        self.norms = {}

    def cosine(self, vectors, a, b):
        """Memoized cosine between the vectors of materials a and b."""
        key = (a, b) if a <= b else (b, a)
        got = self.cosines.get(key)
        if got is None:
            w1, w2 = _weights(vectors.get(a)), _weights(vectors.get(b))
            got = self.cosines[key] = _cosine(w1, w2, self.norm(a, w1), self.norm(b, w2))
        return got

    def norm(self, m, w):
        got = self.norms.get(m)
        if got is None:
            got = self.norms[m] = _norm(w)
        return got


def _layout(kg):
    cached = getattr(kg, "_layout_cache", None)
    key = (id(kg.store), kg.store.version, id(kg.vectors))
    if cached is None or cached[0] != key:
        cached = (key, _Layout(kg.store))
        try:
            kg._layout_cache = cached
        except AttributeError:
            pass
    return cached[1]


def _alpha(kg, alpha):
    return _check_alpha(getattr(kg, "alpha", 0.5) if alpha is None else alpha)


def _mat_score(kg, lay, m1, m2, alpha):
    cos = lay.cosine(kg.vectors, m1, m2)
    jac = jaccard(lay.material_topics.get(m1, frozenset()), lay.material_topics.get(m2, frozenset()))
    return SimilarityScore(combine(cos, jac, alpha), cos, jac, alpha)


def material_similarity(kg, m1, m2, alpha=None):
    alpha = _alpha(kg, alpha)
    m1 = require(kg.store, m1, TKG.Material, "material")
    m2 = require(kg.store, m2, TKG.Material, "material")
    return _mat_score(kg, _layout(kg), m1, m2, alpha)


def _ranked(scored, k):
    scored.sort(key=lambda row: (-row[1].value, row[0]))
    return scored[:k]


def similar_materials(kg, m, k, same_topic_only=True, alpha=None):
    """Other materials ranked by score (desc), ties by id."""
    if k < 1:
        raise InvalidParams("k must be >= 1")
    alpha = _alpha(kg, alpha)
    m = require(kg.store, m, TKG.Material, "material")
    lay = _layout(kg)
    mine = lay.material_topics.get(m, frozenset())
    scored = []
    for other, topics in lay.material_topics.items():
        if other == m or (same_topic_only and not (topics & mine)):
            continue
        scored.append((other, _mat_score(kg, lay, m, other, alpha)))
    return _ranked(scored, k)


def _mean_of_max(kg, lay, mats1, mats2):
    if not mats1 or not mats2:
        return 0.0
    cos = lay.cosine
    best1 = [max(cos(kg.vectors, a, b) for b in mats2) for a in mats1]
    best2 = [max(cos(kg.vectors, a, b) for a in mats1) for b in mats2]
    return (math.fsum(best1) / len(best1) + math.fsum(best2) / len(best2)) / 2


def _course_score(kg, lay, c1, c2, alpha):
    cos = _mean_of_max(kg, lay, lay.course_materials.get(c1, []), lay.course_materials.get(c2, []))
    jac = jaccard(lay.course_topics.get(c1, frozenset()), lay.course_topics.get(c2, frozenset()))
    return SimilarityScore(combine(cos, jac, alpha), cos, jac, alpha)


def course_similarity(kg, c1, c2, alpha=None):
    alpha = _alpha(kg, alpha)
    c1 = require(kg.store, c1, TKG.Course, "course")
    c2 = require(kg.store, c2, TKG.Course, "course")
    return _course_score(kg, _layout(kg), c1, c2, alpha)


def similar_courses(kg, c, k, alpha=None):
    """Other courses with a positive score, best first."""
    if k < 1:
        raise InvalidParams("k must be >= 1")
    alpha = _alpha(kg, alpha)
    c = require(kg.store, c, TKG.Course, "course")
    lay = _layout(kg)
    scored = []
    for other in lay.course_materials:
        if other == c:
            continue
        s = _course_score(kg, lay, c, other, alpha)
        if s.value > 0:
            scored.append((other, s))
    return _ranked(scored, k)


def suggested_resources(kg, c, k, alpha=None):
    """Materials outside ``c`` sharing a topic with it, ranked by their best
    score against any of ``c``'s materials."""
    if k < 1:
        raise InvalidParams("k must be >= 1")
    alpha = _alpha(kg, alpha)
    c = require(kg.store, c, TKG.Course, "course")
    lay = _layout(kg)
    own = set(lay.course_materials.get(c, []))
    topics = lay.course_topics.get(c, frozenset())
    scored = []
    for other, mt in lay.material_topics.items():
        if other in own or not (mt & topics):
            continue
        best = max((_mat_score(kg, lay, m, other, alpha) for m in sorted(own)),
                   key=lambda s: s.value, default=None)
        if best is not None:
            scored.append((other, best))
    return _ranked(scored, k)
