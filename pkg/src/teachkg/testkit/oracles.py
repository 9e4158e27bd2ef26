"""Brute-force reference implementations.

These work straight from a Corpus (no triple store) with nested loops,
exact fractions and naive graph searches.  They deliberately import
nothing from the inference, extraction or similarity modules so that an
agreement between the two is meaningful.
"""

import math
import re
from collections import Counter
from fractions import Fraction
from importlib import resources

from ..errors import UnknownEntity

_TOKEN = re.compile(r"[^\W_]+")


# prerequisites ----------------------------------------------------------------

def _parents(corpus):
    parents = {}
    for t in corpus.topics:
        if t.parent is not None:
            parents[t.id] = t.parent
    return parents


def _with_ancestors(topic, parents):
    out = [topic]
    while out[-1] in parents:
        out.append(parents[out[-1]])
    return out


def _first_lecture(course, parents):
    first = {}
    for lec in sorted(course.lectures, key=lambda lec: lec.index):
        for t in lec.declared_topics:
            for a in _with_ancestors(t, parents):
                if a not in first or lec.index < first[a]:
                    first[a] = lec.index
    return first


def _successors(edges):
    succ = {}
    for a, b in edges:
        succ.setdefault(a, []).append(b)
    return succ


def _reachable(succ, src, dst):
    seen, stack = {src}, [src]
    while stack:
        u = stack.pop()
        if u == dst:
            return True
        for b in succ.get(u, ()):
            if b not in seen:
                seen.add(b)
                stack.append(b)
    return False


def oracle_precedence(corpus):
    """{(a, b): (precedes, cooccur)} for every ordered co-occurring pair."""
    parents = _parents(corpus)
    firsts = [_first_lecture(m.course, parents) for m in corpus.manifests]
    topics = sorted({t for f in firsts for t in f})
    out = {}
    for a in topics:
        for b in topics:
            if a == b:
                continue
            pre = co = 0
            for f in firsts:
                if a in f and b in f:
                    co += 1
                    if f[a] < f[b]:
                        pre += 1
            if co:
                out[(a, b)] = (pre, co)
    return out


def oracle_prerequisites(corpus, params):
    """Final prerequisite edge set for ``corpus`` under ``params``."""
    stats = oracle_precedence(corpus)
    threshold = Fraction(str(params.threshold))
    passing = {}
    for (a, b), (pre, co) in stats.items():
        if co >= params.min_support and Fraction(pre, co) >= threshold:
            passing[(a, b)] = (Fraction(pre, co), co)
    edges = {}
    for (a, b), w in passing.items():
        rev = passing.get((b, a))
        if rev is None or w[0] > rev[0]:
            edges[(a, b)] = w
    while True:
        succ = _successors(edges)
        on_cycle = [(a, b) for (a, b) in edges if _reachable(succ, b, a)]
        if not on_cycle:
            break
        worst = None
        for e in on_cycle:
            key = (edges[e][0], edges[e][1])
            if worst is None or key < worst[0] or (key == worst[0] and e > worst[1]):
                worst = (key, e)
        del edges[worst[1]]
    result = set(edges)
    if params.transitive_reduction:
        reduced = set()
        for (a, b) in result:
            others = _successors(e for e in result if e != (a, b))
            if not _reachable(others, a, b):
                reduced.add((a, b))
        result = reduced
    return result


# similarity -------------------------------------------------------------------

def _stopwords():
    text = resources.files("teachkg").joinpath("data/stopwords.txt").read_text("utf-8")
    words = set()
    for line in text.splitlines():
        word = line.split("#")[0].strip().lower()
        if word:
            words.add(word)
    return words


def _terms(text, stop, min_len):
    toks = _TOKEN.findall(text.casefold())
    good = [len(t) >= min_len and t not in stop for t in toks]
    uni = [t for t, g in zip(toks, good) if g]
    bi = []
    for i in range(len(toks) - 1):
        if good[i] and good[i + 1]:
            bi.append(toks[i] + " " + toks[i + 1])
    return uni, bi


def oracle_tfidf(documents, min_len=3):
    stop = _stopwords()
    split = {d: _terms(text, stop, min_len) for d, text in documents.items()}
    n = len(documents)
    df = Counter()
    for uni, bi in split.values():
        for term in set(uni + bi):
            df[term] += 1
    out = {}
    for d, (uni, bi) in split.items():
        counts = Counter(uni + bi)
        out[d] = {term: (counts[term] / len(uni)) * (math.log((1 + n) / (1 + df[term])) + 1)
                  for term in sorted(counts)}
    return out


def _length(w):
    return math.sqrt(math.fsum(x * x for x in w.values()))


def _cos(w1, w2, n1, n2):
    if not w1 or not w2:
        return 0.0
    if w1 == w2:
        return 1.0
    common = [t for t in w1 if t in w2]
    dot = math.fsum(w1[t] * w2[t] for t in common)
    if dot == 0.0:
        return 0.0
    return min(1.0, dot / (n1 * n2))


def _jac(a, b):
    if not a and not b:
        return 0.0
    return len(a & b) / len(a | b)


class OracleWorld:
    """Everything the similarity oracle needs, recomputed from scratch."""

    def __init__(self, corpus, top_k=5, min_len=3):
        self.vectors = oracle_tfidf(corpus.documents, min_len) if corpus.documents else {}
        self.lengths = {d: _length(w) for d, w in self.vectors.items()}
        self._cos = {}
        labels = {}
        declared = {t.id: t for t in corpus.topics}
        for man in corpus.manifests:
            for lec in man.course.lectures:
                for t in lec.declared_topics:
                    if t not in declared:
                        labels.setdefault(t.local.casefold(), set()).add(t)
        for t in declared.values():
            for name in [t.label, *t.aliases]:
                labels.setdefault(name.casefold(), set()).add(t.id)
        lookup = {k: min(v) for k, v in labels.items()}

        def key(term):
            return lookup.get(term, "term:" + term)

        self.material_topics = {}
        self.course_topics = {}
        self.course_materials = {}
        for man in corpus.manifests:
            c = man.course.id
            for lec in man.course.lectures:
                covered = set(lec.declared_topics)
                for m in lec.materials:
                    w = self.vectors.get(m, {})
                    ranked = sorted(w, key=lambda term: (-w[term], term))
                    covered |= {key(term) for term in ranked[:top_k] if w[term] > 0}
                for m in lec.materials:
                    self.material_topics.setdefault(m, set()).update(covered)
                    self.course_materials.setdefault(c, set()).add(m)
                self.course_topics.setdefault(c, set()).update(covered)
            self.course_materials.setdefault(c, set())
            self.course_topics.setdefault(c, set())

    def cos(self, a, b):
        # plain memo table; the cosine itself is recomputed from scratch once
        if (a, b) not in self._cos:
            wa, wb = self.vectors.get(a, {}), self.vectors.get(b, {})
            self._cos[(a, b)] = _cos(wa, wb, self.lengths.get(a, 0.0), self.lengths.get(b, 0.0))
        return self._cos[(a, b)]

    def material_score(self, a, b, alpha):
        cos = self.cos(a, b)
        jac = _jac(self.material_topics[a], self.material_topics[b])
        return min(1.0, max(0.0, jac + alpha * (cos - jac)))

    def course_score(self, c1, c2, alpha):
        m1, m2 = sorted(self.course_materials[c1]), sorted(self.course_materials[c2])
        if m1 and m2:
            best1 = [max(self.cos(a, b) for b in m2) for a in m1]
            best2 = [max(self.cos(b, a) for a in m1) for b in m2]
            cos = (math.fsum(best1) / len(best1) + math.fsum(best2) / len(best2)) / 2
        else:
            cos = 0.0
        jac = _jac(self.course_topics[c1], self.course_topics[c2])
        return min(1.0, max(0.0, jac + alpha * (cos - jac)))


def _top(scored, k):
    scored.sort(key=lambda row: (-row[1], row[0]))
    return scored[:k]


def oracle_similarity_ranking(corpus, m, k, alpha=0.5, top_k=5, same_topic_only=True, world=None):
    """[(material, score)] for the ``k`` materials most similar to ``m``."""
    world = world or OracleWorld(corpus, top_k)
    if m not in world.material_topics:
        raise UnknownEntity(m, "material")
    scored = []
    for other in sorted(world.material_topics):
        if other == m:
            continue
        if same_topic_only and not (world.material_topics[other] & world.material_topics[m]):
            continue
        scored.append((other, world.material_score(m, other, alpha)))
    return _top(scored, k)


def oracle_course_ranking(corpus, c, k, alpha=0.5, top_k=5, world=None):
    """[(course, score)] for the ``k`` most similar other courses (score > 0)."""
    world = world or OracleWorld(corpus, top_k)
    if c not in world.course_materials:
        raise UnknownEntity(c, "course")
    scored = []
    for other in sorted(world.course_materials):
        if other != c:
            s = world.course_score(c, other, alpha)
            if s > 0:
                scored.append((other, s))
    return _top(scored, k)
