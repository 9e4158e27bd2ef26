"""TF-IDF term extraction over lecture documents.

Terms are case-folded unigrams plus bigrams of adjacent surviving tokens.
Weights use a smoothed idf::

    tf(t, d)  = count(t, d) / number of unigram tokens in d
    idf(t)    = ln((1 + N) / (1 + df(t))) + 1
    weight    = tf * idf
"""

import functools
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Dict, Optional

from .errors import EmptyCorpus, InvalidParams
from .schema import UNCATEGORIZED, Topic, assert_entity, lecture_id, read_topic
from .store import TKG, Literal, NodeId, Triple

_SPLIT = re.compile(r"[\W_]+")


@dataclass(frozen=True)
class ExtractionParams:
    top_k: int = 5
    min_score: float = 0.0
    stopword_list: Optional[str] = None  # None: bundled English list
    min_token_len: int = 3

    def __post_init__(self):
        if not isinstance(self.top_k, int) or self.top_k < 1:
            raise InvalidParams("top_k must be a positive integer")
        if self.min_score < 0:
            raise InvalidParams("min_score must be >= 0")
        if self.min_token_len < 1:
            raise InvalidParams("min_token_len must be >= 1")


@dataclass
class TermVector:
    owner: NodeId
    weights: Dict[str, float] = field(default_factory=dict)

    def __bool__(self):
        return bool(self.weights)


def parse_stopwords(text):
    words = set()
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip().casefold()
        if line:
            words.add(line)
    return frozenset(words)


@functools.lru_cache(maxsize=8)
def load_stopwords(path=None):
    if path is None:
        text = resources.files("teachkg").joinpath("data/stopwords.txt").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return parse_stopwords(text)


def _split_terms(text, params):
    stop = load_stopwords(params.stopword_list)
    raw = [tok for tok in _SPLIT.split(text.casefold()) if tok]
    keep = [len(tok) >= params.min_token_len and tok not in stop for tok in raw]
    unigrams = [tok for tok, k in zip(raw, keep) if k]
    bigrams = [f"{raw[i]} {raw[i + 1]}" for i in range(len(raw) - 1)
               if keep[i] and keep[i + 1]]
    return unigrams, bigrams


def tokenize(text, params=None):
    """Unigrams in order, followed by bigrams in order."""
    unigrams, bigrams = _split_terms(text, params or ExtractionParams())
    return unigrams + bigrams


def tfidf_vectors(documents, params=None):
    """One TermVector per document id."""
    if not documents:
        raise EmptyCorpus("no documents to weight")
    params = params or ExtractionParams()
    counts = {}
    df = Counter()
    for doc_id, text in documents.items():
        unigrams, bigrams = _split_terms(text, params)
        c = Counter(unigrams)
        c.update(bigrams)
        counts[doc_id] = (c, len(unigrams))
        df.update(c.keys())
    n = len(documents)
    out = {}
    for doc_id, (c, n_tokens) in counts.items():
        weights = {}
        for term in sorted(c):
            idf = math.log((1 + n) / (1 + df[term])) + 1
            weights[term] = (c[term] / n_tokens) * idf
        out[NodeId(doc_id)] = TermVector(owner=NodeId(doc_id), weights=weights)
    return out


def top_terms(vector, params):
    ranked = sorted(vector.weights.items(), key=lambda kv: (-kv[1], kv[0]))
    return [term for term, w in ranked if w > 0 and w >= params.min_score][:params.top_k]


def label_index(store):
    """Case-folded label/alias -> topic id (smallest id on ambiguity)."""
    index = {}
    for t in store.instances(TKG.Topic):
        keys = [v.value for v in store.objects(t, TKG.label) | store.objects(t, TKG.alias)
                if isinstance(v, Literal) and isinstance(v.value, str)]
        for key in keys:
            key = key.casefold()
            if key not in index or t < index[key]:
                index[key] = t
    return index


def _slug(term):
    slug = re.sub(r"[^a-z0-9]+", "-", term).strip("-")
    return slug or "term"


def _mint_id(store, term):
    base = _slug(term)
    candidate = NodeId("tkg:" + base)
    n = 2
    while store.has_subject(candidate) or store.subjects(TKG.hasSubtopic, candidate):
        candidate = NodeId(f"tkg:{base}-{n}")
        n += 1
    return candidate


def ensure_uncategorized(store):
    if not store.is_a(UNCATEGORIZED, TKG.Topic):
        assert_entity(store, Topic(id=UNCATEGORIZED, label="(uncategorized)"))
    return UNCATEGORIZED


def extract_subtopics(store, corpus, params=None, vectors=None):
    """Attach each document's top-k terms to the graph as covered topics.

    Terms matching an existing label or alias reuse that topic; others are
    minted as ``source=extracted`` subtopics of the lecture's first declared
    topic.  Returns ``[(Topic, [covers triples])]`` ordered by topic id.
    """
    params = params or ExtractionParams()
    if not corpus.documents:
        return []
    if vectors is None:
        vectors = tfidf_vectors(corpus.documents, params)
    index = label_index(store)
    edges = {}
    with store.lock:
        for man in corpus.manifests:
            for lec in man.course.lectures:
                lid = lecture_id(man.course.id, lec.index)
                for mid in lec.materials:
                    vec = vectors.get(mid)
                    if not vec:
                        continue
                    for term in top_terms(vec, params):
                        tid = index.get(term)
                        if tid is None:
                            parent = (lec.declared_topics[0] if lec.declared_topics
                                      else ensure_uncategorized(store))
                            tid = _mint_id(store, term)
                            assert_entity(store, Topic(id=tid, label=term, parent=parent,
                                                       source="extracted"))
                            store.insert(Triple(tid, TKG.extractedFrom, mid))
                            index[term] = tid
                        for t in (Triple(lid, TKG.covers, tid), Triple(mid, TKG.covers, tid)):
                            store.insert(t)
                            edges.setdefault(tid, []).append(t)
    return [(read_topic(store, tid), sorted(set(ts), key=Triple.key))
            for tid, ts in sorted(edges.items())]
