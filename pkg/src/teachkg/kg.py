"""The graph plus the per-material term vectors that similarity needs."""

from dataclasses import dataclass, field
from typing import Dict, Optional

from .ingest import Corpus, materialize
from .prereq import InferParams, run_inference
from .store import NodeId, TripleStore
from .topics import ExtractionParams, TermVector, extract_subtopics, tfidf_vectors


@dataclass
class TeachingKG:
    store: TripleStore
    vectors: Dict[NodeId, TermVector] = field(default_factory=dict)
    alpha: float = 0.5
    corpus: Optional[Corpus] = None

    @classmethod
    def from_corpus(cls, corpus, store=None, params=None, alpha=0.5):
        """Wrap ``store`` (materialized from ``corpus`` if omitted)."""
        if store is None:
            store = materialize(corpus)
        vectors = tfidf_vectors(corpus.documents, params) if corpus.documents else {}
        return cls(store=store, vectors=vectors, alpha=alpha, corpus=corpus)

    def extract(self, params=None):
        if self.corpus is None:
            return []
        return extract_subtopics(self.store, self.corpus, params, vectors=self.vectors)

    def infer(self, params=None):
        return run_inference(self.store, params)


def build_kg(corpus, extraction=None, inference=None, extract=True, infer=True, alpha=0.5):
    """materialize -> extract subtopics -> infer prerequisites."""
    kg = TeachingKG.from_corpus(corpus, params=extraction, alpha=alpha)
    if extract:
        kg.extract(extraction or ExtractionParams())
    if infer:
        kg.infer(inference or InferParams())
    return kg
