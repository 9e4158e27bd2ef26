"""teachkg: build, enrich and query teaching knowledge graphs.

Typical use::

    from teachkg import load_corpus, build_kg, ask
    kg = build_kg(load_corpus("corpus/"))
    ask(kg, "prerequisites-of", "tkg:sparql").values()
"""

__version__ = "0.1.0"

from .cq import CQS, AnswerSet, CompetencyQuestion, answer, ask, list_cqs
from .errors import (CycleDetected, DuplicateIdConflict, DuplicateLectureIndex, EmptyCorpus,
                     InvalidEntity, InvalidParams, JsonSyntax, MalformedTriple, MissingFile,
                     NamespaceViolation, ReadOnlyStore, SchemaViolation, TeachKGError,
                     TurtleSyntax, UnknownEntity, UnsupportedBeforeInference)
from .export import export_dot, export_json
from .ingest import Corpus, load_corpus, materialize, parse_manifest, sample_corpus_path
from .kg import TeachingKG, build_kg
from .pkg import AccessOutcome, PersonalKG, build_pkg, merge_pkg, resolve_material
from .prereq import (InferParams, break_cycles, first_coverage, infer_prerequisites,
                     precedence_stats)
from .schema import (Course, DatasetRef, Lecture, Lecturer, Material, Topic, assert_entity,
                     topic_ancestors)
from .similarity import (cosine, course_similarity, material_similarity, similar_courses,
                         similar_materials, suggested_resources)
from .store import Literal, NodeId, Triple, TripleStore, match_pattern
from .topics import ExtractionParams, extract_subtopics, tfidf_vectors, tokenize
from .turtle import export_turtle, parse_turtle_subset
