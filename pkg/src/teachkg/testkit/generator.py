"""Seeded synthetic corpora with planted prerequisite structure.

Every random decision draws from one SplitMix64 stream seeded by
``SynthParams.seed``, in a fixed order, so a seed always yields the same
corpus bytes.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from ..errors import InvalidParams
from ..ingest import Corpus, CourseManifest, write_corpus
from ..schema import LEVELS, MATERIAL_KINDS, Course, DatasetRef, Lecture, Lecturer, Material, Topic
from ..store import NodeId
from .rng import SplitMix64

_ONSETS = ("b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z")
_VOWELS = ("a", "e", "i", "o", "u")
_CODAS = ("", "n", "r", "s", "x")


@dataclass(frozen=True)
class SynthParams:
    n_courses: int
    lectures_per_course: int
    topics_pool_size: int = 30
    planted_prereq_edges: Optional[Tuple[Tuple[str, str], ...]] = None
    vocabulary_size: int = 12
    seed: int = 0
    materials_per_lecture: int = 2
    n_planted: Optional[int] = None
    n_areas: int = 3
    area_rate: float = 0.3
    contradictions: int = 0
    words_per_document: int = 40
    textless_rate: float = 0.1
    n_lecturers: Optional[int] = None
    n_datasets: int = 3

    def __post_init__(self):
        for name in ("n_courses", "lectures_per_course", "topics_pool_size",
                     "vocabulary_size", "materials_per_lecture", "words_per_document"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise InvalidParams(f"{name} must be a positive integer, got {value!r}")
        for name in ("n_areas", "contradictions", "n_datasets"):
            if getattr(self, name) < 0:
                raise InvalidParams(f"{name} must be >= 0")
        for name in ("area_rate", "textless_rate"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise InvalidParams(f"{name} must lie in [0, 1]")
        if self.n_lecturers is not None and self.n_lecturers < 1:
            raise InvalidParams("n_lecturers must be positive")
        if self.planted_prereq_edges is not None:
            ids = set(topic_ids(self.topics_pool_size))
            for a, b in self.planted_prereq_edges:
                if a not in ids or b not in ids:
                    raise InvalidParams(f"planted edge ({a}, {b}) uses an unknown topic")
            if _has_cycle(self.planted_prereq_edges):
                raise InvalidParams("planted edges must form a DAG")


@dataclass
class GroundTruth:
    planted_edges: List[Tuple[NodeId, NodeId]]
    material_topics: Dict[NodeId, NodeId] = field(default_factory=dict)
    clusters: Dict[NodeId, List[NodeId]] = field(default_factory=dict)
    seed: int = 0

    def to_json(self):
        return {
            "seed": self.seed,
            "planted_edges": [[str(a), str(b)] for a, b in self.planted_edges],
            "material_topics": {str(m): str(t) for m, t in sorted(self.material_topics.items())},
            "clusters": {str(t): [str(m) for m in ms] for t, ms in sorted(self.clusters.items())},
        }


def topic_ids(n):
    return [NodeId(f"tkg:topic-{i:02d}") for i in range(1, n + 1)]


def _has_cycle(edges):
    succ = {}
    for a, b in edges:
        succ.setdefault(a, set()).add(b)
    state = {}

    def visit(u):
        state[u] = 1
        for v in succ.get(u, ()):
            if state.get(v) == 1 or (v not in state and visit(v)):
                return True
        state[u] = 2
        return False

    return any(u not in state and visit(u) for u in sorted(succ))


def _word(rng, syllables):
    return "".join(rng.choice(_ONSETS) + rng.choice(_VOWELS) + rng.choice(_CODAS)
                   for _ in range(syllables))


def _vocabulary(rng, n_pools, size, shared):
    """Disjoint word pools, one per topic, plus one shared pool."""
    seen = set()
    pools = []
    for _ in range(n_pools + 1):
        pool = []
        while len(pool) < (shared if len(pools) == n_pools else size):
            w = _word(rng, 2 + rng.below(2))
            if w not in seen:
                seen.add(w)
                pool.append(w)
        pools.append(pool)
    return pools[:-1], pools[-1]


def _random_dag(rng, topics, n_edges):
    order = rng.shuffle(list(topics))
    edges = set()
    n = len(order)
    attempts = 0
    while len(edges) < n_edges and attempts < 50 * max(n_edges, 1) and n > 1:
        attempts += 1
        i, j = rng.below(n), rng.below(n)
        if i == j:
            continue
        i, j = min(i, j), max(i, j)
        edges.add((order[i], order[j]))
    return sorted(edges)


def linear_extension(rng, nodes, edges):
    """Random topological order of ``nodes`` respecting ``edges`` among them."""
    nodes = sorted(set(nodes))
    inside = set(nodes)
    indeg = {n: 0 for n in nodes}
    succ = {n: [] for n in nodes}
    for a, b in edges:
        if a in inside and b in inside:
            succ[a].append(b)
            indeg[b] += 1
    ready = sorted(n for n in nodes if indeg[n] == 0)
    out = []
    while ready:
        u = ready.pop(rng.below(len(ready)))
        out.append(u)
        for v in sorted(succ[u]):
            indeg[v] -= 1
            if indeg[v] == 0:
                ready.append(v)
                ready.sort()
    return out


def _text(rng, own, shared, others, n_words):
    words = []
    for _ in range(n_words):
        r = rng.random()
        if r < 0.7:
            words.append(rng.choice(own))
        elif r < 0.9:
            words.append(rng.choice(shared))
        else:
            words.append(rng.choice(rng.choice(others)) if others else rng.choice(own))
    lines = []
    for i in range(0, len(words), 10):
        lines.append(" ".join(words[i:i + 10]) + ".")
    return "\n".join(lines) + "\n"


def generate_corpus(p):
    """Return ``(Corpus, GroundTruth)`` for ``p``."""
    if not isinstance(p, SynthParams):
        raise InvalidParams("expected SynthParams")
    rng = SplitMix64(p.seed)
    tids = topic_ids(p.topics_pool_size)
    pools, shared = _vocabulary(rng, len(tids), p.vocabulary_size, max(8, p.vocabulary_size))

    areas = [NodeId(f"tkg:area-{i:02d}") for i in range(1, p.n_areas + 1)]
    topics = [Topic(id=a, label=f"Area {i}") for i, a in enumerate(areas, 1)]
    for tid, pool in zip(tids, pools):
        parent = rng.choice(areas) if areas and rng.chance(p.area_rate) else None
        aliases = frozenset([pool[1]]) if len(pool) > 1 else frozenset()
        topics.append(Topic(id=tid, label=pool[0], aliases=aliases, parent=parent))
    vocab = dict(zip(tids, pools))

    if p.planted_prereq_edges is not None:
        planted = sorted((NodeId(a), NodeId(b)) for a, b in p.planted_prereq_edges)
    else:
        n_edges = p.n_planted if p.n_planted is not None else len(tids) // 2
        planted = _random_dag(rng, tids, n_edges)

    datasets = [DatasetRef(id=NodeId(f"tkg:dataset-{i:02d}"), label=f"Dataset {i}",
                           url=f"https://example.org/datasets/{i}")
                for i in range(1, p.n_datasets + 1)]
    n_lecturers = p.n_lecturers or max(2, (p.n_courses + 1) // 2)
    lecturers = [Lecturer(id=NodeId(f"tkg:lecturer-{i:02d}"), name=f"Lecturer {i}",
                          affiliation=f"University {1 + (i - 1) % 3}",
                          contact=f"lecturer{i}@example.org")
                 for i in range(1, n_lecturers + 1)]

    documents = {}
    manifests = []
    truth = GroundTruth(planted_edges=planted, seed=p.seed)
    n_total = p.n_courses + p.contradictions
    width = max(2, len(str(n_total)))
    for ci in range(1, n_total + 1):
        contradictory = ci > p.n_courses
        cid = NodeId(f"tkg:course-{ci:0{width}d}")
        chosen = rng.sample(tids, min(p.lectures_per_course, len(tids)))
        if contradictory:
            order = rng.shuffle(sorted(chosen))
        else:
            order = linear_extension(rng, chosen, planted)
        while len(order) < p.lectures_per_course:
            order.append(rng.choice(order))
        staff = sorted(rng.sample(lecturers, 1 + rng.below(min(2, len(lecturers)))),
                       key=lambda x: x.id)
        lectures, materials = [], []
        for li, topic in enumerate(order, 1):
            mids = []
            for mi in range(1, p.materials_per_lecture + 1):
                stem = f"c{ci:0{width}d}-l{li:02d}-m{mi}"
                mid = NodeId("tkg:" + stem)
                textless = rng.chance(p.textless_rate)
                open_access = rng.chance(0.7)
                used = frozenset(d.id for d in datasets if rng.chance(0.15))
                author = None
                if not open_access and rng.chance(0.5):
                    author = rng.choice(staff).id
                materials.append(Material(
                    id=mid, title=f"{vocab[topic][0].capitalize()} material {mi}",
                    kind=rng.choice(MATERIAL_KINDS),
                    text_path=None if textless else f"materials/{stem}.txt",
                    open_access=open_access, datasets=used, author=author,
                    license=None if not open_access else "CC-BY-4.0"))
                if not textless:
                    others = [vocab[t] for t in tids if t != topic]
                    documents[mid] = _text(rng, vocab[topic], shared,
                                           [rng.choice(others)] if others else [],
                                           p.words_per_document)
                mids.append(mid)
                truth.material_topics[mid] = topic
                truth.clusters.setdefault(topic, []).append(mid)
            lectures.append(Lecture(index=li, title=f"Lecture {li}: {vocab[topic][0]}",
                                    materials=tuple(mids), declared_topics=(topic,)))
        course = Course(id=cid, title=f"Course {ci}", audience=rng.choice(
            ("undergraduates", "graduate students", "practitioners")),
            level=rng.choice(LEVELS), lecturers=frozenset(x.id for x in staff),
            lectures=tuple(lectures))
        manifests.append(CourseManifest(course=course, lecturers=tuple(staff),
                                        materials=tuple(materials)))
    corpus = Corpus(manifests=manifests, topics=topics, datasets=datasets, documents=documents)
    return corpus, truth


def write_synthetic(corpus, truth, out):
    """Write the corpus directory plus ``ground_truth.json``."""
    out = Path(out)
    write_corpus(corpus, out)
    (out / "ground_truth.json").write_text(json.dumps(truth.to_json(), indent=2) + "\n",
                                           encoding="utf-8")
    corpus.root = out
    return out


def cycle_fixture(n_topics=3):
    """Condorcet-style corpus: course i rotates the topic order by i.

    Every pair is ordered one way in all but one course, so with a
    threshold at or below (n-1)/n the gated edges form a full cycle.
    """
    if n_topics < 3:
        raise InvalidParams("a cycle needs at least three topics")
    tids = topic_ids(n_topics)
    lecturer = Lecturer(id=NodeId("tkg:lecturer-01"), name="Lecturer 1", contact="l1@example.org")
    topics = [Topic(id=t, label=f"Topic {i}") for i, t in enumerate(tids, 1)]
    manifests = []
    for ci in range(n_topics):
        cid = NodeId(f"tkg:course-{ci + 1:02d}")
        order = tids[ci:] + tids[:ci]
        lectures, materials = [], []
        for li, t in enumerate(order, 1):
            mid = NodeId(f"tkg:c{ci + 1:02d}-l{li:02d}-m1")
            materials.append(Material(id=mid, title=f"Notes {li}", kind="notes"))
            lectures.append(Lecture(index=li, title=f"Lecture {li}", materials=(mid,),
                                    declared_topics=(t,)))
        course = Course(id=cid, title=f"Course {ci + 1}", audience="students", level="master",
                        lecturers=frozenset([lecturer.id]), lectures=tuple(lectures))
        manifests.append(CourseManifest(course=course, lecturers=(lecturer,),
                                        materials=tuple(materials)))
    return Corpus(manifests=manifests, topics=topics)
