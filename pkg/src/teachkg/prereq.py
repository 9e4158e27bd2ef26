"""Prerequisite inference from lecture ordering across courses.

For every course, each topic gets the index of the first lecture covering it
(covering a subtopic counts as covering its ancestors).  A pair (A, B)
co-occurs in a course when both are covered; A precedes B when its first
index is strictly smaller.  Edges A -> B pass when the pair co-occurs in at
least ``min_support`` courses and A precedes B in at least ``threshold`` of
them.  Surviving edges are made acyclic by repeatedly dropping the weakest
edge that lies on a cycle.
"""

from collections import Counter
from dataclasses import dataclass
from itertools import combinations, product
from typing import NamedTuple

import networkx as nx

from .errors import InvalidParams, UnknownEntity
from .schema import course_lectures, require, topic_ancestors
from .store import PIPELINE, TKG, Literal, NodeId, Triple


@dataclass(frozen=True)
class InferParams:
    min_support: int = 2
    threshold: float = 0.8
    transitive_reduction: bool = False

    def __post_init__(self):
        if not isinstance(self.min_support, int) or self.min_support < 1:
            raise InvalidParams("min_support must be an integer >= 1")
        if not 0.5 < self.threshold <= 1.0:
            raise InvalidParams("threshold must lie in (0.5, 1]")


class PairStats(NamedTuple):
    precedes: int
    cooccur: int

    @property
    def ratio(self):
        return self.precedes / self.cooccur if self.cooccur else 0.0


class PrecedenceStats:
    """Ordered-pair statistics; only pairs that co-occur at least once.

    Stored as two counters: co-occurrence keyed by the sorted pair and
    strict precedence keyed by the ordered pair.
    """

    def __init__(self, cooccur=None, before=None):
        self.cooccur = Counter(cooccur or {})
        self.before = Counter(before or {})

    def get(self, a, b):
        co = self.cooccur.get((a, b) if a < b else (b, a), 0)
        return PairStats(self.before.get((a, b), 0) if co else 0, co)

    def __getitem__(self, pair):
        a, b = pair
        st = self.get(a, b)
        if not st.cooccur:
            raise KeyError(pair)
        return st

    def __iter__(self):
        return iter(sorted(p for a, b in self.cooccur for p in ((a, b), (b, a))))

    def __len__(self):
        return 2 * len(self.cooccur)

    def items(self):
        return [(p, self.get(*p)) for p in self]


class _Ancestors:
    def __init__(self, store):
        self.store = store
        self.cache = {}

    def closure(self, topic):
        got = self.cache.get(topic)
        if got is None:
            if self.store.is_a(topic, TKG.Topic):
                got = (topic, *topic_ancestors(self.store, topic))
            else:
                got = (topic,)
            self.cache[topic] = got
        return got


def _first_indexes(store, course, ancestors):
    firsts = {}
    for idx, lid in course_lectures(store, course):
        for t in store.objects(lid, TKG.covers):
            for a in ancestors.closure(t):
                if a not in firsts:
                    firsts[a] = idx
    return firsts


def first_coverage(store, course, topic):
    """Smallest lecture index of ``course`` covering ``topic``, or None."""
    course = require(store, NodeId(course), TKG.Course, "course")
    topic = NodeId(topic)
    if not store.is_a(topic, TKG.Topic):
        raise UnknownEntity(topic, "topic")
    return _first_indexes(store, course, _Ancestors(store)).get(topic)


def precedence_stats(store):
    ancestors = _Ancestors(store)
    cooccur, before = Counter(), Counter()
    for course in sorted(store.instances(TKG.Course)):
        firsts = _first_indexes(store, course, ancestors)
        cooccur.update(combinations(sorted(firsts), 2))
        groups = {}
        for t, idx in firsts.items():
            groups.setdefault(idx, []).append(t)
        layers = [groups[i] for i in sorted(groups)]
        for j in range(1, len(layers)):
            for i in range(j):
                before.update(product(layers[i], layers[j]))
    return PrecedenceStats(cooccur, before)


def _gate(stats, params):
    """Candidate edges with weights plus rows for the report."""
    passing = {}
    before = stats.before
    for (a, b), co in stats.cooccur.items():
        if co < params.min_support:
            continue
        for pair in ((a, b), (b, a)):
            ratio = before.get(pair, 0) / co
            if ratio >= params.threshold:
                passing[pair] = (ratio, co)
    edges, dropped = {}, {}
    for (a, b), w in passing.items():
        rev = passing.get((b, a))
        if rev is None or w[0] > rev[0]:
            edges[(a, b)] = w
        elif w[0] == rev[0]:
            dropped[(a, b)] = "tie-with-reverse"
        else:
            dropped[(a, b)] = "reverse-stronger"
    return edges, dropped


def candidate_edges(stats, params=None):
    """Gated edges before cycle breaking, mapped to (ratio, cooccur)."""
    return _gate(stats, params or InferParams())[0]


class _Condensation:
    """Incrementally maintained strongly connected components.

    Edges are added one at a time; ``add`` reports whether the new edge
    lies on a cycle of the graph built so far (including itself).
    """

    def __init__(self):
        self.parent = {}
        self.out = {}
        self.inn = {}

    def find(self, x):
        parent = self.parent
        root = parent.setdefault(x, x)
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def add(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return True
        out = self.out
        seen, stack = {rb}, [rb]
        while stack:
            for v in out.get(stack.pop(), ()):
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        if ra not in seen:
            out.setdefault(ra, set()).add(rb)
            self.inn.setdefault(rb, set()).add(ra)
            return False
        # nodes on some rb -> ra path collapse into one component
        comp, stack = {ra}, [ra]
        while stack:
            for v in self.inn.get(stack.pop(), ()):
                if v in seen and v not in comp:
                    comp.add(v)
                    stack.append(v)
        new_out, new_in = set(), set()
        for x in comp:
            new_out |= out.pop(x, set())
            new_in |= self.inn.pop(x, set())
            self.parent[x] = ra
        new_out -= comp
        new_in -= comp
        for y in new_out:
            self.inn[y] -= comp
            self.inn[y].add(ra)
        for y in new_in:
            out[y] -= comp
            out[y].add(ra)
        out[ra], self.inn[ra] = new_out, new_in
        return True


def _break(weighted):
    # Greedy: repeatedly drop the weakest edge lying on a cycle.  A kept
    # edge is off every cycle and stays so as edges disappear, and no edge
    # stronger than e is gone when e's turn comes; hence e is dropped iff
    # its head reaches its tail through stronger edges alone.  Adding edges
    # strongest first and tracking components decides that directly.
    g = nx.DiGraph()
    g.add_edges_from(weighted)
    cyclic = [e for comp in nx.strongly_connected_components(g) if len(comp) > 1
              for e in g.subgraph(comp).edges]
    cyclic.sort(reverse=True)
    cyclic.sort(key=lambda e: weighted[e])
    cond = _Condensation()
    removed = [e for e in reversed(cyclic) if cond.add(*e)]
    return set(weighted) - set(removed), removed


def break_cycles(weighted):
    """Drop cycle edges until acyclic.

    ``weighted`` maps (A, B) -> (ratio, cooccur).  Each round removes, among
    the edges lying on some cycle, the one with the smallest (ratio,
    cooccur); remaining ties go to the largest (A, B).
    """
    return _break(dict(weighted))[0]


def _reduce(edges):
    g = nx.DiGraph()
    g.add_edges_from(edges)
    return set(nx.transitive_reduction(g).edges)


def _infer(stats, params):
    edges, dropped = _gate(stats, params)
    kept, removed = _break(edges)
    reasons = dict(dropped)
    reasons.update((e, "cycle") for e in removed)
    if params.transitive_reduction:
        reduced = _reduce(kept)
        reasons.update((e, "transitive-reduction") for e in kept - reduced)
        kept = reduced
    return kept, reasons


def infer_prerequisites(stats, params=None):
    """Final prerequisite edge set (a DAG) as {(A, B)}."""
    return _infer(stats, params or InferParams())[0]


def inference_report(stats, params=None):
    """Rows {a, b, precedes, cooccur, ratio, kept, removal_reason?} for
    every edge that passed the support and threshold gates."""
    return _infer_with_report(stats, params or InferParams())[1]


def _infer_with_report(stats, params):
    kept, reasons = _infer(stats, params)
    rows = []
    for (a, b) in sorted(set(kept) | set(reasons)):
        st = stats.get(a, b)
        row = {"a": str(a), "b": str(b), "precedes": st.precedes, "cooccur": st.cooccur,
               "ratio": round(st.ratio, 4), "kept": (a, b) in kept}
        if (a, b) in reasons:
            row["removal_reason"] = reasons[(a, b)]
        rows.append(row)
    return kept, rows


def prerequisites_inferred(store):
    return Literal(True) in store.objects(PIPELINE, TKG.prerequisitesInferred)


def apply_prerequisites(store, edges):
    """Replace the graph's prerequisite edges with ``edges``."""
    with store.lock:
        for t in list(store.iter_match(p=TKG.prerequisiteOf)):
            store.remove(t)
        for a, b in sorted(edges):
            store.insert(Triple(NodeId(a), TKG.prerequisiteOf, NodeId(b)))
        store.insert(Triple(PIPELINE, TKG.prerequisitesInferred, Literal(True)))


def run_inference(store, params=None):
    """Compute, store and report prerequisite edges."""
    params = params or InferParams()
    stats = precedence_stats(store)
    edges, report = _infer_with_report(stats, params)
    apply_prerequisites(store, edges)
    return edges, report
