"""How much planted prerequisite structure does inference recover?

Generates corpora of growing size from one planted DAG and scores the
inferred edges against its transitive closure: a course that respects
a -> b and b -> c also orders a before c, so those edges are expected.
Unrelated pairs get ordered by chance too; more courses wash that out.

    python demos/planted_recovery.py [seed]
"""

import sys

import networkx as nx

from teachkg import InferParams, infer_prerequisites, materialize, precedence_stats
from teachkg.testkit import SynthParams, generate_corpus


def main(seed=3):
    params = InferParams()
    print(f"{'courses':>7} {'implied':>7} {'found':>5} {'precision':>9} {'recall':>6}")
    for n in (2, 5, 10, 20, 40):
        p = SynthParams(n_courses=n, lectures_per_course=10, topics_pool_size=15, seed=seed,
                        n_planted=8, contradictions=1)
        corpus, truth = generate_corpus(p)
        found = infer_prerequisites(precedence_stats(materialize(corpus)), params)
        planted = set(nx.transitive_closure_dag(nx.DiGraph(truth.planted_edges)).edges)
        hits = len(found & planted)
        precision = hits / len(found) if found else 1.0
        print(f"{n:>7} {len(planted):>7} {len(found):>5} {precision:>9.2f} "
              f"{hits / len(planted):>6.2f}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 3)
