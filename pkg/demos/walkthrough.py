"""Build the bundled sample graph and ask it a few questions.

    python demos/walkthrough.py
"""

from teachkg import (CompetencyQuestion, answer, build_kg, load_corpus, resolve_material,
                     sample_corpus_path, similar_courses)
from teachkg.pkg import build_all_pkgs
from teachkg.prereq import inference_report, precedence_stats


def show(kg, name, target, **kw):
    res = answer(kg, CompetencyQuestion(name, target, **kw))
    ids = [str(row.value) for row in res.rows]
    print(f"{name}({target}): {', '.join(ids) or '-'}")


def main():
    corpus = load_corpus(sample_corpus_path())
    kg = build_kg(corpus)
    print(f"{len(corpus.manifests)} courses, {len(kg.store)} triples\n")

    # every co-covered pair with the numbers behind the keep/drop decision
    for row in inference_report(precedence_stats(kg.store)):
        if row["cooccur"] >= 2:
            print(f"{row['a']:>14} -> {row['b']:<14} ratio {row['ratio']:.2f} "
                  f"over {row['cooccur']} courses, kept={row['kept']}")
    print()

    show(kg, "prerequisites-of", "tkg:sparql")
    show(kg, "who-teaches", "tkg:rdf")
    show(kg, "labs-of", "tkg:kg-master")

    print("\ncourses closest to tkg:kg-master:")
    for c, score in similar_courses(kg, "tkg:kg-master", 3):
        print(f"    {c}  {score.value:.3f} (cosine {score.cosine:.3f}, "
              f"topic jaccard {score.topic_jaccard:.3f})")

    pkgs = build_all_pkgs(kg.store)
    for m in ("tkg:kgm-01-slides", "tkg:kgm-03-notes"):
        res = resolve_material(kg.store, pkgs, m, "a-student")
        print(f"\n{m} for a-student: {res.to_json()}")


if __name__ == "__main__":
    main()
