"""Synthetic corpora and brute-force oracles for testing teachkg."""

from .generator import GroundTruth, SynthParams, cycle_fixture, generate_corpus, write_synthetic
from .oracles import (OracleWorld, oracle_course_ranking, oracle_precedence,
                      oracle_prerequisites, oracle_similarity_ranking, oracle_tfidf)
from .rng import SplitMix64

__all__ = [
    "GroundTruth", "SynthParams", "cycle_fixture", "generate_corpus", "write_synthetic",
    "OracleWorld", "oracle_course_ranking", "oracle_precedence", "oracle_prerequisites",
    "oracle_similarity_ranking", "oracle_tfidf", "SplitMix64",
]
