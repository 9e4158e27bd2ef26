"""Hypothesis strategies shared by the test modules."""

from hypothesis import strategies as st

from teachkg.testkit import SynthParams

synth_params = st.builds(
    SynthParams,
    n_courses=st.integers(1, 5),
    lectures_per_course=st.integers(1, 6),
    topics_pool_size=st.integers(3, 10),
    seed=st.integers(0, 2**32),
    contradictions=st.integers(0, 2),
    materials_per_lecture=st.integers(1, 2),
    words_per_document=st.integers(5, 30),
    n_areas=st.integers(0, 2),
)
