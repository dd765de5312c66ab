from pathlib import Path

import hypothesis.strategies as st

from blokit import BitString, FeatureVector, PaddingPolicy, TransformParams

DATA_DIR = Path(__file__).parent / "data"

TABLE_B5_FIXTURE = DATA_DIR / "table_b5.txt"


@st.composite
def bit_strings(draw, min_length=0, max_length=64):
    length = draw(st.integers(min_length, max_length))
    value = draw(st.integers(0, (1 << length) - 1)) if length else 0
    return BitString(value, length)


@st.composite
def feature_vectors(draw, min_length=1, max_length=64):
    return FeatureVector(draw(bit_strings(min_length, max_length)))


odd_block_sizes = st.sampled_from([3, 5, 7, 9])

padding_policies = st.sampled_from(list(PaddingPolicy))


@st.composite
def transform_params(draw):
    return TransformParams(draw(odd_block_sizes), draw(padding_policies))


@st.composite
def block_multiple_features(draw, max_blocks=8):
    """Feature vector whose length is an exact multiple of the block size."""
    b = draw(odd_block_sizes)
    nblocks = draw(st.integers(1, max_blocks))
    length = b * nblocks
    value = draw(st.integers(0, (1 << length) - 1))
    return FeatureVector(BitString(value, length)), TransformParams(b)
