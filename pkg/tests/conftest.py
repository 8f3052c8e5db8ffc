import random

import pytest
from hypothesis import strategies as st

from surfaut import Signature, Word

SMALL_SIGS = [
    Signature(0, 2),
    Signature(0, 3),
    Signature(1, 0),
    Signature(1, 1),
    Signature(1, 2),
    Signature(2, 0),
    Signature(2, 1),
]

SEED = 20260809


@st.composite
def words(draw, sig=None, max_len=12):
    s = sig if sig is not None else draw(st.sampled_from(SMALL_SIGS))
    letters = st.sampled_from([c for c in range(-s.rank, s.rank + 1) if c != 0])
    codes = draw(st.lists(letters, max_size=max_len))
    return Word(s, tuple(codes))


@st.composite
def word_pairs(draw, max_len=10):
    s = draw(st.sampled_from(SMALL_SIGS))
    return draw(words(sig=s, max_len=max_len)), draw(words(sig=s, max_len=max_len))


@pytest.fixture
def rng():
    return random.Random(SEED)
