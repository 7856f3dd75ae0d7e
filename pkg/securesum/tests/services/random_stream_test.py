from collections import Counter

import numpy as np
import pytest

from securesum.domain.field import FieldSpec
from securesum.services.random_stream import RandomStream, uniform_sample


def test_frozen_draws():
    # First three draws of seed 2024, label "fixture", index 0 over F_3.
    stream = RandomStream(2024, "fixture", 0)
    F3 = FieldSpec(3)
    assert [uniform_sample(F3, stream).value for _ in range(3)] == [0, 1, 0]


def test_deterministic():
    a = RandomStream(7).uniform_array(FieldSpec(251), (4, 3))
    b = RandomStream(7).uniform_array(FieldSpec(251), (4, 3))
    assert np.array_equal(a, b)
    c = RandomStream(8).uniform_array(FieldSpec(251), (4, 3))
    assert not np.array_equal(a, c)


def test_split_streams_are_independent_of_consumption_order():
    root = RandomStream(3)
    first = [root.split("user", k).uniform_int(1000) for k in range(5)]
    root = RandomStream(3)
    root.uniform_int(10)
    second = [root.split("user", k).uniform_int(1000) for k in reversed(range(5))]
    assert first == list(reversed(second))


def test_split_depends_on_parent_index():
    a = RandomStream(3).split("precoding", 1).split("group", 0)
    b = RandomStream(3).split("precoding", 2).split("group", 0)
    assert [a.next_word() for _ in range(4)] != [b.next_word() for _ in range(4)]


def test_uniform_int_range():
    stream = RandomStream(1)
    draws = [stream.uniform_int(5) for _ in range(500)]
    assert set(draws) == {0, 1, 2, 3, 4}
    with pytest.raises(ValueError):
        stream.uniform_int(0)


def test_binary_frequencies():
    stream = RandomStream(99)
    counts = Counter(uniform_sample(FieldSpec(2), stream).value for _ in range(10000))
    assert 4700 < counts[0] < 5300
    assert counts[0] + counts[1] == 10000


def test_uniform_array_shape():
    array = RandomStream(5).uniform_array(FieldSpec(7), (2, 0))
    assert array.shape == (2, 0)
    array = RandomStream(5).uniform_array(FieldSpec(7), (3,))
    assert array.shape == (3,)
    assert array.dtype == np.int64
    assert ((0 <= array) & (array < 7)).all()
