import itertools

import pytest
from hypothesis import given, strategies as st

from sptrack.sp.codec import CodecError, repetitions, run_length_compress, run_length_decompress


@pytest.mark.parametrize("n, code", [
    (4, "X 1 1 1 1 #X"),
    (1, "X 1 #X"),
])
def test_lossless(n, code):
    assert " ".join(run_length_compress("a b c".split() * n, "a b c")) == code


@given(st.integers(1, 16))
def test_lossy_drops_count(n):
    assert run_length_compress(["q"] * n, "q", lossless=False) == ["X", "#X"]


@pytest.mark.parametrize("code, unit, out", [
    ("X 1 1 1 1 #X", "a b c", "a b c a b c a b c a b c"),
    ("X 1 #X", "q", "q"),
])
def test_decompress(code, unit, out):
    assert " ".join(run_length_decompress(code, unit)) == out


def test_round_trip_small_cases():
    alpha = "abc"
    for m in range(1, 5):
        for unit in itertools.product(alpha, repeat=m):
            for n in range(1, 17):
                seq = list(unit) * n
                assert run_length_decompress(run_length_compress(seq, unit), unit) == seq


@pytest.mark.parametrize("seq, unit, pos", [
    ("a b c a x c", "a b c", 4),
    ("a b c a", "a b c", 3),
    ("", "a", 0),
])
def test_broken_repetition_position(seq, unit, pos):
    with pytest.raises(CodecError) as err:
        repetitions(seq, unit)
    assert err.value.position == pos


@pytest.mark.parametrize("code", ["X #X", "1 1 #X", "X 1 1", "X 1 2 #X"])
def test_malformed_codes(code):
    with pytest.raises(CodecError):
        run_length_decompress(code, "a")
