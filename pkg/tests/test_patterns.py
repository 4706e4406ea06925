import math

import pytest
from hypothesis import given, strategies as st

from sptrack.sp.patterns import (OldStore, Origin, Pattern, PatternError, as_new, format_pattern,
                                 parse_patterns)

sym = st.text(alphabet="abcdefgh123", min_size=1, max_size=4)


def test_parse_frequencies_and_comments():
    pats = parse_patterns("# store\nS NP #NP #S *3\n\nN k i t #N\n")
    assert [p.text() for p in pats] == ["S NP #NP #S", "N k i t #N"]
    assert [p.frequency for p in pats] == [3, 1]
    assert pats[0].is_bracketed and pats[1].is_bracketed


@pytest.mark.parametrize("text, line", [
    ("a b\n*0\n", 2),
    ("a b *0\n", 1),
    ("a b\nc *x *2\n", 2),
])
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(PatternError) as err:
        parse_patterns(text)
    assert err.value.line == line


def test_pattern_rejects_empty_and_bad_frequency():
    with pytest.raises(PatternError):
        Pattern.old("e", "")
    with pytest.raises(PatternError):
        Pattern.old("f", "a", 0)


@given(st.lists(st.tuples(st.lists(sym, min_size=1, max_size=6), st.integers(1, 9)),
                min_size=1, max_size=5))
def test_store_text_round_trip(items):
    store = OldStore(Pattern.old(f"p{i}", s, f) for i, (s, f) in enumerate(items))
    again = OldStore.from_text(store.to_text())
    assert [(p.symbols, p.frequency) for p in again] == [(p.symbols, p.frequency) for p in store]


def test_symbol_and_reference_bits():
    store = OldStore([Pattern.old("x", "a b", 3), Pattern.old("y", "a c", 1)])
    # a: 4 of 8, b: 3 of 8, c: 1 of 8
    assert store.symbol_bits("a") == pytest.approx(1.0)
    assert store.symbol_bits("c") == pytest.approx(3.0)
    assert store.symbol_bits("zz") == pytest.approx(math.log2(4))   # escape over 3 known symbols
    assert store.reference_bits("x") == pytest.approx(-math.log2(3 / 4))


def test_replace_keeps_order_and_rejects_unknown():
    store = OldStore([Pattern.old("x", "a"), Pattern.old("y", "b")])
    out = store.replace([store["x"].with_frequency(5)], [Pattern.old("z", "c")])
    assert [p.id for p in out] == ["x", "y", "z"] and out["x"].frequency == 5
    with pytest.raises(PatternError):
        store.replace([Pattern.old("q", "a")])


def test_as_new_origin():
    p = as_new("a b c")
    assert p.origin is Origin.NEW and p.symbols == ("a", "b", "c")
    assert format_pattern(Pattern.old("k", "a b", 2)) == "a b *2"
