import pytest
from hypothesis import given, settings, strategies as st

from oracles import best_segmentation, segmentation_bits
from sptrack.fixtures import donsvic_corpus
from sptrack.learn import boundary_scores, derive_old, segment_corpus
from sptrack.sp.cost import segmentation_cost
from sptrack.sp.patterns import OldStore


def common_substrings(a, b, min_len=2):
    """Maximal common contiguous substrings of two sequences, by brute force."""
    subs = {tuple(a[i:j]) for i in range(len(a)) for j in range(i + min_len, len(a) + 1)}
    common = {s for s in subs
              if any(tuple(b[k:k + len(s)]) == s for k in range(len(b) - len(s) + 1))}
    return {s for s in common
            if not any(len(t) > len(s) and any(t[k:k + len(s)] == s for k in range(len(t)))
                       for t in common)}


def test_learning_sequence():
    first, second = "t h a t b o y r u n s", "t h a t g i r l r u n s"
    ev, store = derive_old(first, OldStore())
    assert [p.text() for p in ev.created] == [first] and len(store) == 1
    ev, store = derive_old(first, store)
    assert ev.created == [] and ev.reinforced == [("p0", 2)]
    ev, store = derive_old(second, store)
    shared = common_substrings(first.split(), second.split())
    made = {p.symbols for p in ev.created}
    assert shared <= made
    new = second.split()
    hit = set()
    for u in shared:
        k = next(k for k in range(len(new)) if tuple(new[k:k + len(u)]) == u)
        hit.update(range(k, k + len(u)))
    assert tuple(s for i, s in enumerate(new) if i not in hit) in made
    assert ev.log_line() == "created: p1=t h a t; p2=g i r l; p3=r u n s | reinforced: "


@pytest.mark.parametrize("corpus", ["a b a b a b a b", "q q q q"])
def test_segmentation_reaches_oracle(corpus):
    seq = corpus.split()
    res = segment_corpus(seq)
    best = best_segmentation(seq)
    alpha = len(set(seq))
    assert res.total_cost == pytest.approx(segmentation_bits(best, alpha))
    assert res.total_cost == pytest.approx(segmentation_bits(res.units, alpha))


def test_repeated_pair():
    res = segment_corpus("a b a b a b a b".split())
    assert res.units == [("a", "b")] * 4 and ("a", "b") in res.lexicon


def test_distinct_symbols_never_merge():
    res = segment_corpus(list("abcdefg"))
    assert res.units == [(s,) for s in "abcdefg"] and res.trace == [res.total_cost]


@settings(max_examples=30, deadline=None)
@given(st.lists(st.sampled_from("abc"), min_size=2, max_size=10))
def test_cost_model_and_trace(seq):
    res = segment_corpus(seq)
    assert [s for u in res.units for s in u] == seq
    assert all(b < a for a, b in zip(res.trace, res.trace[1:]))
    alpha = len(set(seq))
    assert segmentation_cost(res.units, alpha) == pytest.approx(segmentation_bits(res.units, alpha))
    assert res.total_cost >= segmentation_bits(best_segmentation(seq), alpha) - 1e-9


def test_boundary_scores():
    assert boundary_scores([2, 4, 7], [2, 5, 7, 9]) == (pytest.approx(2 / 3), 0.5)
    assert boundary_scores([], [1]) == (0.0, 0.0)


def test_donsvic_corpus_is_seeded():
    a, b = donsvic_corpus(3), donsvic_corpus(3)
    assert a == b and len(a[0]) == 200


@pytest.mark.parametrize("bad", [["a"], []])
def test_segment_rejects_short_corpus(bad):
    with pytest.raises(ValueError):
        segment_corpus(bad)
