import pytest

from sptrack.fixtures import BODY_ROOTS, BODY_STREAM, LEG_SYMBOLS, body_grammar
from sptrack.sp.patterns import PatternError
from sptrack.sp.recognition import INFERRED, recognize, slot_categories


@pytest.fixture(scope="module")
def store():
    return body_grammar()


def test_slot_categories(store):
    assert slot_categories(store["person"]) == ("H", "T", "A", "L")


def test_full_body(store):
    res = recognize(BODY_STREAM, store, BODY_ROOTS)
    top = res[0]
    assert top.class_id == "person" and top.inferred == ()
    assert top.bound_parts["H"] == (0, 4) and top.bound_parts["L"] == (11, 15)
    assert all(top.confidence >= r.confidence for r in res)


def test_legs_hidden(store):
    stream = [s for s in BODY_STREAM if s not in LEG_SYMBOLS]
    top = recognize(stream, store, BODY_ROOTS)[0]
    assert top.class_id == "person"
    assert top.bound_parts["L"] == INFERRED and top.inferred == ("L",)


def test_disjoint_stream(store):
    assert recognize("u v w", store, BODY_ROOTS) == []


def test_bad_arguments(store):
    with pytest.raises(PatternError):
        recognize(BODY_STREAM, store, ["unicorn"])
    with pytest.raises(ValueError):
        recognize(BODY_STREAM, store, BODY_ROOTS, error_budget=-1)


@pytest.mark.parametrize("i", [0, 5, 9, 14])
def test_single_omission(store, i):
    stream = BODY_STREAM[:i] + BODY_STREAM[i + 1:]
    assert recognize(stream, store, BODY_ROOTS, error_budget=1)[0].class_id == "person"
