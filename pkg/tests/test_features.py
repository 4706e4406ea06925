import numpy as np
import pytest

from sptrack.fixtures import BODY_ROOTS, BODY_STREAM, body_grammar
from sptrack.sim.features import Detector, detections, extract_symbols
from sptrack.sp.recognition import recognize


def textures(n, size=5, seed=0):
    rng = np.random.default_rng(seed)
    return [rng.random((size, size)) for _ in range(n)]


def test_one_planted_template(backend):
    [t] = textures(1)
    img = np.full((30, 30), 0.2)
    img[11:16, 4:9] = t
    hits = detections(img, Detector(t, 0.99, "x"))
    assert len(hits) == 1 and hits[0][:2] == (11, 4)
    assert hits[0][2] == pytest.approx(1.0)
    assert extract_symbols(img, [Detector(t, 0.99, "x")]) == ["x"]


def test_blank_frame(backend):
    dets = [Detector(t, 0.9, s) for t, s in zip(textures(3), "abc")]
    assert extract_symbols(np.zeros((20, 20)), dets) == []


def test_oversized_template():
    with pytest.raises(ValueError):
        detections(np.zeros((4, 4)), Detector(np.ones((5, 5)), 0.5, "x"))


def test_planted_body_is_recognized(backend):
    tmpls = textures(len(BODY_STREAM), seed=4)
    img = np.full((60, 50), 0.1)
    # five per row, in stream order, so reading order equals the stream
    for k, t in enumerate(tmpls):
        r, c = 2 + 11 * (k // 5), 2 + 9 * (k % 5)
        img[r:r + 5, c:c + 5] = t
    dets = [Detector(t, 0.99, s) for t, s in zip(tmpls, BODY_STREAM)]
    stream = extract_symbols(img, dets)
    assert stream == BODY_STREAM
    top = recognize(stream, body_grammar(), BODY_ROOTS)[0]
    assert top == recognize(BODY_STREAM, body_grammar(), BODY_ROOTS)[0]
    assert top.class_id == "person" and top.inferred == ()
