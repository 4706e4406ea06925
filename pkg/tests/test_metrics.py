import pytest

from sptrack.sim.metrics import TrackRow, evaluate, iou, read_tracks, write_tracks
from sptrack.sim.render import render
from sptrack.sim.scenario import ObjectSpec, Scenario


@pytest.fixture(scope="module")
def truth():
    sc = Scenario(64, 64, 60, [ObjectSpec((10, 10), [(15, 20, 0), (45, 20, 59)])])
    return [render(sc, t)[1] for t in range(sc.frames)]


def rows_from(truth, shift=lambda t: (0.0, 0.0)):
    out = []
    for g in truth:
        dx, dy = shift(g.t)
        cx, cy = g.centers[1]
        out.append(TrackRow(g.t, 1, cx + dx, cy + dy))
    return out


def test_perfect_tracks(truth):
    rep = evaluate(rows_from(truth), truth)
    assert rep.rmse[1] == 0.0 and rep.failures[1] == 0


def test_constant_offset(truth):
    rep = evaluate(rows_from(truth, lambda t: (3.0, 4.0)), truth, threshold=0.1)
    assert rep.rmse[1] == pytest.approx(5.0) and rep.counted[1] == 60


def test_one_long_loss(truth):
    lost = lambda t: (20.0, 0.0) if 20 <= t < 30 else (0.0, 0.0)
    rep = evaluate(rows_from(truth, lost), truth)
    assert rep.failures[1] == 1
    assert rep.counted[1] == 60 - 10          # loss frames are skipped, then tracking resumes
    assert rep.failures_per_1000[1] == pytest.approx(1000 / 60)


def test_restarted_track_waits_for_grace(truth):
    # failure at 20, restart takes effect after 5 grace frames
    lost = lambda t: (20.0, 0.0) if 20 <= t <= 25 else (0.0, 0.0)
    rep = evaluate(rows_from(truth, lost), truth)
    assert rep.failures[1] == 1 and rep.counted[1] == 60 - 6


@pytest.mark.parametrize("a, b, want", [
    ((0, 0, 4, 4), (0, 0, 4, 4), 1.0),
    ((0, 0, 4, 4), (2, 0, 4, 4), 8 / 24),
    ((0, 0, 4, 4), (4, 0, 4, 4), 0.0),
])
def test_iou(a, b, want):
    assert iou(a, b) == pytest.approx(want)


def test_csv_round_trip(truth, tmp_path):
    rows = rows_from(truth, lambda t: (0.1 * t, -0.3))
    write_tracks(rows, tmp_path / "t.csv")
    assert read_tracks(tmp_path / "t.csv") == rows


def test_mismatched_tracks(truth):
    with pytest.raises(ValueError):
        evaluate(rows_from(truth)[:-1], truth)
    with pytest.raises(ValueError):
        read_tracks("frame,object_id,cx,cy\n0,1,x,2\n")
