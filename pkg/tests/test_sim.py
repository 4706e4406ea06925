import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import rect_overlap
from sptrack.sim.pgm import PGMError, from_bytes, read_pgm, to_bytes, write_pgm
from sptrack.sim.render import render
from sptrack.sim.scenario import (ObjectSpec, Scenario, ScenarioError, crossing_scenario,
                                  format_scenario, load_scenario, parse_scenario)

TEXT = """# two boxes
size = 64x48
frames = 20
noise = 0.05
seed = 4
object: template=random extent=10x8 z=0 waypoints=(10,20)@0;(50,20)@19
object: template=random extent=6x6 z=1 waypoints=(40,30)@0
"""


def test_parse_and_format_round_trip():
    sc = parse_scenario(TEXT)
    assert (sc.width, sc.height, sc.frames, sc.seed) == (64, 48, 20, 4)
    again = parse_scenario(format_scenario(sc))
    assert format_scenario(again) == format_scenario(sc)
    assert np.array_equal(again.objects[0].template, sc.objects[0].template)


@pytest.mark.parametrize("text, line", [
    ("size = 64x48\nframes = x\n", 2),
    ("size = 64x48\nframes = 5\nwidth = 3\n", 3),
    ("size = 64x48\nframes = 5\nobject: extent=10x8 z=0\n", 3),
    ("size = 64\n", 1),
])
def test_scenario_errors_carry_lines(text, line):
    with pytest.raises(ScenarioError) as err:
        parse_scenario(text)
    assert err.value.line == line


def test_scenario_semantic_errors():
    with pytest.raises(ScenarioError):
        parse_scenario("frames = 3\n")
    with pytest.raises(ScenarioError):
        Scenario(20, 20, 3, [ObjectSpec((4, 4), [(10, 10, 0)], z=0),
                             ObjectSpec((4, 4), [(5, 5, 0)], z=0)])
    with pytest.raises(ScenarioError):
        Scenario(20, 20, 3, [ObjectSpec((4, 4), [(1, 10, 0)])])


def test_template_file(tmp_path):
    tmpl = np.arange(12, dtype=float).reshape(3, 4) / 11
    write_pgm(tmp_path / "t.pgm", tmpl)
    (tmp_path / "s.txt").write_text("size = 16x16\nframes = 2\n"
                                    "object: template=t.pgm extent=4x3 z=0 waypoints=(8,8)@0\n")
    sc = load_scenario(tmp_path / "s.txt")
    frame, _ = render(sc, 0)
    assert np.allclose(frame.pixels[7:10, 6:10], tmpl, atol=0.5 / 255)


@settings(max_examples=25)
@given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 10**6))
def test_pgm_round_trip(w, h, seed):
    img = np.random.default_rng(seed).integers(0, 256, (h, w)) / 255.0
    assert np.array_equal(from_bytes(to_bytes(img)), img)


def test_pgm_header_comments_and_errors(tmp_path):
    data = b"P5\n# made by hand\n2 1\n255\n\x00\xff"
    assert from_bytes(data).tolist() == [[0.0, 1.0]]
    for bad in (b"P2\n2 1\n255\n\x00\xff", b"P5\n2 1\n255\n\x00", b"P5\n2"):
        with pytest.raises(PGMError):
            from_bytes(bad)
    write_pgm(tmp_path / "a.pgm", np.zeros((2, 3)))
    assert read_pgm(tmp_path / "a.pgm").shape == (2, 3)


def test_empty_scene_is_background():
    sc = Scenario(8, 6, 2, [], background=0.25)
    frame, gt = render(sc, 1)
    assert np.all(frame.pixels == 0.25) and gt.centers == {}


def test_noise_is_seeded():
    sc = Scenario(8, 6, 2, [], noise=0.1, seed=5)
    assert np.array_equal(render(sc, 1)[0].pixels, render(sc, 1)[0].pixels)
    assert not np.array_equal(render(sc, 0)[0].pixels, render(sc, 1)[0].pixels)


def test_rear_object_hidden_by_identical_box():
    sc = Scenario(20, 20, 1, [ObjectSpec((6, 6), [(10, 10, 0)], z=1),
                              ObjectSpec((6, 6), [(10, 10, 0)], z=0)])
    _, gt = render(sc, 0)
    assert not gt.visible[2].any() and gt.visible[1].sum() == 36
    assert gt.occluder[2] == 1 and gt.occluder[1] is None


@pytest.mark.parametrize("t", [50, 59, 60, 65])
def test_visible_area_matches_intersection(t):
    sc = crossing_scenario(seed=1)
    _, gt = render(sc, t)
    hidden = rect_overlap(gt.box(1), gt.box(2))
    assert gt.visible[2].sum() == 144
    assert gt.visible[1].sum() == 144 - hidden


def test_render_range():
    with pytest.raises(IndexError):
        render(crossing_scenario(), 120)
