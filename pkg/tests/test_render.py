"""Figure rendering: projections, outlines, embedded metadata."""

import pytest

from nilnet.dyadic import DyadicTile
from nilnet.group import abelian_spec, filiform4_spec, synthesize_law
from nilnet.render import (
    RenderDimension,
    convex_hull,
    projected_hull,
    projected_outline,
    render_dyadic_tile,
    render_points,
    render_series,
)


def test_convex_hull_square():
    pts = [(0, 0), (1, 0), (1, 1), (0, 1), (0.5, 0.5), (0.5, 0.0)]
    hull = convex_hull(pts)
    assert len(hull) == 4
    assert set(hull) == {(0, 0), (1, 0), (1, 1), (0, 1)}


def test_convex_hull_collinear():
    assert len(convex_hull([(0, 0), (1, 1), (2, 2), (3, 3)])) == 2


def test_outline_shear_vs_abelian(heis_law, abel3_law):
    # The sheared union outline has many vertices; the abelian one is a box.
    assert len(projected_outline(heis_law, DyadicTile((0, 0, 0), 1),
                                 axes=(0, 2))) == 11
    assert len(projected_outline(heis_law, DyadicTile((0, 0, 0), 2),
                                 axes=(0, 2))) == 21
    assert len(projected_outline(abel3_law, DyadicTile((0, 0, 0), 2),
                                 axes=(0, 2))) == 4


def test_projected_hull_vertex_count(heis_law):
    hull = projected_hull(heis_law, DyadicTile((0, 0, 0), 2), axes=(0, 2))
    assert len(hull) == 7


def test_render_counts_and_metadata(tmp_path, heis_law):
    counts = {}
    for level in (0, 1, 2):
        path = tmp_path / f"level{level}.svg"
        counts[level] = render_dyadic_tile(heis_law, level, str(path))
        assert f"point_count={counts[level]}" in path.read_text()
    assert counts == {0: 1, 1: 8, 2: 64}


def test_render_carnot(tmp_path, heis_int):
    path = tmp_path / "carnot.svg"
    count = render_dyadic_tile(heis_int, 1, str(path), carnot=True)
    assert count == 16
    assert "point_count=16" in path.read_text()


def test_render_abelian_plane(tmp_path, abel2_law):
    path = tmp_path / "plane.svg"
    assert render_dyadic_tile(abel2_law, 1, str(path)) == 4


def test_render_dimension_guard(tmp_path, fili_law):
    with pytest.raises(RenderDimension):
        render_dyadic_tile(fili_law, 1, str(tmp_path / "x.svg"))
    # explicit axes make it legal
    count = render_dyadic_tile(fili_law, 1, str(tmp_path / "f.svg"),
                               axes=(0, 3))
    assert count == 16


def test_render_points_and_series(tmp_path):
    p = tmp_path / "pts.svg"
    n = render_points([(0, 0), (1, 2), (3, 1)], str(p), highlight=[(1, 2)])
    assert n == 3
    assert "point_count=3" in p.read_text()
    s = tmp_path / "series.svg"
    render_series([0, 1, 2], {"D": [1, 2, 4]}, str(s), xlabel="k")
    assert s.exists()
