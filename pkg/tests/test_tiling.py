"""Lambda-net tilings, faces, perimeter, separation."""

import random
from fractions import Fraction

import pytest

from nilnet.group import DimensionMismatch
from nilnet.tiling import (
    Box,
    EmptyWindow,
    Lambda,
    Region,
    TooFewPoints,
    Window,
    combinatorial_perimeter,
    face_neighbors,
    group_distance,
    lambda_net,
    locate_tile,
    separation_constants,
    tile_residual,
)


def rand_pt(n, rng, span=8):
    return tuple(
        Fraction(rng.randint(-span * 6, span * 6), rng.randint(1, 6))
        for _ in range(n)
    )


# ---------------------------------------------------------------------------
# Boxes and windows
# ---------------------------------------------------------------------------


def test_box_contains_half_open():
    b = Box(((0, 2), (0, 2)), closed_hi=False)
    assert b.contains((0, 0))
    assert b.contains((Fraction(3, 2), 1))
    assert not b.contains((2, 0))
    closed = Box(((0, 2), (0, 2)))
    assert closed.contains((2, 2))


def test_box_volume_and_range():
    b = Box(((-1, 1), (0, Fraction(3, 2))))
    assert b.volume() == 3
    assert b.multiplier_range(0, Fraction(1, 2)) == (-2, 2)
    assert Box(((0, 2),), closed_hi=False).multiplier_range(0, 1) == (0, 1)


def test_empty_box_raises():
    with pytest.raises(EmptyWindow):
        Box(((1, 0),))
    with pytest.raises(EmptyWindow):
        Box(((0, 0),), closed_hi=False)
    with pytest.raises(EmptyWindow):
        Window(())


def test_window_union():
    w = Window((Box(((0, 1),)), Box(((5, 6),))))
    assert w.contains((Fraction(1, 2),))
    assert w.contains((6,))
    assert not w.contains((3,))


# ---------------------------------------------------------------------------
# Lambda nets
# ---------------------------------------------------------------------------


def test_lambda_net_counts(heis_int):
    box = Box(((0, 3), (0, 3), (0, 3)))
    assert len(lambda_net(heis_int, Lambda((1, 1, 1)), box)) == 64
    pts = lambda_net(heis_int, Lambda((1, 2, 3)), box)
    assert len(pts) == 16
    assert all(p[1] % 2 == 0 and p[2] % 3 == 0 for p in pts)
    assert pts == sorted(pts)


def test_lambda_net_dimension_mismatch(heis_int):
    with pytest.raises(DimensionMismatch):
        lambda_net(heis_int, Lambda((1, 1)), Box(((0, 1),) * 3))


# ---------------------------------------------------------------------------
# locate_tile: exact tiling
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("lam_entries", [(1, 1, 1), (1, 2, 3)])
def test_residual_in_box(heis_law, lam_entries):
    lam = Lambda(lam_entries)
    box = lam.box()
    rng = random.Random(17)
    for _ in range(400):
        x = rand_pt(3, rng)
        g, r = tile_residual(heis_law, x, lam)
        assert box.contains(r)
        assert all((c / e).denominator == 1 for c, e in zip(g, lam.entries))
        assert heis_law.multiply(g, r) == x


def test_residual_in_box_filiform(fili_law):
    lam = Lambda((1, 1, 1, 1))
    box = lam.box()
    rng = random.Random(18)
    for _ in range(200):
        x = rand_pt(4, rng)
        g, r = tile_residual(fili_law, x, lam)
        assert box.contains(r)
        assert fili_law.multiply(g, r) == x


def test_net_points_locate_to_themselves(heis_int):
    for p in lambda_net(heis_int, Lambda((1, 1, 1)), Box(((-2, 2),) * 3)):
        assert locate_tile(heis_int, p, Lambda((1, 1, 1))) == p


@pytest.mark.parametrize("lam_entries", [(1, 1, 1), (2, 2, 4)])
def test_equivariance_under_net_translations(heis_int, lam_entries):
    # G(Lambda) is a subgroup of the integral law for these entries, so
    # tiles are permuted by left translation.
    lam = Lambda(lam_entries)
    rng = random.Random(19)
    for _ in range(200):
        g = tuple(
            e * rng.randint(-4, 4) for e in lam.entries
        )
        x = rand_pt(3, rng)
        assert locate_tile(
            heis_int, heis_int.multiply(g, x), lam
        ) == heis_int.multiply(g, locate_tile(heis_int, x, lam))


def test_tiles_partition_grid(heis_int):
    # Every quarter-integer point lands in exactly one tile: residual
    # uniqueness plus recomposition.
    lam = Lambda((1, 1, 1))
    for x in Box(((0, 1),) * 3).grid(Fraction(1, 2)):
        g, r = tile_residual(heis_int, x, lam)
        assert lam.box().contains(r)
        assert heis_int.multiply(g, r) == tuple(map(Fraction, x))


# ---------------------------------------------------------------------------
# Face neighbors and perimeter
# ---------------------------------------------------------------------------


def test_abelian_faces(abel3_law):
    fw = face_neighbors(abel3_law)
    assert len(fw.weights) == 6
    assert fw.total() == 6
    assert all(w == 1 for w in fw.weights.values())
    assert set(fw.neighbors) == {
        tuple(Fraction(s if i == j else 0) for j in range(3))
        for i in range(3)
        for s in (1, -1)
    }


def test_heisenberg_faces_first_kind(heis_law):
    fw = face_neighbors(heis_law)
    assert len(fw.weights) == 14
    assert fw.total() == 6


def test_heisenberg_faces_integral(heis_int):
    fw = face_neighbors(heis_int)
    assert len(fw.weights) == 10
    assert fw.total() == 6
    # closed under inversion with equal weights
    for g, w in fw.weights.items():
        assert fw.weight(heis_int.invert(g)) == w


def test_perimeter_abelian_squares(abel2_law):
    fw = face_neighbors(abel2_law)
    for s in (1, 2, 5):
        region = Region.from_box(abel2_law, Box(((0, s - 1), (0, s - 1))))
        assert combinatorial_perimeter(region, fw) == 4 * s


def test_perimeter_heisenberg_values(heis_int):
    fw = face_neighbors(heis_int)
    single = Region(frozenset([(0, 0, 0)]), heis_int)
    assert combinatorial_perimeter(single, fw) == 6
    cube2 = Region.from_box(heis_int, Box(((0, 1),) * 3))
    assert combinatorial_perimeter(cube2, fw) == Fraction(86, 3)


def test_perimeter_translation_invariant(heis_int):
    fw = face_neighbors(heis_int)
    base = Region.from_box(heis_int, Box(((0, 2),) * 3))
    g0 = (5, -3, 7)
    moved = Region(
        frozenset(heis_int.multiply(g0, t) for t in base.tiles), heis_int
    )
    assert combinatorial_perimeter(moved, fw) == combinatorial_perimeter(
        base, fw
    )


# ---------------------------------------------------------------------------
# Separation constants
# ---------------------------------------------------------------------------


def test_group_distance_symmetric(heis_law):
    # first-kind coordinates: inversion is negation, so d(g,h) = d(h,g)
    rng = random.Random(23)
    for _ in range(50):
        g, h = rand_pt(3, rng), rand_pt(3, rng)
        assert group_distance(heis_law, g, h) == pytest.approx(
            group_distance(heis_law, h, g)
        )


def test_separation_constants_lattice(heis_int):
    window = Box(((0, 3),) * 3)
    pts = lambda_net(heis_int, Lambda((1, 1, 1)), window)
    c, big = separation_constants(
        heis_int, pts, window, grid_pitch=Fraction(1, 2)
    )
    assert c == pytest.approx(0.5)
    assert big == pytest.approx(2 ** 0.5 / 2, abs=1e-9)


def test_separation_needs_two_points(heis_int):
    with pytest.raises(TooFewPoints):
        separation_constants(heis_int, [(0, 0, 0)], Box(((0, 1),) * 3))
