"""Cut-and-project quasi-crystal generation and the abelian reduction."""

import random
from fractions import Fraction

import pytest

from nilnet.poly import Polynomial
from nilnet.quasicrystal import (
    Alpha,
    NonInvertibleAlpha,
    Parallelotope,
    QCError,
    QCSpec,
    TooFewWindows,
    WindowUnbounded,
    abelian_coordinates,
    box_meets_integers,
    planar_quasicrystal,
    qc_density,
    qc_generate,
    solve_linear,
    window_condition,
)
from nilnet.tiling import Box

GOLDEN = Fraction(6180339887, 10 ** 10)
HALF_OPEN = Box(((0, Fraction(1, 2)),), closed_hi=False)


def test_abelian_coordinates(heis_int, abel3_law, fili_law):
    assert abelian_coordinates(heis_int) == [0, 1]
    assert abelian_coordinates(abel3_law) == [0, 1, 2]
    assert abelian_coordinates(fili_law) == [0, 1]


def test_solve_linear():
    x = solve_linear([[2, 1], [1, 3]], [5, 10])
    assert x == [Fraction(1), Fraction(3)]
    with pytest.raises(QCError):
        solve_linear([[1, 2], [2, 4]], [1, 1])


def test_box_meets_integers_exact():
    b = Box(((0, Fraction(1, 2)),))
    assert box_meets_integers(b, (Fraction(6, 10),))
    assert not box_meets_integers(b, (Fraction(3, 10),))
    # closed vs half-open at the exact boundary
    assert box_meets_integers(b, (Fraction(1, 2),))
    b_open = Box(((0, Fraction(1, 2)),), closed_hi=False)
    assert not box_meets_integers(b_open, (Fraction(1, 2),))
    assert box_meets_integers(b_open, (-1,))


def test_parallelotope_meets_integers():
    small = Parallelotope(
        (Fraction(1, 8), Fraction(1, 8)),
        ((Fraction(1, 4), 0), (0, Fraction(1, 4))),
    )
    assert not small.meets_integers((0, 0))
    assert small.meets_integers((Fraction(7, 8), Fraction(7, 8)))
    assert window_condition(small, (Fraction(7, 8), Fraction(7, 8)))
    sheared = Parallelotope((0, 0), ((1, -1), (1, 1)))
    assert sheared.meets_integers((Fraction(-1, 2), Fraction(-1, 2)))


def test_alpha_identity_roundtrip(heis_int):
    alpha = Alpha.identity(3)
    rng = random.Random(3)
    for _ in range(30):
        g = tuple(Fraction(rng.randint(-20, 20), rng.randint(1, 4)) for _ in range(3))
        assert alpha.apply(g) == g
        assert alpha.invert_point(g) == g
    alpha.check_homomorphism(heis_int, random.Random(4))


def test_alpha_scaling_homomorphism(heis_int):
    x1, x2, x3 = (Polynomial.variable(f"x{i}") for i in (1, 2, 3))
    alpha = Alpha((2 * x1, 2 * x2, 4 * x3))
    alpha.check_homomorphism(heis_int, random.Random(5))
    g = (Fraction(3, 2), Fraction(-1, 2), Fraction(5, 4))
    assert alpha.invert_point(alpha.apply(g)) == g


def test_alpha_failures():
    x1 = Polynomial.variable("x1")
    x3 = Polynomial.variable("x3")
    degenerate = Alpha((x1, x1))
    with pytest.raises(NonInvertibleAlpha):
        degenerate.invert_point((1, 1))
    lowering = Alpha((x3, x3))
    with pytest.raises(QCError):
        lowering.invert_point((1, 1))


# ---------------------------------------------------------------------------
# Generation
# ---------------------------------------------------------------------------


def planar_spec(abel2_law, theta=GOLDEN, s0=HALF_OPEN):
    return QCSpec(law=abel2_law, m=1, lmap=((theta, 0),), s0=s0)


def test_planar_golden_counts(abel2_law):
    spec = planar_spec(abel2_law)
    w16 = Box(((0, 16), (0, 16)), closed_hi=False)
    out = qc_generate(spec, w16)
    assert len(out.points) == 128
    assert out.recheck()
    w32 = Box(((0, 32), (0, 32)), closed_hi=False)
    assert len(qc_generate(spec, w32).points) == 544


def test_generate_matches_direct_construction(abel2_law):
    spec = planar_spec(abel2_law)
    w = Box(((0, 12), (0, 12)), closed_hi=False)
    direct = planar_quasicrystal(spec.lmap, spec.s0, w)
    assert qc_generate(spec, w).points == direct


def test_generate_requires_window(abel2_law):
    with pytest.raises(WindowUnbounded):
        qc_generate(planar_spec(abel2_law), None)


def test_basepoint_shifts_acceptance(abel2_law):
    spec = planar_spec(abel2_law)
    shifted = QCSpec(
        law=abel2_law, m=1, lmap=((GOLDEN, 0),), s0=HALF_OPEN,
        basepoint=(Fraction(1, 2),),
    )
    w = Box(((0, 16), (0, 16)), closed_hi=False)
    a = set(qc_generate(spec, w).points)
    b = set(qc_generate(shifted, w).points)
    assert a != b
    assert len(a) + len(b) == 16 * 16  # the two half-windows partition Z^2


def test_alpha_thins_the_point_set(heis_int):
    x1, x2, x3 = (Polynomial.variable(f"x{i}") for i in (1, 2, 3))
    alpha = Alpha((2 * x1, 2 * x2, 4 * x3))
    full = Box(((0, 1), (0, 1), (0, 1)), closed_hi=False)
    spec = QCSpec(
        law=heis_int, m=1, lmap=((0, 0),),
        s0=Box(((0, 1),), closed_hi=False), alpha=alpha,
    )
    pts = qc_generate(spec, full).points
    # alpha(g) integral means g in (1/2, 1/2, 1/4)-rational lattice
    assert len(pts) == 2 * 2 * 4
    assert all((4 * Fraction(p[2])).denominator == 1 for p in pts)
    assert qc_generate(spec, full).recheck()


# ---------------------------------------------------------------------------
# Heisenberg reduction: alpha = id equals the planar preimage
# ---------------------------------------------------------------------------


def test_heisenberg_reduction_exact(heis_int):
    spec = QCSpec(law=heis_int, m=1, lmap=((GOLDEN, 0),), s0=HALF_OPEN)
    w3 = Box(((0, 8), (0, 8), (0, 8)), closed_hi=False)
    pts = qc_generate(spec, w3).points
    w2 = Box(((0, 8), (0, 8)), closed_hi=False)
    planar = planar_quasicrystal(spec.lmap, spec.s0, w2)
    preimage = sorted(
        (x1, x2, Fraction(t))
        for (x1, x2) in planar
        for t in range(8)
    )
    assert pts == preimage


def test_density_trend_golden(abel2_law):
    spec = planar_spec(abel2_law)
    windows = [
        Box(((0, 2 ** k), (0, 2 ** k)), closed_hi=False) for k in (4, 5, 6)
    ]
    rep = qc_density(spec, windows)
    assert rep["trend"] == "converging"
    assert rep["windows"][-1]["covolume"] == pytest.approx(2.0, rel=0.05)


def test_density_needs_three_windows(abel2_law):
    with pytest.raises(TooFewWindows):
        qc_density(planar_spec(abel2_law), [Box(((0, 4), (0, 4)))])
