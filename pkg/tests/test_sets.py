import math

import numpy as np
import pytest

from transversal.geometry import EUCLIDEAN_NORM, MAX_NORM, rng_for
from transversal.sets import (AffineSubspace, Ball, CurveSet, Cylinder,
                              DimensionMismatch, EmptySetError, FinitePointSet,
                              HalfSpace, PolyCurve, ProductSet, SamplerExhausted,
                              Scene, SetError, Translate, curve_graph_poly,
                              dist_intersection, epigraph_poly, hypograph_poly,
                              power_cusp, recognize_exact_intersection,
                              singleton)

PARABOLA_EPI = epigraph_poly([0.0, 0.0, 1.0])
PARABOLA_HYPO = hypograph_poly([0.0, 0.0, 1.0])
PARABOLA_EQ = curve_graph_poly([0.0, 0.0, 1.0])
X_AXIS = AffineSubspace((0.0, 0.0), ((1.0, 0.0),))
Y_AXIS = AffineSubspace((0.0, 0.0), ((0.0, 1.0),))
UPPER = HalfSpace((0.0, 1.0), 0.0)

ALL_SHAPES = [
    UPPER,
    HalfSpace((1.0, -2.0), 0.5),
    X_AXIS,
    AffineSubspace((1.0, 2.0), ((1.0, 1.0),)),
    Ball((0.5, -0.5), 1.0, "euclidean"),
    Ball((0.0, 0.0), 0.75, "max"),
    PARABOLA_EPI,
    PARABOLA_HYPO,
    PARABOLA_EQ,
    power_cusp(1.0, 2.0, "plus"),
    power_cusp(2.0, 0.5, "minus"),
    Translate(PARABOLA_EQ, (0.3, -0.2)),
    FinitePointSet(((0.0, 0.0), (1.0, 2.0), (-1.0, 0.5))),
    Cylinder(2, (1,), HalfSpace((1.0,), 0.0)),
]


# ---------------------------------------------------------------- distances

def test_halfspace_distance_and_projection():
    x = np.array([3.0, -2.0])
    assert UPPER.dist(x) == 2.0
    assert np.allclose(UPPER.project(x), [3.0, 0.0])


def test_curve_graph_distance_matches_closed_form():
    # distance from (0, eps) to the parabola solves eps - t = t**2
    for eps in (0.04289321, 0.25, 1e-4):
        t = math.sqrt(eps + 0.25) - 0.5
        assert PARABOLA_EQ.dist(np.array([0.0, eps])) == pytest.approx(t, rel=1e-9)


def test_empty_set_distance_is_infinite():
    empty = FinitePointSet((), dimension=2)
    assert empty.dist(np.array([1.0, 1.0])) == math.inf
    with pytest.raises(EmptySetError):
        empty.project(np.array([1.0, 1.0]))


def test_ball_projection_euclidean():
    b = Ball((0.0, 0.0), 1.0, "euclidean")
    assert np.allclose(b.project(np.array([2.0, 0.0]), EUCLIDEAN_NORM), [1.0, 0.0])


def test_epigraph_projection_matches_grid_oracle():
    # dense 1-d grid oracle for min over s of max(|t-s|, (s^2)+) at t = 0.1
    t = 0.1
    grid = np.linspace(-0.5, 0.5, 2_000_001)
    vals = np.maximum(np.abs(t - grid), np.maximum(grid ** 2, 0.0))
    oracle = float(vals.min())
    got = PARABOLA_EPI.dist(np.array([t, 0.0]))
    assert got == pytest.approx(oracle, abs=1e-8)
    # and the exact crossing value t - s = s**2
    s = (-1.0 + math.sqrt(1.0 + 4.0 * t)) / 2.0
    assert got == pytest.approx(t - s, abs=1e-12)


def test_dimension_mismatch_raises():
    with pytest.raises(DimensionMismatch):
        UPPER.dist(np.array([1.0, 2.0, 3.0]))


@pytest.mark.parametrize("shape", ALL_SHAPES, ids=lambda s: type(s).__name__ + str(id(s) % 97))
def test_projection_lands_in_set_and_witnesses_distance(shape):
    rng = rng_for(11)
    for _ in range(40):
        x = rng.uniform(-2.0, 2.0, size=shape.dim)
        p = shape.project(x, MAX_NORM)
        assert shape.contains(p, MAX_NORM, tol=1e-8)
        d = shape.dist(x, MAX_NORM)
        assert abs(d - MAX_NORM.dist(x, p)) <= 1e-8
        assert (d <= 1e-9) == shape.contains(x, MAX_NORM, tol=1e-9) or d < 1e-7


@pytest.mark.parametrize("shape", ALL_SHAPES, ids=lambda s: type(s).__name__ + str(id(s) % 97))
def test_distance_is_one_lipschitz(shape):
    rng = rng_for(13)
    for _ in range(40):
        x = rng.uniform(-2.0, 2.0, size=shape.dim)
        y = x + rng.uniform(-0.5, 0.5, size=shape.dim)
        dx, dy = shape.dist(x, MAX_NORM), shape.dist(y, MAX_NORM)
        assert abs(dx - dy) <= MAX_NORM.dist(x, y) + 1e-8


def test_translate_identity():
    rng = rng_for(17)
    for shape in (PARABOLA_EQ, UPPER, X_AXIS):
        shift = np.array([0.4, -0.7])
        moved = shape.translated(shift)
        for _ in range(25):
            x = rng.uniform(-2, 2, size=2)
            assert moved.dist(x) == pytest.approx(shape.dist(x + shift), abs=1e-10)


def test_product_and_cylinder():
    prod = ProductSet((UPPER, X_AXIS))
    x = np.array([0.0, -1.0, 3.0, 2.0])
    assert prod.dist(x) == pytest.approx(max(1.0, 2.0))
    cyl = Cylinder(3, (2,), HalfSpace((1.0,), 0.0))
    y = np.array([5.0, -7.0, -2.0])
    assert cyl.dist(y) == pytest.approx(2.0)
    assert np.allclose(cyl.project(y), [5.0, -7.0, 0.0])


# ---------------------------------------------------------------- sampling

@pytest.mark.parametrize("shape", ALL_SHAPES[:8], ids=lambda s: type(s).__name__ + str(id(s) % 97))
def test_sample_near_contract(shape):
    center = shape.project(np.zeros(shape.dim), MAX_NORM)
    pts = shape.sample_near(center, 1.0, 16, seed=7)
    assert len(pts) == 16
    for p in pts:
        assert shape.contains(p, MAX_NORM, tol=1e-8)
        assert MAX_NORM.dist(p, center) <= 1.0 + 1e-9
    again = shape.sample_near(center, 1.0, 16, seed=7)
    assert np.array_equal(pts, again)


def test_sample_near_singleton_repeats():
    s = singleton([1.0, 2.0])
    pts = s.sample_near(np.array([1.0, 2.0]), 0.5, 5, seed=0)
    assert np.allclose(pts, [[1.0, 2.0]] * 5)


def test_sample_near_exhaustion_is_loud():
    s = singleton([10.0, 10.0])
    with pytest.raises(SamplerExhausted):
        s.sample_near(np.array([0.0, 0.0]), 0.5, 3, seed=0)


def test_curve_sampling_stays_on_curve():
    pts = PARABOLA_EQ.sample_near(np.zeros(2), 0.5, 20, seed=3)
    for s, y in pts:
        assert abs(y - s * s) <= 1e-9
        assert max(abs(s), abs(y)) <= 0.5 + 1e-9


# ------------------------------------------------------- intersection bounds

def test_axes_intersection_exact():
    b = dist_intersection([X_AXIS, Y_AXIS], np.array([3.0, 2.0]))
    assert b.exact
    assert b.lower == b.upper == pytest.approx(3.0)
    assert np.allclose(b.point, [0.0, 0.0])


def test_single_set_is_exact():
    b = dist_intersection([UPPER], np.array([3.0, -2.0]))
    assert b.exact and b.lower == b.upper == pytest.approx(2.0)


def test_example_31_shifted_pair_upper_bound():
    eps = 0.5
    s1 = UPPER.translated(np.array([0.0, -eps]))
    s2 = PARABOLA_HYPO.translated(np.array([0.0, eps]))
    b = dist_intersection([s1, s2], np.zeros(2))
    assert b.lower <= b.upper
    assert b.upper <= math.sqrt(2 * eps) + 1e-9
    assert s1.contains(np.array([1.0, 0.5]), tol=1e-12)
    assert s2.contains(np.array([1.0, 0.5]), tol=1e-12)


def test_disjoint_singletons_are_infinitely_far():
    s1 = singleton([0.0, 0.0]).translated([0.1, 0.0])
    s2 = singleton([0.0, 0.0]).translated([-0.1, 0.0])
    b = dist_intersection([s1, s2], np.zeros(2))
    assert b.exact and b.lower == math.inf and b.upper == math.inf


def test_lower_never_exceeds_upper_random():
    rng = rng_for(23)
    shapes = [UPPER, PARABOLA_HYPO, PARABOLA_EPI, X_AXIS, PARABOLA_EQ]
    for _ in range(60):
        i, j = rng.integers(0, len(shapes), 2)
        s1 = shapes[i].translated(rng.uniform(-0.5, 0.5, 2))
        s2 = shapes[j].translated(rng.uniform(-0.5, 0.5, 2))
        x = rng.uniform(-1, 1, 2)
        b = dist_intersection([s1, s2], x)
        assert b.lower <= b.upper + 1e-12
        if b.point is not None:
            assert s1.contains(b.point, tol=1e-7) and s2.contains(b.point, tol=1e-7)
            assert MAX_NORM.dist(b.point, x) <= b.upper + 1e-9


def test_declared_oracle_collapses_bounds():
    origin = singleton([0.0, 0.0])
    b = dist_intersection([PARABOLA_EQ, curve_graph_poly([0.0, 0.0, -1.0])],
                          np.array([0.3, 0.1]), declared=origin)
    assert b.exact and abs(b.upper - b.lower) <= 1e-9
    assert b.upper == pytest.approx(0.3)


def test_recognize_curve_pair():
    rec = recognize_exact_intersection([PARABOLA_EQ, curve_graph_poly([0.0, 0.0, -1.0])])
    assert isinstance(rec, FinitePointSet)
    assert np.allclose(rec.points, [(0.0, 0.0)])


def test_recognize_curve_line():
    horizontal = AffineSubspace((0.0, 1.0), ((1.0, 0.0),))
    rec = recognize_exact_intersection([PARABOLA_EQ, horizontal])
    assert isinstance(rec, FinitePointSet)
    assert sorted(p[0] for p in rec.points) == pytest.approx([-1.0, 1.0])


def test_scene_validation():
    scene = Scene(dim=2, sets=(X_AXIS, Y_AXIS), basepoint=(0.0, 0.0),
                  intersection=singleton([0.0, 0.0]))
    scene.validate()
    bad = Scene(dim=2, sets=(X_AXIS,), basepoint=(0.0, 1.0))
    with pytest.raises(SetError):
        bad.validate()
