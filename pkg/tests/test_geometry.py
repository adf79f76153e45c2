import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transversal.geometry import (EUCLIDEAN_NORM, MAX_NORM, GammaNorm,
                                  GeometryError, Norm, gamma_norm, lex_less,
                                  rng_for, sample_ball, sample_sphere)

vec = st.lists(st.floats(-10, 10), min_size=1, max_size=5).map(np.asarray)


def test_max_norm_basics():
    assert MAX_NORM(np.array([0.5, -1.0])) == 1.0
    assert MAX_NORM(np.zeros(3)) == 0.0
    assert EUCLIDEAN_NORM(np.array([3.0, 4.0])) == 5.0


def test_unknown_norm_kind():
    with pytest.raises(GeometryError):
        Norm("manhattan")


@given(a=vec, b=vec)
@settings(max_examples=200, deadline=None)
def test_triangle_inequality(a, b):
    if a.shape != b.shape:
        return
    for n in (MAX_NORM, EUCLIDEAN_NORM):
        assert n(a + b) <= n(a) + n(b) + 1e-12


@given(a=vec, c=st.floats(-4, 4))
@settings(max_examples=200, deadline=None)
def test_absolute_homogeneity(a, c):
    for n in (MAX_NORM, EUCLIDEAN_NORM):
        assert n(c * a) == pytest.approx(abs(c) * n(a), rel=1e-12, abs=1e-12)


def test_gamma_norm_values():
    assert gamma_norm([np.array([2.0, 0.0])], np.array([0.5, 0.5]), 0.5) == 1.0
    assert gamma_norm([np.array([1.0, 0.0])], np.array([3.0, 0.0]), 2.0) == 3.0


def test_gamma_norm_gamma_one_is_product_max():
    rng = rng_for(7)
    for _ in range(50):
        blocks = [rng.normal(size=3) for _ in range(2)]
        x = rng.normal(size=3)
        plain = max(MAX_NORM(b) for b in blocks + [x])
        assert gamma_norm(blocks, x, 1.0) == pytest.approx(plain)


def test_gamma_norm_monotone_in_gamma():
    rng = rng_for(8)
    for _ in range(100):
        blocks = [rng.normal(size=2) for _ in range(3)]
        x = rng.normal(size=2)
        g1, g2 = sorted(rng.uniform(0.05, 3.0, size=2))
        assert gamma_norm(blocks, x, g1) <= gamma_norm(blocks, x, g2) + 1e-15


def test_gamma_norm_no_blocks():
    x = np.array([1.0, -2.0])
    assert gamma_norm([], x, 0.3) == MAX_NORM(x)


def test_gamma_norm_rejects_nonpositive_gamma():
    with pytest.raises(GeometryError):
        GammaNorm(gamma=0.0, n=1)


def test_sampling_deterministic_and_in_ball():
    for kind in (MAX_NORM, EUCLIDEAN_NORM):
        a = [sample_ball(rng_for(3, i), 4, 2.0, kind) for i in range(20)]
        b = [sample_ball(rng_for(3, i), 4, 2.0, kind) for i in range(20)]
        assert all(np.array_equal(x, y) for x, y in zip(a, b))
        assert all(kind(x) <= 2.0 + 1e-12 for x in a)
        s = sample_sphere(rng_for(5), 3, 1.5, kind)
        assert kind(s) == pytest.approx(1.5, rel=1e-12)


def test_lex_less():
    assert lex_less(np.array([1.0, 5.0]), np.array([2.0, 0.0]))
    assert lex_less(np.array([1.0, 0.0]), np.array([1.0, 1.0]))
    assert not lex_less(np.array([1.0, 1.0]), np.array([1.0, 1.0]))
