import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transversal.gauges import (CompositeGauge, GaugeError, HolderTypeGauge,
                                NotDifferentiableError, PowerGauge, TableGauge,
                                expanded, finite_difference_derivative,
                                holder_approximation, linear, scaled_root,
                                shrunk)


def test_eval_power():
    g = PowerGauge(alpha=1.0, q=2.0)
    assert g(3.0) == 9.0
    assert g(0.0) == 0.0


def test_eval_holder_type():
    g = HolderTypeGauge(alpha=1.0, beta=1.0, q=2.0)
    assert g(1.0) == 2.0


def test_eval_scaled_root():
    g = scaled_root(math.sqrt(2.0))
    assert g(2.0) == pytest.approx(2.0, abs=1e-14)


def test_eval_rejects_negative():
    with pytest.raises(GaugeError):
        PowerGauge(1.0, 2.0)(-0.1)


def test_invert_power():
    g = PowerGauge(alpha=2.0, q=2.0)
    assert g.invert(8.0) == pytest.approx(4.0, rel=1e-14)
    assert PowerGauge(1.0, 1.0).invert(0.0) == 0.0


def test_invert_holder_type():
    g = HolderTypeGauge(alpha=1.0, beta=1.0, q=2.0)
    assert g.invert(2.0) == pytest.approx(1.0, abs=1e-12)


def test_derivative_values():
    assert PowerGauge(1.0, 2.0).derivative(3.0) == pytest.approx(6.0)
    assert PowerGauge(1.0, 1.0).derivative(5.0) == pytest.approx(1.0)
    assert HolderTypeGauge(2.0, 1.0, 2.0).derivative(1.0) == pytest.approx(1.5)


def test_derivative_pole_and_unsupported():
    with pytest.raises(GaugeError):
        PowerGauge(1.0, 0.5).derivative(0.0)
    table = TableGauge.from_pairs([(0, 0), (1, 2), (3, 5)])
    with pytest.raises(NotDifferentiableError):
        table.derivative(0.5)


@pytest.mark.parametrize("g", [
    PowerGauge(1.0, 2.0),
    PowerGauge(0.5, 0.5),
    HolderTypeGauge(1.0, 1.0, 2.0),
    HolderTypeGauge(2.0, 0.25, 0.5),
    linear(0.3),
])
def test_derivative_matches_finite_difference(g):
    for t in np.geomspace(1e-3, 1e3, 13):
        fd = finite_difference_derivative(g, float(t))
        assert g.derivative(float(t)) == pytest.approx(fd, rel=1e-6)


@pytest.mark.parametrize("g", [
    PowerGauge(1.0, 2.0),
    PowerGauge(3.0, 0.5),
    HolderTypeGauge(1.0, 1.0, 2.0),
    HolderTypeGauge(0.7, 2.0, 0.5),
    TableGauge.from_pairs([(0, 0), (0.5, 0.25), (1, 1), (10, 20)]),
    expanded(PowerGauge(1.0, 0.5)),
    shrunk(PowerGauge(2.0, 2.0)),
])
def test_invert_round_trip(g):
    for t in np.geomspace(1e-9, 1e6, 61):
        s = g(float(t))
        assert g.invert(s) == pytest.approx(float(t), rel=1e-12)


def test_table_is_monotone_interpolant():
    g = TableGauge.from_pairs([(0, 0), (1, 2), (2, 3)])
    assert g(0.5) == pytest.approx(1.0)
    assert g(1.5) == pytest.approx(2.5)
    assert g(4.0) == pytest.approx(5.0)  # extrapolated with the last slope
    assert g.invert(2.5) == pytest.approx(1.5)


@given(alpha=st.floats(0.1, 10), q=st.floats(0.2, 3), scale=st.floats(1.0, 4.0),
       s=st.floats(1e-6, 1e3))
@settings(max_examples=200, deadline=None)
def test_monotone_dominance_of_inverses(alpha, q, scale, s):
    # pointwise larger gauges have pointwise smaller inverses
    phi = PowerGauge(alpha, q)
    phi_hat = PowerGauge(alpha / scale, q)  # phi_hat = scale * phi >= phi
    assert phi_hat.invert(s) <= phi.invert(s) * (1 + 1e-12)


def test_holder_approximation_q_equal_one():
    approx = holder_approximation(HolderTypeGauge(1.0, 1.0, 1.0))
    assert approx.q_prime == 1.0
    assert approx.alpha_prime == pytest.approx(0.5)
    assert approx.exact
    assert approx.validity_radius == math.inf


def test_holder_approximation_q_above_one():
    approx = holder_approximation(HolderTypeGauge(2.0, 4.0, 3.0))
    assert approx.q_prime == 1.0
    assert approx.alpha_prime_sup == pytest.approx(0.5)


def test_holder_approximation_q_below_one_radius():
    # candidate modulus 0.9: radius solves 0.9 (1 + sqrt(t)) = 1
    approx = holder_approximation(HolderTypeGauge(1.0, 1.0, 0.5), alpha_prime=0.9)
    assert approx.q_prime == 0.5
    assert approx.alpha_prime_sup == pytest.approx(1.0)
    assert approx.validity_radius == pytest.approx((1.0 / 9.0) ** 2, rel=1e-12)


@pytest.mark.parametrize("g,ap", [
    (HolderTypeGauge(1.0, 1.0, 0.5), 0.9),
    (HolderTypeGauge(1.0, 1.0, 0.5), None),
    (HolderTypeGauge(2.0, 4.0, 3.0), 0.3),
    (HolderTypeGauge(1.0, 1.0, 1.0), None),
    (HolderTypeGauge(0.5, 2.0, 0.25), None),
])
def test_holder_approximation_pointwise_scan(g, ap):
    approx = holder_approximation(g, alpha_prime=ap)
    hi = approx.validity_radius if math.isfinite(approx.validity_radius) else 1e3
    target = PowerGauge(approx.alpha_prime, approx.q_prime)
    slack = 1e-12 if approx.exact else 0.0
    for t in np.geomspace(hi * 1e-9, hi * (1 - 1e-9), 1000):
        assert g(float(t)) <= target(float(t)) * (1 + 1e-12) + slack


def test_composite_round_trip_identity():
    phi = PowerGauge(1.0, 1.0)
    psi1 = expanded(phi)      # t -> phi(2t) + t
    psi2 = shrunk(psi1)       # t -> phi(t) + t/2
    for t in np.geomspace(1e-6, 10, 25):
        assert psi2(float(t)) == pytest.approx(phi(float(t)) + 0.5 * float(t), rel=1e-12)


def test_composite_derivative_and_invert():
    phi = PowerGauge(1.0, 2.0)
    psi = expanded(phi)  # (2t)^2 + t
    assert psi(1.0) == pytest.approx(5.0)
    assert psi.derivative(1.0) == pytest.approx(9.0)
    assert psi.invert(5.0) == pytest.approx(1.0, rel=1e-12)


def test_composite_without_derivative_raises():
    table = TableGauge.from_pairs([(0, 0), (1, 1), (2, 3)])
    psi = expanded(table)
    assert isinstance(psi, CompositeGauge)
    with pytest.raises(NotDifferentiableError):
        psi.derivative(1.0)
