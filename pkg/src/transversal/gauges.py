"""Admissible rate functions (gauges) and their calculus.

A gauge is a continuous strictly increasing function on [0, inf) with
``phi(0) = 0`` and ``phi(t) -> inf``.  Gauges parameterize every certified
property in this package: the Hoelder family ``t -> t**q / alpha`` is the most
important realization, the Hoelder-type family ``t -> (t**q + beta*t) / alpha``
covers the error-bound literature, and monotone tables cover hand-drawn rates.

All gauges here are defined on the whole half line (not merely near 0), are
immutable, and support evaluation, inversion (analytic where possible,
bracketed bisection otherwise) and, for the differentiable subfamily,
derivatives.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np


class GaugeError(ValueError):
    pass


class NotDifferentiableError(GaugeError):
    """Raised when a derivative is requested from a non-C1 gauge."""


def _check_nonneg(t: float, what: str = "t") -> float:
    t = float(t)
    if not math.isfinite(t) or t < 0:
        raise GaugeError(f"{what} must be a finite nonnegative real, got {t}")
    return t


def _bisect_increasing(f: Callable[[float], float], target: float,
                       lo: float, hi: float) -> float:
    """Root of f(t) = target for increasing f, bisected to float convergence."""
    flo, fhi = f(lo), f(hi)
    if flo > target or fhi < target:
        raise GaugeError("bisection bracket does not enclose the target")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if f(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class Gauge:
    """Base class; subclasses implement __call__, invert and (optionally) derivative."""

    differentiable: bool = False

    def __call__(self, t: float) -> float:  # pragma: no cover - abstract
        raise NotImplementedError

    def invert(self, s: float) -> float:  # pragma: no cover - abstract
        raise NotImplementedError

    def derivative(self, t: float) -> float:
        raise NotDifferentiableError(f"{type(self).__name__} has no derivative")


@dataclass(frozen=True)
class PowerGauge(Gauge):
    """phi(t) = t**q / alpha.  The order-q Hoelder rate with modulus alpha."""

    alpha: float
    q: float
    differentiable: bool = field(default=True, init=False, repr=False)

    def __post_init__(self):
        if self.alpha <= 0 or self.q <= 0:
            raise GaugeError("alpha and q must be positive")

    def __call__(self, t: float) -> float:
        t = _check_nonneg(t)
        return t ** self.q / self.alpha

    def invert(self, s: float) -> float:
        s = _check_nonneg(s, "s")
        return (self.alpha * s) ** (1.0 / self.q)

    def derivative(self, t: float) -> float:
        t = float(t)
        if t < 0:
            raise GaugeError("derivative requires t >= 0")
        if t == 0.0:
            if self.q < 1:
                raise GaugeError("derivative pole at t=0 for q < 1")
            return 1.0 / self.alpha if self.q == 1 else 0.0
        return self.q * t ** (self.q - 1.0) / self.alpha


def linear(alpha: float) -> PowerGauge:
    """phi(t) = t / alpha."""
    return PowerGauge(alpha=alpha, q=1.0)


def scaled_root(c: float) -> PowerGauge:
    """phi(t) = c * sqrt(t)."""
    if c <= 0:
        raise GaugeError("c must be positive")
    return PowerGauge(alpha=1.0 / c, q=0.5)


def scaled_power(c: float, q: float) -> PowerGauge:
    """phi(t) = c * t**q."""
    if c <= 0:
        raise GaugeError("c must be positive")
    return PowerGauge(alpha=1.0 / c, q=q)


@dataclass(frozen=True)
class HolderTypeGauge(Gauge):
    """phi(t) = (t**q + beta*t) / alpha."""

    alpha: float
    beta: float
    q: float
    differentiable: bool = field(default=True, init=False, repr=False)

    def __post_init__(self):
        if self.alpha <= 0 or self.beta <= 0 or self.q <= 0:
            raise GaugeError("alpha, beta and q must be positive")

    def __call__(self, t: float) -> float:
        t = _check_nonneg(t)
        return (t ** self.q + self.beta * t) / self.alpha

    def invert(self, s: float) -> float:
        s = _check_nonneg(s, "s")
        if s == 0.0:
            return 0.0
        # Monotone on [0, inf); both summands give an upper bracket.
        hi = max(1.0, (self.alpha * s) ** (1.0 / self.q), self.alpha * s / self.beta)
        return _bisect_increasing(self.__call__, s, 0.0, hi)

    def derivative(self, t: float) -> float:
        t = float(t)
        if t < 0:
            raise GaugeError("derivative requires t >= 0")
        if t == 0.0:
            if self.q < 1:
                raise GaugeError("derivative pole at t=0 for q < 1")
            extra = self.beta + (1.0 if self.q == 1 else 0.0)
            return extra / self.alpha
        return (self.q * t ** (self.q - 1.0) + self.beta) / self.alpha


@dataclass(frozen=True)
class TableGauge(Gauge):
    """Piecewise-linear monotone interpolant through (t, value) knots.

    The table must start at (0, 0) and be strictly increasing in both
    coordinates; beyond the last knot the gauge continues with the final
    slope so it stays defined (and unbounded) on all of [0, inf).
    Derivatives are unsupported: tables are not C1 at the knots.
    """

    knots_t: tuple
    knots_v: tuple

    def __post_init__(self):
        t = np.asarray(self.knots_t, dtype=float)
        v = np.asarray(self.knots_v, dtype=float)
        if t.ndim != 1 or t.shape != v.shape or t.size < 2:
            raise GaugeError("table needs at least two (t, value) knots")
        if t[0] != 0.0 or v[0] != 0.0:
            raise GaugeError("table must start at (0, 0)")
        if np.any(np.diff(t) <= 0) or np.any(np.diff(v) <= 0):
            raise GaugeError("table knots must be strictly increasing")

    @staticmethod
    def from_pairs(pairs) -> "TableGauge":
        pairs = sorted((float(a), float(b)) for a, b in pairs)
        return TableGauge(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))

    def _interp(self, x: float, xs, ys) -> float:
        if x <= xs[-1]:
            return float(np.interp(x, xs, ys))
        slope = (ys[-1] - ys[-2]) / (xs[-1] - xs[-2])
        return float(ys[-1] + slope * (x - xs[-1]))

    def __call__(self, t: float) -> float:
        t = _check_nonneg(t)
        return self._interp(t, self.knots_t, self.knots_v)

    def invert(self, s: float) -> float:
        s = _check_nonneg(s, "s")
        return self._interp(s, self.knots_v, self.knots_t)


@dataclass(frozen=True)
class CompositeGauge(Gauge):
    """Gauge given by an increasing closed form, inverted by bracketed bisection.

    Used for the composite rates that arise when translating between set and
    mapping properties, e.g. t -> phi(2t) + t and t -> phi(t/2).
    """

    fn: Callable[[float], float]
    deriv: Callable[[float], float] | None = None
    label: str = "composite"

    @property
    def differentiable(self) -> bool:  # type: ignore[override]
        return self.deriv is not None

    def __call__(self, t: float) -> float:
        t = _check_nonneg(t)
        return float(self.fn(t))

    def invert(self, s: float) -> float:
        s = _check_nonneg(s, "s")
        if s == 0.0:
            return 0.0
        hi = 1.0
        for _ in range(200):
            if self.fn(hi) >= s:
                break
            hi *= 2.0
        else:
            raise GaugeError("could not bracket the inverse")
        return _bisect_increasing(self.fn, s, 0.0, hi)

    def derivative(self, t: float) -> float:
        if self.deriv is None:
            raise NotDifferentiableError(f"{self.label} gauge has no derivative")
        t = float(t)
        if t <= 0:
            raise GaugeError("derivative requires t > 0")
        return float(self.deriv(t))


def expanded(phi: Gauge) -> CompositeGauge:
    """psi(t) = phi(2t) + t, the rate picked up when a mapping property is
    transported onto its graph pair."""
    deriv = (lambda t: 2.0 * phi.derivative(2.0 * t) + 1.0) if phi.differentiable else None
    return CompositeGauge(fn=lambda t: phi(2.0 * t) + t, deriv=deriv, label="expanded")


def shrunk(phi: Gauge) -> CompositeGauge:
    """psi(t) = phi(t/2), the rate picked up in the reverse direction."""
    deriv = (lambda t: 0.5 * phi.derivative(0.5 * t)) if phi.differentiable else None
    return CompositeGauge(fn=lambda t: phi(0.5 * t), deriv=deriv, label="shrunk")


@dataclass(frozen=True)
class HolderApprox:
    """Hoelder approximation of a Hoelder-type gauge.

    ``alpha_prime_sup`` is the supremum of admissible target moduli (attained
    exactly when q = 1, open otherwise), ``alpha_prime`` the candidate the
    radius was computed for, and ``validity_radius`` the largest t_bar such
    that phi(t) <= t**q_prime / alpha_prime pointwise on (0, t_bar].
    """

    q_prime: float
    alpha_prime_sup: float
    alpha_prime: float
    validity_radius: float
    exact: bool  # True when the comparison is an identity (q = 1 case)


def holder_approximation(g: HolderTypeGauge, alpha_prime: float | None = None) -> HolderApprox:
    """Best Hoelder (or linear) approximation of (t**q + beta*t)/alpha near 0.

    Case q < 1: order q is kept and any modulus alpha' < alpha is admissible
    on a small interval; case q = 1 collapses to the exact linear gauge with
    modulus alpha/(1+beta); case q > 1 yields a linear gauge with any modulus
    alpha' < alpha/beta.  The validity radius solves the pointwise comparison
    analytically.
    """
    if not isinstance(g, HolderTypeGauge):
        raise GaugeError("holder_approximation expects a Hoelder-type gauge")
    a, b, q = g.alpha, g.beta, g.q
    if q == 1.0:
        sup = a / (1.0 + b)
        if alpha_prime is not None and not math.isclose(alpha_prime, sup, rel_tol=1e-12):
            raise GaugeError("for q = 1 the approximation modulus is exactly alpha/(1+beta)")
        return HolderApprox(q_prime=1.0, alpha_prime_sup=sup, alpha_prime=sup,
                            validity_radius=math.inf, exact=True)
    if q < 1.0:
        sup = a
        ap = 0.5 * sup if alpha_prime is None else float(alpha_prime)
        if not (0.0 < ap < sup):
            raise GaugeError(f"candidate modulus must lie in (0, {sup})")
        # alpha'(1 + beta*t**(1-q)) < alpha  <=>  t < ((alpha/alpha' - 1)/beta)**(1/(1-q))
        radius = ((a / ap - 1.0) / b) ** (1.0 / (1.0 - q))
        return HolderApprox(q_prime=q, alpha_prime_sup=sup, alpha_prime=ap,
                            validity_radius=radius, exact=False)
    sup = a / b
    ap = 0.5 * sup if alpha_prime is None else float(alpha_prime)
    if not (0.0 < ap < sup):
        raise GaugeError(f"candidate modulus must lie in (0, {sup})")
    # alpha'(t**(q-1)/beta + 1) < alpha/beta  <=>  t < (alpha/alpha' - beta)**(1/(q-1))
    radius = (a / ap - b) ** (1.0 / (q - 1.0))
    return HolderApprox(q_prime=1.0, alpha_prime_sup=sup, alpha_prime=ap,
                        validity_radius=radius, exact=False)


def finite_difference_derivative(g: Gauge, t: float, h: float | None = None) -> float:
    """Central difference check value for gauge derivatives."""
    t = float(t)
    if t <= 0:
        raise GaugeError("finite difference requires t > 0")
    if h is None:
        h = max(t * 1e-7, 1e-12)
    h = min(h, 0.5 * t)
    return (g(t + h) - g(t - h)) / (2.0 * h)
