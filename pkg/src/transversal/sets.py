"""Set oracles: distance, projection witnesses, membership and near-sampling.

Every set is an immutable oracle exposing

* ``dist(x, norm)``        exact distance (analytic shapes) or certified bound,
* ``project(x, norm)``     a point of the set realizing the distance,
* ``contains(x, norm)``    membership within tolerance,
* ``sample_near(...)``     seeded in-set points inside a ball,
* ``translated(shift)``    the set minus a shift vector.

The built-in library covers half-spaces, affine flats, balls, graphs and
epi/hypographs of one-parameter curves (polynomials and power cusps),
translates, products, cylinders and finite point unions.  Distances default
to the maximum norm.

Intersections of several sets are never reported as point estimates: the
module returns a certified bound pair.  The lower bound is the maximum of the
single-set distances, sharpened by exact intersection recognition (finite
point sets, crossing lines and curves); the upper bound comes from a feasible
witness point found by slice minimization in the plane or by alternating
projections, and is always verified by containment before being reported.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .geometry import (EUCLIDEAN, MAX, MAX_NORM, Norm, as_point, lex_less,
                       rng_for, sample_ball)

ANALYTIC_TOL = 1e-12
ITERATIVE_TOL = 1e-8
CONTAINS_TOL = 1e-9
FEAS_TOL = 1e-10


class SetError(ValueError):
    pass


class DimensionMismatch(SetError):
    pass


class EmptySetError(SetError):
    pass


class SamplerExhausted(RuntimeError):
    """Raised when near-sampling cannot place the requested number of points."""


# ----------------------------------------------------------------------------
# one-parameter boundary curves
# ----------------------------------------------------------------------------

class Curve1D:
    """Scalar function of one parameter; boundary of a planar set."""

    def eval(self, s):  # pragma: no cover - abstract
        raise NotImplementedError

    def shifted(self, dx: float, dy: float) -> "Curve1D":  # pragma: no cover
        raise NotImplementedError

    def kinks(self) -> tuple:
        return ()


@dataclass(frozen=True)
class PolyCurve(Curve1D):
    """Polynomial s -> sum coeffs[k] * s**k (ascending coefficients)."""

    coeffs: tuple

    def __post_init__(self):
        c = tuple(float(v) for v in self.coeffs)
        if len(c) == 0:
            c = (0.0,)
        object.__setattr__(self, "coeffs", c)

    def eval(self, s):
        return np.polynomial.polynomial.polyval(s, self.coeffs)

    def deriv_coeffs(self) -> tuple:
        return tuple(np.polynomial.polynomial.polyder(self.coeffs))

    def shifted(self, dx: float, dy: float) -> "PolyCurve":
        # curve of the translated set: s -> p(s + dx) - dy
        p = np.polynomial.Polynomial(self.coeffs)
        q = p(np.polynomial.Polynomial([dx, 1.0]))
        c = list(q.coef)
        c[0] -= dy
        return PolyCurve(tuple(c))

    def degree(self) -> int:
        c = np.trim_zeros(np.asarray(self.coeffs), "b")
        return max(len(c) - 1, 0)

    def level_roots(self, y: float) -> tuple:
        c = list(self.coeffs)
        c[0] -= y
        return tuple(_poly_real_roots(c))


@dataclass(frozen=True)
class CuspCurve(Curve1D):
    """s -> sign * scale * |s - center|**power + offset  (power cusp)."""

    scale: float
    power: float
    sign: float = 1.0
    center: float = 0.0
    offset: float = 0.0

    def __post_init__(self):
        if self.scale <= 0 or self.power <= 0:
            raise SetError("scale and power must be positive")
        if self.sign not in (-1.0, 1.0):
            raise SetError("sign must be +1 or -1")

    def eval(self, s):
        return self.sign * self.scale * np.abs(np.asarray(s, float) - self.center) ** self.power + self.offset

    def shifted(self, dx: float, dy: float) -> "CuspCurve":
        return replace(self, center=self.center - dx, offset=self.offset - dy)

    def kinks(self) -> tuple:
        return (self.center,)

    def level_roots(self, y: float) -> tuple:
        rhs = (y - self.offset) / (self.sign * self.scale)
        if rhs < 0.0:
            return ()
        if rhs == 0.0:
            return (self.center,)
        u = rhs ** (1.0 / self.power)
        return (self.center - u, self.center + u)


def _poly_real_roots(coeffs_ascending) -> np.ndarray:
    c = np.trim_zeros(np.asarray(coeffs_ascending, float), "b")
    if c.size <= 1:
        return np.empty(0)
    roots = np.polynomial.polynomial.polyroots(c)
    real = roots[np.abs(roots.imag) <= 1e-9 * (1.0 + np.abs(roots.real))].real
    return np.unique(real)


def _vector_crossings(fn, xs) -> list:
    """Sign-change roots of a vectorized scalar function over a sorted grid."""
    xs = np.unique(np.asarray(xs, float))
    if xs.size < 2:
        return []
    v = fn(xs)
    roots = [float(x) for x in xs[v == 0.0]]
    sgn = np.sign(v)
    flip = np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]
    if flip.size:
        a = xs[flip].astype(float)
        b = xs[flip + 1].astype(float)
        fa = v[flip].astype(float)
        for _ in range(60):
            m = 0.5 * (a + b)
            fm = fn(m)
            left = fa * fm <= 0.0
            b = np.where(left, m, b)
            a = np.where(left, a, m)
            fa = np.where(left, fa, fm)
        roots.extend((0.5 * (a + b)).tolist())
    return roots


# ----------------------------------------------------------------------------
# oracle base class
# ----------------------------------------------------------------------------

class SetOracle:
    dim: int
    exact: bool = True  # analytic-quality distances

    def is_empty(self) -> bool:
        return False

    def dist(self, x, norm: Norm = MAX_NORM) -> float:  # pragma: no cover
        raise NotImplementedError

    def project(self, x, norm: Norm = MAX_NORM) -> np.ndarray:  # pragma: no cover
        raise NotImplementedError

    def contains(self, x, norm: Norm = MAX_NORM, tol: float = CONTAINS_TOL) -> bool:
        return self.dist(x, norm) <= tol

    def translated(self, shift) -> "SetOracle":
        shift = as_point(shift)
        if np.all(shift == 0.0):
            return self
        return Translate(self, shift)

    def _check_dim(self, x) -> np.ndarray:
        x = as_point(x)
        if x.shape[0] != self.dim:
            raise DimensionMismatch(f"point dim {x.shape[0]} != set dim {self.dim}")
        return x

    def sample_near(self, center, radius: float, n: int, seed,
                    norm: Norm = MAX_NORM) -> np.ndarray:
        """n in-set points within ``radius`` of ``center`` (projected rejection).

        Deterministic for a given seed; raises SamplerExhausted instead of
        silently returning fewer points.
        """
        center = self._check_dim(center)
        if radius <= 0:
            raise SetError("radius must be positive")
        rng = seed if isinstance(seed, np.random.Generator) else rng_for(seed)
        out = []
        attempts = 0
        max_attempts = 64 * n + 256
        while len(out) < n and attempts < max_attempts:
            attempts += 1
            y = center + sample_ball(rng, self.dim, radius, norm)
            try:
                p = self.project(y, norm)
            except EmptySetError:
                raise SamplerExhausted("cannot sample near an empty set")
            if norm.dist(p, center) <= radius * (1.0 + 1e-12):
                out.append(p)
        if len(out) < n:
            raise SamplerExhausted(
                f"found {len(out)}/{n} in-set points within radius {radius}")
        return np.asarray(out)

    # planar slice interface -------------------------------------------------
    # A shape in the plane may describe, for every first coordinate s, the
    # interval of admissible second coordinates.  Shapes whose horizontal
    # support is a finite set advertise it through x_atoms().

    def sliceable(self) -> bool:
        return False

    def slice_bounds(self, s: np.ndarray):  # -> (lo, hi) arrays, empty if lo > hi
        raise NotImplementedError

    def x_atoms(self):
        """None for continuous horizontal support, else tuple of admissible s."""
        return None

    def x_hints(self) -> tuple:
        """Interesting first coordinates (kinks, centers) for grid seeding."""
        return ()


def dist(oracle: SetOracle, x, norm: Norm = MAX_NORM) -> float:
    return oracle.dist(x, norm)


def project(oracle: SetOracle, x, norm: Norm = MAX_NORM) -> np.ndarray:
    return oracle.project(x, norm)


# ----------------------------------------------------------------------------
# concrete shapes
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class HalfSpace(SetOracle):
    """{x : normal . x >= offset}."""

    normal: tuple
    offset: float

    def __post_init__(self):
        n = as_point(self.normal)
        if np.all(n == 0.0):
            raise SetError("half-space normal must be nonzero")
        object.__setattr__(self, "normal", tuple(float(v) for v in n))
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def dim(self) -> int:
        return len(self.normal)

    def _margin(self, x) -> float:
        return self.offset - float(np.dot(self.normal, x))

    def dist(self, x, norm: Norm = MAX_NORM) -> float:
        x = self._check_dim(x)
        m = self._margin(x)
        if m <= 0.0:
            return 0.0
        n = np.asarray(self.normal)
        dual = float(np.sum(np.abs(n))) if norm.kind == MAX else float(np.sqrt(np.dot(n, n)))
        return m / dual

    def project(self, x, norm: Norm = MAX_NORM) -> np.ndarray:
        x = self._check_dim(x)
        m = self._margin(x)
        if m <= 0.0:
            return x.copy()
        n = np.asarray(self.normal)
        if norm.kind == MAX:
            dual = float(np.sum(np.abs(n)))
            return x + (m / dual) * np.sign(n)
        return x + (m / float(np.dot(n, n))) * n

    def translated(self, shift) -> "HalfSpace":
        shift = as_point(shift)
        return HalfSpace(self.normal, self.offset - float(np.dot(self.normal, shift)))

    def sliceable(self) -> bool:
        return self.dim == 2

    def slice_bounds(self, s):
        s = np.asarray(s, float)
        n1, n2 = self.normal
        if n2 > 0:
            lo = (self.offset - n1 * s) / n2
            return lo, np.full_like(lo, np.inf)
        if n2 < 0:
            hi = (self.offset - n1 * s) / n2
            return np.full_like(hi, -np.inf), hi
        ok = n1 * s >= self.offset
        lo = np.where(ok, -np.inf, np.inf)
        hi = np.where(ok, np.inf, -np.inf)
        return lo, hi

    def x_hints(self) -> tuple:
        n1, n2 = self.normal
        if n2 == 0.0:
            return (self.offset / n1,)
        return ()

    def intervals_1d(self):
        (n1,) = self.normal
        b = self.offset / n1
        return [(b, math.inf)] if n1 > 0 else [(-math.inf, b)]


@dataclass(frozen=True)
class AffineSubspace(SetOracle):
    """{point + span(directions)}; a single point when no directions are given."""

    point: tuple
    directions: tuple = ()

    def __post_init__(self):
        p = as_point(self.point)
        dirs = []
        for v in self.directions:
            v = as_point(v)
            if v.shape != p.shape:
                raise DimensionMismatch("direction dimension mismatch")
            if np.all(v == 0.0):
                raise SetError("affine directions must be nonzero")
            dirs.append(tuple(float(a) for a in v))
        object.__setattr__(self, "point", tuple(float(a) for a in p))
        object.__setattr__(self, "directions", tuple(dirs))

    @property
    def dim(self) -> int:
        return len(self.point)

    @property
    def k(self) -> int:
        return len(self.directions)

    def _basis(self) -> np.ndarray:
        return np.asarray(self.directions, float).T  # (dim, k)

    def _nearest_params(self, x, norm: Norm) -> np.ndarray:
        r = x - np.asarray(self.point)
        if self.k == 0:
            return np.zeros(0)
        V = self._basis()
        if norm.kind == EUCLIDEAN or self.k > 1:
            if norm.kind == MAX and self.k > 1:
                raise SetError("max-norm projection onto multi-parameter flats "
                               "is not supported; use a cylinder or product")
            sol, *_ = np.linalg.lstsq(V, r, rcond=None)
            return sol
        v = V[:, 0]
        # minimize over t the piecewise-linear convex max_j |r_j - v_j t|
        cands = [0.0]
        d = self.dim
        for i in range(d):
            if v[i] != 0.0:
                cands.append(r[i] / v[i])
            for j in range(i + 1, d):
                for sgn in (1.0, -1.0):
                    den = v[i] - sgn * v[j]
                    if abs(den) > 0.0:
                        cands.append((r[i] - sgn * r[j]) / den)
        best_t, best = 0.0, math.inf
        for t in cands:
            val = float(np.max(np.abs(r - v * t)))
            if val < best - 1e-15:
                best, best_t = val, t
        return np.asarray([best_t])

    def dist(self, x, norm: Norm = MAX_NORM) -> float:
        x = self._check_dim(x)
        t = self._nearest_params(x, norm)
        p = np.asarray(self.point) + (self._basis() @ t if self.k else 0.0)
        return norm.dist(x, p)

    def project(self, x, norm: Norm = MAX_NORM) -> np.ndarray:
        x = self._check_dim(x)
        t = self._nearest_params(x, norm)
        return np.asarray(self.point) + (self._basis() @ t if self.k else 0.0)

    def translated(self, shift) -> "AffineSubspace":
        shift = as_point(shift)
        return AffineSubspace(tuple(np.asarray(self.point) - shift), self.directions)

    def sliceable(self) -> bool:
        return self.dim == 2 and self.k <= 1

    def _is_vertical(self) -> bool:
        return self.k == 1 and self.directions[0][0] == 0.0

    def slice_bounds(self, s):
        s = np.asarray(s, float)
        if self.k == 1 and not self._is_vertical():
            (vx, vy) = self.directions[0]
            y = self.point[1] + (s - self.point[0]) * vy / vx
            return y, y.copy() if isinstance(y, np.ndarray) else y
        # vertical line or single point: atomic support
        match = np.isclose(s, self.point[0], rtol=0.0, atol=1e-12)
        lo = np.where(match, -np.inf if self._is_vertical() else self.point[1], np.inf)
        hi = np.where(match, np.inf if self._is_vertical() else self.point[1], -np.inf)
        return lo, hi

    def x_atoms(self):
        if self.dim == 2 and (self.k == 0 or self._is_vertical()):
            return (self.point[0],)
        return None

    def intervals_1d(self):
        if self.k == 0:
            return [(self.point[0], self.point[0])]
        return [(-math.inf, math.inf)]


@dataclass(frozen=True)
class Ball(SetOracle):
    """Closed ball of the given norm kind (a box for the maximum norm)."""

    center: tuple
    radius: float
    ball_norm: str = EUCLIDEAN

    def __post_init__(self):
        c = as_point(self.center)
        if self.radius < 0:
            raise SetError("radius must be nonnegative")
        if self.ball_norm not in (MAX, EUCLIDEAN):
            raise SetError("ball_norm must be 'max' or 'euclidean'")
        object.__setattr__(self, "center", tuple(float(v) for v in c))
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def dim(self) -> int:
        return len(self.center)

    def _inside(self, x) -> bool:
        c = np.asarray(self.center)
        if self.ball_norm == MAX:
            return float(np.max(np.abs(x - c))) <= self.radius
        return float(np.linalg.norm(x - c)) <= self.radius

    def dist(self, x, norm: Norm = MAX_NORM) -> float:
        x = self._check_dim(x)
        return norm.dist(x, self.project(x, norm))

    def project(self, x, norm: Norm = MAX_NORM) -> np.ndarray:
        x = self._check_dim(x)
        c = np.asarray(self.center)
        if self._inside(x):
            return x.copy()
        if self.ball_norm == MAX:
            # box: coordinatewise clipping projects in both norms
            return np.clip(x, c - self.radius, c + self.radius)
        if norm.kind == EUCLIDEAN:
            v = x - c
            return c + (self.radius / float(np.linalg.norm(v))) * v
        # euclidean ball, max-norm distance: bisect the box size t around x
        lo = max(0.0, float(np.max(np.abs(x - c))) - self.radius)
        hi = float(np.linalg.norm(x - c))

        def feasible(t):
            q = np.clip(c, x - t, x + t)
            return float(np.linalg.norm(q - c)) <= self.radius

        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if feasible(mid):
                hi = mid
            else:
                lo = mid
        return np.clip(c, x - hi, x + hi)

    def translated(self, shift) -> "Ball":
        shift = as_point(shift)
        return Ball(tuple(np.asarray(self.center) - shift), self.radius, self.ball_norm)

    def sliceable(self) -> bool:
        return self.dim == 2

    def slice_bounds(self, s):
        s = np.asarray(s, float)
        cx, cy = self.center
        if self.ball_norm == MAX:
            ok = np.abs(s - cx) <= self.radius
            lo = np.where(ok, cy - self.radius, np.inf)
            hi = np.where(ok, cy + self.radius, -np.inf)
            return lo, hi
        room = self.radius ** 2 - (s - cx) ** 2
        ok = room >= 0.0
        half = np.sqrt(np.where(ok, room, 0.0))
        lo = np.where(ok, cy - half, np.inf)
        hi = np.where(ok, cy + half, -np.inf)
        return lo, hi

    def x_hints(self) -> tuple:
        return (self.center[0] - self.radius, self.center[0], self.center[0] + self.radius)

    def intervals_1d(self):
        (c,) = self.center
        return [(c - self.radius, c + self.radius)]


_GE, _LE, _EQ = "ge", "le", "eq"


@dataclass(frozen=True)
class CurveSet(SetOracle):
    """Planar set bounded by a one-parameter curve.

    sense 'ge' is the epigraph {x2 >= f(x1)}, 'le' the hypograph, and 'eq'
    the graph itself.
    """

    curve: Curve1D
    sense: str = _EQ
    dim: int = field(default=2, init=False, repr=False)

    def __post_init__(self):
        if self.sense not in (_GE, _LE, _EQ):
            raise SetError("sense must be 'ge', 'le' or 'eq'")

    def _penalty(self, s, b):
        f = self.curve.eval(s)
        if self.sense == _GE:
            return np.maximum(f - b, 0.0)
        if self.sense == _LE:
            return np.maximum(b - f, 0.0)
        return np.abs(f - b)

    def _candidate_params(self, a: float, b: float) -> list:
        """1-d minimizer candidates for max(|a-s|, penalty(s))."""
        cands = [a]
        cands.extend(self.curve.kinks())
        if isinstance(self.curve, PolyCurve):
            base = np.asarray(self.curve.coeffs, float)
            shifted = base.copy()
            shifted[0] -= b
            # curve meets the horizontal level of the query point
            cands.extend(_poly_real_roots(shifted))
            # |a - s| crosses |f(s) - b|
            for sgn in (1.0, -1.0):
                cross = shifted.copy()
                if cross.size < 2:
                    cross = np.pad(cross, (0, 2 - cross.size))
                cross[0] -= sgn * (-a)
                cross[1] -= sgn * 1.0
                cands.extend(_poly_real_roots(cross))
            cands.extend(_poly_real_roots(self.curve.deriv_coeffs()))
        return cands

    def _minimize(self, a: float, b: float):
        """Exact minimizer of max(|a - s|, penalty(s)).

        The minimum sits at a branch crossing, a curve kink, a penalty
        boundary (curve meets the level of the query point), or s = a; all of
        these are computed (polynomial roots, or vectorized bisection on the
        branch difference for non-polynomial curves).
        """
        def g_vec(s):
            s = np.asarray(s, float)
            return np.maximum(np.abs(a - s), self._penalty(s, b))

        d0 = float(g_vec(a))
        if d0 == 0.0:
            return a, 0.0
        lo, hi = a - d0, a + d0
        cands = [lo, hi, a]
        cands.extend(k for k in self.curve.kinks() if lo <= k <= hi)
        cands.extend(r for r in self.curve.level_roots(b) if lo <= r <= hi)
        if isinstance(self.curve, PolyCurve):
            cands.extend(s for s in self._candidate_params(a, b)
                         if lo - 1e-12 <= s <= hi + 1e-12)
        else:
            def diff(s):
                s = np.asarray(s, float)
                return self._penalty(s, b) - np.abs(a - s)

            grid = [np.linspace(lo, hi, 129)]
            offs = np.geomspace(max(d0, 1e-12) * 1e-9, max(d0, 1e-12), 33)
            for c in {a, *self.curve.kinks()}:
                grid.append(c + offs)
                grid.append(c - offs)
            xs = np.clip(np.concatenate(grid), lo, hi)
            cands.extend(_vector_crossings(diff, xs))
        sc = np.asarray(cands, float)
        vals = g_vec(sc)
        i = int(np.argmin(vals))
        best_s, best = float(sc[i]), float(vals[i])
        # tiny zoom polish guards root conditioning at extreme scales
        w = max(abs(best_s) * 1e-6, best * 1e-6, 1e-13)
        for _ in range(3):
            zs = np.linspace(best_s - w, best_s + w, 17)
            zv = g_vec(zs)
            j = int(np.argmin(zv))
            if float(zv[j]) < best:
                best, best_s = float(zv[j]), float(zs[j])
            w /= 16.0
        return best_s, best

    def _witness(self, s: float, b: float) -> np.ndarray:
        f = float(self.curve.eval(np.asarray(s, float)))
        if self.sense == _GE:
            y = max(b, f)
        elif self.sense == _LE:
            y = min(b, f)
        else:
            y = f
        return np.asarray([s, y])

    def dist(self, x, norm: Norm = MAX_NORM) -> float:
        x = self._check_dim(x)
        return norm.dist(x, self.project(x, norm))

    def project(self, x, norm: Norm = MAX_NORM) -> np.ndarray:
        x = self._check_dim(x)
        a, b = float(x[0]), float(x[1])
        if self.sense != _EQ:
            f_a = float(self.curve.eval(np.asarray(a)))
            inside = f_a <= b if self.sense == _GE else b <= f_a
            if inside:
                return x.copy()
        if norm.kind == MAX:
            s, _ = self._minimize(a, b)
            return self._witness(s, b)
        # euclidean: same candidate machinery on the squared objective
        def g(s):
            w = self._witness(float(s), b)
            return math.hypot(a - w[0], b - w[1])

        s0, _ = self._minimize(a, b)
        cands = set(self._candidate_params(a, b))
        cands.add(s0)
        best_s = min(cands, key=lambda s: g(s))
        best = g(best_s)
        w = max(abs(best_s) * 1e-3, 1e-10)
        for _ in range(6):
            for s in np.linspace(best_s - w, best_s + w, 25):
                v = g(float(s))
                if v < best:
                    best, best_s = v, float(s)
            w /= 8.0
        return self._witness(float(best_s), b)

    def translated(self, shift) -> "CurveSet":
        shift = as_point(shift)
        return CurveSet(self.curve.shifted(float(shift[0]), float(shift[1])), self.sense)

    def sample_near(self, center, radius, n, seed, norm: Norm = MAX_NORM) -> np.ndarray:
        # parameter-space sampling keeps boundary points well spread
        center = self._check_dim(center)
        rng = seed if isinstance(seed, np.random.Generator) else rng_for(seed)
        out = []
        attempts = 0
        while len(out) < n and attempts < 64 * n + 256:
            attempts += 1
            y = center + sample_ball(rng, 2, radius, norm)
            p = self.project(y, norm)
            if norm.dist(p, center) <= radius * (1.0 + 1e-12):
                out.append(p)
        if len(out) < n:
            raise SamplerExhausted(f"found {len(out)}/{n} curve points in ball")
        return np.asarray(out)

    def sliceable(self) -> bool:
        return True

    def slice_bounds(self, s):
        s = np.asarray(s, float)
        f = np.asarray(self.curve.eval(s), float)
        if self.sense == _GE:
            return f, np.full_like(f, np.inf)
        if self.sense == _LE:
            return np.full_like(f, -np.inf), f
        return f, f.copy()

    def x_hints(self) -> tuple:
        return tuple(self.curve.kinks())


def epigraph_poly(coeffs) -> CurveSet:
    return CurveSet(PolyCurve(tuple(coeffs)), _GE)


def hypograph_poly(coeffs) -> CurveSet:
    return CurveSet(PolyCurve(tuple(coeffs)), _LE)


def curve_graph_poly(coeffs) -> CurveSet:
    return CurveSet(PolyCurve(tuple(coeffs)), _EQ)


def power_cusp(gamma: float, q: float, side: str) -> CurveSet:
    """The two planar sets, parameterized by gamma and q, with boundaries
    x2 = -+ (|x1| / gamma)**(1/q).

    side 'plus' is the region above the downward cusp
    {gamma**(1/q) x2 + |x1|**(1/q) >= 0}; side 'minus' the region below the
    upward cusp {gamma**(1/q) x2 - |x1|**(1/q) <= 0}.
    """
    if gamma <= 0 or q <= 0:
        raise SetError("gamma and q must be positive")
    scale = (1.0 / gamma) ** (1.0 / q)
    if side == "plus":
        return CurveSet(CuspCurve(scale=scale, power=1.0 / q, sign=-1.0), _GE)
    if side == "minus":
        return CurveSet(CuspCurve(scale=scale, power=1.0 / q, sign=1.0), _LE)
    raise SetError("side must be 'plus' or 'minus'")


@dataclass(frozen=True)
class FinitePointSet(SetOracle):
    """Finite union of points; may be empty (distance is then +inf)."""

    points: tuple
    dimension: int = 0

    def __post_init__(self):
        pts = [as_point(p) for p in self.points]
        if pts:
            d = pts[0].shape[0]
            if any(p.shape[0] != d for p in pts):
                raise DimensionMismatch("points must share a dimension")
            object.__setattr__(self, "dimension", d)
        elif self.dimension <= 0:
            raise SetError("an empty point set needs an explicit dimension")
        object.__setattr__(self, "points", tuple(tuple(float(v) for v in p) for p in pts))

    @property
    def dim(self) -> int:
        return self.dimension

    def is_empty(self) -> bool:
        return len(self.points) == 0

    def dist(self, x, norm: Norm = MAX_NORM) -> float:
        x = self._check_dim(x)
        if not self.points:
            return math.inf
        return min(norm.dist(x, np.asarray(p)) for p in self.points)

    def project(self, x, norm: Norm = MAX_NORM) -> np.ndarray:
        x = self._check_dim(x)
        if not self.points:
            raise EmptySetError("cannot project onto an empty set")
        best, best_d = None, math.inf
        for p in self.points:
            p = np.asarray(p)
            d = norm.dist(x, p)
            if d < best_d - 1e-15 or (abs(d - best_d) <= 1e-15 and best is not None
                                      and lex_less(p, best)):
                best, best_d = p, d
        return best.copy()

    def translated(self, shift) -> "FinitePointSet":
        shift = as_point(shift)
        return FinitePointSet(tuple(tuple(np.asarray(p) - shift) for p in self.points),
                              dimension=self.dim)

    def sample_near(self, center, radius, n, seed, norm: Norm = MAX_NORM) -> np.ndarray:
        center = self._check_dim(center)
        near = [np.asarray(p) for p in self.points if norm.dist(p, center) <= radius]
        if not near:
            raise SamplerExhausted("no points of the finite set inside the ball")
        rng = seed if isinstance(seed, np.random.Generator) else rng_for(seed)
        idx = rng.integers(0, len(near), size=n)
        return np.asarray([near[i] for i in idx])

    def sliceable(self) -> bool:
        return self.dim == 2

    def slice_bounds(self, s):
        s = np.asarray(s, float)
        lo = np.full_like(s, np.inf)
        hi = np.full_like(s, -np.inf)
        for p in self.points:
            match = np.isclose(s, p[0], rtol=0.0, atol=1e-12)
            lo = np.where(match, np.minimum(lo, p[1]), lo)
            hi = np.where(match, np.maximum(hi, p[1]), hi)
        return lo, hi

    def x_atoms(self):
        if self.dim == 2:
            return tuple(sorted({p[0] for p in self.points}))
        return None

    def intervals_1d(self):
        return [(p[0], p[0]) for p in self.points]


@dataclass(frozen=True)
class Translate(SetOracle):
    """inner - shift: membership of x means x + shift lies in the inner set."""

    inner: SetOracle
    shift: tuple

    def __post_init__(self):
        s = as_point(self.shift)
        if s.shape[0] != self.inner.dim:
            raise DimensionMismatch("shift dimension mismatch")
        object.__setattr__(self, "shift", tuple(float(v) for v in s))

    @property
    def dim(self) -> int:
        return self.inner.dim

    @property
    def exact(self) -> bool:  # type: ignore[override]
        return self.inner.exact

    def is_empty(self) -> bool:
        return self.inner.is_empty()

    def dist(self, x, norm: Norm = MAX_NORM) -> float:
        x = self._check_dim(x)
        return self.inner.dist(x + np.asarray(self.shift), norm)

    def project(self, x, norm: Norm = MAX_NORM) -> np.ndarray:
        x = self._check_dim(x)
        return self.inner.project(x + np.asarray(self.shift), norm) - np.asarray(self.shift)

    def translated(self, shift) -> "Translate":
        shift = as_point(shift)
        return Translate(self.inner, tuple(np.asarray(self.shift) + shift))

    def sample_near(self, center, radius, n, seed, norm: Norm = MAX_NORM) -> np.ndarray:
        center = self._check_dim(center)
        pts = self.inner.sample_near(center + np.asarray(self.shift), radius, n, seed, norm)
        return pts - np.asarray(self.shift)

    def sliceable(self) -> bool:
        return self.dim == 2 and self.inner.sliceable()

    def slice_bounds(self, s):
        sx, sy = self.shift
        lo, hi = self.inner.slice_bounds(np.asarray(s, float) + sx)
        return lo - sy, hi - sy

    def x_atoms(self):
        atoms = self.inner.x_atoms()
        if atoms is None:
            return None
        return tuple(a - self.shift[0] for a in atoms)

    def x_hints(self) -> tuple:
        return tuple(h - self.shift[0] for h in self.inner.x_hints())


@dataclass(frozen=True)
class ProductSet(SetOracle):
    """Cartesian product with concatenated coordinates."""

    factors: tuple

    @property
    def dim(self) -> int:
        return sum(f.dim for f in self.factors)

    @property
    def exact(self) -> bool:  # type: ignore[override]
        return all(f.exact for f in self.factors)

    def is_empty(self) -> bool:
        return any(f.is_empty() for f in self.factors)

    def _split(self, x):
        out, k = [], 0
        for f in self.factors:
            out.append(x[k:k + f.dim])
            k += f.dim
        return out

    def dist(self, x, norm: Norm = MAX_NORM) -> float:
        x = self._check_dim(x)
        ds = [f.dist(part, norm) for f, part in zip(self.factors, self._split(x))]
        if norm.kind == MAX:
            return max(ds)
        return float(np.sqrt(np.sum(np.square(ds))))

    def project(self, x, norm: Norm = MAX_NORM) -> np.ndarray:
        x = self._check_dim(x)
        return np.concatenate([f.project(part, norm)
                               for f, part in zip(self.factors, self._split(x))])

    def translated(self, shift) -> "ProductSet":
        shift = as_point(shift)
        return ProductSet(tuple(f.translated(part)
                                for f, part in zip(self.factors, self._split(shift))))


@dataclass(frozen=True)
class Cylinder(SetOracle):
    """{x in R^ambient : x[coords] in inner}; the other coordinates are free."""

    ambient: int
    coords: tuple
    inner: SetOracle

    def __post_init__(self):
        coords = tuple(int(c) for c in self.coords)
        if len(coords) != self.inner.dim:
            raise DimensionMismatch("coords must match the inner dimension")
        if any(c < 0 or c >= self.ambient for c in coords):
            raise SetError("cylinder coordinates out of range")
        object.__setattr__(self, "coords", coords)

    @property
    def dim(self) -> int:
        return self.ambient

    @property
    def exact(self) -> bool:  # type: ignore[override]
        return self.inner.exact

    def is_empty(self) -> bool:
        return self.inner.is_empty()

    def dist(self, x, norm: Norm = MAX_NORM) -> float:
        x = self._check_dim(x)
        return self.inner.dist(x[list(self.coords)], norm)

    def project(self, x, norm: Norm = MAX_NORM) -> np.ndarray:
        x = self._check_dim(x)
        out = x.copy()
        out[list(self.coords)] = self.inner.project(x[list(self.coords)], norm)
        return out

    def translated(self, shift) -> "Cylinder":
        shift = as_point(shift)
        return Cylinder(self.ambient, self.coords,
                        self.inner.translated(shift[list(self.coords)]))

    def sliceable(self) -> bool:
        return self.ambient == 2 and hasattr(self.inner, "intervals_1d")

    def _inner_intervals(self):
        return self.inner.intervals_1d()

    def slice_bounds(self, s):
        s = np.asarray(s, float)
        ivs = self._inner_intervals()
        if self.coords == (1,):
            # one interval suffices for the built-in 1-d shapes
            if len(ivs) == 1:
                lo, hi = ivs[0]
                return np.full_like(s, lo), np.full_like(s, hi)
            lo = np.full_like(s, np.inf)
            hi = np.full_like(s, -np.inf)
            for a, b in ivs:
                lo = np.minimum(lo, a)
                hi = np.maximum(hi, b)
            return lo, hi
        ok = np.zeros_like(s, dtype=bool)
        for a, b in ivs:
            ok |= (s >= a) & (s <= b)
        lo = np.where(ok, -np.inf, np.inf)
        hi = np.where(ok, np.inf, -np.inf)
        return lo, hi

    def x_atoms(self):
        if self.ambient != 2 or self.coords != (0,):
            return None
        ivs = self._inner_intervals()
        if all(a == b for a, b in ivs):
            return tuple(a for a, _ in ivs)
        return None

    def x_hints(self) -> tuple:
        if self.ambient == 2 and self.coords == (0,):
            return tuple(v for iv in self._inner_intervals() for v in iv
                         if math.isfinite(v))
        return ()


def singleton(point) -> FinitePointSet:
    return FinitePointSet((tuple(as_point(point)),))


# ----------------------------------------------------------------------------
# scenes
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class Scene:
    """A collection of sets with a common basepoint.

    ``intersection`` is an optional user-declared analytic oracle for the
    joint intersection; ``boundary_basepoint`` flags that the basepoint lies
    on the boundary of the intersection (enables the necessary gauge check).
    """

    dim: int
    sets: tuple
    basepoint: tuple
    norm: Norm = MAX_NORM
    intersection: SetOracle | None = None
    boundary_basepoint: bool | None = None
    name: str = ""

    def __post_init__(self):
        bp = as_point(self.basepoint)
        if bp.shape[0] != self.dim:
            raise DimensionMismatch("basepoint dimension mismatch")
        object.__setattr__(self, "basepoint", tuple(float(v) for v in bp))
        object.__setattr__(self, "sets", tuple(self.sets))
        for o in self.sets:
            if o.dim != self.dim:
                raise DimensionMismatch("set dimension mismatch")
        if self.intersection is not None and self.intersection.dim != self.dim:
            raise DimensionMismatch("intersection oracle dimension mismatch")

    @property
    def x_bar(self) -> np.ndarray:
        return np.asarray(self.basepoint)

    @property
    def exact(self) -> bool:
        return all(o.exact for o in self.sets)

    @property
    def tolerance(self) -> float:
        return 1e-9 if self.exact else 1e-6

    def validate(self, tol: float = CONTAINS_TOL) -> None:
        for i, o in enumerate(self.sets):
            d = o.dist(self.x_bar, self.norm)
            if d > tol:
                raise SetError(f"basepoint outside set {i}: distance {d}")
        if self.intersection is not None:
            d = self.intersection.dist(self.x_bar, self.norm)
            if d > tol:
                raise SetError(f"basepoint outside declared intersection: {d}")


# ----------------------------------------------------------------------------
# exact intersection recognition
# ----------------------------------------------------------------------------

def _as_line(o: SetOracle) -> AffineSubspace | None:
    if isinstance(o, AffineSubspace) and o.k == 1:
        return o
    if isinstance(o, Translate):
        inner = _as_line(o.inner)
        if inner is not None:
            return inner.translated(o.shift)
    return None


def _as_eq_curve(o: SetOracle) -> Curve1D | None:
    if isinstance(o, CurveSet) and o.sense == _EQ:
        return o.curve
    if isinstance(o, Translate):
        inner = _as_eq_curve(o.inner)
        if inner is not None:
            return inner.shifted(float(o.shift[0]), float(o.shift[1]))
    return None


def _as_points(o: SetOracle) -> FinitePointSet | None:
    if isinstance(o, FinitePointSet):
        return o
    if isinstance(o, Translate):
        inner = _as_points(o.inner)
        if inner is not None:
            return inner.translated(o.shift)
    return None


def _line_line_intersection(l1: AffineSubspace, l2: AffineSubspace) -> SetOracle | None:
    p1, v1 = np.asarray(l1.point), np.asarray(l1.directions[0])
    p2, v2 = np.asarray(l2.point), np.asarray(l2.directions[0])
    A = np.column_stack([v1, -v2])
    b = p2 - p1
    sol, res, rank, _ = np.linalg.lstsq(A, b, rcond=None)
    if rank == 2:
        z = p1 + sol[0] * v1
        gap = float(np.max(np.abs((p1 + sol[0] * v1) - (p2 + sol[1] * v2))))
        if gap <= 1e-9:
            return FinitePointSet((tuple(z),))
        return FinitePointSet((), dimension=l1.dim)  # skew lines
    # parallel: identical line or empty
    if l2.dist(p1, MAX_NORM) <= 1e-11:
        return l1
    return FinitePointSet((), dimension=l1.dim)


def _scan_crossings(f, lo: float, hi: float, hints: Iterable[float]) -> list:
    """Sign-change roots of a scalar function on [lo, hi], log-refined near hints."""
    grid = set(np.linspace(lo, hi, 257).tolist())
    for c in hints:
        offs = np.geomspace(1e-12, max(hi - lo, 1e-9), 48)
        grid.update((c + offs).tolist())
        grid.update((c - offs).tolist())
        grid.add(c)
    xs = np.asarray(sorted(s for s in grid if lo <= s <= hi))
    vals = np.asarray([f(s) for s in xs])
    roots = []
    for i in range(len(xs) - 1):
        a, b = xs[i], xs[i + 1]
        fa, fb = vals[i], vals[i + 1]
        if fa == 0.0:
            roots.append(a)
            continue
        if fa * fb < 0.0:
            for _ in range(120):
                m = 0.5 * (a + b)
                fm = f(m)
                if fm == 0.0 or m <= a or m >= b:
                    a = b = m
                    break
                if fa * fm < 0.0:
                    b, fb = m, fm
                else:
                    a, fa = m, fm
            roots.append(0.5 * (a + b))
    if len(vals) and vals[-1] == 0.0:
        roots.append(xs[-1])
    return sorted(set(roots))


def _curve_curve_intersection(c1: Curve1D, c2: Curve1D) -> SetOracle | None:
    if isinstance(c1, PolyCurve) and isinstance(c2, PolyCurve):
        n = max(len(c1.coeffs), len(c2.coeffs))
        a = np.pad(np.asarray(c1.coeffs, float), (0, n - len(c1.coeffs)))
        b = np.pad(np.asarray(c2.coeffs, float), (0, n - len(c2.coeffs)))
        diff = a - b
        if np.max(np.abs(diff)) <= 1e-14:
            return CurveSet(c1, _EQ)
        roots = _poly_real_roots(diff)
        pts = tuple((float(r), float(c1.eval(np.asarray(r)))) for r in roots)
        return FinitePointSet(pts, dimension=2)
    hints = list(c1.kinks()) + list(c2.kinks()) + [0.0]
    span = 4.0 + 4.0 * max((abs(h) for h in hints), default=0.0)
    roots = _scan_crossings(lambda s: float(c1.eval(np.asarray(s)) - c2.eval(np.asarray(s))),
                            -span, span, hints)
    pts = tuple((float(r), float(c1.eval(np.asarray(r)))) for r in roots)
    return FinitePointSet(pts, dimension=2)


def _curve_line_intersection(c: Curve1D, line: AffineSubspace) -> SetOracle | None:
    (vx, vy) = line.directions[0]
    p0 = np.asarray(line.point)
    if vx == 0.0:
        s = float(p0[0])
        return FinitePointSet(((s, float(c.eval(np.asarray(s)))),), dimension=2)
    line_curve = PolyCurve((float(p0[1] - p0[0] * vy / vx), vy / vx))
    return _curve_curve_intersection(c, line_curve)


def recognize_exact_intersection(sets: Sequence[SetOracle],
                                 norm: Norm = MAX_NORM) -> SetOracle | None:
    """Exactly representable intersection of the collection, or None.

    Covers finite point sets filtered by membership, pairs of lines, pairs of
    curve graphs, and curve graphs crossed with lines.
    """
    pts = [(i, _as_points(o)) for i, o in enumerate(sets)]
    pts = [(i, p) for i, p in pts if p is not None]
    if pts:
        i0, p0 = pts[0]
        keep = []
        for p in p0.points:
            v = np.asarray(p)
            if all(o.contains(v, norm, tol=1e-10) for j, o in enumerate(sets) if j != i0):
                keep.append(tuple(v))
        return FinitePointSet(tuple(keep), dimension=sets[0].dim)
    if len(sets) != 2:
        return None
    a, b = sets
    la, lb = _as_line(a), _as_line(b)
    if la is not None and lb is not None:
        return _line_line_intersection(la, lb)
    ca, cb = _as_eq_curve(a), _as_eq_curve(b)
    if ca is not None and cb is not None:
        return _curve_curve_intersection(ca, cb)
    if ca is not None and lb is not None and a.dim == 2:
        return _curve_line_intersection(ca, lb)
    if cb is not None and la is not None and a.dim == 2:
        return _curve_line_intersection(cb, la)
    return None


# ----------------------------------------------------------------------------
# intersection distance bounds
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class IntersectionBounds:
    """Certified bracket for the distance to an intersection.

    ``lower <= d <= upper`` always; ``point`` is a feasible witness for the
    upper bound when one was found; ``exact`` marks brackets produced by an
    analytic intersection (then upper == lower).
    """

    lower: float
    upper: float
    point: np.ndarray | None = None
    exact: bool = False

    def resolved(self, rhs: float, tol: float) -> str:
        if self.lower > rhs + tol:
            return "violated"
        if self.upper <= rhs + tol:
            return "satisfied"
        return "unresolved"


def _slice_phi(sets, x, norm: Norm, s: np.ndarray):
    lo = np.full_like(s, -np.inf)
    hi = np.full_like(s, np.inf)
    for o in sets:
        slo, shi = o.slice_bounds(s)
        lo = np.maximum(lo, slo)
        hi = np.minimum(hi, shi)
    feasible = lo <= hi
    y = np.clip(x[1], lo, hi)
    pen = np.where(feasible, np.maximum(lo - x[1], 0.0) + np.maximum(x[1] - hi, 0.0), np.inf)
    if norm.kind == MAX:
        phi = np.maximum(np.abs(s - x[0]), pen)
    else:
        phi = np.hypot(s - x[0], pen)
    return phi, y


def _slice_upper(sets, x, norm: Norm):
    """Feasible-witness upper bound by minimizing over the first coordinate."""
    atoms = None
    for o in sets:
        a = o.x_atoms()
        if a is not None:
            atoms = set(a) if atoms is None else {v for v in atoms
                                                  if any(abs(v - w) <= 1e-11 for w in a)}
    hints = [x[0]]
    for o in sets:
        hints.extend(o.x_hints())
    if atoms is not None:
        if not atoms:
            return math.inf, None
        s_grid = np.asarray(sorted(atoms))
        phi, y = _slice_phi(sets, x, norm, s_grid)
        i = int(np.argmin(phi))
        if not math.isfinite(float(phi[i])):
            return math.inf, None
        return float(phi[i]), np.asarray([s_grid[i], y[i]])

    span = max(1.0, 2.0 * max(abs(h - x[0]) for h in hints) + 1.0)
    for attempt in range(3):
        grid = [np.linspace(x[0] - span, x[0] + span, 193)]
        for c in hints:
            offs = np.geomspace(1e-12, span, 57)
            grid.append(c + offs)
            grid.append(c - offs)
            grid.append(np.asarray([c]))
        s_grid = np.unique(np.concatenate(grid))
        phi, _ = _slice_phi(sets, x, norm, s_grid)
        order = np.argsort(phi)
        finite = [int(i) for i in order[:3] if math.isfinite(float(phi[i]))]
        if not finite:
            span *= 8.0
            continue
        best_val, best_s = float(phi[finite[0]]), float(s_grid[finite[0]])
        # vectorized zoom polish around each of the best grid cells; a cheap
        # grid winner may sit in the wrong basin, so none are pruned
        for i in finite:
            v_c = float(phi[i])
            s_c = float(s_grid[i])
            step = float(s_grid[min(i + 1, len(s_grid) - 1)] - s_grid[max(i - 1, 0)])
            w = max(step, 1e-13)
            for _ in range(7):
                zs = np.linspace(s_c - w, s_c + w, 25)
                zphi, _ = _slice_phi(sets, x, norm, zs)
                j = int(np.argmin(zphi))
                if float(zphi[j]) < v_c:
                    v_c, s_c = float(zphi[j]), float(zs[j])
                w /= 8.0
            if v_c < best_val:
                best_val, best_s = v_c, s_c
        _, y_fin = _slice_phi(sets, x, norm, np.asarray([best_s]))
        return best_val, np.asarray([best_s, float(y_fin[0])])
    return math.inf, None


def _alternating_feasible(sets, start, norm: Norm, sweeps: int = 50,
                          tol: float = FEAS_TOL):
    z = np.asarray(start, float)
    for _ in range(sweeps):
        prev = z
        for o in sets:
            z = o.project(z, norm)
        resid = max(o.dist(z, norm) for o in sets)
        if resid <= tol:
            return z, resid
        if norm.dist(z, prev) <= 1e-15:
            break
    return None, math.inf


def dist_intersection(sets: Sequence[SetOracle], x, norm: Norm = MAX_NORM,
                      seed: int = 0, declared: SetOracle | None = None,
                      restarts: int = 2) -> IntersectionBounds:
    """Certified bounds on the distance from x to the intersection of sets.

    The lower bound is sound: it is the maximum of single-set distances,
    improved to the exact value when the intersection is analytically
    recognizable or a declared oracle is supplied.  The upper bound comes
    from a containment-verified feasible point (slice minimization in the
    plane, alternating projections with seeded restarts otherwise) and is
    +inf when no feasible point was found.
    """
    if not sets:
        raise SetError("need at least one set")
    x = as_point(x)
    per_set = [o.dist(x, norm) for o in sets]
    lower = max(per_set)
    if len(sets) == 1:
        o = sets[0]
        if o.is_empty():
            return IntersectionBounds(math.inf, math.inf, None, exact=True)
        return IntersectionBounds(lower, lower, o.project(x, norm), exact=True)

    oracle = declared
    if oracle is None:
        oracle = recognize_exact_intersection(sets, norm)
    if oracle is not None:
        if oracle.is_empty():
            return IntersectionBounds(math.inf, math.inf, None, exact=True)
        d = oracle.dist(x, norm)
        point = oracle.project(x, norm) if math.isfinite(d) else None
        return IntersectionBounds(max(lower, d), d, point, exact=True)

    dim = sets[0].dim
    if dim == 2 and all(o.sliceable() for o in sets):
        val, point = _slice_upper(sets, x, norm)
        if point is not None:
            resid = max(o.dist(point, norm) for o in sets)
            if resid <= 1e-8:
                return IntersectionBounds(lower, val + resid, point)
        return IntersectionBounds(lower, math.inf, None)

    # generic fallback: candidate projections, then alternating projections
    best_u, best_p = math.inf, None
    for i, o in enumerate(sets):
        try:
            p = o.project(x, norm)
        except EmptySetError:
            return IntersectionBounds(math.inf, math.inf, None, exact=True)
        if all(sets[j].dist(p, norm) <= FEAS_TOL for j in range(len(sets)) if j != i):
            u = norm.dist(p, x)
            if u < best_u:
                best_u, best_p = u, p
    starts = [x]
    rng = rng_for(seed, 0xA17)
    for r in range(restarts):
        starts.append(x + sample_ball(rng, dim, max(lower, 1e-3) * (2.0 ** r), norm))
    for s in starts:
        z, resid = _alternating_feasible(sets, s, norm)
        if z is not None:
            u = norm.dist(z, x) + resid
            if u < best_u:
                best_u, best_p = u, z
    return IntersectionBounds(lower, best_u, best_p)
