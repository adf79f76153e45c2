"""Norms, balls and product-space bookkeeping.

Everything downstream works in finite-dimensional real coordinate space.
Products of spaces are represented by concatenating coordinates and, unless a
scene opts into the Euclidean norm, are measured with the maximum norm
``|(x, y)| = max(|x|, |y|)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX = "max"
EUCLIDEAN = "euclidean"

_NORM_KINDS = (MAX, EUCLIDEAN)


class GeometryError(ValueError):
    pass


def as_point(x) -> np.ndarray:
    p = np.asarray(x, dtype=float)
    if p.ndim == 0:
        p = p.reshape(1)
    if p.ndim != 1:
        raise GeometryError(f"point must be a 1-d vector, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise GeometryError("point has non-finite entries")
    return p


@dataclass(frozen=True)
class Norm:
    """A norm choice: ``max`` (default, coordinate maximum) or ``euclidean``."""

    kind: str = MAX

    def __post_init__(self):
        if self.kind not in _NORM_KINDS:
            raise GeometryError(f"unknown norm kind {self.kind!r}")

    def __call__(self, v) -> float:
        v = np.asarray(v, dtype=float)
        if v.size == 0:
            return 0.0
        if self.kind == MAX:
            return float(np.max(np.abs(v)))
        return float(np.sqrt(np.dot(v, v)))

    def dist(self, a, b) -> float:
        return self(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))


MAX_NORM = Norm(MAX)
EUCLIDEAN_NORM = Norm(EUCLIDEAN)


@dataclass(frozen=True)
class GammaNorm:
    """Product norm max(|x|, gamma * max_i |x_i|) on n leading blocks plus a free block.

    Reduces to the plain product maximum norm at gamma = 1, and to |x| at n = 0.
    """

    gamma: float
    n: int
    base: Norm = MAX_NORM

    def __post_init__(self):
        if self.gamma <= 0:
            raise GeometryError("gamma must be positive")
        if self.n < 0:
            raise GeometryError("n must be nonnegative")

    def of(self, blocks, x) -> float:
        if len(blocks) != self.n:
            raise GeometryError(f"expected {self.n} blocks, got {len(blocks)}")
        best = self.base(x)
        for b in blocks:
            best = max(best, self.gamma * self.base(b))
        return best

    def dist(self, blocks_a, xa, blocks_b, xb) -> float:
        diffs = [np.asarray(a, float) - np.asarray(b, float)
                 for a, b in zip(blocks_a, blocks_b, strict=True)]
        return self.of(diffs, np.asarray(xa, float) - np.asarray(xb, float))


def gamma_norm(blocks, x, gamma: float, base: Norm = MAX_NORM) -> float:
    return GammaNorm(gamma=gamma, n=len(blocks), base=base).of(blocks, x)


def rng_for(seed: int, *indices: int) -> np.random.Generator:
    """Deterministic child stream for (seed, call/sample indices)."""
    return np.random.default_rng(np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF,
                                                         *(int(i) for i in indices)]))


def sample_ball(rng: np.random.Generator, dim: int, radius: float,
                norm: Norm = MAX_NORM) -> np.ndarray:
    """Uniform-ish point of the closed ball of the given radius around 0."""
    if norm.kind == MAX:
        return rng.uniform(-radius, radius, size=dim)
    v = rng.normal(size=dim)
    nv = np.sqrt(np.dot(v, v))
    if nv == 0.0:
        return np.zeros(dim)
    r = radius * rng.uniform() ** (1.0 / dim)
    return (r / nv) * v


def sample_sphere(rng: np.random.Generator, dim: int, radius: float,
                  norm: Norm = MAX_NORM) -> np.ndarray:
    """Point with norm exactly ``radius`` (up to roundoff)."""
    for _ in range(16):
        v = sample_ball(rng, dim, 1.0, norm)
        nv = norm(v)
        if nv > 1e-12:
            return (radius / nv) * v
    v = np.zeros(dim)
    v[0] = radius
    return v


def lex_less(a: np.ndarray, b: np.ndarray) -> bool:
    """Strict lexicographic order on coordinate vectors."""
    for ai, bi in zip(a, b):
        if ai < bi:
            return True
        if ai > bi:
            return False
    return False


def log_uniform(rng: np.random.Generator, lo: float, hi: float) -> float:
    """Log-uniform draw from [lo, hi]; requires 0 < lo <= hi."""
    if not (0 < lo <= hi):
        raise GeometryError(f"bad log-uniform range [{lo}, {hi}]")
    if lo == hi:
        return lo
    return float(np.exp(rng.uniform(np.log(lo), np.log(hi))))
