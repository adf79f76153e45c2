"""Metric certification engine for transversality properties of set collections.

Three seeded, three-valued certifiers probe the metric characterizations of
the properties:

* ``certify_semi``  d(xbar, inter_i (O_i - x_i)) <= phi(max_i |x_i|)
                    over shift tuples with phi(max_i |x_i|) < delta,
* ``certify_sub``   d(x, inter_i O_i) <= phi(max_i d(x, O_i))
                    over points x in B_delta2(xbar) with the gauge constraint,
* ``certify_full``  d(0, inter_i (O_i - w_i - x_i)) <= phi(max_i |x_i|)
                    over in-set anchors w_i near xbar and shift tuples.

Sampling cannot prove a universally quantified property; a run therefore ends
in HOLDS_ON_SAMPLES, FALSIFIED (with an independently re-checkable witness)
or INCONCLUSIVE.  FALSIFIED rests only on sound lower bounds of intersection
distances (exact single-set distances, declared or recognized analytic
intersections), never on the heuristic upper bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .gauges import Gauge, PowerGauge
from .geometry import MAX_NORM, log_uniform, rng_for, sample_ball, sample_sphere
from .sets import (IntersectionBounds, SamplerExhausted, Scene, SetOracle,
                   dist_intersection, recognize_exact_intersection)

HOLDS = "HOLDS_ON_SAMPLES"
FALSIFIED = "FALSIFIED"
INCONCLUSIVE = "INCONCLUSIVE"

SEMI, SUB, FULL = "semi", "sub", "full"


class CertifyError(ValueError):
    pass


@dataclass(frozen=True)
class PropertyQuery:
    """Which property to certify, with gauge, deltas, budget and seed.

    ``delta`` is used by the semi property; ``delta1``/``delta2`` by sub and
    full.  Perturbation magnitudes are drawn log-uniformly from
    [r_min_frac * scale, scale], where the scale is tied to the deltas
    through the gauge.
    """

    property: str
    gauge: Gauge
    delta: float | None = None
    delta1: float | None = None
    delta2: float | None = None
    budget: int = 1000
    seed: int = 0
    r_min_frac: float = 1e-6

    def __post_init__(self):
        if self.property not in (SEMI, SUB, FULL):
            raise CertifyError(f"unknown property {self.property!r}")
        if self.property == SEMI:
            if self.delta is None or self.delta <= 0:
                raise CertifyError("semi query needs delta > 0")
        else:
            if self.delta1 is None or self.delta1 <= 0 or \
               self.delta2 is None or self.delta2 <= 0:
                raise CertifyError(f"{self.property} query needs delta1, delta2 > 0")
        if self.budget < 1:
            raise CertifyError("budget must be positive")

    @staticmethod
    def semi(gauge: Gauge, delta: float, budget: int = 1000, seed: int = 0,
             **kw) -> "PropertyQuery":
        return PropertyQuery(SEMI, gauge, delta=delta, budget=budget, seed=seed, **kw)

    @staticmethod
    def sub(gauge: Gauge, delta1: float, delta2: float, budget: int = 1000,
            seed: int = 0, **kw) -> "PropertyQuery":
        return PropertyQuery(SUB, gauge, delta1=delta1, delta2=delta2,
                             budget=budget, seed=seed, **kw)

    @staticmethod
    def full(gauge: Gauge, delta1: float, delta2: float, budget: int = 1000,
             seed: int = 0, **kw) -> "PropertyQuery":
        return PropertyQuery(FULL, gauge, delta1=delta1, delta2=delta2,
                             budget=budget, seed=seed, **kw)


@dataclass(frozen=True)
class Verdict:
    status: str
    property: str
    samples_evaluated: int
    skipped: int
    inconclusive_count: int
    min_margin: float
    witness: dict | None
    tol: float
    margins: tuple = field(default=(), repr=False)

    def as_dict(self) -> dict:
        ms = np.asarray(self.margins, dtype=float) if self.margins else np.zeros(0)
        return {
            "status": self.status,
            "property": self.property,
            "samples_evaluated": self.samples_evaluated,
            "skipped": self.skipped,
            "inconclusive_count": self.inconclusive_count,
            "min_margin": self.min_margin,
            "tol": self.tol,
            "witness": self.witness,
            "margin_stats": {
                "count": int(ms.size),
                "min": float(ms.min()) if ms.size else None,
                "median": float(np.median(ms)) if ms.size else None,
                "max": float(ms.max()) if ms.size else None,
            },
        }


class _Tally:
    """Index-ordered accumulation of sample outcomes."""

    def __init__(self, prop: str, tol: float):
        self.prop = prop
        self.tol = tol
        self.evaluated = 0
        self.skipped = 0
        self.inconclusive = 0
        self.min_margin = math.inf
        self.margins: list = []
        self.witness: dict | None = None

    def skip(self):
        self.skipped += 1

    def record(self, bounds: IntersectionBounds, rhs: float, witness: dict) -> bool:
        """Returns True when the sample falsifies (stop the run)."""
        self.evaluated += 1
        margin = rhs - bounds.lower
        self.margins.append(margin)
        if margin < self.min_margin:
            self.min_margin = margin
        res = bounds.resolved(rhs, self.tol)
        if res == "violated":
            witness = dict(witness)
            witness["rhs"] = rhs
            witness["lower_bound"] = bounds.lower
            self.witness = witness
            return True
        if res == "unresolved":
            self.inconclusive += 1
        return False

    def verdict(self) -> Verdict:
        if self.witness is not None:
            status = FALSIFIED
        elif self.inconclusive > 0:
            status = INCONCLUSIVE
        else:
            status = HOLDS
        return Verdict(status=status, property=self.prop,
                       samples_evaluated=self.evaluated, skipped=self.skipped,
                       inconclusive_count=self.inconclusive,
                       min_margin=self.min_margin if self.margins else math.inf,
                       witness=self.witness, tol=self.tol,
                       margins=tuple(self.margins))


def _draw_shift_tuple(rng: np.random.Generator, n: int, dim: int, magnitude: float,
                      norm=MAX_NORM) -> list:
    """n shift vectors with max norm exactly ``magnitude``.

    A quarter of the draws are signed axis patterns; worst-case arrangements
    in the examples are axis-aligned, and pure box sampling reaches them
    too slowly.
    """
    if rng.uniform() < 0.25:
        shifts = []
        for _ in range(n):
            v = np.zeros(dim)
            v[rng.integers(dim)] = rng.choice([-1.0, 1.0])
            shifts.append(v * rng.uniform(0.25, 1.0))
    else:
        shifts = [sample_ball(rng, dim, 1.0, norm) for _ in range(n)]
    mx = max(norm(v) for v in shifts)
    if mx <= 1e-15:
        shifts[0] = np.zeros(dim)
        shifts[0][0] = 1.0
        mx = 1.0
    return [v * (magnitude / mx) for v in shifts]


def _run(budget: int, body: Callable[[int], bool]) -> None:
    """Evaluate sample indices 0..budget-1 in order, stopping at the first
    falsifier.  Sample evaluations are independent (per-index seeded), so the
    result is the same for any parallel execution that reduces in index
    order."""
    for i in range(budget):
        if body(i):
            return


_GOLDEN = 0.6180339887498949


def _draw_probe_offset(rng: np.random.Generator, i: int, dim: int, norm,
                       r_min: float, r_max: float) -> np.ndarray:
    """Shared probe-point sampler: log-uniform magnitude with a mixture of
    axis patterns, a low-discrepancy sphere sweep, and random directions.
    Certifiers that must agree sample-for-sample all draw through this."""
    m = log_uniform(rng, r_min, r_max)
    mode = rng.uniform()
    if mode < 0.2:
        direction = np.zeros(dim)
        direction[rng.integers(dim)] = rng.choice([-1.0, 1.0])
    elif mode < 0.5:
        direction = _sweep_direction(i * _GOLDEN, dim, norm, rng)
    else:
        direction = sample_sphere(rng, dim, 1.0, norm)
    return m * direction


def _sweep_direction(u: float, dim: int, norm, rng: np.random.Generator) -> np.ndarray:
    """Low-discrepancy unit-sphere direction: an equidistributed walk around
    the planar sphere boundary, random elsewhere.  Guarantees that narrow
    violating direction cones are eventually probed in the plane."""
    if dim == 2:
        if norm.kind == "max":
            v = 8.0 * (u % 1.0)
            k = int(v // 2)
            w = v - 2.0 * k - 1.0
            return np.asarray([(1.0, w), (w, 1.0), (-1.0, w), (w, -1.0)][k])
        th = 2.0 * math.pi * (u % 1.0)
        return np.asarray([math.cos(th), math.sin(th)])
    return sample_sphere(rng, dim, 1.0, norm)


def certify_semi(scene: Scene, query: PropertyQuery) -> Verdict:
    """Sampled check that small translations keep the intersection near xbar."""
    if query.property != SEMI:
        raise CertifyError("query.property must be 'semi'")
    g, delta = query.gauge, query.delta
    n, dim, norm = len(scene.sets), scene.dim, scene.norm
    x_bar = scene.x_bar
    r_max = g.invert(delta) * (1.0 - 1e-12)
    r_min = query.r_min_frac * r_max
    tally = _Tally(SEMI, scene.tolerance)

    def body(i: int) -> bool:
        rng = rng_for(query.seed, i)
        m = log_uniform(rng, r_min, r_max)
        shifts = _draw_shift_tuple(rng, n, dim, m, norm)
        rho = g(m)
        if not rho < delta:
            tally.skip()
            return False
        translated = [o.translated(s) for o, s in zip(scene.sets, shifts)]
        bounds = dist_intersection(translated, x_bar, norm,
                                   seed=query.seed * 1_000_003 + i)
        return tally.record(bounds, rho, {
            "kind": SEMI, "shifts": [s.tolist() for s in shifts],
            "magnitude": m, "sample_index": i,
        })

    _run(query.budget, body)
    return tally.verdict()


def certify_sub(scene: Scene, query: PropertyQuery) -> Verdict:
    """Sampled error-bound check: distance to the intersection against the
    gauge of the worst single-set distance, near xbar."""
    if query.property != SUB:
        raise CertifyError("query.property must be 'sub'")
    g, d1, d2 = query.gauge, query.delta1, query.delta2
    dim, norm = scene.dim, scene.norm
    x_bar = scene.x_bar
    r_max = d2 * (1.0 - 1e-12)
    r_min = query.r_min_frac * r_max
    tally = _Tally(SUB, scene.tolerance)

    def body(i: int) -> bool:
        rng = rng_for(query.seed, i)
        x = x_bar + _draw_probe_offset(rng, i, dim, norm, r_min, r_max)
        per_set = [o.dist(x, norm) for o in scene.sets]
        worst = max(per_set)
        if worst <= 1e-15:
            tally.skip()  # x already in the intersection
            return False
        rho = g(worst)
        if not rho < d1:
            tally.skip()
            return False
        bounds = dist_intersection(list(scene.sets), x, norm,
                                   seed=query.seed * 1_000_003 + i,
                                   declared=scene.intersection)
        return tally.record(bounds, rho, {
            "kind": SUB, "point": x.tolist(), "per_set_distances": per_set,
            "sample_index": i,
        })

    _run(query.budget, body)
    return tally.verdict()


def certify_full(scene: Scene, query: PropertyQuery) -> Verdict:
    """Sampled check of the anchored characterization: translations around
    in-set anchors near xbar keep the shifted intersection near the origin."""
    if query.property != FULL:
        raise CertifyError("query.property must be 'full'")
    g, d1, d2 = query.gauge, query.delta1, query.delta2
    n, dim, norm = len(scene.sets), scene.dim, scene.norm
    x_bar = scene.x_bar
    r_max = g.invert(d1) * (1.0 - 1e-12)
    r_min = query.r_min_frac * r_max
    origin = np.zeros(dim)
    tally = _Tally(FULL, scene.tolerance)

    def body(i: int) -> bool:
        rng = rng_for(query.seed, i)
        mode = rng.uniform()
        if mode < 0.5:
            # correlated proposal: anchors are projections of a common probe
            # point and shifts its residuals, realizing the equivalent
            # free-point characterization inside the anchored one
            probe_r = log_uniform(rng, r_min, min(r_max, d2))

            def config_at(u: float):
                p = x_bar + probe_r * _sweep_direction(u, dim, norm, rng)
                ws = [o.project(p, norm) for o in scene.sets]
                ss = [p - w for w in ws]
                mm = max(norm(s) for s in ss)
                if mm <= 1e-15 or any(norm(w - x_bar) >= d2 for w in ws):
                    return None
                return ws, ss, mm

            u0 = i * _GOLDEN
            cfg = config_at(u0)
            if dim == 2 and i % 4 == 0 and cfg is not None:
                # local descent on the violation margin along the sphere boundary
                def margin(u: float) -> float:
                    c = config_at(u)
                    if c is None:
                        return math.inf
                    ws, ss, mm = c
                    tr = [o.translated(w + s) for o, w, s in zip(scene.sets, ws, ss)]
                    return g(mm) - dist_intersection(tr, origin, norm,
                                                     seed=query.seed * 31 + i).lower

                lo_u, hi_u = u0 - 0.02, u0 + 0.02
                for _ in range(12):
                    m1 = lo_u + (hi_u - lo_u) / 3.0
                    m2 = hi_u - (hi_u - lo_u) / 3.0
                    if margin(m1) <= margin(m2):
                        hi_u = m2
                    else:
                        lo_u = m1
                u_best = 0.5 * (lo_u + hi_u)
                refined = config_at(u_best)
                if refined is not None and margin(u_best) < margin(u0):
                    cfg = refined
            if cfg is None:
                tally.skip()
                return False
            anchors, shifts, m = cfg
        else:
            if mode < 0.55:
                anchors = [x_bar.copy() for _ in scene.sets]
            else:
                try:
                    anchors = [o.sample_near(x_bar, d2 * (1 - 1e-12), 1, rng, norm)[0]
                               for o in scene.sets]
                except SamplerExhausted:
                    tally.skip()
                    return False
            m = log_uniform(rng, r_min, r_max)
            shifts = _draw_shift_tuple(rng, n, dim, m, norm)
        rho = g(m)
        if not rho < d1:
            tally.skip()
            return False
        translated = [o.translated(w + s)
                      for o, w, s in zip(scene.sets, anchors, shifts)]
        bounds = dist_intersection(translated, origin, norm,
                                   seed=query.seed * 1_000_003 + i)
        return tally.record(bounds, rho, {
            "kind": FULL, "anchors": [w.tolist() for w in anchors],
            "shifts": [s.tolist() for s in shifts], "magnitude": m,
            "sample_index": i,
        })

    _run(query.budget, body)
    return tally.verdict()


def certify(scene: Scene, query: PropertyQuery) -> Verdict:
    return {SEMI: certify_semi, SUB: certify_sub, FULL: certify_full}[query.property](scene, query)


# ----------------------------------------------------------------------------
# equivalent reformulations of the full property
# ----------------------------------------------------------------------------

def full_delta_translation(gauge: Gauge, delta1: float, delta2: float) -> tuple[float, float]:
    """Parameters (delta1', delta2') with invert(delta1') + delta2' <= delta2,
    used when moving between the anchored definition and its reformulations."""
    d1p = min(delta1, gauge(delta2 / 2.0))
    d2p = delta2 - gauge.invert(d1p)
    return d1p, max(d2p, delta2 / 2.0)


def certify_full_variants(scene: Scene, query: PropertyQuery) -> dict:
    """Evaluate the three equivalent reformulations of the full property on a
    shared sample stream.

    ``anchored`` quantifies in-set anchors with translated sums near xbar;
    ``ref_point`` pins the probe point at xbar and measures per-set residuals
    of translated sets; ``free_point`` moves both the probe point and the
    translations.  The dict also reports the delta translation that connects
    the reformulations with the anchored definition.
    """
    if query.property != FULL:
        raise CertifyError("query.property must be 'full'")
    g, d1, d2 = query.gauge, query.delta1, query.delta2
    n, dim, norm = len(scene.sets), scene.dim, scene.norm
    x_bar = scene.x_bar
    origin = np.zeros(dim)
    r_max = g.invert(d1) * (1.0 - 1e-12)
    r_min = query.r_min_frac * r_max
    tallies = {"anchored": _Tally(FULL, scene.tolerance),
               "ref_point": _Tally(FULL, scene.tolerance),
               "free_point": _Tally(FULL, scene.tolerance)}
    done = {k: False for k in tallies}

    for i in range(query.budget):
        rng = rng_for(query.seed, i)
        m = log_uniform(rng, r_min, r_max)
        shifts = _draw_shift_tuple(rng, n, dim, m, norm)
        rho = g(m)

        if not done["anchored"]:
            # anchors with anchor + shift inside B_delta2(xbar)
            try:
                anchors = [o.sample_near(x_bar - s, d2 * (1 - 1e-12), 1, rng, norm)[0]
                           for o, s in zip(scene.sets, shifts)]
                translated = [o.translated(w + s)
                              for o, w, s in zip(scene.sets, anchors, shifts)]
                bounds = dist_intersection(translated, origin, norm,
                                           seed=query.seed * 7_368_787 + i)
                done["anchored"] = tallies["anchored"].record(bounds, rho, {
                    "kind": "full_anchored", "anchors": [w.tolist() for w in anchors],
                    "shifts": [s.tolist() for s in shifts], "sample_index": i})
            except SamplerExhausted:
                tallies["anchored"].skip()

        if not done["ref_point"]:
            # shifts within delta2, rhs from residuals of the translated sets
            scale = min(1.0, d2 * (1 - 1e-12) / max(m, 1e-300))
            ref_shifts = [s * scale for s in shifts]
            translated = [o.translated(s) for o, s in zip(scene.sets, ref_shifts)]
            residuals = [o.dist(x_bar, norm) for o in translated]
            rhs = g(max(residuals))
            if max(residuals) <= 1e-15 or not rhs < d1:
                tallies["ref_point"].skip()
            else:
                bounds = dist_intersection(translated, x_bar, norm,
                                           seed=query.seed * 9_999_991 + i)
                done["ref_point"] = tallies["ref_point"].record(bounds, rhs, {
                    "kind": "full_ref_point", "shifts": [s.tolist() for s in ref_shifts],
                    "residuals": residuals, "sample_index": i})

        if not done["free_point"]:
            # probe point x and shifts with x + shift inside B_delta2(xbar)
            x = x_bar + sample_ball(rng, dim, 0.5 * d2, norm)
            room = d2 * (1 - 1e-12) - norm(x - x_bar)
            free_shifts = [(x_bar - x) + sample_ball(rng, dim, room, norm)
                           for _ in range(n)]
            translated = [o.translated(s) for o, s in zip(scene.sets, free_shifts)]
            residuals = [o.dist(x, norm) for o in translated]
            rhs = g(max(residuals))
            if max(residuals) <= 1e-15 or not rhs < d1:
                tallies["free_point"].skip()
            else:
                bounds = dist_intersection(translated, x, norm,
                                           seed=query.seed * 4_999_999 + i)
                done["free_point"] = tallies["free_point"].record(bounds, rhs, {
                    "kind": "full_free_point", "point": x.tolist(),
                    "shifts": [s.tolist() for s in free_shifts],
                    "residuals": residuals, "sample_index": i})

        if all(done.values()):
            break

    d1p, d2p = full_delta_translation(g, d1, d2)
    return {
        "anchored": tallies["anchored"].verdict(),
        "ref_point": tallies["ref_point"].verdict(),
        "free_point": tallies["free_point"].verdict(),
        "delta_translation": {"delta1_prime": d1p, "delta2_prime": d2p},
    }


# ----------------------------------------------------------------------------
# restricted (one-sided) characterizations for two sets
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class RestrictedResult:
    premise: Verdict
    implied: dict | None          # implied property parameters when premise holds
    cross_check: Verdict | None   # direct certifier run on the implied claim


def certify_restricted(scene: Scene, alpha: float, t_bar: float, which: str,
                       gauge: Gauge | None = None, delta2: float | None = None,
                       budget: int = 400, seed: int = 0,
                       cross_check: bool = True) -> RestrictedResult:
    """Restricted sufficient conditions for two sets.

    The premise translates only the first set (``which='semi'``), restricts
    the probe point to the second set (``which='sub'``), or anchors both sets
    and translates the first (``which='full'``).  The premise gauge must
    satisfy phi(t) <= alpha * t on (0, t_bar]; when it holds on samples the
    implied two-sided property has linear modulus 1/(1+2*alpha) and
    delta = (alpha + 1/2) * t_bar, which is then cross-checked with the
    matching direct certifier.
    """
    if len(scene.sets) != 2:
        raise CertifyError("restricted certification is defined for two sets")
    if which not in (SEMI, SUB, FULL):
        raise CertifyError("which must be 'semi', 'sub' or 'full'")
    if alpha <= 0 or t_bar <= 0:
        raise CertifyError("alpha and t_bar must be positive")
    g = gauge if gauge is not None else PowerGauge(alpha=1.0 / alpha, q=1.0)
    for t in np.geomspace(t_bar * 1e-9, t_bar, 64):
        if g(float(t)) > alpha * float(t) * (1 + 1e-12):
            raise CertifyError("premise gauge exceeds alpha * t on (0, t_bar]")
    d2 = delta2 if delta2 is not None else t_bar
    o1, o2 = scene.sets
    x_bar, norm = scene.x_bar, scene.norm
    tally = _Tally(which, scene.tolerance)

    def body(i: int) -> bool:
        rng = rng_for(seed, i)
        if which == SEMI:
            m = log_uniform(rng, 1e-6 * t_bar, t_bar * (1 - 1e-12))
            x = m * sample_sphere(rng, scene.dim, 1.0, norm)
            bounds = dist_intersection([o1.translated(x), o2], x_bar, norm,
                                       seed=seed * 1_000_003 + i)
            return tally.record(bounds, g(norm(x)), {
                "kind": "restricted_semi", "shift": x.tolist(), "sample_index": i})
        if which == SUB:
            try:
                x = o2.sample_near(x_bar, 2 * d2 * (1 - 1e-12), 1, rng, norm)[0]
            except SamplerExhausted:
                tally.skip()
                return False
            gap = o1.dist(x, norm)
            if gap <= 1e-15 or gap >= t_bar:
                tally.skip()
                return False
            bounds = dist_intersection(list(scene.sets), x, norm,
                                       seed=seed * 1_000_003 + i,
                                       declared=scene.intersection)
            return tally.record(bounds, g(gap), {
                "kind": "restricted_sub", "point": x.tolist(), "gap": gap,
                "sample_index": i})
        try:
            w1 = o1.sample_near(x_bar, d2 * (1 - 1e-12), 1, rng, norm)[0]
            w2 = o2.sample_near(x_bar, d2 * (1 - 1e-12), 1, rng, norm)[0]
        except SamplerExhausted:
            tally.skip()
            return False
        m = log_uniform(rng, 1e-6 * t_bar, t_bar * (1 - 1e-12))
        x = m * sample_sphere(rng, scene.dim, 1.0, norm)
        bounds = dist_intersection([o1.translated(w1 + x), o2.translated(w2)],
                                   np.zeros(scene.dim), norm,
                                   seed=seed * 1_000_003 + i)
        return tally.record(bounds, g(norm(x)), {
            "kind": "restricted_full", "anchors": [w1.tolist(), w2.tolist()],
            "shift": x.tolist(), "sample_index": i})

    _run(budget, body)
    premise = tally.verdict()
    implied = None
    check = None
    if premise.status == HOLDS:
        alpha_prime = 1.0 / (1.0 + 2.0 * alpha)
        delta_implied = (alpha + 0.5) * t_bar
        implied = {"alpha_prime": alpha_prime, "order": 1.0,
                   "delta": delta_implied, "delta2": d2}
        if cross_check:
            implied_gauge = PowerGauge(alpha=alpha_prime, q=1.0)
            if which == SEMI:
                q = PropertyQuery.semi(implied_gauge, delta_implied,
                                       budget=budget, seed=seed + 1)
            elif which == SUB:
                q = PropertyQuery.sub(implied_gauge, delta_implied, d2,
                                      budget=budget, seed=seed + 1)
            else:
                q = PropertyQuery.full(implied_gauge, delta_implied, d2,
                                       budget=budget, seed=seed + 1)
            check = certify(scene, q)
    return RestrictedResult(premise=premise, implied=implied, cross_check=check)


def restricted_necessary(scene: Scene, gauge: Gauge, which: str,
                         delta: float = 1.0, delta2: float = 1.0,
                         budget: int = 400, seed: int = 0) -> Verdict:
    """One-sided necessary checks: translate all but the last set (semi/full)
    or restrict the probe point to the last set (sub).

    A FALSIFIED verdict here falsifies the corresponding two-sided property,
    which makes these cheap falsification accelerators.
    """
    if which not in (SEMI, SUB, FULL):
        raise CertifyError("which must be 'semi', 'sub' or 'full'")
    n, dim, norm = len(scene.sets), scene.dim, scene.norm
    if n < 2:
        raise CertifyError("need at least two sets")
    x_bar = scene.x_bar
    g = gauge
    tally = _Tally(which, scene.tolerance)
    r_max = g.invert(delta) * (1 - 1e-12)

    def body(i: int) -> bool:
        rng = rng_for(seed, i)
        if which == SEMI:
            m = log_uniform(rng, 1e-6 * r_max, r_max)
            shifts = _draw_shift_tuple(rng, n - 1, dim, m, norm)
            translated = [o.translated(s) for o, s in zip(scene.sets[:-1], shifts)]
            translated.append(scene.sets[-1])
            bounds = dist_intersection(translated, x_bar, norm, seed=seed * 31 + i)
            return tally.record(bounds, g(m), {
                "kind": "necessary_semi", "shifts": [s.tolist() for s in shifts],
                "sample_index": i})
        if which == SUB:
            try:
                x = scene.sets[-1].sample_near(x_bar, delta2 * (1 - 1e-12), 1, rng, norm)[0]
            except SamplerExhausted:
                tally.skip()
                return False
            worst = max(o.dist(x, norm) for o in scene.sets[:-1])
            if worst <= 1e-15 or not g(worst) < delta:
                tally.skip()
                return False
            bounds = dist_intersection(list(scene.sets), x, norm,
                                       seed=seed * 31 + i,
                                       declared=scene.intersection)
            return tally.record(bounds, g(worst), {
                "kind": "necessary_sub", "point": x.tolist(), "sample_index": i})
        try:
            anchors = [o.sample_near(x_bar, delta2 * (1 - 1e-12), 1, rng, norm)[0]
                       for o in scene.sets]
        except SamplerExhausted:
            tally.skip()
            return False
        m = log_uniform(rng, 1e-6 * r_max, r_max)
        shifts = _draw_shift_tuple(rng, n - 1, dim, m, norm)
        translated = [o.translated(w + s)
                      for o, w, s in zip(scene.sets[:-1], anchors[:-1], shifts)]
        translated.append(scene.sets[-1].translated(anchors[-1]))
        bounds = dist_intersection(translated, np.zeros(dim), norm, seed=seed * 31 + i)
        return tally.record(bounds, g(m), {
            "kind": "necessary_full", "anchors": [w.tolist() for w in anchors],
            "shifts": [s.tolist() for s in shifts], "sample_index": i})

    _run(budget, body)
    return tally.verdict()


# ----------------------------------------------------------------------------
# anchor-reduction equivalence for the error-bound inequality
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class ReductionReport:
    direct: str          # "holds" / "fails" / "unresolved"
    all_anchors: str
    bounded_anchors: str
    gauge_filtered: str
    agrees: bool


def witness_reduction_equivalence(scene: Scene, x, gauge: Gauge,
                                  budget: int = 200, seed: int = 0) -> ReductionReport:
    """Check, at a single probe point, that the error-bound inequality and its
    anchor-quantified reformulations agree.

    The reformulations replace per-set distances with distances to sampled
    in-set anchors, quantified over all anchors, anchors in a norm ball, and
    anchors passing a gauge filter.  Disagreement beyond tolerance indicates
    a bug in the oracles.
    """
    x = np.asarray(x, dtype=float)
    norm, x_bar = scene.norm, scene.x_bar
    tol = scene.tolerance
    per_set = [o.dist(x, norm) for o in scene.sets]
    if max(per_set) <= 1e-15:
        raise CertifyError("probe point lies in the intersection")
    bounds = dist_intersection(list(scene.sets), x, norm, seed=seed,
                               declared=scene.intersection)
    res = bounds.resolved(gauge(max(per_set)), tol)
    direct = {"satisfied": "holds", "violated": "fails", "unresolved": "unresolved"}[res]

    r = norm(x - x_bar)
    bound_radius = r + gauge.invert(r)
    spread = max(per_set) + bound_radius + 1.0

    def anchored(filter_fn) -> str:
        saw_fail = False
        saw_unresolved = False
        count = 0
        for i in range(budget):
            rng = rng_for(seed, 101, i)
            try:
                anchors = [o.sample_near(x_bar, spread, 1, rng, norm)[0]
                           for o in scene.sets]
            except SamplerExhausted:
                continue
            if not filter_fn(anchors):
                continue
            count += 1
            rhs = gauge(max(norm(x - w) for w in anchors))
            out = bounds.resolved(rhs, tol)
            if out == "violated":
                saw_fail = True
                break
            if out == "unresolved":
                saw_unresolved = True
        if saw_fail:
            return "fails"
        if saw_unresolved:
            return "unresolved"
        return "holds"

    all_anchors = anchored(lambda ws: True)
    bounded = anchored(lambda ws: all(norm(w - x_bar) < bound_radius for w in ws))
    filtered = anchored(lambda ws: all(gauge(norm(w - x)) < r for w in ws))
    # the gauge-filtered variant is vacuously true alongside d(x, inter) <= |x - xbar|
    if filtered == "holds" and bounds.upper > r + tol and direct == "fails":
        filtered = "fails" if bounds.lower > r + tol else filtered

    statuses = {direct, all_anchors, bounded, filtered}
    agrees = not ({"holds", "fails"} <= statuses)
    return ReductionReport(direct=direct, all_anchors=all_anchors,
                           bounded_anchors=bounded, gauge_filtered=filtered,
                           agrees=agrees)


# ----------------------------------------------------------------------------
# modulus estimation
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class ModulusEstimate:
    lo: float
    hi: float
    q: float
    property: str
    note: str = ""

    def contains(self, value: float) -> bool:
        return self.lo - 1e-12 <= value <= self.hi + 1e-12

    @property
    def width(self) -> float:
        return self.hi - self.lo


def estimate_modulus(scene: Scene, prop: str, q: float, budget: int = 400,
                     seed: int = 0, delta_max: float = 1.0,
                     sweep_len: int = 8, width_rel: float = 0.02,
                     alpha_cap: float = 2.0 ** 16) -> ModulusEstimate:
    """Bracket the order-q modulus: the supremum of alpha such that the
    property with gauge t**q / alpha holds for some admissible delta.

    Each alpha is probed with a geometric delta sweep (the property only
    requires one delta to work); alpha counts as infeasible when every delta
    in the sweep is falsified, or as exhausted when sampling cannot resolve
    it.  Bisection narrows the bracket to the requested relative width.
    """
    if prop not in (SEMI, SUB, FULL):
        raise CertifyError("property must be 'semi', 'sub' or 'full'")
    if prop != SEMI and not 0 < q <= 1:
        raise CertifyError("sub/full moduli are meaningful only for 0 < q <= 1")
    if q <= 0:
        raise CertifyError("q must be positive")

    notes = []

    def probe(alpha: float, probe_seed: int) -> str:
        gauge = PowerGauge(alpha=alpha, q=q)
        outcomes = []
        for k in range(sweep_len):
            d = delta_max * 2.0 ** (-k)
            if prop == SEMI:
                query = PropertyQuery.semi(gauge, d, budget=budget, seed=probe_seed + k)
                v = certify_semi(scene, query)
            elif prop == SUB:
                query = PropertyQuery.sub(gauge, d, d, budget=budget, seed=probe_seed + k)
                v = certify_sub(scene, query)
            else:
                query = PropertyQuery.full(gauge, d, d, budget=budget, seed=probe_seed + k)
                v = certify_full(scene, query)
            if v.status == HOLDS:
                return "feasible"
            outcomes.append(v.status)
        if all(s == FALSIFIED for s in outcomes):
            return "infeasible"
        return "exhausted"

    # expand a bracket around alpha = 1
    lo = hi = None
    alpha = 1.0
    state = probe(alpha, seed)
    if state == "feasible":
        lo = alpha
        while hi is None:
            alpha *= 2.0
            if alpha > alpha_cap:
                notes.append(f"no falsification up to alpha={alpha_cap}")
                return ModulusEstimate(lo=lo, hi=math.inf, q=q, property=prop,
                                       note="; ".join(notes))
            if probe(alpha, seed) != "feasible":
                hi = alpha
    else:
        hi = alpha
        while lo is None:
            alpha *= 0.5
            if alpha < 1.0 / alpha_cap:
                notes.append("property seen falsified down to alpha ~ 0")
                return ModulusEstimate(lo=0.0, hi=hi, q=q, property=prop,
                                       note="; ".join(notes))
            if probe(alpha, seed) == "feasible":
                lo = alpha

    while hi - lo > width_rel * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if probe(mid, seed) == "feasible":
            lo = mid
        else:
            hi = mid
    return ModulusEstimate(lo=lo, hi=hi, q=q, property=prop, note="; ".join(notes))


# ----------------------------------------------------------------------------
# necessary gauge condition on boundary scenes
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class GaugeCheckReport:
    applicable: bool
    passes: bool | None
    t_bar: float | None
    violation_t: float | None
    alarm: bool


def necessary_gauge_check(scene: Scene, gauge: Gauge, delta1: float, delta2: float,
                          sub_verdict: Verdict | None = None,
                          grid: int = 400) -> GaugeCheckReport:
    """For boundary basepoints the error-bound property forces phi(t) >= t
    near 0; scan a log grid and raise a consistency alarm when the scan fails
    while a sub certification reported HOLDS_ON_SAMPLES."""
    if not scene.boundary_basepoint:
        return GaugeCheckReport(applicable=False, passes=None, t_bar=None,
                                violation_t=None, alarm=False)
    t_bar = min(delta2, gauge.invert(delta1))
    violation = None
    for t in np.geomspace(t_bar * 1e-9, t_bar, grid):
        if gauge(float(t)) < float(t) * (1.0 - 1e-12):
            violation = float(t)
            break
    passes = violation is None
    alarm = (not passes) and sub_verdict is not None and sub_verdict.status == HOLDS
    return GaugeCheckReport(applicable=True, passes=passes, t_bar=t_bar,
                            violation_t=violation, alarm=alarm)


# ----------------------------------------------------------------------------
# witness rechecking
# ----------------------------------------------------------------------------

def recheck_witness(scene: Scene, gauge: Gauge, witness: dict) -> bool:
    """Recompute a FALSIFIED witness from scratch with fresh oracles.

    Uses only sound lower bounds: exact single-set distances plus declared or
    recognized analytic intersections.
    """
    norm, x_bar = scene.norm, scene.x_bar
    tol = scene.tolerance
    kind = witness.get("kind")
    if kind in (SEMI, "restricted_semi", "necessary_semi"):
        shifts = [np.asarray(s) for s in (witness.get("shifts")
                                          or [witness["shift"]])]
        translated = [o.translated(s) for o, s in zip(scene.sets, shifts)]
        translated.extend(scene.sets[len(translated):])
        rhs = gauge(max(norm(s) for s in shifts))
        point = x_bar
    elif kind in (SUB, "restricted_sub", "necessary_sub"):
        point = np.asarray(witness["point"])
        translated = list(scene.sets)
        limit = len(scene.sets) - 1 if kind == "necessary_sub" else len(scene.sets)
        rhs = gauge(max(o.dist(point, norm) for o in translated[:limit]))
    elif kind in (FULL, "full_anchored", "restricted_full", "necessary_full"):
        anchors = [np.asarray(w) for w in witness["anchors"]]
        shifts = [np.asarray(s) for s in witness["shifts"]]
        shifts = shifts + [np.zeros(scene.dim)] * (len(scene.sets) - len(shifts))
        translated = [o.translated(w + s)
                      for o, w, s in zip(scene.sets, anchors, shifts)]
        rhs = gauge(max(norm(s) for s in shifts if norm(s) > 0))
        point = np.zeros(scene.dim)
    elif kind in ("full_ref_point",):
        shifts = [np.asarray(s) for s in witness["shifts"]]
        translated = [o.translated(s) for o, s in zip(scene.sets, shifts)]
        rhs = gauge(max(o.dist(x_bar, norm) for o in translated))
        point = x_bar
    elif kind in ("full_free_point",):
        shifts = [np.asarray(s) for s in witness["shifts"]]
        point = np.asarray(witness["point"])
        translated = [o.translated(s) for o, s in zip(scene.sets, shifts)]
        rhs = gauge(max(o.dist(point, norm) for o in translated))
    else:
        raise CertifyError(f"unknown witness kind {kind!r}")

    lower = max(o.dist(point, norm) for o in translated)
    declared = scene.intersection if translated == list(scene.sets) else None
    oracle = declared or recognize_exact_intersection(translated, norm)
    if oracle is not None:
        lower = max(lower, oracle.dist(point, norm))
    return lower > rhs + tol
