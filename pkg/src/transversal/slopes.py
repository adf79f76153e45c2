"""Slope calculus and slope-based sufficient-condition checkers.

The (local) slope of f at x is the limsup of [f(x) - f(u)]+ / d(x, u) as
u -> x; the nonlocal slope takes the supremum over all u with f clamped below
at zero.  Neither limit has a finite computational recipe, so estimators
report a shell table (max difference quotient per shrinking radius) plus the
smallest-shell value, and sampled suprema can only under-estimate.

The checkers for the sufficient conditions evaluate the nonlocal gamma-slope
of the coupled objective

    f(u_1..u_n, u) = phi(max_i |u_i - x_i - u|)   restricted to u_i in O_i

at anchors drawn according to each condition's constraint system.  A
violation report is evidence, not proof: it is produced only when every
admissible descent budget (the lambda grid) exhibits a qualifying anchor
whose sampled slope stays below 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .gauges import Gauge
from .geometry import MAX_NORM, Norm, log_uniform, rng_for, sample_ball, sample_sphere
from .sets import SamplerExhausted, Scene, SetOracle, dist_intersection

CONDITION_TRUE = "CONDITION_SEEN_TRUE"
CONDITION_FALSE = "CONDITION_SEEN_FALSE"


class SlopeError(ValueError):
    pass


# ----------------------------------------------------------------------------
# sampled functions and plain slopes
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class SampledFunction:
    """A function known on a finite point list; +inf marks excluded points."""

    points: tuple
    values: tuple
    norm: Norm = MAX_NORM

    def __post_init__(self):
        pts = tuple(np.atleast_1d(np.asarray(p, float)) for p in self.points)
        vals = tuple(float(v) for v in self.values)
        if len(pts) != len(vals) or not pts:
            raise SlopeError("points and values must align and be nonempty")
        if not any(math.isfinite(v) for v in vals):
            raise SlopeError("need at least one finite value")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class SlopeQuery:
    r0: float = 1e-3
    shells: int = 8
    samples_per_shell: int = 32
    seed: int = 0

    def __post_init__(self):
        if self.r0 <= 0:
            raise SlopeError("r0 must be positive")
        if self.shells < 4:
            raise SlopeError("need at least 4 shells")


@dataclass(frozen=True)
class SlopeEstimate:
    estimate: float
    table: tuple  # ((radius, max quotient), ...) largest radius first
    mode: str


def _quotient(fx: float, fu: float, d: float, clamp: bool) -> float:
    if d <= 0:
        return 0.0
    if clamp:
        fu = max(fu, 0.0)
    return max(fx - fu, 0.0) / d


def _callable_samples(x: np.ndarray, r: float, rng, norm: Norm, count: int):
    pts = [x + sample_ball(rng, x.shape[0], r, norm) for _ in range(count)]
    if x.shape[0] == 1:
        pts.extend([x + np.asarray([r]), x - np.asarray([r])])
    else:
        pts.append(x + sample_sphere(rng, x.shape[0], r, norm))
    return pts


def slope(f, x, query: SlopeQuery = SlopeQuery(), norm: Norm = MAX_NORM,
          nonlocal_form: bool = False) -> SlopeEstimate:
    """Shell-table slope estimate at x for a callable or a SampledFunction.

    The local estimate is the max difference quotient on the smallest shell;
    the table exposes the whole sequence so convergence can be inspected.
    With ``nonlocal_form`` the estimate is the supremum over every drawn
    sample with the clamped numerator [f(x) - max(f(u), 0)]+.
    """
    mode = "nonlocal" if nonlocal_form else "local"
    if isinstance(f, SampledFunction):
        pts = f.points
        x = np.atleast_1d(np.asarray(x, float))
        matches = [i for i, p in enumerate(pts) if f.norm.dist(p, x) == 0.0]
        if not matches:
            raise SlopeError("x must be a domain point of the sampled function")
        fx = f.values[matches[0]]
        if not math.isfinite(fx):
            return SlopeEstimate(math.inf, (), mode)
        dists = [f.norm.dist(p, x) for p in pts]
        radii = sorted({d for d in dists if d > 0}, reverse=True)
        if not radii:
            return SlopeEstimate(0.0, (), mode)
        shells = [radii[0] * 2.0 ** (-k) for k in range(query.shells + 1)]
        table = []
        for r in shells:
            vals = [_quotient(fx, f.values[i], d, nonlocal_form)
                    for i, d in enumerate(dists) if 0 < d <= r * (1 + 1e-12)]
            if vals:
                table.append((r, max(vals)))
        if nonlocal_form:
            est = max((_quotient(fx, f.values[i], d, True)
                       for i, d in enumerate(dists) if d > 0), default=0.0)
        else:
            est = table[-1][1] if table else 0.0
        return SlopeEstimate(est, tuple(table), mode)

    x = np.atleast_1d(np.asarray(x, float))
    fx = float(f(x))
    if not math.isfinite(fx):
        return SlopeEstimate(math.inf, (), mode)
    table = []
    best_all = 0.0
    for k in range(query.shells + 1):
        r = query.r0 * 2.0 ** (-k)
        rng = rng_for(query.seed, k)
        vals = []
        for u in _callable_samples(x, r, rng, norm, query.samples_per_shell):
            d = norm.dist(u, x)
            if d <= 0:
                continue
            vals.append(_quotient(fx, float(f(u)), d, nonlocal_form))
        shell_max = max(vals) if vals else 0.0
        best_all = max(best_all, shell_max)
        table.append((r, shell_max))
    est = best_all if nonlocal_form else table[-1][1]
    return SlopeEstimate(est, tuple(table), mode)


def nonlocal_slope(f, x, query: SlopeQuery = SlopeQuery(),
                   norm: Norm = MAX_NORM) -> SlopeEstimate:
    """Sampled supremum of [f(x) - f+(u)]+ / d(x, u) over all drawn u.

    For a callable the search widens the shell schedule far beyond the local
    radius so that distant descent targets are seen.
    """
    if isinstance(f, SampledFunction):
        return slope(f, x, query, norm, nonlocal_form=True)
    x = np.atleast_1d(np.asarray(x, float))
    fx = float(f(x))
    if not math.isfinite(fx):
        return SlopeEstimate(math.inf, (), "nonlocal")
    best = 0.0
    table = []
    radii = [query.r0 * 2.0 ** j for j in range(query.shells, -query.shells - 1, -1)]
    for k, r in enumerate(radii):
        rng = rng_for(query.seed, 7000 + k)
        vals = [_quotient(fx, float(f(u)), norm.dist(u, x), True)
                for u in _callable_samples(x, r, rng, norm, query.samples_per_shell)]
        shell_max = max(vals) if vals else 0.0
        best = max(best, shell_max)
        table.append((r, shell_max))
    return SlopeEstimate(best, tuple(table), "nonlocal")


@dataclass(frozen=True)
class ChainRuleReport:
    lhs: float
    rhs: float
    diff: float


def chain_rule_check(f: Callable, gauge: Gauge, x, query: SlopeQuery = SlopeQuery(),
                     norm: Norm = MAX_NORM) -> ChainRuleReport:
    """Compare slope(phi o f) with phi'(f(x)) * slope(f) at x.

    Valid for differentiable gauges at points with f(x) > 0; agreement within
    1e-3 relative is expected on smooth test cases.
    """
    x = np.atleast_1d(np.asarray(x, float))
    fx = float(f(x))
    if fx <= 0:
        raise SlopeError("chain rule check needs f(x) > 0")
    lhs = slope(lambda u: gauge(max(float(f(u)), 0.0)), x, query, norm).estimate
    rhs = gauge.derivative(fx) * slope(f, x, query, norm).estimate
    return ChainRuleReport(lhs=lhs, rhs=rhs, diff=abs(lhs - rhs))


# ----------------------------------------------------------------------------
# constructive descent on finite domains
# ----------------------------------------------------------------------------

def ekeland(f: SampledFunction, x0: int, epsilon: float, lam: float) -> int:
    """Descent point selection on a finite domain.

    From an epsilon-approximate minimizer (f(x0) < inf f + epsilon) iterate to
    any point strictly improving f(u) + (epsilon/lam) d(u, current) until none
    exists.  The returned index satisfies, exactly on the finite domain:
    d(xhat, x0) < lam, f(xhat) <= f(x0), and
    f(u) + (epsilon/lam) d(u, xhat) >= f(xhat) for every domain point u.
    """
    if epsilon <= 0 or lam <= 0:
        raise SlopeError("epsilon and lam must be positive")
    vals = f.values
    finite_min = min(v for v in vals if math.isfinite(v))
    if not math.isfinite(vals[x0]) or not vals[x0] < finite_min + epsilon:
        raise SlopeError("premise violated: f(x0) must be below inf f + epsilon")
    rate = epsilon / lam
    cur = x0
    while True:
        best, best_val = None, vals[cur]
        for j in range(len(f)):
            if j == cur or not math.isfinite(vals[j]):
                continue
            trial = vals[j] + rate * f.norm.dist(f.points[j], f.points[cur])
            if trial < best_val - 0.0:
                best, best_val = j, trial
        if best is None:
            return cur
        cur = best


# ----------------------------------------------------------------------------
# coupled objectives and gamma-slopes
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class CoupledObjective:
    """phi of the largest block defect max_i |u_i - x_i - u|, restricted to
    blocks u_i lying in their sets, measured with the gamma product norm."""

    gauge: Gauge
    sets: tuple
    shifts: tuple
    gamma: float
    norm: Norm = MAX_NORM
    restricted: bool = True
    membership_tol: float = 1e-9
    # analytic oracle for the zero set inter_i (O_i - x_i), when known
    zero_set: SetOracle | None = None

    def __post_init__(self):
        shifts = tuple(np.asarray(s, float) for s in self.shifts)
        if len(shifts) != len(self.sets):
            raise SlopeError("one shift per set required")
        object.__setattr__(self, "shifts", shifts)
        if self.gamma <= 0:
            raise SlopeError("gamma must be positive")

    def coupling(self, blocks: Sequence[np.ndarray], u: np.ndarray) -> float:
        return max(self.norm(b - s - u) for b, s in zip(blocks, self.shifts))

    def value(self, blocks: Sequence[np.ndarray], u: np.ndarray) -> float:
        if self.restricted:
            for o, b in zip(self.sets, blocks):
                if not o.contains(b, self.norm, tol=self.membership_tol):
                    return math.inf
        return self.gauge(self.coupling(blocks, u))

    def metric(self, blocks_a, ua, blocks_b, ub) -> float:
        d = self.norm(np.asarray(ua, float) - np.asarray(ub, float))
        for a, b in zip(blocks_a, blocks_b):
            d = max(d, self.gamma * self.norm(np.asarray(a, float) - np.asarray(b, float)))
        return d

    def translated_sets(self) -> list:
        return [o.translated(s) for o, s in zip(self.sets, self.shifts)]


def _box_center(points) -> np.ndarray:
    arr = np.asarray(points, float)
    return 0.5 * (arr.min(axis=0) + arr.max(axis=0))


def _descent_candidates(obj: CoupledObjective, blocks, x, seed: int,
                        n_random: int = 12, radii=(1.0, 0.25, 0.0625)):
    """Candidate moves for the sampled slope supremum of a coupled objective.

    Mixes jumps onto feasible points of the shifted intersection (nearest to
    the probe point and nearest to the anchor configuration's box center),
    partial moves along those segments, per-block projection refreshes, and
    local random perturbations.
    """
    norm = obj.norm
    x = np.asarray(x, float)
    cands = []

    def push(bs, u):
        cands.append(([np.asarray(b, float) for b in bs], np.asarray(u, float)))

    def push_segment(target):
        for t in (1.0, 0.75, 0.5, 0.25):
            u = x + t * (target - x)
            blk = [o.project(u + s, norm) for o, s in zip(obj.sets, obj.shifts)]
            push(blk, u)
            push([u + s for s in obj.shifts], u)  # exact zero-defect blocks

    translated = obj.translated_sets()
    bounds = dist_intersection(translated, x, norm, seed=seed, declared=obj.zero_set)
    if bounds.point is not None:
        push_segment(bounds.point)
    # feasible point near the anchor configuration's center: cheapest zero of
    # the objective in the gamma metric when blocks sit far from the probe
    center = _box_center([x] + [b - s for b, s in zip(blocks, obj.shifts)])
    if norm(center - x) > 1e-12:
        b2 = dist_intersection(translated, center, norm, seed=seed + 1,
                               declared=obj.zero_set)
        if b2.point is not None:
            push_segment(b2.point)
    push([o.project(x + s, norm) for o, s in zip(obj.sets, obj.shifts)], x)
    # descent toward the block box center with blocks refreshed
    for h in (1.0, 0.5, 0.25):
        u = x + h * (center - x)
        push([o.project(u + s, norm) for o, s in zip(obj.sets, obj.shifts)], u)

    # single-coordinate descents toward the worst block target
    defects = [norm(b - s - x) for b, s in zip(blocks, obj.shifts)]
    worst = int(np.argmax(defects))
    tgt_u = blocks[worst] - obj.shifts[worst]
    for h in (1.0, 0.5, 0.25, 0.125, 1.0 / 32, 1.0 / 128):
        push(blocks, x + h * (tgt_u - x))
        nb = list(blocks)
        nb[worst] = obj.sets[worst].project(
            blocks[worst] + h * (x + obj.shifts[worst] - blocks[worst]), norm)
        push(nb, x)

    rng = rng_for(seed, 0x51)
    scale = max(max(defects), 1e-9)
    for r in radii:
        for _ in range(n_random):
            u = x + sample_ball(rng, x.shape[0], r * scale, norm)
            nb = [o.project(b + sample_ball(rng, x.shape[0], r * scale / obj.gamma, norm),
                            norm)
                  for o, b in zip(obj.sets, blocks)]
            push(nb, u)
            push(blocks, u)
    return cands


def descend_objective(obj: CoupledObjective, x0, iters: int = 40):
    """Constructive approximate minimization of the coupled objective.

    Alternates block projections with the max-norm center of the block
    targets; on finite or simple geometries this lands at the stalled
    configurations that witness failing slope conditions.
    """
    norm = obj.norm
    x = np.asarray(x0, float).copy()
    blocks = [o.project(x + s, norm) for o, s in zip(obj.sets, obj.shifts)]
    best = (obj.value(blocks, x), [b.copy() for b in blocks], x.copy())
    for _ in range(iters):
        targets = [b - s for b, s in zip(blocks, obj.shifts)]
        u = _box_center(targets)
        nb = [o.project(u + s, norm) for o, s in zip(obj.sets, obj.shifts)]
        val = obj.value(nb, u)
        if val < best[0] - 1e-15:
            best = (val, [b.copy() for b in nb], u.copy())
        if norm(u - x) <= 1e-14 and all(norm(a - b) <= 1e-14
                                        for a, b in zip(nb, blocks)):
            break
        x, blocks = u, nb
    return best[1], best[2]


def gamma_slope(obj: CoupledObjective, blocks, x, mode: str = "nonlocal",
                seed: int = 0, n_random: int = 12) -> SlopeEstimate:
    """Sampled gamma-slope of a coupled objective at an in-set anchor.

    ``nonlocal`` takes the supremum of clamped difference quotients over all
    candidate moves; ``local`` buckets candidates into metric shells and
    reports the smallest-shell maximum.  A finite candidate set can only
    under-estimate either form.
    """
    blocks = [np.asarray(b, float) for b in blocks]
    x = np.asarray(x, float)
    for o, b in zip(obj.sets, blocks):
        if not o.contains(b, obj.norm, tol=1e-8):
            raise SlopeError("anchor blocks must lie in their sets")
    fx = obj.value(blocks, x)
    if not math.isfinite(fx):
        return SlopeEstimate(math.inf, (), mode)
    quotients = []
    for nb, u in _descent_candidates(obj, blocks, x, seed, n_random=n_random):
        d = obj.metric(nb, u, blocks, x)
        if d <= 1e-15:
            continue
        fu = obj.value(nb, u)
        if not math.isfinite(fu):
            continue
        quotients.append((d, _quotient(fx, fu, d, mode == "nonlocal")))
    if not quotients:
        return SlopeEstimate(0.0, (), mode)
    if mode == "nonlocal":
        est = max(q for _, q in quotients)
        return SlopeEstimate(est, (), mode)
    dists = sorted({d for d, _ in quotients}, reverse=True)
    shells = []
    for r in [dists[0] * 2.0 ** (-k) for k in range(6)]:
        vals = [q for d, q in quotients if d <= r * (1 + 1e-12)]
        if vals:
            shells.append((r, max(vals)))
    return SlopeEstimate(shells[-1][1], tuple(shells), mode)


# ----------------------------------------------------------------------------
# slope sufficient-condition checkers
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class SlopeConditionReport:
    status: str
    anchors_checked: int
    violations: int
    min_slope_seen: float
    witness: dict | None
    lambda_grid_size: int


def _lambda_grid(lo: float, hi: float, count: int = 8) -> list:
    if not lo < hi:
        return []
    ratio = hi / lo
    return [lo * ratio ** ((k + 1.0) / (count + 1.0)) for k in range(count)]


def _check_condition(scene: Scene, gauge: Gauge, gamma: float, budget: int,
                     seed: int, slope_tol: float, outer_iter, label: str,
                     c1_form: bool) -> SlopeConditionReport:
    """Shared driver: FALSE requires a qualifying low-slope anchor at every
    admissible lambda of some outer configuration (the contraposition-valid
    quantifier); anchor-level violations are still counted individually."""
    anchors_checked = 0
    violations = 0
    min_slope = math.inf
    witness = None
    grid_size = 0
    outer_index = 0
    while anchors_checked < budget:
        got = outer_iter(outer_index, anchors_checked, budget)
        outer_index += 1
        if got is None:
            break
        obj, lam_anchors = got
        grid_size = max(grid_size, len(lam_anchors))
        bad_at_every_lambda = bool(lam_anchors)
        outer_witness = None
        for lam, anchors in lam_anchors:
            lam_bad = None
            for blocks, x in anchors:
                anchors_checked += 1
                est = gamma_slope(obj, blocks, x, mode="nonlocal",
                                  seed=seed * 613 + anchors_checked)
                value = est.estimate
                if c1_form and gauge.differentiable:
                    coupling = obj.coupling(blocks, x)
                    if coupling > 1e-12:
                        plain = CoupledObjective(
                            gauge=_IdentityGauge(), sets=obj.sets,
                            shifts=obj.shifts, gamma=obj.gamma, norm=obj.norm)
                        lin = gamma_slope(plain, blocks, x, mode="nonlocal",
                                          seed=seed * 613 + anchors_checked)
                        value = max(value, gauge.derivative(coupling) * lin.estimate)
                min_slope = min(min_slope, value)
                if value < 1.0 - slope_tol:
                    violations += 1
                    if lam_bad is None:
                        lam_bad = {"lambda": lam, "slope": value,
                                   "anchor_blocks": [b.tolist() for b in blocks],
                                   "anchor_point": np.asarray(x, float).tolist()}
                if anchors_checked >= budget:
                    break
            if lam_bad is None:
                bad_at_every_lambda = False
            elif outer_witness is None:
                outer_witness = lam_bad
            if anchors_checked >= budget:
                break
        if bad_at_every_lambda and outer_witness is not None:
            witness = dict(outer_witness)
            witness["label"] = label
            witness["shifts"] = [s.tolist() for s in obj.shifts]
            break
    status = CONDITION_FALSE if witness is not None else CONDITION_TRUE
    return SlopeConditionReport(status=status, anchors_checked=anchors_checked,
                                violations=violations,
                                min_slope_seen=min_slope if anchors_checked else math.inf,
                                witness=witness, lambda_grid_size=grid_size)


class _IdentityGauge(Gauge):
    differentiable = True

    def __call__(self, t):
        return float(t)

    def invert(self, s):
        return float(s)

    def derivative(self, t):
        return 1.0


def _anchor_radius(lam: float, gamma: float, extra: float) -> float:
    # the gamma-scaled bound, or the implicit bound when gamma is small
    return min(lam / gamma, lam + 2.0 * extra)


def check_semi_slope_condition(scene: Scene, gauge: Gauge, delta: float,
                               gamma: float = 1.0, budget: int = 1000,
                               seed: int = 0, slope_tol: float = 1e-3,
                               anchors_per_lambda: int = 3,
                               lambda_count: int = 6,
                               c1_form: bool = False) -> SlopeConditionReport:
    """Evidence check of the slope condition behind semitransversality.

    Outer loop draws shift tuples with 0 < max_i |x_i| < invert(delta); for
    each admissible lambda the inner anchors (x, w_i) obey |x - xbar| < lam,
    |w_i - xbar| below the gamma bound, and 0 < coupling <= max_i |x_i|.
    """
    n, dim, norm = len(scene.sets), scene.dim, scene.norm
    x_bar = scene.x_bar
    r_max = gauge.invert(delta) * (1 - 1e-12)

    def outer(j: int, used: int, total: int):
        if j >= 4 * max(1, total // max(1, lambda_count * anchors_per_lambda)):
            return None
        rng = rng_for(seed, 0xE1, j)
        m = log_uniform(rng, 1e-4 * r_max, r_max)
        from .certify import _draw_shift_tuple  # shared sampler
        shifts = _draw_shift_tuple(rng, n, dim, m, norm)
        obj = CoupledObjective(gauge=gauge, sets=scene.sets, shifts=tuple(shifts),
                               gamma=gamma, norm=norm)
        descended = descend_objective(obj, x_bar)
        lam_anchors = []
        for lam in _lambda_grid(gauge(m), delta, lambda_count):
            anchors = []
            cap = _anchor_radius(lam, gamma, gauge.invert(delta))
            trials = 0
            while len(anchors) < anchors_per_lambda and trials < 8 * anchors_per_lambda:
                trials += 1
                if trials == 1:
                    # the constructive descent endpoint: the proof-style anchor
                    ws, x = descended
                elif trials == 2:
                    x = x_bar.copy()
                    ws = [x_bar.copy() for _ in scene.sets]
                elif trials == 3:
                    x = x_bar.copy()
                    ws = [o.project(x_bar + s, norm) for o, s in zip(scene.sets, shifts)]
                else:
                    x = x_bar + sample_ball(rng, dim, lam * (1 - 1e-9), norm)
                    try:
                        ws = [o.sample_near(x_bar, cap * (1 - 1e-9), 1, rng, norm)[0]
                              for o in scene.sets]
                    except SamplerExhausted:
                        continue
                if any(norm(w - x_bar) >= cap for w in ws) or norm(x - x_bar) >= lam:
                    continue
                g_val = obj.coupling(ws, x)
                if 0 < g_val <= m:
                    anchors.append((ws, x))
            if anchors:
                lam_anchors.append((lam, anchors))
        return obj, lam_anchors

    return _check_condition(scene, gauge, gamma, budget, seed, slope_tol,
                            outer, "semi", c1_form)


def check_sub_slope_condition(scene: Scene, gauge: Gauge, delta1: float,
                              delta2: float, gamma: float = 1.0,
                              budget: int = 1000, seed: int = 0,
                              slope_tol: float = 1e-3,
                              anchors_per_lambda: int = 3,
                              lambda_count: int = 6,
                              require_gap: bool = False,
                              c1_form: bool = False) -> SlopeConditionReport:
    """Evidence check of the slope condition behind the error-bound property.

    Outer points x' lie in B_delta2(xbar) off the intersection; anchors
    (x, w_i) spread around x' and near-projections w'_i within the lambda
    budget.  ``require_gap`` adds the strengthening that the gauge of the
    residual must undercut the distance to the intersection.
    """
    n, dim, norm = len(scene.sets), scene.dim, scene.norm
    x_bar = scene.x_bar

    def outer(j: int, used: int, total: int):
        if j >= 4 * max(1, total // max(1, lambda_count * anchors_per_lambda)):
            return None
        rng = rng_for(seed, 0xE2, j)
        r = log_uniform(rng, 1e-4 * delta2, delta2 * (1 - 1e-12))
        if j % 2 == 0 and dim == 2:
            from .certify import _GOLDEN, _sweep_direction
            xp = x_bar + r * _sweep_direction(j * _GOLDEN, dim, norm, rng)
        else:
            xp = x_bar + r * sample_sphere(rng, dim, 1.0, norm)
        residuals = [o.dist(xp, norm) for o in scene.sets]
        worst = max(residuals)
        if worst <= 1e-15 or not gauge(worst) < delta1:
            return CoupledObjective(gauge=gauge, sets=scene.sets,
                                    shifts=tuple(np.zeros(dim) for _ in scene.sets),
                                    gamma=gamma, norm=norm), []
        if require_gap:
            bounds = dist_intersection(list(scene.sets), xp, norm,
                                       seed=seed * 37 + j, declared=scene.intersection)
            if not gauge(worst) < bounds.lower:
                return CoupledObjective(gauge=gauge, sets=scene.sets,
                                        shifts=tuple(np.zeros(dim) for _ in scene.sets),
                                        gamma=gamma, norm=norm), []
        obj = CoupledObjective(gauge=gauge, sets=scene.sets,
                               shifts=tuple(np.zeros(dim) for _ in scene.sets),
                               gamma=gamma, norm=norm, zero_set=scene.intersection)
        near_projs = [o.project(xp, norm) for o in scene.sets]
        descended = descend_objective(obj, xp)
        lam_anchors = []
        for lam in _lambda_grid(gauge(worst), delta1, lambda_count):
            anchors = []
            cap = gauge.invert(lam)
            trials = 0
            while len(anchors) < anchors_per_lambda and trials < 8 * anchors_per_lambda:
                trials += 1
                if trials == 1:
                    ws, x = descended
                elif trials == 2:
                    x = xp.copy()
                    ws = [p.copy() for p in near_projs]
                else:
                    x = xp + sample_ball(rng, dim, lam * (1 - 1e-9), norm)
                    try:
                        ws = [o.sample_near(p, min(lam / gamma, lam) * (1 - 1e-9),
                                            1, rng, norm)[0]
                              for o, p in zip(scene.sets, near_projs)]
                    except SamplerExhausted:
                        continue
                g_val = obj.coupling(ws, x)
                ref = max(norm(p - xp) for p in near_projs)
                if 0 < g_val <= max(ref, worst * (1 + 1e-9)) and ref < cap:
                    anchors.append((ws, x))
            if anchors:
                lam_anchors.append((lam, anchors))
        return obj, lam_anchors

    return _check_condition(scene, gauge, gamma, budget, seed, slope_tol,
                            outer, "sub", c1_form)


def check_full_slope_condition(scene: Scene, gauge: Gauge, delta1: float,
                               delta2: float, gamma: float = 1.0,
                               budget: int = 1000, seed: int = 0,
                               slope_tol: float = 1e-3,
                               anchors_per_lambda: int = 3,
                               lambda_count: int = 6,
                               mode: str = "theorem",
                               c1_form: bool = False) -> SlopeConditionReport:
    """Evidence check of the slope condition behind full transversality.

    The outer loop draws in-set anchors w'_i near xbar and a scale xi in
    (0, invert(delta1)); shifts are reconstructed as w'_i + x'_i - xbar with
    max_i |x'_i| = xi.  ``mode`` selects the anchor boxes: 'theorem' (the
    lambda-coupled boxes), 'simplified' (fixed boxes), or 'delta_free'.
    """
    if mode not in ("theorem", "simplified", "delta_free"):
        raise SlopeError("mode must be 'theorem', 'simplified' or 'delta_free'")
    n, dim, norm = len(scene.sets), scene.dim, scene.norm
    x_bar = scene.x_bar
    xi_max = gauge.invert(delta1) * (1 - 1e-12)

    def outer(j: int, used: int, total: int):
        if j >= 4 * max(1, total // max(1, lambda_count * anchors_per_lambda)):
            return None
        rng = rng_for(seed, 0xE3, j)
        try:
            primed = [o.sample_near(x_bar, delta2 * (1 - 1e-12), 1, rng, norm)[0]
                      for o in scene.sets]
        except SamplerExhausted:
            return CoupledObjective(gauge=gauge, sets=scene.sets,
                                    shifts=tuple(np.zeros(dim) for _ in scene.sets),
                                    gamma=gamma, norm=norm), []
        xi = log_uniform(rng, 1e-4 * xi_max, xi_max)
        from .certify import _draw_shift_tuple
        primed_shifts = _draw_shift_tuple(rng, n, dim, xi, norm)
        shifts = [w + s - x_bar for w, s in zip(primed, primed_shifts)]
        obj = CoupledObjective(gauge=gauge, sets=scene.sets, shifts=tuple(shifts),
                               gamma=gamma, norm=norm)
        descended = descend_objective(obj, x_bar)
        if mode == "theorem":
            lam_grid = _lambda_grid(gauge(xi), delta1, lambda_count)
        else:
            lam_grid = [delta1]
        lam_anchors = []
        for lam in lam_grid:
            anchors = []
            trials = 0
            while len(anchors) < anchors_per_lambda and trials < 8 * anchors_per_lambda:
                trials += 1
                if trials == 1:
                    ws, x = descended
                elif trials == 2:
                    x = x_bar.copy()
                    ws = [w.copy() for w in primed]
                else:
                    if mode == "theorem":
                        x_rad = lam * (1 - 1e-9)
                        w_rad = _anchor_radius(lam, gamma, xi) * (1 - 1e-9)
                        centers = primed
                    elif mode == "simplified":
                        x_rad = delta1
                        w_rad = delta2 + delta1 / gamma
                        centers = [x_bar] * n
                    else:
                        x_rad = gauge.invert(delta1)
                        w_rad = gauge.invert(delta1)
                        centers = [x_bar] * n
                    x = x_bar + sample_ball(rng, dim, x_rad, norm)
                    try:
                        ws = [o.sample_near(c, w_rad, 1, rng, norm)[0]
                              for o, c in zip(scene.sets, centers)]
                    except SamplerExhausted:
                        continue
                g_val = obj.coupling(ws, x)
                cap = xi if mode == "theorem" else gauge.invert(delta1)
                if 0 < g_val <= cap:
                    anchors.append((ws, x))
            if anchors:
                lam_anchors.append((lam, anchors))
        return obj, lam_anchors

    return _check_condition(scene, gauge, gamma, budget, seed, slope_tol,
                            outer, "full", c1_form)
