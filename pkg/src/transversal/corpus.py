"""Bundled scenes: the worked examples plus derived test configurations.

Scene builders are deterministic and cheap; ``bundled_examples`` lists the
named (scene, query, expected verdict) corpus driven by the command line and
the acceptance suite, and ``random_two_sided_scene`` generates seeded scenes
with decisive verdicts for the set-vs-mapping agreement checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .certify import FALSIFIED, HOLDS, SEMI, SUB, FULL, PropertyQuery
from .gauges import Gauge, PowerGauge, scaled_root
from .geometry import MAX_NORM, rng_for
from .sets import (AffineSubspace, Ball, HalfSpace, Scene, curve_graph_poly,
                   epigraph_poly, hypograph_poly, power_cusp, singleton)

ORIGIN2 = (0.0, 0.0)


def upper_halfplane_parabola_scene() -> Scene:
    """Half-plane {x2 >= 0} with the hypograph {x2 <= x1**2}; no translation
    can empty the intersection, and vertical shifts produce the widest gap."""
    return Scene(dim=2, sets=(HalfSpace((0.0, 1.0), 0.0),
                              hypograph_poly([0.0, 0.0, 1.0])),
                 basepoint=ORIGIN2, boundary_basepoint=True,
                 name="halfplane-parabola")


def opposed_parabola_graphs_scene() -> Scene:
    """The two curves x2 = x1**2 and x2 = -x1**2 meeting only at the origin."""
    return Scene(dim=2, sets=(curve_graph_poly([0.0, 0.0, 1.0]),
                              curve_graph_poly([0.0, 0.0, -1.0])),
                 basepoint=ORIGIN2, intersection=singleton(ORIGIN2),
                 boundary_basepoint=True, name="parabola-graphs")


def cusp_pair_scene(q: float = 2.0, gamma: float = 1.0) -> Scene:
    """Power-cusp pair whose worst vertical shifts separate at rate gamma*r**q."""
    return Scene(dim=2, sets=(power_cusp(gamma, q, "plus"),
                              power_cusp(gamma, q, "minus")),
                 basepoint=ORIGIN2, boundary_basepoint=True,
                 name=f"cusp-pair-q{q}")


def axes_scene() -> Scene:
    """Coordinate axes in the plane; the equality case of the error bound."""
    return Scene(dim=2, sets=(AffineSubspace(ORIGIN2, ((1.0, 0.0),)),
                              AffineSubspace(ORIGIN2, ((0.0, 1.0),))),
                 basepoint=ORIGIN2, intersection=singleton(ORIGIN2),
                 boundary_basepoint=True, name="axes")


def crossing_lines_scene() -> Scene:
    """Horizontal axis and the diagonal, with linear modulus 1/3."""
    return Scene(dim=2, sets=(AffineSubspace(ORIGIN2, ((1.0, 0.0),)),
                              AffineSubspace(ORIGIN2, ((1.0, 1.0),))),
                 basepoint=ORIGIN2, intersection=singleton(ORIGIN2),
                 boundary_basepoint=True, name="crossing-lines")


def tangential_parabolas_scene() -> Scene:
    """Epigraph of x1**2 against the hypograph of -x1**2: a tangential pair
    where the linear error bound fails."""
    return Scene(dim=2, sets=(epigraph_poly([0.0, 0.0, 1.0]),
                              hypograph_poly([0.0, 0.0, -1.0])),
                 basepoint=ORIGIN2, intersection=singleton(ORIGIN2),
                 boundary_basepoint=True, name="tangential-parabolas")


def singleton_pair_scene() -> Scene:
    """Two copies of the basepoint; any nonzero opposite shifts disconnect them."""
    return Scene(dim=2, sets=(singleton(ORIGIN2), singleton(ORIGIN2)),
                 basepoint=ORIGIN2, boundary_basepoint=True,
                 name="singleton-pair")


def overlapping_balls_scene(radius: float = 1.0, offset: float = 0.25) -> Scene:
    """Two balls whose intersection contains a neighborhood of the basepoint."""
    return Scene(dim=2, sets=(Ball((-offset, 0.0), radius, "euclidean"),
                              Ball((offset, 0.0), radius, "euclidean")),
                 basepoint=ORIGIN2, boundary_basepoint=False,
                 name="overlapping-balls")


def identical_halfplanes_scene() -> Scene:
    return Scene(dim=2, sets=(HalfSpace((0.0, 1.0), 0.0),
                              HalfSpace((0.0, 1.0), 0.0)),
                 basepoint=ORIGIN2, boundary_basepoint=True,
                 name="identical-halfplanes")


SQRT2_GAUGE = scaled_root(math.sqrt(2.0))          # t -> sqrt(2 t)
EX32_GAUGE = scaled_root(1.1)                      # t -> 1.1 sqrt(t)
SQUARE_GAUGE = PowerGauge(alpha=1.0, q=2.0)        # t -> t**2


@dataclass(frozen=True)
class BundledExample:
    name: str
    scene: Scene
    query: PropertyQuery
    expected: str
    note: str = ""


def bundled_examples(budget: int = 2000, seed: int = 0) -> list[BundledExample]:
    """The named corpus: worked examples plus derived holding/failing scenes."""
    return [
        BundledExample(
            name="3.1",
            scene=upper_halfplane_parabola_scene(),
            query=PropertyQuery.semi(SQRT2_GAUGE, 2.0, budget=budget, seed=seed),
            expected=HOLDS,
            note="semitransversal with rate sqrt(2 t), delta = 2"),
        BundledExample(
            name="3.2",
            scene=opposed_parabola_graphs_scene(),
            query=PropertyQuery.sub(EX32_GAUGE, 1.0, 0.1, budget=budget, seed=seed),
            expected=HOLDS,
            note="subtransversal with rate 1.1 sqrt(t), delta2 = 0.1"),
        BundledExample(
            name="2.1(q=2)",
            scene=cusp_pair_scene(q=2.0, gamma=1.0),
            query=PropertyQuery.semi(SQUARE_GAUGE, 1.0, budget=budget, seed=seed),
            expected=HOLDS,
            note="semitransversal with rate t**2 despite order 2"),
        BundledExample(
            name="axes-linear",
            scene=axes_scene(),
            query=PropertyQuery.sub(PowerGauge(1.0, 1.0), 1.0, 1.0,
                                    budget=budget, seed=seed),
            expected=HOLDS,
            note="equality case: margins hug zero"),
        BundledExample(
            name="crossing-lines-0.3",
            scene=crossing_lines_scene(),
            query=PropertyQuery.full(PowerGauge(0.3, 1.0), 0.5, 0.5,
                                     budget=budget, seed=seed),
            expected=HOLDS,
            note="below the pair's linear modulus 1/3"),
        BundledExample(
            name="crossing-lines-0.4",
            scene=crossing_lines_scene(),
            query=PropertyQuery.full(PowerGauge(0.4, 1.0), 0.5, 0.5,
                                     budget=budget, seed=seed),
            expected=FALSIFIED,
            note="above the pair's linear modulus 1/3"),
        BundledExample(
            name="tangent-parabolas-linear",
            scene=tangential_parabolas_scene(),
            query=PropertyQuery.sub(PowerGauge(0.5, 1.0), 0.5, 0.5,
                                    budget=budget, seed=seed),
            expected=FALSIFIED,
            note="tangential pair defeats every linear rate"),
        BundledExample(
            name="shifted-singletons",
            scene=singleton_pair_scene(),
            query=PropertyQuery.semi(SQRT2_GAUGE, 1.0, budget=budget, seed=seed),
            expected=FALSIFIED,
            note="shifted copies of a single point never meet"),
        BundledExample(
            name="overlapping-balls-interior",
            scene=overlapping_balls_scene(),
            query=PropertyQuery.full(PowerGauge(1.0, 1.0), 0.2, 0.2,
                                     budget=max(200, budget // 4), seed=seed),
            expected=HOLDS,
            note="interior basepoint: transversal for any gauge"),
    ]


def random_two_sided_scene(seed: int):
    """Seeded random scene of lines or half-planes through the basepoint with
    a gauge chosen decisively below or above the scene's linear modulus."""
    rng = rng_for(seed, 0xC0FFEE)
    kind = int(rng.integers(0, 3))
    if kind == 0:
        theta = rng.uniform(0.3, math.pi / 2)
        sets = (AffineSubspace(ORIGIN2, ((1.0, 0.0),)),
                AffineSubspace(ORIGIN2, ((math.cos(theta), math.sin(theta)),)))
        inter = singleton(ORIGIN2)
        props = (SEMI, SUB, FULL)
    elif kind == 1:
        # convex wedge: any decent linear rate works, all properties hold
        a = rng.uniform(0.5, 2.0)
        sets = (HalfSpace((0.0, 1.0), 0.0), HalfSpace((a, -1.0), 0.0))
        inter = None
        props = (SEMI, SUB)
    else:
        # three concurrent lines: generic translations empty the intersection,
        # so only the untranslated error bound is a meaningful target
        theta = rng.uniform(0.4, math.pi / 2)
        sets = (AffineSubspace(ORIGIN2, ((1.0, 0.0),)),
                AffineSubspace(ORIGIN2, ((math.cos(theta), math.sin(theta)),)),
                AffineSubspace(ORIGIN2, ((-math.sin(theta), math.cos(theta)),)))
        inter = singleton(ORIGIN2)
        props = (SUB,)
    scene = Scene(dim=2, sets=sets, basepoint=ORIGIN2, intersection=inter,
                  boundary_basepoint=True, name=f"random-{seed}")

    hold = bool(rng.integers(0, 2))
    prop = props[int(rng.integers(0, len(props)))]
    if kind == 1:
        hold = True
        alpha = 0.2
    else:
        # rough linear modulus: the intersection is the origin, so on the unit
        # sphere the ratio max_i d(x, O_i) / d(x, intersection) is just the max
        best = math.inf
        for t in np.linspace(0.0, 2.0 * math.pi, 181):
            x = np.array([math.cos(t), math.sin(t)])
            x /= max(abs(x[0]), abs(x[1]))
            best = min(best, max(o.dist(x, MAX_NORM) for o in sets))
        alpha = 0.5 * best if hold else min(2.5 * best, 8.0)
    return scene, prop, PowerGauge(alpha=alpha, q=1.0), hold
