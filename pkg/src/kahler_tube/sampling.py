"""Deterministic sampling of chart points, tube momenta, and directions.

Each concern draws from its own child of the master seed (a distinct
``spawn_key``), so extending one stream — say, asking for more directions —
never perturbs the points other checks see.
"""

from __future__ import annotations

import numpy as np

from .base_geometry import ModelParams, metric_at
from .frames import BundlePoint

_POINT_STREAM = 0
_MOMENTUM_STREAM = 1
_DIRECTION_STREAM = 2

#: Fraction of the tube's energy range that sampling stays inside, away
#: from the t -> 0 pole of the lift profile and the boundary degeneracy.
ENERGY_WINDOW = (0.05, 0.95)


def _generator(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(stream,))))


def sample_base_coordinates(params: ModelParams, count: int, seed: int) -> np.ndarray:
    """``count`` chart points uniform in the unit coordinate ball."""
    rng = _generator(seed, _POINT_STREAM)
    n = params.dim
    out = np.empty((count, n))
    for k in range(count):
        direction = rng.normal(size=n)
        direction /= np.linalg.norm(direction)
        out[k] = direction * rng.uniform() ** (1.0 / n)
    return out


def sample_points(params: ModelParams, count: int, seed: int) -> list[BundlePoint]:
    """Tube points: chart position plus momentum on the admissible annulus.

    The energy density t is drawn uniformly from the middle of the tube
    range (``ENERGY_WINDOW`` times 2c/A²) and the momentum direction
    uniformly on the inverse-metric sphere, then scaled to realize t.
    """

    xs = sample_base_coordinates(params, count, seed)
    rng = _generator(seed, _MOMENTUM_STREAM)
    lo, hi = ENERGY_WINDOW
    t_max = 2.0 * params.curvature / params.lift_const**2
    points = []
    for x in xs:
        g_inv = metric_at(params, x).g_inv
        t_target = rng.uniform(lo, hi) * t_max
        xi = rng.normal(size=params.dim)
        p = xi * np.sqrt(2.0 * t_target / float(xi @ g_inv @ xi))
        points.append(BundlePoint(x, p))
    return points


def sample_directions(params: ModelParams, count: int, seed: int) -> np.ndarray:
    """``count`` adapted-frame tangent directions (rows), standard normal."""
    rng = _generator(seed, _DIRECTION_STREAM)
    return rng.normal(size=(count, 2 * params.dim))
