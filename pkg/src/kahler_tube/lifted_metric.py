"""The lifted metric on a tube around the unit momentum sphere.

Horizontal block  G_ij  = A t g_ij + v(t) p_i p_j,
vertical block    H^kl  = g^kl / (A t) + w(t) pr^k pr^l,   pr = g^-1 p,
with w = -v / (A t^2 (A + 2v)) so that H is the inverse of G in the sense
G_ik H^kl = delta_i^l.  The integrable profile v(t) = (c - A^2 t)/(A t)
yields the Kahler structure; it is positive-definite exactly on the tube
0 < |p|_g^2 < 4c / A^2.  A custom profile can be substituted for negative
tests; only A + 2v > 0 is then required.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .base_geometry import DomainError, ModelParams
from .frames import BundlePoint, PointGeometry, frame_transform, geometry_from_z, point_geometry


@dataclass(frozen=True)
class LiftProfile:
    """Choice of the vertical scaling profile v(t).

    With custom_v None the integrable (Kahler) profile is used.  A custom
    callable t -> v is only constrained by A + 2 v(t) > 0 at the points
    where it is evaluated.
    """

    custom_v: Callable[[float], float] | None = None

    @property
    def is_kahler(self) -> bool:
        return self.custom_v is None

    def v(self, t: float, params: ModelParams) -> float:
        if t <= 0.0:
            raise DomainError("outside punctured bundle: energy density must be positive")
        if self.custom_v is not None:
            return float(self.custom_v(t))
        c, A = params.curvature, params.lift_const
        return (c - A * A * t) / (A * t)

    def w(self, t: float, params: ModelParams) -> float:
        v = self.v(t, params)
        A = params.lift_const
        denom = A + 2.0 * v
        if denom <= 0.0:
            raise DomainError("A + 2v > 0 violated: lifted metric not positive definite")
        return -v / (A * t * t * denom)


KAHLER = LiftProfile()


def offset_profile(params: ModelParams, offset: float) -> LiftProfile:
    """Integrable profile shifted by a constant; breaks integrability when offset != 0."""
    base = KAHLER

    def v(t: float) -> float:
        return base.v(t, params) + offset

    return LiftProfile(custom_v=v)


@dataclass(frozen=True)
class TubeCheck:
    """Outcome of the tube admissibility test for one point."""

    admissible: bool
    reason: str | None
    momentum_norm_sq: float
    bound: float


def tube_check(params: ModelParams, pt: BundlePoint) -> TubeCheck:
    """Classify a bundle point against 0 < |p|_g^2 < 4c / A^2.

    Parameter-level violations (c <= 0 or A <= 0) are reported through the
    reason field as well, with the bound set to nan.
    """

    violation = params.admissibility_violation()
    if violation is not None:
        return TubeCheck(False, violation, float("nan"), float("nan"))
    geo = point_geometry(params, pt)
    norm_sq = 2.0 * geo.t
    bound = 4.0 * params.curvature / params.lift_const**2
    if norm_sq <= 0.0:
        return TubeCheck(False, "outside punctured bundle: momentum must be nonzero", norm_sq, bound)
    if norm_sq >= bound:
        return TubeCheck(False, "momentum norm exceeds tube bound 4c / A^2", norm_sq, bound)
    return TubeCheck(True, None, norm_sq, bound)


@dataclass(frozen=True)
class LiftedMetricData:
    """Blocks of the lifted metric at one point, with the profile values used."""

    G: np.ndarray  # [i, j], horizontal block (covariant)
    H: np.ndarray  # [k, l], vertical block (contravariant base indices)
    t: float
    v: float
    w: float


def _lift_guard(params: ModelParams, geo: PointGeometry, profile: LiftProfile) -> None:
    if profile.is_kahler:
        params.require_admissible()
        norm_sq = 2.0 * geo.t
        bound = 4.0 * params.curvature / params.lift_const**2
        if norm_sq <= 0.0:
            raise DomainError("outside punctured bundle: momentum must be nonzero")
        if norm_sq >= bound:
            raise DomainError("momentum norm exceeds tube bound 4c / A^2")
    else:
        if params.lift_const <= 0.0:
            raise DomainError("lift constant must be positive")
        if geo.t <= 0.0:
            raise DomainError("outside punctured bundle: energy density must be positive")


def components_from_geometry(params: ModelParams, geo: PointGeometry, profile: LiftProfile = KAHLER) -> LiftedMetricData:
    _lift_guard(params, geo, profile)
    t = geo.t
    A = params.lift_const
    v = profile.v(t, params)
    w = profile.w(t, params)
    G = A * t * geo.g + v * np.outer(geo.p, geo.p)
    H = geo.g_inv / (A * t) + w * np.outer(geo.p_raised, geo.p_raised)
    return LiftedMetricData(G=G, H=H, t=t, v=v, w=w)


def metric_components(params: ModelParams, pt: BundlePoint, profile: LiftProfile = KAHLER) -> LiftedMetricData:
    """Horizontal and vertical blocks of the lifted metric at ``pt``."""
    return components_from_geometry(params, point_geometry(params, pt), profile)


def adapted_metric_matrix(data: LiftedMetricData) -> np.ndarray:
    """The lifted metric as a 2n x 2n matrix in the adapted frame (block diagonal)."""
    n = data.G.shape[0]
    S = np.zeros((2 * n, 2 * n))
    S[:n, :n] = data.G
    S[n:, n:] = data.H
    return S


def assemble_full_metric(params: ModelParams, pt: BundlePoint, profile: LiftProfile = KAHLER) -> np.ndarray:
    """Coordinate components of the lifted metric on R^2n at ``pt``."""
    geo = point_geometry(params, pt)
    data = components_from_geometry(params, geo, profile)
    return frame_transform(adapted_metric_matrix(data), "dd", geo.frame, to="coordinate")


def metric_field(params: ModelParams, profile: LiftProfile = KAHLER) -> Callable[[np.ndarray], np.ndarray]:
    """The full coordinate metric as a callable field for the oracles."""

    def field(z: np.ndarray) -> np.ndarray:
        geo = geometry_from_z(params, z)
        data = components_from_geometry(params, geo, profile)
        return frame_transform(adapted_metric_matrix(data), "dd", geo.frame, to="coordinate")

    return field


def kahler_identity_residual(params: ModelParams, data: LiftedMetricData) -> float:
    """|A t (v + A) - c|; zero exactly for the integrable profile."""
    A, c = params.lift_const, params.curvature
    return abs(A * data.t * (data.v + A) - c)


def w_consistency_residual(params: ModelParams, data: LiftedMetricData) -> float:
    """Gap between the stored w and the integrable-profile coefficient.

    For the integrable profile, -v / (A t^2 (A + 2v)) must simplify to
    -(c - A^2 t) / (A t^2 (2c - A^2 t)); comparing the two guards the
    algebra that identifies the vertical block coefficient.
    """

    A, c, t = params.lift_const, params.curvature, data.t
    expected = -(c - A * A * t) / (A * t * t * (2.0 * c - A * A * t))
    return abs(data.w - expected)
