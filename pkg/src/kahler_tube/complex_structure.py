"""Almost complex structure, fundamental 2-form, and the Nijenhuis tensor.

In the adapted frame the structure maps the i-th horizontal vector to
G_ik d/dp_k and the i-th vertical vector to -H^ik times the k-th horizontal
vector, which squares to minus the identity because H is the inverse of G.
The fundamental form pairs the two distributions with constant
coefficients, so in bundle coordinates it is the canonical symplectic form
and its exterior derivative vanishes identically.

The Nijenhuis tensor has three component families (by horizontal/vertical
type of the two inputs).  Each is a contraction of a single core tensor

    core[k, i, j] = A t (v + A) (p_i g_jk - p_j g_ik) - p_h riem[h, k, i, j]

which vanishes identically exactly when A t (v + A) equals the base
curvature constant, i.e. for the integrable profile.  The finite-difference
evaluator recomputes the tensor from brackets of J-transformed frame
fields, providing an oracle that is independent of the closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .base_geometry import ModelParams
from .fd import DEFAULT_FD, Derivative, FdConfig, exterior_derivative_two_form, lie_bracket
from .frames import (
    BundlePoint,
    PointGeometry,
    frame_transform,
    geometry_from_z,
    horizontal_field,
    point_geometry,
    vertical_field,
)
from .lifted_metric import KAHLER, LiftProfile, LiftedMetricData, adapted_metric_matrix, components_from_geometry


@dataclass(frozen=True)
class AlmostComplexData:
    """The structure tensor in the adapted frame, with its defining blocks."""

    j_adapted: np.ndarray  # [a, b], 2n x 2n
    G: np.ndarray
    H: np.ndarray


def _j_adapted(data: LiftedMetricData) -> np.ndarray:
    n = data.G.shape[0]
    J = np.zeros((2 * n, 2 * n))
    J[:n, n:] = -data.H
    J[n:, :n] = data.G
    return J


def j_matrix(params: ModelParams, pt: BundlePoint, profile: LiftProfile = KAHLER) -> AlmostComplexData:
    """Almost complex structure at ``pt`` in adapted-frame components."""
    data = metric_like(params, pt, profile)
    return AlmostComplexData(j_adapted=_j_adapted(data), G=data.G, H=data.H)


def metric_like(params: ModelParams, pt: BundlePoint, profile: LiftProfile = KAHLER) -> LiftedMetricData:
    return components_from_geometry(params, point_geometry(params, pt), profile)


def j_field(params: ModelParams, profile: LiftProfile = KAHLER) -> Callable[[np.ndarray], np.ndarray]:
    """Coordinate-frame matrix field of the structure tensor, for fd work."""

    def field(z: np.ndarray) -> np.ndarray:
        geo = geometry_from_z(params, z)
        data = components_from_geometry(params, geo, profile)
        return frame_transform(_j_adapted(data), "ud", geo.frame, to="coordinate")

    return field


def hermitian_residual(data: LiftedMetricData) -> float:
    """Max |S(J., J.) - S| over adapted basis pairs."""
    S = adapted_metric_matrix(data)
    J = _j_adapted(data)
    return float(np.max(np.abs(J.T @ S @ J - S)))


def j_squared_residual(data: LiftedMetricData) -> float:
    J = _j_adapted(data)
    eye = np.eye(J.shape[0])
    return float(np.max(np.abs(J @ J + eye)))


@dataclass(frozen=True)
class FundamentalFormData:
    """Fundamental 2-form in both frames plus a closedness residual."""

    adapted: np.ndarray
    coordinate: np.ndarray
    dphi_residual: float


def fundamental_form(
    params: ModelParams,
    pt: BundlePoint,
    profile: LiftProfile = KAHLER,
    cfg: FdConfig = DEFAULT_FD,
) -> FundamentalFormData:
    """phi(X, Y) = S(X, JY) with the closedness of phi checked by fd.

    In adapted components phi pairs the two distributions with +-identity;
    in coordinates it is the canonical form, so the fd exterior derivative
    of the coordinate coefficient field must vanish.
    """

    geo = point_geometry(params, pt)
    data = components_from_geometry(params, geo, profile)
    S = adapted_metric_matrix(data)
    J = _j_adapted(data)
    phi_ad = S @ J
    phi_coord = frame_transform(phi_ad, "dd", geo.frame, to="coordinate")

    def phi_field(z: np.ndarray) -> np.ndarray:
        g2 = geometry_from_z(params, z)
        d2 = components_from_geometry(params, g2, profile)
        return frame_transform(adapted_metric_matrix(d2) @ _j_adapted(d2), "dd", g2.frame, to="coordinate")

    dphi = exterior_derivative_two_form(phi_field, pt.z, cfg)
    return FundamentalFormData(
        adapted=phi_ad, coordinate=phi_coord, dphi_residual=float(np.max(np.abs(dphi.value))),
    )


def fundamental_form_block_residual(phi_adapted: np.ndarray) -> float:
    """Deviation of the adapted-frame form from the canonical block pattern."""
    n = phi_adapted.shape[0] // 2
    expected = np.zeros_like(phi_adapted)
    expected[:n, n:] = -np.eye(n)
    expected[n:, :n] = np.eye(n)
    return float(np.max(np.abs(phi_adapted - expected)))


@dataclass(frozen=True)
class NijenhuisData:
    """Component families of the Nijenhuis tensor in the adapted frame.

    Layout is [k, i, j]: component k of N(e_i, e_j).  The output
    distribution differs per family: horiz_horiz and vert_vert produce
    vertical vectors, horiz_vert produces horizontal ones.
    """

    horiz_horiz: np.ndarray
    horiz_vert: np.ndarray
    vert_vert: np.ndarray

    def max_abs(self) -> float:
        return float(
            max(
                np.max(np.abs(self.horiz_horiz), initial=0.0),
                np.max(np.abs(self.horiz_vert), initial=0.0),
                np.max(np.abs(self.vert_vert), initial=0.0),
            )
        )


def nijenhuis_closed_form(params: ModelParams, pt: BundlePoint, profile: LiftProfile = KAHLER) -> NijenhuisData:
    """The three component families from the core-tensor contraction."""
    geo = point_geometry(params, pt)
    data = components_from_geometry(params, geo, profile)
    core = _nijenhuis_core(params, geo, data)
    H = data.H
    return NijenhuisData(
        horiz_horiz=core,
        horiz_vert=np.einsum("kl,jr,lir->kij", H, H, core),
        vert_vert=np.einsum("ir,jl,klr->kij", H, H, core),
    )


def _nijenhuis_core(params: ModelParams, geo: PointGeometry, data: LiftedMetricData) -> np.ndarray:
    A = params.lift_const
    scale = A * data.t * (data.v + A)
    g, p = geo.g, geo.p
    return scale * (
        np.einsum("i,jk->kij", p, g) - np.einsum("j,ik->kij", p, g)
    ) - geo.riem_p


def nijenhuis_fd(
    params: ModelParams,
    pt: BundlePoint,
    profile: LiftProfile = KAHLER,
    cfg: FdConfig = DEFAULT_FD,
) -> NijenhuisData:
    """Recompute the Nijenhuis families from bracket definitions by fd.

    N(X, Y) = [JX, JY] - J[JX, Y] - J[X, JY] - [X, Y] evaluated on frame
    field pairs, then expressed in the adapted frame.  Antisymmetry fills
    the redundant slots of the antisymmetric-input families.
    """

    return nijenhuis_fd_full(params, pt, profile, cfg)[0]


def nijenhuis_fd_full(
    params: ModelParams,
    pt: BundlePoint,
    profile: LiftProfile = KAHLER,
    cfg: FdConfig = DEFAULT_FD,
) -> tuple[NijenhuisData, float]:
    """fd families plus the largest component landing outside the expected
    output distribution (structurally zero in the closed forms)."""

    geo = point_geometry(params, pt)
    n = geo.n
    z = pt.z
    jf = j_field(params, profile)
    j0 = jf(z)
    horiz = [horizontal_field(params, i) for i in range(n)]
    vert = [vertical_field(n, i) for i in range(n)]

    def j_of(field):
        def jx(zz):
            return jf(zz) @ field(zz)

        return jx

    def tensor(xf, yf) -> np.ndarray:
        b1 = lie_bracket(j_of(xf), j_of(yf), z, cfg).value
        b2 = lie_bracket(j_of(xf), yf, z, cfg).value
        b3 = lie_bracket(xf, j_of(yf), z, cfg).value
        b4 = lie_bracket(xf, yf, z, cfg).value
        return geo.frame.Minv @ (b1 - j0 @ b2 - j0 @ b3 - b4)

    hh = np.zeros((2 * n, n, n))
    hv = np.zeros((2 * n, n, n))
    vv = np.zeros((2 * n, n, n))
    for i in range(n):
        for j in range(i + 1, n):
            val = tensor(horiz[i], horiz[j])
            hh[:, i, j], hh[:, j, i] = val, -val
            val = tensor(vert[i], vert[j])
            vv[:, i, j], vv[:, j, i] = val, -val
        for j in range(n):
            hv[:, i, j] = tensor(horiz[i], vert[j])

    off = max(
        float(np.max(np.abs(hh[:n]), initial=0.0)),
        float(np.max(np.abs(hv[n:]), initial=0.0)),
        float(np.max(np.abs(vv[:n]), initial=0.0)),
    )
    return NijenhuisData(horiz_horiz=hh[n:], horiz_vert=hv[:n], vert_vert=vv[n:]), off
