"""Curvature of the lifted metric: closed-form blocks, fd oracle, identities.

In the adapted frame the curvature operator K(X, Y) maps the four
horizontal/vertical sector combinations into a small set of n-dimensional
blocks.  Naming a block by the sector pattern (direction, direction,
argument), the six independent families are

    hhh[h, i, j, k]: horizontal part of K(horiz_i, horiz_j) horiz_k
    hhv           = -hhh with the argument/output slots read vertically
    vvh[i, j, h, k]: horizontal part of K(vert_i, vert_j) horiz
    vvv           = -vvh read vertically
    vhh[i, j, k, h]: vertical part of K(vert_i, horiz_j) horiz_k
    vhv[i, k, h, j]: horizontal part of K(vert_i, horiz_k) vert

Every other sector vanishes identically.  The oracle recomputes the full
2n-dimensional coordinate curvature from finite differences of the Koszul
Christoffel field (itself finite differences of the metric), so nothing in
the oracle path touches the closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .base_geometry import DomainError, ModelParams
from .connection import (
    adapted_connection_matrix,
    coefficients_closed_form,
    coordinate_connection_closed_form,
    koszul_oracle,
)
from .fd import (
    DEFAULT_FD,
    KOSZUL_FD,
    STACKED_FD,
    TWICE_STACKED_FD,
    FdConfig,
    directional_derivative,
    field_jacobian,
)
from .frames import (
    BundlePoint,
    PointGeometry,
    frame_transform,
    geometry_from_z,
    point_geometry,
)
from .lifted_metric import (
    KAHLER,
    LiftProfile,
    LiftedMetricData,
    adapted_metric_matrix,
    assemble_full_metric,
    components_from_geometry,
    metric_field,
)


@dataclass(frozen=True)
class CurvatureBlocks:
    """Closed-form curvature families at one point (index layouts above)."""

    hhh: np.ndarray
    vvh: np.ndarray
    vhh: np.ndarray
    vhv: np.ndarray

    @property
    def n(self) -> int:
        return self.hhh.shape[0]


def _blocks(
    params: ModelParams, geo: PointGeometry, data: LiftedMetricData, profile: LiftProfile
) -> CurvatureBlocks:
    if not profile.is_kahler:
        raise DomainError("closed-form curvature blocks require the integrable profile")
    n = geo.n
    c, A, t = params.curvature, params.lift_const, data.t
    g, ginv, p, pr = geo.g, geo.g_inv, geo.p, geo.p_raised
    G, H = data.G, data.H
    eye = np.eye(n)
    bound = 2.0 * c - A * A * t

    hhh = (
        (0.5 * A * A * t)
        * (np.einsum("hi,jk->hijk", eye, g) - np.einsum("hj,ik->hijk", eye, g))
        + (0.25 * A * A)
        * (np.einsum("ik,j,h->hijk", g, p, pr) - np.einsum("jk,i,h->hijk", g, p, pr))
        - (0.25 * A * A)
        * (np.einsum("hi,j,k->hijk", eye, p, p) - np.einsum("hj,i,k->hijk", eye, p, p))
    )

    vvh = (
        -(0.5 / t)
        * (np.einsum("ik,jh->ijhk", eye, ginv) - np.einsum("jk,ih->ijhk", eye, ginv))
        - (0.25 / (t * t))
        * (np.einsum("ih,j,k->ijhk", ginv, pr, p) - np.einsum("jh,i,k->ijhk", ginv, pr, p))
        + (0.25 / (t * t))
        * (np.einsum("ik,j,h->ijhk", eye, pr, pr) - np.einsum("jk,i,h->ijhk", eye, pr, pr))
    )

    vhh = (
        (0.5 * A) * np.einsum("ij,hk->ijkh", eye, G)
        + (bound / (4.0 * t))
        * (np.einsum("ik,h,j->ijkh", eye, p, p) + np.einsum("ih,k,j->ijkh", eye, p, p))
        + (0.25 * A * A)
        * (np.einsum("jh,k,i->ijkh", g, p, pr) + np.einsum("jk,h,i->ijkh", g, p, pr))
        - (0.5 * c / (t * t)) * np.einsum("i,j,h,k->ijkh", pr, p, p, p)
    )

    vhv = (
        -(0.5 * A) * np.einsum("ij,hk->ikhj", eye, H)
        - (0.25 / (t * t))
        * (np.einsum("ih,k,j->ikhj", ginv, pr, p) + np.einsum("ik,h,j->ikhj", ginv, pr, p))
        - (0.25 * A * A / (t * bound))
        * (np.einsum("hj,k,i->ikhj", eye, pr, pr) + np.einsum("kj,h,i->ikhj", eye, pr, pr))
        + (0.5 * c / (t ** 3 * bound)) * np.einsum("i,h,k,j->ikhj", pr, pr, pr, p)
    )
    return CurvatureBlocks(hhh=hhh, vvh=vvh, vhh=vhh, vhv=vhv)


def curvature_blocks_closed_form(
    params: ModelParams, pt: BundlePoint, profile: LiftProfile = KAHLER
) -> CurvatureBlocks:
    geo = point_geometry(params, pt)
    data = components_from_geometry(params, geo, profile)
    return _blocks(params, geo, data, profile)


def assemble_adapted_curvature(blocks: CurvatureBlocks) -> np.ndarray:
    """Full adapted-frame tensor R[a, b, c, d]: output a of K(e_c, e_d) e_b."""
    n = blocks.n
    R = np.zeros((2 * n,) * 4)
    hhh, vvh, vhh, vhv = blocks.hhh, blocks.vvh, blocks.vhh, blocks.vhv
    R[:n, :n, :n, :n] = np.einsum("hijk->hkij", hhh)
    R[n:, n:, :n, :n] = -np.einsum("kijh->hkij", hhh)
    R[:n, :n, n:, n:] = np.einsum("ijhk->hkij", vvh)
    R[n:, n:, n:, n:] = -np.einsum("ijkh->hkij", vvh)
    R[n:, :n, n:, :n] = np.einsum("ijkh->hkij", vhh)
    R[n:, :n, :n, n:] = -np.einsum("ijkh->hkji", vhh)
    R[:n, n:, n:, :n] = np.einsum("ikhj->hkij", vhv)
    R[:n, n:, :n, n:] = -np.einsum("ikhj->hkji", vhv)
    return R


def curvature_from_metric_field(
    metric_field_fn: Callable[[np.ndarray], np.ndarray],
    z: np.ndarray,
    inner_cfg: FdConfig = KOSZUL_FD,
    outer_cfg: FdConfig = STACKED_FD,
) -> np.ndarray:
    """Coordinate curvature of an arbitrary metric field, twice-nested fd.

    The Christoffel field comes from the Koszul formula (one fd layer); its
    derivative is a second fd layer taken with a larger step so the noise
    of the first layer stays below the central-difference signal.
    """

    def christoffel_field(zz: np.ndarray) -> np.ndarray:
        return koszul_oracle(metric_field_fn, zz, inner_cfg)

    gamma = christoffel_field(np.asarray(z, dtype=float))
    dgamma = field_jacobian(christoffel_field, z, outer_cfg).value
    return (
        np.einsum("cadb->abcd", dgamma)
        - np.einsum("dacb->abcd", dgamma)
        + np.einsum("acs,sdb->abcd", gamma, gamma)
        - np.einsum("ads,scb->abcd", gamma, gamma)
    )


def curvature_oracle_coordinates(
    params: ModelParams,
    pt: BundlePoint,
    profile: LiftProfile = KAHLER,
    inner_cfg: FdConfig = KOSZUL_FD,
    outer_cfg: FdConfig = STACKED_FD,
) -> np.ndarray:
    return curvature_from_metric_field(
        metric_field(params, profile), pt.z, inner_cfg, outer_cfg
    )


def curvature_oracle_adapted(
    params: ModelParams,
    pt: BundlePoint,
    profile: LiftProfile = KAHLER,
    inner_cfg: FdConfig = KOSZUL_FD,
    outer_cfg: FdConfig = STACKED_FD,
) -> np.ndarray:
    R = curvature_oracle_coordinates(params, pt, profile, inner_cfg, outer_cfg)
    geo = point_geometry(params, pt)
    return frame_transform(R, "uddd", geo.frame, "adapted")


_ZERO_SECTORS = (
    # (output, argument, dir1, dir2) with h = horizontal slice, v = vertical
    ("h", "h", "v", "h"),
    ("h", "h", "h", "v"),
    ("v", "v", "v", "h"),
    ("v", "v", "h", "v"),
    ("h", "v", "h", "h"),
    ("v", "h", "h", "h"),
    ("h", "v", "v", "v"),
    ("v", "h", "v", "v"),
)


def _sector(R: np.ndarray, pattern: tuple[str, str, str, str], n: int) -> np.ndarray:
    sl = {"h": slice(0, n), "v": slice(n, 2 * n)}
    return R[sl[pattern[0]], sl[pattern[1]], sl[pattern[2]], sl[pattern[3]]]


def sector_residuals(
    R_closed: np.ndarray, R_oracle: np.ndarray, n: int
) -> dict[str, float]:
    """Per-family max deviation between closed form and oracle (adapted frame).

    Families with two antisymmetry-related sectors report the worse of the
    two; ``structural_zero`` is the largest oracle entry over the eight
    sectors the closed form leaves empty.
    """

    sectors = {
        "hhh": [("h", "h", "h", "h")],
        "hhv": [("v", "v", "h", "h")],
        "vvh": [("h", "h", "v", "v")],
        "vvv": [("v", "v", "v", "v")],
        "vhh": [("v", "h", "v", "h"), ("v", "h", "h", "v")],
        "vhv": [("h", "v", "v", "h"), ("h", "v", "h", "v")],
    }
    out: dict[str, float] = {}
    for name, pats in sectors.items():
        out[name] = max(
            float(np.max(np.abs(_sector(R_closed, pat, n) - _sector(R_oracle, pat, n))))
            for pat in pats
        )
    out["structural_zero"] = max(
        float(np.max(np.abs(_sector(R_oracle, pat, n)))) for pat in _ZERO_SECTORS
    )
    return out


def direction_antisymmetry_residual(R: np.ndarray) -> float:
    return float(np.max(np.abs(R + np.einsum("abcd->abdc", R))))


def first_bianchi_residual(R: np.ndarray) -> float:
    cyc = R + np.einsum("hkij->hijk", R) + np.einsum("hkij->hjki", R)
    return float(np.max(np.abs(cyc)))


def pair_skew_residual(R: np.ndarray, metric: np.ndarray) -> float:
    """Antisymmetry of the fully lowered tensor in (output, argument)."""
    lowered = np.einsum("ea,abcd->ebcd", metric, R)
    return float(np.max(np.abs(lowered + np.einsum("ebcd->becd", lowered))))


def j_invariance_residual(R: np.ndarray, metric: np.ndarray, J: np.ndarray) -> float:
    """Residual of <K(X,Y) J Z, J W> = <K(X,Y) Z, W> (any single frame)."""
    lhs = np.einsum("abcd,bz,ae,ew->wzcd", R, J, metric, J)
    rhs = np.einsum("azcd,aw->wzcd", R, metric)
    return float(np.max(np.abs(lhs - rhs)))


def ricci_tensor(R: np.ndarray) -> np.ndarray:
    return np.einsum("abad->db", R)


@dataclass(frozen=True)
class EinsteinResiduals:
    """Oracle-route Einstein certificate at one point."""

    identity: float
    mixed_block: float


def einstein_residuals(
    params: ModelParams,
    pt: BundlePoint,
    profile: LiftProfile = KAHLER,
    inner_cfg: FdConfig = KOSZUL_FD,
    outer_cfg: FdConfig = STACKED_FD,
    R_coord: np.ndarray | None = None,
) -> EinsteinResiduals:
    """Ricci of the oracle curvature against (A n / 2) times the metric.

    The curvature is produced entirely by finite differences, so a pass
    certifies the Einstein property independently of every closed form.
    Pass ``R_coord`` to reuse an already-computed oracle tensor.
    """

    geo = point_geometry(params, pt)
    if R_coord is None:
        R_coord = curvature_oracle_coordinates(params, pt, profile, inner_cfg, outer_cfg)
    ric = ricci_tensor(R_coord)
    S_coord = assemble_full_metric(params, pt, profile)
    factor = 0.5 * params.lift_const * params.dim
    identity = float(np.max(np.abs(ric - factor * S_coord)))
    ric_ad = frame_transform(ric, "dd", geo.frame, "adapted")
    n = geo.n
    mixed = max(
        float(np.max(np.abs(ric_ad[:n, n:]))), float(np.max(np.abs(ric_ad[n:, :n])))
    )
    return EinsteinResiduals(identity=identity, mixed_block=mixed)


def coordinate_curvature_closed_form(
    params: ModelParams, pt: BundlePoint, profile: LiftProfile = KAHLER
) -> np.ndarray:
    geo = point_geometry(params, pt)
    data = components_from_geometry(params, geo, profile)
    R_ad = assemble_adapted_curvature(_blocks(params, geo, data, profile))
    return frame_transform(R_ad, "uddd", geo.frame, "coordinate")


def covariant_derivative_residual(
    params: ModelParams,
    pt: BundlePoint,
    profile: LiftProfile = KAHLER,
    route: str = "closed_form",
) -> float:
    """Max |nabla K| in coordinates: local symmetry of the curvature.

    ``route="closed_form"`` differentiates the analytic curvature field
    with the closed-form connection: near machine precision, and sound as
    a certificate because the differentiated field and the connection are
    themselves oracle-certified pointwise by the other checks.
    ``route="oracle"`` stacks a third fd layer on the oracle curvature
    field with Koszul-oracle Christoffels; its noise floor is the oracle's
    pointwise error divided by the outermost step, so it only resolves the
    identity away from the tube boundary and is provided for spot checks,
    not for the battery.
    """

    z = pt.z
    if route == "oracle":
        field = metric_field(params, profile)

        def curv_field(zz: np.ndarray) -> np.ndarray:
            return curvature_from_metric_field(field, zz)

        K = curv_field(z)
        dK = field_jacobian(curv_field, z, TWICE_STACKED_FD).value
        chris = koszul_oracle(field, z)
    elif route == "closed_form":

        def curv_field(zz: np.ndarray) -> np.ndarray:
            return coordinate_curvature_closed_form(
                params, BundlePoint(zz[: params.dim], zz[params.dim :]), profile
            )

        K = curv_field(z)
        dK = field_jacobian(curv_field, z, DEFAULT_FD).value
        chris = coordinate_connection_closed_form(params, pt, profile)
    else:
        raise ValueError(f"unknown covariant-derivative route {route!r}")
    nabla = (
        dK
        + np.einsum("als,sbcd->labcd", chris, K)
        - np.einsum("slb,ascd->labcd", chris, K)
        - np.einsum("slc,absd->labcd", chris, K)
        - np.einsum("sld,abcs->labcd", chris, K)
    )
    return float(np.max(np.abs(nabla)))


def _family_fields(
    params: ModelParams, profile: LiftProfile
) -> dict[str, Callable[[np.ndarray], np.ndarray]]:
    def make(name: str) -> Callable[[np.ndarray], np.ndarray]:
        def field(zz: np.ndarray) -> np.ndarray:
            geo = geometry_from_z(params, zz)
            data = components_from_geometry(params, geo, profile)
            return getattr(_blocks(params, geo, data, profile), name)

        return field

    return {name: make(name) for name in ("hhh", "vvh", "vhh", "vhv")}


def _parallel_rhs(name: str, T: np.ndarray, C: np.ndarray, l: int) -> np.ndarray:
    """Connection contractions matching the frame derivative of family ``name``.

    ``C[h, l, s]`` holds the coefficients for derivatives along direction
    ``l``: base Christoffels for horizontal directions, the mixed-slot
    closed-form coefficients for vertical ones.  Signs follow the variance
    of each block index.
    """

    Cl = C[:, l, :]
    if name == "hhh":  # upper h; lower i, j, k
        return (
            -np.einsum("hs,sijk->hijk", Cl, T)
            + np.einsum("si,hsjk->hijk", Cl, T)
            + np.einsum("sj,hisk->hijk", Cl, T)
            + np.einsum("sk,hijs->hijk", Cl, T)
        )
    if name == "vvh":  # upper i, j, h; lower k
        return (
            np.einsum("sk,ijhs->ijhk", Cl, T)
            - np.einsum("is,sjhk->ijhk", Cl, T)
            - np.einsum("js,ishk->ijhk", Cl, T)
            - np.einsum("hs,ijsk->ijhk", Cl, T)
        )
    if name == "vhh":  # upper i; lower j, k, h
        return (
            -np.einsum("is,sjkh->ijkh", Cl, T)
            + np.einsum("sj,iskh->ijkh", Cl, T)
            + np.einsum("sk,ijsh->ijkh", Cl, T)
            + np.einsum("sh,ijks->ijkh", Cl, T)
        )
    if name == "vhv":  # upper i, k, h; lower j
        return (
            np.einsum("sj,ikhs->ikhj", Cl, T)
            - np.einsum("is,skhj->ikhj", Cl, T)
            - np.einsum("ks,ishj->ikhj", Cl, T)
            - np.einsum("hs,iksj->ikhj", Cl, T)
        )
    raise ValueError(f"unknown curvature family {name!r}")


def parallel_block_residuals(
    params: ModelParams,
    pt: BundlePoint,
    profile: LiftProfile = KAHLER,
    cfg: FdConfig = DEFAULT_FD,
) -> dict[str, float]:
    """Frame-derivative parallelism of each curvature family.

    Returns keys like ``parallel_hhh_horizontal``: the fd derivative of the
    block along every frame direction of the stated type must match the
    connection contractions of the block itself.
    """

    geo = point_geometry(params, pt)
    coeffs = coefficients_closed_form(params, pt, profile)
    fields = _family_fields(params, profile)
    n = geo.n
    z = pt.z
    out: dict[str, float] = {}
    for name, field in fields.items():
        T = field(z)
        for kind, C, offset in (
            ("horizontal", geo.gamma, 0),
            ("vertical", coeffs.mixed, n),
        ):
            worst = 0.0
            for l in range(n):
                direction = geo.frame.M[:, offset + l]
                lhs = directional_derivative(field, z, direction, cfg).value
                rhs = _parallel_rhs(name, T, C, l)
                worst = max(worst, float(np.max(np.abs(lhs - rhs))))
            out[f"parallel_{name}_{kind}"] = worst
    return out


def holomorphic_sectional_curvature(
    R_ad: np.ndarray, metric_ad: np.ndarray, J_ad: np.ndarray, X_ad: np.ndarray
) -> float:
    """<K(X, JX) JX, X> / <X, X>^2 for one adapted-frame direction."""
    jx = J_ad @ X_ad
    kv = np.einsum("abcd,b,c,d->a", R_ad, jx, X_ad, jx)
    num = float(kv @ metric_ad @ X_ad)
    norm_sq = float(X_ad @ metric_ad @ X_ad)
    if norm_sq <= 0.0:
        raise DomainError("holomorphic sectional curvature needs a nonzero direction")
    return num / (norm_sq * norm_sq)


@dataclass(frozen=True)
class HolomorphicSample:
    """Holomorphic sectional curvatures of many directions at one point."""

    values: np.ndarray
    scale_invariance: float

    @property
    def spread(self) -> float:
        lo, hi = float(np.min(self.values)), float(np.max(self.values))
        scale = max(abs(lo), abs(hi))
        return (hi - lo) / scale if scale > 0.0 else 0.0


def holomorphic_sample(
    params: ModelParams,
    pt: BundlePoint,
    directions: np.ndarray,
    profile: LiftProfile = KAHLER,
) -> HolomorphicSample:
    """Evaluate the sectional function on a batch of adapted directions.

    ``scale_invariance`` reports the worst |H(X) - H(2X)| over the batch,
    which must vanish because the defining ratio is degree zero in X.
    """

    geo = point_geometry(params, pt)
    data = components_from_geometry(params, geo, profile)
    R_ad = assemble_adapted_curvature(_blocks(params, geo, data, profile))
    S_ad = adapted_metric_matrix(data)
    n = geo.n
    J_ad = np.zeros((2 * n, 2 * n))
    J_ad[:n, n:] = -data.H
    J_ad[n:, :n] = data.G
    vals = np.empty(len(directions))
    worst_scale = 0.0
    for k, X in enumerate(np.asarray(directions, dtype=float)):
        vals[k] = holomorphic_sectional_curvature(R_ad, S_ad, J_ad, X)
        doubled = holomorphic_sectional_curvature(R_ad, S_ad, J_ad, 2.0 * X)
        worst_scale = max(worst_scale, abs(vals[k] - doubled))
    return HolomorphicSample(values=vals, scale_invariance=worst_scale)
