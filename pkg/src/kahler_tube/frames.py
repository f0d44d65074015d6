"""Adapted frames on the punctured cotangent bundle.

A chart point of the bundle is (q, p) in R^2n.  The horizontal frame fields
are d/dq^i + gamma_p[i, h] d/dp_h with gamma_p[i, h] = p_k gamma^k_ih, the
vertical ones are d/dp_i.  This module builds the change-of-basis matrix
between the coordinate frame and the adapted frame (with its analytic
coordinate derivatives, needed to transform connection coefficients), the
energy density t = g^ik p_i p_k / 2, and finite-difference checks of the
frame bracket relations.

Ordering convention: adapted index a in [0, n) is the a-th horizontal
vector, a in [n, 2n) the (a - n)-th vertical one.  Coordinates are ordered
(q^1..q^n, p_1..p_n).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .base_geometry import BaseMetricData, DomainError, ModelParams, metric_at
from .fd import DEFAULT_FD, FdConfig, lie_bracket


@dataclass(frozen=True)
class BundlePoint:
    """A point of the punctured cotangent bundle: base coordinates and momentum."""

    x: np.ndarray
    p: np.ndarray

    def __post_init__(self) -> None:
        x = np.asarray(self.x, dtype=float)
        p = np.asarray(self.p, dtype=float)
        if x.ndim != 1 or p.shape != x.shape:
            raise ValueError("x and p must be 1-d arrays of equal length")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(p))):
            raise ValueError("bundle coordinates must be finite")
        if not np.any(p):
            raise DomainError("outside punctured bundle: momentum must be nonzero")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "p", p)

    @property
    def z(self) -> np.ndarray:
        """Concatenated chart coordinates (q, p) on R^2n."""
        return np.concatenate([self.x, self.p])


@dataclass(frozen=True)
class AdaptedFrame:
    """Change of basis between coordinate and adapted frames at one point.

    M[mu, a] holds the coordinate components of the a-th adapted vector;
    Minv is its inverse, whose rows are the dual coframe; dM[mu, nu, b] is
    the analytic partial of M[nu, b] along coordinate mu.
    """

    M: np.ndarray
    Minv: np.ndarray
    dM: np.ndarray

    @property
    def n(self) -> int:
        return self.M.shape[0] // 2

    def dual_pairing_residual(self) -> float:
        """Max |coframe(frame) - identity|; zero up to round-off."""
        eye = np.eye(self.M.shape[0])
        return float(np.max(np.abs(self.Minv @ self.M - eye)))


@dataclass(frozen=True)
class PointGeometry:
    """Everything the lift needs at a single bundle point.

    Bundles the base metric data at the foot point with momentum-contracted
    quantities and the adapted frame, so the rest of the package can work
    from one object instead of recomputing shared pieces.
    """

    params: ModelParams
    x: np.ndarray
    p: np.ndarray
    base: BaseMetricData
    t: float                # energy density
    p_raised: np.ndarray    # g^ik p_k
    gamma_p: np.ndarray     # [i, h] = p_k gamma^k_ih
    frame: AdaptedFrame

    @property
    def n(self) -> int:
        return self.params.dim

    @property
    def g(self) -> np.ndarray:
        return self.base.g

    @property
    def g_inv(self) -> np.ndarray:
        return self.base.g_inv

    @property
    def gamma(self) -> np.ndarray:
        return self.base.gamma

    @property
    def riem(self) -> np.ndarray:
        return self.base.riem

    @property
    def riem_p(self) -> np.ndarray:
        """Momentum-contracted curvature: [k, i, j] = p_h riem[h, k, i, j]."""
        return np.einsum("h,hkij->kij", self.p, self.base.riem)

    @property
    def z(self) -> np.ndarray:
        return np.concatenate([self.x, self.p])


def geometry_at(params: ModelParams, x: np.ndarray, p: np.ndarray) -> PointGeometry:
    """Build PointGeometry from raw arrays (no puncture validation, for field use)."""
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    n = params.dim
    base = metric_at(params, x)
    t = 0.5 * float(p @ base.g_inv @ p)
    p_raised = base.g_inv @ p
    gamma_p = np.einsum("k,kih->ih", p, base.gamma)

    M = np.eye(2 * n)
    M[n:, :n] = gamma_p.T
    Minv = np.eye(2 * n)
    Minv[n:, :n] = -gamma_p.T
    dM = np.zeros((2 * n, 2 * n, 2 * n))
    # d/dq^l of gamma_p[i, h], arranged as dM[l, n + h, i]
    dgp = np.einsum("k,kihl->ihl", p, base.dgamma)
    dM[:n, n:, :n] = np.transpose(dgp, (2, 1, 0))
    # d/dp_l of gamma_p[i, h] = gamma^l_ih, arranged as dM[n + l, n + h, i]
    dM[n:, n:, :n] = np.transpose(base.gamma, (0, 2, 1))

    return PointGeometry(
        params=params, x=x, p=p, base=base, t=t, p_raised=p_raised, gamma_p=gamma_p,
        frame=AdaptedFrame(M=M, Minv=Minv, dM=dM),
    )


def point_geometry(params: ModelParams, pt: BundlePoint) -> PointGeometry:
    return geometry_at(params, pt.x, pt.p)


def geometry_from_z(params: ModelParams, z: np.ndarray) -> PointGeometry:
    n = params.dim
    z = np.asarray(z, dtype=float)
    return geometry_at(params, z[:n], z[n:])


def energy_density(params: ModelParams, pt: BundlePoint) -> float:
    """t = g^ik p_i p_k / 2 at the bundle point; positive off the zero section."""
    geo = point_geometry(params, pt)
    if geo.t <= 0.0:
        raise DomainError("outside punctured bundle: energy density must be positive")
    return geo.t


def frame_transform(values: np.ndarray, variance: str, frame: AdaptedFrame, to: str = "coordinate") -> np.ndarray:
    """Transform full 2n-dimensional tensor components between frames.

    variance has one letter per index, "u" (contravariant) or "d"
    (covariant).  ``to`` selects the target frame, "coordinate" or
    "adapted".
    """

    T = np.asarray(values, dtype=float)
    if len(variance) != T.ndim:
        raise ValueError(f"variance {variance!r} does not match tensor rank {T.ndim}")
    if any(ch not in "ud" for ch in variance):
        raise ValueError("variance letters must be 'u' or 'd'")
    if to not in ("coordinate", "adapted"):
        raise ValueError("target frame must be 'coordinate' or 'adapted'")
    for axis, ch in enumerate(variance):
        if to == "coordinate":
            # upper: coord^mu = M[mu, a] T^a; lower: coord_nu = Minv[b, nu] T_b
            mat, contract = (frame.M, 1) if ch == "u" else (frame.Minv, 0)
        else:
            # upper: ad^a = Minv[a, mu] T^mu; lower: ad_b = M[nu, b] T_nu
            mat, contract = (frame.Minv, 1) if ch == "u" else (frame.M, 0)
        T = np.moveaxis(np.tensordot(mat, T, axes=(contract, axis)), 0, axis)
    return T


@dataclass(frozen=True)
class FrameBlockTensor:
    """A tensor on the bundle stored as adapted-frame blocks.

    Keys are strings with one letter per index, "h" for horizontal and "v"
    for vertical; each block is an (n, ..., n) array.  Missing sectors are
    treated as zero.
    """

    blocks: Mapping[str, np.ndarray]
    variance: str
    n: int

    def __post_init__(self) -> None:
        rank = len(self.variance)
        for key, block in self.blocks.items():
            if len(key) != rank or any(ch not in "hv" for ch in key):
                raise ValueError(f"bad sector key {key!r} for rank {rank}")
            if np.asarray(block).shape != (self.n,) * rank:
                raise ValueError(f"sector {key!r} has shape {np.shape(block)}, expected {(self.n,) * rank}")

    def to_full(self) -> np.ndarray:
        rank = len(self.variance)
        full = np.zeros((2 * self.n,) * rank)
        for key, block in self.blocks.items():
            index = tuple(slice(0, self.n) if ch == "h" else slice(self.n, 2 * self.n) for ch in key)
            full[index] = block
        return full

    @classmethod
    def from_full(cls, full: np.ndarray, variance: str, n: int) -> "FrameBlockTensor":
        full = np.asarray(full, dtype=float)
        rank = len(variance)
        blocks = {}
        for bits in range(2 ** rank):
            key = "".join("h" if (bits >> k) & 1 == 0 else "v" for k in range(rank))
            index = tuple(slice(0, n) if ch == "h" else slice(n, 2 * n) for ch in key)
            sector = full[index]
            if np.any(sector):
                blocks[key] = sector.copy()
        return cls(blocks=blocks, variance=variance, n=n)


def horizontal_field(params: ModelParams, i: int) -> Callable[[np.ndarray], np.ndarray]:
    """The i-th horizontal frame field as a coordinate vector field on R^2n."""

    def field(z: np.ndarray) -> np.ndarray:
        geo = geometry_from_z(params, z)
        return geo.frame.M[:, i].copy()

    return field


def vertical_field(n: int, i: int) -> Callable[[np.ndarray], np.ndarray]:
    """The i-th vertical frame field (constant in bundle coordinates)."""
    e = np.zeros(2 * n)
    e[n + i] = 1.0

    def field(z: np.ndarray) -> np.ndarray:
        return e.copy()

    return field


@dataclass(frozen=True)
class BracketResiduals:
    """Max deviations of finite-difference frame brackets from closed forms."""

    vert_vert: float
    mixed: float
    horiz_horiz: float
    reliable: bool


def verify_brackets(params: ModelParams, pt: BundlePoint, cfg: FdConfig = DEFAULT_FD) -> BracketResiduals:
    """Check the three bracket relations of the adapted frame numerically.

    [d/dp_i, d/dp_j] = 0,
    [d/dp_i, delta/deltaq^j] = gamma^i_jk d/dp_k,
    [delta/deltaq^i, delta/deltaq^j] = p_h riem[h, k, i, j] d/dp_k.
    """

    geo = point_geometry(params, pt)
    n = geo.n
    z = pt.z
    horiz = [horizontal_field(params, i) for i in range(n)]
    vert = [vertical_field(n, i) for i in range(n)]
    riem_p = geo.riem_p

    worst_err = 0.0
    res_vv = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            br = lie_bracket(vert[i], vert[j], z, cfg)
            res_vv = max(res_vv, float(np.max(np.abs(br.value))))
            worst_err = max(worst_err, br.error)

    res_mixed = 0.0
    for i in range(n):
        for j in range(n):
            br = lie_bracket(vert[i], horiz[j], z, cfg)
            expected = np.zeros(2 * n)
            expected[n:] = geo.gamma[i, j, :]
            res_mixed = max(res_mixed, float(np.max(np.abs(br.value - expected))))
            worst_err = max(worst_err, br.error)

    res_hh = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            br = lie_bracket(horiz[i], horiz[j], z, cfg)
            expected = np.zeros(2 * n)
            expected[n:] = riem_p[:, i, j]
            res_hh = max(res_hh, float(np.max(np.abs(br.value - expected))))
            worst_err = max(worst_err, br.error)

    return BracketResiduals(
        vert_vert=res_vv, mixed=res_mixed, horiz_horiz=res_hh,
        reliable=worst_err <= cfg.disagreement_factor * 1e-6,
    )


def energy_frame_derivatives(params: ModelParams, pt: BundlePoint, cfg: FdConfig = DEFAULT_FD) -> tuple[float, float]:
    """Residuals of the frame derivatives of t.

    Horizontally t is constant; vertically d t / dp_k equals the raised
    momentum.  Returns (max horizontal residual, max vertical residual).
    """

    geo = point_geometry(params, pt)
    n = geo.n
    z = pt.z

    def t_field(zz: np.ndarray) -> float:
        g2 = geometry_from_z(params, zz)
        return g2.t

    from .fd import directional_derivative

    res_h = 0.0
    for i in range(n):
        d = directional_derivative(t_field, z, geo.frame.M[:, i], cfg)
        res_h = max(res_h, abs(float(d.value)))
    res_v = 0.0
    for k in range(n):
        d = directional_derivative(t_field, z, geo.frame.M[:, n + k], cfg)
        res_v = max(res_v, abs(float(d.value) - geo.p_raised[k]))
    return res_h, res_v
