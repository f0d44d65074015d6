"""Constant-curvature base manifold on a single conformal chart.

The chart metric g_ij(x) = delta_ij / (1 + c|x|^2/4)^2 has sectional
curvature c everywhere: on all of R^n for c >= 0 and on the ball
|x|^2 < -4/c for c < 0.  Everything downstream needs g, its inverse, the
Christoffel symbols, the curvature tensor, and first coordinate derivatives
of g and Gamma; all of these are closed-form here.  Finite differences only
appear in the verification oracles, never in the construction.

Index conventions used throughout the package:
    gamma[k, i, j]      Christoffel symbol with upper index k,
    dgamma[k, i, j, l]  its partial derivative along x^l,
    riem[h, k, i, j]    component h of R(d_i, d_j) d_k, so that
                        riem = c * (delta^h_i g_jk - delta^h_j g_ik).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DomainError(ValueError):
    """An evaluation point or parameter set violates a required inequality.

    The message always names the violated condition.
    """


@dataclass(frozen=True)
class ModelParams:
    """Base dimension, sectional curvature of the base, and the lift constant.

    Any finite curvature and lift constant are representable so that the
    negative branches can be exercised in tests, but the lifted structure
    only exists when both are positive; see ``admissible``.
    """

    dim: int
    curvature: float = 1.0
    lift_const: float = 1.0

    def __post_init__(self) -> None:
        if int(self.dim) != self.dim or self.dim < 2:
            raise ValueError(f"dim must be an integer >= 2, got {self.dim!r}")
        object.__setattr__(self, "dim", int(self.dim))
        for name in ("curvature", "lift_const"):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, value)

    @property
    def low_dim_warning(self) -> bool:
        # dim == 2 is accepted for experiments but the constant-curvature
        # rigidity argument behind the construction needs dim >= 3.
        return self.dim == 2

    @property
    def admissible(self) -> bool:
        return self.curvature > 0.0 and self.lift_const > 0.0

    def admissibility_violation(self) -> str | None:
        """Violated inequality as text, or None when admissible."""
        if self.curvature <= 0.0:
            return "2c - A^2 t > 0 unsatisfiable for t > 0"
        if self.lift_const <= 0.0:
            return "lift constant must be positive"
        return None

    def require_admissible(self) -> None:
        reason = self.admissibility_violation()
        if reason is not None:
            raise DomainError(reason)


@dataclass(frozen=True)
class BasePoint:
    """A point in the chart domain."""

    x: np.ndarray

    def __post_init__(self) -> None:
        x = np.asarray(self.x, dtype=float)
        if x.ndim != 1:
            raise ValueError("chart coordinates must form a 1-d array")
        if not np.all(np.isfinite(x)):
            raise ValueError("chart coordinates must be finite")
        object.__setattr__(self, "x", x)


@dataclass(frozen=True)
class BaseMetricData:
    """Closed-form metric data of the base manifold at one chart point."""

    g: np.ndarray        # [i, j]
    g_inv: np.ndarray    # [i, j]
    dg: np.ndarray       # [k, i, j] = partial_k g_ij
    gamma: np.ndarray    # [k, i, j]
    dgamma: np.ndarray   # [k, i, j, l] = partial_l gamma^k_ij
    riem: np.ndarray     # [h, k, i, j]


def _coords(params: ModelParams, x) -> np.ndarray:
    x = x.x if isinstance(x, BasePoint) else np.asarray(x, dtype=float)
    if x.shape != (params.dim,):
        raise ValueError(f"expected a point of dimension {params.dim}, got shape {x.shape}")
    return x


def conformal_factor(params: ModelParams, x) -> float:
    """u(x) = 1 + c|x|^2/4; must stay positive for the chart to be valid."""
    x = _coords(params, x)
    u = 1.0 + 0.25 * params.curvature * float(x @ x)
    if u <= 0.0:
        raise DomainError("conformal factor 1 + c|x|^2/4 must be positive (chart domain)")
    return u


def metric_at(params: ModelParams, x) -> BaseMetricData:
    """Metric, inverse, Christoffels, curvature and derivatives at ``x``."""
    x = _coords(params, x)
    n, c = params.dim, params.curvature
    u = conformal_factor(params, x)
    eye = np.eye(n)

    g = eye / (u * u)
    g_inv = eye * (u * u)
    dg = -(c / u**3) * x[:, None, None] * eye[None, :, :]

    # gamma^k_ij for a conformal metric exp(2 phi) delta with phi = -log u.
    core = (
        eye[:, :, None] * x[None, None, :]
        + eye[:, None, :] * x[None, :, None]
        - eye[None, :, :] * x[:, None, None]
    )  # [k, i, j]: delta_ki x_j + delta_kj x_i - delta_ij x_k
    gamma = -(0.5 * c / u) * core
    dgamma = (0.25 * c * c / (u * u)) * core[:, :, :, None] * x[None, None, None, :] - (
        0.5 * c / u
    ) * (
        eye[:, :, None, None] * eye[None, None, :, :]
        + eye[:, None, :, None] * eye[None, :, None, :]
        - eye[None, :, :, None] * eye[:, None, None, :]
    )

    riem = c * (np.einsum("hi,jk->hkij", eye, g) - np.einsum("hj,ik->hkij", eye, g))
    return BaseMetricData(g=g, g_inv=g_inv, dg=dg, gamma=gamma, dgamma=dgamma, riem=riem)


def metric_field(params: ModelParams):
    """The base metric as a callable field, for finite-difference oracles."""

    def field(x: np.ndarray) -> np.ndarray:
        return metric_at(params, x).g

    return field


def christoffel_field(params: ModelParams):
    """Closed-form Christoffel symbols as a callable field on the chart."""

    def field(x: np.ndarray) -> np.ndarray:
        return metric_at(params, x).gamma

    return field


def verify_constant_curvature(params: ModelParams, x, riem: np.ndarray | None = None) -> float:
    """Max deviation of the curvature tensor from c (delta^h_i g_jk - delta^h_j g_ik).

    With the closed-form tensor this is zero by construction, so callers
    normally pass a recomputed ``riem`` (for example from the finite
    difference oracle) to obtain a meaningful residual.
    """

    data = metric_at(params, x)
    if riem is None:
        riem = data.riem
    eye = np.eye(params.dim)
    expected = params.curvature * (
        np.einsum("hi,jk->hkij", eye, data.g) - np.einsum("hj,ik->hkij", eye, data.g)
    )
    return float(np.max(np.abs(riem - expected)))


def first_bianchi_residual(riem: np.ndarray) -> float:
    """Max |cyclic sum of riem over its three lower slots|."""
    cyc = riem + np.einsum("hkij->hijk", riem) + np.einsum("hkij->hjki", riem)
    return float(np.max(np.abs(cyc)))
