"""Lifted metric on the tube: components, inverse, tube domain, profiles."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kahler_tube.base_geometry import DomainError, ModelParams
from kahler_tube.frames import BundlePoint, frame_transform, point_geometry
from kahler_tube.lifted_metric import (
    KAHLER,
    LiftProfile,
    adapted_metric_matrix,
    assemble_full_metric,
    components_from_geometry,
    kahler_identity_residual,
    metric_components,
    offset_profile,
    tube_check,
    w_consistency_residual,
)

PARAMS = ModelParams(3)
# Flat-origin anchor: x = 0, p = (1,0,0) gives t = 1/2.
ANCHOR = BundlePoint(x=np.zeros(3), p=np.array([1.0, 0.0, 0.0]))


def test_anchor_components() -> None:
    data = metric_components(PARAMS, ANCHOR)
    assert data.t == pytest.approx(0.5, abs=1e-15)
    assert data.v == pytest.approx(1.0, abs=1e-14)
    assert data.w == pytest.approx(-4.0 / 3.0, abs=1e-14)
    assert np.max(np.abs(data.G - np.diag([1.5, 0.5, 0.5]))) < 1e-14
    assert np.max(np.abs(data.H - np.diag([2.0 / 3.0, 2.0, 2.0]))) < 1e-14


def test_inverse_pair_and_positivity() -> None:
    pt = BundlePoint(x=np.array([0.2, -0.4, 0.1]), p=np.array([0.5, 0.3, -0.2]))
    data = metric_components(PARAMS, pt)
    assert np.max(np.abs(data.G @ data.H - np.eye(3))) < 1e-13
    assert np.min(np.linalg.eigvalsh(data.G)) > 0.0


def test_kahler_identities() -> None:
    pt = BundlePoint(x=np.array([-0.3, 0.1, 0.6]), p=np.array([0.2, -0.7, 0.4]))
    data = metric_components(PARAMS, pt)
    assert kahler_identity_residual(PARAMS, data) < 1e-14
    assert w_consistency_residual(PARAMS, data) < 1e-13


def test_full_metric_blocks() -> None:
    geo = point_geometry(PARAMS, ANCHOR)
    data = components_from_geometry(PARAMS, geo, KAHLER)
    S_coord = assemble_full_metric(PARAMS, ANCHOR)
    blocks = frame_transform(S_coord, "dd", geo.frame, to="adapted")
    expected = adapted_metric_matrix(data)
    assert np.max(np.abs(blocks - expected)) < 1e-13
    # Off-diagonal blocks of the adapted matrix vanish by construction.
    assert np.max(np.abs(expected[:3, 3:])) == 0.0


def test_tube_check_boundaries() -> None:
    # c = A = 1: the tube is 0 < |p|_g^2 < 4.
    ok = tube_check(PARAMS, BundlePoint(x=np.zeros(3), p=np.array([1.9, 0.0, 0.0])))
    assert ok.admissible
    assert ok.reason is None
    assert ok.momentum_norm_sq == pytest.approx(3.61, abs=1e-12)
    assert ok.bound == pytest.approx(4.0, abs=1e-15)
    edge = tube_check(PARAMS, BundlePoint(x=np.zeros(3), p=np.array([2.0, 0.0, 0.0])))
    assert not edge.admissible  # the boundary itself is excluded
    out = tube_check(PARAMS, BundlePoint(x=np.zeros(3), p=np.array([2.1, 0.0, 0.0])))
    assert not out.admissible
    assert "tube bound" in out.reason


def test_tube_check_reports_inadmissible_params() -> None:
    bad = ModelParams(3, curvature=-2.0)
    check = tube_check(bad, ANCHOR)
    assert not check.admissible
    assert check.reason == "2c - A^2 t > 0 unsatisfiable for t > 0"
    assert np.isnan(check.bound)


def test_metric_components_outside_tube_raise() -> None:
    with pytest.raises(DomainError):
        metric_components(PARAMS, BundlePoint(x=np.zeros(3), p=np.array([2.5, 0.0, 0.0])))


def test_offset_profile_changes_v_only() -> None:
    prof = offset_profile(PARAMS, 0.1)
    assert not prof.is_kahler
    data = metric_components(PARAMS, ANCHOR, prof)
    base = metric_components(PARAMS, ANCHOR)
    assert data.v == pytest.approx(base.v + 0.1, abs=1e-14)
    # G changes only through the p (x) p term; H remains its exact inverse.
    assert np.max(np.abs(data.G @ data.H - np.eye(3))) < 1e-13


def test_profile_guards() -> None:
    assert KAHLER.is_kahler
    assert LiftProfile().is_kahler
    with pytest.raises(DomainError):
        KAHLER.v(0.0, PARAMS)  # zero section excluded
    collapsing = LiftProfile(custom_v=lambda t: -1.0)  # A + 2v = -1 < 0
    with pytest.raises(DomainError):
        collapsing.w(0.5, PARAMS)


@settings(max_examples=25, deadline=None)
@given(
    frac=st.floats(min_value=0.02, max_value=0.98, allow_nan=False),
    c=st.floats(min_value=0.2, max_value=3.0, allow_nan=False),
    A=st.floats(min_value=0.2, max_value=2.0, allow_nan=False),
)
def test_tube_interior_always_positive_definite(frac: float, c: float, A: float) -> None:
    params = ModelParams(3, curvature=c, lift_const=A)
    cap = 4.0 * c / (A * A)
    p = np.array([np.sqrt(frac * cap), 0.0, 0.0])
    pt = BundlePoint(x=np.zeros(3), p=p)
    assert tube_check(params, pt).admissible
    data = metric_components(params, pt)
    assert np.min(np.linalg.eigvalsh(data.G)) > 0.0
    assert np.min(np.linalg.eigvalsh(data.H)) > 0.0
