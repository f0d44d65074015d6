"""Finite-difference kernel: accuracy, axis order, error estimates."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kahler_tube.fd import (
    DEFAULT_FD,
    FdConfig,
    directional_derivative,
    exterior_derivative_two_form,
    field_jacobian,
    lie_bracket,
    partial_derivative,
    unreliable,
)


def test_config_validation() -> None:
    with pytest.raises(ValueError):
        FdConfig(base_step=2e-2)
    with pytest.raises(ValueError):
        FdConfig(base_step=1e-9)
    with pytest.raises(ValueError):
        FdConfig(richardson_levels=3)
    with pytest.raises(ValueError):
        FdConfig(disagreement_factor=0.0)


def test_directional_derivative_exponential() -> None:
    x = np.array([0.3, -0.2])
    d = np.array([1.0, 2.0])
    result = directional_derivative(lambda z: np.exp(z[0] + 0.5 * z[1]), x, d)
    expected = 2.0 * np.exp(0.2)
    assert abs(float(result.value) - expected) < 1e-10
    assert result.error < 1e-8


def test_richardson_levels_tighten_error() -> None:
    x = np.array([0.7])
    d = np.array([1.0])
    errs = []
    for lvl in (0, 1, 2):
        cfg = FdConfig(base_step=1e-3, richardson_levels=lvl)
        res = directional_derivative(lambda z: np.sin(3.0 * z[0]), x, d, cfg)
        errs.append(abs(float(res.value) - 3.0 * np.cos(2.1)))
    assert errs[1] < errs[0]
    assert errs[2] < 1e-10


def test_jacobian_derivative_axis_first() -> None:
    # field(z) = [z0^2, z0*z1, z1^3] has Jacobian rows d/dz_k stacked first.
    def field(z: np.ndarray) -> np.ndarray:
        return np.array([z[0] ** 2, z[0] * z[1], z[1] ** 3])

    z = np.array([1.5, -0.5])
    jac = field_jacobian(field, z)
    assert jac.value.shape == (2, 3)
    expected = np.array([[3.0, -0.5, 0.0], [0.0, 1.5, 0.75]])
    assert np.max(np.abs(jac.value - expected)) < 1e-9


def test_partial_derivative_matches_directional() -> None:
    def field(z: np.ndarray) -> np.ndarray:
        return np.array([np.cos(z[0] * z[1]), z[1]])

    z = np.array([0.4, 0.9])
    axis1 = partial_derivative(field, z, 1)
    e1 = np.zeros(2)
    e1[1] = 1.0
    direct = directional_derivative(field, z, e1)
    assert np.max(np.abs(axis1.value - direct.value)) == 0.0


def test_lie_bracket_linear_fields() -> None:
    # For linear fields X(z) = Bz, Y(z) = Cz the bracket is (CB - BC) z.
    B = np.array([[0.0, 1.0], [0.0, 0.0]])
    C = np.array([[1.0, 0.0], [0.0, 2.0]])
    z = np.array([0.3, 0.8])
    res = lie_bracket(lambda w: B @ w, lambda w: C @ w, z)
    expected = (C @ B - B @ C) @ z
    assert np.max(np.abs(res.value - expected)) < 1e-9


def test_exterior_derivative_of_closed_form_vanishes() -> None:
    # omega = d(alpha) for alpha = (z0*z1^2) dz2 is closed: d(omega) = 0.
    def omega(z: np.ndarray) -> np.ndarray:
        w = np.zeros((3, 3))
        w[0, 2] = z[1] ** 2
        w[1, 2] = 2.0 * z[0] * z[1]
        w[2, 0] = -w[0, 2]
        w[2, 1] = -w[1, 2]
        return w

    res = exterior_derivative_two_form(omega, np.array([0.2, -0.7, 0.4]))
    assert np.max(np.abs(res.value)) < 1e-9


def test_unreliable_flags_large_error() -> None:
    bad = directional_derivative(
        lambda z: np.abs(z[0]), np.array([0.0]), np.array([1.0])
    )
    assert unreliable(bad, 1e-14)
    good = directional_derivative(lambda z: z[0] ** 2, np.array([1.0]), np.array([1.0]))
    assert not unreliable(good, 1e-8)


def test_zero_direction_rejected() -> None:
    with pytest.raises(ValueError):
        directional_derivative(lambda z: z, np.array([1.0]), np.array([0.0]))


@settings(max_examples=40, deadline=None)
@given(
    coeffs=st.lists(
        st.floats(min_value=-2.0, max_value=2.0, allow_nan=False),
        min_size=5,
        max_size=5,
    ),
    x0=st.floats(min_value=-1.0, max_value=1.0, allow_nan=False),
)
def test_quartic_polynomials_near_exact(coeffs: list, x0: float) -> None:
    # One Richardson level cancels the h^2 truncation term, so the rule is
    # exact on quartics up to round-off.
    poly = np.polynomial.Polynomial(coeffs)
    deriv = poly.deriv()
    res = directional_derivative(
        lambda z: poly(z[0]), np.array([x0]), np.array([1.0]), DEFAULT_FD
    )
    assert abs(float(res.value) - deriv(x0)) < 1e-8
