#! /usr/bin/env python3

import logging
import numpy as np
from dataclasses import dataclass
from typing import Optional
from scipy.integrate import cumulative_trapezoid

from src.common.common import EPS_AXIS
from src.curve_core.curve_core import (
    J_MATRIX,
    SampledCurve,
    apply_rotations,
    check_regularity,
    curvature,
    oriented_isometry,
    speed,
    turning_angle,
    unit_tangents,
    )


logger = logging.getLogger('treadmill')


@dataclass(frozen=True)
class TSCurve:
    """
    A TreadmillSled curve gamma = (z, w) sampled at 'params'

    'source_speed' holds |alpha'| when the curve was produced from a source
        curve alpha; 'velocity' optionally holds exact derivatives gamma' (when
        absent, derivatives are taken by finite differences)
    """
    params: np.ndarray
    zw: np.ndarray
    source_speed: Optional[np.ndarray] = None
    velocity: Optional[np.ndarray] = None

    def __post_init__(self):

        assert self.params.ndim == 1
        assert self.zw.shape == (len(self.params), 2)
        assert np.all(np.diff(self.params) > 0)
        if self.source_speed is not None:
            assert self.source_speed.shape == self.params.shape
        if self.velocity is not None:
            assert self.velocity.shape == self.zw.shape

    def __len__(self) -> int:
        return len(self.params)

    @property
    def z(self) -> np.ndarray:
        return self.zw[:, 0]

    @property
    def w(self) -> np.ndarray:
        return self.zw[:, 1]

    def derivative(self) -> np.ndarray:
        if self.velocity is not None:
            return self.velocity
        return np.gradient(self.zw, self.params, axis=0, edge_order=2)

    def horizontal_on_axis(
        self, eps_axis: float = EPS_AXIS, tolerance: float = 1e-4) -> bool:
        """
        Checks that the velocity is horizontal wherever the curve meets the
            y-axis:  |w'| < tolerance * (|z'| + 1) where |z| < eps_axis
        """

        d_zw = self.derivative()
        on_axis = np.abs(self.z) < eps_axis

        return bool(np.all(
            np.abs(d_zw[on_axis, 1])
            < tolerance * (np.abs(d_zw[on_axis, 0]) + 1)))


def ts(c: SampledCurve) -> TSCurve:
    """
    TreadmillSled of a regular curve alpha = (x, y):

        TS(alpha) = (-x'x - y'y, x y' - y x') / sqrt(x'^2 + y'^2)

    The velocity is attached exactly from the second derivatives of alpha:

        z' = kappa |alpha'| w - |alpha'|,       w' = -kappa |alpha'| z
    """

    check_regularity(c.tangents, c.eps_reg)

    x, y = c.points[:, 0], c.points[:, 1]
    dx, dy = c.tangents[:, 0], c.tangents[:, 1]
    norm = speed(c)

    zw = np.column_stack((
        (-dx * x - dy * y) / norm,
        (x * dy - y * dx) / norm))

    turning_rate = curvature(c) * norm
    velocity = np.column_stack((
        turning_rate * zw[:, 1] - norm,
        -turning_rate * zw[:, 0]))

    return TSCurve(
        params=c.params.copy(), zw=zw, source_speed=norm, velocity=velocity)


def ts_oracle(c: SampledCurve) -> TSCurve:
    """
    Builds, for every sample, the oriented isometry T_s with T_s(alpha(s)) = 0
        and dT_s(unit tangent) = (1, 0), and records T_s(origin)
    Slow; exists to cross-check 'ts'
    """

    check_regularity(c.tangents, c.eps_reg)

    unit = unit_tangents(c)
    origin = np.zeros(2)
    horizontal = np.array([1., 0.])

    zw = np.empty_like(c.points)
    for i in range(len(c)):
        isometry = oriented_isometry(c.points[i], unit[i], origin, horizontal)
        zw[i] = (isometry @ np.array([0., 0., 1.]))[:2]

    return TSCurve(params=c.params.copy(), zw=zw, source_speed=speed(c))


def ts_jform(c: SampledCurve) -> TSCurve:
    """
    For unit-speed curves:  z = -<alpha, alpha'> and w = <alpha', J alpha>
    """

    assert np.allclose(speed(c), 1, atol=1e-9)

    jalpha = c.points @ J_MATRIX.T
    zw = np.column_stack((
        -np.sum(c.points * c.tangents, axis=1),
        np.sum(c.tangents * jalpha, axis=1)))

    return TSCurve(params=c.params.copy(), zw=zw, source_speed=speed(c))


def phi_ts(c: SampledCurve, phi: np.ndarray) -> TSCurve:
    """
    phi-TreadmillSled:  beta(s) = A(theta(s)) alpha(s) with
        theta = rho - phi + pi, where rho is the turning angle of alpha

    With phi identically zero this is exactly 'ts'
    """

    phi = np.asarray(phi, dtype=float)
    assert phi.shape == c.params.shape

    if not np.any(phi):
        return ts(c)

    rho = turning_angle(c).angles
    theta = rho - phi + np.pi
    zw = apply_rotations(theta, c.points)

    return TSCurve(params=c.params.copy(), zw=zw, source_speed=speed(c))


def phi_ts_complex(c: SampledCurve, phi: np.ndarray) -> TSCurve:
    """
    Complex form of the phi-TreadmillSled:  e^{i phi} TS(alpha), identifying
        (x1, x2) with x1 + i x2
    """

    phi = np.asarray(phi, dtype=float)
    assert phi.shape == c.params.shape

    base = ts(c)
    rotated = np.exp(1j * phi) * (base.z + 1j * base.w)

    return TSCurve(
        params=base.params, zw=np.column_stack((rotated.real, rotated.imag)),
        source_speed=base.source_speed)


def treadmill_program(c: SampledCurve, g: np.ndarray) -> np.ndarray:
    """
    Returns the treadmill inclination phi for which phi-TS(alpha) = e^{ig} alpha:

        phi(t) = int_a^t kappa |alpha'| + rho_0 + g(t) + pi
    """

    g = np.asarray(g, dtype=float)
    assert g.shape == c.params.shape

    unit = unit_tangents(c)
    rho_0 = np.arctan2(unit[0, 1], unit[0, 0])

    turning = cumulative_trapezoid(
        curvature(c) * speed(c), c.params, initial=0)

    return turning + rho_0 + g + np.pi


def reverse(c: SampledCurve) -> SampledCurve:
    """
    beta(t) = alpha(-t) on the mirrored parameter interval
    """

    second = None if c.second is None else c.second[::-1].copy()

    return SampledCurve(
        params=-c.params[::-1],
        points=c.points[::-1].copy(),
        tangents=-c.tangents[::-1],
        second=second,
        eps_reg=c.eps_reg)
