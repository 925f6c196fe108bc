#! /usr/bin/env python3

import logging
import numpy as np
from dataclasses import dataclass
from typing import Callable, Optional
from scipy.integrate import cumulative_trapezoid
from scipy.interpolate import CubicHermiteSpline, CubicSpline

from src.common.common import (
    EPS_REG,
    RegularityViolation,
    UnwrapFailure,
    provide_error_messages,
    )


logger = logging.getLogger('treadmill')


# counterclockwise quarter turn
J_MATRIX = np.array([[0., -1.], [1., 0.]])


def rotation_matrix(tau: float) -> np.ndarray:
    """
    Returns A(tau) = [[cos tau, sin tau], [-sin tau, cos tau]], the clockwise
        rotation by 'tau'
    A(tau1 + tau2) = A(tau1) A(tau2) and dA/dtau = -A(tau) J
    """
    c = np.cos(tau)
    s = np.sin(tau)
    return np.array([[c, s], [-s, c]])


def apply_rotations(taus: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """
    Applies A(taus[i]) to vectors[i] for every row; 'vectors' has shape (n, 2)
    """
    c = np.cos(taus)
    s = np.sin(taus)
    return np.column_stack((
        c * vectors[:, 0] + s * vectors[:, 1],
        -s * vectors[:, 0] + c * vectors[:, 1]))


def oriented_isometry(
    anchor: np.ndarray, unit_tangent: np.ndarray,
    target: np.ndarray, direction: np.ndarray) -> np.ndarray:
    """
    Returns the 3x3 homogeneous matrix of the unique oriented isometry T with
        T(anchor) = target and dT(unit_tangent) = direction

    Both 'unit_tangent' and 'direction' must be unit vectors
    """

    # rotation taking 'unit_tangent' onto 'direction', counterclockwise form
    cos_angle = unit_tangent @ direction
    sin_angle = unit_tangent[0] * direction[1] - unit_tangent[1] * direction[0]
    rotation = np.array([
        [cos_angle, -sin_angle],
        [sin_angle, cos_angle]])

    isometry = np.eye(3)
    isometry[:2, :2] = rotation
    isometry[:2, 2] = target - rotation @ anchor

    return isometry


@dataclass(frozen=True)
class AnalyticCurve:
    """
    Analytic source of a planar curve on [a, b]

    'position', 'derivative' and 'second_derivative' map an array of parameter
        values of shape (n,) to an array of shape (n, 2); derivatives that are
        not given are approximated by finite differences
    """
    position: Callable[[np.ndarray], np.ndarray]
    a: float
    b: float
    derivative: Optional[Callable[[np.ndarray], np.ndarray]] = None
    second_derivative: Optional[Callable[[np.ndarray], np.ndarray]] = None


@dataclass(frozen=True)
class SampledCurve:
    """
    Regular planar curve as ordered samples:  parameter values, positions,
        derivative vectors and (optionally) second derivative vectors
    """
    params: np.ndarray
    points: np.ndarray
    tangents: np.ndarray
    second: Optional[np.ndarray] = None
    eps_reg: float = EPS_REG

    def __post_init__(self):

        assert self.params.ndim == 1
        assert len(self.params) >= 2
        assert self.points.shape == (len(self.params), 2)
        assert self.tangents.shape == (len(self.params), 2)
        if self.second is not None:
            assert self.second.shape == (len(self.params), 2)
        assert np.all(np.diff(self.params) > 0)

        check_regularity(self.tangents, self.eps_reg)

    def __len__(self) -> int:
        return len(self.params)


@dataclass(frozen=True)
class TurningAngle:
    """
    Continuous (unwrapped) angle 'rho' of the unit tangent of a curve, one
        value per sample; 'unit_tangents' are the unit tangents of the owning
        curve
    """
    angles: np.ndarray
    unit_tangents: np.ndarray

    def __post_init__(self):

        assert self.angles.ndim == 1
        assert self.unit_tangents.shape == (len(self.angles), 2)
        assert np.all(np.abs(np.diff(self.angles)) < np.pi)

        directions = np.column_stack((np.cos(self.angles), np.sin(self.angles)))
        assert np.max(np.abs(directions - self.unit_tangents)) < 1e-9


def check_regularity(tangents: np.ndarray, eps_reg: float = EPS_REG):
    """
    Raises 'RegularityViolation' if any tangent norm is not above 'eps_reg'
    """

    norms = np.linalg.norm(tangents, axis=1)
    bad_idx = np.flatnonzero(~(norms > eps_reg))

    if len(bad_idx) > 0:
        idx = int(bad_idx[0])
        message = provide_error_messages()['regularity'].format(
            norm=norms[idx], idx=idx, eps=eps_reg)
        raise RegularityViolation(message)


def _finite_difference(
    func: Callable[[np.ndarray], np.ndarray], t: np.ndarray,
    h: float) -> np.ndarray:
    """
    Central differences in the interior; second-order one-sided differences at
        both ends so that the function is never evaluated outside [t0, tn]
    """

    derivative = (func(t + h) - func(t - h)) / (2 * h)

    t_ends = t[[0, -1]]
    derivative[0] = (
        -3 * func(t_ends[:1]) + 4 * func(t_ends[:1] + h)
        - func(t_ends[:1] + 2 * h))[0] / (2 * h)
    derivative[-1] = (
        3 * func(t_ends[1:]) - 4 * func(t_ends[1:] - h)
        + func(t_ends[1:] - 2 * h))[0] / (2 * h)

    return derivative


def sample(
    source: AnalyticCurve, n: int, eps_reg: float = EPS_REG) -> SampledCurve:
    """
    Samples 'source' on a uniform grid of 'n' parameter values on [a, b]
    Missing derivatives are approximated with step h = (b - a) * 1e-5
    """


    # INPUT PRE-CHECKS
    ##################################################

    assert n >= 2
    assert source.b > source.a


    # EVALUATE POSITIONS AND DERIVATIVES
    ##################################################

    t = np.linspace(source.a, source.b, n)
    h_fd = (source.b - source.a) * 1e-5

    points = np.asarray(source.position(t), dtype=float)

    if source.derivative is not None:
        derivative = source.derivative
    else:
        derivative = lambda u: _finite_difference(source.position, u, h_fd)

    tangents = np.asarray(derivative(t), dtype=float)

    if source.second_derivative is not None:
        second = np.asarray(source.second_derivative(t), dtype=float)
    else:
        second = _finite_difference(derivative, t, h_fd)

    return SampledCurve(
        params=t, points=points, tangents=tangents, second=second,
        eps_reg=eps_reg)


def from_points(
    params: np.ndarray, points: np.ndarray,
    eps_reg: float = EPS_REG) -> SampledCurve:
    """
    Builds a curve from sampled positions only (e.g., read from a CSV file);
        derivatives are taken from the cubic spline through the samples, which
        is periodic when the first and last points coincide and not-a-knot
        otherwise
    """

    assert len(params) >= 4
    assert np.all(np.diff(params) > 0), 'parameters must be strictly increasing'

    points = np.asarray(points, dtype=float)
    scale = max(float(np.max(np.abs(points))), 1.)
    if np.allclose(points[0], points[-1], rtol=0, atol=1e-12 * scale):
        # the spline needs exactly equal end values
        points = points.copy()
        points[-1] = points[0]
        bc_type = 'periodic'
    else:
        bc_type = 'not-a-knot'

    spline = CubicSpline(params, points, axis=0, bc_type=bc_type)
    tangents = spline(params, 1)
    second = spline(params, 2)

    return SampledCurve(
        params=np.asarray(params, dtype=float), points=points,
        tangents=tangents, second=second, eps_reg=eps_reg)


def second_derivatives(c: SampledCurve) -> np.ndarray:
    if c.second is not None:
        return c.second
    edge_order = 2 if len(c) >= 3 else 1
    return np.gradient(c.tangents, c.params, axis=0, edge_order=edge_order)


def speed(c: SampledCurve) -> np.ndarray:
    return np.linalg.norm(c.tangents, axis=1)


def unit_tangents(c: SampledCurve) -> np.ndarray:
    return c.tangents / speed(c)[:, None]


def is_unit_speed(c: SampledCurve, tolerance: float = 1e-6) -> bool:
    return bool(np.max(np.abs(speed(c) - 1)) < tolerance)


def cumulative_length(c: SampledCurve) -> np.ndarray:
    """
    Cumulative arc length from the first sample (trapezoid rule on |alpha'|)
    """
    return cumulative_trapezoid(speed(c), c.params, initial=0)


def arclength_reparametrize(c: SampledCurve) -> SampledCurve:
    """
    Resamples 'c' on a uniform arc-length grid [0, L] with the same number of
        samples

    The parameter t(s) is recovered by interpolating the cumulative trapezoid
        of |alpha'|, which is monotone; positions and derivatives are then
        evaluated with cubic Hermite interpolation on the original samples
    """

    check_regularity(c.tangents, c.eps_reg)

    arc = cumulative_length(c)
    s = np.linspace(0, arc[-1], len(c))

    # 'arc' is strictly increasing because the curve is regular
    t_of_s = np.interp(s, arc, c.params)
    t_of_s[[0, -1]] = c.params[[0, -1]]

    second = second_derivatives(c)
    position_spline = CubicHermiteSpline(c.params, c.points, c.tangents, axis=0)
    tangent_spline = CubicHermiteSpline(c.params, c.tangents, second, axis=0)

    points = position_spline(t_of_s)
    d_t = tangent_spline(t_of_s)
    dd_t = tangent_spline(t_of_s, 1)

    norms = np.linalg.norm(d_t, axis=1)
    tangents = d_t / norms[:, None]

    # d2(alpha)/ds2 = (alpha_tt - <alpha_tt, T> T) / |alpha_t|^2
    tangential = np.sum(dd_t * tangents, axis=1)
    second_s = (dd_t - tangential[:, None] * tangents) / (norms ** 2)[:, None]

    return SampledCurve(
        params=s, points=points, tangents=tangents, second=second_s,
        eps_reg=c.eps_reg)


def turning_angle(c: SampledCurve) -> TurningAngle:
    """
    Unwraps the tangent direction by accumulating atan2 increments, each
        reduced into (-pi, pi]; rho at the first sample is the principal atan2
        value of the initial tangent
    """

    unit = unit_tangents(c)

    rho_0 = np.arctan2(unit[0, 1], unit[0, 0])

    cross = unit[:-1, 0] * unit[1:, 1] - unit[:-1, 1] * unit[1:, 0]
    dot = np.sum(unit[:-1] * unit[1:], axis=1)
    deltas = np.arctan2(cross, dot)

    too_coarse_idx = np.flatnonzero(np.abs(deltas) >= np.pi - 0.1)
    if len(too_coarse_idx) > 0:
        idx = int(too_coarse_idx[0])
        message = provide_error_messages()['unwrap'].format(
            delta=deltas[idx], idx=idx)
        raise UnwrapFailure(message)

    angles = rho_0 + np.concatenate(([0.], np.cumsum(deltas)))

    return TurningAngle(angles=angles, unit_tangents=unit)


def curvature(c: SampledCurve) -> np.ndarray:
    """
    Signed curvature (x'y'' - y'x'') / |alpha'|^3, which is <alpha'', J alpha'>
        for unit-speed curves
    """

    check_regularity(c.tangents, c.eps_reg)

    d1 = c.tangents
    d2 = second_derivatives(c)
    kappa = (
        (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]) / speed(c) ** 3)

    if logger.isEnabledFor(logging.DEBUG) and len(c) >= 3:
        try:
            rho = turning_angle(c).angles
            rho_prime = np.gradient(rho, c.params, edge_order=2) / speed(c)
            logger.debug(
                'curvature vs turning-angle derivative, max difference: '
                f'{np.max(np.abs(rho_prime - kappa)):.3e}')
        except UnwrapFailure:
            logger.debug('turning angle not available for curvature check')

    return kappa


def rotate(c: SampledCurve, tau: float) -> SampledCurve:
    """
    Applies A(tau) to positions and derivatives
    """

    rotation = rotation_matrix(tau)
    second = None if c.second is None else c.second @ rotation.T

    return SampledCurve(
        params=c.params.copy(), points=c.points @ rotation.T,
        tangents=c.tangents @ rotation.T, second=second, eps_reg=c.eps_reg)
