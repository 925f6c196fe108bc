#! /usr/bin/env python3

import logging
import numpy as np
from typing import Callable, Literal
from pydantic import BaseModel, Field, model_validator

from src.common.common import (
    EmptyLevelSet,
    provide_error_messages,
    )
from src.curve_core.curve_core import SampledCurve
from src.inverse_ts.inverse_ts import invert
from src.helicoidal.helicoidal import (
    HelicoidalParams,
    cmc_residual,
    conserved_quantity,
    gauss_curvature_analytic,
    mean_curvature_analytic,
    )
from src.treadmill.treadmill import TSCurve, ts


logger = logging.getLogger('treadmill')


# Butcher tableau of the classical fourth-order Runge-Kutta method
RK4_A = np.array([
    [0,   0,   0, 0],
    [0.5, 0,   0, 0],
    [0,   0.5, 0, 0],
    [0,   0,   1, 0]])
RK4_B = np.array([1/6, 1/3, 1/3, 1/6])
RK4_C = np.array([0, 0.5, 0.5, 1.0])

NEWTON_TOLERANCE = 1e-10
NEWTON_MAX_ITERATIONS = 50


class MinimalSpec(BaseModel):
    p: HelicoidalParams
    # parameter of the hyperbola y^2/M^2 - w^2 x^2 = 1; zero gives the helicoid
    M: float
    branch: Literal['upper', 'lower'] = 'upper'
    s_span: float = Field(gt=0, default=4.)
    n: int = Field(ge=3, default=4000)


class CMCSpec(BaseModel):
    p: HelicoidalParams
    M: float = Field(gt=-0.25)
    n: int = Field(ge=3, default=2000)


class FlatSpec(BaseModel):
    # abscissa of the vertical semiline traced by the TreadmillSled
    c: float
    y_start: float
    y_end: float
    n: int = Field(ge=3, default=1000)

    @model_validator(mode='after')
    def check_semiline(self) -> 'FlatSpec':
        assert self.c != 0, 'c must be nonzero'
        assert self.y_start != self.y_end, 'the semiline must not be a point'
        return self

    def satisfies_range_condition(self) -> bool:
        """
        The segment stays in one open half plane and y y' / c < 0 along it
        """
        same_side = self.y_start * self.y_end > 0
        y_prime = self.y_end - self.y_start
        return bool(same_side and self.y_start * y_prime / self.c < 0)


class GeneratorReport(BaseModel):
    """
    Sidecar written next to generated profiles
    """
    generator: str
    spec: dict
    max_abs_curvature_error: float
    max_abs_ts_residual: float


def rk4_step(
    func: Callable[[float, np.ndarray], np.ndarray],
    t: float, y: np.ndarray, h: float) -> np.ndarray:

    k = np.zeros((4, len(y)))
    for i in range(4):
        k[i] = func(t + RK4_C[i] * h, y + h * (RK4_A[i] @ k))

    return y + h * (RK4_B @ k)


def integrate_rk4(
    func: Callable[[float, np.ndarray], np.ndarray],
    y0: np.ndarray, t: np.ndarray) -> np.ndarray:
    """
    Fixed-step RK4 over the grid 't' (steps may be negative); returns the states
        at every grid value
    """

    ys = np.empty((len(t), len(y0)))
    ys[0] = y0
    for i in range(1, len(t)):
        ys[i] = rk4_step(func, t[i-1], ys[i-1], t[i] - t[i-1])

    return ys


def minimal_ts_ode(w: float) -> Callable[[float, np.ndarray], np.ndarray]:
    """
    Right-hand side for (xi_1, xi_2, theta) along a minimal helicoidal profile:

        xi_1'  = w^2 xi_2^2 / D - 1
        xi_2'  = -w^2 xi_1 xi_2 / D
        theta' = w^2 xi_2 / D,      D = 1 + w^2 (xi_1^2 + xi_2^2)
    """

    def rhs(_: float, y: np.ndarray) -> np.ndarray:
        xi_1, xi_2, _theta = y
        d = 1 + w ** 2 * (xi_1 ** 2 + xi_2 ** 2)
        dtheta = w ** 2 * xi_2 / d
        return np.array([dtheta * xi_2 - 1, -dtheta * xi_1, dtheta])

    return rhs


def profile_from_ts_angle(
    s: np.ndarray, xi: np.ndarray, theta: np.ndarray,
    dtheta: np.ndarray) -> SampledCurve:
    """
    Rebuilds a unit-speed profile from its TreadmillSled and tangent angle:

        x = -xi_1 cos(theta) + xi_2 sin(theta)
        z = -xi_1 sin(theta) - xi_2 cos(theta)
    """

    cos_t, sin_t = np.cos(theta), np.sin(theta)
    points = np.column_stack((
        -xi[:, 0] * cos_t + xi[:, 1] * sin_t,
        -xi[:, 0] * sin_t - xi[:, 1] * cos_t))
    tangents = np.column_stack((cos_t, sin_t))
    second = dtheta[:, None] * np.column_stack((-sin_t, cos_t))

    return SampledCurve(
        params=s, points=points, tangents=tangents, second=second)


def _symmetric_grid(s_span: float, n: int) -> np.ndarray:
    return np.linspace(-s_span / 2, s_span / 2, n)


def minimal_profile(spec: MinimalSpec) -> SampledCurve:
    """
    Profile curve of a minimal helicoidal surface, unit speed on
        [-s_span/2, s_span/2]

    M = 0 gives the line (s, 0), whose TreadmillSled is the x-axis (helicoid);
        otherwise the ODE for (xi_1, xi_2, theta) is integrated in both
        directions from the vertex (0, +/-|M|) of the hyperbola with theta = 0
    """

    s = _symmetric_grid(spec.s_span, spec.n)
    w = spec.p.w

    if spec.M == 0:
        points = np.column_stack((s, np.zeros_like(s)))
        tangents = np.tile([1., 0.], (len(s), 1))
        return SampledCurve(
            params=s, points=points, tangents=tangents,
            second=np.zeros_like(points))

    m = abs(spec.M) if spec.branch == 'upper' else -abs(spec.M)
    rhs = minimal_ts_ode(w)
    y0 = np.array([0., m, 0.])

    # integrate outward from the vertex at s = 0 in both directions
    positive = s[s >= 0]
    negative = s[s < 0][::-1]
    forward = integrate_rk4(rhs, y0, np.concatenate(([0.], positive)))[1:]
    backward = integrate_rk4(rhs, y0, np.concatenate(([0.], negative)))[1:]
    states = np.concatenate((backward[::-1], forward))

    xi = states[:, :2]
    theta = states[:, 2]
    dtheta = np.array([rhs(0., y)[2] for y in states])

    drift = np.max(np.abs(
        xi[:, 1] / np.sqrt(1 + w ** 2 * xi[:, 0] ** 2) - m))
    logger.info(
        f'minimal profile w={w}, M={m}: conserved-quantity drift {drift:.3e}')

    return profile_from_ts_angle(s, xi, theta, dtheta)


def minimal_profile_via_inverse(
    spec: MinimalSpec, x_decreasing: bool = True) -> SampledCurve:
    """
    Minimal profile obtained by inverting a parametrization of the hyperbola
        branch y^2/M^2 - w^2 x^2 = 1

    Along the branch w f - z' = -x'(1 + M^2 w^2), so the branch is traversed
        with x decreasing; with x' = -1 / (1 + M^2 w^2) the reconstruction has
        unit speed and shares the parameter grid of 'minimal_profile'
    """

    assert spec.M != 0

    w = spec.p.w
    m = abs(spec.M) if spec.branch == 'upper' else -abs(spec.M)
    k = 1 + m ** 2 * w ** 2
    s = _symmetric_grid(spec.s_span, spec.n)

    sign = -1. if x_decreasing else 1.
    x = sign * s / k
    x_prime = np.full_like(s, sign / k)
    root = np.sqrt(1 + w ** 2 * x ** 2)
    y = m * root
    y_prime = m * w ** 2 * x * x_prime / root

    gamma = TSCurve(
        params=s, zw=np.column_stack((x, y)),
        velocity=np.column_stack((x_prime, y_prime)))

    # f = -w'/z has a removable singularity at the vertex
    f = -m * w ** 2 * x_prime / root

    return invert(gamma, f=f).alpha


def _level_function(w: float, M: float):
    """
    G(xi_1, xi_2) = xi_1^2 + xi_2^2 - xi_2 / sqrt(1 + w^2 xi_1^2) - M and its
        gradient
    """

    def value(point: np.ndarray) -> float:
        xi_1, xi_2 = point
        return xi_1 ** 2 + xi_2 ** 2 - xi_2 / np.sqrt(1 + w ** 2 * xi_1 ** 2) - M

    def gradient(point: np.ndarray) -> np.ndarray:
        xi_1, xi_2 = point
        q = 1 / np.sqrt(1 + w ** 2 * xi_1 ** 2)
        return np.array([
            xi_1 * (2 + w ** 2 * xi_2 * q ** 3),
            2 * xi_2 - q])

    return value, gradient


def _newton_correct(point: np.ndarray, value, gradient) -> np.ndarray:
    """
    Minimum-norm Newton iterations onto G = 0
    """

    for _ in range(NEWTON_MAX_ITERATIONS):
        residual = value(point)
        if abs(residual) < NEWTON_TOLERANCE:
            return point
        grad = gradient(point)
        norm_sq = grad @ grad
        if norm_sq == 0:
            break
        point = point - residual * grad / norm_sq

    reason = f'Newton correction did not converge near {point}'
    raise EmptyLevelSet(
        provide_error_messages()['empty_level_set'].format(reason=reason))


def _tangent(point: np.ndarray, gradient) -> np.ndarray:
    """
    Unit tangent (G_2, -G_1) / |grad G|; along this orientation the range
        condition w f - z' > 0 holds
    """
    grad = gradient(point)
    return np.array([grad[1], -grad[0]]) / np.linalg.norm(grad)


def _land_on_section(
    point: np.ndarray, start: np.ndarray, value, gradient) -> np.ndarray:
    """
    Newton iterations from 'point' onto the intersection of G = 0 with the line
        through 'start' normal to the level curve there
    """

    direction = _tangent(start, gradient)

    for _ in range(NEWTON_MAX_ITERATIONS):
        residual = np.array([value(point), direction @ (point - start)])
        if np.max(np.abs(residual)) < NEWTON_TOLERANCE:
            return point
        jacobian = np.vstack((gradient(point), direction))
        point = point - np.linalg.solve(jacobian, residual)

    reason = f'closing step did not converge near {point}'
    raise EmptyLevelSet(
        provide_error_messages()['empty_level_set'].format(reason=reason))


def _trace_closed(
    start: np.ndarray, step: float, value, gradient,
    max_steps: int) -> tuple[np.ndarray, float]:
    """
    Predictor-corrector continuation around a closed level curve

    Once the trace is back within one step of 'start', the last point is
        carried along the level set onto the normal line through 'start'; that
        landing point closes the trace and the returned gap is its distance to
        'start'
    """

    points = [start]
    travelled = 0.

    for _ in range(max_steps):

        current = points[-1]
        to_start = np.linalg.norm(current - start)

        if travelled > 4 * step and to_start < step:
            # keep the closing segment from becoming arbitrarily short
            if to_start < step / 2:
                points.pop()
            landing = _land_on_section(points[-1], start, value, gradient)
            gap = float(np.linalg.norm(landing - start))
            points.append(landing)
            return np.array(points), gap

        predicted = current + step * _tangent(current, gradient)
        corrected = _newton_correct(predicted, value, gradient)
        travelled += float(np.linalg.norm(corrected - current))
        points.append(corrected)

    reason = f'level curve did not close after {max_steps} steps'
    raise EmptyLevelSet(
        provide_error_messages()['empty_level_set'].format(reason=reason))


def trace_cmc_level_curve(
    spec: CMCSpec) -> tuple[TSCurve, np.ndarray, float]:
    """
    Traces xi_1^2 + xi_2^2 - xi_2 / sqrt(1 + w^2 xi_1^2) = M once around,
        starting at (0, (1 + sqrt(1 + 4M)) / 2)

    Returns the curve parametrized by cumulative chord length with exact unit
        tangents, the companion function f in closed form and the closure gap
    """

    w, M = spec.p.w, spec.M
    value, gradient = _level_function(w, M)
    seed = np.array([0., (1 + np.sqrt(1 + 4 * M)) / 2])
    seed = _newton_correct(seed, value, gradient)

    # a coarse pass estimates the length so that the fine pass has ~n samples
    coarse, _ = _trace_closed(seed, 0.02, value, gradient, 100_000)
    length = float(np.sum(np.linalg.norm(np.diff(coarse, axis=0), axis=1)))
    step = length / (spec.n - 1)

    points, gap = _trace_closed(seed, step, value, gradient, 20 * spec.n)

    params = np.concatenate((
        [0.], np.cumsum(np.linalg.norm(np.diff(points, axis=0), axis=1))))
    velocity = np.array([_tangent(e, gradient) for e in points])
    grads = np.array([gradient(e) for e in points])

    # f = -w'/z with w' = -G_1 / |grad G| and G_1 = xi_1 (2 + w^2 xi_2 q^3)
    q = 1 / np.sqrt(1 + w ** 2 * points[:, 0] ** 2)
    f = (2 + w ** 2 * points[:, 1] * q ** 3) / np.linalg.norm(grads, axis=1)

    logger.info(
        f'CMC level curve w={w}, M={M}: {len(points)} samples, '
        f'length {params[-1]:.6f}, closure gap {gap:.3e}')

    return TSCurve(params=params, zw=points, velocity=velocity), f, gap


def cmc_profile(spec: CMCSpec) -> SampledCurve:
    """
    Profile of a helicoidal surface with constant mean curvature one:  the
        inverse TreadmillSled of a traced level curve of
        x^2 + y^2 - y / sqrt(1 + w^2 x^2) = M
    The trace runs along (G_2, -G_1), where w f - z' > 0
    """

    gamma, f, _ = trace_cmc_level_curve(spec)

    return invert(gamma, f=f).alpha


def flat_profile(spec: FlatSpec) -> SampledCurve:
    """
    Profile of a flat helicoidal surface:  the inverse TreadmillSled of the
        vertical segment (c, y(t)), y linear in t on [0, 1]
    Raises 'RangeViolation' if the segment meets y = 0 or has the wrong
        orientation
    """

    t = np.linspace(0, 1, spec.n)
    y_prime = spec.y_end - spec.y_start
    y = spec.y_start + y_prime * t

    gamma = TSCurve(
        params=t,
        zw=np.column_stack((np.full_like(t, spec.c), y)),
        velocity=np.column_stack((np.zeros_like(t), np.full_like(t, y_prime))))
    f = np.full_like(t, -y_prime / spec.c)

    if not spec.satisfies_range_condition():
        logger.debug(f'semiline {spec} fails the range condition')

    return invert(gamma, f=f).alpha


def profile_report(
    spec: MinimalSpec | CMCSpec | FlatSpec, profile: SampledCurve,
    w: float = 1.) -> GeneratorReport:
    """
    Residuals achieved by a generated profile, for the JSON sidecar

    Minimal and CMC profiles are checked against H = 0 and H = 1 with the
        analytic mean curvature and against their TreadmillSled level sets;
        flat profiles against K = 0 and the vertical line z = c
    'w' is the pitch used for flat profiles, whose spec does not carry one
    """

    ts_data = ts(profile)

    if isinstance(spec, MinimalSpec):
        p = spec.p
        m = abs(spec.M) if spec.branch == 'upper' else -abs(spec.M)
        curvature_error = np.abs(mean_curvature_analytic(profile, p))
        ts_residual = np.abs(conserved_quantity(ts_data, p) - m)
        generator = 'minimal'

    elif isinstance(spec, CMCSpec):
        p = spec.p
        curvature_error = np.abs(mean_curvature_analytic(profile, p) - 1)
        ts_residual = np.abs(cmc_residual(ts_data, p, spec.M))
        generator = 'cmc'

    else:
        p = HelicoidalParams(w=w)
        curvature_error = np.abs(gauss_curvature_analytic(profile, p))
        ts_residual = np.abs(ts_data.z - spec.c)
        generator = 'flat'

    return GeneratorReport(
        generator=generator,
        spec=spec.model_dump(),
        max_abs_curvature_error=float(np.max(curvature_error)),
        max_abs_ts_residual=float(np.max(ts_residual)))
