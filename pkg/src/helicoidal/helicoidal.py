#! /usr/bin/env python3

import logging
import numpy as np
from dataclasses import dataclass, replace
from typing import Optional
from pydantic import BaseModel, Field

from src.common.common import (
    DegenerateMetric,
    provide_error_messages,
    )
from src.curve_core.curve_core import (
    SampledCurve,
    TurningAngle,
    curvature,
    is_unit_speed,
    second_derivatives,
    turning_angle,
    )
from src.treadmill.treadmill import TSCurve, ts


logger = logging.getLogger('treadmill')


class HelicoidalParams(BaseModel):
    # pitch of the screw motion, radians per unit height
    w: float = Field(gt=0)


@dataclass(frozen=True)
class SurfaceMesh:
    """
    Grid of surface points; 'points' and 'normals' have shape (ns, nt, 3)
    """
    s_params: np.ndarray
    t_params: np.ndarray
    points: np.ndarray
    normals: Optional[np.ndarray] = None

    def __post_init__(self):

        shape = (len(self.s_params), len(self.t_params), 3)
        assert self.points.shape == shape
        assert np.all(np.diff(self.s_params) > 0)
        assert np.all(np.diff(self.t_params) > 0)

        if self.normals is not None:
            assert self.normals.shape == shape
            assert np.allclose(
                np.linalg.norm(self.normals, axis=2), 1, atol=1e-9)


@dataclass(frozen=True)
class FundForms:
    """
    First (E, F, G) and second (e, f, g) fundamental forms per profile sample;
        on a helicoidal surface they do not depend on t
    """
    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    e: np.ndarray
    f: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        assert np.all(self.E > 0)
        assert np.all(self.G > 0)
        assert np.all(self.E * self.G - self.F ** 2 > 0)


def immerse(
    profile: SampledCurve, p: HelicoidalParams,
    t_range: tuple[float, float], nt: int) -> SurfaceMesh:
    """
    Evaluates phi(s, t) = (x cos wt + z sin wt, t, -x sin wt + z cos wt) on the
        grid of profile samples times 'nt' uniform values in 't_range'
    """

    assert nt >= 2
    assert t_range[1] > t_range[0]

    t = np.linspace(t_range[0], t_range[1], nt)
    x = profile.points[:, 0][:, None]
    z = profile.points[:, 1][:, None]
    cos_wt = np.cos(p.w * t)[None, :]
    sin_wt = np.sin(p.w * t)[None, :]

    points = np.stack((
        x * cos_wt + z * sin_wt,
        np.broadcast_to(t[None, :], (len(profile), nt)),
        -x * sin_wt + z * cos_wt), axis=2)

    return SurfaceMesh(
        s_params=profile.params.copy(), t_params=t, points=points)


def gauss_map(
    profile: SampledCurve, theta: TurningAngle, ts_data: TSCurve,
    p: HelicoidalParams, t_params: np.ndarray) -> np.ndarray:
    """
    nu = (sin(wt - theta), -w xi_1, cos(wt - theta)) / sqrt(1 + w^2 xi_1^2)

    'theta' is the turning angle of the profile and 'ts_data' its
        TreadmillSled (xi_1, xi_2); returns an array of shape (ns, nt, 3)
    """

    assert len(theta.angles) == len(profile) == len(ts_data)

    xi_1 = ts_data.z[:, None]
    angle = p.w * np.asarray(t_params)[None, :] - theta.angles[:, None]
    root = np.sqrt(1 + p.w ** 2 * xi_1 ** 2)

    normals = np.stack((
        np.sin(angle) / root,
        np.broadcast_to(-p.w * xi_1 / root, angle.shape),
        np.cos(angle) / root), axis=2)

    return normals


def attach_normals(
    mesh: SurfaceMesh, profile: SampledCurve,
    p: HelicoidalParams) -> SurfaceMesh:
    normals = gauss_map(
        profile, turning_angle(profile), ts(profile), p, mesh.t_params)
    return replace(mesh, normals=normals)


def theta_prime(profile: SampledCurve) -> np.ndarray:
    """
    Derivative of the tangent angle with respect to arc length; for a unit-speed
        profile this is x'z'' - z'x''
    """
    return curvature(profile)


def fundamental_forms_analytic(
    profile: SampledCurve, p: HelicoidalParams) -> FundForms:
    """
    Fundamental forms of the helicoidal immersion with respect to the Gauss map
        'nu', for a unit-speed profile
    """

    assert is_unit_speed(profile)

    ts_data = ts(profile)
    xi_1, xi_2 = ts_data.z, ts_data.w
    d1 = profile.tangents
    d2 = second_derivatives(profile)
    dtheta = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]

    w = p.w
    root = np.sqrt(1 + w ** 2 * xi_1 ** 2)

    return FundForms(
        E=np.ones(len(profile)),
        F=-w * xi_2,
        G=1 + w ** 2 * (xi_1 ** 2 + xi_2 ** 2),
        e=dtheta / root,
        f=-w / root,
        g=w ** 2 * xi_2 / root)


def mean_curvature_from_forms(forms: FundForms) -> np.ndarray:
    return (
        (forms.e * forms.G - 2 * forms.f * forms.F + forms.g * forms.E)
        / (2 * (forms.E * forms.G - forms.F ** 2)))


def gauss_curvature_from_forms(forms: FundForms) -> np.ndarray:
    return (
        (forms.e * forms.g - forms.f ** 2)
        / (forms.E * forms.G - forms.F ** 2))


def mean_curvature_analytic(
    profile: SampledCurve, p: HelicoidalParams) -> np.ndarray:
    """
    H = (-w^2 xi_2 + theta' (1 + w^2 (xi_1^2 + xi_2^2)))
        / (2 (1 + w^2 xi_1^2)^(3/2))

    Both the TreadmillSled and theta' (the curvature) are independent of the
        parametrization, so any regular profile is accepted
    """

    ts_data = ts(profile)
    xi_1, xi_2 = ts_data.z, ts_data.w
    dtheta = theta_prime(profile)
    w = p.w

    return (
        (-w ** 2 * xi_2 + dtheta * (1 + w ** 2 * (xi_1 ** 2 + xi_2 ** 2)))
        / (2 * (1 + w ** 2 * xi_1 ** 2) ** 1.5))


def gauss_curvature_analytic(
    profile: SampledCurve, p: HelicoidalParams) -> np.ndarray:
    """
    K = (e g - f^2) / (E G - F^2) written with the analytic forms, any regular
        profile
    """

    ts_data = ts(profile)
    xi_1, xi_2 = ts_data.z, ts_data.w
    dtheta = theta_prime(profile)
    w = p.w

    return (
        (dtheta * w ** 2 * xi_2 - w ** 2)
        / (1 + w ** 2 * xi_1 ** 2) ** 2)


def _second_difference(
    values: np.ndarray, grid: np.ndarray, axis: int) -> np.ndarray:
    """
    Three-point second derivative along 'axis' at the interior grid points;
        the first and last entries along 'axis' are zero
    """

    v = np.moveaxis(values, axis, 0)
    shape = (-1,) + (1,) * (v.ndim - 1)
    h = np.diff(grid)
    h_minus = h[:-1].reshape(shape)
    h_plus = h[1:].reshape(shape)

    result = np.zeros_like(v)
    result[1:-1] = 2 * (
        (v[2:] - v[1:-1]) / h_plus - (v[1:-1] - v[:-2]) / h_minus
        ) / (h_plus + h_minus)

    return np.moveaxis(result, 0, axis)


def curvatures_fd(mesh: SurfaceMesh) -> tuple[np.ndarray, np.ndarray]:
    """
    Mean and Gauss curvature of a mesh from second-order finite differences
        (central first derivatives, three-point second derivatives),
        with the normal phi_s x phi_t (which agrees with 'nu' for profiles
        traversed in their given orientation)
    Boundary rows and columns are set to NaN
    """


    # INPUT PRE-CHECKS
    ##################################################

    assert len(mesh.s_params) >= 3
    assert len(mesh.t_params) >= 3


    # DERIVATIVES
    ##################################################

    s, t = mesh.s_params, mesh.t_params
    phi_s, phi_t = np.gradient(mesh.points, s, t, axis=(0, 1), edge_order=2)
    phi_st = np.gradient(phi_s, t, axis=1, edge_order=2)

    # interior nodes use only their immediate neighbors, so every interior
    #   column sees the same stencil up to the screw motion
    phi_ss = _second_difference(mesh.points, s, axis=0)
    phi_tt = _second_difference(mesh.points, t, axis=1)

    normal = np.cross(phi_s, phi_t)
    normal /= np.linalg.norm(normal, axis=2)[..., None]


    # FUNDAMENTAL FORMS
    ##################################################

    E = np.sum(phi_s * phi_s, axis=2)
    F = np.sum(phi_s * phi_t, axis=2)
    G = np.sum(phi_t * phi_t, axis=2)
    e = np.sum(phi_ss * normal, axis=2)
    f = np.sum(phi_st * normal, axis=2)
    g = np.sum(phi_tt * normal, axis=2)

    det = E * G - F ** 2

    interior = (slice(1, -1), slice(1, -1))
    if np.any(det[interior] <= 0):
        i, j = np.unravel_index(np.argmin(det[interior]), det[interior].shape)
        message = provide_error_messages()['degenerate'].format(
            det=det[interior][i, j], node=(int(i) + 1, int(j) + 1))
        raise DegenerateMetric(message)


    # CURVATURES
    ##################################################

    H = np.full(det.shape, np.nan)
    K = np.full(det.shape, np.nan)
    H[interior] = (
        (e * G - 2 * f * F + g * E) / (2 * det))[interior]
    K[interior] = ((e * g - f ** 2) / det)[interior]

    return H, K


def cmc_residual(
    ts_data: TSCurve, p: HelicoidalParams, M: float) -> np.ndarray:
    """
    xi_1^2 + xi_2^2 - xi_2 / sqrt(1 + w^2 xi_1^2) - M along the TreadmillSled
    """

    xi_1, xi_2 = ts_data.z, ts_data.w

    return (
        xi_1 ** 2 + xi_2 ** 2 - xi_2 / np.sqrt(1 + p.w ** 2 * xi_1 ** 2) - M)


def conserved_quantity(ts_data: TSCurve, p: HelicoidalParams) -> np.ndarray:
    """
    xi_2 / sqrt(1 + w^2 xi_1^2), constant along the TreadmillSled of a minimal
        helicoidal profile
    """
    return ts_data.w / np.sqrt(1 + p.w ** 2 * ts_data.z ** 2)


class CurvatureReport(BaseModel):
    """
    Analytic and finite-difference curvatures of a helicoidal surface; the
        finite-difference values cover interior mesh nodes only
    """
    w: float
    ns: int = Field(ge=3)
    nt: int = Field(ge=3)
    max_abs_H_analytic: float
    min_H_analytic: float
    max_H_analytic: float
    max_abs_K_analytic: float
    min_H_fd: float
    max_H_fd: float
    max_abs_K_fd: float
    probed_nodes: int = Field(ge=0)
    max_abs_H_deviation: float
    max_abs_K_deviation: float
    min_conserved_quantity: float
    max_conserved_quantity: float


def curvature_report(
    profile: SampledCurve, p: HelicoidalParams, nt: int = 200,
    t_range: tuple[float, float] = (0., 1.), seed: int = 0,
    n_probe: int = 100) -> CurvatureReport:
    """
    Compares the analytic mean and Gauss curvatures with finite differences on
        the immersed mesh at 'n_probe' interior nodes drawn with 'seed'
    """

    assert n_probe >= 0

    H_analytic = mean_curvature_analytic(profile, p)
    K_analytic = gauss_curvature_analytic(profile, p)

    mesh = immerse(profile, p, t_range, nt)
    H_fd, K_fd = curvatures_fd(mesh)
    interior = (slice(1, -1), slice(1, -1))

    # curvatures do not depend on t, so every node compares with its row
    rng = np.random.default_rng(seed)
    rows = rng.integers(1, len(profile) - 1, size=n_probe)
    cols = rng.integers(1, nt - 1, size=n_probe)
    H_deviation = np.abs(H_fd[rows, cols] - H_analytic[rows])
    K_deviation = np.abs(K_fd[rows, cols] - K_analytic[rows])

    conserved = conserved_quantity(ts(profile), p)

    report = CurvatureReport(
        w=p.w,
        ns=len(profile),
        nt=nt,
        max_abs_H_analytic=float(np.max(np.abs(H_analytic))),
        min_H_analytic=float(np.min(H_analytic)),
        max_H_analytic=float(np.max(H_analytic)),
        max_abs_K_analytic=float(np.max(np.abs(K_analytic))),
        min_H_fd=float(np.min(H_fd[interior])),
        max_H_fd=float(np.max(H_fd[interior])),
        max_abs_K_fd=float(np.max(np.abs(K_fd[interior]))),
        probed_nodes=n_probe,
        max_abs_H_deviation=float(np.max(H_deviation, initial=0.)),
        max_abs_K_deviation=float(np.max(K_deviation, initial=0.)),
        min_conserved_quantity=float(np.min(conserved)),
        max_conserved_quantity=float(np.max(conserved)))

    logger.debug(f'curvature report: {report}')

    return report
