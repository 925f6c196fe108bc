#! /usr/bin/env python3

import logging
import numpy as np
from dataclasses import dataclass
from typing import Optional
from pydantic import BaseModel
from scipy.interpolate import CubicSpline

from src.common.common import (
    DELTA_POS,
    EPS_AXIS,
    ConstantCurve,
    NotATreadmillSled,
    RangeViolation,
    provide_error_messages,
    )
from src.curve_core.curve_core import (
    J_MATRIX,
    SampledCurve,
    apply_rotations,
    )
from src.treadmill.treadmill import TSCurve


logger = logging.getLogger('treadmill')


# total variation below which a TreadmillSled curve counts as a single point
EPS_CONSTANT = 1e-12


class RangeReport(BaseModel):
    minimum: float
    accepted: bool


@dataclass(frozen=True)
class InverseResult:
    """
    Reconstruction alpha of a TreadmillSled curve together with the companion
        function f, its antiderivative F (F = 0 at the first sample) and the
        speed |alpha'| = f w - z'
    'offset' is the constant added to F when the reconstruction was made
    """
    alpha: SampledCurve
    f: np.ndarray
    F: np.ndarray
    speed: np.ndarray
    offset: float = 0.

    def __post_init__(self):
        assert np.all(self.speed > 0)
        assert self.F[0] == 0


def _fill_from_neighbors(values: np.ndarray, missing: np.ndarray) -> np.ndarray:
    """
    Linear interpolation over the samples marked 'missing' from the nearest
        defined neighbors
    """

    filled = values.copy()
    idx = np.arange(len(values))
    defined = ~missing

    if np.any(defined):
        filled[missing] = np.interp(idx[missing], idx[defined], values[defined])

    return filled


def companion_f(
    g: TSCurve, eps_axis: float = EPS_AXIS) -> np.ndarray:
    """
    Returns f with w' = -f z:  f = -w'/z off the y-axis; on the axis the
        removable singularity is filled by -w''/z' (or by interpolation when
        z' also vanishes)
    Raises 'NotATreadmillSled' when w' does not vanish where z does
    """


    # INPUT PRE-CHECKS
    ##################################################

    assert len(g) >= 3


    # DERIVATIVES
    ##################################################

    d_zw = g.derivative()
    z_prime, w_prime = d_zw[:, 0], d_zw[:, 1]
    w_second = np.gradient(w_prime, g.params, edge_order=2)

    eps_removable = 1e-6 * max(np.max(np.abs(w_prime)), 1.)


    # RATIO OFF THE AXIS
    ##################################################

    on_axis = np.abs(g.z) <= eps_axis

    f = np.zeros(len(g))
    f[~on_axis] = -w_prime[~on_axis] / g.z[~on_axis]


    # REMOVABLE SINGULARITIES ON THE AXIS
    ##################################################

    violating = on_axis & (np.abs(w_prime) > eps_removable)
    if np.any(violating):
        idx = int(np.flatnonzero(violating)[0])
        message = provide_error_messages()['not_ts'].format(
            w_prime=w_prime[idx], idx=idx)
        raise NotATreadmillSled(message)

    ratio_ok = on_axis & (np.abs(z_prime) > eps_axis)
    f[ratio_ok] = -w_second[ratio_ok] / z_prime[ratio_ok]

    unresolved = on_axis & ~ratio_ok
    if np.any(unresolved):
        f = _fill_from_neighbors(f, unresolved)

    if np.any(on_axis):
        logger.debug(f'filled {int(np.sum(on_axis))} on-axis samples of f')

    return f


def check_range(
    g: TSCurve, f: np.ndarray, delta_pos: float = DELTA_POS) -> RangeReport:
    """
    Evaluates the range condition w f - z' > 0 on every sample
    """

    z_prime = g.derivative()[:, 0]
    minimum = float(np.min(g.w * f - z_prime))

    return RangeReport(minimum=minimum, accepted=minimum > delta_pos)


def invert(
    g: TSCurve, f: Optional[np.ndarray] = None,
    antiderivative_offset: float = 0.,
    delta_pos: float = DELTA_POS, eps_axis: float = EPS_AXIS) -> InverseResult:
    """
    Reconstructs alpha(t) = -A(-F(t)) gamma(t), F' = f, so that TS(alpha) = gamma

    'f' may be supplied explicitly; this is required when gamma is a single
        point (e.g., the TreadmillSled of a circle centered at the origin),
        where any f with w f > 0 works
    'antiderivative_offset' adds a constant to F, which selects another member
        of the rotation family A(tau) alpha sharing the same TreadmillSled
    """

    error_messages = provide_error_messages()


    # COMPANION FUNCTION AND RANGE CONDITION
    ##################################################

    if f is None:

        variation = float(np.sum(np.linalg.norm(np.diff(g.zw, axis=0), axis=1)))
        if variation < EPS_CONSTANT:
            raise ConstantCurve(
                error_messages['constant'].format(variation=variation))

        f = companion_f(g, eps_axis)

    else:
        f = np.asarray(f, dtype=float)
        assert f.shape == g.params.shape

    report = check_range(g, f, delta_pos)
    if not report.accepted:
        raise RangeViolation(
            error_messages['range'].format(
                minimum=report.minimum, delta=delta_pos))


    # RECONSTRUCTION
    ##################################################

    # antiderivative of the not-a-knot cubic spline through f
    F = CubicSpline(g.params, f).antiderivative()(g.params)
    F = F - F[0]
    angle = -(F + antiderivative_offset)

    d_zw = g.derivative()
    speed = g.w * f - d_zw[:, 0]

    points = -apply_rotations(angle, g.zw)

    # alpha' = -A(-F) (f J gamma + gamma')
    tangents = -apply_rotations(
        angle, f[:, None] * (g.zw @ J_MATRIX.T) + d_zw)

    # curvature of alpha is f / |alpha'|; second derivatives are assembled
    #   from that and the derivative of the speed
    unit = tangents / speed[:, None]
    speed_prime = np.gradient(speed, g.params, edge_order=2)
    second = (
        speed_prime[:, None] * unit
        + (speed * f)[:, None] * (unit @ J_MATRIX.T))

    alpha = SampledCurve(
        params=g.params.copy(), points=points, tangents=tangents,
        second=second)

    return InverseResult(
        alpha=alpha, f=f, F=F, speed=speed, offset=antiderivative_offset)


def fit_rotation(
    reconstructed: np.ndarray, original: np.ndarray) -> tuple[float, float]:
    """
    Finds tau minimizing sum |A(tau) reconstructed - original|^2 and returns
        tau with the maximal pointwise residual

    A(tau) multiplies by e^{-i tau} under the complex identification, so the
        optimum is tau = -arg(sum conj(r) o)
    """

    assert reconstructed.shape == original.shape

    r = reconstructed[:, 0] + 1j * reconstructed[:, 1]
    o = original[:, 0] + 1j * original[:, 1]

    tau = float(-np.angle(np.sum(np.conj(r) * o)))
    fitted = np.exp(-1j * tau) * r
    residual = float(np.max(np.abs(fitted - o)))

    return tau, residual
