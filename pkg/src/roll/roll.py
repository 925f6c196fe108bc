#! /usr/bin/env python3

import numpy as np
from dataclasses import dataclass

from src.curve_core.curve_core import (
    AnalyticCurve,
    SampledCurve,
    check_regularity,
    cumulative_length,
    oriented_isometry,
    unit_tangents,
    )


@dataclass(frozen=True)
class RollTrace:
    """
    Trace of the origin while a curve rolls along the x-axis; 'arclens' is the
        cumulative arc length of the rolled curve
    """
    params: np.ndarray
    points: np.ndarray
    arclens: np.ndarray

    def __post_init__(self):
        assert self.points.shape == (len(self.params), 2)
        assert self.arclens.shape == self.params.shape
        assert self.arclens[0] == 0
        assert np.all(np.diff(self.arclens) >= 0)


def roll(c: SampledCurve) -> RollTrace:
    """
    Roll(alpha)(t) = (s(t), 0) - A(rho(t)) alpha(t)

    The isometry places alpha(t) at (s(t), 0) with horizontal unit tangent, so
        its linear part is A(rho); written with the unit tangent T this is
        (s - <T, alpha>, T_y x - T_x y), i.e. TS(alpha) shifted by s(t)
    """

    check_regularity(c.tangents, c.eps_reg)

    unit = unit_tangents(c)
    arclens = cumulative_length(c)
    x, y = c.points[:, 0], c.points[:, 1]

    points = np.column_stack((
        arclens - (unit[:, 0] * x + unit[:, 1] * y),
        unit[:, 1] * x - unit[:, 0] * y))

    return RollTrace(params=c.params.copy(), points=points, arclens=arclens)


def roll_oracle(c: SampledCurve) -> RollTrace:
    """
    Per-sample construction of the rolling isometry; slow, used to cross-check
        'roll'
    """

    check_regularity(c.tangents, c.eps_reg)

    unit = unit_tangents(c)
    arclens = cumulative_length(c)
    horizontal = np.array([1., 0.])

    points = np.empty_like(c.points)
    for i in range(len(c)):
        isometry = oriented_isometry(
            c.points[i], unit[i], np.array([arclens[i], 0.]), horizontal)
        points[i] = (isometry @ np.array([0., 0., 1.]))[:2]

    return RollTrace(params=c.params.copy(), points=points, arclens=arclens)


def parabola_with_focus_at_origin(
    p: float, x_range: tuple[float, float]) -> AnalyticCurve:
    """
    y = x^2 / (4p) - p; rolling it traces the catenary p cosh(x / p)
    """

    assert p > 0

    return AnalyticCurve(
        position=lambda t: np.column_stack((t, t ** 2 / (4 * p) - p)),
        derivative=lambda t: np.column_stack((np.ones_like(t), t / (2 * p))),
        second_derivative=lambda t: np.column_stack((
            np.zeros_like(t), np.full_like(t, 1 / (2 * p)))),
        a=x_range[0], b=x_range[1])


def ellipse_with_focus_at_origin(
    a: float, b: float, t_range: tuple[float, float]) -> AnalyticCurve:
    """
    (a cos t - c, b sin t) with c = sqrt(a^2 - b^2); rolling it traces an
        unduloid profile
    """

    assert a >= b > 0

    c = np.sqrt(a ** 2 - b ** 2)

    return AnalyticCurve(
        position=lambda t: np.column_stack((a * np.cos(t) - c, b * np.sin(t))),
        derivative=lambda t: np.column_stack((-a * np.sin(t), b * np.cos(t))),
        second_derivative=lambda t: np.column_stack((
            -a * np.cos(t), -b * np.sin(t))),
        a=t_range[0], b=t_range[1])


def hyperbola_branch_with_focus_at_origin(
    a: float, b: float, t_range: tuple[float, float]) -> AnalyticCurve:
    """
    Branch (c - a cosh t, b sinh t), c = sqrt(a^2 + b^2), whose interior focus
        is the origin; rolling it traces a nodoid profile
    """

    assert a > 0 and b > 0

    c = np.sqrt(a ** 2 + b ** 2)

    return AnalyticCurve(
        position=lambda t: np.column_stack((c - a * np.cosh(t), b * np.sinh(t))),
        derivative=lambda t: np.column_stack((
            -a * np.sinh(t), b * np.cosh(t))),
        second_derivative=lambda t: np.column_stack((
            -a * np.cosh(t), b * np.sinh(t))),
        a=t_range[0], b=t_range[1])
