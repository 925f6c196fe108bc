
import pytest
import numpy as np

from src.common.common import RegularityViolation, UnwrapFailure
from src.curve_core.curve_core import (
    J_MATRIX,
    AnalyticCurve,
    SampledCurve,
    TurningAngle,
    arclength_reparametrize,
    apply_rotations,
    check_regularity,
    cumulative_length,
    curvature,
    from_points,
    is_unit_speed,
    oriented_isometry,
    rotate,
    rotation_matrix,
    sample,
    speed,
    turning_angle,
    unit_tangents,
    )

from tests.sample_curves import circle, cubic_graph, random_smooth_curve


def test_rotation_matrix_01():
    """
    A(tau) rotates clockwise:  A(pi/2) takes (1, 0) to (0, -1)
    """

    result = rotation_matrix(np.pi / 2) @ np.array([1., 0.])
    np.testing.assert_allclose(result, [0., -1.], atol=1e-15)


def test_rotation_matrix_02():
    """
    Test group law and derivative dA/dtau = -A J
    """

    tau_1, tau_2 = 0.3, -1.1
    np.testing.assert_allclose(
        rotation_matrix(tau_1 + tau_2),
        rotation_matrix(tau_1) @ rotation_matrix(tau_2), atol=1e-15)

    h = 1e-6
    derivative = (rotation_matrix(tau_1 + h) - rotation_matrix(tau_1 - h)) / (2 * h)
    np.testing.assert_allclose(
        derivative, -rotation_matrix(tau_1) @ J_MATRIX, atol=1e-9)


def test_apply_rotations_01():
    """
    Row-wise rotation agrees with the matrix form
    """

    taus = np.array([0., 0.5, -2.])
    vectors = np.array([[1., 2.], [-3., 0.5], [0.2, -1.]])

    result = apply_rotations(taus, vectors)
    correct_result = np.array([
        rotation_matrix(tau) @ v for tau, v in zip(taus, vectors)])

    np.testing.assert_allclose(result, correct_result, atol=1e-15)


def test_oriented_isometry_01():
    """
    The isometry maps the anchor to the target and the tangent to the direction
    """

    anchor = np.array([1., 2.])
    unit_tangent = np.array([3., 4.]) / 5
    target = np.array([-1., 0.5])
    direction = np.array([0., 1.])

    isometry = oriented_isometry(anchor, unit_tangent, target, direction)

    np.testing.assert_allclose(
        (isometry @ np.append(anchor, 1.))[:2], target, atol=1e-15)
    np.testing.assert_allclose(
        isometry[:2, :2] @ unit_tangent, direction, atol=1e-15)
    assert np.isclose(np.linalg.det(isometry[:2, :2]), 1.)


def test_sampled_curve_01():
    """
    Test non-increasing parameters
    """

    params = np.array([0., 1., 1.])
    points = np.zeros((3, 2))
    tangents = np.ones((3, 2))

    with pytest.raises(AssertionError):
        SampledCurve(params=params, points=points, tangents=tangents)


def test_sampled_curve_02():
    """
    Test mismatched shapes
    """

    params = np.array([0., 1., 2.])
    points = np.zeros((2, 2))
    tangents = np.ones((3, 2))

    with pytest.raises(AssertionError):
        SampledCurve(params=params, points=points, tangents=tangents)


def test_check_regularity_01():
    """
    Test a constant curve, whose tangents vanish
    """

    params = np.linspace(0, 1, 5)
    points = np.ones((5, 2))
    tangents = np.zeros((5, 2))

    with pytest.raises(RegularityViolation):
        SampledCurve(params=params, points=points, tangents=tangents)


def test_check_regularity_02():
    """
    Test a single vanishing tangent
    """

    tangents = np.ones((5, 2))
    tangents[3] = 0

    with pytest.raises(RegularityViolation) as excinfo:
        check_regularity(tangents)

    assert 'sample 3' in str(excinfo.value)


def test_sample_01():
    """
    Finite-difference derivatives of a circle match the exact ones
    """

    exact = circle(2.)
    approximate = AnalyticCurve(position=exact.position, a=exact.a, b=exact.b)

    c_exact = sample(exact, 200)
    c_approximate = sample(approximate, 200)

    np.testing.assert_allclose(c_approximate.tangents, c_exact.tangents, atol=1e-7)
    np.testing.assert_allclose(c_approximate.second, c_exact.second, atol=1e-3)


def test_sample_02():
    """
    Test empty parameter interval
    """

    source = circle(1., (1., 1.))

    with pytest.raises(AssertionError):
        sample(source, 10)


def test_sample_03():
    """
    Cubic graph (t, t^3 - t):  tangents are (1, 3t^2 - 1), exactly with the
        analytic derivative and to finite-difference accuracy without it
    """

    exact = cubic_graph()
    approximate = AnalyticCurve(position=exact.position, a=exact.a, b=exact.b)

    t = np.linspace(-1.5, 1.5, 101)
    correct_result = np.column_stack((np.ones_like(t), 3 * t ** 2 - 1))

    result = sample(exact, 101)
    np.testing.assert_allclose(result.params, t, atol=1e-15)
    np.testing.assert_allclose(result.tangents, correct_result, atol=1e-12)

    result = sample(approximate, 101)
    np.testing.assert_allclose(result.tangents, correct_result, atol=1e-8)


def test_from_points_01():
    """
    Spline derivatives of sampled circle positions match the exact derivatives
    """

    c = sample(circle(1.), 1000)
    result = from_points(c.params, c.points)

    np.testing.assert_allclose(result.tangents, c.tangents, atol=1e-5)
    np.testing.assert_allclose(result.second, c.second, atol=1e-3)


def test_from_points_02():
    """
    Test too few samples
    """

    params = np.array([0., 1., 2.])
    points = np.array([[0., 0.], [1., 0.], [2., 1.]])

    with pytest.raises(AssertionError):
        from_points(params, points)


def test_from_points_03():
    """
    Closed input uses the periodic spline:  the tangent directions of a coarse
        circle are exact at every sample, including both ends
    """

    c = sample(circle(1.), 200)
    result = from_points(c.params, c.points)

    assert np.array_equal(result.points[-1], result.points[0])
    np.testing.assert_allclose(unit_tangents(result), c.tangents, atol=1e-10)


def test_from_points_04():
    """
    Open input uses the not-a-knot spline, which reproduces a cubic exactly
    """

    c = sample(cubic_graph(), 50)
    result = from_points(c.params, c.points)

    np.testing.assert_allclose(result.tangents, c.tangents, atol=1e-10)
    np.testing.assert_allclose(result.second, c.second, atol=1e-9)


def test_arclength_reparametrize_01():
    """
    An ellipse reparametrized by arc length has unit speed and a parameter
        interval of the length of the curve
    """

    source = AnalyticCurve(
        position=lambda t: np.column_stack((2 * np.cos(t), np.sin(t))),
        derivative=lambda t: np.column_stack((-2 * np.sin(t), np.cos(t))),
        second_derivative=lambda t: np.column_stack((
            -2 * np.cos(t), -np.sin(t))),
        a=0., b=np.pi)
    c = sample(source, 2000)

    result = arclength_reparametrize(c)

    assert is_unit_speed(result)
    assert result.params[0] == 0
    assert np.isclose(result.params[-1], cumulative_length(c)[-1])
    np.testing.assert_allclose(result.points[[0, -1]], c.points[[0, -1]], atol=1e-12)


def test_arclength_reparametrize_02():
    """
    Curvature is preserved by the reparametrization
    """

    c = sample(circle(0.5, (0., 3.)), 1000)
    result = arclength_reparametrize(c)

    np.testing.assert_allclose(curvature(result), 2., atol=1e-5)


def test_arclength_reparametrize_03():
    """
    Length of the parabola (t, t^2) on [0, 1] is sqrt(5)/2 + asinh(2)/4
    """

    source = AnalyticCurve(
        position=lambda t: np.column_stack((t, t ** 2)),
        derivative=lambda t: np.column_stack((np.ones_like(t), 2 * t)),
        second_derivative=lambda t: np.column_stack((
            np.zeros_like(t), np.full_like(t, 2.))),
        a=0., b=1.)
    c = sample(source, 2001)

    correct_result = np.sqrt(5) / 2 + np.arcsinh(2) / 4

    result = arclength_reparametrize(c)

    assert abs(result.params[-1] - correct_result) < 1e-6
    assert is_unit_speed(result)


def test_arclength_reparametrize_04():
    """
    Reparametrizing a curve that is already parametrized by arc length
        changes nothing
    """

    rng = np.random.default_rng(17)
    once = arclength_reparametrize(random_smooth_curve(rng, 1000))

    result = arclength_reparametrize(once)

    np.testing.assert_allclose(result.params, once.params, atol=1e-9)
    np.testing.assert_allclose(result.points, once.points, atol=1e-9)
    np.testing.assert_allclose(result.tangents, once.tangents, atol=1e-9)


def test_turning_angle_01():
    """
    The turning angle of a circle traversed twice grows continuously to
        4 pi + pi/2
    """

    c = sample(circle(1., (0., 4 * np.pi)), 1000)
    result = turning_angle(c)

    np.testing.assert_allclose(result.angles, c.params + np.pi / 2, atol=1e-12)


def test_turning_angle_02():
    """
    Test sampling too coarse to unwrap
    """

    c = sample(circle(1., (0., 2 * np.pi)), 3)

    with pytest.raises(UnwrapFailure):
        turning_angle(c)


def test_turning_angle_03():
    """
    Test angles that do not point along the tangents
    """

    c = sample(circle(1., (0., 1.)), 20)
    unit = unit_tangents(c)
    angles = turning_angle(c).angles

    with pytest.raises(AssertionError):
        TurningAngle(angles=angles + 1e-6, unit_tangents=unit)


def test_turning_angle_04():
    """
    Test a jump of 2 pi between neighboring samples
    """

    c = sample(circle(1., (0., 1.)), 20)
    unit = unit_tangents(c)
    angles = turning_angle(c).angles.copy()
    angles[10:] += 2 * np.pi

    with pytest.raises(AssertionError):
        TurningAngle(angles=angles, unit_tangents=unit)


def test_curvature_01():
    """
    Circle of radius 2 has curvature 1/2; clockwise traversal flips the sign
    """

    c = sample(circle(2.), 100)
    np.testing.assert_allclose(curvature(c), 0.5, atol=1e-12)

    reversed_source = AnalyticCurve(
        position=lambda t: np.column_stack((2 * np.cos(t), -2 * np.sin(t))),
        derivative=lambda t: np.column_stack((-2 * np.sin(t), -2 * np.cos(t))),
        second_derivative=lambda t: np.column_stack((
            -2 * np.cos(t), 2 * np.sin(t))),
        a=0., b=1.)
    np.testing.assert_allclose(
        curvature(sample(reversed_source, 100)), -0.5, atol=1e-12)


def test_curvature_02():
    """
    Curvature agrees with the derivative of the turning angle per unit length
    """

    rng = np.random.default_rng(3)
    c = random_smooth_curve(rng, 2000)

    rho = turning_angle(c).angles
    rho_prime = np.gradient(rho, c.params, edge_order=2) / speed(c)

    np.testing.assert_allclose(curvature(c), rho_prime, atol=1e-4)


def test_rotate_01():
    """
    Rotation preserves speed and curvature and moves points by A(tau)
    """

    rng = np.random.default_rng(5)
    c = random_smooth_curve(rng)
    tau = 0.7

    result = rotate(c, tau)

    np.testing.assert_allclose(speed(result), speed(c), atol=1e-12)
    np.testing.assert_allclose(curvature(result), curvature(c), atol=1e-10)
    np.testing.assert_allclose(
        result.points[0], rotation_matrix(tau) @ c.points[0], atol=1e-15)
