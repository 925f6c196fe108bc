
import pytest
import numpy as np
from pydantic import ValidationError

from src.common.common import RangeViolation
from src.curve_core.curve_core import is_unit_speed
from src.generators.generators import (
    CMCSpec,
    FlatSpec,
    MinimalSpec,
    cmc_profile,
    flat_profile,
    integrate_rk4,
    minimal_profile,
    minimal_profile_via_inverse,
    profile_report,
    rk4_step,
    trace_cmc_level_curve,
    )
from src.helicoidal.helicoidal import (
    HelicoidalParams,
    cmc_residual,
    conserved_quantity,
    curvatures_fd,
    gauss_curvature_analytic,
    immerse,
    mean_curvature_analytic,
    )
from src.inverse_ts.inverse_ts import check_range, fit_rotation
from src.treadmill.treadmill import ts


def test_rk4_step_01():
    """
    One step on y' = y matches the fourth-order Taylor polynomial of e^h
    """

    h = 0.1
    result = rk4_step(lambda t, y: y, 0., np.array([1.]), h)

    assert np.isclose(result[0], 1 + h + h ** 2 / 2 + h ** 3 / 6 + h ** 4 / 24)


def test_integrate_rk4_01():
    """
    Harmonic oscillator conserves energy and returns after one period
    """

    t = np.linspace(0, 2 * np.pi, 1001)
    ys = integrate_rk4(
        lambda _, y: np.array([y[1], -y[0]]), np.array([1., 0.]), t)

    np.testing.assert_allclose(ys[-1], [1., 0.], atol=1e-9)
    np.testing.assert_allclose(np.sum(ys ** 2, axis=1), 1., atol=1e-9)


def test_minimal_spec_01():
    """
    Test non-positive pitch and span
    """

    with pytest.raises(ValidationError):
        MinimalSpec(p=HelicoidalParams(w=-1.), M=1.)

    with pytest.raises(ValidationError):
        MinimalSpec(p=HelicoidalParams(w=1.), M=1., s_span=0.)


def test_minimal_profile_01():
    """
    M = 0 gives the helicoid:  the TreadmillSled lies on the x-axis
    """

    spec = MinimalSpec(p=HelicoidalParams(w=1.), M=0.)
    c = minimal_profile(spec)

    np.testing.assert_allclose(ts(c).w, 0., atol=1e-12)
    np.testing.assert_allclose(mean_curvature_analytic(c, spec.p), 0., atol=1e-12)


def test_minimal_profile_02():
    """
    w = 1, M = 1:  unit speed, vanishing analytic mean curvature and the
        conserved quantity held at M along RK4 with n = 4000
    """

    spec = MinimalSpec(p=HelicoidalParams(w=1.), M=1., n=4000)
    c = minimal_profile(spec)

    assert len(c) == 4000
    assert is_unit_speed(c)

    np.testing.assert_allclose(mean_curvature_analytic(c, spec.p), 0., atol=1e-6)

    g = ts(c)
    conserved = g.w / np.sqrt(1 + g.z ** 2)
    np.testing.assert_allclose(conserved, 1., atol=1e-8)


def test_minimal_profile_03():
    """
    Finite-difference mean curvature on a 400 x 100 mesh stays below 1e-3
    """

    spec = MinimalSpec(p=HelicoidalParams(w=1.), M=1., n=400)
    c = minimal_profile(spec)
    mesh = immerse(c, spec.p, (0., 1.), 100)

    H, _ = curvatures_fd(mesh)

    assert np.nanmax(np.abs(H)) < 1e-3


def test_minimal_profile_04():
    """
    The lower branch gives a minimal profile as well
    """

    spec = MinimalSpec(p=HelicoidalParams(w=2.), M=0.5, branch='lower', n=2000)
    c = minimal_profile(spec)

    np.testing.assert_allclose(mean_curvature_analytic(c, spec.p), 0., atol=1e-6)
    assert np.all(ts(c).w < 0)


@pytest.mark.parametrize('w, M, branch', [
    (1., 1., 'upper'), (2., 0.5, 'lower'), (0.5, 3., 'upper')])
def test_minimal_profile_05(w, M, branch):
    """
    xi_1 decreases along the whole integration, and the vanishing mean
        curvature comes with the conserved quantity fixed at its first value
    """

    spec = MinimalSpec(p=HelicoidalParams(w=w), M=M, branch=branch, n=4000)
    c = minimal_profile(spec)
    g = ts(c)

    assert np.all(g.velocity[:, 0] < 0)
    assert np.all(np.diff(g.z) < 0)

    assert np.max(np.abs(mean_curvature_analytic(c, spec.p))) < 1e-8
    conserved = conserved_quantity(g, spec.p)
    np.testing.assert_allclose(conserved, conserved[0], atol=1e-6)


def test_minimal_profile_via_inverse_01():
    """
    Inverting the hyperbola branch reproduces it and agrees with the RK4
        profile up to a rotation
    """

    spec = MinimalSpec(p=HelicoidalParams(w=1.), M=1., n=4000)

    c = minimal_profile_via_inverse(spec)
    g = ts(c)

    # ts(invert(gamma)) = gamma on the hyperbola y^2 - x^2 = 1
    np.testing.assert_allclose(g.w ** 2 - g.z ** 2, 1., atol=1e-6)
    np.testing.assert_allclose(g.z, -c.params / 2, atol=1e-6)
    assert is_unit_speed(c)

    _, residual = fit_rotation(c.points, minimal_profile(spec).points)
    assert residual < 1e-5


def test_minimal_profile_via_inverse_02():
    """
    Test the hyperbola traversed with x increasing, which fails the range
        condition
    """

    spec = MinimalSpec(p=HelicoidalParams(w=1.), M=1., n=1000)

    with pytest.raises(RangeViolation):
        minimal_profile_via_inverse(spec, x_decreasing=False)


def test_cmc_spec_01():
    """
    Test M at or below -1/4
    """

    with pytest.raises(ValidationError):
        CMCSpec(p=HelicoidalParams(w=1.), M=-0.25)


def test_trace_cmc_level_curve_01():
    """
    Traced level curve for w = 1, M = 1 closes, lies on the level set and
        crosses the y-axis at (1 +/- sqrt(5)) / 2
    """

    spec = CMCSpec(p=HelicoidalParams(w=1.), M=1.)

    g, f, gap = trace_cmc_level_curve(spec)

    assert gap < 1e-6
    np.testing.assert_allclose(g.zw[0], g.zw[-1], atol=1e-6)
    np.testing.assert_allclose(cmc_residual(g, spec.p, spec.M), 0., atol=1e-9)
    assert np.isclose(np.max(g.w), (1 + np.sqrt(5)) / 2, atol=1e-6)
    assert np.isclose(np.min(g.w), (1 - np.sqrt(5)) / 2, atol=1e-4)
    assert abs(len(g) - spec.n) < 0.05 * spec.n


@pytest.mark.parametrize('w, M', [(3., 1.), (3., 5.), (0.5, 0.), (2., -0.2)])
def test_trace_cmc_level_curve_02(w, M):
    """
    The trace returns to its starting point after one period and stays on the
        level set for a range of pitches and levels
    """

    spec = CMCSpec(p=HelicoidalParams(w=w), M=M)

    g, f, gap = trace_cmc_level_curve(spec)

    assert gap < 1e-6
    assert np.linalg.norm(g.zw[-1] - g.zw[0]) < 1e-6
    np.testing.assert_allclose(cmc_residual(g, spec.p, spec.M), 0., atol=1e-9)
    assert check_range(g, f).accepted

    # closed-form f agrees with -w'/z off the y-axis
    off_axis = np.abs(g.z) > 1e-3
    np.testing.assert_allclose(
        f[off_axis], -g.velocity[off_axis, 1] / g.z[off_axis], rtol=1e-10)


def test_cmc_profile_01():
    """
    Profile with w = 1, M = 1 has constant mean curvature one and its
        TreadmillSled stays on the level set
    """

    spec = CMCSpec(p=HelicoidalParams(w=1.), M=1.)

    c = cmc_profile(spec)

    np.testing.assert_allclose(mean_curvature_analytic(c, spec.p), 1., atol=1e-4)
    np.testing.assert_allclose(
        cmc_residual(ts(c), spec.p, spec.M), 0., atol=1e-8)


def test_cmc_profile_02():
    """
    Finite differences confirm H = 1 away from the mesh boundary
    """

    spec = CMCSpec(p=HelicoidalParams(w=1.), M=0.5, n=800)
    c = cmc_profile(spec)
    mesh = immerse(c, spec.p, (0., 1.), 100)

    H, _ = curvatures_fd(mesh)

    np.testing.assert_allclose(H[1:-1, 1:-1], 1., atol=5e-3)


def test_flat_spec_01():
    """
    Test the y-axis semiline (c = 0) and a degenerate segment
    """

    with pytest.raises(ValidationError):
        FlatSpec(c=0., y_start=1., y_end=2.)

    with pytest.raises(ValidationError):
        FlatSpec(c=1., y_start=1., y_end=1.)


def test_flat_spec_02():
    """
    Range condition of the semiline depends on side and orientation
    """

    assert FlatSpec(c=1., y_start=-2., y_end=-1.).satisfies_range_condition()
    assert FlatSpec(c=1., y_start=2., y_end=1.).satisfies_range_condition()
    assert not FlatSpec(c=1., y_start=1., y_end=2.).satisfies_range_condition()
    assert not FlatSpec(c=1., y_start=-1., y_end=1.).satisfies_range_condition()


def test_flat_profile_01():
    """
    Semiline c = 1, y from -2 to -1:  the TreadmillSled is reproduced and the
        surface is flat by analytic and finite-difference curvature
    """

    spec = FlatSpec(c=1., y_start=-2., y_end=-1.)
    p = HelicoidalParams(w=1.)

    c = flat_profile(spec)
    g = ts(c)

    np.testing.assert_allclose(g.z, 1., atol=1e-6)
    np.testing.assert_allclose(g.w, np.linspace(-2, -1, spec.n), atol=1e-6)
    np.testing.assert_allclose(gauss_curvature_analytic(c, p), 0., atol=1e-8)

    _, K = curvatures_fd(immerse(c, p, (0., 1.), 100))
    assert np.nanmax(np.abs(K)) < 1e-3


def test_flat_profile_02():
    """
    Test the full vertical line, which crosses the x-axis
    """

    spec = FlatSpec(c=1., y_start=-1., y_end=1.)

    with pytest.raises(RangeViolation):
        flat_profile(spec)


@pytest.mark.parametrize('c, y_start, y_end', [
    (1., -2., -1.), (-0.5, 1., 3.), (2., 3., 1.)])
def test_flat_profile_03(c, y_start, y_end):
    """
    A TreadmillSled on a vertical semiline off the axes gives a flat surface
    """

    spec = FlatSpec(c=c, y_start=y_start, y_end=y_end)
    profile = flat_profile(spec)
    g = ts(profile)

    assert np.max(np.abs(g.z - c)) < 1e-8
    assert np.min(np.abs(g.w)) > 0.1

    _, K = curvatures_fd(immerse(profile, HelicoidalParams(w=1.), (0., 1.), 100))
    assert np.nanmax(np.abs(K)) < 1e-3


def test_profile_report_01():
    """
    Sidecar values for a minimal profile
    """

    spec = MinimalSpec(p=HelicoidalParams(w=1.), M=1., n=4000)
    c = minimal_profile(spec)

    report = profile_report(spec, c)

    assert report.generator == 'minimal'
    assert report.spec['M'] == 1.
    assert report.max_abs_curvature_error < 1e-6
    assert report.max_abs_ts_residual < 1e-8


def test_profile_report_02():
    """
    Sidecar values for a flat profile
    """

    spec = FlatSpec(c=2., y_start=3., y_end=1.)
    c = flat_profile(spec)

    report = profile_report(spec, c, w=0.5)

    assert report.generator == 'flat'
    assert report.max_abs_curvature_error < 1e-8
    assert report.max_abs_ts_residual < 1e-8
