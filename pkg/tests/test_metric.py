import math

import numpy as np
import pytest

from forge.errors import MetricDegenerate, StepUnderflow
from forge.holo import Z, const
from forge.metric import (GROWTH_RANK, AbsOneForm, ConformalMetric, ModulusWeight, PathSpec,
                          RiemannMetric2, classify_growth, gauss_curvature, integrate, path_length,
                          radial_divergence_test, ray_angles, total_curvature)


def test_gauss_kronrod_against_closed_forms():
    v, err = integrate(np.sin, 0.0, math.pi)
    assert abs(v - 2) < 1e-13 and err < 1e-10
    v, _ = integrate(lambda t: 1 / np.sqrt(t), 1e-12, 1.0)
    assert abs(v - (2 - 2e-6)) < 1e-9


def test_integrate_reports_infinite_for_nonfinite_sample():
    v, _ = integrate(lambda t: np.where(t > 0.5, np.inf, 1.0), 0.0, 1.0)
    assert math.isinf(v)


def test_density_of_weighted_terms():
    m = ConformalMetric([AbsOneForm(Z, mu=0.5), AbsOneForm(const(2))], [ModulusWeight(Z, 1, -1, 2)])
    z = 0.3 + 0.4j
    want = (abs(z) ** 2 * abs(z) + 4) * (1 - abs(z) ** 2) ** 2
    assert m.density(z) == pytest.approx(want, rel=1e-14)
    assert m.scaled(3).density(z) == pytest.approx(9 * want, rel=1e-14)


def test_log_weight_uses_continuous_argument():
    f = AbsOneForm(const(1), n=1)
    z = np.exp(-1 + 3j)
    assert f.magnitude(z, arg=3.0) == pytest.approx(math.hypot(1, 3))
    assert f.magnitude(z, arg=3.0 + 2 * math.pi) == pytest.approx(math.hypot(1, 3 + 2 * math.pi))


def test_ray_angles_avoid_slit():
    a = ray_angles(8)
    assert len(a) == 8 and np.all(np.abs(a) < math.pi)
    assert np.allclose(np.diff(a), 2 * math.pi / 8)


def test_flat_metric_ray_is_finite():
    pl = path_length(ConformalMetric([AbsOneForm(const(1))]), PathSpec.ray(0.3, 1.0))
    assert not pl.divergent and abs(pl.value - 1) < 1e-9 and pl.growth == "bounded"


def test_log_metric_ray_diverges_with_exponent_one():
    pl = path_length(ConformalMetric([AbsOneForm(1 / Z)]), PathSpec.ray(0.0, 1.0))
    assert pl.divergent and pl.growth == "log"
    assert abs(pl.constants["p"] - 1) < 1e-3 and abs(pl.constants["c"] - 1) < 1e-3
    # table rows are (eps, L) with L = ln(1/eps) exactly
    for eps, L in pl.table:
        assert abs(L - math.log(1 / eps)) < 1e-9


def test_power_growth_for_double_pole():
    pl = path_length(ConformalMetric([AbsOneForm(Z ** -2)]), PathSpec.ray(1.0, 1.0))
    assert pl.divergent and pl.growth == "power" and abs(pl.constants["a"] - 1) < 1e-6


def test_spiral_length_is_longer_by_sqrt_factor():
    m = ConformalMetric([AbsOneForm(1 / Z)])
    pl = path_length(m, PathSpec.spiral(3.0, 0.0, 1.0))
    eps, L = pl.table[-1]
    assert abs(L - math.sqrt(10) * math.log(1 / eps)) < 1e-8


def test_segment_to_infinity():
    m = ConformalMetric([AbsOneForm(1 / (1 + Z * Z))])
    pl = path_length(m, PathSpec.segment((0.0, 0.0), (1.0, 0.0)))
    assert not pl.divergent and abs(pl.value - math.pi / 2) < 1e-8


def test_sampled_polyline():
    m = ConformalMetric([AbsOneForm(const(1))])
    pl = path_length(m, PathSpec.samples([0.1, 0.1 + 0.3j, 0.5 + 0.3j]))
    assert abs(pl.value - 0.7) < 1e-12


def test_degenerate_metric_is_rejected():
    m = ConformalMetric([AbsOneForm(const(0))])
    with pytest.raises(MetricDegenerate):
        path_length(m, PathSpec.ray(0.0, 1.0))


def test_classify_growth_rules():
    S = 10.0 ** np.arange(1, 9)
    assert classify_growth(S, 5 - 1 / S)[:2] == (False, "bounded")
    d, g, c = classify_growth(S, np.log(S) ** 2)
    assert d and g == "log" and abs(c["p"] - 2) < 1e-6
    d, g, c = classify_growth(S, np.sqrt(S))
    assert d and g == "power" and abs(c["a"] - 0.5) < 1e-6
    # increments below the floor are not divergence
    assert not classify_growth(S, 1e-5 * np.arange(1, 9))[0]
    assert GROWTH_RANK["bounded"] < GROWTH_RANK["log"] < GROWTH_RANK["power"]


def test_radial_test_aggregates_over_rays():
    v = radial_divergence_test(ConformalMetric([AbsOneForm(1 / Z)]), 6)
    assert v.divergent and v.growth == "log" and len(v.paths) == 6
    assert len(v.table) == 6 * 8 and len(v.table[0]) == 3
    assert "evidence, not proof" in v.note


def test_curvature_of_round_sphere():
    sphere = ConformalMetric([AbsOneForm(const(2))], [ModulusWeight(Z, 1, 1, -2)])
    for p in (0.1j, 0.5 + 0.5j, -1.5):
        assert abs(gauss_curvature(sphere, p) - 1) < 1e-8


def test_brioschi_on_polar_plane():
    # du^2 + u^2 dv^2 is flat; du^2 + sin^2 u dv^2 has K = 1
    flat = RiemannMetric2(lambda u, v: 1 + 0 * u, lambda u, v: 0 * u, lambda u, v: u * u)
    sph = RiemannMetric2(lambda u, v: 1 + 0 * u, lambda u, v: 0 * u, lambda u, v: np.sin(u) ** 2)
    assert abs(gauss_curvature(flat, (1.3, 0.2))) < 1e-8
    assert abs(gauss_curvature(sph, (1.0, 0.5)) - 1) < 1e-8


def test_curvature_step_guards():
    m = ConformalMetric([AbsOneForm(1 / Z)])
    with pytest.raises(StepUnderflow):
        gauss_curvature(m, 0.5, h=1e-9)
    with pytest.raises(StepUnderflow):
        gauss_curvature(m, 1e-4, h=1e-3)


def test_total_curvature_flat_cone_is_zero():
    m = ConformalMetric([AbsOneForm(Z ** -2)])
    tc = total_curvature(m, 1.0, 1e-6)
    assert abs(tc.value) < 1e-8 and tc.finite_indicator


def test_total_curvature_of_hyperbolic_disk_annulus():
    # |K| = 1, area of r0 >= |z| >= eps under 4|dz|^2/(1-|z|^2)^2 in closed form
    m = ConformalMetric([AbsOneForm(const(2))], [ModulusWeight(Z, 1, -1, -2)])
    r0, eps = 0.5, 1e-2
    area = lambda r: 4 * math.pi * r * r / (1 - r * r)  # noqa: E731
    tc = total_curvature(m, r0, eps, n_theta=64)
    assert abs(tc.value - (area(r0) - area(eps))) < 1e-6
