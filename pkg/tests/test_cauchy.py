import numpy as np
import pytest

from weldlab.cauchy import BoundaryFunction, cauchy_transform, jump_decompose, norm_comparison
from weldlab.errors import InvalidInputError, ResolutionError
from weldlab.fourier import FourierFunction, h12_norm, project
from weldlab.welding import PowerSeriesMap

CIRCLE = PowerSeriesMap("disk_plus", [1.0])
CURVED = PowerSeriesMap("disk_plus", [1.0, 0.1])


def bf(modes):
    return BoundaryFunction(FourierFunction.from_modes(modes))


def test_residue_oracles_on_circle():
    h = bf({1: 1.0})
    assert abs(cauchy_transform(CIRCLE, h, 0.5) - 0.5) < 1e-12
    assert abs(cauchy_transform(CIRCLE, h, 2.0)) < 1e-12
    hm = bf({-1: 1.0})
    assert abs(cauchy_transform(CIRCLE, hm, 2.0) - (-0.5)) < 1e-12
    assert abs(cauchy_transform(CIRCLE, hm, 0.5)) < 1e-12


def test_interior_and_exterior_contour_routes_agree():
    # agreement is limited by the r -> 1 extrapolation error, which shrinks
    # rapidly as the radius family tightens toward the curve
    h = bf({2: 0.7, -1: 1.3, -3: 0.4})
    rin = [1.0 - 2.0 ** (-(4 + i)) for i in range(5)]
    rout = [1.0 + 2.0 ** (-(4 + i)) for i in range(5)]
    for z in (0.4 + 0.2j, 1.9 - 0.5j):
        inner = cauchy_transform(CURVED, h, z, radii=rin, grid=4096)
        outer = cauchy_transform(CURVED, h, z, radii=rout, grid=4096)
        assert abs(inner - outer) < 1e-7


def test_near_curve_rejected():
    h = bf({1: 1.0})
    with pytest.raises(ResolutionError):
        cauchy_transform(CIRCLE, h, 1.0 + 1e-4j)


def test_jump_on_circle_equals_fourier_split():
    rng = np.random.default_rng(10)
    h = bf({n: rng.normal() + 1j * rng.normal() for n in range(-12, 13)})
    d = jump_decompose(CIRCLE, h, 12)
    assert np.max(np.abs(d.plus_projection().coeffs - project(h.series, "plus").coeffs)) < 1e-12
    assert np.max(np.abs(d.minus_projection().coeffs - project(h.series, "minus").coeffs)) < 1e-12
    # sign convention: h = e^{it} + 2 e^{-2it} gives h_+ = z, h_- = -2 z^{-2}
    d2 = jump_decompose(CIRCLE, bf({1: 1.0, -2: 2.0}), 8)
    assert abs(d2.plus.boundary_series().coeff(1) - 1.0) < 1e-12
    assert abs(d2.minus.boundary_series().coeff(-2) - (-2.0)) < 1e-12


def test_jump_constant_convention():
    d = jump_decompose(CIRCLE, bf({0: 5.0}), 8)
    assert abs(d.plus.boundary_series().coeff(0) - 5.0) < 1e-12
    assert np.max(np.abs(d.minus.coeffs)) < 1e-12


def test_jump_of_interior_holomorphic_data():
    # boundary values of z o F^{-1} are e^{i t} in the parameter
    d = jump_decompose(CURVED, bf({1: 1.0}), 16)
    assert np.max(np.abs(d.minus.coeffs)) < 1e-6
    assert abs(d.plus.coeffs[1] - 1.0) < 1e-10


def test_jump_reconstruction_and_linearity():
    rng = np.random.default_rng(11)
    g = bf({n: rng.normal() + 1j * rng.normal() for n in range(-6, 7)})
    h = bf({n: rng.normal() + 1j * rng.normal() for n in range(-6, 7)})
    dg, dh = jump_decompose(CURVED, g, 24), jump_decompose(CURVED, h, 24)
    rec = dg.reconstruction_series() - g.series
    assert h12_norm(rec) < 1e-6 * h12_norm(g.series)
    a, b = 1.3 - 0.4j, -0.7 + 0.2j
    comb = BoundaryFunction(a * g.series + b * h.series)
    dc = jump_decompose(CURVED, comb, 24)
    mix = a * dg.plus.boundary_series() + b * dh.plus.boundary_series() - dc.plus.boundary_series()
    assert h12_norm(mix) < 1e-8


def test_pipeline_reduces_to_projection_on_circle():
    rng = np.random.default_rng(12)
    h = bf({n: rng.normal() for n in range(-8, 9)})
    d = jump_decompose(CIRCLE, h, 8)
    assert np.array_equal(d.plus_projection().modes, project(h.series, "plus").modes)


def test_norm_comparison_circle_and_convention():
    rng = np.random.default_rng(13)
    hs = [bf({n: rng.normal() + 1j * rng.normal() for n in range(-5, 6)}) for _ in range(3)]
    rep = norm_comparison(CIRCLE, hs, order=12)
    assert np.max(np.abs(np.array(rep.ratios) - 1.0)) < 1e-6
    const = norm_comparison(CIRCLE, [bf({0: 5.0})], order=8)
    assert const.ratios == (1.0,)
    with pytest.raises(InvalidInputError):
        norm_comparison(CIRCLE, [], order=8)


def test_norm_comparison_curved_stable():
    rng = np.random.default_rng(14)
    hs = [bf({n: rng.normal() + 1j * rng.normal() for n in range(-4, 5)}) for _ in range(3)]
    rep1 = norm_comparison(CURVED, hs, order=16)
    rep2 = norm_comparison(CURVED, hs, order=24)
    assert np.isfinite(rep1.max_ratio)
    assert abs(rep1.max_ratio - rep2.max_ratio) < 1e-3
    assert rep1.max_ratio >= 1.0
