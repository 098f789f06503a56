import numpy as np
import pytest

from weldlab.errors import InvalidInputError
from weldlab.fourier import (
    DiskSeries,
    FourierFunction,
    dirichlet_energy,
    h12_norm,
    project,
    symplectic_pairing,
)


def random_function(rng, order=8):
    modes = {n: rng.normal() + 1j * rng.normal() for n in range(-order, order + 1)}
    return FourierFunction.from_modes(modes)


def test_h12_norm_examples():
    assert h12_norm(FourierFunction.from_modes({0: 1.0})) == 1.0
    assert h12_norm(FourierFunction.from_modes({1: 1.0})) == 1.0
    assert np.isclose(h12_norm(FourierFunction.from_modes({-2: 3.0})), np.sqrt(18.0), atol=0, rtol=1e-15)


def test_h12_norm_rejects_nonfinite():
    with pytest.raises(InvalidInputError):
        FourierFunction.from_modes({1: np.nan})


def test_projection_examples():
    h = FourierFunction.from_modes({1: 1.0, -1: 1.0})
    assert project(h, "plus").coeff(1) == 1.0
    assert project(h, "minus").coeff(-1) == 1.0
    const = FourierFunction.from_modes({0: 5.0})
    assert project(const, "plus").coeff(0) == 5.0
    assert np.all(project(const, "minus").coeffs == 0)


def test_projection_splits_exactly():
    rng = np.random.default_rng(0)
    for _ in range(20):
        h = random_function(rng)
        total = project(h, "plus").as_fourier() + project(h, "minus").as_fourier()
        assert np.array_equal(total.coeffs, h.coeffs)


def test_dirichlet_energy_examples():
    assert dirichlet_energy(DiskSeries("plus", [0.0, 1.0], 1)) == 1.0
    assert dirichlet_energy(DiskSeries("plus", [3.0], 0)) == 0.0
    assert dirichlet_energy(DiskSeries("minus", [1.0, 0.0], 2)) == 2.0  # z^{-2}


def test_norm_decomposes_into_energies():
    rng = np.random.default_rng(1)
    for _ in range(10):
        h = random_function(rng)
        plus = project(h, "plus")
        inner = DiskSeries("plus", np.concatenate([[0.0], plus.coeffs[1:]]), plus.order)
        total = abs(h.coeff(0)) ** 2 + dirichlet_energy(inner) + dirichlet_energy(project(h, "minus"))
        assert np.isclose(h12_norm(h) ** 2, total, rtol=1e-13)


def test_pairing_single_modes():
    g = FourierFunction.from_modes({1: 1.0})
    h = FourierFunction.from_modes({-1: 1.0})
    assert symplectic_pairing(g, h) == -1j
    assert symplectic_pairing(h, g) == 1j


def test_pairing_antisymmetric_bilinear():
    rng = np.random.default_rng(2)
    g, h, k = (random_function(rng) for _ in range(3))
    assert abs(symplectic_pairing(g, h) + symplectic_pairing(h, g)) < 1e-13
    a, b = 0.7 - 0.2j, 1.3 + 0.4j
    lhs = symplectic_pairing(a * g + b * h, k)
    rhs = a * symplectic_pairing(g, k) + b * symplectic_pairing(h, k)
    assert abs(lhs - rhs) < 1e-12
    real = FourierFunction.from_modes({1: 0.5, -1: 0.3, 2: -0.2})
    assert abs(symplectic_pairing(real, real)) == 0.0


def test_pairing_matches_quadrature():
    rng = np.random.default_rng(3)
    g, h = random_function(rng, 6), random_function(rng, 6)
    m = 64  # grid size > 2 * order, quadrature exact for band-limited data
    theta = 2 * np.pi * np.arange(m) / m
    dh = np.fft.ifft(np.fft.fft(h.evaluate(theta)) * 1j * np.fft.fftfreq(m, 1.0 / m))
    quad = np.mean(g.evaluate(theta) * dh)
    assert abs(quad - symplectic_pairing(g, h)) < 1e-12


def test_json_round_trip_exact():
    rng = np.random.default_rng(4)
    h = random_function(rng, 5)
    back = FourierFunction.from_json(h.to_json())
    assert back.order == h.order
    assert np.array_equal(back.coeffs, h.coeffs)
    s = project(h, "minus")
    s2 = DiskSeries.from_json(s.to_json())
    assert np.array_equal(s.coeffs, s2.coeffs) and s2.side == "minus"


def test_minus_series_has_no_constant():
    with pytest.raises(InvalidInputError):
        DiskSeries("minus", [1.0, 2.0], 1)  # wrong length smuggles a constant
