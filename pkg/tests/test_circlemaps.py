import numpy as np
import pytest

from weldlab.circlemaps import (
    CircleHomeo,
    beurling_ahlfors_mu,
    comp_operator_matrix,
    compose,
    invert,
    qs_ratio,
    wp_energy_estimate,
)
from weldlab.errors import InvalidInputError, ResolutionError
from weldlab.fourier import FourierFunction, symplectic_pairing
from weldlab.operators import block_decompose, pairing_matrix

THETA = np.linspace(0.0, 2.0 * np.pi, 181)


def analytic_homeo():
    return CircleHomeo.from_modes({2: 0.1}, {1: 0.2}, grid_size=1024)


def test_monotonicity_enforced():
    with pytest.raises(InvalidInputError):
        CircleHomeo.from_modes({}, {1: 1.2})


def test_rotation_composition_adds_angles():
    r = compose(CircleHomeo.rotation(0.4), CircleHomeo.rotation(0.5))
    assert np.max(np.abs(r.lift(THETA) - (THETA + 0.9))) < 1e-14


def test_identity_is_unit():
    phi = analytic_homeo()
    left = compose(phi, CircleHomeo.identity())
    right = compose(CircleHomeo.identity(), phi)
    assert np.max(np.abs(left.lift(THETA) - phi.lift(THETA))) < 1e-13
    assert np.max(np.abs(right.lift(THETA) - phi.lift(THETA))) < 1e-13


def test_compose_associative_on_grid():
    phi, psi = analytic_homeo(), CircleHomeo.from_modes({1: -0.07}, {2: 0.12})
    chi = CircleHomeo.from_modes({}, {1: 0.1})
    a = compose(compose(phi, psi), chi)
    b = compose(phi, compose(psi, chi))
    assert np.max(np.abs(a.lift(THETA) - b.lift(THETA))) < 1e-11


def test_invert_examples():
    ident = invert(CircleHomeo.identity())
    assert np.max(np.abs(ident.lift(THETA) - THETA)) < 1e-14
    rot = invert(CircleHomeo.rotation(0.7))
    assert np.max(np.abs(rot.lift(THETA) - (THETA - 0.7))) < 1e-13
    phi = analytic_homeo()
    again = invert(invert(phi))
    assert np.max(np.abs(again.lift(THETA) - phi.lift(THETA))) < 1e-8
    roundtrip = compose(phi, invert(phi))
    assert np.max(np.abs(roundtrip.lift(THETA) - THETA)) < 1e-8


def test_qs_ratio_examples():
    assert abs(qs_ratio(CircleHomeo.identity()) - 1.0) < 1e-10
    assert abs(qs_ratio(CircleHomeo.rotation(1.1)) - 1.0) < 1e-10
    phi = CircleHomeo.from_modes({}, {1: 0.3})
    k_coarse = qs_ratio(phi, n_alpha=48)
    k_fine = qs_ratio(phi, n_alpha=192)
    assert k_coarse > 1.0
    assert abs(k_fine - k_coarse) / k_fine < 0.01  # stable under grid refinement


def test_qs_ratio_rotation_conjugation():
    phi = CircleHomeo.from_modes({}, {1: 0.25})
    rot = CircleHomeo.rotation(2.0 * np.pi * 8 / 64)  # grid-congruent rotation
    conj = compose(rot, compose(phi, rot))
    assert abs(qs_ratio(phi, n_alpha=64) - qs_ratio(conj, n_alpha=64)) < 1e-9


def test_comp_matrix_identity_and_rotation():
    n = 8
    ident = comp_operator_matrix(CircleHomeo.identity(), n)
    assert np.max(np.abs(ident.entries - np.eye(2 * n))) < 1e-14
    alpha = 0.6
    rot = comp_operator_matrix(CircleHomeo.rotation(alpha), n)
    modes = rot.modes
    assert np.max(np.abs(rot.entries - np.diag(np.exp(1j * modes * alpha)))) < 1e-13


def test_comp_matrix_symplectic_central_band():
    # truncation leakage confines the identity to the central mode band and
    # decays geometrically with the order
    n = 32
    mat = comp_operator_matrix(analytic_homeo(), n, grid=8 * n)
    om = pairing_matrix(n)
    dev = mat.entries.T @ om @ mat.entries - om
    rows = [i for i, m in enumerate(mat.modes) if abs(m) <= n // 2]
    assert np.max(np.abs(dev[np.ix_(rows, rows)])) < 1e-8


def test_pairing_preserved_under_composition_operator():
    rng = np.random.default_rng(9)
    phi = analytic_homeo()
    m = 4096
    theta = 2 * np.pi * np.arange(m) / m
    lam = phi.lift(theta)

    def hat(f):
        vals = f.evaluate(lam)
        return FourierFunction.from_samples(vals - np.mean(vals), m // 3)

    g = FourierFunction.from_modes({n: rng.normal() + 1j * rng.normal() for n in [-3, -1, 2, 5]})
    h = FourierFunction.from_modes({n: rng.normal() + 1j * rng.normal() for n in [-5, -2, 1, 3]})
    assert abs(symplectic_pairing(hat(g), hat(h)) - symplectic_pairing(g, h)) < 1e-8


def test_comp_matrix_contravariant_on_central_band():
    n = 24
    phi, psi = analytic_homeo(), CircleHomeo.from_modes({}, {1: 0.15})
    mc = comp_operator_matrix(compose(phi, psi), n, grid=4096)
    mm = comp_operator_matrix(psi, n, grid=4096) @ comp_operator_matrix(phi, n, grid=4096)
    modes = mc.modes
    keep = [i for i, m in enumerate(modes) if abs(m) <= n // 2]
    assert np.max(np.abs((mc.entries - mm.entries)[np.ix_(keep, keep)])) < 1e-8


def test_blocks_of_rotation_vanish():
    n = 8
    bd = block_decompose(comp_operator_matrix(CircleHomeo.rotation(0.8), n))
    assert np.max(np.abs(bd.b.entries)) < 1e-14
    ident = block_decompose(comp_operator_matrix(CircleHomeo.identity(), n))
    assert np.max(np.abs(ident.a.entries - np.eye(n))) < 1e-14
    assert np.max(np.abs(ident.b.entries)) < 1e-14


def test_block_reassembly_exact():
    n = 12
    M = comp_operator_matrix(analytic_homeo(), n)
    bd = block_decompose(M)
    # conjugate blocks are derived, exact up to quadrature rounding
    assert np.max(np.abs(bd.reassemble().entries - M.entries)) < 1e-13


def test_ba_mu_vanishes_for_rigid_maps():
    pts = np.array([1.3, 2.0 * np.exp(0.9j), -4.0 + 1.0j])
    assert np.max(np.abs(beurling_ahlfors_mu(CircleHomeo.identity(), pts))) < 1e-8
    assert np.max(np.abs(beurling_ahlfors_mu(CircleHomeo.rotation(0.9), pts))) < 1e-8


def test_ba_mu_bounded_and_decaying_toward_circle():
    phi = CircleHomeo.from_modes({}, {1: 0.2})
    radii = np.array([1.02, 1.1, 1.5, 3.0])
    mus = np.abs(beurling_ahlfors_mu(phi, radii * np.exp(0.4j)))
    assert np.all(mus < 1.0)
    assert mus[0] < mus[2]  # decay toward the circle


def test_ba_requires_exterior_points():
    with pytest.raises(InvalidInputError):
        beurling_ahlfors_mu(CircleHomeo.identity(), 0.5)


def test_wp_energy_identity_and_analytic():
    rep = wp_energy_estimate(CircleHomeo.identity(), levels=(0, 1))
    assert rep.estimates[-1] < 1e-8
    rep2 = wp_energy_estimate(CircleHomeo.from_modes({}, {1: 0.2}), levels=(1, 2))
    assert rep2.rel_changes[-1] < 0.05
    assert not rep2.growing


def test_wp_energy_corner_map_grows():
    # triangle-wave displacement: corners at theta = 0, pi (truncated Fourier)
    K = 64
    a = np.zeros(K + 1)
    for k in range(1, K + 1, 2):
        a[k] = 0.35 * 8.0 / (np.pi**2 * k**2)
    corner = CircleHomeo(a, np.zeros(K + 1), grid_size=1024)
    rep = wp_energy_estimate(corner, levels=(0, 1, 2), base_radial=12, base_angular=24)
    assert rep.growing
    assert rep.estimates[0] < rep.estimates[1] < rep.estimates[2]


def test_serialization_round_trip():
    phi = analytic_homeo()
    back = CircleHomeo.from_json(phi.to_json())
    assert np.array_equal(back.cos_coeffs, phi.cos_coeffs)
    assert np.array_equal(back.sin_coeffs, phi.sin_coeffs)
    assert back.grid_size == phi.grid_size


def test_conjugate_by_reciprocal_is_involution():
    phi = analytic_homeo()
    twice = phi.conjugate_by_reciprocal().conjugate_by_reciprocal()
    assert np.max(np.abs(twice.lift(THETA) - phi.lift(THETA))) == 0.0
