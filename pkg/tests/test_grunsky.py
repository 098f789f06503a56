import numpy as np
import pytest

from weldlab.circlemaps import CircleHomeo, comp_operator_matrix
from weldlab.errors import AmbiguousRankError, InvalidInputError
from weldlab.fourier import FourierFunction
from weldlab.grunsky import (
    fiber_identity_residual,
    graph_subspace_check,
    grunsky_matrix_coeff,
    grunsky_matrix_proj,
    hs_norm,
    log_kernel_coefficient,
    multi_grunsky,
    pi_matrix,
    pi_report,
    shale_cocycle_det,
    wp_kahler_potential,
)
from weldlab.operators import OperatorMatrix, block_decompose
from weldlab.welding import PowerSeriesMap

MOEBIUS = PowerSeriesMap("disk_plus", [0.3**k for k in range(48)])
QUAD = PowerSeriesMap("disk_plus", [1.0, 0.2])


def test_coeff_route_trivial_cases():
    z = PowerSeriesMap("disk_plus", [1.0])
    assert np.max(np.abs(grunsky_matrix_coeff(z, 12).entries)) == 0.0
    assert np.max(np.abs(grunsky_matrix_coeff(MOEBIUS, 16).entries)) < 1e-12


def test_coeff_route_quadratic_entry():
    assert abs(log_kernel_coefficient(QUAD, 1, 1) - (-0.04)) < 1e-10
    assert abs(grunsky_matrix_coeff(QUAD, 8).entries[0, 0] - 0.04) < 1e-10


def test_grunsky_exactly_symmetric():
    for F in (QUAD, PowerSeriesMap("disk_plus", [1.0, 0.1, 0.05 - 0.02j])):
        g = grunsky_matrix_coeff(F, 12).entries
        assert np.array_equal(g, g.T)


def test_grunsky_scale_invariant():
    g1 = grunsky_matrix_coeff(QUAD, 10).entries
    g2 = grunsky_matrix_coeff(PowerSeriesMap("disk_plus", np.array([1.0, 0.2]) * (2.0 - 1.0j)), 10).entries
    assert np.max(np.abs(g1 - g2)) < 1e-14


def test_projection_route_matches_coefficients():
    for F in (QUAD, MOEBIUS, PowerSeriesMap("disk_plus", [1.0, 0.15, 0.05])):
        diff = grunsky_matrix_coeff(F, 16).entries - grunsky_matrix_proj(F, 16).entries
        assert np.linalg.norm(diff) < 1e-5


def test_graph_subspace_residuals():
    for F in (PowerSeriesMap("disk_plus", [1.0]), MOEBIUS, QUAD):
        chk = graph_subspace_check(F, 16)
        assert chk.id_residual < 1e-6
        assert chk.graph_residual < 1e-6


def test_pi_report_and_fiber_identity():
    for F in (PowerSeriesMap("disk_plus", [1.0]), MOEBIUS, QUAD):
        rep = pi_report(F, 16)
        assert (rep.dim_kernel, rep.dim_cokernel, rep.index) == (1, 0, 1)
        assert fiber_identity_residual(F, 16) < 1e-6
    # the constant column is literally zero
    mat = pi_matrix(QUAD, 12)
    assert np.max(np.abs(mat[:, 0])) < 1e-12


def test_pi_report_ambiguous_rank():
    with pytest.raises(AmbiguousRankError):
        pi_report(QUAD, 12, rank_tol=1.0)  # every singular value sits near 1


def test_hs_norm_examples():
    zeros = OperatorMatrix(np.zeros((8, 8)), "p", "q", 8)
    assert hs_norm(zeros) == 0.0
    ident = OperatorMatrix(np.eye(8), "p", "q", 8)
    assert abs(hs_norm(ident) - np.sqrt(8.0)) < 1e-15
    n16 = hs_norm(grunsky_matrix_coeff(QUAD, 16))
    n32 = hs_norm(grunsky_matrix_coeff(QUAD, 32))
    assert abs(n32 - n16) / n32 < 0.01


def test_shale_cocycle_rotations_exact():
    n = 12
    modes = np.concatenate([np.arange(-n, 0), np.arange(1, n + 1)])

    def rot(alpha):
        return block_decompose(OperatorMatrix(np.diag(np.exp(1j * modes * alpha)), "u", "u", n))

    assert shale_cocycle_det(rot(0.3), rot(1.7)) == 1.0 + 0.0j
    generic = block_decompose(comp_operator_matrix(CircleHomeo.from_modes({}, {1: 0.2}), n, grid=2048))
    assert abs(shale_cocycle_det(rot(0.5), generic) - 1.0) < 1e-8


def test_shale_cocycle_associativity():
    n = 12
    maps = [
        CircleHomeo.from_modes({}, {1: 0.2}),
        CircleHomeo.from_modes({2: 0.1}, {1: 0.15}),
        CircleHomeo.from_modes({1: -0.08}, {2: 0.12}),
    ]
    mats = [comp_operator_matrix(p, n, grid=2048) for p in maps]
    b1, b2, b4 = (block_decompose(m) for m in mats)
    lhs = shale_cocycle_det(b1, b2) * shale_cocycle_det(block_decompose(mats[0] @ mats[1]), b4)
    rhs = shale_cocycle_det(b2, b4) * shale_cocycle_det(b1, block_decompose(mats[1] @ mats[2]))
    assert abs(lhs - rhs) < 1e-5


def test_wp_kahler_potential():
    assert wp_kahler_potential(PowerSeriesMap("disk_plus", [1.0]), 12) == 0.0
    assert abs(wp_kahler_potential(MOEBIUS, 16)) < 1e-10
    p16 = wp_kahler_potential(QUAD, 16)
    p32 = wp_kahler_potential(QUAD, 32)
    assert p16 < 0.0
    assert abs(p32 - p16) / abs(p32) < 0.01
    with pytest.raises(InvalidInputError):
        wp_kahler_potential(PowerSeriesMap("disk_plus", [1.0, 2.0]), 8)  # Gr entry 4 > 1


def test_multi_grunsky_single_map_reduces():
    big = multi_grunsky([(0.0, np.array([1.0, 0.2]))], 12)
    single = grunsky_matrix_coeff(QUAD, 12)
    assert np.max(np.abs(big.entries - single.entries)) < 1e-14


def test_multi_grunsky_off_diagonal_decay():
    near = multi_grunsky([(0.0, [0.5]), (3.0, [0.5])], 8).entries
    far = multi_grunsky([(0.0, [0.5]), (30.0, [0.5])], 8).entries
    off_near = np.max(np.abs(near[:8, 8:]))
    off_far = np.max(np.abs(far[:8, 8:]))
    assert off_far < off_near / 50.0  # leading mixed term scales like 1/d^2


def test_multi_grunsky_block_symmetric():
    big = multi_grunsky([(0.0, [0.5, 0.05]), (4.0, [0.5, -0.03])], 10).entries
    assert np.max(np.abs(big - big.T)) < 1e-13


def test_multi_grunsky_graph_property():
    riggings = [(0.0, np.array([0.5, 0.05], complex)), (4.0, np.array([0.5, -0.03], complex))]
    order = 16
    big = multi_grunsky(riggings, order).entries
    msqrt = np.sqrt(np.arange(1, order + 1))
    theta = 2 * np.pi * np.arange(512) / 512
    z = np.exp(1j * theta)

    def pullback_coords(h):
        minus, plus = [], []
        for p, c in riggings:
            vals = h(p + np.polyval(np.concatenate([c[::-1], [0.0]]), z))
            f = FourierFunction.from_samples(vals, order)
            minus.append(np.array([f.coeff(-k) for k in range(1, order + 1)]) * msqrt)
            plus.append(np.array([f.coeff(k) for k in range(1, order + 1)]) * msqrt)
        return np.concatenate(minus), np.concatenate(plus)

    for h in (lambda w: 1.0 / (w - 0.0), lambda w: 1.0 / (w - 4.0), lambda w: 1.0 / (w - 4.0) ** 2):
        v, w_plus = pullback_coords(h)
        assert np.max(np.abs(w_plus - big @ v)) < 1e-5 * max(1.0, np.max(np.abs(v)))


def test_multi_grunsky_rejects_overlap_inputs():
    with pytest.raises(InvalidInputError):
        multi_grunsky([(0.0, [0.5]), (0.0, [0.5])], 6)
