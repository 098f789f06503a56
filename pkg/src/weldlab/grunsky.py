"""Grunsky matrices and Grassmannian diagnostics for truncated maps.

Two independent computations of the same operator anchor this module:

* coefficient route: expand log((F(z) - F(w))/(z - w)) = sum c_mn z^m w^n
  by a formal bivariate series logarithm and set [Gr]_mn = -sqrt(mn) c_mn
  (the global sign is pinned by agreement with the projection route on
  F = z + 0.2 z^2 and frozen here);
* projection route: push each q_n = z^{-n}/sqrt(n) through the limiting
  Cauchy projection onto the curve exterior, pull back to the circle and
  keep the plus modes.

The same pulled-back columns assemble the operator
pi = (project to minus modes) conjugated by the rigging, whose kernel is the
constants and whose finite-rank report carries the determinant-line data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._series import is_inf, series_log_2d
from .cauchy import _jump_decompose_batch
from .errors import AmbiguousRankError, InvalidInputError
from .operators import BlockDecomposition, OperatorMatrix

__all__ = [
    "grunsky_matrix_coeff",
    "grunsky_matrix_proj",
    "graph_subspace_check",
    "GraphCheck",
    "pi_report",
    "pi_matrix",
    "DetLineReport",
    "fiber_identity_residual",
    "hs_norm",
    "shale_cocycle_det",
    "wp_kahler_potential",
    "multi_grunsky",
]

# Frozen by the cross-route check on F = z + 0.2 z^2 (the zw kernel
# coefficient is -0.04 while P(D+) C_F I_F q_1 has +0.04 on z^1).
_GRUNSKY_SIGN = -1.0


def _log_kernel_table(plus_coeffs: np.ndarray, order: int) -> np.ndarray:
    """Coefficients of log((F(z) - F(w))/(z - w)) up to z^order w^order."""
    a = np.asarray(plus_coeffs, complex)
    s = np.zeros((order + 1, order + 1), dtype=complex)
    for i in range(order + 1):
        for j in range(order + 1):
            k = i + j + 1
            if k <= len(a):
                s[i, j] = a[k - 1]
    return series_log_2d(s, order)


def grunsky_matrix_coeff(F, order: int) -> OperatorMatrix:
    """Grunsky matrix from the log-kernel expansion; exactly symmetric."""
    if F.kind != "disk_plus":
        raise InvalidInputError("coefficient route expects a disk_plus map")
    ell = _log_kernel_table(F.coeffs, order)
    return OperatorMatrix(_weighted_block(ell, order), "p", "q", order)


def _weighted_block(ell: np.ndarray, order: int) -> np.ndarray:
    m = np.arange(1, order + 1)
    w = np.sqrt(np.outer(m, m))
    block = _GRUNSKY_SIGN * w * ell[1 : order + 1, 1 : order + 1]
    return 0.5 * (block + block.T)  # symmetrize away rounding, exact in theory


def log_kernel_coefficient(F, m: int, n: int) -> complex:
    """Coefficient of z^m w^n in log((F(z)-F(w))/(z-w))."""
    ell = _log_kernel_table(F.coeffs, max(m, n))
    return complex(ell[m, n])


def _pullback_matrices(F, order: int, **jump_kwargs) -> tuple[np.ndarray, np.ndarray]:
    """(plus_mat, minus_mat) of C_F I_F on the q basis.

    Column n holds the weighted plus/minus parameter modes of
    C_F P(Omega^-) C_{F^{-1}} q_n; minus_mat should be the identity and
    plus_mat the Grunsky matrix.
    """
    data = np.zeros((order, 2 * order + 1), dtype=complex)
    roots = np.sqrt(np.arange(1, order + 1))
    for n in range(1, order + 1):
        data[n - 1, order - n] = 1.0 / roots[n - 1]  # q_n = e^{-in t}/sqrt(n)
    decomps = _jump_decompose_batch(F, data, order, order, **jump_kwargs)
    plus = np.empty((order, order), dtype=complex)
    minus = np.empty((order, order), dtype=complex)
    for n, dec in enumerate(decomps):
        series = dec.minus.boundary_series() * (-1.0)  # P(Omega^-) = -J on the exterior
        plus[:, n] = [series.coeff(m) * roots[m - 1] for m in range(1, order + 1)]
        minus[:, n] = [series.coeff(-k) * roots[k - 1] for k in range(1, order + 1)]
    return plus, minus


def grunsky_matrix_proj(F, order: int, **jump_kwargs) -> OperatorMatrix:
    """Grunsky matrix by the Cauchy-projection pipeline (independent route)."""
    plus, _ = _pullback_matrices(F, order, **jump_kwargs)
    return OperatorMatrix(plus, "p", "q", order)


@dataclass(frozen=True)
class GraphCheck:
    id_residual: float
    graph_residual: float


def graph_subspace_check(F, order: int, **jump_kwargs) -> GraphCheck:
    """Residuals of P(D-) C_F I_F = Id and P(D+) C_F I_F = Gr_F (operator norm)."""
    plus, minus = _pullback_matrices(F, order, **jump_kwargs)
    gr = grunsky_matrix_coeff(F, order).entries
    return GraphCheck(
        id_residual=float(np.linalg.norm(minus - np.eye(order), 2)),
        graph_residual=float(np.linalg.norm(plus - gr, 2)),
    )


@dataclass(frozen=True)
class DetLineReport:
    dim_kernel: int
    dim_cokernel: int
    index: int
    singular_values: tuple[float, ...]

    def __post_init__(self):
        if self.index != self.dim_kernel - self.dim_cokernel:
            raise InvalidInputError("index must equal dim kernel - dim cokernel")


def pi_matrix(F, order: int, **jump_kwargs) -> np.ndarray:
    """Matrix of pi = C_{F^{-1}} P(D-) C_F on {constants} u {I_F q_n}.

    Rows are q_1..q_N coordinates of the image (through the rigging), the
    constant function is always column 0; its image vanishes, which makes
    "kernel = constants" a literal first-column check.
    """
    _, minus = _pullback_matrices(F, order, **jump_kwargs)
    out = np.zeros((order, order + 1), dtype=complex)
    out[:, 1:] = minus
    return out


def pi_report(F, order: int, rank_tol: float = 1e-6, **jump_kwargs) -> DetLineReport:
    """Kernel/cokernel/index of pi at truncation, by singular values."""
    mat = pi_matrix(F, order, **jump_kwargs)
    svals = np.linalg.svd(mat, compute_uv=False)
    ambiguous = (svals > rank_tol / 10.0) & (svals < rank_tol * 10.0)
    if np.any(ambiguous):
        raise AmbiguousRankError(
            f"singular value {svals[ambiguous][0]:.3e} within 10x of rank_tol {rank_tol:.1e}"
        )
    rank = int(np.sum(svals >= rank_tol))
    dim_ker = mat.shape[1] - rank
    dim_coker = mat.shape[0] - rank
    return DetLineReport(
        dim_kernel=dim_ker,
        dim_cokernel=dim_coker,
        index=dim_ker - dim_coker,
        singular_values=tuple(float(s) for s in svals),
    )


def fiber_identity_residual(F, order: int, **jump_kwargs) -> float:
    """|| C_F pi I_F - Id || at truncation (the fiber identity)."""
    mat = pi_matrix(F, order, **jump_kwargs)
    return float(np.linalg.norm(mat[:, 1:] - np.eye(order), 2))


def hs_norm(M: OperatorMatrix) -> float:
    """Hilbert-Schmidt (Frobenius) norm of the truncated operator."""
    return M.frobenius_norm()


def shale_cocycle_det(A1: BlockDecomposition, A2: BlockDecomposition, cond_limit: float = 1e9) -> complex:
    """det(a_1 a_2 a_3^{-1}) = det(I - b_1 c_2 a_3^{-1}) for A_3 = A_1 A_2.

    a_3 is the minus->minus block of the product, a_1 a_2 + b_1 c_2; pure
    rotations have b_1 = 0 and give exactly 1.
    """
    if A1.order != A2.order:
        raise InvalidInputError("block decompositions must share the truncation order")
    a3 = A1.a.entries @ A2.a.entries + A1.b.entries @ A2.c
    cond = np.linalg.cond(a3)
    if not np.isfinite(cond) or cond > cond_limit:
        raise InvalidInputError(f"a_3 block is numerically singular (cond {cond:.2e})")
    if not np.any(A1.b.entries):
        return 1.0 + 0.0j
    n = A1.order
    return complex(np.linalg.det(np.eye(n) - A1.b.entries @ A2.c @ np.linalg.inv(a3)))


def wp_kahler_potential(F, order: int) -> float:
    """log det(I - Gr* Gr) at truncation; requires spectral radius < 1."""
    gr = grunsky_matrix_coeff(F, order).entries
    top = float(np.linalg.norm(gr, 2))
    if top >= 1.0:
        raise InvalidInputError(
            f"Grunsky spectral norm {top:.6f} >= 1 at truncation; potential undefined"
        )
    sign, logdet = np.linalg.slogdet(np.eye(order) - gr.conj().T @ gr)
    if sign.real <= 0:
        raise InvalidInputError("I - Gr* Gr is not positive definite")
    return float(logdet)


def _rigging_data(sphere_or_riggings):
    entries = getattr(sphere_or_riggings, "entries", None)
    if entries is None:
        return [(complex(p), np.asarray(c, complex)) for p, c in sphere_or_riggings]
    out = []
    for e in entries:
        if e.map is None:
            continue
        if e.at_infinity or is_inf(e.point):
            raise InvalidInputError("multi-Grunsky requires finite rigging centers")
        out.append((complex(e.point), np.asarray(e.map.coeffs, complex)))
    return out


def multi_grunsky(sphere_or_riggings, order: int) -> OperatorMatrix:
    """Block Grunsky matrix of n non-overlapping riggings.

    Diagonal blocks are the single-map Grunsky matrices in the local
    coordinates; block (i, j) comes from the mixed terms of
    log(f_i(z) - f_j(w)).  Accepts a RiggedSphere or a list of
    (center, taylor_coeffs) pairs.
    """
    riggings = _rigging_data(sphere_or_riggings)
    n = len(riggings)
    if n == 0:
        raise InvalidInputError("no rigging maps present")
    big = np.zeros((n * order, n * order), dtype=complex)
    msqrt = np.sqrt(np.arange(1, order + 1))
    w = np.outer(msqrt, msqrt)
    for i, (pi_, ci) in enumerate(riggings):
        for j, (pj_, cj) in enumerate(riggings):
            if j < i:
                continue
            if i == j:
                block = _weighted_block(series_log_2d(_pair_table(ci, ci, order, None), order), order)
            else:
                sep = pi_ - pj_
                if sep == 0:
                    raise InvalidInputError("rigging centers must be distinct")
                ell = series_log_2d(_pair_table(ci, -cj, order, sep), order)
                block = _GRUNSKY_SIGN * w * ell[1 : order + 1, 1 : order + 1]
            big[i * order : (i + 1) * order, j * order : (j + 1) * order] = block
            if j != i:
                big[j * order : (j + 1) * order, i * order : (i + 1) * order] = block.T
    return OperatorMatrix(big, "p-blocks", "q-blocks", order)


def _pair_table(ci, cj_signed, order, separation):
    """Series table of f_i(z) - f_j(w): diagonal uses the divided kernel."""
    s = np.zeros((order + 1, order + 1), dtype=complex)
    if separation is None:
        # (F(z) - F(w))/(z - w) with F = sum ci_k z^k
        for i in range(order + 1):
            for j in range(order + 1):
                k = i + j + 1
                if k <= len(ci):
                    s[i, j] = ci[k - 1]
        return s
    s[0, 0] = separation
    for k in range(1, min(len(ci), order) + 1):
        s[k, 0] += ci[k - 1]
    for k in range(1, min(len(cj_signed), order) + 1):
        s[0, k] += cj_signed[k - 1]
    return s
