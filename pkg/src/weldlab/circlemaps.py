"""Orientation-preserving circle homeomorphisms and their operators.

A CircleHomeo is stored through its lift theta + p(theta) with p a real
truncated Fourier series; monotonicity of the lift is checked on a grid,
not structurally guaranteed.  The composition operator
C^_phi h = h o phi - mean acts on zero-mean series in the weighted basis
u_n = e^{i n theta}/sqrt(|n|) and is assembled by quadrature.

The Beurling-Ahlfors extension is computed in the upper half-plane
(conjugating the circle map through M(w) = (w + i)/(w - i), which sends
the real line to the circle and i to infinity), with the averaging
integrals done by Gauss-Legendre quadrature and the complex dilatation
mu = dbar E / d E by centred finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError, ResolutionError
from .operators import BlockDecomposition, OperatorMatrix, block_decompose

__all__ = [
    "CircleHomeo",
    "compose",
    "invert",
    "qs_ratio",
    "comp_operator_matrix",
    "block_decompose",
    "BlockDecomposition",
    "beurling_ahlfors_mu",
    "wp_energy_estimate",
    "EnergyReport",
]


@dataclass(frozen=True)
class CircleHomeo:
    """Homeomorphism of S^1 via the lift theta -> theta + p(theta)."""

    cos_coeffs: np.ndarray = field(repr=False)  # a_0 .. a_K
    sin_coeffs: np.ndarray = field(repr=False)  # b_0 (= 0), b_1 .. b_K
    grid_size: int = 512

    def __init__(self, cos_coeffs, sin_coeffs, grid_size: int = 512):
        a = np.asarray(cos_coeffs, dtype=float).copy()
        b = np.asarray(sin_coeffs, dtype=float).copy()
        if a.ndim != 1 or b.shape != a.shape:
            raise InvalidInputError("cosine/sine coefficient arrays must match")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise InvalidInputError("non-finite lift coefficient")
        grid_size = int(max(grid_size, 8 * len(a), 64))
        a.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "cos_coeffs", a)
        object.__setattr__(self, "sin_coeffs", b)
        object.__setattr__(self, "grid_size", grid_size)
        theta = 2.0 * np.pi * np.arange(grid_size) / grid_size
        if np.min(self.lift_deriv(theta)) <= 0.0:
            raise InvalidInputError("lift is not monotone on the evaluation grid")

    # -- constructors -----------------------------------------------------------

    @classmethod
    def identity(cls) -> "CircleHomeo":
        return cls([0.0], [0.0])

    @classmethod
    def rotation(cls, alpha: float) -> "CircleHomeo":
        return cls([float(alpha)], [0.0])

    @classmethod
    def from_modes(cls, cos_modes: dict[int, float], sin_modes: dict[int, float], grid_size: int = 512):
        kmax = max([0, *cos_modes, *sin_modes])
        a = np.zeros(kmax + 1)
        b = np.zeros(kmax + 1)
        for k, v in cos_modes.items():
            a[k] = v
        for k, v in sin_modes.items():
            b[k] = v
        return cls(a, b, grid_size)

    @classmethod
    def from_lift_samples(
        cls,
        lift_values,
        n_modes: int | None = None,
        grid_size: int | None = None,
        trim: float = 1e-14,
    ) -> "CircleHomeo":
        """Fit p = lift - theta on a uniform grid by FFT.

        With n_modes=None the mode budget is m//3, then trailing modes below
        trim (relative to the largest) are dropped.
        """
        vals = np.asarray(lift_values, dtype=float)
        m = len(vals)
        theta = 2.0 * np.pi * np.arange(m) / m
        p = vals - theta
        c = np.fft.fft(p) / m
        kmax = min(n_modes if n_modes is not None else m // 3, m // 2 - 1)
        a = np.zeros(kmax + 1)
        b = np.zeros(kmax + 1)
        a[0] = c[0].real
        a[1:] = 2.0 * c[1 : kmax + 1].real
        b[1:] = -2.0 * c[1 : kmax + 1].imag
        if n_modes is None and kmax >= 1:
            size = np.abs(a) + np.abs(b)
            floor = trim * max(float(np.max(size)), 1.0)
            keep = np.nonzero(size > floor)[0]
            last = int(keep[-1]) if len(keep) else 0
            a, b = a[: last + 1], b[: last + 1]
        return cls(a, b, grid_size or m)

    # -- evaluation ---------------------------------------------------------------

    @property
    def n_modes(self) -> int:
        return len(self.cos_coeffs) - 1

    def displacement(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        k = np.arange(len(self.cos_coeffs))
        kt = np.multiply.outer(theta, k)
        return np.cos(kt) @ self.cos_coeffs + np.sin(kt) @ self.sin_coeffs

    def lift(self, theta) -> np.ndarray:
        return np.asarray(theta, dtype=float) + self.displacement(theta)

    def lift_deriv(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        k = np.arange(len(self.cos_coeffs))
        kt = np.multiply.outer(theta, k)
        return 1.0 + (-np.sin(kt) * k) @ self.cos_coeffs + (np.cos(kt) * k) @ self.sin_coeffs

    def apply(self, z) -> np.ndarray:
        theta = np.angle(np.asarray(z, dtype=complex))
        return np.exp(1j * self.lift(theta))

    def conjugate_by_reciprocal(self) -> "CircleHomeo":
        """J o phi o J with J(z) = 1/z; lift displacement p -> -p(-theta)."""
        a = -self.cos_coeffs
        b = self.sin_coeffs.copy()
        return CircleHomeo(a, b, self.grid_size)

    # -- serialization ---------------------------------------------------------------

    def to_json(self) -> str:
        import json

        entries = [
            [int(k), float(self.cos_coeffs[k]), float(self.sin_coeffs[k])]
            for k in range(len(self.cos_coeffs))
        ]
        return json.dumps({"lift_coeffs": entries, "grid": self.grid_size})

    @classmethod
    def from_json(cls, text: str) -> "CircleHomeo":
        import json

        data = json.loads(text)
        kmax = max(int(k) for k, _, _ in data["lift_coeffs"])
        a = np.zeros(kmax + 1)
        b = np.zeros(kmax + 1)
        for k, ak, bk in data["lift_coeffs"]:
            a[int(k)] = ak
            b[int(k)] = bk
        return cls(a, b, int(data["grid"]))


def compose(phi: CircleHomeo, psi: CircleHomeo, n_modes: int | None = None) -> CircleHomeo:
    """phi o psi, re-projected to a truncated Fourier lift."""
    m = max(phi.grid_size, psi.grid_size)
    theta = 2.0 * np.pi * np.arange(m) / m
    lift_vals = phi.lift(psi.lift(theta))
    try:
        return CircleHomeo.from_lift_samples(lift_vals, n_modes=n_modes, grid_size=m)
    except InvalidInputError as exc:
        raise ResolutionError(
            "composition lost monotonicity after re-projection; raise grid or truncation"
        ) from exc


def invert(phi: CircleHomeo, n_modes: int | None = None, tol: float = 1e-13) -> CircleHomeo:
    """Group inverse by per-node monotone root finding, then Fourier fit."""
    m = phi.grid_size
    target = 2.0 * np.pi * np.arange(m) / m
    x = target - phi.displacement(target)  # first-order guess
    converged = False
    for _ in range(80):
        f = phi.lift(x) - target
        x = x - f / phi.lift_deriv(x)
        if np.max(np.abs(f)) < tol:
            converged = True
            break
    if not converged:
        # bisection fallback on the lift (monotone, equivariant)
        lo = target - 2.0 * np.pi
        hi = target + 2.0 * np.pi
        for _ in range(200):
            x = 0.5 * (lo + hi)
            f = phi.lift(x) - target
            lo = np.where(f < 0, x, lo)
            hi = np.where(f < 0, hi, x)
        if np.max(np.abs(phi.lift(x) - target)) > 1e3 * tol:
            raise ResolutionError("inverse root finding did not converge")
    try:
        return CircleHomeo.from_lift_samples(x, n_modes=n_modes, grid_size=m)
    except InvalidInputError as exc:
        raise ResolutionError("inverse lost monotonicity after re-projection") from exc


def qs_ratio(phi: CircleHomeo, n_alpha: int = 64, betas=None) -> float:
    """Grid lower bound for the quasisymmetry constant.

    max over the (alpha, beta) grid of max(rho, 1/rho) with
    rho = |phi(e^{i(a+b)}) - phi(e^{ia})| / |phi(e^{ia}) - phi(e^{i(a-b)})|.
    """
    alphas = 2.0 * np.pi * np.arange(n_alpha) / n_alpha
    if betas is None:
        betas = np.linspace(0.05, np.pi - 0.05, 25)
    betas = np.asarray(betas, dtype=float)
    if np.any(betas <= 0) or np.any(betas >= 2.0 * np.pi):
        raise InvalidInputError("beta grid must stay inside (0, 2 pi)")
    A, B = np.meshgrid(alphas, betas, indexing="ij")
    num = np.abs(phi.apply(np.exp(1j * (A + B))) - phi.apply(np.exp(1j * A)))
    den = np.abs(phi.apply(np.exp(1j * A)) - phi.apply(np.exp(1j * (A - B))))
    if np.min(den) < 1e-13 or np.min(num) < 1e-13:
        raise ResolutionError("degenerate symmetric difference on the grid")
    rho = num / den
    return float(np.max(np.maximum(rho, 1.0 / rho)))


def comp_operator_matrix(phi: CircleHomeo, order: int, grid: int | None = None) -> OperatorMatrix:
    """Matrix of C^_phi on zero-mean series in the weighted basis u_n.

    Entries M[m, n] = sqrt(|m|/|n|) (1/2pi) int e^{i(n lift(t) - m t)} dt,
    computed by FFT on a grid of at least 8 * order points.
    """
    if order < 1:
        raise InvalidInputError("order must be >= 1")
    m_grid = grid or max(8 * order, 256)
    theta = 2.0 * np.pi * np.arange(m_grid) / m_grid
    lam = phi.lift(theta)
    modes = np.concatenate([np.arange(-order, 0), np.arange(1, order + 1)])
    cols = np.exp(1j * np.outer(modes, lam))  # (2N, grid)
    fft = np.fft.fft(cols, axis=1) / m_grid
    entries = np.empty((2 * order, 2 * order), dtype=complex)
    row_idx = modes % m_grid
    weights = np.sqrt(np.abs(modes))
    for j, _ in enumerate(modes):
        entries[:, j] = fft[j, row_idx] * weights / weights[j]
    return OperatorMatrix(entries, "u", "u", order)


# -- Beurling-Ahlfors extension ------------------------------------------------------


def _half_plane_boundary_map(phi: CircleHomeo):
    """Conjugated boundary homeomorphism psi of the real line.

    phi is first rotated so that 1 is fixed; rotations are conformal and do
    not change the dilatation.  With alpha(x) = 2 * atan2(1, x) in (0, 2pi),
    psi(x) = cot(lift(alpha(x)) / 2).
    """
    beta = float(phi.lift(0.0))

    def psi(x):
        x = np.asarray(x, dtype=float)
        alpha = 2.0 * np.arctan2(1.0, x)
        lifted = phi.lift(alpha) - beta
        return 1.0 / np.tan(0.5 * lifted)

    return psi


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


def _ba_extension(psi, w: np.ndarray) -> np.ndarray:
    """E(x + iy) = (alpha + beta)/2 + i (alpha - beta) with interval averages."""
    x = w.real
    y = w.imag
    t = 0.5 * (_GL_NODES + 1.0)  # nodes on (0, 1)
    xt_plus = x[..., None] + np.multiply.outer(y, t)
    xt_minus = x[..., None] - np.multiply.outer(y, t)
    avg_plus = np.tensordot(psi(xt_plus), _GL_WEIGHTS, axes=([-1], [0])) * 0.5
    avg_minus = np.tensordot(psi(xt_minus), _GL_WEIGHTS, axes=([-1], [0])) * 0.5
    return 0.5 * (avg_plus + avg_minus) + 1j * (avg_plus - avg_minus)


def _ba_mu_half_plane(psi, w: np.ndarray, fd_step: float = 1e-6) -> np.ndarray:
    delta = np.minimum(fd_step * (1.0 + np.abs(w)), 0.25 * w.imag)
    ex = (_ba_extension(psi, w + delta) - _ba_extension(psi, w - delta)) / (2.0 * delta)
    ey = (_ba_extension(psi, w + 1j * delta) - _ba_extension(psi, w - 1j * delta)) / (2.0 * delta)
    dbar = 0.5 * (ex + 1j * ey)
    d = 0.5 * (ex - 1j * ey)
    return dbar / d


def beurling_ahlfors_mu(phi: CircleHomeo, zeta, fd_step: float = 1e-6) -> np.ndarray:
    """Complex dilatation of the Beurling-Ahlfors extension of phi on |zeta| > 1."""
    zeta_arr = np.atleast_1d(np.asarray(zeta, dtype=complex))
    if np.any(np.abs(zeta_arr) <= 1.0):
        raise InvalidInputError("evaluation points must satisfy |zeta| > 1")
    psi = _half_plane_boundary_map(phi)
    w = 1j * (zeta_arr + 1.0) / (zeta_arr - 1.0)  # M^{-1}: exterior disk -> upper half plane
    mu_h = _ba_mu_half_plane(psi, w, fd_step=fd_step)
    q = -2j / (zeta_arr - 1.0) ** 2  # (M^{-1})'
    mu = mu_h * np.conj(q) / q
    if np.any(np.abs(mu) >= 1.0):
        raise ResolutionError("computed |mu| >= 1; refine the finite-difference step")
    return mu if np.ndim(zeta) else complex(mu[0])


@dataclass(frozen=True)
class EnergyReport:
    estimates: tuple[float, ...]
    rel_changes: tuple[float, ...]
    growing: bool


def wp_energy_estimate(
    phi: CircleHomeo,
    levels: tuple[int, ...] = (0, 1),
    base_radial: int = 24,
    base_angular: int = 48,
) -> EnergyReport:
    """Quadrature estimate of iint_{|zeta|>1} |mu|^2 / (1 - |zeta|^2)^2 dA.

    Substituting zeta = e^{i t} / s maps the exterior disk to 0 < s < 1 with
    weight s / (1 - s^2)^2.  Each refinement level doubles both grids and
    pushes the radial window closer to the circle, so divergent (non WP)
    energies show up as monotone growth of the estimates.
    """
    psi = _half_plane_boundary_map(phi)
    estimates = []
    for lv in levels:
        n_s = base_radial * 2**lv
        n_t = base_angular * 2**lv
        s_hi = 1.0 - 2.0 ** (-(lv + 5))
        s = s_hi * (np.arange(n_s) + 0.5) / n_s
        t = 2.0 * np.pi * (np.arange(n_t) + 0.5) / n_t
        zeta = np.exp(1j * t)[None, :] / s[:, None]
        w = 1j * (zeta + 1.0) / (zeta - 1.0)
        mu = np.abs(_ba_mu_half_plane(psi, w))
        weight = s / (1.0 - s**2) ** 2
        integrand = (mu**2) * weight[:, None]
        estimates.append(float(np.sum(integrand) * (s_hi / n_s) * (2.0 * np.pi / n_t)))
    rel = []
    for prev, cur in zip(estimates, estimates[1:]):
        scale = max(abs(cur), 1e-300)
        rel.append(abs(cur - prev) / scale)
    growing = all(b > a * 1.02 for a, b in zip(estimates, estimates[1:])) and estimates[-1] > 0
    return EnergyReport(estimates=tuple(estimates), rel_changes=tuple(rel), growing=growing)
