"""Conformal welding of truncated-series maps.

weld() factors a circle homeomorphism h as G^{-1} o F with F a Taylor series
on the inside disk and G a Laurent series on the outside, normalised by
F(0) = 0, F'(0) = 1, G(infinity) = infinity.  The welding equation
F(e^{i theta}) = G(e^{i lift_h(theta)}) is affine in the unknown coefficients,
so each Newton step is a single least-squares solve over Fourier modes
-N..N; the loop is kept for seed independence and residual polishing.

exterior_map() computes the outside uniformiser of an analytic starlike
curve by Theodorsen conjugation iteration; it is algorithmically independent
of weld() and serves as its cross-check.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .circlemaps import CircleHomeo
from .errors import (
    InvalidInputError,
    InvalidResultError,
    NonConvergenceError,
    ResolutionError,
)

__all__ = [
    "PowerSeriesMap",
    "WeldingResult",
    "weld",
    "welding_residual",
    "quasicircle_samples",
    "map_diagnostics",
    "exterior_map",
    "CurveSamples",
    "MapDiagnostics",
]


@dataclass(frozen=True)
class PowerSeriesMap:
    """Truncated conformal map.

    disk_plus:  F(z) = sum_{k=1..N} a_k z^k, coeffs = [a_1, ..., a_N]
    disk_minus: G(w) = c_1 w + c_0 + sum_{k=1..N} c_{-k} w^{-k},
                coeffs = [c_1, c_0, c_{-1}, ..., c_{-N}]
    """

    kind: str
    coeffs: np.ndarray = field(repr=False)

    def __init__(self, kind: str, coeffs):
        if kind not in ("disk_plus", "disk_minus"):
            raise InvalidInputError(f"unknown map kind {kind!r}")
        c = np.asarray(coeffs, dtype=complex).copy()
        if c.ndim != 1 or len(c) == 0:
            raise InvalidInputError("coefficients must be a nonempty 1-d array")
        if not np.all(np.isfinite(c)):
            raise InvalidInputError("non-finite coefficient")
        if c[0] == 0:
            raise InvalidInputError("leading coefficient must be nonzero")
        c.flags.writeable = False
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "coeffs", c)

    # -- constructors ---------------------------------------------------------

    @classmethod
    def identity_plus(cls, order: int = 1) -> "PowerSeriesMap":
        c = np.zeros(order, complex)
        c[0] = 1.0
        return cls("disk_plus", c)

    @classmethod
    def identity_minus(cls, order: int = 1) -> "PowerSeriesMap":
        c = np.zeros(order + 2, complex)
        c[0] = 1.0
        return cls("disk_minus", c)

    @classmethod
    def from_taylor(cls, taylor_coeffs) -> "PowerSeriesMap":
        """disk_plus map from coefficients [a_1, a_2, ...]."""
        return cls("disk_plus", taylor_coeffs)

    # -- evaluation ------------------------------------------------------------

    @property
    def order(self) -> int:
        if self.kind == "disk_plus":
            return len(self.coeffs)
        return len(self.coeffs) - 2

    def coeff(self, k: int) -> complex:
        if self.kind == "disk_plus":
            return complex(self.coeffs[k - 1]) if 1 <= k <= len(self.coeffs) else 0j
        if k == 1:
            return complex(self.coeffs[0])
        if k == 0:
            return complex(self.coeffs[1])
        if -self.order <= k <= -1:
            return complex(self.coeffs[1 - k])
        return 0j

    def evaluate(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if self.kind == "disk_plus":
            acc = np.zeros_like(z)
            for a in self.coeffs[::-1]:
                acc = acc * z + a
            return acc * z
        u = 1.0 / z
        acc = np.zeros_like(z)
        for a in self.coeffs[:1:-1]:
            acc = acc * u + a
        return acc * u + self.coeffs[1] + self.coeffs[0] * z

    def derivative(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if self.kind == "disk_plus":
            acc = np.zeros_like(z)
            for k in range(len(self.coeffs), 0, -1):
                acc = acc * z + k * self.coeffs[k - 1]
            return acc
        u = 1.0 / z
        acc = np.zeros_like(z)
        for k in range(self.order, 0, -1):
            acc = acc * u - k * self.coeffs[k + 1]
        return acc * u * u + self.coeffs[0]

    def boundary_values(self, m: int, radius: float = 1.0) -> np.ndarray:
        theta = 2.0 * np.pi * np.arange(m) / m
        return self.evaluate(radius * np.exp(1j * theta))

    def inverse_at(self, zeta, newton_tol=1e-13, max_iter=60) -> np.ndarray:
        """Pointwise inverse by Newton; callers must stay in the univalent range."""
        zeta = np.asarray(zeta, dtype=complex)
        if self.kind == "disk_plus":
            w = zeta / self.coeffs[0]
        else:
            w = (zeta - self.coeffs[1]) / self.coeffs[0]
            w = np.where(np.abs(w) < 1e-12, 1e-12, w)
        for _ in range(max_iter):
            fw = self.evaluate(w)
            dw = (fw - zeta) / self.derivative(w)
            w = w - dw
            if np.max(np.abs(dw)) < newton_tol:
                return w
        raise ResolutionError("series inversion did not converge")

    # -- serialization -----------------------------------------------------------

    def to_json(self) -> str:
        if self.kind == "disk_plus":
            entries = [[k + 1, float(v.real), float(v.imag)] for k, v in enumerate(self.coeffs)]
        else:
            ks = [1, 0] + [-k for k in range(1, self.order + 1)]
            entries = [[k, float(v.real), float(v.imag)] for k, v in zip(ks, self.coeffs)]
        return json.dumps({"kind": self.kind, "coeffs": entries})

    @classmethod
    def from_json(cls, text: str) -> "PowerSeriesMap":
        data = json.loads(text)
        table = {int(k): re + 1j * im for k, re, im in data["coeffs"]}
        if data["kind"] == "disk_plus":
            order = max(table)
            return cls("disk_plus", [table.get(k, 0j) for k in range(1, order + 1)])
        order = max(-min(table), 0)
        c = [table.get(1, 0j), table.get(0, 0j)] + [table.get(-k, 0j) for k in range(1, order + 1)]
        return cls("disk_minus", c)


@dataclass(frozen=True)
class CurveSamples:
    """Closed polygonal sampling of a boundary curve F(r e^{i theta})."""

    points: np.ndarray
    params: np.ndarray
    radius: float
    closed: bool = True
    source: object = None

    def local_spacing(self) -> np.ndarray:
        nxt = np.roll(self.points, -1)
        return np.abs(nxt - self.points)

    def is_simple(self) -> bool:
        return _polygon_is_simple(self.points)

    def winding_number(self, z: complex) -> int:
        rel = self.points - z
        dphi = np.angle(np.roll(rel, -1) / rel)
        return int(np.rint(np.sum(dphi) / (2.0 * np.pi)))

    def min_distance(self, z) -> np.ndarray:
        z = np.atleast_1d(np.asarray(z, complex))
        return np.min(np.abs(z[:, None] - self.points[None, :]), axis=1)


def _polygon_is_simple(pts: np.ndarray) -> bool:
    """Pairwise segment-intersection test for the closed polygon pts."""
    m = len(pts)
    a = pts
    b = np.roll(pts, -1)
    # degenerate repeated vertices count as non-simple
    if np.min(np.abs(b - a)) < 1e-15 * np.max(np.abs(pts)):
        return False
    x1, y1 = a.real, a.imag
    x2, y2 = b.real, b.imag

    def orient(px, py, qx, qy, rx, ry):
        return (qx - px) * (ry - py) - (qy - py) * (rx - px)

    i = np.arange(m)
    ii, jj = np.meshgrid(i, i, indexing="ij")
    mask = jj > ii + 1
    mask &= ~((ii == 0) & (jj == m - 1))  # closing edge is adjacent to edge 0
    o1 = orient(x1[ii], y1[ii], x2[ii], y2[ii], x1[jj], y1[jj])
    o2 = orient(x1[ii], y1[ii], x2[ii], y2[ii], x2[jj], y2[jj])
    o3 = orient(x1[jj], y1[jj], x2[jj], y2[jj], x1[ii], y1[ii])
    o4 = orient(x1[jj], y1[jj], x2[jj], y2[jj], x2[ii], y2[ii])
    crossing = (o1 * o2 < 0) & (o3 * o4 < 0)
    return not bool(np.any(crossing & mask))


def quasicircle_samples(F: PowerSeriesMap, m: int, radius: float = 1.0) -> CurveSamples:
    """M boundary points F(r e^{2 pi i k / M}) with a simplicity check."""
    theta = 2.0 * np.pi * np.arange(m) / m
    pts = F.evaluate(radius * np.exp(1j * theta))
    samples = CurveSamples(points=pts, params=theta, radius=radius, source=F)
    if not samples.is_simple():
        raise InvalidResultError("boundary curve is not simple at this sampling")
    return samples


@dataclass(frozen=True)
class WeldingResult:
    F: PowerSeriesMap
    G: PowerSeriesMap
    residual: float
    iterations: int


def _fourier_modes(values: np.ndarray, order: int) -> np.ndarray:
    """Modes -order..order of equispaced samples."""
    m = len(values)
    fft = np.fft.fft(values) / m
    idx = np.arange(-order, order + 1) % m
    return fft[idx]


def weld(
    h: CircleHomeo,
    order: int,
    tol: float = 1e-8,
    grid: int | None = None,
    seed: np.ndarray | None = None,
    max_iter: int = 6,
    check_univalence: bool = True,
) -> WeldingResult:
    """Solve F(e^{i theta}) = G(e^{i lift_h(theta)}) for truncated F, G.

    Unknowns are (a_2..a_N, c_1, c_0, c_{-1}..c_{-N}); a_1 = 1 is pinned.
    Raises NonConvergenceError with the last residual if tol is not met.
    """
    n = int(order)
    if n < 1:
        raise InvalidInputError("order must be >= 1")
    if tol <= 0:
        raise InvalidInputError("tolerance must be positive")
    m = grid or max(8 * n, 256)
    theta = 2.0 * np.pi * np.arange(m) / m
    lam = h.lift(theta)
    e_lam = np.exp(1j * lam)

    nun = 2 * n + 1  # unknown count: (n-1) + 2 + n
    # columns of the affine residual map, as mode vectors -n..n
    cols = np.zeros((2 * n + 1, nun), dtype=complex)
    for k in range(2, n + 1):  # a_k columns are exact unit vectors
        cols[n + k, k - 2] = 1.0
    cols[:, n - 1] = -_fourier_modes(e_lam, n)  # c_1
    cols[n, n] = -1.0  # c_0
    for k in range(1, n + 1):
        cols[:, n + k] = -_fourier_modes(np.exp(-1j * k * lam), n)
    rhs = np.zeros(2 * n + 1, dtype=complex)
    rhs[n + 1] = 1.0  # modes of a_1 z with a_1 = 1

    x = np.zeros(nun, complex) if seed is None else np.asarray(seed, complex).copy()
    if seed is not None and x.shape != (nun,):
        raise InvalidInputError(f"seed must have length {nun}")
    iterations = 0
    sup_res = np.inf
    for iterations in range(1, max_iter + 1):
        res_modes = cols @ x + rhs
        dx, *_ = np.linalg.lstsq(cols, -res_modes, rcond=None)
        x = x + dx
        F, G = _unpack_weld(x, n)
        sup_res = welding_residual(F, G, h, grid=2 * m)
        if sup_res < tol:
            break
    if sup_res >= tol:
        raise NonConvergenceError(
            f"welding residual {sup_res:.3e} above tolerance {tol:.1e}",
            residual=sup_res,
            iterations=iterations,
        )
    if check_univalence:
        quasicircle_samples(F, max(8 * n, 256))
        quasicircle_samples(G, max(8 * n, 256))
    return WeldingResult(F=F, G=G, residual=sup_res, iterations=iterations)


def _unpack_weld(x: np.ndarray, n: int) -> tuple[PowerSeriesMap, PowerSeriesMap]:
    a = np.concatenate(([1.0 + 0j], x[: n - 1]))
    c = x[n - 1 :]
    return PowerSeriesMap("disk_plus", a), PowerSeriesMap("disk_minus", c)


def welding_residual(F: PowerSeriesMap, G: PowerSeriesMap, h: CircleHomeo, grid: int = 1024) -> float:
    """sup over the grid of |F(e^{i theta}) - G(e^{i lift_h(theta)})|."""
    theta = 2.0 * np.pi * np.arange(grid) / grid
    fv = F.evaluate(np.exp(1j * theta))
    gv = G.evaluate(np.exp(1j * h.lift(theta)))
    return float(np.max(np.abs(fv - gv)))


# -- pre-Schwarzian diagnostics ---------------------------------------------------


@dataclass(frozen=True)
class MapDiagnostics:
    a1inf_norm: float
    a12_norm: float
    fprime0: complex
    pre_schwarzian: np.ndarray = field(repr=False)


def pre_schwarzian_series(F: PowerSeriesMap, order: int) -> np.ndarray:
    """Taylor coefficients of f''/f' by formal division."""
    if F.kind != "disk_plus":
        raise InvalidInputError("pre-Schwarzian diagnostics expect a disk_plus map")
    from ._series import poly_div

    a = F.coeffs
    fp = np.array([(k + 1) * a[k] for k in range(len(a))], complex)
    fpp = np.array([(k + 1) * (k + 2) * a[k + 1] for k in range(len(a) - 1)], complex)
    if len(fpp) == 0:
        fpp = np.zeros(1, complex)
    return poly_div(fpp, fp, order)


def _pre_schwarzian_values(F: PowerSeriesMap, z: np.ndarray) -> np.ndarray:
    a = F.coeffs
    fp = np.zeros_like(z)
    fpp = np.zeros_like(z)
    for k in range(len(a), 0, -1):
        fp = fp * z + k * a[k - 1]
    for k in range(len(a), 1, -1):
        fpp = fpp * z + k * (k - 1) * a[k - 1]
    return fpp / fp


def map_diagnostics(F: PowerSeriesMap, n_radial: int = 64, n_angular: int = 256) -> MapDiagnostics:
    """A_1^infty and A_1^2 norms of f''/f' plus f'(0).

    a1inf_norm is the grid sup of (1 - |z|^2)|f''/f'|; a12_norm is the
    Gauss-Legendre estimate of (iint |f''/f'|^2 dA)^{1/2} with Lebesgue area.
    """
    if F.coeffs[0] == 0:
        raise InvalidInputError("f'(0) = 0: pre-Schwarzian breaks down")
    nodes, weights = np.polynomial.legendre.leggauss(n_radial)
    r = 0.5 * (nodes + 1.0)
    wr = 0.5 * weights
    theta = 2.0 * np.pi * np.arange(n_angular) / n_angular
    z = r[:, None] * np.exp(1j * theta)[None, :]
    vals = _pre_schwarzian_values(F, z)
    sup = float(np.max((1.0 - np.abs(z) ** 2) * np.abs(vals)))
    dtheta = 2.0 * np.pi / n_angular
    integral = float(np.sum(wr[:, None] * r[:, None] * np.abs(vals) ** 2) * dtheta)
    return MapDiagnostics(
        a1inf_norm=sup,
        a12_norm=float(np.sqrt(integral)),
        fprime0=complex(F.coeffs[0]),
        pre_schwarzian=pre_schwarzian_series(F, max(F.order, 8)),
    )


# -- Theodorsen exterior map ------------------------------------------------------


@dataclass(frozen=True)
class ExteriorMapResult:
    """Outside uniformiser of an analytic starlike curve.

    gmap sends the outside disk onto the curve exterior with
    gmap(inf) = inf and positive derivative there.  chi_of_phi tabulates
    arg(gmap(e^{i phi}) - center) on phi_grid, giving the boundary
    correspondence with the curve parameter.
    """

    gmap: PowerSeriesMap
    center: complex
    phi_grid: np.ndarray
    chi_of_phi: np.ndarray
    chi_of_theta: np.ndarray
    holomorphy_defect: float

    def parameter_homeo(self, n_modes: int = 48, grid: int | None = None) -> CircleHomeo:
        """Circle homeomorphism theta -> phi with gmap(e^{i phi}) = curve(theta)."""
        m = len(self.phi_grid)
        phi = _invert_monotone_periodic(self.phi_grid, self.chi_of_phi, self.chi_of_theta)
        return CircleHomeo.from_lift_samples(phi, n_modes=n_modes, grid_size=grid or m)


def _unwrap_angles(values: np.ndarray) -> np.ndarray:
    ang = np.unwrap(np.angle(values))
    return ang - 2.0 * np.pi * np.floor(ang[0] / (2.0 * np.pi))


class _MonotoneCircleFunction:
    """f(x) = x + periodic(x) sampled on a uniform grid; spectral evaluation."""

    def __init__(self, fvals_on_uniform_grid):
        vals = np.asarray(fvals_on_uniform_grid, float)
        m = len(vals)
        x = 2.0 * np.pi * np.arange(m) / m
        c = np.fft.fft(vals - x) / m
        ks = np.fft.fftfreq(m, d=1.0 / m)
        keep = np.abs(c) > 1e-16 * max(np.max(np.abs(c)), 1.0)
        keep[np.abs(ks) > m // 3] = False
        self._c = c[keep]
        self._k = ks[keep]

    def __call__(self, x):
        x = np.asarray(x, float)
        return x + np.real(np.exp(1j * np.multiply.outer(x, self._k)) @ self._c)

    def deriv(self, x):
        x = np.asarray(x, float)
        return 1.0 + np.real(np.exp(1j * np.multiply.outer(x, self._k)) @ (1j * self._k * self._c))

    def inverse(self, targets, tol=1e-13, max_iter=50):
        t = np.asarray(targets, float)
        x = t.astype(float).copy()
        for _ in range(max_iter):
            err = self(x) - t
            x = x - err / self.deriv(x)
            if np.max(np.abs(err)) < tol:
                return x
        raise ResolutionError("monotone circle-function inversion did not converge")


def _invert_monotone_periodic(xgrid, fvals, targets):
    """Solve f(x) = target for f monotone with f(x + 2pi) = f(x) + 2pi.

    fvals must sample f on the uniform grid xgrid = 2 pi j / m.
    """
    del xgrid  # the uniform grid is implicit in the sample count
    return _MonotoneCircleFunction(fvals).inverse(targets)


def exterior_map(
    F: PowerSeriesMap,
    center: complex = 0.0,
    grid: int = 2048,
    tol: float = 1e-13,
    max_iter: int = 400,
    boundary_radius: float = 1.0,
) -> ExteriorMapResult:
    """Exterior uniformiser of Gamma = F(boundary) by Theodorsen iteration.

    Requires Gamma to be starlike about `center`; raises ResolutionError
    otherwise or when the conjugation iteration stalls.
    """
    m = int(grid)
    theta = 2.0 * np.pi * np.arange(m) / m
    curve = F.evaluate(boundary_radius * np.exp(1j * theta)) - center
    chi_theta = _unwrap_angles(curve)
    dchi = np.diff(np.concatenate([chi_theta, [chi_theta[0] + 2.0 * np.pi]]))
    if np.min(dchi) <= 0:
        raise ResolutionError("curve is not starlike about the requested center")

    # log-radius as a Fourier series in the polar angle chi
    chi_uniform = 2.0 * np.pi * np.arange(m) / m
    theta_of_chi = _invert_monotone_periodic(theta, chi_theta, chi_uniform)
    logr_uniform = np.log(np.abs(F.evaluate(boundary_radius * np.exp(1j * theta_of_chi)) - center))
    rho_hat = np.fft.fft(logr_uniform) / m
    ks_all = np.fft.fftfreq(m, d=1.0 / m)
    keep = np.abs(rho_hat) > 1e-17 * max(1.0, float(np.max(np.abs(rho_hat))))
    keep &= np.abs(ks_all) <= m // 3
    rho_kept = rho_hat[keep]
    ks_kept = ks_all[keep]

    def log_radius(chi):
        return np.real(np.exp(1j * np.multiply.outer(chi, ks_kept)) @ rho_kept)

    conj_mult = 1j * np.sign(ks_all)  # exterior harmonic conjugation multiplier

    phi = theta
    chi = phi.copy()
    prev_delta = np.inf
    relax = 1.0
    for _ in range(max_iter):
        g = log_radius(chi)
        conj = np.real(np.fft.ifft(np.fft.fft(g) * conj_mult))
        chi_new = phi + conj
        delta = float(np.max(np.abs(chi_new - chi)))
        if delta > prev_delta:
            relax = 0.5
        chi = (1.0 - relax) * chi + relax * chi_new
        prev_delta = delta
        if delta < tol:
            break
    else:
        raise ResolutionError("Theodorsen iteration did not converge")

    bdry = center + np.exp(log_radius(chi) + 1j * chi)
    fft = np.fft.fft(bdry) / m
    tail = np.abs(fft[2 : m // 2])
    defect = float(np.max(tail)) if len(tail) else 0.0
    if defect > 1e-7:
        raise ResolutionError(f"exterior map boundary data not holomorphic (defect {defect:.2e})")
    order = m // 4
    c = np.concatenate(([fft[1], fft[0]], [fft[-k] for k in range(1, order + 1)]))
    gmap = PowerSeriesMap("disk_minus", c)
    return ExteriorMapResult(
        gmap=gmap,
        center=complex(center),
        phi_grid=theta,
        chi_of_phi=chi,
        chi_of_theta=chi_theta,
        holomorphy_defect=defect,
    )
