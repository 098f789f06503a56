"""Function spaces on the unit circle.

Truncated Fourier series carry the H^{1/2} norm sqrt(|h_0|^2 + sum |n||h_n|^2),
split into Dirichlet-space series on the inside/outside disks (the constant
term lives on the plus side), and pair through the symplectic form
(g, h) = (1/2pi) int g dh = i sum n g_{-n} h_n.

Dirichlet energies are normalised by 1/pi so that energy(z^n) = |n|.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError

__all__ = [
    "FourierFunction",
    "DiskSeries",
    "h12_norm",
    "project",
    "dirichlet_energy",
    "symplectic_pairing",
]


def _as_mode_array(coeffs, order):
    c = np.zeros(2 * order + 1, dtype=complex)
    if isinstance(coeffs, dict):
        for n, v in coeffs.items():
            n = int(n)
            if abs(n) > order:
                raise InvalidInputError(f"mode {n} exceeds truncation order {order}")
            c[n + order] = v
    else:
        arr = np.asarray(coeffs, dtype=complex)
        if arr.shape != (2 * order + 1,):
            raise InvalidInputError(
                f"coefficient array must have length 2N+1={2 * order + 1}, got {arr.shape}"
            )
        c[:] = arr
    return c


@dataclass(frozen=True)
class FourierFunction:
    """Truncated series h(e^{i theta}) = sum_{|n|<=N} h_n e^{i n theta}."""

    coeffs: np.ndarray = field(repr=False)
    order: int

    def __init__(self, coeffs, order: int):
        if order < 0:
            raise InvalidInputError("truncation order must be >= 0")
        c = _as_mode_array(coeffs, order)
        if not np.all(np.isfinite(c)):
            raise InvalidInputError("non-finite Fourier coefficient")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "order", int(order))

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_modes(cls, modes: dict[int, complex]) -> "FourierFunction":
        order = max((abs(int(n)) for n in modes), default=0)
        return cls(modes, order)

    @classmethod
    def from_samples(cls, values, order: int | None = None) -> "FourierFunction":
        """Fit modes -N..N to equispaced samples over [0, 2pi) by FFT."""
        values = np.asarray(values, dtype=complex)
        m = len(values)
        fft = np.fft.fft(values) / m
        nmax = (m - 1) // 2 if order is None else order
        if 2 * nmax + 1 > m:
            raise InvalidInputError("not enough samples for the requested order")
        c = {n: fft[n % m] for n in range(-nmax, nmax + 1)}
        return cls(c, nmax)

    @classmethod
    def zero(cls, order: int = 0) -> "FourierFunction":
        return cls({}, order)

    # -- basic accessors ------------------------------------------------------

    def coeff(self, n: int) -> complex:
        if abs(n) > self.order:
            return 0.0 + 0.0j
        return complex(self.coeffs[n + self.order])

    @property
    def modes(self) -> np.ndarray:
        return np.arange(-self.order, self.order + 1)

    def mean(self) -> complex:
        return self.coeff(0)

    def evaluate(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        return np.exp(1j * np.outer(theta, self.modes)) @ self.coeffs

    def sample(self, m: int) -> np.ndarray:
        return self.evaluate(2.0 * np.pi * np.arange(m) / m)

    # -- algebra (binary ops take the max order and zero-fill) ----------------

    def _binary(self, other, op):
        order = max(self.order, other.order)
        a = FourierFunction(dict(zip(self.modes, self.coeffs)), order)
        b = FourierFunction(dict(zip(other.modes, other.coeffs)), order)
        return FourierFunction(op(a.coeffs, b.coeffs), order)

    def __add__(self, other):
        return self._binary(other, np.add)

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __mul__(self, scalar):
        return FourierFunction(self.coeffs * complex(scalar), self.order)

    __rmul__ = __mul__

    def conjugate(self) -> "FourierFunction":
        """Coefficients of conj(h): (h~)_n = conj(h_{-n})."""
        return FourierFunction(np.conj(self.coeffs[::-1]), self.order)

    def subtract_mean(self) -> "FourierFunction":
        c = self.coeffs.copy()
        c[self.order] = 0.0
        return FourierFunction(c, self.order)

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> str:
        entries = [
            [int(n), float(v.real), float(v.imag)]
            for n, v in zip(self.modes, self.coeffs)
            if v != 0
        ]
        return json.dumps({"N": self.order, "coeffs": entries})

    @classmethod
    def from_json(cls, text: str) -> "FourierFunction":
        data = json.loads(text)
        return cls({int(n): re + 1j * im for n, re, im in data["coeffs"]}, int(data["N"]))


@dataclass(frozen=True)
class DiskSeries:
    """One-sided piece of a FourierFunction.

    The plus side holds modes n >= 0 (the constant always lives here), the
    minus side holds n <= -1 and vanishes at infinity.
    """

    side: str
    coeffs: np.ndarray = field(repr=False)
    order: int

    def __init__(self, side: str, coeffs, order: int):
        if side not in ("plus", "minus"):
            raise InvalidInputError("side must be 'plus' or 'minus'")
        c = np.asarray(coeffs, dtype=complex)
        n_expected = order + 1 if side == "plus" else order
        if c.shape != (n_expected,):
            raise InvalidInputError(f"expected {n_expected} coefficients, got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise InvalidInputError("non-finite coefficient")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "side", side)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "order", int(order))

    @property
    def modes(self) -> np.ndarray:
        if self.side == "plus":
            return np.arange(0, self.order + 1)
        return np.arange(-self.order, 0)

    def coeff(self, n: int) -> complex:
        if self.side == "plus":
            return complex(self.coeffs[n]) if 0 <= n <= self.order else 0j
        return complex(self.coeffs[n + self.order]) if -self.order <= n <= -1 else 0j

    def as_fourier(self) -> FourierFunction:
        return FourierFunction(dict(zip(self.modes, self.coeffs)), self.order)

    def to_json(self) -> str:
        entries = [
            [int(n), float(v.real), float(v.imag)]
            for n, v in zip(self.modes, self.coeffs)
            if v != 0
        ]
        return json.dumps({"N": self.order, "side": self.side, "coeffs": entries})

    @classmethod
    def from_json(cls, text: str) -> "DiskSeries":
        data = json.loads(text)
        order = int(data["N"])
        side = data["side"]
        full = {int(n): re + 1j * im for n, re, im in data["coeffs"]}
        if side == "plus":
            c = [full.get(n, 0j) for n in range(0, order + 1)]
        else:
            c = [full.get(n, 0j) for n in range(-order, 0)]
        return cls(side, c, order)


# -- operations ----------------------------------------------------------------


def h12_norm(h: FourierFunction) -> float:
    """H^{1/2} norm sqrt(|h_0|^2 + sum_{n != 0} |n| |h_n|^2)."""
    n = h.modes
    weights = np.abs(n).astype(float)
    weights[h.order] = 1.0  # |h_0|^2 term
    return float(np.sqrt(np.sum(weights * np.abs(h.coeffs) ** 2)))


def project(h: FourierFunction, side: str) -> DiskSeries:
    """Projection onto the plus (n >= 0) or minus (n <= -1) Dirichlet series."""
    if side in ("+", "plus"):
        return DiskSeries("plus", h.coeffs[h.order:], h.order)
    if side in ("-", "minus"):
        return DiskSeries("minus", h.coeffs[: h.order], h.order)
    raise InvalidInputError(f"unknown side {side!r}")


def dirichlet_energy(s: DiskSeries) -> float:
    """Dirichlet energy sum |n| |a_n|^2 (area integral divided by pi)."""
    return float(np.sum(np.abs(s.modes) * np.abs(s.coeffs) ** 2))


def symplectic_pairing(g: FourierFunction, h: FourierFunction) -> complex:
    """(g, h) = (1/2pi) int g dh = i sum_n n g_{-n} h_n, means removed first."""
    order = max(g.order, h.order)
    gc = np.zeros(2 * order + 1, dtype=complex)
    hc = np.zeros(2 * order + 1, dtype=complex)
    gc[order - g.order : order + g.order + 1] = g.coeffs
    hc[order - h.order : order + h.order + 1] = h.coeffs
    gc[order] = 0.0
    hc[order] = 0.0
    n = np.arange(-order, order + 1)
    return complex(1j * np.sum(n * gc[::-1] * hc))
