"""Truncated power-series utilities shared across modules."""

from __future__ import annotations

import numpy as np

from .errors import InvalidInputError

INF = complex(np.inf, 0.0)


def is_inf(z) -> bool:
    return not np.isfinite(complex(z))


def poly_mul(a, b, trunc):
    """Product of truncated Taylor series, keeping degrees 0..trunc."""
    out = np.convolve(np.asarray(a, complex), np.asarray(b, complex))
    return out[: trunc + 1]


def poly_div(num, den, trunc):
    """Quotient of truncated Taylor series; den[0] must be nonzero."""
    num = np.asarray(num, complex)
    den = np.asarray(den, complex)
    if len(den) == 0 or den[0] == 0:
        raise InvalidInputError("series division by a series vanishing at 0")
    q = np.zeros(trunc + 1, dtype=complex)
    for k in range(trunc + 1):
        acc = num[k] if k < len(num) else 0.0
        jmax = min(k, len(den) - 1)
        if jmax >= 1:
            acc -= np.dot(den[1 : jmax + 1], q[k - jmax : k][::-1])
        q[k] = acc / den[0]
    return q


def series_log_1d(s, trunc):
    """log of a truncated series with s[0] != 0 (principal branch at s[0])."""
    s = np.asarray(s, complex)
    if s[0] == 0:
        raise InvalidInputError("series log of a series vanishing at 0")
    # l' s = s'  solved degree by degree
    ell = np.zeros(trunc + 1, dtype=complex)
    ell[0] = np.log(s[0])
    sk = np.zeros(trunc + 1, dtype=complex)
    sk[: min(len(s), trunc + 1)] = s[: trunc + 1]
    for k in range(1, trunc + 1):
        acc = k * sk[k]
        for p in range(1, k):
            acc -= p * ell[p] * sk[k - p]
        ell[k] = acc / (k * sk[0])
    return ell


def series_log_2d(s, n):
    """log of a bivariate truncated series s[i, j] (z^i w^j), s[0,0] != 0.

    Returns the (n+1) x (n+1) coefficient table of log(s). Solved from
    s * dL/dz = ds/dz row by row; the z^0 row is a univariate log.
    """
    s = np.asarray(s, complex)
    if s[0, 0] == 0:
        raise InvalidInputError("bivariate series log with vanishing constant term")
    sm = np.zeros((n + 1, n + 1), dtype=complex)
    r = min(s.shape[0], n + 1)
    c = min(s.shape[1], n + 1)
    sm[:r, :c] = s[:r, :c]
    ell = np.zeros((n + 1, n + 1), dtype=complex)
    ell[0, :] = series_log_1d(sm[0, :], n)
    # coefficient of z^{m-1} w^j in s * L_z equals m * s[m, j]
    for m in range(1, n + 1):
        for j in range(n + 1):
            acc = m * sm[m, j]
            # subtract s[p, q] * (m - p) * ell[m - p, j - q], (p, q) != (0, 0)
            for p in range(0, m):
                mp = m - p
                row = ell[mp, : j + 1][::-1]  # ell[mp, j - q] for q = 0..j
                srow = sm[p, : j + 1]
                term = mp * np.dot(srow, row)
                if p == 0:
                    term -= mp * sm[0, 0] * ell[mp, j]
                acc -= term
            ell[m, j] = acc / (m * sm[0, 0])
    return ell


def taylor_from_samples(values, radius):
    """Taylor coefficients from equispaced samples on |z| = radius."""
    m = len(values)
    fft = np.fft.fft(np.asarray(values, complex)) / m
    k = np.arange(m)
    return fft / radius**k


class SeriesFraction:
    """Ratio num(z)/den(z) of truncated Taylor series.

    Used to push riggings through Moebius maps exactly: a map into the
    sphere with value num(0)/den(0), possibly infinity when den(0) = 0.
    """

    def __init__(self, num, den=(1.0,)):
        self.num = np.asarray(num, complex)
        self.den = np.asarray(den, complex)
        if np.allclose(self.den, 0):
            raise InvalidInputError("zero denominator series")

    @classmethod
    def from_point_and_series(cls, point, series):
        """Rigging z -> point + series(z); point may be INF, then 1/series."""
        series = np.asarray(series, complex)
        if is_inf(point):
            return cls(np.array([1.0 + 0j]), series)
        num = series.copy()
        num = np.concatenate(([num[0] + point], num[1:])) if len(num) else np.array([point])
        return cls(num, np.array([1.0 + 0j]))

    def value_at_zero(self):
        if self.is_at_infinity():
            return INF
        return complex(self.num[0] / self.den[0])

    def mobius(self, m) -> "SeriesFraction":
        """(a f + b)/(c f + d) for f = num/den."""
        a, b, c, d = (complex(x) for x in m)
        n = max(len(self.num), len(self.den))
        num = np.zeros(n, complex)
        den = np.zeros(n, complex)
        num[: len(self.num)] += a * self.num
        num[: len(self.den)] += b * self.den
        den[: len(self.num)] += c * self.num
        den[: len(self.den)] += d * self.den
        return SeriesFraction(num, den)

    def taylor(self, k):
        """First k+1 Taylor coefficients; requires den(0) != 0."""
        return poly_div(self.num, self.den, k)

    def is_at_infinity(self, rel_tol: float = 1e-9) -> bool:
        # transported points carry rounding noise, so "denominator vanishes
        # at 0" is decided relative to the fraction's coefficient scale
        scale = max(float(np.max(np.abs(self.num))), float(np.max(np.abs(self.den))))
        return abs(self.den[0]) <= rel_tol * scale


def mobius_point(m, z):
    """Apply (az+b)/(cz+d) on the extended plane."""
    a, b, c, d = (complex(x) for x in m)
    if is_inf(z):
        return INF if c == 0 else a / c
    z = complex(z)
    den = c * z + d
    if den == 0:
        return INF
    return (a * z + b) / den


def mobius_inverse(m):
    a, b, c, d = (complex(x) for x in m)
    return (d, -b, -c, a)


def mobius_three_points(q1, q2, q3):
    """Moebius map sending (q1, q2, q3) -> (0, 1, infinity)."""
    if is_inf(q1):
        # z -> (q2 - q3)/(z - q3)
        return (0.0, q2 - q3, 1.0, -q3)
    if is_inf(q2):
        return (1.0, -q1, 1.0, -q3)
    if is_inf(q3):
        den = q2 - q1
        return (1.0 / den, -q1 / den, 0.0, 1.0)
    return (q2 - q3, -q1 * (q2 - q3), q2 - q1, -q3 * (q2 - q1))
