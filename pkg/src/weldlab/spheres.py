"""Genus-zero rigged spheres, cap sewing, and sewing along borders.

A sphere entry pairs a point with an optional series map:

* border entries describe a removed cap, the image of the disk under
  z -> p + f(z) (or z -> 1/g(z) for caps containing infinity);
* puncture entries carry a local rigging with f(0) = p;
* marked entries are bare points.

Sewing two pieces along borders i, j glues boundary parameters through
J(z) = 1/z.  Each piece is uniformised from the outside disk (Theodorsen
for finite caps, exactly for reciprocal-linear caps at infinity), the
transition circle map is welded, and both pieces are pushed into one
sphere through the welding maps: the left piece through G o u1^{-1}, the
right piece through F o J o u2^{-1}.  The seam F(S^1) is kept as curve
samples for downstream jump tests.

Moduli invariants quotient by the sphere's Moebius group: cross-ratios of
the puncture/marked points after sending the first three to (0, 1, inf),
plus Taylor jets of the puncture riggings in the normalised coordinate.
Border-cap centers are chart bookkeeping, not moduli data, and are
excluded.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ._series import (
    INF,
    SeriesFraction,
    is_inf,
    mobius_point,
    mobius_three_points,
    poly_div,
    taylor_from_samples,
)
from .circlemaps import CircleHomeo, compose, invert
from .errors import InvalidInputError, InvalidResultError
from .welding import CurveSamples, PowerSeriesMap, WeldingResult, exterior_map, quasicircle_samples, weld

__all__ = [
    "SphereEntry",
    "RiggedSphere",
    "ModuliInvariants",
    "moduli_invariants",
    "apply_mobius",
    "sew_caps",
    "cut_caps",
    "sew_two",
    "SewResult",
    "holomorphy_probe",
    "HolomorphyReport",
    "standard_cap",
]


@dataclass(frozen=True)
class SphereEntry:
    point: complex
    kind: str  # "border" | "puncture" | "marked"
    map: PowerSeriesMap | None = None
    at_infinity: bool = False

    def __post_init__(self):
        if self.kind not in ("border", "puncture", "marked"):
            raise InvalidInputError(f"unknown entry kind {self.kind!r}")
        if self.kind != "marked" and self.map is None:
            raise InvalidInputError(f"{self.kind} entry requires a map")
        if self.map is not None and self.map.kind != "disk_plus":
            raise InvalidInputError("entry maps are disk_plus series")
        if self.at_infinity and not is_inf(self.point):
            raise InvalidInputError("at_infinity entries must sit at the point infinity")
        if not self.at_infinity and is_inf(self.point) and self.map is not None:
            raise InvalidInputError("a map at infinity must set at_infinity")

    def disk_boundary(self, m: int = 256) -> np.ndarray:
        """Samples of the rigging-disk boundary image."""
        if self.map is None:
            raise InvalidInputError("marked point has no rigging disk")
        z = np.exp(2j * np.pi * np.arange(m) / m)
        vals = self.map.evaluate(z)
        if self.at_infinity:
            return 1.0 / vals
        return self.point + vals

    def fraction(self) -> SeriesFraction:
        """The rigging as a sphere-valued series fraction."""
        if self.map is None:
            raise InvalidInputError("marked point has no rigging map")
        series = np.concatenate([[0.0 + 0j], self.map.coeffs])
        return SeriesFraction.from_point_and_series(self.point if not self.at_infinity else INF, series)


@dataclass(frozen=True)
class RiggedSphere:
    entries: tuple[SphereEntry, ...]
    model: str  # "border" | "puncture"

    def __init__(self, entries, model: str, validate: bool = True):
        if model not in ("border", "puncture"):
            raise InvalidInputError(f"unknown model {model!r}")
        entries = tuple(entries)
        if not entries:
            raise InvalidInputError("a rigged sphere needs at least one entry")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "model", model)
        if validate:
            self._validate()

    def _validate(self):
        pts = [e.point for e in self.entries]
        for a in range(len(pts)):
            for b in range(a + 1, len(pts)):
                if is_inf(pts[a]) and is_inf(pts[b]):
                    raise InvalidInputError("entry points must be pairwise distinct")
                if not is_inf(pts[a]) and not is_inf(pts[b]) and pts[a] == pts[b]:
                    raise InvalidInputError("entry points must be pairwise distinct")
        # Disk images must not overlap: every other center stays strictly
        # outside each rigging disk (winding test).  Tangential contact of
        # closures, as along a sewing seam, is allowed.
        rigged = [e for e in self.entries if e.map is not None]
        curves = [e.disk_boundary() for e in rigged]
        for a in range(len(rigged)):
            for b in range(len(rigged)):
                if a == b or is_inf(rigged[b].point):
                    continue
                rel = curves[a] - rigged[b].point
                if np.min(np.abs(rel)) < 1e-12:
                    raise InvalidInputError("an entry point lies on another rigging boundary")
                wind = abs(int(np.rint(np.sum(np.angle(np.roll(rel, -1) / rel)) / (2 * np.pi))))
                expected = 1 if rigged[a].at_infinity else 0
                if wind != expected:
                    raise InvalidInputError("rigging disk closures overlap")

    def borders(self) -> list[int]:
        return [k for k, e in enumerate(self.entries) if e.kind == "border"]

    def punctures(self) -> list[int]:
        return [k for k, e in enumerate(self.entries) if e.kind != "border"]

    # -- serialization ----------------------------------------------------------

    def to_json(self) -> str:
        punctures = []
        riggings = []
        for e in self.entries:
            punctures.append("inf" if is_inf(e.point) else [float(e.point.real), float(e.point.imag)])
            if e.map is None:
                riggings.append(None)
            else:
                riggings.append(
                    {
                        "entry": e.kind,
                        "reciprocal": bool(e.at_infinity),
                        "coeffs": [[k + 1, float(v.real), float(v.imag)] for k, v in enumerate(e.map.coeffs)],
                    }
                )
        return json.dumps({"punctures": punctures, "riggings": riggings, "model": self.model})

    @classmethod
    def from_json(cls, text: str) -> "RiggedSphere":
        data = json.loads(text)
        entries = []
        for p, r in zip(data["punctures"], data["riggings"]):
            point = INF if p == "inf" else complex(p[0], p[1])
            if r is None:
                entries.append(SphereEntry(point, "marked"))
                continue
            order = max(int(k) for k, _, _ in r["coeffs"])
            c = np.zeros(order, complex)
            for k, re, im in r["coeffs"]:
                c[int(k) - 1] = re + 1j * im
            entries.append(
                SphereEntry(point, r["entry"], PowerSeriesMap("disk_plus", c), bool(r.get("reciprocal", False)))
            )
        return cls(entries, data["model"])


def standard_cap() -> RiggedSphere:
    """The punctured closed disk with boundary parametrised by z -> 1/z."""
    return RiggedSphere(
        [
            SphereEntry(INF, "border", PowerSeriesMap.identity_plus(), at_infinity=True),
            SphereEntry(0.0, "puncture", PowerSeriesMap.identity_plus()),
        ],
        "border",
    )


# -- the E map between the border and puncture models --------------------------------


def sew_caps(sphere: RiggedSphere) -> RiggedSphere:
    """Sew standard caps onto all borders: every border becomes a rigged
    puncture with identical series data (bit-exact coordinate bookkeeping)."""
    if sphere.model != "border":
        raise InvalidInputError("sew_caps expects a border-model sphere")
    out = [
        SphereEntry(e.point, "puncture" if e.kind == "border" else e.kind, e.map, e.at_infinity)
        for e in sphere.entries
    ]
    return RiggedSphere(out, "puncture", validate=False)


def cut_caps(sphere: RiggedSphere) -> RiggedSphere:
    """Inverse of sew_caps: cut every rigged puncture back out along its disk."""
    if sphere.model != "puncture":
        raise InvalidInputError("cut_caps expects a puncture-model sphere")
    out = [
        SphereEntry(e.point, "border" if e.kind == "puncture" and e.map is not None else e.kind, e.map, e.at_infinity)
        for e in sphere.entries
    ]
    return RiggedSphere(out, "border", validate=False)


# -- moduli invariants -----------------------------------------------------------------


@dataclass(frozen=True)
class ModuliInvariants:
    cross_ratios: tuple[complex, ...]
    rigging_jets: tuple[tuple[str, tuple[complex, ...]], ...]

    def distance(self, other: "ModuliInvariants") -> float:
        if len(self.cross_ratios) != len(other.cross_ratios) or len(self.rigging_jets) != len(other.rigging_jets):
            return float("inf")
        d = 0.0
        for a, b in zip(self.cross_ratios, other.cross_ratios):
            d = max(d, abs(a - b))
        for (ca, ja), (cb, jb) in zip(self.rigging_jets, other.rigging_jets):
            if ca != cb or len(ja) != len(jb):
                return float("inf")
            for x, y in zip(ja, jb):
                d = max(d, abs(x - y))
        return d


def _normalising_mobius(points: list[complex], jet_anchor: SeriesFraction | None):
    if len(points) >= 3:
        return mobius_three_points(points[0], points[1], points[2])
    if len(points) == 2:
        m = (1.0, -points[0], 1.0, -points[1]) if not is_inf(points[1]) else (1.0, -points[0], 0.0, 1.0)
        if is_inf(points[0]):
            m = (0.0, 1.0, 1.0, -points[1])
        if jet_anchor is not None:
            lead = jet_anchor.mobius(m)
            a1 = _leading_jet(lead)
            if a1 != 0:
                m = (m[0] / a1, m[1] / a1, m[2], m[3])
        return m
    # single point: translate to 0 and scale the anchor jet to 1
    p = points[0]
    m = (0.0, 1.0, 1.0, -p) if is_inf(p) else (1.0, -p, 0.0, 1.0)
    if jet_anchor is not None:
        lead = jet_anchor.mobius(m)
        a1 = _leading_jet(lead)
        if a1 != 0:
            m = (m[0] / a1, m[1] / a1, m[2], m[3])
    return m


def _leading_jet(frac: SeriesFraction) -> complex:
    if frac.is_at_infinity():
        frac = frac.mobius((0.0, 1.0, 1.0, 0.0))
    t = frac.taylor(1)
    return complex(t[1])


def moduli_invariants(sphere: RiggedSphere, jet_order: int = 6) -> ModuliInvariants:
    """Cross-ratios and rigging jets of the puncture data, Moebius-normalised.

    The first three puncture/marked points go to (0, 1, infinity); with
    fewer than three, the leftover scale is pinned by the first rigging's
    unit leading coefficient.  Jets of an entry landing at infinity are
    recorded in the reciprocal chart (flagged per entry).
    """
    idx = sphere.punctures()
    if not idx:
        raise InvalidInputError("no puncture data to build invariants from")
    points = [sphere.entries[k].point for k in idx]
    anchor = None
    for k in idx:
        if sphere.entries[k].map is not None:
            anchor = sphere.entries[k].fraction()
            break
    m = _normalising_mobius(points, anchor)
    cross = tuple(mobius_point(m, p) for p in points[3:])
    jets = []
    for k in idx:
        e = sphere.entries[k]
        if e.map is None:
            continue
        frac = e.fraction().mobius(m)
        if frac.is_at_infinity():
            frac = frac.mobius((0.0, 1.0, 1.0, 0.0))
            chart = "reciprocal"
        else:
            chart = "standard"
        tay = frac.taylor(jet_order)
        jets.append((chart, tuple(complex(v) for v in tay[1:])))
    return ModuliInvariants(cross_ratios=cross, rigging_jets=tuple(jets))


def apply_mobius(sphere: RiggedSphere, m, order: int | None = None) -> RiggedSphere:
    """Push all sphere data through a Moebius map of the sphere coordinate."""
    out = []
    for e in sphere.entries:
        new_point = mobius_point(m, e.point)
        if e.map is None:
            out.append(SphereEntry(new_point, e.kind))
            continue
        frac = e.fraction().mobius(m)
        k = order or max(len(e.map.coeffs) + 8, 16)
        if frac.is_at_infinity():
            rec = frac.mobius((0.0, 1.0, 1.0, 0.0)).taylor(k)
            out.append(SphereEntry(INF, e.kind, PowerSeriesMap("disk_plus", rec[1:]), True))
        else:
            tay = frac.taylor(k)
            out.append(SphereEntry(complex(tay[0]), e.kind, PowerSeriesMap("disk_plus", tay[1:]), False))
    return RiggedSphere(out, sphere.model)


# -- sewing two pieces -----------------------------------------------------------------


class _CapUniformizer:
    """Conformal map of the outside disk onto the complement of a cap."""

    def __init__(self, entry: SphereEntry):
        if entry.kind != "border":
            raise InvalidInputError("sewing requires border entries")
        self.entry = entry
        if entry.at_infinity:
            c = entry.map.coeffs
            if len(c) > 1 and np.max(np.abs(c[1:])) > 0:
                raise InvalidInputError("caps at infinity must be reciprocal-linear, map 1/(c z)")
            self._c = complex(c[0])
            self.correspondence = CircleHomeo.identity()
        else:
            ext = exterior_map(entry.map, center=0.0)
            self._ext = ext
            self.correspondence = ext.parameter_homeo()

    def inverse(self, zeta):
        """u^{-1} on the cap complement; INF-aware for scalars."""
        if self.entry.at_infinity:
            # u(w) = 1/(c w): D^- onto {|zeta| < 1/|c|}
            if np.ndim(zeta) == 0:
                z = complex(zeta)
                if is_inf(z):
                    raise InvalidInputError("infinity lies inside a cap at infinity")
                if z == 0:
                    return INF
            return 1.0 / (self._c * np.asarray(zeta, complex))
        if np.ndim(zeta) == 0 and is_inf(zeta):
            return INF  # Theodorsen maps are normalised with u(inf) = inf
        return self._ext.gmap.inverse_at(np.asarray(zeta, complex) - self.entry.point)


def _transport_entry(entry: SphereEntry, push, order: int) -> SphereEntry:
    """Push an entry through an analytic realisation map by resampling."""
    new_point = push(entry.point)
    if entry.map is None:
        return SphereEntry(new_point, entry.kind)
    msamp = 512
    z = np.exp(2j * np.pi * np.arange(msamp) / msamp)
    vals = entry.map.evaluate(z)
    source_pts = (1.0 / vals) if entry.at_infinity else (entry.point + vals)
    pushed = push(source_pts)
    if is_inf(new_point):
        tay = taylor_from_samples(1.0 / pushed, 1.0)[: order + 1]
        if abs(tay[0]) > 1e-9:
            raise InvalidResultError("transported rigging does not stay centered at infinity")
        return SphereEntry(INF, entry.kind, PowerSeriesMap("disk_plus", tay[1:]), True)
    tay = taylor_from_samples(pushed, 1.0)[: order + 1]
    if abs(tay[0] - new_point) > 1e-8 * max(1.0, abs(new_point)):
        raise InvalidResultError("transported rigging center drifted")
    return SphereEntry(new_point, entry.kind, PowerSeriesMap("disk_plus", tay[1:]), False)


@dataclass(frozen=True)
class SewResult:
    sphere: RiggedSphere
    invariants: ModuliInvariants
    seam: CurveSamples
    welding: WeldingResult
    left_realized: RiggedSphere
    right_realized: RiggedSphere


def sew_two(
    left: RiggedSphere,
    i: int,
    right: RiggedSphere,
    j: int,
    order: int = 32,
    tol: float = 1e-9,
    transported_order: int = 48,
    jet_order: int = 6,
) -> SewResult:
    """Sew border i of `left` to border j of `right` through J(z) = 1/z.

    Returns the glued sphere with all remaining entries transported, its
    moduli invariants, the seam as curve samples, and the two realised
    pieces (each keeping the seam as a border entry) for round-trip checks.
    """
    if i not in left.borders() or j not in right.borders():
        raise InvalidInputError("sew_two needs border indices on both pieces")
    u1 = _CapUniformizer(left.entries[i])
    u2 = _CapUniformizer(right.entries[j])
    sigma1 = u1.correspondence
    sigma2 = u2.correspondence

    # h = sigma1 o J o sigma2^{-1} o J solves F o (J sigma2 J sigma1^{-1}) = G
    h = compose(sigma1, invert(sigma2).conjugate_by_reciprocal())
    wr = weld(h, order=order, tol=tol)
    F, G = wr.F, wr.G

    def push_left(zeta):
        if np.ndim(zeta) == 0 and is_inf(zeta):
            if left.entries[i].at_infinity:
                raise InvalidInputError("infinity lies inside the left cap")
            return INF  # u1^{-1}(inf) = inf for finite caps, G(inf) = inf
        return G.evaluate(u1.inverse(zeta))

    def push_right(zeta):
        w = u2.inverse(zeta)
        if np.ndim(w) == 0 and is_inf(w):
            return 0.0 + 0.0j  # F(1/inf) = F(0) = 0 structurally
        return F.evaluate(1.0 / np.asarray(w, complex))

    new_entries = []
    for k, e in enumerate(left.entries):
        if k == i:
            continue
        new_entries.append(_transport_entry(e, push_left, transported_order))
    for k, e in enumerate(right.entries):
        if k == j:
            continue
        new_entries.append(_transport_entry(e, push_right, transported_order))

    model = "border" if any(e.kind == "border" for e in new_entries) else "puncture"
    try:
        sphere = RiggedSphere(new_entries, model)
    except InvalidInputError as exc:
        raise InvalidResultError(f"sewn data degenerate: {exc}") from exc

    seam = quasicircle_samples(F, max(8 * order, 512))
    if seam.winding_number(0.0) != 1:
        raise InvalidResultError("seam orientation check failed")
    for e in new_entries:
        if not is_inf(e.point):
            side = seam.winding_number(e.point)
            if side not in (0, 1):
                raise InvalidResultError("seam winds unexpectedly around a transported point")

    # realised pieces keep the seam as an explicit border entry
    left_seam = SphereEntry(0.0, "border", F)
    g_reciprocal = _reciprocal_series_of_exterior(G, transported_order)
    right_seam = SphereEntry(INF, "border", g_reciprocal, True)
    n_left = len(left.entries) - 1
    left_real = RiggedSphere([left_seam] + new_entries[:n_left], "border", validate=False)
    right_real = RiggedSphere([right_seam] + new_entries[n_left:], "border", validate=False)

    invariants = moduli_invariants(sphere, jet_order=jet_order) if sphere.punctures() else None
    return SewResult(
        sphere=sphere,
        invariants=invariants,
        seam=seam,
        welding=wr,
        left_realized=left_real,
        right_realized=right_real,
    )


def _reciprocal_series_of_exterior(G: PowerSeriesMap, order: int) -> PowerSeriesMap:
    """Series g with 1/g(z) = G(1/z): the at-infinity cap bounded by G(S^1)."""
    # G(1/z) = c1/z + c0 + sum c_{-k} z^k  =>  1/G(1/z) = z / (c1 + c0 z + ...)
    den = np.concatenate([[G.coeffs[0]], [G.coeffs[1]], G.coeffs[2:]])
    num = np.zeros(order + 2, complex)
    num[1] = 1.0
    series = poly_div(num, den, order + 1)
    return PowerSeriesMap("disk_plus", series[1:])


@dataclass(frozen=True)
class HolomorphyReport:
    steps: tuple[float, ...]
    residuals: tuple[float, ...]
    slopes: tuple[float, ...]


def holomorphy_probe(
    family,
    i: int,
    right: RiggedSphere,
    j: int,
    t0: complex = 0.0,
    steps=(0.02, 0.01),
    order: int = 32,
    tol: float = 1e-8,
    which: int = 0,
) -> HolomorphyReport:
    """Finite-difference dbar residual of a cross-ratio along a sewing family.

    family(t) must return the left piece; the residual for each step s is
    |(chi(t+s) - chi(t-s))/(2s) + i (chi(t+is) - chi(t-is))/(2s)| / 2,
    which is O(s^2) for holomorphic dependence.
    """

    def chi(t):
        res = sew_two(family(t), i, right, j, order=order, tol=tol)
        if res.invariants is None or not res.invariants.cross_ratios:
            raise InvalidInputError("family must produce at least one cross-ratio")
        return res.invariants.cross_ratios[which]

    residuals = []
    for s in steps:
        dx = (chi(t0 + s) - chi(t0 - s)) / (2.0 * s)
        dy = (chi(t0 + 1j * s) - chi(t0 - 1j * s)) / (2.0 * s)
        residuals.append(abs(0.5 * (dx + 1j * dy)))
    slopes = []
    for (s1, r1), (s2, r2) in zip(zip(steps, residuals), list(zip(steps, residuals))[1:]):
        if r1 > 0 and r2 > 0:
            slopes.append(float(np.log(r1 / r2) / np.log(s1 / s2)))
        else:
            slopes.append(float("nan"))
    return HolomorphyReport(steps=tuple(steps), residuals=tuple(residuals), slopes=tuple(slopes))
