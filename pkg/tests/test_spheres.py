import json

import numpy as np
import pytest

from weldlab._series import INF
from weldlab.errors import InvalidInputError
from weldlab.spheres import (
    RiggedSphere,
    SphereEntry,
    apply_mobius,
    cut_caps,
    moduli_invariants,
    sew_caps,
    sew_two,
    standard_cap,
)
from weldlab.welding import PowerSeriesMap


def punctured_exterior_disk():
    """Closed unit-disk complement with a rigged puncture at infinity."""
    return RiggedSphere(
        [
            SphereEntry(0.0, "border", PowerSeriesMap.identity_plus()),
            SphereEntry(INF, "puncture", PowerSeriesMap.identity_plus(), at_infinity=True),
        ],
        "border",
    )


def generic_piece():
    return RiggedSphere(
        [
            SphereEntry(0.0, "border", PowerSeriesMap("disk_plus", [0.7, 0.07])),
            SphereEntry(2.0, "puncture", PowerSeriesMap("disk_plus", [0.3])),
            SphereEntry(-2.0 + 0.5j, "puncture", PowerSeriesMap("disk_plus", [0.25, 0.02])),
            SphereEntry(3.0j, "marked"),
        ],
        "border",
    )


def test_entry_validation():
    with pytest.raises(InvalidInputError):
        RiggedSphere(
            [
                SphereEntry(0.0, "border", PowerSeriesMap("disk_plus", [1.0])),
                SphereEntry(0.0, "marked"),
            ],
            "border",
        )
    with pytest.raises(InvalidInputError):  # overlapping disks
        RiggedSphere(
            [
                SphereEntry(0.0, "puncture", PowerSeriesMap("disk_plus", [1.0])),
                SphereEntry(0.5, "puncture", PowerSeriesMap("disk_plus", [1.0])),
            ],
            "puncture",
        )


def test_cap_models_round_trip_bit_exact():
    s = RiggedSphere(
        [
            SphereEntry(0.0, "border", PowerSeriesMap("disk_plus", [0.5, 0.05])),
            SphereEntry(4.0, "border", PowerSeriesMap("disk_plus", [0.5, -0.03])),
        ],
        "border",
    )
    capped = sew_caps(s)
    assert capped.model == "puncture"
    assert all(e.kind == "puncture" for e in capped.entries)
    back = cut_caps(capped)
    assert back.model == "border"
    for a, b in zip(back.entries, s.entries):
        assert a.kind == b.kind and a.point == b.point
        assert np.array_equal(a.map.coeffs, b.map.coeffs)


def test_cap_round_trip_preserves_taylor_data():
    s = RiggedSphere(
        [SphereEntry(0.0, "border", PowerSeriesMap("disk_plus", [1.0, 0.1]))], "border"
    )
    capped = sew_caps(s)
    assert np.array_equal(capped.entries[0].map.coeffs, s.entries[0].map.coeffs)


def test_sew_two_standard_disks():
    piece = punctured_exterior_disk()
    res = sew_two(piece, 0, piece, 0, order=16, tol=1e-10)
    pts = [e.point for e in res.sphere.entries]
    assert np.isinf(pts[0].real) and pts[1] == 0.0
    inv = res.invariants
    assert inv.cross_ratios == ()
    for chart, jets in inv.rigging_jets:
        jets = np.array(jets)
        assert abs(jets[0] - 1.0) < 1e-8  # composite z and 1/z charts
        assert np.max(np.abs(jets[1:])) < 1e-8
    assert res.welding.residual < 1e-10
    assert res.seam.winding_number(0.0) == 1


def test_sew_rotation_twist_continuous():
    def piece(alpha):
        return RiggedSphere(
            [
                SphereEntry(0.0, "border", PowerSeriesMap("disk_plus", [np.exp(1j * alpha)])),
                SphereEntry(INF, "puncture", PowerSeriesMap.identity_plus(), at_infinity=True),
            ],
            "border",
        )

    base = sew_two(piece(0.0), 0, punctured_exterior_disk(), 0, order=16, tol=1e-10)
    near = sew_two(piece(1e-4), 0, punctured_exterior_disk(), 0, order=16, tol=1e-10)
    far = sew_two(piece(0.5), 0, punctured_exterior_disk(), 0, order=16, tol=1e-10)
    d_near = base.invariants.distance(near.invariants)
    d_far = base.invariants.distance(far.invariants)
    assert d_near < 5e-4
    assert d_far > 0.05  # the twist is visible in the jets


def test_sew_then_cut_recovers_invariants():
    left = generic_piece()
    res = sew_two(left, 0, standard_cap(), 0, order=32, tol=1e-10)
    d = moduli_invariants(sew_caps(left)).distance(moduli_invariants(sew_caps(res.left_realized)))
    assert d < 1e-6


def test_moduli_mobius_invariance():
    sphere = sew_caps(generic_piece())
    mob = (1.1 - 0.2j, 0.4 + 0.1j, 0.03 - 0.05j, 0.9 + 0.3j)
    d = moduli_invariants(sphere).distance(moduli_invariants(apply_mobius(sphere, mob, order=40)))
    assert d < 1e-9


def test_sewing_associative_on_invariants():
    A = RiggedSphere(
        [
            SphereEntry(0.0, "border", PowerSeriesMap("disk_plus", [0.5, 0.03])),
            SphereEntry(2.2, "marked"),
            SphereEntry(-2.0, "puncture", PowerSeriesMap("disk_plus", [0.25])),
        ],
        "border",
    )
    B = RiggedSphere(
        [
            SphereEntry(0.0, "border", PowerSeriesMap("disk_plus", [0.4])),
            SphereEntry(4.0, "border", PowerSeriesMap("disk_plus", [0.4])),
            SphereEntry(2.0 + 1.5j, "marked"),
        ],
        "border",
    )
    C = RiggedSphere(
        [
            SphereEntry(0.0, "border", PowerSeriesMap("disk_plus", [0.45, -0.02])),
            SphereEntry(-1.8j, "marked"),
        ],
        "border",
    )
    ab = sew_two(A, 0, B, 0, order=32, tol=1e-9)
    idx_b4 = next(k for k, e in enumerate(ab.sphere.entries) if e.kind == "border")
    route1 = sew_two(ab.sphere, idx_b4, C, 0, order=32, tol=1e-8)
    bc = sew_two(B, 1, C, 0, order=32, tol=1e-9)
    idx_b0 = next(k for k, e in enumerate(bc.sphere.entries) if e.kind == "border")
    route2 = sew_two(A, 0, bc.sphere, idx_b0, order=32, tol=1e-8)
    assert route1.invariants.distance(route2.invariants) < 1e-6


def test_seam_orientation_and_samples():
    res = sew_two(generic_piece(), 0, standard_cap(), 0, order=24, tol=1e-9)
    assert res.seam.is_simple()
    assert res.seam.winding_number(0.0) == 1
    outside_pt = res.sphere.entries[0].point  # transported puncture lies off the seam
    assert res.seam.winding_number(outside_pt) == 0


def test_json_round_trip():
    s = generic_piece()
    back = RiggedSphere.from_json(s.to_json())
    assert back.model == s.model
    for a, b in zip(back.entries, s.entries):
        assert a.kind == b.kind and a.at_infinity == b.at_infinity
        if np.isfinite(a.point.real):
            assert a.point == b.point
        if a.map is not None:
            assert np.array_equal(a.map.coeffs, b.map.coeffs)
    cap = standard_cap()
    cap2 = RiggedSphere.from_json(cap.to_json())
    assert np.isinf(cap2.entries[0].point.real) and cap2.entries[0].at_infinity
    data = json.loads(cap.to_json())
    assert data["punctures"][0] == "inf"
