import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subordlab.disk import (
    CurveIndex,
    ProbeConfig,
    Status,
    Univalence,
    boundary_min_re,
    circle,
    convex_check,
    convex_margin,
    image_contains,
    starlike_check,
    subordination_check,
    univalence_check,
    winding_number,
)
from subordlab.errors import DegenerateDerivative, PointTooCloseToCurve, QNotVanishingAtOrigin
from subordlab.zoo import (
    custom_map,
    make_binomial_power,
    make_exp_line,
    make_koebe,
    make_moebius,
    make_polynomial,
)

CFG = ProbeConfig()
IDENT = make_polynomial([0, 1], "z")


def test_probe_config_validation():
    with pytest.raises(ValueError):
        ProbeConfig(radii=(0.9, 0.5))
    with pytest.raises(ValueError):
        ProbeConfig(radii=(0.5, 1.0))
    with pytest.raises(ValueError):
        ProbeConfig(n_theta=32)


def test_boundary_min_re_examples():
    assert boundary_min_re(lambda z: np.ones_like(z), 0.999, 512) == 1.0
    got = boundary_min_re(lambda z: 1 / (1 + 0.5 * z), 0.999, 4096)
    assert abs(got - 2 / 3) < 2e-3


def test_boundary_min_re_conjugation_symmetry():
    q = make_moebius(0.7, -0.4)
    t = 2 * np.pi * np.arange(1024) / 1024
    z = 0.99 * np.exp(1j * t)
    assert abs(np.min(q(z).real) - np.min(q(np.conj(z)).real)) < 1e-12


def test_winding_examples():
    unit = circle(1.0, 4096)
    assert winding_number(unit, 0) == 1
    assert winding_number(unit, 2) == 0
    assert winding_number(circle(0.9, 4096) ** 2, 0.5) == 2
    with pytest.raises(PointTooCloseToCurve):
        winding_number(unit, 1.0)


def test_bulk_winding_matches_single_point():
    curve = circle(0.9, 512) ** 2 + 0.1 * circle(0.9, 512) ** 3
    pts = np.array([0.5, 0.1 + 0.2j, 1.5, -0.3j, 0.7 + 0.7j])
    bulk = CurveIndex(curve).winding(pts)
    assert list(bulk) == [winding_number(curve, w) for w in pts]


def test_image_contains_examples():
    assert image_contains(IDENT, 0.5, CFG).contained is True
    assert image_contains(IDENT, 1.5, CFG).contained is False
    assert image_contains(make_moebius(1, -1), 1.0, CFG).contained is True


def test_subordination_examples():
    half = make_polynomial([0, 0.5], "z/2")
    assert subordination_check(half, IDENT, CFG).status is Status.HOLDS
    v = subordination_check(IDENT, half, CFG)
    assert v.status is Status.FAILS
    z, w = v.witness
    # z/2 maps U onto |w| < 1/2, so any |g(z)| >= 1/2 is outside
    assert abs(w) >= 0.5 and abs(w - z) < 1e-15
    same = subordination_check(IDENT, IDENT, CFG)
    assert same.status is Status.HOLDS and same.margin > CFG.tol


def test_origin_mismatch_fails():
    v = subordination_check(IDENT, make_moebius(1, -1), CFG)
    assert v.status is Status.FAILS
    assert v.witness[0] == 0


def test_non_univalent_dominant_is_never_holds():
    h = make_polynomial([0, 1, 0, 0, 1.5], "z+1.5z^4")
    g = make_polynomial([0, 0.01], "z/100")
    v = subordination_check(g, h, CFG)
    assert v.status is Status.INCONCLUSIVE


def test_univalence_examples():
    assert univalence_check(make_binomial_power(-1, 2), CFG).status is Univalence.CERTIFIED
    res = univalence_check(make_binomial_power(-1, 3), CFG)
    assert res.status is Univalence.REFUTED
    z1, z2 = res.witness
    h = make_binomial_power(-1, 3)
    assert abs(z1 - z2) > 10 * CFG.tol
    assert abs(h(z1) - h(z2)) < CFG.tol
    assert univalence_check(IDENT, CFG).certified


def test_univalence_numeric_path():
    res = univalence_check(make_binomial_power(-1, 2), CFG, use_certificates=False)
    assert res.status is Univalence.CERTIFIED_NUMERICALLY
    res = univalence_check(make_polynomial([0, 1, 0.9]), CFG)
    assert res.status is Univalence.REFUTED


def test_starlike_examples():
    assert starlike_check(IDENT, CFG)
    assert starlike_check(make_polynomial([0, 1, 0.4]), CFG)
    # z + z^2 has a critical point at -1/2; zQ'/Q = 1 + z/(1+z) is unbounded below
    assert not starlike_check(make_polynomial([0, 1, 1]), CFG)
    assert starlike_check(make_koebe(), CFG)
    with pytest.raises(QNotVanishingAtOrigin):
        starlike_check(make_moebius(1, -1), CFG)


def test_convex_examples():
    assert convex_check(IDENT, CFG)
    q = make_moebius(0.9, 0.5)
    assert abs(convex_margin(q, CFG).value - (1 - 0.5) / (1 + 0.5)) < 2e-3
    assert convex_check(q, CFG)
    assert not convex_check(make_polynomial([1, 2, 1]), CFG)
    with pytest.raises(DegenerateDerivative):
        convex_check(make_polynomial([1, 0, 1]), CFG)


def test_square_curve_convex_value():
    # for (1+z)^2 the convexity functional is (1+2z)/(1+z)
    q = make_polynomial([1, 2, 1])
    z = circle(0.9, 64)
    val = 1 + z * q.d2(z) / q.d1(z)
    assert np.allclose(val, (1 + 2 * z) / (1 + z))


SCALES = st.floats(0.05, 0.95)


@settings(max_examples=15, deadline=None)
@given(s=SCALES, shift=st.floats(-0.3, 0.3))
def test_monotone_in_radius(s, shift):
    g = custom_map(lambda z: 1 + s * z + shift * s * z * z, descriptor="g")
    h = make_moebius(1, -1)
    outer = ProbeConfig(radii=(0.5, 0.9))
    inner = ProbeConfig(radii=(0.3, 0.5))
    if subordination_check(g, h, outer).status is Status.HOLDS:
        assert subordination_check(g, h, inner).status is Status.HOLDS


@settings(max_examples=15, deadline=None)
@given(C=st.complex_numbers(max_magnitude=3.0, allow_nan=False).filter(lambda c: abs(c) > 0.1))
def test_self_subordination_never_fails(C):
    q = make_exp_line(C)
    assert subordination_check(q, q, CFG).status is not Status.FAILS


@settings(max_examples=10, deadline=None)
@given(s=SCALES, rot=st.floats(0, 2 * np.pi))
def test_containment_winding_consistency(s, rot):
    g = custom_map(lambda z: 1 + s * np.exp(1j * rot) * z, descriptor="g")
    h = make_moebius(1, -1)
    small = ProbeConfig(n_theta=512)
    if subordination_check(g, h, small).status is Status.HOLDS:
        for z0 in circle(0.999, 16):
            assert image_contains(h, g(z0), small).contained
