import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subordlab.disk import circle
from subordlab.errors import (
    COutOfRange,
    ExponentOutsideRoysterRegion,
    ParameterOrderViolated,
    ZeroB,
    ZeroLambda,
)
from subordlab.zoo import (
    PValentFunction,
    make_binomial_power,
    make_exp_line,
    make_half_plane_primitive,
    make_koebe,
    make_moebius,
    make_pvalent,
    make_spiral_power,
    random_pvalent,
    spiral_exponent,
)

ZOO = [
    make_moebius(1, -1),
    make_moebius(0.5, -0.5),
    make_moebius(-0.2, 0.7, "A<B"),
    make_binomial_power(-1, 2),
    make_binomial_power(0.5, 0.5 + 0.3j),
    make_exp_line(1 - 0.5j),
    make_spiral_power(1, 0.5, 1, 0, 0),
    make_spiral_power(2, 0.3 + 0.1j, 0.8, 0.2, 0.4),
    make_pvalent(PValentFunction(3, {4: 0.1, 6: -0.05j})),
    make_koebe(),
    make_half_plane_primitive(),
]


def _sample(n=64, r=0.9, seed=3):
    rng = np.random.default_rng(seed)
    return r * np.sqrt(rng.uniform(size=n)) * np.exp(2j * np.pi * rng.uniform(size=n))


@pytest.mark.parametrize("q", ZOO, ids=lambda q: q.descriptor)
def test_derivative_matches_finite_difference(q):
    z = _sample()
    h = 1e-5
    fd = (q(z + h) - q(z - h)) / (2 * h)
    assert np.max(np.abs(fd - q.d1(z))) < 1e-6
    fd2 = (q.d1(z + h) - q.d1(z - h)) / (2 * h)
    assert np.max(np.abs(fd2 - q.d2(z)) / np.maximum(1, np.abs(q.d2(z)))) < 1e-5


@pytest.mark.parametrize("q", ZOO, ids=lambda q: q.descriptor)
def test_series_round_trip(q):
    z = circle(0.3, 32)
    s = q.series_at_origin(40)
    assert np.max(np.abs(s(z) - q(z))) < 1e-8


def test_moebius_values():
    q = make_moebius(1, -1)
    assert q(0) == 1
    assert make_moebius(0.5, -0.5)(0.5) == pytest.approx(5 / 3)
    assert np.min(q(circle(0.99, 2048)).real) > 0


def test_moebius_order_and_convention():
    with pytest.raises(ParameterOrderViolated):
        make_moebius(-0.5, 0.5)
    q = make_moebius(-0.5, 0.5, "A<B")
    assert q.params["convention"] == "A<B"
    assert q.descriptor.endswith("conv=AB")


def test_binomial_power_values():
    assert make_binomial_power(-1, 2)(0.5) == pytest.approx(0.25)
    assert make_binomial_power(1, 0.5)(0) == 1
    with pytest.raises(ZeroB):
        make_binomial_power(0, 1)
    with pytest.raises(ZeroLambda):
        make_binomial_power(0.5, 0)


def test_binomial_power_series_expansion():
    lam, B = 1.5 - 0.5j, -1.0
    c = make_binomial_power(B, lam).series_at_origin(4).coeffs
    expect = [1, -lam, lam * (lam - 1) / 2, -lam * (lam - 1) * (lam - 2) / 6]
    assert np.allclose(c[:4], expect)


def test_binomial_power_nonvanishing_on_probes():
    q = make_binomial_power(-0.9, 1.7)
    for r in (0.5, 0.9, 0.99):
        assert np.min(np.abs(q(circle(r, 2048)))) > 0


def test_exp_line():
    q = make_exp_line(1)
    assert q(0) == 1
    assert q(0.999999) == pytest.approx(math.e, rel=1e-5)
    assert np.min(np.abs(q(circle(0.99, 1024)))) > 0
    with pytest.raises(COutOfRange):
        make_exp_line(4)


def test_spiral_power_examples():
    z = _sample()
    q = make_spiral_power(1, 0.5, 1, 0, 0)
    assert np.allclose(q(z), 1 / (1 - z))
    q = make_spiral_power(1, 1, 1, 0, 0)
    assert np.allclose(q(z), (1 - z) ** -2)


def test_spiral_power_degenerate_exponent():
    q = make_spiral_power(1, 0.5, 1, 1 - 1e-17, 0)
    assert np.allclose(q(_sample()), 1)


def test_spiral_power_warns_outside_region():
    assert spiral_exponent(1, 2, 1, 0, 0) == pytest.approx(4)
    with pytest.warns(ExponentOutsideRoysterRegion):
        make_spiral_power(1, 2, 1, 0, 0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        make_spiral_power(1, 0.5, 1, 0, 0.3)


def test_pvalent_values():
    assert make_pvalent(PValentFunction(1))(0.3) == pytest.approx(0.3)
    f = make_pvalent(PValentFunction(2, {3: 0.3}))
    assert f(0.5) == pytest.approx(0.2875)
    assert f.descriptor == "poly:p=2;a3=0.3"


def test_pvalent_rejects_low_index():
    with pytest.raises(ValueError):
        PValentFunction(2, {2: 1.0})


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), p=st.integers(1, 3))
def test_random_pvalent_is_small_and_differentiable(seed, p):
    spec = random_pvalent(np.random.default_rng(seed), p)
    assert len(spec.tail) <= 5
    assert spec.tail_l1 < 0.5
    f = make_pvalent(spec)
    z = _sample(16)
    h = 1e-5
    fd = (f(z + h) - f(z - h)) / (2 * h)
    assert np.max(np.abs(fd - f.d1(z))) < 1e-6
