import numpy as np
import pytest

from subordlab.disk import ProbeConfig, Status
from subordlab.operators import ClassParams, OperatorParams, psi_op, th31_lhs
from subordlab.theorems import (
    Check,
    TheoremRun,
    iter_suite,
    random_dominant,
    random_operator_params,
    summarize,
    verify_corollary_robertson,
    verify_corollary_spirallike,
    verify_sandwich,
    verify_superordination_candidate,
    verify_th31,
    verify_th32,
    verify_th41_superordination,
)
from subordlab.zoo import (
    PValentFunction,
    make_binomial_power,
    make_exp_line,
    make_half_plane_primitive,
    make_koebe,
    make_moebius,
    make_polynomial,
    make_pvalent,
)

CFG = ProbeConfig()
DERIV = OperatorParams(1, 0, 1, gamma=1, sigma=1)


def zp(p):
    return make_pvalent(PValentFunction(p))


def _points(seed, n=16, r=0.9):
    rng = np.random.default_rng(seed)
    return r * np.sqrt(rng.uniform(size=n)) * np.exp(2j * np.pi * rng.uniform(size=n))


def test_verdict_logic():
    run = TheoremRun("x", {}, {}, CFG)
    assert run.verdict is Status.INCONCLUSIVE and not run.vacuous
    run.hypotheses.append(Check("h", Status.HOLDS, 1.0))
    run.conclusions.append(Check("c", Status.HOLDS, 0.5))
    assert run.verdict is Status.HOLDS and run.margin == 0.5
    run.hypotheses.append(Check("h2", Status.FAILS, -1.0))
    assert run.vacuous and run.verdict is Status.INCONCLUSIVE
    bad = TheoremRun("x", {}, {}, CFG, [Check("h", Status.HOLDS, 1.0)],
                     [Check("c", Status.FAILS, -0.1, witness=(0.5, 2.0))],
                     counterexample={"conclusion": "c"})
    assert bad.verdict is Status.FAILS
    assert "COUNTEREXAMPLE" in bad.dump()


@pytest.mark.parametrize("p", [1, 2, 3])
def test_th31_trivial_power(p):
    run = verify_th31(zp(p), OperatorParams(0.5, 0.2, p), make_moebius(1, -1))
    assert run.verdict is Status.HOLDS
    assert [h.name for h in run.hypotheses][-1] == "subordination"


def test_th32_trivial_power():
    assert verify_th32(zp(1), DERIV, make_exp_line(1)).verdict is Status.HOLDS


def test_th31_sharp_koebe_case():
    # eta = 0, mu = -1: F = f/z = (1-z)^-2 equals the dominant
    run = verify_th31(make_koebe(), OperatorParams(0, -1, 1), make_binomial_power(-1, -2))
    assert run.verdict is not Status.FAILS
    assert abs(run.margin) <= 1e-2


def test_th32_broken_admissibility_is_vacuous():
    f = make_pvalent(PValentFunction(1, {2: 0.05}))
    run = verify_th32(f, DERIV, make_exp_line(2.5))
    assert run.vacuous and run.counterexample is None
    assert run.hypotheses[-1].name == "th32_admissibility"
    assert run.verdict is Status.INCONCLUSIVE
    assert not run.conclusions


def test_th41_constant_psi_is_inconclusive():
    run = verify_th41_superordination(zp(1), DERIV, make_polynomial([1, 0.5]))
    assert run.verdict is Status.INCONCLUSIVE
    assert run.hypotheses[-1].name == "Psi_univalent"


def test_superordination_candidate():
    run = verify_superordination_candidate(make_polynomial([1, 0.5]), make_polynomial([1, 1]))
    assert run.verdict is Status.HOLDS
    assert run.hypotheses[-1].status is Status.HOLDS
    assert "heuristic" in run.assumptions["F_in_Q"]


def test_sandwich_cases():
    q1, q2 = make_polynomial([1, 0.25]), make_moebius(1, -1)
    assert verify_sandwich(zp(1), DERIV, q1, q2).verdict is Status.INCONCLUSIVE
    f = make_polynomial([0, 1, 0.2])
    run = verify_sandwich(f, DERIV, q1, q2)
    assert run.verdict is Status.HOLDS and len(run.conclusions) == 2
    swapped = verify_sandwich(make_pvalent(PValentFunction(1, {2: 0.05})), DERIV, q2, q1)
    assert swapped.vacuous and swapped.hypotheses[-1].name == "screen_h1<h2"


def test_spirallike_sharp_case():
    run = verify_corollary_spirallike(make_koebe(), ClassParams(), 0.5)
    assert run.verdict is not Status.FAILS and abs(run.margin) <= 1e-2
    z = _points(1)
    assert np.max(np.abs(np.sqrt(make_koebe()(z) / z) - 1 / (1 - z))) < 1e-10


def test_corollary_examples():
    assert verify_corollary_spirallike(make_polynomial([0, 1, 0.2]), ClassParams(),
                                       0.5).verdict is Status.HOLDS
    assert verify_corollary_spirallike(zp(2), ClassParams(p=2), 0.5).verdict is Status.HOLDS
    assert verify_corollary_robertson(make_polynomial([0, 1, 0.1]), ClassParams(),
                                      1).verdict is Status.HOLDS
    assert verify_corollary_robertson(zp(2), ClassParams(p=2), 0.5).verdict is Status.HOLDS
    sharp = verify_corollary_robertson(make_half_plane_primitive(), ClassParams(), 0.5)
    assert sharp.verdict is not Status.FAILS and abs(sharp.margin) <= 1e-2


def test_specialization_coherence():
    rng = np.random.default_rng(3)
    z = _points(2)
    for _ in range(20):
        p = int(rng.integers(1, 4))
        f = make_pvalent(PValentFunction(p, {p + 1: 0.1 * rng.uniform(), p + 2: 0.05j}))
        mu, eta = complex(*rng.uniform(-1, 1, 2)), complex(*rng.uniform(-1, 1, 2))
        lhs = th31_lhs(f, OperatorParams(0, mu, p), z)
        assert np.max(np.abs(lhs - (1 + mu * (p - z * f.d1(z) / f(z))))) < 1e-10
        lhs = th31_lhs(f, OperatorParams(eta, 0, p), z)
        assert np.max(np.abs(lhs - (1 + eta * (1 - p + z * f.d2(z) / f.d1(z))))) < 1e-10
    A, B = 0.6, 0.9
    q = make_moebius(A, B, "A<B")
    rhs = 1 + (A - B) * z / ((1 + A * z) * (1 + B * z))
    assert np.max(np.abs(1 + z * q.d1(z) / q(z) - rhs)) < 1e-10


def test_superordination_display_specialization():
    # eta = 1, mu = 0, sigma = gamma = 1 gives Psi = (z f'/(p z^(p-1)))'
    p = 2
    f = make_pvalent(PValentFunction(p, {3: 0.2, 4: -0.1j}))
    z = _points(5)
    g1 = lambda w: w * f.d1(w) / (p * w ** (p - 1))  # noqa: E731
    h = 1e-6
    expect = (g1(z + h) - g1(z - h)) / (2 * h)
    got = psi_op(f, OperatorParams(1, 0, p, gamma=1, sigma=1), z)
    assert np.max(np.abs(got - expect)) < 1e-7


def test_random_generators_are_admissible():
    rng = np.random.default_rng(0)
    for _ in range(30):
        spec = random_dominant(rng)
        q = spec.build()
        assert abs(q(0) - 1) < 1e-15
        prm = random_operator_params(rng, 2)
        assert 0 <= (prm.sigma / prm.gamma).real <= 2


def test_small_suites_have_no_counterexamples():
    for th in ("th31", "th32"):
        s = summarize(th, 5, iter_suite(th, 15, 5))
        assert s.runs == 15 and s.counterexamples == 0
        assert s.non_vacuous_fraction >= 0.5


def test_suite_is_reproducible():
    a = [r.margin for r in iter_suite("th31", 5, 9)]
    b = [r.margin for r in iter_suite("th31", 5, 9)]
    assert a == b
