import io
import time

import numpy as np

from subordlab.cli import main
from subordlab.disk import ProbeConfig, Status, Univalence, univalence_check
from subordlab.lemmas import (
    DominantSpec,
    Outcome,
    lemma24_check,
    lemma26_threshold,
    royster_region,
)
from subordlab.operators import ClassParams, F_op, OperatorParams, operator_series, psi_op, th31_lhs
from subordlab.theorems import (
    iter_suite,
    summarize,
    verify_corollary_spirallike,
    verify_superordination_candidate,
)
from subordlab.zoo import (
    PValentFunction,
    make_binomial_power,
    make_koebe,
    make_polynomial,
    make_pvalent,
    random_pvalent,
)


def report(label, ok, detail, started, budget):
    elapsed = time.perf_counter() - started
    ok = ok and elapsed < budget
    print(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail} ({elapsed:.2f}s, budget {budget}s)")
    assert ok, detail


def _rand_c(rng, r=1.0):
    return complex(*rng.uniform(-r, r, 2))


def _disk(rng, n, r=0.9):
    return r * np.sqrt(rng.uniform(size=n)) * np.exp(2j * np.pi * rng.uniform(size=n))


def test_criterion_01_coefficient_identity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(200):
        p = int(rng.integers(1, 4))
        a = _rand_c(rng, 0.5)
        f = make_pvalent(PValentFunction(p, {p + 1: a}))
        prm = OperatorParams(_rand_c(rng), _rand_c(rng), p)
        s = operator_series(f, prm, 4)
        worst = max(worst, abs(s[1] - (prm.eta - prm.mu + prm.eta / p) * a))
    report("1 coefficient identity", worst < 1e-10, f"max err {worst:.3g}", t0, 5)


def test_criterion_02_log_derivative_identities():
    t0 = time.perf_counter()
    rng = np.random.default_rng(102)
    worst = 0.0
    h = 1e-6
    for _ in range(100):
        p = int(rng.integers(1, 4))
        f = make_pvalent(random_pvalent(rng, p))
        prm = OperatorParams(_rand_c(rng), _rand_c(rng), p, gamma=_rand_c(rng) + 0.1,
                             sigma=_rand_c(rng))
        z = _disk(rng, 8)
        F = F_op(f, prm, z)
        dF = (F_op(f, prm, z + h) - F_op(f, prm, z - h)) / (2 * h)
        e1 = np.abs(th31_lhs(f, prm, z) - (1 + prm.gamma * z * dF / F))
        e2 = np.abs(psi_op(f, prm, z) - (prm.sigma * F + prm.gamma * z * dF))
        worst = max(worst, float(np.max(e1)), float(np.max(e2)))
    report("2 log-derivative identities", worst < 1e-6, f"max err {worst:.3g}", t0, 10)


ROYSTER_GRID = [0.5, 1.0, 1.5, 1 + 0.7j, -0.5, -1.0, -1.5, -1 - 0.7j]


def test_criterion_03_uf1_floor():
    t0 = time.perf_counter()
    cfg = ProbeConfig()
    worst = np.inf
    for B in (-0.9, -0.5, -0.25, 0.25, 0.5, 0.9):
        for lam in ROYSTER_GRID:
            assert royster_region(lam)
            rep = lemma24_check(DominantSpec("binomial_power", {"B": B, "lam": lam}), cfg)
            worst = min(worst, rep.margin - (1 / (1 + abs(B)) - 2e-3))
    report("3 UF.1 floor", worst >= 0, f"min excess over floor {worst:.3g}", t0, 30)


def test_criterion_04_uf2_sharp_zero():
    t0 = time.perf_counter()
    cfg = ProbeConfig(radii=(0.5, 0.9, 0.99, 0.999), n_theta=8192)
    mins = {}
    for A, B in ((1, 0), (0, -1), (0.5, -0.5)):
        mins[(A, B)] = lemma24_check(DominantSpec("moebius", {"A": A, "B": B}), cfg).margin
    sharp = all(-1e-6 <= mins[k] <= 1e-2 for k in ((1, 0), (0, -1)))
    ok = sharp and mins[(0.5, -0.5)] > 0
    detail = ", ".join(f"(A,B)={k}: {v:.6g}" for k, v in mins.items())
    report("4 UF.2 sharp zero", ok, detail, t0, 10)


def test_criterion_05_threshold():
    t0 = time.perf_counter()
    cfg = ProbeConfig()
    ok = True
    worst = 0.0
    for B in (0.2, 0.5, 0.8):
        thr = (abs(B) - 1) / (abs(B) + 1)
        rep = lemma26_threshold(B, 0, cfg)
        worst = max(worst, abs(rep.details["numeric_inf"] - (1 - B) / (1 + B)))
        for zr in list(np.linspace(-1, 1, 41)) + [thr, thr + cfg.tol / 2, thr - cfg.tol / 2]:
            rep = lemma26_threshold(B, complex(zr, 0.2), cfg)
            if abs(zr - thr) <= cfg.tol:
                ok &= rep.status is Outcome.INCONCLUSIVE
            else:
                ok &= rep.details["consistent"]
    report("5 threshold", ok and worst <= 2e-3, f"max inf err {worst:.3g}", t0, 20)


def test_criterion_06_royster_region():
    t0 = time.perf_counter()
    cfg = ProbeConfig()
    sq = univalence_check(make_binomial_power(-1, 2), cfg)
    cube = univalence_check(make_binomial_power(-1, 3), cfg)
    h = make_binomial_power(-1, 3)
    witness_ok = cube.witness is not None and abs(h(cube.witness[0]) - h(cube.witness[1])) < cfg.tol \
        and abs(cube.witness[0] - cube.witness[1]) > 1e-3
    ok = (royster_region(2) and not royster_region(3) and sq.certified
          and cube.status is Univalence.REFUTED and witness_ok)
    report("6 Royster region", ok, f"(1-z)^2 {sq.status}, (1-z)^3 {cube.status} "
           f"witness {cube.witness}", t0, 10)


def test_criterion_07_implication_suites():
    t0 = time.perf_counter()
    lines = []
    ok = True
    for th in ("th31", "th32"):
        s = summarize(th, 2024, iter_suite(th, 500, 2024))
        lines.append(f"{th}: runs={s.runs} counterexamples={s.counterexamples} "
                     f"non-vacuous={s.non_vacuous_fraction:.2f}")
        ok &= s.runs >= 500 and s.counterexamples == 0 and s.non_vacuous_fraction >= 0.5
    report("7 implication suites", ok, "; ".join(lines), t0, 300)


def test_criterion_08_spirallike_sharp_case():
    t0 = time.perf_counter()
    z = _disk(np.random.default_rng(108), 2000)
    k = make_koebe()
    err = float(np.max(np.abs(np.sqrt(k(z) / z) - 1 / (1 - z))))
    run = verify_corollary_spirallike(k, ClassParams(), 0.5)
    ok = err < 1e-10 and run.verdict is not Status.FAILS and abs(run.margin) <= 1e-2
    report("8 spirallike sharp case", ok, f"pointwise err {err:.3g}, margin {run.margin:.3g}",
           t0, 10)


def test_criterion_09_superordination_sanity():
    t0 = time.perf_counter()
    run = verify_superordination_candidate(make_polynomial([1, 0.5]), make_polynomial([1, 1]))
    sub = next(h for h in run.hypotheses if h.name == "subordination")
    ok = sub.status is Status.HOLDS and run.verdict is Status.HOLDS
    report("9 superordination sanity", ok, f"q+zq' < P+zP' {sub.status}, q < P {run.verdict}",
           t0, 5)


def test_criterion_10_determinism(monkeypatch):
    t0 = time.perf_counter()
    monkeypatch.setenv("SUBORDLAB_SEED", "42")

    def invoke():
        out = io.StringIO()
        for th in ("th31", "th32"):
            main(["verify-theorem", "--theorem", th, "--suite", "40"], out, io.StringIO())
        return out.getvalue().encode()

    a, b = invoke(), invoke()
    report("10 determinism", a == b and len(a) > 0, f"{len(a)} bytes, identical={a == b}",
           t0, 300)
