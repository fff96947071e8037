"""Implication testing for the subordination, superordination and sandwich theorems.

Theorems are conditionals.  A run only counts against a theorem when every
hypothesis holds with margin above ``tol`` and the conclusion then fails;
that is the counterexample state.  A failed hypothesis makes the run vacuous.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

import numpy as np

from .disk import (
    ProbeConfig,
    Status,
    SubordinationVerdict,
    circle,
    convex_margin,
    min_re_on_probes,
    subordination_check,
    univalence_check,
)
from .errors import ExponentOutsideRoysterRegion, SubordlabError
from .lemmas import DominantSpec, lemma24_expression, royster_region, th32_admissibility
from .operators import (
    ClassParams,
    OperatorParams,
    class_membership,
    operator_map,
    psi_map,
    th31_lhs_map,
    th31_rhs_map,
    th32_rhs_map,
)
from .series import as_complex
from .zoo import (
    AnalyticMap,
    custom_map,
    make_spiral_power,
    random_pvalent,
    make_pvalent,
    spiral_exponent,
)


@dataclass
class Check:
    name: str
    status: Status
    margin: float = math.nan
    detail: str = ""
    witness: Optional[tuple] = None


@dataclass
class TheoremRun:
    theorem: str
    functions: dict
    params: dict
    probe: ProbeConfig
    hypotheses: list = field(default_factory=list)
    conclusions: list = field(default_factory=list)
    assumptions: dict = field(default_factory=dict)
    counterexample: Optional[dict] = None

    @property
    def vacuous(self) -> bool:
        return any(h.status is Status.FAILS for h in self.hypotheses)

    @property
    def hypotheses_hold(self) -> bool:
        return bool(self.hypotheses) and all(h.status is Status.HOLDS for h in self.hypotheses)

    @property
    def verdict(self) -> Status:
        if self.counterexample is not None:
            return Status.FAILS
        if not self.hypotheses_hold or not self.conclusions:
            return Status.INCONCLUSIVE
        if all(c.status is Status.HOLDS for c in self.conclusions):
            return Status.HOLDS
        return Status.INCONCLUSIVE

    @property
    def margin(self) -> float:
        ms = [c.margin for c in self.conclusions if not math.isnan(c.margin)]
        return min(ms) if ms else math.nan

    def dump(self) -> str:
        lines = [f"theorem {self.theorem}: {self.verdict}", f"  functions {self.functions}",
                 f"  params {self.params}"]
        for tag, items in (("hyp", self.hypotheses), ("concl", self.conclusions)):
            for c in items:
                lines.append(f"  {tag} {c.name}: {c.status} margin={c.margin!r} "
                             f"witness={c.witness} {c.detail}")
        if self.counterexample:
            lines.append(f"  COUNTEREXAMPLE {self.counterexample}")
        return "\n".join(lines)


class _Runner:
    """Evaluates hypotheses lazily and stops at the first failure."""

    def __init__(self, run: TheoremRun):
        self.run = run
        self.stopped = False

    def hyp(self, name: str, fn: Callable[[], Check]) -> None:
        if self.stopped:
            return
        try:
            check = fn()
        except (SubordlabError, ArithmeticError, ValueError) as exc:
            check = Check(name, Status.INCONCLUSIVE, detail=f"error: {exc}")
        check.name = name
        self.run.hypotheses.append(check)
        if check.status is Status.FAILS:
            self.stopped = True

    def conclude(self, name: str, fn: Callable[[], Check]) -> None:
        if not self.run.hypotheses_hold:
            return
        try:
            check = fn()
        except (SubordlabError, ArithmeticError, ValueError) as exc:
            check = Check(name, Status.INCONCLUSIVE, detail=f"error: {exc}")
        check.name = name
        self.run.conclusions.append(check)
        if check.status is Status.FAILS and self.run.counterexample is None:
            self.run.counterexample = {"conclusion": name, "witness": check.witness,
                                       "margin": check.margin}


def _classify(margin: float, tol: float) -> Status:
    if margin > tol:
        return Status.HOLDS
    if margin < -tol:
        return Status.FAILS
    return Status.INCONCLUSIVE


def _from_verdict(v: SubordinationVerdict) -> Check:
    return Check("", v.status, v.margin, v.reason, v.witness)


def _univalent(q: AnalyticMap, cfg: ProbeConfig) -> Check:
    u = univalence_check(q, cfg)
    if u.certified:
        return Check("", Status.HOLDS, detail=str(u.status))
    if u.status.value == "Refuted":
        return Check("", Status.FAILS, detail=u.reason, witness=u.witness)
    return Check("", Status.INCONCLUSIVE, detail=u.reason)


def _normalized(q: AnalyticMap, value: complex, cfg: ProbeConfig) -> Check:
    gap = abs(complex(q(0.0)) - value)
    return Check("", Status.HOLDS if gap <= cfg.tol else Status.FAILS, -gap)


def _nonzero(x: complex, tol: float) -> Check:
    return Check("", Status.HOLDS if abs(x) > tol else Status.FAILS, abs(x))


def _lemma24_margin(q: AnalyticMap, cfg: ProbeConfig) -> Check:
    pm = min_re_on_probes(lambda z: lemma24_expression(q, z), cfg)
    return Check("", _classify(pm.value, cfg.tol), pm.value)


def _nonvanishing(fn: Callable, cfg: ProbeConfig) -> Check:
    m = min(float(np.min(np.abs(fn(circle(r, cfg.n_theta))))) for r in cfg.radii)
    return Check("", _classify(m, cfg.tol), m)


def _functions(**maps) -> dict:
    return {k: v.descriptor for k, v in maps.items()}


def _op_params(params: OperatorParams) -> dict:
    return {"p": params.p, "eta": params.eta, "mu": params.mu, "gamma": params.gamma,
            "sigma": params.sigma}


# -- subordination theorems ------------------------------------------------------

def verify_th31(f: AnalyticMap, params: OperatorParams, q: AnalyticMap,
                cfg: ProbeConfig = ProbeConfig()) -> TheoremRun:
    """``1 + gamma z F'/F < 1 + gamma z q'/q`` implies ``F[f] < q``."""
    run = TheoremRun("th31", _functions(f=f, q=q), _op_params(params), cfg)
    R = _Runner(run)
    R.hyp("gamma_nonzero", lambda: _nonzero(params.gamma, 0.0))
    R.hyp("q_univalent", lambda: _univalent(q, cfg))
    R.hyp("q(0)=1", lambda: _normalized(q, 1.0, cfg))
    # Re(1 + zq''/q' - zq'/q) > 0 is exactly starlikeness of Q = gamma z q'/q,
    # which makes h = 1 + Q univalent
    R.hyp("lemma24_condition", lambda: _lemma24_margin(q, cfg))
    F = operator_map(f, params)
    R.hyp("F_nonvanishing", lambda: _nonvanishing(F, cfg))
    R.hyp("subordination", lambda: _from_verdict(subordination_check(
        th31_lhs_map(f, params), th31_rhs_map(q, params.gamma), cfg, h_univalent=True)))
    R.conclude("F<q", lambda: _from_verdict(subordination_check(F, q, cfg, h_univalent=True)))
    return run


def verify_th32(f: AnalyticMap, params: OperatorParams, q: AnalyticMap,
                cfg: ProbeConfig = ProbeConfig()) -> TheoremRun:
    """``Psi < sigma q + gamma z q'`` implies ``F[f] < q``."""
    run = TheoremRun("th32", _functions(f=f, q=q), _op_params(params), cfg)
    R = _Runner(run)
    R.hyp("gamma_nonzero", lambda: _nonzero(params.gamma, 0.0))
    R.hyp("q_univalent", lambda: _univalent(q, cfg))
    R.hyp("q(0)=1", lambda: _normalized(q, 1.0, cfg))

    def admissible():
        rep = th32_admissibility(q, params.sigma, params.gamma, cfg)
        return Check("", _classify(rep.margin, cfg.tol), rep.margin,
                     f"threshold={rep.details.get('threshold')!r}")

    R.hyp("th32_admissibility", admissible)
    F = operator_map(f, params)
    R.hyp("F_evaluable", lambda: _nonvanishing(F, cfg))
    R.hyp("subordination", lambda: _from_verdict(subordination_check(
        psi_map(f, params), th32_rhs_map(q, params.sigma, params.gamma), cfg,
        h_univalent=True)))
    R.conclude("F<q", lambda: _from_verdict(subordination_check(F, q, cfg, h_univalent=True)))
    return run


# -- superordination ---------------------------------------------------------------

def _q_class_heuristic(P: AnalyticMap, cfg: ProbeConfig) -> str:
    u = univalence_check(P, cfg, use_certificates=False)
    return ("heuristic-pass (boundary curve simple; not certified)" if u.certified
            else f"not verified ({u.status})")


def _superordination(run: TheoremRun, q: AnalyticMap, P: AnalyticMap, Psi: AnalyticMap,
                     sigma: complex, gamma: complex, cfg: ProbeConfig) -> TheoremRun:
    R = _Runner(run)
    R.hyp("gamma_nonzero", lambda: _nonzero(gamma, 0.0))
    R.hyp("q_convex", lambda: Check("", _classify(convex_margin(q, cfg).value, cfg.tol),
                                    convex_margin(q, cfg).value))
    R.hyp("q(0)=1", lambda: _normalized(q, 1.0, cfg))
    R.hyp("Re(sigma/gamma)>0", lambda: Check("", _classify((sigma / gamma).real, cfg.tol),
                                              (sigma / gamma).real))
    R.hyp("F(0)=q(0)", lambda: _normalized(P, complex(q(0.0)), cfg))
    R.hyp("Psi_univalent", lambda: _univalent(Psi, cfg))
    run.assumptions["F_in_Q"] = _q_class_heuristic(P, cfg) if not R.stopped else "skipped"
    R.hyp("subordination", lambda: _from_verdict(subordination_check(
        th32_rhs_map(q, sigma, gamma), Psi, cfg, h_univalent=True)))
    R.conclude("q<F", lambda: _from_verdict(subordination_check(q, P, cfg)))
    return run


def verify_superordination_candidate(q: AnalyticMap, P: AnalyticMap, sigma=1.0, gamma=1.0,
                                     cfg: ProbeConfig = ProbeConfig()) -> TheoremRun:
    """The underlying implication with an explicit candidate ``P`` in place of ``F[f]``.

    ``sigma q + gamma z q' < sigma P + gamma z P'`` implies ``q < P``.
    """
    sigma, gamma = as_complex(sigma), as_complex(gamma)
    Psi = th32_rhs_map(P, sigma, gamma)
    run = TheoremRun("superordination_candidate", _functions(q=q, P=P),
                     {"sigma": sigma, "gamma": gamma}, cfg)
    return _superordination(run, q, P, Psi, sigma, gamma, cfg)


def verify_th41_superordination(f: AnalyticMap, params: OperatorParams, q: AnalyticMap,
                                cfg: ProbeConfig = ProbeConfig()) -> TheoremRun:
    """``sigma q + gamma z q' < Psi`` implies ``q < F[f]``.

    Membership of ``F[f]`` in the class Q cannot be decided numerically; the
    run records a boundary-injectivity heuristic under ``assumptions``.
    """
    run = TheoremRun("th41", _functions(f=f, q=q), _op_params(params), cfg)
    return _superordination(run, q, operator_map(f, params), psi_map(f, params),
                            params.sigma, params.gamma, cfg)


def verify_sandwich(f: AnalyticMap, params: OperatorParams, q1: AnalyticMap, q2: AnalyticMap,
                    cfg: ProbeConfig = ProbeConfig()) -> TheoremRun:
    """``h1 < Psi < h2`` implies ``q1 < F[f] < q2`` with ``h_i = sigma q_i + gamma z q_i'``."""
    sigma, gamma = params.sigma, params.gamma
    run = TheoremRun("sandwich", _functions(f=f, q1=q1, q2=q2), _op_params(params), cfg)
    R = _Runner(run)
    F, Psi = operator_map(f, params), psi_map(f, params)
    h1, h2 = th32_rhs_map(q1, sigma, gamma), th32_rhs_map(q2, sigma, gamma)
    R.hyp("gamma_nonzero", lambda: _nonzero(gamma, 0.0))
    R.hyp("q1_convex", lambda: Check("", _classify(convex_margin(q1, cfg).value, cfg.tol),
                                     convex_margin(q1, cfg).value))
    R.hyp("q1(0)=1", lambda: _normalized(q1, 1.0, cfg))
    R.hyp("q2_univalent", lambda: _univalent(q2, cfg))
    R.hyp("q2(0)=1", lambda: _normalized(q2, 1.0, cfg))

    def admissible():
        rep = th32_admissibility(q2, sigma, gamma, cfg)
        return Check("", _classify(rep.margin, cfg.tol), rep.margin)

    R.hyp("q2_th32_admissibility", admissible)
    R.hyp("Re(sigma/gamma)>0", lambda: Check("", _classify((sigma / gamma).real, cfg.tol),
                                              (sigma / gamma).real))
    # h1 < h2 is necessary for any Psi to sit between them
    R.hyp("screen_h1<h2", lambda: _from_verdict(subordination_check(h1, h2, cfg,
                                                                     h_univalent=True)))
    R.hyp("F(0)=1", lambda: _normalized(F, 1.0, cfg))
    R.hyp("Psi_univalent", lambda: _univalent(Psi, cfg))
    run.assumptions["F_in_Q"] = _q_class_heuristic(F, cfg) if not R.stopped else "skipped"
    R.hyp("h1<Psi", lambda: _from_verdict(subordination_check(h1, Psi, cfg, h_univalent=True)))
    R.hyp("Psi<h2", lambda: _from_verdict(subordination_check(Psi, h2, cfg, h_univalent=True)))
    R.conclude("q1<F", lambda: _from_verdict(subordination_check(q1, F, cfg)))
    R.conclude("F<q2", lambda: _from_verdict(subordination_check(F, q2, cfg, h_univalent=True)))
    return run


# -- spirallike / Robertson corollaries ----------------------------------------------

def _spiral_dominant(cls: ClassParams, a: complex) -> tuple[AnalyticMap, complex]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ExponentOutsideRoysterRegion)
        q = make_spiral_power(cls.p, a, cls.b, cls.alpha, cls.spiral_angle)
    return q, spiral_exponent(cls.p, a, cls.b, cls.alpha, cls.spiral_angle)


def _corollary(which: str, f: AnalyticMap, cls: ClassParams, a,
               cfg: ProbeConfig) -> TheoremRun:
    a = as_complex(a, "a")
    q, expo = _spiral_dominant(cls, a)
    if which == "spirallike":
        # (f/z^p)^a == (z^p/f)^(-a) for principal powers off the cut
        params = OperatorParams(eta=0.0, mu=-a, p=cls.p)
    else:
        params = OperatorParams(eta=a, mu=0.0, p=cls.p)
    run = TheoremRun(f"corollary_{which}", _functions(f=f, q=q),
                     {"p": cls.p, "lambda": cls.spiral_angle, "alpha": cls.alpha, "b": cls.b,
                      "a": a, "exponent": expo}, cfg)
    R = _Runner(run)

    def member():
        m = class_membership(f, cls, which, cfg)
        return Check("", m.status, m.margin, f"min Re at z={m.z_min}")

    R.hyp(f"{which}_member", member)
    R.hyp("exponent_in_B", lambda: Check("", Status.HOLDS if (expo != 0 and royster_region(expo))
                                         else Status.FAILS, abs(expo)))
    R.conclude("F<q", lambda: _from_verdict(subordination_check(operator_map(f, params), q, cfg,
                                                                h_univalent=True)))
    return run


def verify_corollary_spirallike(f: AnalyticMap, cls: ClassParams, a,
                                cfg: ProbeConfig = ProbeConfig()) -> TheoremRun:
    """``f`` spirallike implies ``(f/z^p)^a < (1 - z)^(-E)``."""
    return _corollary("spirallike", f, cls, a, cfg)


def verify_corollary_robertson(f: AnalyticMap, cls: ClassParams, a,
                               cfg: ProbeConfig = ProbeConfig()) -> TheoremRun:
    """``f`` Robertson implies ``(f'/(p z^(p-1)))^a < (1 - z)^(-E)``."""
    return _corollary("robertson", f, cls, a, cfg)


# -- randomized suites ------------------------------------------------------------

def _disk_sample(rng: np.random.Generator, radius: float) -> complex:
    return radius * math.sqrt(rng.uniform()) * cmath.exp(2j * math.pi * rng.uniform())


def random_dominant(rng: np.random.Generator) -> DominantSpec:
    """A zoo dominant that is univalent with ``Re(1 + zq''/q' - zq'/q) > 0``."""
    kind = int(rng.integers(3))
    if kind == 0:
        A = float(rng.uniform(0.3, 1.0))
        B = float(rng.uniform(-1.0, A - 0.3))
        return DominantSpec("moebius", {"A": A, "B": B})
    if kind == 1:
        B = float(rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 1.0))
        centre = float(rng.choice([-1.0, 1.0]))
        lam = centre + _disk_sample(rng, 1.0)
        if abs(lam) < 0.3:
            lam = centre
        return DominantSpec("binomial_power", {"B": B, "lam": lam})
    C = _disk_sample(rng, 1.0)
    C = C / abs(C) * (0.5 + 0.5 * abs(C)) if C != 0 else 1.0
    return DominantSpec("exp_line", {"C": C})


def random_operator_params(rng: np.random.Generator, p: int) -> OperatorParams:
    eta = _disk_sample(rng, 1.0)
    mu = _disk_sample(rng, 1.0)
    gamma = (0.5 + 1.5 * rng.uniform()) * cmath.exp(2j * math.pi * rng.uniform())
    # Re(sigma/gamma) in [0, 2]: admissible for convex dominants
    s = complex(2.0 * rng.uniform(), rng.uniform(-1.0, 1.0))
    return OperatorParams(eta=eta, mu=mu, p=p, gamma=gamma, sigma=s * gamma)


@dataclass
class SuiteSummary:
    theorem: str
    seed: int
    runs: int = 0
    holds: int = 0
    inconclusive: int = 0
    vacuous: int = 0
    non_vacuous: int = 0
    counterexamples: int = 0

    @property
    def non_vacuous_fraction(self) -> float:
        return self.non_vacuous / self.runs if self.runs else 0.0


def iter_suite(theorem: str, n_runs: int, seed: int,
               cfg: ProbeConfig = ProbeConfig()) -> Iterator[TheoremRun]:
    """Seeded random runs of ``th31`` or ``th32`` over small-tail p-valent functions."""
    verify = {"th31": verify_th31, "th32": verify_th32}[theorem]
    rng = np.random.default_rng(seed)
    for _ in range(n_runs):
        p = int(rng.integers(1, 4))
        f = make_pvalent(random_pvalent(rng, p))
        params = random_operator_params(rng, p)
        q = random_dominant(rng).build()
        yield verify(f, params, q, cfg)


def summarize(theorem: str, seed: int, runs) -> SuiteSummary:
    s = SuiteSummary(theorem, seed)
    for run in runs:
        s.runs += 1
        if run.vacuous:
            s.vacuous += 1
        elif run.hypotheses_hold:
            s.non_vacuous += 1
        if run.counterexample is not None:
            s.counterexamples += 1
        if run.verdict is Status.HOLDS:
            s.holds += 1
        elif run.verdict is Status.INCONCLUSIVE:
            s.inconclusive += 1
    return s
