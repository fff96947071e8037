"""Numerical verification of the preliminary lemmas and admissibility bundles.

Every verifier returns a :class:`LemmaReport` carrying a margin, so callers can
see how close a configuration sits to the edge of a hypothesis.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .disk import (
    ProbeConfig,
    Univalence,
    circle,
    convex_margin,
    min_re_on_probes,
    starlike_margin,
    univalence_check,
)
from .errors import ParameterError, QNotAdmissible, ZeroLambda
from .series import as_complex
from .zoo import (
    AnalyticMap,
    custom_map,
    make_binomial_power,
    make_exp_line,
    make_moebius,
    make_spiral_power,
)

FLOOR_SLACK = 2e-3


class Outcome(str, enum.Enum):
    PASS = "Pass"
    FAIL = "Fail"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self) -> str:
        return self.value


def classify(margin: float, tol: float) -> Outcome:
    if margin > tol:
        return Outcome.PASS
    if margin < -tol:
        return Outcome.FAIL
    return Outcome.INCONCLUSIVE


@dataclass
class LemmaReport:
    name: str
    status: Outcome
    margin: float
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status is Outcome.PASS


@dataclass(frozen=True)
class DominantSpec:
    """A tagged dominant: ``moebius``, ``binomial_power``, ``exp_line`` or ``spiral_power``."""

    family: str
    params: dict

    def build(self) -> AnalyticMap:
        prm = self.params
        if self.family == "moebius":
            return make_moebius(prm["A"], prm["B"], prm.get("convention", "B<A"))
        if self.family == "binomial_power":
            return make_binomial_power(prm["B"], prm["lam"])
        if self.family == "exp_line":
            return make_exp_line(prm["C"])
        if self.family == "spiral_power":
            return make_spiral_power(prm["p"], prm["a"], prm["b"], prm["alpha"],
                                     prm["spiral_angle"])
        raise ParameterError(f"unknown dominant family {self.family!r}")


def royster_region(lambda_power) -> bool:
    """``|lambda + 1| <= 1`` or ``|lambda - 1| <= 1``."""
    lam = as_complex(lambda_power, "lambda_power")
    if lam == 0:
        raise ZeroLambda("lambda must be non-zero")
    return abs(lam + 1) <= 1 or abs(lam - 1) <= 1


def lemma24_expression(q: AnalyticMap, z):
    """``1 + z q''/q' - z q'/q``."""
    d1 = q.d1(z)
    return 1 + z * q.d2(z) / d1 - z * d1 / q(z)


def lemma24_check(q_spec: DominantSpec, cfg: ProbeConfig = ProbeConfig()) -> LemmaReport:
    """Boundary minimum of ``Re(1 + z q''/q' - z q'/q)`` for the two univalent families."""
    if q_spec.family == "binomial_power":
        label = "UF.1"
    elif q_spec.family == "moebius":
        label = "UF.2"
    else:
        raise ParameterError("the UF check covers binomial_power (UF.1) and moebius (UF.2) only")
    q = q_spec.build()
    if label == "UF.1" and not royster_region(q_spec.params["lam"]):
        raise ParameterError("UF.1 needs lambda in the Royster region")
    pm = min_re_on_probes(lambda z: lemma24_expression(q, z), cfg)
    r_max_min = pm.per_radius[cfg.r_max]
    details = {"family": label, "per_radius": pm.per_radius, "z_min": pm.z,
               "min_re": pm.value}
    ok = r_max_min > -cfg.tol
    if label == "UF.1":
        B = float(q_spec.params["B"])
        floor = 1.0 / (1.0 + abs(B))
        floor_ok = r_max_min >= floor - FLOOR_SLACK
        details.update(floor=floor, floor_ok=floor_ok)
        ok = ok and floor_ok
    else:
        A, B = float(q_spec.params["A"]), float(q_spec.params["B"])
        details["boundary_closed_form_min"] = uf2_boundary_min(A, B)
    status = Outcome.PASS if ok else Outcome.FAIL
    return LemmaReport("lemma24", status, r_max_min, details)


def uf2_boundary_min(A: float, B: float, n: int = 8192) -> float:
    """Minimum over ``theta`` of the unit-circle formula for the UF.2 expression.

    ``(1-AB)(1+AB+(A+B)cos t) / (|1+A e^{it}|^2 |1+B e^{it}|^2)``, skipping
    the removable zero at a boundary pole.
    """
    t = 2 * np.pi * np.arange(n) / n
    e = np.exp(1j * t)
    den = np.abs(1 + A * e) ** 2 * np.abs(1 + B * e) ** 2
    num = (1 - A * B) * (1 + A * B + (A + B) * np.cos(t))
    ok = den > 1e-12
    return float(np.min(num[ok] / den[ok]))


def lemma25_nonvanishing(q: AnalyticMap, cfg: ProbeConfig = ProbeConfig(),
                         near_zero: float = 1e-4) -> LemmaReport:
    """``q`` with ``Re(1 + z q''/q' - z q'/q) > 0`` and ``q(0) != 0`` has no zeros."""
    q0 = complex(q(0.0))
    if abs(q0) <= cfg.tol:
        raise ParameterError("q(0) must be non-zero")
    mins = {}
    for r in cfg.radii:
        mins[r] = float(np.min(np.abs(q(circle(r, cfg.n_theta)))))
    min_mod = min(mins.values())
    details = {"per_radius": mins, "near_zero": min_mod < near_zero}
    if complex(q.d1(0.0)) == 0 and np.allclose(q(circle(cfg.r_max, 64)), q0):
        details["hypothesis"] = "constant map"
    else:
        hyp = min_re_on_probes(lambda z: lemma24_expression(q, z), cfg).value
        details["hypothesis_min_re"] = hyp
        details["hypothesis"] = bool(hyp > -cfg.tol)
    status = Outcome.PASS if min_mod > cfg.tol else Outcome.FAIL
    return LemmaReport("lemma25", status, min_mod, details)


def lemma26_threshold(B: float, zeta, cfg: ProbeConfig = ProbeConfig()) -> LemmaReport:
    """Check the threshold equivalence for ``omega = (1 - Bz)/(1 + Bz)``.

    The condition ``Re omega > max(0, -Re zeta)`` is evaluated on the probes
    and compared with ``Re zeta >= (|B|-1)/(|B|+1)``.  Within ``tol`` of the
    threshold the report is ``Inconclusive``.  ``B = 0`` degenerates to
    ``omega = 1`` and threshold ``-1``.
    """
    B = float(B)
    zeta = as_complex(zeta, "zeta")
    if not -1.0 <= B <= 1.0:
        raise ParameterError("need -1 <= B <= 1")
    threshold = (abs(B) - 1) / (abs(B) + 1)
    closed_inf = (1 - abs(B)) / (1 + abs(B))
    pm = min_re_on_probes(lambda z: (1 - B * z) / (1 + B * z), cfg)
    numeric_inf = pm.value
    cond_margin = numeric_inf - max(0.0, -zeta.real)
    details = {
        "threshold": threshold,
        "closed_form_inf": closed_inf,
        "numeric_inf": numeric_inf,
        "inf_within_slack": abs(numeric_inf - closed_inf) <= FLOOR_SLACK,
        "degenerate": B == 0.0,
    }
    if abs(B) < 1:
        details["circle_deviation"] = _circle_deviation(1.0, -B, B)
    if abs(zeta.real - threshold) <= cfg.tol:
        details["band"] = True
        return LemmaReport("lemma26", Outcome.INCONCLUSIVE, cond_margin, details)
    numeric = classify(cond_margin, cfg.tol)
    predicted = Outcome.PASS if zeta.real >= threshold else Outcome.FAIL
    details["predicted"] = str(predicted)
    details["consistent"] = numeric is predicted
    status = numeric if numeric is predicted else Outcome.INCONCLUSIVE
    return LemmaReport("lemma26", status, cond_margin, details)


def _circle_deviation(u: complex, v: complex, B: float, n: int = 4096) -> float:
    """Max ``| |omega - c| - R |`` on the unit circle for ``omega = (u+vz)/(1+Bz)``."""
    center = (u - v * B) / (1 - B * B)
    radius = abs(v - u * B) / (1 - B * B)
    z = circle(1.0, n)
    w = (u + v * z) / (1 + B * z)
    return float(np.max(np.abs(np.abs(w - center) - radius)))


def lemma27_halfplane(u, v, B: float, cfg: ProbeConfig = ProbeConfig(),
                      circle_tol: float = 1e-6) -> LemmaReport:
    """``Re(u - vB) >= |v - uB|`` forces ``Re (u + vz)/(1 + Bz) > 0`` on the disk.

    The disk-image formula is checked on the unit circle itself, where
    ``omega`` is still analytic because ``|B| < 1``.
    """
    u = as_complex(u, "u")
    v = as_complex(v, "v")
    B = float(B)
    if not -1.0 < B < 1.0:
        raise ParameterError("need -1 < B < 1")
    if u == 0 and v == 0:
        raise ParameterError("(u, v) must not be (0, 0)")
    lhs = (u - v * B).real
    rhs = abs(v - u * B)
    hypothesis = lhs >= rhs
    omega = lambda z: (u + v * z) / (1 + B * z)  # noqa: E731
    pm = min_re_on_probes(omega, cfg, radii=tuple(cfg.radii) + (1.0,))
    deviation = _circle_deviation(u, v, B)
    bound = (lhs - rhs) / (1 - B * B)
    details = {
        "hypothesis": hypothesis,
        "center": (u - v * B) / (1 - B * B),
        "radius": rhs / (1 - B * B),
        "circle_deviation": deviation,
        "min_re": pm.value,
        "lower_bound": bound,
        "vacuous": not hypothesis,
    }
    circle_ok = deviation < circle_tol
    if not hypothesis:
        status = Outcome.PASS if circle_ok else Outcome.FAIL
        return LemmaReport("lemma27", status, pm.value, details)
    ok = circle_ok and pm.value > -cfg.tol and pm.value >= bound - 1e-9
    return LemmaReport("lemma27", Outcome.PASS if ok else Outcome.FAIL, pm.value, details)


def th31_auxiliary(q: AnalyticMap, gamma) -> AnalyticMap:
    """``Q(z) = gamma z q'(z) / q(z)`` with its derivative in closed form."""
    gamma = as_complex(gamma, "gamma")

    def value(z):
        return gamma * z * q.d1(z) / q(z)

    def d1(z):
        qv, q1 = q(z), q.d1(z)
        return gamma * (q1 / qv + z * q.d2(z) / qv - z * q1 * q1 / (qv * qv))

    return custom_map(value, d1, descriptor=f"gamma*zq'/q[{q.descriptor}]")


def th31_admissibility(q: AnalyticMap, gamma, cfg: ProbeConfig = ProbeConfig()) -> LemmaReport:
    """Starlikeness of ``Q = gamma z q'/q`` and ``Re(z h'/Q) > 0`` with ``h = 1 + Q``."""
    gamma = as_complex(gamma, "gamma")
    if gamma == 0:
        raise QNotAdmissible("gamma must be non-zero")
    Q = th31_auxiliary(q, gamma)
    probe = Q(circle(cfg.r_max, 256))
    if abs(complex(Q.d1(0.0))) <= cfg.tol or np.max(np.abs(probe)) <= cfg.tol:
        raise QNotAdmissible("Q = gamma z q'/q is degenerate (q' vanishes at 0)")
    star = starlike_margin(Q, cfg)
    zh = min_re_on_probes(lambda z: z * Q.d1(z) / Q(z), cfg)
    margin = min(star.value, zh.value)
    details = {"starlike_min_re": star.value, "zh_over_Q_min_re": zh.value,
               "per_radius": star.per_radius}
    return LemmaReport("th31_admissibility", classify(margin, cfg.tol), margin, details)


def th32_admissibility(q: AnalyticMap, sigma, gamma,
                       cfg: ProbeConfig = ProbeConfig()) -> LemmaReport:
    """``Re(1 + z q''/q') > max(0, -Re(sigma/gamma))`` on the probes."""
    sigma = as_complex(sigma, "sigma")
    gamma = as_complex(gamma, "gamma")
    if gamma == 0:
        raise ParameterError("gamma must be non-zero")
    threshold = max(0.0, -(sigma / gamma).real)
    cm = convex_margin(q, cfg)
    margin = cm.value - threshold
    details = {"min_re": cm.value, "threshold": threshold, "per_radius": cm.per_radius}
    return LemmaReport("th32_admissibility", classify(margin, cfg.tol), margin, details)


# -- grid sweeps ---------------------------------------------------------------

def royster_distance(lam: complex) -> float:
    """Signed distance to the boundary of the Royster region (positive inside)."""
    return max(1 - abs(lam + 1), 1 - abs(lam - 1))


def royster_point(lam, cfg: ProbeConfig = ProbeConfig(), band: float = 0.05) -> LemmaReport:
    """Compare Royster membership of ``lam`` with a numerical univalence check of ``(1-z)^lam``."""
    lam = as_complex(lam, "lambda")
    member = royster_region(lam)
    uni = univalence_check(make_binomial_power(-1.0, lam), cfg, use_certificates=False)
    dist = royster_distance(lam)
    details = {"member": member, "univalence": str(uni.status), "distance": dist}
    if uni.witness is not None:
        details["witness"] = uni.witness
    if abs(dist) <= band or uni.status is Univalence.UNKNOWN:
        return LemmaReport("royster_scan", Outcome.INCONCLUSIVE, dist, details)
    if not member and uni.certified:
        # collisions of a non-member can sit beyond r_max, e.g. near z = 1 for imaginary lam
        details["collision_beyond_probes"] = True
        return LemmaReport("royster_scan", Outcome.INCONCLUSIVE, dist, details)
    agree = member == uni.certified
    return LemmaReport("royster_scan", Outcome.PASS if agree else Outcome.FAIL, dist, details)
