"""The operator ``F[f] = (f'/(p z^(p-1)))^eta (z^p/f)^mu`` and the functionals around it.

Principal powers are taken of the two ratio forms, which both equal 1 at the
origin.  No branch continuation is attempted: a base landing on the cut
``(-inf, 0]`` is an error.  At ``z = 0`` the analytic limits are returned.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import series as ps
from .disk import ProbeConfig, Status, min_re_on_probes
from .errors import (
    BaseOnBranchCut,
    DerivativeVanishes,
    ParameterError,
    QVanishes,
    VanishingBase,
    VanishingDenominator,
)
from .series import PowerSeries, as_complex
from .zoo import AnalyticMap, custom_map

_TINY = 1e-300


@dataclass(frozen=True)
class OperatorParams:
    eta: complex
    mu: complex
    p: int = 1
    gamma: complex = 1.0
    sigma: complex = 0.0

    def __post_init__(self):
        for name in ("eta", "mu", "gamma", "sigma"):
            object.__setattr__(self, name, as_complex(getattr(self, name), name))
        if int(self.p) != self.p or self.p < 1:
            raise ParameterError("valence p must be a positive integer")
        object.__setattr__(self, "p", int(self.p))
        if self.eta == 0 and self.mu == 0:
            raise ParameterError("eta and mu must not both vanish")

    @property
    def first_coefficient_factor(self) -> complex:
        """``eta - mu + eta/p``, the factor in front of ``a_{p+1} z``."""
        return self.eta - self.mu + self.eta / self.p


@dataclass(frozen=True)
class ClassParams:
    p: int = 1
    spiral_angle: float = 0.0
    alpha: float = 0.0
    b: complex = 1.0

    def __post_init__(self):
        if int(self.p) != self.p or self.p < 1:
            raise ParameterError("valence p must be a positive integer")
        if not abs(self.spiral_angle) < math.pi / 2:
            raise ParameterError("need |lambda| < pi/2")
        if not 0.0 <= self.alpha < 1.0:
            raise ParameterError("need 0 <= alpha < 1")
        object.__setattr__(self, "b", as_complex(self.b, "b"))
        if self.b == 0:
            raise ParameterError("b must be non-zero")


def _check_valence(f: AnalyticMap, p: int) -> None:
    if f.valence is not None and f.valence != p:
        raise ParameterError(f"operator valence p={p} but f has valence {f.valence}")


def _arr(z):
    z = np.asarray(z, dtype=complex)
    return z, z.ndim == 0


def _out(val, scalar):
    return complex(val) if scalar else val


def ratio_bases(f: AnalyticMap, p: int, z) -> tuple[np.ndarray, np.ndarray]:
    """``f'(z)/(p z^(p-1))`` and ``z^p/f(z)``, both 1 at ``z = 0``."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    at0 = z == 0
    zs = np.where(at0, 1.0, z)
    with np.errstate(divide="ignore", invalid="ignore"):
        if f.deriv_over_pzp1 is not None and f.over_zp is not None:
            r1 = np.asarray(f.deriv_over_pzp1(zs), dtype=complex)
            r2 = 1.0 / np.asarray(f.over_zp(zs), dtype=complex)
        else:
            r1 = np.asarray(f.d1(zs), dtype=complex) / (p * zs ** (p - 1))
            r2 = zs ** p / np.asarray(f(zs), dtype=complex)
    r1 = np.where(at0, 1.0, r1)
    r2 = np.where(at0, 1.0, r2)
    return r1, r2


def _principal_power(base: np.ndarray, expo: complex, label: str) -> np.ndarray:
    if expo == 0:
        return np.ones_like(base)
    if np.any(~np.isfinite(base)) or np.any(np.abs(base) <= _TINY):
        raise VanishingBase(f"{label} vanishes or is not finite")
    if np.any((base.imag == 0) & (base.real < 0)):
        raise BaseOnBranchCut(f"{label} lies on the principal cut")
    return np.exp(expo * np.log(base))


def F_op(f: AnalyticMap, params: OperatorParams, z):
    """``(f'/(p z^(p-1)))^eta (z^p/f)^mu`` with principal powers."""
    _check_valence(f, params.p)
    z, scalar = _arr(z)
    r1, r2 = ratio_bases(f, params.p, z)
    val = (_principal_power(r1, params.eta, "f'/(p z^(p-1))")
           * _principal_power(r2, params.mu, "z^p/f"))
    return _out(val.reshape(z.shape), scalar)


def log_derivative_bracket(f: AnalyticMap, params: OperatorParams, z):
    """``eta(1 - p + z f''/f') + mu(p - z f'/f)``, which equals ``z F'/F``."""
    _check_valence(f, params.p)
    z, scalar = _arr(z)
    zz = np.atleast_1d(z)
    at0 = zz == 0
    zs = np.where(at0, 0.5, zz)
    p = params.p
    fv, d1, d2 = (np.asarray(fn(zs), dtype=complex) for fn in (f, f.d1, f.d2))
    if np.any(np.abs(d1[~at0]) <= _TINY):
        raise DerivativeVanishes("f'(z) vanishes")
    if np.any(np.abs(fv[~at0]) <= _TINY):
        raise DerivativeVanishes("f(z) vanishes")
    br = params.eta * (1 - p + zs * d2 / d1) + params.mu * (p - zs * d1 / fv)
    br = np.where(at0, 0.0, br)
    return _out(br.reshape(z.shape), scalar)


def th31_lhs(f: AnalyticMap, params: OperatorParams, z):
    """``1 + gamma [eta(1 - p + z f''/f') + mu(p - z f'/f)]``."""
    z, scalar = _arr(z)
    val = 1 + params.gamma * np.asarray(log_derivative_bracket(f, params, z))
    return _out(val, scalar)


def psi_op(f: AnalyticMap, params: OperatorParams, z):
    """``F[f](z) (sigma + gamma [ ... ])``, i.e. ``sigma F + gamma z F'``."""
    z, scalar = _arr(z)
    val = (np.asarray(F_op(f, params, z))
           * (params.sigma + params.gamma * np.asarray(log_derivative_bracket(f, params, z))))
    return _out(val, scalar)


def dominant_rhs_th31(q: AnalyticMap, gamma, z):
    """``1 + gamma z q'(z)/q(z)``."""
    gamma = as_complex(gamma, "gamma")
    z, scalar = _arr(z)
    qv = np.asarray(q(z))
    if np.any(np.abs(qv) <= _TINY):
        raise QVanishes("q(z) vanishes")
    return _out(1 + gamma * z * np.asarray(q.d1(z)) / qv, scalar)


def dominant_rhs_th32(q: AnalyticMap, sigma, gamma, z):
    """``sigma q(z) + gamma z q'(z)``."""
    sigma = as_complex(sigma, "sigma")
    gamma = as_complex(gamma, "gamma")
    z, scalar = _arr(z)
    return _out(sigma * np.asarray(q(z)) + gamma * z * np.asarray(q.d1(z)), scalar)


def spirallike_functional(f: AnalyticMap, cls: ClassParams, z):
    """``(1/(b cos l)) [e^{il} z f'/(p f) - (1-b) cos l - i sin l]``."""
    z, scalar = _arr(z)
    zz = np.atleast_1d(z)
    at0 = zz == 0
    zs = np.where(at0, 0.5, zz)
    fv = np.asarray(f(zs), dtype=complex)
    if np.any(np.abs(fv[~at0]) <= _TINY):
        raise VanishingDenominator("f(z) vanishes")
    ratio = np.where(at0, 1.0, zs * np.asarray(f.d1(zs)) / (cls.p * fv))
    val = _normalize(ratio, cls)
    return _out(val.reshape(z.shape), scalar)


def robertson_functional(f: AnalyticMap, cls: ClassParams, z):
    """Same normalisation applied to ``(1/p)(1 + z f''/f')``."""
    z, scalar = _arr(z)
    zz = np.atleast_1d(z)
    at0 = zz == 0
    zs = np.where(at0, 0.5, zz)
    d1 = np.asarray(f.d1(zs), dtype=complex)
    if np.any(np.abs(d1[~at0]) <= _TINY):
        raise VanishingDenominator("f'(z) vanishes")
    ratio = np.where(at0, 1.0, (1 + zs * np.asarray(f.d2(zs)) / d1) / cls.p)
    val = _normalize(ratio, cls)
    return _out(val.reshape(z.shape), scalar)


def _normalize(ratio, cls: ClassParams):
    lam, b = cls.spiral_angle, cls.b
    c = math.cos(lam)
    return (cmath.exp(1j * lam) * ratio - (1 - b) * c - 1j * math.sin(lam)) / (b * c)


@dataclass(frozen=True)
class Membership:
    status: Status
    margin: float
    z_min: complex
    min_re: float


def class_membership(f: AnalyticMap, cls: ClassParams, which: str = "spirallike",
                     cfg: ProbeConfig = ProbeConfig()) -> Membership:
    """Compare the probe minimum of ``Re(functional)`` with ``alpha``.

    ``margin`` is ``min Re - alpha``; within ``tol`` of zero the result is
    ``Inconclusive``.
    """
    if which == "spirallike":
        fn = spirallike_functional
    elif which == "robertson":
        fn = robertson_functional
    else:
        raise ParameterError(f"unknown class {which!r}")
    _check_valence(f, cls.p)
    pm = min_re_on_probes(lambda z: fn(f, cls, z), cfg)
    margin = pm.value - cls.alpha
    if margin > cfg.tol:
        status = Status.HOLDS
    elif margin < -cfg.tol:
        status = Status.FAILS
    else:
        status = Status.INCONCLUSIVE
    return Membership(status, margin, pm.z, pm.value)


# -- maps and series -----------------------------------------------------------

def operator_map(f: AnalyticMap, params: OperatorParams) -> AnalyticMap:
    return custom_map(lambda z: F_op(f, params, z),
                      descriptor=f"F[{f.descriptor}](eta={params.eta},mu={params.mu})")


def th31_lhs_map(f: AnalyticMap, params: OperatorParams) -> AnalyticMap:
    return custom_map(lambda z: th31_lhs(f, params, z), descriptor=f"th31_lhs[{f.descriptor}]")


def psi_map(f: AnalyticMap, params: OperatorParams) -> AnalyticMap:
    return custom_map(lambda z: psi_op(f, params, z), descriptor=f"Psi[{f.descriptor}]")


def th31_rhs_map(q: AnalyticMap, gamma) -> AnalyticMap:
    return custom_map(lambda z: dominant_rhs_th31(q, gamma, z),
                      descriptor=f"1+gamma*zq'/q[{q.descriptor}]")


def th32_rhs_map(q: AnalyticMap, sigma, gamma) -> AnalyticMap:
    """``sigma q + gamma z q'`` with closed-form derivatives."""
    sigma = as_complex(sigma)
    gamma = as_complex(gamma)
    return custom_map(
        lambda z: dominant_rhs_th32(q, sigma, gamma, z),
        lambda z: (sigma + gamma) * q.d1(z) + gamma * z * q.d2(z),
        descriptor=f"sigma*q+gamma*zq'[{q.descriptor}]",
    )


def operator_series(f: AnalyticMap, params: OperatorParams, order: int = ps.DEFAULT_ORDER
                    ) -> PowerSeries:
    """Taylor coefficients of ``F[f]`` at the origin up to ``order``."""
    p = params.p
    _check_valence(f, p)
    fs = f.series_at_origin(order + p + 1)
    c = fs.coeffs
    if abs(c[p] - 1) > 1e-12 or np.any(np.abs(c[:p]) > 1e-12):
        raise ParameterError("f is not normalised as z^p + ...")
    over = PowerSeries(c[p : p + order + 1])
    k = np.arange(p, p + order + 1)
    dover = PowerSeries(k * c[p : p + order + 1] / p)
    return ps.series_mul(ps.series_pow(dover, params.eta),
                         ps.series_pow(ps.series_div(PowerSeries.constant(1, order), over),
                                       params.mu))
