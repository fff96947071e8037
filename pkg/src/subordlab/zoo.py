"""Closed-form analytic maps on the unit disk.

Every constructor returns an :class:`AnalyticMap` carrying the value, the
first two derivatives in closed form, and a series extractor.  Derivatives are
never obtained by differentiating truncated series: boundary scans run at
``|z| = 0.999`` where truncation error would dominate.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping, Optional

import numpy as np

from . import series as ps
from .errors import (
    COutOfRange,
    ExponentOutsideRoysterRegion,
    MissingDerivative,
    ParameterError,
    ParameterOrderViolated,
    ZeroB,
    ZeroLambda,
)
from .series import PowerSeries, as_complex

Evaluator = Callable[[np.ndarray], np.ndarray]


def _vec(fn: Evaluator) -> Evaluator:
    def wrapped(z):
        arr = np.asarray(z, dtype=complex)
        out = np.asarray(fn(arr), dtype=complex)
        if out.shape != arr.shape:
            out = np.broadcast_to(out, arr.shape).copy()
        return out if out.ndim else complex(out)

    return wrapped


@dataclass(frozen=True)
class AnalyticMap:
    """An analytic function on the open unit disk.

    ``family`` and ``params`` identify zoo members so that univalence can be
    certified analytically; ad-hoc maps use ``family="custom"``.  For p-valent
    maps ``valence`` is set, and ``over_zp`` / ``deriv_over_pzp1`` evaluate
    ``f(z)/z^p`` and ``f'(z)/(p z^(p-1))`` without dividing by powers of z.
    """

    evaluator: Evaluator
    descriptor: str
    derivative1: Optional[Evaluator] = None
    derivative2: Optional[Evaluator] = None
    series_fn: Optional[Callable[[int], PowerSeries]] = None
    family: str = "custom"
    params: Mapping[str, object] = field(default_factory=dict)
    valence: Optional[int] = None
    over_zp: Optional[Evaluator] = None
    deriv_over_pzp1: Optional[Evaluator] = None

    def __call__(self, z):
        return self.evaluator(z)

    def d1(self, z):
        if self.derivative1 is None:
            raise MissingDerivative(f"{self.descriptor} has no first derivative")
        return self.derivative1(z)

    def d2(self, z):
        if self.derivative2 is None:
            raise MissingDerivative(f"{self.descriptor} has no second derivative")
        return self.derivative2(z)

    def series_at_origin(self, order: int = ps.DEFAULT_ORDER) -> PowerSeries:
        if self.series_fn is None:
            raise MissingDerivative(f"{self.descriptor} has no series expansion")
        return self.series_fn(order)

    def __str__(self) -> str:
        return self.descriptor


def custom_map(value, d1=None, d2=None, descriptor="custom", series_fn=None,
               **extra) -> AnalyticMap:
    """Wrap plain callables (array in, array out) as an :class:`AnalyticMap`."""
    return AnalyticMap(
        evaluator=_vec(value),
        derivative1=_vec(d1) if d1 is not None else None,
        derivative2=_vec(d2) if d2 is not None else None,
        series_fn=series_fn,
        descriptor=descriptor,
        **extra,
    )


def _fmt(c) -> str:
    c = complex(c)
    if c.imag == 0:
        return repr(c.real)
    return f"{c.real!r}{'+' if c.imag >= 0 else '-'}{abs(c.imag)!r}i"


# -- Moebius dominants -----------------------------------------------------

MOEBIUS_CONVENTIONS = ("B<A", "A<B")


def make_moebius(A: float, B: float, convention: str = "B<A") -> AnalyticMap:
    """``q(z) = (1 + A z) / (1 + B z)``.

    ``convention="B<A"`` enforces ``-1 <= B < A <= 1`` as in the univalent
    family; ``"A<B"`` enforces the reversed ordering that some statements of
    the half-plane corollaries use.  The chosen convention is recorded in
    ``params`` and in the descriptor.
    """
    A = float(A)
    B = float(B)
    if convention not in MOEBIUS_CONVENTIONS:
        raise ParameterError(f"unknown convention {convention!r}")
    lo, hi = (B, A) if convention == "B<A" else (A, B)
    if not (-1.0 <= lo < hi <= 1.0):
        raise ParameterOrderViolated(
            f"need -1 <= {'B < A' if convention == 'B<A' else 'A < B'} <= 1, got A={A}, B={B}")

    def value(z):
        return (1 + A * z) / (1 + B * z)

    def d1(z):
        return (A - B) / (1 + B * z) ** 2

    def d2(z):
        return -2 * B * (A - B) / (1 + B * z) ** 3

    def series(order):
        return ps.series_div(PowerSeries([1.0, A], order), PowerSeries([1.0, B], order))

    desc = f"moebius:A={A!r},B={B!r}" + ("" if convention == "B<A" else ",conv=AB")
    return custom_map(value, d1, d2, desc, series,
                      family="moebius", params={"A": A, "B": B, "convention": convention})


# -- binomial powers (1 + B z)^lambda ---------------------------------------

def in_royster_region(lam: complex, slack: float = 1e-12) -> bool:
    lam = complex(lam)
    return abs(lam + 1) <= 1 + slack or abs(lam - 1) <= 1 + slack


def _principal_pow(base, lam: complex):
    # exp(lam * Log base); numpy's log is the principal branch
    return np.exp(lam * np.log(base))


def make_binomial_power(B: float, lambda_power) -> AnalyticMap:
    """``q(z) = (1 + B z)^lambda`` with the principal power."""
    B = float(B)
    lam = as_complex(lambda_power, "lambda_power")
    if not -1.0 <= B <= 1.0:
        raise ParameterError(f"need -1 <= B <= 1, got {B}")
    if B == 0.0:
        raise ZeroB("B must be non-zero")
    if lam == 0:
        raise ZeroLambda("lambda must be non-zero")

    def value(z):
        return _principal_pow(1 + B * z, lam)

    def d1(z):
        return lam * B * _principal_pow(1 + B * z, lam - 1)

    def d2(z):
        return lam * (lam - 1) * B * B * _principal_pow(1 + B * z, lam - 2)

    def series(order):
        return ps.series_pow(PowerSeries([1.0, B], order), lam)

    return custom_map(value, d1, d2, f"binpow:B={B!r},lam={_fmt(lam)}", series,
                      family="binomial_power",
                      params={"B": B, "lam": lam, "royster": in_royster_region(lam)})


# -- exponential dominant ----------------------------------------------------

def make_exp_line(C) -> AnalyticMap:
    """``q(z) = exp(C z)`` with ``|C| < pi``."""
    C = as_complex(C, "C")
    if not abs(C) < math.pi:
        raise COutOfRange(f"need |C| < pi, got |C| = {abs(C)}")

    def value(z):
        return np.exp(C * z)

    def d1(z):
        return C * np.exp(C * z)

    def d2(z):
        return C * C * np.exp(C * z)

    def series(order):
        k = np.arange(order + 1)
        fact = np.array([math.factorial(int(j)) for j in k], dtype=float)
        return PowerSeries(C ** k / fact)

    return custom_map(value, d1, d2, f"expline:C={_fmt(C)}", series,
                      family="exp_line", params={"C": C})


# -- spirallike dominant -----------------------------------------------------

def spiral_exponent(p: int, a, b, alpha: float, spiral_angle: float) -> complex:
    """``2 p a b (1 - alpha) e^{-i lambda} cos lambda``."""
    return (2 * p * as_complex(a) * as_complex(b) * (1 - alpha)
            * cmath.exp(-1j * spiral_angle) * math.cos(spiral_angle))


def make_constant(c, descriptor: str | None = None) -> AnalyticMap:
    c = as_complex(c)
    return custom_map(lambda z: np.full_like(z, c), lambda z: np.zeros_like(z),
                      lambda z: np.zeros_like(z),
                      descriptor or f"const:{_fmt(c)}",
                      lambda order: PowerSeries([c], order),
                      family="constant", params={"c": c})


def make_spiral_power(p: int, a, b, alpha: float, spiral_angle: float) -> AnalyticMap:
    """``q(z) = (1 - z)^(-E)`` with ``E = 2 p a b (1-alpha) e^{-i lambda} cos lambda``.

    An exponent outside the Royster region only triggers
    :class:`ExponentOutsideRoysterRegion` as a warning; the map is still built.
    """
    p = int(p)
    a = as_complex(a, "a")
    b = as_complex(b, "b")
    alpha = float(alpha)
    spiral_angle = float(spiral_angle)
    if p < 1:
        raise ParameterError("valence p must be a positive integer")
    if b == 0:
        raise ParameterError("complex order b must be non-zero")
    if not 0.0 <= alpha < 1.0 + 1e-15:
        raise ParameterError(f"need 0 <= alpha < 1, got {alpha}")
    if not abs(spiral_angle) < math.pi / 2:
        raise ParameterError(f"need |lambda| < pi/2, got {spiral_angle}")
    expo = spiral_exponent(p, a, b, alpha, spiral_angle)
    desc = f"spiralpow:p={p},a={_fmt(a)},b={_fmt(b)},alpha={alpha!r},lam={spiral_angle!r}"
    params = {"p": p, "a": a, "b": b, "alpha": alpha, "lam": spiral_angle,
              "exponent": expo}
    if abs(expo) < 1e-15:
        params["royster"] = False
        return replace(make_constant(1.0), descriptor=desc, family="spiral_power",
                       params=params)
    inner = make_binomial_power(-1.0, -expo)
    royster = in_royster_region(-expo)
    params["royster"] = royster
    if not royster:
        warnings.warn(f"exponent {expo} lies outside the Royster region; "
                      "univalence of the dominant is not asserted",
                      ExponentOutsideRoysterRegion, stacklevel=2)
    return replace(inner, descriptor=desc, family="spiral_power", params=params)


# -- p-valent polynomials ----------------------------------------------------

@dataclass(frozen=True)
class PValentFunction:
    """``f(z) = z^p + sum_k a_k z^k`` with ``k >= p + 1``."""

    p: int
    tail: Mapping[int, complex] = field(default_factory=dict)

    def __post_init__(self):
        if int(self.p) != self.p or self.p < 1:
            raise ParameterError("valence p must be a positive integer")
        clean = {}
        for k, a in dict(self.tail).items():
            if int(k) != k or k < self.p + 1:
                raise ParameterError(f"tail index {k} must be >= p+1 = {self.p + 1}")
            clean[int(k)] = as_complex(a, f"a{k}")
        object.__setattr__(self, "tail", dict(sorted(clean.items())))

    @property
    def tail_l1(self) -> float:
        return float(sum(abs(a) for a in self.tail.values()))

    def descriptor(self) -> str:
        parts = [f"poly:p={self.p}"] + [f"a{k}={_fmt(a)}" for k, a in self.tail.items()]
        return ";".join(parts)


def make_pvalent(spec: PValentFunction) -> AnalyticMap:
    """Polynomial evaluator with exact derivatives."""
    p = spec.p
    ks = np.array(list(spec.tail.keys()), dtype=float)
    aks = np.array(list(spec.tail.values()), dtype=complex)
    shift = ks - p

    def _sum(z, coef, powers):
        if aks.size == 0:
            return np.zeros_like(z)
        return np.sum(coef * z[..., None] ** powers, axis=-1)

    def value(z):
        return z ** p + _sum(z, aks, ks)

    def d1(z):
        return p * z ** (p - 1) + _sum(z, ks * aks, ks - 1)

    def d2(z):
        lead = p * (p - 1) * z ** (p - 2) if p >= 2 else np.zeros_like(z)
        return lead + _sum(z, ks * (ks - 1) * aks, np.maximum(ks - 2, 0))

    def over_zp(z):
        return 1 + _sum(z, aks, shift)

    def deriv_over_pzp1(z):
        return 1 + _sum(z, ks * aks / p, shift)

    def series(order):
        c = np.zeros(order + 1, dtype=complex)
        if p <= order:
            c[p] = 1
        for k, a in spec.tail.items():
            if k <= order:
                c[k] = a
        return PowerSeries(c)

    return AnalyticMap(
        evaluator=_vec(value), derivative1=_vec(d1), derivative2=_vec(d2),
        series_fn=series, descriptor=spec.descriptor(), family="pvalent",
        params={"p": p, "tail": dict(spec.tail)}, valence=p,
        over_zp=_vec(over_zp), deriv_over_pzp1=_vec(deriv_over_pzp1),
    )


def random_pvalent(rng: np.random.Generator, p: int, max_tail: int = 5,
                   scale: float = 0.3) -> PValentFunction:
    """Tail of length <= ``max_tail``; ``a_k`` uniform in the disk of radius ``scale/k^2``.

    With ``scale = 0.3`` the tail has ``sum |a_k| < 1``, which keeps
    ``f/z^p`` and ``f'/(p z^(p-1))`` away from zero on the disk.
    """
    n = int(rng.integers(1, max_tail + 1))
    tail = {}
    for k in range(p + 1, p + 1 + n):
        radius = scale / k ** 2 * math.sqrt(rng.uniform())
        tail[k] = radius * cmath.exp(2j * math.pi * rng.uniform())
    return PValentFunction(p, tail)


# -- handy non-zoo maps used by tests and the harness ------------------------

def make_polynomial(coeffs, descriptor: str | None = None) -> AnalyticMap:
    """``sum_k c_k z^k`` from a coefficient list."""
    c = np.array(coeffs, dtype=complex)
    ser = PowerSeries(c)
    d = ps.series_derivative(ser)
    dd = ps.series_derivative(d)
    return custom_map(ser, d, dd, descriptor or "polynomial[" + ",".join(_fmt(x) for x in c) + "]",
                      lambda order: PowerSeries(c, order), family="polynomial",
                      params={"coeffs": c.tolist()})


def make_koebe() -> AnalyticMap:
    """``z / (1 - z)^2`` as a 1-valent map."""

    def value(z):
        return z / (1 - z) ** 2

    def d1(z):
        return (1 + z) / (1 - z) ** 3

    def d2(z):
        return (4 + 2 * z) / (1 - z) ** 4

    def series(order):
        return PowerSeries(np.arange(order + 1, dtype=complex))

    return AnalyticMap(
        evaluator=_vec(value), derivative1=_vec(d1), derivative2=_vec(d2),
        series_fn=series, descriptor="koebe", family="koebe", valence=1,
        over_zp=_vec(lambda z: 1 / (1 - z) ** 2),
        deriv_over_pzp1=_vec(lambda z: (1 + z) / (1 - z) ** 3),
    )


def make_half_plane_primitive() -> AnalyticMap:
    """``z / (1 - z)``: the 1-valent map with ``f' = (1 - z)^-2``."""

    def series(order):
        c = np.ones(order + 1, dtype=complex)
        c[0] = 0
        return PowerSeries(c)

    return AnalyticMap(
        evaluator=_vec(lambda z: z / (1 - z)),
        derivative1=_vec(lambda z: 1 / (1 - z) ** 2),
        derivative2=_vec(lambda z: 2 / (1 - z) ** 3),
        series_fn=series, descriptor="z/(1-z)", family="custom", valence=1,
        over_zp=_vec(lambda z: 1 / (1 - z)),
        deriv_over_pzp1=_vec(lambda z: 1 / (1 - z) ** 2),
    )
