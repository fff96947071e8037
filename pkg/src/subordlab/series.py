"""Truncated Taylor series at the origin with complex coefficients.

A :class:`PowerSeries` holds ``c_0 .. c_N``.  Binary operations truncate to
the smaller order.  ``log``, ``exp`` and complex powers use the principal
branch; constant terms on the cut ``(-inf, 0]`` are rejected rather than
resolved by a side convention.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from numbers import Number
from typing import Iterable, Union

import numpy as np

from .errors import (
    ConstantTermOnBranchCut,
    DivisionByNearZeroConstantTerm,
    InnerNotZeroAtOrigin,
    NonFiniteValue,
)

DEFAULT_ORDER = 24
EPS_DIV = 1e-12
EPS_COMPOSE = 1e-14


def as_complex(value, name: str = "value") -> complex:
    """Coerce ``value`` to a finite Python complex."""
    z = complex(value)
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise NonFiniteValue(f"{name} must be finite, got {value!r}")
    return z


@dataclass(frozen=True, eq=False)
class PowerSeries:
    """Coefficients ``c_0 .. c_N`` of a truncated series in ``z``."""

    coeffs: np.ndarray

    def __init__(self, coeffs: Iterable, order: int | None = None):
        c = np.array(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs,
                     dtype=complex).ravel()
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        if order is not None:
            if order < 0:
                raise ValueError("order must be non-negative")
            if c.size < order + 1:
                c = np.concatenate([c, np.zeros(order + 1 - c.size, dtype=complex)])
            else:
                c = c[: order + 1].copy()
        if not np.all(np.isfinite(c)):
            raise NonFiniteValue("series coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def __len__(self) -> int:
        return self.coeffs.size

    def __getitem__(self, k: int) -> complex:
        return complex(self.coeffs[k])

    def __repr__(self) -> str:
        shown = ", ".join(f"{c:.6g}" for c in self.coeffs[:6])
        more = ", ..." if self.order >= 6 else ""
        return f"PowerSeries([{shown}{more}], order={self.order})"

    @classmethod
    def constant(cls, c, order: int = DEFAULT_ORDER) -> "PowerSeries":
        return cls([as_complex(c)], order)

    @classmethod
    def identity(cls, order: int = DEFAULT_ORDER) -> "PowerSeries":
        """The series ``z``."""
        return cls([0.0, 1.0], order)

    def truncate(self, order: int) -> "PowerSeries":
        return PowerSeries(self.coeffs, min(order, self.order))

    def __call__(self, z):
        """Horner evaluation; accepts scalars or arrays."""
        z = np.asarray(z, dtype=complex)
        acc = np.zeros_like(z)
        for c in self.coeffs[::-1]:
            acc = acc * z + c
        return acc if acc.ndim else complex(acc)

    def _coerce(self, other) -> "PowerSeries":
        if isinstance(other, PowerSeries):
            return other
        if isinstance(other, Number):
            return PowerSeries.constant(other, self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return series_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries(-self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return series_add(self, -other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, Number):
            return PowerSeries(self.coeffs * as_complex(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return series_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Number):
            return PowerSeries(self.coeffs / as_complex(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return series_div(self, other)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return series_div(other, self)

    def __pow__(self, exponent):
        return series_pow(self, exponent)


Scalar = Union[complex, float, int]


def _common(s1: PowerSeries, s2: PowerSeries) -> tuple[np.ndarray, np.ndarray, int]:
    n = min(s1.order, s2.order)
    return s1.coeffs[: n + 1], s2.coeffs[: n + 1], n


def series_add(s1: PowerSeries, s2: PowerSeries) -> PowerSeries:
    a, b, _ = _common(s1, s2)
    return PowerSeries(a + b)


def series_mul(s1: PowerSeries, s2: PowerSeries) -> PowerSeries:
    """Cauchy product truncated at the smaller order."""
    a, b, n = _common(s1, s2)
    return PowerSeries(np.convolve(a, b)[: n + 1])


def _check_unit(c0: complex) -> None:
    if abs(c0) <= EPS_DIV:
        raise DivisionByNearZeroConstantTerm(
            f"constant term {c0!r} has modulus <= {EPS_DIV:g}")


def series_div(s1: PowerSeries, s2: PowerSeries) -> PowerSeries:
    """Long division ``s1 / s2``; ``s2`` must have a unit constant term."""
    a, b, n = _common(s1, s2)
    _check_unit(complex(b[0]))
    q = np.zeros(n + 1, dtype=complex)
    for k in range(n + 1):
        q[k] = (a[k] - np.dot(q[:k], b[k:0:-1])) / b[0]
    return PowerSeries(q)


def series_derivative(s: PowerSeries) -> PowerSeries:
    """Coefficient ``k`` of the result is ``(k+1) c_{k+1}``; order drops by one."""
    if s.order == 0:
        return PowerSeries([0.0], 0)
    k = np.arange(1, s.order + 1)
    return PowerSeries(k * s.coeffs[1:])


def series_integral(s: PowerSeries, constant: Scalar = 0.0) -> PowerSeries:
    """Antiderivative with the given constant term; order rises by one."""
    k = np.arange(1, s.order + 2)
    return PowerSeries(np.concatenate([[as_complex(constant)], s.coeffs / k]))


def series_exp(s: PowerSeries) -> PowerSeries:
    # e' = s' e  =>  k e_k = sum_{j=1..k} j s_j e_{k-j}
    n = s.order
    c = s.coeffs
    e = np.zeros(n + 1, dtype=complex)
    e[0] = cmath.exp(c[0])
    j = np.arange(1, n + 1)
    for k in range(1, n + 1):
        e[k] = np.dot(j[:k] * c[1 : k + 1], e[k - 1 :: -1][:k]) / k
    return PowerSeries(e)


def _check_off_cut(c0: complex) -> None:
    _check_unit(c0)
    if c0.imag == 0.0 and c0.real <= 0.0:
        raise ConstantTermOnBranchCut(
            f"constant term {c0!r} lies on the principal cut (-inf, 0]")


def series_log(s: PowerSeries) -> PowerSeries:
    """Principal logarithm; needs ``c_0`` off the cut ``(-inf, 0]``."""
    c = s.coeffs
    c0 = complex(c[0])
    _check_off_cut(c0)
    n = s.order
    # s l' = s'  =>  k c0 l_k = k c_k - sum_{j=1..k-1} j l_j c_{k-j}
    out = np.zeros(n + 1, dtype=complex)
    out[0] = cmath.log(c0)
    for k in range(1, n + 1):
        j = np.arange(1, k)
        acc = k * c[k] - np.dot(j * out[1:k], c[k - 1 : 0 : -1]) if k > 1 else k * c[k]
        out[k] = acc / (k * c0)
    return PowerSeries(out)


def series_pow(s: PowerSeries, lambda_power: Scalar) -> PowerSeries:
    """Principal power ``exp(lambda * log s)``."""
    lam = as_complex(lambda_power, "lambda_power")
    if lam == 0:
        _check_off_cut(complex(s.coeffs[0]))
        return PowerSeries.constant(1.0, s.order)
    return series_exp(series_log(s) * lam)


def series_compose(outer: PowerSeries, inner: PowerSeries) -> PowerSeries:
    """``outer(inner(z))`` by Horner's scheme; ``inner(0)`` must vanish."""
    if abs(inner[0]) > EPS_COMPOSE:
        raise InnerNotZeroAtOrigin(f"inner constant term {inner[0]!r} is not zero")
    n = min(outer.order, inner.order)
    w = PowerSeries(np.concatenate([[0.0], inner.coeffs[1 : n + 1]]))
    acc = PowerSeries.constant(outer[n], n)
    for k in range(n - 1, -1, -1):
        acc = series_mul(acc, w) + outer[k]
    return acc


def max_coeff_error(s1: PowerSeries, s2: PowerSeries) -> float:
    a, b, _ = _common(s1, s2)
    return float(np.max(np.abs(a - b)))
