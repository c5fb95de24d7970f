"""Truncated complex power series about the origin.

A :class:`PowerSeries` holds the Taylor coefficients ``c_0 .. c_N`` of a
function analytic near 0.  Coefficients beyond ``N`` are *unknown*, not zero,
so every binary operation truncates to the shorter operand::

    >>> a = PowerSeries([1, 1])          # 1 + z
    >>> b = PowerSeries([1, -1])         # 1 - z
    >>> (a * b).coeffs
    array([1.+0.j, 0.+0.j])

The order of ``a * b`` is 1, so the ``-z**2`` term is dropped.  Use
:meth:`PowerSeries.padded` to extend an exact polynomial with zeros before
combining it with a longer series.

Values are immutable; the coefficient array is marked read-only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from .errors import DomainError, NearZeroConstantTerm

DEFAULT_ORDER = 64
DIVISION_FLOOR = 1e-14

Number = Union[int, float, complex]


@dataclass(frozen=True, eq=False)
class PowerSeries:
    """Truncated Taylor expansion ``sum_k coeffs[k] z**k`` with ``k <= order``."""

    coeffs: np.ndarray

    def __init__(self, coeffs: Iterable[Number]):
        arr = np.array(coeffs, dtype=complex).reshape(-1)
        if arr.size == 0:
            raise ValueError("a power series needs at least one coefficient")
        if not np.all(np.isfinite(arr)):
            raise ValueError("power series coefficients must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @classmethod
    def zero(cls, order: int = DEFAULT_ORDER) -> "PowerSeries":
        return cls(np.zeros(order + 1))

    @classmethod
    def constant(cls, value: Number, order: int = DEFAULT_ORDER) -> "PowerSeries":
        c = np.zeros(order + 1, dtype=complex)
        c[0] = value
        return cls(c)

    @classmethod
    def identity(cls, order: int = DEFAULT_ORDER) -> "PowerSeries":
        """The series of ``f(z) = z``."""
        c = np.zeros(order + 1, dtype=complex)
        c[1] = 1.0
        return cls(c)

    def padded(self, order: int) -> "PowerSeries":
        """Treat the coefficients as exact and extend with zeros up to ``order``."""
        if order <= self.order:
            return truncate(self, order)
        c = np.zeros(order + 1, dtype=complex)
        c[: self.coeffs.size] = self.coeffs
        return PowerSeries(c)

    def __getitem__(self, k: int) -> complex:
        return complex(self.coeffs[k])

    def __len__(self) -> int:
        return self.coeffs.size

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self.order == other.order and bool(np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self) -> int:
        return hash(self.coeffs.tobytes())

    def __repr__(self) -> str:
        head = ", ".join(f"{c:.6g}" for c in self.coeffs[:6])
        tail = ", ..." if self.order >= 6 else ""
        return f"PowerSeries(order={self.order}, [{head}{tail}])"

    def __add__(self, other):
        return series_add(self, _coerce(other, self.order))

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries(-self.coeffs)

    def __sub__(self, other):
        return series_add(self, -_coerce(other, self.order))

    def __rsub__(self, other):
        return series_add(_coerce(other, self.order), -self)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return PowerSeries(self.coeffs * other)
        return series_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return PowerSeries(self.coeffs / other)
        return series_div(self, other)

    def __rtruediv__(self, other):
        return series_div(_coerce(other, self.order), self)

    def __call__(self, z):
        return series_eval(self, z)

    def derive(self) -> "PowerSeries":
        return series_derive(self)

    def shift_down(self) -> "PowerSeries":
        """Series of ``(f(z) - f(0)) / z``; order drops by one."""
        if self.order == 0:
            raise DomainError("cannot divide an order-0 series by z")
        return PowerSeries(self.coeffs[1:])

    def times_z(self) -> "PowerSeries":
        """Series of ``z * f(z)`` at the same order (top coefficient drops)."""
        c = np.zeros_like(self.coeffs)
        c[1:] = self.coeffs[:-1]
        return PowerSeries(c)

    def is_normalized(self, atol: float = 1e-12) -> bool:
        """True when ``c_0 = 0`` and ``c_1 = 1``, i.e. the function lies in class A."""
        return self.order >= 1 and abs(self.coeffs[0]) <= atol and abs(self.coeffs[1] - 1) <= atol


def _coerce(x, order: int) -> PowerSeries:
    if isinstance(x, PowerSeries):
        return x
    return PowerSeries.constant(x, order)


def truncate(a: PowerSeries, order: int) -> PowerSeries:
    if order < 0:
        raise DomainError("truncation order must be >= 0")
    return PowerSeries(a.coeffs[: order + 1])


def series_add(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    n = min(a.order, b.order) + 1
    return PowerSeries(a.coeffs[:n] + b.coeffs[:n])


def series_mul(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """Cauchy product truncated to the shorter operand."""
    n = min(a.order, b.order) + 1
    return PowerSeries(np.convolve(a.coeffs[:n], b.coeffs[:n])[:n])


def series_div(a: PowerSeries, b: PowerSeries, floor: float = DIVISION_FLOOR) -> PowerSeries:
    """Quotient ``q`` with ``q * b == a`` through the common truncation order.

    Raises :class:`NearZeroConstantTerm` if ``|b_0| < floor``.
    """
    b0 = b.coeffs[0]
    if abs(b0) < floor:
        raise NearZeroConstantTerm(f"constant term of divisor is {abs(b0):.3e} < {floor:g}")
    n = min(a.order, b.order) + 1
    ac = a.coeffs[:n]
    bc = b.coeffs[:n]
    q = np.zeros(n, dtype=complex)
    q[0] = ac[0] / b0
    for k in range(1, n):
        # q_k = (a_k - sum_{j=1..k} b_j q_{k-j}) / b_0
        q[k] = (ac[k] - np.dot(bc[1 : k + 1], q[k - 1 :: -1])) / b0
    return PowerSeries(q)


def series_derive(a: PowerSeries) -> PowerSeries:
    if a.order == 0:
        return PowerSeries([0.0])
    k = np.arange(1, a.order + 1)
    return PowerSeries(a.coeffs[1:] * k)


def series_eval(a: PowerSeries, z):
    """Horner evaluation; ``z`` may be a scalar or an array (broadcast)."""
    z_arr = np.asarray(z, dtype=complex)
    nz = np.flatnonzero(a.coeffs)
    coeffs = a.coeffs[: nz[-1] + 1] if nz.size else a.coeffs[:1]
    acc = np.full(z_arr.shape, coeffs[-1], dtype=complex)
    for c in coeffs[-2::-1]:
        acc = acc * z_arr + c
    if acc.ndim == 0:
        return complex(acc)
    return acc


def dilate(a: PowerSeries, t: float) -> PowerSeries:
    """Series of ``f(t z) / t``: coefficient ``c_k`` becomes ``c_k t**(k-1)``.

    For a normalized ``f`` the result is again normalized.
    """
    if not (0.0 < t <= 1.0):
        raise DomainError(f"dilation factor must lie in (0, 1], got {t!r}")
    k = np.arange(a.order + 1)
    scale = np.empty(a.order + 1)
    scale[1:] = t ** (k[1:] - 1.0)
    scale[0] = 1.0 / t
    return PowerSeries(a.coeffs * scale)
