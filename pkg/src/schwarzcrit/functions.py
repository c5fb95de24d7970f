"""Built-in normalized test functions, expanded as power series."""

from __future__ import annotations

import math

import numpy as np

from .series import DEFAULT_ORDER, PowerSeries

NEHARI_TWO_DELTA = math.pi**2 / 2


def nehari(order: int = DEFAULT_ORDER) -> PowerSeries:
    """``(exp(i pi z) - 1) / (i pi)``, extremal for the ``pi**2/2`` univalence bound.

    Its Schwarzian is the constant ``pi**2 / 2``.
    """
    a = 1j * math.pi
    c = np.zeros(order + 1, dtype=complex)
    term = 1.0 + 0j  # a**(k-1) / k!
    for k in range(1, order + 1):
        term = term * (a if k > 1 else 1.0) / k
        c[k] = term
    return PowerSeries(c)


def moebius(c: complex, order: int = DEFAULT_ORDER) -> PowerSeries:
    """``z / (1 + c z)``; second coefficient ``-c``, Schwarzian zero."""
    k = np.arange(order + 1)
    coeffs = np.zeros(order + 1, dtype=complex)
    coeffs[1:] = (-complex(c)) ** (k[1:] - 1)
    return PowerSeries(coeffs)


def koebe(order: int = DEFAULT_ORDER) -> PowerSeries:
    """``z / (1 - z)**2 = sum k z**k``, truncated."""
    return PowerSeries(np.arange(order + 1, dtype=complex))


def polynomial(coeffs, order: int = DEFAULT_ORDER) -> PowerSeries:
    """Exact polynomial coefficients zero-padded to ``order``."""
    return PowerSeries(coeffs).padded(order)
