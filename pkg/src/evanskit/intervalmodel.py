"""Closed-form boundary maps of ``-d^2/dx^2`` on the unit interval ``(0, 1)``.

These serve as exact oracles.  ``cos sqrt(lam)`` and ``sinc sqrt(lam)`` are
even in ``sqrt(lam)``, hence entire in ``lam``; any square root gives the
same value.

The Schrodinger module works on ``(-1, 1)``.  The affine map ``x = 2 s - 1``
relates the two: a problem of length 2 at ``lam`` corresponds to length 1 at
``4 lam``, Neumann data pick up a factor 1/2, so

    M_(-1,1)(lam) = M_(0,1)(4 lam) / 2,
    det N^(-1,1)_Theta(lam) = 4 det N^(0,1)_(2 Theta)(4 lam).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DirichletEigenvalue, RobinEigenvalue

SERIES_CUTOFF = 1e-6
DIRICHLET_TOL = 1e-12


@dataclass(frozen=True)
class Theta2x2:
    t11: complex = 0.0
    t12: complex = 0.0
    t21: complex = 0.0
    t22: complex = 0.0

    @classmethod
    def from_matrix(cls, m) -> "Theta2x2":
        m = np.asarray(m, dtype=complex)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @classmethod
    def scalar(cls, value: complex) -> "Theta2x2":
        return cls(value, 0.0, 0.0, value)

    def matrix(self) -> np.ndarray:
        return np.array([[self.t11, self.t12], [self.t21, self.t22]], dtype=complex)

    @property
    def det(self) -> complex:
        return self.t11 * self.t22 - self.t12 * self.t21

    @property
    def trace(self) -> complex:
        return self.t11 + self.t22

    def scaled(self, factor: complex) -> "Theta2x2":
        return Theta2x2(factor * self.t11, factor * self.t12, factor * self.t21, factor * self.t22)


def cosqrt(lam):
    """``cos(sqrt(lam))`` as an entire function of ``lam``."""
    lam = np.asarray(lam, dtype=complex)
    w = np.sqrt(lam)
    small = np.abs(lam) < SERIES_CUTOFF
    series = 1 - lam / 2 + lam**2 / 24
    out = np.where(small, series, np.cos(w))
    return out[()] if out.ndim == 0 else out


def sincqrt(lam):
    """``sin(sqrt(lam)) / sqrt(lam)`` as an entire function of ``lam``."""
    lam = np.asarray(lam, dtype=complex)
    w = np.sqrt(lam)
    small = np.abs(lam) < SERIES_CUTOFF
    safe_w = np.where(small, 1.0, w)
    series = 1 - lam / 6 + lam**2 / 120
    out = np.where(small, series, np.sin(safe_w) / safe_w)
    return out[()] if out.ndim == 0 else out


def m_closed(lam) -> np.ndarray:
    """Dirichlet-to-Neumann matrix ``[[a, -b], [-b, a]]`` on ``(0, 1)``."""
    s = sincqrt(lam)
    if np.abs(s) < DIRICHLET_TOL:
        raise DirichletEigenvalue(lam)
    a = cosqrt(lam) / s
    b = 1 / s
    return np.array([[a, -b], [-b, a]], dtype=complex)


def robin_denominator(lam, theta: Theta2x2):
    """``(det Theta - lam) sinc + tr Theta cos + t12 + t21``; zero on the Robin spectrum."""
    return (theta.det - lam) * sincqrt(lam) + theta.trace * cosqrt(lam) + theta.t12 + theta.t21


def det_n_theta(lam, theta: Theta2x2, tol: float = 1e-12):
    """``det N_Theta(lam)`` on ``(0, 1)``; vectorised over ``lam``."""
    den = robin_denominator(lam, theta)
    scale = 1 + np.abs(lam)
    if np.any(np.abs(den) < tol * scale):
        raise RobinEigenvalue(lam)
    return sincqrt(lam) / den


def dirichlet_eigenvalues(count: int, length: float = 1.0) -> np.ndarray:
    """``(k pi / length)^2`` for ``k = 1..count``."""
    return (np.arange(1, count + 1) * np.pi / length) ** 2


def dirichlet_count(lam1: float, lam2: float, length: float = 1.0) -> int:
    """Number of Dirichlet eigenvalues of ``-d^2/dx^2`` on an interval inside ``[lam1, lam2]``."""
    kmin = max(1, int(np.ceil(np.sqrt(max(lam1, 0.0)) * length / np.pi)))
    kmax = int(np.floor(np.sqrt(max(lam2, 0.0)) * length / np.pi))
    return max(0, kmax - kmin + 1)


def m_on_length2(lam) -> np.ndarray:
    """Closed-form Dirichlet-to-Neumann matrix of ``(-1, 1)``."""
    return m_closed(4 * np.asarray(lam, dtype=complex)) / 2


def det_n_theta_on_length2(lam, theta: Theta2x2):
    """Closed-form ``det N_Theta`` of ``(-1, 1)`` via rescaling to ``(0, 1)``."""
    return 4 * det_n_theta(4 * np.asarray(lam, dtype=complex), theta.scaled(2))
