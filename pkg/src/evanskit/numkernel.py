"""Dense complex linear algebra and adaptive Runge-Kutta propagation.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  The linear
algebra is LAPACK backed (pivoted LU for ``det``/``solve``, Hessenberg
reduction plus shifted QR for ``eig``); the propagator is a Dormand-Prince
5(4) pair written out here so that it can advance arbitrarily shaped states,
in particular a whole batch of fundamental matrices sharing one step
sequence.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import warnings

import numpy as np
import scipy.linalg

from .errors import DimensionError, NumericalError, SingularMatrix, StiffnessError

EIG_DIMENSION_CAP = 256


def as_cmatrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NumericalError("matrix has non-finite entries")
    return a


def _require_square(a: np.ndarray) -> None:
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"matrix must be square, got shape {a.shape}")


def norm(m) -> float:
    """Max-row-sum norm, the scale used by all singularity tests."""
    a = np.asarray(m)
    if a.size == 0:
        return 0.0
    return float(np.abs(a).sum(axis=-1).max())


def _lu_factor(a: np.ndarray):
    # exact zero pivots are reported through SingularMatrix, not a warning
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        return scipy.linalg.lu_factor(a, check_finite=False)


def lu(m):
    """Pivoted LU factors ``(lu, piv)`` of a square matrix."""
    a = as_cmatrix(m)
    _require_square(a)
    return _lu_factor(a)


def min_pivot(m) -> float:
    a = as_cmatrix(m)
    _require_square(a)
    if a.shape[0] == 0:
        return np.inf
    lu_, _ = _lu_factor(a)
    return float(np.abs(np.diag(lu_)).min())


def is_singular(m, rtol: float) -> bool:
    a = as_cmatrix(m)
    return min_pivot(a) <= rtol * norm(a)


def det(m) -> complex:
    a = as_cmatrix(m)
    _require_square(a)
    n = a.shape[0]
    if n == 0:
        return 1.0 + 0j
    if n == 1:
        return complex(a[0, 0])
    lu_, piv = _lu_factor(a)
    sign = -1.0 if np.count_nonzero(piv != np.arange(n)) % 2 else 1.0
    return complex(sign * np.prod(np.diag(lu_)))


def eig(m, cap: int = EIG_DIMENSION_CAP) -> np.ndarray:
    """Eigenvalues of ``m``, repeated according to algebraic multiplicity."""
    a = as_cmatrix(m)
    _require_square(a)
    if a.shape[0] > cap:
        raise DimensionError(f"dimension {a.shape[0]} exceeds eig cap {cap}")
    try:
        return np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"QR iteration did not converge: {exc}") from exc


def solve(m, b, rtol: float = 1e-13) -> np.ndarray:
    """Solve ``m x = b``; raise :class:`SingularMatrix` on a tiny pivot."""
    a = as_cmatrix(m)
    _require_square(a)
    rhs = np.asarray(b, dtype=complex)
    vector = rhs.ndim == 1
    if vector:
        rhs = rhs[:, None]
    if rhs.shape[0] != a.shape[0]:
        raise DimensionError(f"right-hand side has {rhs.shape[0]} rows, matrix has {a.shape[0]}")
    lu_, piv = _lu_factor(a)
    pivot = float(np.abs(np.diag(lu_)).min()) if a.shape[0] else np.inf
    if pivot <= rtol * norm(a):
        raise SingularMatrix(pivot)
    x = scipy.linalg.lu_solve((lu_, piv), rhs, check_finite=False)
    return x[:, 0] if vector else x


def inv(m, rtol: float = 1e-13) -> np.ndarray:
    a = as_cmatrix(m)
    return solve(a, np.eye(a.shape[0], dtype=complex), rtol=rtol)


# ---------------------------------------------------------------------------
# Runge-Kutta propagation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OdeSystem:
    """First-order system ``y' = rhs(x, y)``.

    ``dimension`` is the length of the leading axis of the state.  Extra
    trailing axes (matrix-valued states, batches) are carried along.
    """

    dimension: int
    rhs: Callable[[float, np.ndarray], np.ndarray]


# Dormand-Prince 5(4) tableau.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B_LOW = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)
_E = _B - _B_LOW


def propagate(
    sys: OdeSystem,
    x0: float,
    x1: float,
    y0,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    max_steps: int = 200_000,
) -> np.ndarray:
    """Advance ``y0`` from ``x0`` to ``x1`` with adaptive Dormand-Prince 5(4).

    The local error of every component is held below
    ``max(rtol * |y|, atol)``; the fifth-order solution is propagated.
    """
    if x0 == x1:
        raise ValueError("x0 and x1 must differ")
    if not (1e-14 < rtol < 1e-2 and 1e-14 < atol < 1e-2):
        raise ValueError("tolerances must lie in (1e-14, 1e-2)")
    y = np.array(y0, dtype=complex)
    if y.shape[0] != sys.dimension:
        raise DimensionError(f"state leading axis {y.shape[0]} != system dimension {sys.dimension}")

    span = x1 - x0
    direction = 1.0 if span > 0 else -1.0
    min_step = 1e-14 * abs(span)
    x = float(x0)

    def scale(a, b):
        return np.maximum(rtol * np.maximum(np.abs(a), np.abs(b)), atol)

    k1 = np.asarray(sys.rhs(x, y), dtype=complex)
    if k1.shape != y.shape:
        raise DimensionError(f"rhs returned shape {k1.shape}, state has shape {y.shape}")

    # Hairer-Wanner starting step.
    d0 = np.max(np.abs(y) / scale(y, y))
    d1 = np.max(np.abs(k1) / scale(y, y))
    h = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h = min(h, abs(span))
    y_try = y + direction * h * k1
    d2 = np.max(np.abs(sys.rhs(x + direction * h, y_try) - k1) / scale(y, y)) / h
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    h = min(100 * h, h1, abs(span))

    steps = 0
    while direction * (x1 - x) > 0:
        steps += 1
        if steps > max_steps:
            raise StiffnessError(f"exceeded {max_steps} steps between {x0} and {x1}")
        if h < min_step:
            raise StiffnessError(f"step underflow at x={x} (h={h:.3e})")
        last = h >= abs(x1 - x)
        if last:
            h = abs(x1 - x)
        hs = direction * h
        k = [k1]
        for i in range(1, 7):
            yi = y.copy()
            for j, a in enumerate(_A[i]):
                if a:
                    yi += hs * a * k[j]
            k.append(sys.rhs(x + _C[i] * hs, yi))
        y_new = yi  # stage 7 argument equals the fifth-order solution (FSAL)
        err = hs * sum(e * kj for e, kj in zip(_E, k) if e)
        err_norm = float(np.max(np.abs(err) / scale(y, y_new)))
        if not np.isfinite(err_norm):
            h *= 0.2
            continue
        if err_norm <= 1.0:
            x = x1 if last else x + hs
            y = y_new
            k1 = k[6]
            factor = 5.0 if err_norm == 0 else min(5.0, 0.9 * err_norm ** -0.2)
            h *= factor
        else:
            h *= max(0.2, 0.9 * err_norm ** -0.2)
    return y
