"""Boundary maps and Evans functions for ``-u'' + Q u`` on ``(-1, 1)``.

Traces follow the two-point convention

    gamma_D u = [u(1); u(-1)],    gamma_N u = [u'(1); -u'(-1)],

so every boundary matrix is ``2n x 2n`` with the ``x = +1`` block first.
All public functions accept a scalar ``lam`` or a 1-D array of spectral
parameters; in the array case the fundamental solutions for all values are
propagated together and results carry a leading batch axis.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from . import numkernel
from .errors import ConsistencyError, DimensionError, DirichletEigenvalue, RobinEigenvalue, SingularMatrix

SINGULAR_RTOL = 1e-10
LAMBDA_CAP = 1e4
PROPAGATION_RTOL = 1e-10
PROPAGATION_ATOL = 1e-12


# ---------------------------------------------------------------------------
# potentials
# ---------------------------------------------------------------------------


def constant_potential(q, n: int | None = None) -> Callable[[float], np.ndarray]:
    value = np.asarray(q, dtype=complex)
    if value.ndim == 0:
        value = value * np.eye(n or 1, dtype=complex)
    value.setflags(write=False)
    return lambda x: value


def polynomial_potential(coeffs: Sequence) -> Callable[[float], np.ndarray]:
    """``Q(x) = sum_j coeffs[j] * x**j`` with matrix (or scalar) coefficients."""
    cs = [np.atleast_2d(np.asarray(c, dtype=complex)) for c in coeffs]
    if not cs:
        raise ValueError("need at least one coefficient")
    if len({c.shape for c in cs}) != 1:
        raise DimensionError("polynomial coefficients must share one shape")

    def q(x):
        out = cs[-1].copy()
        for c in reversed(cs[:-1]):
            out = out * x + c
        return out

    return q


def tabulated_potential(xs: Sequence[float], values) -> Callable[[float], np.ndarray]:
    """Cubic-spline interpolation of sampled ``n x n`` potential values."""
    xs = np.asarray(xs, dtype=float)
    vals = np.asarray(values, dtype=complex)
    if vals.ndim == 1:
        vals = vals[:, None, None]
    if vals.shape[0] != xs.size or vals.ndim != 3:
        raise DimensionError("values must have shape (len(xs), n, n)")
    spline = CubicSpline(xs, vals, axis=0)
    return lambda x: spline(x)


# ---------------------------------------------------------------------------
# data types
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Schrodinger1DProblem:
    """``L u = -u'' + Q u`` on ``(-1, 1)`` with Robin matrices ``Theta_+``, ``Theta_-``.

    The Robin matrices default to ``i I``, which keeps the Robin spectrum off
    the real axis for Hermitian potentials.
    """

    n: int
    Q: Callable[[float], np.ndarray]
    theta_plus: np.ndarray = None
    theta_minus: np.ndarray = None

    def __post_init__(self):
        n = self.n
        for name in ("theta_plus", "theta_minus"):
            value = getattr(self, name)
            value = 1j * np.eye(n) if value is None else np.atleast_2d(np.asarray(value, dtype=complex))
            if value.shape != (n, n):
                raise DimensionError(f"{name} must be {n}x{n}, got {value.shape}")
            object.__setattr__(self, name, value)
        for x in (-1.0, 0.0, 1.0):
            if np.shape(self.Q(x)) != (n, n):
                raise DimensionError(f"Q({x}) must be {n}x{n}")

    @property
    def theta(self) -> np.ndarray:
        """``diag(Theta_+, Theta_-)`` acting on ``[u(1); u(-1)]``."""
        n = self.n
        big = np.zeros((2 * n, 2 * n), dtype=complex)
        big[:n, :n] = self.theta_plus
        big[n:, n:] = self.theta_minus
        return big

    @classmethod
    def laplacian(cls, n: int = 1, theta_plus=None, theta_minus=None):
        return cls(n, constant_potential(0.0, n), theta_plus, theta_minus)

    @classmethod
    def constant(cls, q, n: int = 1, theta_plus=None, theta_minus=None):
        return cls(n, constant_potential(q, n), theta_plus, theta_minus)

    @classmethod
    def polynomial(cls, coeffs, theta_plus=None, theta_minus=None):
        q = polynomial_potential(coeffs)
        return cls(np.shape(q(0.0))[0], q, theta_plus, theta_minus)

    def shifted(self, gamma: complex) -> "Schrodinger1DProblem":
        """Same problem with ``Q + gamma I`` (spectra translate by ``gamma``)."""
        base, eye = self.Q, np.eye(self.n)
        return Schrodinger1DProblem(self.n, lambda x: base(x) + gamma * eye, self.theta_plus, self.theta_minus)

    def with_theta(self, theta_plus, theta_minus=None) -> "Schrodinger1DProblem":
        return Schrodinger1DProblem(
            self.n, self.Q, theta_plus, theta_plus if theta_minus is None else theta_minus
        )

    def is_symmetric(self, tol: float = 1e-12, samples: int = 9) -> bool:
        """Hermitian potential at sample points; Robin matrices are not involved."""
        for x in np.linspace(-1.0, 1.0, samples):
            q = np.asarray(self.Q(x))
            if np.abs(q - q.conj().T).max() > tol * max(1.0, np.abs(q).max()):
                return False
        return True


@dataclass(frozen=True, eq=False)
class FundamentalSolutions:
    """Values at ``x = +1`` of ``Y_-`` and ``V_-`` (started at ``x = -1``)."""

    Y: np.ndarray
    dY: np.ndarray
    V: np.ndarray
    dV: np.ndarray
    lam: complex | np.ndarray


@dataclass(frozen=True, eq=False)
class FrameMatrices:
    X: np.ndarray
    Z: np.ndarray
    lam: complex | np.ndarray = field(default=0.0)

    @property
    def batched(self) -> bool:
        return self.X.ndim == 3


# ---------------------------------------------------------------------------
# propagation
# ---------------------------------------------------------------------------


def _lambdas(lam):
    arr = np.atleast_1d(np.asarray(lam, dtype=complex))
    if arr.ndim != 1:
        raise DimensionError("lambda must be a scalar or a 1-D array")
    if not np.all(np.isfinite(arr)):
        raise ValueError("lambda must be finite")
    if np.abs(arr).max(initial=0.0) > LAMBDA_CAP:
        raise ValueError(f"|lambda| exceeds the propagation cap {LAMBDA_CAP:g}")
    return arr, np.ndim(lam) == 0


def _propagate_pair(p: Schrodinger1DProblem, lams: np.ndarray, x0: float, x1: float, u0, du0, rtol: float):
    """Propagate solutions of ``-u'' + Q u = lam u`` with matrix data ``u0, du0``.

    ``u0``/``du0`` are ``n x m``; the result is ``(u, du)`` of shape ``(B, n, m)``.
    """
    n = p.n
    B = lams.size
    m = np.shape(u0)[1]
    y0 = np.empty((2 * n, B, m), dtype=complex)
    y0[:n] = np.asarray(u0, dtype=complex)[:, None, :]
    y0[n:] = np.asarray(du0, dtype=complex)[:, None, :]
    if x0 == x1:
        y = y0
    else:
        lam_col = lams[None, :, None]
        Q = p.Q

        def rhs(x, y):
            u = y[:n]
            out = np.empty_like(y)
            out[:n] = y[n:]
            out[n:] = np.tensordot(np.asarray(Q(x)), u, axes=(1, 0)) - lam_col * u
            return out

        y = numkernel.propagate(numkernel.OdeSystem(2 * n, rhs), x0, x1, y0, rtol=rtol, atol=PROPAGATION_ATOL)
    return np.transpose(y[:n], (1, 0, 2)), np.transpose(y[n:], (1, 0, 2))


def _fundamental(p: Schrodinger1DProblem, lams: np.ndarray, rtol: float):
    n = p.n
    eye, zero = np.eye(n), np.zeros((n, n))
    u, du = _propagate_pair(p, lams, -1.0, 1.0, np.hstack([zero, eye]), np.hstack([eye, zero]), rtol)
    return u[:, :, :n], du[:, :, :n], u[:, :, n:], du[:, :, n:]


def fundamental_solutions(p: Schrodinger1DProblem, lam, rtol: float = PROPAGATION_RTOL) -> FundamentalSolutions:
    """``Y_-``, ``Y_-'``, ``V_-``, ``V_-'`` at ``x = +1``.

    ``Y_-(-1) = 0, Y_-'(-1) = I`` and ``V_-(-1) = I, V_-'(-1) = 0``.
    """
    lams, scalar = _lambdas(lam)
    Y, dY, V, dV = _fundamental(p, lams, rtol)
    if scalar:
        return FundamentalSolutions(Y[0], dY[0], V[0], dV[0], complex(lams[0]))
    return FundamentalSolutions(Y, dY, V, dV, lams)


def frame(p: Schrodinger1DProblem, lam, rtol: float = PROPAGATION_RTOL) -> FrameMatrices:
    """Dirichlet block ``X`` and Neumann block ``Z`` of the trace frame.

    ``X = [[Y(1), V(1)], [0, I]]`` and ``Z = [[Y'(1), V'(1)], [-I, 0]]``.
    """
    lams, scalar = _lambdas(lam)
    Y, dY, V, dV = _fundamental(p, lams, rtol)
    n, B = p.n, lams.size
    X = np.zeros((B, 2 * n, 2 * n), dtype=complex)
    Z = np.zeros((B, 2 * n, 2 * n), dtype=complex)
    X[:, :n, :n], X[:, :n, n:] = Y, V
    X[:, n:, n:] = np.eye(n)
    Z[:, :n, :n], Z[:, :n, n:] = dY, dV
    Z[:, n:, :n] = -np.eye(n)
    if scalar:
        return FrameMatrices(X[0], Z[0], complex(lams[0]))
    return FrameMatrices(X, Z, lams)


def _each(fr: FrameMatrices):
    if fr.batched:
        return [(fr.X[b], fr.Z[b], fr.lam[b]) for b in range(fr.X.shape[0])]
    return [(fr.X, fr.Z, fr.lam)]


def _pack(fr: FrameMatrices, values):
    return np.array(values) if fr.batched else values[0]


# ---------------------------------------------------------------------------
# boundary maps and Evans functions
# ---------------------------------------------------------------------------


def _pow2_scale(v: np.ndarray) -> np.ndarray:
    v = np.where(v > 0, v, 1.0)
    return np.exp2(-np.round(np.log2(v)))


def _right_divide(B: np.ndarray, A: np.ndarray) -> np.ndarray:
    """``B A^{-1}`` with the rows of ``A`` scaled to unit size by powers of two.

    Solutions that grow like ``exp(2 sqrt(q - lam))`` make the blocks of the
    frame differ by many orders of magnitude; row scaling keeps the pivot
    test meaningful without masking a genuinely small column.
    """
    r = _pow2_scale(np.abs(A).max(axis=1))
    # B A^{-1} = B (R A)^{-1} R
    return numkernel.solve((r[:, None] * A).T, B.T, rtol=SINGULAR_RTOL).T * r


def dtn(fr: FrameMatrices) -> np.ndarray:
    """Dirichlet-to-Neumann matrix ``M(lam) = Z X^{-1}``."""
    out = []
    for X, Z, lam in _each(fr):
        try:
            out.append(_right_divide(Z, X))
        except SingularMatrix:
            raise DirichletEigenvalue(lam) from None
    return _pack(fr, out)


def robin_to_dirichlet(fr: FrameMatrices, theta_big) -> np.ndarray:
    """Robin-to-Dirichlet matrix ``N_Theta(lam) = X (Z + Theta X)^{-1}``.

    Defined whenever ``Z + Theta X`` is invertible, including at Dirichlet
    eigenvalues where ``M(lam)`` does not exist.
    """
    theta_big = np.asarray(theta_big, dtype=complex)
    out = []
    for X, Z, lam in _each(fr):
        try:
            out.append(_right_divide(X, Z + theta_big @ X))
        except SingularMatrix:
            raise RobinEigenvalue(lam) from None
    return _pack(fr, out)


def evans_dirichlet(fr: FrameMatrices):
    """``E_D(lam) = det Y_-(1, lam) = det X``."""
    return _pack(fr, [numkernel.det(X) for X, _, _ in _each(fr)])


def evans_robin(fr: FrameMatrices, theta_big):
    """``E_Theta(lam) = det(Z + Theta X)``."""
    theta_big = np.asarray(theta_big, dtype=complex)
    return _pack(fr, [numkernel.det(Z + theta_big @ X) for X, Z, _ in _each(fr)])


def evans_ratio(
    p: Schrodinger1DProblem,
    phat: Schrodinger1DProblem,
    lam,
    check_rtol: float = 1e-8,
    frames=None,
):
    """Scalar Evans function ``det N_Theta(lam) * det Mhat_Thetahat(lam)``.

    Evaluated both as the product of boundary-map determinants and as the
    ratio ``E_D Ehat_Thetahat / (E_Theta Ehat_D)``; a relative mismatch above
    ``check_rtol`` raises :class:`ConsistencyError`.  The four-Evans ratio is
    returned.  ``frames`` may pass precomputed ``(frame(p, lam), frame(phat, lam))``.
    """
    if p.n != phat.n:
        raise DimensionError("p and phat must have the same system size")
    fr, frh = frames if frames is not None else (frame(p, lam), frame(phat, lam))
    theta, theta_hat = p.theta, phat.theta
    N = robin_to_dirichlet(fr, theta)
    Mh = dtn(frh)
    via_maps = np.atleast_1d(
        [numkernel.det(a) * numkernel.det(b + theta_hat) for a, b in zip(np.reshape(N, (-1,) + theta.shape), np.reshape(Mh, (-1,) + theta.shape))]
    )
    ratio = np.atleast_1d(
        evans_dirichlet(fr) * evans_robin(frh, theta_hat) / (evans_robin(fr, theta) * evans_dirichlet(frh))
    )
    scale = np.maximum(np.abs(ratio), np.abs(via_maps))
    bad = np.abs(ratio - via_maps) > check_rtol * np.maximum(scale, 1e-300)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise ConsistencyError(
            f"Evans ratio mismatch at lambda={np.atleast_1d(fr.lam)[i]}: {ratio[i]} vs {via_maps[i]}"
        )
    return ratio if fr.batched else complex(ratio[0])


# ---------------------------------------------------------------------------
# x-dependent Evans matrices
# ---------------------------------------------------------------------------


def _solutions_at(p: Schrodinger1DProblem, lam, x: float, rtol: float):
    """``(Y_-, Y_-', V_-, V_-', Y_+, Y_+', V_+, V_+')`` at ``x`` for scalar ``lam``."""
    lams, _ = _lambdas(lam)
    n = p.n
    eye, zero = np.eye(n), np.zeros((n, n))
    um, dum = _propagate_pair(p, lams[:1], -1.0, x, np.hstack([zero, eye]), np.hstack([eye, zero]), rtol)
    up, dup = _propagate_pair(p, lams[:1], 1.0, x, np.hstack([zero, -eye]), np.hstack([eye, zero]), rtol)
    um, dum, up, dup = um[0], dum[0], up[0], dup[0]
    return (um[:, :n], dum[:, :n], um[:, n:], dum[:, n:], up[:, :n], dup[:, :n], up[:, n:], dup[:, n:])


def evans_matrix_dirichlet(p: Schrodinger1DProblem, lam, x: float, rtol: float = PROPAGATION_RTOL) -> np.ndarray:
    """``[[Y_-(x), Y_+(x)], [Y_-'(x), Y_+'(x)]]``; its determinant is ``E_D``."""
    Ym, dYm, _, _, Yp, dYp, _, _ = _solutions_at(p, lam, x, rtol)
    return np.block([[Ym, Yp], [dYm, dYp]])


def evans_matrix_robin(p: Schrodinger1DProblem, lam, x: float, rtol: float = PROPAGATION_RTOL) -> np.ndarray:
    """``[[W_-(x), W_+(x)], [W_-'(x), W_+'(x)]]`` with ``W_+- = V_+- + Y_+- Theta_+-``."""
    Ym, dYm, Vm, dVm, Yp, dYp, Vp, dVp = _solutions_at(p, lam, x, rtol)
    tm, tp = p.theta_minus, p.theta_plus
    Wm, dWm = Vm + Ym @ tm, dVm + dYm @ tm
    Wp, dWp = Vp + Yp @ tp, dVp + dYp @ tp
    return np.block([[Wm, Wp], [dWm, dWp]])
