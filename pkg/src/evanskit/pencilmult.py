"""Jordan chains and algebraic multiplicity of analytic matrix pencils."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import contour
from .errors import DimensionError, NotAnEigenvector
from .numkernel import as_cmatrix, det, norm

CHAIN_RTOL = 1e-8
KERNEL_RTOL = 1e-8
CAUCHY_NODES = 32


@dataclass(frozen=True)
class MatrixPencil:
    """Analytic ``T(lam)``: polynomial coefficients in ``(lam - center)`` or a callable.

    For callables without ``derivative``, derivatives come from Cauchy's
    integral formula on a small circle (trapezoidal rule), which is accurate to
    near machine precision for analytic families.
    """

    dim: int
    func: Callable[[complex], np.ndarray] | None = None
    coefficients: tuple = field(default=(), repr=False)
    center: complex = 0.0
    derivative: Callable[[int, complex], np.ndarray] | None = None
    name: str = ""

    def __post_init__(self):
        if self.func is None and not self.coefficients:
            raise ValueError("pencil needs a callable or polynomial coefficients")
        for c in self.coefficients:
            if np.shape(c) != (self.dim, self.dim):
                raise DimensionError(f"coefficient shape {np.shape(c)} != ({self.dim}, {self.dim})")

    @classmethod
    def polynomial(cls, coefficients: Sequence, center: complex = 0.0, name: str = "") -> "MatrixPencil":
        coeffs = tuple(as_cmatrix(c) for c in coefficients)
        return cls(coeffs[0].shape[0], coefficients=coeffs, center=complex(center), name=name)

    @classmethod
    def linear(cls, A, name: str = "") -> "MatrixPencil":
        """``T(lam) = lam I - A``."""
        A = as_cmatrix(A)
        return cls.polynomial([-A, np.eye(A.shape[0])], name=name)

    def __call__(self, lam: complex) -> np.ndarray:
        if self.coefficients:
            s = complex(lam) - self.center
            out = np.zeros((self.dim, self.dim), dtype=complex)
            for c in reversed(self.coefficients):
                out = out * s + c
            return out
        out = as_cmatrix(self.func(complex(lam)))
        if out.shape != (self.dim, self.dim):
            raise DimensionError(f"pencil returned shape {out.shape}, expected ({self.dim}, {self.dim})")
        return out

    def taylor(self, order: int, lam: complex) -> np.ndarray:
        """``T^(order)(lam) / order!``."""
        if order == 0:
            return self(lam)
        if self.coefficients:
            # re-expand the polynomial around lam
            s = complex(lam) - self.center
            out = np.zeros((self.dim, self.dim), dtype=complex)
            for j in range(order, len(self.coefficients)):
                out += math.comb(j, order) * s ** (j - order) * self.coefficients[j]
            return out
        if self.derivative is not None:
            return as_cmatrix(self.derivative(order, lam)) / math.factorial(order)
        r = 1e-2 * max(1.0, abs(lam))
        theta = 2 * np.pi * np.arange(CAUCHY_NODES) / CAUCHY_NODES
        acc = np.zeros((self.dim, self.dim), dtype=complex)
        for t in theta:
            acc += self(lam + r * np.exp(1j * t)) * np.exp(-1j * order * t)
        return acc / (CAUCHY_NODES * r**order)


@dataclass(frozen=True)
class JordanChain:
    vectors: tuple
    base_point: complex = 0.0

    def __post_init__(self):
        if not self.vectors:
            raise ValueError("chain must contain at least f0")
        object.__setattr__(self, "vectors", tuple(np.asarray(v, dtype=complex) for v in self.vectors))
        n = self.vectors[0].size
        if any(v.shape != (n,) for v in self.vectors):
            raise DimensionError("chain vectors must share one length")
        if not np.any(self.vectors[0]):
            raise ValueError("f0 must be nonzero")

    def __len__(self):
        return len(self.vectors)


def _chain_lhs(T: MatrixPencil, lam0: complex, vectors: Sequence[np.ndarray], j: int, derivs: list) -> np.ndarray:
    while len(derivs) <= j:
        derivs.append(T.taylor(len(derivs), lam0))
    return sum(derivs[l] @ vectors[j - l] for l in range(j + 1))


def chain_residuals(T: MatrixPencil, chain: JordanChain) -> list[float]:
    """Norms of ``sum_{l<=j} T^(l)(lam0)/l! f_{j-l}`` for ``j = 0..k-1``."""
    if chain.vectors[0].size != T.dim:
        raise DimensionError("chain vectors do not match the pencil dimension")
    derivs: list = []
    return [
        float(np.linalg.norm(_chain_lhs(T, chain.base_point, chain.vectors, j, derivs)))
        for j in range(len(chain))
    ]


def chain_is_valid(T: MatrixPencil, chain: JordanChain) -> bool:
    scale = max(norm(T(chain.base_point)), 1.0)
    return max(chain_residuals(T, chain)) <= CHAIN_RTOL * scale


def multiplicity(T: MatrixPencil, lambda0: complex, radius: float, samples: int = 64) -> int:
    """Algebraic multiplicity of ``lambda0`` as the winding of ``det T`` on a circle."""
    return contour.multiplicity_at(lambda z: det(T(z)), lambda0, radius, samples=samples)


def kernel_basis(T: MatrixPencil, lambda0: complex, rtol: float = KERNEL_RTOL) -> np.ndarray:
    """Orthonormal basis (columns) of ``ker T(lambda0)`` from the SVD."""
    A = T(lambda0)
    _, s, vh = np.linalg.svd(A)
    cutoff = rtol * max(s[0] if s.size else 0.0, 1e-300)
    return vh[s <= cutoff].conj().T


def rank_of_eigenvector(T: MatrixPencil, lambda0: complex, f0, max_len: int = 16) -> int:
    """Length of the longest Jordan chain found greedily from ``f0``, capped at ``max_len``.

    Each step solves the next chain equation for ``f_j`` in the least-squares
    sense (minimum-norm solution, so the kernel component is zero) and stops
    once the residual exceeds the chain tolerance.
    """
    f0 = np.asarray(f0, dtype=complex)
    A = T(lambda0)
    scale = max(norm(A), 1.0)
    tol = CHAIN_RTOL * scale * max(1.0, float(np.linalg.norm(f0)))
    if float(np.linalg.norm(A @ f0)) > tol:
        raise NotAnEigenvector(f"|T(lambda0) f0| = {np.linalg.norm(A @ f0):.3e} exceeds {tol:.3e}")
    vectors = [f0]
    derivs: list = [A]
    for j in range(1, max_len):
        vectors.append(np.zeros_like(f0))
        rhs = -_chain_lhs(T, lambda0, vectors, j, derivs)
        fj, *_ = np.linalg.lstsq(A, rhs, rcond=KERNEL_RTOL)
        vectors[j] = fj
        if float(np.linalg.norm(A @ fj - rhs)) > tol * max(1.0, float(np.linalg.norm(fj))):
            return j
    return max_len


def sum_of_ranks(T: MatrixPencil, lambda0: complex, max_len: int = 16) -> int:
    """``sum_i r(f_{0,i})`` over an orthonormal kernel basis."""
    basis = kernel_basis(T, lambda0)
    return sum(rank_of_eigenvector(T, lambda0, basis[:, i], max_len) for i in range(basis.shape[1]))


def _diag_one_lambda2():
    return MatrixPencil.polynomial(
        [np.diag([1.0, 0.0]), np.zeros((2, 2)), np.diag([0.0, 1.0])], name="diag1-lambda2"
    )


def _jordan_block():
    return MatrixPencil.polynomial([[[0.0, 1.0], [0.0, 0.0]], np.eye(2)], name="jordan2")


def _semisimple():
    return MatrixPencil.linear(np.diag([0.0, 0.0, 3.0]), name="semisimple3")


BUILTINS = {
    "diag1-lambda2": _diag_one_lambda2,
    "jordan2": _jordan_block,
    "semisimple3": _semisimple,
}


def builtin(name: str) -> MatrixPencil:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise ValueError(f"unknown builtin pencil {name!r}; choose from {sorted(BUILTINS)}") from None
