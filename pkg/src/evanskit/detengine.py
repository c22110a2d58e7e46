"""Regularised (p-modified) determinants.

    det_p(I + B) = prod_n (1 + mu_n) exp( sum_{j=1}^{p-1} (-1)^j mu_n^j / j )

over the eigenvalues ``mu_n`` of ``B``.  Each factor is ``1 + O(mu^p)``, so for
a diagonal family with ``|mu_k| <= C/k`` the product converges once ``p > 1``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .discmodel import ModeSequence
from .errors import DimensionError, TruncationError
from .numkernel import as_cmatrix, det, eig

MAX_ORDER = 8


def _check_order(p: int) -> int:
    if int(p) != p or not 1 <= p <= MAX_ORDER:
        raise ValueError(f"determinant order p must be an integer in [1, {MAX_ORDER}], got {p}")
    return int(p)


def _log_factor(mu: np.ndarray, p: int) -> np.ndarray:
    """``log(1 + mu) + sum_{j<p} (-1)^j mu^j / j``, computed stably for small ``mu``.

    For ``|mu| < 1/2`` the series ``sum_{j>=p} (-1)^{j+1} mu^j / j`` is used
    directly, so nothing of size ``O(1)`` cancels.
    """
    mu = np.asarray(mu, dtype=complex)
    out = np.empty_like(mu)
    small = np.abs(mu) < 0.5
    if small.any():
        m = mu[small]
        acc = np.zeros_like(m)
        power = m ** p
        j = p
        while True:
            term = (-1) ** (j + 1) * power / j
            acc += term
            if np.all(np.abs(term) <= 1e-17 * np.maximum(np.abs(acc), 1e-300)) or j > 200:
                break
            power = power * m
            j += 1
        out[small] = acc
    big = ~small
    if big.any():
        m = mu[big]
        corr = sum((-1) ** j * m**j / j for j in range(1, p))
        out[big] = np.log(1 + m) + corr
    return out


def det_p_finite(B, p: int) -> complex:
    B = as_cmatrix(B)
    p = _check_order(p)
    if B.shape[0] != B.shape[1]:
        raise DimensionError(f"B must be square, got {B.shape}")
    if B.shape[0] == 0:
        return 1.0 + 0j
    mu = eig(B)
    factors = (1 + mu) * np.exp(sum((-1) ** j * mu**j / j for j in range(1, p)))
    return complex(np.prod(factors))


def _trace_correction(F: np.ndarray, p: int) -> complex:
    total = 0j
    power = np.eye(F.shape[0], dtype=complex)
    for j in range(1, p):
        power = power @ F
        total += (-1) ** j * np.trace(power) / j
    return total


def det_p_identity_check(F, p: int) -> float:
    """``|det_p(I+F) - det(I+F) exp(sum_j (-1)^j tr(F^j) / j)|``."""
    F = as_cmatrix(F)
    p = _check_order(p)
    lhs = det_p_finite(F, p)
    rhs = det(np.eye(F.shape[0]) + F) * cmath.exp(_trace_correction(F, p))
    return abs(lhs - rhs)


def det_p_commute_check(A1, A2, p: int) -> float:
    """``|det_p(I + A1 A2) - det_p(I + A2 A1)|`` for ``m x n`` and ``n x m`` factors."""
    A1 = as_cmatrix(A1)
    A2 = as_cmatrix(A2)
    if A1.shape[1] != A2.shape[0] or A2.shape[1] != A1.shape[0]:
        raise DimensionError(f"incompatible shapes {A1.shape} and {A2.shape}")
    return abs(det_p_finite(A1 @ A2, p) - det_p_finite(A2 @ A1, p))


@dataclass(frozen=True)
class ModeDeterminant:
    value: complex
    tail_bound: float
    decay_constant: float
    max_mode: int


def decay_constant(ratios: ModeSequence) -> float:
    """Envelope ``C`` with ``|ratio_k - 1| <= C/k``, fitted on the last quartile."""
    K = ratios.max_mode
    ks = np.arange(max(1, K - K // 4), K + 1)
    mu = np.abs(ratios.nonnegative[ks] - 1)
    return 1.5 * float(np.max(ks * mu))


def tail_bound(C: float, K: int, p: int) -> float:
    """Bound on ``sum_{|k|>K} |log-factor_k|`` when ``|mu_k| <= C/k``.

    A factor with ``|mu| < 1`` contributes at most ``|mu|^p / (p (1 - |mu|))``;
    summing ``(C/k)^p`` over both sides of ``k > K`` gives the estimate below.
    """
    if C >= K:
        return math.inf
    return 2 * C**p * K ** (1 - p) / ((p - 1) * p * (1 - C / K))


def det_p_modes(ratios: ModeSequence, p: int, tail_tol: float = 1e-6) -> ModeDeterminant:
    """``det_p`` of the diagonal family ``diag(ratio_k)`` truncated at ``|k| <= K``.

    The returned bound controls ``|log det_p - log(truncated value)|``.
    """
    p = _check_order(p)
    if p < 2:
        raise ValueError("mode determinants need p >= 2; the p = 1 product diverges")
    mu = ratios.full() - 1
    logs = _log_factor(mu, p)
    value = complex(np.exp(np.sum(logs)))
    K = ratios.max_mode
    C = decay_constant(ratios)
    bound = tail_bound(C, K, p) if C > 0 else 0.0
    if bound > tail_tol:
        # smallest K with tail_bound(C, K) <= tail_tol
        suggested = K
        while tail_bound(C, suggested, p) > tail_tol and suggested < 10**9:
            suggested *= 2
        raise TruncationError(
            f"tail bound {bound:.3e} exceeds {tail_tol:.3e} with K={K}", suggested_modes=suggested
        )
    return ModeDeterminant(value, bound, C, K)
