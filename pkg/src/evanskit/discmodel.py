"""Mode-diagonal boundary data of radial Schrodinger operators on the unit disc.

For the Laplacian the radial Dirichlet-to-Neumann value of the mode ``k`` is
``d_k(lam) = z J_|k|'(z) / J_|k|(z)`` with ``z = sqrt(lam)``.  Writing
``J_k(z) = (z/2)^k / k! * g_k(lam)`` with

    g_k(lam) = sum_m c_m (-lam/4)^m,   c_m = k! / (m! (m+k)!),

gives ``d_k = sum_m (k + 2m) c_m (-lam/4)^m / g_k(lam)``, a ratio of entire
functions of ``lam`` that needs no square root.

For a potential ``q(r)`` the substitution ``r = e^-t`` turns the radial
equation into ``-v'' + (e^{-2t}(q(e^{-t}) - lam) + k^2) v = 0`` on the half
line; the solution decaying like ``e^{-|k| t}`` gives ``d_k = -v'(0)/v(0)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.optimize

from .errors import ModeDirichletEigenvalue, RobinEigenvalue
from .numkernel import OdeSystem, propagate

SERIES_RTOL = 1e-18
POLE_RTOL = 1e-8
JOST_ATOL = 1e-12
JOST_MIN_T = 8.0


def zero_potential(r):
    return np.zeros_like(np.asarray(r, dtype=float))


@dataclass(frozen=True)
class DiscConfig:
    """Radial potential, shift and Robin couplings of the disc comparison.

    ``q`` is ``None`` for the pure Laplacian.  ``q_sup`` bounds ``|q|`` on
    ``[0, 1]`` and fixes the Jost truncation point; it is estimated on a grid
    when not given.
    """

    q: Callable | None = None
    gamma: float = 0.0
    mu: complex = 1.0
    mu_hat: complex = 1.0
    max_mode: int = 64
    q_sup: float | None = None

    def __post_init__(self):
        if self.max_mode < 8:
            raise ValueError("max_mode must be at least 8")
        if not math.isfinite(self.gamma):
            raise ValueError("gamma must be finite")

    @property
    def laplacian(self) -> bool:
        return self.q is None

    def potential_bound(self) -> float:
        if self.q is None:
            return 0.0
        if self.q_sup is not None:
            return float(self.q_sup)
        r = np.linspace(0.0, 1.0, 257)
        return float(np.max(np.abs(self.q(r))))


@dataclass(frozen=True)
class ModeSequence:
    """Values indexed by ``k = -K..K``, stored for ``k >= 0`` only."""

    lam: complex
    nonnegative: np.ndarray = field(repr=False)

    @property
    def max_mode(self) -> int:
        return self.nonnegative.size - 1

    def __getitem__(self, k: int) -> complex:
        return complex(self.nonnegative[abs(k)])

    def items(self):
        K = self.max_mode
        for k in range(-K, K + 1):
            yield k, self[k]

    def full(self) -> np.ndarray:
        """Values ordered ``k = -K, ..., K``."""
        return np.concatenate([self.nonnegative[:0:-1], self.nonnegative])


def _series_terms(k: int, lam: complex) -> list[complex]:
    x = -complex(lam) / 4
    terms = [1.0 + 0j]
    t = 1.0 + 0j
    m = 0
    total = 1.0
    while True:
        m += 1
        t = t * x / (m * (m + k))
        terms.append(t)
        total = max(total, abs(t))
        # terms decrease monotonically once m (m + k) > |lam| / 4
        if m * (m + k) > abs(x) and abs(t) < SERIES_RTOL * total:
            return terms
        if m > 10_000:
            return terms


def _fsum_complex(values) -> complex:
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


def bessel_ratio_parts(k: int, lam: complex) -> tuple[complex, complex, float]:
    """Numerator, denominator and largest term of the series for ``d_k``."""
    k = abs(int(k))
    terms = _series_terms(k, lam)
    den = _fsum_complex(terms)
    num = _fsum_complex([(k + 2 * m) * t for m, t in enumerate(terms)])
    return num, den, max(abs(t) for t in terms)


def d_k(k: int, lam: complex) -> complex:
    """Laplacian Dirichlet-to-Neumann value of mode ``k`` on the unit disc."""
    num, den, big = bessel_ratio_parts(k, lam)
    if abs(den) <= POLE_RTOL * big:
        raise ModeDirichletEigenvalue(abs(int(k)), lam)
    return num / den


def d_modes(max_mode: int, lam: complex) -> np.ndarray:
    """``d_k(lam)`` for ``k = 0..max_mode``."""
    return np.array([d_k(k, lam) for k in range(max_mode + 1)], dtype=complex)


def mode_dirichlet_eigenvalues(k: int, lam_max: float, step: float = 0.05) -> np.ndarray:
    """Real ``lam`` in ``(0, lam_max]`` where ``J_|k|(sqrt(lam))`` vanishes.

    These are the poles of ``d_k``; they are found as sign changes of the
    entire denominator ``g_k`` followed by Brent's method.
    """
    def g(x):
        return bessel_ratio_parts(k, x)[1].real

    grid = np.arange(step, lam_max + step, step)
    vals = np.array([g(x) for x in grid])
    roots = []
    for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if fa == 0:
            roots.append(a)
        elif fa * fb < 0:
            roots.append(scipy.optimize.brentq(g, a, b, xtol=1e-14, rtol=1e-15))
    return np.array([r for r in roots if r <= lam_max])


def jost_truncation(q_sup: float, lam: complex, atol: float = JOST_ATOL) -> float:
    """Point beyond which ``e^{-2t}(|q| + |lam|)`` is below ``atol``."""
    size = q_sup + abs(lam)
    if size <= atol:
        return JOST_MIN_T
    return max(JOST_MIN_T, 0.5 * math.log(size / atol))


def jost_modes(cfg: DiscConfig, modes, lam: complex, rtol: float = 1e-10) -> np.ndarray:
    """``d_k`` for a radial potential from the decaying half-line solutions.

    With ``v = e^{-|k| t} phi`` the equation becomes
    ``phi'' - 2|k| phi' = Q(t) phi``; integrating backwards from ``phi = 1``
    keeps the growing solution out, and ``d_k = |k| - phi'(0)/phi(0)``.
    """
    ks = np.abs(np.asarray(modes, dtype=int))
    lam = complex(lam)
    q = cfg.q if cfg.q is not None else zero_potential
    T = jost_truncation(cfg.potential_bound(), lam)

    def rhs(t, y):
        Q = math.exp(-2 * t) * (complex(np.asarray(q(math.exp(-t)))) - lam)
        return np.stack([y[1], 2 * ks * y[1] + Q * y[0]])

    y0 = np.stack([np.ones(ks.size, dtype=complex), np.zeros(ks.size, dtype=complex)])
    phi, dphi = propagate(OdeSystem(2, rhs), T, 0.0, y0, rtol=rtol, atol=1e-14 if rtol < 1e-12 else 1e-13)
    scale = np.maximum(1.0, np.abs(dphi))
    bad = np.abs(phi) <= POLE_RTOL * scale
    if bad.any():
        raise ModeDirichletEigenvalue(int(ks[np.argmax(bad)]), lam)
    return ks - dphi / phi


def jost_dtn(cfg: DiscConfig, k: int, lam: complex) -> complex:
    return complex(jost_modes(cfg, [k], lam)[0])


def _dtn_values(cfg: DiscConfig, lam: complex, shift: float = 0.0) -> np.ndarray:
    if cfg.laplacian:
        return d_modes(cfg.max_mode, lam - shift)
    q = cfg.q
    shifted = DiscConfig(q=lambda r: q(r) + shift, max_mode=cfg.max_mode, q_sup=cfg.potential_bound() + abs(shift))
    return jost_modes(shifted, np.arange(cfg.max_mode + 1), lam)


def mode_ratios(cfg: DiscConfig, lam: complex) -> ModeSequence:
    """Eigenvalues ``(d_k(lam - gamma) + mu_hat) / (d_k(lam) + mu)`` of the mode-diagonal comparison.

    The reference operator is ``L + gamma`` with coupling ``mu_hat``.
    """
    lam = complex(lam)
    base = _dtn_values(cfg, lam)
    ref = _dtn_values(cfg, lam, cfg.gamma)
    den = base + cfg.mu
    small = np.abs(den) <= POLE_RTOL * np.maximum(1.0, np.abs(base))
    if small.any():
        raise RobinEigenvalue(lam, k=int(np.argmax(small)))
    # ratio - 1 is formed from the difference so identical operators give exactly 1
    return ModeSequence(lam, 1 + ((ref - base) + (cfg.mu_hat - cfg.mu)) / den)


@dataclass(frozen=True)
class SchattenTable:
    """Partial sums of ``|ratio_k - 1|^p``.

    ``two_sided[K']`` sums over ``|k| <= K'``, ``one_sided[K']`` over
    ``1 <= k <= K'``.  ``decay_exponent`` is the fitted ``a`` in
    ``|ratio_k - 1|^p ~ k^-a`` over the last half of the modes.
    """

    p: float
    terms: np.ndarray
    two_sided: np.ndarray
    one_sided: np.ndarray
    decay_exponent: float

    @property
    def increments(self) -> np.ndarray:
        """``S_p(K') - S_p(K'-1)`` of the two-sided sums, ``K' >= 1``."""
        return np.diff(self.two_sided)

    @property
    def decays_like_k_minus_p(self) -> bool:
        return abs(self.decay_exponent - self.p) <= 0.15

    def log_slope(self, one_sided: bool = False, start: int | None = None) -> float:
        """Least-squares slope of ``S_p(K')`` against ``log K'`` on the last half."""
        sums = self.one_sided if one_sided else self.two_sided
        K = sums.size - 1
        lo = start if start is not None else max(1, K // 2)
        ks = np.arange(lo, K + 1)
        return float(np.polyfit(np.log(ks), sums[lo:], 1)[0])


def schatten_diag(cfg: DiscConfig, lam: complex, p: float) -> SchattenTable:
    ratios = mode_ratios(cfg, lam)
    terms = np.abs(ratios.nonnegative - 1) ** p
    one = np.concatenate([[0.0], np.cumsum(terms[1:])])
    two = terms[0] + 2 * one
    K = cfg.max_mode
    lo = max(1, K // 2)
    ks = np.arange(lo, K + 1)
    tail = terms[lo:]
    if np.all(tail > 0):
        exponent = -float(np.polyfit(np.log(ks), np.log(tail), 1)[0])
    else:
        exponent = math.inf
    return SchattenTable(float(p), terms, two, one, exponent)
