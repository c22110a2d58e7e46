"""Souriau map, spectral flow through -1 and the Evans-Maslov comparison.

``W(lam) = 2i N_{iI}(lam) - I`` where ``N_{iI}`` is the Robin-to-Dirichlet
matrix with ``Theta = iI``.  Where the Neumann-to-Dirichlet map
``N(lam) = X Z^{-1}`` exists this is its Cayley transform
``(N + i)(N - i)^{-1}``.  For real ``lam`` and Hermitian ``Q`` the matrix is
unitary; ``-1`` is an eigenvalue exactly at Dirichlet eigenvalues, with
multiplicity equal to the kernel dimension, and the eigenvalues pass ``-1``
clockwise as ``lam`` increases.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from . import contour, numkernel
from .errors import (
    ConsistencyError,
    DirichletEigenvalue,
    MonotonicityViolation,
    ResolutionError,
    SingularMatrix,
)
from .schrodinger1d import Schrodinger1DProblem, evans_ratio, frame, robin_to_dirichlet

KERNEL_TOL = 1e-6
AMBIGUOUS_TOL = 1e-4
CAYLEY_CHECK_TOL = 1e-8
CAYLEY_MAX_COND = 1e4
MAX_PHASE_MOVE = math.pi / 4
MAX_SUBDIVISIONS = 30
CROSSING_GROUP_TOL = 1e-8


@dataclass(frozen=True)
class SouriauSample:
    lam: complex
    W: np.ndarray = field(repr=False)
    via_continuation: bool = True
    cayley_residual: float | None = None

    def unitarity_defect(self) -> float:
        return float(np.abs(self.W.conj().T @ self.W - np.eye(self.W.shape[0])).max())

    def eigenvalues(self) -> np.ndarray:
        return numkernel.eig(self.W)


def souriau_matrices(p: Schrodinger1DProblem, lams) -> np.ndarray:
    """``W`` at every ``lam`` of a 1-D array, shape ``(B, 2n, 2n)``."""
    lams = np.atleast_1d(np.asarray(lams, dtype=complex))
    fr = frame(p, lams)
    N = robin_to_dirichlet(fr, 1j * np.eye(2 * p.n))
    return 2j * N - np.eye(2 * p.n)


def souriau(p: Schrodinger1DProblem, lam, check: bool = True) -> SouriauSample:
    """``W(lam)`` from the Robin continuation; optionally checked against the Cayley form.

    The check runs only where ``Z`` is comfortably invertible (condition
    number below ``1e4``) and raises :class:`ConsistencyError` on a mismatch
    above ``1e-8``.
    """
    lam = complex(lam)
    fr = frame(p, lam)
    eye = np.eye(2 * p.n)
    W = 2j * robin_to_dirichlet(fr, 1j * eye) - eye
    residual = None
    if check and np.linalg.cond(fr.Z) < CAYLEY_MAX_COND:
        try:
            N = numkernel.solve(fr.Z.T, fr.X.T).T
            cayley = numkernel.solve((N - 1j * eye).T, (N + 1j * eye).T).T
        except SingularMatrix:
            cayley = None
        if cayley is not None:
            residual = float(np.abs(W - cayley).max())
            if residual > CAYLEY_CHECK_TOL * max(1.0, float(np.abs(W).max())):
                raise ConsistencyError(f"Souriau continuation and Cayley form differ by {residual:.3e} at {lam}")
    return SouriauSample(lam, W, True, residual)


def _det_one_plus_w(p: Schrodinger1DProblem):
    eye = np.eye(2 * p.n)

    def f(zs):
        return np.array([numkernel.det(eye + w) for w in souriau_matrices(p, zs)])

    return f


def kernel_dim_at(p: Schrodinger1DProblem, lam: float, radius: float = 0.05, cross_check: bool = True) -> int:
    """``dim ker(I + W(lam))`` for real ``lam``.

    Counts eigenvalues within ``1e-6`` of ``-1``; one in ``[1e-6, 1e-4]``
    raises :class:`ResolutionError`.  When ``cross_check`` is set and the count
    is positive, the winding of ``det(I + W)`` on a circle of ``radius``
    must agree.
    """
    lam = float(np.real(lam))
    W = souriau_matrices(p, [lam])[0]
    dist = np.abs(numkernel.eig(W) + 1)
    if np.any((dist >= KERNEL_TOL) & (dist <= AMBIGUOUS_TOL)):
        raise ResolutionError(f"eigenvalue of W at distance {dist.min():.2e} from -1 near lambda={lam}")
    count = int(np.count_nonzero(dist < KERNEL_TOL))
    if cross_check and count:
        wound = contour.multiplicity_at(_det_one_plus_w(p), lam, radius, vectorized=True, samples=32)
        if wound != count:
            raise ConsistencyError(f"kernel dimension {count} but det(I+W) winds {wound} times at {lam}")
    return count


@dataclass(frozen=True)
class Crossing:
    lam: float
    kernel_dim: int
    direction: int


@dataclass(frozen=True)
class FlowTrace:
    """Sampled eigenphases of ``W`` and the detected passages through ``-1``.

    ``phases[i]`` holds the sorted ``arg`` of the eigenvalues at ``grid[i]``.
    """

    grid: np.ndarray
    phases: np.ndarray
    crossings: tuple

    @property
    def flow(self) -> int:
        return sum(c.direction * c.kernel_dim for c in self.crossings)


def _phase_from_minus_one(z):
    """Angle of ``z`` measured from ``-1``, in ``(-pi, pi]``; zero means ``z = -1``."""
    return np.angle(-np.asarray(z))


def _match(prev: np.ndarray, cur: np.ndarray) -> tuple[np.ndarray, float]:
    """Reorder ``cur`` to follow ``prev``; return it and the largest angular move."""
    cost = np.abs(np.angle(cur[None, :] / prev[:, None]))
    rows, cols = scipy.optimize.linear_sum_assignment(cost)
    ordered = cur[cols[np.argsort(rows)]]
    return ordered, float(cost[rows, cols].max())


def _tracked_eigs(p: Schrodinger1DProblem, lam1: float, lam2: float, step: float):
    grid = list(np.linspace(lam1, lam2, max(2, int(math.ceil((lam2 - lam1) / step)) + 1)))
    eigs = [numkernel.eig(w) for w in souriau_matrices(p, grid)]
    for _ in range(MAX_SUBDIVISIONS):
        tracked = [eigs[0]]
        too_far = []
        for i in range(1, len(grid)):
            ordered, move = _match(tracked[-1], eigs[i])
            tracked.append(ordered)
            if move > MAX_PHASE_MOVE:
                too_far.append(i)
        if not too_far:
            return np.array(grid), np.array(tracked)
        mids = [0.5 * (grid[i - 1] + grid[i]) for i in too_far]
        new = [numkernel.eig(w) for w in souriau_matrices(p, mids)]
        for i, mid, e in sorted(zip(too_far, mids, new), key=lambda t: -t[0]):
            grid.insert(i, mid)
            eigs.insert(i, e)
    raise ResolutionError("eigenphases of W move too fast to track on this grid")


def _branch_phase(p: Schrodinger1DProblem, a: float, b: float, za: complex, zb: complex):
    """Phase from ``-1`` of the eigenvalue that continues the branch ``za -> zb``."""
    pa, pb = _phase_from_minus_one(za), _phase_from_minus_one(zb)

    def g(lam):
        t = (lam - a) / (b - a)
        guess = -np.exp(1j * (pa + t * (pb - pa)))
        e = numkernel.eig(souriau_matrices(p, [lam])[0])
        return float(_phase_from_minus_one(e[np.argmin(np.abs(e - guess))]))

    return g


def _nearest_phase(p: Schrodinger1DProblem, lam: float) -> float:
    e = numkernel.eig(souriau_matrices(p, [lam])[0])
    return float(_phase_from_minus_one(e[np.argmin(np.abs(e + 1))]))


def spectral_flow(p: Schrodinger1DProblem, lambda1: float, lambda2: float, grid_step: float = 0.25) -> FlowTrace:
    """Signed count of eigenvalues of ``W(lam)`` passing ``-1`` for ``lam`` in ``[lambda1, lambda2]``.

    Eigenvalues are followed across a grid (refined until no eigenvalue moves
    more than ``pi/4`` between neighbours).  Each sign change of the phase
    about ``-1`` is located by Brent's method; the direction is the sign of the
    phase derivative by central difference.  For a Hermitian potential every
    direction must be ``-1``, otherwise :class:`MonotonicityViolation`.
    """
    lam1, lam2 = float(lambda1), float(lambda2)
    if not lam1 < lam2:
        raise ValueError("need lambda1 < lambda2")
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")
    if not p.is_symmetric():
        raise ValueError("spectral flow needs a Hermitian potential")
    for end in (lam1, lam2):
        if kernel_dim_at(p, end, cross_check=False):
            raise DirichletEigenvalue(end)

    grid, tracked = _tracked_eigs(p, lam1, lam2, grid_step)
    phases = _phase_from_minus_one(tracked)
    h = 1e-4 * (lam2 - lam1)
    found = []
    for i in range(len(grid) - 1):
        for j in range(tracked.shape[1]):
            pa, pb = phases[i, j], phases[i + 1, j]
            if pa == 0 or np.sign(pa) == np.sign(pb):
                continue
            if abs(pa) > math.pi / 2 or abs(pb) > math.pi / 2:
                continue  # passage through +1
            a, b = grid[i], grid[i + 1]
            g = _branch_phase(p, a, b, tracked[i, j], tracked[i + 1, j])
            if g(a) * g(b) < 0:
                star = scipy.optimize.brentq(g, a, b, xtol=1e-13, rtol=4 * np.finfo(float).eps)
            else:
                star = 0.5 * (a + b)  # branch relabelled inside the cell; kernel check below decides
            lo, hi = max(lam1, star - h), min(lam2, star + h)
            slope = (_nearest_phase(p, hi) - _nearest_phase(p, lo)) / (hi - lo)
            found.append((star, int(np.sign(slope))))

    crossings = []
    found.sort()
    while found:
        star, direction = found.pop(0)
        group = [direction]
        while found and abs(found[0][0] - star) <= CROSSING_GROUP_TOL * max(1.0, abs(star)):
            group.append(found.pop(0)[1])
        if any(d >= 0 for d in group):
            raise MonotonicityViolation(f"eigenvalue of W crosses -1 counter-clockwise at lambda={star}")
        dim = kernel_dim_at(p, star)
        if dim != len(group):
            raise ConsistencyError(f"{len(group)} branches cross -1 at {star} but the kernel has dimension {dim}")
        crossings.append(Crossing(star, dim, -1))
    return FlowTrace(grid, np.sort(np.angle(tracked), axis=1), tuple(crossings))


@dataclass(frozen=True)
class EvansMaslovReport:
    winding: int
    flow: int
    flow_p: int
    flow_phat: int

    @property
    def passed(self) -> bool:
        return self.winding == self.flow


def evans_maslov_check(
    p: Schrodinger1DProblem,
    phat: Schrodinger1DProblem,
    lambda1: float,
    lambda2: float,
    delta: float,
    grid_step: float = 0.25,
) -> EvansMaslovReport:
    """Winding of the Evans ratio around the window versus ``flow(phat) - flow(p)``."""
    w = contour.count_eigs(lambda zs: evans_ratio(p, phat, zs), lambda1, lambda2, delta, vectorized=True)
    f_p = spectral_flow(p, lambda1, lambda2, grid_step).flow
    f_hat = spectral_flow(phat, lambda1, lambda2, grid_step).flow
    return EvansMaslovReport(w, f_hat - f_p, f_p, f_hat)
