"""Argument-principle winding numbers by adaptive phase continuation.

The integral ``(1 / 2 pi i) \\oint f'/f`` is evaluated without derivatives:
``f`` is sampled along the closed contour, any segment whose phase jump
exceeds ``pi / 2`` (or whose modulus changes by more than a factor ``e``) is
bisected, and the unwrapped phase increments are summed.  Once no segment
needs splitting, every segment is split one more time and the test repeated,
which catches jumps that wrapped around by a full turn.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ContourResolutionError, OnSpectrum

ZERO_RTOL = 1e-10
MAX_PHASE_STEP = math.pi / 2
MAX_LOG_MODULUS_STEP = 1.0
INTEGER_TOL = 1e-6
DELTA_HALVINGS = 6


@dataclass(frozen=True)
class Contour:
    """Positively oriented rectangle ``[lam1, lam2] x [-delta, delta]`` or circle."""

    kind: str
    lam1: float = 0.0
    lam2: float = 0.0
    delta: float = 0.0
    center: complex = 0.0
    radius: float = 0.0
    initial_samples: int = 64
    max_refine_depth: int = 20

    def __post_init__(self):
        if self.kind == "rectangle":
            if not self.lam1 < self.lam2:
                raise ValueError("rectangle needs lam1 < lam2")
            if not self.delta > 0:
                raise ValueError("rectangle needs delta > 0")
        elif self.kind == "circle":
            if not self.radius > 0:
                raise ValueError("circle needs radius > 0")
        else:
            raise ValueError(f"unknown contour kind {self.kind!r}")
        if self.initial_samples < 8:
            raise ValueError("initial_samples must be at least 8")

    @classmethod
    def rectangle(cls, lam1, lam2, delta, **kw) -> "Contour":
        return cls("rectangle", lam1=float(lam1), lam2=float(lam2), delta=float(delta), **kw)

    @classmethod
    def circle(cls, center, radius, **kw) -> "Contour":
        return cls("circle", center=complex(center), radius=float(radius), **kw)

    def segments(self) -> list[tuple[Callable[[np.ndarray], np.ndarray], int]]:
        """Pieces ``(param, count)``; ``param`` maps ``[0, 1]`` onto the piece."""
        if self.kind == "circle":
            c, r = self.center, self.radius
            return [(lambda t: c + r * np.exp(2j * np.pi * t), self.initial_samples)]
        a, b, d = self.lam1, self.lam2, self.delta
        corners = [complex(a, -d), complex(b, -d), complex(b, d), complex(a, d)]
        lengths = [b - a, 2 * d, b - a, 2 * d]
        total = sum(lengths)
        pieces = []
        for i, length in enumerate(lengths):
            z0, z1 = corners[i], corners[(i + 1) % 4]
            # spacing never exceeds delta: zeros inside sit about delta from
            # the long sides and cause phase features of that width
            floor = int(math.ceil(length / self.delta))
            count = max(4, floor, int(round(self.initial_samples * length / total)))
            pieces.append(((lambda t, z0=z0, z1=z1: z0 + (z1 - z0) * t), count))
        return pieces


@dataclass(frozen=True)
class WindingResult:
    winding: int
    samples_used: int
    min_modulus_on_contour: float


def _evaluate(f, zs: np.ndarray, vectorized: bool) -> np.ndarray:
    if zs.size == 0:
        return np.empty(0, dtype=complex)
    if vectorized:
        out = np.asarray(f(zs), dtype=complex)
    else:
        out = np.array([complex(f(z)) for z in zs], dtype=complex)
    return out


def _too_coarse(a: complex, b: complex) -> bool:
    # log f must change by a small amount in both phase and modulus; the
    # modulus test catches a zero passed between two samples whose phase
    # difference happens to wrap to a small angle
    r = b / a
    return abs(np.angle(r)) > MAX_PHASE_STEP or abs(math.log(abs(r))) > MAX_LOG_MODULUS_STEP


def winding(f, c: Contour, vectorized: bool = False) -> WindingResult:
    """Winding number of ``f`` around the origin along ``c``.

    Raises :class:`OnSpectrum` if ``|f|`` drops below ``1e-10`` of the largest
    sampled modulus (or is not finite), and :class:`ContourResolutionError`
    if a segment still jumps by more than ``pi / 2`` after
    ``c.max_refine_depth`` bisections.
    """
    ts_all, vals_all, scale_ref = [], [], [0.0]
    pieces = c.segments()
    # Every piece is sampled on its own closed parameter grid [0, 1]; corners
    # therefore appear twice, once at the end of a side and once at the start
    # of the next.
    grids = [np.linspace(0.0, 1.0, count + 1) for _, count in pieces]
    points = np.concatenate([param(g) for (param, _), g in zip(pieces, grids)])
    values = _evaluate(f, points, vectorized)
    _check(values, points, scale_ref)

    offset = 0
    for (param, _), g in zip(pieces, grids):
        m = g.size
        ts_all.append(list(g))
        vals_all.append(list(values[offset : offset + m]))
        offset += m

    used = points.size
    verified = False
    rounds = 0
    while True:
        pending = []
        for pi, (ts, vs) in enumerate(zip(ts_all, vals_all)):
            for i in range(len(ts) - 1):
                if _too_coarse(vs[i], vs[i + 1]):
                    pending.append((pi, i))
        if pending:
            rounds += 1
            if rounds > c.max_refine_depth:
                raise ContourResolutionError(
                    f"phase still jumps by more than pi/2 after {c.max_refine_depth} refinements"
                )
            verified = False
        elif verified:
            break
        else:
            # A jump close to 2 pi wraps to a small value and passes the test,
            # so every segment is bisected once more before it is accepted.
            pending = [(pi, i) for pi, ts in enumerate(ts_all) for i in range(len(ts) - 1)]
            verified = True
        mids = [(pi, 0.5 * (ts_all[pi][i] + ts_all[pi][i + 1])) for pi, i in pending]
        zs = np.array([pieces[pi][0](np.array(t)) for pi, t in mids], dtype=complex)
        new = _evaluate(f, zs, vectorized)
        _check(new, zs, scale_ref)
        used += zs.size
        # insert from the back so earlier indices stay valid
        for (pi, i), (_, t), v in sorted(zip(pending, mids, new), key=lambda item: (item[0][0], -item[0][1])):
            ts_all[pi].insert(i + 1, t)
            vals_all[pi].insert(i + 1, v)

    total = 0.0
    min_mod = np.inf
    for vs in vals_all:
        arr = np.asarray(vs)
        min_mod = min(min_mod, float(np.abs(arr).min()))
        total += float(np.angle(arr[1:] / arr[:-1]).sum())
    turns = total / (2 * math.pi)
    w = int(round(turns))
    if abs(turns - w) > INTEGER_TOL:
        raise ContourResolutionError(f"winding {turns} is not an integer")
    return WindingResult(w, used, min_mod)


def _check(values: np.ndarray, points: np.ndarray, scale_ref: list) -> None:
    finite = np.isfinite(values)
    if not finite.all():
        z = points[int(np.argmin(finite))]
        raise OnSpectrum(f"non-finite value on contour at lambda={z}", z)
    if values.size:
        scale_ref[0] = max(scale_ref[0], float(np.abs(values).max()))
        small = np.abs(values) <= ZERO_RTOL * scale_ref[0]
        if small.any():
            z = points[int(np.argmax(small))]
            raise OnSpectrum(f"function vanishes to tolerance on contour at lambda={z}", z)


def multiplicity_at(f, lambda0: complex, epsilon: float, vectorized: bool = False, samples: int = 64) -> int:
    """Order of the zero (positive) or pole (negative) of ``f`` at ``lambda0``.

    For essential singularities this is the winding of ``f`` on the circle of
    radius ``epsilon``, which is still an integer.
    """
    return winding(f, Contour.circle(lambda0, epsilon, initial_samples=samples), vectorized).winding


def count_eigs(
    evans,
    lambda1: float,
    lambda2: float,
    delta: float,
    vectorized: bool = False,
    samples: int = 64,
    max_refine_depth: int = 20,
) -> int:
    """Winding of an Evans function around ``[lambda1, lambda2] x [-delta, delta]``.

    When a sample lands on a zero or pole away from the real endpoints,
    ``delta`` is halved (up to six times) before giving up.
    """
    d = float(delta)
    for attempt in range(DELTA_HALVINGS + 1):
        c = Contour.rectangle(lambda1, lambda2, d, initial_samples=samples, max_refine_depth=max_refine_depth)
        try:
            return winding(evans, c, vectorized).winding
        except OnSpectrum as exc:
            z = exc.lam
            on_side = z is not None and abs(complex(z).imag) > 0.5 * d
            if attempt == DELTA_HALVINGS or not on_side:
                raise
            d *= 0.5
    raise AssertionError("unreachable")
