"""Scenario runners behind the command line.

Each runner takes a validated :class:`RunConfig` and returns a
:class:`ScenarioResult`: CSV column names, rows, and ``key = value`` summary
lines.  Nothing here touches the file system.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import contour, detengine, discmodel, intervalmodel, maslov, pencilmult
from .config import ProblemSpec, RunConfig
from .errors import OnSpectrum
from .schrodinger1d import (
    Schrodinger1DProblem,
    evans_dirichlet,
    evans_ratio,
    evans_robin,
    frame,
    polynomial_potential,
    robin_to_dirichlet,
    tabulated_potential,
)


@dataclass
class ScenarioResult:
    columns: list
    rows: list
    summary: list


def build_problem(spec: ProblemSpec) -> Schrodinger1DProblem:
    n = spec.n
    eye = np.eye(n)
    if spec.potential == "zero":
        Q = polynomial_potential([0.0 * eye])
    elif spec.potential == "constant":
        Q = polynomial_potential([spec.value * eye])
    elif spec.potential == "polynomial":
        Q = polynomial_potential([c * eye for c in spec.coefficients])
    else:
        Q = tabulated_potential(spec.xs, np.asarray(spec.values)[:, None, None] * eye)
    p = Schrodinger1DProblem(n, Q, spec.theta_plus * eye, spec.theta_minus * eye)
    return p.shifted(spec.shift) if spec.shift else p


def _reference(cfg: RunConfig) -> Schrodinger1DProblem:
    """The comparison operator; by default the problem shifted past the window."""
    if cfg.reference is not None:
        return build_problem(cfg.reference)
    p = build_problem(cfg.problem)
    return p.shifted(cfg.window.lambda2 - cfg.window.lambda1 + 100.0)


def _real_grid(cfg: RunConfig) -> np.ndarray:
    w = cfg.window
    return np.linspace(w.lambda1, w.lambda2, w.samples)


def _count(f, cfg: RunConfig) -> int:
    w, c = cfg.window, cfg.contour
    return contour.count_eigs(
        f, w.lambda1, w.lambda2, w.delta, vectorized=True,
        samples=c.initial_samples, max_refine_depth=c.max_refine_depth,
    )


def run_interval(cfg: RunConfig) -> ScenarioResult:
    s = cfg.interval
    theta = intervalmodel.Theta2x2(s.t11, s.t12, s.t21, s.t22)
    count = _count(lambda z: intervalmodel.det_n_theta(z, theta), cfg)
    rows = []
    for lam in _real_grid(cfg):
        try:
            v = complex(intervalmodel.det_n_theta(lam, theta))
        except OnSpectrum:
            v = complex(np.nan, np.nan)
        rows.append((lam, v.real, v.imag))
    w = cfg.window
    expected = intervalmodel.dirichlet_count(w.lambda1, w.lambda2)
    return ScenarioResult(
        ["lambda", "re_evans", "im_evans"],
        rows,
        [f"count = {count}", f"dirichlet_closed_form = {expected}"],
    )


def run_schrod1d(cfg: RunConfig) -> ScenarioResult:
    p, phat = build_problem(cfg.problem), _reference(cfg)
    count = _count(lambda zs: evans_ratio(p, phat, zs), cfg)
    grid = _real_grid(cfg)
    fr = frame(p, grid)
    frh = frame(phat, grid)
    try:
        values = evans_ratio(p, phat, grid, frames=(fr, frh))
    except OnSpectrum:
        values = np.array([_safe_ratio(p, phat, lam) for lam in grid])
    # determinant identity det N_Theta * E_Theta = E_D on the same frames
    residual = 0.0
    try:
        dN = np.array([np.linalg.det(N) for N in robin_to_dirichlet(fr, p.theta)])
        e_theta, e_d = np.asarray(evans_robin(fr, p.theta)), np.asarray(evans_dirichlet(fr))
        scale = np.maximum(np.abs(e_d), np.abs(dN * e_theta))
        residual = float(np.max(np.abs(dN * e_theta - e_d) / np.maximum(scale, 1e-300)))
    except OnSpectrum:
        residual = float("nan")
    rows = [(lam, v.real, v.imag) for lam, v in zip(grid, values)]
    return ScenarioResult(
        ["lambda", "re_evans", "im_evans"],
        rows,
        [f"count = {count}", f"identity_residual = {residual:.3e}"],
    )


def _safe_ratio(p, phat, lam) -> complex:
    try:
        return evans_ratio(p, phat, lam)
    except OnSpectrum:
        return complex(np.nan, np.nan)


def run_count(cfg: RunConfig) -> ScenarioResult:
    p, phat = build_problem(cfg.problem), _reference(cfg)
    count = _count(lambda zs: evans_ratio(p, phat, zs), cfg)
    w = cfg.window
    return ScenarioResult(
        ["lambda1", "lambda2", "delta", "count"],
        [(w.lambda1, w.lambda2, w.delta, count)],
        [f"count = {count}"],
    )


def run_maslov(cfg: RunConfig) -> ScenarioResult:
    p = build_problem(cfg.problem)
    w = cfg.window
    trace = maslov.spectral_flow(p, w.lambda1, w.lambda2, w.grid_step)
    m = trace.phases.shape[1]
    columns = ["lambda", "kind", "kernel_dim", "direction"] + [f"phase_{j}" for j in range(m)]
    rows = [(lam, "grid", 0, 0, *ph) for lam, ph in zip(trace.grid, trace.phases)]
    for c in trace.crossings:
        ph = np.sort(np.angle(maslov.souriau(p, c.lam, check=False).eigenvalues()))
        rows.append((c.lam, "crossing", c.kernel_dim, c.direction, *ph))
    rows.sort(key=lambda r: (r[0], r[1]))
    summary = [f"flow = {trace.flow}", f"crossings = {len(trace.crossings)}"]
    return ScenarioResult(columns, rows, summary)


def _disc_config(cfg: RunConfig) -> discmodel.DiscConfig:
    d = cfg.disc
    q = None
    if d.coefficients:
        coeffs = d.coefficients
        q = lambda r: np.polynomial.polynomial.polyval(r, coeffs)  # noqa: E731
    return discmodel.DiscConfig(q=q, gamma=d.gamma, mu=d.mu, mu_hat=d.mu_hat, max_mode=d.max_mode)


def run_disc(cfg: RunConfig) -> ScenarioResult:
    d = cfg.disc
    dc = _disc_config(cfg)
    lam = complex(d.lam)
    if dc.laplacian:
        dk = discmodel.d_modes(dc.max_mode, lam)
    else:
        dk = discmodel.jost_modes(dc, np.arange(dc.max_mode + 1), lam)
    table = discmodel.schatten_diag(dc, lam, d.p)
    ratios = discmodel.mode_ratios(dc, lam)
    rows = [
        (k, dk[k].real, dk[k].imag, ratios[k].real, ratios[k].imag, table.terms[k], table.two_sided[k])
        for k in range(dc.max_mode + 1)
    ]
    summary = [
        f"decay_exponent = {table.decay_exponent:.6f}",
        f"log_slope_two_sided = {table.log_slope():.6f}",
        f"log_slope_one_sided = {table.log_slope(one_sided=True):.6f}",
    ]
    if d.p >= 2:
        det = detengine.det_p_modes(ratios, d.p, d.tail_tol)
        summary += [
            f"det_p = {det.value.real:.12g}{det.value.imag:+.12g}i",
            f"tail_bound = {det.tail_bound:.3e}",
        ]
    return ScenarioResult(
        ["k", "re_dk", "im_dk", "re_ratio", "im_ratio", "term", "partial_sum"], rows, summary
    )


def run_pencil(cfg: RunConfig) -> ScenarioResult:
    pc = cfg.pencil
    T = pencilmult.builtin(pc.builtin)
    m = pencilmult.multiplicity(T, pc.lambda0, pc.radius, samples=cfg.contour.initial_samples)
    basis = pencilmult.kernel_basis(T, pc.lambda0)
    ranks = [pencilmult.rank_of_eigenvector(T, pc.lambda0, basis[:, i], pc.max_len) for i in range(basis.shape[1])]
    rows = [(i, r) for i, r in enumerate(ranks)]
    shown = [f">= {r}" if r >= pc.max_len else str(r) for r in ranks]
    summary = [
        f"multiplicity = {m}",
        f"kernel_dim = {basis.shape[1]}",
        f"ranks = {', '.join(shown)}",
        f"sum_of_ranks = {sum(ranks)}",
    ]
    return ScenarioResult(["index", "rank"], rows, summary)


RUNNERS = {
    "interval": run_interval,
    "schrod1d": run_schrod1d,
    "count": run_count,
    "maslov": run_maslov,
    "disc": run_disc,
    "pencil": run_pencil,
}


def run_scenario(cfg: RunConfig) -> ScenarioResult:
    return RUNNERS[cfg.scenario](cfg)
