import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from evanskit.errors import DirichletEigenvalue, MonotonicityViolation
from evanskit.intervalmodel import dirichlet_count
from evanskit.maslov import (
    FlowTrace,
    Crossing,
    evans_maslov_check,
    kernel_dim_at,
    souriau,
    souriau_matrices,
    spectral_flow,
)
from evanskit.schrodinger1d import Schrodinger1DProblem
from conftest import random_hermitian

LAP = Schrodinger1DProblem.laplacian()
FIRST = (np.pi / 2) ** 2


def test_unitary_on_real_axis():
    for lam in (-3.0, 0.5, FIRST, 7.0, 30.0):
        assert souriau(LAP, lam).unitarity_defect() < 1e-8


def test_unitary_for_random_hermitian_potential(rng):
    for n in (1, 2):
        p = Schrodinger1DProblem.polynomial([random_hermitian(rng, n), random_hermitian(rng, n)])
        for lam in np.linspace(-2, 25, 10):
            assert souriau(p, lam).unitarity_defect() < 1e-8


def test_continuation_agrees_with_cayley_form():
    s = souriau(LAP, 5.0)
    assert s.cayley_residual is not None and s.cayley_residual < 1e-8
    # at a Neumann eigenvalue (lam = 0) the Cayley form is skipped, the continuation is not
    assert souriau(LAP, 0.0).cayley_residual is None


@pytest.mark.parametrize("im", [0.05, 0.2, 0.5])
def test_spectral_dichotomy(im, rng):
    q = Schrodinger1DProblem.polynomial([random_hermitian(rng, 1, 2.0)])
    for p in (LAP, q):
        for re in (1.0, 6.0):
            assert np.abs(souriau(p, complex(re, im)).eigenvalues()).min() > 1
            assert np.abs(souriau(p, complex(re, -im)).eigenvalues()).max() < 1


def test_kernel_dimension():
    assert kernel_dim_at(LAP, FIRST) == 1
    assert kernel_dim_at(LAP, 5.0) == 0
    assert kernel_dim_at(Schrodinger1DProblem.laplacian(2), FIRST) == 2


@pytest.mark.parametrize("window,flow", [((1, 7), -1), ((1, 12), -2), ((15, 20), 0)])
def test_flow_of_scalar_laplacian(window, flow):
    trace = spectral_flow(LAP, *window)
    assert trace.flow == flow
    assert all(c.direction == -1 for c in trace.crossings)


def test_crossings_located_precisely():
    trace = spectral_flow(LAP, 1, 12)
    assert [c.lam for c in trace.crossings] == pytest.approx([FIRST, 4 * FIRST], abs=1e-9)


def test_decoupled_copies_double_the_flow():
    trace = spectral_flow(Schrodinger1DProblem.laplacian(2), 1, 12)
    assert trace.flow == -4
    assert [c.kernel_dim for c in trace.crossings] == [2, 2]


def test_endpoint_on_spectrum():
    with pytest.raises(DirichletEigenvalue):
        spectral_flow(LAP, FIRST, 5)


def test_non_hermitian_rejected():
    p = Schrodinger1DProblem(1, lambda x: np.array([[1j]]))
    with pytest.raises(ValueError):
        spectral_flow(p, 1, 5)


def test_flow_trace_sums_signed_kernel_dims():
    t = FlowTrace(np.array([0.0, 1.0]), np.zeros((2, 2)), (Crossing(0.5, 2, -1), Crossing(0.7, 1, -1)))
    assert t.flow == -3


@settings(max_examples=6, deadline=None)
@given(st.floats(0.3, 40), st.floats(1.0, 12))
def test_flow_counts_dirichlet_eigenvalues(start, width):
    lam1, lam2 = start, start + width
    # keep the endpoints away from (k pi / 2)^2
    eig = (np.arange(1, 10) * np.pi / 2) ** 2
    if np.min(np.abs(eig - lam1)) < 0.1 or np.min(np.abs(eig - lam2)) < 0.1:
        return
    assert -spectral_flow(LAP, lam1, lam2).flow == dirichlet_count(lam1, lam2, length=2.0)


def test_evans_maslov_shifted_reference():
    rep = evans_maslov_check(LAP, LAP.shifted(100), 1, 12, 0.5)
    assert (rep.winding, rep.flow) == (2, 2)
    assert rep.passed


def test_evans_maslov_identical_problems():
    rep = evans_maslov_check(LAP, LAP, 1, 12, 0.5)
    assert (rep.winding, rep.flow) == (0, 0)


def test_evans_maslov_constant_potential():
    q = Schrodinger1DProblem.constant(1.0)
    rep = evans_maslov_check(q, LAP, 1, 7, 0.5)
    assert rep.passed
    assert (rep.flow_p, rep.flow_phat) == (-1, -1)


def test_batched_souriau_matches_scalar():
    lams = [0.7, 3.2, 9.0]
    batch = souriau_matrices(LAP, lams)
    for w, lam in zip(batch, lams):
        assert np.abs(w - souriau(LAP, lam).W).max() < 1e-10


def test_monotonicity_violation_is_reported(monkeypatch):
    import evanskit.maslov as m

    monkeypatch.setattr(m, "_nearest_phase", lambda p, lam: lam)  # phase increasing in lam
    with pytest.raises(MonotonicityViolation):
        spectral_flow(LAP, 1, 7)
