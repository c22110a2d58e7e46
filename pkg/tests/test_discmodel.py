import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from evanskit.discmodel import (
    DiscConfig,
    ModeSequence,
    d_k,
    jost_dtn,
    jost_modes,
    mode_dirichlet_eigenvalues,
    mode_ratios,
    schatten_diag,
)
from evanskit.errors import ModeDirichletEigenvalue, RobinEigenvalue

# squared zeros of J_0 and J_1 (mpmath besseljzero, 30 digits)
J0_ZEROS_SQ = (5.78318596294678452, 30.4712623436620864)
J1_ZERO_SQ = 14.6819706421238933

# z J_k'(z) / J_k(z) at z = sqrt(lam), mpmath reference values
BESSEL_DTN = {
    1: {0: -0.5750809150043059, 3: 2.8734041736246216, 10: 9.954459064136154},
    3 + 2j: {
        0: -1.215583808980957 - 2.313954011968006j,
        3: 2.617582186523535 - 0.2703398473894696j,
        10: 9.863208783058473 - 0.0919561447929829j,
    },
    -4: {0: 1.395549315928016, 3: 3.4769068318000995, 10: 10.180459723406516},
}


def test_d_k_at_zero_is_k():
    assert [d_k(k, 0) for k in range(6)] == [0, 1, 2, 3, 4, 5]


@pytest.mark.parametrize("lam", list(BESSEL_DTN))
def test_d_k_against_reference(lam):
    for k, want in BESSEL_DTN[lam].items():
        assert abs(d_k(k, lam) - want) < 1e-10
        assert abs(d_k(-k, lam) - want) < 1e-10


def test_d_40_at_3_against_reference():
    # |d_40(3) - 40| is about lam / (2 (k + 1)), i.e. 0.0366
    assert abs(d_k(40, 3) - 40 - (-0.036601313817965590)) < 1e-12


def test_d_k_approaches_k():
    gaps = [abs(d_k(k, 3) - k) for k in range(5, 61)]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


def test_d_k_pole_detected():
    with pytest.raises(ModeDirichletEigenvalue):
        d_k(0, 5.78318596)


def test_mode_dirichlet_eigenvalues():
    got = mode_dirichlet_eigenvalues(0, 35)
    assert np.allclose(got, J0_ZEROS_SQ, atol=1e-9)
    assert abs(mode_dirichlet_eigenvalues(1, 20)[0] - J1_ZERO_SQ) < 1e-9


def test_jost_matches_bessel_series():
    cfg = DiscConfig()
    for lam in (1, 3, 3 + 2j, -4):
        vals = jost_modes(cfg, range(11), lam)
        ref = [d_k(k, lam) for k in range(11)]
        assert np.abs(vals - ref).max() < 1e-7


def test_jost_trivial_case():
    assert abs(jost_dtn(DiscConfig(), 0, 0.0)) < 1e-12


def test_constant_potential_is_a_shift():
    cfg = DiscConfig(q=lambda r: 2.0 + 0 * r)
    for k in (0, 2, 5):
        assert abs(jost_dtn(cfg, k, 7.0) - d_k(k, 5.0)) < 1e-7


def test_identical_operators_give_unit_ratios():
    seq = mode_ratios(DiscConfig(gamma=0, mu=1.5, mu_hat=1.5, max_mode=20), 3.3)
    assert np.allclose(seq.nonnegative, 1)
    table = schatten_diag(DiscConfig(gamma=0, mu=1, mu_hat=1, max_mode=20), 3.3, 2)
    assert np.all(table.two_sided == 0)


def test_ratio_bounds_for_large_modes():
    mu, mu_hat, lam, gamma = 1.0, 2.0, 7.0, 1.0
    seq = mode_ratios(DiscConfig(gamma=gamma, mu=mu, mu_hat=mu_hat, max_mode=300), lam)
    c = abs(mu - mu_hat)
    for k in range(20, 301):
        r = abs(seq[k] - 1)
        assert 0.5 * c / (k + abs(mu) + 1) <= r <= 1.5 * c / (k - abs(mu) - 1)
        assert seq[k] == seq[-k]


def test_robin_pole_detected():
    # d_0(lam) + mu = 0 at the chosen mu
    lam = 2.0
    with pytest.raises(RobinEigenvalue):
        mode_ratios(DiscConfig(mu=-d_k(0, lam), mu_hat=1, max_mode=8), lam)


def test_mode_sequence_layout():
    seq = ModeSequence(1.0, np.arange(4, dtype=complex))
    assert seq.max_mode == 3
    assert list(seq.full().real) == [3, 2, 1, 0, 1, 2, 3]
    assert dict(seq.items())[-2] == 2


def test_schatten_decay_exponent():
    t2 = schatten_diag(DiscConfig(gamma=1, mu=1, mu_hat=2, max_mode=200), 7, 2)
    assert t2.decays_like_k_minus_p
    t1 = schatten_diag(DiscConfig(gamma=1, mu=1, mu_hat=2, max_mode=200), 7, 1)
    assert t1.decays_like_k_minus_p


def test_config_validation():
    with pytest.raises(ValueError):
        DiscConfig(max_mode=4)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 30), st.floats(-20, 4))
def test_d_k_real_below_first_pole(k, lam):
    # below the first Dirichlet eigenvalue of every mode (5.78) values are real
    assert abs(d_k(k, lam).imag) == 0


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10), st.floats(0.5, 3))
def test_jost_truncation_point_irrelevant(k, scale):
    # a larger potential bound moves the start of the backward sweep further out
    a = jost_modes(DiscConfig(), [k], 2.5)[0]
    b = jost_modes(DiscConfig(q_sup=scale), [k], 2.5)[0]
    assert abs(a - b) < 1e-8
