import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from evanskit.errors import NotAnEigenvector
from evanskit.pencilmult import (
    JordanChain,
    MatrixPencil,
    builtin,
    chain_is_valid,
    chain_residuals,
    kernel_basis,
    multiplicity,
    rank_of_eigenvector,
    sum_of_ranks,
)
from conftest import random_complex

E1, E2 = np.array([1.0, 0.0]), np.array([0.0, 1.0])


@pytest.mark.parametrize("name", ["diag1-lambda2", "jordan2", "semisimple3"])
def test_builtin_multiplicities(name):
    assert multiplicity(builtin(name), 0, 0.5) == 2


def test_diag_example_chains():
    D = builtin("diag1-lambda2")
    assert chain_residuals(D, JordanChain([E2, np.zeros(2)])) == [0.0, 0.0]
    assert chain_residuals(D, JordanChain([E2, E2])) == [0.0, 0.0]
    f2 = np.array([3.0, 4.0])
    res = chain_residuals(D, JordanChain([E2, np.zeros(2), f2]))
    # third equation reads D(0) f2 + D''(0)/2 f0 = (f2[0], 1)
    assert res[:2] == [0.0, 0.0]
    assert res[2] == pytest.approx(np.hypot(3.0, 1.0))
    assert not chain_is_valid(D, JordanChain([E2, np.zeros(2), f2]))


def test_linear_pencil_classical_chain():
    A = np.array([[2.0, 1.0], [0.0, 2.0]])
    T = MatrixPencil.linear(A)
    # (A - 2) f1 = f0 gives T(2) f1 + T'(2) f0 = -(A - 2) f1 + f0 = 0
    chain = JordanChain([E1, E2], base_point=2.0)
    assert chain_residuals(T, chain) == [0.0, 0.0]


def test_ranks():
    assert rank_of_eigenvector(builtin("diag1-lambda2"), 0, E2) == 2
    assert rank_of_eigenvector(builtin("jordan2"), 0, E1) == 2
    T = MatrixPencil.linear(np.diag([1.0, 2.0, 3.0]))
    assert rank_of_eigenvector(T, 2.0, [0, 1, 0]) == 1


def test_rank_capped():
    # T(lam) = lam^5 in one dimension: the chain e, 0, 0, 0, 0 has length 5
    T = MatrixPencil.polynomial([[[0.0]]] * 5 + [[[1.0]]])
    assert rank_of_eigenvector(T, 0, [1.0]) == 5
    assert rank_of_eigenvector(T, 0, [1.0], max_len=3) == 3


def test_not_an_eigenvector():
    with pytest.raises(NotAnEigenvector):
        rank_of_eigenvector(builtin("jordan2"), 0, E2)


def test_sum_rule_on_examples():
    for name in ("diag1-lambda2", "jordan2", "semisimple3"):
        T = builtin(name)
        assert sum_of_ranks(T, 0) == multiplicity(T, 0, 0.5)


def test_kernel_basis():
    assert kernel_basis(builtin("semisimple3"), 0).shape == (3, 2)
    assert kernel_basis(builtin("jordan2"), 0).shape == (2, 1)


def test_callable_pencil_derivatives_by_cauchy_integral():
    T = MatrixPencil(2, func=lambda z: np.array([[np.exp(z), z], [0, z**3]]))
    lam = 0.4 + 0.1j
    assert np.allclose(T.taylor(1, lam), [[np.exp(lam), 1], [0, 3 * lam**2]], atol=1e-10)
    assert np.allclose(T.taylor(2, lam), [[np.exp(lam) / 2, 0], [0, 3 * lam]], atol=1e-10)


def test_callable_matches_polynomial():
    C = MatrixPencil(2, func=lambda z: np.array([[1, 0], [0, z * z]]))
    assert rank_of_eigenvector(C, 0, E2) == 2
    assert multiplicity(C, 0, 0.5) == 2


def test_generic_linear_pencils_match_eigenvalue_clusters(rng):
    from evanskit.numkernel import eig

    for _ in range(10):
        n = int(rng.integers(1, 7))
        A = random_complex(rng, n, n)
        eigs = eig(A)
        T = MatrixPencil.linear(A)
        for i, lam in enumerate(eigs):
            others = np.delete(eigs, i)
            radius = 0.3 * np.abs(others - lam).min() if others.size else 0.5
            cluster = int(np.sum(np.abs(eigs - lam) < 1e-6))
            assert multiplicity(T, lam, radius) == cluster


def test_linear_pencils_match_characteristic_polynomial(rng):
    for _ in range(20):
        n = int(rng.integers(1, 7))
        # repeated eigenvalues via a random block structure
        J = np.diag(rng.integers(-2, 3, size=n).astype(float)) + np.diag(rng.integers(0, 2, size=n - 1), 1)
        S = random_complex(rng, n, n) + 3 * np.eye(n)
        A = S @ J @ np.linalg.inv(S)
        T = MatrixPencil.linear(A)
        for lam in set(np.diag(J)):
            expected = int(np.sum(np.diag(J) == lam))
            assert multiplicity(T, lam, 0.4) == expected


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from(["diag1-lambda2", "jordan2", "semisimple3"]))
def test_equivalence_invariance(seed, name):
    rng = np.random.default_rng(seed)
    T = builtin(name)
    n = T.dim
    S1 = random_complex(rng, n, n) + 2 * np.eye(n)
    S2 = random_complex(rng, n, n) + 2 * np.eye(n)
    U = MatrixPencil(n, func=lambda z: S1 @ T(z) @ S2)
    assert multiplicity(U, 0, 0.5) == multiplicity(T, 0, 0.5)
