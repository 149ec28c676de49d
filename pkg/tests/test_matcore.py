import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from opint.errors import DimensionMismatch, DomainError, InvalidP, NonHermitian
from opint.funkit import library
from opint.matcore import (
    SpectralDecomp,
    hermitian_eig,
    mat_fun,
    matrix_from_json,
    matrix_to_json,
    schatten_norm,
    singular_values,
)
from opint.rng import CounterRNG


def charpoly_roots(H):
    """Eigenvalues as companion-matrix roots of the Faddeev-LeVerrier characteristic polynomial."""
    n = H.shape[0]
    coeffs = [1.0 + 0j]
    M = np.zeros_like(H)
    I = np.eye(n)
    for k in range(1, n + 1):
        M = H @ M + coeffs[-1] * I
        coeffs.append(-np.trace(H @ M) / k)
    return np.sort(np.roots(np.real(coeffs)).real)


def exp_taylor(H, terms=30):
    s = max(0, int(np.ceil(np.log2(max(np.abs(H).sum(axis=1).max(), 1e-300)))) + 1)
    X = H / 2.0**s
    out = np.eye(H.shape[0], dtype=complex)
    term = out.copy()
    for k in range(1, terms):
        term = term @ X / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


def test_identity_decomposition():
    D = hermitian_eig(np.eye(3))
    assert np.allclose(D.eigenvalues, 1.0)
    assert np.allclose(D.matrix(), np.eye(3), atol=1e-15)


def test_diagonal_sorted():
    D = hermitian_eig(np.diag([2.0, 0.0, 1.0]))
    assert np.allclose(D.eigenvalues, [0, 1, 2])


@pytest.mark.parametrize("seed", range(5))
def test_eigenvalues_match_characteristic_roots(seed):
    H = CounterRNG(seed).hermitian(6)
    D = hermitian_eig(H)
    assert np.allclose(D.eigenvalues, charpoly_roots(H), atol=1e-9)
    assert np.linalg.norm(D.matrix() - H) / np.linalg.norm(H) <= 1e-9
    U = D.basis
    assert np.abs(U.conj().T @ U - np.eye(6)).max() <= 1e-10


def test_eigensolver_larger_and_degenerate(rng):
    V = rng.unitary(12)
    lam = np.repeat([-1.0, 0.5, 3.0], 4)
    H = (V * lam) @ V.conj().T
    D = hermitian_eig(0.5 * (H + H.conj().T))
    assert np.allclose(D.eigenvalues, np.sort(lam), atol=1e-12)
    assert np.linalg.norm(D.matrix() - H) <= 1e-12 * np.linalg.norm(H)


def test_nonhermitian_rejected():
    with pytest.raises(NonHermitian):
        hermitian_eig(np.array([[0, 1], [0, 0]]))


def test_decomp_is_immutable():
    D = hermitian_eig(np.diag([1.0, 2.0]))
    with pytest.raises(ValueError):
        D.eigenvalues[0] = 5.0


def test_decomp_shape_checked():
    with pytest.raises(DimensionMismatch):
        SpectralDecomp(np.zeros(3), np.eye(2))


def test_singular_values_examples():
    assert np.all(singular_values(np.zeros((3, 3))) == 0)
    u = np.array([1, 1j, 0]) / np.sqrt(2)
    v = np.array([0, 1, 0])
    assert np.allclose(singular_values(np.outer(u, v.conj())), [1, 0, 0], atol=1e-15)


@pytest.mark.parametrize("N", [4, 16])
def test_dft_modulus_matrix_rank_one(N):
    j = np.arange(1, N + 1)
    u = np.exp(2j * np.pi * np.outer(j, j) / N) / np.sqrt(N)
    s = singular_values(np.abs(u))
    assert s[0] == pytest.approx(np.sqrt(N), rel=1e-12)
    assert np.all(s[1:] <= 1e-13)


def test_singular_values_rectangular(rng):
    M = rng.complex_normal((7, 4))
    s = singular_values(M)
    ref = np.sqrt(np.sort(hermitian_eig(M.conj().T @ M).eigenvalues)[::-1])
    assert np.allclose(s, ref, atol=1e-12)
    assert np.allclose(singular_values(M.T), s, atol=1e-12)


def test_schatten_examples():
    D = np.diag([3.0, -4.0])
    assert schatten_norm(D, 1) == pytest.approx(7.0)
    assert schatten_norm(D, np.inf) == pytest.approx(4.0)
    assert schatten_norm(D, 2) == pytest.approx(5.0)
    with pytest.raises(InvalidP):
        schatten_norm(D, 0.5)


def test_schatten_two_is_frobenius(rng):
    M = rng.complex_normal((6, 6))
    assert abs(schatten_norm(M, 2) - np.linalg.norm(M)) <= 1e-10 * np.linalg.norm(M)


@given(st.integers(0, 2**32), st.sampled_from([1.0, 1.5, 2.0, 3.0, np.inf]))
def test_unitary_invariance(seed, p):
    r = CounterRNG(seed)
    M = r.complex_normal((5, 5))
    U, V = r.unitary(5), r.unitary(5)
    a, b = schatten_norm(U @ M @ V, p), schatten_norm(M, p)
    assert abs(a - b) <= 1e-9 * b


@given(st.integers(0, 2**32))
def test_schatten_monotone_in_p(seed):
    M = CounterRNG(seed).complex_normal((5, 5))
    ps = [1, 1.5, 2, 3, 7, np.inf]
    vals = [schatten_norm(M, p) for p in ps]
    assert all(vals[i + 1] <= vals[i] * (1 + 1e-12) for i in range(len(vals) - 1))


def test_mat_fun_examples(rng):
    H = rng.hermitian(4)
    assert np.allclose(mat_fun(library("x"), H), H, atol=1e-13)
    assert np.allclose(mat_fun(library("x2"), np.diag([1.0, 2.0])), np.diag([1.0, 4.0]))
    E = mat_fun(np.exp, H)
    assert np.linalg.norm(E - exp_taylor(H)) / np.linalg.norm(E) <= 1e-9


def test_mat_fun_domain_error():
    with pytest.raises(DomainError):
        mat_fun(np.log, np.diag([-1.0, 1.0]))


@given(st.integers(0, 2**32))
def test_spectral_mapping(seed):
    H = CounterRNG(seed).hermitian(5)
    g = np.exp  # monotone
    G = mat_fun(g, H)
    G = 0.5 * (G + G.conj().T)
    lhs = mat_fun(lambda x: np.sin(np.exp(x)), H)
    rhs = mat_fun(np.sin, G)
    assert np.linalg.norm(lhs - rhs) <= 1e-8 * (1 + np.linalg.norm(lhs))


@given(st.integers(0, 2**32))
def test_trace_of_function(seed):
    H = CounterRNG(seed).hermitian(5)
    D = hermitian_eig(H)
    assert abs(np.trace(mat_fun(np.sin, D)) - np.sin(D.eigenvalues).sum()) <= 1e-10


def test_json_round_trip(rng):
    M = rng.complex_normal((3, 2))
    obj = json.loads(json.dumps(matrix_to_json(M)))
    assert obj["rows"] == 3 and obj["cols"] == 2
    assert np.array_equal(matrix_from_json(obj), M)
    with pytest.raises(DimensionMismatch):
        matrix_from_json({"rows": 2, "cols": 2, "re": [1.0], "im": [0.0]})
