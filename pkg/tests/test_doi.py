import numpy as np
import pytest
from hypothesis import given, strategies as st

from opint.doi import (
    DoiTransformer,
    bandlimited_factorization,
    doi_trace,
    fundamental_inequality_check,
    haagerup_upper,
    joint_eig,
    lipschitz_s2_check,
    multiplier_bounds,
    normal_difference,
    normal_fun,
    op_difference,
    quasicommutator,
)
from opint.errors import DimensionMismatch, NonHermitian, NotNormal
from opint.funkit import ScalarFn, dd_kernel2, library
from opint.matcore import hermitian_eig, mat_fun, op_norm, schatten_norm
from opint.rng import CounterRNG

seeds = st.integers(0, 2**32)
sizes = st.integers(2, 6)
FUNCS = ["x2", "x3", "exp", "sin"]


def test_square_example():
    A = np.diag([1.0, 2.0])
    B = np.diag([0.0, 0.0])
    D = op_difference(library("x2"), A, B)
    assert np.allclose(D, np.diag([1.0, 4.0]))


def test_identity_function_returns_perturbation(rng):
    A, B = rng.hermitian(4), rng.hermitian(4)
    assert np.allclose(op_difference(library("x"), A, B), A - B, atol=1e-12)


@pytest.mark.parametrize("name", FUNCS)
def test_residual_small(name, rng):
    A, B = rng.hermitian(5), rng.hermitian(5)
    _, res = op_difference(library(name), A, B, with_residual=True)
    assert res <= 1e-10


def test_equal_arguments_give_zero(rng):
    A = rng.hermitian(4)
    assert np.abs(op_difference(library("exp"), A, A)).max() <= 1e-13


def test_non_hermitian_rejected():
    with pytest.raises(NonHermitian):
        op_difference(library("x2"), np.array([[0, 1], [0, 0]]), np.eye(2))


def test_size_mismatch():
    with pytest.raises(DimensionMismatch):
        op_difference(library("x2"), np.eye(2), np.eye(3))


@given(seeds, sizes)
def test_linearity_in_perturbation(seed, n):
    r = CounterRNG(seed)
    EA, EB = hermitian_eig(r.hermitian(n)), hermitian_eig(r.hermitian(n))
    phi = DoiTransformer.divided_difference(library("sin"), EA, EB)
    S, T = r.complex_normal((n, n)), r.complex_normal((n, n))
    a, b = 0.7 - 0.2j, -1.3
    assert np.allclose(phi(a * S + b * T), a * phi(S) + b * phi(T), atol=1e-11)


@given(seeds, sizes)
def test_s2_schur_bound(seed, n):
    r = CounterRNG(seed)
    EA, EB = hermitian_eig(r.hermitian(n)), hermitian_eig(r.hermitian(n))
    phi = DoiTransformer.divided_difference(library("exp"), EA, EB)
    T = r.complex_normal((n, n))
    bound = np.abs(phi.kernel.table).max() * schatten_norm(T, 2)
    assert schatten_norm(phi(T), 2) <= bound * (1 + 1e-10)


@given(seeds, sizes)
def test_lipschitz_in_hilbert_schmidt(seed, n):
    r = CounterRNG(seed)
    rep = lipschitz_s2_check(library("sin"), r.hermitian(n), r.hermitian(n))
    assert rep.ratio <= 1 + 1e-9


@given(seeds, sizes)
def test_quasicommutator(seed, n):
    r = CounterRNG(seed)
    _, res = quasicommutator(library("exp"), r.hermitian(n, 0.5), r.hermitian(n, 0.5),
                             r.complex_normal((n, n)), with_residual=True)
    assert res <= 1e-10


@given(seeds, st.integers(1, 6))
def test_trace_identity(seed, n):
    r = CounterRNG(seed)
    E = hermitian_eig(r.hermitian(n))
    k = dd_kernel2(library("exp"), E, E)
    lhs, rhs = doi_trace(k, r.complex_normal((n, n)), E)
    assert abs(lhs - rhs) <= 1e-10 * (1 + abs(lhs))


def test_trace_identity_hand_example():
    E = hermitian_eig(np.diag([0.0, 1.0]))
    k = dd_kernel2(library("x2"), E, E)  # diagonal 2 lambda
    lhs, rhs = doi_trace(k, np.array([[3.0, 5.0], [7.0, 11.0]]), E)
    assert lhs == pytest.approx(22.0) and rhs == pytest.approx(22.0)


def test_multiplier_bounds_constant_and_rank_one():
    lo, hi = multiplier_bounds(np.ones((4, 4)), trials=20)
    assert lo == pytest.approx(1.0) and hi == pytest.approx(1.0)
    a, b = np.array([1.0, -2.0, 0.5]), np.array([3.0, 0.25])
    lo, hi = multiplier_bounds(np.outer(a, b), trials=20)
    assert lo == pytest.approx(6.0) and hi == pytest.approx(6.0)


@given(seeds, sizes)
def test_multiplier_bounds_ordered(seed, n):
    table = CounterRNG(seed).complex_normal((n, n + 1))
    lo, hi = multiplier_bounds(table, trials=10, seed=seed)
    assert np.abs(table).max() <= lo <= hi * (1 + 1e-10)


def test_haagerup_upper_example():
    assert haagerup_upper(np.array([[3.0, 4.0]]), np.array([[1.0, 0.0], [0.0, 1.0]])) == pytest.approx(5.0)


def test_bandlimited_factorization(rng):
    f = library("sin")
    xs, ys = np.sort(rng.normal(5) * 2), np.sort(rng.normal(4) * 2)
    X, Y = bandlimited_factorization(f, xs, ys)
    assert np.abs(X @ Y.T - dd_kernel2(f, xs, ys).table).max() <= 1e-10
    assert haagerup_upper(X, Y) <= 2 * np.sqrt(3)
    lo, hi = multiplier_bounds(dd_kernel2(f, xs, ys), trials=20, factorization=(X, Y))
    assert lo <= hi


@given(seeds, sizes)
def test_fundamental_inequality(seed, n):
    r = CounterRNG(seed)
    for f in (library("sin_sigma", sigma=2.0), library("phi")):
        rep = fundamental_inequality_check(f, r.hermitian(n), r.hermitian(n))
        assert rep.ratio <= 1 + 1e-6


def random_normal(r, n):
    Q = r.unitary(n)
    z = r.complex_normal(n)
    return (Q * z) @ Q.conj().T


def test_joint_eig_and_normal_fun(rng):
    N = random_normal(rng, 5)
    U, z = joint_eig(N)
    assert np.allclose((U * z) @ U.conj().T, N, atol=1e-12)
    xy = ScalarFn(lambda x, y: x + 1j * y, arity=2)
    assert np.allclose(normal_fun(xy, N), N, atol=1e-12)


def test_joint_eig_degenerate_real_part():
    # equal real parts, distinct imaginary parts
    Q = CounterRNG(3).unitary(3)
    N = (Q * np.array([1 + 1j, 1 - 1j, 1 + 0j])) @ Q.conj().T
    U, z = joint_eig(N)
    assert np.allclose(z[np.argsort(z.imag)], [1 - 1j, 1 + 0j, 1 + 1j], atol=1e-10)


def test_not_normal():
    with pytest.raises(NotNormal):
        joint_eig(np.array([[0, 1], [0, 0]], dtype=complex))


@given(seeds, sizes)
def test_normal_difference(seed, n):
    r = CounterRNG(seed)
    _, res = normal_difference(library("sin_cos"), random_normal(r, n), random_normal(r, n), with_residual=True)
    assert res <= 1e-9


@given(seeds, sizes)
def test_normal_difference_reduces_to_hermitian(seed, n):
    r = CounterRNG(seed)
    A, B = r.hermitian(n), r.hermitian(n)
    g = library("exp")
    f = ScalarFn(lambda x, y: np.exp(x) + 0 * y, (lambda x, y: np.exp(x) + 0 * y, lambda x, y: 0 * x * y),
                 arity=2)
    assert np.allclose(normal_difference(f, A, B), op_difference(g, A, B), atol=1e-10)


def test_mat_fun_consistency(rng):
    A = rng.hermitian(4)
    assert op_norm(mat_fun(library("sin"), A)) <= 1 + 1e-12
