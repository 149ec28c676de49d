import numpy as np
import pytest
from hypothesis import given, strategies as st

from opint.errors import DomainError, InvalidP
from opint.funkit import Kernel, ScalarFn, library
from opint.matcore import commutator, hermitian_eig, mat_fun, schatten_norm
from opint.noncomm import (
    OpPair,
    ToiSpec,
    almost_commuting_pair,
    commutator_repr,
    haagerup_estimate,
    helton_howe_lhs,
    noncomm_calc,
    pair_difference_repr,
    pair_lipschitz_check,
    toi_apply,
    toi_trace_duality,
)
from opint.rng import CounterRNG

seeds = st.integers(0, 2**32)
sizes = st.integers(2, 5)
PAIR_FUNCS = ["xy", "sin_x_plus_y", "exp_x_minus_y"]


def random_pair(r, n, scale=1.0):
    return OpPair(r.hermitian(n, scale), r.hermitian(n, scale))


def test_separable_function_is_product(rng):
    pair = random_pair(rng, 4)
    assert np.allclose(noncomm_calc(library("xy"), pair), pair.A @ pair.B, atol=1e-12)


def test_single_variable_reduces(rng):
    pair = random_pair(rng, 4)
    f = ScalarFn(lambda x, y: np.exp(x) + 0 * y, arity=2)
    assert np.allclose(noncomm_calc(f, pair), mat_fun(library("exp"), pair.A), atol=1e-12)


def test_commuting_pair_matches_joint_calculus():
    A, B = np.diag([1.0, 2.0]), np.diag([3.0, -1.0])
    out = noncomm_calc(library("sin_x_plus_y"), OpPair(A, B))
    assert np.allclose(out, np.diag(np.sin([4.0, 1.0])))


def test_domain_error():
    f = ScalarFn(lambda x, y: 1.0 / (x - y), arity=2)
    with pytest.raises(DomainError):
        noncomm_calc(f, OpPair(np.eye(2), np.eye(2)))


@pytest.mark.parametrize("name", PAIR_FUNCS)
@given(seed=seeds, n=sizes)
def test_pair_difference_representation(name, seed, n):
    r = CounterRNG(seed)
    rep = pair_difference_repr(library(name), random_pair(r, n), random_pair(r, n))
    assert rep.residual <= 1e-8


@given(seeds, sizes)
def test_toi_trace_duality(seed, n):
    r = CounterRNG(seed)
    Es = [hermitian_eig(r.hermitian(n)) for _ in range(3)]
    table = r.complex_normal((n, n, n))
    spec = ToiSpec(Kernel(tuple(E.eigenvalues for E in Es), table), Es,
                   r.complex_normal((n, n)), r.complex_normal((n, n)))
    lhs, rhs = toi_trace_duality(spec, r.complex_normal((n, n)))
    assert abs(lhs - rhs) <= 1e-10 * (1 + abs(lhs))


@given(seeds, sizes)
def test_haagerup_estimate_bounds_operator_norm(seed, n):
    r = CounterRNG(seed)
    Es = [hermitian_eig(r.hermitian(n)) for _ in range(3)]
    table = r.complex_normal((n, n, n))
    T, R = r.complex_normal((n, n)), r.complex_normal((n, n))
    W = toi_apply(ToiSpec(Kernel(tuple(E.eigenvalues for E in Es), table), Es, T, R))
    bound = haagerup_estimate(table) * schatten_norm(T, np.inf) * schatten_norm(R, np.inf)
    assert schatten_norm(W, np.inf) <= bound * (1 + 1e-10)


def test_toi_slots_validated(rng):
    E = hermitian_eig(rng.hermitian(2))
    k = Kernel((E.eigenvalues,) * 3, np.ones((2, 2, 2)))
    with pytest.raises(ValueError):
        ToiSpec(k, (E, E, E), np.eye(2), np.eye(2), slots="bogus")


@given(seeds, sizes, st.sampled_from([1.0, 1.5, 2.0]))
def test_pair_lipschitz_finite(seed, n, p):
    r = CounterRNG(seed)
    rep = pair_lipschitz_check(library("sin_cos"), random_pair(r, n), random_pair(r, n), p, besov_range=None)
    assert np.isfinite(rep.ratio)


def test_pair_lipschitz_invalid_p(rng):
    with pytest.raises(InvalidP):
        pair_lipschitz_check(library("xy"), random_pair(rng, 2), random_pair(rng, 2), 3.0)


def test_pair_lipschitz_records_besov(rng):
    rep = pair_lipschitz_check(library("sin_cos"), random_pair(rng, 3), random_pair(rng, 3), 2.0)
    assert rep.extra["besov"] > 0 and rep.extra["n_range"] == [-3, 3]


@given(seeds, sizes)
def test_commutator_representation(seed, n):
    r = CounterRNG(seed)
    rep = commutator_repr(library("sin_cos"), random_pair(r, n), r.complex_normal((n, n)))
    assert rep.residual <= 1e-8


def test_commutator_with_scalar_is_zero(rng):
    rep = commutator_repr(library("exp_x_minus_y"), random_pair(rng, 3), np.eye(3))
    assert rep.lhs_norm <= 1e-12 and rep.rhs_norm <= 1e-12


@given(seeds, sizes)
def test_helton_howe_trace_vanishes(seed, n):
    r = CounterRNG(seed)
    rep = helton_howe_lhs(library("sin_cos"), library("cos_sin"), random_pair(r, n), besov_range=None)
    assert rep.residual <= 1e-9


def test_almost_commuting_pair(rng):
    pair = almost_commuting_pair(5, 1e-3, rng)
    assert schatten_norm(commutator(pair.A, pair.B), 1) == pytest.approx(1e-3, rel=1e-8)
    rep = helton_howe_lhs(library("sin_cos"), library("cos_sin"), pair)
    assert np.isfinite(rep.ratio)
