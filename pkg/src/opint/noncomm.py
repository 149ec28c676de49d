"""Functions of noncommuting pairs and triple operator integrals.

For Hermitian A, B with spectral projections P_j, Q_k the pair calculus is
f(A, B) = sum_{j,k} f(lambda_j, mu_k) P_j Q_k. It is linear in f but not
multiplicative. Triple operator integrals are kernel-weighted sums
sum Psi(x_i, y_j, z_k) P_i T Q_j R S_k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from .errors import DimensionMismatch, DomainError, InvalidP
from .funkit.besov import besov_estimate
from .funkit.divdiff import DEFAULT_TOL, Kernel, dd_kernel3_partial
from .funkit.scalar import ScalarFn
from .matcore import SpectralDecomp, as_decomp, as_matrix, check_hermitian, commutator, hermitian_eig, schatten_norm
from .moi import MoiSpec, moi_apply, separable_bound
from .report import Report, inputs_digest, safe_ratio
from .rng import CounterRNG

__all__ = [
    "OpPair",
    "ToiSpec",
    "SLOTS",
    "calc_from_decomps",
    "noncomm_calc",
    "toi_apply",
    "toi_trace_duality",
    "haagerup_estimate",
    "pair_difference_repr",
    "pair_lipschitz_check",
    "commutator_repr",
    "helton_howe_lhs",
    "almost_commuting_pair",
    "pair_besov",
]

SLOTS = ("standard", "first_kind", "second_kind")


@dataclass(frozen=True)
class OpPair:
    """Hermitian A, B of equal size; their spectral decompositions are cached."""

    A: np.ndarray
    B: np.ndarray
    EA: Optional[SpectralDecomp] = field(default=None, repr=False, compare=False)
    EB: Optional[SpectralDecomp] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        A, B = check_hermitian(self.A), check_hermitian(self.B)
        if A.shape != B.shape:
            raise DimensionMismatch("A and B must have the same size")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "EA", self.EA or hermitian_eig(A))
        object.__setattr__(self, "EB", self.EB or hermitian_eig(B))

    @property
    def n(self) -> int:
        return self.A.shape[0]


def calc_from_decomps(f: ScalarFn, EA: SpectralDecomp, EB: SpectralDecomp) -> np.ndarray:
    X, Y = np.meshgrid(EA.eigenvalues, EB.eigenvalues, indexing="ij")
    with np.errstate(all="ignore"):
        F = np.asarray(f(X, Y), dtype=complex) * np.ones(X.shape)
    if not np.all(np.isfinite(F)):
        raise DomainError("function is undefined on the joint spectrum")
    U, V = EA.basis, EB.basis
    return U @ (F * (U.conj().T @ V)) @ V.conj().T


def noncomm_calc(f: ScalarFn, pair: OpPair) -> np.ndarray:
    """sum_{j,k} f(lambda_j, mu_k) P_j Q_k."""
    return calc_from_decomps(f, pair.EA, pair.EB)


@dataclass(frozen=True)
class ToiSpec:
    """Kernel on three spectra with the operators T and R placed between them.

    ``slots`` records which bound semantics a caller intends (standard,
    first kind, second kind); in finite dimension all three are the same sum.
    """

    kernel: Kernel
    decomps: tuple
    T: np.ndarray
    R: np.ndarray
    slots: str = "standard"

    def __post_init__(self):
        if self.slots not in SLOTS:
            raise ValueError(f"slots must be one of {SLOTS}")
        if len(self.decomps) != 3 or self.kernel.order != 3:
            raise DimensionMismatch("a triple operator integral needs three spectra and a 3-variable kernel")
        object.__setattr__(self, "decomps", tuple(as_decomp(d) for d in self.decomps))
        object.__setattr__(self, "T", as_matrix(self.T))
        object.__setattr__(self, "R", as_matrix(self.R))

    def as_moi(self) -> MoiSpec:
        return MoiSpec(self.decomps, self.kernel, (self.T, self.R))


def toi_apply(spec: ToiSpec) -> np.ndarray:
    return moi_apply(spec.as_moi())


def toi_trace_duality(spec: ToiSpec, Q) -> Tuple[complex, complex]:
    """trace(W Q) against trace(TOI(Psi'; E2, E3, E1; R, Q) T) with Psi'(y, z, x) = Psi(x, y, z)."""
    Q = as_matrix(Q)
    W = toi_apply(spec)
    E1, E2, E3 = spec.decomps
    rotated = Kernel((E2.eigenvalues, E3.eigenvalues, E1.eigenvalues), np.transpose(spec.kernel.table, (1, 2, 0)))
    dual = moi_apply(MoiSpec((E2, E3, E1), rotated, (spec.R, Q)))
    return complex(np.trace(W @ Q)), complex(np.trace(dual @ spec.T))


def haagerup_estimate(table: np.ndarray) -> float:
    """Upper estimate of the Haagerup tensor norm of a 3-variable kernel table.

    Uses the canonical factorization through the middle variable:
    max over y of the operator norm of the slice Psi(., y, .). For rank-one
    tables the product of the factor sup norms is used when smaller.
    """
    table = np.asarray(table)
    slab = max(schatten_norm(table[:, j, :], np.inf) for j in range(table.shape[1]))
    return float(min(slab, separable_bound(table)))


def _rel(X, Y) -> float:
    scale = np.linalg.norm(Y)
    if scale == 0.0:
        return float(np.linalg.norm(X - Y))
    return float(np.linalg.norm(X - Y) / scale)


def pair_difference_repr(f: ScalarFn, pair1: OpPair, pair2: OpPair, seed: Optional[int] = None,
                         tol: float = DEFAULT_TOL) -> Report:
    """f(A1,B1) - f(A2,B2) against the sum of two triple operator integrals.

    First term: x-difference of f on (E_A1, E_A2, E_B1) with T = A1 - A2, R = I.
    Second term: y-difference of f on (E_A2, E_B1, E_B2) with T = I, R = B1 - B2.
    """
    if pair1.n != pair2.n:
        raise DimensionMismatch("pairs must have the same size")
    I = np.eye(pair1.n, dtype=complex)
    k1 = dd_kernel3_partial(f, 1, pair1.EA, pair2.EA, pair1.EB, tol)
    k2 = dd_kernel3_partial(f, 2, pair2.EA, pair1.EB, pair2.EB, tol)
    rhs = toi_apply(ToiSpec(k1, (pair1.EA, pair2.EA, pair1.EB), pair1.A - pair2.A, I)) \
        + toi_apply(ToiSpec(k2, (pair2.EA, pair1.EB, pair2.EB), I, pair1.B - pair2.B))
    lhs = noncomm_calc(f, pair1) - noncomm_calc(f, pair2)
    return Report("pair_difference_repr", inputs_digest(pair1.A, pair1.B, pair2.A, pair2.B, f.name),
                  float(np.linalg.norm(lhs)), float(np.linalg.norm(rhs)), float("nan"), _rel(rhs, lhs), seed)


def _window(*decomps, pad: float = 1.0):
    lo = min(d.eigenvalues.min() for d in decomps) - pad
    hi = max(d.eigenvalues.max() for d in decomps) + pad
    return lo, hi


def pair_besov(f: ScalarFn, decomps_x, decomps_y, n_range=(-3, 3)) -> float:
    """Truncated-scale B^1_{inf,1} estimate of f on a box around the given spectra."""
    return besov_estimate(f, (_window(*decomps_x), _window(*decomps_y)), n_range)


def pair_lipschitz_check(f: ScalarFn, pair1: OpPair, pair2: OpPair, p: float, seed: Optional[int] = None,
                         besov_range: Optional[Tuple[int, int]] = (-3, 3)) -> Report:
    """||f(A1,B1) - f(A2,B2)||_{S_p} against max(||A1-A2||_{S_p}, ||B1-B2||_{S_p}), p in [1, 2]."""
    if not (1.0 <= p <= 2.0):
        raise InvalidP(f"pair Lipschitz check needs p in [1, 2], got {p}")
    lhs = schatten_norm(noncomm_calc(f, pair1) - noncomm_calc(f, pair2), p)
    rhs = max(schatten_norm(pair1.A - pair2.A, p), schatten_norm(pair1.B - pair2.B, p))
    extra = {"p": p}
    if besov_range is not None:
        extra["besov"] = pair_besov(f, (pair1.EA, pair2.EA), (pair1.EB, pair2.EB), besov_range)
        extra["n_range"] = list(besov_range)
    return Report("pair_lipschitz", inputs_digest(pair1.A, pair1.B, pair2.A, pair2.B, f.name),
                  lhs, rhs, safe_ratio(lhs, rhs), 0.0, seed, extra)


def commutator_repr(phi: ScalarFn, pair: OpPair, Q, seed: Optional[int] = None,
                    besov_range: Optional[Tuple[int, int]] = None, tol: float = DEFAULT_TOL) -> Report:
    """[phi(A,B), Q] against the two triple integrals driven by [A,Q] and [B,Q]."""
    Q = as_matrix(Q)
    I = np.eye(pair.n, dtype=complex)
    AQ, BQ = commutator(pair.A, Q), commutator(pair.B, Q)
    k1 = dd_kernel3_partial(phi, 1, pair.EA, pair.EA, pair.EB, tol)
    k2 = dd_kernel3_partial(phi, 2, pair.EA, pair.EB, pair.EB, tol)
    rhs = toi_apply(ToiSpec(k1, (pair.EA, pair.EA, pair.EB), AQ, I)) \
        + toi_apply(ToiSpec(k2, (pair.EA, pair.EB, pair.EB), I, BQ))
    lhs = commutator(noncomm_calc(phi, pair), Q)
    l1 = schatten_norm(lhs, 1)
    drive = schatten_norm(AQ, 1) + schatten_norm(BQ, 1)
    extra = {}
    if besov_range is not None:
        b = pair_besov(phi, (pair.EA,), (pair.EB,), besov_range)
        extra = {"besov": b, "n_range": list(besov_range), "s1_ratio": safe_ratio(l1, drive * b)}
    return Report("commutator_repr", inputs_digest(pair.A, pair.B, Q, phi.name), float(np.linalg.norm(lhs)),
                  float(np.linalg.norm(rhs)), safe_ratio(l1, drive), _rel(rhs, lhs), seed, extra)


def helton_howe_lhs(phi: ScalarFn, psi: ScalarFn, pair: OpPair, seed: Optional[int] = None,
                    besov_range: Optional[Tuple[int, int]] = (-3, 3)) -> Report:
    """trace(i [phi(A,B), psi(A,B)]) (zero in finite dimension) and the S_1 commutator bound ratio."""
    C = commutator(noncomm_calc(phi, pair), noncomm_calc(psi, pair))
    tr = complex(np.trace(1j * C))
    c1 = schatten_norm(C, 1)
    ab = schatten_norm(commutator(pair.A, pair.B), 1)
    extra = {"trace": tr}
    denom = ab
    if besov_range is not None:
        bphi = pair_besov(phi, (pair.EA,), (pair.EB,), besov_range)
        bpsi = pair_besov(psi, (pair.EA,), (pair.EB,), besov_range)
        denom = ab * bphi * bpsi
        extra.update({"besov_phi": bphi, "besov_psi": bpsi, "n_range": list(besov_range)})
    return Report("helton_howe_lhs", inputs_digest(pair.A, pair.B, phi.name, psi.name), c1, denom,
                  safe_ratio(c1, denom), abs(tr), seed, extra)


def almost_commuting_pair(n: int, target: float, rng: CounterRNG) -> OpPair:
    """A = diag(a) + t S, B = diag(b) + t W (W tridiagonal) with ||[A,B]||_{S_1} = target.

    The diagonal parts commute, so the commutator norm grows from 0 with t;
    t is found by root bracketing.
    """
    a = np.sort(rng.normal(n))
    b = rng.normal(n)
    S = rng.hermitian(n)
    off = rng.complex_normal(n - 1) if n > 1 else np.zeros(0)
    W = np.diag(rng.normal(n)).astype(complex) + np.diag(off, 1) + np.diag(off.conj(), -1)
    Da, Db = np.diag(a).astype(complex), np.diag(b).astype(complex)

    def gap(t):
        return schatten_norm(commutator(Da + t * S, Db + t * W), 1) - target

    hi = 1.0
    while gap(hi) < 0:
        hi *= 2.0
        if hi > 1e6:
            raise ValueError("cannot reach the requested commutator norm")
    t = brentq(gap, 0.0, hi, xtol=1e-15, rtol=1e-12)
    A = Da + t * S
    B = Db + t * W
    return OpPair(0.5 * (A + A.conj().T), 0.5 * (B + B.conj().T))
