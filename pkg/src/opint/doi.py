"""Double operator integrals on matrices.

With E_1, E_2 the spectral measures of two Hermitian matrices with
eigenbases U and V, the integral of a kernel Phi against T is the Schur
product U (Phi o (U* T V)) V*, where Phi is tabulated on the two spectra.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import DimensionMismatch, NotNormal
from .funkit.divdiff import DEFAULT_TOL, Kernel, dd_kernel2, dd_kernel2_partial
from .funkit.scalar import ScalarFn
from .matcore import (
    SpectralDecomp,
    as_decomp,
    as_matrix,
    check_hermitian,
    hermitian_eig,
    mat_fun,
    op_norm,
    schatten_norm,
)
from .report import Report, inputs_digest, safe_ratio
from .rng import CounterRNG

__all__ = [
    "DoiTransformer",
    "doi_apply",
    "schur_apply",
    "op_difference",
    "quasicommutator",
    "doi_trace",
    "multiplier_bounds",
    "haagerup_upper",
    "bandlimited_factorization",
    "joint_eig",
    "normal_fun",
    "normal_difference",
    "fundamental_inequality_check",
    "sup_norm_on",
]


@dataclass(frozen=True)
class DoiTransformer:
    """Kernel tabulated on the spectra of ``left`` and ``right``."""

    left: SpectralDecomp
    right: SpectralDecomp
    kernel: Kernel

    def __post_init__(self):
        if self.kernel.order != 2:
            raise DimensionMismatch("a double operator integral needs a two-variable kernel")
        if self.kernel.table.shape != (self.left.n, self.right.n):
            raise DimensionMismatch(
                f"kernel shape {self.kernel.table.shape} vs spectra ({self.left.n}, {self.right.n})")
        if not (np.allclose(self.kernel.xs, self.left.eigenvalues, rtol=0, atol=1e-12 * (1 + np.abs(self.left.eigenvalues).max()))
                and np.allclose(self.kernel.ys, self.right.eigenvalues, rtol=0,
                                atol=1e-12 * (1 + np.abs(self.right.eigenvalues).max()))):
            raise DimensionMismatch("kernel grids differ from the eigenvalue arrays")

    @classmethod
    def divided_difference(cls, f: ScalarFn, left, right, tol: float = DEFAULT_TOL) -> "DoiTransformer":
        L, R = as_decomp(left), as_decomp(right)
        return cls(L, R, dd_kernel2(f, L, R, tol))

    @classmethod
    def from_table(cls, left, right, table) -> "DoiTransformer":
        L, R = as_decomp(left), as_decomp(right)
        return cls(L, R, Kernel((L.eigenvalues, R.eigenvalues), table))

    def __call__(self, T) -> np.ndarray:
        return doi_apply(self, T)


def schur_apply(U: np.ndarray, table: np.ndarray, T, V: np.ndarray) -> np.ndarray:
    T = as_matrix(T)
    if T.shape != (U.shape[1], V.shape[1]):
        raise DimensionMismatch(f"operator of shape {T.shape} does not fit bases {U.shape}, {V.shape}")
    return U @ (table * (U.conj().T @ T @ V)) @ V.conj().T


def doi_apply(phi: DoiTransformer, T) -> np.ndarray:
    return schur_apply(phi.left.basis, phi.kernel.table, T, phi.right.basis)


def _rel(X, Y) -> float:
    return float(np.linalg.norm(X - Y) / max(np.linalg.norm(Y), np.finfo(float).tiny)) if np.any(Y) \
        else float(np.linalg.norm(X))


def op_difference(f: ScalarFn, A, B, with_residual: bool = False, tol: float = DEFAULT_TOL):
    """f(A) - f(B) as the integral of the divided difference against A - B.

    With ``with_residual`` the relative Frobenius distance to the direct
    difference f(A) - f(B) is returned as well.
    """
    A, B = check_hermitian(A), check_hermitian(B)
    if A.shape != B.shape:
        raise DimensionMismatch("A and B must have the same size")
    EA, EB = hermitian_eig(A), hermitian_eig(B)
    out = doi_apply(DoiTransformer.divided_difference(f, EA, EB, tol), A - B)
    if not with_residual:
        return out
    direct = mat_fun(f, EA) - mat_fun(f, EB)
    return out, _rel(out, direct)


def quasicommutator(f: ScalarFn, A, B, Q, with_residual: bool = False, tol: float = DEFAULT_TOL):
    """f(A)Q - Qf(B) as the divided-difference integral against AQ - QB."""
    A, B, Q = check_hermitian(A), check_hermitian(B), as_matrix(Q)
    EA, EB = hermitian_eig(A), hermitian_eig(B)
    out = doi_apply(DoiTransformer.divided_difference(f, EA, EB, tol), A @ Q - Q @ B)
    if not with_residual:
        return out
    direct = mat_fun(f, EA) @ Q - Q @ mat_fun(f, EB)
    return out, _rel(out, direct)


def doi_trace(phi: Kernel, T, E) -> Tuple[complex, complex]:
    """trace of the integral versus the sum of diagonal kernel values against (T v_j, v_j)."""
    E = as_decomp(E)
    T = as_matrix(T)
    if T.shape != (E.n, E.n):
        raise DimensionMismatch("T must be square and match the decomposition")
    table = phi.table if isinstance(phi, Kernel) else np.asarray(phi, dtype=complex)
    if table.shape != (E.n, E.n):
        raise DimensionMismatch("kernel must be tabulated on the spectrum twice")
    U = E.basis
    lhs = complex(np.trace(schur_apply(U, table, T, U)))
    weights = np.einsum("ji,jk,ki->i", U.conj(), T, U)  # (T v_i, v_i)
    rhs = complex(np.sum(np.diagonal(table) * weights))
    return lhs, rhs


def haagerup_upper(X: np.ndarray, Y: np.ndarray) -> float:
    """max row l2 norm of X times max row l2 norm of Y, for Phi = X Y^T."""
    X, Y = np.asarray(X), np.asarray(Y)
    rx = np.sqrt((np.abs(X) ** 2).sum(axis=1)).max() if X.size else 0.0
    ry = np.sqrt((np.abs(Y) ** 2).sum(axis=1)).max() if Y.size else 0.0
    return float(rx * ry)


def _absorb_residual(X, Y, table):
    """Extend a truncated factorization so that it reproduces ``table`` exactly.

    The residual R = table - X Y^T is carried by an extra block:
    [X | R/t] [Y | t I]^T, with t chosen on a log grid to minimize the bound.
    """
    R = table - X @ Y.T
    if not np.any(R):
        return X, Y
    n2 = Y.shape[0]
    rx = (np.abs(X) ** 2).sum(axis=1)
    rr = (np.abs(R) ** 2).sum(axis=1)
    ry = (np.abs(Y) ** 2).sum(axis=1)
    ts = np.logspace(-8, 4, 241)
    vals = [np.sqrt((rx + rr / t**2).max() * (ry + t**2).max()) for t in ts]
    t = ts[int(np.argmin(vals))]
    return np.hstack([X, R / t]), np.hstack([Y, t * np.eye(n2)])


def bandlimited_factorization(f: ScalarFn, xs, ys, sigma: Optional[float] = None, terms: int = 4000):
    """Factor (f(x)-f(y))/(x-y) through the sampling series at the nodes pi n / sigma.

    Returns (X, Y) with table[i, j] = sum_n X[i, n] Y[j, n]; the row norms
    of X are at most sqrt(3) sigma ||f||_inf and those of Y at most 1, up to
    the truncation residual absorbed as an extra block.
    """
    sigma = float(sigma if sigma is not None else f.bandlimit)
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    reach = max(np.abs(xs).max(), np.abs(ys).max())
    M = int(np.ceil(sigma * reach / np.pi)) + terms
    n = np.arange(-M, M + 1)
    nodes = np.pi * n / sigma
    fx = np.asarray(f(xs), dtype=complex)
    fn = np.asarray(f(nodes), dtype=complex)
    dx = sigma * xs[:, None] - np.pi * n[None, :]
    at_node = np.abs(dx) < 1e-12
    with np.errstate(divide="ignore", invalid="ignore"):
        X = sigma * (fx[:, None] - fn[None, :]) / dx
    if np.any(at_node):
        d1 = np.asarray(f.deriv(1)(xs), dtype=complex)
        X = np.where(at_node, d1[:, None] * np.ones_like(X), X)
    dy = sigma * ys[:, None] - np.pi * n[None, :]
    Y = np.sinc(dy / np.pi)
    table = dd_kernel2(f, xs, ys).table
    return _absorb_residual(X, Y.astype(complex), table)


def _default_upper(table: np.ndarray) -> float:
    rows = haagerup_upper(table, np.eye(table.shape[1]))
    cols = haagerup_upper(np.eye(table.shape[0]), table.T)
    U, s, Vh = np.linalg.svd(table)
    r = np.sqrt(s)
    bal = haagerup_upper(U[:, : len(s)] * r, Vh[: len(s)].T * r)
    return min(rows, cols, bal)


def multiplier_bounds(phi, trials: int = 200, seed: int = 0, factorization=None) -> Tuple[float, float]:
    """Lower and upper estimates of the Schur multiplier norm of a kernel table.

    The lower estimate is the largest observed ||Phi o T|| / ||T|| over the
    matrix units and ``trials`` seeded Gaussian T; it is not the norm itself.
    The upper estimate is max-row-l2 times max-row-l2 of a factorization
    Phi = X Y^T; by default the smallest of the row, column and balanced SVD
    factorizations.
    """
    table = phi.table if isinstance(phi, Kernel) else np.asarray(phi, dtype=complex)
    lower = float(np.abs(table).max()) if table.size else 0.0
    rng = CounterRNG(seed)
    for t in range(trials):
        T = rng.substream(t).complex_normal(table.shape)
        nT = op_norm(T)
        if nT > 0:
            lower = max(lower, op_norm(table * T) / nT)
    if factorization is not None:
        upper = haagerup_upper(*factorization)
    else:
        upper = _default_upper(table)
    return lower, upper


def _check_normal(N, tol: float = 1e-10) -> np.ndarray:
    N = as_matrix(N)
    if N.shape[0] != N.shape[1]:
        raise DimensionMismatch("normal matrices must be square")
    scale = np.linalg.norm(N) ** 2
    if np.linalg.norm(N @ N.conj().T - N.conj().T @ N) > tol * max(scale, 1e-300):
        raise NotNormal("matrix does not commute with its adjoint")
    return N


_MIX = 0.7548776662466927


def joint_eig(N) -> Tuple[np.ndarray, np.ndarray]:
    """Unitary U and eigenvalues z with N = U diag(z) U* for a normal N.

    Diagonalizes Re N + c Im N for a generic c, then resolves any remaining
    clusters by diagonalizing Im N inside them.
    """
    N = _check_normal(N)
    Re = 0.5 * (N + N.conj().T)
    Im = -0.5j * (N - N.conj().T)
    D = hermitian_eig(Re + _MIX * Im)
    U = np.array(D.basis)
    lam = D.eigenvalues
    scale = 1e-9 * (1.0 + np.abs(lam).max()) if lam.size else 0.0
    start = 0
    for i in range(1, len(lam) + 1):
        if i == len(lam) or lam[i] - lam[i - 1] > scale:
            if i - start > 1:
                block = U[:, start:i]
                sub = hermitian_eig(block.conj().T @ Im @ block)
                U[:, start:i] = block @ sub.basis
            start = i
    z = np.einsum("ji,jk,ki->i", U.conj(), N, U)
    return U, z


def normal_fun(f: ScalarFn, N) -> np.ndarray:
    """f(Re z, Im z) applied to a normal matrix through its joint spectrum."""
    U, z = joint_eig(N)
    vals = np.asarray(f(z.real, z.imag), dtype=complex) * np.ones(len(z))
    return (U * vals) @ U.conj().T


def normal_difference(f: ScalarFn, N1, N2, with_residual: bool = False, tol: float = DEFAULT_TOL):
    """f(N1) - f(N2) as the sum of two double integrals of partial divided differences.

    The x-difference kernel acts on Re N1 - Re N2 and the y-difference kernel
    on Im N1 - Im N2, both between the spectral measures of N1 and N2.
    """
    N1, N2 = _check_normal(N1), _check_normal(N2)
    if N1.shape != N2.shape:
        raise DimensionMismatch("N1 and N2 must have the same size")
    U1, z1 = joint_eig(N1)
    U2, z2 = joint_eig(N2)
    A = 0.5 * (N1 + N1.conj().T) - 0.5 * (N2 + N2.conj().T)
    B = -0.5j * (N1 - N1.conj().T) + 0.5j * (N2 - N2.conj().T)
    kx = dd_kernel2_partial(f, "x", z1, z2, tol).table
    ky = dd_kernel2_partial(f, "y", z1, z2, tol).table
    out = schur_apply(U1, ky, B, U2) + schur_apply(U1, kx, A, U2)
    if not with_residual:
        return out
    direct = normal_fun(f, N1) - normal_fun(f, N2)
    return out, _rel(out, direct)


def sup_norm_on(f: ScalarFn, lo: float, hi: float, points: int = 4001) -> float:
    """Declared sup norm if present, otherwise a sampled max on [lo, hi]."""
    if f.sup_norm is not None:
        return float(f.sup_norm)
    x = np.linspace(lo, hi, points)
    return float(np.abs(f(x)).max())


def fundamental_inequality_check(f: ScalarFn, A, B, seed: Optional[int] = None) -> Report:
    """||f(A) - f(B)|| against sigma ||f||_inf ||A - B|| for band-limited f."""
    if f.bandlimit is None:
        raise ValueError("fundamental inequality needs a declared band limit")
    A, B = check_hermitian(A), check_hermitian(B)
    EA, EB = hermitian_eig(A), hermitian_eig(B)
    lhs = op_norm(mat_fun(f, EA) - mat_fun(f, EB))
    lo = min(EA.eigenvalues.min(), EB.eigenvalues.min())
    hi = max(EA.eigenvalues.max(), EB.eigenvalues.max())
    sup = sup_norm_on(f, lo, hi)
    rhs = f.bandlimit * sup * op_norm(A - B)
    return Report("fundamental_inequality", inputs_digest(A, B, f.name), lhs, rhs,
                  safe_ratio(lhs, rhs), 0.0, seed, {"sigma": f.bandlimit, "sup_norm": sup})


def lipschitz_s2_check(f: ScalarFn, A, B, seed: Optional[int] = None) -> Report:
    """||f(A)-f(B)||_S2 against max|f'| on the spectral hull times ||A-B||_S2."""
    D = op_difference(f, A, B)
    EA, EB = hermitian_eig(A), hermitian_eig(B)
    lo = min(EA.eigenvalues.min(), EB.eigenvalues.min())
    hi = max(EA.eigenvalues.max(), EB.eigenvalues.max())
    L = float(np.abs(f.deriv(1)(np.linspace(lo, hi, 4001))).max())
    lhs = schatten_norm(D, 2)
    rhs = L * schatten_norm(as_matrix(A) - as_matrix(B), 2)
    return Report("lipschitz_s2", inputs_digest(A, B, f.name), lhs, rhs, safe_ratio(lhs, rhs), 0.0, seed)
