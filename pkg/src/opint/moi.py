"""Multiple operator integrals, higher operator derivatives and differences.

A multiple operator integral with spectral measures E_1..E_m and operators
T_1..T_{m-1} is evaluated in the eigenbases: each T_l is moved into the
(E_l, E_{l+1}) frame, weighted by the kernel on the index tuple and the
intermediate indices are summed out.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial
from typing import Optional, Sequence

import numpy as np

from .doi import _default_upper
from .errors import DimensionMismatch, InvalidExponents, UnsupportedOrder
from .funkit.divdiff import DEFAULT_TOL, Kernel, dd_kernel
from .funkit.scalar import ScalarFn
from .matcore import SpectralDecomp, as_decomp, as_matrix, check_hermitian, hermitian_eig, mat_fun, schatten_norm
from .report import Report, inputs_digest, safe_ratio

__all__ = [
    "MoiSpec",
    "moi_apply",
    "separable_bound",
    "moi_schatten_check",
    "higher_derivative",
    "higher_difference_direct",
    "higher_difference_moi",
    "central_difference",
    "richardson_derivative",
    "daletskii_krein_errors",
    "loglog_slope",
]

_SUBSCRIPTS = {2: "ij,ij->ij", 3: "ijk,ij,jk->ik", 4: "ijkl,ij,jk,kl->il"}
MAX_DERIV = 3


@dataclass(frozen=True)
class MoiSpec:
    decomps: tuple
    kernel: Kernel
    interleaved: tuple

    def __post_init__(self):
        decomps = tuple(as_decomp(d) for d in self.decomps)
        ops = tuple(as_matrix(T) for T in self.interleaved)
        m = len(decomps)
        if m not in _SUBSCRIPTS:
            raise UnsupportedOrder(f"multiple operator integrals are supported for m in 2..4, got {m}")
        if self.kernel.order != m:
            raise DimensionMismatch(f"kernel of order {self.kernel.order} for {m} spectral measures")
        if len(ops) != m - 1:
            raise DimensionMismatch(f"{m} spectral measures need {m - 1} operators, got {len(ops)}")
        if self.kernel.table.shape != tuple(d.n for d in decomps):
            raise DimensionMismatch("kernel table does not match the spectra")
        for l, T in enumerate(ops):
            if T.shape != (decomps[l].n, decomps[l + 1].n):
                raise DimensionMismatch(f"operator {l + 1} has shape {T.shape}")
        object.__setattr__(self, "decomps", decomps)
        object.__setattr__(self, "interleaved", ops)

    @property
    def m(self) -> int:
        return len(self.decomps)

    @classmethod
    def divided_difference(cls, f: ScalarFn, decomps, ops, tol: float = DEFAULT_TOL) -> "MoiSpec":
        ds = tuple(as_decomp(d) for d in decomps)
        return cls(ds, dd_kernel(f, ds, tol), tuple(ops))


def moi_apply(spec: MoiSpec) -> np.ndarray:
    ds = spec.decomps
    frames = [ds[l].basis.conj().T @ T @ ds[l + 1].basis for l, T in enumerate(spec.interleaved)]
    core = np.einsum(_SUBSCRIPTS[spec.m], spec.kernel.table, *frames, optimize=False)
    return ds[0].basis @ core @ ds[-1].basis.conj().T


def _rank_one_factors(table: np.ndarray, tol: float = 1e-12):
    """Factors a_1 x ... x a_m of a rank-one tensor, or None."""
    if not np.any(table):
        return [np.zeros(s) for s in table.shape]
    idx = np.unravel_index(np.argmax(np.abs(table)), table.shape)
    peak = table[idx]
    factors = []
    for ax in range(table.ndim):
        sl = list(idx)
        sl[ax] = slice(None)
        factors.append(table[tuple(sl)] / peak)
    recon = peak
    for ax, a in enumerate(factors):
        shape = [1] * table.ndim
        shape[ax] = -1
        recon = recon * a.reshape(shape)
    if np.abs(recon - table).max() > tol * (1.0 + abs(peak)):
        return None
    factors[0] = factors[0] * peak
    return factors


def separable_bound(table: np.ndarray) -> float:
    """Upper estimate of the integral projective tensor norm of a kernel table.

    Rank-one tables give the product of the factor sup norms (exact); other
    tables fall back to the sum of |entries|, which is always admissible.
    """
    factors = _rank_one_factors(table)
    if factors is not None:
        return float(np.prod([np.abs(a).max() for a in factors]))
    return float(np.abs(table).sum())


def moi_schatten_check(spec: MoiSpec, p_list: Sequence[float], bound: Optional[float] = None,
                       seed: Optional[int] = None) -> Report:
    """||MOI||_{S_r} against bound * prod ||T_j||_{S_{p_j}}, with 1/r = sum 1/p_j."""
    if len(p_list) != spec.m - 1:
        raise InvalidExponents(f"need {spec.m - 1} exponents, got {len(p_list)}")
    p = [float(x) for x in p_list]
    if any(x < 1 for x in p):
        raise InvalidExponents("every exponent must be >= 1")
    inv_r = sum(0.0 if np.isinf(x) else 1.0 / x for x in p)
    if inv_r > 1.0 + 1e-12:
        raise InvalidExponents("sum of reciprocal exponents exceeds 1")
    r = np.inf if inv_r == 0 else 1.0 / inv_r
    if bound is None:
        table = spec.kernel.table
        if spec.m == 2 and p[0] == 2.0:
            bound = float(np.abs(table).max())
        elif spec.m == 2:
            bound = min(_default_upper(table), separable_bound(table))
        else:
            bound = separable_bound(table)
    lhs = schatten_norm(moi_apply(spec), r)
    rhs = bound * float(np.prod([schatten_norm(T, q) for T, q in zip(spec.interleaved, p)]))
    return Report("moi_schatten", inputs_digest(spec.kernel.table, *spec.interleaved), lhs, rhs,
                  safe_ratio(lhs, rhs), 0.0, seed, {"r": r, "p": p, "bound": bound})


def _check_order(m: int):
    if m < 0 or m > MAX_DERIV:
        raise UnsupportedOrder(f"order {m} outside 0..{MAX_DERIV}")


def higher_derivative(f: ScalarFn, A, K, m: int, tol: float = DEFAULT_TOL) -> np.ndarray:
    """d^m/dt^m f(A + tK) at t = 0 as m! times the integral of the m-th divided difference."""
    _check_order(m)
    A, K = check_hermitian(A), check_hermitian(K)
    E = hermitian_eig(A)
    if m == 0:
        return mat_fun(f, E)
    spec = MoiSpec.divided_difference(f, (E,) * (m + 1), (K,) * m, tol)
    return factorial(m) * moi_apply(spec)


def higher_difference_direct(f: ScalarFn, A, K, m: int) -> np.ndarray:
    """sum_j (-1)^(m-j) C(m, j) f(A + jK)."""
    A, K = check_hermitian(A), check_hermitian(K)
    out = np.zeros(A.shape, dtype=complex)
    for j in range(m + 1):
        out += (-1) ** (m - j) * comb(m, j) * mat_fun(f, A + j * K)
    return out


def higher_difference_moi(f: ScalarFn, A, K, m: int, with_residual: bool = False, tol: float = DEFAULT_TOL):
    """m-th forward difference as m! times the integral over E_A, E_{A+K}, ..., E_{A+mK}."""
    _check_order(m)
    A, K = check_hermitian(A), check_hermitian(K)
    if m == 0:
        out = mat_fun(f, A)
    else:
        ds = tuple(hermitian_eig(A + j * K) for j in range(m + 1))
        out = factorial(m) * moi_apply(MoiSpec.divided_difference(f, ds, (K,) * m, tol))
    if not with_residual:
        return out
    direct = higher_difference_direct(f, A, K, m)
    scale = max(np.linalg.norm(direct), np.finfo(float).tiny)
    return out, float(np.linalg.norm(out - direct) / scale) if np.any(direct) else float(np.linalg.norm(out))


_CENTRAL = {
    1: ([-1, 1], [-0.5, 0.5]),
    2: ([-1, 0, 1], [1.0, -2.0, 1.0]),
    3: ([-2, -1, 1, 2], [-0.5, 1.0, -1.0, 0.5]),
}


def central_difference(f: ScalarFn, A, K, m: int, h: float) -> np.ndarray:
    """Second-order central difference approximation of d^m/dt^m f(A + tK) at 0."""
    offsets, weights = _CENTRAL[m]
    A, K = as_matrix(A), as_matrix(K)
    out = sum(w * mat_fun(f, A + (o * h) * K) for o, w in zip(offsets, weights))
    return out / h**m


def richardson_derivative(f: ScalarFn, A, K, m: int, h: float) -> np.ndarray:
    """One Richardson step on the central difference (error O(h^4))."""
    return (4.0 * central_difference(f, A, K, m, h / 2) - central_difference(f, A, K, m, h)) / 3.0


def daletskii_krein_errors(f: ScalarFn, A, K, ts=(1e-2, 1e-3, 1e-4)) -> np.ndarray:
    """||(f(A+tK) - f(A))/t - first derivative||_F for each t."""
    D = higher_derivative(f, A, K, 1)
    F0 = mat_fun(f, A)
    return np.array([np.linalg.norm((mat_fun(f, as_matrix(A) + t * as_matrix(K)) - F0) / t - D) for t in ts])


def loglog_slope(x, y) -> float:
    """Least-squares slope of log y against log x."""
    return float(np.polyfit(np.log(np.asarray(x, float)), np.log(np.asarray(y, float)), 1)[0])
