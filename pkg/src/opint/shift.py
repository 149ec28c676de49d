"""Spectral shift functions, the Birman-Solomyak measure and Taylor remainder traces."""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial, fsum
from typing import Callable, List, Optional, Tuple

import numpy as np

from .errors import DimensionMismatch, UnsupportedOrder
from .funkit.divdiff import DEFAULT_TOL
from .funkit.scalar import ScalarFn
from .matcore import check_hermitian, hermitian_eig, mat_fun, op_norm, schatten_norm
from .moi import MoiSpec, higher_derivative, moi_apply
from .report import Report, inputs_digest, safe_ratio

__all__ = [
    "StepFn",
    "AtomicMeasure",
    "spectral_shift",
    "krein_trace_check",
    "birman_solomyak_nu",
    "taylor_remainder",
    "remainder_trace_bound",
]


@dataclass(frozen=True, eq=False)
class StepFn:
    """Piecewise constant function: values[k] on (breakpoints[k], breakpoints[k+1]), 0 outside."""

    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.breakpoints, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if b.ndim != 1 or v.ndim != 1:
            raise ValueError("breakpoints and values must be 1-d")
        if v.size != max(b.size - 1, 0):
            raise DimensionMismatch("need exactly one value per interval")
        if np.any(np.diff(b) <= 0):
            raise ValueError("breakpoints must be strictly ascending")
        if not np.all(np.isfinite(v)):
            raise ValueError("values must be finite")
        object.__setattr__(self, "breakpoints", b)
        object.__setattr__(self, "values", v)

    def __eq__(self, other):
        if not isinstance(other, StepFn):
            return NotImplemented
        return np.array_equal(self.breakpoints, other.breakpoints) and np.array_equal(self.values, other.values)

    __hash__ = None

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        if self.values.size == 0:
            return np.zeros_like(s)
        k = np.searchsorted(self.breakpoints, s, side="right") - 1
        inside = (k >= 0) & (k < self.values.size)
        return np.where(inside, self.values[np.clip(k, 0, self.values.size - 1)], 0.0)

    def integral(self) -> float:
        return float(np.sum(self.values * np.diff(self.breakpoints)))

    def l1_norm(self) -> float:
        return float(np.sum(np.abs(self.values) * np.diff(self.breakpoints)))

    def integrate_derivative(self, f: Callable) -> complex:
        """Exact integral of f' * xi, as sum_k xi_k (f(b_{k+1}) - f(b_k))."""
        if self.values.size == 0:
            return 0j
        fb = np.asarray(f(self.breakpoints), dtype=complex)
        terms = self.values * np.diff(fb)
        return complex(fsum(terms.real), fsum(terms.imag))

    def to_json(self) -> dict:
        return {"breakpoints": self.breakpoints.tolist(), "values": self.values.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "StepFn":
        return cls(obj["breakpoints"], obj["values"])


@dataclass(frozen=True)
class AtomicMeasure:
    atoms: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        atoms = tuple((float(x), float(m)) for x, m in self.atoms)
        object.__setattr__(self, "atoms", atoms)

    @property
    def locations(self) -> np.ndarray:
        return np.array([a[0] for a in self.atoms])

    @property
    def masses(self) -> np.ndarray:
        return np.array([a[1] for a in self.atoms])

    def total_variation(self) -> float:
        return float(np.abs(self.masses).sum()) if self.atoms else 0.0

    def total_mass(self) -> float:
        return float(self.masses.sum()) if self.atoms else 0.0

    def integrate(self, g: Callable) -> complex:
        if not self.atoms:
            return 0.0
        return complex(np.sum(np.asarray(g(self.locations)) * self.masses))

    def to_json(self) -> dict:
        return {"atoms": [{"x": x, "mass": m} for x, m in self.atoms]}

    @classmethod
    def from_json(cls, obj: dict) -> "AtomicMeasure":
        return cls(tuple((a["x"], a["mass"]) for a in obj["atoms"]))


def _pair(A, B):
    A, B = check_hermitian(A), check_hermitian(B)
    if A.shape != B.shape:
        raise DimensionMismatch("A and B must have the same size")
    return A, B


def spectral_shift(A, B) -> StepFn:
    """xi(s) = #{eig B > s} - #{eig A > s} on the merged eigenvalue grid."""
    A, B = _pair(A, B)
    la = hermitian_eig(A).eigenvalues
    lb = hermitian_eig(B).eigenvalues
    grid = np.unique(np.concatenate([la, lb]))
    if grid.size < 2:
        return StepFn(grid, np.zeros(0))
    mid = 0.5 * (grid[1:] + grid[:-1])
    count_b = lb.size - np.searchsorted(lb, mid, side="right")
    count_a = la.size - np.searchsorted(la, mid, side="right")
    return StepFn(grid, (count_b - count_a).astype(float))


def krein_trace_check(f: ScalarFn, A, B) -> Tuple[complex, complex, float]:
    """trace(f(B) - f(A)) against the exact step-function integral of f' xi.

    The trace is taken as sum f(mu_j) - sum f(lambda_j) with compensated
    summation; rebuilding f(B) as a matrix first costs about eps * ||f(B)||
    in absolute accuracy.
    """
    A, B = _pair(A, B)
    la = hermitian_eig(A).eigenvalues
    lb = hermitian_eig(B).eigenvalues
    lhs = _fsum_c(np.concatenate([np.asarray(f(lb), dtype=complex), -np.asarray(f(la), dtype=complex)]))
    rhs = spectral_shift(A, B).integrate_derivative(f)
    return lhs, rhs, float(abs(lhs - rhs))


def _fsum_c(terms) -> complex:
    terms = np.asarray(terms, dtype=complex)
    return complex(fsum(terms.real), fsum(terms.imag))


def birman_solomyak_nu(A, B, order: int = 32) -> AtomicMeasure:
    """Gauss-Legendre average over u in [0, 1] of sum_j <T v_j(u), v_j(u)> delta at lambda_j(u).

    Here T = B - A and (lambda_j(u), v_j(u)) are the eigenpairs of A + uT.
    The orientation is fixed so that the integral of f' equals trace(f(B) - f(A)).
    """
    A, B = _pair(A, B)
    T = B - A
    if not np.any(T):
        return AtomicMeasure(())
    nodes, weights = np.polynomial.legendre.leggauss(order)
    u = 0.5 * (nodes + 1.0)
    wts = 0.5 * weights
    atoms: List[Tuple[float, float]] = []
    for uq, wq in zip(u, wts):
        E = hermitian_eig(A + uq * T)
        V = E.basis
        diag = np.einsum("ji,jk,ki->i", V.conj(), T, V).real
        atoms.extend(zip(E.eigenvalues.tolist(), (wq * diag).tolist()))
    return AtomicMeasure(tuple(atoms))


def _check_m(m: int):
    if m not in (1, 2, 3):
        raise UnsupportedOrder(f"Taylor remainders are supported for m in 1..3, got {m}")


def taylor_remainder(f: ScalarFn, A, K, m: int, route: str = "direct", tol: float = DEFAULT_TOL):
    """f(A+K) minus the Taylor polynomial of order m-1 in K.

    route="direct" subtracts the derivatives; route="moi" uses the integral of
    the m-th divided difference over E_{A+K}, E_A, ..., E_A with K in every slot.
    route="both" returns (direct, moi, relative distance).
    """
    _check_m(m)
    A, K = check_hermitian(A), check_hermitian(K)

    def direct():
        out = mat_fun(f, A + K)
        for k in range(m):
            out = out - higher_derivative(f, A, K, k, tol) / factorial(k)
        return out

    def via_moi():
        EA = hermitian_eig(A)
        ds = (hermitian_eig(A + K),) + (EA,) * m
        return moi_apply(MoiSpec.divided_difference(f, ds, (K,) * m, tol))

    if route == "direct":
        return direct()
    if route == "moi":
        return via_moi()
    if route == "both":
        d, q = direct(), via_moi()
        scale = max(np.linalg.norm(d), np.finfo(float).tiny)
        return d, q, float(np.linalg.norm(d - q) / scale) if np.any(d) else float(np.linalg.norm(q))
    raise ValueError(f"unknown route {route!r}")


def remainder_trace_bound(f: ScalarFn, A, K, m: int, seed: Optional[int] = None, points: int = 4001) -> Report:
    """|trace T^(m)| against ||f^(m)||_inf ||K||_{S_m}^m; the ratio is the implied constant."""
    _check_m(m)
    A, K = check_hermitian(A), check_hermitian(K)
    R = taylor_remainder(f, A, K, m)
    tr = abs(complex(np.trace(R)))
    la = hermitian_eig(A).eigenvalues
    lk = hermitian_eig(A + K).eigenvalues
    lo, hi = min(la.min(), lk.min()), max(la.max(), lk.max())
    xs = np.linspace(lo, hi, points)
    sup = float(np.abs(f.deriv(m)(xs)).max())
    kn = schatten_norm(K, m) ** m
    rhs = sup * kn
    return Report("remainder_trace_bound", inputs_digest(A, K, f.name), tr, rhs, safe_ratio(tr, rhs), 0.0, seed,
                  {"m": m, "sup_deriv": sup, "k_norm_pow": kn, "remainder_norm": op_norm(R)})
