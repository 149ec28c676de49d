"""Dense complex matrix algebra.

Hermitian eigendecomposition (cyclic Jacobi), singular values (one-sided
Jacobi), Schatten norms and the one-variable spectral functional calculus.
Everything else in the package is built on these few routines.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import DimensionMismatch, DomainError, InvalidP, NoConvergence, NonHermitian

__all__ = [
    "SpectralDecomp",
    "as_matrix",
    "as_decomp",
    "check_hermitian",
    "hermitian_eig",
    "singular_values",
    "schatten_norm",
    "op_norm",
    "mat_fun",
    "commutator",
    "matrix_to_json",
    "matrix_from_json",
]

HERMITIAN_TOL = 1e-12
MAX_SWEEPS = 100


@dataclass(frozen=True)
class SpectralDecomp:
    """Eigenvalues (ascending) and orthonormal eigenvectors stored as columns."""

    eigenvalues: np.ndarray
    basis: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues, dtype=float)
        U = np.asarray(self.basis, dtype=complex)
        if U.ndim != 2 or U.shape[0] != U.shape[1] or U.shape[0] != lam.shape[0]:
            raise DimensionMismatch(f"basis {U.shape} incompatible with {lam.shape[0]} eigenvalues")
        lam.setflags(write=False)
        U.setflags(write=False)
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "basis", U)

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    def matrix(self) -> np.ndarray:
        U = self.basis
        return (U * self.eigenvalues) @ U.conj().T


def as_matrix(M) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d matrix, got shape {M.shape}")
    return M


def check_hermitian(H, tol: float = HERMITIAN_TOL) -> np.ndarray:
    H = as_matrix(H)
    if H.shape[0] != H.shape[1]:
        raise DimensionMismatch(f"matrix must be square, got {H.shape}")
    scale = 1.0 + (np.abs(H).max() if H.size else 0.0)
    if H.size and np.abs(H - H.conj().T).max() > tol * scale:
        raise NonHermitian("matrix is not Hermitian within tolerance")
    return H


def _rotation(app: float, aqq: float, apq: complex) -> np.ndarray:
    """Unitary W with W* [[app, apq], [conj(apq), aqq]] W diagonal."""
    r = abs(apq)
    v = np.conj(apq) / r
    theta = (aqq - app) / (2.0 * r)
    if abs(theta) > 1e150:
        t = 0.5 / theta
    else:
        t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    return np.array([[c, s], [-s * v, c * v]], dtype=complex)


def hermitian_eig(H) -> SpectralDecomp:
    """Cyclic Jacobi eigendecomposition of a Hermitian matrix.

    Sweeps over all (p, q) pairs until the off-diagonal Frobenius mass drops
    below 1e-13 * ||H||_F. Raises NoConvergence after 100 sweeps.
    """
    H = check_hermitian(H)
    n = H.shape[0]
    A = 0.5 * (H + H.conj().T)
    U = np.eye(n, dtype=complex)
    norm = np.linalg.norm(A)
    target = 1e-13 * norm
    for _ in range(MAX_SWEEPS):
        off = np.linalg.norm(A - np.diag(np.diagonal(A)))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 1e-300 or abs(apq) < 1e-18 * norm:
                    continue
                W = _rotation(A[p, p].real, A[q, q].real, apq)
                idx = [p, q]
                A[:, idx] = A[:, idx] @ W
                A[idx, :] = W.conj().T @ A[idx, :]
                A[p, q] = A[q, p] = 0.0
                U[:, idx] = U[:, idx] @ W
    else:
        raise NoConvergence(f"Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps")
    lam = np.diagonal(A).real.copy()
    order = np.argsort(lam, kind="stable")
    return SpectralDecomp(lam[order], U[:, order])


def as_decomp(X) -> SpectralDecomp:
    if isinstance(X, SpectralDecomp):
        return X
    return hermitian_eig(X)


def singular_values(M) -> np.ndarray:
    """Singular values in nonincreasing order (one-sided Jacobi)."""
    G = as_matrix(M).copy()
    if G.shape[0] < G.shape[1]:
        G = G.conj().T.copy()
    k = G.shape[1]
    if k == 0:
        return np.zeros(0)
    # columns below this squared norm are numerically zero and never rotated
    floor = (np.finfo(float).eps * np.linalg.norm(G)) ** 2
    for _ in range(MAX_SWEEPS):
        rotated = False
        for i in range(k - 1):
            for j in range(i + 1, k):
                a = np.vdot(G[:, i], G[:, i]).real
                b = np.vdot(G[:, j], G[:, j]).real
                if a <= floor or b <= floor:
                    continue
                g = np.vdot(G[:, i], G[:, j])
                if abs(g) <= 1e-15 * np.sqrt(a * b):
                    continue
                rotated = True
                W = _rotation(a, b, g)
                idx = [i, j]
                G[:, idx] = G[:, idx] @ W
        if not rotated:
            break
    else:
        raise NoConvergence(f"one-sided Jacobi SVD did not converge in {MAX_SWEEPS} sweeps")
    s = np.linalg.norm(G, axis=0)
    return np.sort(s)[::-1]


def schatten_norm(M, p: float) -> float:
    if p < 1:
        raise InvalidP(f"Schatten exponent must be >= 1, got {p}")
    s = singular_values(M)
    if s.size == 0:
        return 0.0
    if np.isinf(p):
        return float(s[0])
    if s[0] == 0.0:
        return 0.0
    # scale first so that large p does not overflow
    return float(s[0] * np.sum((s / s[0]) ** p) ** (1.0 / p))


def op_norm(M) -> float:
    return schatten_norm(M, np.inf)


def mat_fun(f: Callable, D: Union[SpectralDecomp, np.ndarray]) -> np.ndarray:
    """U diag(f(lambda)) U* for a spectral decomposition (or a Hermitian matrix)."""
    D = as_decomp(D)
    with np.errstate(all="ignore"):
        vals = np.asarray(f(D.eigenvalues), dtype=complex)
    vals = np.broadcast_to(vals, D.eigenvalues.shape)
    if not np.all(np.isfinite(vals)):
        raise DomainError("function is undefined at an eigenvalue")
    U = D.basis
    return (U * vals) @ U.conj().T


def commutator(X, Y) -> np.ndarray:
    return X @ Y - Y @ X


def matrix_to_json(M) -> dict:
    M = as_matrix(M)
    flat = M.ravel()
    return {
        "rows": int(M.shape[0]),
        "cols": int(M.shape[1]),
        "re": [float(x) for x in flat.real],
        "im": [float(x) for x in flat.imag],
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    rows, cols = int(obj["rows"]), int(obj["cols"])
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj["im"], dtype=float)
    if re.size != rows * cols or im.size != rows * cols:
        raise DimensionMismatch("entry count does not match rows*cols")
    return (re + 1j * im).reshape(rows, cols)
