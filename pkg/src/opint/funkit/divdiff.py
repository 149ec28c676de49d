"""Confluent divided differences and their tables on eigenvalue grids."""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

from ..errors import DerivativeUnavailable, DimensionMismatch
from ..matcore import SpectralDecomp
from .scalar import ScalarFn

__all__ = [
    "DEFAULT_TOL",
    "Kernel",
    "Kernel2",
    "Kernel3",
    "grid_of",
    "divided_difference",
    "divided_differences",
    "dd_kernel",
    "dd_kernel2",
    "dd_kernel3_order2",
    "dd_kernel3_partial",
    "dd_kernel2_partial",
]

DEFAULT_TOL = 1e-7
MAX_ORDER = 4


@dataclass(frozen=True)
class Kernel:
    """Dense table of a multivariable integrand sampled on a product of grids."""

    grids: tuple
    table: np.ndarray

    def __post_init__(self):
        grids = tuple(np.asarray(g) for g in self.grids)
        table = np.asarray(self.table, dtype=complex)
        if table.shape != tuple(len(g) for g in grids):
            raise DimensionMismatch(f"table shape {table.shape} does not match grids")
        if not np.all(np.isfinite(table)):
            raise ValueError("kernel table has non-finite entries")
        object.__setattr__(self, "grids", grids)
        object.__setattr__(self, "table", table)

    @property
    def order(self) -> int:
        return len(self.grids)

    @property
    def xs(self):
        return self.grids[0]

    @property
    def ys(self):
        return self.grids[1]

    @property
    def zs(self):
        return self.grids[2]

    def to_json(self) -> dict:
        def enc(g):
            return np.real(g).tolist() if not np.iscomplexobj(g) else {"re": g.real.tolist(), "im": g.imag.tolist()}

        return {
            "grids": [enc(g) for g in self.grids],
            "re": self.table.real.tolist(),
            "im": self.table.imag.tolist(),
        }


Kernel2 = Kernel
Kernel3 = Kernel


def grid_of(D) -> np.ndarray:
    if isinstance(D, SpectralDecomp):
        return D.eigenvalues
    return np.asarray(D)


def _snap_clusters(x: np.ndarray, tol: float) -> np.ndarray:
    """Sort each row and replace near-coincident runs by their mean."""
    x = np.sort(np.asarray(x, dtype=float), axis=1)
    scale = tol * (1.0 + np.abs(x).max(axis=1))
    labels = np.zeros(x.shape, dtype=int)
    for i in range(1, x.shape[1]):
        labels[:, i] = labels[:, i - 1] + (x[:, i] - x[:, i - 1] > scale)
    out = x.copy()
    for lab in range(x.shape[1]):
        mask = labels == lab
        cnt = mask.sum(axis=1)
        if not np.any(cnt > 1):
            continue
        mean = np.where(cnt > 0, (x * mask).sum(axis=1) / np.maximum(cnt, 1), 0.0)
        out = np.where(mask, mean[:, None], out)
    return out


def divided_differences(f: ScalarFn, points, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Vectorized confluent divided differences.

    ``points`` has shape (M, k+1); row r yields the order-k divided difference
    of f at that row. Points within ``tol * (1 + max|point|)`` of each other
    are merged and the derivative branch of the Newton recursion is used.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    k = pts.shape[1] - 1
    if k > MAX_ORDER:
        raise ValueError(f"divided differences are supported up to order {MAX_ORDER}")
    x = _snap_clusters(pts, tol)
    d = [np.asarray(f(x[:, i]), dtype=complex) * np.ones(len(x)) for i in range(k + 1)]
    for j in range(1, k + 1):
        nxt = []
        for i in range(k + 1 - j):
            h = x[:, i + j] - x[:, i]
            same = h == 0.0
            with np.errstate(divide="ignore", invalid="ignore"):
                q = (d[i + 1] - d[i]) / h
            if np.any(same):
                try:
                    fj = f.deriv(j)
                except DerivativeUnavailable:
                    raise DerivativeUnavailable(
                        f"coincident points need derivative of order {j} of {f.name or 'f'}") from None
                vals = np.zeros(len(x), dtype=complex)
                vals[same] = np.asarray(fj(x[same, i]), dtype=complex) / factorial(j)
                q = np.where(same, vals, q)
            nxt.append(q)
        d = nxt
    return d[0]


def divided_difference(f: ScalarFn, points, tol: float = DEFAULT_TOL) -> complex:
    """Order-k confluent divided difference at k+1 points (k <= 4)."""
    return complex(divided_differences(f, np.asarray(points, dtype=float)[None, :], tol)[0])


def dd_kernel(f: ScalarFn, grids, tol: float = DEFAULT_TOL) -> Kernel:
    """Table of the divided difference of order len(grids)-1 on a product grid."""
    gs = [np.asarray(grid_of(g), dtype=float) for g in grids]
    mesh = np.meshgrid(*gs, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    table = divided_differences(f, pts, tol).reshape(tuple(len(g) for g in gs))
    return Kernel(tuple(gs), table)


def dd_kernel2(f: ScalarFn, D1, D2, tol: float = DEFAULT_TOL) -> Kernel:
    """(f(x)-f(y))/(x-y), with f' wherever the grids coincide."""
    return dd_kernel(f, (D1, D2), tol)


def dd_kernel3_order2(f: ScalarFn, D1, D2, D3, tol: float = DEFAULT_TOL) -> Kernel:
    return dd_kernel(f, (D1, D2, D3), tol)


def _coincident(a, b, tol):
    return np.abs(a - b) <= tol * (1.0 + np.maximum(np.abs(a), np.abs(b)))


def _partial_quotient(f: ScalarFn, axis: int, num_hi, num_lo, u1, u2, at_hi, tol):
    """(num_hi - num_lo)/(u1 - u2), switching to the axis partial at coincidence."""
    same = _coincident(u1, u2, tol)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = (num_hi - num_lo) / np.where(same, 1.0, u1 - u2)
    if np.any(same):
        df = f.deriv(1, axis)
        vals = np.asarray(df(*at_hi), dtype=complex) * np.ones(q.shape)
        q = np.where(same, vals, q)
    return q


def dd_kernel3_partial(f: ScalarFn, axis: int, g1, g2, g3, tol: float = DEFAULT_TOL) -> Kernel:
    """Divided difference of a two-variable function in one of its variables.

    axis=1: table[i,j,k] = (f(g1_i, g3_k) - f(g2_j, g3_k)) / (g1_i - g2_j)
    axis=2: table[i,j,k] = (f(g1_i, g2_j) - f(g1_i, g3_k)) / (g2_j - g3_k)
    """
    if f.arity != 2:
        raise ValueError("dd_kernel3_partial needs a function of two variables")
    a, b, c = (np.asarray(grid_of(g), dtype=float) for g in (g1, g2, g3))
    X1, X2, X3 = np.meshgrid(a, b, c, indexing="ij")
    if axis == 1:
        mid = 0.5 * (X1 + X2)
        table = _partial_quotient(f, 0, f(X1, X3), f(X2, X3), X1, X2, (mid, X3), tol)
    elif axis == 2:
        mid = 0.5 * (X2 + X3)
        table = _partial_quotient(f, 1, f(X1, X2), f(X1, X3), X2, X3, (X1, mid), tol)
    else:
        raise ValueError("axis must be 1 or 2")
    return Kernel((a, b, c), table)


def dd_kernel2_partial(f: ScalarFn, axis: str, z1, z2, tol: float = DEFAULT_TOL) -> Kernel:
    """Partial divided differences on complex eigenvalue grids (normal operators).

    axis='x': (f(x1, y2) - f(x2, y2)) / (x1 - x2)
    axis='y': (f(x1, y1) - f(x1, y2)) / (y1 - y2)
    """
    Z1, Z2 = np.meshgrid(np.asarray(z1, dtype=complex), np.asarray(z2, dtype=complex), indexing="ij")
    x1, y1, x2, y2 = Z1.real, Z1.imag, Z2.real, Z2.imag
    if axis == "x":
        table = _partial_quotient(f, 0, f(x1, y2), f(x2, y2), x1, x2, (0.5 * (x1 + x2), y2), tol)
    elif axis == "y":
        table = _partial_quotient(f, 1, f(x1, y1), f(x1, y2), y1, y2, (x1, 0.5 * (y1 + y2)), tol)
    else:
        raise ValueError("axis must be 'x' or 'y'")
    return Kernel((np.asarray(z1), np.asarray(z2)), table)
