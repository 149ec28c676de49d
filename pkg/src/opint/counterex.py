"""DFT counterexample: a bounded band-limited f(x, y) that is not Lipschitz on pairs.

With g_j the standard basis and h_k the columns of the DFT unitary
u_{jk} = N^{-1/2} exp(2 pi i jk / N) (j, k = 1..N in the formulas, stored
0-based), put A1 = sum 2j P_j, A2 = sum (2j+1) P_j and B = sum k Q_k.
The function f(x, y) = sum tau_{jk} phi(x - 2j) phi(y - k) with
tau = sqrt(N) conj(u) gives ||A1 - A2|| = 1 while ||f(A1,B) - f(A2,B)|| = sqrt(N).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Iterable, List, Optional

import numpy as np

from .funkit.scalar import ScalarFn, phi, phi_prime
from .matcore import SpectralDecomp, schatten_norm
from .noncomm import calc_from_decomps
from .report import Report, inputs_digest, safe_ratio

__all__ = [
    "CxInstance",
    "build_counterexample",
    "counterexample_fn",
    "counterexample_norms",
    "scaled_family",
    "sweep",
    "write_sweep_csv",
    "CSV_COLUMNS",
]

CSV_COLUMNS = ("N", "p", "pert_norm", "diff_norm", "ratio")


@dataclass(frozen=True)
class CxInstance:
    N: int
    A1: np.ndarray
    A2: np.ndarray
    B: np.ndarray
    tau: np.ndarray
    u: np.ndarray
    E1: SpectralDecomp = field(repr=False)
    E2: SpectralDecomp = field(repr=False)
    EB: SpectralDecomp = field(repr=False)
    f: ScalarFn = field(repr=False)


def dft_unitary(N: int) -> np.ndarray:
    j = np.arange(1, N + 1)
    return np.exp(2j * np.pi * np.outer(j, j) / N) / np.sqrt(N)


def _make_fn(tau: np.ndarray, scale: float = 1.0) -> ScalarFn:
    """x, y -> scale * sum tau_{jk} phi(x/scale - 2j) phi(y/scale - k)."""
    N = tau.shape[0]
    idx = np.arange(1, N + 1, dtype=float)

    def parts(x, y, dx=False, dy=False):
        x = np.asarray(x, dtype=float) / scale
        y = np.asarray(y, dtype=float) / scale
        gx = phi_prime if dx else phi
        gy = phi_prime if dy else phi
        px = gx(x[..., None] - 2.0 * idx)
        py = gy(y[..., None] - idx)
        return np.einsum("...j,jk,...k->...", px, tau, py)

    def f(x, y):
        return scale * parts(x, y)

    def fx(x, y):
        return parts(x, y, dx=True)

    def fy(x, y):
        return parts(x, y, dy=True)

    return ScalarFn(f, (fx, fy), arity=2, bandlimit=2 * np.pi / scale, name=f"counterexample[N={N}]")


def counterexample_fn(inst: "CxInstance") -> ScalarFn:
    return inst.f


def build_counterexample(N: int) -> CxInstance:
    if N < 2:
        raise ValueError("N must be at least 2")
    u = dft_unitary(N)
    tau = np.sqrt(N) * u.conj()
    j = np.arange(1, N + 1, dtype=float)
    I = np.eye(N, dtype=complex)
    E1 = SpectralDecomp(2 * j, I)
    E2 = SpectralDecomp(2 * j + 1, I)
    EB = SpectralDecomp(j, u)
    return CxInstance(N, E1.matrix(), E2.matrix(), EB.matrix(), tau, u, E1, E2, EB, _make_fn(tau))


def _scaled(D: SpectralDecomp, eps: float) -> SpectralDecomp:
    return SpectralDecomp(eps * D.eigenvalues, D.basis)


def counterexample_norms(inst: CxInstance, p: float = np.inf, eps: float = 1.0) -> Report:
    """S_p norms of eps(A1 - A2) and f_eps(eps A1, eps B) - f_eps(eps A2, eps B)."""
    f = inst.f if eps == 1.0 else _make_fn(inst.tau, eps)
    E1, E2, EB = (_scaled(D, eps) for D in (inst.E1, inst.E2, inst.EB)) if eps != 1.0 else (inst.E1, inst.E2, inst.EB)
    pert = schatten_norm(E1.matrix() - E2.matrix(), p)
    diff = schatten_norm(calc_from_decomps(f, E1, EB) - calc_from_decomps(f, E2, EB), p)
    exp_pert = eps * (1.0 if np.isinf(p) else inst.N ** (1.0 / p))
    exp_diff = eps * np.sqrt(inst.N)
    residual = max(abs(pert - exp_pert) / exp_pert, abs(diff - exp_diff) / exp_diff)
    return Report("counterexample_norms", inputs_digest(inst.A1, inst.A2, inst.B, str(eps)), diff, pert,
                  safe_ratio(diff, pert), float(residual), None,
                  {"N": inst.N, "p": p, "eps": eps, "expected_pert": exp_pert, "expected_diff": exp_diff})


def scaled_family(inst: CxInstance, eps: float, p: float = np.inf) -> Report:
    if eps <= 0:
        raise ValueError("eps must be positive")
    rep = counterexample_norms(inst, p, eps)
    rep.operation = "scaled_family"
    return rep


def sweep(Ns: Iterable[int], ps: Iterable[float]) -> List[dict]:
    rows = []
    ps = list(ps)
    for N in Ns:
        inst = build_counterexample(int(N))
        for p in ps:
            r = counterexample_norms(inst, p)
            rows.append({"N": int(N), "p": p, "pert_norm": r.rhs_norm, "diff_norm": r.lhs_norm, "ratio": r.ratio})
    return rows


def write_sweep_csv(path: str, rows: List[dict]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        w.writeheader()
        for row in rows:
            w.writerow({k: ("inf" if isinstance(row[k], float) and np.isinf(row[k]) else repr(row[k])
                            if isinstance(row[k], float) else row[k]) for k in CSV_COLUMNS})
