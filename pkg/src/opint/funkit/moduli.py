"""Moduli of continuity and the associated omega_* majorant."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from ..errors import Divergent

__all__ = ["Modulus", "omega_star"]

_LN10 = np.log(10.0)


@dataclass(frozen=True)
class Modulus:
    func: Callable

    def __call__(self, t):
        return self.func(t)

    def check(self, samples, tol: float = 1e-9) -> bool:
        """omega(0)=0, nondecreasing and subadditive on the sampled points."""
        t = np.sort(np.asarray(samples, dtype=float))
        vals = np.asarray(self.func(t), dtype=float)
        if abs(float(self.func(0.0))) > tol:
            return False
        if np.any(np.diff(vals) < -tol):
            return False
        S, T = np.meshgrid(t, t)
        return bool(np.all(self.func(S + T) <= self.func(S) + self.func(T) + tol))


def _decade_piece(omega, x, k):
    # integral over v in [k ln10, (k+1) ln10] of omega(x e^v) e^{-v}
    val, _ = integrate.quad(lambda v: omega(x * np.exp(v)) * np.exp(-v), k * _LN10, (k + 1) * _LN10,
                            epsabs=0.0, epsrel=1e-10, limit=200)
    return val


def omega_star(omega: Callable, x: float, rel_tol: float = 1e-8) -> float:
    """x * int_x^inf omega(t)/t^2 dt, computed as int_0^inf omega(x e^v) e^{-v} dv.

    Raises Divergent when the contribution of far decades of t stops
    decaying (e.g. omega(t) = t).
    """
    if x <= 0:
        raise ValueError("omega_star is defined for x > 0")
    first = _decade_piece(omega, x, 20)
    last = _decade_piece(omega, x, 24)
    if not np.isfinite(last) or (first > 0 and last / first >= 0.999) or (first == 0 and last > 0):
        raise Divergent("omega(t)/t^2 is not integrable at infinity")
    total = 0.0
    # whole decades in v, then a tail that is summed until it is negligible
    k = 0
    while True:
        piece = _decade_piece(omega, x, k)
        total += piece
        k += 1
        if k > 8 and abs(piece) <= 0.1 * rel_tol * abs(total):
            break
        if k > 4000:
            raise Divergent("tail of omega_* integral decays too slowly")
    return float(total)
