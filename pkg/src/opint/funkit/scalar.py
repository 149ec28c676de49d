"""Scalar functions with derivative evaluators, and the built-in library."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..errors import ConfigError, DerivativeUnavailable

__all__ = ["ScalarFn", "phi", "phi_prime", "library", "get_function", "LIBRARY_NAMES"]


@dataclass(frozen=True)
class ScalarFn:
    """A vectorized function of one or two real variables.

    For ``arity == 1`` ``derivs`` lists f', f'', ... in order. For
    ``arity == 2`` it holds the two first partials ``(df/dx, df/dy)``.
    ``bandlimit`` is a declared sigma with supp Ff in [-sigma, sigma]^arity.
    """

    func: Callable
    derivs: tuple = ()
    arity: int = 1
    bandlimit: Optional[float] = None
    name: str = ""
    sup_norm: Optional[float] = field(default=None, compare=False)

    def __call__(self, *args):
        return self.func(*args)

    @property
    def max_order(self) -> int:
        if self.arity == 2:
            return 1 if len(self.derivs) == 2 else 0
        return len(self.derivs)

    def deriv(self, k: int, axis: int = 0) -> Callable:
        if k == 0:
            return self.func
        if self.arity == 2:
            if k != 1 or len(self.derivs) != 2:
                raise DerivativeUnavailable(f"{self.name or 'f'}: partial of order {k} unavailable")
            return self.derivs[axis]
        if k > len(self.derivs):
            raise DerivativeUnavailable(f"{self.name or 'f'}: derivative of order {k} unavailable")
        return self.derivs[k - 1]


def _sinc_prime(x):
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-4
    xs = np.where(small, 1.0, x)
    far = (np.cos(np.pi * xs) - np.sinc(xs)) / xs
    near = -(np.pi**2) * x / 3.0 + np.pi**4 * x**3 / 30.0
    return np.where(small, near, far)


def phi(x):
    """(1 - cos 2 pi x) / (2 pi^2 x^2), exactly 0 at nonzero integers and 1 at 0."""
    x = np.asarray(x, dtype=float)
    k = np.round(x)
    return np.where(x == k, (k == 0).astype(float), np.sinc(x) ** 2)


def phi_prime(x):
    x = np.asarray(x, dtype=float)
    k = np.round(x)
    return np.where(x == k, 0.0, 2.0 * np.sinc(x) * _sinc_prime(x))


def _poly(power: int) -> ScalarFn:
    def make(j):
        coef = float(np.prod(np.arange(power - j + 1, power + 1))) if j else 1.0
        e = power - j
        if e < 0:
            return lambda x: np.zeros_like(np.asarray(x, dtype=float))
        return lambda x: coef * np.asarray(x, dtype=float) ** e

    return ScalarFn(make(0), tuple(make(j) for j in range(1, 5)), name=f"x^{power}" if power > 1 else "x")


def _smoothed_abs_power(alpha: float, delta: float) -> ScalarFn:
    d2 = delta * delta

    def f(x):
        x = np.asarray(x, dtype=float)
        return (x * x + d2) ** (alpha / 2)

    def f1(x):
        x = np.asarray(x, dtype=float)
        return alpha * x * (x * x + d2) ** (alpha / 2 - 1)

    def f2(x):
        x = np.asarray(x, dtype=float)
        r = x * x + d2
        return alpha * r ** (alpha / 2 - 1) + alpha * (alpha - 2) * x * x * r ** (alpha / 2 - 2)

    return ScalarFn(f, (f1, f2), name=f"|x|^{alpha:g}-smoothed")


def library(name: str, alpha: float = 0.5, sigma: float = 1.0, delta: float = 1e-3) -> ScalarFn:
    """Built-in functions, each with analytic derivatives."""
    if name == "x":
        return _poly(1)
    if name == "x2":
        return _poly(2)
    if name == "x3":
        return _poly(3)
    if name == "exp":
        return ScalarFn(np.exp, (np.exp,) * 4, name="exp")
    if name == "sin":
        return ScalarFn(np.sin, (np.cos, lambda x: -np.sin(x), lambda x: -np.cos(x), np.sin),
                        bandlimit=1.0, name="sin", sup_norm=1.0)
    if name == "sin_sigma":
        s = float(sigma)
        return ScalarFn(
            lambda x: np.sin(s * np.asarray(x)),
            (lambda x: s * np.cos(s * np.asarray(x)),
             lambda x: -s * s * np.sin(s * np.asarray(x)),
             lambda x: -s**3 * np.cos(s * np.asarray(x))),
            bandlimit=s, name=f"sin({s:g}x)", sup_norm=1.0)
    if name == "abs_alpha":
        return _smoothed_abs_power(alpha, delta)
    if name == "phi":
        return ScalarFn(phi, (phi_prime,), bandlimit=2 * np.pi, name="phi", sup_norm=1.0)
    if name == "xy":
        return ScalarFn(lambda x, y: x * y, (lambda x, y: y * np.ones_like(x), lambda x, y: x * np.ones_like(y)),
                        arity=2, name="xy")
    if name == "sin_x_plus_y":
        return ScalarFn(lambda x, y: np.sin(x + y), (lambda x, y: np.cos(x + y), lambda x, y: np.cos(x + y)),
                        arity=2, bandlimit=1.0, name="sin(x+y)", sup_norm=1.0)
    if name == "exp_x_minus_y":
        return ScalarFn(lambda x, y: np.exp(x - y), (lambda x, y: np.exp(x - y), lambda x, y: -np.exp(x - y)),
                        arity=2, name="exp(x-y)")
    if name == "sin_cos":
        return ScalarFn(lambda x, y: np.sin(x) * np.cos(y),
                        (lambda x, y: np.cos(x) * np.cos(y), lambda x, y: -np.sin(x) * np.sin(y)),
                        arity=2, bandlimit=1.0, name="sin(x)cos(y)", sup_norm=1.0)
    if name == "cos_sin":
        return ScalarFn(lambda x, y: np.cos(x) * np.sin(y),
                        (lambda x, y: -np.sin(x) * np.sin(y), lambda x, y: np.cos(x) * np.cos(y)),
                        arity=2, bandlimit=1.0, name="cos(x)sin(y)", sup_norm=1.0)
    raise ConfigError(f"unknown function name {name!r}")


LIBRARY_NAMES = ("x", "x2", "x3", "exp", "sin", "sin_sigma", "abs_alpha", "phi",
                 "xy", "sin_x_plus_y", "exp_x_minus_y", "sin_cos", "cos_sin", "counterexample")


def get_function(name: str, **params) -> ScalarFn:
    if name == "counterexample":
        from ..counterex import build_counterexample, counterexample_fn

        return counterexample_fn(build_counterexample(int(params.get("N", 8))))
    return library(name, **{k: v for k, v in params.items() if k in ("alpha", "sigma", "delta")})
