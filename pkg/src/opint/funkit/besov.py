"""Littlewood-Paley pieces via FFT and truncated-scale Besov norms.

The dyadic bump ``w`` is supported in [1/2, 2] and satisfies
w(s) = 1 - w(s/2) on [1, 2]; piece ``n`` is the Fourier multiplier
t -> w(|t| / 2^n) applied to the sampled function. Norms are estimates over
a finite range of scales and over the sampling window only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Tuple

import numpy as np

from ..errors import GridTooCoarse

__all__ = [
    "smooth_step",
    "w",
    "Sampled",
    "LPDecomp",
    "sample_function",
    "lp_decompose",
    "besov_norm",
    "besov_estimate",
    "holder_seminorm",
]

MIN_FFT_1D = 4096
MIN_FFT_2D = 256


def _g(t):
    t = np.asarray(t, dtype=float)
    pos = t > 0
    return np.where(pos, np.exp(-1.0 / np.where(pos, t, 1.0)), 0.0)


def smooth_step(t):
    """C-infinity step: 0 for t <= 0, 1 for t >= 1."""
    a = _g(t)
    b = _g(1.0 - np.asarray(t, dtype=float))
    return a / (a + b)


def w(s):
    s = np.asarray(s, dtype=float)
    up = smooth_step(2.0 * s - 1.0)
    down = 1.0 - smooth_step(s - 1.0)
    out = np.where((s >= 0.5) & (s <= 1.0), up, 0.0)
    return np.where((s > 1.0) & (s <= 2.0), down, out)


@dataclass(frozen=True)
class Sampled:
    """Function values on a uniform grid (1-d or 2-d, axis order = value axes)."""

    grid_start: tuple
    grid_step: tuple
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        start = tuple(np.atleast_1d(np.asarray(self.grid_start, dtype=float)).tolist())
        step = tuple(np.atleast_1d(np.asarray(self.grid_step, dtype=float)).tolist())
        if len(start) != v.ndim or len(step) != v.ndim:
            raise ValueError("grid_start/grid_step must match the number of value axes")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "grid_start", start)
        object.__setattr__(self, "grid_step", step)

    @property
    def ndim(self) -> int:
        return self.values.ndim

    def axes(self):
        return [s + h * np.arange(n) for s, h, n in zip(self.grid_start, self.grid_step, self.values.shape)]

    def to_json(self) -> dict:
        out = {
            "grid_start": self.grid_start[0] if self.ndim == 1 else list(self.grid_start),
            "grid_step": self.grid_step[0] if self.ndim == 1 else list(self.grid_step),
            "values": np.real(self.values).tolist(),
        }
        if np.iscomplexobj(self.values):
            out["values_im"] = np.imag(self.values).tolist()
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "Sampled":
        v = np.asarray(obj["values"], dtype=float)
        if "values_im" in obj:
            v = v + 1j * np.asarray(obj["values_im"], dtype=float)
        return cls(obj["grid_start"], obj["grid_step"], v)


@dataclass(frozen=True)
class LPDecomp:
    n_range: Tuple[int, int]
    pieces: Dict[int, np.ndarray]
    remainder: np.ndarray
    sup_norms: Dict[int, float]
    sampled: Sampled = field(repr=False)

    def reconstruct(self) -> np.ndarray:
        return sum(self.pieces.values()) + self.remainder


def sample_function(f: Callable, start, step, count) -> Sampled:
    start = np.atleast_1d(np.asarray(start, dtype=float))
    step = np.atleast_1d(np.asarray(step, dtype=float))
    count = np.atleast_1d(np.asarray(count, dtype=int))
    if len(start) == 1:
        x = start[0] + step[0] * np.arange(count[0])
        return Sampled(start, step, np.asarray(f(x)))
    axes = [s + h * np.arange(n) for s, h, n in zip(start, step, count)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return Sampled(start, step, np.asarray(f(*mesh)))


def _next_pow2(n: int) -> int:
    return 1 << int(np.ceil(np.log2(max(n, 1))))


def _taper_extend(v: np.ndarray, minimum: int):
    """Pad every axis to a power of two, fading the edge values smoothly to 0."""
    slices = []
    out = v
    for ax, n in enumerate(v.shape):
        L = max(minimum, _next_pow2(2 * n))
        left = (L - n) // 2
        right = L - n - left
        pad = [(0, 0)] * v.ndim
        pad[ax] = (left, right)
        out = np.pad(out, pad, mode="edge")
        win = np.ones(L)
        if right:
            win[left + n:] = 1.0 - smooth_step(np.arange(1, right + 1) / (right / 2.0))
        if left:
            win[:left] = (1.0 - smooth_step(np.arange(left, 0, -1) / (left / 2.0)))
        shape = [1] * v.ndim
        shape[ax] = L
        out = out * win.reshape(shape)
        slices.append(slice(left, left + n))
    return out, tuple(slices)


def lp_decompose(sampled: Sampled, n_range: Tuple[int, int], periodic: bool = True) -> LPDecomp:
    """Split sampled f into dyadic pieces f_n, n in [n_range[0], n_range[1]].

    ``periodic=True`` treats the window as one period (the FFT is taken at the
    native length). Otherwise the data are tapered and zero-extended to a
    power-of-two length of at least 4096 (1-d) or 256 per axis (2-d).
    The remainder carries every frequency not covered by the listed pieces,
    so pieces + remainder reproduces the samples.
    """
    lo, hi = int(n_range[0]), int(n_range[1])
    v = np.asarray(sampled.values)
    nyquist = min(np.pi / h for h in sampled.grid_step)
    if nyquist < 2.0 ** (hi + 1):
        raise GridTooCoarse(f"Nyquist frequency {nyquist:.4g} below 2^{hi + 1}")
    if periodic:
        ext, crop = v, tuple(slice(None) for _ in v.shape)
    else:
        ext, crop = _taper_extend(v, MIN_FFT_1D if v.ndim == 1 else MIN_FFT_2D)
    F = np.fft.fftn(ext)
    freqs = np.meshgrid(*[2 * np.pi * np.fft.fftfreq(L, d=h) for L, h in zip(ext.shape, sampled.grid_step)],
                        indexing="ij")
    radius = np.sqrt(sum(t * t for t in freqs))
    real = not np.iscomplexobj(v)
    covered = np.zeros(ext.shape)
    pieces, norms = {}, {}
    for n in range(lo, hi + 1):
        mult = w(radius / 2.0**n)
        covered += mult
        piece = np.fft.ifftn(F * mult)
        piece = (piece.real if real else piece)[crop]
        pieces[n] = piece
        norms[n] = float(np.abs(piece).max()) if piece.size else 0.0
    rem = np.fft.ifftn(F * (1.0 - covered))
    rem = (rem.real if real else rem)[crop]
    return LPDecomp((lo, hi), pieces, rem, norms, sampled)


def _lp_norm(values: np.ndarray, p: float, cell: float) -> float:
    a = np.abs(values)
    if np.isinf(p):
        return float(a.max()) if a.size else 0.0
    return float((np.sum(a**p) * cell) ** (1.0 / p))


def besov_norm(f, s: float, p: float, q: float, n_range: Tuple[int, int], periodic: bool = True) -> float:
    """l^q norm of 2^{ns} ||f_n||_{L^p} over n in n_range (truncated-scale estimate).

    ``f`` is a Sampled function or an existing LPDecomp.
    """
    dec = f if isinstance(f, LPDecomp) else lp_decompose(f, n_range, periodic)
    cell = float(np.prod(dec.sampled.grid_step))
    lo, hi = n_range
    seq = np.array([2.0 ** (n * s) * _lp_norm(dec.pieces[n], p, cell) for n in range(lo, hi + 1)])
    if np.isinf(q):
        return float(seq.max()) if seq.size else 0.0
    return float(np.sum(seq**q) ** (1.0 / q))


def besov_estimate(f, window, n_range=(-3, 4), s: float = 1.0, points_per_unit: float = None) -> float:
    """B^s_{inf,1} estimate of a ScalarFn over a box window (tapered, non-periodic).

    ``window`` is (lo, hi) for one variable or ((xlo, xhi), (ylo, yhi)) for two.
    """
    hi_n = n_range[1]
    step = np.pi / 2.0 ** (hi_n + 2)
    arity = getattr(f, "arity", 1)
    if arity == 1:
        lo, hi = window
        count = int(np.ceil((hi - lo) / step)) + 1
        smp = sample_function(f, lo, step, count)
    else:
        (xl, xh), (yl, yh) = window
        counts = [int(np.ceil((xh - xl) / step)) + 1, int(np.ceil((yh - yl) / step)) + 1]
        smp = sample_function(f, (xl, yl), (step, step), counts)
    return besov_norm(smp, s, np.inf, 1.0, n_range, periodic=False)


def holder_seminorm(f: Callable, alpha: float, sample_pairs) -> float:
    """max |f(x) - f(y)| / |x - y|^alpha over the supplied pairs (a lower estimate)."""
    pairs = np.asarray(sample_pairs, dtype=float).reshape(-1, 2)
    x, y = pairs[:, 0], pairs[:, 1]
    keep = x != y
    if not np.any(keep):
        return 0.0
    x, y = x[keep], y[keep]
    return float(np.max(np.abs(f(x) - f(y)) / np.abs(x - y) ** alpha))
