"""Seeded verification suites and the report they produce."""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from .. import counterex as cx
from ..doi import (
    doi_trace,
    fundamental_inequality_check,
    op_difference,
    quasicommutator,
)
from ..errors import ConfigError, OpintError
from ..funkit.besov import besov_norm, lp_decompose, sample_function, w
from ..funkit.divdiff import Kernel
from ..funkit.scalar import ScalarFn, get_function, library
from ..matcore import hermitian_eig, mat_fun, op_norm, schatten_norm, singular_values
from ..moi import (
    MoiSpec,
    daletskii_krein_errors,
    higher_derivative,
    higher_difference_moi,
    loglog_slope,
    moi_apply,
    moi_schatten_check,
    richardson_derivative,
)
from ..noncomm import (
    OpPair,
    ToiSpec,
    almost_commuting_pair,
    commutator_repr,
    helton_howe_lhs,
    pair_difference_repr,
    pair_lipschitz_check,
    toi_trace_duality,
)
from ..report import to_jsonable
from ..rng import CounterRNG
from ..shift import krein_trace_check, remainder_trace_bound, spectral_shift, taylor_remainder
from .config import ExperimentConfig

__all__ = ["SuiteReport", "run_suite", "holder_experiment", "singular_decay_experiment", "SUITES"]

log = logging.getLogger("opint")


@dataclass
class SuiteReport:
    config: dict
    records: List[dict] = field(default_factory=list)
    failures: List[str] = field(default_factory=list)
    aggregate: Dict[str, object] = field(default_factory=dict)
    aborted: Optional[str] = None
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures and self.aborted is None

    def check(self, ok: bool, message: str) -> bool:
        if not ok:
            self.failures.append(message)
            log.info("check failed: %s", message)
        return ok

    def to_json(self) -> dict:
        return to_jsonable({
            "config": self.config,
            "records": self.records,
            "aggregate": self.aggregate,
            "failures": self.failures,
            "aborted": self.aborted,
            "passed": self.passed,
            "wall_time": self.wall_time,
        })

    def dumps(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=indent)

    def summarize(self) -> None:
        """Fill the aggregate block from the per-trial records."""
        def col(key):
            return [r[key] for r in self.records if isinstance(r.get(key), (int, float)) and np.isfinite(r[key])]

        agg = self.aggregate
        for key, name, red in (("residual", "max_residual", max), ("ratio", "max_ratio", max),
                               ("constant", "min_constant", min), ("constant", "max_constant", max)):
            vals = col(key)
            if vals:
                agg[name] = float(red(vals))
        agg["records"] = len(self.records)


def _fn(cfg: ExperimentConfig, default: str) -> ScalarFn:
    return get_function(cfg.f_name or default, alpha=cfg.alpha or 0.5)


def _cycle(cfg: ExperimentConfig, names, t: int) -> ScalarFn:
    return get_function(cfg.f_name) if cfg.f_name else library(names[t % len(names)])


# each suite fills ``rep`` from seeded trials; trial t uses substream seed + t

def _doi_check(cfg, rng, rep):
    tol = cfg.tol("residual", 1e-8)
    ttol = cfg.tol("trace", 1e-10)
    for t in range(cfg.trials):
        r = rng.substream(t)
        f = _cycle(cfg, ("x2", "x3", "exp", "sin"), t)
        A = r.hermitian(cfg.n)
        B = A + 1e-3 * r.hermitian(cfg.n) if t % 2 else r.hermitian(cfg.n)
        _, res = op_difference(f, A, B, with_residual=True)
        _, qres = quasicommutator(f, A, B, r.complex_normal((cfg.n, cfg.n)), with_residual=True)
        E = hermitian_eig(A)
        lhs, rhs = doi_trace(Kernel((E.eigenvalues, E.eigenvalues), r.complex_normal((cfg.n, cfg.n))),
                             r.complex_normal((cfg.n, cfg.n)), E)
        tres = abs(lhs - rhs) / (1 + abs(lhs))
        rep.records.append({"trial": t, "f": f.name, "residual": max(res, qres), "trace_residual": tres})
        rep.check(res <= tol and qres <= tol, f"trial {t}: difference residual {max(res, qres):.3g} > {tol:g}")
        rep.check(tres <= ttol, f"trial {t}: trace identity residual {tres:.3g} > {ttol:g}")


def _fundamental(cfg, rng, rep):
    tol = cfg.tol("ratio", 1e-6)
    for t in range(cfg.trials):
        r = rng.substream(t)
        if cfg.f_name:
            f = _fn(cfg, "sin")
        elif t % 2:
            f = library("phi")
        else:
            f = library("sin_sigma", sigma=0.5 + 2.0 * float(r.uniform()))
        A, B = r.hermitian(cfg.n, 3.0), r.hermitian(cfg.n, 3.0)
        if t % 3 == 0:
            B = A + 1e-2 * r.hermitian(cfg.n)
        res = fundamental_inequality_check(f, A, B, seed=cfg.seed + t)
        rep.records.append({"trial": t, "f": f.name, "ratio": res.ratio, "lhs": res.lhs_norm, "rhs": res.rhs_norm})
        rep.check(res.ratio <= 1 + tol, f"trial {t}: ratio {res.ratio:.9g} exceeds 1")


def _moi_check(cfg, rng, rep):
    tol = cfg.tol("residual", 1e-10)
    n = cfg.n
    for t in range(cfg.trials):
        r = rng.substream(t)
        E = [hermitian_eig(r.hermitian(n)) for _ in range(3)]
        T1, T2 = r.complex_normal((n, n)), r.complex_normal((n, n))
        grids = tuple(e.eigenvalues for e in E)
        ones = moi_apply(MoiSpec(E, Kernel(grids, np.ones((n, n, n))), (T1, T2)))
        res_ones = np.linalg.norm(ones - T1 @ T2) / np.linalg.norm(T1 @ T2)
        a, b, c = (np.exp(1j * r.uniform(n) * 2 * np.pi) for _ in range(3))
        sep = Kernel(grids, np.einsum("i,j,k->ijk", a, b, c))
        direct = (E[0].basis * a) @ E[0].basis.conj().T @ T1 @ (E[1].basis * b) @ E[1].basis.conj().T @ T2 \
            @ (E[2].basis * c) @ E[2].basis.conj().T
        res_sep = np.linalg.norm(moi_apply(MoiSpec(E, sep, (T1, T2))) - direct) / np.linalg.norm(direct)
        hold = moi_schatten_check(MoiSpec(E, sep, (T1, T2)), (6.0, 6.0))
        lhs, rhs = toi_trace_duality(ToiSpec(Kernel(grids, r.complex_normal((n, n, n))), E, T1, T2),
                                     r.complex_normal((n, n)))
        dual = abs(lhs - rhs) / (1 + abs(lhs))
        res = float(max(res_ones, res_sep, dual))
        rep.records.append({"trial": t, "residual": res, "ratio": hold.ratio})
        rep.check(res <= tol, f"trial {t}: multiple-integral residual {res:.3g} > {tol:g}")
        rep.check(hold.ratio <= 1 + 1e-9, f"trial {t}: Schatten-Holder ratio {hold.ratio:.6g} > 1")


def _derivative_check(cfg, rng, rep):
    slope_min = cfg.tol("slope", 0.9)
    tol = cfg.tol("residual", 1e-6)
    ts = (1e-2, 1e-3, 1e-4)
    for t in range(cfg.trials):
        r = rng.substream(t)
        f = _cycle(cfg, ("exp", "sin", "x3"), t)
        A, K = r.hermitian(cfg.n), r.hermitian(cfg.n)
        errs = daletskii_krein_errors(f, A, K, ts)
        exact = bool(np.all(errs <= 1e-12 * (1 + np.linalg.norm(mat_fun(f, A)))))
        slope = float("inf") if exact else loglog_slope(ts, errs)
        D1 = higher_derivative(f, A, K, 1)
        hf = abs(np.trace(D1) - np.trace(mat_fun(f.deriv(1), A) @ K)) / (1 + abs(np.trace(D1)))
        D2 = higher_derivative(f, A, K, 2)
        fd = np.linalg.norm(richardson_derivative(f, A, K, 2, 1e-2) - D2) / max(np.linalg.norm(D2), 1e-300)
        rep.records.append({"trial": t, "f": f.name, "slope": slope, "errors": errs.tolist(),
                            "residual": float(max(hf, fd))})
        rep.check(slope >= slope_min, f"trial {t}: first-order slope {slope:.3f} < {slope_min}")
        rep.check(max(hf, fd) <= tol, f"trial {t}: derivative residual {max(hf, fd):.3g} > {tol:g}")


def _difference_check(cfg, rng, rep):
    tol = cfg.tol("residual", 1e-8)
    for t in range(cfg.trials):
        r = rng.substream(t)
        f = _cycle(cfg, ("exp", "sin", "x3"), t)
        m = 2 + t % 2
        A, K = r.hermitian(cfg.n), r.hermitian(cfg.n)
        _, res = higher_difference_moi(f, A, K, m, with_residual=True)
        rep.records.append({"trial": t, "f": f.name, "m": m, "residual": res})
        rep.check(res <= tol, f"trial {t}: order-{m} difference residual {res:.3g} > {tol:g}")


def _krein(cfg, rng, rep):
    tol = cfg.tol("residual", 1e-9)
    n = cfg.n
    for t in range(cfg.trials):
        r = rng.substream(t)
        f = _cycle(cfg, ("x2", "exp", "sin", "x3"), t)
        A = r.hermitian(n)
        g = r.complex_normal((n, 2))
        kind = ("rank1+", "rank1-", "indefinite", "psd")[t % 4]
        if kind == "rank1+":
            P = np.outer(g[:, 0], g[:, 0].conj())
        elif kind == "rank1-":
            P = -np.outer(g[:, 0], g[:, 0].conj())
        elif kind == "indefinite":
            P = np.outer(g[:, 0], g[:, 0].conj()) - np.outer(g[:, 1], g[:, 1].conj())
        else:
            P = g @ g.conj().T
        B = A + P
        lhs, rhs, res = krein_trace_check(f, A, B)
        rel = res / (1 + abs(lhs))
        xi = spectral_shift(A, B)
        tr = float(np.trace(P).real)
        int_res = abs(xi.integral() - tr) / (1 + abs(tr))
        s1 = schatten_norm(P, 1)
        l1 = xi.l1_norm()
        rep.records.append({"trial": t, "f": f.name, "kind": kind, "residual": rel, "integral_residual": int_res,
                            "xi_l1": l1, "s1": s1})
        rep.check(rel <= tol, f"trial {t}: trace formula residual {rel:.3g} > {tol:g}")
        rep.check(int_res <= tol, f"trial {t}: integral of xi differs from trace by {int_res:.3g}")
        rep.check(l1 <= s1 * (1 + 1e-9) + 1e-12, f"trial {t}: ||xi||_1 {l1:.12g} > ||B-A||_S1 {s1:.12g}")
        if kind in ("psd", "rank1+"):
            rep.check(abs(l1 - s1) <= 1e-9 * (1 + s1), f"trial {t}: ||xi||_1 != ||B-A||_S1 for PSD perturbation")


def _koplienko(cfg, rng, rep):
    cmax = cfg.tol("constant", 10.0)
    scales = (1e-1, 1e-2, 1e-3)
    for t in range(cfg.trials):
        r = rng.substream(t)
        f = _cycle(cfg, ("exp", "sin"), t)
        m = 2 + t % 2
        A, K = r.hermitian(cfg.n), r.hermitian(cfg.n)
        norms = [op_norm(taylor_remainder(f, A, s * K, m)) for s in scales]
        slope = loglog_slope(scales, norms)
        bound = remainder_trace_bound(f, A, K, m, seed=cfg.seed + t)
        rep.records.append({"trial": t, "f": f.name, "m": m, "slope": slope, "constant": bound.ratio})
        rep.check(slope >= m - 0.1, f"trial {t}: remainder slope {slope:.3f} < {m - 0.1}")
        rep.check(bound.ratio <= cmax, f"trial {t}: implied constant {bound.ratio:.3g} > {cmax:g}")


def _pair_lipschitz(cfg, rng, rep):
    p = 2.0 if cfg.p is None else cfg.p
    if not 1.0 <= p <= 2.0:
        raise ConfigError("pair-lipschitz needs p in [1, 2]")
    tol = cfg.tol("residual", 1e-8)
    spread = cfg.tol("spread", 10.0)
    consts = []
    for t in range(cfg.trials):
        r = rng.substream(t)
        if cfg.f_name:
            f = get_function(cfg.f_name)
        else:
            f = library(("sin_cos", "sin_x_plus_y", "cos_sin")[t % 3])
        if f.arity != 2:
            raise ConfigError("pair-lipschitz needs a function of two variables")
        n = cfg.n
        p1 = OpPair(r.hermitian(n), r.hermitian(n))
        p2 = OpPair(p1.A + 0.1 * r.hermitian(n), p1.B + 0.1 * r.hermitian(n))
        rep_l = pair_lipschitz_check(f, p1, p2, p, seed=cfg.seed + t)
        rep_r = pair_difference_repr(f, p1, p2)
        c = rep_l.ratio / rep_l.extra["besov"]
        consts.append(c)
        rep.records.append({"trial": t, "f": f.name, "ratio": rep_l.ratio, "besov": rep_l.extra["besov"],
                            "constant": c, "residual": rep_r.residual})
        rep.check(rep_r.residual <= tol, f"trial {t}: representation residual {rep_r.residual:.3g} > {tol:g}")
    med = float(np.median(consts))
    rep.aggregate["median_constant"] = med
    rep.check(max(consts) <= spread * med, f"observed constant spread {max(consts) / med:.3g} > {spread:g}")


def _commutator(cfg, rng, rep):
    tol = cfg.tol("residual", 1e-8)
    ttol = cfg.tol("trace", 1e-9)
    for t in range(cfg.trials):
        r = rng.substream(t)
        phi = _cycle(cfg, ("xy", "sin_cos", "sin_x_plus_y", "exp_x_minus_y"), t)
        n = cfg.n
        pair = OpPair(r.hermitian(n), r.hermitian(n))
        res = commutator_repr(phi, pair, r.complex_normal((n, n))).residual
        hh = helton_howe_lhs(library("sin_cos"), library("cos_sin"),
                             almost_commuting_pair(n, 1e-3, r), besov_range=None)
        rep.records.append({"trial": t, "f": phi.name, "residual": res, "trace": hh.residual, "ratio": hh.ratio})
        rep.check(res <= tol, f"trial {t}: commutator residual {res:.3g} > {tol:g}")
        rep.check(hh.residual <= ttol, f"trial {t}: commutator trace {hh.residual:.3g} > {ttol:g}")


def _counterexample(cfg, rng, rep):
    p = 4.0 if cfg.p is None else cfg.p
    tol = cfg.tol("residual", 1e-8)
    ratios = []
    for N in cfg.Ns:
        r = cx.counterexample_norms(cx.build_counterexample(N), p)
        ratios.append(r.ratio)
        rep.records.append({"N": N, "p": p, "pert_norm": r.rhs_norm, "diff_norm": r.lhs_norm, "ratio": r.ratio,
                            "residual": r.residual})
        rep.check(r.residual <= tol, f"N={N}: counterexample norms off by {r.residual:.3g}")
    d = np.diff(ratios)
    if p > 2:
        rep.check(bool(np.all(d > 0)), "ratio is not strictly increasing in N for p > 2")
    elif p == 2:
        rep.check(bool(np.all(np.abs(np.array(ratios) - 1) <= tol)), "ratio is not 1 at p = 2")
    else:
        rep.check(bool(np.all(d <= tol)), "ratio increases in N for p < 2")


def _abs_power(alpha: float) -> ScalarFn:
    return ScalarFn(lambda x: np.abs(np.asarray(x, dtype=float)) ** alpha, name=f"|x|^{alpha:g}")


def _zero_eigen(A: np.ndarray) -> np.ndarray:
    """Shift A so that its eigenvalue closest to 0 becomes exactly 0 (worst case for |x|^alpha)."""
    lam = hermitian_eig(A).eigenvalues
    return A - lam[np.argmin(np.abs(lam))] * np.eye(A.shape[0])


HOLDER_SCALES = (1e-4, 1e-3, 1e-2, 1e-1, 1.0)


def _holder_ratios(alpha, A, K):
    f = _abs_power(alpha)
    FA = mat_fun(f, A)
    return [op_norm(FA - mat_fun(f, A + s * K)) / s**alpha for s in HOLDER_SCALES]


def _holder(cfg, rng, rep):
    alpha = 0.5 if cfg.alpha is None else cfg.alpha
    growth = cfg.tol("growth", 2.0)
    rows = []
    for t in range(cfg.trials):
        r = rng.substream(t)
        A = _zero_eigen(r.hermitian(cfg.n))
        K = r.hermitian(cfg.n)
        K = K / op_norm(K)
        ratios = _holder_ratios(alpha, A, K)
        rows.append(ratios)
        rep.records.append({"trial": t, "ratios": ratios, "ratio": max(ratios)})
    rows = np.array(rows)
    sup = rows.max(axis=0)
    rep.aggregate["sup_by_scale"] = {f"{s:g}": float(v) for s, v in zip(HOLDER_SCALES, sup)}
    trend = {}
    for a in (0.5, 0.9, 0.99):
        vals = []
        for t in range(min(cfg.trials, 10)):
            r = rng.substream(t)
            A = _zero_eigen(r.hermitian(cfg.n))
            K = r.hermitian(cfg.n)
            vals.append(max(_holder_ratios(a, A, K / op_norm(K))))
        trend[f"{a:g}"] = float(max(vals))
    rep.aggregate["alpha_trend"] = trend
    rep.check(bool(np.all(np.isfinite(sup))), "non-finite Holder ratio")
    rep.check(sup[-1] <= growth * sup[0],
              f"Holder ratio grows across the sweep: {sup[-1]:.4g} > {growth:g} x {sup[0]:.4g}")


def _singular_decay(cfg, rng, rep):
    alpha = 0.5 if cfg.alpha is None else cfg.alpha
    p = 2.0 if cfg.p is None else cfg.p
    spread = cfg.tol("spread", 10.0)
    f = _abs_power(alpha)
    seminorm = 1.0  # Holder seminorm of |x|^alpha
    consts = []
    for t in range(cfg.trials):
        r = rng.substream(t)
        A = _zero_eigen(r.hermitian(cfg.n))
        B = A + 0.1 * r.hermitian(cfg.n)
        s = singular_values(mat_fun(f, A) - mat_fun(f, B))
        weights = (1.0 + np.arange(s.size)) ** (alpha / p)
        c = float(np.max(s * weights) / (seminorm * schatten_norm(A - B, p) ** alpha))
        consts.append(c)
        rep.records.append({"trial": t, "constant": c})
    med = float(np.median(consts))
    rep.aggregate["median_constant"] = med
    rep.check(bool(np.all(np.isfinite(consts))), "non-finite decay constant")
    rep.check(max(consts) <= spread * med, f"decay constant spread {max(consts) / med:.3g} > {spread:g}")


def _besov(cfg, rng, rep):
    s = np.linspace(0.6, 40.0, 1000)
    pu = float(np.abs(sum(w(s / 2.0**n) for n in range(-2, 7)) - 1.0).max())
    rep.aggregate["partition_of_unity_error"] = pu
    rep.check(pu <= cfg.tol("partition", 1e-10), f"partition of unity error {pu:.3g}")
    name = cfg.f_name or "sin"
    f = get_function(name, alpha=cfg.alpha or 0.5)
    if f.arity != 1:
        raise ConfigError("besov-norm needs a function of one variable")
    n_range = (-3, 3)
    if name == "sin":
        smp = sample_function(f, 0.0, 2 * np.pi / 512, 512 * 8)  # 8 full periods on 4096 points
        dec = lp_decompose(smp, n_range, periodic=True)
        err = float(np.abs(dec.pieces[0] - smp.values).max())
        rep.aggregate["single_piece_error"] = err
        rep.check(err <= cfg.tol("piece", 1e-6), f"sin is not a single Littlewood-Paley piece: {err:.3g}")
    else:
        smp = sample_function(f, -20.0, np.pi / 32, int(40 / (np.pi / 32)) + 1)
        dec = lp_decompose(smp, n_range, periodic=False)
    recon = float(np.linalg.norm(dec.reconstruct() - smp.values) / max(np.linalg.norm(smp.values), 1e-300))
    rep.check(recon <= cfg.tol("reconstruction", 1e-6), f"reconstruction error {recon:.3g}")
    for n in range(n_range[0], n_range[1] + 1):
        rep.records.append({"n": n, "sup_norm": dec.sup_norms[n], "weighted": 2.0**n * dec.sup_norms[n]})
    rep.aggregate["besov_norm"] = besov_norm(dec, 1.0, np.inf, 1.0, n_range)
    rep.aggregate["n_range"] = list(n_range)


SUITES: Dict[str, Callable] = {
    "doi-check": _doi_check,
    "fundamental": _fundamental,
    "moi-check": _moi_check,
    "derivative-check": _derivative_check,
    "difference-check": _difference_check,
    "krein": _krein,
    "koplienko": _koplienko,
    "pair-lipschitz": _pair_lipschitz,
    "commutator": _commutator,
    "counterexample": _counterexample,
    "holder": _holder,
    "singular-decay": _singular_decay,
    "besov-norm": _besov,
}


def run_suite(cfg: ExperimentConfig) -> SuiteReport:
    """Run one suite; numerical errors abort it and leave a partial report."""
    rep = SuiteReport(cfg.echo())
    start = time.perf_counter()
    log.info("running %s (n=%d, trials=%d, seed=%d)", cfg.suite, cfg.n, cfg.trials, cfg.seed)
    try:
        SUITES[cfg.suite](cfg, CounterRNG(cfg.seed), rep)
    except ConfigError:
        raise
    except (OpintError, FloatingPointError, np.linalg.LinAlgError) as exc:
        rep.aborted = f"{type(exc).__name__}: {exc}"
        log.error("suite aborted: %s", rep.aborted)
    rep.summarize()
    rep.wall_time = time.perf_counter() - start
    return rep


def holder_experiment(cfg: ExperimentConfig) -> SuiteReport:
    return run_suite(ExperimentConfig(**{**_fields(cfg), "suite": "holder"}))


def singular_decay_experiment(cfg: ExperimentConfig) -> SuiteReport:
    return run_suite(ExperimentConfig(**{**_fields(cfg), "suite": "singular-decay"}))


def _fields(cfg: ExperimentConfig) -> dict:
    return {k: getattr(cfg, k) for k in cfg.__dataclass_fields__}
