import csv

import numpy as np
import pytest

from opint.counterex import (
    CSV_COLUMNS,
    build_counterexample,
    counterexample_norms,
    dft_unitary,
    scaled_family,
    sweep,
    write_sweep_csv,
)
from opint.noncomm import OpPair, pair_difference_repr


def test_dft_unitary():
    for N in (2, 5, 8):
        u = dft_unitary(N)
        assert np.allclose(u @ u.conj().T, np.eye(N), atol=1e-13)


def test_structure():
    inst = build_counterexample(4)
    assert np.allclose(inst.A1 - inst.A2, -np.eye(4))
    assert np.allclose(inst.B, inst.B.conj().T)
    assert np.allclose(np.linalg.eigvalsh(inst.B), [1, 2, 3, 4])
    assert np.allclose(inst.tau, np.sqrt(4) * inst.u.conj())


def test_function_on_lattice():
    inst = build_counterexample(4)
    for j in range(1, 5):
        for k in range(1, 5):
            assert inst.f(2.0 * j, float(k)) == pytest.approx(inst.tau[j - 1, k - 1], abs=1e-12)
            assert abs(inst.f(2.0 * j + 1, float(k))) <= 1e-12


@pytest.mark.parametrize("N", [4, 16])
@pytest.mark.parametrize("p", [1.0, 2.0, 4.0, np.inf])
def test_exact_norms(N, p):
    rep = counterexample_norms(build_counterexample(N), p)
    assert rep.rhs_norm == pytest.approx(1.0 if np.isinf(p) else N ** (1 / p), rel=1e-8)
    assert rep.lhs_norm == pytest.approx(np.sqrt(N), rel=1e-8)
    assert rep.residual <= 1e-8


def test_ratio_growth():
    rows = sweep([4, 16], [2.0, 4.0, np.inf])
    by = {(r["N"], r["p"]): r["ratio"] for r in rows}
    assert by[(4, 2.0)] == pytest.approx(by[(16, 2.0)])
    assert by[(16, 4.0)] > by[(4, 4.0)]
    assert by[(16, np.inf)] > by[(4, np.inf)]


def test_scaled_family_keeps_ratio():
    inst = build_counterexample(4)
    base = counterexample_norms(inst, np.inf).ratio
    for eps in (0.5, 0.1):
        rep = scaled_family(inst, eps)
        assert rep.ratio == pytest.approx(base, rel=1e-8)
        assert rep.rhs_norm == pytest.approx(eps)
    with pytest.raises(ValueError):
        scaled_family(inst, 0.0)


def test_pair_representation_on_counterexample():
    inst = build_counterexample(4)
    p1 = OpPair(inst.A1, inst.B, inst.E1, inst.EB)
    p2 = OpPair(inst.A2, inst.B, inst.E2, inst.EB)
    rep = pair_difference_repr(inst.f, p1, p2)
    assert rep.residual <= 1e-8
    assert rep.lhs_norm == pytest.approx(np.sqrt(4), rel=1e-8)


def test_csv(tmp_path):
    rows = sweep([4], [1.0, np.inf])
    path = tmp_path / "sweep.csv"
    write_sweep_csv(str(path), rows)
    with open(path) as fh:
        read = list(csv.DictReader(fh))
    assert tuple(read[0].keys()) == CSV_COLUMNS
    assert read[1]["p"] == "inf"
    assert float(read[0]["diff_norm"]) == pytest.approx(2.0)


def test_small_N_rejected():
    with pytest.raises(ValueError):
        build_counterexample(1)
