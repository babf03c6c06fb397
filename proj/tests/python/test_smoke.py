import math

import pytest

import stabex


def params_table1():
    return stabex.from_beta(1.2, -0.2, 0.2, -0.02)


def test_table1_first_point():
    values, info = stabex.cpdf_sup(params_table1(), 0.25, [0.0125, 0.025], eps=1e-12)
    assert abs(values[0] - 0.13205969881037) < 1e-9
    assert abs(values[1] - 0.238098430142687) < 1e-9
    assert info["method"] == "sinh"
    assert info["n_l"] > 0


def test_cauchy_closed_form():
    p = stabex.StableParams(1.0, 0.3, 0.3, 0.1)
    ys = [-2.0, 0.0, 0.07, 1.5]
    values, _ = stabex.cpdf_x(p, 0.7, ys, eps=1e-13)
    for y, v in zip(ys, values):
        want = 0.5 + math.atan((y - 0.07) / (0.3 * math.pi * 0.7)) / math.pi
        assert abs(v - want) < 1e-11


def test_psi_drift_term():
    p = stabex.StableParams(1.5, 0.5, 0.5, 0.25)
    q = stabex.StableParams(1.5, 0.5, 0.5, 0.0)
    assert abs(stabex.psi(p, 2.0) - stabex.psi(q, 2.0) - (-0.5j)) < 1e-15


def test_joint_below_marginal():
    p = params_table1()
    v = stabex.joint_cpdf(p, 0.25, 0.0, 0.0, -0.025, 0.05)
    s, _ = stabex.cpdf_sup(p, 0.25, [0.05])
    assert 0.0 <= v <= s[0]


def test_errors_map_to_python():
    slow = stabex.from_beta(0.2, -0.2, 0.2, 0.02)
    with pytest.raises(stabex.RegimeError):
        stabex.cpdf_sup(slow, 0.25, [0.05], method="sinh")
    with pytest.raises(stabex.DivergenceError):
        stabex.exchange(stabex.from_beta(0.8, 0.0, 1.0), 1.0, 0.0, 0.0, 1.2, 0.0)
    with pytest.raises(stabex.DomainError):
        stabex.cpdf_x(params_table1(), -1.0, [0.0])
    with pytest.raises(ValueError):
        stabex.StableParams(2.5, 0.5, 0.5)


def test_reference_tables_exposed():
    alpha, beta, T, a, rows = stabex.table_reference(7)
    assert (alpha, beta, T) == (1.2, -0.2, 0.25)
    assert len(rows) == 6 and len(rows[0][3]) == len(a) == 5
