import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from eitcav import DomainError
from eitcav.oracles import OracleReport, oracle_qnd_zero_freq, oracle_sbest, oracle_steady, oracle_two_photon_drift


def test_steady_below_fold():
    o = oracle_steady(0.95)
    assert o.eta == pytest.approx(0.312250, abs=1e-6)
    assert o.solutions[0] == pytest.approx((0.623319, 0.326681), abs=1e-6)
    assert o.solutions[1] == o.solutions[0][::-1]


def test_steady_fold_and_above():
    assert oracle_steady(1.0).solutions == ((0.5, 0.5),)
    hi, lo = oracle_steady(2.0).solutions
    assert hi[0] == pytest.approx(1.866025, abs=1e-6)
    assert lo[0] == pytest.approx(0.133975, abs=1e-6)


@given(st.floats(0.01, 0.999))
def test_steady_sum_rules(Y):
    (I1, I2), _ = oracle_steady(Y).solutions
    assert I1 + I2 == pytest.approx(Y, abs=1e-12)
    assert I1 * I2 == pytest.approx(Y ** 4 / 4, abs=1e-12)


def test_sbest_values():
    assert oracle_sbest(0.5, 0.0) == 0.0
    assert oracle_sbest(0.685078, 0.0) == pytest.approx(0.024391, abs=1e-6)
    assert oracle_sbest(0.5, 2.0) == pytest.approx(0.5, abs=1e-15)


@given(st.floats(1e-3, 1e3), st.floats(0, 100))
def test_sbest_range(I, om):
    v = oracle_sbest(I, om)
    assert 0 <= v < 1 or (I == 0.5 and om == 0)


def test_qnd_values():
    s_int, s_phase, v = oracle_qnd_zero_freq(0.95)
    assert s_int == 1
    assert s_phase == pytest.approx(38.025641, abs=1e-6)
    assert v == pytest.approx(0.026298, abs=1e-6)
    # decoupled and fold limits
    assert oracle_qnd_zero_freq(1e-8)[1:] == pytest.approx((1.0, 1.0), abs=1e-12)
    assert oracle_qnd_zero_freq(1 - 1e-12)[2] < 1e-11


def test_qnd_monotone():
    Ys = np.linspace(0.01, 0.99, 99)
    V = np.array([oracle_qnd_zero_freq(Y)[2] for Y in Ys])
    S = np.array([oracle_qnd_zero_freq(Y)[1] for Y in Ys])
    assert np.all(np.diff(V) < 0)  # increasing in eta^2 = 1 - Y^2
    assert np.all(np.diff(S) > 0)  # phase noise grows towards the fold


def test_two_photon_drift():
    assert np.sort(np.linalg.eigvals(oracle_two_photon_drift(0.5)).real) == pytest.approx([-2, 0], abs=1e-15)
    ev = np.sort(np.linalg.eigvals(oracle_two_photon_drift(0.685078)).real)
    assert ev == pytest.approx([-1.729843, -0.270157], abs=1e-6)
    assert np.linalg.eigvals(oracle_two_photon_drift(0.364922)).real.max() == pytest.approx(0.370156, abs=1e-6)  # -1 + 1/(2 * 0.364922)
    np.testing.assert_allclose(oracle_two_photon_drift(0.5, 2), oracle_two_photon_drift(0.5, 1).conj())


@pytest.mark.parametrize("call", [
    lambda: oracle_steady(0.0), lambda: oracle_sbest(0.0, 1.0), lambda: oracle_qnd_zero_freq(1.0),
    lambda: oracle_qnd_zero_freq(0.0), lambda: oracle_two_photon_drift(-1.0),
])
def test_domains(call):
    with pytest.raises(DomainError):
        call()


def test_report_deviations():
    r = OracleReport("q", "f", 2.0, 2.5)
    assert r.abs_dev == 0.5 and r.rel_dev == 0.25
    assert math.isfinite(OracleReport("z", "f", 0.0, 1e-3).rel_dev)
