import math
from types import SimpleNamespace

import numpy as np
import pytest

from rcpt.errors import InvalidAngle, InvalidSpec, UndefinedEfficiency
from rcpt.models import (ChainSpec, DqdSpec, GsbSpec, QarSpec, chain_magnetization, cooling_boundary,
                         cooling_window, dqd, dqd_hybridization_factor, dqd_lead_operators, dqd_number_operator,
                         dqd_renormalized_levels, effective_splitting, gap_ratio, gsb, qar,
                         qar_renormalized_levels, spin_chain, stopping_voltage, thermoelectric_efficiency,
                         ultrastrong_efficiency, weak_coupling_efficiency)
from rcpt.operators import pauli
from rcpt.redfield import reduced_state, solve
from rcpt.spectral import Brownian, fermi
from rcpt.transforms import polaron_dress

BETAS = (4.0, 2.0, 2.0 / 3.0)  # T = 0.25, 0.5, 1.5


def brownian(lam, om=10.0):
    return Brownian(lam, om, 0.01, 1000.0)


# representations

def test_gsb_representations():
    spec = GsbSpec(1.0, 0.4, brownian(2.0), 1.0)
    assert gsb(spec).dim == 2
    rc = gsb(spec, "rc", levels=7)
    assert rc.dim == 14 and rc.representation == "rc-extended"
    eff = gsb(spec, "eff")
    assert eff.dim == 2 and eff.representation == "effective"
    with pytest.raises(InvalidSpec):
        gsb(spec, "exact")


def test_gsb_effective_gap():
    lam, om, theta = 3.0, 10.0, 0.9
    eff = gsb(GsbSpec(1.0, theta, brownian(lam, om), 1.0), "eff")
    e = np.linalg.eigvalsh(np.asarray(eff.hamiltonian))
    assert e[1] - e[0] == pytest.approx(2 * gap_ratio(theta, lam, om), rel=1e-13)
    assert effective_splitting(1.0, theta, lam, om) == pytest.approx(gap_ratio(theta, lam, om), rel=1e-13)


def test_angle_validation():
    with pytest.raises(InvalidAngle):
        GsbSpec(1.0, 2.0, brownian(1.0), 1.0)
    with pytest.raises(InvalidAngle):
        effective_splitting(1.0, -0.5, 1.0, 10.0)


# refrigerator

def test_qar_renormalized_levels_match_effective_model():
    lam, om, delta = 4.0, 10.0, 0.3
    eff = qar(QarSpec(delta, brownian(lam, om), 0.25, 0.5, 1.5), "eff")
    e = np.linalg.eigvalsh(np.asarray(eff.hamiltonian))
    assert np.allclose(e, qar_renormalized_levels(delta, lam, om), atol=1e-14)


def test_cooling_boundary_examples():
    assert cooling_boundary(0.0, 10.0, *BETAS) == pytest.approx(0.4, rel=1e-14)
    assert cooling_boundary(5.0, 10.0, *BETAS) == pytest.approx(0.584, abs=5e-4)
    assert cooling_boundary(5.0, 10.0, *BETAS) == pytest.approx(0.4 / (0.2 + 0.8 * math.exp(-0.5)), rel=1e-14)


@pytest.mark.parametrize("lam", [0.0, 3.0, 7.0])
def test_cooling_boundary_is_window_edge(lam):
    d = cooling_boundary(lam, 10.0, *BETAS)
    assert cooling_window(d * (1 - 1e-9), lam, 10.0, *BETAS)
    assert not cooling_window(d * (1 + 1e-9), lam, 10.0, *BETAS)


def test_qar_validation():
    with pytest.raises(InvalidSpec):
        QarSpec(0.3, brownian(1.0), 0.5, 0.25, 1.5)
    with pytest.raises(InvalidSpec):
        QarSpec(1.2, brownian(1.0), 0.25, 0.5, 1.5)
    with pytest.raises(InvalidSpec):
        cooling_window(0.3, 1.0, 10.0, 2.0, 4.0, 1.0)


def test_qar_weak_coupling_cools_inside_window():
    res = solve(qar(QarSpec(0.2, brownian(0.1), 0.25, 0.5, 1.5), "bmr"))
    j_cold, j_hot, j_work = res.heat_currents
    assert j_cold > 0 and j_work > 0 and j_hot < 0
    assert j_cold + j_hot + j_work == pytest.approx(0.0, abs=1e-15)


# double dot

def dqd_spec(lam, mu_r=-0.2, U=1000.0):
    return DqdSpec(0.0, 2.0, U, 0.1, 0.1, 10.0, 1.0, -0.3, mu_r, Brownian(lam, 100.0, 1 / (2 * np.pi), 1000.0))


def test_dqd_renormalized_levels_examples():
    el, er = dqd_renormalized_levels(0.0, 2.0, 1.0, 1.0)
    assert el == pytest.approx(0.8647, abs=5e-5)
    assert er == pytest.approx(1.1353, abs=5e-5)
    assert el + er == pytest.approx(2.0, rel=1e-14)


def test_dqd_effective_levels_and_tunnelling():
    lam, om = 60.0, 100.0
    eff = dqd(dqd_spec(lam), "eff")
    H = np.asarray(eff.hamiltonian)
    assert np.allclose(np.diag(H)[1:3], dqd_renormalized_levels(0.0, 2.0, lam, om), atol=1e-12)
    # squared tunnelling element into the empty state
    bare, _ = dqd_lead_operators()
    dressed = np.asarray(eff.baths[0].coupling)
    ratio = np.sum(np.abs(dressed[0]) ** 2) / np.sum(np.abs(np.asarray(bare)[0]) ** 2)
    assert ratio == pytest.approx(dqd_hybridization_factor(lam, om), rel=1e-12)


def test_dqd_hybridization_factor():
    assert dqd_hybridization_factor(100.0, 100.0) == pytest.approx(math.exp(-1))
    S = np.diag([0.0, 1.0, -1.0, 0.0])
    assert np.abs(np.asarray(polaron_dress(np.eye(4), S, 5.0, 1.0)) - np.eye(4)).max() < 1e-15


def test_dqd_without_phonons_matches_across_representations():
    a = solve(dqd(dqd_spec(0.0)), number_operator=dqd_number_operator())
    b = solve(dqd(dqd_spec(0.0), "eff"), number_operator=dqd_number_operator())
    assert np.max(np.abs(a.rho_lab - b.rho_lab)) <= 1e-10
    assert a.charge_currents[0] == pytest.approx(b.charge_currents[0], abs=1e-12)


def test_dqd_warns_on_strong_leads():
    spec = DqdSpec(0.0, 2.0, 1000.0, 0.5, 0.1, 1.0, 1.0, 0.0, 0.0, brownian(1.0))
    with pytest.warns(RuntimeWarning):
        dqd(spec)


def test_efficiency_formulas():
    fake = SimpleNamespace(charge_currents=(0.01, -0.01, None), heat_currents=(0.004, -0.002, 0.0))
    mu_l, mu_r = -0.3, -0.1
    power = 0.01 * 0.2
    assert thermoelectric_efficiency(fake, mu_l, mu_r) == pytest.approx(power / (0.004 + 0.3 * 0.01))
    assert weak_coupling_efficiency(0.1, 0.0, -0.3) == pytest.approx(1 / 3)
    assert ultrastrong_efficiency(0.1, 0.0, 2.0, -0.3) == pytest.approx(0.1 / 1.3)
    with pytest.raises(UndefinedEfficiency):
        thermoelectric_efficiency(fake, mu_l, -0.5)


def test_stopping_voltage_balances_occupations():
    eps, mu_l, t_l, t_r = 0.0, -0.3, 10.0, 1.0
    v = stopping_voltage(eps, mu_l, t_l, t_r)
    assert fermi(eps, mu_l, t_l) == pytest.approx(fermi(eps, mu_l + v, t_r), rel=1e-14)
    assert v == pytest.approx(0.27, rel=1e-14)


def test_dqd_efficiency_below_carnot():
    res = solve(dqd(dqd_spec(1.0, mu_r=-0.15)), number_operator=dqd_number_operator())
    eta = thermoelectric_efficiency(res, -0.3, -0.15)
    assert 0 < eta < 1 - 1.0 / 10.0


# spin chain

def chain_spec(lam, jy=0.2):
    b = Brownian(lam, 10.0, 0.0071, 1000.0)
    return ChainSpec((1.0, 1.0), 0.2, jy, 0.0, (b, b), (0.5, 1.0))


def test_chain_heat_flows_from_hot_end():
    res = solve(spin_chain(chain_spec(1.0)))
    j_cold, j_hot = res.heat_currents
    assert j_hot > 0 and j_cold == pytest.approx(-j_hot, rel=1e-10)


def test_chain_rc_converges_in_levels():
    j = [solve(spin_chain(chain_spec(2.0), "rc", levels=M)).heat_currents[0] for M in (4, 8)]
    assert j[1] == pytest.approx(j[0], rel=0.02)


def test_chain_magnetization_of_reduced_state():
    res = solve(spin_chain(chain_spec(1.0), "rc", levels=4))
    rho = reduced_state(res)
    assert rho.shape == (4, 4)
    m = np.real(np.trace(rho @ np.asarray(chain_magnetization(2))))
    assert -2 < m < 0  # both sites lean towards spin down, the lower Zeeman level


def test_chain_validation():
    b = brownian(1.0)
    with pytest.raises(InvalidSpec):
        ChainSpec((1.0,), 0.2, 0.2, 0.0, (b,), (1.0,))
    with pytest.raises(InvalidSpec):
        ChainSpec((1.0, 1.0), 0.2, 0.2, 0.0, (b,), (1.0, 1.0))
