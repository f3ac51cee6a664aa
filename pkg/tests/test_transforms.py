import math

import numpy as np
import pytest
from scipy import linalg

from rcpt.errors import InvalidDimension, InvalidSpec, UnsupportedMultibath, WrongStatistics
from rcpt.models import ChainSpec, GsbSpec, NesbSpec, chain_hamiltonian, gap_ratio, gsb, nesb, sigma_theta, spin_chain
from rcpt.operators import OperatorMatrix, annihilation, identity, kron, pauli
from rcpt.spectral import Bath, Brownian, OhmicExp
from rcpt.transforms import (OpenSystemModel, build_effective_model, build_rc_model, canonical_representation,
                             effective_hamiltonian_series, effective_system_hamiltonian, iterate_rcpt,
                             polaron_dress, rc_block_matrix_element)

sx, sz = pauli("x"), pauli("z")


def lowest_gap(H):
    e = np.linalg.eigvalsh(np.asarray(H))
    return e[1] - e[0]


def test_representation_aliases():
    assert canonical_representation("bmr") == "original"
    assert canonical_representation("rc") == "rc-extended"
    assert canonical_representation("eff") == "effective"
    with pytest.raises(InvalidSpec):
        canonical_representation("polaron")


# dressed Hamiltonian

def test_dressing_damps_offdiagonal():
    # lambda / Omega = 1/2, eigenvalue gap of S is 2: factor exp(-1/2)
    H = effective_system_hamiltonian(sx, sz, 1.0, 2.0)
    assert np.asarray(H)[0, 1].real == pytest.approx(0.606531, abs=5e-7)
    assert np.asarray(H)[0, 1].real == pytest.approx(math.exp(-0.5), rel=1e-14)
    assert np.allclose(np.diag(np.asarray(H)), 0)


def test_dressing_tilted_coupling():
    delta, theta, lam, om = 1.3, math.pi / 4, 2.0, 5.0
    H = effective_system_hamiltonian(delta * sz, sigma_theta(theta), lam, om)
    perp = math.cos(theta) * sx - math.sin(theta) * sz
    expected = delta * (math.cos(theta) * sigma_theta(theta)
                        - math.sin(theta) * math.exp(-2 * lam**2 / om**2) * perp)
    assert H.allclose(expected, atol=1e-13)
    assert lowest_gap(H) == pytest.approx(2 * delta * gap_ratio(theta, lam, om), rel=1e-13)


def test_dressing_hermitian(rng):
    from tests.conftest import random_hermitian
    H, S = random_hermitian(rng, 4), random_hermitian(rng, 4)
    out = effective_system_hamiltonian(H, S, 0.7, 1.1)
    assert out.is_hermitian(1e-14)


def test_dressing_matches_power_series(rng):
    from tests.conftest import random_hermitian
    H = random_hermitian(rng, 3)
    S = random_hermitian(rng, 3)
    S = S / np.abs(np.linalg.eigvalsh(np.asarray(S))).max()
    closed = effective_system_hamiltonian(H, S, 0.8, 1.0)
    series = effective_hamiltonian_series(H, S, 0.8, 1.0, n_terms=60)
    assert np.max(np.abs(np.asarray(closed) - np.asarray(series))) <= 1e-10


def test_dressing_commuting_is_identity():
    H = 0.4 * sz + 0.1 * identity(2)
    assert effective_system_hamiltonian(H, sz, 3.0, 2.0).allclose(H, atol=1e-14)


def test_polaron_dress_non_hermitian():
    sm = OperatorMatrix(np.array([[0, 1], [0, 0]]))
    out = polaron_dress(sm, sz, 1.0, 2.0)
    assert np.asarray(out)[0, 1] == pytest.approx(math.exp(-0.5))


# RC Fock blocks

def test_block_00_is_effective(rng):
    from tests.conftest import random_hermitian
    H, S = random_hermitian(rng, 3), random_hermitian(rng, 3)
    b00 = rc_block_matrix_element(H, S, 0.6, 1.5, 0, 0)
    assert b00.allclose(effective_system_hamiltonian(H, S, 0.6, 1.5), atol=1e-12)


def test_blocks_vanish_without_coupling(rng):
    from tests.conftest import random_hermitian
    H, S = random_hermitian(rng, 2), random_hermitian(rng, 2)
    assert np.allclose(np.asarray(rc_block_matrix_element(H, S, 0.0, 1.0, 0, 2)), 0, atol=1e-15)
    assert rc_block_matrix_element(H, S, 0.0, 1.0, 1, 1).allclose(H, atol=1e-14)


@pytest.mark.parametrize("k,p", [(0, 1), (1, 0), (1, 2), (2, 2)])
def test_block_matches_truncated_unitary(k, p):
    lam, om, M = 0.9, 1.4, 60
    H = 0.5 * sz + 0.3 * sx
    S = sigma_theta(0.6)
    a = np.asarray(annihilation(M))
    gen = (lam / om) * np.kron(np.asarray(S), a.conj().T - a)
    U = linalg.expm(gen)
    big = U @ np.kron(np.asarray(H), np.eye(M)) @ U.conj().T
    oracle = big.reshape(2, M, 2, M)[:, k, :, p]
    block = rc_block_matrix_element(H, S, lam, om, k, p)
    assert np.max(np.abs(np.asarray(block) - oracle)) <= 1e-10


def test_block_rejects_negative_index():
    with pytest.raises(InvalidSpec):
        rc_block_matrix_element(sz, sx, 1.0, 1.0, -1, 0)


# RC-extended models

def gsb_model(theta, lam, om=10.0, delta=1.0, T=1.0):
    return gsb(GsbSpec(delta, theta, Brownian(lam, om, 0.01, 1000.0), T))


def test_rc_without_coupling_has_product_spectrum():
    ext = build_rc_model(gsb_model(0.5, 0.0), 0, 4)
    expected = np.sort([e + n * 10.0 for e in (-1.0, 1.0) for n in range(4)])
    assert np.allclose(np.linalg.eigvalsh(np.asarray(ext.hamiltonian)), expected, atol=1e-12)


@pytest.mark.parametrize("lam", [1.0, 5.0, 10.0])
def test_parallel_coupling_keeps_gap(lam):
    ext = build_rc_model(gsb_model(0.0, lam), 0, 60)
    assert lowest_gap(ext.hamiltonian) == pytest.approx(2.0, abs=1e-6)


def test_perpendicular_coupling_gap_ratio():
    lam, om = 5.0, 10.0
    ext = build_rc_model(gsb_model(math.pi / 2, lam, om=om), 0, 30)
    ratio = lowest_gap(ext.hamiltonian) / 2.0
    assert ratio == pytest.approx(gap_ratio(math.pi / 2, lam, om), rel=0.01)


def test_rc_model_structure():
    ext = build_rc_model(gsb_model(0.3, 2.0), 0, 5)
    assert ext.dim == 10 and ext.system_dim == 2
    assert ext.representation == "rc-extended"
    assert ext.rc_meta[0].levels == 5 and ext.rc_meta[0].coupling == 2.0
    assert ext.lift(sz).dim == 10


def test_rc_model_rejects_small_truncation():
    with pytest.raises(InvalidDimension):
        build_rc_model(gsb_model(0.3, 2.0), 0, 1)


def test_rc_model_rejects_lead():
    lead = Bath("fermionic", 1.0, np.array([[0, 1], [0, 0]]), hybridization=0.1, chemical_potential=0.0)
    model = OpenSystemModel(sz, (lead,))
    with pytest.raises(WrongStatistics):
        build_rc_model(model, 0, 4)


# effective models

def test_effective_exponents_add_over_baths():
    spec = NesbSpec(1.0, Brownian(2.0, 10.0, 0.01), Brownian(3.0, 12.0, 0.01), 1.0, 0.5)
    eff = nesb(spec, "effective")
    factor = math.exp(-2 * 4.0 / 100 - 2 * 9.0 / 144)
    assert eff.hamiltonian.allclose(factor * sz, atol=1e-14)
    # each bath keeps its coupling operator, density scaled by (2 lambda / Omega)^2
    assert eff.baths[0].coupling.allclose(sx)
    assert eff.baths[1].spectral(3.0) == pytest.approx((2 * 3 / 12) ** 2 * 0.01 * 3.0, rel=1e-12)


def test_effective_chain_keeps_parallel_exchange():
    b = Brownian(2.0, 10.0, 0.01)
    spec = ChainSpec((1.0, 1.0), 0.3, 0.2, 0.0, (b, b), (1.0, 0.5))
    eff = spin_chain(spec, "effective")
    x2 = 2 * 4.0 / 100
    expected = (math.exp(-x2) * chain_hamiltonian((1.0, 1.0), 0, 0, 0)
                + chain_hamiltonian((0, 0), 0.3, 0, 0)
                + math.exp(-2 * x2) * chain_hamiltonian((0, 0), 0, 0.2, 0))
    assert eff.hamiltonian.allclose(expected, atol=1e-13)


def test_effective_rejects_noncommuting_baths():
    b = Brownian(1.0, 10.0, 0.01)
    baths = (Bath("bosonic", 1.0, sx, spectral=b), Bath("bosonic", 1.0, sz, spectral=b))
    with pytest.raises(UnsupportedMultibath):
        build_effective_model(OpenSystemModel(sz, baths), [0, 1])


def test_effective_spectrum_check_small_for_fast_rc():
    model = gsb_model(math.pi / 4, 5.0, om=100.0)
    eff = build_effective_model(model, [0], m_check=20)
    assert eff.diagnostics["spectrum_check"] < 0.02


# iterated projection

def ohmic_model():
    return OpenSystemModel(sz, (Bath("bosonic", 1.0, sx, spectral=OhmicExp(0.05, 10.0)),))


def test_single_round_equals_effective():
    one = iterate_rcpt(ohmic_model(), 0, 1)
    eff = build_effective_model(ohmic_model(), [0])
    assert one.hamiltonian.allclose(eff.hamiltonian, atol=1e-14)
    rec = one.rc_meta[0]
    assert one.diagnostics["coupling_prefactor"] == pytest.approx(2 * rec.coupling / rec.frequency)


def test_two_rounds_compose():
    two = iterate_rcpt(ohmic_model(), 0, 2)
    r1, r2 = two.rc_meta
    H = effective_system_hamiltonian(sz, sx, r1.coupling, r1.frequency)
    H = effective_system_hamiltonian(H, sx, r2.coupling, r2.frequency)
    assert two.hamiltonian.allclose(H, atol=1e-14)
    assert two.diagnostics["coupling_prefactor"] == pytest.approx(
        4 * r1.coupling * r2.coupling / (r1.frequency * r2.frequency), rel=1e-14)


def test_iteration_validates_rounds():
    with pytest.raises(InvalidSpec):
        iterate_rcpt(ohmic_model(), 0, 0)


def test_two_rounds_on_brownian_input():
    # the first-round residual is g w exp(-w/cutoff), whose moments fix the second RC
    lam, om, g, cut = 2.0, 10.0, 0.0071, 50.0
    model = OpenSystemModel(sz, (Bath("bosonic", 1.0, sx, spectral=Brownian(lam, om, g, cut)),))
    two = iterate_rcpt(model, 0, 2)
    r1, r2 = two.rc_meta
    assert (r1.coupling, r1.frequency) == (lam, om)
    assert r2.frequency == pytest.approx(math.sqrt(12) * cut, rel=1e-3)
    scaled = (2 * lam / om) ** 2 * g
    assert r2.coupling == pytest.approx(math.sqrt(2 * scaled * cut**3 / r2.frequency), rel=1e-3)
