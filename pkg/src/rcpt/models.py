"""Application models and their analytic strong-coupling predictions.

Five models, each available in the ``original``, ``rc-extended`` and
``effective`` representations:

* generalized spin-boson (one bath, coupling along an angle theta),
* nonequilibrium spin-boson (two sigma_x baths),
* three-level quantum absorption refrigerator (cold bath treated strongly),
* double quantum dot with leads and a phonon bath,
* Heisenberg spin chain with one sigma_x bath per site.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidAngle, InvalidSpec, UndefinedEfficiency
from .operators import OperatorMatrix, basis_projector, identity, kron, pauli
from .spectral import Bath, Brownian, OhmicExp
from .transforms import (OpenSystemModel, build_effective_model, build_rc_extended,
                         canonical_representation, choose_rc_levels, effective_system_hamiltonian)


def _represent(model: OpenSystemModel, rc_baths: Sequence[int], representation: str,
               levels=None, start=None) -> OpenSystemModel:
    rep = canonical_representation(representation)
    if rep == "original":
        return model
    if rep == "effective":
        return build_effective_model(model, rc_baths)
    if levels is None:
        levels = choose_rc_levels(model, rc_baths, start=start)
    return build_rc_extended(model, rc_baths, levels)


def _check_angle(theta):
    if not (-1e-12 <= theta <= np.pi / 2 + 1e-12):
        raise InvalidAngle(f"theta={theta} outside [0, pi/2]")


def sigma_theta(theta: float) -> OperatorMatrix:
    return math.cos(theta) * pauli("z") + math.sin(theta) * pauli("x")


# ---------------------------------------------------------------------------
# generalized spin-boson


@dataclass(frozen=True)
class GsbSpec:
    delta: float
    theta: float
    spectral: Brownian
    temperature: float

    def __post_init__(self):
        if self.delta <= 0:
            raise InvalidSpec("delta must be positive")
        _check_angle(self.theta)


def gsb(spec: GsbSpec, representation: str = "original", levels=None) -> OpenSystemModel:
    """H_s = delta sigma_z coupled through sigma_theta to a Brownian bath."""
    H = spec.delta * pauli("z")
    bath = Bath("bosonic", spec.temperature, sigma_theta(spec.theta), spectral=spec.spectral, name="bath")
    return _represent(OpenSystemModel(H, (bath,)), [0], representation, levels)


def effective_splitting(delta: float, theta: float, coupling: float, frequency: float) -> float:
    """Half the level gap of the dressed two-level Hamiltonian (the sigma coefficient)."""
    _check_angle(theta)
    H = effective_system_hamiltonian(delta * pauli("z"), sigma_theta(theta), coupling, frequency)
    e = np.linalg.eigvalsh(H.data)
    return 0.5 * float(e[1] - e[0])


def gap_ratio(theta: float, coupling: float, frequency: float) -> float:
    """Closed-form dressed gap over bare gap: sqrt(cos^2 + sin^2 exp(-4 lambda^2/Omega^2))."""
    _check_angle(theta)
    e4 = math.exp(-4 * coupling**2 / frequency**2)
    return math.sqrt(math.cos(theta) ** 2 + math.sin(theta) ** 2 * e4)


# ---------------------------------------------------------------------------
# nonequilibrium spin-boson


@dataclass(frozen=True)
class NesbSpec:
    delta: float
    left: Brownian
    right: Brownian
    t_left: float
    t_right: float


def nesb(spec: NesbSpec, representation: str = "original", levels=None) -> OpenSystemModel:
    H = spec.delta * pauli("z")
    sx = pauli("x")
    baths = (Bath("bosonic", spec.t_left, sx, spectral=spec.left, name="left"),
             Bath("bosonic", spec.t_right, sx, spectral=spec.right, name="right"))
    return _represent(OpenSystemModel(H, baths), [0, 1], representation, levels)


# ---------------------------------------------------------------------------
# quantum absorption refrigerator

QAR_BATHS = ("cold", "hot", "work")


@dataclass(frozen=True)
class QarSpec:
    delta: float
    cold: Brownian
    t_cold: float
    t_hot: float
    t_work: float
    hot_width: float = 0.0071
    work_width: float = 0.0071
    cutoff: float = 1000.0
    top: float = 1.0  # energy of the third level

    def __post_init__(self):
        if not (0 < self.t_cold < self.t_hot < self.t_work):
            raise InvalidSpec("QAR needs T_cold < T_hot < T_work")
        if not (0 <= self.delta < self.top):
            raise InvalidSpec("QAR needs 0 <= delta < top level")


def _transition(i, j, d=3):
    return basis_projector(d, i, j) + basis_projector(d, j, i)


def qar_hamiltonian(delta, top=1.0) -> OperatorMatrix:
    return OperatorMatrix(np.diag([0.0, delta, top]))


def qar(spec: QarSpec, representation: str = "original", levels=None) -> OpenSystemModel:
    """Baths in order (cold, hot, work); only the cold bath gets a reaction coordinate."""
    H = qar_hamiltonian(spec.delta, spec.top)
    baths = (
        Bath("bosonic", spec.t_cold, _transition(0, 1), spectral=spec.cold, name="cold"),
        Bath("bosonic", spec.t_hot, _transition(0, 2), spectral=OhmicExp(spec.hot_width, spec.cutoff), name="hot"),
        Bath("bosonic", spec.t_work, _transition(1, 2), spectral=OhmicExp(spec.work_width, spec.cutoff), name="work"),
    )
    return _represent(OpenSystemModel(H, baths), [0], representation, levels)


def qar_renormalized_levels(delta, coupling, frequency, top=1.0):
    e = math.exp(-2 * coupling**2 / frequency**2)
    return 0.5 * delta * (1 - e), 0.5 * delta * (1 + e), top


def cooling_ratio(beta_c, beta_h, beta_w) -> float:
    return (beta_h - beta_w) / (beta_c - beta_w)


def cooling_window(delta, coupling, frequency, beta_c, beta_h, beta_w) -> bool:
    """True when the dressed levels satisfy the refrigerator condition."""
    if not beta_c > beta_h > beta_w:
        raise InvalidSpec("need beta_c > beta_h > beta_w")
    e = math.exp(-2 * coupling**2 / frequency**2)
    lhs = delta * e / (1 - 0.5 * delta * (1 - e))
    return lhs <= cooling_ratio(beta_c, beta_h, beta_w)


def cooling_boundary(coupling, frequency, beta_c, beta_h, beta_w) -> float:
    """Largest delta inside the cooling window (closed-form root of the condition)."""
    e = math.exp(-2 * coupling**2 / frequency**2)
    r = cooling_ratio(beta_c, beta_h, beta_w)
    return r / (e + 0.5 * r * (1 - e))


# ---------------------------------------------------------------------------
# double quantum dot

DQD_BATHS = ("left", "right", "phonon")
G, L, R, D = range(4)


@dataclass(frozen=True)
class DqdSpec:
    eps_l: float
    eps_r: float
    U: float
    gamma_l: float
    gamma_r: float
    t_l: float
    t_r: float
    mu_l: float
    mu_r: float
    phonon: Brownian
    t_ph: float | None = None  # defaults to t_r

    @property
    def phonon_temperature(self) -> float:
        return self.t_r if self.t_ph is None else self.t_ph


def dqd_hamiltonian(eps_l, eps_r, U) -> OperatorMatrix:
    return OperatorMatrix(np.diag([0.0, eps_l, eps_r, eps_l + eps_r + U]))


def dqd_number_operator() -> OperatorMatrix:
    return OperatorMatrix(np.diag([0.0, 1.0, 1.0, 2.0]))


def dqd_lead_operators():
    """System operators removing an electron into the left and right leads."""
    P = lambda i, j: basis_projector(4, i, j)
    remove_left = -P(G, L) + P(R, D)
    remove_right = P(G, R) + P(L, D)
    return remove_left, remove_right


def dqd(spec: DqdSpec, representation: str = "original", levels=None) -> OpenSystemModel:
    """Baths in order (left lead, right lead, phonons); the phonon bath gets the RC."""
    for gam, t in ((spec.gamma_l, spec.t_l), (spec.gamma_r, spec.t_r)):
        if gam > 0.1 * t:
            warnings.warn(f"lead hybridization {gam} is not small against temperature {t}; "
                          "weak lead coupling is assumed", RuntimeWarning, stacklevel=2)
    H = dqd_hamiltonian(spec.eps_l, spec.eps_r, spec.U)
    a_left, a_right = dqd_lead_operators()
    S = basis_projector(4, L, R) + basis_projector(4, R, L)
    baths = (
        Bath("fermionic", spec.t_l, a_left, hybridization=spec.gamma_l, chemical_potential=spec.mu_l, name="left"),
        Bath("fermionic", spec.t_r, a_right, hybridization=spec.gamma_r, chemical_potential=spec.mu_r, name="right"),
        Bath("bosonic", spec.phonon_temperature, S, spectral=spec.phonon, name="phonon"),
    )
    return _represent(OpenSystemModel(H, baths), [2], representation, levels)


def dqd_renormalized_levels(eps_l, eps_r, coupling, frequency):
    """Dot energies after dressing by the phonon RC ground state."""
    x = coupling**2 / frequency**2
    el = (eps_l * math.cosh(x) + eps_r * math.sinh(x)) * math.exp(-x)
    er = (eps_r * math.cosh(x) + eps_l * math.sinh(x)) * math.exp(-x)
    return el, er


def dqd_hybridization_factor(coupling, frequency) -> float:
    """Suppression |h(lambda)|^2 / |h|^2 of the lead tunnelling rates."""
    return math.exp(-coupling**2 / frequency**2)


def thermoelectric_efficiency(result, mu_l, mu_r, hot_index: int = 0) -> float:
    """eta = P / j_q with P = j_e (mu_r - mu_l) and j_q = j_u - mu_l j_e at the hot lead."""
    j_e = result.charge_currents[hot_index]
    j_u = result.heat_currents[hot_index]
    if j_e is None:
        raise InvalidSpec("result has no charge current for the hot lead")
    power = j_e * (mu_r - mu_l)
    j_q = j_u - mu_l * j_e
    if not (power > 0 and j_q > 0):
        raise UndefinedEfficiency(f"not a generator: P={power:.3e}, Q={j_q:.3e}")
    return power / j_q


def weak_coupling_efficiency(voltage, eps_l, mu_l):
    return voltage / (eps_l - mu_l)


def ultrastrong_efficiency(voltage, eps_l, eps_r, mu_l):
    return voltage / (0.5 * (eps_l + eps_r) - mu_l)


def stopping_voltage(eps_l, mu_l, t_l, t_r):
    """Bias where the weak-coupling charge current vanishes."""
    beta_l, beta_r = 1 / t_l, 1 / t_r
    return (eps_l - mu_l) * (beta_r - beta_l) / beta_r


# ---------------------------------------------------------------------------
# Heisenberg chain


@dataclass(frozen=True)
class ChainSpec:
    deltas: tuple
    jx: float
    jy: float
    jz: float
    baths: tuple          # Brownian per site
    temperatures: tuple   # per site

    def __post_init__(self):
        n = len(self.deltas)
        if n < 2:
            raise InvalidSpec("chain needs at least two sites")
        if len(self.baths) != n or len(self.temperatures) != n:
            raise InvalidSpec("one bath and temperature per site required")

    @property
    def n_sites(self) -> int:
        return len(self.deltas)


def site_operator(op, site: int, n: int) -> OperatorMatrix:
    factors = [identity(2)] * n
    factors[site] = op
    return kron(*factors)


def chain_hamiltonian(deltas, jx, jy, jz) -> OperatorMatrix:
    n = len(deltas)
    sx, sy, sz = (pauli(c) for c in "xyz")
    H = sum((deltas[a] * site_operator(sz, a, n) for a in range(n)), OperatorMatrix(np.zeros((2**n, 2**n)), (2,) * n))
    for a in range(n - 1):
        for J, s in ((jx, sx), (jy, sy), (jz, sz)):
            if J:
                H = H + J * (site_operator(s, a, n) @ site_operator(s, a + 1, n))
    return H


def spin_chain(spec: ChainSpec, representation: str = "original", levels=None) -> OpenSystemModel:
    n = spec.n_sites
    H = chain_hamiltonian(spec.deltas, spec.jx, spec.jy, spec.jz)
    baths = tuple(Bath("bosonic", spec.temperatures[a], site_operator(pauli("x"), a, n),
                       spectral=spec.baths[a], name=f"site{a}") for a in range(n))
    return _represent(OpenSystemModel(H, baths), list(range(n)), representation, levels, start=6)


def chain_magnetization(n: int) -> OperatorMatrix:
    return sum((site_operator(pauli("z"), a, n) for a in range(n)), OperatorMatrix(np.zeros((2**n, 2**n)), (2,) * n))
