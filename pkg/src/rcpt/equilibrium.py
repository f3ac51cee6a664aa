"""Equilibrium states: Gibbs and mean-force Gibbs states of the spin-boson family."""

from __future__ import annotations

import math

import numpy as np

from .errors import InvalidSpec, TruncationFailure
from .models import _check_angle, sigma_theta
from .operators import (OperatorMatrix, annihilation, as_operator, eigensystem, identity, kron,
                        number, partial_trace, pauli)
from .transforms import effective_system_hamiltonian


def gibbs(H, beta: float) -> OperatorMatrix:
    """exp(-beta H)/Z via the eigendecomposition, shifted by the ground energy."""
    if not beta > 0:
        raise InvalidSpec("beta must be positive")
    H = as_operator(H)
    E, V = eigensystem(H)
    w = np.exp(-beta * (E - E[0]))
    w /= w.sum()
    V = V.data
    return OperatorMatrix((V * w) @ V.conj().T, H.dims)


def _rc_gibbs_reduced(H_s, S, coupling, frequency, beta, M):
    H_s, S = as_operator(H_s), as_operator(S)
    a = annihilation(M)
    H = (kron(H_s, identity(M)) + frequency * kron(identity(H_s.dim), number(M))
         + coupling * kron(S, a + a.dag()))
    rho = gibbs(H.with_dims((H_s.dim, M)), beta)
    return partial_trace(rho, [0]).with_dims(H_s.dims)


def mfgs_rc(H_s, S, coupling: float, frequency: float, beta: float, M: int | None = None,
            tol: float = 1e-10, max_levels: int = 320) -> OperatorMatrix:
    """Reduced Gibbs state of system plus reaction coordinate (no counter-term).

    With ``M=None`` the truncation doubles from ceil(10 max(1, T/Omega + lambda^2/Omega^2))
    until the reduced state changes by less than ``tol`` per element.
    """
    if M is not None:
        if M < 2:
            raise InvalidSpec("M must be >= 2")
        return _rc_gibbs_reduced(H_s, S, coupling, frequency, beta, M)
    M = math.ceil(10 * max(1.0, 1 / (beta * frequency) + coupling**2 / frequency**2))
    prev = _rc_gibbs_reduced(H_s, S, coupling, frequency, beta, M)
    while 2 * M <= max_levels:
        M *= 2
        cur = _rc_gibbs_reduced(H_s, S, coupling, frequency, beta, M)
        if np.abs(cur.data - prev.data).max() < tol:
            return cur
        prev = cur
    raise TruncationFailure(f"RC mean-force state not converged up to M={M}")


def _bloch_state(vec, strength):
    """(I - (v.sigma/|v|) tanh(strength))/2."""
    v = np.asarray(vec, dtype=float)
    nv = np.linalg.norm(v)
    n_sigma = sum(c * pauli(k).data for c, k in zip(v / nv, "xyz")) if nv > 0 else np.zeros((2, 2))
    return OperatorMatrix(0.5 * (np.eye(2) - n_sigma * math.tanh(strength)))


def gsb_mfgs_closed_form(delta, theta, coupling, frequency, beta) -> OperatorMatrix:
    """Gibbs state of the dressed spin-boson Hamiltonian in Bloch form."""
    _check_angle(theta)
    e2 = math.exp(-2 * coupling**2 / frequency**2)
    e4 = math.exp(-4 * coupling**2 / frequency**2)
    c2, s2 = math.cos(2 * theta), math.sin(2 * theta)
    v = ((1 - e2) * s2, 0.0, (1 + e2) + (1 - e2) * c2)
    norm = math.sqrt(max(2 * (1 + e4) + 2 * (1 - e4) * c2, 0.0))
    return _bloch_state(v, beta * delta * norm / 2)


def gsb_mfgs_effective(delta, theta, coupling, frequency, beta) -> OperatorMatrix:
    """Numerical Gibbs state of the dressed Hamiltonian (oracle for the closed form)."""
    H = effective_system_hamiltonian(delta * pauli("z"), sigma_theta(theta), coupling, frequency)
    return gibbs(H, beta)


def us_mfgs(delta, theta, beta) -> OperatorMatrix:
    """Ultrastrong-coupling limit: the state is diagonal in the coupling operator basis."""
    _check_angle(theta)
    return _bloch_state((math.sin(theta), 0.0, math.cos(theta)), beta * delta * math.cos(theta))


def populations_coherences(rho, H_s):
    """Populations (ascending energy) and |off-diagonals| of rho in the eigenbasis of H_s."""
    _, V = eigensystem(H_s)
    r = V.data.conj().T @ np.asarray(rho) @ V.data
    return np.real(np.diag(r)), np.abs(r[np.triu_indices(r.shape[0], 1)])
