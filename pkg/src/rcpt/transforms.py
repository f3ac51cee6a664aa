"""Reaction-coordinate extraction, polaron dressing and the effective model.

Three representations of the same open system are produced here:

* ``original``: H_s with its baths;
* ``rc-extended``: one harmonic mode per selected bath absorbed into the
  system, which then couples to a residual Ohmic bath;
* ``effective``: the extended model after a polaron transform with the RC
  frozen in its ground state.  H_s is dressed and the residual bath coupling
  is rescaled by (2 lambda / Omega)^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy import linalg
from scipy.sparse.linalg import eigsh

from .errors import (InvalidDimension, InvalidOperator, InvalidSpec, QuadratureFailure,
                     SeriesTruncationFailure, TruncationFailure, UnsupportedMultibath,
                     WrongStatistics)
from .operators import OperatorMatrix, annihilation, as_operator, identity, kron, number
from .spectral import Bath, Brownian, ScaledOhmic, map_spectral_density, rc_parameters, scale_density

REPRESENTATIONS = ("original", "rc-extended", "effective")
_ALIASES = {"bmr": "original", "rc": "rc-extended", "eff": "effective"}


def canonical_representation(name: str) -> str:
    name = _ALIASES.get(name.lower(), name.lower())
    if name not in REPRESENTATIONS:
        raise InvalidSpec(f"unknown representation {name!r}")
    return name


@dataclass(frozen=True)
class RCRecord:
    coupling: float     # lambda
    frequency: float    # Omega
    levels: int         # M (1 for the effective model: ground state only)
    bath_index: int


@dataclass(frozen=True)
class OpenSystemModel:
    hamiltonian: OperatorMatrix
    baths: tuple
    representation: str = "original"
    rc_meta: tuple = ()
    system_dim: int | None = None
    diagnostics: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        H = as_operator(self.hamiltonian)
        object.__setattr__(self, "hamiltonian", H)
        object.__setattr__(self, "baths", tuple(self.baths))
        object.__setattr__(self, "representation", canonical_representation(self.representation))
        if self.system_dim is None:
            object.__setattr__(self, "system_dim", H.dim)
        if not H.is_hermitian(1e-10):
            raise InvalidOperator("system Hamiltonian must be Hermitian")
        for b in self.baths:
            if b.coupling.dim != H.dim:
                raise InvalidDimension(
                    f"bath {b.name or ''} coupling has dim {b.coupling.dim}, Hamiltonian {H.dim}")

    @property
    def dim(self) -> int:
        return self.hamiltonian.dim

    def lift(self, op) -> OperatorMatrix:
        """Embed a bare-system operator into this model's Hilbert space."""
        op = as_operator(op)
        if op.dim == self.dim:
            return op
        extra = self.dim // op.dim
        if extra * op.dim != self.dim:
            raise InvalidDimension("operator does not act on the leading system factor")
        rc_dims = self.hamiltonian.dims[len(op.dims):]
        return kron(op, identity(extra).with_dims(rc_dims))


# ---------------------------------------------------------------------------
# polaron dressing


def polaron_dress(op, S, coupling: float, frequency: float) -> OperatorMatrix:
    """<0| U_P op U_P^dag |0> for U_P = exp((lambda/Omega)(a^dag - a) S).

    In the eigenbasis of S (eigenvalues s_i) this multiplies element (i, j)
    by exp(-lambda^2 (s_i - s_j)^2 / (2 Omega^2)).  Works for non-Hermitian
    ``op`` (e.g. lead tunnelling operators).
    """
    op, S = as_operator(op), as_operator(S)
    if not S.is_hermitian(1e-10):
        raise InvalidOperator("polaron generator S must be Hermitian")
    if S.dim != op.dim:
        raise InvalidDimension("S and the dressed operator differ in dimension")
    s, U = np.linalg.eigh(S.data)
    x = coupling / frequency
    damp = np.exp(-0.5 * x**2 * (s[:, None] - s[None, :]) ** 2)
    rotated = U.conj().T @ op.data @ U
    return OperatorMatrix(U @ (rotated * damp) @ U.conj().T, op.dims)


def effective_system_hamiltonian(H, S, coupling: float, frequency: float) -> OperatorMatrix:
    H = as_operator(H)
    out = polaron_dress(H, S, coupling, frequency)
    # restore exact Hermiticity lost to rounding in the basis change
    return OperatorMatrix(0.5 * (out.data + out.data.conj().T), H.dims)


def effective_hamiltonian_series(H, S, coupling: float, frequency: float, n_terms: int = 40):
    """Power-series form of the dressing (cross-check for the closed form).

    exp(-x^2 S^2/2) [sum_n x^(2n)/n! S^n H S^n] exp(-x^2 S^2/2), x = lambda/Omega.
    """
    H, S = as_operator(H).data, as_operator(S).data
    x = coupling / frequency
    total = np.zeros_like(H)
    left = H.copy()  # S^n H S^n
    for n in range(n_terms + 1):
        total += x ** (2 * n) / math.factorial(n) * left
        left = S @ left @ S
    g = linalg.expm(-0.5 * x**2 * S @ S)
    return OperatorMatrix(g @ total @ g)


def rc_block_matrix_element(H, S, coupling: float, frequency: float, k: int, p: int,
                            n_max: int = 200, tol: float = 1e-12) -> OperatorMatrix:
    """System-space block <k| U_P H U_P^dag |p> between RC Fock states k and p.

    Evaluates the triple sum over (j, l, n) of binomial/factorial weights times
    x^(k+p-2j+2n) g S^(k-l+n) H S^(p-2j+l+n) g, with x = lambda/Omega and
    g = exp(-x^2 S^2 / 2).  The inner n series is cut once a term's bound
    drops below ``tol`` times the running maximum.
    """
    if k < 0 or p < 0:
        raise InvalidSpec("Fock indices must be nonnegative")
    H, S = as_operator(H), as_operator(S)
    if not S.is_hermitian(1e-10):
        raise InvalidOperator("S must be Hermitian")
    s, U = np.linalg.eigh(S.data)
    Ht = U.conj().T @ H.data @ U
    x = coupling / frequency
    g = np.exp(-0.5 * x**2 * s**2)
    smax = max(np.abs(s).max(), 1e-300)
    hmax = max(np.abs(Ht).max(), 1e-300)
    block = np.zeros_like(Ht)
    norm = 1.0 / math.sqrt(math.factorial(k) * math.factorial(p))

    for j in range(p + 1):
        for l in range(k + 1):
            pref = (-1) ** (l - j) * math.comb(k, l) * math.comb(p, j) * norm
            converged, last = False, np.inf
            for n in range(max(0, j - l), n_max + 1):
                left, right = k - l + n, p - 2 * j + l + n
                power = k + p - 2 * j + 2 * n
                # (n+l)! / (n! (n+l-j)!)
                logc = math.lgamma(n + l + 1) - math.lgamma(n + 1) - math.lgamma(n + l - j + 1)
                coef = pref * math.exp(logc) * (x**power if power else 1.0)
                term = coef * (s[:, None] ** left) * Ht * (s[None, :] ** right)
                block += term
                bound = abs(coef) * smax**power * hmax
                decreasing = np.isfinite(last) and bound < last
                last = bound
                if bound == 0.0 or (decreasing and bound <= tol * max(np.abs(block).max(), 1e-300)):
                    converged = True
                    break
            if not converged:
                raise SeriesTruncationFailure(
                    f"block ({k},{p}) series not converged at n_max={n_max}; last term bound {bound:.3e}")
    block = g[:, None] * block * g[None, :]
    return OperatorMatrix(U @ block @ U.conj().T, H.dims)


# ---------------------------------------------------------------------------
# RC parameters per bath


def _rc_split(bath: Bath, grid=None):
    """(lambda, Omega, residual density) for a bosonic bath."""
    if bath.statistics != "bosonic":
        raise WrongStatistics("reaction coordinates are extracted from bosonic baths only")
    J = bath.spectral
    if isinstance(J, Brownian):
        return J.coupling, J.frequency, J.residual()
    lam, om = rc_parameters(J)
    if grid is None:
        grid = np.geomspace(1e-3 * om, J.quadrature_limit(), 300)
    return lam, om, map_spectral_density(J, lam, grid)


def build_rc_model(model: OpenSystemModel, bath_index: int, M: int, grid=None) -> OpenSystemModel:
    """Absorb one reaction coordinate with M levels into the system."""
    if M < 2:
        raise InvalidDimension("RC truncation needs M >= 2")
    bath = model.baths[bath_index]
    lam, om, residual = _rc_split(bath, grid)
    H, S = model.hamiltonian, bath.coupling
    a = annihilation(M)
    x_rc = a + a.dag()
    I_s, I_rc = identity(H.dim).with_dims(H.dims), identity(M)
    H_ext = (kron(H, I_rc) + om * kron(I_s, number(M)) + lam * kron(S, x_rc)
             + (lam**2 / om) * kron(S @ S, I_rc))
    baths = []
    for i, b in enumerate(model.baths):
        if i == bath_index:
            baths.append(b.replace(coupling=kron(I_s, x_rc), spectral=residual))
        else:
            baths.append(b.replace(coupling=kron(b.coupling.with_dims(H.dims), I_rc)))
    return OpenSystemModel(H_ext, tuple(baths), "rc-extended",
                           model.rc_meta + (RCRecord(lam, om, M, bath_index),),
                           system_dim=model.system_dim)


def build_rc_extended(model: OpenSystemModel, bath_indices: Sequence[int], levels) -> OpenSystemModel:
    """Extract one RC per listed bath; ``levels`` is an int or one int per bath."""
    if np.isscalar(levels):
        levels = [int(levels)] * len(bath_indices)
    out = model
    for idx, M in zip(bath_indices, levels):
        out = build_rc_model(out, idx, M)
    return out


def _lowest_two(H: OperatorMatrix) -> np.ndarray:
    if H.dim <= 600:
        return np.linalg.eigvalsh(H.data)[:2]
    vals = eigsh(H.data, k=2, which="SA", return_eigenvectors=False, tol=1e-12)
    return np.sort(vals)


def choose_rc_levels(model: OpenSystemModel, bath_indices: Sequence[int], start: int | None = None,
                     tol: float = 1e-8, max_levels: int = 160, max_dim: int = 6000) -> int:
    """RC truncation from the doubling rule.

    Start at ceil(10 max(1, T/Omega + lambda^2/Omega^2)) (or ``start``) and
    double until the two lowest extended eigenvalues move by less than
    ``tol``; the smaller of the last two M is returned.
    """
    if start is None:
        start = 2
        for i in bath_indices:
            b = model.baths[i]
            if isinstance(b.spectral, Brownian):
                lam, om = b.spectral.coupling, b.spectral.frequency
            else:
                lam, om = rc_parameters(b.spectral)
            start = max(start, math.ceil(10 * max(1.0, b.temperature / om + lam**2 / om**2)))
    M = start
    prev = _lowest_two(build_rc_extended(model, bath_indices, M).hamiltonian)
    while True:
        M2 = 2 * M
        dim = model.dim * M2 ** len(bath_indices)
        if M2 > max_levels or dim > max_dim:
            raise TruncationFailure(f"RC levels not converged up to M={M} (dim limit {max_dim})")
        cur = _lowest_two(build_rc_extended(model, bath_indices, M2).hamiltonian)
        if np.max(np.abs(cur - prev)) < tol:
            return M
        M, prev = M2, cur


# ---------------------------------------------------------------------------
# effective model


def _check_commuting(ops, tol=1e-10):
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            A, B = ops[i].data, ops[j].data
            if np.abs(A @ B - B @ A).max() > tol:
                raise UnsupportedMultibath(
                    "coupling operators of the selected baths do not commute; "
                    "polaron ordering would be ambiguous")


def build_effective_model(model: OpenSystemModel, bath_indices: Sequence[int], m_check: int | None = None,
                          dress_spectators: bool = True, grid=None) -> OpenSystemModel:
    """Polaron-transformed model with every selected RC frozen in its ground state.

    Each selected bath keeps its coupling operator S but its spectral density
    becomes (2 lambda/Omega)^2 times the residual density.  With
    ``dress_spectators`` the coupling operators of the other baths are
    dressed the same way as H_s (this produces, e.g., the exp(-lambda^2/2Omega^2)
    suppression of lead tunnelling in the double dot).

    If ``m_check`` is given, the lowest dim(H_s) excitation energies of the
    rc-extended model with m_check levels are compared with the effective
    spectrum and the largest deviation stored in ``diagnostics``.
    """
    if model.representation != "original":
        raise InvalidSpec("effective models are built from the original representation")
    bath_indices = list(bath_indices)
    selected = [model.baths[i] for i in bath_indices]
    if len(selected) > 1:
        _check_commuting([b.coupling for b in selected])
    H = model.hamiltonian
    baths = list(model.baths)
    records = []
    for idx in bath_indices:
        b = model.baths[idx]
        lam, om, residual = _rc_split(b, grid)
        S = b.coupling
        H = effective_system_hamiltonian(H, S, lam, om)
        if dress_spectators:
            for i, other in enumerate(baths):
                if i not in bath_indices:
                    baths[i] = other.replace(coupling=polaron_dress(other.coupling, S, lam, om))
        baths[idx] = b.replace(spectral=scale_density(residual, (2 * lam / om) ** 2))
        records.append(RCRecord(lam, om, 1, idx))
    out = OpenSystemModel(H, tuple(baths), "effective", tuple(records), system_dim=model.system_dim)
    if m_check is not None:
        ext = build_rc_extended(model, bath_indices, m_check)
        e_ext = np.linalg.eigvalsh(ext.hamiltonian.data)[: H.dim]
        e_eff = np.linalg.eigvalsh(H.data)
        out.diagnostics["spectrum_check"] = float(np.max(np.abs((e_ext - e_ext[0]) - (e_eff - e_eff[0]))))
    return out


def iterate_rcpt(model: OpenSystemModel, bath_index: int, rounds: int, grid=None) -> OpenSystemModel:
    """Repeat RC extraction plus ground-state projection ``rounds`` times on one bath.

    Each round takes the current residual density J, extracts (lambda_i, Omega_i),
    dresses H_s, and replaces J by (2 lambda_i/Omega_i)^2 J_RC.  The per-round
    parameters are kept in ``rc_meta`` and the product of 2 lambda_i/Omega_i in
    ``diagnostics['coupling_prefactor']``.
    """
    if rounds < 1:
        raise InvalidSpec("rounds must be >= 1")
    if model.representation != "original":
        raise InvalidSpec("iteration starts from the original representation")
    bath = model.baths[bath_index]
    H = model.hamiltonian
    baths = list(model.baths)
    records, prefactor = [], 1.0
    current = bath
    for r in range(rounds):
        try:
            lam, om, residual = _rc_split(current, grid)
        except QuadratureFailure as exc:
            raise QuadratureFailure(f"round {r + 1}: {exc}", exc.residual) from exc
        S = bath.coupling
        H = effective_system_hamiltonian(H, S, lam, om)
        for i, other in enumerate(baths):
            if i != bath_index:
                baths[i] = other.replace(coupling=polaron_dress(other.coupling, S, lam, om))
        factor = 2 * lam / om
        prefactor *= factor
        current = current.replace(spectral=scale_density(residual, factor**2))
        records.append(RCRecord(lam, om, 1, bath_index))
    baths[bath_index] = current
    out = OpenSystemModel(H, tuple(baths), "effective", tuple(records), system_dim=model.system_dim)
    out.diagnostics["coupling_prefactor"] = prefactor
    return out
