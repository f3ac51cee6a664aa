"""Non-secular Redfield generator, steady states, propagation and currents.

Everything is assembled in the eigenbasis of the model Hamiltonian.  For a
coupling H_I = sum_a A_a (x) B_a the dissipator of one bath reads

    D(rho) = sum_a ( -A_a Lam_a rho + Lam_a rho A_a ) + h.c.,

with (Lam_a)_jp = sum_b (A_b)_jp Re G_ab(E_p - E_j), the real part of the
one-sided Fourier transform of the bath correlation function.  For a bosonic
bath there is a single term (A = S, G = bath_rate); a wideband fermionic lead
coupled through A (x) sum h c^dag + h.c. gives two terms: (A, A^dag * gain) and
(A^dag, A * loss).  The imaginary (Lamb-shift) part is dropped.

Density matrices are vectorized column-major: vec(rho)[m + n d] = rho[m, n].
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg
from scipy.linalg.lapack import zgecon
from scipy.sparse.linalg import expm_multiply

from .errors import (InvalidOperator, InvalidSpec, NonUniqueSteadyState, SizeLimit,
                     StiffnessFailure, WrongStatistics)
from .operators import OperatorMatrix, as_operator, eigensystem, partial_trace
from .spectral import Bath, bath_rate, fermi_rates
from .transforms import OpenSystemModel

# largest d^2 for which the dense d^2 x d^2 generator is materialized
MAX_LIOUVILLE_DIM = 3600


@dataclass(frozen=True)
class DissipatorBlock:
    """Dissipator of one bath in the energy eigenbasis."""

    bath_index: int
    statistics: str
    terms: tuple  # ((A, Lam), ...) arrays in the eigenbasis

    def apply(self, rho: np.ndarray) -> np.ndarray:
        out = np.zeros_like(rho, dtype=complex)
        for A, Lam in self.terms:
            Ad, Lamd = A.conj().T, Lam.conj().T
            out += -A @ (Lam @ rho) + (Lam @ rho) @ A - (rho @ Lamd) @ Ad + Ad @ (rho @ Lamd)
        return out

    def superoperator(self) -> np.ndarray:
        d = self.terms[0][0].shape[0] if self.terms else 0
        L = np.zeros((d * d, d * d), dtype=complex)
        _add_terms(L, self.terms, d)
        return L


def _add_terms(L: np.ndarray, terms, d: int):
    """Accumulate the column-stacked superoperator of the given terms into L."""
    L4 = L.reshape(d, d, d, d)  # [n, m, n', m'] for row m + n d, column m' + n' d
    left = np.zeros((d, d), dtype=complex)
    for A, Lam in terms:
        M = A @ Lam
        left += M
        # Lam rho A  -> A^T (x) Lam ;  A^dag rho Lam^dag -> conj(Lam) (x) A^dag
        L4 += A.T[:, None, :, None] * Lam[None, :, None, :]
        L4 += Lam.conj()[:, None, :, None] * A.conj().T[None, :, None, :]
    for n in range(d):
        L4[n, :, n, :] -= left          # -M rho
    for m in range(d):
        L4[:, m, :, m] -= left.conj()   # -rho M^dag


def _bath_terms(bath: Bath, energies: np.ndarray, vectors: np.ndarray):
    A = vectors.conj().T @ bath.coupling.data @ vectors
    bohr = energies[None, :] - energies[:, None]  # [j, p] -> E_p - E_j
    if bath.statistics == "bosonic":
        return ((A, A * bath_rate(bath, bohr)),)
    Ad = A.conj().T
    gain = fermi_rates(bath, -bohr, "gain")   # electron enters: energy E_j - E_p
    loss = fermi_rates(bath, bohr, "loss")    # electron leaves: energy E_p - E_j
    return ((A, Ad * gain), (Ad, A * loss))


def build_dissipator(H, bath: Bath, bath_index: int = 0, basis=None) -> DissipatorBlock:
    """Redfield dissipator of one bath in the eigenbasis of H (or a given (E, V))."""
    H = as_operator(H)
    if bath.coupling.dim != H.dim:
        raise InvalidOperator("coupling operator and Hamiltonian differ in dimension")
    if basis is None:
        E, V = eigensystem(H)
        basis = (E, V.data)
    E, V = basis
    return DissipatorBlock(bath_index, bath.statistics, _bath_terms(bath, E, V))


@dataclass
class Liouvillian:
    """Redfield generator with its eigenbasis and per-bath blocks.

    ``energies``/``vectors`` span the (possibly truncated) eigenbasis; the
    dense ``matrix`` is built on first access.
    """

    model: OpenSystemModel
    energies: np.ndarray
    vectors: np.ndarray
    blocks: tuple
    max_liouville_dim: int = MAX_LIOUVILLE_DIM
    _matrix: np.ndarray | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return self.energies.size

    def apply(self, rho: np.ndarray) -> np.ndarray:
        bohr = self.energies[:, None] - self.energies[None, :]
        out = -1j * bohr * rho
        for b in self.blocks:
            out = out + b.apply(rho)
        return out

    @property
    def matrix(self) -> np.ndarray:
        if self._matrix is None:
            d = self.dim
            if d * d > self.max_liouville_dim:
                raise SizeLimit(f"Liouvillian of dimension {d * d} exceeds budget {self.max_liouville_dim}")
            L = np.zeros((d * d, d * d), dtype=complex)
            terms = [t for b in self.blocks for t in b.terms]
            _add_terms(L, terms, d)
            bohr = self.energies[:, None] - self.energies[None, :]
            L[np.diag_indices(d * d)] += -1j * bohr.reshape(-1, order="F")
            self._matrix = L
        return self._matrix

    def to_eigen(self, rho) -> np.ndarray:
        return self.vectors.conj().T @ np.asarray(rho) @ self.vectors

    def to_lab(self, rho) -> np.ndarray:
        return self.vectors @ np.asarray(rho) @ self.vectors.conj().T


def _auto_keep(model: OpenSystemModel, energies: np.ndarray, budget: int):
    """Number of eigenstates retained for large rc-extended models, or None.

    Prefers the window E - E_0 <= Omega_max + 30 T_max; if that exceeds the
    budget the window shrinks, but never below Omega_max + 8 T_max.
    """
    d_full = energies.size
    if d_full * d_full <= budget or model.representation != "rc-extended":
        return None
    t_max = max(b.temperature for b in model.baths)
    om_max = max(r.frequency for r in model.rc_meta)
    rel = energies - energies[0]
    keep = int(np.searchsorted(rel, om_max + 30.0 * t_max + 1e-9, side="right"))
    cap = int(math.isqrt(budget))
    if keep > cap:
        keep = cap
        # do not split a degenerate cluster
        while keep > 1 and abs(rel[keep] - rel[keep - 1]) < 1e-9:
            keep -= 1
        if rel[keep - 1] < om_max + 8.0 * t_max:
            raise SizeLimit(f"cannot fit the thermally relevant window into {budget} Liouville entries")
    return keep


def build_liouvillian(model: OpenSystemModel, *, energy_window="auto", n_states: int | None = None,
                      max_liouville_dim: int = MAX_LIOUVILLE_DIM, lamb_shift: bool = False) -> Liouvillian:
    """Assemble L = -i[H, .] + sum_a D_a in the eigenbasis of the model Hamiltonian.

    For large rc-extended models the eigenbasis is truncated to low-lying
    states: either E - E_0 <= ``energy_window`` or, by default, the rule in
    `_auto_keep`, applied only when the full generator exceeds the budget.
    Dropped states carry Boltzmann weight below exp(-8) relative to the ground
    manifold at the hottest bath temperature (typically below exp(-30)).
    """
    if lamb_shift:
        raise InvalidSpec("Lamb-shift terms are not included in this generator")
    E, V = eigensystem(model.hamiltonian)
    V = V.data
    keep = E.size
    if energy_window == "auto":
        keep = _auto_keep(model, E, max_liouville_dim) or keep
    elif energy_window is not None:
        keep = int(np.searchsorted(E - E[0], energy_window + 1e-9, side="right"))
    if n_states is not None:
        keep = min(keep, int(n_states))
    if keep * keep > max_liouville_dim:
        raise SizeLimit(f"{keep} retained states give a Liouvillian of dimension {keep * keep}, "
                        f"budget {max_liouville_dim}")
    E, V = E[:keep], V[:, :keep]
    blocks = tuple(DissipatorBlock(i, b.statistics, _bath_terms(b, E, V)) for i, b in enumerate(model.baths))
    return Liouvillian(model, E, V, blocks, max_liouville_dim)


@dataclass
class SteadyStateResult:
    rho: np.ndarray                 # eigenbasis of the model Hamiltonian
    liouvillian: Liouvillian
    heat_currents: tuple = ()
    charge_currents: tuple = ()
    diagnostics: dict = field(default_factory=dict)

    @property
    def rho_lab(self) -> np.ndarray:
        """Steady state in the model's product basis."""
        return self.liouvillian.to_lab(self.rho)

    @property
    def energies(self) -> np.ndarray:
        return self.liouvillian.energies


def _trace_row(d: int) -> np.ndarray:
    row = np.zeros(d * d, dtype=complex)
    row[np.arange(d) * (d + 1)] = 1.0
    return row


def steady_state(L: Liouvillian, number_operator=None, rcond_min: float = 1e-14) -> SteadyStateResult:
    """Solve L' rho = (0, ..., 0, 1) with the last population row replaced by the trace.

    ``number_operator`` (bare-system or model-space) enables charge currents
    for fermionic baths.
    """
    d = L.dim
    A = L.matrix.copy()
    A[-1, :] = _trace_row(d)
    rhs = np.zeros(d * d, dtype=complex)
    rhs[-1] = 1.0
    with warnings.catch_warnings():
        # singularity is reported through rcond below
        warnings.simplefilter("ignore", linalg.LinAlgWarning)
        lu, piv = linalg.lu_factor(A, check_finite=False)
    rcond, _ = zgecon(lu, np.linalg.norm(A, 1), norm="1")
    if not rcond > rcond_min:
        pivots = np.abs(np.diag(lu))
        nullity = int(np.sum(pivots < 1e-10 * pivots.max()))
        raise NonUniqueSteadyState(f"generator is singular (rcond {rcond:.2e})", max(nullity, 1))
    x = linalg.lu_solve((lu, piv), rhs, check_finite=False)
    for _ in range(2):  # iterative refinement
        x += linalg.lu_solve((lu, piv), rhs - A @ x, check_finite=False)
    rho = x.reshape(d, d, order="F")
    residual = float(np.abs(L.matrix @ x).max())
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho).real
    result = SteadyStateResult(rho, L, diagnostics={
        "residual": residual,
        "rcond": float(rcond),
        "min_eigenvalue": float(np.linalg.eigvalsh(rho)[0]),
        "retained_states": d,
        "full_dim": L.model.dim,
    })
    result.heat_currents = tuple(heat_current(result, i) for i in range(len(L.blocks)))
    if number_operator is not None:
        result.charge_currents = tuple(
            charge_current(result, i, number_operator) if b.statistics == "fermionic" else None
            for i, b in enumerate(L.blocks))
    return result


def solve(model: OpenSystemModel, number_operator=None, **kwargs) -> SteadyStateResult:
    return steady_state(build_liouvillian(model, **kwargs), number_operator)


def heat_current(result: SteadyStateResult, bath_index: int, rho=None) -> float:
    """Energy current Tr[D_a(rho) H] from bath ``bath_index`` into the system."""
    rho = result.rho if rho is None else rho
    D = result.liouvillian.blocks[bath_index].apply(rho)
    return float(np.real(np.sum(np.diag(D) * result.liouvillian.energies)))


def charge_current(result: SteadyStateResult, bath_index: int, number_operator, rho=None) -> float:
    """Particle current Tr[D_a(rho) N] from lead ``bath_index`` into the system."""
    L = result.liouvillian
    block = L.blocks[bath_index]
    if block.statistics != "fermionic":
        raise WrongStatistics("charge current is defined for fermionic leads only")
    rho = result.rho if rho is None else rho
    N = L.to_eigen(L.model.lift(number_operator).data)
    return float(np.real(np.trace(block.apply(rho) @ N)))


def propagate(L: Liouvillian, rho0, times, basis: str = "eigen"):
    """rho(t) = exp(L t) rho0 for ascending ``times`` (t >= 0).

    ``basis`` selects whether rho0 and the returned states are in the
    generator's eigenbasis or the model's product ("lab") basis.
    """
    times = np.asarray(times, dtype=float)
    if np.any(np.diff(times) < 0) or (times.size and times[0] < 0):
        raise InvalidSpec("times must be ascending and nonnegative")
    rho = np.asarray(rho0, dtype=complex)
    if basis == "lab":
        rho = L.to_eigen(rho)
    d = L.dim
    v = rho.reshape(-1, order="F")
    out, t_prev = [], 0.0
    for t in times:
        if t > t_prev:
            v = expm_multiply(L.matrix * (t - t_prev), v)
            if not np.all(np.isfinite(v)):
                raise StiffnessFailure(f"propagation diverged at t={t:g}")
        t_prev = t
        r = v.reshape(d, d, order="F")
        out.append(L.to_lab(r) if basis == "lab" else r.copy())
    return out


def reduced_state(result: SteadyStateResult) -> np.ndarray:
    """System density matrix with any reaction coordinates traced out."""
    model = result.liouvillian.model
    rho = result.rho_lab
    if model.representation != "rc-extended":
        return rho
    dims = model.hamiltonian.dims
    n_sys = len(dims) - len(model.rc_meta)
    return partial_trace(OperatorMatrix(rho, dims), range(n_sys)).data
