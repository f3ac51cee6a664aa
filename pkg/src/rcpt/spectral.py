"""Spectral densities, bath descriptions, occupations and golden-rule rates.

Conventions: hbar = k_B = e = 1.  A bosonic bath coupled through a system
operator S has spectral density J(w) = sum_k t_k^2 delta(w - nu_k); the
corresponding Redfield rate at Bohr frequency w is pi J(w)(n(w)+1) for
emission and pi J(|w|) n(|w|) for absorption.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import integrate, special

from .errors import InvalidSpec, QuadratureFailure, WrongStatistics
from .operators import OperatorMatrix, as_operator

ZERO_FREQUENCY = 1e-12
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(4)


# ---------------------------------------------------------------------------
# spectral density families


@dataclass(frozen=True)
class Brownian:
    """Underdamped Brownian density peaked at ``frequency``.

    J(w) = 4 width frequency^2 coupling^2 w / ((w^2 - frequency^2)^2 + (2 pi width frequency w)^2)

    ``cutoff`` is not part of J itself; it is the high-frequency cutoff given
    to the Ohmic residual bath after the reaction coordinate is extracted.
    """

    coupling: float
    frequency: float
    width: float
    cutoff: float = np.inf

    def __post_init__(self):
        if self.coupling < 0 or self.frequency <= 0 or self.width <= 0 or self.cutoff <= 0:
            raise InvalidSpec(f"invalid Brownian parameters {self}")

    def __call__(self, w):
        w = np.asarray(w, dtype=float)
        lam, om, g = self.coupling, self.frequency, self.width
        return 4 * g * om**2 * lam**2 * w / ((w**2 - om**2) ** 2 + (2 * np.pi * g * om * w) ** 2)

    def zero_slope(self) -> float:
        return 4 * self.width * self.coupling**2 / self.frequency**2

    def residual(self) -> "OhmicExp":
        """Ohmic density of the bath left behind once the RC is extracted."""
        return OhmicExp(self.width, self.cutoff)

    def quadrature_limit(self) -> float:
        return 10 * self.frequency

    def feature_scale(self) -> float:
        return min(self.frequency, 2 * np.pi * self.width * self.frequency)


@dataclass(frozen=True)
class OhmicExp:
    """J(w) = width * w * exp(-|w| / cutoff)."""

    width: float
    cutoff: float

    def __post_init__(self):
        if self.width <= 0 or self.cutoff <= 0:
            raise InvalidSpec(f"invalid Ohmic parameters {self}")

    def __call__(self, w):
        w = np.asarray(w, dtype=float)
        return self.width * w * np.exp(-np.abs(w) / self.cutoff)

    def zero_slope(self) -> float:
        return self.width

    def quadrature_limit(self) -> float:
        return 20 * self.cutoff

    def feature_scale(self) -> float:
        return self.cutoff


@dataclass(frozen=True)
class ScaledOhmic:
    """prefactor * width * w * exp(-|w| / cutoff); the dressed residual bath."""

    prefactor: float
    width: float
    cutoff: float

    def __post_init__(self):
        if self.prefactor < 0 or self.width <= 0 or self.cutoff <= 0:
            raise InvalidSpec(f"invalid scaled Ohmic parameters {self}")

    def __call__(self, w):
        w = np.asarray(w, dtype=float)
        return self.prefactor * self.width * w * np.exp(-np.abs(w) / self.cutoff)

    def zero_slope(self) -> float:
        return self.prefactor * self.width

    def quadrature_limit(self) -> float:
        return 20 * self.cutoff

    def feature_scale(self) -> float:
        return self.cutoff


@dataclass(frozen=True)
class Tabulated:
    """Piecewise-linear density on an ascending grid, zero outside it."""

    omega: np.ndarray = field(compare=False)
    values: np.ndarray = field(compare=False)

    def __post_init__(self):
        w = np.array(self.omega, dtype=float)
        j = np.array(self.values, dtype=float)
        if w.ndim != 1 or w.shape != j.shape or w.size < 2:
            raise InvalidSpec("tabulated density needs two equal-length 1D arrays")
        if np.any(np.diff(w) <= 0):
            raise InvalidSpec("tabulated grid must be strictly increasing")
        if np.any(w < 0) or np.any(j < 0):
            raise InvalidSpec("tabulated grid and values must be nonnegative")
        w.setflags(write=False)
        j.setflags(write=False)
        object.__setattr__(self, "omega", w)
        object.__setattr__(self, "values", j)

    def __call__(self, w):
        return np.interp(np.asarray(w, dtype=float), self.omega, self.values, left=0.0, right=0.0)

    def zero_slope(self) -> float:
        if self.omega[0] > 0:
            return 0.0
        return float((self.values[1] - self.values[0]) / (self.omega[1] - self.omega[0]))

    def scaled(self, factor: float) -> "Tabulated":
        return Tabulated(self.omega, factor * self.values)

    def quadrature_limit(self) -> float:
        return float(self.omega[-1])

    def feature_scale(self) -> float:
        return float(np.min(np.diff(self.omega)))

    def moment(self, k: int) -> float:
        """Exact integral of w^k J(w) for the piecewise-linear interpolant."""
        a, b = self.omega[:-1], self.omega[1:]
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        x = mid[:, None] + half[:, None] * _GL_NODES[None, :]
        return float(np.sum(half[:, None] * _GL_WEIGHTS[None, :] * x**k * self(x)))


SpectralDensity = Brownian | OhmicExp | ScaledOhmic | Tabulated


def evaluate(J, w):
    """J(w); see the individual families for the closed forms."""
    return J(w)


def scale_density(J, factor: float):
    """Return factor * J as a spectral density of a suitable family."""
    if isinstance(J, OhmicExp):
        return ScaledOhmic(factor, J.width, J.cutoff)
    if isinstance(J, ScaledOhmic):
        return ScaledOhmic(factor * J.prefactor, J.width, J.cutoff)
    if isinstance(J, Tabulated):
        return J.scaled(factor)
    if isinstance(J, Brownian):
        return Brownian(np.sqrt(factor) * J.coupling, J.frequency, J.width, J.cutoff)
    raise InvalidSpec(f"cannot scale {type(J).__name__}")


def load_tabulated(path) -> Tabulated:
    """Read a whitespace-delimited two-column (w, J) text file."""
    data = np.loadtxt(path, ndmin=2)
    if data.shape[1] != 2:
        raise InvalidSpec(f"{path}: expected two columns, found {data.shape[1]}")
    return Tabulated(data[:, 0], data[:, 1])


# ---------------------------------------------------------------------------
# reaction-coordinate extraction


def _moment(J, k: int, upper: float) -> float:
    if isinstance(J, Tabulated):
        return J.moment(k)
    points = [J.frequency] if isinstance(J, Brownian) and J.frequency < upper else None
    val, err = integrate.quad(lambda w: w**k * J(w), 0.0, upper, points=points, limit=1000,
                              epsabs=0.0, epsrel=1e-11)
    if not np.isfinite(val) or err > 1e-6 * abs(val) + 1e-300:
        raise QuadratureFailure(f"moment {k} did not converge on [0, {upper:g}]", err)
    return val


def rc_parameters(J, upper: float | None = None) -> tuple[float, float]:
    """Reaction-coordinate coupling and frequency from the first and third moments.

    lambda^2 = (1/Omega) int w J dw,  Omega^2 = int w^3 J dw / int w J dw,
    integrated over [0, upper] (default: ``J.quadrature_limit()``).
    """
    upper = J.quadrature_limit() if upper is None else upper
    if not np.isfinite(upper):
        raise QuadratureFailure("moments diverge: spectral density has no finite cutoff", np.inf)
    m1 = _moment(J, 1, upper)
    m3 = _moment(J, 3, upper)
    if m1 <= 0:
        raise QuadratureFailure("first moment vanishes; no reaction coordinate", abs(m1))
    omega = np.sqrt(m3 / m1)
    return float(np.sqrt(m1 / omega)), float(omega)


def _pv_integral(J, w: float, upper: float, scale: float) -> float:
    """PV int_0^upper J(x) [1/(x-w) + 1/(x+w)] dx, i.e. the odd extension of J.

    The pole is removed by symmetric excision of radius eps; the excised
    result carries only odd powers of eps, which Richardson extrapolation over
    eps, eps/2, eps/4 eliminates through third order.
    """

    def quad(f, a, b):
        if b <= a:
            return 0.0
        val, err = integrate.quad(f, a, b, limit=500, epsabs=1e-13, epsrel=1e-11)
        if not np.isfinite(val) or err > 1e-7 * (abs(val) + 1.0):
            raise QuadratureFailure(f"principal-value integral failed at w={w:g}", err)
        return val

    f = lambda x: J(x) / (x - w)
    h = 0.25 * min(w, scale)
    far = min(upper, 2 * w + 10 * scale)
    tail = quad(f, far, upper) if far < upper else 0.0

    def excised(eps):
        return quad(f, 0.0, w - eps) + quad(f, w + eps, far)

    k1, k2, k3 = excised(h), excised(h / 2), excised(h / 4)
    r1, r2 = 2 * k2 - k1, 2 * k3 - k2
    principal = (8 * r2 - r1) / 7 + tail
    image = quad(lambda x: J(x) / (x + w), 0.0, upper)
    return principal + image


def _pv_integral_tabulated(J: "Tabulated", w: float) -> float:
    """Exact PV int J(x) [1/(x-w) + 1/(x+w)] dx for piecewise-linear J.

    Writing J(x) = J(w) + (J(x) - J(w)) leaves J(w) ln|(b-w)/(a-w)| over the
    full support plus, per segment, slope*(b-a) + d ln|(b-w)/(a-w)| with d the
    segment line minus J(w) at w; d vanishes on the segment holding w.
    """
    x, y = J.omega, J.values
    a, b = x[:-1], x[1:]
    slope = np.diff(y) / np.diff(x)

    def hilbert(w):
        jw = float(J(w)) if w >= 0 else 0.0
        d = y[:-1] + slope * (w - a) - jw
        outside = (a - w) * (b - w) > 0
        logs = np.zeros_like(a)
        logs[outside] = np.log((b[outside] - w) / (a[outside] - w))
        total = np.sum(slope * (b - a) + d * logs)
        if jw:
            if w in (x[0], x[-1]):
                return np.inf if w == x[0] else -np.inf  # log divergence where J steps to zero
            total += jw * np.log(abs((x[-1] - w) / (x[0] - w)))
        return total

    return float(hilbert(w) + hilbert(-w))


def map_spectral_density(J, coupling: float, grid) -> Tabulated:
    """Spectral density of the residual bath coupled to the reaction coordinate.

    J_RC(w) = lambda^2 J(w) / (K(w)^2 + pi^2 J(w)^2), with K the principal
    value Hilbert transform of the odd extension of J.  For a Brownian input
    this returns width * w (see the decisions ledger for the normalization).
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise InvalidSpec("grid must be strictly increasing and positive")
    upper = float(J.omega[-1]) if isinstance(J, Tabulated) else np.inf
    scale = J.feature_scale()
    out = np.empty_like(grid)
    for i, w in enumerate(grid):
        jw = float(J(w))
        if jw == 0.0:
            out[i] = 0.0
            continue
        k = _pv_integral_tabulated(J, w) if isinstance(J, Tabulated) else _pv_integral(J, w, upper, scale)
        out[i] = coupling**2 * jw / (k**2 + np.pi**2 * jw**2)
    return Tabulated(np.concatenate(([0.0], grid)), np.concatenate(([0.0], out)))


# ---------------------------------------------------------------------------
# baths


@dataclass(frozen=True)
class Bath:
    """A thermal reservoir and the system operator it couples to.

    Bosonic baths couple as S (x) sum_k t_k (c_k + c_k^dag) with spectral
    density ``spectral``.  Fermionic leads couple as A (x) sum_k h_k c_k^dag + h.c.
    in the wideband limit with hybridization ``hybridization`` (Gamma); the
    coupling operator is A, the system operator that removes an electron.
    """

    statistics: str
    temperature: float
    coupling: OperatorMatrix
    spectral: Optional[object] = None
    hybridization: Optional[float] = None
    chemical_potential: Optional[float] = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "coupling", as_operator(self.coupling))
        if self.statistics not in ("bosonic", "fermionic"):
            raise InvalidSpec(f"unknown statistics {self.statistics!r}")
        if not self.temperature > 0:
            raise InvalidSpec("bath temperature must be positive")
        if self.statistics == "bosonic":
            if self.chemical_potential is not None:
                raise InvalidSpec("bosonic baths take no chemical potential")
            if self.spectral is None:
                raise InvalidSpec("bosonic bath needs a spectral density")
            if not self.coupling.is_hermitian(1e-10):
                raise InvalidSpec("bosonic coupling operator must be Hermitian")
        else:
            if self.chemical_potential is None or self.hybridization is None:
                raise InvalidSpec("fermionic bath needs chemical potential and hybridization")
            if self.hybridization < 0:
                raise InvalidSpec("hybridization must be nonnegative")

    @property
    def beta(self) -> float:
        return 1.0 / self.temperature

    def replace(self, **changes) -> "Bath":
        from dataclasses import replace

        return replace(self, **changes)


def bose(w, temperature):
    """Bose-Einstein occupation 1/(exp(w/T)-1), overflow-safe."""
    x = np.asarray(w, dtype=float) / temperature
    with np.errstate(divide="ignore", over="ignore"):
        return np.where(x > 0, np.exp(-np.abs(x)) / -np.expm1(-np.abs(x)),
                        -1.0 - np.exp(-np.abs(x)) / -np.expm1(-np.abs(x)))


def fermi(w, mu, temperature):
    return special.expit(-(np.asarray(w, dtype=float) - mu) / temperature)


def occupation(bath: Bath, w):
    if bath.statistics == "bosonic":
        return bose(w, bath.temperature)
    return fermi(w, bath.chemical_potential, bath.temperature)


def bath_rate(bath: Bath, w):
    """Real part of the one-sided bath correlation transform at Bohr frequency w.

    w > 0: pi J(w)(n(w)+1);  w < 0: pi J(|w|) n(|w|);  w = 0: pi T lim J(w)/w.
    """
    if bath.statistics != "bosonic":
        raise WrongStatistics("bath_rate needs a bosonic bath")
    w = np.asarray(w, dtype=float)
    aw = np.abs(w)
    zero = aw <= ZERO_FREQUENCY
    safe = np.where(zero, 1.0, aw)
    n = bose(safe, bath.temperature)
    J = bath.spectral(safe)
    rate = np.pi * J * np.where(w > 0, n + 1.0, n)
    limit = np.pi * bath.spectral.zero_slope() * bath.temperature
    return np.where(zero, limit, rate)


def fermi_rates(bath: Bath, w, direction: str):
    """Wideband lead rates: gain (Gamma/2) f(w), loss (Gamma/2)(1 - f(w))."""
    if bath.statistics != "fermionic":
        raise WrongStatistics("fermi_rates needs a fermionic bath")
    f = fermi(w, bath.chemical_potential, bath.temperature)
    half = 0.5 * bath.hybridization
    if direction == "gain":
        return half * f
    if direction == "loss":
        return half * (1.0 - f)
    raise InvalidSpec(f"direction must be 'gain' or 'loss', got {direction!r}")
