"""Dense complex operators with tensor-factor bookkeeping.

`OperatorMatrix` is a thin immutable wrapper around a square complex numpy
array that remembers how the Hilbert space factorizes, so that reduced states
can be formed with `partial_trace`.  Heavy numerics elsewhere in the package
work on the raw arrays (``op.data``); the wrapper is mostly for clarity at
module boundaries.
"""

from __future__ import annotations

from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidDimension, InvalidOperator, InvalidSubsystem

# default tolerances; callers may pass their own
TOLERANCES = {
    "hermitian": 1e-12,
    "trace": 1e-10,
    "unitary": 1e-10,
}


class OperatorMatrix:
    """Immutable square complex matrix with subsystem dimensions."""

    __slots__ = ("_data", "_dims")
    __array_priority__ = 100  # make ndarray @ OperatorMatrix defer to us

    def __init__(self, data, dims: Sequence[int] | None = None):
        arr = np.array(data, dtype=complex, copy=True)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise InvalidDimension(f"operator must be a non-empty square matrix, got shape {arr.shape}")
        dim = arr.shape[0]
        dims = (dim,) if dims is None else tuple(int(n) for n in dims)
        if any(n < 1 for n in dims) or int(np.prod(dims)) != dim:
            raise InvalidDimension(f"subsystem dims {dims} do not multiply to {dim}")
        arr.setflags(write=False)
        self._data = arr
        self._dims = dims

    # basic accessors
    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def dims(self) -> tuple[int, ...]:
        return self._dims

    @property
    def dim(self) -> int:
        return self._data.shape[0]

    @property
    def shape(self):
        return self._data.shape

    def __array__(self, dtype=None, copy=None):
        return self._data if dtype is None else self._data.astype(dtype)

    def __repr__(self):
        return f"OperatorMatrix(dim={self.dim}, dims={self.dims})"

    # algebra
    def _wrap(self, arr, dims=None):
        return OperatorMatrix(arr, self._dims if dims is None else dims)

    def _coerce(self, other):
        if isinstance(other, OperatorMatrix):
            if other.dim != self.dim:
                raise InvalidDimension(f"dimension mismatch {self.dim} vs {other.dim}")
            return other._data
        arr = np.asarray(other)
        if arr.shape != self.shape:
            raise InvalidDimension(f"dimension mismatch {self.shape} vs {arr.shape}")
        return arr

    def __add__(self, other):
        return self._wrap(self._data + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self._data - self._coerce(other))

    def __rsub__(self, other):
        return self._wrap(self._coerce(other) - self._data)

    def __neg__(self):
        return self._wrap(-self._data)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            raise TypeError("use @ for operator products")
        return self._wrap(self._data * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self._wrap(self._data / scalar)

    def __matmul__(self, other):
        return self._wrap(self._data @ self._coerce(other))

    def __rmatmul__(self, other):
        return self._wrap(self._coerce(other) @ self._data)

    def dag(self) -> "OperatorMatrix":
        return self._wrap(self._data.conj().T)

    def tr(self) -> complex:
        return complex(np.trace(self._data))

    def expect(self, rho) -> float:
        """Re Tr[rho A]."""
        return float(np.real(np.trace(np.asarray(rho) @ self._data)))

    def is_hermitian(self, tol: float | None = None) -> bool:
        tol = TOLERANCES["hermitian"] if tol is None else tol
        scale = max(np.abs(self._data).max(), 1.0)
        return bool(np.abs(self._data - self._data.conj().T).max() <= tol * scale)

    def is_density_matrix(self, tol: float | None = None) -> bool:
        tol = TOLERANCES["trace"] if tol is None else tol
        return self.is_hermitian() and abs(self.tr() - 1.0) <= tol

    def allclose(self, other, atol=1e-12) -> bool:
        return bool(np.allclose(self._data, np.asarray(other), rtol=0, atol=atol))

    def with_dims(self, dims: Sequence[int]) -> "OperatorMatrix":
        return OperatorMatrix(self._data, dims)


def as_operator(op, dims: Sequence[int] | None = None) -> OperatorMatrix:
    if isinstance(op, OperatorMatrix):
        return op if dims is None else op.with_dims(dims)
    return OperatorMatrix(op, dims)


def identity(n: int) -> OperatorMatrix:
    if n < 1:
        raise InvalidDimension("identity needs n >= 1")
    return OperatorMatrix(np.eye(n))


_PAULI = {
    "identity": np.eye(2),
    "x": np.array([[0, 1], [1, 0]]),
    "y": np.array([[0, -1j], [1j, 0]]),
    "z": np.array([[1, 0], [0, -1]]),
}


def pauli(which: str) -> OperatorMatrix:
    key = {"i": "identity", "id": "identity"}.get(which.lower(), which.lower())
    if key not in _PAULI:
        raise InvalidOperator(f"unknown Pauli matrix {which!r}")
    return OperatorMatrix(_PAULI[key])


def annihilation(M: int) -> OperatorMatrix:
    """Truncated bosonic lowering operator on M levels."""
    if M < 2:
        raise InvalidDimension("ladder operators need M >= 2")
    return OperatorMatrix(np.diag(np.sqrt(np.arange(1, M)), k=1))


def number(M: int) -> OperatorMatrix:
    return OperatorMatrix(np.diag(np.arange(M, dtype=float)))


def basis_projector(dim: int, i: int, j: int | None = None) -> OperatorMatrix:
    """|i><j| (defaults to |i><i|)."""
    out = np.zeros((dim, dim), dtype=complex)
    out[i, i if j is None else j] = 1.0
    return OperatorMatrix(out)


def kron(*ops) -> OperatorMatrix:
    ops = [as_operator(o) for o in ops]
    data = reduce(np.kron, (o.data for o in ops))
    dims = tuple(n for o in ops for n in o.dims)
    return OperatorMatrix(data, dims)


def partial_trace(rho, keep: Iterable[int]) -> OperatorMatrix:
    """Trace out every tensor factor not listed in ``keep``."""
    rho = as_operator(rho)
    dims = rho.dims
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= n for k in keep):
        raise InvalidSubsystem(f"keep={keep} out of range for {n} factors")
    tensor = rho.data.reshape(dims + dims)
    # trace the highest axes first so remaining indices stay valid
    current = n
    for ax in sorted(set(range(n)) - set(keep), reverse=True):
        tensor = np.trace(tensor, axis1=ax, axis2=ax + current)
        current -= 1
    kept = tuple(dims[k] for k in keep)
    d = int(np.prod(kept)) if kept else 1
    return OperatorMatrix(tensor.reshape(d, d), kept if kept else (1,))


def fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude entry of every column real and positive."""
    vecs = np.array(vectors, dtype=complex)
    idx = np.argmax(np.abs(vecs), axis=0)
    pivots = vecs[idx, np.arange(vecs.shape[1])]
    return vecs * (np.abs(pivots) / pivots)


def eigensystem(H, tol: float | None = None):
    """Ascending eigenvalues and phase-fixed unitary eigenvectors of a Hermitian operator.

    Returns
    -------
    energies : ndarray
    vectors : OperatorMatrix
        Columns are eigenvectors; dims follow the input.
    """
    H = as_operator(H)
    if not H.is_hermitian(tol):
        raise InvalidOperator("eigensystem requires a Hermitian operator")
    herm = 0.5 * (H.data + H.data.conj().T)
    energies, vecs = np.linalg.eigh(herm)
    return energies, OperatorMatrix(fix_phases(vecs), H.dims)


def commutator(A, B) -> OperatorMatrix:
    A, B = as_operator(A), as_operator(B)
    return A @ B - B @ A
