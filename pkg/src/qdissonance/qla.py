"""Dense linear algebra for finite-dimensional quantum states.

Everything in this package runs through the two container types defined
here.  ``DensityMatrix`` and ``PureState`` validate their physical
invariants on construction and carry the tensor-leg structure
(``legs``) needed for partial traces and leg permutations, so the
higher-level modules never juggle raw reshape bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "DomainError",
    "DensityMatrix",
    "PureState",
    "projector",
    "tensor",
    "permute_legs",
    "partial_trace",
    "hermitian_eig",
    "matrix_sqrt",
    "trace_distance",
    "svd_real",
]

# Tolerances for the validation performed by the container types.
HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = -1e-10
NORM_TOL = 1e-12


class DomainError(ValueError):
    """Raised when an argument violates a documented precondition."""


def _as_complex_array(data, name: str) -> np.ndarray:
    arr = np.asarray(data, dtype=complex)
    if not np.all(np.isfinite(arr.view(float))):
        raise DomainError(f"{name} contains non-finite entries")
    return arr


def _check_legs(legs: Sequence[int], total: int, name: str) -> tuple[int, ...]:
    legs = tuple(int(d) for d in legs)
    if not legs or any(d < 1 for d in legs):
        raise DomainError(f"{name}: legs must be positive integers, got {legs}")
    if int(np.prod(legs)) != total:
        raise DomainError(
            f"{name}: leg dimensions {legs} do not multiply to total dimension {total}"
        )
    return legs


@dataclass(frozen=True)
class DensityMatrix:
    """A validated density matrix with tensor-leg structure.

    Parameters
    ----------
    matrix:
        Square complex array.  Must be Hermitian to 1e-12, have unit
        trace to 1e-12, and have no eigenvalue below -1e-10.
    legs:
        Dimension of each tensor factor; the product must equal the
        matrix dimension.  Defaults to a single leg.
    """

    matrix: np.ndarray
    legs: tuple[int, ...]

    def __init__(self, matrix, legs: Sequence[int] | None = None):
        m = _as_complex_array(matrix, "DensityMatrix")
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DomainError(f"DensityMatrix must be square, got shape {m.shape}")
        d = m.shape[0]
        if legs is None:
            legs = (d,)
        legs = _check_legs(legs, d, "DensityMatrix")
        herm = np.abs(m - m.conj().T).max()
        if herm > HERMITICITY_TOL:
            raise DomainError(f"matrix is not Hermitian (residual {herm:.3e})")
        tr = m.trace()
        if abs(tr - 1.0) > TRACE_TOL:
            raise DomainError(f"matrix trace is {tr:.15g}, expected 1")
        lo = float(np.linalg.eigvalsh(m).min())
        if lo < PSD_TOL:
            raise DomainError(f"matrix has negative eigenvalue {lo:.3e}")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "legs", legs)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def purity(self) -> float:
        """Tr(rho^2), between 1/dim and 1."""
        return float(np.real(np.trace(self.matrix @ self.matrix)))


@dataclass(frozen=True)
class PureState:
    """A state vector with tensor-leg structure.

    ``normalized=False`` admits unnormalized vectors (used for the
    components of mixture decompositions, whose norms encode weights).
    """

    vector: np.ndarray
    legs: tuple[int, ...]
    normalized: bool

    def __init__(self, vector, legs: Sequence[int] | None = None, normalized: bool = True):
        v = _as_complex_array(vector, "PureState")
        if v.ndim != 1:
            raise DomainError(f"PureState vector must be 1-D, got shape {v.shape}")
        d = v.shape[0]
        if legs is None:
            legs = (d,)
        legs = _check_legs(legs, d, "PureState")
        if normalized:
            nrm = float(np.linalg.norm(v))
            if abs(nrm - 1.0) > NORM_TOL:
                raise DomainError(f"vector norm is {nrm:.15g}, expected 1")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "vector", v)
        object.__setattr__(self, "legs", legs)
        object.__setattr__(self, "normalized", normalized)

    @property
    def dim(self) -> int:
        return self.vector.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))


def projector(state: PureState) -> DensityMatrix:
    """Rank-one density matrix |v><v| of a normalized pure state."""
    if not state.normalized:
        raise DomainError("projector requires a normalized PureState")
    return DensityMatrix(np.outer(state.vector, state.vector.conj()), state.legs)


def tensor(a, b):
    """Kronecker product, preserving container type and leg structure.

    Accepts two ``DensityMatrix``, two ``PureState``, or two plain
    arrays; mixing container types is an error.
    """
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(np.kron(a.matrix, b.matrix), a.legs + b.legs)
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(
            np.kron(a.vector, b.vector),
            a.legs + b.legs,
            normalized=a.normalized and b.normalized,
        )
    if isinstance(a, np.ndarray) and isinstance(b, np.ndarray):
        return np.kron(a, b)
    raise DomainError(
        f"tensor requires two DensityMatrix, two PureState, or two arrays, "
        f"got {type(a).__name__} and {type(b).__name__}"
    )


def permute_legs(rho: DensityMatrix, perm: Sequence[int]) -> DensityMatrix:
    """Reorder tensor legs so that new leg ``i`` is old leg ``perm[i]``."""
    n = len(rho.legs)
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(n)):
        raise DomainError(f"perm {perm} is not a permutation of 0..{n - 1}")
    dims = rho.legs
    t = rho.matrix.reshape(dims + dims)
    axes = perm + tuple(n + p for p in perm)
    new_dims = tuple(dims[p] for p in perm)
    d = rho.dim
    out = t.transpose(axes).reshape(d, d)
    return DensityMatrix(out, new_dims)


def partial_trace(rho: DensityMatrix, discard: Iterable[int]) -> DensityMatrix:
    """Trace out the legs listed in ``discard``, keeping the rest in order."""
    n = len(rho.legs)
    discard = sorted(set(int(i) for i in discard))
    if any(i < 0 or i >= n for i in discard):
        raise DomainError(f"discard indices {discard} out of range for {n} legs")
    if len(discard) == n:
        raise DomainError("cannot trace out every leg")
    keep = [i for i in range(n) if i not in discard]
    dims = rho.legs
    t = rho.matrix.reshape(dims + dims)
    row = list(range(n))
    col = list(range(n, 2 * n))
    for i in discard:
        col[i] = row[i]
    out = np.einsum(t, row + col)
    kept_dims = tuple(dims[i] for i in keep)
    d = int(np.prod(kept_dims))
    return DensityMatrix(out.reshape(d, d), kept_dims)


def hermitian_eig(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and matching orthonormal eigenvectors.

    Returns ``(w, v)`` with ``matrix @ v[:, k] == w[k] * v[:, k]``.
    """
    m = _as_complex_array(matrix, "hermitian_eig")
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"hermitian_eig needs a square matrix, got {m.shape}")
    herm = np.abs(m - m.conj().T).max()
    if herm > 1e-10:
        raise DomainError(f"matrix is not Hermitian (residual {herm:.3e})")
    w, v = np.linalg.eigh(m)
    return w[::-1].copy(), v[:, ::-1].copy()


def matrix_sqrt(matrix: np.ndarray) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix."""
    w, v = hermitian_eig(matrix)
    if w.size and float(w.min()) < PSD_TOL:
        raise DomainError(f"matrix_sqrt of non-PSD matrix (eigenvalue {w.min():.3e})")
    w = np.clip(w, 0.0, None)
    root = (v * np.sqrt(w)) @ v.conj().T
    return (root + root.conj().T) / 2


def trace_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    """(1/2) * trace norm of (a - b); between 0 and 1."""
    if a.dim != b.dim:
        raise DomainError(f"dimension mismatch {a.dim} vs {b.dim}")
    w = np.linalg.eigvalsh(a.matrix - b.matrix)
    return float(0.5 * np.abs(w).sum())


def svd_real(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """SVD of a real matrix with descending singular values.

    Returns ``(u, s, v)`` with orthogonal ``u``, ``v`` such that
    ``m = sum_k s[k] * outer(u[:, k], v[:, k])``.
    """
    m = np.asarray(matrix)
    if np.iscomplexobj(m):
        if np.abs(m.imag).max() > 1e-12:
            raise DomainError("svd_real requires a real matrix")
        m = m.real
    m = m.astype(float)
    if not np.all(np.isfinite(m)):
        raise DomainError("svd_real: matrix contains non-finite entries")
    u, s, vh = np.linalg.svd(m)
    return u, s, vh.T
