"""Correlation-matrix rank and commutator witnesses for nonzero discord.

A bipartite state expanded in Hilbert-Schmidt-orthonormal Hermitian
operator bases gives a real coefficient matrix R; its singular value
decomposition yields the minimal operator form rho = sum_k c_k S_k x F_k.
The number L of nonzero singular values witnesses discord (L > d_A
implies nonzero discord), and for L <= d_A the state has zero discord
w.r.t. A iff the S_k commute and share an eigenbasis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .qla import DensityMatrix, DomainError, svd_real

__all__ = [
    "OperatorBasis",
    "WitnessReport",
    "pauli_basis",
    "correlation_matrix",
    "decompose_sf",
    "commutator_test",
    "rank_witness",
    "witness_report",
]

RANK_TOL = 1e-10
COMMUTATOR_TOL = 1e-9
SIMDIAG_TOL = 1e-8
RECONSTRUCTION_TOL = 1e-9


@dataclass(frozen=True)
class OperatorBasis:
    """d^2 Hermitian matrices, orthonormal under Tr(X Y)."""

    elements: tuple[np.ndarray, ...]

    def __post_init__(self):
        elems = tuple(np.asarray(e, dtype=complex) for e in self.elements)
        d = elems[0].shape[0]
        if any(e.shape != (d, d) for e in elems):
            raise DomainError("OperatorBasis elements must share a square shape")
        if len(elems) != d * d:
            raise DomainError(f"OperatorBasis needs {d * d} elements for dimension {d}")
        for i, e in enumerate(elems):
            if np.abs(e - e.conj().T).max() > 1e-12:
                raise DomainError(f"OperatorBasis element {i} is not Hermitian")
        for i in range(len(elems)):
            for j in range(i, len(elems)):
                g = np.trace(elems[i] @ elems[j])
                ref = 1.0 if i == j else 0.0
                if abs(g - ref) > 1e-12:
                    raise DomainError(
                        f"OperatorBasis elements {i},{j} not HS-orthonormal (Tr={g:.3e})"
                    )
        object.__setattr__(self, "elements", elems)

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]


def pauli_basis(d: int = 2) -> OperatorBasis:
    """The normalized Pauli basis {I, sx, sy, sz} / sqrt(2)."""
    if d != 2:
        raise DomainError(f"pauli_basis supports d=2 only, got {d}")
    s2 = 1.0 / np.sqrt(2.0)
    return OperatorBasis(
        elements=(
            s2 * np.eye(2, dtype=complex),
            s2 * np.array([[0, 1], [1, 0]], dtype=complex),
            s2 * np.array([[0, -1j], [1j, 0]], dtype=complex),
            s2 * np.array([[1, 0], [0, -1]], dtype=complex),
        )
    )


def _resolve_basis(basis, d: int, name: str) -> OperatorBasis:
    if basis is None:
        return pauli_basis(d)
    if isinstance(basis, OperatorBasis):
        if basis.dim != d:
            raise DomainError(f"{name} has dimension {basis.dim}, leg needs {d}")
        return basis
    # A raw sequence of matrices is accepted and validated on the spot.
    return _resolve_basis(OperatorBasis(elements=tuple(basis)), d, name)


def correlation_matrix(rho: DensityMatrix, basis_a=None, basis_b=None) -> np.ndarray:
    """Real coefficient matrix r_nm = Tr[rho (A_n x B_m)]."""
    if len(rho.legs) != 2:
        raise DomainError(f"correlation_matrix needs a bipartite state, got legs {rho.legs}")
    da, db = rho.legs
    ba = _resolve_basis(basis_a, da, "basis_a")
    bb = _resolve_basis(basis_b, db, "basis_b")
    r = np.empty((da * da, db * db), dtype=complex)
    for n, an in enumerate(ba.elements):
        for m, bm in enumerate(bb.elements):
            r[n, m] = np.trace(rho.matrix @ np.kron(an, bm))
    resid = np.abs(r.imag).max()
    if resid > 1e-10:
        raise DomainError(f"correlation matrix has imaginary residue {resid:.3e}")
    return r.real


@dataclass
class WitnessReport:
    """Operator Schmidt data of a state plus (optionally) witness verdicts.

    ``s_ops``/``f_ops`` hold only the L operators belonging to nonzero
    singular values; ``verdicts`` is filled by ``commutator_test`` and
    ``rank_witness``.
    """

    r: np.ndarray
    singular_values: np.ndarray
    l_rank: int
    s_ops: tuple[np.ndarray, ...]
    f_ops: tuple[np.ndarray, ...]
    legs: tuple[int, int]
    max_commutator_norm: float | None = None
    verdicts: dict[str, bool] = field(default_factory=dict)


def decompose_sf(rho: DensityMatrix, basis_a=None, basis_b=None) -> WitnessReport:
    """Operator Schmidt decomposition rho = sum_k c_k S_k x F_k via the SVD of R.

    The c_k are the singular values; S_k (F_k) combine the A-side
    (B-side) basis with the left (right) singular vector columns.  The
    reconstruction is verified to 1e-9 before returning.
    """
    da, db = rho.legs if len(rho.legs) == 2 else (0, 0)
    r = correlation_matrix(rho, basis_a, basis_b)
    ba = _resolve_basis(basis_a, da, "basis_a")
    bb = _resolve_basis(basis_b, db, "basis_b")
    u, s, v = svd_real(r)
    l_rank = int((s > RANK_TOL).sum())
    a_stack = np.stack(ba.elements)
    b_stack = np.stack(bb.elements)
    s_ops = tuple(
        np.tensordot(u[:, k], a_stack, axes=(0, 0)) for k in range(l_rank)
    )
    f_ops = tuple(
        np.tensordot(v[:, k], b_stack, axes=(0, 0)) for k in range(l_rank)
    )
    recon = np.zeros((rho.dim, rho.dim), dtype=complex)
    for k in range(l_rank):
        recon += s[k] * np.kron(s_ops[k], f_ops[k])
    err = np.abs(recon - rho.matrix).max()
    if err > RECONSTRUCTION_TOL:
        raise ArithmeticError(f"operator Schmidt reconstruction error {err:.3e}")
    return WitnessReport(
        r=r,
        singular_values=s,
        l_rank=l_rank,
        s_ops=s_ops,
        f_ops=f_ops,
        legs=(da, db),
    )


def _simdiag_residual(ops: tuple[np.ndarray, ...]) -> float:
    """Smallest max off-diagonal residue after diagonalizing a weighted sum.

    Two fixed weight sets guard against accidentally degenerate
    combinations; the operators share an eigenbasis iff the residual
    vanishes.
    """
    rng = np.random.default_rng(20240917)
    best = np.inf
    for _ in range(2):
        weights = rng.standard_normal(len(ops))
        h = sum(w * op for w, op in zip(weights, ops))
        _, vec = np.linalg.eigh(h)
        resid = 0.0
        for op in ops:
            rot = vec.conj().T @ op @ vec
            off = rot - np.diag(np.diag(rot))
            resid = max(resid, float(np.abs(off).max()))
        best = min(best, resid)
        if best <= SIMDIAG_TOL:
            break
    return best


def commutator_test(report: WitnessReport, side: str = "A") -> tuple[float, bool]:
    """Max Frobenius commutator norm over the L operators, plus the verdict.

    ``zero_discord`` requires all pairwise commutators below 1e-9 and
    a simultaneous-diagonalization residual below 1e-8 (pairwise
    commutators alone can pass spuriously for degenerate spectra).
    The A side is tested by default; ``side="B"`` tests the F_k.
    """
    if side not in ("A", "B"):
        raise DomainError(f"side must be 'A' or 'B', got {side!r}")
    ops = report.s_ops if side == "A" else report.f_ops
    max_norm = 0.0
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            comm = ops[i] @ ops[j] - ops[j] @ ops[i]
            max_norm = max(max_norm, float(np.linalg.norm(comm)))
    zero = max_norm <= COMMUTATOR_TOL
    if zero and len(ops) > 1:
        zero = _simdiag_residual(ops) <= SIMDIAG_TOL
    if side == "A":
        report.max_commutator_norm = max_norm
        report.verdicts["commutator_zero_discord"] = zero
    return max_norm, zero


def rank_witness(report: WitnessReport, d_a: int) -> bool:
    """True iff L > d_A, which certifies nonzero discord (False is inconclusive)."""
    fired = report.l_rank > int(d_a)
    report.verdicts["rank_witness"] = fired
    return fired


def witness_report(rho: DensityMatrix, basis_a=None, basis_b=None) -> WitnessReport:
    """Full witness pass: decomposition, A-side commutator test, rank witness."""
    report = decompose_sf(rho, basis_a, basis_b)
    commutator_test(report, side="A")
    rank_witness(report, rho.legs[0])
    return report
