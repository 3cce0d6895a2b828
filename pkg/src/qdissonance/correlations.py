"""Correlation quantifiers for bipartite states.

Entropic quantities (total correlation, classical correlation via
measurement optimization, quantum discord), the Hilbert-Schmidt
geometric discord (closed form and a brute-force oracle mode), and the
two-qubit entanglement measures (concurrence, negativity).  All
entropies are in bits.

The measurement optimization scans a deterministic coarse grid over
the Bloch sphere and refines the best cells with a Nelder-Mead
simplex, so repeated runs give identical results.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .qla import (
    DensityMatrix,
    DomainError,
    hermitian_eig,
    matrix_sqrt,
    partial_trace,
)

__all__ = [
    "Measurement",
    "CorrelationReport",
    "entropy",
    "total_correlation",
    "qubit_measurement",
    "conditional_entropy_after",
    "classical_correlation",
    "discord",
    "geometric_discord",
    "concurrence",
    "negativity",
]

DEFAULT_GRID = (64, 128)
DEFAULT_REFINE_TOL = 1e-7
PROB_CUTOFF = 1e-14

_SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
_SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_PAULIS = (_SIGMA_X, _SIGMA_Y, _SIGMA_Z)


@dataclass(frozen=True)
class Measurement:
    """Rank-1 projective qubit measurement along the Bloch direction (theta, phi)."""

    projectors: tuple[np.ndarray, np.ndarray]
    theta: float
    phi: float

    def __post_init__(self):
        total = self.projectors[0] + self.projectors[1]
        if np.abs(total - np.eye(2)).max() > 1e-12:
            raise DomainError("measurement projectors do not sum to identity")
        for a in range(2):
            for b in range(2):
                prod = self.projectors[a] @ self.projectors[b]
                ref = self.projectors[a] if a == b else np.zeros((2, 2))
                if np.abs(prod - ref).max() > 1e-10:
                    raise DomainError("measurement projectors are not orthogonal idempotents")


def qubit_measurement(theta: float, phi: float) -> Measurement:
    """Projectors (I +/- n.sigma)/2 for the unit vector n(theta, phi)."""
    theta = float(theta)
    phi = float(phi)
    n = np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
    ns = sum(c * s for c, s in zip(n, _PAULIS))
    plus = (np.eye(2) + ns) / 2.0
    minus = (np.eye(2) - ns) / 2.0
    plus = (plus + plus.conj().T) / 2.0
    minus = (minus + minus.conj().T) / 2.0
    return Measurement(projectors=(plus, minus), theta=theta, phi=phi)


def _canonical_angles(theta: float, phi: float) -> tuple[float, float]:
    """Map arbitrary real angles to theta in [0, pi], phi in [0, 2 pi)."""
    n = np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
    t = float(np.arccos(np.clip(n[2], -1.0, 1.0)))
    if abs(n[0]) < 1e-15 and abs(n[1]) < 1e-15:
        return t, 0.0
    p = float(np.arctan2(n[1], n[0])) % (2.0 * np.pi)
    return t, p


def _xlog2(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    mask = x > PROB_CUTOFF
    out[mask] = x[mask] * np.log2(x[mask])
    return out


def entropy(rho: DensityMatrix) -> float:
    """Von Neumann entropy -sum(lam log2 lam) in bits, with 0 log 0 = 0."""
    lam = np.linalg.eigvalsh(rho.matrix)
    return float(-_xlog2(np.clip(lam, 0.0, None)).sum())


def _require_bipartite(rho: DensityMatrix, op: str) -> tuple[int, int]:
    if len(rho.legs) != 2:
        raise DomainError(f"{op} needs exactly two legs; merge legs first (got {rho.legs})")
    return rho.legs


def total_correlation(rho: DensityMatrix) -> float:
    """Mutual information S(A) + S(B) - S(AB) in bits."""
    _require_bipartite(rho, "total_correlation")
    sa = entropy(partial_trace(rho, (1,)))
    sb = entropy(partial_trace(rho, (0,)))
    return sa + sb - entropy(rho)


def _b_blocks(rho: DensityMatrix) -> np.ndarray:
    """B-side blocks of a [2, d_B] state: blocks[i, j] = <i|_A rho |j>_A."""
    da, db = _require_bipartite(rho, "measurement on A")
    if da != 2:
        raise DomainError(f"measured leg must have dimension 2, got {da}")
    return rho.matrix.reshape(2, db, 2, db).transpose(0, 2, 1, 3)


def _post_blocks(blocks: np.ndarray, nx, ny, nz) -> tuple[np.ndarray, np.ndarray]:
    """Unnormalized B states after measuring +/- n on A; broadcasts over directions.

    Tracing A out of (P x I) rho (P x I) contracts the projector
    against the A indices of the blocks, leaving
    (1/2) [(1 +/- nz) B00 +/- (nx + i ny) B01 +/- (nx - i ny) B10 + (1 -/+ nz) B11].
    """
    nx = np.asarray(nx, dtype=float)[..., None, None]
    ny = np.asarray(ny, dtype=float)[..., None, None]
    nz = np.asarray(nz, dtype=float)[..., None, None]
    b00, b01, b10, b11 = blocks[0, 0], blocks[0, 1], blocks[1, 0], blocks[1, 1]
    cross = (nx + 1j * ny) * b01 + (nx - 1j * ny) * b10
    plus = 0.5 * ((1.0 + nz) * b00 + cross + (1.0 - nz) * b11)
    minus = 0.5 * ((1.0 - nz) * b00 - cross + (1.0 + nz) * b11)
    return plus, minus


def _eigvals_batch(mats: np.ndarray) -> np.ndarray:
    """Eigenvalues of stacked Hermitian matrices; closed form for 2x2."""
    if mats.shape[-1] == 2:
        a = mats[..., 0, 0].real
        c = mats[..., 1, 1].real
        h = (a + c) / 2.0
        r = np.sqrt(((a - c) / 2.0) ** 2 + np.abs(mats[..., 0, 1]) ** 2)
        return np.stack([h - r, h + r], axis=-1)
    return np.linalg.eigvalsh(mats)


def _cond_entropy_terms(mats: np.ndarray) -> np.ndarray:
    """sum_a p_a S(rho_a) contribution of one outcome, from unnormalized blocks."""
    lam = np.clip(_eigvals_batch(mats), 0.0, None)
    p = lam.sum(axis=-1)
    return -_xlog2(lam).sum(axis=-1) + _xlog2(p)


def _conditional_entropy_directions(blocks: np.ndarray, nx, ny, nz) -> np.ndarray:
    plus, minus = _post_blocks(blocks, nx, ny, nz)
    return _cond_entropy_terms(plus) + _cond_entropy_terms(minus)


def conditional_entropy_after(rho: DensityMatrix, m: Measurement) -> float:
    """Average post-measurement B entropy sum_a p_a S(rho_B|a) in bits.

    Outcomes with probability below 1e-14 are skipped.
    """
    blocks = _b_blocks(rho)
    n = np.array(
        [np.sin(m.theta) * np.cos(m.phi), np.sin(m.theta) * np.sin(m.phi), np.cos(m.theta)]
    )
    val = _conditional_entropy_directions(blocks, n[0:1], n[1:2], n[2:3])
    return float(val[0])


def _grid_directions(grid: tuple[int, int]) -> tuple[np.ndarray, np.ndarray]:
    gt, gp = grid
    if gt < 2 or gp < 2:
        raise DomainError(f"grid must be at least 2x2, got {grid}")
    thetas = (np.arange(gt) + 0.5) * np.pi / gt
    phis = np.arange(gp) * 2.0 * np.pi / gp
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    return tt.ravel(), pp.ravel()


def _minimize_over_directions(objective, grid: tuple[int, int], refine_tol: float):
    """Coarse Bloch-grid scan + Nelder-Mead refinement from the best 3 cells.

    ``objective(nx, ny, nz)`` must accept direction-component arrays.
    Returns (value, theta, phi) with canonical angles; deterministic
    (stable sort, ties broken by grid order).
    """
    tt, pp = _grid_directions(grid)
    vals = objective(np.sin(tt) * np.cos(pp), np.sin(tt) * np.sin(pp), np.cos(tt))
    order = np.argsort(vals, kind="stable")[:3]

    def scalar(angles):
        t, p = angles
        return float(objective(
            np.array([np.sin(t) * np.cos(p)]),
            np.array([np.sin(t) * np.sin(p)]),
            np.array([np.cos(t)]),
        )[0])

    best_val = None
    best_angles = None
    for idx in order:
        start = np.array([tt[idx], pp[idx]])
        res = minimize(
            scalar,
            start,
            method="Nelder-Mead",
            options={"xatol": refine_tol, "fatol": 1e-13, "maxiter": 400},
        )
        cand_val = float(res.fun)
        cand = (cand_val, *_canonical_angles(res.x[0], res.x[1]))
        if best_val is None or cand_val < best_val:
            best_val = cand_val
            best_angles = cand[1:]
    return best_val, best_angles[0], best_angles[1]


def classical_correlation(
    rho: DensityMatrix,
    grid: tuple[int, int] = DEFAULT_GRID,
    refine_tol: float = DEFAULT_REFINE_TOL,
) -> tuple[float, Measurement]:
    """Maximal classical mutual information over projective qubit measurements on A.

    Returns S(B) minus the minimized conditional entropy, together with
    the minimizing measurement.  The reported value is accurate to
    about 1e-6 bits at the default grid and refinement settings.
    """
    blocks = _b_blocks(rho)
    sb = entropy(partial_trace(rho, (0,)))

    def objective(nx, ny, nz):
        return _conditional_entropy_directions(blocks, nx, ny, nz)

    val, theta, phi = _minimize_over_directions(objective, grid, refine_tol)
    return sb - val, qubit_measurement(theta, phi)


@dataclass(frozen=True)
class CorrelationReport:
    """Bundle of every correlation measure for one bipartite state.

    ``geometric_discord`` and ``concurrence`` are None when the B side
    is not a qubit (they are two-qubit quantities).
    """

    total: float
    classical: float
    discord: float
    geometric_discord: float | None
    concurrence: float | None
    negativity: float
    argmin_measurement: Measurement
    outcome_probs: tuple[float, ...]
    conditional_states: tuple[DensityMatrix | None, ...]


def discord(
    rho: DensityMatrix,
    grid: tuple[int, int] = DEFAULT_GRID,
    refine_tol: float = DEFAULT_REFINE_TOL,
) -> CorrelationReport:
    """Quantum discord (total minus classical correlation) with full report."""
    total = total_correlation(rho)
    classical, m = classical_correlation(rho, grid=grid, refine_tol=refine_tol)
    disc = total - classical
    if disc < -1e-8 or classical < -1e-8 or total < -1e-10:
        raise ArithmeticError(
            f"inconsistent correlations: total={total}, classical={classical}, discord={disc}"
        )
    probs = []
    cond = []
    _, db = rho.legs
    for proj in m.projectors:
        big = np.kron(proj, np.eye(db))
        sub = big @ rho.matrix @ big
        reduced = sub.reshape(2, db, 2, db).trace(axis1=0, axis2=2)
        p = float(np.real(np.trace(reduced)))
        probs.append(p)
        if p > 1e-12:
            cond.append(DensityMatrix(reduced / p, (db,)))
        else:
            cond.append(None)
    two_qubit = rho.legs == (2, 2)
    return CorrelationReport(
        total=total,
        classical=classical,
        discord=disc,
        geometric_discord=geometric_discord(rho) if two_qubit else None,
        concurrence=concurrence(rho) if two_qubit else None,
        negativity=negativity(rho),
        argmin_measurement=m,
        outcome_probs=tuple(probs),
        conditional_states=tuple(cond),
    )


def _bloch_decomposition(rho: DensityMatrix) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Local Bloch vectors x, y and correlation tensor T of a two-qubit state."""
    m = rho.matrix
    x = np.array([np.real(np.trace(m @ np.kron(s, np.eye(2)))) for s in _PAULIS])
    y = np.array([np.real(np.trace(m @ np.kron(np.eye(2), s))) for s in _PAULIS])
    t = np.array(
        [[np.real(np.trace(m @ np.kron(si, sj))) for sj in _PAULIS] for si in _PAULIS]
    )
    return x, y, t


def geometric_discord(
    rho: DensityMatrix,
    method: str = "closed-form",
    grid: tuple[int, int] = DEFAULT_GRID,
    refine_tol: float = DEFAULT_REFINE_TOL,
) -> float:
    """Squared Hilbert-Schmidt distance to the nearest zero-discord state.

    The default is the two-qubit closed form
    ``(|x|^2 + |T|^2 - k_max) / 4`` with k_max the largest eigenvalue
    of ``x x^T + T T^T``.  ``method="brute-force"`` instead minimizes
    the distance over the zero-discord set directly (exactly over the
    B-side blocks for each measurement basis, numerically over the
    basis direction) and serves as the validation oracle.
    """
    if rho.legs != (2, 2):
        raise DomainError(f"geometric_discord requires legs (2, 2), got {rho.legs}")
    if method == "closed-form":
        x, _, t = _bloch_decomposition(rho)
        k = np.outer(x, x) + t @ t.T
        kmax = float(np.linalg.eigvalsh(k)[-1])
        return float((x @ x + np.sum(t * t) - kmax) / 4.0)
    if method == "brute-force":
        blocks = _b_blocks(rho)
        pur = float(np.real(np.trace(rho.matrix @ rho.matrix)))

        def objective(nx, ny, nz):
            plus, minus = _post_blocks(blocks, nx, ny, nz)
            sq = np.abs(plus) ** 2
            sq_m = np.abs(minus) ** 2
            return pur - sq.sum(axis=(-2, -1)) - sq_m.sum(axis=(-2, -1))

        val, _, _ = _minimize_over_directions(objective, grid, refine_tol)
        return float(val)
    raise DomainError(f"unknown geometric_discord method {method!r}")


def concurrence(rho: DensityMatrix) -> float:
    """Wootters concurrence max(0, l1 - l2 - l3 - l4) of a two-qubit state."""
    if rho.legs != (2, 2):
        raise DomainError(f"concurrence requires legs (2, 2), got {rho.legs}")
    yy = np.kron(_SIGMA_Y, _SIGMA_Y)
    tilde = yy @ rho.matrix.conj() @ yy
    root = matrix_sqrt(rho.matrix)
    lam, _ = hermitian_eig(matrix_sqrt(root @ tilde @ root))
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def negativity(rho: DensityMatrix) -> float:
    """Sum of negative eigenvalues (absolute) of the partial transpose on B."""
    da, db = _require_bipartite(rho, "negativity")
    t = rho.matrix.reshape(da, db, da, db).transpose(0, 3, 2, 1).reshape(rho.dim, rho.dim)
    lam = np.linalg.eigvalsh(t)
    return float(np.clip(-lam, 0.0, None).sum())
