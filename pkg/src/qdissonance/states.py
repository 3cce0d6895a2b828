"""State constructors.

Classically correlated (CC/CQ) states, Bell states, the Werner family,
and the explicit separable product decomposition of Werner states for
mixing parameters z in [0, 1/3]: four unnormalized components eta_j
(norm 1/2 each) that sum to the Werner state and factor into qubit
pairs (Psi_j, Phi_j) once the relative phases are chosen correctly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .qla import DensityMatrix, DomainError, PureState, tensor, permute_legs

__all__ = [
    "PhaseSolution",
    "PureFactorization",
    "ProductDecomposition",
    "cc_state",
    "cq_state",
    "bell",
    "werner",
    "solve_phases",
    "phase_equation_residual",
    "eta_states",
    "factor_pure",
    "explicit_factors_z13",
    "product_decomposition",
    "cc_pairs",
]

_BELL_NAMES = ("psi+", "psi-", "phi+", "phi-")

# Residual tolerances used by the constructors below.
PHASE_EQ_TOL = 1e-10
FACTOR_STRICT_TOL = 1e-8
RECONSTRUCTION_TOL = 1e-10


def _basis_vectors(d: int) -> list[np.ndarray]:
    return [np.eye(d, dtype=complex)[:, i] for i in range(d)]


def _check_orthonormal(vecs: Sequence[np.ndarray], d: int, name: str) -> list[np.ndarray]:
    vecs = [np.asarray(v, dtype=complex).reshape(-1) for v in vecs]
    if len(vecs) != d or any(v.shape != (d,) for v in vecs):
        raise DomainError(f"{name}: expected {d} vectors of dimension {d}")
    gram = np.array([[np.vdot(a, b) for b in vecs] for a in vecs])
    if np.abs(gram - np.eye(d)).max() > 1e-10:
        raise DomainError(f"{name}: vectors are not orthonormal")
    return vecs


def cc_state(p, basis_a=None, basis_b=None) -> DensityMatrix:
    """Classical-classical state sum_ij p_ij |a_i><a_i| x |b_j><b_j|.

    ``p`` is a d_A x d_B probability table (nonnegative, summing to 1);
    the bases default to the computational ones.  CC states have zero
    discord with respect to either side.
    """
    p = np.asarray(p, dtype=float)
    if p.ndim != 2:
        raise DomainError(f"cc_state: probability table must be 2-D, got shape {p.shape}")
    if p.min() < 0:
        raise DomainError(f"cc_state: negative probability {p.min():.3e}")
    if abs(p.sum() - 1.0) > 1e-12:
        raise DomainError(f"cc_state: probabilities sum to {p.sum():.15g}, expected 1")
    da, db = p.shape
    avecs = _basis_vectors(da) if basis_a is None else _check_orthonormal(basis_a, da, "basis_a")
    bvecs = _basis_vectors(db) if basis_b is None else _check_orthonormal(basis_b, db, "basis_b")
    rho = np.zeros((da * db, da * db), dtype=complex)
    for i in range(da):
        pa = np.outer(avecs[i], avecs[i].conj())
        for j in range(db):
            if p[i, j] == 0.0:
                continue
            pb = np.outer(bvecs[j], bvecs[j].conj())
            rho += p[i, j] * np.kron(pa, pb)
    return DensityMatrix(rho, (da, db))


def cq_state(p, basis_a, states_b: Sequence[DensityMatrix]) -> DensityMatrix:
    """Classical-quantum state sum_i p_i |a_i><a_i| x rho_B^(i).

    Orthonormal on the A side, arbitrary density matrices on the B
    side; zero discord with respect to measurements on A.
    """
    p = np.asarray(p, dtype=float).reshape(-1)
    if p.min() < 0:
        raise DomainError(f"cq_state: negative probability {p.min():.3e}")
    if abs(p.sum() - 1.0) > 1e-12:
        raise DomainError(f"cq_state: probabilities sum to {p.sum():.15g}, expected 1")
    da = p.shape[0]
    avecs = _basis_vectors(da) if basis_a is None else _check_orthonormal(basis_a, da, "basis_a")
    if len(states_b) != da:
        raise DomainError(f"cq_state: need {da} B-side states, got {len(states_b)}")
    if not all(isinstance(s, DensityMatrix) for s in states_b):
        raise DomainError("cq_state: states_b must be DensityMatrix instances")
    db = states_b[0].dim
    if any(s.dim != db for s in states_b):
        raise DomainError("cq_state: B-side states differ in dimension")
    rho = np.zeros((da * db, da * db), dtype=complex)
    for i in range(da):
        if p[i] == 0.0:
            continue
        pa = np.outer(avecs[i], avecs[i].conj())
        rho += p[i] * np.kron(pa, states_b[i].matrix)
    return DensityMatrix(rho, (da, db))


def bell(which: str) -> PureState:
    """One of the four Bell states: 'psi+', 'psi-', 'phi+', 'phi-'."""
    s2 = 1.0 / np.sqrt(2.0)
    table = {
        "psi+": np.array([0, s2, s2, 0], dtype=complex),
        "psi-": np.array([0, s2, -s2, 0], dtype=complex),
        "phi+": np.array([s2, 0, 0, s2], dtype=complex),
        "phi-": np.array([s2, 0, 0, -s2], dtype=complex),
    }
    key = which.lower()
    if key not in table:
        raise DomainError(f"unknown Bell state {which!r}; choose from {_BELL_NAMES}")
    return PureState(table[key], (2, 2))


def werner(z: float) -> DensityMatrix:
    """Werner state z |psi-><psi-| + (1-z)/4 * I, for z in [0, 1]."""
    z = float(z)
    if not 0.0 <= z <= 1.0:
        raise DomainError(f"werner: z must lie in [0, 1], got {z}")
    psim = bell("psi-").vector
    rho = z * np.outer(psim, psim.conj()) + (1.0 - z) / 4.0 * np.eye(4)
    return DensityMatrix(rho, (2, 2))


def phase_equation_residual(thetas: Sequence[float], z: float) -> float:
    """|e^{-2i t1}(1+3z) + (e^{-2i t2}+e^{-2i t3}+e^{-2i t4})(1-z)|."""
    t1, t2, t3, t4 = (float(t) for t in thetas)
    val = np.exp(-2j * t1) * (1.0 + 3.0 * z) + (
        np.exp(-2j * t2) + np.exp(-2j * t3) + np.exp(-2j * t4)
    ) * (1.0 - z)
    return float(abs(val))


@dataclass(frozen=True)
class PhaseSolution:
    """Relative phases making all four decomposition components product states.

    The four angles satisfy
    ``|e^{-2i t1}(1+3z) + (e^{-2i t2}+e^{-2i t3}+e^{-2i t4})(1-z)| <= 1e-10``.
    """

    z: float
    theta1: float
    theta2: float
    theta3: float
    theta4: float

    def __post_init__(self):
        res = self.residual()
        if res > PHASE_EQ_TOL:
            raise DomainError(f"phase equation residual {res:.3e} exceeds {PHASE_EQ_TOL}")

    @property
    def thetas(self) -> tuple[float, float, float, float]:
        return (self.theta1, self.theta2, self.theta3, self.theta4)

    def residual(self) -> float:
        return phase_equation_residual(self.thetas, self.z)


def solve_phases(z: float) -> PhaseSolution:
    """Canonical phase branch: t1 = 0, t2 = pi/2, t3 in [pi/4, pi/2],
    t4 the reflection with cos(t4) = -cos(t3) and the same positive sine.
    """
    z = float(z)
    if not 0.0 <= z <= 1.0 / 3.0:
        raise DomainError(f"solve_phases: z must lie in [0, 1/3], got {z}")
    s = np.sqrt((1.0 + z) / (2.0 * (1.0 - z)))
    c = np.sqrt((1.0 - 3.0 * z) / (2.0 * (1.0 - z)))
    return PhaseSolution(
        z=z,
        theta1=0.0,
        theta2=np.pi / 2.0,
        theta3=float(np.arctan2(s, c)),
        theta4=float(np.arctan2(s, -c)),
    )


# Sign patterns attaching the four phased Bell-like vectors to each
# component; row j gives the signs used in eta_j.
_ETA_SIGNS = (
    (1, 1, 1, 1),
    (1, 1, -1, -1),
    (1, -1, 1, -1),
    (1, -1, -1, 1),
)


def _x_vectors(z: float) -> list[np.ndarray]:
    return [
        np.sqrt(1.0 + 3.0 * z) / 2j * bell("psi-").vector,
        np.sqrt(1.0 - z) / 2.0 * bell("psi+").vector,
        np.sqrt(1.0 - z) / 2.0 * bell("phi-").vector,
        np.sqrt(1.0 - z) / 2j * bell("phi+").vector,
    ]


def eta_states(z: float) -> tuple[PureState, PureState, PureState, PureState]:
    """The four unnormalized mixture components of the separable Werner state.

    Each has squared norm 1/4, mutual overlaps z/4, and the four outer
    products sum to ``werner(z)``.  With the canonical phases every
    component is a product state (norm-1/2 multiple of a qubit pair).
    """
    z = float(z)
    if not 0.0 <= z <= 1.0 / 3.0:
        raise DomainError(f"eta_states: z must lie in [0, 1/3], got {z}")
    xs = _x_vectors(z)
    phases = np.exp(1j * np.array(solve_phases(z).thetas))
    etas = []
    for signs in _ETA_SIGNS:
        v = sum(s * ph * x for s, ph, x in zip(signs, phases, xs)) / 2.0
        etas.append(PureState(v, (2, 2), normalized=False))
    return tuple(etas)


@dataclass(frozen=True)
class PureFactorization:
    """Result of splitting a two-qubit vector into a product of qubit factors.

    ``left`` and ``right`` are normalized with the first sizable
    amplitude of each made real-positive; ``phase`` is the extracted
    overall phase, so the input vector equals
    ``norm * e^{i phase} * left x right`` up to ``residual`` (the
    second Schmidt coefficient, 0 exactly for product states).
    """

    left: PureState
    right: PureState
    phase: float
    residual: float


def _fix_phase(v: np.ndarray) -> tuple[np.ndarray, complex]:
    idx = int(np.argmax(np.abs(v) > 1e-8))
    ph = v[idx] / abs(v[idx])
    return v / ph, ph


def factor_pure(state: PureState, strict: bool = False) -> PureFactorization:
    """Factor a normalized two-qubit pure state via its 2x2 Schmidt form.

    ``residual`` is the second singular value of the reshaped
    coefficient matrix: 0 iff the state is a product state, up to
    1/sqrt(2) for a maximally entangled one.  With ``strict=True`` a
    residual above 1e-8 raises instead of being reported.
    """
    if state.legs != (2, 2):
        raise DomainError(f"factor_pure expects legs (2, 2), got {state.legs}")
    if not state.normalized:
        raise DomainError("factor_pure expects a normalized PureState")
    m = state.vector.reshape(2, 2)
    u, s, vh = np.linalg.svd(m)
    residual = float(s[1])
    if strict and residual > FACTOR_STRICT_TOL:
        raise DomainError(
            f"not a product state: Schmidt residual {residual:.3e} exceeds {FACTOR_STRICT_TOL}"
        )
    left, ph_l = _fix_phase(u[:, 0])
    right, ph_r = _fix_phase(vh[0, :])
    # s[0] carries the norm; the remaining unit phase is what the two
    # canonicalizations stripped from the rank-1 term s0 * u0 x v0.
    phase = float(np.angle(s[0] * ph_l * ph_r))
    return PureFactorization(
        left=PureState(left, (2,)),
        right=PureState(right, (2,)),
        phase=phase,
        residual=residual,
    )


def explicit_factors_z13() -> tuple[tuple[PureState, PureState], ...]:
    """Hard-coded factor pairs of the four components at z = 1/3.

    Amplitudes are built from kappa = sqrt((3+sqrt(3))/12) and
    kbar = sqrt((3-sqrt(3))/12); within each pair the two factors are
    orthogonal, and the uniform mixture of the four projector products
    reproduces ``werner(1/3)``.
    """
    r3 = np.sqrt(3.0)
    kap = np.sqrt((3.0 + r3) / 12.0)
    kbar = np.sqrt((3.0 - r3) / 12.0)
    pairs_raw = (
        (kap * 1j * np.array([1 - r3, -(1 + 1j)]), kap * np.array([1j - 1, r3 - 1])),
        (kap * 1j * np.array([1 - r3, 1 + 1j]), kap * np.array([1 - 1j, r3 - 1])),
        (kbar * -1j * np.array([r3 + 1, 1 - 1j]), kbar * np.array([-(1 + 1j), r3 + 1])),
        (kbar * -1j * np.array([r3 + 1, 1j - 1]), kbar * np.array([1 + 1j, r3 + 1])),
    )
    return tuple(
        (PureState(a, (2,)), PureState(b, (2,))) for a, b in pairs_raw
    )


@dataclass(frozen=True)
class ProductDecomposition:
    """Separable Werner state written as a sum of four product components.

    ``etas[j]`` equals ``1/2 * e^{i phases[j]} * factors[j][0] x factors[j][1]``;
    the outer products of the etas sum to ``werner(z)``.
    """

    z: float
    etas: tuple[PureState, ...]
    factors: tuple[tuple[PureState, PureState], ...]
    phases: tuple[float, ...]


def product_decomposition(z: float) -> ProductDecomposition:
    """Decompose werner(z), z in [0, 1/3], into four product components.

    Solves the phase constraint, builds the components, factors each
    one strictly, and re-verifies the reconstruction before returning.
    """
    z = float(z)
    if not 0.0 <= z <= 1.0 / 3.0:
        raise DomainError(f"product_decomposition: z must lie in [0, 1/3], got {z}")
    etas = eta_states(z)
    factors = []
    phases = []
    recon = np.zeros((4, 4), dtype=complex)
    for eta in etas:
        nrm = eta.norm()
        unit = PureState(eta.vector / nrm, (2, 2))
        fac = factor_pure(unit, strict=True)
        factors.append((fac.left, fac.right))
        phases.append(fac.phase)
        recon += np.outer(eta.vector, eta.vector.conj())
        pair = nrm * np.exp(1j * fac.phase) * np.kron(fac.left.vector, fac.right.vector)
        if np.abs(pair - eta.vector).max() > RECONSTRUCTION_TOL:
            raise DomainError("factorization does not reproduce its component")
    err = np.abs(recon - werner(z).matrix).max()
    if err > RECONSTRUCTION_TOL:
        raise DomainError(f"decomposition reconstruction error {err:.3e}")
    return ProductDecomposition(
        z=z, etas=etas, factors=tuple(factors), phases=tuple(phases)
    )


def cc_pairs(k: int) -> DensityMatrix:
    """k perfectly correlated qubit pairs, legs ordered [A_1..A_k, B_1..B_k].

    Each (A_j, B_j) pair is the uniform CC state; pairs are mutually
    uncorrelated.  Rank 2^k, purity 2^-k.
    """
    if k not in (2, 3):
        raise DomainError(f"cc_pairs: k must be 2 or 3, got {k}")
    pair = cc_state(np.diag([0.5, 0.5]))
    rho = pair
    for _ in range(k - 1):
        rho = tensor(rho, pair)
    # Built as [A_1, B_1, A_2, B_2, ...]; regroup to all-A-then-all-B.
    perm = tuple(2 * j for j in range(k)) + tuple(2 * j + 1 for j in range(k))
    return permute_legs(rho, perm)
