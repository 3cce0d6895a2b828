"""Local-operation protocols that turn classical correlations into dissonance.

Two pipelines, both starting from perfectly classically correlated
qubit pairs and ending in a separable Werner state with nonzero
discord:

* the two-pair Kraus protocol: correlated local channels on each side
  map the computational pair basis to flag-qubit x factor-state
  outputs, and tracing out the first pair leaves werner(z) for any
  z in (0, 1/3];
* the three-pair unitary protocol: controlled-preparation unitaries
  (8x8 per side) write the factor states onto the third pair, which
  works exactly when each component's two factors are orthogonal —
  only at z = 1/3.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qla import DensityMatrix, DomainError, partial_trace, trace_distance
from .states import cc_pairs, product_decomposition, werner
from .correlations import CorrelationReport, discord
from .witness import WitnessReport, witness_report

__all__ = [
    "ProtocolUnavailableError",
    "KrausChannel",
    "LocalUnitary",
    "ProtocolResult",
    "CertificationBundle",
    "build_kraus",
    "run_kraus_protocol",
    "build_unitary",
    "run_unitary_protocol",
    "conditional_block",
    "certify",
]

COMPLETENESS_TOL = 1e-10
UNITARITY_TOL = 1e-10
ORTHOGONALITY_TOL = 1e-8

# Flag bit written to the first qubit by the i-th operator of either side.
_FLAGS = (0, 0, 1, 1)


class ProtocolUnavailableError(RuntimeError):
    """The unitary protocol's orthogonality precondition fails at this z."""

    def __init__(self, z: float, residual: float):
        super().__init__(
            f"unitary protocol unavailable at z={z:.6g}: "
            f"factor overlap {residual:.3e} exceeds {ORTHOGONALITY_TOL}"
        )
        self.z = z
        self.residual = residual


def _side_factors(side: str, z: float):
    if side not in ("A", "B"):
        raise DomainError(f"side must be 'A' or 'B', got {side!r}")
    decomp = product_decomposition(z)
    pairs = decomp.factors
    if side == "A":
        return [p[0].vector for p in pairs], decomp
    return [p[1].vector for p in pairs], decomp


def _check_z(z: float, op: str) -> float:
    z = float(z)
    if not 0.0 < z <= 1.0 / 3.0:
        raise DomainError(f"{op}: z must lie in (0, 1/3], got {z}")
    return z


@dataclass(frozen=True)
class KrausChannel:
    """Four operators on one side's qubit pair, complete to 1e-10."""

    operators: tuple[np.ndarray, ...]
    side: str
    z: float

    def __post_init__(self):
        ops = tuple(np.asarray(m, dtype=complex) for m in self.operators)
        dim = ops[0].shape[1]
        total = sum(m.conj().T @ m for m in ops)
        err = np.abs(total - np.eye(dim)).max()
        if err > COMPLETENESS_TOL:
            raise DomainError(f"Kraus completeness violated by {err:.3e}")
        object.__setattr__(self, "operators", ops)


@dataclass(frozen=True)
class LocalUnitary:
    """Controlled-preparation unitary on one side's three qubits."""

    matrix: np.ndarray
    side: str
    z: float

    def __post_init__(self):
        u = np.asarray(self.matrix, dtype=complex)
        d = u.shape[0]
        err = max(
            np.abs(u.conj().T @ u - np.eye(d)).max(),
            np.abs(u @ u.conj().T - np.eye(d)).max(),
        )
        if err > UNITARITY_TOL:
            raise DomainError(f"unitarity violated by {err:.3e}")
        object.__setattr__(self, "matrix", u)


@dataclass
class ProtocolResult:
    """Input, intermediate, and traced-out states of one protocol run."""

    kind: str
    z: float
    initial: DensityMatrix
    post_operation: DensityMatrix
    final: DensityMatrix
    target: DensityMatrix
    trace_distance_to_target: float
    certification: "CertificationBundle | None" = None


@dataclass(frozen=True)
class CertificationBundle:
    """Correlation measures and witness verdicts for a protocol's output."""

    correlations: CorrelationReport
    witness: WitnessReport


def build_kraus(side: str, z: float) -> KrausChannel:
    """Channel mapping pair-basis state |b_i> to |flag_i> x |factor_i>.

    The flag bits are (0, 0, 1, 1); the factor is the side's qubit from
    the i-th product component.  Each operator is the outer product of
    a unit output vector with a computational basis bra, so the
    completeness sum is exactly the identity.
    """
    z = _check_z(z, "build_kraus")
    factors, _ = _side_factors(side, z)
    eye2 = np.eye(2, dtype=complex)
    eye4 = np.eye(4, dtype=complex)
    ops = []
    for i in range(4):
        out = np.kron(eye2[:, _FLAGS[i]], factors[i])
        ops.append(np.outer(out, eye4[:, i].conj()))
    return KrausChannel(operators=tuple(ops), side=side, z=z)


def run_kraus_protocol(z: float) -> ProtocolResult:
    """Run the two-pair protocol: correlated Kraus sum, then trace the first pair.

    The output equals werner(z) up to numerical noise for every
    z in (0, 1/3].
    """
    z = _check_z(z, "run_kraus_protocol")
    initial = cc_pairs(2)  # legs [A1, A2, B1, B2]
    ch_a = build_kraus("A", z)
    ch_b = build_kraus("B", z)
    post = np.zeros((16, 16), dtype=complex)
    for ma, mb in zip(ch_a.operators, ch_b.operators):
        k = np.kron(ma, mb)
        post += k @ initial.matrix @ k.conj().T
    post_dm = DensityMatrix(post, (2, 2, 2, 2))
    final = partial_trace(post_dm, (0, 2))
    target = werner(z)
    return ProtocolResult(
        kind="kraus",
        z=z,
        initial=initial,
        post_operation=post_dm,
        final=final,
        target=target,
        trace_distance_to_target=trace_distance(final, target),
    )


def build_unitary(side: str, z: float) -> LocalUnitary:
    """Controlled preparation |mn>|0> -> |mn>|first factor>, |mn>|1> -> |mn>|second>.

    On side A the first/second prepared states are the A/B factors of
    component 2m+n; side B swaps the two roles.  Unitarity requires the
    two factors of each component to be orthogonal, which holds only at
    z = 1/3; elsewhere ProtocolUnavailableError is raised.
    """
    z = _check_z(z, "build_unitary")
    if side not in ("A", "B"):
        raise DomainError(f"side must be 'A' or 'B', got {side!r}")
    decomp = product_decomposition(z)
    overlaps = [
        abs(np.vdot(left.vector, right.vector)) for left, right in decomp.factors
    ]
    worst = max(overlaps)
    if worst > ORTHOGONALITY_TOL:
        raise ProtocolUnavailableError(z, worst)
    eye2 = np.eye(2, dtype=complex)
    u = np.zeros((8, 8), dtype=complex)
    for m in range(2):
        for n in range(2):
            k = 2 * m + n
            left, right = (v.vector for v in decomp.factors[k])
            if side == "B":
                left, right = right, left
            block = np.outer(left, eye2[:, 0].conj()) + np.outer(right, eye2[:, 1].conj())
            control = np.kron(
                np.outer(eye2[:, m], eye2[:, m].conj()),
                np.outer(eye2[:, n], eye2[:, n].conj()),
            )
            u += np.kron(control, block)
    return LocalUnitary(matrix=u, side=side, z=z)


def run_unitary_protocol(z: float) -> ProtocolResult:
    """Run the three-pair protocol: local unitaries, then trace the control pairs."""
    z = _check_z(z, "run_unitary_protocol")
    u_a = build_unitary("A", z)
    u_b = build_unitary("B", z)
    initial = cc_pairs(3)  # legs [A1, A2, A3, B1, B2, B3]
    w = np.kron(u_a.matrix, u_b.matrix)
    post = w @ initial.matrix @ w.conj().T
    post_dm = DensityMatrix(post, (2, 2, 2, 2, 2, 2))
    final = partial_trace(post_dm, (0, 1, 3, 4))
    target = werner(z)
    return ProtocolResult(
        kind="unitary",
        z=z,
        initial=initial,
        post_operation=post_dm,
        final=final,
        target=target,
        trace_distance_to_target=trace_distance(final, target),
    )


def conditional_block(state: DensityMatrix, m: int, n: int) -> np.ndarray:
    """Normalized third-pair block after projecting both control pairs on |mn>.

    For the unitary protocol's intermediate state this is the uniform
    two-branch mixture (first x second + second x first)/2 of component
    2m+n's factor projectors.
    """
    if state.legs != (2, 2, 2, 2, 2, 2):
        raise DomainError(f"conditional_block expects six qubit legs, got {state.legs}")
    if m not in (0, 1) or n not in (0, 1):
        raise DomainError(f"control labels must be bits, got ({m}, {n})")
    eye2 = np.eye(2, dtype=complex)
    sel = np.kron(eye2[:, m], eye2[:, n]).reshape(4, 1)
    iso = np.kron(sel, eye2)  # 8x2: |psi> -> |mn> x |psi>
    both = np.kron(iso, iso)  # 64x4
    block = both.conj().T @ state.matrix @ both
    p = float(np.real(np.trace(block)))
    if p < 1e-14:
        raise DomainError(f"control outcome ({m}, {n}) has vanishing probability")
    return block / p


def certify(result: ProtocolResult) -> CertificationBundle:
    """Measure and witness the protocol output; stores and returns the bundle."""
    bundle = CertificationBundle(
        correlations=discord(result.final),
        witness=witness_report(result.final),
    )
    result.certification = bundle
    return bundle
