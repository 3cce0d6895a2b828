import numpy as np
import pytest

from qdissonance import (
    DensityMatrix,
    DomainError,
    PhaseSolution,
    PureState,
    bell,
    cc_pairs,
    cc_state,
    cq_state,
    eta_states,
    explicit_factors_z13,
    factor_pure,
    partial_trace,
    phase_equation_residual,
    product_decomposition,
    projector,
    solve_phases,
    tensor,
    trace_distance,
    werner,
)

SEED = 7100
Z_GRID = [0.0, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 1.0 / 3.0]


def _canon_phase(v):
    idx = int(np.argmax(np.abs(v) > 1e-8))
    return v / (v[idx] / abs(v[idx]))


def test_bell_states():
    s2 = 1 / np.sqrt(2)
    assert np.allclose(bell("psi-").vector, [0, s2, -s2, 0])
    assert np.allclose(bell("psi+").vector, [0, s2, s2, 0])
    assert np.allclose(bell("phi+").vector, [s2, 0, 0, s2])
    assert np.allclose(bell("phi-").vector, [s2, 0, 0, -s2])
    names = ("psi+", "psi-", "phi+", "phi-")
    for a in names:
        for b in names:
            ref = 1.0 if a == b else 0.0
            assert abs(np.vdot(bell(a).vector, bell(b).vector) - ref) < 1e-15
    for name in names:
        rho = projector(bell(name))
        for leg in (0, 1):
            red = partial_trace(rho, (leg,))
            assert np.abs(red.matrix - np.eye(2) / 2).max() < 1e-15
    with pytest.raises(DomainError):
        bell("omega")


def test_werner_eigenvalues():
    for z in Z_GRID + [0.5, 1.0]:
        lam = np.sort(np.linalg.eigvalsh(werner(z).matrix))
        expect = np.sort([(1 + 3 * z) / 4, (1 - z) / 4, (1 - z) / 4, (1 - z) / 4])
        assert np.abs(lam - expect).max() < 1e-12
    assert np.abs(werner(0.0).matrix - np.eye(4) / 4).max() < 1e-15
    psim = bell("psi-").vector
    assert np.abs(werner(1.0).matrix - np.outer(psim, psim.conj())).max() < 1e-15
    with pytest.raises(DomainError):
        werner(-0.01)
    with pytest.raises(DomainError):
        werner(1.01)


def test_solve_phases_branch():
    sol = solve_phases(0.0)
    assert sol.theta1 == 0.0
    assert sol.theta2 == pytest.approx(np.pi / 2)
    assert sol.theta3 == pytest.approx(np.pi / 4)
    assert sol.theta4 == pytest.approx(3 * np.pi / 4)
    sol13 = solve_phases(1.0 / 3.0)
    assert sol13.theta3 == pytest.approx(np.pi / 2)
    assert sol13.theta4 == pytest.approx(np.pi / 2)
    for z in Z_GRID:
        assert solve_phases(z).residual() <= 1e-10
    with pytest.raises(DomainError):
        solve_phases(0.4)
    with pytest.raises(DomainError):
        solve_phases(-0.1)


def test_phase_solution_rejects_bad_phases():
    with pytest.raises(DomainError):
        PhaseSolution(z=0.2, theta1=0.0, theta2=0.0, theta3=0.0, theta4=0.0)
    assert phase_equation_residual((0, 0, 0, 0), 0.2) == pytest.approx(4.0)


def test_eta_states_identities():
    for z in Z_GRID:
        etas = eta_states(z)
        recon = np.zeros((4, 4), dtype=complex)
        for j, ej in enumerate(etas):
            assert abs(np.vdot(ej.vector, ej.vector) - 0.25) < 1e-10
            for k, ek in enumerate(etas):
                if j != k:
                    assert abs(np.vdot(ej.vector, ek.vector) - z / 4) < 1e-10
            recon += np.outer(ej.vector, ej.vector.conj())
        assert np.abs(recon - werner(z).matrix).max() < 1e-10
    assert np.abs(
        sum(np.outer(e.vector, e.vector.conj()) for e in eta_states(0.0)) - np.eye(4) / 4
    ).max() < 1e-12
    with pytest.raises(DomainError):
        eta_states(0.34)


def test_eta_states_z13_match_explicit_product():
    etas = eta_states(1.0 / 3.0)
    pairs = explicit_factors_z13()
    for j in range(4):
        assert abs(4 * np.vdot(etas[j].vector, etas[j].vector) - 1.0) < 1e-12
        target = 0.5 * np.kron(pairs[j][0].vector, pairs[j][1].vector)
        assert np.abs(etas[j].vector - target).max() < 1e-9


def test_factor_pure_examples():
    ket01 = PureState(np.array([0, 1, 0, 0], dtype=complex), (2, 2))
    fac = factor_pure(ket01)
    assert np.allclose(fac.left.vector, [1, 0])
    assert np.allclose(fac.right.vector, [0, 1])
    assert fac.residual == pytest.approx(0.0, abs=1e-15)

    singlet = bell("psi-")
    fac = factor_pure(singlet)
    assert fac.residual == pytest.approx(1 / np.sqrt(2), abs=1e-12)
    with pytest.raises(DomainError):
        factor_pure(singlet, strict=True)

    with pytest.raises(DomainError):
        factor_pure(PureState(np.array([1.0, 0, 0, 0, 0, 0]), (2, 3)))
    with pytest.raises(DomainError):
        factor_pure(PureState(0.5 * np.array([1.0, 0, 0, 0]), (2, 2), normalized=False))


def test_factor_pure_random_products():
    rng = np.random.default_rng(SEED)
    for _ in range(200):
        u = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        u /= np.linalg.norm(u)
        v /= np.linalg.norm(v)
        state = PureState(np.kron(u, v), (2, 2))
        fac = factor_pure(state, strict=True)
        assert fac.residual < 1e-12
        assert np.abs(fac.left.vector - _canon_phase(u)).max() < 1e-10
        assert np.abs(fac.right.vector - _canon_phase(v)).max() < 1e-10
        rebuilt = np.exp(1j * fac.phase) * np.kron(fac.left.vector, fac.right.vector)
        assert np.abs(rebuilt - state.vector).max() < 1e-10


def test_explicit_factors_identities():
    pairs = explicit_factors_z13()
    assert len(pairs) == 4
    for a, b in pairs:
        assert abs(np.linalg.norm(a.vector) - 1) < 1e-12
        assert abs(np.linalg.norm(b.vector) - 1) < 1e-12
        assert abs(np.vdot(a.vector, b.vector)) < 1e-10
    for j in range(4):
        for k in range(4):
            if j == k:
                continue
            cross = np.vdot(pairs[j][0].vector, pairs[k][0].vector) * np.vdot(
                pairs[j][1].vector, pairs[k][1].vector
            )
            assert abs(cross - 1.0 / 3.0) < 1e-10
    mix = sum(
        0.25
        * np.kron(
            np.outer(a.vector, a.vector.conj()), np.outer(b.vector, b.vector.conj())
        )
        for a, b in pairs
    )
    assert np.abs(mix - werner(1.0 / 3.0).matrix).max() < 1e-10


def test_product_decomposition_invariants():
    for z in Z_GRID:
        dec = product_decomposition(z)
        assert dec.z == pytest.approx(z)
        recon = np.zeros((4, 4), dtype=complex)
        for eta, (left, right), phase in zip(dec.etas, dec.factors, dec.phases):
            pair = eta.norm() * np.exp(1j * phase) * np.kron(left.vector, right.vector)
            assert np.abs(pair - eta.vector).max() < 1e-10
            recon += np.outer(eta.vector, eta.vector.conj())
        assert np.abs(recon - werner(z).matrix).max() < 1e-10
    with pytest.raises(DomainError):
        product_decomposition(0.35)


def test_product_decomposition_z02_trace_distance():
    dec = product_decomposition(0.2)
    recon = sum(np.outer(e.vector, e.vector.conj()) for e in dec.etas)
    assert trace_distance(DensityMatrix(recon, (2, 2)), werner(0.2)) <= 1e-10


def test_product_decomposition_z13_matches_explicit():
    dec = product_decomposition(1.0 / 3.0)
    pairs = explicit_factors_z13()
    for j in range(4):
        assert np.abs(dec.factors[j][0].vector - _canon_phase(pairs[j][0].vector)).max() < 1e-9
        assert np.abs(dec.factors[j][1].vector - _canon_phase(pairs[j][1].vector)).max() < 1e-9


def test_cc_state():
    rho = cc_state(np.diag([0.5, 0.5]))
    expect = np.zeros((4, 4))
    expect[0, 0] = 0.5
    expect[3, 3] = 0.5
    assert np.abs(rho.matrix - expect).max() < 1e-15
    assert rho.legs == (2, 2)

    pure = cc_state(np.array([[0.0, 1.0], [0.0, 0.0]]))
    assert np.linalg.matrix_rank(pure.matrix, tol=1e-12) == 1

    with pytest.raises(DomainError):
        cc_state(np.array([[0.6, 0.0], [0.0, 0.5]]))  # sums to 1.1
    with pytest.raises(DomainError):
        cc_state(np.array([[-0.1, 0.6], [0.0, 0.5]]))
    with pytest.raises(DomainError):
        cc_state(np.diag([0.5, 0.5]), basis_a=[np.array([1, 0]), np.array([1, 1])])
    with pytest.raises(DomainError):
        cc_state(np.array([0.5, 0.5]))  # 1-D table


def test_cc_state_custom_bases():
    plus = np.array([1, 1]) / np.sqrt(2)
    minus = np.array([1, -1]) / np.sqrt(2)
    rho = cc_state(np.diag([0.5, 0.5]), basis_a=[plus, minus], basis_b=[plus, minus])
    pp = np.outer(plus, plus.conj())
    mm = np.outer(minus, minus.conj())
    expect = 0.5 * np.kron(pp, pp) + 0.5 * np.kron(mm, mm)
    assert np.abs(rho.matrix - expect).max() < 1e-14


def test_cq_state():
    sigma = DensityMatrix(np.array([[0.7, 0.1], [0.1, 0.3]], dtype=complex))
    rho = cq_state([0.5, 0.5], None, [sigma, sigma])
    marg = partial_trace(rho, (1,))
    assert np.abs(rho.matrix - np.kron(marg.matrix, sigma.matrix)).max() < 1e-14

    proj0 = DensityMatrix(np.diag([1.0, 0.0]))
    proj1 = DensityMatrix(np.diag([0.0, 1.0]))
    assert np.abs(
        cq_state([0.5, 0.5], None, [proj0, proj1]).matrix - cc_state(np.diag([0.5, 0.5])).matrix
    ).max() < 1e-15

    with pytest.raises(DomainError):
        cq_state([0.5, 0.6], None, [sigma, sigma])
    with pytest.raises(DomainError):
        cq_state([0.5, 0.5], None, [sigma])
    with pytest.raises(DomainError):
        cq_state([0.5, 0.5], None, [sigma, sigma.matrix])


def test_cc_pairs():
    two = cc_pairs(2)
    assert two.dim == 16
    assert two.legs == (2, 2, 2, 2)
    assert np.linalg.matrix_rank(two.matrix, tol=1e-10) == 4
    # each correlated pair marginal is the uniform CC state
    pair = cc_state(np.diag([0.5, 0.5]))
    assert np.abs(partial_trace(two, (1, 3)).matrix - pair.matrix).max() < 1e-14
    assert np.abs(partial_trace(two, (0, 2)).matrix - pair.matrix).max() < 1e-14

    three = cc_pairs(3)
    assert three.dim == 64
    assert np.linalg.matrix_rank(three.matrix, tol=1e-10) == 8
    assert three.purity() == pytest.approx(1.0 / 8.0, abs=1e-12)

    with pytest.raises(DomainError):
        cc_pairs(4)


def test_cc_pairs_leg_order():
    # diagonal weight sits on |ii'> x |ii'>, i.e. A-string equals B-string
    two = cc_pairs(2)
    diag = np.real(np.diag(two.matrix)).reshape(2, 2, 2, 2)
    for a1 in range(2):
        for a2 in range(2):
            for b1 in range(2):
                for b2 in range(2):
                    expect = 0.25 if (a1 == b1 and a2 == b2) else 0.0
                    assert diag[a1, a2, b1, b2] == pytest.approx(expect, abs=1e-14)
