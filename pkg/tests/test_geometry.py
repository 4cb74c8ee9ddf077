"""Tests for the flat-torus calculus: spectral fields, connections, curvature."""

import numpy as np
import pytest

from sympdirac import fock as fk
from sympdirac import geometry as ge
from sympdirac import mpc
from sympdirac import symplinalg as sl

RNG_SEED = 20260814


def small_torus(n=1, hbar=0.7, cutoff=4, grid=None):
    m = sl.standard_model(n, hbar=hbar)
    return ge.torus_model(m, cutoff, grid)


# ---------------------------------------------------------------------------
# grids, spectral derivatives, band-limited fields


def test_torus_model_validation():
    m = sl.standard_model(1, hbar=0.5)
    t = ge.torus_model(m, 4)
    assert t.grid_size == 13 and t.nyquist == 6
    t = ge.torus_model(m, 3)  # 3*3+1 = 10 is even, bumped to 11
    assert t.grid_size == 11
    with pytest.raises(ValueError):
        ge.torus_model(m, 4, grid_size=11)
    with pytest.raises(ValueError):
        ge.torus_model(m, 4, grid_size=14)
    with pytest.raises(ValueError):
        ge.torus_model(m, 0)


def test_spectral_derivative_exact_on_trig():
    t = small_torus()
    x = ge.grid_points(t)
    f = np.sin(2 * x[..., 0]) * np.cos(3 * x[..., 1])
    d0 = ge.partial_derivative(t, f, 0)
    d1 = ge.partial_derivative(t, f, 1)
    assert np.abs(d0 - 2 * np.cos(2 * x[..., 0]) * np.cos(3 * x[..., 1])).max() < 1e-13
    assert np.abs(d1 + 3 * np.sin(2 * x[..., 0]) * np.sin(3 * x[..., 1])).max() < 1e-13


def test_spectral_derivative_product_rule_within_budget():
    # cutoff-2 times cutoff-3 products stay below the Nyquist index 6
    t = small_torus()
    rng = np.random.default_rng(RNG_SEED)
    f = ge.random_scalar_field(t, rng, cutoff=2)
    g = ge.random_scalar_field(t, rng, cutoff=3)
    lhs = ge.partial_derivative(t, f * g, 0)
    rhs = ge.partial_derivative(t, f, 0) * g + f * ge.partial_derivative(t, g, 0)
    assert np.abs(lhs - rhs).max() < 1e-12


def test_grid_mean_integrates_trig_exactly():
    t = small_torus()
    assert abs(ge.trig_field(t, [1, 2], "cos").mean()) < 1e-15
    assert abs(ge.trig_field(t, [5, -3], "sin").mean()) < 1e-14
    assert ge.trig_field(t, [0, 0], "cos").mean() == pytest.approx(1.0)


def test_random_scalar_field_band_and_reality():
    t = small_torus()
    rng = np.random.default_rng(RNG_SEED)
    f = ge.random_scalar_field(t, rng, cutoff=2)
    assert not np.iscomplexobj(f)
    assert ge.band_mass_outside(t, f, 2) < 1e-12
    assert ge.band_mass_outside(t, f, 1) > 1e-3
    h = ge.random_scalar_field(t, rng, cutoff=2, imaginary=True)
    assert np.abs(h.real).max() < 1e-15
    with pytest.raises(ValueError):
        ge.random_scalar_field(t, rng, cutoff=t.nyquist + 1)


def test_mode_coefficients_roundtrip():
    t = small_torus()
    rng = np.random.default_rng(RNG_SEED + 1)
    f = ge.random_vector_field(t, rng, cutoff=2)
    spec = ge.mode_coefficients(t, f)
    back = np.fft.ifftn(spec * t.grid_size**t.dim, axes=(0, 1))
    assert np.abs(back - f).max() < 1e-12


# ---------------------------------------------------------------------------
# connections


def test_make_connection_validation_and_unitary_flag():
    t = small_torus()
    rng = np.random.default_rng(RNG_SEED)
    d = t.dim
    conn = ge.random_connection(t, rng, cutoff=1, unitary=True)
    assert conn.unitary
    conn2 = ge.random_connection(t, rng, cutoff=1, unitary=False)
    assert not conn2.unitary
    assert ge.flat_connection(t).unitary
    bad = np.zeros((d,) + t.grid_shape + (d, d))
    bad[0, ..., 0, 0] = 1.0  # not in sp(2, R)
    with pytest.raises(ValueError):
        ge.make_connection(t, bad, np.zeros((d,) + t.grid_shape))
    with pytest.raises(ValueError):
        ge.make_connection(t, np.zeros((d,) + t.grid_shape + (d, d)),
                           np.full((d,) + t.grid_shape, 0.3))
    with pytest.raises(ValueError):
        ge.make_connection(t, np.zeros((3,) + t.grid_shape + (d, d)),
                           np.zeros((d,) + t.grid_shape))


def test_connection_from_modes_matches_manual():
    t = small_torus()
    m = t.model
    gmodes = [(0, [1, 0], "cos", 0.3 * m.j), (1, [0, 2], "sin", -0.2 * m.j)]
    amodes = [(1, [1, 0], "sin", 0.4j)]
    conn = ge.connection_from_modes(t, gmodes, amodes)
    x = ge.grid_points(t)
    assert np.abs(conn.Gamma[0] - 0.3 * np.cos(x[..., 0])[..., None, None] * m.j).max() < 1e-14
    assert np.abs(conn.a[1] - 0.4j * np.sin(x[..., 0])).max() < 1e-14
    assert conn.unitary
    with pytest.raises(ValueError):
        ge.connection_from_modes(t, [(0, [1, 0], "cos", np.eye(2))], [])
    with pytest.raises(ValueError):
        ge.connection_from_modes(t, [], [(0, [1, 0], "cos", 0.5)])


def test_vector_cov_deriv_flat_is_partial():
    t = small_torus()
    rng = np.random.default_rng(RNG_SEED)
    X = ge.random_vector_field(t, rng, cutoff=2)
    flat = ge.flat_connection(t)
    for b in range(t.dim):
        assert np.abs(ge.vector_cov_deriv(flat, X, b)
                      - ge.partial_derivative(t, X, b)).max() < 1e-13


def test_symplectic_form_is_parallel():
    # d_b w(X, Y) = w(nabla_b X, Y) + w(X, nabla_b Y) for sp-valued Gamma
    t = small_torus()
    rng = np.random.default_rng(RNG_SEED + 2)
    for unitary in (True, False):
        conn = ge.random_connection(t, rng, cutoff=1, unitary=unitary)
        X = ge.random_vector_field(t, rng, cutoff=2)
        Y = ge.random_vector_field(t, rng, cutoff=2)
        for b in range(t.dim):
            lhs = ge.partial_derivative(t, ge.omega_pairing(t, X, Y), b)
            rhs = ge.omega_pairing(t, ge.vector_cov_deriv(conn, X, b), Y) \
                + ge.omega_pairing(t, X, ge.vector_cov_deriv(conn, Y, b))
            assert np.abs(lhs - rhs).max() < 1e-11


# ---------------------------------------------------------------------------
# frames, torsion, tau, divergence


def test_dual_frame_standard_and_random():
    t = small_torus()
    frame = np.eye(2)
    dual = ge.dual_frame(t, frame)
    # e^1 = d_2 and e^2 = -d_1 in the standard coordinates
    assert np.abs(dual[:, 0] - np.array([0.0, 1.0])).max() < 1e-14
    assert np.abs(dual[:, 1] - np.array([-1.0, 0.0])).max() < 1e-14
    rng = np.random.default_rng(RNG_SEED)
    for _ in range(5):
        E = sl.random_sp(t.model, rng)
        D = ge.dual_frame(t, E)
        assert np.abs(E.T @ t.model.Omega @ D - np.eye(2)).max() < 1e-12
    with pytest.raises(ValueError):
        ge.dual_frame(t, np.zeros((2, 2)))


def test_dual_frame_position_dependent():
    t = small_torus()
    rng = np.random.default_rng(RNG_SEED + 3)
    g = ge.random_scalar_field(t, rng, cutoff=1, scale=0.4)
    h = ge.random_scalar_field(t, rng, cutoff=1, scale=0.4)
    # product of two shears: unit determinant at every point
    frame = np.zeros(t.grid_shape + (2, 2))
    frame[..., 0, 0] = 1.0 + g * h
    frame[..., 0, 1] = g
    frame[..., 1, 0] = h
    frame[..., 1, 1] = 1.0
    dual = ge.dual_frame(t, frame)
    pair = np.swapaxes(frame, -1, -2) @ t.model.Omega @ dual
    assert np.abs(pair - np.eye(2)).max() < 1e-12


def test_torsion_zero_for_flat_and_single_mode_pin():
    t = small_torus()
    flat = ge.flat_connection(t)
    assert np.abs(ge.torsion_tensor(flat)).max() == 0.0
    # Gamma_1 = gamma(x) j, Gamma_2 = 0: the defining formula gives
    # T(d_1, d_2) = gamma * (j e_2) = -gamma e_1
    m = t.model
    conn = ge.connection_from_modes(t, [(0, [1, 0], "cos", m.j)], [])
    x = ge.grid_points(t)
    gamma = np.cos(x[..., 0])
    T = ge.torsion_tensor(conn)
    expected = gamma[..., None] * (m.j @ np.array([0.0, 1.0]))
    assert np.abs(T[0, 1] - expected).max() < 1e-13
    assert np.abs(T[1, 0] + expected).max() < 1e-13


def test_torsion_apply_matches_tensor_and_kills_diagonal():
    t = small_torus()
    rng = np.random.default_rng(RNG_SEED)
    conn = ge.random_connection(t, rng, cutoff=1, unitary=True)
    T = ge.torsion_tensor(conn)
    E = np.zeros(t.grid_shape + (2, 2))
    E[..., :, :] = np.eye(2)
    for a in range(2):
        for b in range(2):
            got = ge.torsion_apply(conn, E[..., :, a], E[..., :, b])
            assert np.abs(got - T[a, b]).max() < 1e-12
    X = ge.random_vector_field(t, rng, cutoff=2)
    assert np.abs(ge.torsion_apply(conn, X, X)).max() < 1e-11


def test_torsion_is_tensorial_with_bracket_term():
    # T(fX, Y) = f T(X, Y) needs the bracket correction in the general form
    t = small_torus()
    rng = np.random.default_rng(RNG_SEED + 4)
    conn = ge.random_connection(t, rng, cutoff=1, unitary=True)
    X = ge.random_vector_field(t, rng, cutoff=1)
    Y = ge.random_vector_field(t, rng, cutoff=1)
    f = ge.random_scalar_field(t, rng, cutoff=1)
    lhs = ge.torsion_apply(conn, f[..., None] * X, Y)
    rhs = f[..., None] * ge.torsion_apply(conn, X, Y)
    assert np.abs(lhs - rhs).max() < 1e-11


def test_tau_trace_identity_and_frame_independence():
    rng = np.random.default_rng(RNG_SEED)
    for n, cutoff in ((1, 4), (2, 2)):
        t = small_torus(n=n, cutoff=cutoff)
        d = t.dim
        conn = ge.random_connection(t, rng, cutoff=1, unitary=True)
        tau = ge.tau_field(conn)
        E = np.zeros(t.grid_shape + (d, d))
        E[..., :, :] = np.eye(d)
        Z = ge.random_vector_field(t, rng, cutoff=1)
        # trace oracle: sum of the e_a-components of T(e_a, Z)
        trace = np.zeros(t.grid_shape, dtype=complex)
        for a in range(d):
            trace += ge.torsion_apply(conn, E[..., :, a], Z)[..., a]
        assert np.abs(ge.omega_pairing(t, tau, Z) - trace).max() < 1e-11
        # frame independence: recompute tau through a rotated constant frame
        R = sl.random_unitary_sp(t.model, rng)
        frame = np.broadcast_to(R, t.grid_shape + (d, d))
        dual = ge.dual_frame(t, frame)
        tau2 = np.zeros(t.grid_shape + (d,), dtype=complex)
        for k in range(d):
            tau2 += 0.5 * ge.torsion_apply(conn, frame[..., :, k], dual[..., :, k])
        assert np.abs(tau2 - tau).max() < 1e-11


def test_tau_vanishes_without_torsion():
    t = small_torus()
    rng = np.random.default_rng(RNG_SEED)
    conn = ge.torsion_removal(ge.random_connection(t, rng, cutoff=1, unitary=True))
    assert np.abs(ge.tau_field(conn)).max() < 1e-13


def test_divergence_pin_and_connection_term():
    t = small_torus()
    x = ge.grid_points(t)
    X = np.zeros(t.grid_shape + (2,))
    X[..., 0] = np.sin(x[..., 0])
    flat = ge.flat_connection(t)
    assert np.abs(ge.divergence(flat, X) - np.cos(x[..., 0])).max() < 1e-13
    rng = np.random.default_rng(RNG_SEED)
    conn = ge.random_connection(t, rng, cutoff=1, unitary=True)
    got = ge.divergence(conn, X)
    # same contraction written out longhand as an independent check
    manual = np.cos(x[..., 0]).astype(complex)
    for b in range(2):
        manual += np.einsum("...c,...c->...", conn.Gamma[b][..., b, :], X)
    assert np.abs(got - manual).max() < 1e-12


def test_volume_derivative_identity():
    rng = np.random.default_rng(RNG_SEED + 5)
    for n, cutoff in ((1, 4), (2, 2)):
        t = small_torus(n=n, cutoff=cutoff)
        for unitary in (True, False):
            conn = ge.random_connection(t, rng, cutoff=1, unitary=unitary)
            X = ge.random_vector_field(t, rng, cutoff=1)
            assert ge.lie_lemma_residual(conn, X) < 1e-10


# ---------------------------------------------------------------------------
# torsion removal


def test_torsion_removal_properties():
    rng = np.random.default_rng(RNG_SEED)
    for n, cutoff in ((1, 4), (2, 2)):
        t = small_torus(n=n, cutoff=cutoff)
        m = t.model
        conn = ge.random_connection(t, rng, cutoff=1, unitary=True)
        assert np.abs(ge.tau_field(conn)).max() > 1e-3  # generic torsion
        rem = ge.torsion_removal(conn)
        assert np.abs(ge.tau_field(rem)).max() < 1e-12
        # still preserves omega and J pointwise
        sp_res = np.abs(np.swapaxes(rem.Gamma, -1, -2) @ m.Omega
                        + m.Omega @ rem.Gamma).max()
        assert sp_res < 1e-12
        assert np.abs(rem.Gamma @ m.j - m.j @ rem.Gamma).max() < 1e-12
        assert rem.unitary
        assert np.abs(rem.a - conn.a).max() == 0.0
        # idempotent
        rem2 = ge.torsion_removal(rem)
        assert np.abs(rem2.Gamma - rem.Gamma).max() < 1e-13
        # linear in Gamma, so band limits are preserved
        for b in range(t.dim):
            assert ge.band_mass_outside(t, rem.Gamma[b], 1) < 1e-11


def test_torsion_removal_rejects_non_unitary():
    t = small_torus()
    rng = np.random.default_rng(RNG_SEED)
    conn = ge.random_connection(t, rng, cutoff=1, unitary=False)
    with pytest.raises(ValueError):
        ge.torsion_removal(conn)


# ---------------------------------------------------------------------------
# curvature of the central line


def test_central_curvature_pin():
    t = small_torus()
    x = ge.grid_points(t)
    d = t.dim
    a = np.zeros((d,) + t.grid_shape, dtype=complex)
    a[1] = 1j * np.sin(x[..., 0])
    conn = ge.make_connection(t, np.zeros((d,) + t.grid_shape + (d, d)), a)
    F = ge.central_curvature(conn)
    assert np.abs(F[0, 1] - np.cos(x[..., 0])).max() < 1e-13
    assert np.abs(F[1, 0] + np.cos(x[..., 0])).max() < 1e-13
    Feta = ge.eta_curvature(conn)
    assert np.abs(Feta[0, 1] - 2j * np.cos(x[..., 0])).max() < 1e-12


def test_central_curvature_includes_trace_of_gamma():
    # Gamma_2 = g(x) j contributes i g(x)/2 to the potential at n = 1
    t = small_torus()
    m = t.model
    conn = ge.connection_from_modes(t, [(1, [1, 0], "cos", m.j)], [])
    x = ge.grid_points(t)
    alpha = ge.central_potential(conn)
    assert np.abs(alpha[1] - 0.5j * np.cos(x[..., 0])).max() < 1e-13
    F = ge.central_curvature(conn)
    assert np.abs(F[0, 1] + 0.5 * np.sin(x[..., 0])).max() < 1e-13


def test_eta_curvature_doubles_central():
    rng = np.random.default_rng(RNG_SEED + 6)
    for n, cutoff in ((1, 4), (2, 2)):
        t = small_torus(n=n, cutoff=cutoff)
        for unitary in (True, False):
            conn = ge.random_connection(t, rng, cutoff=1, unitary=unitary)
            F = ge.central_curvature(conn)
            Feta = ge.eta_curvature(conn)
            assert np.abs(Feta - 2j * F).max() < 1e-12
            assert np.abs(F + np.swapaxes(F, 0, 1)).max() < 1e-12


def test_central_curvature_flat_is_zero():
    t = small_torus()
    assert np.abs(ge.central_curvature(ge.flat_connection(t))).max() == 0.0


# ---------------------------------------------------------------------------
# spinor fields and their covariant calculus


def test_spinor_field_validation_and_constant():
    t = small_torus()
    B = fk.fock_basis(1, 4)
    with pytest.raises(ValueError):
        ge.spinor_field(t, B, np.zeros((3, 3, B.dim)))
    psi = ge.constant_spinor(t, B, np.arange(B.dim))
    assert psi.values.shape == t.grid_shape + (B.dim,)
    assert np.abs(psi.values[0, 0] - np.arange(B.dim)).max() == 0.0


def test_random_spinor_degree_restriction():
    t = small_torus()
    B = fk.fock_basis(1, 5)
    rng = np.random.default_rng(RNG_SEED)
    psi = ge.random_spinor_field(t, B, rng, cutoff=2, max_degree=3)
    assert np.abs(psi.values[..., B.degrees > 3]).max() == 0.0
    assert np.abs(psi.values[..., B.degrees <= 3]).max() > 0.0


def test_spinor_cov_deriv_flat_and_central():
    t = small_torus()
    B = fk.fock_basis(1, 4)
    rng = np.random.default_rng(RNG_SEED)
    psi = ge.random_spinor_field(t, B, rng, cutoff=2)
    flat = ge.flat_connection(t)
    for b in range(2):
        got = ge.spinor_cov_deriv(flat, psi, b)
        assert np.abs(got.values - ge.partial_derivative(t, psi.values, b)).max() < 1e-13
    # purely central connection: nabla_b = d_b + a_b
    d = t.dim
    a = np.zeros((d,) + t.grid_shape, dtype=complex)
    x = ge.grid_points(t)
    a[0] = 0.3j * np.cos(x[..., 1])
    conn = ge.make_connection(t, np.zeros((d,) + t.grid_shape + (d, d)), a)
    got = ge.spinor_cov_deriv(conn, psi, 0)
    want = ge.partial_derivative(t, psi.values, 0) + a[0][..., None] * psi.values
    assert np.abs(got.values - want).max() < 1e-13


def test_degree_preservation_iff_unitary():
    t = small_torus()
    B = fk.fock_basis(1, 4)
    rng = np.random.default_rng(RNG_SEED)
    off_degree = np.not_equal.outer(B.degrees, B.degrees)
    mats_u = ge.lie_matrix_field(ge.random_connection(t, rng, cutoff=1, unitary=True), B)
    assert np.abs(mats_u[..., off_degree]).max() == 0.0
    mats_g = ge.lie_matrix_field(ge.random_connection(t, rng, cutoff=1, unitary=False), B)
    assert np.abs(mats_g[..., off_degree]).max() > 1e-3


def test_fiber_action_is_skew_adjoint_pointwise():
    # d_b h(psi, psi') = h(nabla_b psi, psi') + h(psi, nabla_b psi')
    t = small_torus()
    B = fk.fock_basis(1, 4)
    m = t.model
    rng = np.random.default_rng(RNG_SEED + 7)
    w = fk.norm_weights(m, B)
    psi = ge.random_spinor_field(t, B, rng, cutoff=1)
    phi = ge.random_spinor_field(t, B, rng, cutoff=1)
    for unitary in (True, False):
        conn = ge.random_connection(t, rng, cutoff=1, unitary=unitary)
        mats = ge.lie_matrix_field(conn, B)
        for b in range(2):
            h = np.einsum("...F,F,...F->...", psi.values, w, phi.values.conj())
            lhs = ge.partial_derivative(t, h, b)
            dpsi = ge.spinor_cov_deriv(conn, psi, b, mats).values
            dphi = ge.spinor_cov_deriv(conn, phi, b, mats).values
            rhs = np.einsum("...F,F,...F->...", dpsi, w, phi.values.conj()) \
                + np.einsum("...F,F,...F->...", psi.values, w, dphi.conj())
            assert np.abs(lhs - rhs).max() < 1e-11


def test_clifford_parallelism_unitary():
    # nabla_b(Op(e) psi) = Op(Gamma_b e) psi + Op(e) nabla_b psi, all degrees
    t = small_torus()
    B = fk.fock_basis(1, 5)
    m = t.model
    rng = np.random.default_rng(RNG_SEED)
    conn = ge.random_connection(t, rng, cutoff=1, unitary=True)
    mats = ge.lie_matrix_field(conn, B)
    psi = ge.random_spinor_field(t, B, rng, cutoff=2)
    for kind in ("a", "c", "cl"):
        base = ge.clifford_basis_matrices(m, B, kind)
        for b in range(2):
            for ei in range(2):
                e = np.zeros(2)
                e[ei] = 1.0
                lhs = ge.spinor_cov_deriv(
                    conn, ge.spinor_pointwise_op(psi, e, base), b, mats).values
                Ge = np.einsum("...ij,j->...i", conn.Gamma[b], e)
                rhs = ge.spinor_pointwise_op(psi, Ge, base).values \
                    + ge.spinor_pointwise_op(
                        ge.spinor_cov_deriv(conn, psi, b, mats), e, base).values
                assert np.abs(lhs - rhs).max() < 1e-11


def test_clifford_parallelism_general_masked():
    # non-unitary connections satisfy the same identity away from the
    # degrees the truncation touches
    t = small_torus()
    N = 6
    B = fk.fock_basis(1, N)
    m = t.model
    rng = np.random.default_rng(RNG_SEED + 8)
    conn = ge.random_connection(t, rng, cutoff=1, unitary=False)
    mats = ge.lie_matrix_field(conn, B)
    keep = B.degrees <= N - 3
    psi = ge.random_spinor_field(t, B, rng, cutoff=2, max_degree=N - 3)
    base = ge.clifford_basis_matrices(m, B, "cl")
    for b in range(2):
        e = np.zeros(2)
        e[b] = 1.0
        lhs = ge.spinor_cov_deriv(
            conn, ge.spinor_pointwise_op(psi, e, base), b, mats).values
        Ge = np.einsum("...ij,j->...i", conn.Gamma[b], e)
        rhs = ge.spinor_pointwise_op(psi, Ge, base).values \
            + ge.spinor_pointwise_op(
                ge.spinor_cov_deriv(conn, psi, b, mats), e, base).values
        assert np.abs((lhs - rhs)[..., keep]).max() < 1e-11


# ---------------------------------------------------------------------------
# spinor curvature


def test_spinor_curvature_flat_and_antisymmetric():
    t = small_torus()
    B = fk.fock_basis(1, 4)
    rng = np.random.default_rng(RNG_SEED)
    psi = ge.random_spinor_field(t, B, rng, cutoff=2)
    flat = ge.flat_connection(t)
    assert np.abs(ge.spinor_curvature(flat, psi, 0, 1).values).max() < 1e-12
    conn = ge.random_connection(t, rng, cutoff=1, unitary=True)
    mats = ge.lie_matrix_field(conn, B)
    R = ge.spinor_curvature(conn, psi, 0, 1, mats)
    Rt = ge.spinor_curvature(conn, psi, 1, 0, mats)
    assert np.abs(R.values + Rt.values).max() < 1e-12


def test_spinor_curvature_constant_connection_bracket_oracle():
    # constant coefficients: R(d_a, d_b) acts by the fiber bracket of the
    # two generators, including its central term
    t = small_torus()
    N = 6
    B = fk.fock_basis(1, N)
    m = t.model
    rng = np.random.default_rng(RNG_SEED + 9)
    xi1 = sl.random_sp_algebra(m, rng, scale=0.5)
    xi2 = sl.random_sp_algebra(m, rng, scale=0.5)
    d = t.dim
    G = np.zeros((d,) + t.grid_shape + (d, d))
    G[0][..., :, :] = xi1
    G[1][..., :, :] = xi2
    a = np.zeros((d,) + t.grid_shape, dtype=complex)
    a[0] = 0.2j
    conn = ge.make_connection(t, G, a)
    psi = ge.random_spinor_field(t, B, rng, cutoff=1, max_degree=N - 4)
    R = ge.spinor_curvature(conn, psi, 0, 1)
    br = mpc.mpc_lie_bracket(m, mpc.mpc_lie_element(m, 0.2j, xi1),
                             mpc.mpc_lie_element(m, 0.0, xi2))
    Rmat = mpc.mpc_lie_matrix(m, B, br).matrix
    want = np.einsum("FG,...G->...F", Rmat, psi.values)
    keep = B.degrees <= N - 4
    assert np.abs((R.values - want)[..., keep]).max() < 1e-12


def test_spinor_curvature_tensorial():
    t = small_torus()
    B = fk.fock_basis(1, 4)
    rng = np.random.default_rng(RNG_SEED)
    conn = ge.random_connection(t, rng, cutoff=1, unitary=True)
    mats = ge.lie_matrix_field(conn, B)
    psi = ge.random_spinor_field(t, B, rng, cutoff=1)
    f = ge.random_scalar_field(t, rng, cutoff=1)
    scaled = ge.spinor_field(t, B, f[..., None] * psi.values)
    lhs = ge.spinor_curvature(conn, scaled, 0, 1, mats).values
    rhs = f[..., None] * ge.spinor_curvature(conn, psi, 0, 1, mats).values
    assert np.abs(lhs - rhs).max() < 1e-10


def test_spinor_curvature_central_part_matches_two_form():
    # for a purely central connection the curvature acts as the scalar
    # i * central_curvature (per unit of the two-form slot)
    t = small_torus()
    B = fk.fock_basis(1, 4)
    rng = np.random.default_rng(RNG_SEED + 10)
    d = t.dim
    a = np.zeros((d,) + t.grid_shape, dtype=complex)
    a[0] = ge.random_scalar_field(t, rng, cutoff=1, imaginary=True)
    a[1] = ge.random_scalar_field(t, rng, cutoff=1, imaginary=True)
    conn = ge.make_connection(t, np.zeros((d,) + t.grid_shape + (d, d)), a)
    psi = ge.random_spinor_field(t, B, rng, cutoff=2)
    R = ge.spinor_curvature(conn, psi, 0, 1)
    F = ge.central_curvature(conn)
    assert np.abs(R.values - 1j * F[0, 1][..., None] * psi.values).max() < 1e-12
