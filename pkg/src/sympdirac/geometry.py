"""Flat-torus base geometry for symplectic spinor fields.

The base manifold is the torus [0, 2pi)^{2n} carrying the standard constant
symplectic form, complex structure and metric of the fiber model.  All
fields are trigonometric polynomials sampled on a uniform grid; derivatives
are spectral (exact for band-limited data below the Nyquist index), and
products are taken pointwise, so the differential-geometric identities
checked by the test suite hold to machine precision whenever the band
budgets fit on the grid.

A connection is a pair of fields (Gamma, a): Gamma_b(x) is a real matrix in
sp(2n, R) acting on tangent vectors, a_b(x) an imaginary scalar twisting the
fiber line.  The induced spinor derivative is

    nabla_b psi = d_b psi + act(a_b(x), Gamma_b(x)) psi(x)

with act the quadratic-Hamiltonian fiber action of (mu, xi) pairs.  When
every Gamma_b(x) commutes with j (the connection is unitary) the fiber
action preserves polynomial degree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fock as fk
from . import symplinalg as sl
from .symplinalg import SymplecticModel

ATOL_POINTWISE = 1e-10


@dataclass(frozen=True, eq=False)
class TorusModel:
    """Uniform periodic grid on [0, 2pi)^{2n} plus the fiber model.

    cutoff is the largest Fourier index primary fields are allowed to carry;
    the grid holds grid_size >= 3*cutoff + 1 (odd) points per axis so that
    one pointwise product of cutoff-limited data stays below the Nyquist
    index and higher budgets can be checked explicitly.
    """

    model: SymplecticModel
    cutoff: int
    grid_size: int

    @property
    def dim(self) -> int:
        return 2 * self.model.n

    @property
    def grid_shape(self) -> tuple:
        return (self.grid_size,) * self.dim

    @property
    def nyquist(self) -> int:
        return (self.grid_size - 1) // 2


def torus_model(model: SymplecticModel, cutoff: int,
                grid_size: int | None = None) -> TorusModel:
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    if grid_size is None:
        grid_size = 3 * cutoff + 1
        if grid_size % 2 == 0:
            grid_size += 1
    if grid_size < 3 * cutoff + 1:
        raise ValueError("grid must hold at least 3*cutoff + 1 points per axis")
    if grid_size % 2 == 0:
        raise ValueError("grid size must be odd (symmetric mode range)")
    return TorusModel(model=model, cutoff=cutoff, grid_size=int(grid_size))


def grid_axis(torus: TorusModel) -> np.ndarray:
    return 2.0 * np.pi * np.arange(torus.grid_size) / torus.grid_size


def grid_points(torus: TorusModel) -> np.ndarray:
    """Coordinates of all grid points, shape grid_shape + (2n,)."""
    axes = np.meshgrid(*([grid_axis(torus)] * torus.dim), indexing="ij")
    return np.stack(axes, axis=-1)


def wavenumbers(torus: TorusModel) -> np.ndarray:
    """Integer Fourier indices along one axis in FFT order."""
    return np.fft.fftfreq(torus.grid_size, 1.0 / torus.grid_size).astype(int)


def partial_derivative(torus: TorusModel, field: np.ndarray,
                       axis: int) -> np.ndarray:
    """Spectral d/dx_axis; axis counts base axes (0 .. 2n-1).

    Exact whenever the field is band-limited below the Nyquist index along
    that axis; component axes trailing the base axes pass through.
    """
    k = wavenumbers(torus)
    shape = [1] * field.ndim
    shape[axis] = torus.grid_size
    spec = np.fft.fft(np.asarray(field, dtype=complex), axis=axis)
    return np.fft.ifft(1j * k.reshape(shape) * spec, axis=axis)


def mode_coefficients(torus: TorusModel, field: np.ndarray) -> np.ndarray:
    """Fourier coefficients over the leading 2n axes (trailing axes pass)."""
    axes = tuple(range(torus.dim))
    return np.fft.fftn(np.asarray(field, dtype=complex), axes=axes) / (
        torus.grid_size ** torus.dim)


def band_mass_outside(torus: TorusModel, field: np.ndarray,
                      cutoff: int) -> float:
    """Total coefficient mass beyond the given Fourier index budget.

    The grid axes must lead; any component axes trail.
    """
    spec = mode_coefficients(torus, field)
    k = np.abs(wavenumbers(torus))
    inside = np.ones(torus.grid_shape, dtype=bool)
    for ax in range(torus.dim):
        shape = [1] * torus.dim
        shape[ax] = torus.grid_size
        inside &= (k.reshape(shape) <= cutoff)
    outside = ~inside
    extra = (...,) + (None,) * (field.ndim - torus.dim)
    return float(np.abs(spec * outside[extra]).sum())


def trig_field(torus: TorusModel, kvec, kind: str = "cos") -> np.ndarray:
    """cos(k.x) or sin(k.x) sampled on the grid."""
    kvec = np.asarray(kvec, dtype=float)
    phase = grid_points(torus) @ kvec
    if kind == "cos":
        return np.cos(phase)
    if kind == "sin":
        return np.sin(phase)
    raise ValueError("kind must be 'cos' or 'sin'")


def _reflect_conj(spec: np.ndarray, axes: tuple) -> np.ndarray:
    out = spec
    for ax in axes:
        out = np.flip(out, axis=ax)
    out = np.roll(out, shift=(1,) * len(axes), axis=axes)
    return np.conj(out)


def random_scalar_field(torus: TorusModel, rng: np.random.Generator,
                        cutoff: int | None = None, scale: float = 1.0,
                        imaginary: bool = False) -> np.ndarray:
    """Random real (or purely imaginary) trig polynomial with the given band."""
    c = torus.cutoff if cutoff is None else cutoff
    if c > torus.nyquist:
        raise ValueError("cutoff exceeds the grid Nyquist index")
    G, d = torus.grid_size, torus.dim
    k = wavenumbers(torus)
    sel = np.where(np.abs(k) <= c)[0]
    spec = np.zeros((G,) * d, dtype=complex)
    block = rng.normal(size=(len(sel),) * d) + 1j * rng.normal(size=(len(sel),) * d)
    spec[np.ix_(*([sel] * d))] = block
    axes = tuple(range(d))
    spec = 0.5 * (spec + _reflect_conj(spec, axes))
    f = np.fft.ifftn(spec).real
    peak = np.abs(f).max()
    if peak > 0:
        f = f * (scale / peak)
    return 1j * f if imaginary else f


def random_vector_field(torus: TorusModel, rng: np.random.Generator,
                        cutoff: int | None = None,
                        scale: float = 1.0) -> np.ndarray:
    comps = [random_scalar_field(torus, rng, cutoff, scale)
             for _ in range(torus.dim)]
    return np.stack(comps, axis=-1)


# ---------------------------------------------------------------------------
# connections


@dataclass(frozen=True, eq=False)
class Connection:
    """Per-direction fields Gamma_b (sp-valued matrices) and a_b (imaginary).

    unitary is True when every Gamma_b(x) commutes with j, in which case the
    induced fiber action preserves polynomial degree.
    """

    torus: TorusModel
    Gamma: np.ndarray  # (2n,) + grid + (2n, 2n), real
    a: np.ndarray      # (2n,) + grid, purely imaginary
    unitary: bool


def make_connection(torus: TorusModel, Gamma: np.ndarray, a: np.ndarray,
                    check: bool = True) -> Connection:
    d = torus.dim
    Gamma = np.asarray(Gamma, dtype=float)
    a = np.asarray(a, dtype=complex)
    if Gamma.shape != (d,) + torus.grid_shape + (d, d):
        raise ValueError("Gamma has wrong shape")
    if a.shape != (d,) + torus.grid_shape:
        raise ValueError("a has wrong shape")
    Om = torus.model.Omega
    if check:
        sp_res = np.abs(np.swapaxes(Gamma, -1, -2) @ Om + Om @ Gamma).max()
        if sp_res > ATOL_POINTWISE:
            raise ValueError("Gamma_b(x) must preserve the symplectic form")
        if np.abs(a.real).max() > ATOL_POINTWISE:
            raise ValueError("a must be purely imaginary")
    j = torus.model.j
    unitary = bool(np.abs(Gamma @ j - j @ Gamma).max() <= ATOL_POINTWISE)
    return Connection(torus=torus, Gamma=Gamma, a=a, unitary=unitary)


def flat_connection(torus: TorusModel) -> Connection:
    d = torus.dim
    return Connection(
        torus=torus,
        Gamma=np.zeros((d,) + torus.grid_shape + (d, d)),
        a=np.zeros((d,) + torus.grid_shape, dtype=complex),
        unitary=True,
    )


def connection_from_modes(torus: TorusModel, gamma_modes, a_modes) -> Connection:
    """Assemble a connection from lists of trigonometric modes.

    gamma_modes: iterable of (direction b, k-vector, kind, matrix) adding
    matrix * trig(k.x) to Gamma_b; a_modes: iterable of
    (direction b, k-vector, kind, value) with imaginary value, likewise.
    """
    d = torus.dim
    Gamma = np.zeros((d,) + torus.grid_shape + (d, d))
    a = np.zeros((d,) + torus.grid_shape, dtype=complex)
    for b, kvec, kind, matrix in gamma_modes:
        matrix = np.asarray(matrix, dtype=float)
        if sl.sp_algebra_residual(torus.model, matrix) > ATOL_POINTWISE:
            raise ValueError("Gamma mode coefficient must lie in sp(2n, R)")
        Gamma[b] += trig_field(torus, kvec, kind)[..., None, None] * matrix
    for b, kvec, kind, value in a_modes:
        value = complex(value)
        if abs(value.real) > ATOL_POINTWISE:
            raise ValueError("a mode coefficient must be purely imaginary")
        a[b] += trig_field(torus, kvec, kind) * value
    return make_connection(torus, Gamma, a, check=False)


def random_connection(torus: TorusModel, rng: np.random.Generator,
                      cutoff: int = 1, scale: float = 0.3,
                      unitary: bool = True, with_a: bool = True,
                      terms: int = 2) -> Connection:
    """Random band-limited connection; unitary draws u(n)-valued matrices."""
    m = torus.model
    d = torus.dim
    Gamma = np.zeros((d,) + torus.grid_shape + (d, d))
    a = np.zeros((d,) + torus.grid_shape, dtype=complex)
    for b in range(d):
        for _ in range(terms):
            if unitary:
                K = rng.normal(size=(m.n, m.n)) + 1j * rng.normal(size=(m.n, m.n))
                xi = sl.real_matrix(m, 0.5 * (K - K.conj().T))
            else:
                xi = sl.random_sp_algebra(m, rng)
            Gamma[b] += scale * random_scalar_field(
                torus, rng, cutoff)[..., None, None] * xi
        if with_a:
            a[b] = scale * random_scalar_field(torus, rng, cutoff,
                                               imaginary=True)
    return make_connection(torus, Gamma, a)


# ---------------------------------------------------------------------------
# tangent-bundle calculus


def vector_cov_deriv(conn: Connection, X: np.ndarray, b: int) -> np.ndarray:
    """nabla_b X = d_b X + Gamma_b X for a vector field (grid + (2n,))."""
    dX = partial_derivative(conn.torus, X, b)
    return dX + np.einsum("...ij,...j->...i", conn.Gamma[b], X)


def cov_deriv_along(conn: Connection, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """nabla_X Y for vector fields (pointwise weights X^b)."""
    out = np.zeros(Y.shape, dtype=complex)
    for b in range(conn.torus.dim):
        out += X[..., b, None] * vector_cov_deriv(conn, Y, b)
    return out


def vector_bracket(torus: TorusModel, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Lie bracket [X, Y] of vector fields, computed spectrally."""
    out = np.zeros(Y.shape, dtype=complex)
    for b in range(torus.dim):
        out += X[..., b, None] * partial_derivative(torus, Y, b)
        out -= Y[..., b, None] * partial_derivative(torus, X, b)
    return out


def torsion_apply(conn: Connection, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """T(X, Y) = nabla_X Y - nabla_Y X - [X, Y]."""
    return (cov_deriv_along(conn, X, Y) - cov_deriv_along(conn, Y, X)
            - vector_bracket(conn.torus, X, Y))


def torsion_tensor(conn: Connection) -> np.ndarray:
    """Coordinate components T[a, b] = Gamma_a e_b - Gamma_b e_a.

    Shape (2n, 2n) + grid + (2n,); coordinate fields commute, so the bracket
    term drops out.
    """
    d = conn.torus.dim
    T = np.zeros((d, d) + conn.torus.grid_shape + (d,))
    for aa in range(d):
        for bb in range(d):
            T[aa, bb] = conn.Gamma[aa][..., :, bb] - conn.Gamma[bb][..., :, aa]
    return T


def dual_frame(torus: TorusModel, frame: np.ndarray) -> np.ndarray:
    """Frame e^j with omega(e_i, e^j) = delta_i^j; columns are frame vectors.

    e^j = -sum_k w^{jk} e_k with (w^{jk}) the inverse of w_{ij} = omega(e_i, e_j).
    """
    Om = torus.model.Omega
    w = np.swapaxes(frame, -1, -2) @ Om @ frame
    if np.abs(np.linalg.det(w)).min() < 1e-12:
        raise ValueError("frame is degenerate for the symplectic form")
    winv = np.linalg.inv(w)
    return -frame @ np.swapaxes(winv, -1, -2)


def tau_field(conn: Connection) -> np.ndarray:
    """Torsion vector tau = (1/2) sum_k T(e_k, e^k) on the coordinate frame."""
    d = conn.torus.dim
    Om = conn.torus.model.Omega
    T = torsion_tensor(conn)
    # e^k = -sum_l w^{kl} e_l with w = Omega, so sum_k T(e_k, e^k)
    # contracts T[k, l] against -inv(Omega)[k, l] = Omega[k, l]
    return 0.5 * np.einsum("kl,kl...c->...c", Om, T)


def divergence(conn: Connection, X: np.ndarray) -> np.ndarray:
    """Trace of Y -> nabla_Y X."""
    out = np.zeros(X.shape[:-1], dtype=complex)
    for b in range(conn.torus.dim):
        out += vector_cov_deriv(conn, X, b)[..., b]
    return out


def omega_pairing(torus: TorusModel, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """omega(X, Y) pointwise."""
    return np.einsum("...i,ij,...j->...", X, torus.model.Omega, Y)


def lie_lemma_residual(conn: Connection, X: np.ndarray) -> float:
    """Volume-derivative identity residual.

    The flow of X scales the constant volume form by the plain coordinate
    divergence, which must match div X + omega(X, tau) built from the
    connection; the residual is the max pointwise mismatch.
    """
    torus = conn.torus
    lhs = np.zeros(torus.grid_shape, dtype=complex)
    for b in range(torus.dim):
        lhs += partial_derivative(torus, X[..., b], b)
    rhs = divergence(conn, X) + omega_pairing(torus, X, tau_field(conn))
    return float(np.abs(lhs - rhs).max())


def torsion_removal(conn: Connection) -> Connection:
    """Connection with the same unitary type and vanishing torsion vector.

    Subtracts (1/2n)(omega(tau,Y)X + omega(X,Y)tau + omega(J tau,Y)JX
    + omega(JX,Y)J tau) from nabla_X Y; the correction is linear in tau, so
    band limits are preserved, and it vanishes once tau does (the map is
    idempotent).
    """
    if not conn.unitary:
        raise ValueError("torsion removal requires a unitary connection")
    torus = conn.torus
    m = torus.model
    d = torus.dim
    tau = tau_field(conn).real
    jtau = np.einsum("ij,...j->...i", m.j, tau)
    Om = m.Omega
    om_tau = np.einsum("...i,ij->...j", tau, Om)    # row omega(tau, .)
    om_jtau = np.einsum("...i,ij->...j", jtau, Om)  # row omega(J tau, .)
    Gamma = conn.Gamma.copy()
    for b in range(d):
        eb = np.zeros(d)
        eb[b] = 1.0
        jeb = m.j @ eb
        om_eb = eb @ Om
        om_jeb = jeb @ Om
        corr = (np.einsum("...j,i->...ij", om_tau, eb)
                + np.einsum("...i,j->...ij", tau, om_eb)
                + np.einsum("...j,i->...ij", om_jtau, jeb)
                + np.einsum("...i,j->...ij", jtau, om_jeb))
        Gamma[b] = Gamma[b] - corr / (2.0 * m.n)
    return make_connection(torus, Gamma, conn.a)


# ---------------------------------------------------------------------------
# curvature of the central direction


def central_potential(conn: Connection) -> np.ndarray:
    """The imaginary 1-form a_b + tr_C(j-linear part of Gamma_b)/2."""
    torus = conn.torus
    m = torus.model
    d = torus.dim
    out = np.array(conn.a, dtype=complex)
    for b in range(d):
        lin = sl.linear_part(m, conn.Gamma[b].reshape(-1, d, d))
        # trace of the complex view of the j-linear part: for a j-linear
        # real matrix [[P, -Q], [Q, P]] this is tr(P) + i tr(Q)
        n = m.n
        P = lin[:, :n, :n]
        Q = lin[:, n:, :n]
        out[b] += 0.5 * (np.trace(P, axis1=1, axis2=2)
                         + 1j * np.trace(Q, axis1=1, axis2=2)).reshape(
                             torus.grid_shape)
    return out


def central_curvature(conn: Connection) -> np.ndarray:
    """Real 2-form F[a, b] with i F = d(central potential)."""
    torus = conn.torus
    d = torus.dim
    alpha0 = central_potential(conn)
    F = np.zeros((d, d) + torus.grid_shape, dtype=complex)
    for aa in range(d):
        for bb in range(d):
            F[aa, bb] = partial_derivative(torus, alpha0[bb], aa) \
                - partial_derivative(torus, alpha0[aa], bb)
    return (-1j * F).real


def eta_curvature(conn: Connection) -> np.ndarray:
    """Curvature 2-form of the squared central line, via the commutator.

    The line with connection coefficients 2 a_b + tr_C Gamma_b is
    differentiated twice on the unit section; the antisymmetrized result is
    the (imaginary) curvature, which doubles the central curvature.
    """
    torus = conn.torus
    d = torus.dim
    c = 2.0 * np.array(conn.a, dtype=complex)
    alpha0 = central_potential(conn)
    c += 2.0 * (alpha0 - conn.a)  # 2 a + tr_C Gamma = 2 alpha0
    ones = np.ones(torus.grid_shape, dtype=complex)

    def cov(b, s):
        return partial_derivative(torus, s, b) + c[b] * s

    F = np.zeros((d, d) + torus.grid_shape, dtype=complex)
    for aa in range(d):
        for bb in range(d):
            F[aa, bb] = cov(aa, cov(bb, ones)) - cov(bb, cov(aa, ones))
    return F


# ---------------------------------------------------------------------------
# spinor fields


@dataclass(frozen=True, eq=False)
class SpinorField:
    """Grid of truncated Fock coefficients, shape grid + (fiber dim,)."""

    torus: TorusModel
    basis: fk.FockBasis
    values: np.ndarray


def spinor_field(torus: TorusModel, basis: fk.FockBasis,
                 values: np.ndarray) -> SpinorField:
    values = np.asarray(values, dtype=complex)
    if values.shape != torus.grid_shape + (basis.dim,):
        raise ValueError("spinor values have wrong shape")
    return SpinorField(torus=torus, basis=basis, values=values)


def constant_spinor(torus: TorusModel, basis: fk.FockBasis,
                    coeffs: np.ndarray) -> SpinorField:
    vals = np.broadcast_to(np.asarray(coeffs, dtype=complex),
                           torus.grid_shape + (basis.dim,)).copy()
    return spinor_field(torus, basis, vals)


def random_spinor_field(torus: TorusModel, basis: fk.FockBasis,
                        rng: np.random.Generator, cutoff: int | None = None,
                        max_degree: int | None = None) -> SpinorField:
    """Random band-limited spinor; optionally restricted in Fock degree."""
    vals = np.zeros(torus.grid_shape + (basis.dim,), dtype=complex)
    keep = (basis.degrees <= max_degree) if max_degree is not None \
        else np.ones(basis.dim, dtype=bool)
    for i in np.nonzero(keep)[0]:
        vals[..., i] = (random_scalar_field(torus, rng, cutoff)
                        + 1j * random_scalar_field(torus, rng, cutoff))
    return spinor_field(torus, basis, vals)


def lie_matrix_field(conn: Connection, basis: fk.FockBasis) -> np.ndarray:
    """Pointwise fiber matrices of (a_b(x), Gamma_b(x)), shape (2n,)+grid+(F,F).

    Same quadratic-Hamiltonian action as the constant-coefficient case: the
    degree-preserving part contracts the complex view of the j-linear part
    of Gamma against the shift tensor; the j-antilinear part feeds the
    degree +/-2 tensors and vanishes identically for unitary connections.
    """
    torus = conn.torus
    m = torus.model
    d, n = torus.dim, m.n
    F = basis.dim
    shift, raise2, lower2 = fk.transfer_tensors(basis.n, basis.max_degree)
    flat = conn.Gamma.reshape((d, -1, d, d))
    npts = flat.shape[1]
    out = np.zeros((d, npts, F, F), dtype=complex)
    eye = np.eye(F, dtype=complex)
    for b in range(d):
        lin = sl.linear_part(m, flat[b])
        P = lin[:, :n, :n]
        Q = lin[:, n:, :n]
        H = P + 1j * Q
        out[b] = conn.a[b].reshape(npts)[:, None, None] * eye
        out[b] -= np.einsum("xkl,klFG->xFG", H, shift)
        if not conn.unitary:
            anti = flat[b] - lin
            R = anti[:, :n, :n]
            S = anti[:, :n, n:]
            W = R + 1j * S
            out[b] += np.einsum("xkl,klFG->xFG", W.conj(), raise2) / (4.0 * m.hbar)
            out[b] -= m.hbar * np.einsum("xkl,klFG->xFG", W, lower2)
    return out.reshape((d,) + torus.grid_shape + (F, F))


def spinor_cov_deriv(conn: Connection, psi: SpinorField, b: int,
                     mats: np.ndarray | None = None) -> SpinorField:
    """nabla_b psi = d_b psi + fiber action of (a_b(x), Gamma_b(x))."""
    if mats is None:
        mats = lie_matrix_field(conn, psi.basis)
    vals = partial_derivative(psi.torus, psi.values, b)
    vals = vals + np.einsum("...FG,...G->...F", mats[b], psi.values)
    return SpinorField(torus=psi.torus, basis=psi.basis, values=vals)


def spinor_cov_dir(conn: Connection, psi: SpinorField, X: np.ndarray,
                   mats: np.ndarray | None = None) -> SpinorField:
    """nabla_X psi for a (possibly position-dependent) direction field."""
    if mats is None:
        mats = lie_matrix_field(conn, psi.basis)
    out = np.zeros(psi.values.shape, dtype=complex)
    for b in range(conn.torus.dim):
        out += np.asarray(X)[..., b, None] * spinor_cov_deriv(
            conn, psi, b, mats).values
    return SpinorField(torus=psi.torus, basis=psi.basis, values=out)


def spinor_curvature(conn: Connection, psi: SpinorField, a: int, b: int,
                     mats: np.ndarray | None = None) -> SpinorField:
    """R(d_a, d_b) psi = nabla_a nabla_b psi - nabla_b nabla_a psi."""
    if mats is None:
        mats = lie_matrix_field(conn, psi.basis)
    ab = spinor_cov_deriv(conn, spinor_cov_deriv(conn, psi, b, mats), a, mats)
    ba = spinor_cov_deriv(conn, spinor_cov_deriv(conn, psi, a, mats), b, mats)
    return SpinorField(torus=psi.torus, basis=psi.basis,
                       values=ab.values - ba.values)


def clifford_basis_matrices(model: SymplecticModel, basis: fk.FockBasis,
                            kind: str) -> np.ndarray:
    """Stack of fiber matrices for the coordinate directions, shape (2n,F,F).

    kind selects creation ('c'), annihilation ('a') or their difference,
    the symplectic Clifford action ('cl').
    """
    d = 2 * model.n
    mats = np.zeros((d, basis.dim, basis.dim), dtype=complex)
    for b in range(d):
        e = np.zeros(d)
        e[b] = 1.0
        if kind == "c":
            mats[b] = fk.creation_op(model, basis, e).matrix
        elif kind == "a":
            mats[b] = fk.annihilation_op(model, basis, e).matrix
        elif kind == "cl":
            mats[b] = fk.clifford_op(model, basis, e).matrix
        else:
            raise ValueError("kind must be 'c', 'a' or 'cl'")
    return mats


def spinor_pointwise_op(psi: SpinorField, X: np.ndarray,
                        mats: np.ndarray) -> SpinorField:
    """Apply the X-weighted combination of the basis fiber matrices.

    X may be a constant vector or a vector field; mats has shape (2n, F, F)
    (the operators are real-linear in the vector argument).
    """
    X = np.asarray(X, dtype=complex)
    if X.ndim == 1:
        combined = np.einsum("b,bFG->FG", X, mats)
        vals = np.einsum("FG,...G->...F", combined, psi.values)
    else:
        vals = np.einsum("...b,bFG,...G->...F", X, mats, psi.values)
    return SpinorField(torus=psi.torus, basis=psi.basis, values=vals)
