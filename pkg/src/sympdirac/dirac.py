"""Symplectic Dirac operators on the flat torus.

Field sections take values in the truncated Fock fiber; the connection
supplies the spinor derivative nabla_b.  The four first-order operators
contract fiber multiplication/derivation against the symplectically dual
frame:

    D   = sum_i Cl(e_i) nabla_{e^i}         (Cl = creation - annihilation)
    Dt  = sum_i Cl(J e_i) nabla_{e^i}
    D'  = sum_i C(e_i) nabla_{e^i}          (degree +1)
    D'' = -sum_i A(e_i) nabla_{e^i}         (degree -1)

so D = D' + D'' and Dt = -i D' + i D''.  The second-order operator
P = 2[D', D''] = i[Dt, D] preserves degree; on a flat torsion-free
background its plane-wave eigenvalues are -|k|^2_g / hbar.

All formulas below use the constant coordinate frame, whose symplectic
dual is e^j = -sum_k w^{jk} e_k with (w^{jk}) inverse to the constant
symplectic matrix; frame independence is exercised through the generic
frame entry point.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from . import fock as fk
from . import geometry as ge
from .geometry import Connection, SpinorField, TorusModel
from .symplinalg import SymplecticModel


@dataclass(frozen=True, eq=False)
class DiracContext:
    """Connection plus precomputed fiber data for the Dirac operators."""

    conn: Connection
    basis: fk.FockBasis
    lie_mats: np.ndarray   # (2n,) + grid + (F, F)
    cl_mats: np.ndarray    # (2n, F, F) Clifford action of coordinate vectors
    c_mats: np.ndarray
    a_mats: np.ndarray
    contract: dict         # operator name -> (2n, F, F) contraction stack
    tau: np.ndarray        # grid + (2n,)
    jtau: np.ndarray
    ginv: np.ndarray       # inverse metric on the coordinate frame

    @property
    def torus(self) -> TorusModel:
        return self.conn.torus

    @property
    def model(self) -> SymplecticModel:
        return self.conn.torus.model


def make_context(conn: Connection, basis: fk.FockBasis) -> DiracContext:
    m = conn.torus.model
    if basis.n != m.n:
        raise ValueError("fiber basis and torus model disagree on n")
    d = 2 * m.n
    cl = ge.clifford_basis_matrices(m, basis, "cl")
    c = ge.clifford_basis_matrices(m, basis, "c")
    a = ge.clifford_basis_matrices(m, basis, "a")
    clj = np.einsum("ci,cFG->iFG", m.j, cl)  # Clifford action of J e_i
    Om = m.Omega
    contract = {
        "D": np.einsum("ik,iFG->kFG", Om, cl),
        "Dt": np.einsum("ik,iFG->kFG", Om, clj),
        "Dp": np.einsum("ik,iFG->kFG", Om, c),
        "Ds": -np.einsum("ik,iFG->kFG", Om, a),
    }
    tau = ge.tau_field(conn).real
    return DiracContext(
        conn=conn,
        basis=basis,
        lie_mats=ge.lie_matrix_field(conn, basis),
        cl_mats=cl,
        c_mats=c,
        a_mats=a,
        contract=contract,
        tau=tau,
        jtau=np.einsum("ij,...j->...i", m.j, tau),
        ginv=np.linalg.inv(Om @ m.j),
    )


# ---------------------------------------------------------------------------
# batched kernels (trailing batch axis lets the spectrum assembly vectorize)


def _nabla_vals(ctx: DiracContext, vals: np.ndarray, b: int) -> np.ndarray:
    out = ge.partial_derivative(ctx.torus, vals, b)
    return out + np.einsum("...FG,...Gc->...Fc", ctx.lie_mats[b], vals)


def _dirac_vals(ctx: DiracContext, vals: np.ndarray, name: str) -> np.ndarray:
    stack = ctx.contract[name]
    out = np.zeros(vals.shape, dtype=complex)
    for k in range(ctx.torus.dim):
        out += np.einsum("FG,...Gc->...Fc", stack[k], _nabla_vals(ctx, vals, k))
    return out


def _p_vals(ctx: DiracContext, vals: np.ndarray) -> np.ndarray:
    ds = _dirac_vals(ctx, vals, "Ds")
    dp = _dirac_vals(ctx, vals, "Dp")
    return 2.0 * (_dirac_vals(ctx, ds, "Dp") - _dirac_vals(ctx, dp, "Ds"))


def _wrap(ctx: DiracContext, vals: np.ndarray) -> SpinorField:
    return SpinorField(torus=ctx.torus, basis=ctx.basis, values=vals)


def nabla(ctx: DiracContext, psi: SpinorField, b: int) -> SpinorField:
    return _wrap(ctx, _nabla_vals(ctx, psi.values[..., None], b)[..., 0])


def nabla_dir(ctx: DiracContext, psi: SpinorField, X: np.ndarray) -> SpinorField:
    """nabla_X psi for a constant vector or vector field X."""
    return ge.spinor_cov_dir(ctx.conn, psi, X, ctx.lie_mats)


def dirac_D(ctx: DiracContext, psi: SpinorField) -> SpinorField:
    return _wrap(ctx, _dirac_vals(ctx, psi.values[..., None], "D")[..., 0])


def dirac_Dtilde(ctx: DiracContext, psi: SpinorField) -> SpinorField:
    return _wrap(ctx, _dirac_vals(ctx, psi.values[..., None], "Dt")[..., 0])


def dirac_Dprime(ctx: DiracContext, psi: SpinorField) -> SpinorField:
    return _wrap(ctx, _dirac_vals(ctx, psi.values[..., None], "Dp")[..., 0])


def dirac_Dsecond(ctx: DiracContext, psi: SpinorField) -> SpinorField:
    return _wrap(ctx, _dirac_vals(ctx, psi.values[..., None], "Ds")[..., 0])


def P_op(ctx: DiracContext, psi: SpinorField) -> SpinorField:
    """P = 2[D', D'']; degree-preserving and second order."""
    return _wrap(ctx, _p_vals(ctx, psi.values[..., None])[..., 0])


def dirac_via_frame(ctx: DiracContext, psi: SpinorField, frame: np.ndarray,
                    name: str) -> SpinorField:
    """Evaluate D/Dt/D'/D'' through an explicit (possibly varying) frame.

    frame holds the vectors e_i as columns, constant (2n, 2n) or a field
    grid + (2n, 2n); the symplectically dual frame weights the derivative.
    """
    m = ctx.model
    dual = ge.dual_frame(ctx.torus, frame)
    kind, rotate, sign = {
        "D": ("cl", False, 1.0),
        "Dt": ("cl", True, 1.0),
        "Dp": ("c", False, 1.0),
        "Ds": ("a", False, -1.0),
    }[name]
    mats = {"cl": ctx.cl_mats, "c": ctx.c_mats, "a": ctx.a_mats}[kind]
    out = np.zeros(psi.values.shape, dtype=complex)
    frame = np.broadcast_to(frame, ctx.torus.grid_shape + (ctx.torus.dim,) * 2)
    dual = np.broadcast_to(dual, frame.shape)
    for i in range(ctx.torus.dim):
        grad = ge.spinor_cov_dir(ctx.conn, psi, dual[..., :, i], ctx.lie_mats)
        v = frame[..., :, i]
        if rotate:
            v = np.einsum("ij,...j->...i", m.j, v)
        out += sign * ge.spinor_pointwise_op(grad, v, mats).values
    return _wrap(ctx, out)


# ---------------------------------------------------------------------------
# inner products and adjoints


def l2_inner(ctx: DiracContext, psi1: SpinorField, psi2: SpinorField) -> complex:
    """Integral of the fiber pairing against the Liouville volume.

    Linear in the first argument; exact for band-limited integrands since
    the uniform grid mean integrates trig polynomials below the grid size.
    """
    w = fk.norm_weights(ctx.model, ctx.basis)
    dens = np.einsum("...F,F,...F->...", psi1.values, w, psi2.values.conj())
    return complex((2.0 * np.pi) ** ctx.torus.dim * dens.mean())


def l2_norm(ctx: DiracContext, psi: SpinorField) -> float:
    return float(np.sqrt(max(l2_inner(ctx, psi, psi).real, 0.0)))


def oneform_inner(ctx: DiracContext, beta1: np.ndarray,
                  beta2: np.ndarray) -> complex:
    """Inner product of spinor-valued 1-forms, sum g^{ab} <beta_a, beta'_b>."""
    w = fk.norm_weights(ctx.model, ctx.basis)
    dens = np.einsum("ab,a...F,F,b...F->...", ctx.ginv, beta1, w, beta2.conj())
    return complex((2.0 * np.pi) ** ctx.torus.dim * dens.mean())


def nabla_full(ctx: DiracContext, psi: SpinorField) -> np.ndarray:
    """All covariant derivatives, shape (2n,) + grid + (F,)."""
    batched = psi.values[..., None]
    comps = [_nabla_vals(ctx, batched, b)[..., 0] for b in range(ctx.torus.dim)]
    return np.stack(comps, axis=0)


def aj_tau(ctx: DiracContext, psi: SpinorField) -> SpinorField:
    """Fiber derivation along the torsion vector, A(tau) psi."""
    return ge.spinor_pointwise_op(psi, ctx.tau, ctx.a_mats)


def adjoint_residual(ctx: DiracContext, psi1: SpinorField,
                     psi2: SpinorField) -> float:
    """|<D' psi1, psi2> - <psi1, (D'' + A(tau)) psi2>|."""
    lhs = l2_inner(ctx, dirac_Dprime(ctx, psi1), psi2)
    rhs_field = _wrap(ctx, dirac_Dsecond(ctx, psi2).values
                      + aj_tau(ctx, psi2).values)
    return abs(lhs - l2_inner(ctx, psi1, rhs_field))


def nabla_star(ctx: DiracContext, beta: np.ndarray) -> SpinorField:
    """Formal adjoint of nabla on spinor 1-forms.

    nabla* beta = -sum g^{ab} (nabla_a beta)(e_b) + beta(J tau), where
    (nabla_a beta)(e_b) = nabla_a(beta_b) - beta(Gamma_a e_b) on the
    coordinate frame.  Adjoint to nabla_full for unitary connections.
    """
    d = ctx.torus.dim
    Gamma = ctx.conn.Gamma
    out = np.einsum("...b,b...F->...F", ctx.jtau, beta).astype(complex)
    for aa in range(d):
        for bb in range(d):
            if ctx.ginv[aa, bb] == 0.0:
                continue
            term = _nabla_vals(ctx, beta[bb][..., None], aa)[..., 0]
            term -= np.einsum("...c,c...F->...F", Gamma[aa][..., :, bb], beta)
            out -= ctx.ginv[aa, bb] * term
    return _wrap(ctx, out)


def laplacian(ctx: DiracContext, psi: SpinorField) -> SpinorField:
    """nabla* nabla psi = -g^{ab} nabla^2_{a,b} psi + nabla_{J tau} psi."""
    d = ctx.torus.dim
    batched = psi.values[..., None]
    grads = [_nabla_vals(ctx, batched, b) for b in range(d)]
    out = nabla_dir(ctx, psi, ctx.jtau).values
    for aa in range(d):
        for bb in range(d):
            if ctx.ginv[aa, bb] == 0.0:
                continue
            second = _nabla_vals(ctx, grads[bb], aa)[..., 0]
            second -= nabla_dir(ctx, psi, ctx.conn.Gamma[aa][..., :, bb]).values
            out -= ctx.ginv[aa, bb] * second
    return _wrap(ctx, out)


# ---------------------------------------------------------------------------
# curvature identity for the degree-preserving operator


def _curvature_prefactors(ctx: DiracContext, form: str) -> np.ndarray:
    """Matrices M[l, s] multiplying R(e_l, e_s) - nabla_{T(e_l, e_s)}.

    form 'ca' uses -(1/2)(C(e_k) A(e_r) - A(e_k) C(e_r)) contracted with
    the inverse symplectic matrix on both index pairs; form 'clcl' the
    equivalent -(i/2) Cl(e_k) Cl(J e_r).  The overall sign follows from the
    operator algebra: commuting the two first-order operators produces
    -C(e_k) A(e_r) nabla^2_{e_l e_s} pairings, whose antisymmetric part in
    (l, s) is what survives against the curvature.
    """
    m = ctx.model
    d = ctx.torus.dim
    F = ctx.basis.dim
    winv = np.linalg.inv(m.Omega)  # w^{kl}
    M = np.zeros((d, d, F, F), dtype=complex)
    if form == "ca":
        for l in range(d):
            for s in range(d):
                acc = np.zeros((F, F), dtype=complex)
                for k in range(d):
                    for r in range(d):
                        coeff = winv[k, l] * winv[r, s]
                        if coeff == 0.0:
                            continue
                        acc += coeff * (ctx.c_mats[k] @ ctx.a_mats[r]
                                        - ctx.a_mats[k] @ ctx.c_mats[r])
                M[l, s] = -0.5 * acc
        return M
    if form == "clcl":
        clj = np.einsum("ci,cFG->iFG", m.j, ctx.cl_mats)
        for l in range(d):
            for s in range(d):
                acc = np.zeros((F, F), dtype=complex)
                for k in range(d):
                    for r in range(d):
                        coeff = winv[k, l] * winv[r, s]
                        if coeff == 0.0:
                            continue
                        acc += coeff * (ctx.cl_mats[k] @ clj[r])
                M[l, s] = -0.5j * acc
        return M
    raise ValueError("form must be 'ca' or 'clcl'")


def weitzenbock_residual(ctx: DiracContext, psi: SpinorField,
                         form: str = "ca") -> float:
    """Relative defect of the second-order identity for [D', D''].

    [D', D''] = -(1/2hbar) nabla* nabla + (1/2hbar) nabla_{J tau}
                - (1/2) sum w^{kl} w^{rs} (C(e_k) A(e_r) - A(e_k) C(e_r))
                        (R(e_l, e_s) - nabla_{T(e_l, e_s)})

    assembled from the independently implemented Laplacian, curvature and
    torsion; reliable for sections of degree <= max_degree - 2.
    """
    if not ctx.conn.unitary:
        raise ValueError("the curvature identity requires a unitary connection")
    hbar = ctx.model.hbar
    comm = _wrap(ctx, 0.5 * _p_vals(ctx, psi.values[..., None])[..., 0])
    rhs = -(0.5 / hbar) * laplacian(ctx, psi).values
    rhs = rhs + (0.5 / hbar) * nabla_dir(ctx, psi, ctx.jtau).values
    M = _curvature_prefactors(ctx, form)
    T = ge.torsion_tensor(ctx.conn)
    d = ctx.torus.dim
    for l in range(d):
        for s in range(d):
            if np.abs(M[l, s]).max() == 0.0:
                continue
            common = ge.spinor_curvature(ctx.conn, psi, l, s,
                                         ctx.lie_mats).values
            common = common - nabla_dir(ctx, psi, T[l, s]).values
            rhs = rhs + np.einsum("FG,...G->...F", M[l, s], common)
    num = l2_norm(ctx, _wrap(ctx, comm.values - rhs))
    den = l2_norm(ctx, psi)
    return num / den if den > 0 else num


# ---------------------------------------------------------------------------
# principal symbol and spectra


def symbol_check(ctx: DiracContext, kvec) -> tuple:
    """Demodulated action of P on a plane wave versus its leading symbol.

    Returns (blocks, expected) where blocks[d] is the degree-d fiber matrix
    of exp(-ik.x) P exp(ik.x) averaged over the torus and expected is the
    scalar -g^{ab} k_a k_b / hbar; the gap is O(|k|) for unitary
    connections and zero in the flat case.
    """
    torus = ctx.torus
    kvec = np.asarray(kvec, dtype=float)
    phase = ge.grid_points(torus) @ kvec
    wave = np.exp(1j * phase)
    F = ctx.basis.dim
    vals = wave[..., None, None] * np.eye(F)[(None,) * torus.dim]
    out = _p_vals(ctx, vals) * np.exp(-1j * phase)[..., None, None]
    full = out.mean(axis=tuple(range(torus.dim)))
    blocks = []
    for d in range(ctx.basis.max_degree + 1):
        idx = np.nonzero(ctx.basis.degrees == d)[0]
        blocks.append(full[np.ix_(idx, idx)])
    expected = -float(kvec @ ctx.ginv @ kvec) / ctx.model.hbar
    return blocks, expected


def spectrum(ctx: DiracContext, degree: int) -> np.ndarray:
    """Eigenvalues of P on the band-limited degree-(degree) block.

    The block is spanned by plane waves within the torus cutoff tensored
    with the degree-d fiber monomials (a Galerkin restriction; exact for
    connections within the band budget).  The top fiber degree is excluded
    because the degree cap distorts [D', D''] there.
    """
    basis = ctx.basis
    if not 0 <= degree <= basis.max_degree - 1:
        raise ValueError("degree must be at most max_degree - 1 "
                         "(the top degree is distorted by truncation)")
    torus = ctx.torus
    G, d = torus.grid_size, torus.dim
    fiber_idx = np.nonzero(basis.degrees == degree)[0]
    k = ge.wavenumbers(torus)
    mode_pos = [i for i in range(G) if abs(k[i]) <= torus.cutoff]
    modes = list(product(mode_pos, repeat=d))
    x = ge.grid_points(torus)
    nb = len(modes) * len(fiber_idx)
    vals = np.zeros(torus.grid_shape + (basis.dim, nb), dtype=complex)
    col = 0
    for mpos in modes:
        kv = np.array([k[i] for i in mpos], dtype=float)
        wave = np.exp(1j * (x @ kv))
        for fi in fiber_idx:
            vals[..., fi, col] = wave
            col += 1
    out = _p_vals(ctx, vals)
    spec = np.fft.fftn(out, axes=tuple(range(d))) / (G ** d)
    mat = np.zeros((nb, nb), dtype=complex)
    row = 0
    for mpos in modes:
        for fi in fiber_idx:
            mat[row] = spec[mpos + (fi,)]
            row += 1
    eig = np.linalg.eigvals(mat)
    return eig[np.lexsort((eig.imag, eig.real))]
