"""Linear symplectic algebra over a fixed complex structure.

The model space is V = R^{2n} carrying the standard symplectic form
Omega = [[0, I], [-I, 0]], the compatible complex structure
j = [[0, -I], [I, 0]], and the Euclidean metric g = Omega @ j = I.
Complex coordinates are z_k = x_k + i y_k for v = sum x_k e_k + y_k e_{n+k};
multiplication by i corresponds to applying j.

Real-linear maps split into a j-linear and a j-antilinear part.  A j-linear
map has block form [[P, -Q], [Q, P]] and acts on coordinates as z -> K z with
K = P + iQ; a j-antilinear map has block form [[R, S], [S, -R]] and acts as
z -> W conj(z) with W = R + iS.

Every symplectic g factors as g = C_g (1 + Z_g) with C_g j-linear invertible
and Z_g j-antilinear lying in the generalized unit disc (Siegel domain):
symmetric for the Hermitean pairing and with 1 - Z^2 positive.  This module
implements that decomposition, its composition and inversion laws, and the
smooth logarithm-of-determinant `a` on j-linear maps whose Hermitean part is
positive definite.  All of it is plain dense numpy; sizes are tiny (n <= 4).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

# Construction-time tolerance for structural invariants (symplecticity,
# block symmetry, the (C, Z) compatibility relation 1 - Z^2 = (C* C)^{-1}).
ATOL_STRUCT = 1e-10


@dataclass(frozen=True, eq=False)
class SymplecticModel:
    """Fixed data of the model space: dimension, hbar, Omega and j matrices."""

    n: int
    hbar: float
    Omega: np.ndarray
    j: np.ndarray


def standard_model(n: int, hbar: float = 1.0) -> SymplecticModel:
    """Standard model on R^{2n}: Omega = [[0,I],[-I,0]], j = [[0,-I],[I,0]]."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    if hbar <= 0:
        raise ValueError("hbar must be positive")
    eye = np.eye(n)
    zero = np.zeros((n, n))
    Omega = np.block([[zero, eye], [-eye, zero]])
    j = np.block([[zero, -eye], [eye, zero]])
    return SymplecticModel(n=n, hbar=float(hbar), Omega=Omega, j=j)


def omega_form(model: SymplecticModel, v: np.ndarray, w: np.ndarray):
    """Symplectic pairing Omega(v, w) = v^T Omega w."""
    return v @ model.Omega @ w


def metric_form(model: SymplecticModel, v: np.ndarray, w: np.ndarray):
    """Riemannian pairing g(v, w) with g = Omega j."""
    return v @ model.Omega @ (model.j @ w)


def hermitean_form(model: SymplecticModel, v: np.ndarray, w: np.ndarray) -> complex:
    """Hermitean pairing <v, w> = Omega(v, jw) - i Omega(v, w).

    Complex-linear in v, antilinear in w, positive definite; the real basis
    e_1 .. e_n is orthonormal for it.
    """
    ow = model.Omega @ w
    return complex(v @ (model.Omega @ (model.j @ w)) - 1j * (v @ ow))


def vec_to_complex(model: SymplecticModel, v: np.ndarray) -> np.ndarray:
    """Complex coordinates z_k = x_k + i y_k of a real vector (or batch)."""
    n = model.n
    return v[..., :n] + 1j * v[..., n:]


def vec_from_complex(model: SymplecticModel, z: np.ndarray) -> np.ndarray:
    """Real vector with complex coordinates z (inverse of vec_to_complex)."""
    return np.concatenate([z.real, z.imag], axis=-1)


def complex_matrix(model: SymplecticModel, A: np.ndarray, check: bool = True) -> np.ndarray:
    """n x n complex matrix of a j-linear real map (acts as z -> K z)."""
    n = model.n
    if check:
        comm = A @ model.j - model.j @ A
        if np.abs(comm).max() > ATOL_STRUCT * max(1.0, np.abs(A).max()):
            raise ValueError("matrix does not commute with j")
    return A[:n, :n] + 1j * A[n:, :n]


def real_matrix(model: SymplecticModel, K: np.ndarray) -> np.ndarray:
    """Real 2n x 2n form [[P,-Q],[Q,P]] of a complex n x n matrix K = P + iQ."""
    P, Q = K.real, K.imag
    return np.block([[P, -Q], [Q, P]])


def antilinear_matrix(model: SymplecticModel, Z: np.ndarray, check: bool = True) -> np.ndarray:
    """n x n complex matrix of a j-antilinear real map (acts as z -> W conj(z))."""
    n = model.n
    if check:
        anti = Z @ model.j + model.j @ Z
        if np.abs(anti).max() > ATOL_STRUCT * max(1.0, np.abs(Z).max(), 1.0):
            raise ValueError("matrix does not anticommute with j")
    return Z[:n, :n] + 1j * Z[:n, n:]


def antilinear_real(model: SymplecticModel, W: np.ndarray) -> np.ndarray:
    """Real 2n x 2n form [[R,S],[S,-R]] of an antilinear map z -> W conj(z)."""
    R, S = W.real, W.imag
    return np.block([[R, S], [S, -R]])


def linear_part(model: SymplecticModel, A: np.ndarray) -> np.ndarray:
    """j-linear part (A - jAj)/2 of a real map."""
    return 0.5 * (A - model.j @ A @ model.j)


def antilinear_part(model: SymplecticModel, A: np.ndarray) -> np.ndarray:
    """j-antilinear part (A + jAj)/2 of a real map."""
    return 0.5 * (A + model.j @ A @ model.j)


def j_adjoint(model: SymplecticModel, A: np.ndarray) -> np.ndarray:
    """Adjoint of a j-linear map for the Hermitean pairing, as a real matrix."""
    K = complex_matrix(model, A)
    return real_matrix(model, K.conj().T)


def sp_residual(model: SymplecticModel, g: np.ndarray) -> float:
    """Max-norm residual of the symplectic condition g^T Omega g = Omega."""
    return float(np.abs(g.T @ model.Omega @ g - model.Omega).max())


def is_symplectic(model: SymplecticModel, g: np.ndarray, tol: float = ATOL_STRUCT) -> bool:
    return sp_residual(model, g) <= tol


def u_residual(model: SymplecticModel, k: np.ndarray) -> float:
    """Residual of membership in U(n) = Sp cap GL(V, j)."""
    return max(sp_residual(model, k), float(np.abs(k @ model.j - model.j @ k).max()))


def sp_algebra_residual(model: SymplecticModel, xi: np.ndarray) -> float:
    """Residual of the Lie algebra condition xi^T Omega + Omega xi = 0."""
    return float(np.abs(xi.T @ model.Omega + model.Omega @ xi).max())


def random_sp(model: SymplecticModel, rng: np.random.Generator, scale: float = 0.35) -> np.ndarray:
    """Random symplectic matrix exp(Omega^{-1} S) with S symmetric Gaussian."""
    d = 2 * model.n
    S = rng.standard_normal((d, d))
    S = scale * (S + S.T) / 2.0
    xi = np.linalg.solve(model.Omega, S)
    return expm(xi)


def random_sp_algebra(model: SymplecticModel, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Random element of sp(2n, R): Omega^{-1} S with S symmetric."""
    d = 2 * model.n
    S = rng.standard_normal((d, d))
    S = scale * (S + S.T) / 2.0
    return np.linalg.solve(model.Omega, S)


def random_unitary_sp(model: SymplecticModel, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Random element of U(n) inside Sp(2n, R), via a skew-Hermitean exponent."""
    n = model.n
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    A = scale * (X - X.conj().T) / 2.0
    return real_matrix(model, expm(A))


# ---------------------------------------------------------------------------
# (C, Z) decomposition and the Siegel domain


@dataclass(frozen=True, eq=False)
class CZPair:
    """Factorization data g = C (1 + Z): C j-linear, Z j-antilinear.

    Both stored as real 2n x 2n matrices.  Valid pairs satisfy
    1 - Z^2 = (C* C)^{-1} and Z lies in the generalized unit disc.
    """

    C: np.ndarray
    Z: np.ndarray


def siegel_check(model: SymplecticModel, Z: np.ndarray, tol: float = ATOL_STRUCT):
    """Membership test for the generalized unit disc.

    Checks (i) j-antilinearity, (ii) symmetry of <v, Zw> as a bilinear form,
    (iii) positivity of 1 - Z^2.  Returns (ok, diagnostics) where diagnostics
    holds the anticommutator residual, the symmetry defect of the coordinate
    matrix W, and the smallest eigenvalue of the Hermitean part of 1 - W Wbar.
    """
    anti = float(np.abs(Z @ model.j + model.j @ Z).max())
    W = Z[: model.n, : model.n] + 1j * Z[: model.n, model.n :]
    sym = float(np.abs(W - W.T).max())
    M = np.eye(model.n) - W @ W.conj()
    herm = (M + M.conj().T) / 2.0
    mineig = float(np.linalg.eigvalsh(herm).min())
    ok = anti <= tol and sym <= tol and mineig > tol
    return ok, {"anticommutator": anti, "symmetry": sym, "min_eig_one_minus_zsq": mineig}


def make_cz_pair(model: SymplecticModel, C: np.ndarray, Z: np.ndarray, check: bool = True) -> CZPair:
    """Build a CZPair, verifying the compatibility relation 1 - Z^2 = (C* C)^{-1}."""
    if check:
        ok, diag = siegel_check(model, Z)
        if not ok:
            raise ValueError(f"Z outside the generalized unit disc: {diag}")
        K = complex_matrix(model, C)
        W = antilinear_matrix(model, Z, check=False)
        lhs = np.eye(model.n) - W @ W.conj()
        rhs = np.linalg.inv(K.conj().T @ K)
        scale = max(1.0, float(np.abs(rhs).max()))
        if np.abs(lhs - rhs).max() > ATOL_STRUCT * scale:
            raise ValueError("incompatible (C, Z): 1 - Z^2 != (C* C)^{-1}")
    return CZPair(C=C, Z=Z)


def cz_decompose(model: SymplecticModel, g: np.ndarray, check: bool = True) -> CZPair:
    """Split a symplectic g into g = C_g (1 + Z_g)."""
    if check and not is_symplectic(model, g):
        raise ValueError(f"matrix is not symplectic (residual {sp_residual(model, g):.3e})")
    C = linear_part(model, g)
    D = antilinear_part(model, g)
    Z = np.linalg.solve(C, D)
    return make_cz_pair(model, C, Z, check=check)


def cz_compose(model: SymplecticModel, pair: CZPair, check: bool = True) -> np.ndarray:
    """Reassemble the symplectic matrix g = C (1 + Z) from its pair."""
    g = pair.C @ (np.eye(2 * model.n) + pair.Z)
    if check and not is_symplectic(model, g, tol=1e-8):
        raise ValueError("pair does not assemble to a symplectic matrix")
    return g


def cz_inverse(model: SymplecticModel, pair: CZPair) -> CZPair:
    """Pair of g^{-1}: C_{g^{-1}} = C_g^*, Z_{g^{-1}} = -C_g Z_g C_g^{-1}."""
    Cinv = j_adjoint(model, pair.C)
    Zinv = -pair.C @ np.linalg.solve(pair.C.T, pair.Z.T).T
    # solve against C^T on the right: Z C^{-1} = solve(C^T, Z^T)^T
    return make_cz_pair(model, Cinv, Zinv)


def cz_product(model: SymplecticModel, p1: CZPair, p2: CZPair) -> CZPair:
    """Pair of the product g1 g2 computed without leaving (C, Z) data.

    With Zm = Z_{g2^{-1}} and M = 1 - Z_{g1} Zm (always invertible with
    positive Hermitean part when both factors lie in the disc):
        C_{g1g2} = C_{g1} M C_{g2}
        Z_{g1g2} = C_{g2}^{-1} M^{-1} (Z_{g1} - Zm) C_{g2}
    """
    Zm = -p2.C @ np.linalg.solve(p2.C.T, p2.Z.T).T
    M = np.eye(2 * model.n) - p1.Z @ Zm
    C12 = p1.C @ M @ p2.C
    inner = np.linalg.solve(M, p1.Z - Zm)
    Z12 = np.linalg.solve(p2.C, inner @ p2.C)
    return make_cz_pair(model, C12, Z12)


# ---------------------------------------------------------------------------
# Smooth logarithm of the complex determinant


def hermitean_min_eig(K: np.ndarray) -> float:
    """Smallest eigenvalue of the Hermitean part (K + K^H)/2."""
    return float(np.linalg.eigvalsh((K + K.conj().T) / 2.0).min())


def smooth_log_det(model: SymplecticModel, A: np.ndarray) -> complex:
    """The analytic branch a(g) of log det_C on maps with positive Hermitean part.

    Accepts either the real 2n x 2n form of a j-linear map or its n x n
    complex matrix.  Equals the sum of principal logarithms of the complex
    eigenvalues; this is the unique continuous branch with a(1) = 0 on the
    (convex, hence simply connected) set where the Hermitean part is positive
    definite, because every eigenvalue stays in the open right half-plane.
    """
    if A.shape == (2 * model.n, 2 * model.n):
        K = complex_matrix(model, A)
    elif A.shape == (model.n, model.n):
        K = np.asarray(A, dtype=complex)
    else:
        raise ValueError(f"bad shape {A.shape} for smooth_log_det")
    if hermitean_min_eig(K) <= 0:
        raise ValueError("Hermitean part is not positive definite; a(g) undefined here")
    eigs = np.linalg.eigvals(K)
    return complex(np.sum(np.log(eigs)))
