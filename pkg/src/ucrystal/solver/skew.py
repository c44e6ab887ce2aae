"""Anti-self-dual homomorphisms M -> M^dual as a semilinear system.

Unknowns are the coordinates of A = sum_u y_u X_u for a basis X_u of the skew
matrices (transported through the pairing when one is given). The E-module
conditions F_T sigma(A) = A F_S and sigma(A) sigma(V_S) = sigma(V_T) A are
sigma-linear in y, which is exactly the shape Phi sigma(y) = B y.
"""
import numpy as np

from ..crystal import SemilinearSystem, mod_dual
from ..errors import EvenP
from ..witt import zq_ring


def _skew_matrices(R, N):
    out = []
    for a in range(N):
        for b in range(a + 1, N):
            X = R.zeros((N, N))
            X[a, b, 0] = 1
            X[b, a, 0] = R.pn - 1
            out.append(X)
    return out


def hom_system(R, FS, VS, FT, VT, basis, label=""):
    """SemilinearSystem over R whose solutions are the E-linear maps in span(basis)."""
    sVS = R.sigma(VS)
    sVT = R.sigma(VT)
    nb = len(basis)
    rows = 2 * FT.shape[0] * FS.shape[0]
    Phi = R.zeros((rows, nb))
    B = R.zeros((rows, nb))
    for u, X in enumerate(basis):
        sX = R.sigma(X)
        Phi[:, u] = np.concatenate([R.matmul(FT, sX).reshape(-1, R.m),
                                    R.matmul(sX, sVS).reshape(-1, R.m)])
        B[:, u] = np.concatenate([R.matmul(X, FS).reshape(-1, R.m),
                                  R.matmul(sVT, X).reshape(-1, R.m)])
    return SemilinearSystem(R.ctx, R.prec, Phi % R.pn, B % R.pn, label)


def skew_system(M, pairing=None, n=1):
    """Hom_E(M/p^n, M^dual/p^n)^skew as Phi sigma(y) = B y over W_n.

    Without a pairing the target is the dual module. With a QuasiPolarisation the
    target is M itself and the unknown is A = Bpol^-1 X with X skew, i.e. an
    endomorphism whose composite with the pairing is alternating.
    """
    if M.ctx.p == 2:
        raise EvenP("skew splitting needs p odd")
    if n > M.precision:
        M = M.rebuild(precision=n)
    R = zq_ring(M.ctx, n)
    F = R.reduce(M.matF)
    V = R.reduce(M.matV)
    N = M.rank
    skew = _skew_matrices(R, N)
    if pairing is None:
        D = mod_dual(M)
        return hom_system(R, F, V, R.reduce(D.matF), R.reduce(D.matV), skew,
                          f"skew({M.label})")
    Bp = R.reduce(pairing.matB)
    Binv = _monomial_inverse(R, Bp)
    basis = [R.matmul(Binv, X) for X in skew]
    return hom_system(R, F, V, F, V, basis, f"skew-pol({M.label})")


def _monomial_inverse(R, B):
    N = B.shape[0]
    out = R.zeros((N, N))
    for a in range(N):
        for b in range(N):
            if (B[a, b] % R.pn).any():
                out[b, a] = R.unit_inverse(B[a, b])
    if ((R.matmul(B, out) - R.eye(N)) % R.pn).any():
        raise ValueError("pairing matrix is not monomial with unit entries")
    return out
