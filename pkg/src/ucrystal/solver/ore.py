"""Twisted polynomials k[Phi; sigma] with Phi c = c^p Phi, and their matrices.

A matrix over the twisted ring acts on a column of unknowns x in k^cols by
(sum_s c_s Phi^s)(x) = sum_s c_s x^(p^s). The solution group of such a system
has dimension cols - rank, the rank taken over the skew field of fractions.
"""
import numpy as np

from ..errors import EvenP
from ..ffield import ff_make


class TwistedPoly:
    """Left coefficients c_0..c_deg (field codes) of powers of Phi."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx, coeffs):
        c = [int(x) % ctx.q for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.ctx = ctx
        self.coeffs = tuple(c)

    @classmethod
    def monomial(cls, ctx, c, s):
        return cls(ctx, [0] * s + [c])

    @property
    def deg(self):
        return len(self.coeffs) - 1     # -1 for zero

    def is_zero(self):
        return not self.coeffs

    def lead(self):
        return self.coeffs[-1]

    def __eq__(self, b):
        return isinstance(b, TwistedPoly) and self.ctx is b.ctx and self.coeffs == b.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, b):
        ctx = self.ctx
        n = max(len(self.coeffs), len(b.coeffs))
        a1 = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b1 = list(b.coeffs) + [0] * (n - len(b.coeffs))
        return TwistedPoly(ctx, [ctx.add(x, y) for x, y in zip(a1, b1)])

    def __neg__(self):
        return TwistedPoly(self.ctx, [self.ctx.neg(x) for x in self.coeffs])

    def __sub__(self, b):
        return self + (-b)

    def __mul__(self, b):
        ctx = self.ctx
        if self.is_zero() or b.is_zero():
            return TwistedPoly(ctx, [])
        out = [0] * (len(self.coeffs) + len(b.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            tab = ctx.frob_table(i)
            for j, c in enumerate(b.coeffs):
                if c:
                    out[i + j] = ctx.add(out[i + j], ctx.mul(a, int(tab[c])))
        return TwistedPoly(ctx, out)

    def __call__(self, x):
        """Evaluate the additive polynomial at the field element with code x."""
        ctx = self.ctx
        acc = 0
        for s, c in enumerate(self.coeffs):
            acc = ctx.add(acc, ctx.mul(c, ctx.frob(x, s)))
        return acc

    def __repr__(self):
        terms = [f"{c}*Phi^{s}" for s, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) if terms else "0"


def ore_divmod(a, b):
    """a = q b + r with deg r < deg b."""
    if b.is_zero():
        raise ZeroDivisionError("division by the zero twisted polynomial")
    ctx = a.ctx
    q = TwistedPoly(ctx, [])
    r = a
    lb = b.lead()
    while r.deg >= b.deg:
        s = r.deg - b.deg
        c = ctx.mul(r.lead(), ctx.inv(ctx.frob(lb, s)))
        t = TwistedPoly.monomial(ctx, c, s)
        q = q + t
        r = r - t * b
    return q, r


# matrices as code arrays of shape (rows, cols, D) ------------------------

def to_array(ctx, mat):
    """List-of-lists of TwistedPoly -> code array."""
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    D = max([1] + [len(e.coeffs) for r in mat for e in r])
    A = np.zeros((rows, cols, D), dtype=np.int64)
    for i, r in enumerate(mat):
        for j, e in enumerate(r):
            A[i, j, :len(e.coeffs)] = e.coeffs
    return A


def _degrees(col):
    """Degree of each entry of a (rows, D) code array; -1 for zero entries."""
    nz = col != 0
    D = col.shape[1]
    last = D - 1 - np.argmax(nz[:, ::-1], axis=1)
    return np.where(nz.any(axis=1), last, -1)


def ore_rank(ctx, A, stats=None):
    """Rank of a twisted-polynomial matrix by Euclidean row elimination.

    ``A`` is a code array (rows, cols, D) or a list of lists of TwistedPoly.
    Row operations are left multiplications row_i -= c Phi^s row_r, which keep
    the solution set of the system unchanged.
    """
    if not isinstance(A, np.ndarray):
        A = to_array(ctx, A)
    A = np.array(A, dtype=np.int64) % ctx.q
    rows, cols, D = A.shape
    r0 = 0
    steps = 0
    for col in range(cols):
        if r0 == rows:
            break
        while True:
            deg = _degrees(A[r0:, col])
            live = np.nonzero(deg >= 0)[0]
            if live.size == 0:
                break
            piv = r0 + int(live[np.argmin(deg[live])])
            if piv != r0:
                A[[r0, piv]] = A[[piv, r0]]
            dp = int(deg[piv - r0])
            lp = int(A[r0, col, dp])
            others = r0 + 1 + np.nonzero(_degrees(A[r0 + 1:, col]) >= 0)[0]
            done = True
            for i in others:
                while True:
                    di = int(_degrees(A[i:i + 1, col])[0])
                    if di < dp:
                        break
                    s = di - dp
                    c = ctx.mul(int(A[i, col, di]), ctx.inv(ctx.frob(lp, s)))
                    top = int(_degrees(A[r0]).max())
                    need = top + s + 1
                    if need > A.shape[2]:
                        A = np.concatenate(
                            [A, np.zeros((rows, cols, need - A.shape[2]), dtype=np.int64)], axis=2)
                    Dn = A.shape[2]
                    shifted = np.zeros((cols, Dn), dtype=np.int64)
                    shifted[:, s:s + top + 1] = ctx.vmul(c, ctx.frob_table(s)[A[r0, :, :top + 1]])
                    A[i] = ctx.vsub(A[i], shifted)
                    steps += 1
                if int(_degrees(A[i:i + 1, col])[0]) >= 0:
                    done = False
            if done:
                r0 += 1
                break
    if stats is not None:
        stats["row_ops"] = steps
        stats["max_degree"] = A.shape[2] - 1
    return r0


def kernel_dim(ctx, A):
    if not isinstance(A, np.ndarray):
        A = to_array(ctx, A)
    return A.shape[1] - ore_rank(ctx, A)


def fq_matmul(ctx, A, B):
    """Product of two code matrices over F_q."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if ctx.m == 1:
        return (A @ B) % ctx.p
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for k in range(A.shape[1]):
        out = ctx.vadd(out, ctx.vmul(A[:, k:k + 1], B[k:k + 1, :]))
    return out


def semilinear_array(ctx, Phi, B):
    """Twisted matrix of x -> Phi x^(p) - B x (Phi, B code matrices of equal shape)."""
    Phi = np.asarray(Phi, dtype=np.int64)
    A = np.zeros(Phi.shape + (2,), dtype=np.int64)
    A[..., 0] = ctx.vneg(np.asarray(B, dtype=np.int64))
    A[..., 1] = Phi
    return A


def system_dim_mod_p(sysn, stats=None):
    """Dimension of the solution group of a SemilinearSystem reduced mod p."""
    R = sysn.ring
    if sysn.n_unknowns == 0:
        return 0
    A = semilinear_array(sysn.ctx, R.residue(sysn.Phi), R.residue(sysn.B))
    return A.shape[1] - ore_rank(sysn.ctx, A, stats)


def kernel_dim_mod_p(L, stats=None):
    """dim U_L[p] as the n = 1 kernel of F/p - 1 on the Nygaard sublattice."""
    from ..crystal import nygaard_system
    return system_dim_mod_p(nygaard_system(L, 1), stats)


# Hom systems between mod p modules ---------------------------------------

def hom_conditions(ctx, FS, VS, FT, VT, basis):
    """Twisted system for A = sum_u x_u basis[u] to be a map S -> T of E-modules.

    F and V matrices are code arrays with F(x) = F sigma(x), V(x) = V sigma^-1(x).
    Conditions: F_T sigma(A) = A F_S and sigma(A) sigma(V_S) = sigma(V_T) A.
    """
    sVS = ctx.vfrob(np.asarray(VS, dtype=np.int64))
    sVT = ctx.vfrob(np.asarray(VT, dtype=np.int64))
    cols = []
    for U in basis:
        U = np.asarray(U, dtype=np.int64)
        phi = np.concatenate([fq_matmul(ctx, FT, U).ravel(), fq_matmul(ctx, U, sVS).ravel()])
        lin = np.concatenate([fq_matmul(ctx, U, FS).ravel(), fq_matmul(ctx, sVT, U).ravel()])
        cols.append((phi, lin))
    nrow = cols[0][0].shape[0] if cols else 0
    A = np.zeros((nrow, len(basis), 2), dtype=np.int64)
    for u, (phi, lin) in enumerate(cols):
        A[:, u, 1] = phi
        A[:, u, 0] = ctx.vneg(lin)
    return A


def full_basis(rows, cols):
    out = []
    for i in range(rows):
        for j in range(cols):
            U = np.zeros((rows, cols), dtype=np.int64)
            U[i, j] = 1
            out.append(U)
    return out


def skew_basis(ctx, N):
    out = []
    for a in range(N):
        for b in range(a + 1, N):
            U = np.zeros((N, N), dtype=np.int64)
            U[a, b] = 1
            U[b, a] = ctx.neg(1)
            out.append(U)
    return out


def dual_mats(ctx, F, V):
    """F and V of the dual module in the dual basis."""
    F = np.asarray(F, dtype=np.int64)
    V = np.asarray(V, dtype=np.int64)
    return ctx.vfrob(V).T.copy(), ctx.vfrob(F, -1).T.copy()


def hom_dim_mod_p(ctx, FS, VS, FT, VT):
    """dim Hom_E(S, T) for mod p modules."""
    basis = full_basis(np.shape(FT)[0], np.shape(FS)[0])
    if not basis:
        return 0
    return kernel_dim(ctx, hom_conditions(ctx, FS, VS, FT, VT, basis))


def skew_hom_dim_mod_p(ctx, F, V):
    """dim Hom_E(M, M^dual)^skew for a mod p module (p odd)."""
    if ctx.p == 2:
        raise EvenP("skew splitting needs p odd")
    FD, VD = dual_mats(ctx, F, V)
    basis = skew_basis(ctx, np.shape(F)[0])
    if not basis:
        return 0
    return kernel_dim(ctx, hom_conditions(ctx, F, V, FD, VD, basis))


def random_twisted(ctx, rows, cols, deg, rng, density=0.6):
    A = rng.integers(0, ctx.q, size=(rows, cols, deg + 1))
    A[rng.random((rows, cols)) > density] = 0
    return A


def embed_array(A, small, big):
    """Map a code array over F_small to F_big."""
    from ..ffield import ff_embed
    tab = ff_embed(small, big)
    return tab[np.asarray(A)]


def extension_stable(A, ctx, factor=2):
    """(rank over ctx, rank over the degree-`factor` extension)."""
    big = ff_make(ctx.p, ctx.m * factor)
    return ore_rank(ctx, A), ore_rank(big, embed_array(A, ctx, big))
