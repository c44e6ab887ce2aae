"""Layer dimensions of U for M = E/(F^g - V^g), in closed form and by a direct solver.

The direct route never uses the closed form. An endomorphism f of M/p^n is fixed
by f(e_1) = sum a_i e_i, and f exists iff F^g f(e_1) = V^g f(e_1). The solver
computes F^g and V^g from the module matrices, finds that both send e_i to the
same multiple of p^(v_i) e_pi(i), and reads off the connected part of End as a
product of W_min(v_i, n). It then evaluates the duality involution A -> B^-1 A^t B
on f(e_1) term by term and takes the dimension of its fixed part.
"""
from dataclasses import dataclass
from collections import defaultdict

from ..crystal import fgv_coeffs, mod_cyclic, mod_polarisation_cyclic
from ..errors import EvenP
from ..ffield import ff_make
from ..witt import zq_ring


def prop36_closed(g, n):
    """d_n = sum_{i<g} min(i, n), the layers of W_1 x ... x W_(g-1)."""
    return sum(min(i, n) for i in range(1, g))


def prop36_layers(g, nmax=None):
    nmax = g if nmax is None else nmax
    return [prop36_closed(g, n) for n in range(1, nmax + 1)]


@dataclass
class EndReport:
    g: int
    n: int
    vals: list              # v_i: F^g e_i = V^g e_i = unit * p^v_i e_pi(i)
    end_dim: int            # dim of the connected part of End(M/p^n)
    involution: list        # (tau(k), s_k, c_k): iota(a)_k = c_k sigma^s_k(a_tau(k))
    skew_dim: int


def _power_op(R, mat, k, sign):
    """Matrix P with X^k(x) = P sigma^(sign k)(x) for X(x) = mat sigma^sign(x)."""
    P = R.eye(mat.shape[0])
    for t in range(k):
        P = R.matmul(P, R.sigma(mat, sign * t))
    return P


def _monomial_columns(R, P):
    """For each column: (row, valuation, unit) when the column is one nonzero entry."""
    out = []
    for i in range(P.shape[1]):
        nz = [k for k in range(P.shape[0]) if (P[k, i] % R.pn).any()]
        if len(nz) != 1:
            return None
        k = nz[0]
        v = R.valuation(P[k, i])
        out.append((k, v, R.div_pk(P[k, i], v)))
    return out


def prop36_direct(g, n, p=3):
    """Dimension of the anti-self-dual part of End_E(M/p^n) computed from the module."""
    if p == 2:
        raise EvenP("the skew part needs p odd")
    ctx = ff_make(p, 2 * g)
    # work with enough precision that no structure constant vanishes, then clip to n
    prec = n + g + 1
    M = mod_cyclic(g, fgv_coeffs(g), ctx=ctx, precision=prec)
    R = zq_ring(ctx, prec)
    F = R.reduce(M.matF)
    V = R.reduce(M.matV)
    N = 2 * g
    Fg = _power_op(R, F, g, 1)
    Vg = _power_op(R, V, g, -1)
    if ((Fg - Vg) % R.pn).any():
        raise AssertionError("F^g and V^g differ on the standard basis")
    cols = _monomial_columns(R, Fg)
    if cols is None:
        raise AssertionError("F^g is not monomial on the standard basis")
    vals = [min(v, n) for k, v, u in cols]
    end_dim = sum(vals)

    # T_j with T_j e_1 = e_j: F^(j-1) for j <= g, V^(2g+1-j) after
    ops = []
    for j in range(N):
        if j < g:
            ops.append((_power_op(R, F, j, 1), j))
        else:
            ops.append((_power_op(R, V, N - j, -1), -(N - j)))
    for j, (T, s) in enumerate(ops):
        col = T[:, 0] % R.pn
        want = R.zeros((N,))
        want[j] = R.one()
        if ((col - want) % R.pn).any():
            raise AssertionError(f"T_{j + 1} e_1 != e_{j + 1}")

    # A[k][j] = sum_i sigma^s_j(a_i) [T_j e_i]_k, stored as {(i, s): coeff}
    def entry(k, j):
        T, s = ops[j]
        out = {}
        for i in range(N):
            c = T[k, i] % R.pn
            if c.any():
                out[(i, s)] = c
        return out

    pol = mod_polarisation_cyclic(M)
    B = R.reduce(pol.matB)
    Binv = R.zeros((N, N))
    for a in range(N):
        for b in range(N):
            if (B[a, b] % R.pn).any():
                Binv[b, a] = R.unit_inverse(B[a, b])
    if ((R.matmul(B, Binv) - R.eye(N)) % R.pn).any():
        raise AssertionError("polarisation matrix is not monomial")

    involution = []
    for k in range(N):
        acc = defaultdict(lambda: R.zeros())
        for l in range(N):
            if not (Binv[k, l] % R.pn).any():
                continue
            for m in range(N):
                if not (B[m, 0] % R.pn).any():
                    continue
                w = R.mul(Binv[k, l], B[m, 0])
                for key, c in entry(m, l).items():
                    acc[key] = (acc[key] + R.mul(w, c)) % R.pn
        terms = [(key, c) for key, c in acc.items() if c.any()]
        if len(terms) != 1:
            raise AssertionError(f"involution coordinate {k + 1} has {len(terms)} terms")
        (i, s), c = terms[0]
        if R.valuation(c) != 0:
            raise AssertionError(f"involution coefficient at {k + 1} is not a unit")
        involution.append((i, s, c))

    skew = 0
    for k, (i, s, c) in enumerate(involution):
        if involution[i][0] != k:
            raise AssertionError("involution does not pair coordinates")
        if i != k:
            if vals[i] != vals[k]:
                raise AssertionError("paired factors have different lengths")
            if k < i:
                skew += vals[k]
        elif s % (2 * g) == 0:
            one = R.one()
            w = R.valuation((one - c) % R.pn)
            skew += min(w, vals[k])
        # s != 0 on a fixed coordinate: a = c sigma^s(a) cuts out a finite group
    return EndReport(g, n, vals, end_dim,
                     [(i, s, int(R.residue(c))) for i, s, c in involution], skew)
