"""Exact point counts of the kernel of y -> Phi sigma(y) - B y on W_n(F_q)^N1.

Two engines share one contract:

* lattice: W_n(F_q) is the free Z/p^n-module on 1, X, ..., X^(m-1), so the map is an
  integer matrix E over Z/p^n and the kernel has p^(sum of Smith valuations) points;
* dfs: write y = sum_t p^t [w_t] with Teichmueller digits; every layer is the same
  F_p-linear system in w_t, so the search branches over affine solution spaces and
  the last layer is counted without enumeration.
"""
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

from .._backend import dfs_count as _dfs_count
from ..errors import BudgetExceeded, Inconclusive
from ..ffield import ff_make
from ..linalg import affine_solver, kernel_log_size
from ..witt import zq_ring


@dataclass
class CountResult:
    m: int
    n: int
    log_count: int          # the count is p^log_count
    p: int
    engine: str
    stats: dict = field(default_factory=dict)

    @property
    def count(self):
        return self.p ** self.log_count


def system_for(L, n, m):
    """Nygaard system of L over F_{p^m} truncated to W_n."""
    from ..crystal import base_change, nygaard_system
    ctx = ff_make(L.ctx.p, m)
    if ctx is not L.ctx:
        if m % L.ctx.m:
            raise ValueError(f"field degree {m} is not a multiple of {L.ctx.m}")
        L = base_change(L, ctx)
    if L.precision < n:
        L = L.rebuild(precision=n)
    return nygaard_system(L, n)


def lattice_matrix(sysn):
    """Integer matrix of the system: rows (target i, coefficient l), columns (unknown j, k)."""
    R = sysn.ring
    m = R.m
    N, N1 = sysn.Phi.shape[:2]
    E = np.zeros((N, m, N1, m), dtype=R.dtype)
    for k in range(m):
        xk = R.zeros()
        xk[k] = 1
        sk = R.S[:, k] if m > 1 else R.one()
        img = (R.mul(sysn.Phi, sk) - R.mul(sysn.B, xk)) % R.pn   # (N, N1, m)
        E[:, :, :, k] = np.transpose(img, (0, 2, 1))
    return E.reshape(N * m, N1 * m) % R.pn


def circulant_matrix(sysn, m):
    """Integer matrix of a system over W_n(F_p) base-changed to F_{p^m}.

    Z_{p^m} has a normal integral basis, in which sigma is the cyclic shift; the
    equation Phi sigma(y) = B y becomes Phi y_(i-1) = B y_i for i mod m.
    """
    if sysn.ctx.m != 1:
        raise ValueError("circulant form needs a system over W(F_p)")
    R = sysn.ring
    Phi = np.asarray(sysn.Phi[..., 0], dtype=np.int64)
    B = np.asarray(sysn.B[..., 0], dtype=np.int64)
    C = np.roll(np.eye(m, dtype=np.int64), 1, axis=0)
    return (np.kron(Phi, C) - np.kron(B, np.eye(m, dtype=np.int64))) % R.pn


def dfs_tables(sysn):
    """tables[t, j, a] = p^t E(e_j [a]) mod p^n, flattened over (target, coefficient)."""
    R = sysn.ring
    ctx = sysn.ctx
    N, N1 = sysn.Phi.shape[:2]
    T = R.teich_table()                       # (q, m)
    sT = R.sigma(T)
    out = np.zeros((R.prec, N1, ctx.q, N * R.m), dtype=np.int64)
    for j in range(N1):
        img = (R.mul(sysn.Phi[None, :, j, :], sT[:, None, :])
               - R.mul(sysn.B[None, :, j, :], T[:, None, :])) % R.pn    # (q, N, m)
        base = img.reshape(ctx.q, N * R.m).astype(np.int64)
        for t in range(R.prec):
            out[t, j] = (base * ctx.p ** t) % R.pn
    return out


def count_system(sysn, engine="lattice", budget_nodes=2_000_000):
    """Count the kernel of a system over its own field (engines "lattice" or "dfs")."""
    R = sysn.ring
    p, n, m = R.p, R.prec, R.m
    t0 = time.perf_counter()
    if sysn.n_unknowns == 0:
        return CountResult(m, n, 0, p, engine, {"seconds": 0.0})
    if engine == "lattice":
        E = lattice_matrix(sysn)
        lc = kernel_log_size(E.astype(np.int64), p, n)
        return CountResult(m, n, lc, p, "lattice",
                           {"matrix": E.shape, "seconds": time.perf_counter() - t0})
    if engine != "dfs":
        raise ValueError(f"unknown engine {engine!r}")
    E = lattice_matrix(sysn)
    lam = (E % p).astype(np.int64)
    cons, part, kern = affine_solver(lam, p)
    tables = dfs_tables(sysn)
    leaves, nodes = _dfs_count(np.ascontiguousarray(cons), np.ascontiguousarray(part),
                               np.ascontiguousarray(kern), tables, p, m, n, int(budget_nodes))
    stats = {"nodes": nodes, "leaves": leaves, "kernel_rank": int(kern.shape[0]),
             "seconds": time.perf_counter() - t0}
    if leaves < 0:
        raise BudgetExceeded(f"DFS exceeded {budget_nodes} nodes", stats)
    lc = kern.shape[0]
    while leaves > 1:
        if leaves % p:
            raise AssertionError("leaf count is not a power of p")
        leaves //= p
        lc += 1
    return CountResult(m, n, lc, p, "dfs", stats)


def count_points(L, n, m, engine="auto", budget_nodes=2_000_000):
    """|H_{L,n}(F_{p^m})| for an F-crystal L or a SemilinearSystem.

    engine: "circulant" (system over W(F_p), any m), "lattice" (Smith form over the
    Witt ring of F_{p^m}), "dfs" (layered search), or "auto" (circulant when possible).
    """
    from ..crystal import SemilinearSystem, nygaard_system
    if isinstance(L, SemilinearSystem):
        base = L.truncate(n) if L.n != n else L
    else:
        src = L if L.precision >= n else L.rebuild(precision=n)
        base = nygaard_system(src, n)
    if engine == "auto":
        engine = "circulant" if base.ctx.m == 1 else "lattice"
    if engine == "circulant":
        t0 = time.perf_counter()
        if base.n_unknowns == 0:
            return CountResult(m, n, 0, base.ctx.p, engine, {"seconds": 0.0})
        E = circulant_matrix(base, m)
        lc = kernel_log_size(E, base.ctx.p, n)
        return CountResult(m, n, lc, base.ctx.p, "circulant",
                           {"matrix": E.shape, "seconds": time.perf_counter() - t0})
    if base.ctx.m == m:
        sysn = base
    elif isinstance(L, SemilinearSystem):
        sysn = _system_base_change(base, m)
    else:
        sysn = system_for(L, n, m)
    return count_system(sysn, engine, budget_nodes)


def _system_base_change(sysn, m):
    from ..crystal import SemilinearSystem, embedding_matrix
    small = sysn.ring
    big = zq_ring(ff_make(small.p, m), small.prec)
    if m % small.m:
        raise ValueError(f"field degree {m} is not a multiple of {small.m}")
    E = embedding_matrix(small, big)
    Phi = (sysn.Phi.astype(big.dtype) @ E.T) % big.pn
    B = (sysn.B.astype(big.dtype) @ E.T) % big.pn
    return SemilinearSystem(big.ctx, sysn.n, Phi, B, sysn.label)


def brute_force_count(sysn):
    """Enumerate W_n(F_q)^N1 through Witt components; only for tiny systems."""
    R = sysn.ring
    ctx = sysn.ctx
    N1 = sysn.n_unknowns
    total = ctx.q ** (N1 * R.prec)
    if total > 200_000:
        raise BudgetExceeded(f"{total} points is too many to enumerate")
    idx = np.arange(total)
    comps = np.zeros((total, N1, R.prec), dtype=np.int64)
    for pos in range(N1 * R.prec):
        comps[:, pos // R.prec, pos % R.prec] = idx % ctx.q
        idx //= ctx.q
    Y = R.from_components(comps)                       # (total, N1, m)
    cnt = 0
    for y in Y:
        if not sysn.apply(y).any():
            cnt += 1
    return cnt


# dimension from counts ---------------------------------------------------

@dataclass
class DimCertificate:
    d: int
    status: str                       # "certified", "corroborated" or "inconclusive"
    estimates: dict                   # m -> Fraction estimate against the base degree
    reason: str = ""

    @property
    def certified(self):
        return self.status == "certified"

    @property
    def accepted(self):
        return self.status in ("certified", "corroborated")


def dim_from_counts(counts, lower=None, upper=None):
    """Dimension of a group G = (connected unipotent) by (finite) from point counts.

    |G(F_q)| = q^d |pi_0(F_q)|, and pi_0(F_{p^m0}) sits inside pi_0(F_{p^m}) when m0 | m,
    so every quotient (log N_m - log N_m0)/(m - m0) is an upper bound for d. The bound
    is a proof only when it meets ``lower``. Otherwise two degrees with gcd m0 that agree
    on the minimal integer value give status "corroborated": an unknown Frobenius period
    of pi_0 could in principle inflate both by the same integer.
    """
    counts = sorted(counts, key=lambda c: c.m)
    if len(counts) < 2:
        raise Inconclusive("need counts at two or more extension degrees")
    if len({c.n for c in counts}) != 1:
        raise Inconclusive("counts at different precisions")
    base = counts[0]
    est = {}
    for c in counts[1:]:
        if c.m % base.m:
            raise Inconclusive(f"degree {c.m} is not a multiple of the base degree {base.m}")
        diff = c.log_count - base.log_count
        if diff < 0:
            raise Inconclusive("count decreased under field extension", partial=est)
        est[c.m] = Fraction(diff, c.m - base.m)
    ub = min(min(est.values()), min(Fraction(c.log_count, c.m) for c in counts))
    ub_int = ub.numerator // ub.denominator
    if upper is not None:
        ub_int = min(ub_int, upper)
    if lower is not None and lower > ub_int:
        raise Inconclusive(f"count bound {ub_int} below the closed-form lower bound {lower}",
                           partial=est)
    if lower is not None and lower == ub_int:
        return DimCertificate(ub_int, "certified", est, "count upper bound meets closed-form lower bound")
    hits = [m for m, e in est.items() if e == ub_int]
    for i, a in enumerate(hits):
        for b in hits[i + 1:]:
            if gcd(a, b) == base.m:
                return DimCertificate(ub_int, "corroborated", est,
                                      f"degrees {a} and {b} agree on the minimum")
    return DimCertificate(ub_int, "inconclusive", est, "no two independent estimates agree")
