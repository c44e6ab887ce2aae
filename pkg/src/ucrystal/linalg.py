"""Exact linear algebra over F_p and Z/p^n on int64 numpy arrays."""
import numpy as np

from ._backend import fp_rref as _fp_rref
from ._backend import zn_snf_valuations as _snf


def as_i64(M):
    return np.ascontiguousarray(np.asarray(M, dtype=np.int64))


def rref(M, p):
    """Return (R, pivots) with R the reduced row echelon form of M over F_p."""
    R = as_i64(M).copy()
    if R.size == 0:
        return R, []
    piv = _fp_rref(R, p)
    return R, list(piv)


def rank(M, p):
    M = as_i64(M)
    if M.size == 0:
        return 0
    return len(rref(M, p)[1])


def nullspace(M, p):
    """Rows spanning {x : M x = 0} over F_p."""
    M = as_i64(M)
    cols = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    R, piv = rref(M, p)
    free = [c for c in range(cols) if c not in set(piv)]
    out = np.zeros((len(free), cols), dtype=np.int64)
    for a, f in enumerate(free):
        out[a, f] = 1
        for i, pc in enumerate(piv):
            out[a, pc] = (-R[i, f]) % p
    return out


def affine_solver(M, p):
    """Precompute a reusable solver for M x = b over F_p.

    Returns (cons, part, kern): b is solvable iff cons @ b == 0 mod p, then
    part @ b is one solution and the rows of kern span the homogeneous solutions.
    """
    M = as_i64(M)
    rows, cols = M.shape
    aug = np.concatenate([M % p, np.eye(rows, dtype=np.int64)], axis=1)
    R, piv = rref(aug, p)
    r = sum(1 for c in piv if c < cols)
    part = np.zeros((cols, rows), dtype=np.int64)
    for i in range(r):
        part[piv[i]] = R[i, cols:]
    cons = np.ascontiguousarray(R[r:, cols:])
    kern = nullspace(M, p) if rows else np.eye(cols, dtype=np.int64)
    return cons, part, kern


def solve(M, b, p):
    """Solve M x = b over F_p. Returns (x0, kernel_rows) or None."""
    cons, part, kern = affine_solver(M, p)
    b = as_i64(b) % p
    if cons.shape[0] and ((cons @ b) % p).any():
        return None
    return (part @ b) % p, kern


def snf_valuations(M, p, n):
    """p-adic valuations (capped at n) of the Smith invariants of M over Z/p^n."""
    M = as_i64(M).copy()
    if M.size == 0:
        return []
    if (p ** n) ** 2 >= 2 ** 62:
        raise OverflowError("p^n too large for int64 Smith form")
    return list(_snf(M, p, n))


def kernel_log_size(M, p, n):
    """log_p of #{x in (Z/p^n)^cols : M x = 0 mod p^n}."""
    M = as_i64(M)
    rows, cols = M.shape
    if cols == 0:
        return 0
    if rows == 0:
        return n * cols
    vals = snf_valuations(M, p, n)
    return sum(min(v, n) for v in vals) + n * (cols - len(vals))
