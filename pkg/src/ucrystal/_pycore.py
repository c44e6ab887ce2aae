"""Pure numpy implementations of the hot kernels.

Same signatures as the compiled ``_fastcore`` extension; the package picks
one of the two at import time (see ``ucrystal._backend``).
"""
import numpy as np


def fp_rref(M, p):
    """Row-reduce an int64 matrix over F_p in place. Returns the pivot columns."""
    rows, cols = M.shape
    M %= p
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            M[[r, k]] = M[[k, r]]
        inv = pow(int(M[r, c]), -1, p)
        if inv != 1:
            M[r] = (M[r] * inv) % p
        col = M[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            M[hit] = (M[hit] - np.outer(col[hit], M[r])) % p
        pivots.append(c)
        r += 1
    return pivots


def zn_snf_valuations(M, p, n):
    """Valuations of the Smith invariants of M over Z/p^n (n marks a zero invariant).

    M is an int64 matrix and is destroyed. Length of the result is min(rows, cols).
    """
    pn = p ** n
    rows, cols = M.shape
    M %= pn
    out = []
    size = min(rows, cols)
    for k in range(size):
        sub = M[k:, k:]
        piv = None
        e = 0
        pe = 1
        while e < n:
            mask = (sub % (pe * p)) != 0
            if mask.any():
                i, j = np.argwhere(mask)[0]
                piv = (k + int(i), k + int(j))
                break
            e += 1
            pe *= p
        if piv is None:
            out.extend([n] * (size - k))
            break
        i, j = piv
        if i != k:
            M[[k, i]] = M[[i, k]]
        if j != k:
            M[:, [k, j]] = M[:, [j, k]]
        u = int(M[k, k]) // pe
        uinv = pow(u, -1, pn)
        col = M[k + 1:, k] // pe
        hit = np.nonzero(col)[0]
        if hit.size:
            f = (col[hit] * uinv) % pn
            tail = M[k, k:]
            blk = M[k + 1 + hit, k:]
            M[k + 1 + hit, k:] = (blk - (f[:, None] * tail[None, :]) % pn) % pn
        M[k, k + 1:] = 0
        out.append(e)
    return out


def dfs_count(cons, part, kern, tables, p, m, n, budget_nodes):
    """Layered depth-first enumeration of the kernel of a semilinear system.

    Unknowns are y = sum_t p^t [w_t] with w_t in F_q^N1 (Teichmueller digits).
    Every layer solves the same F_p-linear system  Lambda(w_t) = -(acc / p^t) mod p;
    ``cons`` are its consistency rows, ``part`` maps a right-hand side to one
    solution, ``kern`` is a kernel basis (rows, in F_p digit coordinates).
    ``tables[t, j, a]`` is p^t * E(e_j [a]) mod p^n, flattened.

    Returns (leaves, nodes); leaves == -1 means the node budget ran out.
    The count is leaves * p^(number of kernel vectors).
    """
    N1 = tables.shape[1]
    R = tables.shape[3]
    k = kern.shape[0]
    pn = p ** n
    digit_w = p ** np.arange(m, dtype=np.int64)
    state = [0, 0]

    def rec(t, acc):
        state[1] += 1
        if state[1] > budget_nodes:
            raise _Budget()
        rhs = (-(acc // (p ** t))) % p
        if cons.shape[0] and ((cons @ rhs) % p).any():
            return
        if t == n - 1:
            state[0] += 1
            return
        x0 = (part @ rhs) % p
        tab = tables[t]
        coeffs = np.zeros(k, dtype=np.int64)
        while True:
            x = (x0 + coeffs @ kern) % p if k else x0
            codes = x.reshape(N1, m) @ digit_w
            nz = np.nonzero(codes)[0]
            nxt = acc + tab[nz, codes[nz]].sum(axis=0) if nz.size else acc.copy()
            rec(t + 1, nxt % pn)
            j = 0
            while j < k:
                coeffs[j] += 1
                if coeffs[j] < p:
                    break
                coeffs[j] = 0
                j += 1
            if j == k:
                break

    try:
        rec(0, np.zeros(R, dtype=np.int64))
    except _Budget:
        return -1, state[1]
    return state[0], state[1]


class _Budget(Exception):
    pass
