# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels in ``_pycore`` (same signatures, same pivots)."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()


cdef inline int64_t _mod(int64_t a, int64_t m) nogil:
    a %= m
    return a + m if a < 0 else a


cdef int64_t _inv_mod(int64_t a, int64_t m):
    return pow(int(a), -1, int(m))


def fp_rref(int64_t[:, ::1] M, int64_t p):
    """Row-reduce an int64 matrix over F_p in place. Returns the pivot columns."""
    cdef Py_ssize_t rows = M.shape[0], cols = M.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, k
    cdef int64_t inv, f, t
    pivots = []
    for i in range(rows):
        for j in range(cols):
            M[i, j] = _mod(M[i, j], p)
    for c in range(cols):
        if r == rows:
            break
        k = -1
        for i in range(r, rows):
            if M[i, c] != 0:
                k = i
                break
        if k < 0:
            continue
        if k != r:
            for j in range(cols):
                t = M[r, j]
                M[r, j] = M[k, j]
                M[k, j] = t
        inv = _inv_mod(M[r, c], p)
        if inv != 1:
            for j in range(c, cols):
                M[r, j] = (M[r, j] * inv) % p
        for i in range(rows):
            if i == r:
                continue
            f = M[i, c]
            if f == 0:
                continue
            for j in range(c, cols):
                M[i, j] = _mod(M[i, j] - f * M[r, j], p)
        pivots.append(c)
        r += 1
    return pivots


def zn_snf_valuations(int64_t[:, ::1] M, int64_t p, int n):
    """Valuations of the Smith invariants of M over Z/p^n (n marks a zero invariant)."""
    cdef Py_ssize_t rows = M.shape[0], cols = M.shape[1]
    cdef Py_ssize_t size = min(rows, cols)
    cdef Py_ssize_t k, i, j, pi, pj, bi, bj
    cdef int64_t pn = 1, pe, u, uinv, f, t, x
    cdef int e, best, v
    for i in range(n):
        pn *= p
    for i in range(rows):
        for j in range(cols):
            M[i, j] = _mod(M[i, j], pn)
    out = []
    for k in range(size):
        # first entry (row-major) of minimal valuation
        best = n
        bi = -1
        bj = -1
        for i in range(k, rows):
            for j in range(k, cols):
                x = M[i, j]
                if x == 0:
                    continue
                v = 0
                while x % p == 0:
                    x //= p
                    v += 1
                if v < best:
                    best = v
                    bi = i
                    bj = j
                    if v == 0:
                        break
            if best == 0:
                break
        if bi < 0:
            out.extend([n] * (size - k))
            break
        if bi != k:
            for j in range(cols):
                t = M[k, j]
                M[k, j] = M[bi, j]
                M[bi, j] = t
        if bj != k:
            for i in range(rows):
                t = M[i, k]
                M[i, k] = M[i, bj]
                M[i, bj] = t
        pe = 1
        for i in range(best):
            pe *= p
        u = M[k, k] // pe
        uinv = _inv_mod(u, pn)
        for i in range(k + 1, rows):
            if M[i, k] == 0:
                continue
            f = ((M[i, k] // pe) * uinv) % pn
            for j in range(k, cols):
                M[i, j] = _mod(M[i, j] - (f * M[k, j]) % pn, pn)
        for j in range(k + 1, cols):
            M[k, j] = 0
        out.append(best)
    return out


cdef class _DFS:
    cdef int64_t[:, ::1] cons
    cdef int64_t[:, ::1] part
    cdef int64_t[:, ::1] kern
    cdef int64_t[:, :, :, ::1] tables
    cdef int64_t p, pn
    cdef int m, n, N1, R, k
    cdef long long leaves, nodes, budget
    cdef int64_t[::1] digit_w

    cdef int rec(self, int t, int64_t[::1] acc) except -2:
        cdef Py_ssize_t i, j, a
        cdef int64_t pt = 1, s, code
        cdef int ncons = self.cons.shape[0]
        cdef int nrhs = self.cons.shape[1]
        cdef int ncol = self.part.shape[0]
        self.nodes += 1
        if self.nodes > self.budget:
            return -1
        for i in range(t):
            pt *= self.p
        rhs = np.empty(self.R, dtype=np.int64)
        cdef int64_t[::1] rv = rhs
        for i in range(self.R):
            rv[i] = _mod(-(acc[i] // pt), self.p)
        for i in range(ncons):
            s = 0
            for j in range(nrhs):
                s += self.cons[i, j] * rv[j]
            if s % self.p != 0:
                return 0
        if t == self.n - 1:
            self.leaves += 1
            return 0
        x0 = np.empty(ncol, dtype=np.int64)
        cdef int64_t[::1] x0v = x0
        for i in range(ncol):
            s = 0
            for j in range(nrhs):
                s += self.part[i, j] * rv[j]
            x0v[i] = s % self.p
        coeffs = np.zeros(self.k, dtype=np.int64)
        cdef int64_t[::1] cv = coeffs
        x = np.empty(ncol, dtype=np.int64)
        cdef int64_t[::1] xv = x
        nxt = np.empty(self.R, dtype=np.int64)
        cdef int64_t[::1] nv = nxt
        cdef int rc
        while True:
            for i in range(ncol):
                s = x0v[i]
                for j in range(self.k):
                    s += cv[j] * self.kern[j, i]
                xv[i] = s % self.p
            for i in range(self.R):
                nv[i] = acc[i]
            for j in range(self.N1):
                code = 0
                for a in range(self.m):
                    code += xv[j * self.m + a] * self.digit_w[a]
                if code:
                    for i in range(self.R):
                        nv[i] += self.tables[t, j, code, i]
            for i in range(self.R):
                nv[i] %= self.pn
            rc = self.rec(t + 1, nxt.copy())
            if rc < 0:
                return -1
            j = 0
            while j < self.k:
                cv[j] += 1
                if cv[j] < self.p:
                    break
                cv[j] = 0
                j += 1
            if j == self.k:
                break
        return 0


def dfs_count(cons, part, kern, tables, int64_t p, int m, int n, long long budget_nodes):
    """Layered depth-first enumeration; see ``_pycore.dfs_count`` for the contract."""
    cdef _DFS d = _DFS()
    d.cons = np.ascontiguousarray(cons, dtype=np.int64).reshape(-1, tables.shape[3]) \
        if np.size(cons) else np.zeros((0, tables.shape[3]), dtype=np.int64)
    d.part = np.ascontiguousarray(part, dtype=np.int64)
    d.kern = np.ascontiguousarray(kern, dtype=np.int64).reshape(-1, d.part.shape[0]) \
        if np.size(kern) else np.zeros((0, d.part.shape[0]), dtype=np.int64)
    d.tables = np.ascontiguousarray(tables, dtype=np.int64)
    d.p = p
    d.m = m
    d.n = n
    d.pn = p ** n
    d.N1 = tables.shape[1]
    d.R = tables.shape[3]
    d.k = d.kern.shape[0]
    d.leaves = 0
    d.nodes = 0
    d.budget = budget_nodes
    d.digit_w = np.array([p ** a for a in range(m)], dtype=np.int64)
    if d.rec(0, np.zeros(d.R, dtype=np.int64)) < 0:
        return -1, d.nodes
    return d.leaves, d.nodes
