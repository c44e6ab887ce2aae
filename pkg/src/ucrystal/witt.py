"""Truncated Witt vectors W_n(F_q).

Two independent implementations live here:

* ``witt_universal_polys`` builds the sum/product polynomials from ghost
  components over Z and evaluates them on components. This is the reference.
* ``ZqRing`` models W_n(F_q) as (Z/p^n)[X]/(f~) where f~ is the integer lift of
  the field modulus. Elements are integer coefficient arrays, sigma is X -> xi
  with xi the Hensel root of f~ congruent to X^p. All module-level matrix work
  uses this model.

Components and Zq elements correspond through  z = sum_t p^t [x_t^(p^-t)].
"""
import threading
from functools import lru_cache

import numpy as np

from .errors import CtxMismatch, NonIntegralDivision, NotDivisible
from .ffield import FieldElement


def vp(x, p, cap):
    """p-adic valuation of an integer, capped."""
    x = int(x)
    if x == 0:
        return cap
    v = 0
    while x % p == 0 and v < cap:
        x //= p
        v += 1
    return v


def _int_mat_inv_mod(M, p, pn):
    """Inverse of an integer matrix modulo p^n (must be invertible mod p)."""
    M = [[int(x) % pn for x in row] for row in M]
    k = len(M)
    A = [row + [1 if i == j else 0 for j in range(k)] for i, row in enumerate(M)]
    for c in range(k):
        r = next(i for i in range(c, k) if A[i][c] % p)
        A[c], A[r] = A[r], A[c]
        inv = pow(A[c][c], -1, pn)
        A[c] = [x * inv % pn for x in A[c]]
        for i in range(k):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % pn for x, y in zip(A[i], A[c])]
    return [row[k:] for row in A]


class ZqRing:
    """W_prec(F_q) as (Z/p^prec)[X]/(f~). Elements: integer arrays with last axis m."""

    def __init__(self, ctx, prec):
        self.ctx = ctx
        self.p = p = ctx.p
        self.m = m = ctx.m
        self.prec = prec
        self.pn = pn = p ** prec
        big = pn * pn * max(m, 1) * 128 >= 2 ** 62
        self.dtype = object if big else np.int64
        self.f = [int(c) for c in ctx.modulus]
        # X^k mod f~ for k = m .. 2m-2
        red = []
        cur = [0] * m
        if m > 1:
            # X^m = -sum f_k X^k
            cur = [(-c) % pn for c in self.f[:m]]
            for _ in range(m - 1):
                red.append(cur)
                top = cur[-1]
                nxt = [0] + cur[:-1]
                cur = [(a - top * c) % pn for a, c in zip(nxt, self.f[:m])]
        self.RED = np.array(red, dtype=self.dtype).reshape(len(red), m)
        self._sig = {}
        self._build_sigma()

    def __repr__(self):
        return f"ZqRing(p={self.p}, m={self.m}, prec={self.prec})"

    def zeros(self, shape=()):
        return np.zeros(tuple(shape) + (self.m,), dtype=self.dtype)

    def from_ints(self, A):
        """Embed an integer array (constants) into the ring."""
        A = np.asarray(A, dtype=object if self.dtype is object else np.int64)
        out = self.zeros(A.shape)
        out[..., 0] = A % self.pn
        return out

    def one(self):
        z = self.zeros()
        z[0] = 1
        return z

    def eye(self, N):
        out = self.zeros((N, N))
        out[np.arange(N), np.arange(N), 0] = 1
        return out

    def reduce(self, A):
        return np.asarray(A, dtype=self.dtype) % self.pn

    def mul(self, a, b):
        """Elementwise product of broadcastable element arrays."""
        a = np.asarray(a, dtype=self.dtype)
        b = np.asarray(b, dtype=self.dtype)
        m = self.m
        shape = np.broadcast_shapes(a.shape, b.shape)
        conv = np.zeros(shape[:-1] + (2 * m - 1,), dtype=self.dtype)
        for i in range(m):
            conv[..., i:i + m] += a[..., i:i + 1] * b
            if self.dtype is np.int64:
                conv %= self.pn
        out = conv[..., :m]
        if m > 1:
            out = out + conv[..., m:] @ self.RED
        return out % self.pn

    def matmul(self, A, B):
        """(r,s,m) x (s,c,m) -> (r,c,m)."""
        A = np.asarray(A, dtype=self.dtype)
        B = np.asarray(B, dtype=self.dtype)
        m = self.m
        r, c = A.shape[0], B.shape[1]
        conv = np.zeros((2 * m - 1, r, c), dtype=self.dtype)
        for u in range(m):
            Au = A[:, :, u]
            if not Au.any():
                continue
            for v in range(m):
                Bv = B[:, :, v]
                if Bv.any():
                    conv[u + v] = (conv[u + v] + Au @ Bv) % self.pn
        out = np.moveaxis(conv[:m], 0, -1)
        if m > 1:
            out = out + np.moveaxis(conv[m:], 0, -1) @ self.RED
        return out % self.pn

    def matvec(self, A, x):
        return self.matmul(A, x[:, None, :])[:, 0, :]

    def scale(self, c, A):
        """Multiply every entry of A by the element c."""
        return self.mul(np.asarray(c)[(None,) * (np.ndim(A) - 1)], A)

    def _horner(self, coeffs, x):
        acc = self.zeros(np.shape(x)[:-1])
        for c in reversed(coeffs):
            acc = self.mul(acc, x)
            acc[..., 0] = (acc[..., 0] + c) % self.pn
        return acc

    def lift_codes(self, codes):
        """Naive lift: digit vectors of field codes as integer coefficients."""
        return self.ctx.VEC[np.asarray(codes)].astype(self.dtype)

    def residue(self, z):
        """Reduction mod p as field codes."""
        z = np.asarray(z)
        return ((z % self.p).astype(np.int64)) @ self.ctx.W

    def unit_inverse(self, u):
        u = np.asarray(u, dtype=self.dtype)
        r = self.residue(u)
        if np.any(r == 0):
            raise ZeroDivisionError("not a unit")
        v = self.lift_codes(self.ctx.INV[r])
        k = 1
        while k < self.prec:
            two = self.zeros(u.shape[:-1])
            two[..., 0] = 2
            v = self.mul(v, (two - self.mul(u, v)) % self.pn)
            k *= 2
        return v

    def _build_sigma(self):
        m, pn = self.m, self.pn
        if m == 1:
            self.S = np.ones((1, 1), dtype=self.dtype)
            self.Sinv = np.ones((1, 1), dtype=self.dtype)
            return
        X = self.zeros()
        X[1] = 1
        xi = self.lift_codes(self.ctx.FROB[self.ctx.p])  # X^p mod p
        fprime = [(k * c) for k, c in enumerate(self.f)][1:]
        k = 1
        while k < self.prec:
            num = self._horner(self.f, xi)
            den = self._horner(fprime, xi)
            xi = (xi - self.mul(num, self.unit_inverse(den))) % pn
            k *= 2
        cols = [self.one()]
        for _ in range(m - 1):
            cols.append(self.mul(cols[-1], xi))
        self.xi = xi
        self.S = np.stack(cols, axis=1)  # column k = xi^k
        self.Sinv = np.array(_int_mat_inv_mod(self.S.tolist(), self.p, pn), dtype=self.dtype)

    def sigma_matrix(self, k=1):
        k %= self.m
        if k not in self._sig:
            if k == 0:
                M = np.eye(self.m, dtype=self.dtype)
            else:
                M = np.eye(self.m, dtype=self.dtype)
                for _ in range(k):
                    M = (self.S @ M) % self.pn
            self._sig[k] = M
        return self._sig[k]

    def sigma(self, A, k=1):
        """Apply sigma^k entrywise (k may be negative)."""
        if self.m == 1:
            return np.asarray(A, dtype=self.dtype) % self.pn
        if k < 0:
            M = np.eye(self.m, dtype=self.dtype)
            for _ in range(-k):
                M = (self.Sinv @ M) % self.pn
            return (np.asarray(A, dtype=self.dtype) @ M.T) % self.pn
        return (np.asarray(A, dtype=self.dtype) @ self.sigma_matrix(k).T) % self.pn

    def valuation(self, z):
        z = np.asarray(z)
        if not z.any():
            return self.prec
        return min(vp(c, self.p, self.prec) for c in z.reshape(-1) if c % self.pn)

    def val_array(self, A):
        """Entrywise valuations (capped at prec) for an array of elements."""
        A = np.asarray(A) % self.pn
        out = np.full(A.shape[:-1], self.prec, dtype=np.int64)
        pe = 1
        for e in range(self.prec):
            pe_next = pe * self.p
            hit = ((A % pe_next) != 0).any(axis=-1) & (out == self.prec)
            out[hit] = e
            pe = pe_next
        return out

    def div_pk(self, A, k):
        """Exact division by p^k; the result is only meaningful mod p^(prec-k)."""
        A = np.asarray(A, dtype=self.dtype) % self.pn
        pk = self.p ** k
        if (A % pk).any():
            raise NotDivisible(f"entries not divisible by p^{k}")
        return A // pk

    def change_prec(self, A, prec):
        """Reinterpret data in a ring of another precision (truncating when lowering)."""
        R = zq_ring(self.ctx, prec)
        return np.asarray(A, dtype=R.dtype) % R.pn, R

    # Teichmueller and Witt-component conversion
    def teich(self, codes):
        codes = np.asarray(codes)
        z = self.lift_codes(codes)
        for _ in range(self.prec - 1):
            z = self.pow_q(z)
        return z

    def pow_q(self, z):
        e = self.ctx.q
        out = self.zeros(np.shape(z)[:-1])
        out[..., 0] = 1
        base = z
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def teich_table(self):
        if not hasattr(self, "_tt"):
            self._tt = self.teich(np.arange(self.ctx.q))
        return self._tt

    def from_components(self, comps):
        """Witt components (codes, last axis = component index) -> element array."""
        comps = np.asarray(comps)
        n = comps.shape[-1]
        T = self.teich_table()
        out = self.zeros(comps.shape[:-1])
        pt = 1
        for t in range(min(n, self.prec)):
            roots = self.ctx.frob_table(-t)[comps[..., t]]
            out = (out + pt * T[roots]) % self.pn
            pt *= self.p
        return out

    def to_components(self, z, n=None):
        n = self.prec if n is None else n
        z = np.asarray(z, dtype=self.dtype) % self.pn
        T = self.teich_table()
        comps = np.zeros(z.shape[:-1] + (n,), dtype=np.int64)
        cur = z
        for t in range(n):
            a = self.residue(cur)
            comps[..., t] = self.ctx.frob_table(t)[a]
            cur = (cur - T[a]) % self.pn
            if (cur % self.p).any():
                raise AssertionError("Teichmueller peeling failed")
            cur = cur // self.p
        return comps


@lru_cache(maxsize=None)
def zq_ring(ctx, prec):
    return ZqRing(ctx, prec)


# universal polynomials ------------------------------------------------------

_POLY_CACHE = {}
_POLY_LOCK = threading.Lock()


def _pmul(a, b, mod):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = (out.get(e, 0) + ca * cb) % mod
    return {e: c for e, c in out.items() if c}


def _ppow(a, k, mod, nvars):
    out = {(0,) * nvars: 1}
    base = a
    while k:
        if k & 1:
            out = _pmul(out, base, mod)
        k >>= 1
        if k:
            base = _pmul(base, base, mod)
    return out


def _padd(a, b, mod, sign=1):
    out = dict(a)
    for e, c in b.items():
        out[e] = (out.get(e, 0) + sign * c) % mod
    return {e: c for e, c in out.items() if c}


def _ghost(p, t, offset, nvars, mod):
    # w_t(Z) = sum_i p^i Z_i^(p^(t-i)) with Z_i the variable offset + i
    out = {}
    for i in range(t + 1):
        e = [0] * nvars
        e[offset + i] = p ** (t - i)
        out[tuple(e)] = (out.get(tuple(e), 0) + p ** i) % mod
    return {e: c for e, c in out.items() if c}


def witt_universal_polys(p, t):
    """Sum, product and negation polynomials of component t, reduced mod p.

    Variables are X_0..X_t, Y_0..Y_t (exponent tuples of length 2(t+1)).
    Higher components use the lower ones reduced mod p; this is sound because
    (A + pB)^(p^k) = A^(p^k) mod p^(k+1).
    """
    key = (p, t)
    hit = _POLY_CACHE.get(key)
    if hit is not None:
        return hit
    lower = [witt_universal_polys(p, i) for i in range(t)]
    nv = 2 * (t + 1)
    mod = p ** (t + 1)

    def widen(poly, i):
        # lift a poly in X_0..X_i, Y_0..Y_i to the t-variable layout
        out = {}
        for e, c in poly.items():
            ne = [0] * nv
            for k in range(i + 1):
                ne[k] = e[k]
                ne[t + 1 + k] = e[i + 1 + k]
            out[tuple(ne)] = c
        return out

    wx = _ghost(p, t, 0, nv, mod)
    wy = _ghost(p, t, t + 1, nv, mod)
    num_s = _padd(wx, wy, mod)
    num_p = _pmul(wx, wy, mod)
    for i, (S_i, P_i, _) in enumerate(lower):
        k = p ** (t - i)
        num_s = _padd(num_s, {e: c * p ** i for e, c in _ppow(widen(S_i, i), k, mod, nv).items()}, mod, -1)
        num_p = _padd(num_p, {e: c * p ** i for e, c in _ppow(widen(P_i, i), k, mod, nv).items()}, mod, -1)
    pt = p ** t
    res = []
    for num in (num_s, num_p):
        poly = {}
        for e, c in num.items():
            if c % pt:
                raise NonIntegralDivision(f"coefficient {c} not divisible by p^{t}")
            c = (c // pt) % p
            if c:
                poly[e] = c
        res.append(poly)
    e = [0] * nv
    e[t] = 1
    res.append({tuple(e): p - 1})
    out = tuple(res)
    with _POLY_LOCK:
        _POLY_CACHE.setdefault(key, out)
    return _POLY_CACHE[key]


# beyond these lengths the polynomial route is too slow; the Zq model takes over
POLY_MAX_LEN = {3: 4, 5: 3, 7: 3}


def _eval_poly(ctx, poly, values):
    acc = 0
    for e, c in poly.items():
        term = c % ctx.p
        for v, k in zip(values, e):
            if k:
                if v == 0:
                    term = 0
                    break
                term = ctx.mul(term, ctx.pow(v, k))
        if term:
            acc = ctx.add(acc, term)
    return acc


class WittVector:
    """Immutable length-n Witt vector; components are field codes."""

    __slots__ = ("ctx", "comps")

    def __init__(self, ctx, comps):
        self.ctx = ctx
        self.comps = tuple(int(c.code) if isinstance(c, FieldElement) else int(c) for c in comps)

    @property
    def n(self):
        return len(self.comps)

    @classmethod
    def zero(cls, ctx, n):
        return cls(ctx, [0] * n)

    @classmethod
    def one(cls, ctx, n):
        return cls(ctx, [1] + [0] * (n - 1))

    @classmethod
    def teichmuller(cls, ctx, a, n):
        a = a.code if isinstance(a, FieldElement) else int(a)
        return cls(ctx, [a] + [0] * (n - 1))

    @classmethod
    def from_int(cls, ctx, k, n):
        R = zq_ring(ctx, n)
        z = R.zeros()
        z[0] = k % R.pn
        return cls.from_zq(ctx, z, n)

    @classmethod
    def from_zq(cls, ctx, z, n):
        R = zq_ring(ctx, n)
        return cls(ctx, R.to_components(np.asarray(z) % R.pn, n))

    def to_zq(self):
        R = zq_ring(self.ctx, self.n)
        return R.from_components(np.array(self.comps))

    def components(self):
        return [FieldElement(self.ctx, c) for c in self.comps]

    def to_list(self):
        return [[int(x) for x in self.ctx.VEC[c]] for c in self.comps]

    @classmethod
    def from_list(cls, ctx, data):
        return cls(ctx, [FieldElement.from_coeffs(ctx, c).code for c in data])

    def _check(self, b):
        if not isinstance(b, WittVector) or b.ctx is not self.ctx or b.n != self.n:
            raise CtxMismatch("Witt vectors over different rings")

    def __eq__(self, b):
        return isinstance(b, WittVector) and b.ctx is self.ctx and b.comps == self.comps

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.m, self.comps))

    def __repr__(self):
        return f"W{self.comps}"

    def __add__(self, b):
        return witt_add(self, b)

    def __sub__(self, b):
        return witt_add(self, witt_neg(b))

    def __mul__(self, b):
        return witt_mul(self, b)

    def __neg__(self):
        return witt_neg(self)

    def is_unit(self):
        return self.comps[0] != 0


def _backend(n, p, backend):
    if backend == "auto":
        return "poly" if n <= POLY_MAX_LEN.get(p, 2) else "zq"
    return backend


def _via_polys(a, b, which):
    ctx = a.ctx
    out = []
    for t in range(a.n):
        poly = witt_universal_polys(ctx.p, t)[which]
        vals = list(a.comps[: t + 1]) + list(b.comps[: t + 1])
        out.append(_eval_poly(ctx, poly, vals))
    return WittVector(ctx, out)


def witt_add(a, b, backend="auto"):
    a._check(b)
    if _backend(a.n, a.ctx.p, backend) == "poly":
        return _via_polys(a, b, 0)
    R = zq_ring(a.ctx, a.n)
    return WittVector.from_zq(a.ctx, (a.to_zq() + b.to_zq()) % R.pn, a.n)


def witt_mul(a, b, backend="auto"):
    a._check(b)
    if _backend(a.n, a.ctx.p, backend) == "poly":
        return _via_polys(a, b, 1)
    R = zq_ring(a.ctx, a.n)
    return WittVector.from_zq(a.ctx, R.mul(a.to_zq(), b.to_zq()), a.n)


def witt_neg(a):
    # componentwise for odd p
    return WittVector(a.ctx, [a.ctx.neg(c) for c in a.comps])


def witt_frobenius(x):
    return WittVector(x.ctx, [x.ctx.frob(c) for c in x.comps])


def witt_verschiebung(x):
    return WittVector(x.ctx, [0] + list(x.comps[:-1]))


def witt_div_p(x):
    if x.comps[0] != 0:
        raise NotDivisible("leading component is nonzero")
    return WittVector(x.ctx, [x.ctx.frob(c, -1) for c in x.comps[1:]])


def witt_truncate(x, n):
    return WittVector(x.ctx, x.comps[:n])


def witt_scalar_int(x, k, backend="auto"):
    """k * x by repeated addition (no shortcut)."""
    acc = WittVector.zero(x.ctx, x.n)
    for _ in range(k):
        acc = witt_add(acc, x, backend)
    return acc


def ghost_component(x, t):
    """w_t of the naive integer lift of the components, in Z/p^(t+1)[X]/(f~)."""
    R = zq_ring(x.ctx, t + 1)
    acc = R.zeros()
    for i in range(t + 1):
        xi = R.lift_codes(x.comps[i])
        e = x.ctx.p ** (t - i)
        pw = R.one()
        base = xi
        while e:
            if e & 1:
                pw = R.mul(pw, base)
            base = R.mul(base, base)
            e >>= 1
        acc = (acc + x.ctx.p ** i * pw) % R.pn
    return acc, R
