"""Finite fields F_{p^m} for odd p.

Elements are integer codes in [0, q): the base-p digits of the code are the
coefficients of the polynomial representative, lowest degree first. All
arithmetic goes through log/exp tables built once per (p, m).
"""
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from . import linalg
from .errors import CompositeP, CtxMismatch, EvenP


def is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _poly_rem(a, b, p):
    # a, b low-first lists over F_p; b monic
    a = list(a)
    db = len(b) - 1
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] % p
        if c:
            for k in range(db + 1):
                a[i - db + k] = (a[i - db + k] - c * b[k]) % p
    return [x % p for x in a[:db]]


def is_irreducible(f, p):
    """Trial division of a monic f (low-first) by every monic polynomial of degree <= deg/2."""
    deg = len(f) - 1
    if deg <= 0:
        return False
    for d in range(1, deg // 2 + 1):
        for low in product(range(p), repeat=d):
            if not any(_poly_rem(f, list(low) + [1], p)):
                return False
    return True


def least_irreducible(p, m):
    """Lexicographically least monic irreducible of degree m, comparing low-degree coefficients first."""
    for low in product(range(p), repeat=m):
        f = list(low) + [1]
        if is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")


class FieldCtx:
    """F_{p^m} = F_p[x]/(modulus). Immutable; build through ``ff_make``."""

    def __init__(self, p, m, modulus):
        self.p = p
        self.m = m
        self.q = p ** m
        self.modulus = tuple(modulus)
        self._build_tables()

    def __repr__(self):
        return f"FieldCtx(p={self.p}, m={self.m}, modulus={self.modulus})"

    def __reduce__(self):
        return (ff_make, (self.p, self.m))

    def _vec_mul(self, a, b):
        p, m, f = self.p, self.m, self.modulus
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return _poly_rem(prod, f, p) if len(prod) > m else [c % p for c in prod]

    def _build_tables(self):
        p, m, q = self.p, self.m, self.q
        w = p ** np.arange(m, dtype=np.int64)
        codes = np.arange(q, dtype=np.int64)
        self.VEC = (codes[:, None] // w[None, :]) % p
        self.W = w
        exp = None
        for gcode in range(2, q):
            gv = [int(v) for v in self.VEC[gcode]]
            seq = [1]
            cur = [1] + [0] * (m - 1)
            for _ in range(q - 2):
                cur = self._vec_mul(cur, gv)
                code = int(sum(c * int(pw) for c, pw in zip(cur, w)))
                if code == 1:
                    break
                seq.append(code)
            if len(seq) == q - 1:
                exp = seq
                break
        exp = np.array(exp, dtype=np.int64)
        self.EXP = np.concatenate([exp, exp])
        log = np.zeros(q, dtype=np.int64)
        log[exp] = np.arange(q - 1)
        self.LOG = log
        self.generator = int(exp[1])
        nz = codes[1:]
        self.INV = np.zeros(q, dtype=np.int64)
        self.INV[nz] = self.EXP[(q - 1 - log[nz]) % (q - 1)]
        self.FROB = np.zeros(q, dtype=np.int64)
        self.FROB[nz] = self.EXP[(log[nz] * p) % (q - 1)]
        self.FROBINV = np.zeros(q, dtype=np.int64)
        self.FROBINV[self.FROB] = codes
        self.NEG = ((-self.VEC) % p) @ w
        self._frob_pow = {0: codes, 1: self.FROB}

    # scalar operations on codes
    def add(self, a, b):
        return int((((self.VEC[a] + self.VEC[b]) % self.p) @ self.W))

    def sub(self, a, b):
        return int((((self.VEC[a] - self.VEC[b]) % self.p) @ self.W))

    def neg(self, a):
        return int(self.NEG[a])

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return int(self.EXP[self.LOG[a] + self.LOG[b]])

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in finite field")
        return int(self.INV[a])

    def pow(self, a, e):
        if a == 0:
            return 0 if e > 0 else 1
        return int(self.EXP[(int(self.LOG[a]) * e) % (self.q - 1)])

    def frob(self, a, k=1):
        return int(self.frob_table(k)[a])

    def frob_table(self, k):
        k %= self.m
        t = self._frob_pow.get(k)
        if t is None:
            t = self.FROB
            for _ in range(k - 1):
                t = self.FROB[t]
            self._frob_pow[k] = t
        return t

    def from_int(self, a):
        return a % self.p

    # vectorised operations on integer code arrays
    def vadd(self, A, B):
        return ((self.VEC[A] + self.VEC[B]) % self.p) @ self.W

    def vsub(self, A, B):
        return ((self.VEC[A] - self.VEC[B]) % self.p) @ self.W

    def vneg(self, A):
        return self.NEG[A]

    def vmul(self, A, B):
        A = np.asarray(A)
        B = np.asarray(B)
        out = self.EXP[self.LOG[A] + self.LOG[B]]
        return np.where((A == 0) | (B == 0), 0, out)

    def vfrob(self, A, k=1):
        return self.frob_table(k)[A]

    def vsum(self, A, axis=-1):
        return (self.VEC[A].sum(axis=axis - 1 if axis < 0 else axis) % self.p) @ self.W

    def element(self, code):
        return FieldElement(self, int(code))

    def mult_matrix(self, a):
        """F_p-matrix of x -> a*x in the digit basis (column k is a*x^k)."""
        cols = [self.VEC[self.mul(a, int(self.W[k]))] for k in range(self.m)]
        return np.stack(cols, axis=1)

    def frob_matrix(self, k=1):
        tab = self.frob_table(k)
        cols = [self.VEC[tab[int(self.W[j])]] for j in range(self.m)]
        return np.stack(cols, axis=1)


@lru_cache(maxsize=None)
def ff_make(p, m=1):
    if p == 2:
        raise EvenP("p = 2 is not supported")
    if not is_prime(p):
        raise CompositeP(f"{p} is not prime")
    if m < 1:
        raise ValueError("extension degree must be >= 1")
    return FieldCtx(p, m, least_irreducible(p, m))


class FieldElement:
    __slots__ = ("ctx", "code")

    def __init__(self, ctx, code):
        self.ctx = ctx
        self.code = int(code)

    @classmethod
    def from_coeffs(cls, ctx, coeffs):
        coeffs = list(coeffs) + [0] * (ctx.m - len(coeffs))
        return cls(ctx, sum((c % ctx.p) * ctx.p ** k for k, c in enumerate(coeffs[: ctx.m])))

    @property
    def coeffs(self):
        return [int(c) for c in self.ctx.VEC[self.code]]

    def _other(self, b):
        if isinstance(b, FieldElement):
            if b.ctx is not self.ctx:
                raise CtxMismatch("elements from different fields")
            return b.code
        return int(b) % self.ctx.p

    def __add__(self, b):
        return FieldElement(self.ctx, self.ctx.add(self.code, self._other(b)))

    __radd__ = __add__

    def __sub__(self, b):
        return FieldElement(self.ctx, self.ctx.sub(self.code, self._other(b)))

    def __rsub__(self, b):
        return FieldElement(self.ctx, self.ctx.sub(self._other(b), self.code))

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx.neg(self.code))

    def __mul__(self, b):
        return FieldElement(self.ctx, self.ctx.mul(self.code, self._other(b)))

    __rmul__ = __mul__

    def __truediv__(self, b):
        return FieldElement(self.ctx, self.ctx.mul(self.code, self.ctx.inv(self._other(b))))

    def __pow__(self, e):
        if e < 0:
            return FieldElement(self.ctx, self.ctx.pow(self.ctx.inv(self.code), -e))
        return FieldElement(self.ctx, self.ctx.pow(self.code, e))

    def inverse(self):
        return FieldElement(self.ctx, self.ctx.inv(self.code))

    def is_zero(self):
        return self.code == 0

    def __eq__(self, b):
        if isinstance(b, FieldElement):
            return self.ctx is b.ctx and self.code == b.code
        if isinstance(b, int):
            return self.code == b % self.ctx.p
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.m, self.code))

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(str(c) if k == 0 else f"{'' if c == 1 else c}x" + (f"^{k}" if k > 1 else ""))
        return " + ".join(terms) if terms else "0"


def ff_frobenius(a, k=1):
    return FieldElement(a.ctx, a.ctx.frob(a.code, k))


def ff_embed(small, large):
    """Embedding F_small -> F_large as a code lookup table.

    The image of x is the least-code root of small.modulus in the large field.
    """
    if small.p != large.p or large.m % small.m:
        raise CtxMismatch("no embedding between these fields")
    f = small.modulus
    roots = np.arange(large.q)
    val = np.zeros(large.q, dtype=np.int64)
    powk = np.ones(large.q, dtype=np.int64)
    for c in f:
        if c:
            val = large.vadd(val, large.vmul(np.full(large.q, c % large.p), powk))
        powk = large.vmul(powk, roots)
    r = int(np.nonzero(val == 0)[0][0])
    table = np.zeros(small.q, dtype=np.int64)
    rpow = [1]
    for _ in range(small.m - 1):
        rpow.append(large.mul(rpow[-1], r))
    for code in range(small.q):
        acc = 0
        for k, c in enumerate(small.VEC[code]):
            if c:
                acc = large.add(acc, large.mul(int(c), rpow[k]))
        table[code] = acc
    return table


@dataclass(frozen=True)
class AffineSpace:
    """particular + F_p-span(basis), vectors of FieldElement codes."""

    ctx: FieldCtx
    particular: tuple
    basis: tuple

    @property
    def dim_fp(self):
        return len(self.basis)

    @property
    def count(self):
        return self.ctx.p ** len(self.basis)

    def points(self):
        p = self.ctx.p
        for coeffs in product(range(p), repeat=len(self.basis)):
            v = list(self.particular)
            for c, b in zip(coeffs, self.basis):
                if c:
                    v = [self.ctx.add(x, self.ctx.mul(c, y)) for x, y in zip(v, b)]
            yield tuple(v)


class _Empty:
    count = 0

    def __repr__(self):
        return "Empty"

    def __bool__(self):
        return False

    def points(self):
        return iter(())


Empty = _Empty()


def _codes(ctx, rows):
    return np.array([[x.code if isinstance(x, FieldElement) else int(x) for x in r] for r in rows],
                    dtype=np.int64).reshape(len(rows), -1)


def linearize(ctx, A, B):
    """F_p matrix of x -> A x^(p) + B x, unknowns and equations in digit coordinates."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    neq, nv = A.shape
    m = ctx.m
    Fr = ctx.frob_matrix(1)
    out = np.zeros((neq * m, nv * m), dtype=np.int64)
    for i in range(neq):
        for j in range(nv):
            blk = np.zeros((m, m), dtype=np.int64)
            if A[i, j]:
                blk += ctx.mult_matrix(int(A[i, j])) @ Fr
            if B[i, j]:
                blk += ctx.mult_matrix(int(B[i, j]))
            out[i * m:(i + 1) * m, j * m:(j + 1) * m] = blk % ctx.p
    return out


def ff_solve_plinear(ctx, A, B, rhs):
    """Solve sum_j A_ij x_j^p + B_ij x_j = rhs_i over F_q.

    A, B are rows of codes (or FieldElements); returns AffineSpace or Empty.
    """
    A = _codes(ctx, A)
    B = _codes(ctx, B)
    if A.shape != B.shape:
        raise ValueError("A and B must have the same shape")
    rhs = np.array([x.code if isinstance(x, FieldElement) else int(x) for x in rhs], dtype=np.int64)
    nv = A.shape[1]
    L = linearize(ctx, A, B)
    b = ctx.VEC[rhs].reshape(-1)
    sol = linalg.solve(L, b, ctx.p)
    if sol is None:
        return Empty
    x0, kern = sol
    W = ctx.W
    to_codes = lambda v: tuple(int(c) for c in v.reshape(nv, ctx.m) @ W)
    return AffineSpace(ctx, to_codes(x0), tuple(to_codes(k) for k in kern))


def fq_rref(ctx, M):
    """Reduced row echelon form over F_q of a code matrix. Returns (R, pivots)."""
    R = np.array(M, dtype=np.int64).copy()
    rows, cols = R.shape
    piv = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            R[[r, k]] = R[[k, r]]
        R[r] = ctx.vmul(R[r], np.full(cols, ctx.inv(int(R[r, c]))))
        for i in range(rows):
            if i != r and R[i, c]:
                R[i] = ctx.vsub(R[i], ctx.vmul(np.full(cols, int(R[i, c])), R[r]))
        piv.append(c)
        r += 1
    return R, piv


def fq_rank(ctx, M):
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(fq_rref(ctx, M)[1])


def fq_nullspace(ctx, M):
    """Rows spanning the right kernel of a code matrix over F_q."""
    M = np.asarray(M, dtype=np.int64)
    cols = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    R, piv = fq_rref(ctx, M)
    free = [c for c in range(cols) if c not in set(piv)]
    out = np.zeros((len(free), cols), dtype=np.int64)
    for a, f in enumerate(free):
        out[a, f] = 1
        for i, pc in enumerate(piv):
            out[a, pc] = ctx.neg(int(R[i, f]))
    return out
