"""Dieudonne modules and F-crystals at finite precision.

A module of precision n stores its matrices over W_{n+1} (one guard digit),
as Zq arrays of shape (N, N, m); F(x) = matF sigma(x), V(x) = matV sigma^-1(x).
"""
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

from .errors import (AsymmetricPolygon, CtxMismatch, FieldTooSmall, HasEtaleSlope,
                     NonDivisibleMiddle, NonUnitLeading, NotCoprime, NotStable,
                     PrecisionExhausted)
from .ffield import ff_embed, ff_make, fq_nullspace, fq_rref
from .witt import WittVector, zq_ring

DEFAULT_PRECISION = 3


def _ctx(ctx, p, m):
    return ctx if ctx is not None else ff_make(p, m)


@dataclass(eq=False)
class DieudonneModule:
    ctx: object
    precision: int
    matF: np.ndarray
    matV: np.ndarray
    label: str = ""
    fv_exp: int = 1            # F V = p^fv_exp (1 for Dieudonne modules, 2 for wedge2/tensor)
    recipe: dict = None
    declared_slopes: tuple = None

    @property
    def ring(self):
        return zq_ring(self.ctx, self.precision + 1)

    @property
    def rank(self):
        return self.matF.shape[0]

    @property
    def is_dieudonne(self):
        return self.fv_exp == 1

    def __repr__(self):
        return (f"DieudonneModule({self.label or '?'}, rank={self.rank}, p={self.ctx.p}, "
                f"m={self.ctx.m}, precision={self.precision})")

    def check(self, prec=None):
        """Verify F V = V F = p^e Id at the public precision."""
        R = self.ring
        prec = self.precision if prec is None else prec
        mod = self.ctx.p ** prec
        target = (self.ctx.p ** self.fv_exp) * R.eye(self.rank)
        fv = R.matmul(self.matF, R.sigma(self.matV))
        vf = R.matmul(self.matV, R.sigma(self.matF, -1))
        return bool(((fv - target) % mod == 0).all() and ((vf - target) % mod == 0).all())

    def rebuild(self, precision=None, ctx=None):
        """Same module at another precision or over a larger field."""
        precision = self.precision if precision is None else precision
        ctx = self.ctx if ctx is None else ctx
        if self.recipe is not None:
            return build(self.recipe, ctx=ctx, precision=precision)
        if precision > self.precision:
            raise PrecisionExhausted("no recipe to rebuild at higher precision")
        M = self if ctx is self.ctx else base_change(self, ctx)
        R = zq_ring(ctx, precision + 1)
        return DieudonneModule(ctx, precision, R.reduce(M.matF), R.reduce(M.matV),
                               self.label, self.fv_exp, None, self.declared_slopes)

    def residue_F(self):
        return self.ring.residue(self.matF)

    def residue_V(self):
        return self.ring.residue(self.matV)

    def a_number(self):
        """dim_k M / (FM + VM)."""
        from .ffield import fq_rank
        both = np.concatenate([self.residue_F(), self.residue_V()], axis=1)
        return self.rank - fq_rank(self.ctx, both)

    def slopes(self):
        if self.declared_slopes is not None:
            return list(self.declared_slopes)
        return compute_slopes(self)

    def newton_polygon(self):
        from .npoly import NewtonPolygon
        return NewtonPolygon.from_slopes(self.slopes())

    def to_doc(self):
        R = self.ring
        ent = lambda A: [[WittVector.from_zq(self.ctx, A[i, j], R.prec).to_list()
                          for j in range(A.shape[1])] for i in range(A.shape[0])]
        return {"p": self.ctx.p, "field_degree": self.ctx.m, "precision": self.precision,
                "rank": self.rank, "matF": ent(self.matF), "matV": ent(self.matV),
                "label": self.label, "fv_exp": self.fv_exp}


def module_from_doc(doc, precision=None, ctx=None):
    """Parse a module document (explicit matrices or a constructor recipe)."""
    if any(k in doc for k in ("cyclic", "newton", "simple", "dsum", "wedge2", "tensor", "dual")):
        p = doc.get("p", 3)
        ctx = ctx or ff_make(p, doc.get("field_degree", 1))
        return build(doc, ctx=ctx, precision=precision or doc.get("precision", DEFAULT_PRECISION))
    for key in ("p", "field_degree", "precision", "rank", "matF", "matV"):
        if key not in doc:
            raise ValueError(f"module document lacks '{key}'")
    ctx = ff_make(int(doc["p"]), int(doc["field_degree"]))
    prec = int(doc["precision"])
    R = zq_ring(ctx, prec + 1)
    N = int(doc["rank"])

    def mat(rows):
        if len(rows) != N or any(len(r) != N for r in rows):
            raise ValueError("matrix shape does not match rank")
        out = R.zeros((N, N))
        for i in range(N):
            for j in range(N):
                w = WittVector.from_list(ctx, rows[i][j])
                if w.n != prec + 1:
                    raise ValueError("Witt entry length must be precision + 1")
                out[i, j] = w.to_zq()
        return out

    M = DieudonneModule(ctx, prec, mat(doc["matF"]), mat(doc["matV"]), doc.get("label", ""),
                        int(doc.get("fv_exp", 1)))
    if not M.check():
        raise ValueError("module document violates F V = p^e")
    return M


def build(recipe, ctx=None, precision=DEFAULT_PRECISION):
    ctx = ctx or ff_make(recipe.get("p", 3) if isinstance(recipe, dict) else 3, 1)
    if "simple" in recipe:
        c, d = recipe["simple"]
        return mod_simple(c, d, ctx=ctx, precision=precision)
    if "cyclic" in recipe:
        cy = recipe["cyclic"]
        return mod_cyclic(cy["g"], cy["coeffs"], ctx=ctx, precision=precision,
                          strict=cy.get("strict", True))
    if "newton" in recipe:
        from .npoly import NewtonPolygon
        nu = NewtonPolygon([tuple(x) for x in recipe["newton"]])
        return mod_from_newton(nu, ctx=ctx, precision=precision)
    if "dsum" in recipe:
        parts = [build(r, ctx=ctx, precision=precision) for r in recipe["dsum"]]
        return mod_dsum(*parts)
    if "wedge2" in recipe:
        return mod_wedge2(build(recipe["wedge2"], ctx=ctx, precision=precision))
    if "tensor" in recipe:
        a, b = recipe["tensor"]
        return mod_tensor(build(a, ctx=ctx, precision=precision), build(b, ctx=ctx, precision=precision))
    if "dual" in recipe:
        return mod_dual(build(recipe["dual"], ctx=ctx, precision=precision))
    raise ValueError(f"unknown module recipe {recipe!r}")


def _elem(R, a):
    """Coerce an int, WittVector or element array to a Zq element."""
    if isinstance(a, WittVector):
        return R.reduce(zq_ring(a.ctx, a.n).from_components(np.array(a.comps)))[..., :]
    arr = np.asarray(a)
    if arr.ndim == 0:
        z = R.zeros()
        z[0] = int(a) % R.pn
        return z
    return R.reduce(arr)


# constructors ------------------------------------------------------------

def mod_simple(c, d, *, ctx=None, p=3, m=1, precision=DEFAULT_PRECISION):
    """M_{c,d}: F e_i = e_{i+c}, V e_i = e_{i+d}, with e_{i+c+d} = p e_i."""
    if c < 0 or d < 0 or (c, d) == (0, 0) or gcd(c, d) != 1:
        raise NotCoprime(f"({c},{d}) is not a coprime pair")
    ctx = _ctx(ctx, p, m)
    R = zq_ring(ctx, precision + 1)
    h = c + d
    F = np.zeros((h, h), dtype=object)
    V = np.zeros((h, h), dtype=object)
    for i in range(h):
        F[(i + c) % h, i] = ctx.p ** ((i + c) // h)
        V[(i + d) % h, i] = ctx.p ** ((i + d) // h)
    M = DieudonneModule(ctx, precision, R.from_ints(F), R.from_ints(V), f"M{c}{d}", 1,
                        {"simple": [c, d]}, (Fraction(c, h),) * h)
    assert M.check()
    return M


def mod_cyclic(g, coeffs, *, ctx=None, p=3, m=1, precision=DEFAULT_PRECISION, strict=True,
               label=None):
    """E / E(a_0 F^g + a_1 F^(g-1) + ... + a_g + ... + a_2g V^g), basis F^(i-1) (i <= g), V^(2g+1-j) (j > g)."""
    ctx = _ctx(ctx, p, m)
    if len(coeffs) != 2 * g + 1:
        raise ValueError("need 2g+1 coefficients")
    R = zq_ring(ctx, precision + 1)
    a = [_elem(R, c) for c in coeffs]
    P = ctx.p
    if not (a[0] % P).any() or not (a[2 * g] % P).any():
        raise NonUnitLeading("a_0 and a_2g must be units")
    if strict and any((a[i] % P).any() for i in range(1, 2 * g)):
        raise NonDivisibleMiddle("middle coefficients must be divisible by p")
    N = 2 * g
    F = R.zeros((N, N))
    V = R.zeros((N, N))
    # 0-based: index i-1 holds e_i
    for j in range(1, g):
        F[j, j - 1, 0] = 1
    a0inv = R.unit_inverse(a[0])
    col = R.zeros((N,))
    for i in range(1, g + 1):
        col[g - i] = (col[g - i] + a[i]) % R.pn
    for i in range(g + 1, 2 * g + 1):
        col[3 * g - i] = (col[3 * g - i] + a[i]) % R.pn
    F[:, g - 1] = (-R.mul(a0inv[None, :], col)) % R.pn
    for j in range(g + 1, 2 * g):
        F[j, j - 1, 0] = P
    F[0, N - 1, 0] = (F[0, N - 1, 0] + P) % R.pn
    V[N - 1, 0, 0] = 1
    for j in range(2, g + 1):
        V[j - 2, j - 1, 0] = P
    for j in range(g + 2, 2 * g + 1):
        V[j - 2, j - 1, 0] = 1
    # V e_{g+1} = V^(g+1) . 1, from sigma^-1 of the relation
    b = [R.sigma(x, -1) for x in a]
    vcol = R.zeros((N,))
    for i in range(0, g):
        vcol[g - i - 1] = (vcol[g - i - 1] + P * b[i]) % R.pn
    vcol[N - 1] = (vcol[N - 1] + b[g]) % R.pn
    for i in range(g + 1, 2 * g):
        vcol[3 * g - i - 1] = (vcol[3 * g - i - 1] + b[i]) % R.pn
    V[:, g] = (-R.mul(R.unit_inverse(b[2 * g])[None, :], vcol)) % R.pn
    recipe = {"cyclic": {"g": g, "coeffs": [_coeff_doc(c) for c in coeffs], "strict": strict}}
    M = DieudonneModule(ctx, precision, F, V, label or f"cyclic(g={g})", 1, recipe)
    if not M.check():
        raise ValueError("relation does not present a Dieudonne module with the standard basis")
    return M


def _coeff_doc(c):
    if isinstance(c, (int, np.integer)):
        return int(c)
    if isinstance(c, WittVector):
        return c.to_list()
    return np.asarray(c).tolist()


def fgv_coeffs(g, sign=-1):
    """Coefficients of F^g + sign V^g."""
    return [1] + [0] * (2 * g - 1) + [sign]


def newton_breaking_points(nu):
    """Vertices of the polygon from (0,0) to (2g, g), slopes ascending."""
    segs = sorted(nu.expanded(), key=lambda cd: Fraction(cd[0], cd[0] + cd[1]))
    pts = [(0, 0)]
    x = y = 0
    last = None
    for c, d in segs:
        s = Fraction(c, c + d)
        if last is not None and s != last:
            pts.append((x, y))
        x += c + d
        y += c
        last = s
    pts.append((x, y))
    return pts


def newton_coeffs(nu, p):
    g = nu.g
    a = [0] * (2 * g + 1)
    for i, j in newton_breaking_points(nu):
        a[i] = p ** j if i <= g else p ** (j + g - i)
    return a


def mod_from_newton(nu, *, ctx=None, p=3, m=1, precision=DEFAULT_PRECISION):
    if not nu.is_symmetric():
        raise AsymmetricPolygon(f"{nu} is not symmetric")
    if any(c == 0 or d == 0 for c, d, _ in nu.pairs):
        raise HasEtaleSlope("slopes 0 and 1 are not allowed here; use mod_dsum with mod_simple")
    ctx = _ctx(ctx, p, m)
    coeffs = newton_coeffs(nu, ctx.p)
    M = mod_cyclic(nu.g, coeffs, ctx=ctx, precision=precision, label=f"M[{nu}]")
    M.recipe = {"newton": [list(x) for x in nu.pairs]}
    M.declared_slopes = tuple(sorted(nu.slopes()))
    return M


def _same(*mods):
    ctx, prec = mods[0].ctx, mods[0].precision
    for M in mods[1:]:
        if M.ctx is not ctx or M.precision != prec:
            raise CtxMismatch("modules over different rings or precisions")
    return ctx, prec


def mod_dsum(*mods):
    ctx, prec = _same(*mods)
    fv = {M.fv_exp for M in mods}
    if len(fv) != 1:
        raise CtxMismatch("direct sum of crystals with different F V exponents")
    R = zq_ring(ctx, prec + 1)
    N = sum(M.rank for M in mods)
    F = R.zeros((N, N))
    V = R.zeros((N, N))
    o = 0
    for M in mods:
        r = M.rank
        F[o:o + r, o:o + r] = M.matF
        V[o:o + r, o:o + r] = M.matV
        o += r
    recipes = [M.recipe for M in mods]
    recipe = {"dsum": recipes} if all(r is not None for r in recipes) else None
    slopes = None
    if all(M.declared_slopes is not None for M in mods):
        slopes = tuple(sorted(s for M in mods for s in M.declared_slopes))
    return DieudonneModule(ctx, prec, F, V, "+".join(M.label for M in mods), fv.pop(), recipe, slopes)


def wedge_pairs(N):
    return [(i, j) for i in range(N) for j in range(i + 1, N)]


def _wedge_matrix(R, A):
    N = A.shape[0]
    pr = wedge_pairs(N)
    I = np.array([i for i, _ in pr], dtype=np.int64)
    J = np.array([j for _, j in pr], dtype=np.int64)
    # entry [(i,j),(a,b)] = A_ia A_jb - A_ja A_ib
    Aia = A[I][:, I]
    Ajb = A[J][:, J]
    Aja = A[J][:, I]
    Aib = A[I][:, J]
    return (R.mul(Aia, Ajb) - R.mul(Aja, Aib)) % R.pn


def mod_wedge2(M):
    R = M.ring
    F = _wedge_matrix(R, M.matF)
    V = _wedge_matrix(R, M.matV)
    slopes = None
    if M.declared_slopes is not None:
        s = M.declared_slopes
        slopes = tuple(sorted(s[i] + s[j] for i, j in wedge_pairs(len(s))))
    recipe = {"wedge2": M.recipe} if M.recipe is not None else None
    return DieudonneModule(M.ctx, M.precision, F, V, f"wedge2({M.label})", 2 * M.fv_exp, recipe, slopes)


def _kron(R, A, B):
    r1, c1 = A.shape[:2]
    r2, c2 = B.shape[:2]
    T = R.mul(A[:, None, :, None, :], B[None, :, None, :, :])
    return T.reshape(r1 * r2, c1 * c2, R.m)


def mod_tensor(M, N):
    ctx, prec = _same(M, N)
    R = M.ring
    F = _kron(R, M.matF, N.matF)
    V = _kron(R, M.matV, N.matV)
    slopes = None
    if M.declared_slopes is not None and N.declared_slopes is not None:
        slopes = tuple(sorted(a + b for a in M.declared_slopes for b in N.declared_slopes))
    recipe = {"tensor": [M.recipe, N.recipe]} if M.recipe is not None and N.recipe is not None else None
    return DieudonneModule(ctx, prec, F, V, f"({M.label})x({N.label})", M.fv_exp + N.fv_exp, recipe, slopes)


def mod_dual(M):
    R = M.ring
    F = np.ascontiguousarray(np.swapaxes(R.sigma(M.matV), 0, 1))
    V = np.ascontiguousarray(np.swapaxes(R.sigma(M.matF, -1), 0, 1))
    slopes = None
    if M.declared_slopes is not None:
        slopes = tuple(sorted(M.fv_exp - s for s in M.declared_slopes))
    recipe = {"dual": M.recipe} if M.recipe is not None else None
    return DieudonneModule(M.ctx, M.precision, F, V, f"dual({M.label})", M.fv_exp, recipe, slopes)


def base_change(M, ctx):
    """The module over a larger residue field F_{p^m'} (m | m')."""
    if ctx is M.ctx:
        return M
    if M.recipe is not None:
        return build(M.recipe, ctx=ctx, precision=M.precision)
    small = M.ring
    big = zq_ring(ctx, small.prec)
    E = embedding_matrix(small, big)
    F = (M.matF.astype(big.dtype) @ E.T) % big.pn
    V = (M.matV.astype(big.dtype) @ E.T) % big.pn
    return DieudonneModule(ctx, M.precision, F, V, M.label, M.fv_exp, None, M.declared_slopes)


def embedding_matrix(small, big):
    """Integer matrix sending small-ring coefficient vectors to big-ring ones."""
    if small.m == 1:
        E = np.zeros((big.m, 1), dtype=big.dtype)
        E[0, 0] = 1
        return E
    tab = ff_embed(small.ctx, big.ctx)
    r = big.lift_codes(tab[small.ctx.p])
    f = small.f
    fprime = [k * c for k, c in enumerate(f)][1:]
    k = 1
    while k < big.prec:
        r = (r - big.mul(big._horner(f, r), big.unit_inverse(big._horner(fprime, r)))) % big.pn
        k *= 2
    cols = [big.one()]
    for _ in range(small.m - 1):
        cols.append(big.mul(cols[-1], r))
    return np.stack(cols, axis=1)


# Nygaard sublattice -----------------------------------------------------------

@dataclass(eq=False)
class Sublattice:
    owner: DieudonneModule
    basis: np.ndarray      # (N, N, m) columns are generators
    kernel_dim: int = 0    # dim_k of ker(F mod p)
    info: dict = field(default_factory=dict)


def mod_nygaard(L):
    """F^1_N(L) = {x : p | F x}: lifts of sigma^-1(ker Fbar) plus p times a complement."""
    ctx = L.ctx
    R = L.ring
    N = L.rank
    Fbar = L.residue_F()
    K = fq_nullspace(ctx, Fbar)                       # rows: ker of the matrix Fbar
    K = ctx.frob_table(-1)[K] if K.size else K        # x with sigma(x) in ker Fbar
    B = R.zeros((N, N))
    col = 0
    pivots = []
    if K.shape[0]:
        Kr, pivots = fq_rref(ctx, K)
        for row in Kr:
            B[:, col] = R.lift_codes(row)
            col += 1
    for c in range(N):
        if c not in pivots:
            B[c, col, 0] = ctx.p
            col += 1
    assert col == N
    return Sublattice(L, B, len(pivots))


@dataclass(eq=False)
class SemilinearSystem:
    """Phi sigma(y) - B y = 0 over W_n; y in W_n^N1 (columns), N target rows."""
    ctx: object
    n: int
    Phi: np.ndarray
    B: np.ndarray
    label: str = ""

    @property
    def ring(self):
        return zq_ring(self.ctx, self.n)

    @property
    def n_unknowns(self):
        return self.Phi.shape[1]

    @property
    def n_targets(self):
        return self.Phi.shape[0]

    def apply(self, y):
        R = self.ring
        return (R.matvec(self.Phi, R.sigma(y)) - R.matvec(self.B, y)) % R.pn

    def truncate(self, n):
        R = zq_ring(self.ctx, n)
        return SemilinearSystem(self.ctx, n, R.reduce(self.Phi), R.reduce(self.B), self.label)


def nygaard_system(L, n=None):
    """The system of the map F/p - 1 : F^1_N(L)/p^n -> L/p^n."""
    n = L.precision if n is None else n
    if n > L.precision:
        raise PrecisionExhausted(f"module known to precision {L.precision}, asked {n}")
    R = L.ring
    S = mod_nygaard(L)
    FB = R.matmul(L.matF, R.sigma(S.basis))
    Phi = R.div_pk(FB, 1)
    Rn = zq_ring(L.ctx, n)
    return SemilinearSystem(L.ctx, n, Rn.reduce(Phi), Rn.reduce(S.basis), L.label)


# quasi-polarisation of the F^g - V^g family -------------------------------

@dataclass(eq=False)
class QuasiPolarisation:
    owner: DieudonneModule
    matB: np.ndarray
    theta: np.ndarray
    zeta: int


def _is_fgv(M):
    rec = (M.recipe or {}).get("cyclic")
    if not rec:
        return None
    g = rec["g"]
    R = M.ring
    want = fgv_coeffs(g)
    ok = all(isinstance(c, int) and (c - w) % R.pn == 0 for c, w in zip(rec["coeffs"], want))
    return g if ok else None


def mod_polarisation_cyclic(M):
    """psi(e_i, e_{i+g}) = sigma^(i-1)(theta) with sigma^g(theta) = -theta."""
    g = _is_fgv(M)
    if g is None:
        raise ValueError("polarisation is defined for the module E/(F^g - V^g) only")
    ctx = M.ctx
    if ctx.m % (2 * g):
        raise FieldTooSmall(f"need 2g={2 * g} | m={ctx.m}")
    tab = ctx.frob_table(g)
    cands = [z for z in range(1, ctx.q) if tab[z] == ctx.neg(z)]
    if not cands:
        raise FieldTooSmall("no zeta with zeta^(p^g) = -zeta")
    zeta = cands[0]
    R = M.ring
    theta = R.teich(np.array(zeta))
    N = 2 * g
    B = R.zeros((N, N))
    for i in range(g):
        s = R.sigma(theta, i)
        B[i, i + g] = s
        B[i + g, i] = (-s) % R.pn
    pol = QuasiPolarisation(M, B, theta, zeta)
    if not check_polarisation(pol):
        raise AssertionError("quasi-polarisation identities failed")
    return pol


def check_polarisation(pol, prec=None):
    M = pol.owner
    R = M.ring
    mod = M.ctx.p ** (M.precision if prec is None else prec)
    B = pol.matB
    alt = ((np.swapaxes(B, 0, 1) + B) % mod == 0).all()
    # psi(F e_i, e_j) = sigma(psi(e_i, V e_j))
    lhs = R.matmul(np.swapaxes(M.matF, 0, 1), B)
    rhs = R.sigma(R.matmul(B, M.matV))
    compat = ((lhs - rhs) % mod == 0).all()
    unit = all(R.residue(B[i, (i + M.rank // 2) % M.rank]) != 0 for i in range(M.rank))
    return bool(alt and compat and unit)


# sublattices and isogenies -----------------------------------------------

def hermite_basis(R, G):
    """Lower-triangular basis (N, N, m) of the column span of G (N, K, m); None if not full rank."""
    G = R.reduce(G).copy()
    N, K = G.shape[:2]
    V = R.val_array(G)
    out = R.zeros((N, N))
    exps = []
    free = list(range(K))
    for r in range(N):
        vals = [(V[r, c], c) for c in free]
        if not vals:
            return None, None
        e, c = min(vals)
        if e >= R.prec:
            return None, None
        piv = G[r, c]
        u = R.unit_inverse(R.div_pk(piv, e))
        for c2 in free:
            if c2 != c and V[r, c2] < R.prec:
                f = R.mul(R.div_pk(G[r, c2], e), u)
                G[:, c2] = (G[:, c2] - R.mul(f[None, :], G[:, c])) % R.pn
        free.remove(c)
        # normalise the pivot to p^e
        out[:, r] = R.mul(u[None, :], G[:, c])
        exps.append(int(e))
        if free:
            V[:, free] = R.val_array(G[:, free])
    return out, exps


def lower_solve(R, S, exps, X):
    """S^-1 X for lower-triangular S with diagonal p^e_r; NotStable if not integral."""
    N = S.shape[0]
    Y = R.zeros(X.shape[:-1])
    for r in range(N):
        acc = X[r].copy()
        for c in range(r):
            if S[r, c].any():
                acc = (acc - R.mul(S[r, c][None, :], Y[c])) % R.pn
        pe = R.p ** exps[r]
        if (acc % pe).any():
            raise NotStable("image leaves the sublattice")
        Y[r] = acc // pe
    return Y


def _in_span(R, S, exps, X):
    try:
        lower_solve(R, S, exps, X)
        return True
    except NotStable:
        return False


def mod_sublattice_isogeny(M, spec):
    """An F,V-stable sublattice M' of finite index, as a module in its own basis.

    spec: "pM"; {"generators": [[...] ...]} (columns in module coordinates, must be
    stable); {"random": seed, "k": exponent} closes a random vector plus p^k M under F, V.
    """
    R = M.ring
    N = M.rank
    if spec == "pM":
        G = (M.ctx.p * R.eye(N)) % R.pn
        close = False
    elif "generators" in spec:
        cols = [np.asarray(v) for v in spec["generators"]]
        G = np.stack([_vec(R, v, N) for v in cols], axis=1)
        if spec.get("k"):
            G = np.concatenate([G, (M.ctx.p ** spec["k"]) * R.eye(N)], axis=1) % R.pn
        close = bool(spec.get("close", False))
    elif "random" in spec:
        rng = np.random.default_rng(spec["random"])
        k = spec.get("k", 1)
        v = R.reduce(rng.integers(0, R.p ** k, size=(N, R.m)))
        # push the vector into FM + VM by a random word in F and V
        for _ in range(int(rng.integers(1, k + 1))):
            if rng.integers(0, 2):
                v = R.matvec(M.matF, R.sigma(v))
            else:
                v = R.matvec(M.matV, R.sigma(v, -1))
        G = np.concatenate([v[:, None, :], (M.ctx.p ** k) * R.eye(N)], axis=1) % R.pn
        close = True
    else:
        raise ValueError(f"unknown sublattice spec {spec!r}")
    S, exps = hermite_basis(R, G)
    if S is None:
        raise NotStable("generators do not span a lattice of finite index")
    while close:
        FS = R.matmul(M.matF, R.sigma(S))
        VS = R.matmul(M.matV, R.sigma(S, -1))
        S2, e2 = hermite_basis(R, np.concatenate([S, FS, VS], axis=1))
        if sum(e2) == sum(exps):
            break
        S, exps = S2, e2
    loss = sum(exps)
    newprec = M.precision - loss
    if newprec < 1:
        raise PrecisionExhausted(f"index p^{loss} consumes the working precision {M.precision}")
    F2 = lower_solve(R, S, exps, R.matmul(M.matF, R.sigma(S)))
    V2 = lower_solve(R, S, exps, R.matmul(M.matV, R.sigma(S, -1)))
    R2 = zq_ring(M.ctx, newprec + 1)
    quotient = {
        "length": loss * M.ctx.m,
        "FC_zero": _in_span(R, S, exps, M.matF),
        "VC_zero": _in_span(R, S, exps, M.matV),
        "exps": exps,
    }
    M2 = DieudonneModule(M.ctx, newprec, R2.reduce(F2), R2.reduce(V2), f"sub({M.label})",
                         M.fv_exp, None, M.declared_slopes)
    M2.quotient = quotient
    M2.basis_in_parent = S
    if not M2.check():
        raise AssertionError("sublattice module violates F V = p^e")
    return M2


def _vec(R, v, N):
    v = np.asarray(v)
    if v.ndim == 1:
        out = R.zeros((N,))
        out[:, 0] = v % R.pn
        return out
    return R.reduce(v)


# slopes ----------------------------------------------------------------------

def charpoly(R, A):
    """Division-free (Berkowitz) characteristic polynomial det(t - A), low degree first."""
    n = A.shape[0]
    vect = [R.one(), (-A[0, 0]) % R.pn]  # high degree first
    for r in range(1, n):
        Ar = A[:r, :r]
        row = A[r, :r]
        colv = A[:r, r]
        t = [R.one(), (-A[r, r]) % R.pn]
        cur = colv
        for _ in range(r):
            s = (R.mul(row, cur).sum(axis=0)) % R.pn
            t.append((-s) % R.pn)
            cur = R.matvec(Ar, cur)
        new = []
        for i in range(r + 2):
            acc = R.zeros()
            for j in range(max(0, i - r - 1), min(i, r) + 1):
                if i - j < len(t) and j < len(vect):
                    acc = (acc + R.mul(t[i - j], vect[j])) % R.pn
            new.append(acc)
        vect = new
    return list(reversed(vect))


def newton_slopes_from_vals(vals, cap):
    """Lower convex hull of (N - i, v(a_i)); vals indexed by degree i (monic)."""
    n = len(vals) - 1
    pts = [(n - i, vals[i]) for i in range(n, -1, -1)]
    known = [(x, y) for x, y in pts if y < cap]
    hull = []
    for pt in known:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    if hull[-1][0] != n:
        raise PrecisionExhausted("determinant not visible at this precision")

    def hull_at(x):
        for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
            if x1 <= x <= x2:
                return Fraction(y1) + Fraction(y2 - y1, x2 - x1) * (x - x1)
        return Fraction(hull[0][1])

    for x, y in pts:
        if y >= cap and hull_at(x) > cap:
            raise PrecisionExhausted("Newton polygon not determined at this precision")
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slopes += [Fraction(y2 - y1, x2 - x1)] * (x2 - x1)
    return slopes


def compute_slopes(M, max_rank=12):
    """Newton slopes of F from the characteristic polynomial of its linearisation."""
    if M.rank > max_rank:
        raise ValueError("slope computation is limited to small ranks; declare slopes instead")
    m = M.ctx.m
    need = m * M.rank * M.fv_exp // 2 + 2
    if M.precision + 1 < need and M.recipe is not None:
        M = M.rebuild(precision=need)
    R = M.ring
    A = M.matF
    for k in range(1, m):
        A = R.matmul(A, R.sigma(M.matF, k))
    cp = charpoly(R, A)
    vals = [R.valuation(c) for c in cp]
    return sorted(s / m for s in newton_slopes_from_vals(vals, R.prec))
