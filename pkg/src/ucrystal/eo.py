"""Ekedahl-Oort types, their graphs and mod p modules, and Kraft circular words."""
import re
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import EvenP, ParseError
from .ffield import ff_make, fq_nullspace, fq_rank


@dataclass(frozen=True)
class EOType:
    g: int
    P: tuple

    def __post_init__(self):
        P = tuple(sorted(set(int(x) for x in self.P)))
        if any(x < 1 or x > self.g for x in P):
            raise ValueError(f"P must be a subset of 1..{self.g}")
        object.__setattr__(self, "P", P)

    @classmethod
    def from_phi(cls, phi):
        """From (phi(1), ..., phi(g)); phi(0) = 0 is implicit."""
        phi = [int(x) for x in phi]
        prev = 0
        P = []
        for i, v in enumerate(phi, start=1):
            step = v - prev
            if step not in (0, 1):
                raise ParseError(f"increment {step} invalid at phi({i})", i - 1)
            if step:
                P.append(i)
            prev = v
        return cls(len(phi), tuple(P))

    @classmethod
    def parse(cls, text, g=None):
        """Accept "P={2,3}" (needs g) or a phi sequence "0,1,2"."""
        s = text.strip()
        mt = re.fullmatch(r"P\s*=\s*\{([\d,\s]*)\}", s)
        if mt:
            if g is None:
                raise ParseError("the P={...} form needs g", 0)
            body = mt.group(1).strip()
            P = [int(x) for x in body.split(",")] if body else []
            return cls(g, tuple(P))
        try:
            vals = [int(x) for x in s.split(",")]
        except ValueError:
            raise ParseError(f"not an EO type: {text!r}", 0) from None
        t = cls.from_phi(vals)
        if g is not None and t.g != g:
            raise ParseError(f"sequence has length {t.g}, expected g = {g}", 0)
        return t

    @property
    def h(self):
        return len(self.P)

    @property
    def a(self):
        return self.g - self.h

    def phi(self):
        out = [0]
        for i in range(1, self.g + 1):
            out.append(out[-1] + (1 if i in self.P else 0))
        return out

    def p_rank(self):
        ph = self.phi()
        return max(i for i in range(self.g + 1) if ph[i] == i)

    def psi(self):
        g = self.g
        ph = self.phi()
        return ph + [ph[2 * g - i] + i - g for i in range(g + 1, 2 * g + 1)]

    def mn(self):
        """(m_1..m_g increasing, n_1..n_g decreasing) from the jumps of psi."""
        ps = self.psi()
        up = [i for i in range(1, 2 * self.g + 1) if ps[i] == ps[i - 1] + 1]
        flat = [i for i in range(1, 2 * self.g + 1) if ps[i] == ps[i - 1]]
        m = up
        n = sorted(flat, reverse=True)
        assert len(m) == len(n) == self.g
        assert all(a + b == 2 * self.g + 1 for a, b in zip(m, n)), "m_i + n_i != 2g+1"
        assert m[:self.h] == list(self.P)
        return m, n

    def __str__(self):
        return ",".join(str(x) for x in self.phi()[1:])


def eo_enumerate(g):
    return [EOType(g, P) for k in range(g + 1) for P in combinations(range(1, g + 1), k)]


def eo_dim_formula(t):
    m, _ = t.mn()
    return t.a * (t.a - 1) // 2 + sum(m[i] - (i + 1) for i in range(t.h))


# the graph -------------------------------------------------------------

@dataclass
class EOGraph:
    t: EOType
    succ: dict
    pred: dict
    marked: set
    chains: list = field(default_factory=list)
    cycles: list = field(default_factory=list)


def eo_graph(t):
    g, h = t.g, t.h
    m, n = t.mn()
    succ, pred = {}, {}

    def edge(u, v):
        assert u not in succ and v not in pred, "vertex with two edges"
        succ[u] = v
        pred[v] = u

    for i in range(1, h + 1):
        for j in range(1, h + 1):
            edge((i, j), (m[i - 1], m[j - 1]))
    for i in range(h + 1, g + 1):
        for j in range(h + 1, g + 1):
            edge((i, j), (n[j - 1], n[i - 1]))
    P = set(t.P)
    Q = set(range(1, g + 1)) - P
    marked = {(i, j) for i in range(1, g + 1) for j in range(1, g + 1)
              if (j <= h < i) or (i in P and j in Q)}
    G = EOGraph(t, succ, pred, marked)
    seen = set()
    for v in sorted((i, j) for i in range(1, g + 1) for j in range(1, g + 1)):
        if v in seen or v in pred:
            continue
        ch = [v]
        while ch[-1] in succ:
            ch.append(succ[ch[-1]])
        seen.update(ch)
        G.chains.append(ch)
    for v in sorted((i, j) for i in range(1, g + 1) for j in range(1, g + 1)):
        if v in seen:
            continue
        cyc = [v]
        while succ[cyc[-1]] != v:
            cyc.append(succ[cyc[-1]])
        seen.update(cyc)
        G.cycles.append(cyc)
    return G


def eo_graph_dim(t):
    """(free chain count, cycle lengths, dim); free = no marked vertex on the chain."""
    G = eo_graph(t)
    free = sum(1 for ch in G.chains if not any(v in G.marked for v in ch))
    return free, sorted(len(c) for c in G.cycles), free + t.a * (t.a - 1) // 2


def eo_graph_properties(t):
    """Names of the structural graph properties that fail; empty when all hold."""
    G = eo_graph(t)
    g, h = t.g, t.h
    V = [(i, j) for i in range(1, g + 1) for j in range(1, g + 1)]
    sign = lambda v: (v[0] > v[1]) - (v[0] < v[1])
    bad = []
    if any(sign(u) != sign(w) for u, w in G.succ.items()):
        bad.append("edges-keep-side")
    # enforced while building; recheck in-degrees
    if len(set(G.succ.values())) != len(G.succ):
        bad.append("in-degree")
    nv = sum(len(c) for c in G.chains) + sum(len(c) for c in G.cycles)
    if nv != g * g or len({v for c in G.chains + G.cycles for v in c}) != g * g:
        bad.append("cover")
    for i in range(1, g + 1):
        d = (i, i)
        if d not in G.succ or d not in G.pred or G.succ[d][0] != G.succ[d][1]:
            bad.append("diagonal-fixed")
            break
    if any(v[0] == v[1] for ch in G.chains for v in ch):
        bad.append("chains-off-diagonal")
    for v in V:
        i, j = v
        if (v not in G.succ) != ((i <= h < j) or (j <= h < i)):
            bad.append("edge-domain")
            break
    above = [c for c in G.chains if c[0][0] < c[0][1]]
    below = [c for c in G.chains if c[0][0] > c[0][1]]
    if len(above) != h * (g - h) or len(below) != h * (g - h):
        bad.append("chain-counts")
    if any(v in G.marked for c in G.cycles for v in c):
        bad.append("cycles-unmarked")
    if any(c[-1] not in G.marked for c in below):
        bad.append("below-chains-end-marked")
    starts = {c[0] for c in G.chains}
    if any(v[0] < v[1] and v not in starts for v in G.marked):
        bad.append("above-marks-start-chains")
    return bad


# BT1 modules -----------------------------------------------------------

@dataclass(eq=False)
class BT1Module:
    """Mod p Dieudonne module: F(x) = matF sigma(x), V(x) = matV sigma^-1(x), codes over ctx."""
    ctx: object
    matF: np.ndarray
    matV: np.ndarray
    label: str = ""
    pairing: np.ndarray = None

    @property
    def dim(self):
        return self.matF.shape[0]

    def check(self):
        """Ker F = Im V and Ker V = Im F."""
        ctx = self.ctx
        if self.dim == 0:
            return True
        F, V = self.matF % ctx.q, self.matV % ctx.q
        FV = _matmul(ctx, F, ctx.vfrob(V))
        VF = _matmul(ctx, V, ctx.vfrob(F, -1))
        if FV.any() or VF.any():
            return False
        rF, rV = fq_rank(ctx, F), fq_rank(ctx, V)
        # with FV = VF = 0, Im V in Ker F; equality is a dimension count
        return rV == self.dim - rF and rF == self.dim - rV

    def kernel_F(self):
        K = fq_nullspace(self.ctx, self.matF)
        return self.ctx.frob_table(-1)[K] if K.size else K

    def a_number(self):
        both = np.concatenate([self.matF, self.matV], axis=1)
        return self.dim - fq_rank(self.ctx, both)

    def p_rank(self):
        """Stable rank of F."""
        ctx = self.ctx
        A = self.matF
        for k in range(1, self.dim + 1):
            A = _matmul(ctx, self.matF, ctx.vfrob(A)) if k > 1 else A
        return fq_rank(ctx, A) if self.dim else 0


def _matmul(ctx, A, B):
    from .solver.ore import fq_matmul
    return fq_matmul(ctx, A, B)


def eo_UV(t):
    g, h = t.g, t.h
    m, n = t.mn()
    U = np.zeros((g, g), dtype=np.int64)
    Vm = np.zeros((g, g), dtype=np.int64)
    for i in range(1, h + 1):
        U[i - 1, m[i - 1] - 1] = 1
    for j in range(h + 1, g + 1):
        Vm[j - 1, n[j - 1] - 1] = 1
    return U, Vm


def eo_module(t, p=3):
    """M_phi over F_p in the basis X_1..X_g, Y_1..Y_g."""
    ctx = ff_make(p, 1)
    g = t.g
    U, Vm = eo_UV(t)
    F = np.zeros((2 * g, 2 * g), dtype=np.int64)
    F[:g, :g] = U
    F[g:, :g] = Vm
    J = np.zeros((2 * g, 2 * g), dtype=np.int64)
    J[:g, g:] = np.eye(g, dtype=np.int64)
    J[g:, :g] = -np.eye(g, dtype=np.int64)
    # <Fx, y> = <x, Vy>  <=>  F^t J = J V  <=>  V = J^-1 F^t J, and J^-1 = -J
    V = (-J @ F.T @ J) % p
    return BT1Module(ctx, F % p, V, f"M_phi({t})", J % p)


def _eo_ac_system(t, ctx):
    """Twisted system of V A = C^(p) U + A^t(p) V, U A = A^(p) U, C skew; unknowns (A, C)."""
    g = t.g
    U, Vm = eo_UV(t)
    nA = g * g
    pairs = [(a, b) for a in range(g) for b in range(a + 1, g)]
    ncol = nA + len(pairs)
    rows = 2 * g * g
    S = np.zeros((rows, ncol, 2), dtype=np.int64)
    neg = lambda x: (-x) % ctx.p

    def col_A(k, l):
        return k * g + l

    # block 1: (V A - C^(p) U - A^t(p) V)_{ij}
    for i in range(g):
        for j in range(g):
            r = i * g + j
            for k in range(g):
                if Vm[i, k]:
                    S[r, col_A(k, j), 0] += Vm[i, k]
                if Vm[k, j]:
                    # (A^t)_{ik} = A_{ki}
                    S[r, col_A(k, i), 1] += neg(Vm[k, j])
            for c, (a, b) in enumerate(pairs):
                # C = sum x_c (E_ab - E_ba); (C U)_{ij} = C_{i k} U_{k j}
                for k in range(g):
                    if U[k, j]:
                        val = (1 if (i, k) == (a, b) else 0) - (1 if (i, k) == (b, a) else 0)
                        if val:
                            S[r, nA + c, 1] += neg(val * U[k, j])
    # block 2: (U A - A^(p) U)_{ij}
    for i in range(g):
        for j in range(g):
            r = g * g + i * g + j
            for k in range(g):
                if U[i, k]:
                    S[r, col_A(k, j), 0] += U[i, k]
                if U[k, j]:
                    S[r, col_A(i, k), 1] += neg(U[k, j])
    return S % ctx.p


def eo_matrix_system_dim(t, p=3):
    """dim of the (A, C) solution group, by chain analysis and by the twisted-rank engine."""
    from .solver.ore import kernel_dim
    ctx = ff_make(p, 1)
    by_chain = eo_graph_dim(t)[2]
    by_rank = kernel_dim(ctx, _eo_ac_system(t, ctx))
    return by_chain, by_rank


# Kraft words -----------------------------------------------------------

def _expand(word):
    """'FVF2V2' or 'FVFFVV' -> list of letters."""
    out = []
    s = word.replace("²", "2").replace("³", "3").replace("^", "").replace(" ", "")
    for mt in re.finditer(r"([FV])(\d*)", s):
        out += [mt.group(1)] * (int(mt.group(2)) if mt.group(2) else 1)
    if "".join(re.findall(r"[FV]\d*", s)) != s or not out:
        raise ParseError(f"not a word in F and V: {word!r}", 0)
    return out


class CircularWord:
    def __init__(self, letters):
        if isinstance(letters, str):
            letters = _expand(letters)
        letters = list(letters)
        if not letters or any(x not in "FV" for x in letters):
            raise ValueError("a circular word is a nonempty sequence of F and V")
        rots = ["".join(letters[i:] + letters[:i]) for i in range(len(letters))]
        self.word = min(rots)

    def __len__(self):
        return len(self.word)

    def __eq__(self, other):
        return isinstance(other, CircularWord) and self.word == other.word

    def __hash__(self):
        return hash(self.word)

    def __repr__(self):
        return f"[{self.word}]"

    def is_indecomposable(self):
        L = len(self.word)
        return not any(L % d == 0 and self.word == self.word[:L // d] * d for d in range(2, L + 1))


def parse_words(text):
    """'[FV][F2V2]' -> list of CircularWord, keeping the order given (letters as written)."""
    parts = re.findall(r"\[([^\]]*)\](?:\^?(\d+))?", text.replace("³", "^3").replace("²", "^2"))
    if not parts:
        return [_word_from(text)]
    out = []
    for body, k in parts:
        out += [_word_from(body)] * (int(k) if k else 1)
    return out


def _word_from(body):
    return _expand(body)


def kraft_module(words, p=3):
    """Direct sum of the modules of the given words (letter lists or strings).

    Letter i joins e_i and e_(i+1) (cyclically): F e_i = e_(i+1) for F, V e_(i+1) = e_i for V.
    """
    if isinstance(words, str):
        words = parse_words(words)
    if words and isinstance(words[0], str) and len(words[0]) == 1:
        words = [words]
    ctx = ff_make(p, 1)
    N = sum(len(w) for w in words)
    F = np.zeros((N, N), dtype=np.int64)
    V = np.zeros((N, N), dtype=np.int64)
    o = 0
    for w in words:
        L = len(w)
        for i, x in enumerate(w):
            a, b = o + i, o + (i + 1) % L
            if x == "F":
                F[b, a] = 1
            else:
                V[a, b] = 1
        o += L
    label = "".join("[" + "".join(w) + "]" for w in words)
    return BT1Module(ctx, F, V, label)


def kraft_dual(M):
    from .solver.ore import dual_mats
    F, V = dual_mats(M.ctx, M.matF, M.matV)
    return BT1Module(M.ctx, F, V, f"dual({M.label})")


def bt1_skew_hom_dim(M):
    from .solver.ore import skew_hom_dim_mod_p
    if M.ctx.p == 2:
        raise EvenP("p must be odd")
    return skew_hom_dim_mod_p(M.ctx, M.matF, M.matV)


def bt1_hom_dim(S, T):
    from .solver.ore import hom_dim_mod_p
    return hom_dim_mod_p(S.ctx, S.matF, S.matV, T.matF, T.matV)


def bt1_from_module(M):
    """Reduction mod p of a Dieudonne module."""
    return BT1Module(M.ctx, M.residue_F(), M.residue_V(), f"{M.label} mod p")


# bounds from the EO dimension of U[p] -------------------------------------

@dataclass
class BoundVerdict:
    ok: bool
    r: int
    dim: int
    pexp: int
    violations: list

    def __bool__(self):
        return self.ok


def eo_d1_bound_check(t, parts):
    """dim <= r(r+1)/2 and p-exponent <= r, with r the EO dimension of U[p]."""
    r = eo_dim_formula(t)
    dim = sum(parts)
    pexp = max(parts) if parts else 0
    bad = []
    if dim > r * (r + 1) // 2:
        bad.append(f"dim {dim} > r(r+1)/2 = {r * (r + 1) // 2}")
    if pexp > r:
        bad.append(f"p-exponent {pexp} > r = {r}")
    return BoundVerdict(not bad, r, dim, pexp, bad)
