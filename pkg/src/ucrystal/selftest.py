"""Property suites run by ``ucrystal selftest`` and by the acceptance tests.

Each suite returns a SuiteResult; a suite passes when it ran at least one case
and recorded no failures. Setting UCRYSTAL_INJECT_FAULT=<suite name> makes that
suite record a synthetic failure, so the harness itself can be tested.
"""
import os
import time
from dataclasses import dataclass, field

import numpy as np

from .crystal import (SemilinearSystem, build, fgv_coeffs, mod_cyclic, mod_dsum, mod_from_newton,
                      mod_polarisation_cyclic, mod_simple, mod_sublattice_isogeny, mod_wedge2)
from .eo import eo_dim_formula, eo_enumerate, eo_graph_dim, eo_graph_properties
from .errors import PrecisionExhausted
from .ffield import ff_make
from .npoly import NewtonPolygon, np_isogeny_partition_checks
from .solver.count import brute_force_count, count_points, count_system, dim_from_counts
from .solver.isogeny import SolverConfig, isogeny_type
from .solver.ore import (TwistedPoly, embed_array, kernel_dim_mod_p, ore_divmod, ore_rank,
                         random_twisted, skew_hom_dim_mod_p, system_dim_mod_p)
from .solver.skew import skew_system
from .tables import APPENDIX, NP_STRINGS, THREEFOLDS
from .witt import WittVector, ghost_component, witt_add, witt_mul, zq_ring


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self):
        return self.cases > 0 and not self.failures

    def fail(self, msg):
        if len(self.failures) < 20:
            self.failures.append(msg)
        else:
            self.failures[-1] = f"... and more ({msg})"

    def to_doc(self):
        return {"suite": self.name, "status": "PASS" if self.ok else "FAIL", "cases": self.cases,
                "failures": self.failures, "seconds": round(self.seconds, 3)}


def _suite(fn):
    name = fn.__name__.replace("suite_", "")

    def run(seed=0, **kw):
        res = SuiteResult(name)
        t0 = time.perf_counter()
        fn(res, np.random.default_rng(seed), **kw)
        if os.environ.get("UCRYSTAL_INJECT_FAULT") == name:
            res.fail("injected fault")
        res.seconds = time.perf_counter() - t0
        return res

    run.__name__ = fn.__name__
    run.suite_name = name
    run.__doc__ = fn.__doc__
    return run


WITT_CONFIGS = ((3, 1, 3), (3, 2, 2), (5, 1, 2), (7, 1, 2))


def _rand_witt(ctx, n, rng):
    return WittVector(ctx, [int(x) for x in rng.integers(0, ctx.q, n)])


@_suite
def suite_witt_ghost(res, rng, cases=1000, configs=WITT_CONFIGS):
    """Ghost components are ring maps; polynomial and Zq backends agree; distributivity."""
    for p, m, n in configs:
        ctx = ff_make(p, m)
        for _ in range(cases):
            a, b, c = (_rand_witt(ctx, n, rng) for _ in range(3))
            s = witt_add(a, b, "poly")
            t = witt_mul(a, b, "poly")
            res.cases += 1
            if s != witt_add(a, b, "zq") or t != witt_mul(a, b, "zq"):
                res.fail(f"backends disagree at p={p} m={m} n={n}: {a}, {b}")
                continue
            for k in range(n):
                ga, R = ghost_component(a, k)
                gb, _ = ghost_component(b, k)
                if ((ghost_component(s, k)[0] - ga - gb) % R.pn).any():
                    res.fail(f"ghost w_{k} not additive at {a}, {b}")
                if ((ghost_component(t, k)[0] - R.mul(ga, gb)) % R.pn).any():
                    res.fail(f"ghost w_{k} not multiplicative at {a}, {b}")
            lhs = witt_mul(a, witt_add(b, c, "zq"), "zq")
            rhs = witt_add(witt_mul(a, b, "zq"), witt_mul(a, c, "zq"), "zq")
            if lhs != rhs or witt_mul(a, b, "zq") != witt_mul(b, a, "zq"):
                res.fail(f"ring axiom failed at {a}, {b}, {c}")


def _rand_twisted_poly(ctx, rng, deg):
    return TwistedPoly(ctx, rng.integers(0, ctx.q, deg + 1))


@_suite
def suite_ore_divmod(res, rng, cases=300):
    """a = q b + r with deg r < deg b, over F_3, F_9 and F_25."""
    for p, m in ((3, 1), (3, 2), (5, 2)):
        ctx = ff_make(p, m)
        for _ in range(cases // 3):
            a = _rand_twisted_poly(ctx, rng, int(rng.integers(0, 7)))
            b = _rand_twisted_poly(ctx, rng, int(rng.integers(0, 4)))
            if b.is_zero():
                continue
            q, r = ore_divmod(a, b)
            res.cases += 1
            if q * b + r != a or r.deg >= b.deg:
                res.fail(f"round trip failed for {a} / {b}")


@_suite
def suite_ore_extension(res, rng, cases=60):
    """ore_rank is unchanged when coefficients move to the quadratic extension."""
    for p, m in ((3, 1), (3, 2)):
        ctx = ff_make(p, m)
        big = ff_make(p, 2 * m)
        for _ in range(cases // 2):
            rows, cols = (int(x) for x in rng.integers(1, 5, 2))
            A = random_twisted(ctx, rows, cols, int(rng.integers(0, 3)), rng)
            r1 = ore_rank(ctx, A)
            r2 = ore_rank(big, embed_array(A, ctx, big))
            res.cases += 1
            if r1 != r2:
                res.fail(f"rank {r1} over F_{ctx.q} but {r2} over F_{big.q}")


def _random_system(ctx, n, N, N1, rng):
    R = zq_ring(ctx, n)
    Phi = R.reduce(rng.integers(0, R.pn, size=(N, N1, R.m)))
    B = R.reduce(rng.integers(0, R.pn, size=(N, N1, R.m)))
    # sparsify so that kernels are not always trivial
    Phi[rng.random((N, N1)) < 0.4] = 0
    B[rng.random((N, N1)) < 0.4] = 0
    return SemilinearSystem(ctx, n, Phi, B, "random")


@_suite
def suite_layering(res, rng, cases=40):
    """Layered search, Smith form and direct Witt enumeration give the same count."""
    shapes = ((3, 1, 2, 2, 2), (3, 1, 3, 2, 2), (3, 1, 2, 3, 2), (3, 2, 2, 1, 2), (5, 1, 2, 2, 2))
    for k in range(cases):
        p, m, n, N1, N = shapes[k % len(shapes)]
        ctx = ff_make(p, m)
        sysn = _random_system(ctx, n, N, N1, rng)
        brute = brute_force_count(sysn)
        lat = count_system(sysn, "lattice").count
        dfs = count_system(sysn, "dfs").count
        res.cases += 1
        if not brute == lat == dfs:
            res.fail(f"counts differ (brute {brute}, lattice {lat}, dfs {dfs}) at shape {(p, m, n, N1, N)}")
        if m == 1:
            circ = count_points(sysn, n, 2, engine="circulant").count
            lat2 = count_points(sysn, n, 2, engine="lattice").count
            if circ != lat2:
                res.fail(f"circulant {circ} != lattice {lat2} over F_{p}^2")


def acceptance_corpus(p=3):
    """Modules used by the cross-characterisation checks, with labels."""
    ctx = ff_make(p, 1)
    out = []
    for r in APPENDIX:
        out.append((r.key, mod_from_newton(NewtonPolygon.parse(r.newton), ctx=ctx, precision=1)))
    for r in THREEFOLDS:
        out.append((r.key, build(dict(r.recipe), ctx=ctx, precision=1)))
    for g in range(2, 7):
        out.append((f"fgv{g}", mod_cyclic(g, fgv_coeffs(g), ctx=ctx, precision=1)))
    return out


@_suite
def suite_skew_agreement(res, rng, p=3):
    """dim of skew Homs to the dual equals dim U[p] computed from the exterior square."""
    for key, M in acceptance_corpus(p):
        a = kernel_dim_mod_p(mod_wedge2(M))
        b = system_dim_mod_p(skew_system(M))
        c = skew_hom_dim_mod_p(M.ctx, M.residue_F(), M.residue_V())
        res.cases += 1
        if not a == b == c:
            res.fail(f"{key}: wedge {a}, skew system {b}, mod p homs {c}")
    for g in (2, 3):
        M = mod_cyclic(g, fgv_coeffs(g), ctx=ff_make(p, 2 * g), precision=1)
        a = kernel_dim_mod_p(mod_wedge2(M))
        b = system_dim_mod_p(skew_system(M, mod_polarisation_cyclic(M)))
        res.cases += 1
        if a != b:
            res.fail(f"polarised fgv{g}: wedge {a}, via pairing {b}")


def _layers_by_counts(M, jmax, degrees=(1, 2, 5, 7)):
    """d_1 by twisted rank, later layers from counts alone (no closed-form input)."""
    out = [kernel_dim_mod_p(mod_wedge2(M.rebuild(precision=1)))]
    for j in range(2, jmax + 1):
        L = mod_wedge2(M.rebuild(precision=j))
        cs = [count_points(L, j, m) for m in degrees]
        out.append(dim_from_counts(cs).d)
    return out


@_suite
def suite_isogeny_invariance(res, rng, cases=50, p=3):
    """dim U is unchanged on random F,V-stable sublattices."""
    ctx = ff_make(p, 1)
    bases = [
        ("M11^2", mod_dsum(mod_simple(1, 1, ctx=ctx, precision=6), mod_simple(1, 1, ctx=ctx, precision=6)), 1),
        ("fgv2", mod_cyclic(2, fgv_coeffs(2), ctx=ctx, precision=6), 1),
        ("alm-ord2", mod_dsum(mod_simple(0, 1, ctx=ctx, precision=6), mod_simple(1, 1, ctx=ctx, precision=6),
                              mod_simple(1, 0, ctx=ctx, precision=6)), 0),
        ("M12+M21", mod_dsum(mod_simple(1, 2, ctx=ctx, precision=6), mod_simple(2, 1, ctx=ctx, precision=6)), 2),
    ]
    k = 0
    tries = 0
    while k < cases and tries < 4 * cases:
        tries += 1
        label, M, D = bases[tries % len(bases)]
        seed = int(rng.integers(0, 2 ** 31))
        try:
            S = mod_sublattice_isogeny(M, {"random": seed, "k": 1 + tries % 2})
        except PrecisionExhausted:
            continue
        if S.precision < 3:
            continue
        k += 1
        res.cases += 1
        g = M.rank // 2
        d = _layers_by_counts(S, g + 1)
        if d[-1] != D or (len(d) > 1 and d[-2] != d[-1]):
            res.fail(f"{label} sublattice seed {seed}: layers {d}, expected to settle at {D}")


def computed_types(deep=False, p=3):
    """(label, parts, g, a-number) for every type the harness computes."""
    ctx = ff_make(p, 1)
    out = []
    for r in APPENDIX:
        if r.g > 4 and not deep:
            continue
        nu = NewtonPolygon.parse(r.newton)
        M = mod_from_newton(nu, ctx=ctx, precision=1)
        it = isogeny_type(M, SolverConfig(), nu=nu)
        out.append((r.key, it.parts, r.g, M.a_number(), nu))
    for r in THREEFOLDS:
        M = build(dict(r.recipe), ctx=ctx, precision=4)
        nu = NewtonPolygon.parse(NP_STRINGS[r.np_class])
        it = isogeny_type(M, SolverConfig(), nu=nu)
        out.append((r.key, it.parts, 3, M.a_number(), nu))
    return out


@_suite
def suite_type_bounds(res, rng, deep=False):
    """n_r <= g-1 and r >= a(a-1)/2 on every computed isogeny type."""
    for label, parts, g, a, nu in computed_types(deep):
        v = np_isogeny_partition_checks(parts, nu=nu, g=g, a_number=a)
        res.cases += 1
        if not v:
            res.fail(f"{label}: {v.violations}")


@_suite
def suite_eo_exhaustive(res, rng, gmax=8):
    """Graph dimension equals the closed formula and the graph properties hold."""
    for g in range(1, gmax + 1):
        for t in eo_enumerate(g):
            res.cases += 1
            if eo_graph_dim(t)[2] != eo_dim_formula(t):
                res.fail(f"{t}: graph dim {eo_graph_dim(t)[2]} != formula {eo_dim_formula(t)}")
            bad = eo_graph_properties(t)
            if bad:
                res.fail(f"{t}: properties {bad} fail")


SUITES = (suite_witt_ghost, suite_ore_divmod, suite_ore_extension, suite_layering,
          suite_skew_agreement, suite_isogeny_invariance, suite_type_bounds, suite_eo_exhaustive)


def run_all(seed=0, quick=False):
    out = []
    for s in SUITES:
        kw = {}
        if quick and s.suite_name == "witt_ghost":
            kw["cases"] = 100
        out.append(s(seed=seed, **kw))
    return out
