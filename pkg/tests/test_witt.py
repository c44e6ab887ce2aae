import numpy as np
import pytest

from ucrystal.errors import CtxMismatch, NotDivisible
from ucrystal.ffield import ff_make
from ucrystal.witt import (WittVector, witt_add, witt_div_p, witt_frobenius, witt_mul, witt_neg,
                           witt_scalar_int, witt_truncate, witt_universal_polys,
                           witt_verschiebung)


def _as_int(x):
    """Value in Z/p^n of a Witt vector over F_p: sum p^i [x_i], [a] = a^(p^(n-1)) mod p^n."""
    p, n = x.ctx.p, x.n
    pn = p ** n
    return sum(p ** i * pow(c, p ** (n - 1), pn) for i, c in enumerate(x.comps)) % pn


def _rand(ctx, n, rng):
    return WittVector(ctx, [int(c) for c in rng.integers(0, ctx.q, n)])


def test_low_components():
    S, P, N = witt_universal_polys(3, 0)
    assert S == {(1, 0): 1, (0, 1): 1}
    assert P == {(1, 1): 1}
    S1 = witt_universal_polys(3, 1)[0]
    # X1 + Y1 - X0^2 Y0 - X0 Y0^2, variables (X0, X1, Y0, Y1)
    assert S1 == {(0, 1, 0, 0): 1, (0, 0, 0, 1): 1, (2, 0, 1, 0): 2, (1, 0, 2, 0): 2}


@pytest.mark.parametrize("p", [3, 5, 7])
def test_negation_is_componentwise(p):
    assert witt_universal_polys(p, 2)[2] == {(0, 0, 1, 0, 0, 0): p - 1}


CASES = [(3, 1, "poly"), (3, 3, "poly"), (3, 4, "poly"), (5, 2, "poly"), (7, 3, "poly"),
         (3, 1, "zq"), (3, 4, "zq"), (3, 6, "zq"), (5, 4, "zq"), (7, 3, "zq")]


@pytest.mark.parametrize("p,n,backend", CASES)
def test_prime_field_matches_integers(p, n, backend):
    k = ff_make(p, 1)
    rng = np.random.default_rng(p * 10 + n)
    pn = p ** n
    for _ in range(150):
        a, b = _rand(k, n, rng), _rand(k, n, rng)
        assert _as_int(witt_add(a, b, backend)) == (_as_int(a) + _as_int(b)) % pn
        assert _as_int(witt_mul(a, b, backend)) == (_as_int(a) * _as_int(b)) % pn
        assert _as_int(witt_neg(a)) == (-_as_int(a)) % pn


def test_teichmuller_is_multiplicative(F9):
    for a in range(F9.q):
        for b in range(F9.q):
            ta, tb = WittVector.teichmuller(F9, a, 3), WittVector.teichmuller(F9, b, 3)
            assert ta * tb == WittVector.teichmuller(F9, F9.mul(a, b), 3)


@pytest.mark.parametrize("p,m,n", [(3, 1, 5), (3, 2, 3), (5, 1, 4), (7, 1, 3), (5, 2, 2)])
def test_p_times_x_is_shifted_frobenius(p, m, n):
    k = ff_make(p, m)
    rng = np.random.default_rng(7)
    for _ in range(100):
        x = _rand(k, n, rng)
        px = witt_scalar_int(x, p)
        assert px == WittVector(k, [0] + [k.frob(c) for c in x.comps[:-1]])
        assert witt_frobenius(witt_verschiebung(x)) == px
        assert witt_verschiebung(witt_frobenius(x)) == px
        assert witt_div_p(px) == witt_truncate(x, n - 1)
        assert x + witt_neg(x) == WittVector.zero(k, n)


def test_frobenius_ring_map_and_v_rule(F9):
    rng = np.random.default_rng(8)
    for _ in range(100):
        a, b = _rand(F9, 3, rng), _rand(F9, 3, rng)
        assert witt_frobenius(a * b) == witt_frobenius(a) * witt_frobenius(b)
        assert witt_frobenius(a + b) == witt_frobenius(a) + witt_frobenius(b)
        Va, Vb = witt_verschiebung(a), witt_verschiebung(b)
        assert Va + Vb == witt_verschiebung(a + b)
        assert Va * Vb == witt_scalar_int(witt_verschiebung(a * b), 3)


def test_ring_axioms(F9):
    rng = np.random.default_rng(9)
    one = WittVector.one(F9, 3)
    for _ in range(200):
        a, b, c = (_rand(F9, 3, rng) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
        assert a * one == a


def test_div_p(F3):
    assert witt_div_p(WittVector(F3, [0, 1, 0])) == WittVector(F3, [1, 0])
    with pytest.raises(NotDivisible):
        witt_div_p(WittVector(F3, [1, 0, 0]))


def test_units(F9):
    assert WittVector(F9, [2, 0]).is_unit()
    assert not WittVector(F9, [0, 5]).is_unit()


def test_serialisation_round_trip(F9):
    x = WittVector(F9, [4, 0, 7])
    assert x.to_list() == [[1, 1], [0, 0], [1, 2]]
    assert WittVector.from_list(F9, x.to_list()) == x


def test_mismatch():
    with pytest.raises(CtxMismatch):
        WittVector.one(ff_make(3, 1), 2) + WittVector.one(ff_make(3, 1), 3)
