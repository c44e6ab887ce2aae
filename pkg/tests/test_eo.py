from itertools import product

import numpy as np
import pytest

from ucrystal.crystal import mod_simple
from ucrystal.eo import (CircularWord, EOType, bt1_from_module, bt1_hom_dim, bt1_skew_hom_dim,
                         eo_d1_bound_check, eo_dim_formula, eo_enumerate, eo_graph, eo_graph_dim,
                         eo_graph_properties, eo_matrix_system_dim, eo_module, eo_UV, kraft_dual,
                         kraft_module, parse_words)
from ucrystal.errors import ParseError
from ucrystal.tables import EO3


def T(g, P):
    return EOType(g, tuple(P))


def test_enumeration_sizes():
    assert [len(eo_enumerate(g)) for g in (1, 3, 5)] == [2, 8, 32]
    phis = {tuple(t.phi()[1:]) for t in eo_enumerate(3)}
    assert len(phis) == 8
    assert {r.phi for r in EO3} <= phis


def test_phi_and_invariants():
    t = T(3, {2, 3})
    assert t.phi() == [0, 0, 1, 2] and t.a == 1 and t.p_rank() == 0
    assert T(3, {1, 2}).p_rank() == 2
    m, n = t.mn()
    assert all(a + b == 7 for a, b in zip(m, n))


def test_parse_forms_agree():
    assert EOType.parse("P={2,3}", g=3) == EOType.parse("0,1,2") == T(3, {2, 3})
    assert EOType.parse("P={}", g=2) == T(2, ())
    with pytest.raises(ParseError, match="increment 2 invalid"):
        EOType.parse("0,2", g=2)
    with pytest.raises(ParseError):
        EOType.parse("0,1", g=3)
    with pytest.raises(ParseError):
        EOType.parse("P={1}")


@pytest.mark.parametrize("g", range(1, 8))
def test_superspecial_formula(g):
    assert eo_dim_formula(T(g, ())) == g * (g - 1) // 2


def test_formula_examples():
    assert eo_dim_formula(T(3, {2, 3})) == 2
    assert eo_dim_formula(T(3, {1, 2})) == 0
    assert eo_dim_formula(T(4, {2, 3, 4})) == 3


def test_graph_examples():
    free, cycles, dim = eo_graph_dim(T(3, {2, 3}))
    assert free == 2 and dim == 2
    free, cycles, dim = eo_graph_dim(T(1, {1}))
    assert (free, dim) == (0, 0) and len(cycles) == 1


def test_graph_structure():
    for t in eo_enumerate(4):
        G = eo_graph(t)
        assert len(set(G.succ.values())) == len(G.succ)
        assert sum(map(len, G.chains)) + sum(map(len, G.cycles)) == 16
        assert eo_graph_properties(t) == []


@pytest.mark.parametrize("g", range(1, 7))
def test_graph_dim_equals_formula(g):
    for t in eo_enumerate(g):
        assert eo_graph_dim(t)[2] == eo_dim_formula(t)


def test_module_examples():
    M = eo_module(T(3, {2}))
    assert M.check()
    K = M.kernel_F()
    assert K.shape[0] == 3 and not K[:, :3].any()
    U, V = eo_UV(T(3, {1, 2, 3}))
    assert (U == np.eye(3)).all() and not V.any()
    U, V = eo_UV(T(3, ()))
    assert not U.any()
    assert V.tolist() == [[0, 0, 1], [0, 1, 0], [1, 0, 0]]


@pytest.mark.parametrize("g", range(1, 5))
def test_every_eo_module_is_bt1(g):
    for t in eo_enumerate(g):
        M = eo_module(t)
        assert M.check()
        assert M.a_number() == t.a
        assert M.p_rank() == t.p_rank()


@pytest.mark.parametrize("g,P,want", [(2, (), 1), (3, (3,), 3), (4, (2, 3, 4), 3), (3, (2, 3), 2),
                                      (3, (1, 2, 3), 0)])
def test_matrix_system_two_routes(g, P, want):
    assert eo_matrix_system_dim(T(g, P)) == (want, want)


def test_kraft_fv_is_supersingular_elliptic(F3):
    K = kraft_module("FV")
    M = bt1_from_module(mod_simple(1, 1, ctx=F3))
    assert (K.matF == M.matF).all() and (K.matV == M.matV).all()


def test_kraft_arrows():
    K = kraft_module("FVF2V2")
    assert K.dim == 6 and K.check()
    F, V = K.matF, K.matV
    assert F[1, 0] == 1 and V[1, 2] == 1 and F[3, 2] == 1
    E = kraft_module("F")
    assert E.matF.tolist() == [[1]] and E.matV.tolist() == [[0]]


def test_kraft_dual():
    D = kraft_dual(kraft_module("FVF2V2"))
    # e1* <-V- e2* -F-> e3*
    assert D.matV[0, 1] == 1 and D.matF[2, 1] == 1
    assert D.check()
    K = kraft_module("FVF2V2")
    DD = kraft_dual(D)
    assert (DD.matF == K.matF).all() and (DD.matV == K.matV).all()
    d = kraft_dual(kraft_module("F"))
    assert d.matF.tolist() == [[0]] and d.matV.tolist() == [[1]]


def test_all_short_words_are_bt1():
    seen = set()
    for L in range(1, 9):
        for letters in product("FV", repeat=L):
            w = CircularWord(letters)
            if w in seen or not w.is_indecomposable():
                continue
            seen.add(w)
            assert kraft_module([list(w.word)]).check()
    assert len(seen) == 2 + 1 + 2 + 3 + 6 + 9 + 18 + 30


def test_words():
    assert CircularWord("VF") == CircularWord("FV")
    assert not CircularWord("FVFV").is_indecomposable()
    assert [len(w) for w in parse_words("[FV]^3")] == [2, 2, 2]
    with pytest.raises(ParseError):
        parse_words("[FX]")


@pytest.mark.parametrize("words,want", [("[FVF2V2]", 3), ("[FV]^3", 3), ("[F2V][V2F]", 2),
                                        ("[VFV2F2]", 3), ("[FV][F2V2]", 3), ("[F]^3[V]^3", 0)])
def test_skew_hom_dims(words, want):
    assert bt1_skew_hom_dim(kraft_module(words)) == want


def test_hom_between_words():
    assert bt1_hom_dim(kraft_module("FV"), kraft_module("F2V2")) == 2


def test_bound_checks():
    v = eo_d1_bound_check(T(3, {2, 3}), [1, 2])
    assert v and v.r == 2
    assert eo_d1_bound_check(T(3, {1, 2, 3}), [])
    assert eo_d1_bound_check(T(4, ()), [1, 1, 1, 1, 1, 1]).r == 6
    assert not eo_d1_bound_check(T(3, {2, 3}), [3])


def test_threefold_columns():
    for r in EO3:
        t = EOType.from_phi(r.phi)
        assert (t.a, t.p_rank()) == (r.a, r.p_rank)
