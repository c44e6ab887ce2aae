import pytest

from ucrystal.crystal import (fgv_coeffs, mod_cyclic, mod_dsum, mod_polarisation_cyclic, mod_simple,
                              mod_wedge2)
from ucrystal.errors import EvenP
from ucrystal.ffield import ff_make
from ucrystal.selftest import _layers_by_counts, acceptance_corpus
from ucrystal.solver.count import count_points
from ucrystal.solver.ore import kernel_dim_mod_p, skew_hom_dim_mod_p, system_dim_mod_p
from ucrystal.solver.prop36 import prop36_closed, prop36_direct, prop36_layers
from ucrystal.solver.skew import skew_system


def test_closed_form_values():
    assert prop36_layers(4) == [3, 5, 6, 6]
    assert prop36_layers(5) == [4, 7, 9, 10, 10]
    assert prop36_closed(1, 3) == 0


@pytest.mark.parametrize("g", range(2, 5))
def test_direct_solver_matches_closed_form(g):
    for n in range(1, g + 1):
        r = prop36_direct(g, n)
        assert r.skew_dim == prop36_closed(g, n)
        # F^g = V^g picks up p^min(i, 2g - i) on e_(i+1)
        assert r.vals == [min(i, 2 * g - i, n) for i in range(2 * g)]
        assert r.end_dim == sum(r.vals)


@pytest.mark.parametrize("g", range(2, 5))
def test_counts_match_closed_form(g, F3):
    M = mod_cyclic(g, fgv_coeffs(g), ctx=F3, precision=1)
    assert _layers_by_counts(M, g) == prop36_layers(g)


def test_direct_solver_needs_odd_p():
    with pytest.raises(EvenP):
        prop36_direct(2, 1, p=2)


def test_skew_routes_agree_mod_p():
    for key, M in acceptance_corpus(3):
        a = kernel_dim_mod_p(mod_wedge2(M))
        assert system_dim_mod_p(skew_system(M)) == a, key
        assert skew_hom_dim_mod_p(M.ctx, M.residue_F(), M.residue_V()) == a, key


@pytest.mark.parametrize("g", [2, 3])
def test_polarised_route(g):
    M = mod_cyclic(g, fgv_coeffs(g), ctx=ff_make(3, 2 * g), precision=1)
    pol = mod_polarisation_cyclic(M)
    assert system_dim_mod_p(skew_system(M, pol)) == kernel_dim_mod_p(mod_wedge2(M)) == g - 1


@pytest.mark.parametrize("g", [2, 3])
def test_skew_counts_match_wedge_counts(g, F3):
    M = mod_cyclic(g, fgv_coeffs(g), ctx=F3, precision=2)
    S = skew_system(M, n=2)
    W = mod_wedge2(M)
    for m in (1, 2, 5):
        assert count_points(S, 2, m).log_count == count_points(W, 2, m).log_count


def test_superspecial_surface(F3):
    M = mod_dsum(mod_simple(1, 1, ctx=F3), mod_simple(1, 1, ctx=F3))
    assert system_dim_mod_p(skew_system(M)) == 1
