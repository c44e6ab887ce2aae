from fractions import Fraction as Fr

import pytest

from ucrystal.errors import NonIntegerResult, ParseError
from ucrystal.npoly import (NewtonPolygon, layers_of_partition, np_classify, np_dim_h2,
                            np_dim_tensor, np_dim_wedge, np_isogeny_partition_checks,
                            np_orbit_chain_dim, np_pdiv_dim, np_slopes_wedge, orbit_relevant_chains,
                            partition_of_layers, symmetric_polygons)


def nu(s):
    return NewtonPolygon.parse(s)


def test_parse_and_print():
    v = nu("1/2x3")
    assert v.pairs == ((1, 1, 3),) and v.g == 3
    assert nu("1/3, 2/3").pairs == ((1, 2, 1), (2, 1, 1))
    assert nu("2/4").pairs == ((1, 1, 1),)
    assert str(nu("2/3,1/3")) == "1/3, 2/3"
    assert NewtonPolygon.parse("1/3", symmetric_complete=True) == nu("1/3,2/3")


@pytest.mark.parametrize("text,pos", [("0x1", 0), ("1/2,,1/2", 4), ("3/2", 0), ("1/2, a", 5),
                                      ("1/0", 0)])
def test_parse_errors(text, pos):
    with pytest.raises(ParseError) as e:
        nu(text)
    assert e.value.position == pos


@pytest.mark.parametrize("text,dim", [("1/2x3", 3), ("1/3,2/3", 2), ("2/5,3/5", 8), ("1/2x2", 1),
                                      ("0/1x3,1/1x3", 0), ("0/1,1/2x2,1/1", 1)])
def test_dim_wedge_examples(text, dim):
    assert np_dim_wedge(nu(text)) == dim


def test_h2_examples():
    assert np_dim_h2({Fr(1): 15}) == 3
    assert np_dim_h2(np_slopes_wedge(nu("0/1x3,1/1x3"))) == 0
    assert np_dim_h2(np_slopes_wedge(nu("1/3,2/3"))) == 2
    with pytest.raises(NonIntegerResult):
        np_dim_h2([Fr(1)] * 4)


@pytest.mark.parametrize("g", range(1, 9))
def test_h2_formula_agrees_on_every_symmetric_polygon(g):
    polys = symmetric_polygons(g)
    assert polys
    for v in polys:
        assert v.is_symmetric() and v.g == g
        assert np_dim_h2(np_slopes_wedge(v)) == np_dim_wedge(v)


@pytest.mark.parametrize("g", range(1, 9))
def test_wedge_bound_and_equality_case(g):
    for v in symmetric_polygons(g):
        d = np_dim_wedge(v)
        assert d <= g * (g - 1) // 2
        if d == g * (g - 1) // 2:
            assert g == 1 or v.pairs == ((1, 1, g),)


def test_symmetric_polygon_counts():
    # brute force over multisets of slopes with denominators up to 2g
    def brute(g):
        from itertools import combinations_with_replacement
        from math import gcd
        pairs = [(c, h - c) for h in range(1, 2 * g + 1) for c in range(h + 1) if gcd(c, h - c) == 1]
        seen = set()
        for k in range(1, 2 * g + 1):
            for combo in combinations_with_replacement(pairs, k):
                if sum(c + d for c, d in combo) == 2 * g:
                    v = NewtonPolygon(combo)
                    if v.is_symmetric():
                        seen.add(v)
        return seen
    for g in range(1, 5):
        assert set(symmetric_polygons(g)) == brute(g)


def test_additivity_over_decomposition():
    parts = [nu("1/3,2/3"), nu("1/2x2"), nu("1/4,3/4")]
    whole = NewtonPolygon([x for v in parts for x in v.pairs])
    total = sum(np_dim_wedge(v) for v in parts)
    total += sum(np_dim_tensor(parts[i], parts[j]) for i in range(3) for j in range(i + 1, 3))
    assert np_dim_wedge(whole) == total


@pytest.mark.parametrize("args,want", [((1, 2, 2, 1), 2), ((0, 1, 2, 3), 0), ((2, 3, 3, 2), 6),
                                       ((1, 1, 1, 1), 1), ((1, 0, 1, 1), 0)])
def test_orbit_examples(args, want):
    assert np_orbit_chain_dim(*args) == want


def test_orbit_chains_are_well_formed():
    chains = orbit_relevant_chains(2, 3, 3, 2)
    verts = [v for ch in chains for v in ch]
    assert len(verts) == len(set(verts))


def test_pdiv_dim():
    assert np_pdiv_dim([Fr(1, 3)] * 3) == 2
    assert np_pdiv_dim([0, 0]) == 2
    assert np_pdiv_dim([0, 0, Fr(1, 2), Fr(1, 2), 1, 1]) == 3
    with pytest.raises(NonIntegerResult):
        np_pdiv_dim([Fr(1, 3)])


def test_classify():
    c = np_classify(nu("0/1x3,1/1x3"))
    assert c.ordinary and c.U_zero and c.p_rank == 3
    c = np_classify(nu("0/1x2,1/2x2,1/1x2"))
    assert c.U_is_Ga and not c.U_zero
    c = np_classify(nu("1/2x2"))
    assert c.supersingular and c.dim == 1 and c.U_is_Ga
    c = np_classify(nu("0/1x2,1/2,1/1x2"))
    assert c.almost_ordinary and c.U_zero


def test_partition_checks():
    assert np_isogeny_partition_checks([1, 2], nu=nu("1/2x3"))
    assert np_isogeny_partition_checks([1, 1, 1, 1], nu=nu("1/5,4/5"))
    v = np_isogeny_partition_checks([3], g=3)
    assert not v and "exponent" in v.violations[0]
    assert not np_isogeny_partition_checks([1], a_number=3)


def test_layers_and_partitions_are_conjugate():
    for parts in ([1, 2], [1, 2, 2, 3], [1, 1, 1], [2, 2], [], [1, 3, 3, 4]):
        d = layers_of_partition(parts, max(parts, default=0) + 1)
        assert partition_of_layers(d) == sorted(parts)
    with pytest.raises(ValueError):
        partition_of_layers([1, 3])
