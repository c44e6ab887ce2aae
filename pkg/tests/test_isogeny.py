import pytest

from ucrystal.crystal import fgv_coeffs, mod_cyclic, mod_dsum, mod_from_newton, mod_simple
from ucrystal.errors import BudgetExceeded, Inconclusive
from ucrystal.npoly import NewtonPolygon, np_dim_wedge
from ucrystal.solver.isogeny import SolverConfig, closed_form_bounds, count_degrees, isogeny_type
from ucrystal.tables import APPENDIX


def test_degree_ladder():
    assert count_degrees(3) == [1, 2, 5, 7, 11, 13]
    assert count_degrees(5, 3) == [1, 2, 3, 7]


def test_closed_form_bounds():
    # g = 4, D = 6: after d_1 = 3 the rest needs two more layers at least
    assert closed_form_bounds([3], 3, 6, 2, 4) == (5, 6)
    assert closed_form_bounds([3, 5], 3, 6, 3, 4) == (6, 6)
    assert closed_form_bounds([4], 4, 10, 2, 5) == (6, 8)


def test_small_types(F3):
    M = mod_cyclic(3, fgv_coeffs(3), ctx=F3, precision=1)
    it = isogeny_type(M)
    assert it.parts == [1, 2] and it.layers == [2, 3] and it.total == 3
    assert it.r == 2 and it.pexp == 2
    E = mod_simple(1, 1, ctx=F3, precision=1)
    assert isogeny_type(mod_dsum(E, E, E)).parts == [1, 1, 1]
    ordn = mod_dsum(*(mod_simple(0, 1, ctx=F3, precision=1) for _ in range(3)),
                    *(mod_simple(1, 0, ctx=F3, precision=1) for _ in range(3)))
    it = isogeny_type(ordn)
    assert it.parts == [] and it.total == 0


@pytest.mark.parametrize("row", [r for r in APPENDIX if r.g <= 4], ids=lambda r: r.key)
def test_low_genus_layers_are_certified(row, F3):
    nu = NewtonPolygon.parse(row.newton)
    it = isogeny_type(mod_from_newton(nu, ctx=F3, precision=1), SolverConfig(strict=True), nu=nu)
    assert it.parts == list(row.parts)
    assert it.total == np_dim_wedge(nu) == row.dim
    assert all(c.get("status", "certified") == "certified" for c in it.certificates)


def test_strict_mode_refuses_corroborated_layers(F3):
    nu = NewtonPolygon.parse("2/5,3/5")
    M = mod_from_newton(nu, ctx=F3, precision=1)
    it = isogeny_type(M, nu=nu)
    assert it.parts == [1, 2, 2, 3]
    assert "corroborated" in [c.get("status") for c in it.certificates]
    with pytest.raises(Inconclusive) as e:
        isogeny_type(M, SolverConfig(strict=True), nu=nu)
    assert e.value.partial["layers"]


def test_without_closed_form_bounds(F3):
    M = mod_cyclic(3, fgv_coeffs(3), ctx=F3, precision=1)
    it = isogeny_type(M, SolverConfig(use_closed_form=False))
    assert it.parts == [1, 2]
    assert it.certificates[1]["status"] == "corroborated"


def test_time_budget(F3):
    M = mod_cyclic(4, fgv_coeffs(4), ctx=F3, precision=1)
    with pytest.raises(BudgetExceeded):
        isogeny_type(M, SolverConfig(budget_seconds=0.0))


def test_certificate_records(F3):
    it = isogeny_type(mod_cyclic(4, fgv_coeffs(4), ctx=F3, precision=1))
    assert [c["layer"] for c in it.certificates] == [1, 2, 3]
    for c in it.certificates[1:]:
        lo, hi = c["bounds"]
        assert lo <= c["d"] <= hi
        assert c["log_counts"][1] >= c["d"]
    doc = it.to_doc()
    assert doc["partition"] == [1, 2, 3] and doc["d_layers"] == [3, 5, 6]
