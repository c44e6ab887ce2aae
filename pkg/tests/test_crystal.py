from fractions import Fraction as Fr

import numpy as np
import pytest

from ucrystal.crystal import (build, check_polarisation, compute_slopes, fgv_coeffs, hermite_basis,
                              mod_cyclic, mod_dsum, mod_dual, mod_from_newton, mod_nygaard,
                              mod_polarisation_cyclic, mod_simple, mod_sublattice_isogeny,
                              mod_tensor, mod_wedge2, module_from_doc, newton_coeffs, wedge_pairs)
from ucrystal.errors import (AsymmetricPolygon, FieldTooSmall, HasEtaleSlope, NonDivisibleMiddle,
                             NonUnitLeading, NotCoprime, NotStable)
from ucrystal.ffield import ff_make, fq_rank
from ucrystal.npoly import NewtonPolygon
from ucrystal.solver.ore import kernel_dim_mod_p
from ucrystal.tables import APPENDIX


def _ints(R, A):
    """Integer matrix of a module over W(F_p)."""
    return (np.asarray(A)[..., 0] % R.pn).astype(int)


def test_simple_11(F3):
    M = mod_simple(1, 1, ctx=F3)
    R = M.ring
    assert _ints(R, M.matF).tolist() == [[0, 3], [1, 0]]
    assert _ints(R, M.matV).tolist() == [[0, 3], [1, 0]]
    assert M.check()


def test_simple_12_shifts(F3):
    M = mod_simple(1, 2, ctx=F3)
    R = M.ring
    assert _ints(R, M.matF).tolist() == [[0, 0, 3], [1, 0, 0], [0, 1, 0]]
    assert _ints(R, M.matV).tolist() == [[0, 3, 0], [0, 0, 3], [1, 0, 0]]
    assert compute_slopes(M) == [Fr(1, 3)] * 3


def test_simple_etale(F3):
    M = mod_simple(0, 1, ctx=F3)
    assert M.rank == 1 and compute_slopes(M) == [0]
    assert M.residue_F()[0, 0] != 0


def test_simple_rejects_non_coprime(F3):
    with pytest.raises(NotCoprime):
        mod_simple(2, 2, ctx=F3)
    with pytest.raises(NotCoprime):
        mod_simple(0, 0, ctx=F3)


def test_cyclic_g1_is_supersingular(F3):
    M = mod_cyclic(1, [1, 0, -1], ctx=F3)
    assert M.check()
    assert compute_slopes(M) == [Fr(1, 2)] * 2


def test_cyclic_coefficient_checks(F3):
    with pytest.raises(NonUnitLeading):
        mod_cyclic(2, [3, 0, 0, 0, 1], ctx=F3)
    with pytest.raises(NonDivisibleMiddle):
        mod_cyclic(2, [1, 1, 0, 0, 1], ctx=F3)
    M = mod_cyclic(2, [1, 1, 0, 0, 1], ctx=F3, strict=False)
    assert M.check()


def test_newton_coefficients():
    assert newton_coeffs(NewtonPolygon.parse("1/2x3"), 3) == [1, 0, 0, 0, 0, 0, 1]
    assert newton_coeffs(NewtonPolygon.parse("1/3,2/3"), 3) == [1, 0, 0, 3, 0, 0, 1]
    assert newton_coeffs(NewtonPolygon.parse("1/4,1/2,3/4"), 3) == [1, 0, 0, 0, 3, 0, 3, 0, 0, 0, 1]


def test_newton_rejections(F3):
    with pytest.raises(HasEtaleSlope):
        mod_from_newton(NewtonPolygon.parse("0/1,1/1"), ctx=F3)
    with pytest.raises(AsymmetricPolygon):
        mod_from_newton(NewtonPolygon.parse("1/3,1/2"), ctx=F3)


@pytest.mark.parametrize("row", [r for r in APPENDIX if r.g <= 4], ids=lambda r: r.key)
def test_newton_module_has_its_slopes(row, F3):
    nu = NewtonPolygon.parse(row.newton)
    M = mod_from_newton(nu, ctx=F3)
    assert M.check()
    assert compute_slopes(M) == sorted(nu.slopes())


def test_wedge_tensor_ranks_and_relations(F3):
    M = mod_dsum(mod_simple(1, 1, ctx=F3), mod_simple(1, 1, ctx=F3))
    W = mod_wedge2(M)
    assert W.rank == 6 and W.fv_exp == 2 and W.check()
    T = mod_tensor(mod_simple(1, 2, ctx=F3), mod_simple(1, 1, ctx=F3))
    assert T.rank == 6 and T.fv_exp == 2 and T.check()
    assert wedge_pairs(3) == [(0, 1), (0, 2), (1, 2)]


@pytest.mark.parametrize("a,b", [((1, 1), (1, 2)), ((1, 2), (2, 1)), ((0, 1), (1, 1)),
                                 ((1, 3), (1, 1)), ((2, 3), (1, 0))])
def test_wedge_of_sum_decomposes(a, b, F3):
    M = mod_simple(*a, ctx=F3, precision=1)
    N = mod_simple(*b, ctx=F3, precision=1)
    W = mod_wedge2(mod_dsum(M, N))
    assert W.rank == mod_wedge2(M).rank + mod_wedge2(N).rank + mod_tensor(M, N).rank
    whole = kernel_dim_mod_p(W)
    pieces = (kernel_dim_mod_p(mod_wedge2(M)) + kernel_dim_mod_p(mod_wedge2(N))
              + kernel_dim_mod_p(mod_tensor(M, N)))
    assert whole == pieces


def test_dual(F3):
    M = mod_simple(1, 2, ctx=F3)
    D = mod_dual(M)
    assert D.check()
    assert compute_slopes(D) == [Fr(2, 3)] * 3
    DD = mod_dual(D)
    assert (DD.matF == M.matF).all() and (DD.matV == M.matV).all()
    S = mod_dsum(mod_simple(1, 1, ctx=F3), M)
    assert compute_slopes(mod_dual(S)) == sorted(compute_slopes(mod_dual(mod_simple(1, 1, ctx=F3)))
                                                 + compute_slopes(D))


def _same_span(R, G1, G2):
    h1, e1 = hermite_basis(R, G1)
    h2, e2 = hermite_basis(R, G2)
    return e1 == e2 and ((h1 - h2) % R.pn == 0).all()


def test_nygaard_of_supersingular_elliptic(F3):
    M = mod_simple(1, 1, ctx=F3)
    S = mod_nygaard(M)
    assert _same_span(M.ring, S.basis, M.matV)


def test_nygaard_of_wedge_of_superspecial_surface(F3):
    M = mod_dsum(mod_simple(1, 1, ctx=F3), mod_simple(1, 1, ctx=F3))
    L = mod_wedge2(M)
    R = L.ring
    idx = {pr: k for k, pr in enumerate(wedge_pairs(4))}
    e1, f1, e2, f2 = 0, 1, 2, 3
    gens = [(e1, e2, 3), (f1, f2, 1), (e1, f1, 1), (e1, f2, 1), (f1, e2, 1), (e2, f2, 1)]
    G = R.zeros((6, 6))
    for c, (i, j, s) in enumerate(gens):
        G[idx[(i, j)], c, 0] = s
    assert _same_span(R, mod_nygaard(L).basis, G)


@pytest.mark.parametrize("recipe", [{"simple": [1, 2]}, {"cyclic": {"g": 3, "coeffs": fgv_coeffs(3)}},
                                    {"wedge2": {"newton": [[1, 2, 1], [2, 1, 1]]}}])
def test_nygaard_index(recipe, F3):
    L = build(recipe, ctx=F3)
    S = mod_nygaard(L)
    R = L.ring
    _, exps = hermite_basis(R, S.basis)
    rk = fq_rank(F3, L.residue_F())
    assert sum(exps) == rk
    assert S.kernel_dim == L.rank - rk
    # pL sits inside: every column is F-divisible by p
    FS = R.matmul(L.matF, R.sigma(S.basis))
    assert (FS % 3 == 0).all()


def test_polarisation_g1():
    k = ff_make(3, 2)
    M = mod_cyclic(1, fgv_coeffs(1), ctx=k)
    pol = mod_polarisation_cyclic(M)
    z = pol.zeta
    assert k.frob(z) == k.neg(z) and k.mul(z, z) == k.neg(1)


def test_polarisation_g2():
    M = mod_cyclic(2, fgv_coeffs(2), ctx=ff_make(3, 4))
    pol = mod_polarisation_cyclic(M)
    R = M.ring
    assert ((np.swapaxes(pol.matB, 0, 1) + pol.matB) % R.pn == 0).all()
    assert check_polarisation(pol)
    with pytest.raises(FieldTooSmall):
        mod_polarisation_cyclic(mod_cyclic(2, fgv_coeffs(2), ctx=ff_make(3, 2)))


def test_sublattice_p_m_is_isomorphic(F3):
    M = mod_cyclic(2, fgv_coeffs(2), ctx=F3, precision=6)
    S = mod_sublattice_isogeny(M, "pM")
    R = S.ring
    # the solve back into the new basis costs the total index p^4
    assert S.precision == 2
    assert ((S.matF - R.reduce(M.matF)) % R.pn == 0).all()


def test_sublattice_superspecial_chain(F3):
    M = mod_dsum(mod_simple(1, 1, ctx=F3, precision=4), mod_simple(1, 1, ctx=F3, precision=4))
    gens = [[3, 0, 0, 0], [0, 0, 3, 0], [0, 1, 0, 0], [0, 0, 0, 1]]
    S = mod_sublattice_isogeny(M, {"generators": gens})
    assert S.check()
    assert S.quotient["FC_zero"] and S.quotient["VC_zero"]
    assert kernel_dim_mod_p(mod_wedge2(S.rebuild(precision=1))) == 1


def test_sublattice_must_be_stable(F3):
    M = mod_dsum(mod_simple(1, 1, ctx=F3, precision=4), mod_simple(1, 1, ctx=F3, precision=4))
    with pytest.raises(NotStable):
        mod_sublattice_isogeny(M, {"generators": [[1, 0, 0, 0]], "k": 1})


def test_random_sublattices_are_stable(F3):
    M = mod_dsum(mod_simple(1, 2, ctx=F3, precision=12), mod_simple(2, 1, ctx=F3, precision=12))
    for seed in range(10):
        S = mod_sublattice_isogeny(M, {"random": seed, "k": 2})
        assert S.check()
        assert compute_slopes(S) == compute_slopes(M)


def test_document_round_trip(F9):
    M = mod_cyclic(2, fgv_coeffs(2), ctx=F9, precision=2)
    doc = M.to_doc()
    M2 = module_from_doc(doc)
    assert (M2.matF == M.matF).all() and (M2.matV == M.matV).all()
    doc["matF"][0][0] = [[1, 0]] * 3
    with pytest.raises(ValueError):
        module_from_doc(doc)
