import pytest

from synlab.closedforms import (
    TRUNC_INF,
    FamilyTag,
    einf_closed,
    enumerate_families,
    family_torsion,
    leading_disjoint,
    tr_closed_decomposition,
)
from synlab.errors import InputError
from synlab.graded import Monomial, PrimeContext
from synlab.nygaard import Variant

CTX3 = PrimeContext(3)
CTX5 = PrimeContext(5)


def gens_at(dec, stem, line):
    return [g for g in dec if tuple(g.bidegree) == (stem, line)]


def test_hfp_unit_torsion():
    dec = einf_closed(CTX3, 1, 0, Variant.HFP, (0, 10))
    unit = [g for g in gens_at(dec, 0, 0) if g.label == "L1:1"]
    assert len(unit) == 1 and unit[0].torsion == 4  # 1 + p


def test_tate_periodic_generators():
    dec = einf_closed(CTX3, 2, 0, Variant.TATE, (-40, 40))
    pure = [g for g in dec if "l1" not in g.label and "u" not in g.label]
    stems = sorted(g.bidegree.d for g in pure)
    assert stems == [-36, -18, 0, 18, 36]  # t^{+-p^n}-periodic
    assert all(g.torsion == 4 for g in pure)  # 1 + p


def test_twisted_boundary_generator():
    # i = 2 is congruent to -n*l*p^(n-1) mod p^n; torsion 1 + (p^n - i)
    dec = einf_closed(CTX3, 1, 1, Variant.HFP, (0, 10))
    t2 = [g for g in dec if g.label == "L1:se(1p^1)*t^2"]
    assert len(t2) == 1 and t2[0].torsion == 2


def test_level_zero_pages():
    hfp = einf_closed(CTX3, 0, 1, Variant.HFP, (0, 20))
    assert all(g.torsion == 1 for g in hfp)
    assert {tuple(g.bidegree) for g in hfp} == {(2, 0), (7, 1), (8, 0), (13, 1), (14, 0), (19, 1), (20, 0)}
    assert len(einf_closed(CTX3, 0, 0, Variant.TATE, (-20, 20))) == 0


def test_enumerate_c_family_starts_at_level_one():
    elems = enumerate_families(CTX3, 1, TRUNC_INF, (0, 40))
    c0 = [e for e in elems if e.tag is FamilyTag.C and e.n == 0]
    assert c0 == []  # the level-0 page has no t^i l1 u classes
    c1 = [e for e in elems if e.tag is FamilyTag.C and e.n == 1]
    assert sorted({e.index for e in c1}) == [1]  # v_3(i + l) = 0 forces i = 1
    assert {e.torsion for e in c1} == {2}  # p - i


def test_enumerate_a_family_empty_at_n1_l1():
    elems = enumerate_families(CTX3, 1, TRUNC_INF, (0, 300))
    assert [e for e in elems if e.tag is FamilyTag.A and e.n == 1] == []


def test_enumerate_f_family_truncated():
    elems = enumerate_families(CTX3, 1, 1, (0, 80))
    fs = [e for e in elems if e.tag is FamilyTag.F]
    assert fs and all(e.n == 1 for e in fs)
    assert all(e.index > 2 and e.index % 3 == 1 for e in fs)
    assert all(e.torsion == 4 for e in fs)  # 1 + p


def test_suspension_chain_included_at_level_zero():
    # j = 0 at n = 0: the bottom class of the twist-l summand
    elems = enumerate_families(CTX3, 1, TRUNC_INF, (0, 10))
    bottom = [e for e in elems if e.n == 0 and e.index == 0 and e.e == 0]
    assert len(bottom) == 1
    el = bottom[0]
    assert el.tag is FamilyTag.B and el.bidegree(CTX3) == (2, 0)
    assert [lvl for (lvl, _m, _c) in el.components] == [0, 1]
    assert el.torsion == 2  # comp2 lives in the short t-range


def test_u_chain_included_at_level_one():
    # j = 0 at n = 1: the class se*l1*u_1
    elems = enumerate_families(CTX3, 1, TRUNC_INF, (0, 40))
    j0 = [e for e in elems if e.n == 1 and e.index == 0 and e.tag in (FamilyTag.D, FamilyTag.E)]
    assert len(j0) == 2  # u-exponent 0 and 1
    assert {e.tag for e in j0} == {FamilyTag.E}  # l(p-1) < p at l=1
    assert {e.torsion for e in j0} == {2 * 3}  # geo(1,1) + p^2 - p*l*(p-1)


def test_delta_component_emitted_when_in_range():
    # B chain with Kronecker delta: p | n+1 at n = 2, j = p(p-1) = 6
    elems = enumerate_families(CTX3, 1, TRUNC_INF, (0, 60))
    b2 = [e for e in elems if e.tag is FamilyTag.B and e.n == 2 and e.index == 6]
    assert len(b2) == 2
    el = b2[0]
    assert len(el.components) == 3
    assert el.components[2][0] == 4  # level n+2
    assert el.components[2][1].t_exp == 3**3 * 1 * 2  # p^(n+1) l (p-1)
    assert el.torsion == family_torsion(FamilyTag.B, CTX3, 2, 1, None, 6) == (1 + 3 + 9 + 27) + 27


def test_family_torsion_values():
    assert family_torsion(FamilyTag.C, CTX5, 1, 1, None, 2) == 3  # p - i
    assert family_torsion(FamilyTag.A, CTX3, 1, 2, None, 3) == 4  # 1 + p
    assert family_torsion(FamilyTag.G, CTX3, 2, 1, 1, 100) == 3  # p + ... + p^r
    # truncation collapses B to its first component
    assert family_torsion(FamilyTag.B, CTX3, 2, 1, None, 6, trunc=2) == 13
    assert family_torsion(FamilyTag.B, CTX3, 2, 1, None, 6, trunc=3) == 40
    with pytest.raises(InputError):
        family_torsion(FamilyTag.A, CTX3, 2, 1, None, 0, trunc=1)


def test_components_share_bidegree_and_leading_disjoint():
    for p, ell in ((3, 1), (3, 2), (2, 1), (2, 3), (5, 2)):
        ctx = PrimeContext(p)
        for trunc in (TRUNC_INF, 0, 1, 2):
            elems = enumerate_families(ctx, ell, trunc, (0, 120))
            for el in elems:
                el.bidegree(ctx)  # raises on mismatch
            assert leading_disjoint(elems)


def test_twist_must_be_prime_to_p():
    with pytest.raises(InputError):
        enumerate_families(CTX3, 3, TRUNC_INF, (0, 50))
    with pytest.raises(InputError):
        enumerate_families(CTX3, 0, TRUNC_INF, (0, 50))


def test_stems_bounded_below_by_connectivity():
    for ell in (1, 2, 4):
        dec = tr_closed_decomposition(CTX3, ell, TRUNC_INF, (0, 100))
        table = dec.dims(CTX3, (0, 2 * ell - 2))
        assert not table.entries  # nothing below stem 2l - 1
