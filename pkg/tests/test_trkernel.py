import pytest

from synlab.closedforms import TRUNC_INF, FamilyTag, enumerate_families
from synlab.errors import InputError, InvariantError
from synlab.graded import Monomial, PrimeContext
from synlab.trkernel import (
    GrV1Class,
    PageSet,
    TrOracle,
    check_surjectivity,
    complete_to_kernel,
    gr_can,
    gr_phi,
    probe_element_torsion,
    tr_gr_module,
)

CTX3 = PrimeContext(3)


@pytest.fixture(scope="module")
def pages31():
    # levels 0..4 so that delta chains close; window deep enough to certify
    # torsion orders up to the B-exceptional value 67
    return PageSet(CTX3, 1, 4, (0, 340), 72)


def test_gr_can_identity_on_t_type(pages31):
    cls = GrV1Class(1, 0, Monomial(1, 1, t_exp=2, lam=1))
    out = gr_can(cls, pages31)
    assert out is not None and out.base == cls.base and out.s == 0
    # one v1 higher the Tate class is dead, so the graded map vanishes
    assert gr_can(GrV1Class(1, 1, cls.base), pages31) is None


def test_gr_can_zero_on_mu_type(pages31):
    assert gr_can(GrV1Class(1, 1, Monomial(1, 1, mu_exp=2, u_exp=1)), pages31) is None


def test_gr_can_identity_includes_bottom_class(pages31):
    # t^0 = mu^0: the canonical map keeps the name (here it survives iff
    # the Tate class does; at level 1, twist 1 it does not)
    cls = GrV1Class(1, 0, Monomial(1, 1))
    out = gr_can(cls, pages31)
    assert out is None  # 0 is not congruent to -n*l*p^(n-1) mod p


def test_gr_phi_formula(pages31):
    # se(3)*mu at level 1: target exponent p^n l (p-1) - p j = 3
    out = gr_phi(GrV1Class(1, 0, Monomial(1, 1, mu_exp=1)), pages31)
    assert out is not None
    assert out.level == 2 and out.base == Monomial(2, 1, t_exp=3)


def test_gr_phi_zero_on_positive_t(pages31):
    assert gr_phi(GrV1Class(1, 0, Monomial(1, 1, t_exp=2, lam=1)), pages31) is None


def test_gr_phi_level_zero_bottom(pages31):
    out = gr_phi(GrV1Class(0, 0, Monomial(0, 1)), pages31)
    assert out is not None and out.level == 1 and out.base == Monomial(1, 1, t_exp=2)


def test_complete_to_kernel_two_component_chain(pages31):
    # the suspension generator's chain: se(l) + c * se(pl) t^(l(p-1))
    comps = complete_to_kernel(GrV1Class(0, 0, Monomial(0, 1)), pages31)
    assert [(c.level, c.base) for c in comps] == [
        (0, Monomial(0, 1)),
        (1, Monomial(1, 1, t_exp=2)),
    ]
    assert all(c.coeff == 1 for c in comps)
    assert probe_element_torsion(pages31, comps) == 2


def test_complete_to_kernel_single_component(pages31):
    comps = complete_to_kernel(GrV1Class(1, 0, Monomial(1, 1, t_exp=1, lam=1, u_exp=1)), pages31)
    assert len(comps) == 1
    assert probe_element_torsion(pages31, comps) == 2  # p - i


def test_complete_to_kernel_delta_chain(pages31):
    # B at n=2, j = p(p-1) = 6 has three components (p | n+1)
    comps = complete_to_kernel(GrV1Class(2, 0, Monomial(2, 1, mu_exp=6)), pages31)
    assert [c.level for c in comps] == [2, 3, 4]
    assert comps[2].base.t_exp == 54
    assert probe_element_torsion(pages31, comps) == 67


def test_complete_to_kernel_rejects_non_kernel_leading(pages31):
    # a t-type class whose canonical image survives is not a chain lead
    with pytest.raises(InvariantError):
        complete_to_kernel(GrV1Class(1, 0, Monomial(1, 1, t_exp=2)), pages31)


def test_truncation_zero_is_shifted_thh():
    res = tr_gr_module(CTX3, 1, 0, (0, 26), mode="both")
    assert res.comparison.ok
    got = sorted((tuple(g.bidegree), g.torsion) for g in res.decomposition.generators_in((0, 14)))
    assert got == [((2, 0), 1), ((7, 1), 1), ((8, 0), 1), ((13, 1), 1), ((14, 0), 1)]


def test_oracle_matches_closed_small_grid():
    for p, ell, m in ((3, 1, 1), (3, 2, 2), (2, 1, 2), (2, 3, 1), (3, 1, TRUNC_INF)):
        ctx = PrimeContext(p)
        res = tr_gr_module(ctx, ell, m, (0, 60), mode="both")
        assert res.comparison.ok, (p, ell, m, res.comparison.dim_mismatches[:3])


def test_kernel_vectors_satisfy_equalizer():
    oracle = TrOracle(CTX3, 1, 2, (0, 40))
    seen = 0
    for gen, key, vec in oracle.generators():
        assert oracle.check_equalizer(key, vec)
        seen += 1
    assert seen > 0


def test_v1_surjectivity_of_kernel():
    oracle = TrOracle(CTX3, 1, 2, (0, 60))
    assert oracle.check_v1_surjectivity() == []


def test_surjectivity_report():
    rep = check_surjectivity(CTX3, 1, 2, (-20, 120))
    assert rep.all_surjective and rep.pieces_checked > 0
    rep2 = check_surjectivity(PrimeContext(2), 1, 1, (0, 60))
    assert rep2.all_surjective
    vac = check_surjectivity(CTX3, 1, 1, (10, 0))
    assert vac.all_surjective and vac.pieces_checked == 0


def test_twist_validation():
    with pytest.raises(InputError):
        tr_gr_module(CTX3, 3, 1, (0, 20))
    with pytest.raises(InputError):
        tr_gr_module(CTX3, 1, -1, (0, 20), mode="oracle")
    with pytest.raises(InputError):
        tr_gr_module(CTX3, 1, 1, (0, 20), mode="sideways")


def test_chain_solver_agrees_with_enumerator():
    elems = enumerate_families(CTX3, 2, TRUNC_INF, (0, 90))
    top = max(e.n for e in elems) + 2
    maxtors = max(e.torsion for e in elems)
    pages = PageSet(CTX3, 2, top, (0, 90 + CTX3.q * (maxtors + 2)), maxtors + 4)
    for el in elems:
        lvl, lead, _ = el.leading()
        comps = complete_to_kernel(GrV1Class(lvl, 0, lead), pages)
        assert [(c.level, c.base) for c in comps] == [(l, m) for (l, m, _u) in el.components]
        assert probe_element_torsion(pages, comps) == el.torsion
