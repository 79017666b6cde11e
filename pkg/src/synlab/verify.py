"""Cross-verification suites: every headline computation two ways, exactly.

Each suite returns a list of Check records (machine readable, with the
first counterexample coordinates in `detail` on failure).  The acceptance
grids are the defaults; the CLI can shrink them for smoke runs.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field

from .assembly import (
    AssemblyParams,
    betti_bound,
    k_mod_dims,
    syntomic_dims,
    tc_mod_dims,
    tc_zp_dims,
    two_line_check,
)
from .closedforms import (
    TRUNC_INF,
    FamilyTag,
    einf_closed,
    enumerate_families,
    family_torsion,
    leading_disjoint,
)
from .errors import InputError
from .graded import (
    TORSION_FREE,
    Bidegree,
    CyclicDecomposition,
    Generator,
    PrimeContext,
    geo,
    localization_rank,
)
from .nygaard import SSPage, Variant, run_to_einf
from .trkernel import GrV1Class, PageSet, complete_to_kernel, probe_element_torsion, tr_gr_module


@dataclass
class Check:
    suite: str
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        tail = f"  [{self.detail}]" if self.detail and not self.passed else ""
        return f"{mark} {self.suite}: {self.name}{tail}"


@dataclass
class VerifyReport:
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json_obj(self) -> dict:
        return {
            "ok": self.ok,
            "checks": [
                {"suite": c.suite, "name": c.name, "passed": c.passed, "detail": c.detail}
                for c in self.checks
            ],
        }


def _compare_page(ctx, n, ell, variant, window, v1_cutoff):
    """AC1 kernel: oracle page vs closed form; '' when equal, else detail."""
    page = SSPage(ctx, n, ell, variant, window, v1_cutoff)
    res = run_to_einf(page)
    lo, hi = window
    closed = einf_closed(ctx, n, ell, variant, (lo - ctx.q * (v1_cutoff + 1), hi))
    d_or = {k: v for k, v in res.dim_table(window).entries.items() if v}
    d_cl = {k: v for k, v in closed.dims(ctx, window).entries.items() if v}
    if d_or != d_cl:
        key = next(k for k in sorted(set(d_or) | set(d_cl)) if d_or.get(k, 0) != d_cl.get(k, 0))
        return f"dim at (stem,line)={key}: oracle {d_or.get(key, 0)} closed {d_cl.get(key, 0)}"
    classes = res.classes(window)
    uncert = [c for c in classes if not c.certified]
    if uncert:
        c = uncert[0]
        return f"uncertified torsion at {tuple(c.bidegree)} ({c.representative})"
    t_or = Counter((tuple(c.bidegree), c.v1_torsion) for c in classes)
    t_cl = Counter((tuple(g.bidegree), g.torsion) for g in closed.generators_in(window))
    if t_or != t_cl:
        key = next(k for k in sorted(set(t_or) | set(t_cl)) if t_or[k] != t_cl[k])
        return f"torsion multiset at {key[0]}: order {key[1]} oracle x{t_or[key]} closed x{t_cl[key]}"
    return ""


def suite_einf(ps=(2, 3, 5), n_max=3, deg_max=None, ell_max=None, double_cutoff=False) -> list:
    """AC1 (and the cutoff half of AC9 when double_cutoff is set)."""
    checks = []
    for p in ps:
        ctx = PrimeContext(p)
        hi = deg_max if deg_max is not None else 4 * p**3
        window = (-hi, hi)
        lmax = ell_max if ell_max is not None else p * p
        ells = [0] + [l for l in range(1, lmax + 1) if l % p]
        for n in range(n_max + 1):
            V = geo(p, 0, n) + 1
            for variant in (Variant.HFP, Variant.TATE, Variant.MUINV):
                worst = ""
                for ell in ells:
                    detail = _compare_page(ctx, n, ell, variant, window, V)
                    if detail:
                        worst = f"l={ell}: {detail}"
                        break
                checks.append(
                    Check("einf", f"AC1 p={p} n={n} {variant.value} oracle=closed, stems |d|<={hi}", not worst, worst)
                )
                if double_cutoff:
                    worst2 = ""
                    for ell in ells:
                        base = _page_signature(ctx, n, ell, variant, window, V)
                        doubled = _page_signature(ctx, n, ell, variant, window, 2 * V)
                        if base != doubled:
                            worst2 = f"l={ell}: output changed under cutoff doubling"
                            break
                    checks.append(
                        Check("einf", f"AC9 p={p} n={n} {variant.value} cutoff doubling stable", not worst2, worst2)
                    )
    return checks


def _page_signature(ctx, n, ell, variant, window, v1_cutoff):
    page = SSPage(ctx, n, ell, variant, window, v1_cutoff)
    res = run_to_einf(page)
    dims = tuple(sorted((k, v) for k, v in res.dim_table(window).entries.items() if v))
    tors = tuple(sorted((tuple(c.bidegree), c.v1_torsion) for c in res.classes(window) if c.certified))
    return dims, tors


def suite_families(ps=(2, 3), ell_max=8, stem_max=300) -> list:
    """AC2: every family element is a kernel chain with the stated torsion."""
    checks = []
    for p in ps:
        ctx = PrimeContext(p)
        for ell in [l for l in range(1, ell_max + 1) if l % p]:
            window = (0, stem_max)
            elems = enumerate_families(ctx, ell, TRUNC_INF, window)
            if not leading_disjoint(elems):
                checks.append(Check("families", f"AC2 p={p} l={ell} leading terms disjoint", False))
                continue
            checks.append(Check("families", f"AC2 p={p} l={ell} leading terms disjoint", True))
            top = max((el.n for el in elems), default=0) + 2
            maxtors = max((el.torsion for el in elems), default=1)
            pages = PageSet(ctx, ell, top, (0, stem_max + ctx.q * (maxtors + 2)), maxtors + 4)
            bad = ""
            bad_t = ""
            count = 0
            for el in elems:
                count += 1
                lvl, lead, _c = el.leading()
                try:
                    comps = complete_to_kernel(GrV1Class(lvl, 0, lead), pages, TRUNC_INF)
                except Exception as exc:  # InvariantError and friends
                    bad = f"{el.label()}: {exc}"
                    break
                got = [(c.level, c.base) for c in comps]
                want = [(l, m) for (l, m, _u) in el.components]
                if got != want:
                    bad = f"{el.label()}: solver chain {got} != stated {want}"
                    break
                probed = probe_element_torsion(pages, comps)
                if probed != el.torsion:
                    bad_t = f"{el.label()}: probed {probed} stated {el.torsion}"
                    break
                # truncation behavior: drop components above level m
                for m in (el.n, el.n + 1):
                    want_m = family_torsion(el.tag, ctx, el.n, ell, el.r, el.index, m)
                    probed_m = probe_element_torsion(pages, [c for c in comps if c.level <= m])
                    if probed_m != want_m:
                        bad_t = f"{el.label()} at trunc {m}: probed {probed_m} stated {want_m}"
                        break
                if bad_t:
                    break
            checks.append(
                Check("families", f"AC2 p={p} l={ell} chains solve ({count} elements, stems<={stem_max})", not bad, bad)
            )
            checks.append(
                Check("families", f"AC2 p={p} l={ell} torsion orders match", not (bad or bad_t), bad_t or bad)
            )
            # mu-tail families of the truncated diagrams
            bad_fg = ""
            for m in range(0, 3):
                t_elems = [e for e in enumerate_families(ctx, ell, m, window) if e.tag in (FamilyTag.F, FamilyTag.G)]
                if not leading_disjoint(enumerate_families(ctx, ell, m, window)):
                    bad_fg = f"trunc {m}: leading terms collide"
                    break
                for el in t_elems:
                    lvl, lead, _c = el.leading()
                    probed = probe_element_torsion(pages, [GrV1Class(lvl, 0, lead)])
                    if probed != el.torsion:
                        bad_fg = f"{el.label()} trunc {m}: probed {probed} stated {el.torsion}"
                        break
                if bad_fg:
                    break
            checks.append(Check("families", f"AC2 p={p} l={ell} truncated mu-tails", not bad_fg, bad_fg))
    return checks


def _truncation_bound(ctx, ell, m, stem_max) -> int:
    """First stem where the closed-form tables at truncations m, m+1 differ.

    This is the computed stability bound of AC9: the oracle truncations must
    agree strictly below it.  When they never differ in the window, the
    bound is one past the window top.
    """
    from .closedforms import tr_closed_decomposition

    w = (0, stem_max)
    a = tr_closed_decomposition(ctx, ell, m, w).dims(ctx, w).entries
    b = tr_closed_decomposition(ctx, ell, m + 1, w).dims(ctx, w).entries
    diffs = [k[0] for k in set(a) | set(b) if a.get(k, 0) != b.get(k, 0)]
    return min(diffs) if diffs else stem_max + 1


def suite_tr(ps=(2, 3), ell_max=8, m_max=3, stem_max=200, stability=True) -> list:
    """AC3 (main theorem), AC4 (surjectivity), truncation half of AC9."""
    checks = []
    for p in ps:
        ctx = PrimeContext(p)
        for ell in [l for l in range(1, ell_max + 1) if l % p]:
            prev = None
            for m in range(m_max + 1):
                res = tr_gr_module(ctx, ell, m, (0, stem_max), mode="both", with_surjectivity=True)
                comp = res.comparison
                detail = ""
                if not comp.ok:
                    detail = f"first mismatch {comp.dim_mismatches[:1] or comp.torsion_mismatches[:1]}"
                checks.append(Check("tr", f"AC3 p={p} l={ell} m={m} oracle=closed", comp.ok, detail))
                surj = res.surjectivity
                checks.append(
                    Check(
                        "tr",
                        f"AC4 p={p} l={ell} m={m} gr(phi-can) surjective ({surj.pieces_checked} pieces)",
                        surj.all_surjective,
                        str(surj.failures[:2]) if surj.failures else "",
                    )
                )
                if stability and prev is not None:
                    bound = _truncation_bound(ctx, ell, m - 1, stem_max)
                    floor = min(2 * ell * p**m - 2, stem_max + 1)
                    w = (0, bound - 1)
                    d_prev = {k: v for k, v in prev.dims(ctx, w).entries.items() if v}
                    d_cur = {k: v for k, v in res.decomposition.dims(ctx, w).entries.items() if v}
                    ok = d_prev == d_cur and bound >= floor
                    bad = ""
                    if bound < floor:
                        bad = f"stability bound {bound} below expected floor {floor}"
                    elif not ok:
                        key = next(k for k in sorted(set(d_prev) | set(d_cur)) if d_prev.get(k, 0) != d_cur.get(k, 0))
                        bad = f"at {key}: m={m-1} gives {d_prev.get(key, 0)}, m={m} gives {d_cur.get(key, 0)}"
                    checks.append(Check("tr", f"AC9 p={p} l={ell} m={m-1}->{m} stable below stem {bound}", ok, bad))
                prev = res.decomposition
    return checks


def suite_assembly(ps=(2, 3, 5), two_line_max=300, seed=20260808) -> list:
    """AC5..AC8 and AC10."""
    checks = []
    # AC5: shape of gr TC(Z_p)/p
    for p in ps:
        ctx = PrimeContext(p)
        dec = tc_zp_dims(ctx, (0, 1))
        expect = {(0, 0), (2 * p - 1, 1), (-1, 1), (2 * p - 2, 2)} | {(2 * p - 1 - 2 * i, 1) for i in range(1, p)}
        got = {tuple(g.bidegree) for g in dec}
        ok = len(dec) == p + 3 and got == expect and all(g.torsion == TORSION_FREE for g in dec)
        checks.append(Check("assembly", f"AC5 p={p} TC(Z_p)/p free on p+3 stated generators", ok))
    # AC6: the 2-line carries only del*l1 powers
    for p in ps:
        ctx = PrimeContext(p)
        rep = two_line_check(ctx, (0, two_line_max), mode="oracle")
        checks.append(
            Check(
                "assembly",
                f"AC6 p={p} two-line check, stems<={two_line_max}",
                rep.ok,
                str(rep.violations[:3]) if rep.violations else "",
            )
        )
    # AC7: n-independence of the syntomic table
    tables = [syntomic_dims(AssemblyParams(3, n, 1, (-4, 60))) for n in (3, 4, 5)]
    ok7 = tables[0].same_entries(tables[1]) and tables[1].same_entries(tables[2])
    checks.append(Check("assembly", "AC7 p=3 k=1 syntomic table independent of n in {3,4,5}", ok7))
    # AC8: K vs TC delta
    for k in (1, 2):
        params = AssemblyParams(3, 4, k, (-4, 60))
        tc = tc_mod_dims(params)
        kt = k_mod_dims(params)
        diff = {}
        for key in set(tc.entries) | set(kt.entries):
            d = kt.entries.get(key, 0) - tc.entries.get(key, 0)
            if d:
                diff[key[0]] = diff.get(key[0], 0) + d
        q = 2 * 3 - 2
        ok8 = diff == {-1: -1, q * k - 1: 1}
        checks.append(Check("assembly", f"AC8 p=3 n=4 k={k} K/TC delta supported on {{-1, {q*k-1}}}", ok8, str(diff) if not ok8 else ""))
    # AC10: Betti bound values and localization rank on random modules
    ctx3, ctx2 = PrimeContext(3), PrimeContext(2)
    ok_b = betti_bound(ctx3, 3) == 3 and betti_bound(ctx3, 0) == 3 and betti_bound(ctx2, 1) == 4
    checks.append(Check("assembly", "AC10 betti_bound(3,3)=3, betti_bound(3,0)=3, betti_bound(2,1)=4", ok_b))
    rng = random.Random(seed)
    bad10 = ""
    for trial in range(20):
        p = rng.choice([2, 3, 5])
        ctx = PrimeContext(p)
        bound = rng.randint(0, 4)
        gens = []
        direct = Counter()
        for i in range(rng.randint(1, 12)):
            line = rng.randint(-1, 2)
            stem = rng.randint(0, 10) * 2 + (line % 2)
            free = rng.random() < 0.4
            tors = TORSION_FREE if free else rng.randint(1, max(bound, 1))
            if tors != TORSION_FREE and tors > bound:
                tors = bound if bound >= 1 else TORSION_FREE
            gens.append(Generator(f"g{i}", Bidegree(stem, line), tors))
            if gens[-1].torsion == TORSION_FREE:
                direct[(line, stem % ctx.q)] += 1
        dec = CyclicDecomposition(gens)
        got = localization_rank(ctx, dec, bound)
        if got != {k: v for k, v in direct.items() if v}:
            bad10 = f"trial {trial}: formula {got} direct {dict(direct)}"
            break
    checks.append(Check("assembly", "AC10 localization rank matches direct free-rank count (20 random modules)", not bad10, bad10))
    return checks


SUITES = {
    "einf": lambda **kw: suite_einf(**kw),
    "families": lambda **kw: suite_families(**kw),
    "tr": lambda **kw: suite_tr(**kw),
    "assembly": lambda **kw: suite_assembly(**kw),
}


def run_suite(name: str, **kw) -> VerifyReport:
    if name == "all":
        small_ps = tuple(p for p in kw.get("ps", (2, 3)) if p in (2, 3)) or (2, 3)
        report = VerifyReport()
        report.checks += suite_einf(
            ps=kw.get("ps", (2, 3, 5)),
            n_max=kw.get("n_max", 3),
            deg_max=kw.get("deg_max"),
            ell_max=kw.get("ell_max"),
            double_cutoff=kw.get("double_cutoff", False),
        )
        report.checks += suite_families(
            ps=small_ps,
            ell_max=kw.get("ell_max") or 8,
            stem_max=kw.get("deg_max") or 300,
        )
        report.checks += suite_tr(
            ps=small_ps,
            ell_max=kw.get("ell_max") or 8,
            m_max=kw.get("m_max") or 3,
            stem_max=kw.get("deg_max") or 200,
        )
        report.checks += suite_assembly(
            ps=kw.get("ps", (2, 3, 5)),
            two_line_max=kw.get("two_line_max") or kw.get("deg_max") or 300,
        )
        return report
    if name not in SUITES:
        raise InputError(f"unknown suite {name}; pick from {sorted(SUITES)} or 'all'")
    filtered = dict(kw)
    if name in ("families", "tr"):
        filtered.pop("n_max", None)
        filtered.pop("double_cutoff", None)
        if "deg_max" in filtered:
            dm = filtered.pop("deg_max")
            if dm is not None:
                filtered["stem_max"] = dm
        filtered = {k: v for k, v in filtered.items() if v is not None}
        if "ps" in filtered:
            filtered["ps"] = tuple(p for p in filtered["ps"] if p in (2, 3)) or (2, 3)
    elif name == "assembly":
        filtered = {k: v for k, v in filtered.items() if k in ("ps", "two_line_max", "seed") and v is not None}
    else:
        filtered = {k: v for k, v in filtered.items() if v is not None}
    return VerifyReport(list(SUITES[name](**filtered)))
