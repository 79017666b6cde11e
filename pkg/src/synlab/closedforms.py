"""Closed-form E-infinity pages and the kernel generator families.

Everything here evaluates displayed formulas; no linear algebra.  Geometric
partial sums follow the empty-sum convention (p + ... + p^k is 0 at k = 0,
1 + ... + p^(n-1) is 0 at n = 0), shared through graded.geo.

Family tags: A..E generate the untruncated kernel, F and G appear only for
a finite truncation level (top-level mu-tails with no Frobenius target).
Index edge cases the displayed ranges miss are handled explicitly:

  * A/B admit j = 0 at level n = 0 (the suspension generator's chain);
    for n >= 1 a j = 0 class exists only when p | n and is then already the
    delta-component of the level n-1 B-chain, so j >= 1 there.
  * D/E admit j = 0 at level n = 1 (the class se*l1*u_1); for n >= 2 that
    class is the delta-component of the level n-1 E-chain.
  * C is empty at level 0: the level-0 page has no t^i*l1*u classes at all.

The delta-component of B exists exactly when j = p^(n-1)*l*(p-1) is in the
index set, which forces p | n+1; for E it forces r = n and p not | n+1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import InputError
from .graded import (
    TORSION_FREE,
    Bidegree,
    CyclicDecomposition,
    Generator,
    Monomial,
    PrimeContext,
    geo,
    vp,
)
from .nygaard import Variant

#: Truncation sentinel: the untruncated (inverse limit) module.
TRUNC_INF = math.inf


class FamilyTag(str, Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"
    E = "E"
    F = "F"
    G = "G"


#: Placeholder for a unit in F_p^x not pinned by the closed forms.
UNKNOWN = None


@dataclass(frozen=True)
class FamilyElement:
    tag: FamilyTag
    n: int
    ell: int
    r: int | None
    index: int  # j for mu-type families, i for C
    e: int  # exterior exponent (lambda1 for A/B/F, u for C/D/E/G)
    components: tuple  # ((level, Monomial, coeff or UNKNOWN), ...)
    torsion: int

    def bidegree(self, ctx: PrimeContext) -> Bidegree:
        bids = {m.bidegree(ctx) for (_lvl, m, _c) in self.components}
        if len(bids) != 1:
            raise InputError(f"components of {self.label()} disagree in bidegree: {bids}")
        return next(iter(bids))

    def label(self) -> str:
        r = f",r{self.r}" if self.r is not None else ""
        return f"{self.tag.value}[n{self.n},l{self.ell}{r}]j{self.index}e{self.e}"

    def leading(self):
        return self.components[0]


# ---------------------------------------------------------------------------
# E-infinity pages


def einf_closed(ctx: PrimeContext, n: int, ell: int, variant: Variant, window) -> CyclicDecomposition:
    """Generators of the stated E-infinity page with bidegree in the window."""
    if n < 0 or ell < 0:
        raise InputError("need n >= 0 and twist >= 0")
    p = ctx.p
    variant = Variant(variant)
    lo, hi = window
    gens: list = []

    def emit(t_exp, mu_exp, lam, u_exp, torsion):
        if torsion <= 0:
            return
        m = Monomial(n, ell, t_exp, mu_exp, lam, u_exp)
        bid = m.bidegree(ctx)
        if lo <= bid.d <= hi:
            gens.append(Generator(f"L{n}:{m}", bid, torsion))

    def stem_of(t_exp, mu_exp, lam, u_exp):
        return Monomial(n, ell, t_exp, mu_exp, lam, u_exp).bidegree(ctx).d

    def t_range(lam, u_exp):
        """t-exponents (sign per variant) whose class stem is in the window."""
        base = stem_of(0, 0, lam, u_exp)  # stem(i) = base - 2i
        i_min = -((hi - base) // 2)
        i_max = (base - lo) // 2
        if not variant.t_in_z:
            i_min = max(i_min, 0)
        return range(i_min, i_max + 1)

    def mu_range(lam, u_exp):
        base = stem_of(0, 0, lam, u_exp)  # stem(j) = base + 2p*j
        j_min = -((base - lo) // (2 * p)) if variant.mu_in_z else 0
        j_max = (hi - base) // (2 * p)
        return range(j_min, j_max + 1)

    cong = n * ell * p ** (n - 1) if n >= 1 else 0

    if variant is Variant.HFP:
        for e1 in (0, 1):
            for i in t_range(e1, 0):
                if i <= 0 or (i + cong) % p**n:
                    continue
                if i >= p**n:
                    emit(i, 0, e1, 0, geo(p, 0, n - 1))
                else:
                    emit(i, 0, e1, 0, geo(p, 0, n - 1) + p**n - i)
            for j in mu_range(e1, 0):
                if j >= 0 and (j - cong) % p**n == 0:
                    emit(0, j, e1, 0, geo(p, 0, n))
        for e2 in (0, 1):
            for k in range(1, n - 1):
                for i in t_range(1, e2):
                    if i > p ** (k + 1) and vp(p, i) == k:
                        emit(i, 0, 1, e2, geo(p, 1, k))
            for k in range(0, n - 1):
                for i0 in range(1, p):
                    emit(p**k * i0, 0, 1, e2, geo(p, 1, k) + p**k * (p - i0))
                for j in mu_range(1, e2):
                    if j > 0 and vp(p, j) == k:
                        emit(0, j, 1, e2, geo(p, 1, k + 1))
            if n >= 1:
                for i in t_range(1, e2):
                    if i >= p**n and vp(p, i + cong) == n - 1:
                        emit(i, 0, 1, e2, geo(p, 1, n - 1))
                for i0 in range(1, p):
                    if vp(p, p ** (n - 1) * i0 + cong) == n - 1:
                        emit(p ** (n - 1) * i0, 0, 1, e2, geo(p, 1, n - 1) + p ** (n - 1) * (p - i0))
                for j in mu_range(1, e2):
                    if j >= 0 and vp(p, j - cong) == n - 1:
                        emit(0, j, 1, e2, geo(p, 1, n))
    elif variant is Variant.TATE:
        for e1 in (0, 1):
            for i in t_range(e1, 0):
                if (i + cong) % p**n == 0:
                    emit(i, 0, e1, 0, geo(p, 0, n - 1))
        for e2 in (0, 1):
            for k in range(1, n - 1):
                for i in t_range(1, e2):
                    if i != 0 and vp(p, i) == k:
                        emit(i, 0, 1, e2, geo(p, 1, k))
            if n >= 1:
                for i in t_range(1, e2):
                    if vp(p, i + cong) == n - 1:
                        emit(i, 0, 1, e2, geo(p, 1, n - 1))
    else:  # MUINV
        for e1 in (0, 1):
            for j in mu_range(e1, 0):
                if (j - cong) % p**n == 0:
                    emit(0, j, e1, 0, geo(p, 0, n))
        for e2 in (0, 1):
            for k in range(0, n - 1):
                for j in mu_range(1, e2):
                    if j != 0 and vp(p, j) == k:
                        emit(0, j, 1, e2, geo(p, 1, k + 1))
            if n >= 1:
                for j in mu_range(1, e2):
                    if vp(p, j - cong) == n - 1:
                        emit(0, j, 1, e2, geo(p, 1, n))
    return CyclicDecomposition(gens)


# ---------------------------------------------------------------------------
# Kernel generator families


def _tilt(ctx: PrimeContext, n: int, ell: int, j: int) -> int:
    """Frobenius target t-exponent p^n*l*(p-1) - p*j."""
    p = ctx.p
    return p**n * ell * (p - 1) - p * j


def family_torsion(tag: FamilyTag, ctx: PrimeContext, n: int, ell: int, r: int | None, index: int, trunc=TRUNC_INF) -> int:
    """Exact v1-torsion order of one family generator, after truncation."""
    p = ctx.p
    tag = FamilyTag(tag)
    m = trunc
    if m != TRUNC_INF and m < n:
        raise InputError(f"family at level {n} does not survive truncation at {m}")
    if tag is FamilyTag.A:
        return geo(p, 0, n)
    if tag is FamilyTag.C:
        return p - index
    if tag is FamilyTag.D:
        return geo(p, 1, r)
    if tag is FamilyTag.F:
        return geo(p, 0, n)
    if tag is FamilyTag.G:
        return geo(p, 1, r)
    i_t = _tilt(ctx, n, ell, index)
    if tag is FamilyTag.B:
        if not 0 <= i_t < p ** (n + 1):
            raise InputError("index outside the B range")
        full = geo(p, 0, n) + (p ** (n + 1) - i_t)
        if i_t == 0 and ell == 1:
            full = geo(p, 0, n + 1) + p ** (n + 1)
        if m == n:
            return geo(p, 0, n)
        if m == n + 1:
            return min(full, geo(p, 0, n + 1))
        return full
    if tag is FamilyTag.E:
        if not 0 <= i_t < p ** (r + 1):
            raise InputError("index outside the E range")
        full = geo(p, 1, r) + (p ** (r + 1) - i_t)
        if i_t == 0 and ell == 1:
            full = geo(p, 1, n + 1) + p ** (n + 1)
        if m == n:
            return geo(p, 1, r)
        if m == n + 1:
            return min(full, geo(p, 1, n + 1))
        return full
    raise InputError(f"unknown tag {tag}")


def _mu_upper(ctx: PrimeContext, n: int, ell: int, hi: int, e_stem: int) -> int:
    """Largest j with the level-n mu^j class stem within hi."""
    p = ctx.p
    return (hi - 2 * ell * p**n - e_stem) // (2 * p)


def enumerate_families(ctx: PrimeContext, ell: int, trunc=TRUNC_INF, window=(0, 200)) -> list:
    """All family elements with bidegree in the window.

    trunc = TRUNC_INF gives families A..E with full torsion; a finite trunc
    m restricts to levels <= m, adjusts torsion (components above level m
    fall away), and adds the mu-tail families F_m and G_m at the top level.
    """
    p = ctx.p
    if ell < 1 or ell % p == 0:
        raise InputError("twist must be positive and prime to p")
    lo, hi = window
    out: list = []
    n = 0
    while 2 * ell * p**n <= hi:
        if trunc == TRUNC_INF or n <= trunc:
            out.extend(_families_at_level(ctx, ell, n, trunc, window))
        n += 1
    return out


def _families_at_level(ctx: PrimeContext, ell: int, n: int, trunc, window) -> list:
    p = ctx.p
    lo, hi = window
    out: list = []
    cong = n * ell * p ** (n - 1) if n >= 1 else 0
    top_level = trunc != TRUNC_INF and n == trunc

    def mono(level, t_exp, mu_exp, lam, u_exp):
        return Monomial(level, ell, t_exp, mu_exp, lam, u_exp)

    def keep(elem):
        bid = elem.bidegree(ctx)
        if lo <= bid.d <= hi:
            out.append(elem)

    # families A and B: lambda^e (mu^j at level n  +  t^(tilt) at level n+1
    #                             [+ delta: t^(p^(n+1) l (p-1)) at level n+2])
    j_min = 0 if n == 0 else 1
    for e in (0, 1):
        e_stem = e * (2 * p - 1)
        for j in range(j_min, _mu_upper(ctx, n, ell, hi, e_stem) + 1):
            if (j - cong) % p**n:
                continue
            i_t = _tilt(ctx, n, ell, j)
            if i_t < 0:
                if top_level:  # family F: no Frobenius target to match
                    tors = family_torsion(FamilyTag.F, ctx, n, ell, None, j, trunc)
                    keep(FamilyElement(FamilyTag.F, n, ell, None, j, e,
                                       ((n, mono(n, 0, j, e, 0), 1),), tors))
                continue
            comps = [(n, mono(n, 0, j, e, 0), 1)]
            if trunc == TRUNC_INF or n + 1 <= trunc:
                comps.append((n + 1, mono(n + 1, i_t, 0, e, 0), UNKNOWN))
            if i_t == 0 and (trunc == TRUNC_INF or n + 2 <= trunc):
                comps.append((n + 2, mono(n + 2, p ** (n + 1) * ell * (p - 1), 0, e, 0), UNKNOWN))
            tag = FamilyTag.A if i_t >= p ** (n + 1) else FamilyTag.B
            tors = family_torsion(tag, ctx, n, ell, None, j, trunc)
            keep(FamilyElement(tag, n, ell, None, j, e, tuple(comps), tors))

    # family C: t^i lambda1 u^e at level n alone (empty at level 0)
    if n >= 1:
        for e in (0, 1):
            for i in range(1, p):
                if vp(p, i + cong) == 0:
                    tors = family_torsion(FamilyTag.C, ctx, n, ell, None, i, trunc)
                    keep(FamilyElement(FamilyTag.C, n, ell, None, i, e,
                                       ((n, mono(n, i, 0, 1, e), 1),), tors))

    # families D, E, G: mu^j lambda1 u^e chains, 1 <= r <= n
    j_min_u = 0 if n == 1 else 1
    for r in range(1, n + 1):
        for e in (0, 1):
            e_stem = (2 * p - 1) - e
            for j in range(j_min_u, _mu_upper(ctx, n, ell, hi, e_stem) + 1):
                if vp(p, j - cong) != r - 1:
                    continue
                i_t = _tilt(ctx, n, ell, j)
                if i_t < 0:
                    if top_level:  # family G
                        tors = family_torsion(FamilyTag.G, ctx, n, ell, r, j, trunc)
                        keep(FamilyElement(FamilyTag.G, n, ell, r, j, e,
                                           ((n, mono(n, 0, j, 1, e), 1),), tors))
                    continue
                comps = [(n, mono(n, 0, j, 1, e), 1)]
                if trunc == TRUNC_INF or n + 1 <= trunc:
                    comps.append((n + 1, mono(n + 1, i_t, 0, 1, e), UNKNOWN))
                if i_t == 0 and (trunc == TRUNC_INF or n + 2 <= trunc):
                    comps.append((n + 2, mono(n + 2, p ** (n + 1) * ell * (p - 1), 0, 1, e), UNKNOWN))
                tag = FamilyTag.D if i_t >= p ** (r + 1) else FamilyTag.E
                tors = family_torsion(tag, ctx, n, ell, r, j, trunc)
                keep(FamilyElement(tag, n, ell, r, j, e, tuple(comps), tors))
    return out


def tr_closed_decomposition(ctx: PrimeContext, ell: int, trunc=TRUNC_INF, window=(0, 200)) -> CyclicDecomposition:
    elems = enumerate_families(ctx, ell, trunc, window)
    gens = [Generator(el.label(), el.bidegree(ctx), el.torsion) for el in elems]
    return CyclicDecomposition(gens)


def leading_disjoint(elems) -> bool:
    """No (level, leading monomial) pair repeats across family elements."""
    seen = set()
    for el in elems:
        lvl, m, _c = el.leading()
        key = (lvl, m)
        if key in seen:
            return False
        seen.add(key)
    return True
