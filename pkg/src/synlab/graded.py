"""Bidegrees, monomials, and graded F_p[v1]-module bookkeeping.

Display coordinates are (stem d, line s) with weight w = (d+s)/2.
Generator gradings, with q = 2p-2 the stem of v1:

    se(l*p^i) -> (2*l*p^i, 0)     t  -> (-2, 0)      mu -> (2p, 0)
    l1        -> (2p-1, 1)        u  -> (-1, -1)     v1 = t*mu -> (q, 0)

u is graded (-1,-1) so that the class se(l*p^n) and u*l1*t^(p-1)*se(l*p^n)
share both stem and weight in the one degree where both can appear, and so
that every fixed-point class lands on lines -1..1.  The boundary class
`del` of TC(Z_p) is placed at (-1, 1), putting del*l1 on line 2; nothing
else in this package ever reaches line 2.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple

from . import fplinalg
from .errors import InputError, InvariantError

#: Sentinel for a free generator (infinite v1-torsion).
TORSION_FREE = math.inf


def geo(p: int, lo: int, hi: int) -> int:
    """p^lo + p^(lo+1) + ... + p^hi, and 0 when hi < lo (empty sum)."""
    if hi < lo:
        return 0
    return sum(p**i for i in range(lo, hi + 1))


def vp(p: int, m: int):
    """p-adic valuation; vp(0) is +infinity."""
    if m == 0:
        return math.inf
    m = abs(m)
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


@dataclass(frozen=True)
class PrimeContext:
    p: int

    def __post_init__(self):
        if not fplinalg.is_prime(self.p):
            raise InputError(f"p={self.p} is not prime")

    @property
    def q(self) -> int:
        """Stem of v1."""
        return 2 * self.p - 2


class Bidegree(NamedTuple):
    d: int  # stem
    s: int  # line

    @property
    def weight(self) -> int:
        if (self.d + self.s) % 2:
            raise InvariantError(f"odd d+s at {self}; weight undefined")
        return (self.d + self.s) // 2

    def __add__(self, other):
        return Bidegree(self.d + other[0], self.s + other[1])


@dataclass(frozen=True)
class Monomial:
    """se(twist*p^level) * t^t_exp * mu^mu_exp * l1^lam * u^u_exp.

    Exponent sign conventions are the page variant's business; this class
    only does grading arithmetic.  lam and u_exp are 0 or 1 (exterior).
    """

    level: int = 0
    twist: int = 0
    t_exp: int = 0
    mu_exp: int = 0
    lam: int = 0
    u_exp: int = 0

    def __post_init__(self):
        if self.lam not in (0, 1) or self.u_exp not in (0, 1):
            raise InputError("exterior exponents must be 0 or 1")
        if self.level < 0 or self.twist < 0:
            raise InputError("level and twist must be nonnegative")

    def bidegree(self, ctx: PrimeContext) -> Bidegree:
        p = ctx.p
        d = (
            2 * self.twist * p**self.level
            - 2 * self.t_exp
            + 2 * p * self.mu_exp
            + (2 * p - 1) * self.lam
            - self.u_exp
        )
        return Bidegree(d, self.lam - self.u_exp)

    def stem(self, ctx: PrimeContext) -> int:
        return self.bidegree(ctx).d

    @property
    def line(self) -> int:
        return self.lam - self.u_exp

    def v1_times(self, j: int = 1) -> "Monomial":
        return Monomial(self.level, self.twist, self.t_exp + j, self.mu_exp + j, self.lam, self.u_exp)

    def __str__(self):
        parts = []
        if self.twist:
            parts.append(f"se({self.twist}p^{self.level})")
        if self.t_exp:
            parts.append(f"t^{self.t_exp}" if self.t_exp != 1 else "t")
        if self.mu_exp:
            parts.append(f"mu^{self.mu_exp}" if self.mu_exp != 1 else "mu")
        if self.lam:
            parts.append("l1")
        if self.u_exp:
            parts.append(f"u{self.level}")
        return "*".join(parts) if parts else "1"


def mul(a: Monomial, b: Monomial) -> Monomial | None:
    """Product of two monomials; None if an exterior square appears."""
    if a.level != b.level or a.twist != b.twist:
        raise InputError("monomials live at different (level, twist)")
    if a.lam + b.lam > 1 or a.u_exp + b.u_exp > 1:
        return None
    return Monomial(a.level, a.twist, a.t_exp + b.t_exp, a.mu_exp + b.mu_exp, a.lam + b.lam, a.u_exp + b.u_exp)


@dataclass(frozen=True)
class Generator:
    """One cyclic summand F_p[v1]/(v1^torsion) {label at bidegree}."""

    label: str
    bidegree: Bidegree
    torsion: float  # positive int, or TORSION_FREE
    certified: bool = True  # False: torsion only known to be >= the stated value

    def __post_init__(self):
        if self.torsion != TORSION_FREE and (self.torsion <= 0 or self.torsion != int(self.torsion)):
            raise InputError(f"bad torsion order {self.torsion}")


@dataclass
class CyclicDecomposition:
    entries: list = field(default_factory=list)

    def __post_init__(self):
        labels = [g.label for g in self.entries]
        if len(set(labels)) != len(labels):
            dup = sorted({x for x in labels if labels.count(x) > 1})
            raise InvariantError(f"duplicate generator labels: {dup[:5]}")

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def direct_sum(self, other: "CyclicDecomposition", prefix: str = "") -> "CyclicDecomposition":
        extra = [
            Generator(prefix + g.label, g.bidegree, g.torsion, g.certified) for g in other.entries
        ]
        return CyclicDecomposition(self.entries + extra)

    def generators_in(self, window) -> list:
        lo, hi = window
        return [g for g in self.entries if lo <= g.bidegree.d <= hi]

    def dims(self, ctx: PrimeContext, window, params: dict | None = None) -> "DimTable":
        """Counts per (stem, line) of all v1-power translates in the window."""
        lo, hi = window
        q = ctx.q
        counts: dict = {}
        for g in self.entries:
            d, s = g.bidegree
            j = 0
            while d + j * q <= hi:
                if g.torsion != TORSION_FREE and j >= g.torsion:
                    break
                if d + j * q >= lo:
                    key = (d + j * q, s)
                    counts[key] = counts.get(key, 0) + 1
                j += 1
        return DimTable(params or {}, counts, window)


@dataclass
class DimTable:
    """Map (stem, line) -> dimension over F_p, with the request parameters."""

    params: dict
    entries: dict
    window: tuple
    notes: dict = field(default_factory=dict)

    def get(self, stem: int, line: int) -> int:
        return self.entries.get((stem, line), 0)

    def stem_totals(self) -> dict:
        out: dict = {}
        for (d, _s), n in self.entries.items():
            out[d] = out.get(d, 0) + n
        return out

    def same_entries(self, other: "DimTable") -> bool:
        a = {k: v for k, v in self.entries.items() if v}
        b = {k: v for k, v in other.entries.items() if v}
        return a == b

    def to_json_obj(self) -> dict:
        entries = [
            {"stem": d, "line": s, "weight": (d + s) // 2, "dim": n}
            for (d, s), n in sorted(self.entries.items())
            if n
        ]
        obj = {
            "p": self.params.get("p"),
            "n": self.params.get("n"),
            "k": self.params.get("k"),
            "window": [self.window[0], self.window[1]],
            "entries": entries,
        }
        if self.notes:
            obj["meta"] = dict(sorted(self.notes.items()))
        return obj

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2, sort_keys=False)

    @classmethod
    def from_json(cls, text: str) -> "DimTable":
        obj = json.loads(text)
        entries = {(e["stem"], e["line"]): e["dim"] for e in obj["entries"]}
        params = {k: obj.get(k) for k in ("p", "n", "k")}
        return cls(params, entries, tuple(obj["window"]), obj.get("meta", {}))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["stem", "line", "weight", "dim"])
        for (d, s), n in sorted(self.entries.items()):
            if n:
                w.writerow([d, s, (d + s) // 2, n])
        return buf.getvalue()


def localization_rank(ctx: PrimeContext, dec: CyclicDecomposition, torsion_bound: int) -> dict:
    """Rank of the v1-localization, read off the v1^(n+1)-cofiber.

    Returns {(line, stem mod q): rank}, where rank is the total dimension of
    the image of v1^n on H of the cofiber of v1^(n+1), accumulated over the
    stems in that residue class.  This equals the number of free generators
    in the class, but it is computed the indirect way, by building the
    cofiber's graded pieces explicitly and taking matrix ranks.  Finite
    torsion above the stated bound is an invariant violation (v1^n would
    fail to kill the torsion part).
    """
    n = torsion_bound
    if n < 0:
        raise InputError("torsion bound must be >= 0")
    q = ctx.q
    for g in dec:
        if g.torsion != TORSION_FREE and g.torsion > n:
            raise InvariantError(
                f"generator {g.label} has torsion {g.torsion} > bound {n}; v1^{n} does not kill torsion"
            )
    if not dec.entries:
        return {}
    # Quotient part of H(cofiber): v1^j g for j < min(torsion, n+1).  The
    # suspended kernel part is v1^n-torsion by hypothesis and contributes
    # nothing to the image, so it never enters the matrices.
    piece: dict = {}  # (line, stem) -> list of (gen index, j)
    for gi, g in enumerate(dec):
        top = n + 1 if g.torsion == TORSION_FREE else min(int(g.torsion), n + 1)
        for j in range(top):
            piece.setdefault((g.bidegree.s, g.bidegree.d + j * q), []).append((gi, j))
    out: dict = {}
    for (s, stem), src_basis in sorted(piece.items()):
        dst_basis = piece.get((s, stem + n * q), [])
        entries = {}
        for col, (gi, j) in enumerate(src_basis):
            g = dec.entries[gi]
            top = n + 1 if g.torsion == TORSION_FREE else min(int(g.torsion), n + 1)
            if j + n < top:
                entries[(dst_basis.index((gi, j + n)), col)] = 1
        mat = fplinalg.FpMatrix(ctx.p, len(dst_basis), len(src_basis), entries)
        r = fplinalg.rank(mat)
        if r:
            key = (s, stem % q)
            out[key] = out.get(key, 0) + r
    return out
