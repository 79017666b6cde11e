"""Exact linear algebra over the prime field F_p.

Vectors are tuples of ints reduced into [0, p).  Pivots are always the
first nonzero entry in column order, so every basis returned here is
deterministic.  Matrices store entries sparsely; row reduction switches
between dense lists and sparse dicts at DENSE_LIMIT columns, since the
graded pieces this package produces are mostly tiny with a sparse tail.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InputError

# Above this many columns row reduction works on {col: entry} dicts.
DENSE_LIMIT = 64


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise InputError(f"modulus {p} is not prime")


@dataclass(frozen=True)
class FpMatrix:
    """Sparse matrix over F_p; entries maps (row, col) to a nonzero residue."""

    p: int
    rows: int
    cols: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        _check_prime(self.p)
        for (r, c), v in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise InputError(f"entry ({r},{c}) outside {self.rows}x{self.cols}")
            if not (0 < v < self.p):
                raise InputError(f"entry ({r},{c})={v} not reduced and nonzero mod {self.p}")

    @classmethod
    def from_rows(cls, p: int, dense_rows) -> "FpMatrix":
        dense_rows = [list(r) for r in dense_rows]
        nrows = len(dense_rows)
        ncols = len(dense_rows[0]) if dense_rows else 0
        entries = {}
        for i, row in enumerate(dense_rows):
            if len(row) != ncols:
                raise InputError("ragged rows")
            for j, v in enumerate(row):
                v %= p
                if v:
                    entries[(i, j)] = v
        return cls(p, nrows, ncols, entries)

    @classmethod
    def from_columns(cls, p: int, columns, nrows: int) -> "FpMatrix":
        columns = list(columns)
        entries = {}
        for j, col in enumerate(columns):
            for i, v in enumerate(col):
                v %= p
                if v:
                    entries[(i, j)] = v
        return cls(p, nrows, len(columns), entries)

    def to_rows(self):
        out = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def column(self, j: int) -> tuple:
        return tuple(self.entries.get((i, j), 0) for i in range(self.rows))

    def mul_vec(self, v) -> tuple:
        if len(v) != self.cols:
            raise InputError(f"vector length {len(v)} != cols {self.cols}")
        out = [0] * self.rows
        for (r, c), a in self.entries.items():
            out[r] = (out[r] + a * v[c]) % self.p
        return tuple(out)

    def compose(self, other: "FpMatrix") -> "FpMatrix":
        """self @ other."""
        if other.rows != self.cols or other.p != self.p:
            raise InputError("composition shape/modulus mismatch")
        entries: dict = {}
        by_col: dict = {}
        for (r, c), v in self.entries.items():
            by_col.setdefault(c, []).append((r, v))
        for (k, j), b in other.entries.items():
            for r, a in by_col.get(k, ()):
                key = (r, j)
                s = (entries.get(key, 0) + a * b) % self.p
                if s:
                    entries[key] = s
                elif key in entries:
                    del entries[key]
        return FpMatrix(self.p, self.rows, other.cols, entries)

    def is_zero(self) -> bool:
        return not self.entries


class VectorSpan:
    """Incrementally built row space in reduced echelon form.

    Rows are kept fully reduced against each other, so reduce() returns the
    canonical representative of a vector modulo the span.
    """

    def __init__(self, p: int, dim: int, vectors=()):
        _check_prime(p)
        self.p = p
        self.dim = dim
        self._rows: dict = {}  # pivot col -> row
        self._sparse = dim > DENSE_LIMIT
        for v in vectors:
            self.add(v)

    def _to_row(self, vec):
        if len(vec) != self.dim:
            raise InputError(f"vector length {len(vec)} != ambient dim {self.dim}")
        if self._sparse:
            return {j: v % self.p for j, v in enumerate(vec) if v % self.p}
        return [v % self.p for v in vec]

    def _row_to_vec(self, row) -> tuple:
        if self._sparse:
            return tuple(row.get(j, 0) for j in range(self.dim))
        return tuple(row)

    def _reduce_row(self, row):
        p = self.p
        if self._sparse:
            for piv in sorted(self._rows):
                c = row.get(piv)
                if c:
                    base = self._rows[piv]
                    for j, v in base.items():
                        s = (row.get(j, 0) - c * v) % p
                        if s:
                            row[j] = s
                        elif j in row:
                            del row[j]
        else:
            for piv, base in self._rows.items():
                c = row[piv]
                if c:
                    for j in range(piv, self.dim):
                        if base[j]:
                            row[j] = (row[j] - c * base[j]) % p
        return row

    def _pivot_of(self, row):
        if self._sparse:
            return min(row) if row else None
        for j, v in enumerate(row):
            if v:
                return j
        return None

    def reduce(self, vec) -> tuple:
        return self._row_to_vec(self._reduce_row(self._to_row(vec)))

    def contains(self, vec) -> bool:
        row = self._reduce_row(self._to_row(vec))
        return not row if self._sparse else not any(row)

    def add(self, vec) -> bool:
        """Insert vec; True if it enlarged the span."""
        row = self._reduce_row(self._to_row(vec))
        piv = self._pivot_of(row)
        if piv is None:
            return False
        inv = pow(row[piv], -1, self.p)
        if self._sparse:
            row = {j: (v * inv) % self.p for j, v in row.items()}
            for q, other in self._rows.items():
                c = other.get(piv)
                if c:
                    for j, v in row.items():
                        s = (other.get(j, 0) - c * v) % self.p
                        if s:
                            other[j] = s
                        elif j in other:
                            del other[j]
        else:
            row = [(v * inv) % self.p for v in row]
            for q, other in self._rows.items():
                c = other[piv]
                if c:
                    for j in range(self.dim):
                        if row[j]:
                            other[j] = (other[j] - c * row[j]) % self.p
        self._rows[piv] = row
        return True

    @property
    def rank(self) -> int:
        return len(self._rows)

    def basis(self):
        return [self._row_to_vec(self._rows[piv]) for piv in sorted(self._rows)]


def rank(m: FpMatrix) -> int:
    span = VectorSpan(m.p, m.cols)
    rows_seen: dict = {}
    for (r, c), v in m.entries.items():
        rows_seen.setdefault(r, {})[c] = v
    for r in sorted(rows_seen):
        span.add(tuple(rows_seen[r].get(j, 0) for j in range(m.cols)))
    return span.rank


def kernel_basis(m: FpMatrix):
    """Deterministic basis of {v : m.v = 0}, one vector per free column."""
    p = m.p
    span = VectorSpan(p, m.cols)
    rows_seen: dict = {}
    for (r, c), v in m.entries.items():
        rows_seen.setdefault(r, {})[c] = v
    for r in sorted(rows_seen):
        span.add(tuple(rows_seen[r].get(j, 0) for j in range(m.cols)))
    pivots = sorted(span._rows)
    pivot_rows = {piv: span._rows[piv] for piv in pivots}
    free_cols = [j for j in range(m.cols) if j not in pivot_rows]
    basis = []
    for f in free_cols:
        vec = [0] * m.cols
        vec[f] = 1
        for piv in pivots:
            row = pivot_rows[piv]
            coef = row.get(f, 0) if span._sparse else row[f]
            if coef:
                vec[piv] = (-coef) % p
        basis.append(tuple(vec))
    return basis


def solve(m: FpMatrix, rhs) -> tuple | None:
    """One solution of m.x = rhs, or None; free variables are set to 0."""
    if len(rhs) != m.rows:
        raise InputError(f"rhs length {len(rhs)} != rows {m.rows}")
    p = m.p
    aug = VectorSpan(p, m.cols + 1)
    rows_seen: dict = {}
    for (r, c), v in m.entries.items():
        rows_seen.setdefault(r, {})[c] = v
    for r in range(m.rows):
        row = [rows_seen.get(r, {}).get(j, 0) for j in range(m.cols)]
        row.append(rhs[r] % p)
        aug.add(tuple(row))
    sol = [0] * m.cols
    for piv in sorted(aug._rows):
        if piv == m.cols:
            return None  # row (0 ... 0 | 1): inconsistent
        row = aug._rows[piv]
        # Rows are in reduced echelon form, so with every free variable set
        # to 0 the pivot variable equals the augmented entry.
        sol[piv] = (row.get(m.cols, 0) if aug._sparse else row[m.cols]) % p
    if m.mul_vec(tuple(sol)) != tuple(v % p for v in rhs):
        return None
    return tuple(sol)


@dataclass
class SubquotientBasis:
    """Basis data for span(numerator)/span(denominator)."""

    ambient_dim: int
    representatives: list
    relations: list

    @property
    def dim(self) -> int:
        return len(self.representatives)


def subquotient(numerator, denominator, p: int, ambient_dim: int) -> SubquotientBasis:
    """Representatives of span(numerator) modulo span(denominator).

    Requires span(denominator) to be contained in span(numerator); each
    representative is reduced modulo the denominator (and earlier
    representatives), so rank(num) = len(representatives) + rank(den).
    """
    _check_prime(p)
    num_span = VectorSpan(p, ambient_dim, numerator)
    for v in denominator:
        if not num_span.contains(v):
            raise InputError("denominator not contained in numerator span")
    acc = VectorSpan(p, ambient_dim, denominator)
    relations = acc.basis()
    reps = []
    for v in numerator:
        red = acc.reduce(v)
        if any(red):
            reps.append(red)
            acc.add(red)
    return SubquotientBasis(ambient_dim, reps, relations)


def express_in(vectors, target, p: int):
    """Coefficients writing target as a combination of vectors, or None."""
    if not vectors:
        return None if any(target) else ()
    dim = len(vectors[0])
    mat = FpMatrix(
        p,
        dim,
        len(vectors),
        {
            (i, j): vectors[j][i] % p
            for j in range(len(vectors))
            for i in range(dim)
            if vectors[j][i] % p
        },
    )
    return solve(mat, target)
