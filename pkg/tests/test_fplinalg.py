import random

import pytest

from synlab.errors import InputError
from synlab.fplinalg import (
    FpMatrix,
    VectorSpan,
    express_in,
    is_prime,
    kernel_basis,
    rank,
    solve,
    subquotient,
)


def mat(p, rows):
    return FpMatrix.from_rows(p, rows)


def test_prime_checked():
    with pytest.raises(InputError):
        FpMatrix(4, 1, 1, {})
    assert is_prime(2) and is_prime(13) and not is_prime(1) and not is_prime(9)


def test_kernel_identity_trivial():
    assert kernel_basis(mat(3, [[1, 0], [0, 1]])) == []


def test_kernel_zero_map():
    basis = kernel_basis(mat(3, [[0, 0], [0, 0]]))
    assert len(basis) == 2


def test_kernel_rank_one_f5():
    m = mat(5, [[1, 2], [2, 4]])
    basis = kernel_basis(m)
    assert len(basis) == 1
    v = basis[0]
    assert m.mul_vec(v) == (0, 0)
    # proportional to (3, 1)
    assert (v[0] * 1 - v[1] * 3) % 5 == 0 and any(v)


def test_solve_identity():
    assert solve(mat(3, [[1, 0], [0, 1]]), (1, 2)) == (1, 2)


def test_solve_zero_map_inconsistent():
    assert solve(mat(3, [[0, 0], [0, 0]]), (1, 0)) is None


def test_solve_f2_substitutes():
    m = mat(2, [[1, 1], [0, 1]])
    x = solve(m, (0, 1))
    assert x == (1, 1)
    assert m.mul_vec(x) == (0, 1)


def test_solve_dimension_mismatch():
    with pytest.raises(InputError):
        solve(mat(3, [[1, 0]]), (1, 0))


def test_subquotient_trivial():
    sq = subquotient([(1, 0)], [(1, 0)], 3, 2)
    assert sq.dim == 0


def test_subquotient_full():
    sq = subquotient([(1, 0), (0, 1)], [], 3, 2)
    assert sq.dim == 2


def test_subquotient_representative_reduced():
    sq = subquotient([(1, 0), (1, 1)], [(1, 0)], 5, 2)
    assert sq.dim == 1
    assert sq.representatives[0] == (0, 1)  # congruent to e2 mod the denominator


def test_subquotient_containment_enforced():
    with pytest.raises(InputError):
        subquotient([(1, 0)], [(0, 1)], 3, 2)


def test_compose_and_zero():
    a = mat(3, [[1, 2], [0, 1]])
    b = mat(3, [[2, 0], [1, 1]])
    ab = a.compose(b)
    for v in [(1, 0), (0, 1), (2, 2)]:
        assert ab.mul_vec(v) == a.mul_vec(b.mul_vec(v))


def random_matrix(rng, p, rows, cols, density=0.4):
    entries = {}
    for i in range(rows):
        for j in range(cols):
            if rng.random() < density:
                v = rng.randrange(1, p)
                entries[(i, j)] = v
    return FpMatrix(p, rows, cols, entries)


def test_rank_nullity_and_annihilation_randomized():
    rng = random.Random(11)
    for trial in range(60):
        p = rng.choice([2, 3, 5])
        # every tenth trial exercises the sparse row representation
        hi = 90 if trial % 10 == 0 else 50
        rows, cols = rng.randint(1, hi), rng.randint(1, hi)
        m = random_matrix(rng, p, rows, cols, density=0.15 if hi > 50 else 0.4)
        ker = kernel_basis(m)
        assert len(ker) + rank(m) == cols
        for v in ker:
            assert not any(m.mul_vec(v))


def test_solve_substitutes_randomized():
    rng = random.Random(12)
    for _ in range(40):
        p = rng.choice([2, 3, 5])
        rows, cols = rng.randint(1, 25), rng.randint(1, 25)
        m = random_matrix(rng, p, rows, cols)
        x = tuple(rng.randrange(p) for _ in range(cols))
        rhs = m.mul_vec(x)
        got = solve(m, rhs)
        assert got is not None
        assert m.mul_vec(got) == rhs


def test_subquotient_rank_arithmetic_randomized():
    rng = random.Random(13)
    for _ in range(40):
        p = rng.choice([2, 3, 5])
        dim = rng.randint(1, 30)
        vecs = [tuple(rng.randrange(p) for _ in range(dim)) for _ in range(rng.randint(1, 12))]
        num_span = VectorSpan(p, dim, vecs)
        # denominator: random combinations of the numerator
        den = []
        for _ in range(rng.randint(0, 6)):
            coeffs = [rng.randrange(p) for _ in vecs]
            combo = tuple(sum(c * v[i] for c, v in zip(coeffs, vecs)) % p for i in range(dim))
            den.append(combo)
        sq = subquotient(vecs, den, p, dim)
        assert len(sq.representatives) == num_span.rank - VectorSpan(p, dim, den).rank
        for r in sq.representatives:
            assert num_span.contains(r)


def test_express_in():
    vecs = [(1, 0, 2), (0, 1, 1)]
    coeffs = express_in(vecs, (2, 1, 2 * 2 + 1), 5)
    assert coeffs == (2, 1)
    assert express_in(vecs, (0, 0, 1), 5) is None
