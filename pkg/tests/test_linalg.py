"""Exact elimination: rank, nullspace, membership certificates."""

import random
from fractions import Fraction

from qmzv.linalg import Echelon, echelon_of, in_row_span, nullspace, rank, rank_naive


def test_rank_identity_and_scaling():
    ident = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert rank(ident) == 3
    assert nullspace(ident) == []
    scaled = [[Fraction(3, 7) * x for x in row] for row in ident]
    assert rank(scaled) == 3
    assert rank([[2, 4], [1, 2], [3, 6]]) == 1


def test_rank_agrees_with_naive_oracle():
    rng = random.Random(23)
    for trial in range(6):
        nrows, ncols = 20, 30
        rk = rng.randint(1, 12)
        basis = [[rng.randint(-5, 5) for _ in range(ncols)] for _ in range(rk)]
        rows = []
        for _ in range(nrows):
            row = [0] * ncols
            for b in basis:
                c = rng.randint(-3, 3)
                row = [x + c * y for x, y in zip(row, b)]
            rows.append(row)
        assert rank(rows) == rank_naive(rows), trial


def test_nullspace_is_kernel():
    rng = random.Random(29)
    rows = [[rng.randint(-4, 4) for _ in range(8)] for _ in range(5)]
    basis = nullspace(rows)
    assert len(basis) == 8 - rank(rows)
    for v in basis:
        for row in rows:
            assert sum(Fraction(a) * b for a, b in zip(row, v)) == 0
    # canonical: free coordinate pattern is the identity on free columns
    ech = echelon_of(rows)
    free = [j for j in range(8) if j not in ech.pivot_cols]
    for v, f in zip(basis, free):
        assert v[f] == 1
        assert all(v[g] == 0 for g in free if g != f)


def test_prefix_ranks():
    rows = [[1, 0, 0, 1], [0, 0, 1, 0], [1, 0, 1, 1]]
    ech = echelon_of(rows)
    assert [ech.rank_of_column_prefix(c) for c in (1, 2, 3, 4)] == [1, 1, 2, 2]


def test_in_row_span_member():
    v1 = [1, 2, 0, 1]
    v2 = [0, 1, 1, 0]
    target = [2, 7, 3, 2]  # 2 v1 + 3 v2
    ok, coeffs, functional = in_row_span([v1, v2], target)
    assert ok and functional is None
    assert coeffs == [Fraction(2), Fraction(3)]


def test_in_row_span_fraction_inputs():
    v1 = [Fraction(1, 2), Fraction(1, 3)]
    target = [Fraction(3, 2), Fraction(1)]
    ok, coeffs, _ = in_row_span([v1], target)
    assert ok and coeffs == [Fraction(3)]


def test_in_row_span_non_member_certificate():
    rng = random.Random(31)
    for _ in range(10):
        vecs = [[rng.randint(-4, 4) for _ in range(6)] for _ in range(3)]
        target = [rng.randint(-4, 4) for _ in range(6)]
        ok, coeffs, functional = in_row_span(vecs, target)
        if ok:
            recon = [
                sum(c * Fraction(v[j]) for c, v in zip(coeffs, vecs)) for j in range(6)
            ]
            assert recon == [Fraction(t) for t in target]
        else:
            for v in vecs:
                assert sum(u * x for u, x in zip(functional, v)) == 0
            assert sum(u * t for u, t in zip(functional, target)) != 0


def test_zero_vector_always_member():
    ok, coeffs, _ = in_row_span([[1, 2], [0, 1]], [0, 0])
    assert ok and coeffs == [Fraction(0), Fraction(0)]


def test_echelon_insert_reports_rank_growth():
    ech = Echelon(3)
    assert ech.insert([1, 1, 0])
    assert not ech.insert([2, 2, 0])
    assert ech.insert([0, 0, 5])
    assert ech.rank == 2
