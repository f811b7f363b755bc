from itertools import product

import pytest
from hypothesis import given, strategies as st

from conftest import matrices
from defectkit.zlinalg import (
    IntMatrix,
    det,
    diagonal,
    hnf,
    invariant_factors,
    kernel_basis,
    kron,
    lattice_basis,
    rank,
    snf,
    solve,
    unimodular_inverse,
    unvec,
    vec,
)


def gcd_of_minors(a: IntMatrix, k: int) -> int:
    from itertools import combinations
    from math import gcd

    g = 0
    for rs in combinations(range(a.rows), k):
        for cs in combinations(range(a.cols), k):
            g = gcd(g, det(a.submatrix(rs, cs)))
    return g


def test_hnf_of_column():
    h, u = hnf(IntMatrix.from_rows([[4], [6]]))
    assert h == IntMatrix.from_rows([[2], [0]])
    assert u @ IntMatrix.from_rows([[4], [6]]) == h


def test_snf_small():
    a = IntMatrix.from_rows([[2, 4], [6, 8]])
    d, u, v = snf(a)
    assert diagonal(d) == [2, 4]
    assert u @ a @ v == d


def test_snf_zero_and_empty():
    d, u, v = snf(IntMatrix.zeros(2, 3))
    assert d.is_zero() and u.shape == (2, 2) and v.shape == (3, 3)
    d, _, _ = snf(IntMatrix.zeros(0, 2))
    assert d.shape == (0, 2)


def test_solve_bezout():
    x = solve(IntMatrix.from_rows([[2, 3]]), [1])
    assert x is not None and 2 * x[0] + 3 * x[1] == 1


def test_solve_absent():
    assert solve(IntMatrix.from_rows([[2, 4]]), [1]) is None


def test_kernel_basis_direction():
    k = kernel_basis(IntMatrix.from_rows([[2, -2]]))
    assert k.cols == 1 and k.col(0) in ((1, 1), (-1, -1))


def test_vec_kron_identity():
    l = IntMatrix.from_rows([[1, 2], [0, 1]])
    x = IntMatrix.from_rows([[3, -1], [2, 5]])
    r = IntMatrix.from_rows([[2, 0], [1, 1]])
    assert kron(r.T, l).apply(vec(x)) == vec(l @ x @ r)
    assert unvec(vec(x), 2, 2) == x


def test_det_small():
    assert det(IntMatrix.from_rows([[2, 0, 1], [1, 3, 2], [1, 1, 1]])) == 0
    assert det(IntMatrix.from_rows([[2, 0, 1], [1, 3, 2], [1, 1, 2]])) == 6


def leibniz(a: IntMatrix) -> int:
    from itertools import permutations

    n, total = a.rows, 0
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = sign
        for i in range(n):
            term *= a[i, perm[i]]
        total += term
    return total


@given(st.integers(1, 4).flatmap(lambda n: matrices(min_rows=n, max_rows=n, min_cols=n, max_cols=n)))
def test_det_matches_leibniz(a):
    assert det(a) == leibniz(a)


@given(matrices(max_rows=5, max_cols=5))
def test_snf_certificate(a):
    d, u, v = snf(a)
    assert u @ a @ v == d
    assert abs(det(u)) == 1 and abs(det(v)) == 1
    dg = diagonal(d)
    nz = [x for x in dg if x]
    assert all(x > 0 for x in nz)
    assert all(b % c == 0 for c, b in zip(nz, nz[1:]))
    assert dg[:len(nz)] == nz  # nonzero entries first
    for i in range(d.rows):
        for j in range(d.cols):
            if i != j:
                assert d[i, j] == 0


@given(matrices(max_rows=4, max_cols=4, bound=9))
def test_snf_matches_minors(a):
    # product of the first k invariant factors is the gcd of k x k minors
    inv = invariant_factors(a)
    prod = 1
    for k, f in enumerate(inv, start=1):
        prod *= f
        assert gcd_of_minors(a, k) == prod


@given(matrices(max_rows=5, max_cols=5))
def test_hnf_certificate(a):
    h, u = hnf(a)
    assert u @ a == h
    assert abs(det(u)) == 1
    # echelon: pivot columns strictly increase, pivots positive, entries above reduced
    last = -1
    for i in range(h.rows):
        row = h.row(i)
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            assert all(not any(h.row(k)) for k in range(i, h.rows))
            break
        p = nz[0]
        assert p > last and row[p] > 0
        for k in range(i):
            assert 0 <= h[k, p] < row[p]
        last = p


@given(matrices(max_rows=3, max_cols=3, bound=6), st.lists(st.integers(-6, 6), min_size=3, max_size=3))
def test_solve_against_box_search(a, b):
    b = b[:a.rows]
    x = solve(a, b)
    if x is not None:
        assert a.apply(x) == tuple(b)
    else:
        # no small solution either
        for cand in product(range(-8, 9), repeat=a.cols):
            assert a.apply(cand) != tuple(b)


@given(matrices(max_rows=4, max_cols=5))
def test_kernel_basis_spans_kernel(a):
    k = kernel_basis(a)
    assert (a @ k).is_zero() if k.cols else True
    assert k.cols == a.cols - rank(a)
    # saturated: the lattice basis has unit invariant factors
    if k.cols:
        assert all(f == 1 for f in invariant_factors(k))


@given(matrices(max_rows=4, max_cols=5))
def test_lattice_basis_same_lattice(a):
    b = lattice_basis(a)
    assert b.cols == rank(a)
    for j in range(a.cols):
        assert solve(b, a.col(j)) is not None
    for j in range(b.cols):
        assert solve(a, b.col(j)) is not None


@given(matrices(min_rows=3, max_rows=3, min_cols=3, max_cols=3, bound=5))
def test_unimodular_inverse(a):
    _, u, _ = snf(a)
    assert u @ unimodular_inverse(u) == IntMatrix.identity(u.rows)


def test_shape_errors():
    with pytest.raises(ValueError):
        IntMatrix.from_rows([[1, 2]]) @ IntMatrix.from_rows([[1, 2]])
    with pytest.raises(ValueError):
        IntMatrix(2, 2, [1, 2, 3])
