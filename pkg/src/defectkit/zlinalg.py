"""Exact integer matrix algebra.

Everything above this module reduces to Hermite/Smith normal forms of
small integer matrices.  Entries are plain Python ints, so arithmetic never
overflows or rounds.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Optional, Sequence


class IntMatrix:
    """Immutable rectangular matrix of unbounded integers (row-major)."""

    __slots__ = ("rows", "cols", "_rows", "_hash")

    def __init__(self, rows: int, cols: int, entries: Iterable[int] = ()):
        data = [int(x) for x in entries]
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(data) != rows * cols:
            raise ValueError(
                f"expected {rows * cols} entries for a {rows}x{cols} matrix, got {len(data)}"
            )
        self.rows = rows
        self.cols = cols
        self._rows = tuple(tuple(data[i * cols:(i + 1) * cols]) for i in range(rows))
        self._hash = None

    # -- construction -----------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged matrix rows")
        return cls(len(rows), cols, [x for r in rows for x in r])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        columns = [list(c) for c in columns]
        for c in columns:
            if len(c) != rows:
                raise ValueError("column length does not match row count")
        return cls(rows, len(columns), [columns[j][i] for i in range(rows) for j in range(len(columns))])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def diag(cls, values: Sequence[int], rows: Optional[int] = None, cols: Optional[int] = None) -> "IntMatrix":
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for i, v in enumerate(values):
            out[i][i] = v
        return cls(rows, cols, [x for r in out for x in r])

    @classmethod
    def column(cls, values: Sequence[int]) -> "IntMatrix":
        return cls(len(values), 1, values)

    # -- access -------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def entries(self) -> tuple[int, ...]:
        return tuple(x for r in self._rows for x in r)

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        return self._rows[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self._rows[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self._rows)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.col(j) for j in range(self.cols)]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._rows for x in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    # -- algebra --------------------------------------------------------------

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, [self._rows[i][j] for j in range(self.cols) for i in range(self.rows)])

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        ocols = [other.col(j) for j in range(other.cols)]
        out = []
        for r in self._rows:
            for c in ocols:
                out.append(sum(a * b for a, b in zip(r, c) if a))
        return IntMatrix(self.rows, other.cols, out)

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        if len(vec) != self.cols:
            raise ValueError("vector length does not match column count")
        return tuple(sum(a * b for a, b in zip(r, vec) if a) for r in self._rows)

    def _check_same(self, other: "IntMatrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same(other)
        return IntMatrix(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same(other)
        return IntMatrix(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, [k * a for a in self.entries])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntMatrix":
        return IntMatrix(len(rows), len(cols), [self._rows[i][j] for i in rows for j in cols])

    def take_columns(self, cols: Sequence[int]) -> "IntMatrix":
        return self.submatrix(range(self.rows), cols)

    def take_rows(self, rows: Sequence[int]) -> "IntMatrix":
        return self.submatrix(rows, range(self.cols))

    def hstack(self, *others: "IntMatrix") -> "IntMatrix":
        return hstack(self, *others)

    def vstack(self, *others: "IntMatrix") -> "IntMatrix":
        return vstack(self, *others)

    # -- dunder ---------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._rows))
        return self._hash

    def __repr__(self) -> str:
        return f"IntMatrix({self.rows}, {self.cols}, {list(self.entries)})"

    def __str__(self) -> str:
        if not self.rows or not self.cols:
            return f"<{self.rows}x{self.cols} empty>"
        width = max(len(str(x)) for x in self.entries)
        return "\n".join(" ".join(str(x).rjust(width) for x in r) for r in self._rows)


def hstack(*mats: IntMatrix) -> IntMatrix:
    rows = mats[0].rows
    for m in mats:
        if m.rows != rows:
            raise ValueError("hstack needs equal row counts")
    return IntMatrix(rows, sum(m.cols for m in mats),
                     [x for i in range(rows) for m in mats for x in m.row(i)])


def vstack(*mats: IntMatrix) -> IntMatrix:
    cols = mats[0].cols
    for m in mats:
        if m.cols != cols:
            raise ValueError("vstack needs equal column counts")
    return IntMatrix(sum(m.rows for m in mats), cols, [x for m in mats for x in m.entries])


def block_diag(*mats: IntMatrix) -> IntMatrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = [[0] * cols for _ in range(rows)]
    r0 = c0 = 0
    for m in mats:
        for i in range(m.rows):
            out[r0 + i][c0:c0 + m.cols] = m.row(i)
        r0 += m.rows
        c0 += m.cols
    return IntMatrix(rows, cols, [x for r in out for x in r])


def kron(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    rows = a.rows * b.rows
    cols = a.cols * b.cols
    out = []
    for i in range(a.rows):
        for k in range(b.rows):
            brow = b.row(k)
            for x in a.row(i):
                out.extend(x * y for y in brow)
    return IntMatrix(rows, cols, out)


def vec(m: IntMatrix) -> tuple[int, ...]:
    """Column-major flattening, so that vec(L X R) = (R^T kron L) vec(X)."""
    return tuple(m[i, j] for j in range(m.cols) for i in range(m.rows))


def unvec(v: Sequence[int], rows: int, cols: int) -> IntMatrix:
    return IntMatrix(rows, cols, [v[j * rows + i] for i in range(rows) for j in range(cols)])


def det(a: IntMatrix) -> int:
    """Bareiss fraction-free determinant."""
    if not a.is_square():
        raise ValueError("determinant of a non-square matrix")
    n = a.rows
    if n == 0:
        return 1
    m = a.tolist()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


# --------------------------------------------------------------------------
# normal forms


def _identity_rows(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _freeze(rows: list[list[int]], ncols: int) -> IntMatrix:
    return IntMatrix(len(rows), ncols, [x for r in rows for x in r])


@lru_cache(maxsize=4096)
def hnf(a: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U @ a == H``, ``U`` unimodular, pivots of ``H``
    positive, entries above each pivot reduced into ``[0, pivot)`` and zero
    rows at the bottom.
    """
    m, n = a.shape
    h = a.tolist()
    u = _identity_rows(m)

    def sub_row(dst: int, src: int, q: int) -> None:
        hs, hd, us, ud = h[src], h[dst], u[src], u[dst]
        for k in range(n):
            if hs[k]:
                hd[k] -= q * hs[k]
        for k in range(m):
            if us[k]:
                ud[k] -= q * us[k]

    r = 0
    for j in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if h[i][j] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(h[i][j]))
            if piv != r:
                h[r], h[piv] = h[piv], h[r]
                u[r], u[piv] = u[piv], u[r]
            clean = True
            for i in range(r + 1, m):
                if h[i][j]:
                    sub_row(i, r, h[i][j] // h[r][j])
                    if h[i][j]:
                        clean = False
            if clean:
                break
        if h[r][j] == 0:
            continue
        if h[r][j] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            q = h[i][j] // h[r][j]
            if q:
                sub_row(i, r, q)
        r += 1
    return _freeze(h, n), _freeze(u, m)


@lru_cache(maxsize=4096)
def snf(a: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form ``(D, U, V)`` with ``U @ a @ V == D``.

    ``D`` is diagonal with nonnegative entries d1 | d2 | ..., zeros last.
    Pivots are chosen by minimal absolute value; that only affects the
    transforms, never ``D``.
    """
    m, n = a.shape
    d = a.tolist()
    u = _identity_rows(m)
    v = _identity_rows(n)

    def row_sub(dst: int, src: int, q: int) -> None:
        ds, dd, us, ud = d[src], d[dst], u[src], u[dst]
        for k in range(n):
            if ds[k]:
                dd[k] -= q * ds[k]
        for k in range(m):
            if us[k]:
                ud[k] -= q * us[k]

    def col_sub(dst: int, src: int, q: int) -> None:
        for r in d:
            if r[src]:
                r[dst] -= q * r[src]
        for r in v:
            if r[src]:
                r[dst] -= q * r[src]

    def swap_rows(i: int, k: int) -> None:
        d[i], d[k] = d[k], d[i]
        u[i], u[k] = u[k], u[i]

    def swap_cols(j: int, k: int) -> None:
        for r in d:
            r[j], r[k] = r[k], r[j]
        for r in v:
            r[j], r[k] = r[k], r[j]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            row = d[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, bi, bj = best
        if bi != t:
            swap_rows(t, bi)
        if bj != t:
            swap_cols(t, bj)
        while True:
            p = d[t][t]
            for i in range(t + 1, m):
                if d[i][t]:
                    row_sub(i, t, d[i][t] // p)
            for j in range(t + 1, n):
                if d[t][j]:
                    col_sub(j, t, d[t][j] // p)
            rest = [(abs(d[i][t]), i, t) for i in range(t + 1, m) if d[i][t]]
            rest += [(abs(d[t][j]), t, j) for j in range(t + 1, n) if d[t][j]]
            if rest:
                _, bi, bj = min(rest)
                if bi != t:
                    swap_rows(t, bi)
                if bj != t:
                    swap_cols(t, bj)
                continue
            bad = next((i for i in range(t + 1, m)
                        if any(x % p for x in d[i][t + 1:])), None)
            if bad is None:
                break
            # pull the offending row into the pivot row; the next sweep shrinks the pivot
            row_sub(t, bad, -1)
        if d[t][t] < 0:
            for r in d:
                r[t] = -r[t]
            for r in v:
                r[t] = -r[t]
    return _freeze(d, n), _freeze(u, m), _freeze(v, n)


def diagonal(d: IntMatrix) -> list[int]:
    return [d[i, i] for i in range(min(d.rows, d.cols))]


def rank(a: IntMatrix) -> int:
    return sum(1 for x in diagonal(snf(a)[0]) if x)


def invariant_factors(a: IntMatrix) -> list[int]:
    """Nonzero Smith diagonal entries of ``a``."""
    return [x for x in diagonal(snf(a)[0]) if x]


def solve(a: IntMatrix, b: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Integer solution of ``a x = b``, or ``None`` when none exists."""
    b = tuple(int(x) for x in b)
    if len(b) != a.rows:
        raise ValueError(f"right-hand side has length {len(b)}, matrix has {a.rows} rows")
    d, u, v = snf(a)
    c = u.apply(b)
    y = [0] * a.cols
    for i, ci in enumerate(c):
        di = d[i, i] if i < min(a.rows, a.cols) else 0
        if di == 0:
            if ci != 0:
                return None
        elif ci % di:
            return None
        else:
            y[i] = ci // di
    return v.apply(y)


def solve_matrix(a: IntMatrix, b: IntMatrix) -> Optional[IntMatrix]:
    """Column-by-column solution of ``a X = b``."""
    cols = []
    for j in range(b.cols):
        x = solve(a, b.col(j))
        if x is None:
            return None
        cols.append(x)
    return IntMatrix.from_columns(cols, a.cols)


def kernel_basis(a: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of ``{x : a x = 0}``."""
    d, _, v = snf(a)
    r = sum(1 for x in diagonal(d) if x)
    return v.take_columns(range(r, a.cols))


def lattice_basis(gens: IntMatrix) -> IntMatrix:
    """Basis (as columns, in Hermite form) of the lattice spanned by the columns of ``gens``."""
    h, _ = hnf(gens.T)
    nz = [i for i in range(h.rows) if any(h.row(i))]
    return h.take_rows(nz).T


def unimodular_inverse(u: IntMatrix) -> IntMatrix:
    h, w = hnf(u)
    if h != IntMatrix.identity(u.rows):
        raise ValueError("matrix is not unimodular")
    return w


def in_lattice(basis_hnf_rows: IntMatrix, x: Sequence[int]) -> bool:
    return not any(reduce_mod_hnf(basis_hnf_rows, x))


def reduce_mod_hnf(h: IntMatrix, x: Sequence[int]) -> tuple[int, ...]:
    """Canonical residue of ``x`` modulo the row lattice of the Hermite form ``h``."""
    x = list(x)
    for i in range(h.rows):
        row = h.row(i)
        piv = next((j for j, e in enumerate(row) if e), None)
        if piv is None:
            break
        q = x[piv] // row[piv]
        if q:
            for j in range(piv, len(x)):
                if row[j]:
                    x[j] -= q * row[j]
    return tuple(x)
