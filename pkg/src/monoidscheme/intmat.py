"""Exact linear algebra over the integers.

Everything here works with arbitrary-precision Python ints; there is no
floating point anywhere.  Matrices are immutable, rectangular, and may have
zero rows or zero columns (both occur constantly: the zero group has an
empty presentation).

The central routine is :func:`smith_normal_form`, which returns unimodular
transforms ``U, V`` and a diagonal ``S`` with ``U @ m @ V == S`` and the
diagonal forming a divisibility chain.  Off-diagonal entries are reduced
modulo the current pivot on every sweep, which keeps intermediate entries
small on the matrix sizes this package produces.

    >>> U, S, V = smith_normal_form(Matrix([[2, 0], [0, 3]]))
    >>> S.rows
    ((1, 0), (0, 6))
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence


class Matrix:
    """Immutable integer matrix with an explicit shape."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, rows: Iterable[Sequence[int]], ncols: Optional[int] = None):
        rows = tuple(tuple(int(x) for x in row) for row in rows)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged rows")
            if ncols is not None and ncols != width:
                raise ValueError("ncols disagrees with row width")
            ncols = width
        elif ncols is None:
            raise ValueError("empty matrix needs an explicit ncols")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", ncols)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @staticmethod
    def zero(nrows: int, ncols: int) -> "Matrix":
        return Matrix([[0] * ncols for _ in range(nrows)], ncols)

    @staticmethod
    def identity(n: int) -> "Matrix":
        return Matrix([[int(i == j) for j in range(n)] for i in range(n)], n)

    @staticmethod
    def from_cols(cols: Sequence[Sequence[int]], nrows: int) -> "Matrix":
        return Matrix(
            [[int(col[i]) for col in cols] for i in range(nrows)], len(cols)
        )

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.rows)

    def cols(self) -> list[tuple[int, ...]]:
        return [self.col(j) for j in range(self.ncols)]

    def transpose(self) -> "Matrix":
        return Matrix.from_cols(self.rows, self.ncols)

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Matrix times column vector."""
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(row, vec)) for row in self.rows)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in matrix product")
        ot = other.transpose().rows
        return Matrix(
            [[sum(a * b for a, b in zip(row, col)) for col in ot] for row in self.rows],
            other.ncols,
        )

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return Matrix(
            [r1 + r2 for r1, r2 in zip(self.rows, other.rows)],
            self.ncols + other.ncols,
        )

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch")
        return Matrix(self.rows + other.rows, self.ncols)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.rows for x in row)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.ncols, self.rows))

    def __repr__(self):
        return f"Matrix({list(map(list, self.rows))!r}, ncols={self.ncols})"


def _round_div(a: int, b: int) -> int:
    """Quotient q minimizing |a - q*b|; keeps SNF entries small."""
    q, r = divmod(a, b)
    if 2 * abs(r) > abs(b):
        q += 1
    return q


def smith_normal_form(m: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Return unimodular U, V and diagonal S with ``U @ m @ V == S``.

    The diagonal of S is nonnegative and forms a divisibility chain
    d1 | d2 | ... (zeros, which everything divides, come last).  Total on
    all integer matrices, including empty ones.
    """
    r, c = m.nrows, m.ncols
    a = [list(row) for row in m.rows]
    u = [[int(i == j) for j in range(r)] for i in range(r)]
    v = [[int(i == j) for j in range(c)] for i in range(c)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row[dst] += q * row[src]
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    def find_pivot(t):
        best = None
        for i in range(t, r):
            for j in range(t, c):
                x = a[i][j]
                if x != 0 and (best is None or abs(x) < abs(a[best[0]][best[1]])):
                    best = (i, j)
                    if abs(x) == 1:
                        return best
        return best

    t = 0
    while t < min(r, c):
        pos = find_pivot(t)
        if pos is None:
            break
        swap_rows(t, pos[0])
        swap_cols(t, pos[1])
        while True:
            # clear column t, reducing entries modulo the pivot each pass
            dirty = False
            for i in range(r):
                if i != t and a[i][t] != 0:
                    q = _round_div(a[i][t], a[t][t])
                    add_row(i, t, -q)
                    if a[i][t] != 0:
                        # remainder is smaller than the pivot: promote it
                        swap_rows(i, t)
                        dirty = True
            if dirty:
                continue
            for j in range(c):
                if j != t and a[t][j] != 0:
                    q = _round_div(a[t][j], a[t][t])
                    add_col(j, t, -q)
                    if a[t][j] != 0:
                        swap_cols(j, t)
                        dirty = True
                        break
            if dirty:
                continue
            # row and column are clean; enforce pivot | submatrix
            pivot = a[t][t]
            offender = None
            for i in range(t + 1, r):
                for j in range(t + 1, c):
                    if a[i][j] % pivot != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(t, offender, 1)
        if a[t][t] < 0:
            negate_row(t)
        t += 1

    return Matrix(u, r), Matrix(a, c), Matrix(v, c)


def snf_diagonal(m: Matrix) -> list[int]:
    """Just the diagonal invariants of the Smith form."""
    _, s, _ = smith_normal_form(m)
    return [s.rows[i][i] for i in range(min(s.nrows, s.ncols))]


def det(m: Matrix) -> int:
    """Determinant via fraction-free Bareiss elimination."""
    if m.nrows != m.ncols:
        raise ValueError("determinant of a non-square matrix")
    n = m.nrows
    if n == 0:
        return 1
    a = [list(row) for row in m.rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def invert_unimodular(m: Matrix) -> Matrix:
    """Inverse of a matrix with determinant +-1."""
    u, s, v = smith_normal_form(m)
    if any(s.rows[i][i] != 1 for i in range(min(s.nrows, s.ncols))) or m.nrows != m.ncols:
        raise ValueError("matrix is not unimodular")
    return v @ u


def solve(m: Matrix, b: Sequence[int]) -> Optional[tuple[int, ...]]:
    """One integer solution x of ``m @ x == b``, or None if there is none."""
    if len(b) != m.nrows:
        raise ValueError("rhs length mismatch")
    u, s, v = smith_normal_form(m)
    ub = u.apply(b)
    y = [0] * m.ncols
    for i in range(m.nrows):
        d = s.rows[i][i] if i < min(m.nrows, m.ncols) else 0
        if d == 0:
            if ub[i] != 0:
                return None
        else:
            if ub[i] % d != 0:
                return None
            y[i] = ub[i] // d
    return v.apply(y)


def solve_matrix(m: Matrix, b: Matrix) -> Optional[Matrix]:
    """Columnwise integer solve of ``m @ X == b``."""
    if b.nrows != m.nrows:
        raise ValueError("shape mismatch")
    cols = []
    for j in range(b.ncols):
        x = solve(m, b.col(j))
        if x is None:
            return None
        cols.append(x)
    return Matrix.from_cols(cols, m.ncols)


def kernel_basis(m: Matrix) -> Matrix:
    """Columns form a basis of the full integer kernel lattice of m.

    The kernel of an integer matrix is saturated, so this basis spans
    exactly the set of integer solutions of ``m @ x == 0``.
    """
    _, s, v = smith_normal_form(m)
    cols = []
    for j in range(m.ncols):
        d = s.rows[j][j] if j < min(s.nrows, s.ncols) else 0
        if d == 0:
            cols.append(v.col(j))
    return Matrix.from_cols(cols, m.ncols)


def column_lattice_basis(m: Matrix) -> Matrix:
    """Basis (as columns) of the lattice generated by the columns of m.

    Integer column reduction to echelon form; the result has full column
    rank and spans the same lattice.
    """
    a = [list(row) for row in m.rows]
    nrows, ncols = m.nrows, m.ncols
    t = 0
    for r in range(nrows):
        if t >= ncols:
            break
        while True:
            pivot_j = None
            for j in range(t, ncols):
                if a[r][j] != 0 and (
                    pivot_j is None or abs(a[r][j]) < abs(a[r][pivot_j])
                ):
                    pivot_j = j
            if pivot_j is None:
                break
            for row in a:
                row[t], row[pivot_j] = row[pivot_j], row[t]
            done = True
            for j in range(t + 1, ncols):
                if a[r][j] != 0:
                    q = a[r][j] // a[r][t]
                    for row in a:
                        row[j] -= q * row[t]
                    if a[r][j] != 0:
                        done = False
            if done:
                break
        if a[r][t] != 0:
            t += 1
    basis = Matrix(a, ncols)
    return Matrix.from_cols([basis.col(j) for j in range(t)], nrows)


def lattice_contains(generators: Matrix, vec: Sequence[int]) -> bool:
    """Is vec in the lattice spanned by the columns of ``generators``?"""
    return solve(generators, vec) is not None


def lattice_sum(a: Matrix, b: Matrix) -> Matrix:
    """Basis of the lattice spanned by the columns of both matrices."""
    if a.nrows != b.nrows:
        raise ValueError("ambient dimension mismatch")
    return column_lattice_basis(a.hstack(b))


def preimage_lattice(m: Matrix, lattice: Matrix) -> Matrix:
    """Basis of ``{x : m @ x in lattice}`` (columns).

    Computed as the projection of the kernel of the stacked map
    ``(x, t) -> m@x + lattice@t`` onto the x block; the projection of a
    lattice is spanned by the projections of any basis.
    """
    if lattice.nrows != m.nrows:
        raise ValueError("ambient dimension mismatch")
    stacked = m.hstack(lattice)
    ker = kernel_basis(stacked)
    # rows of ker are indexed by the stacked unknowns; keep the x block
    proj = Matrix([ker.rows[i] for i in range(m.ncols)], ker.ncols)
    return column_lattice_basis(proj)
