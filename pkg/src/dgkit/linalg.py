"""Exact dense linear algebra: row reduction, kernels, solving, quotients.

Matrices are immutable, stored row-major as tuples of tuples of scalars of a
single ambient :class:`~dgkit.field.Field`.  Pivoting always takes the first
nonzero entry in column order, so every result is deterministic.
"""

from __future__ import annotations

from .field import Field


class DimensionMismatch(ValueError):
    pass


class QuotientPrecondition(ValueError):
    """Raised when a map fails to carry cycles/boundaries where required."""

    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness


class Matrix:
    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: Field, entries, cols: int | None = None):
        self.field = field
        self.entries = tuple(tuple(field.of(x) for x in row) for row in entries)
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.rows else (cols or 0)
        if any(len(r) != self.cols for r in self.entries):
            raise DimensionMismatch("ragged rows")

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(field: Field, rows: int, cols: int) -> "Matrix":
        z = field.zero
        return Matrix(field, [[z] * cols for _ in range(rows)], cols=cols)

    @staticmethod
    def identity(field: Field, n: int) -> "Matrix":
        return Matrix(
            field, [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]
        )

    @staticmethod
    def from_columns(field: Field, cols, rows: int | None = None) -> "Matrix":
        cols = list(cols)
        if not cols:
            if rows is None:
                raise DimensionMismatch("row count needed for empty column list")
            return Matrix(field, [[] for _ in range(rows)], cols=0)
        if len(cols[0]) == 0:
            return Matrix(field, [], cols=len(cols))
        n = len(cols[0])
        return Matrix(field, [[c[i] for c in cols] for i in range(n)])

    # -- access --------------------------------------------------------------

    def __getitem__(self, ij):
        return self.entries[ij[0]][ij[1]]

    def row(self, i):
        return self.entries[i]

    def column(self, j):
        return tuple(self.entries[i][j] for i in range(self.rows))

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and other.field == self.field
            and other.entries == self.entries
            and other.rows == self.rows
            and other.cols == self.cols
        )

    def __hash__(self):
        return hash((self.field, self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, {self.entries!r})"

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("shape mismatch in add")
        F = self.field
        return Matrix(
            F,
            [
                [F.add(a, b) for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.entries, other.entries)
            ],
            cols=self.cols,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + other.scale(self.field.neg(self.field.one))

    def scale(self, c) -> "Matrix":
        F = self.field
        c = F.of(c)
        return Matrix(F, [[F.mul(c, x) for x in row] for row in self.entries], cols=self.cols)

    def __neg__(self) -> "Matrix":
        return self.scale(self.field.neg(self.field.one))

    def __mul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.rows}x{self.cols} * {other.rows}x{other.cols}")
        F = self.field
        out = []
        ocols = other.entries
        for r in self.entries:
            row = []
            for j in range(other.cols):
                s = F.zero
                for k, a in enumerate(r):
                    if a != 0:
                        s = F.add(s, F.mul(a, ocols[k][j]))
                row.append(s)
            out.append(row)
        return Matrix(F, out, cols=other.cols)

    def apply(self, vec):
        """Multiply by a column vector given as a sequence; returns a tuple."""
        if len(vec) != self.cols:
            raise DimensionMismatch("vector length mismatch")
        F = self.field
        out = []
        for r in self.entries:
            s = F.zero
            for a, v in zip(r, vec):
                if a != 0 and v != 0:
                    s = F.add(s, F.mul(a, v))
            out.append(s)
        return tuple(out)

    def transpose(self) -> "Matrix":
        return Matrix(self.field, [self.column(j) for j in range(self.cols)], cols=self.rows)

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise DimensionMismatch("hstack row mismatch")
        return Matrix(
            self.field,
            [r1 + r2 for r1, r2 in zip(self.entries, other.entries)],
            cols=self.cols + other.cols,
        )


def _rref_with_transform(A: Matrix):
    """Gauss-Jordan; returns (R, rank, T, pivot column list) with T*A = R."""
    F = A.field
    m = [list(r) for r in A.entries]
    t = [list(r) for r in Matrix.identity(F, A.rows).entries]
    pivots = []
    pr = 0
    for pc in range(A.cols):
        pivot_row = None
        for i in range(pr, A.rows):
            if m[i][pc] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[pr], m[pivot_row] = m[pivot_row], m[pr]
        t[pr], t[pivot_row] = t[pivot_row], t[pr]
        inv = F.inv(m[pr][pc])
        m[pr] = [F.mul(inv, x) for x in m[pr]]
        t[pr] = [F.mul(inv, x) for x in t[pr]]
        for i in range(A.rows):
            if i != pr and m[i][pc] != 0:
                c = m[i][pc]
                m[i] = [F.sub(x, F.mul(c, y)) for x, y in zip(m[i], m[pr])]
                t[i] = [F.sub(x, F.mul(c, y)) for x, y in zip(t[i], t[pr])]
        pivots.append(pc)
        pr += 1
        if pr == A.rows:
            break
    R = Matrix(F, m, cols=A.cols)
    T = Matrix(F, t, cols=A.rows) if A.rows else Matrix.identity(F, 0)
    return R, pr, T, pivots


def row_reduce(A: Matrix):
    """Reduced row-echelon form: (R, rank, T) with T*A = R, T invertible."""
    R, rank, T, _ = _rref_with_transform(A)
    return R, rank, T


def rank(A: Matrix) -> int:
    return _rref_with_transform(A)[1]


def kernel_basis(A: Matrix):
    """Basis of the right null space, as a list of column-vector tuples."""
    F = A.field
    R, rk, _, pivots = _rref_with_transform(A)
    pivot_set = set(pivots)
    free = [j for j in range(A.cols) if j not in pivot_set]
    basis = []
    for j in free:
        v = [F.zero] * A.cols
        v[j] = F.one
        for i, pc in enumerate(pivots):
            v[pc] = F.neg(R[i, j])
        basis.append(tuple(v))
    return basis


def solve(A: Matrix, b):
    """One exact solution of A x = b, or None if b is not in the column space."""
    if len(b) != A.rows:
        raise DimensionMismatch("rhs length mismatch")
    F = A.field
    aug = A.hstack(Matrix(F, [[x] for x in b]) if A.rows else Matrix.zero(F, 0, 1))
    R, _, _, pivots = _rref_with_transform(aug)
    if A.cols in pivots:
        return None
    x = [F.zero] * A.cols
    for i, pc in enumerate(pivots):
        x[pc] = R[i, A.cols]
    return tuple(x)


class LinearSolver:
    """Factor A once to answer many A x = b queries."""

    def __init__(self, A: Matrix):
        self.A = A
        R, rank, T, pivots = _rref_with_transform(A)
        self.rank = rank
        self.pivots = pivots
        self._t_rows = [T.row(i) for i in range(T.rows)]

    def solve(self, b):
        """One exact solution of A x = b, or None if b is outside the span."""
        if len(b) != self.A.rows:
            raise DimensionMismatch("rhs length mismatch")
        F = self.A.field
        y = []
        for row in self._t_rows:
            s = F.zero
            for c, x in zip(row, b):
                if c != 0 and x != 0:
                    s = F.add(s, F.mul(c, x))
            y.append(s)
        if any(v != 0 for v in y[self.rank :]):
            return None
        x = [F.zero] * self.A.cols
        for i, pc in enumerate(self.pivots):
            x[pc] = y[i]
        return tuple(x)


def column_space_basis(A: Matrix):
    """Pivot columns of A: a deterministic basis of the column space."""
    _, _, _, pivots = _rref_with_transform(A)
    return [A.column(j) for j in pivots]


def in_span(field: Field, basis, v):
    """Coordinates of v in span(basis) or None.  basis: list of vectors."""
    if not basis:
        return () if all(x == 0 for x in v) else None
    A = Matrix.from_columns(field, basis)
    return solve(A, v)


def quotient_reps(field: Field, sub_basis, big_basis, dim: int):
    """Representatives in big_basis completing span(sub_basis) to span(big_basis).

    Returns the list of vectors of ``big_basis`` whose classes form a basis of
    span(big)/span(sub).  Deterministic: first independent columns win.
    """
    cols = list(sub_basis) + list(big_basis)
    if not cols:
        return []
    A = Matrix.from_columns(field, cols, rows=dim)
    _, _, _, pivots = _rref_with_transform(A)
    k = len(sub_basis)
    return [big_basis[j - k] for j in pivots if j >= k]


def induced_map_on_quotients(f: Matrix, ker_src, im_src, ker_dst, im_dst) -> Matrix:
    """Matrix of the map induced by f on span(ker)/span(im), both sides.

    Quotient bases are chosen by :func:`quotient_reps`.  Raises
    :class:`QuotientPrecondition` with a witness vector when f fails to map
    cycles to cycles or boundaries to boundaries.
    """
    F = f.field
    for v in im_src:
        w = f.apply(v)
        if in_span(F, list(im_dst), w) is None:
            raise QuotientPrecondition("boundary not mapped into boundaries", v)
    for v in ker_src:
        w = f.apply(v)
        if in_span(F, list(ker_dst), w) is None:
            raise QuotientPrecondition("cycle not mapped into cycles", v)
    reps_src = quotient_reps(F, im_src, ker_src, f.cols)
    reps_dst = quotient_reps(F, im_dst, ker_dst, f.rows)
    dst_cols = list(im_dst) + list(reps_dst)
    out_cols = []
    for v in reps_src:
        w = f.apply(v)
        if dst_cols:
            coords = solve(Matrix.from_columns(F, dst_cols, rows=f.rows), w)
        else:
            coords = () if all(x == 0 for x in w) else None
        if coords is None:
            raise QuotientPrecondition("image leaves the destination cycle space", v)
        out_cols.append(tuple(coords[len(im_dst):]))
    return Matrix.from_columns(F, out_cols, rows=len(reps_dst))
