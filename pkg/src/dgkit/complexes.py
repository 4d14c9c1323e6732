"""Bounded chain complexes of finite-dimensional graded vector spaces.

Indexing is homological throughout: the differential of a complex has degree
-1, suspension raises degree, and ``shift(C, t)`` satisfies
``H_n(shift(C, t)) = H_{n-t}(C)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .field import Field
from .linalg import (
    Matrix,
    column_space_basis,
    induced_map_on_quotients,
    kernel_basis,
)


@dataclass(frozen=True)
class Window:
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty window {self.lo}..{self.hi}")

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def __contains__(self, n: int) -> bool:
        return self.lo <= n <= self.hi

    def intersect(self, other: "Window") -> "Window":
        return Window(max(self.lo, other.lo), min(self.hi, other.hi))

    def __str__(self):
        return f"{self.lo}..{self.hi}"


class GradedSpace:
    """Finite-support assignment of dimensions (and basis labels) to degrees."""

    def __init__(self, dims: dict[int, int], labels: dict[int, tuple] | None = None):
        self.dims = {n: d for n, d in dims.items() if d > 0}
        self.labels = {}
        for n, d in self.dims.items():
            if labels and n in labels:
                if len(labels[n]) != d:
                    raise ValueError(f"label count mismatch in degree {n}")
                self.labels[n] = tuple(labels[n])
            else:
                self.labels[n] = tuple(f"e{n}_{i}" for i in range(d))

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def degrees(self):
        return sorted(self.dims)

    def label(self, n: int, i: int) -> str:
        return self.labels[n][i]

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def min_degree(self):
        return min(self.dims) if self.dims else 0

    def max_degree(self):
        return max(self.dims) if self.dims else 0

    def __eq__(self, other):
        return isinstance(other, GradedSpace) and other.dims == self.dims

    def __repr__(self):
        return f"GradedSpace({self.dims!r})"


@dataclass(frozen=True)
class Violation:
    degree: int
    reason: str
    witness: tuple = ()

    def __bool__(self):
        return False


class Complex:
    """Chain complex: graded space plus degree -1 differential matrices."""

    def __init__(self, field: Field, space: GradedSpace, diffs: dict[int, Matrix]):
        self.field = field
        self.space = space
        self.diffs = {}
        for n, m in diffs.items():
            if m.rows != space.dim(n - 1) or m.cols != space.dim(n):
                raise ValueError(
                    f"d_{n} has shape {m.rows}x{m.cols}, expected "
                    f"{space.dim(n - 1)}x{space.dim(n)}"
                )
            if not m.is_zero():
                self.diffs[n] = m

    def d(self, n: int) -> Matrix:
        m = self.diffs.get(n)
        if m is None:
            return Matrix.zero(self.field, self.space.dim(n - 1), self.space.dim(n))
        return m

    def dim(self, n: int) -> int:
        return self.space.dim(n)

    def degrees(self):
        return self.space.degrees()

    def min_degree(self):
        return self.space.min_degree()

    def max_degree(self):
        return self.space.max_degree()

    def is_zero(self) -> bool:
        return not self.space.dims

    def __eq__(self, other):
        return (
            isinstance(other, Complex)
            and other.field == self.field
            and other.space == self.space
            and all(other.d(n) == self.d(n) for n in set(self.diffs) | set(other.diffs))
        )

    def __repr__(self):
        return f"Complex(dims={self.space.dims!r})"


def zero_complex(field: Field) -> Complex:
    return Complex(field, GradedSpace({}), {})


def single(field: Field, degree: int = 0, dim: int = 1, label: str | None = None) -> Complex:
    labels = {degree: tuple(f"{label}{i}" for i in range(dim))} if label else None
    return Complex(field, GradedSpace({degree: dim}, labels), {})


def validate_complex(C: Complex):
    """Check d*d = 0 everywhere; returns True or a Violation."""
    for n in list(C.diffs):
        prod = C.d(n - 1) * C.d(n)
        if not prod.is_zero():
            for j in range(prod.cols):
                col = prod.column(j)
                if any(x != 0 for x in col):
                    return Violation(n, "d ∘ d != 0", (j, col))
    return True


class ChainMap:
    """Degree-0 map of complexes; commutation with d is checked on demand."""

    def __init__(self, source: Complex, target: Complex, mats: dict[int, Matrix]):
        self.source = source
        self.target = target
        self.mats = {}
        for n, m in mats.items():
            if m.rows != target.dim(n) or m.cols != source.dim(n):
                raise ValueError(f"f_{n} shape {m.rows}x{m.cols} inconsistent")
            if not m.is_zero():
                self.mats[n] = m

    def f(self, n: int) -> Matrix:
        m = self.mats.get(n)
        if m is None:
            return Matrix.zero(self.source.field, self.target.dim(n), self.source.dim(n))
        return m

    def validate(self):
        """True iff f commutes with the differentials in every degree."""
        degrees = set(self.source.space.dims) | set(self.target.space.dims)
        for n in degrees:
            lhs = self.target.d(n) * self.f(n)
            rhs = self.f(n - 1) * self.source.d(n)
            if lhs != rhs:
                return Violation(n, "chain-map square does not commute")
        return True

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self ∘ other (other applied first)."""
        degrees = set(self.target.space.dims) | set(other.source.space.dims)
        return ChainMap(
            other.source,
            self.target,
            {n: self.f(n) * other.f(n) for n in degrees},
        )

    @staticmethod
    def identity(C: Complex) -> "ChainMap":
        return ChainMap(C, C, {n: Matrix.identity(C.field, C.dim(n)) for n in C.degrees()})

    @staticmethod
    def zero(source: Complex, target: Complex) -> "ChainMap":
        return ChainMap(source, target, {})


class Homotopy:
    """Degree +1 map; the homotopy identity is checked by check_homotopy."""

    def __init__(self, source: Complex, target: Complex, mats: dict[int, Matrix]):
        self.source = source
        self.target = target
        self.mats = {}
        for n, m in mats.items():
            if m.rows != target.dim(n + 1) or m.cols != source.dim(n):
                raise ValueError(f"h_{n} shape {m.rows}x{m.cols} inconsistent")
            if not m.is_zero():
                self.mats[n] = m

    def h(self, n: int) -> Matrix:
        m = self.mats.get(n)
        if m is None:
            return Matrix.zero(self.source.field, self.target.dim(n + 1), self.source.dim(n))
        return m

    @staticmethod
    def zero(source: Complex, target: Complex) -> "Homotopy":
        return Homotopy(source, target, {})


def check_homotopy(f: ChainMap, g: ChainMap, h: Homotopy) -> bool:
    """True iff f - g = d h + h d exactly in every degree."""
    degrees = set(f.source.space.dims) | set(f.target.space.dims)
    for n in degrees:
        lhs = f.f(n) - g.f(n)
        rhs = f.target.d(n + 1) * h.h(n) + h.h(n - 1) * f.source.d(n)
        if lhs != rhs:
            return False
    return True


@dataclass
class HomologyData:
    dim: int
    cycles: list
    boundaries: list


def homology_at(C: Complex, n: int) -> HomologyData:
    cycles = kernel_basis(C.d(n))
    boundaries = column_space_basis(C.d(n + 1))
    return HomologyData(len(cycles) - len(boundaries), cycles, boundaries)


def homology(C: Complex, w: Window) -> dict[int, HomologyData]:
    return {n: homology_at(C, n) for n in w.degrees()}


def homology_dims(C: Complex, w: Window) -> dict[int, int]:
    return {n: homology_at(C, n).dim for n in w.degrees()}


def euler_characteristic(C: Complex) -> int:
    return sum((-1) ** n * d for n, d in C.space.dims.items())


def shift(C: Complex, t: int) -> Complex:
    """Suspension power: shift(C, t)_n = C_{n-t}, differential times (-1)^t."""
    if t == 0:
        return C
    dims = {n + t: d for n, d in C.space.dims.items()}
    labels = {n + t: lab for n, lab in C.space.labels.items()}
    sign = C.field.of((-1) ** t)
    diffs = {n + t: m.scale(sign) for n, m in C.diffs.items()}
    return Complex(C.field, GradedSpace(dims, labels), diffs)


def shift_chain_map(f: ChainMap, t: int) -> ChainMap:
    return ChainMap(
        shift(f.source, t), shift(f.target, t), {n + t: m for n, m in f.mats.items()}
    )


def direct_sum(summands: list[Complex], field: Field | None = None) -> Complex:
    """Componentwise direct sum with block-diagonal differential."""
    if not summands:
        if field is None:
            raise ValueError("field needed for an empty direct sum")
        return zero_complex(field)
    F = summands[0].field
    if any(c.field != F for c in summands):
        raise ValueError("mixed fields in direct_sum")
    degrees = sorted({n for c in summands for n in c.space.dims})
    dims = {n: sum(c.dim(n) for c in summands) for n in degrees}
    labels = {
        n: tuple(f"s{i}.{c.space.label(n, j)}" for i, c in enumerate(summands) for j in range(c.dim(n)))
        for n in degrees
    }
    diffs = {}
    for n in degrees:
        rows = []
        row_dim = sum(c.dim(n - 1) for c in summands)
        offset_r = 0
        cols_total = dims[n]
        block = [[F.zero] * cols_total for _ in range(row_dim)]
        offset_c = 0
        for c in summands:
            d = c.d(n)
            for i in range(d.rows):
                for j in range(d.cols):
                    block[offset_r + i][offset_c + j] = d[i, j]
            offset_r += c.dim(n - 1)
            offset_c += c.dim(n)
        diffs[n] = Matrix(F, block, cols=cols_total)
    return Complex(F, GradedSpace(dims, labels), diffs)


def cone(f: ChainMap):
    """Mapping cone with differential [[d_tgt, f], [0, -d_src]].

    Returns (cone complex, inclusion of the target, projection onto the
    suspended source).
    """
    M, N = f.source, f.target
    F = N.field
    degrees = sorted(set(N.space.dims) | {n + 1 for n in M.space.dims})
    dims = {n: N.dim(n) + M.dim(n - 1) for n in degrees}
    labels = {
        n: tuple(f"t.{N.space.label(n, j)}" for j in range(N.dim(n)))
        + tuple(f"s.{M.space.label(n - 1, j)}" for j in range(M.dim(n - 1)))
        for n in degrees
    }
    diffs = {}
    for n in degrees:
        rows_out = N.dim(n - 1) + M.dim(n - 2)
        cols_in = dims[n]
        block = [[F.zero] * cols_in for _ in range(rows_out)]
        dN = N.d(n)
        fm = f.f(n - 1)
        dM = M.d(n - 1)
        for i in range(dN.rows):
            for j in range(dN.cols):
                block[i][j] = dN[i, j]
        for i in range(fm.rows):
            for j in range(fm.cols):
                block[i][N.dim(n) + j] = fm[i, j]
        for i in range(dM.rows):
            for j in range(dM.cols):
                block[N.dim(n - 1) + i][N.dim(n) + j] = F.neg(dM[i, j])
        diffs[n] = Matrix(F, block, cols=cols_in)
    Cn = Complex(F, GradedSpace(dims, labels), diffs)
    incl = ChainMap(
        N,
        Cn,
        {
            n: Matrix(
                F,
                [
                    [F.one if i == j else F.zero for j in range(N.dim(n))]
                    for i in range(Cn.dim(n))
                ],
                cols=N.dim(n),
            )
            for n in N.degrees()
        },
    )
    SM = shift(M, 1)
    proj = ChainMap(
        Cn,
        SM,
        {
            n: Matrix(
                F,
                [
                    [F.one if j == N.dim(n) + i else F.zero for j in range(Cn.dim(n))]
                    for i in range(SM.dim(n))
                ],
                cols=Cn.dim(n),
            )
            for n in Cn.degrees()
        },
    )
    return Cn, incl, proj


@dataclass
class QuasiIsoReport:
    per_degree: dict[int, bool]
    ok: bool
    dims: dict[int, tuple[int, int]]

    def __bool__(self):
        return self.ok


def homology_map(f: ChainMap, n: int) -> Matrix:
    """Matrix of H_n(f) in the canonical quotient bases."""
    src = homology_at(f.source, n)
    dst = homology_at(f.target, n)
    return induced_map_on_quotients(f.f(n), src.cycles, src.boundaries, dst.cycles, dst.boundaries)


def quasi_iso(f: ChainMap, w: Window) -> QuasiIsoReport:
    """Per-degree bijectivity of H_n(f) on the window."""
    per, dims = {}, {}
    from .linalg import rank as _rank

    for n in w.degrees():
        hf = homology_map(f, n)
        dims[n] = (hf.cols, hf.rows)
        per[n] = hf.rows == hf.cols and _rank(hf) == hf.rows
    return QuasiIsoReport(per, all(per.values()), dims)
