"""DG algebras, DG (bi)modules, and DGA morphisms as basis-indexed data.

Elements are sparse dicts ``{global basis index: scalar}``.  Structure
constants (multiplication, actions, differentials) are given on basis
elements and extended bilinearly.  All axioms are verified exactly on basis
tuples by the ``validate_*`` functions.

Sign conventions (fixed once, certified by the validators):
  * left Leibniz   d(a m) = d(a) m + (-1)^{|a|} a d(m)
  * right Leibniz  d(m a) = d(m) a + (-1)^{|m|} m d(a)
  * opposite       a *op b = (-1)^{|a||b|} b a
  * graded tensor  (r⊗t)(r'⊗t') = (-1)^{|t||r'|} r r' ⊗ t t'
"""

from __future__ import annotations

from dataclasses import dataclass

from .field import Field
from .linalg import Matrix
from .complexes import Complex, GradedSpace


# -- sparse element helpers ---------------------------------------------------


def vec_add(F: Field, a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        s = F.add(out.get(k, F.zero), v)
        if s == 0:
            out.pop(k, None)
        else:
            out[k] = s
    return out


def vec_scale(F: Field, c, a: dict) -> dict:
    if c == 0:
        return {}
    return {k: F.mul(c, v) for k, v in a.items()}


def vec_sub(F: Field, a: dict, b: dict) -> dict:
    return vec_add(F, a, vec_scale(F, F.neg(F.one), b))


def vec_is_zero(a: dict) -> bool:
    return all(v == 0 for v in a.values())


def bilinear(F: Field, table, a: dict, b: dict) -> dict:
    """Extend a basis-level product (i, j) -> element to elements a, b."""
    out: dict = {}
    for i, ci in a.items():
        for j, cj in b.items():
            c = F.mul(ci, cj)
            if c == 0:
                continue
            out = vec_add(F, out, vec_scale(F, c, table(i, j)))
    return out


def linear(F: Field, table, a: dict) -> dict:
    out: dict = {}
    for i, ci in a.items():
        if ci != 0:
            out = vec_add(F, out, vec_scale(F, ci, table(i)))
    return out


@dataclass(frozen=True)
class AxiomViolation:
    axiom: str
    where: tuple
    detail: str = ""

    def __str__(self):
        loc = ", ".join(str(x) for x in self.where)
        extra = f": {self.detail}" if self.detail else ""
        return f"{self.axiom} fails at ({loc}){extra}"


class _Graded:
    """Shared machinery: graded basis, differential, underlying complex."""

    def __init__(self, field: Field, basis: list[tuple[str, int]], diff: dict[int, dict]):
        self.field = field
        self.basis = list(basis)
        self.diff = {i: dict(e) for i, e in diff.items() if e}
        self._by_degree: dict[int, list[int]] = {}
        for i, (_, d) in enumerate(self.basis):
            self._by_degree.setdefault(d, []).append(i)
        self._complex = None

    def deg(self, i: int) -> int:
        return self.basis[i][1]

    def label(self, i: int) -> str:
        return self.basis[i][0]

    def component(self, n: int) -> list[int]:
        return self._by_degree.get(n, [])

    def degrees(self):
        return sorted(self._by_degree)

    def d_elem(self, a: dict) -> dict:
        return linear(self.field, lambda i: self.diff.get(i, {}), a)

    def elem_degree(self, a: dict):
        degs = {self.deg(i) for i, c in a.items() if c != 0}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous element across degrees {sorted(degs)}")
        return degs.pop()

    def component_vector(self, a: dict, n: int):
        """Coordinates of a degree-n element in the component basis."""
        idx = self.component(n)
        pos = {g: p for p, g in enumerate(idx)}
        v = [self.field.zero] * len(idx)
        for g, c in a.items():
            if c != 0:
                if self.deg(g) != n:
                    raise ValueError("element not concentrated in requested degree")
                v[pos[g]] = c
        return tuple(v)

    def elem_from_component(self, vec, n: int) -> dict:
        idx = self.component(n)
        return {idx[p]: c for p, c in enumerate(vec) if c != 0}

    def underlying(self) -> Complex:
        if self._complex is None:
            dims = {n: len(ix) for n, ix in self._by_degree.items()}
            labels = {n: tuple(self.label(i) for i in ix) for n, ix in self._by_degree.items()}
            diffs = {}
            for n, idx in self._by_degree.items():
                rows = self.component(n - 1)
                if not rows or not idx:
                    continue
                pos = {g: p for p, g in enumerate(rows)}
                F = self.field
                block = [[F.zero] * len(idx) for _ in rows]
                for col, g in enumerate(idx):
                    for tgt, c in self.diff.get(g, {}).items():
                        block[pos[tgt]][col] = c
                diffs[n] = Matrix(F, block, cols=len(idx))
            self._complex = Complex(self.field, GradedSpace(dims, labels), diffs)
        return self._complex

    @property
    def total_dim(self) -> int:
        return len(self.basis)


class DgAlgebra(_Graded):
    """DGA presented by structure constants on a finite graded basis."""

    def __init__(self, field, basis, unit: int, mul: dict, diff: dict, name: str = "A"):
        super().__init__(field, basis, diff)
        self.unit = unit
        self.mul = {ij: dict(e) for ij, e in mul.items() if e}
        self.name = name

    def mul_elem(self, a: dict, b: dict) -> dict:
        return bilinear(self.field, lambda i, j: self.mul.get((i, j), {}), a, b)

    def one(self) -> dict:
        return {self.unit: self.field.one}

    def action_free(self):  # pragma: no cover - debugging aid
        return self.mul

    def __repr__(self):
        return f"DgAlgebra({self.name}, dim={self.total_dim})"


class DgModule(_Graded):
    """One-sided DG module.  ``act[(a, m)]`` is a·m (left) or m·a (right)."""

    def __init__(self, algebra: DgAlgebra, side: str, basis, act: dict, diff: dict, name: str = "M"):
        if side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        super().__init__(algebra.field, basis, diff)
        self.algebra = algebra
        self.side = side
        self.act = {am: dict(e) for am, e in act.items() if e}
        self.name = name
        self._action_mats: dict = {}

    def act_elem(self, a: dict, m: dict) -> dict:
        """Apply an algebra element: a·m (left) or m·a (right)."""
        return bilinear(self.field, lambda i, j: self.act.get((i, j), {}), a, m)

    def action_matrix(self, a_idx: int, n: int) -> Matrix:
        """Matrix of the action of basis element a on the degree-n component."""
        key = (a_idx, n)
        if key not in self._action_mats:
            p = self.algebra.deg(a_idx)
            src = self.component(n)
            dst = self.component(n + p)
            pos = {g: q for q, g in enumerate(dst)}
            F = self.field
            block = [[F.zero] * len(src) for _ in dst]
            for col, m in enumerate(src):
                for tgt, c in self.act.get((a_idx, m), {}).items():
                    block[pos[tgt]][col] = c
            self._action_mats[key] = Matrix(F, block, cols=len(src))
        return self._action_mats[key]

    def __repr__(self):
        return f"DgModule({self.name}, {self.side} over {self.algebra.name}, dim={self.total_dim})"


class DgBimodule(_Graded):
    """DG R-S-bimodule: left R-action and right S-action, compatible."""

    def __init__(self, left_algebra, right_algebra, basis, act_left, act_right, diff, name="M"):
        if left_algebra.field != right_algebra.field:
            raise ValueError("bimodule algebras over different fields")
        super().__init__(left_algebra.field, basis, diff)
        self.left_algebra = left_algebra
        self.right_algebra = right_algebra
        self.act_left = {am: dict(e) for am, e in act_left.items() if e}
        self.act_right = {am: dict(e) for am, e in act_right.items() if e}
        self.name = name

    def left_module(self) -> DgModule:
        return DgModule(
            self.left_algebra, "left", self.basis, self.act_left, self.diff, self.name
        )

    def right_module(self) -> DgModule:
        return DgModule(
            self.right_algebra, "right", self.basis, self.act_right, self.diff, self.name
        )

    def act_left_elem(self, r: dict, m: dict) -> dict:
        return bilinear(self.field, lambda i, j: self.act_left.get((i, j), {}), r, m)

    def act_right_elem(self, s: dict, m: dict) -> dict:
        return bilinear(self.field, lambda i, j: self.act_right.get((i, j), {}), s, m)

    def __repr__(self):
        return (
            f"DgBimodule({self.name}, {self.left_algebra.name}-"
            f"{self.right_algebra.name}, dim={self.total_dim})"
        )


class DgaMorphism:
    """Morphism of DGAs: degree-preserving images of source basis elements."""

    def __init__(self, source: DgAlgebra, target: DgAlgebra, images: dict[int, dict], name="phi"):
        self.source = source
        self.target = target
        self.images = {i: dict(e) for i, e in images.items()}
        self.name = name

    def apply(self, a: dict) -> dict:
        return linear(self.source.field, lambda i: self.images.get(i, {}), a)

    def __repr__(self):
        return f"DgaMorphism({self.name}: {self.source.name} -> {self.target.name})"


# -- validation ---------------------------------------------------------------


def _check_graded_table(obj, table, deg_of_result, kind, violations):
    for key, e in table.items():
        for tgt, c in e.items():
            if c != 0 and obj.deg(tgt) != deg_of_result(key):
                violations.append(
                    AxiomViolation("grading", key, f"{kind} output hits degree {obj.deg(tgt)}")
                )
                break


def validate_dga(A: DgAlgebra) -> list[AxiomViolation]:
    """All DGA axioms, checked exactly on basis tuples.  Empty list = valid."""
    F = A.field
    v: list[AxiomViolation] = []
    if A.deg(A.unit) != 0:
        v.append(AxiomViolation("unit-degree", (A.unit,)))
    _check_graded_table(A, A.mul, lambda ij: A.deg(ij[0]) + A.deg(ij[1]), "mul", v)
    _check_graded_table(A, A.diff, lambda i: A.deg(i) - 1, "d", v)
    if not vec_is_zero(A.d_elem(A.one())):
        v.append(AxiomViolation("d-unit", (A.unit,), "d(1) != 0"))
    n_basis = range(A.total_dim)
    for i in n_basis:
        if A.mul_elem(A.one(), {i: F.one}) != {i: F.one}:
            v.append(AxiomViolation("unit-law", (A.unit, i), "1·a != a"))
        if A.mul_elem({i: F.one}, A.one()) != {i: F.one}:
            v.append(AxiomViolation("unit-law", (i, A.unit), "a·1 != a"))
        if not vec_is_zero(A.d_elem(A.d_elem({i: F.one}))):
            v.append(AxiomViolation("d-squared", (i,)))
    for i in n_basis:
        for j in n_basis:
            a, b = {i: F.one}, {j: F.one}
            lhs = A.d_elem(A.mul_elem(a, b))
            rhs = vec_add(
                F,
                A.mul_elem(A.d_elem(a), b),
                vec_scale(F, F.of((-1) ** A.deg(i)), A.mul_elem(a, A.d_elem(b))),
            )
            if lhs != rhs:
                v.append(AxiomViolation("leibniz", (i, j)))
    for i in n_basis:
        for j in n_basis:
            ab = A.mul_elem({i: F.one}, {j: F.one})
            for k in n_basis:
                lhs = A.mul_elem(ab, {k: F.one})
                rhs = A.mul_elem({i: F.one}, A.mul_elem({j: F.one}, {k: F.one}))
                if lhs != rhs:
                    v.append(AxiomViolation("associativity", (i, j, k)))
    return v


def _validate_one_sided(M: DgModule, act_elem, side: str, v: list[AxiomViolation]):
    A, F = M.algebra, M.field
    _check_graded_table(
        M, M.act, lambda am: A.deg(am[0]) + M.deg(am[1]), f"{side}-action", v
    )
    _check_graded_table(M, M.diff, lambda i: M.deg(i) - 1, "d", v)
    for m in range(M.total_dim):
        e = {m: F.one}
        if act_elem(A.one(), e) != e:
            v.append(AxiomViolation("unit-action", (A.unit, m)))
        if not vec_is_zero(M.d_elem(M.d_elem(e))):
            v.append(AxiomViolation("d-squared", (m,)))
    for i in range(A.total_dim):
        ai = {i: F.one}
        for m in range(M.total_dim):
            em = {m: F.one}
            lhs = M.d_elem(act_elem(ai, em))
            if side == "left":
                rhs = vec_add(
                    F,
                    act_elem(A.d_elem(ai), em),
                    vec_scale(F, F.of((-1) ** A.deg(i)), act_elem(ai, M.d_elem(em))),
                )
            else:
                rhs = vec_add(
                    F,
                    act_elem(ai, M.d_elem(em)),
                    vec_scale(F, F.of((-1) ** M.deg(m)), act_elem(A.d_elem(ai), em)),
                )
            if lhs != rhs:
                v.append(AxiomViolation(f"leibniz-{side}", (i, m)))
    for i in range(A.total_dim):
        for j in range(A.total_dim):
            ai, aj = {i: F.one}, {j: F.one}
            prod = A.mul_elem(ai, aj)
            for m in range(M.total_dim):
                em = {m: F.one}
                lhs = act_elem(prod, em)
                if side == "left":
                    rhs = act_elem(ai, act_elem(aj, em))
                else:
                    # m·(ab) = (m·a)·b
                    rhs = act_elem(aj, act_elem(ai, em))
                if lhs != rhs:
                    v.append(AxiomViolation(f"associativity-{side}-action", (i, j, m)))


def validate_module(M) -> list[AxiomViolation]:
    """Axioms for DgModule or DgBimodule; empty list = valid."""
    v: list[AxiomViolation] = []
    if isinstance(M, DgBimodule):
        left = M.left_module()
        right = M.right_module()
        _validate_one_sided(left, left.act_elem, "left", v)
        _validate_one_sided(right, right.act_elem, "right", v)
        F = M.field
        for r in range(M.left_algebra.total_dim):
            for s in range(M.right_algebra.total_dim):
                er, es = {r: F.one}, {s: F.one}
                for m in range(M.total_dim):
                    em = {m: F.one}
                    lhs = M.act_left_elem(er, M.act_right_elem(es, em))
                    rhs = M.act_right_elem(es, M.act_left_elem(er, em))
                    if lhs != rhs:
                        v.append(AxiomViolation("bimodule-compatibility", (r, s, m)))
        return v
    _validate_one_sided(M, M.act_elem, M.side, v)
    return v


def validate_morphism(phi: DgaMorphism) -> list[AxiomViolation]:
    R, S, F = phi.source, phi.target, phi.source.field
    v: list[AxiomViolation] = []
    for i, e in phi.images.items():
        d = S.elem_degree(e)
        if d is not None and d != R.deg(i):
            v.append(AxiomViolation("degree-preservation", (i,)))
    if phi.apply(R.one()) != S.one():
        v.append(AxiomViolation("unit-preservation", (R.unit,)))
    for i in range(R.total_dim):
        ei = {i: F.one}
        if phi.apply(R.d_elem(ei)) != S.d_elem(phi.apply(ei)):
            v.append(AxiomViolation("d-commutation", (i,)))
        for j in range(R.total_dim):
            ej = {j: F.one}
            lhs = phi.apply(R.mul_elem(ei, ej))
            rhs = S.mul_elem(phi.apply(ei), phi.apply(ej))
            if lhs != rhs:
                v.append(AxiomViolation("multiplicativity", (i, j)))
    return v


# -- constructions ------------------------------------------------------------


def opposite(A: DgAlgebra) -> DgAlgebra:
    """Opposite DGA: a *op b = (-1)^{|a||b|} b a."""
    F = A.field
    mul = {}
    for i in range(A.total_dim):
        for j in range(A.total_dim):
            e = A.mul.get((j, i), {})
            if e:
                mul[(i, j)] = vec_scale(F, F.of((-1) ** (A.deg(i) * A.deg(j))), e)
    return DgAlgebra(F, A.basis, A.unit, mul, A.diff, name=f"{A.name}^op")


def tensor_algebra(R: DgAlgebra, T: DgAlgebra, name: str | None = None) -> DgAlgebra:
    """Graded tensor product DGA R ⊗ T over the ground field."""
    if R.field != T.field:
        raise ValueError("mixed fields")
    F = R.field
    pairs = [(i, j) for i in range(R.total_dim) for j in range(T.total_dim)]
    index = {p: n for n, p in enumerate(pairs)}
    basis = [
        (f"{R.label(i)}⊗{T.label(j)}", R.deg(i) + T.deg(j)) for (i, j) in pairs
    ]

    def emb(er: dict, et: dict, sign) -> dict:
        out = {}
        for i, ci in er.items():
            for j, cj in et.items():
                c = F.mul(F.mul(ci, cj), sign)
                if c != 0:
                    out[index[(i, j)]] = F.add(out.get(index[(i, j)], F.zero), c)
        return {k: c for k, c in out.items() if c != 0}

    mul = {}
    for a, (i1, j1) in enumerate(pairs):
        for b, (i2, j2) in enumerate(pairs):
            sign = F.of((-1) ** (T.deg(j1) * R.deg(i2)))
            e = emb(R.mul.get((i1, i2), {}), T.mul.get((j1, j2), {}), sign)
            if e:
                mul[(a, b)] = e
    diff = {}
    for a, (i, j) in enumerate(pairs):
        e = vec_add(
            F,
            emb(R.diff.get(i, {}), {j: F.one}, F.one),
            emb({i: F.one}, T.diff.get(j, {}), F.of((-1) ** R.deg(i))),
        )
        if e:
            diff[a] = e
    unit = index[(R.unit, T.unit)]
    return DgAlgebra(F, basis, unit, mul, diff, name=name or f"{R.name}⊗{T.name}")


def enveloping(R: DgAlgebra, S: DgAlgebra) -> DgAlgebra:
    """R ⊗ S^op: left modules over it are exactly R-S-bimodules."""
    return tensor_algebra(R, opposite(S), name=f"{R.name}^e({S.name})")


def right_to_left_op(M: DgModule, Aop: DgAlgebra | None = None) -> DgModule:
    """Right A-module as a left A^op-module: a·m := (-1)^{|a||m|} m a."""
    if M.side != "right":
        raise ValueError("expected a right module")
    A, F = M.algebra, M.field
    Aop = Aop or opposite(A)
    act = {}
    for (i, m), e in M.act.items():
        s = F.of((-1) ** (A.deg(i) * M.deg(m)))
        act[(i, m)] = vec_scale(F, s, e)
    return DgModule(Aop, "left", M.basis, act, M.diff, name=M.name)


def left_op_to_right(M: DgModule, A: DgAlgebra) -> DgModule:
    """Inverse of :func:`right_to_left_op` (A is the original algebra)."""
    if M.side != "left":
        raise ValueError("expected a left module")
    F = M.field
    act = {}
    for (i, m), e in M.act.items():
        s = F.of((-1) ** (A.deg(i) * M.deg(m)))
        act[(i, m)] = vec_scale(F, s, e)
    return DgModule(A, "right", M.basis, act, M.diff, name=M.name)


def bimodule_to_env_module(M: DgBimodule, E: DgAlgebra | None = None) -> DgModule:
    """R-S-bimodule as a left module over enveloping(R, S).

    (r⊗s)·m = (-1)^{|s||m|} r (m s).  Inverse: :func:`env_module_to_bimodule`.
    """
    R, S, F = M.left_algebra, M.right_algebra, M.field
    E = E or enveloping(R, S)
    nS = S.total_dim
    act = {}
    for a in range(E.total_dim):
        i, j = divmod(a, nS)
        for m in range(M.total_dim):
            ms = M.act_right_elem({j: F.one}, {m: F.one})
            e = M.act_left_elem({i: F.one}, ms)
            e = vec_scale(F, F.of((-1) ** (S.deg(j) * M.deg(m))), e)
            if e:
                act[(a, m)] = e
    return DgModule(E, "left", M.basis, act, M.diff, name=M.name)


def env_module_to_bimodule(X: DgModule, R: DgAlgebra, S: DgAlgebra) -> DgBimodule:
    """Left enveloping(R,S)-module back to an R-S-bimodule."""
    F = X.field
    nS = S.total_dim
    act_left, act_right = {}, {}
    for m in range(X.total_dim):
        em = {m: F.one}
        for i in range(R.total_dim):
            e = X.act_elem({i * nS + S.unit: F.one}, em)
            if e:
                act_left[(i, m)] = e
        for j in range(S.total_dim):
            e = X.act_elem({R.unit * nS + j: F.one}, em)
            e = vec_scale(F, F.of((-1) ** (S.deg(j) * X.deg(m))), e)
            if e:
                act_right[(j, m)] = e
    return DgBimodule(R, S, X.basis, act_left, act_right, X.diff, name=X.name)


def restrict_scalars(M: DgModule, phi: DgaMorphism) -> DgModule:
    """View a module over S as a module over R via phi: R -> S."""
    if M.algebra is not phi.target and M.algebra.basis != phi.target.basis:
        raise ValueError("module is not over the morphism target")
    F = M.field
    act = {}
    for i in range(phi.source.total_dim):
        img = phi.apply({i: F.one})
        for m in range(M.total_dim):
            e = M.act_elem(img, {m: F.one})
            if e:
                act[(i, m)] = e
    return DgModule(phi.source, M.side, M.basis, act, M.diff, name=M.name)


def left_regular(A: DgAlgebra) -> DgModule:
    act = {ij: e for ij, e in A.mul.items()}
    return DgModule(A, "left", A.basis, act, A.diff, name=A.name)


def right_regular(A: DgAlgebra) -> DgModule:
    # act[(a, m)] = m·a
    act = {}
    for (i, j), e in A.mul.items():
        act[(j, i)] = e
    return DgModule(A, "right", A.basis, act, A.diff, name=A.name)


def regular_bimodule(A: DgAlgebra) -> DgBimodule:
    act_left = dict(A.mul)
    act_right = {(j, i): e for (i, j), e in A.mul.items()}
    return DgBimodule(A, A, A.basis, act_left, act_right, A.diff, name=A.name)


def bimodule_from_morphism(phi: DgaMorphism) -> DgBimodule:
    """The R-S-bimodule S with left R-action through phi: R -> S."""
    S, F = phi.target, phi.target.field
    act_left = {}
    for i in range(phi.source.total_dim):
        img = phi.apply({i: F.one})
        for m in range(S.total_dim):
            e = S.mul_elem(img, {m: F.one})
            if e:
                act_left[(i, m)] = e
    act_right = {(j, i): e for (i, j), e in S.mul.items()}
    return DgBimodule(phi.source, S, S.basis, act_left, act_right, S.diff, name=S.name)
