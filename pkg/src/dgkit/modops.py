"""Operations on DG modules: A-linear chain maps, shifts, sums, cones, frees.

Suspension convention for left modules: the action on shift(M, t) is twisted
by (-1)^{t|a|}; right actions are untwisted.  Both choices are forced by the
Leibniz rules once the shifted differential is (-1)^t d.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .linalg import Matrix
from .complexes import ChainMap, Homotopy, Violation, check_homotopy
from .dga import DgAlgebra, DgModule, vec_add, vec_scale


class DgModuleMap:
    """A-linear degree-0 chain map between DG modules over one algebra."""

    def __init__(self, source: DgModule, target: DgModule, mats: dict[int, Matrix]):
        if source.side != target.side:
            raise ValueError("side mismatch")
        self.source = source
        self.target = target
        self.mats = {}
        for n, m in mats.items():
            if m.rows != len(target.component(n)) or m.cols != len(source.component(n)):
                raise ValueError(f"f_{n} shape inconsistent")
            if not m.is_zero():
                self.mats[n] = m

    def f(self, n: int) -> Matrix:
        m = self.mats.get(n)
        if m is None:
            return Matrix.zero(
                self.source.field, len(self.target.component(n)), len(self.source.component(n))
            )
        return m

    def chain_map(self) -> ChainMap:
        return ChainMap(self.source.underlying(), self.target.underlying(), self.mats)

    def apply_elem(self, e: dict) -> dict:
        out: dict = {}
        F = self.source.field
        for i, c in e.items():
            n = self.source.deg(i)
            col = self.source.component(n).index(i)
            img = self.f(n).column(col)
            out = vec_add(
                F, out, vec_scale(F, c, self.target.elem_from_component(img, n))
            )
        return out

    def validate(self):
        """Chain-map property plus A-linearity against both action tables."""
        cm = self.chain_map().validate()
        if cm is not True:
            return cm
        A = self.source.algebra
        degrees = set(self.source.degrees()) | set(self.target.degrees())
        for a in range(A.total_dim):
            p = A.deg(a)
            for n in sorted(degrees):
                lhs = self.f(n + p) * self.source.action_matrix(a, n)
                rhs = self.target.action_matrix(a, n) * self.f(n)
                if lhs != rhs:
                    return Violation(n, f"not linear over basis element {A.label(a)}")
        return True

    def compose(self, other: "DgModuleMap") -> "DgModuleMap":
        degrees = set(other.source.degrees()) | set(self.target.degrees())
        return DgModuleMap(
            other.source, self.target, {n: self.f(n) * other.f(n) for n in degrees}
        )

    @staticmethod
    def identity(M: DgModule) -> "DgModuleMap":
        return DgModuleMap(
            M, M, {n: Matrix.identity(M.field, len(M.component(n))) for n in M.degrees()}
        )

    @staticmethod
    def zero(M: DgModule, N: DgModule) -> "DgModuleMap":
        return DgModuleMap(M, N, {})


def module_shift(M: DgModule, t: int) -> DgModule:
    basis = [(f"s{t}.{lab}" if t else lab, d + t) for lab, d in M.basis]
    F = M.field
    diff = {
        i: vec_scale(F, F.of((-1) ** t), e) for i, e in M.diff.items()
    }
    if M.side == "left":
        act = {
            (a, m): vec_scale(F, F.of((-1) ** (t * M.algebra.deg(a))), e)
            for (a, m), e in M.act.items()
        }
    else:
        act = dict(M.act)
    return DgModule(M.algebra, M.side, basis, act, diff, name=f"Σ^{t}{M.name}" if t else M.name)


def module_direct_sum(summands: list[DgModule]) -> DgModule:
    if not summands:
        raise ValueError("empty module sum needs an algebra; use a zero module")
    A = summands[0].algebra
    side = summands[0].side
    basis, act, diff = [], {}, {}
    offset = 0
    for s in summands:
        for lab, d in s.basis:
            basis.append((f"p{offset}.{lab}", d))
        for (a, m), e in s.act.items():
            act[(a, m + offset)] = {k + offset: c for k, c in e.items()}
        for m, e in s.diff.items():
            diff[m + offset] = {k + offset: c for k, c in e.items()}
        offset += s.total_dim
    return DgModule(A, side, basis, act, diff, name="⊕".join(s.name for s in summands))


def zero_module(A: DgAlgebra, side: str = "left") -> DgModule:
    return DgModule(A, side, [], {}, {}, name="0")


def module_cone(f: DgModuleMap):
    """Cone of an A-linear map at module level.

    Basis: target basis followed by suspended source basis.  Returns
    (cone, inclusion of target, projection onto shift(source, 1)).
    """
    M, N = f.source, f.target
    A, F = M.algebra, M.field
    nN = N.total_dim
    basis = [(f"t.{lab}", d) for lab, d in N.basis] + [
        (f"s.{lab}", d + 1) for lab, d in M.basis
    ]
    act = {}
    for (a, m), e in N.act.items():
        act[(a, m)] = dict(e)
    twist = M.side == "left"
    for (a, m), e in M.act.items():
        s = F.of((-1) ** A.deg(a)) if twist else F.one
        act[(a, m + nN)] = {k + nN: F.mul(s, c) for k, c in e.items()}
    diff = {}
    for m, e in N.diff.items():
        diff[m] = dict(e)
    for m in range(M.total_dim):
        e: dict = {}
        for k, c in M.diff.get(m, {}).items():
            e[k + nN] = F.neg(c)
        n = M.deg(m)
        col = M.component(n).index(m)
        img = f.f(n).column(col)
        e = vec_add(F, e, N.elem_from_component(img, n))
        if e:
            diff[m + nN] = e
    C = DgModule(A, M.side, basis, act, diff, name=f"cone({M.name}->{N.name})")
    one = F.one
    incl = DgModuleMap(
        N,
        C,
        {
            n: Matrix(
                F,
                [
                    [one if C.component(n)[i] == N.component(n)[j] else F.zero
                     for j in range(len(N.component(n)))]
                    for i in range(len(C.component(n)))
                ],
                cols=len(N.component(n)),
            )
            for n in N.degrees()
        },
    )
    SM = module_shift(M, 1)
    proj_mats = {}
    for n in C.degrees():
        rows = []
        for i in range(len(SM.component(n))):
            src_global = SM.component(n)[i] + nN  # same ordinal in cone basis
            row = [
                one if C.component(n)[j] == src_global else F.zero
                for j in range(len(C.component(n)))
            ]
            rows.append(row)
        proj_mats[n] = Matrix(F, rows, cols=len(C.component(n)))
    proj = DgModuleMap(C, SM, proj_mats)
    return C, incl, proj


def truncate_below(M, c: int):
    """Good truncation τ_{≥c}: degrees > c kept, degree c replaced by cycles.

    Over a nonnegatively graded algebra this is a sub(bi)module: degree-0
    algebra elements are cycles, so they preserve kernels.  Returns
    (truncated module, list mapping each new basis index to an element of M).
    Homology agrees with M in degrees ≥ c and vanishes below.
    """
    from .linalg import Matrix, kernel_basis, solve
    from .dga import DgBimodule

    F = M.field
    U = M.underlying()
    carriers: list[dict] = []  # new index -> element of M
    new_basis: list[tuple[str, int]] = []
    # degree c: kernel basis of d_c
    comp_c = M.component(c)
    ker = kernel_basis(U.d(c)) if comp_c else []
    ker_mat = Matrix.from_columns(F, ker, rows=len(comp_c)) if comp_c else None
    for i, v in enumerate(ker):
        carriers.append(M.elem_from_component(v, c))
        new_basis.append((f"z{c}_{i}", c))
    old_to_new = {}
    for n in sorted(M.degrees()):
        if n <= c:
            continue
        for g in M.component(n):
            old_to_new[g] = len(carriers)
            carriers.append({g: F.one})
            new_basis.append((M.label(g), n))

    def express(e: dict, deg: int) -> dict:
        """Element of M of degree deg >= c in the new basis."""
        if not e:
            return {}
        if deg > c:
            return {old_to_new[g]: x for g, x in e.items()}
        coords = solve(ker_mat, M.component_vector(e, c))
        if coords is None:
            raise ValueError("truncation: element not a cycle in the cut degree")
        return {j: x for j, x in enumerate(coords) if x != 0}

    diff = {}
    for new_i, carrier in enumerate(carriers):
        deg = new_basis[new_i][1]
        if deg <= c:
            continue  # cycles at the cut degree
        d = M.d_elem(carrier)
        if d and deg - 1 >= c:
            diff[new_i] = express(d, deg - 1)

    def convert_act(table, alg):
        act = {}
        for new_i, carrier in enumerate(carriers):
            deg = new_basis[new_i][1]
            for a in range(alg.total_dim):
                da = alg.deg(a)
                img: dict = {}
                for g, x in carrier.items():
                    for k2, x2 in table.get((a, g), {}).items():
                        s = F.add(img.get(k2, F.zero), F.mul(x, x2))
                        if s == 0:
                            img.pop(k2, None)
                        else:
                            img[k2] = s
                if img and deg + da >= c:
                    e = express(img, deg + da)
                    if e:
                        act[(a, new_i)] = e
        return act

    if isinstance(M, DgBimodule):
        out = DgBimodule(
            M.left_algebra,
            M.right_algebra,
            new_basis,
            convert_act(M.act_left, M.left_algebra),
            convert_act(M.act_right, M.right_algebra),
            diff,
            name=f"τ≥{c}{M.name}",
        )
    else:
        out = DgModule(
            M.algebra,
            M.side,
            new_basis,
            convert_act(M.act, M.algebra),
            diff,
            name=f"τ≥{c}{M.name}",
        )
    return out, carriers


# -- free and semifree modules ------------------------------------------------


@dataclass
class Generator:
    label: str
    degree: int
    d_elem: dict = dc_field(default_factory=dict)  # over free-module indices
    eps: dict = dc_field(default_factory=dict)  # over target-module indices
    stage: int = 0


class FreeModule:
    """Left A-module free on graded generators, with triangular differential.

    Basis elements are pairs (generator, algebra basis element); the global
    index of (g, a) is g * dim(A) + a.  The differential of a generator is an
    arbitrary element of the span of earlier generators, so any semifree
    module can be presented.
    """

    def __init__(self, algebra: DgAlgebra, gens: list[Generator]):
        self.algebra = algebra
        self.gens = list(gens)
        self.module = self._build()

    def index(self, g: int, a: int) -> int:
        return g * self.algebra.total_dim + a

    def split(self, idx: int) -> tuple[int, int]:
        return divmod(idx, self.algebra.total_dim)

    def act_on_elem(self, a_idx: int, e: dict) -> dict:
        """Left-multiply a free-module element by an algebra basis element."""
        A, F = self.algebra, self.algebra.field
        out: dict = {}
        for idx, c in e.items():
            g, b = self.split(idx)
            prod = A.mul.get((a_idx, b), {})
            for b2, c2 in prod.items():
                k = self.index(g, b2)
                s = F.add(out.get(k, F.zero), F.mul(c, c2))
                if s == 0:
                    out.pop(k, None)
                else:
                    out[k] = s
        return out

    def _build(self) -> DgModule:
        A, F = self.algebra, self.algebra.field
        basis = []
        for g, gen in enumerate(self.gens):
            for a in range(A.total_dim):
                basis.append((f"{A.label(a)}·{gen.label}", A.deg(a) + gen.degree))
        act = {}
        for b in range(A.total_dim):
            for g, gen in enumerate(self.gens):
                for a in range(A.total_dim):
                    prod = A.mul.get((b, a), {})
                    e = {self.index(g, a2): c for a2, c in prod.items()}
                    if e:
                        act[(b, self.index(g, a))] = e
        diff = {}
        for g, gen in enumerate(self.gens):
            for a in range(A.total_dim):
                # d(a·g) = d(a)·g + (-1)^{|a|} a·d(g)
                e: dict = {}
                for a2, c in A.diff.get(a, {}).items():
                    e[self.index(g, a2)] = c
                sign = F.of((-1) ** A.deg(a))
                tail = self.act_on_elem(a, gen.d_elem)
                e = vec_add(F, e, vec_scale(F, sign, tail))
                if e:
                    diff[self.index(g, a)] = e
        name = f"free({','.join(g.label for g in self.gens)})"
        return DgModule(A, "left", basis, act, diff, name=name)

    def augmentation(self, target: DgModule) -> DgModuleMap:
        """Extend the generators' eps values A-linearly to a module map."""
        F = self.algebra.field
        M = self.module
        mats = {}
        for n in M.degrees():
            comp = M.component(n)
            cols = []
            for idx in comp:
                g, a = self.split(idx)
                val = target.act_elem({a: F.one}, self.gens[g].eps)
                cols.append(target.component_vector(val, n) if val else
                            tuple([F.zero] * len(target.component(n))))
            mats[n] = Matrix.from_columns(F, cols, rows=len(target.component(n)))
        return DgModuleMap(M, target, mats)
