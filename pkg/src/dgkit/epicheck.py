"""Cross-checking the equivalent characterizations of homological epimorphisms.

The equivalence theorem quantifies over all DG modules; here every quantified
condition is evaluated over an explicit finite test family and an explicit
homological-degree window, both recorded in the verdicts.  The report's claim
is falsification power plus mutual consistency of the checkable conditions,
never certified universal quantification.
"""

import random
from dataclasses import dataclass, field as dc_field

from .complexes import ChainMap, Window, homology_dims
from .dga import (
    DgAlgebra,
    DgBimodule,
    DgModule,
    DgaMorphism,
    bimodule_from_morphism,
    left_op_to_right,
    left_regular,
    opposite,
    restrict_scalars,
    right_regular,
    right_to_left_op,
    validate_dga,
    validate_module,
)
from .derived import (
    _bot,
    _top,
    _truncated_dual,
    counit_map,
    dualize,
    ext_table,
    is_derived_iso,
    multiplication_map,
    tor_table,
    unit_map,
)
from .homtensor import endomorphism_dga, hom_over, tensor_over
from .linalg import Matrix, kernel_basis
from .modops import FreeModule, Generator, DgModuleMap, module_cone, module_shift
from .resolutions import (
    BuildTreeWitness,
    Leaf,
    resolve_right_module,
    semifree_resolution,
    semifree_resolution_bimodule,
    verify_build_tree,
)


# -- verdicts and reports ------------------------------------------------------


HOLDS = "holds-on-window"
FAILS = "fails"
UNCHECKABLE = "not-directly-checkable"


@dataclass
class ConditionVerdict:
    condition: object  # 1..6, "translation", or "compact-endpoint"
    status: str  # HOLDS | FAILS | UNCHECKABLE
    window: Window | None = None
    degree: int | None = None  # first failing degree, when status is FAILS
    dims: tuple | None = None  # (source dim, target dim) at that degree
    members: list = dc_field(default_factory=list)  # per-member detail
    note: str = ""

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    @property
    def checkable(self) -> bool:
        return self.status != UNCHECKABLE

    def summary(self) -> str:
        if self.status == FAILS:
            return (
                f"({self.condition}) fails at degree {self.degree}: "
                f"dims {self.dims[0]} vs {self.dims[1]}"
            )
        return f"({self.condition}) {self.status}"


@dataclass
class TestFamily:
    seed: int
    left: list  # (description, left DG S-module)
    right: list  # (description, right DG S-module)

    def __len__(self):
        return len(self.left)


@dataclass
class ConsistencyReport:
    verdicts: list
    agreement: bool
    disagreement: str | None = None
    note: str = ""

    def verdict(self, condition) -> ConditionVerdict:
        for v in self.verdicts:
            if v.condition == condition:
                return v
        raise KeyError(condition)

    @property
    def is_epi(self) -> bool:
        return self.agreement and all(v.holds for v in self.verdicts if v.checkable)


@dataclass
class DwyerGreenleesReport:
    endomorphism_algebra: DgAlgebra
    acting_algebra: DgAlgebra  # the opposite of the endomorphism DGA
    degreewise_iso: bool
    endpoint: ConditionVerdict
    note: str = ""


@dataclass
class AggregateReport:
    instances: list  # (description, ConsistencyReport)
    agreement: bool
    first_disagreement: str | None = None


def _require_chain(cm: ChainMap, what: str):
    ok = cm.validate()
    if ok is not True:
        raise ValueError(f"{what} is not a chain map: {ok.reason} (degree {ok.degree})")


def _first_fail(rep, window: Window):
    for n in window.degrees():
        if rep.per_degree.get(n) is False:
            return n, (rep.source_h.get(n, 0), rep.target_h.get(n, 0))
    return None, None


def _verdict(condition, rep, window: Window) -> ConditionVerdict:
    if rep.ok:
        return ConditionVerdict(condition, HOLDS, window)
    n, dims = _first_fail(rep, window)
    return ConditionVerdict(condition, FAILS, window, degree=n, dims=dims)


def _quantified(condition, window: Window, items) -> ConditionVerdict:
    """Fold per-member iso reports into one verdict with member detail."""
    members, fail = [], None
    for desc, rep in items:
        if rep.ok:
            members.append((desc, "holds"))
        else:
            n, dims = _first_fail(rep, window)
            members.append((desc, f"fails at degree {n}: dims {dims[0]} vs {dims[1]}"))
            if fail is None:
                fail = (n, dims)
    if fail is None:
        return ConditionVerdict(condition, HOLDS, window, members=members)
    return ConditionVerdict(
        condition, FAILS, window, degree=fail[0], dims=fail[1], members=members
    )


def _dims_quantified(condition, window: Window, items) -> ConditionVerdict:
    """Same, for dims-table comparisons: items = (desc, source table, target table)."""
    members, fail = [], None
    for desc, a, b in items:
        bad = next((n for n in sorted(set(a) | set(b)) if a.get(n, 0) != b.get(n, 0)), None)
        if bad is None:
            members.append((desc, "holds"))
        else:
            members.append(
                (desc, f"fails at degree {bad}: dims {a.get(bad, 0)} vs {b.get(bad, 0)}")
            )
            if fail is None:
                fail = (bad, (a.get(bad, 0), b.get(bad, 0)))
    if fail is None:
        return ConditionVerdict(condition, HOLDS, window, members=members)
    return ConditionVerdict(
        condition, FAILS, window, degree=fail[0], dims=fail[1], members=members
    )


# -- test families -------------------------------------------------------------


def _random_cycle(rng: random.Random, M: DgModule, n: int) -> dict:
    """A deterministic pseudo-random cycle of degree n, possibly zero."""
    C = M.underlying()
    if C.dim(n) == 0:
        return {}
    ker = kernel_basis(C.d(n))
    if not ker:
        return {}
    F = M.field
    comp = M.component(n)
    out: dict = {}
    for vec in ker:
        c = rng.randint(-2, 2)
        if c == 0:
            continue
        for i, x in enumerate(vec):
            if x != 0:
                s = F.add(out.get(comp[i], F.zero), F.mul(F.of(c), x))
                if s == 0:
                    out.pop(comp[i], None)
                else:
                    out[comp[i]] = s
    return out


def _random_semifree(A: DgAlgebra, rng: random.Random, label: str) -> DgModule:
    """Free module on 2-3 generators whose differentials are earlier cycles."""
    gens = [Generator(f"{label}0", rng.randint(0, 1))]
    for i in range(rng.randint(1, 2)):
        part = FreeModule(A, gens).module
        deg = rng.randint(1, 3)
        gens.append(Generator(f"{label}{i + 1}", deg, d_elem=_random_cycle(rng, part, deg - 1)))
    return FreeModule(A, gens).module


def _random_cone(A: DgAlgebra, rng: random.Random, label: str) -> DgModule:
    """Cone of a random chain map between free modules on one generator."""
    F = A.field
    sdeg = rng.randint(0, 1)
    fs = FreeModule(A, [Generator(f"{label}s", sdeg)])
    ft = FreeModule(A, [Generator(f"{label}t", 0)])
    src, tgt = fs.module, ft.module
    img = _random_cycle(rng, tgt, sdeg)  # image of the generator: a cycle
    mats = {}
    for n in src.degrees():
        cols = []
        for idx in src.component(n):
            _, a = fs.split(idx)
            val = tgt.act_elem({a: F.one}, img) if img else {}
            cols.append(tgt.component_vector(val, n))
        mats[n] = Matrix.from_columns(F, cols, rows=tgt.underlying().dim(n))
    f = DgModuleMap(src, tgt, mats)
    ok = f.validate()
    if ok is not True:
        raise AssertionError(f"random cone map invalid: {ok.reason}")
    C, _, _ = module_cone(f)
    return C


def _family_side(A: DgAlgebra, rng: random.Random, size: int, tag: str):
    out = [
        (f"{tag}", left_regular(A)),
        (f"{tag}[1]", module_shift(left_regular(A), 1)),
    ]
    i = 0
    while len(out) < size:
        if i % 2 == 0:
            m = _random_cone(A, rng, f"{tag}c{i}")
            desc = f"cone{i}"
        else:
            m = _random_semifree(A, rng, f"{tag}m{i}")
            desc = f"semifree{i}"
        bad = validate_module(m)
        if bad:
            raise AssertionError(f"generated family member invalid: {bad[0].axiom}")
        out.append((desc, m))
        i += 1
    return out[:size]


def generate_test_family(S: DgAlgebra, seed: int, size: int = 6) -> TestFamily:
    """Deterministic family of left and right DG S-modules; always {S, ΣS}."""
    size = max(size, 2)
    rng = random.Random(seed)
    left = _family_side(S, rng, size, "S")
    Sop = opposite(S)
    right_as_op = _family_side(Sop, rng, size, "S°")
    right = []
    for desc, m in right_as_op:
        r = left_op_to_right(m, S)
        bad = validate_module(r)
        if bad:
            raise AssertionError(f"right family member invalid: {bad[0].axiom}")
        right.append((desc.replace("S°", "S_r"), r))
    return TestFamily(seed, left, right)


# -- the six bimodule conditions ----------------------------------------------


def _condition3_map(R, S, M, Nr, Nl, D, max_generators) -> ChainMap:
    """(N_r ⊗^L_S Z) ⊗^L_R (M ⊗^L_S N') → N_r ⊗^L_S N' at chain level.

    On representatives: pr ⊗ z ⊗ q ⊗ p ↦ pr ⊗ z(q)·p; the evaluation
    pairing is sign-free under this library's conventions and no basis
    elements change order, so no Koszul sign appears.
    """
    F = M.field
    # all resolutions well past the window: their top junk cannot reach it
    # even against the lowest true classes of the truncated dual (≥ -D-1)
    Ddeep = 2 * D + 2 + max(0, _top(M)) + max(0, -_bot(M))
    dual = dualize(M, Ddeep, max_generators)
    Zt, ev = _truncated_dual(dual, -D - 1)
    Q = dual.Q
    P = semifree_resolution(Nl, Ddeep, max_generators).module
    _, Pr, _ = resolve_right_module(Nr, Ddeep, max_generators)
    Ta = tensor_over(S, Pr, Zt)  # outer right R retained
    T2 = tensor_over(S, Q, P)  # outer left R retained
    Tab = tensor_over(R, Ta.structure(), T2.structure())
    Tc = tensor_over(S, Pr, P)
    mats = {}
    for d in Tab.complex.degrees():
        cols = []
        for pos in range(Tab.complex.dim(d)):
            a_idx, t_idx = Tab.section(d, pos)
            da, pa = Ta.struct_pair(a_idx)
            pr_idx, z_idx = Ta.section(da, pa)
            dt, pt = T2.struct_pair(t_idx)
            q_idx, p_idx = T2.section(dt, pt)
            zq = ev(z_idx, {q_idx: F.one})  # element of S
            val = P.act_elem(zq, {p_idx: F.one}) if zq else {}
            col = [F.zero] * Tc.complex.dim(d)
            if val:
                ground = {(pr_idx, k): c for k, c in val.items()}
                for p2, c in Tc.project_elem(ground, d).items():
                    col[p2] = F.add(col[p2], c)
            cols.append(tuple(col))
        mats[d] = Matrix.from_columns(F, cols, rows=Tc.complex.dim(d))
    return ChainMap(Tab.complex, Tc.complex, mats)


def _condition5_map(R, S, M, Nl, Nl2, D, max_generators) -> ChainMap:
    """RHom_S(N, N') → RHom_R(M ⊗^L_S N, M ⊗^L_S N') at chain level.

    Source model Hom_S(P_N, N'); target model Hom_R(Q⊗P_N, Q⊗N'); the map
    is f ↦ id_Q ⊗ f with the Koszul sign for moving f past q.
    """
    F = M.field
    m = 2 + max(0, _top(M)) + max(0, -_bot(M)) + max((d for _, d in S.basis), default=0)
    topN2 = max((d for _, d in Nl2.basis), default=0)
    Dn2 = D + 1 + max(0, topN2)
    # two bimodule resolutions at staggered depths: were the same Q used on
    # both sides of the Hom, its top junk would pair with itself at Hom
    # degree 0, inside the window.  The builder is deterministic and adds
    # generators in degree order, so the shallow resolution is a prefix of
    # the deep one and the inclusion is the identity on common indices.
    Dqs = D + 1 + m
    Dqt = max(Dqs, Dn2) + D + m
    Pn = semifree_resolution(Nl, Dn2, max_generators).module
    Qs = semifree_resolution_bimodule(M, Dqs, max_generators).bimodule
    Qt = semifree_resolution_bimodule(M, Dqt, max_generators).bimodule
    if Qs.basis != Qt.basis[: len(Qs.basis)]:
        raise AssertionError("staggered resolutions are not prefix-compatible")
    Hsrc = hom_over(S, Pn, Nl2)
    Tn = tensor_over(S, Qs, Pn)
    T2 = tensor_over(S, Qt, Nl2)
    Tn_mod = Tn.structure()
    Htgt = hom_over(R, Tn_mod, T2.structure())
    mats = {}
    for n in sorted(Hsrc.basis_vectors):
        cols = []
        for f in Hsrc.basis_vectors[n]:
            ground: dict = {}
            for t_idx in range(Tn_mod.total_dim):
                dt, pt = Tn.struct_pair(t_idx)
                q_idx, p_idx = Tn.section(dt, pt)
                fp = Hsrc.evaluate(f, {p_idx: F.one})
                if not fp:
                    continue
                sgn = F.of((-1) ** (n * Qs.deg(q_idx)))
                g2 = {(q_idx, k): F.mul(sgn, c) for k, c in fp.items()}
                for p2, c in T2.project_elem(g2, dt + n).items():
                    key = (t_idx, T2.struct_index(dt + n, p2))
                    s = F.add(ground.get(key, F.zero), c)
                    if s == 0:
                        ground.pop(key, None)
                    else:
                        ground[key] = s
            cols.append(Htgt.coords(ground, n))
        mats[n] = Matrix.from_columns(F, cols, rows=Htgt.complex.dim(n))
    return ChainMap(Hsrc.complex, Htgt.complex, mats)


def check_bimodule_conditions(
    R: DgAlgebra,
    S: DgAlgebra,
    M: DgBimodule,
    witness_Sop,
    family: TestFamily,
    D: int,
    max_generators: int = 10000,
) -> ConsistencyReport:
    """Evaluate the six equivalent bimodule conditions over a test family."""
    window = Window(-D, D)
    has_witness = witness_Sop is not None
    if has_witness:
        ok = verify_build_tree(witness_Sop, right_to_left_op(M.right_module()))
        if ok is not True:
            raise ValueError(f"witness rejected: {ok.reason} (degree {ok.degree})")
    verdicts = []

    # (1): counit at N = S
    c1 = counit_map(M, left_regular(S), D, max_generators)
    _require_chain(c1.chain_map, "counit at S")
    verdicts.append(_verdict(1, is_derived_iso(c1.chain_map, window), window))

    # (2): counit over the family
    items = []
    for desc, N in family.left:
        c = counit_map(M, N, D, max_generators)
        _require_chain(c.chain_map, f"counit at {desc}")
        items.append((desc, is_derived_iso(c.chain_map, window)))
    verdicts.append(_quantified(2, window, items))

    # (3): the two-sided composed map over right/left pairs
    items = []
    for (d1, Nr), (d2, Nl) in zip(family.right, family.left):
        cm = _condition3_map(R, S, M, Nr, Nl, D, max_generators)
        _require_chain(cm, f"two-sided map at ({d1}, {d2})")
        items.append((f"({d1}, {d2})", is_derived_iso(cm, window)))
    verdicts.append(_quantified(3, window, items))

    # (4): unit over the family
    items = []
    for desc, N in family.left:
        u = unit_map(M, N, D, max_generators)
        _require_chain(u.chain_map, f"unit at {desc}")
        items.append((desc, is_derived_iso(u.chain_map, window)))
    verdicts.append(_quantified(4, window, items))

    # (5): induced map on RHom over diagonal pairs
    items = []
    for desc, N in family.left:
        cm = _condition5_map(R, S, M, N, N, D, max_generators)
        _require_chain(cm, f"RHom map at ({desc}, {desc})")
        items.append((f"({desc}, {desc})", is_derived_iso(cm, window)))
    verdicts.append(_quantified(5, window, items))

    verdicts.append(
        ConditionVerdict(
            6,
            UNCHECKABLE,
            window,
            note="full embedding of derived categories; equivalent to (1)-(5) by "
            "the theorem, not directly evaluable",
        )
    )

    note = ""
    if has_witness:
        groups = [[1, 2, 3, 4, 5]]
    else:
        groups = [[1, 2, 3], [4, 5]]
        note = (
            "no finitely-built witness: conditions (1)-(3) and (4)-(5) are "
            "compared as separate groups; the bridge between them needs the witness"
        )
    agreement, detail = True, None
    by_id = {v.condition: v for v in verdicts}
    for group in groups:
        vals = [(c, by_id[c].holds) for c in group]
        if len({h for _, h in vals}) > 1:
            agreement = False
            if detail is None:
                detail = "; ".join(by_id[c].summary() for c in group)
            break
    return ConsistencyReport(verdicts, agreement, detail, note)


# -- compact endpoint ----------------------------------------------------------


def _as_window(D) -> Window:
    return D if isinstance(D, Window) else Window(-D, D)


def check_compact_endpoint(
    R: DgAlgebra,
    S: DgAlgebra,
    M: DgBimodule,
    witness_R: BuildTreeWitness,
    D,
    max_generators: int = 10000,
) -> ConditionVerdict:
    """Verdict on S → RHom_R(M, M) when M is finitely built from R on the left.

    The witness makes M K-projective over R, so the underived Hom complex
    computes RHom and no resolution of M is needed.
    """
    window = _as_window(D)
    ok = verify_build_tree(witness_R, M.left_module())
    if ok is not True:
        raise ValueError(f"witness rejected: {ok.reason} (degree {ok.degree})")
    F = M.field
    H = hom_over(R, M.left_module(), M.left_module())
    SC = S.underlying()
    mats = {}
    for n in SC.degrees():
        cols = []
        for s in S.component(n):
            ground: dict = {}
            for mi in range(M.total_dim):
                img = M.act_right.get((s, mi), {})
                if not img:
                    continue
                # f_s(m) = (-1)^{|s||m|} m·s is graded R-linear and chain
                sgn = F.of((-1) ** (n * M.deg(mi)))
                for k, c in img.items():
                    key = (mi, k)
                    v = F.add(ground.get(key, F.zero), F.mul(sgn, c))
                    if v == 0:
                        ground.pop(key, None)
                    else:
                        ground[key] = v
            cols.append(H.coords(ground, n))
        mats[n] = Matrix.from_columns(F, cols, rows=H.complex.dim(n))
    cm = ChainMap(SC, H.complex, mats)
    _require_chain(cm, "endpoint map S → Hom_R(M, M)")
    return _verdict("compact-endpoint", is_derived_iso(cm, window), window)


def check_dwyer_greenlees(
    R: DgAlgebra,
    M: DgModule,
    witness_R: BuildTreeWitness,
    D,
    max_generators: int = 10000,
) -> DwyerGreenleesReport:
    """Endomorphism-DGA picture: F = End_R(M), S = F^op acting on the right."""
    window = _as_window(D)
    ok = verify_build_tree(witness_R, M)
    if ok is not True:
        raise ValueError(f"witness rejected: {ok.reason} (degree {ok.degree})")
    Fdga, bimod = endomorphism_dga(M)
    bad = validate_dga(Fdga)
    if bad:
        raise ValueError(f"endomorphism DGA invalid: {bad[0].axiom} at {bad[0].where}")
    bad = validate_module(bimod)
    if bad:
        raise ValueError(f"endomorphism bimodule invalid: {bad[0].axiom}")
    S = bimod.right_algebra
    # degreewise comparison S ≅ Hom_R(M, M): the identity-seated Hom basis
    # is exactly the basis of F, so the comparison map is the identity matrix
    # in every degree and being a chain map pins the differentials to agree
    idg = hom_over(R, M, M).identity_ground()
    H2 = hom_over(R, M, M, prefer={0: [idg]})
    SC = S.underlying()
    F = S.field
    degreewise = all(SC.dim(n) == H2.complex.dim(n) for n in set(SC.degrees()) | set(H2.complex.degrees()))
    if degreewise:
        cm = ChainMap(
            SC, H2.complex, {n: Matrix.identity(F, SC.dim(n)) for n in SC.degrees()}
        )
        degreewise = cm.validate() is True
    endpoint = check_compact_endpoint(R, S, bimod, witness_R, window, max_generators)
    return DwyerGreenleesReport(Fdga, S, degreewise, endpoint)


# -- ring-mode checker ---------------------------------------------------------


def _s_as_s_r_bimodule(phi: DgaMorphism) -> DgBimodule:
    """S with left multiplication and right R-action through phi."""
    R, S = phi.source, phi.target
    F = S.field
    act_right = {}
    for j in range(R.total_dim):
        img = phi.apply({j: F.one})
        for m in range(S.total_dim):
            e = S.mul_elem({m: F.one}, img)
            if e:
                act_right[(j, m)] = e
    return DgBimodule(S, R, S.basis, dict(S.mul), act_right, S.diff, name=S.name)


def _ring_condition2_map(phi, N, D, max_generators) -> ChainMap:
    """S ⊗_R P_N → N, s⊗p ↦ s·ε(p), with P_N → N a resolution over R."""
    R, S = phi.source, phi.target
    F = S.field
    NR = restrict_scalars(N, phi)
    D2 = D + 1 + max(0, -_bot(NR))
    res = semifree_resolution(NR, D2, max_generators)
    P = res.module
    T = tensor_over(R, _s_as_s_r_bimodule(phi), P)
    NC = N.underlying()
    mats = {}
    for d in T.complex.degrees():
        cols = []
        for pos in range(T.complex.dim(d)):
            s_idx, p_idx = T.section(d, pos)
            ep = res.eps.apply_elem({p_idx: F.one})  # element of N
            val = N.act_elem({s_idx: F.one}, ep) if ep else {}
            cols.append(N.component_vector(val, d) if val else tuple([F.zero] * NC.dim(d)))
        mats[d] = Matrix.from_columns(F, cols, rows=NC.dim(d))
    return ChainMap(T.complex, NC, mats)


def _ring_condition4_map(phi, N, D, max_generators) -> ChainMap:
    """N → Hom_R(Q_S, N), n ↦ (q ↦ (-1)^{|n||q|} ε(q)·n)."""
    R, S = phi.source, phi.target
    F = S.field
    NR = restrict_scalars(N, phi)
    S_left = restrict_scalars(left_regular(S), phi)
    topN = max((d for _, d in N.basis), default=0)
    D2 = D + 1 + max(0, topN)
    res = semifree_resolution(S_left, D2, max_generators)
    Q = res.module
    H = hom_over(R, Q, NR)
    NC = N.underlying()
    mats = {}
    for n in NC.degrees():
        cols = []
        for n_idx in N.component(n):
            ground: dict = {}
            for q_idx in range(Q.total_dim):
                eq = res.eps.apply_elem({q_idx: F.one})  # element of S
                if not eq:
                    continue
                sgn = F.of((-1) ** (n * Q.deg(q_idx)))
                val = N.act_elem(eq, {n_idx: F.one})
                for k, c in val.items():
                    key = (q_idx, k)
                    v = F.add(ground.get(key, F.zero), F.mul(sgn, c))
                    if v == 0:
                        ground.pop(key, None)
                    else:
                        ground[key] = v
            cols.append(H.coords(ground, n))
        mats[n] = Matrix.from_columns(F, cols, rows=H.complex.dim(n))
    return ChainMap(NC, H.complex, mats)


def check_ring_epi(
    phi: DgaMorphism, D: int, family: TestFamily, max_generators: int = 10000
) -> ConsistencyReport:
    """The classical ring characterization, conditions (1)-(6) plus Translation."""
    R, S = phi.source, phi.target
    if any(d != 0 for _, d in R.basis) or any(d != 0 for _, d in S.basis):
        raise ValueError("ring mode requires algebras concentrated in degree zero")
    window = Window(0, D)
    ext_window = Window(-D, D)
    Sr = restrict_scalars(right_regular(S), phi)
    Sl = restrict_scalars(left_regular(S), phi)
    verdicts = []

    # (1): multiplication map S ⊗^L_R S → S
    m = multiplication_map(phi, D, max_generators)
    _require_chain(m.chain_map, "multiplication map")
    rep1 = is_derived_iso(m.chain_map, window)
    verdicts.append(_verdict(1, rep1, window))

    # Translation: H_0 bijective and Tor_i(S,S) = 0 for 1 <= i <= D
    tors = tor_table(R, Sr, Sl, D)
    h0_ok = rep1.per_degree.get(0, False)
    bad_i = next((i for i in range(1, D + 1) if tors.get(i, 0) != 0), None)
    if h0_ok and bad_i is None:
        verdicts.append(ConditionVerdict("translation", HOLDS, window))
    elif not h0_ok:
        verdicts.append(
            ConditionVerdict(
                "translation",
                FAILS,
                window,
                degree=0,
                dims=(rep1.source_h.get(0, 0), rep1.target_h.get(0, 0)),
                note="multiplication not bijective on H_0",
            )
        )
    else:
        verdicts.append(
            ConditionVerdict(
                "translation",
                FAILS,
                window,
                degree=bad_i,
                dims=(tors[bad_i], 0),
                note=f"Tor_{bad_i}(S,S) has dimension {tors[bad_i]}",
            )
        )

    # (2): S ⊗^L_R N → N over the family, chain-realized
    items = []
    for desc, N in family.left:
        cm = _ring_condition2_map(phi, N, D, max_generators)
        _require_chain(cm, f"induction counit at {desc}")
        items.append((desc, is_derived_iso(cm, window)))
    verdicts.append(_quantified(2, window, items))

    # (3): Tor over R vs over S on right/left pairs (dims level)
    items = []
    for (d1, Mr), (d2, Nl) in zip(family.right, family.left):
        tR = tor_table(R, restrict_scalars(Mr, phi), restrict_scalars(Nl, phi), D)
        tS = tor_table(S, Mr, Nl, D)
        items.append((f"({d1}, {d2})", tR, tS))
    verdicts.append(_dims_quantified(3, window, items))

    # (4): N → RHom_R(S, N) over the family, chain-realized
    items = []
    for desc, N in family.left:
        cm = _ring_condition4_map(phi, N, D, max_generators)
        _require_chain(cm, f"restriction unit at {desc}")
        items.append((desc, is_derived_iso(cm, ext_window)))
    verdicts.append(_quantified(4, ext_window, items))

    # (5): Ext over S vs over R on diagonal pairs (dims level)
    items = []
    for desc, N in family.left:
        eS = ext_table(S, N, N, D)
        eR = ext_table(R, restrict_scalars(N, phi), restrict_scalars(N, phi), D)
        items.append((f"({desc}, {desc})", eS, eR))
    verdicts.append(_dims_quantified(5, window, items))

    verdicts.append(
        ConditionVerdict(
            6,
            UNCHECKABLE,
            window,
            note="full embedding of derived categories; equivalent to (1)-(5) by "
            "the theorem, not directly evaluable",
        )
    )

    agreement, detail = True, None
    checkable = [v for v in verdicts if v.checkable]
    if len({v.holds for v in checkable}) > 1:
        agreement = False
        detail = "; ".join(v.summary() for v in checkable)
    return ConsistencyReport(verdicts, agreement, detail)


def check_dga_epi(
    phi: DgaMorphism, D: int, family: TestFamily, max_generators: int = 10000
) -> ConsistencyReport:
    """Homological-epimorphism check for a DGA morphism.

    Degree-zero inputs route to the ring checker; genuine DGAs go through the
    bimodule conditions with M = S and the trivial one-leaf witness for S_S.
    """
    R, S = phi.source, phi.target
    degree0 = all(d == 0 for _, d in R.basis) and all(d == 0 for _, d in S.basis)
    if degree0:
        return check_ring_epi(phi, D, family, max_generators)
    M = bimodule_from_morphism(phi)
    return check_bimodule_conditions(
        R, S, M, BuildTreeWitness(Leaf(0)), family, D, max_generators
    )


def consistency_run(
    corpus, seed: int, D: int, family_size: int = 6, max_generators: int = 10000
) -> AggregateReport:
    """Run the applicable checker on each (description, morphism) instance."""
    instances = []
    agreement = True
    first = None
    for desc, phi in corpus:
        family = generate_test_family(phi.target, seed, family_size)
        rep = check_dga_epi(phi, D, family, max_generators)
        instances.append((desc, rep))
        if not rep.agreement and first is None:
            agreement = False
            first = f"{desc}: {rep.disagreement}"
    return AggregateReport(instances, agreement, first)
