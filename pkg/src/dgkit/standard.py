"""Stock algebras and morphisms used in tests, docs, and the demo corpus."""

from __future__ import annotations

from .field import Field, QQ
from .dga import DgAlgebra, DgaMorphism


def ground_algebra(field: Field = QQ, name: str = "k") -> DgAlgebra:
    """The ground field as a DGA concentrated in degree 0."""
    one = field.one
    return DgAlgebra(field, [("1", 0)], 0, {(0, 0): {0: one}}, {}, name=name)


def truncated_polynomial(n: int, field: Field = QQ) -> DgAlgebra:
    """k[x]/(x^n) with |x| = 0 and zero differential."""
    one = field.one
    basis = [("1", 0)] + [(f"x^{i}" if i > 1 else "x", 0) for i in range(1, n)]
    mul = {}
    for i in range(n):
        for j in range(n):
            if i + j < n:
                mul[(i, j)] = {i + j: one}
    return DgAlgebra(field, basis, 0, mul, {}, name=f"k[x]/(x^{n})")


def product_kk(field: Field = QQ) -> DgAlgebra:
    """k × k with idempotent basis e1, e2; unit is e1 + e2.

    The unit must be a basis element, so the basis used is (1, e2) with
    e2 idempotent and 1 the identity.
    """
    one = field.one
    basis = [("1", 0), ("e", 0)]
    mul = {(0, 0): {0: one}, (0, 1): {1: one}, (1, 0): {1: one}, (1, 1): {1: one}}
    return DgAlgebra(field, basis, 0, mul, {}, name="k×k")


def upper_triangular(field: Field = QQ) -> DgAlgebra:
    """T_2(k): upper triangular 2×2 matrices, basis (1, e11, e12)."""
    one = field.one
    # 1 = e11 + e22; extra basis elements u = e11 and w = e12.
    # u·u = u, u·w = w, w·u = 0, w·w = 0.
    basis = [("1", 0), ("u", 0), ("w", 0)]
    mul = {
        (0, 0): {0: one},
        (0, 1): {1: one},
        (0, 2): {2: one},
        (1, 0): {1: one},
        (2, 0): {2: one},
        (1, 1): {1: one},
        (1, 2): {2: one},
        # w·u = e12·e11 = 0 ; w·w = 0 ; u·w = e11 e12 = e12
    }
    return DgAlgebra(field, basis, 0, mul, {}, name="T2(k)")


def exterior_algebra(field: Field = QQ, gen_degree: int = 1) -> DgAlgebra:
    """Λ(x) with |x| = gen_degree, x² = 0, dx = 0."""
    one = field.one
    basis = [("1", 0), ("x", gen_degree)]
    mul = {(0, 0): {0: one}, (0, 1): {1: one}, (1, 0): {1: one}}
    # x·x = 0 (omitted entries default to 0)
    return DgAlgebra(field, basis, 0, mul, {}, name="Λ(x)")


def identity_morphism(A: DgAlgebra) -> DgaMorphism:
    one = A.field.one
    return DgaMorphism(A, A, {i: {i: one} for i in range(A.total_dim)}, name=f"id_{A.name}")


def truncated_to_ground(n: int, field: Field = QQ) -> DgaMorphism:
    """k[x]/(x^n) -> k, x -> 0."""
    R = truncated_polynomial(n, field)
    S = ground_algebra(field)
    images = {0: {0: field.one}}
    for i in range(1, n):
        images[i] = {}
    return DgaMorphism(R, S, images, name="x->0")


def product_to_ground(field: Field = QQ) -> DgaMorphism:
    """k × k -> k, first projection (1 -> 1, e2 -> 0)."""
    R = product_kk(field)
    S = ground_algebra(field)
    return DgaMorphism(R, S, {0: {0: field.one}, 1: {}}, name="pr1")


def triangular_to_product(field: Field = QQ) -> DgaMorphism:
    """T_2(k) -> k×k, quotient by the radical (w -> 0, u -> e)."""
    R = upper_triangular(field)
    S = product_kk(field)
    one = field.one
    return DgaMorphism(R, S, {0: {0: one}, 1: {1: one}, 2: {}}, name="mod-rad")
