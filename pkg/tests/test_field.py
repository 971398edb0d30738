import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sumnet.field import (
    FieldMatrix,
    FieldMismatchError,
    FieldSpec,
    SingularMatrixError,
    fe_add,
    fe_inv,
    fe_mul,
    fe_neg,
    field_make,
    is_irreducible,
    mat_inv,
    mat_mul,
    parse_field,
    solve_linear,
)

from oracles import all_solutions, monic_irreducibles_by_products, sympy_add, sympy_mul

SMALL_FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (2, 4)]


def test_prime_fields_use_x_as_modulus():
    assert field_make(2, 1).modulus == (0, 1)
    assert field_make(3, 1).modulus == (0, 1)
    assert field_make(3, 1).order == 3


def test_gf4_modulus_is_the_only_irreducible_quadratic():
    # frozen from exhausting the 4 monic quadratics over GF(2)
    assert monic_irreducibles_by_products(2, 2) == [(1, 1, 1)]
    assert field_make(2, 2).modulus == (1, 1, 1)


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)])
def test_modulus_is_lexicographically_smallest_irreducible(p, k):
    irreducibles = monic_irreducibles_by_products(p, k)
    assert field_make(p, k).modulus == irreducibles[0]


@pytest.mark.parametrize("p,k", [(2, 3), (3, 2), (2, 4)])
def test_irreducibility_matches_product_enumeration(p, k):
    truth = set(monic_irreducibles_by_products(p, k))
    for low in itertools.product(range(p), repeat=k):
        poly = low + (1,)
        assert is_irreducible(poly, p) == (poly in truth)


@pytest.mark.parametrize("p,k", [(4, 1), (1, 1), (2, 0)])
def test_field_make_rejects_bad_parameters(p, k):
    with pytest.raises(ValueError):
        field_make(p, k)


def test_field_make_order_bound():
    with pytest.raises(ValueError, match="exceeds"):
        field_make(2, 21)
    assert field_make(2, 20).order == 2**20


def test_reducible_modulus_rejected():
    with pytest.raises(ValueError):
        FieldSpec(2, 2, (1, 0, 1))


def test_parse_field():
    assert parse_field("2^2") == field_make(2, 2)
    assert parse_field("5") == field_make(5, 1)
    with pytest.raises(ValueError):
        parse_field("two")
    with pytest.raises(ValueError):
        parse_field("6^1")


def test_spec_arithmetic_examples():
    gf2, gf3, gf4 = field_make(2), field_make(3), field_make(2, 2)
    assert gf2.one + gf2.one == gf2.zero
    assert fe_mul(gf3.element(2), gf3.element(2)) == gf3.one
    x = gf4.element(2)  # the class of x
    assert (x * x).coeffs == (1, 1)


@pytest.mark.parametrize("p,k", SMALL_FIELDS)
def test_tables_agree_with_sympy(p, k):
    f = field_make(p, k)
    for a in range(f.order):
        for b in range(f.order):
            assert f.mul(a, b) == sympy_mul(a, b, p, k, f.modulus)
            assert f.add(a, b) == sympy_add(a, b, p, k)


def test_large_field_without_tables_agrees_with_sympy():
    f = field_make(2, 10)
    rng = random.Random(3)
    for _ in range(200):
        a, b = rng.randrange(f.order), rng.randrange(f.order)
        assert f.mul(a, b) == sympy_mul(a, b, 2, 10, f.modulus)
        if a:
            assert f.mul(a, f.inv(a)) == 1


@pytest.mark.parametrize("p,k", SMALL_FIELDS)
def test_characteristic(p, k):
    f = field_make(p, k)
    acc = f.zero
    for j in range(1, p + 1):
        acc = acc + f.one
        assert bool(acc) == (j < p)


@pytest.mark.parametrize("p,k", SMALL_FIELDS)
def test_every_nonzero_element_inverts(p, k):
    f = field_make(p, k)
    for a in f.elements()[1:]:
        assert a * fe_inv(a) == f.one
        assert fe_add(a, fe_neg(a)) == f.zero


def test_mismatched_fields_and_zero_inverse():
    a, b = field_make(2).one, field_make(3).one
    with pytest.raises(FieldMismatchError):
        fe_add(a, b)
    with pytest.raises(FieldMismatchError):
        a * b
    with pytest.raises(ZeroDivisionError):
        fe_inv(field_make(5).zero)


@st.composite
def element_triples(draw):
    p, k = draw(st.sampled_from(SMALL_FIELDS))
    f = field_make(p, k)
    vals = st.integers(0, f.order - 1)
    return f.element(draw(vals)), f.element(draw(vals)), f.element(draw(vals))


@settings(max_examples=300, deadline=None)
@given(element_triples())
def test_field_axioms(triple):
    a, b, c = triple
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a and a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a + a.field.zero == a and a * a.field.one == a
    if a:
        assert a / a == a.field.one


# -- matrices -----------------------------------------------------------------


def rand_matrix(f, r, c, rng):
    return FieldMatrix(f, r, c, tuple(rng.randrange(f.order) for _ in range(r * c)))


def test_identity_laws():
    f = field_make(5)
    rng = random.Random(0)
    eye = FieldMatrix.identity(f, 3)
    for _ in range(20):
        a = rand_matrix(f, 3, 3, rng)
        assert mat_mul(eye, a) == a == mat_mul(a, eye)
    assert mat_inv(eye) == eye


def test_gf2_upper_unitriangular_is_self_inverse():
    f = field_make(2)
    a = FieldMatrix.from_rows(f, [[1, 1], [0, 1]])
    assert (a @ a) == FieldMatrix.identity(f, 2)
    assert mat_inv(a) == a


def test_singular_and_shape_errors():
    f = field_make(3)
    with pytest.raises(SingularMatrixError):
        mat_inv(FieldMatrix.from_rows(f, [[1, 2], [2, 1]]))
    with pytest.raises(ValueError):
        mat_inv(FieldMatrix.zeros(f, 2, 3))
    with pytest.raises(ValueError):
        FieldMatrix.zeros(f, 2, 3) @ FieldMatrix.zeros(f, 2, 3)


@pytest.mark.parametrize("p,k", [(2, 1), (3, 1), (2, 2), (7, 1)])
def test_inverse_iff_full_rank(p, k):
    f = field_make(p, k)
    rng = random.Random(p * 10 + k)
    eye = FieldMatrix.identity(f, 3)
    for _ in range(60):
        a = rand_matrix(f, 3, 3, rng)
        if a.rank() == 3:
            b = mat_inv(a)
            assert b @ a == eye == a @ b
        else:
            with pytest.raises(SingularMatrixError):
                mat_inv(a)


def test_solve_identity_and_inconsistent():
    f = field_make(5)
    b = FieldMatrix.column(f, [1, 4, 2])
    sol = solve_linear(FieldMatrix.identity(f, 3), b)
    assert sol.x == b and sol.rank == 3 and sol.dimension == 0
    assert solve_linear(FieldMatrix.zeros(f, 3), b) is None
    with pytest.raises(ValueError):
        solve_linear(FieldMatrix.identity(f, 2), b)


def test_solve_gf3_dependent_rows():
    f = field_make(3)
    a = FieldMatrix.from_rows(f, [[1, 2], [2, 1]])
    sol = solve_linear(a, FieldMatrix.column(f, [0, 0]))
    # enumeration of all 9 vectors: the kernel is {t(1,1)}, so rank is 1
    assert all_solutions([[1, 2], [2, 1]], [0, 0], 3) == [(0, 0), (1, 1), (2, 2)]
    assert sol.x.to_rows() == [[0], [0]]
    assert sol.rank == 1
    assert sol.nullspace[0].to_rows() == [[1], [1]]


@settings(max_examples=200, deadline=None)
@given(
    st.sampled_from([2, 3, 5]),
    st.integers(1, 4),
    st.integers(1, 4),
    st.randoms(use_true_random=False),
)
def test_solve_matches_enumeration(p, rows, cols, rng):
    f = field_make(p)
    a = rand_matrix(f, rows, cols, rng)
    b = rand_matrix(f, rows, 1, rng)
    truth = all_solutions(a.to_rows(), [r[0] for r in b.to_rows()], p)
    sol = solve_linear(a, b)
    if not truth:
        assert sol is None
        return
    assert a @ sol.x == b
    assert len(truth) == p ** (cols - sol.rank) == p**sol.dimension
    for v in sol.nullspace:
        assert (a @ v).is_zero()


def test_matrix_over_extension_field_solves_exactly():
    f = field_make(2, 2)
    rng = random.Random(11)
    for _ in range(50):
        a = rand_matrix(f, 3, 3, rng)
        b = rand_matrix(f, 3, 1, rng)
        sol = solve_linear(a, b)
        if sol is not None:
            assert a @ sol.x == b
