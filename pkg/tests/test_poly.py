from fractions import Fraction
from operator import add

import numpy as np
import pytest

from src.core.errors import DomainError, FieldMismatchError, NonHomogeneousError, ParseError
from src.core.fields import FieldSpec
from src.core.matrix_point import MatrixPoint
from src.core.poly import (
    MonomialOrder, Monomial, Polynomial, graded_component, max_index, monomial_weight,
    monomials_by_weight, monomials_of_degree, parse_polynomial, variables,
)

QQ = FieldSpec.rational()
F2 = FieldSpec.prime(2)
F3 = FieldSpec.prime(3)


@pytest.fixture
def grid():
    """Variables F[i,j] of the generic 2x2 matrix over Q."""
    return variables(QQ, 2)


def test_parse_determinant(grid):
    """Test that the 2x2 determinant parses into the expected polynomial."""
    det = parse_polynomial("F[1,1]*F[2,2] - F[1,2]*F[2,1]", QQ, 2)
    expected = grid[0][0] * grid[1][1] - grid[0][1] * grid[1][0]
    assert det == expected
    assert det.degree == 2
    assert det.is_homogeneous
    assert len(det) == 2


def test_text_uses_degrevlex_order():
    """Test that printed terms come largest first in degrevlex."""
    det = parse_polynomial("F[1,1]*F[2,2] - F[1,2]*F[2,1]", QQ, 2)
    # F[2,2] es la variable menor, así que F[1,1]*F[2,2] va detrás
    assert det.to_text() == "-F[1,2]*F[2,1] + F[1,1]*F[2,2]"
    assert parse_polynomial(det.to_text(), QQ, 2) == det


def test_lex_and_degrevlex_differ():
    a = (1, 0, 0, 1)
    b = (0, 1, 1, 0)
    assert MonomialOrder.LEX.key(a) > MonomialOrder.LEX.key(b)
    assert MonomialOrder.DEGREVLEX.key(a) < MonomialOrder.DEGREVLEX.key(b)


def test_square_of_sum(grid):
    x, y = grid[0][0], grid[0][1]
    assert (x + y) ** 2 == x ** 2 + 2 * x * y + y ** 2


def test_frobenius_in_characteristic_two():
    """Test that (x+y)^2 = x^2 + y^2 over F_2."""
    x, y = Polynomial.variable(F2, 2, 1, 1), Polynomial.variable(F2, 2, 1, 2)
    assert (x + y) ** 2 == x ** 2 + y ** 2


def test_cancellation_gives_zero(grid):
    x = grid[0][0]
    assert (x - x).is_zero
    assert (x - x).degree == -1
    assert x * 0 == 0


def test_fraction_coefficient_over_prime_field():
    f = parse_polynomial("1/2*F[1,1]", F3, 1)
    assert f.coefficient((1,)).value == 2


def test_fraction_coefficient_over_rationals():
    f = parse_polynomial("3/4*F[1,2] + 1", QQ, 2)
    assert f.coefficient(Monomial(2, (0, 1, 0, 0))).value == Fraction(3, 4)
    assert f.coefficient((0, 0, 0, 0)).value == 1


@pytest.mark.parametrize('text', [
    "F[3,1]",
    "F[1,1] +",
    "2 F[1,1]",
    "F[1,1] * * F[1,2]",
    "",
    "F[1,1] / 2",
])
def test_parse_errors(text):
    """Test that malformed polynomial text raises ParseError."""
    with pytest.raises(ParseError):
        parse_polynomial(text, QQ, 2)


def test_parse_infers_dimension():
    f = parse_polynomial("F[1,3]*F[2,1]", QQ)
    assert f.n == 3
    assert max_index("F[1,3] + F[4,2]") == 4
    assert max_index("7") == 0


def test_torus_weight(grid):
    """Test that F[i,j] has weight e_i - e_j."""
    assert grid[0][1].weight() == (1, -1)
    assert grid[1][1].weight() == (0, 0)
    assert (grid[0][0] + grid[0][1]).weight() is None
    assert monomial_weight((0, 2, 0, 0), 2) == (2, -2)
    assert monomial_weight((1, 1, 0, 0), 2) == (1, -1)


def test_weight_components(grid):
    f = grid[0][0] + grid[0][1] + grid[1][1]
    parts = f.weight_components()
    assert set(parts) == {(0, 0), (1, -1)}
    assert parts[(1, -1)] == grid[0][1]


def test_homogeneous_degree(grid):
    with pytest.raises(NonHomogeneousError):
        (grid[0][0] + grid[0][0] * grid[1][1]).homogeneous_degree()
    assert Polynomial.zero(QQ, 2).homogeneous_degree() == -1


def test_mixed_rings_do_not_combine(grid):
    with pytest.raises(FieldMismatchError):
        grid[0][0] + Polynomial.variable(F2, 2, 1, 1)
    with pytest.raises(FieldMismatchError):
        grid[0][0] * Polynomial.variable(QQ, 3, 1, 1)


def test_leading_term(grid):
    f = grid[1][1] + 3 * grid[0][0]
    exps, coeff = f.leading_term()
    assert exps == (1, 0, 0, 0)
    assert coeff == 3
    with pytest.raises(DomainError):
        Polynomial.zero(QQ, 2).leading_term()


def test_evaluate_determinant():
    det = parse_polynomial("F[1,1]*F[2,2] - F[1,2]*F[2,1]", QQ, 2)
    assert det.evaluate(MatrixPoint.identity(QQ, 2)) == 1
    assert det.evaluate(MatrixPoint(QQ, [[1, 2], [3, 4]])) == -2
    with pytest.raises(FieldMismatchError):
        det.evaluate(MatrixPoint.identity(F2, 2))


def test_monomial_counts():
    """Test that degree-d monomials in n^2 variables number C(n^2+d-1, d)."""
    assert len(monomials_of_degree(2, 2)) == 10
    assert len(monomials_of_degree(3, 2)) == 45
    assert len(monomials_of_degree(2, 0)) == 1
    groups = monomials_by_weight(2, 2)
    assert sum(len(ms) for ms in groups.values()) == 10
    assert len(groups[(0, 0)]) == 4


def test_graded_component(grid):
    rows = graded_component([grid[0][0]], 2)
    assert len(rows) == 4
    assert all(len(row) == 1 for row in rows)
    with pytest.raises(DomainError):
        graded_component([grid[0][0] * grid[0][0]], 1)

def random_polynomial(rng, field, n, max_degree=3, terms=4):
    """Polynomio aleatorio con semilla, no necesariamente homogéneo."""
    coords = {}
    for _ in range(terms):
        d = int(rng.integers(0, max_degree + 1))
        pool = monomials_of_degree(n, d)
        exps = pool[int(rng.integers(0, len(pool)))]
        coords[exps] = field.random_value(rng)
    return Polynomial(field, n, coords)


def random_point(rng, field, n):
    return MatrixPoint(field, [[field.random_value(rng) for _ in range(n)] for _ in range(n)])


@pytest.mark.parametrize('field,n', [(QQ, 2), (QQ, 3), (F3, 2), (FieldSpec.prime(101), 3)])
def test_text_round_trip_on_random_polynomials(field, n):
    rng = np.random.default_rng(5)
    for _ in range(60):
        f = random_polynomial(rng, field, n)
        if f.is_zero:
            continue
        assert parse_polynomial(f.to_text(), field, n) == f


@pytest.mark.parametrize('order', list(MonomialOrder))
def test_monomial_order_is_total_and_multiplicative(order):
    rng = np.random.default_rng(11)
    pool = [e for d in range(4) for e in monomials_of_degree(2, d)]
    for _ in range(300):
        a, b, c = (pool[int(rng.integers(0, len(pool)))] for _ in range(3))
        ka, kb = order.key(a), order.key(b)
        assert (ka == kb) == (a == b)
        if ka < kb:
            ac, bc = tuple(map(add, a, c)), tuple(map(add, b, c))
            assert order.key(ac) < order.key(bc)
        if order is MonomialOrder.DEGREVLEX and sum(a) < sum(b):
            assert ka < kb


def test_monomials_come_largest_first():
    rng = np.random.default_rng(3)
    for _ in range(20):
        f = random_polynomial(rng, QQ, 2, terms=6)
        for order in MonomialOrder:
            keys = [order.key(m.exponents) for m in f.monomials(order)]
            assert keys == sorted(keys, reverse=True)
            assert all(m.degree == sum(m.exponents) for m in f.monomials(order))


@pytest.mark.parametrize('field', [QQ, F2, FieldSpec.prime(7)])
def test_evaluation_is_a_ring_homomorphism(field):
    """Test (f+g)(P) = f(P)+g(P) and (fg)(P) = f(P)g(P) on random inputs."""
    rng = np.random.default_rng(17)
    for _ in range(40):
        f = random_polynomial(rng, field, 2)
        g = random_polynomial(rng, field, 2)
        point = random_point(rng, field, 2)
        assert (f + g).evaluate(point) == f.evaluate(point) + g.evaluate(point)
        assert (f * g).evaluate(point) == f.evaluate(point) * g.evaluate(point)
        assert Polynomial.constant(field, 2, 1).evaluate(point) == 1


if __name__ == "__main__":
    pytest.main(["-v", __file__])
