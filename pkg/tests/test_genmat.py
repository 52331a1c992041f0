from itertools import combinations, permutations

import numpy as np
import pytest
import sympy

from src.core.errors import DomainError
from src.core.fields import FieldSpec
from src.core.genmat import (
    GenericMatrix, MinorSpec, build_generator_set, matrix_power_entries, minor, nonminimal_set,
    permutation_sign, rel, strickland_full_set, theorem1_set, theorem2_set, trace_invariant,
    v_space_spanning_set,
)
from src.core.matrix_point import MatrixPoint
from src.core.orbits import random_conjugate
from src.core.poly import Polynomial, parse_polynomial, variables
from src.services.verification_service import to_sympy

QQ = FieldSpec.rational()
F2 = FieldSpec.prime(2)


@pytest.fixture
def gm3():
    return GenericMatrix(3, QQ)


def test_two_by_two_minor_is_determinant():
    det = parse_polynomial("F[1,1]*F[2,2] - F[1,2]*F[2,1]", QQ, 2)
    assert minor(MinorSpec(rows=(1, 2), cols=(1, 2)), 2) == det


def test_minor_keeps_sequence_order(gm3):
    """Test that swapping two rows of the sequence flips the sign."""
    assert gm3.minor((2, 1), (1, 2)) == -gm3.minor((1, 2), (1, 2))
    assert gm3.minor((1, 1), (1, 2)).is_zero


def test_minor_validation(gm3):
    with pytest.raises(DomainError):
        gm3.minor((1, 4), (1, 2))
    with pytest.raises(DomainError):
        gm3.minor((1,), (1, 2))
    with pytest.raises(ValueError):
        MinorSpec(rows=(), cols=())


def test_permutation_sign():
    assert permutation_sign((0, 1, 2)) == 1
    assert permutation_sign((1, 0, 2)) == -1
    assert permutation_sign((1, 2, 0)) == 1


def test_trace_invariants_n3(gm3):
    """Test T_1 is the trace and T_3 the determinant."""
    f = variables(QQ, 3)
    assert gm3.trace_invariant(1) == f[0][0] + f[1][1] + f[2][2]
    assert gm3.trace_invariant(3) == gm3.minor((1, 2, 3), (1, 2, 3))
    assert gm3.invariant(0) == 1
    with pytest.raises(DomainError):
        gm3.trace_invariant(4)


def test_characteristic_polynomial_against_sympy():
    """Test that det(xI + F) = sum T_i x^(n-i) with sympy as the oracle."""
    n = 3
    gm = GenericMatrix(n, QQ)
    symbols = sympy.symbols(f"F0:{n * n}")
    x = sympy.Symbol("x")
    det = sympy.expand((x * sympy.eye(n) + sympy.Matrix(n, n, symbols)).det())
    expected = sum(to_sympy(gm.invariant(i), symbols) * x ** (n - i) for i in range(n + 1))
    assert sympy.expand(det - expected) == 0


def test_power_entries_n2():
    f = variables(QQ, 2)
    entries = matrix_power_entries(2, 2)
    assert entries[0] == f[0][0] ** 2 + f[0][1] * f[1][0]
    assert entries[1] == f[0][0] * f[0][1] + f[0][1] * f[1][1]
    assert len(entries) == 4


@pytest.mark.parametrize('n,field', [(2, QQ), (3, QQ), (3, F2)])
def test_cayley_hamilton(n, field):
    """Test that sum (-1)^i T_i Phi^(n-i) vanishes identically."""
    assert all(entry.is_zero for entry in GenericMatrix(n, field).cayley_hamilton_residual())


def test_rel_with_r_zero_is_minor(gm3):
    assert gm3.rel(0, 2, (1, 2), (2, 3)) == gm3.minor((1, 2), (2, 3))
    assert rel(1, 1, (), (), 3) == trace_invariant(1, 3)


def test_rel_in_terms_of_square():
    """Test Rel(1, 2, u, v) = F[u,v] T_1 - (Phi^2)[u,v]."""
    n = 3
    gm = GenericMatrix(n, QQ)
    f = variables(QQ, n)
    square = gm.power_matrix(2)
    t1 = gm.trace_invariant(1)
    for u in range(1, n + 1):
        for v in range(1, n + 1):
            assert gm.rel(1, 2, (u,), (v,)) == f[u - 1][v - 1] * t1 - square[u - 1][v - 1]


def test_rel_validation(gm3):
    with pytest.raises(DomainError):
        gm3.rel(1, 2, (1, 2), (1, 2))
    with pytest.raises(DomainError):
        gm3.rel(3, 2, (), ())


def test_v_space_spanning_sets(gm3):
    assert [p for _, _, p in gm3.v_space_spanning_set(0, 2)] == [gm3.trace_invariant(2)]
    assert len(v_space_spanning_set(1, 1, 3)) == 9
    assert len(v_space_spanning_set(2, 2, 3)) == 9
    top = v_space_spanning_set(1, 3, 3)
    assert top and all(p == gm3.trace_invariant(3) for p in top)
    with pytest.raises(DomainError):
        gm3.v_space_spanning_set(2, 1)


def test_theorem1_set_shape():
    gs = theorem1_set(3, 2)
    assert len(gs) == 10
    assert gs.degrees() == {1: 1, 2: 9}
    assert gs.members[0].ident == "T(i=1)"
    assert gs.members[3].ident == "power_entry(a=1,b=3,e=2)"


def test_theorem2_set_shape():
    gs = theorem2_set(3, F2)
    assert gs.degrees() == {1: 1, 2: 10, 3: 1}
    with pytest.raises(DomainError):
        theorem2_set(1)


def test_nonminimal_set_shape():
    gs = nonminimal_set(3, 2)
    assert gs.degrees() == {1: 1, 2: 10, 3: 1}
    v_space = [m for m in gs.members if m.family == "v_space"]
    assert len(v_space) == 9
    assert v_space[0].params == {"i": 1, "p": 2, "u": [1], "v": [1]}


def test_build_generator_set_by_label():
    assert build_generator_set("nonminimal", 3, 2).label == "nonminimal"
    alias = build_generator_set("weyman_thm5", 3, 2)
    assert alias.label == "nonminimal"
    assert alias.polynomials() == nonminimal_set(3, 2).polynomials()
    assert build_generator_set("minors", 3, size=2).label == "minors2"
    with pytest.raises(DomainError):
        build_generator_set("minors", 3)
    with pytest.raises(DomainError):
        build_generator_set("theorem1", 3, 3)
    with pytest.raises(DomainError):
        build_generator_set("unknown", 3, 2)


def test_strickland_full_set_contains_minors():
    gs = strickland_full_set(2)
    assert gs.label == "strickland_full"
    families = [m.family for m in gs.members]
    assert families.count("minor") == 1
    assert "rel" in families


def test_generator_set_records():
    records = theorem1_set(2, 1).to_records()
    assert records[0] == {"family": "power_entry", "params": {"e": 1, "a": 1, "b": 1}, "polynomial": "F[1,1]"}
    assert len(records) == 4


def test_generic_matrix_needs_positive_size():
    with pytest.raises(DomainError):
        GenericMatrix(0)

def matmul(left, right, field, n):
    zero = Polynomial.zero(field, n)
    return [[sum((left[a][k] * right[k][b] for k in range(n)), zero) for b in range(n)] for a in range(n)]


@pytest.mark.parametrize('n', [1, 2, 3])
def test_minor_antisymmetry_exhaustive(n):
    """Test that swapping two rows or two columns of any minor flips its sign."""
    gm = GenericMatrix(n, QQ)
    for size in range(2, n + 1):
        for rows in permutations(range(1, n + 1), size):
            for cols in permutations(range(1, n + 1), size):
                value = gm.minor(rows, cols)
                for i, j in combinations(range(size), 2):
                    swapped = list(rows)
                    swapped[i], swapped[j] = swapped[j], swapped[i]
                    assert gm.minor(swapped, cols) == -value
                    swapped = list(cols)
                    swapped[i], swapped[j] = swapped[j], swapped[i]
                    assert gm.minor(rows, swapped) == -value
        repeated = (1,) * size
        assert gm.minor(repeated, tuple(range(1, size + 1))).is_zero


@pytest.mark.parametrize('n', [2, 3])
def test_minor_laplace_expansion(n):
    """Test the expansion of every minor along its first row."""
    gm = GenericMatrix(n, QQ)
    f = variables(QQ, n)
    for size in range(2, n + 1):
        for rows in combinations(range(1, n + 1), size):
            for cols in combinations(range(1, n + 1), size):
                expansion = Polynomial.zero(QQ, n)
                for t, col in enumerate(cols):
                    rest = cols[:t] + cols[t + 1:]
                    term = f[rows[0] - 1][col - 1] * gm.minor(rows[1:], rest)
                    expansion = expansion + (term if t % 2 == 0 else -term)
                assert gm.minor(rows, cols) == expansion


@pytest.mark.parametrize('field', [QQ, FieldSpec.prime(5)])
def test_trace_invariants_are_conjugation_invariant(field):
    n = 3
    gm = GenericMatrix(n, field)
    rng = np.random.default_rng(23)
    invariants = [gm.trace_invariant(i) for i in range(1, n + 1)]
    for seed in range(10):
        point = MatrixPoint(field, [[field.random_value(rng) for _ in range(n)] for _ in range(n)])
        moved = random_conjugate(point, seed)
        for t in invariants:
            assert t.evaluate(moved) == t.evaluate(point)


@pytest.mark.parametrize('n,field', [(2, QQ), (3, QQ), (3, F2)])
def test_matrix_powers_multiply(n, field):
    """Test Phi^a Phi^b = Phi^(a+b)."""
    gm = GenericMatrix(n, field)
    for a in range(0, 3):
        for b in range(0, 3):
            assert matmul(gm.power_matrix(a), gm.power_matrix(b), field, n) == gm.power_matrix(a + b)


if __name__ == "__main__":
    pytest.main(["-v", __file__])
