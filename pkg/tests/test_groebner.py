import pytest
import sympy

from src.core.errors import DomainError, ResourceLimitExceeded
from src.core.fields import FieldSpec
from src.core.groebner import buchberger, reduce, spoly
from src.core.idealmem import HomogeneousIdeal
from src.core.poly import MonomialOrder, Polynomial, variables
from src.models.schemas import ResourceLimits
from src.services.verification_service import to_sympy

QQ = FieldSpec.rational()
F3 = FieldSpec.prime(3)


@pytest.fixture
def abcd():
    """F[1,1], F[1,2], F[2,1], F[2,2] as a, b, c, d."""
    f = variables(QQ, 2)
    return f[0][0], f[0][1], f[1][0], f[1][1]


@pytest.fixture
def gens(abcd):
    a, b, c, d = abcd
    return [a * a + b * c, a * b + b * d, a * c + c * d]


def test_linear_ideal(abcd):
    a, b, c, d = abcd
    basis = buchberger([a, b])
    assert len(basis) == 2
    assert basis.contains(a * d + b * c)
    assert not basis.contains(d * d)


def test_basis_is_reduced_and_monic(gens):
    basis = buchberger(gens)
    for g in basis.basis:
        assert g.leading_term()[1] == 1
    leads = [g.leading_term()[0] for g in basis.basis]
    for i, li in enumerate(leads):
        for j, lj in enumerate(leads):
            if i != j:
                assert not all(x <= y for x, y in zip(li, lj))


def test_generators_reduce_to_zero(gens):
    basis = buchberger(gens)
    for g in gens:
        assert basis.normal_form(g).is_zero


def test_agrees_with_macaulay(gens, abcd):
    """Test that normal forms and graded linear algebra give the same answers."""
    a, b, c, d = abcd
    ideal = HomogeneousIdeal(gens)
    basis = buchberger(gens)
    targets = [
        gens[0] * c + gens[1] * d,
        a * c * d,
        b * c * d - a * b * c,
        d ** 3,
        (a + d) * gens[2] - b * gens[0],
    ]
    for target in targets:
        assert basis.contains(target) == ideal.member(target)


def test_agrees_with_sympy_groebner(gens, abcd):
    """Test membership decisions against sympy.groebner over the same generators."""
    a, b, c, d = abcd
    symbols = sympy.symbols("F0:4")
    reference = sympy.groebner([to_sympy(g, symbols) for g in gens], *symbols, order="grevlex")
    basis = buchberger(gens)
    for target in (a * c * d, b * c * d - a * b * c, gens[1] * a - gens[2] * b, d ** 3):
        assert basis.contains(target) == reference.contains(to_sympy(target, symbols))


def test_truncated_basis(gens, abcd):
    a, b, c, d = abcd
    basis = buchberger(gens, truncate=3)
    assert basis.truncation == 3
    assert basis.contains(gens[0] * d)
    with pytest.raises(DomainError):
        basis.contains(a ** 4)


def test_pair_and_degree_limits(gens):
    with pytest.raises(ResourceLimitExceeded):
        buchberger(gens, limits=ResourceLimits(max_pairs=1))
    with pytest.raises(ResourceLimitExceeded) as exc:
        buchberger(gens, limits=ResourceLimits(max_degree=2))
    assert exc.value.limit == "max_degree"


def test_prime_field_basis():
    f = variables(F3, 2)
    a, b = f[0][0], f[0][1]
    basis = buchberger([a * a - b * b, a * b])
    assert basis.contains(b ** 3)
    assert not basis.contains(a * a)


def test_lex_order(abcd):
    a, b, c, d = abcd
    basis = buchberger([a - d, b * c - d * d], order=MonomialOrder.LEX)
    assert basis.contains(a * b * c - d ** 3)


def test_spoly_and_reduce(abcd):
    a, b, c, d = abcd
    f = (a * b - c * d).raw_terms
    g = (a * c - b * d).raw_terms
    lf = (a * b - c * d).leading_term()[0]
    lg = (a * c - b * d).leading_term()[0]
    s = spoly(f, g, lf, lg, QQ)
    assert Polynomial(QQ, 2, s) == -c * c * d + b * b * d
    assert reduce(f, [f], [lf], MonomialOrder.DEGREVLEX, QQ) == {}


def test_empty_generators_need_ring():
    with pytest.raises(DomainError):
        buchberger([])
    basis = buchberger([], field=QQ, n=2)
    assert len(basis) == 0


if __name__ == "__main__":
    pytest.main(["-v", __file__])
