import os
from fractions import Fraction
from math import prod

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from algebra.fields import QuadraticField, quad_sqrt, rational_sqrt
from algebra.matrix import (
    IntMatrix,
    block_determinants,
    det_cofactor,
    det_exact,
    gram_report,
    picard_index_check,
    symmetrize,
    transcendental_candidates,
)
from algebra.polynomial import (
    ExactPolynomial,
    RationalFunction,
    expand_factors,
    poly_arith,
    poly_gcd,
    poly_sqrt,
    rational_roots,
    squarefree_factor,
)
from algebra.symbols import is_prime, kronecker_symbol, legendre_symbol, primes_up_to
from utils.errors import DomainError, FieldMismatchError, InconsistencyError
from utils.fixtures import RECORDED_VALUES_FILE, fixture_path, load_matrix, load_recorded_values

s = ExactPolynomial.gen("s")
fractions = st.fractions(min_value=-50, max_value=50, max_denominator=20)
small_ints = st.integers(min_value=-9, max_value=9)
quadratic_d = st.sampled_from([-3, -2, -1, 2, 3, 5, 6, 7])


def poly(coeffs):
    return ExactPolynomial(tuple(coeffs), "s")


# -- fields


def test_rational_sqrt():
    assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert rational_sqrt(Fraction(2)) is None
    assert rational_sqrt(Fraction(-4)) is None


def test_sqrt_72_lives_in_q_sqrt_2():
    K = QuadraticField(2)
    assert K.sqrt(72) == K.element(0, 6)
    assert QuadraticField(3).sqrt(72) is None


def test_quadratic_field_rejects_non_squarefree():
    with pytest.raises(DomainError):
        QuadraticField(4)
    with pytest.raises(DomainError):
        QuadraticField(1)


def test_mixing_quadratic_fields_fails():
    with pytest.raises(FieldMismatchError):
        QuadraticField(2).element(1, 1) + QuadraticField(3).element(1, 1)


@given(fractions, fractions, quadratic_d)
def test_quad_sqrt_of_a_square(a, b, d):
    x = QuadraticField(d).element(a, b)
    root = quad_sqrt(x * x)
    assert root is not None
    assert root * root == x * x


@given(fractions, fractions, quadratic_d)
def test_inverse(a, b, d):
    x = QuadraticField(d).element(a, b)
    assume(x)
    assert x * x.inverse() == 1


@given(fractions, fractions, fractions, fractions, st.sampled_from([-3, 2]))
def test_norm_is_rational_and_multiplicative(a, b, c, e, d):
    K = QuadraticField(d)
    x, y = K.element(a, b), K.element(c, e)
    product = x * x.conjugate()
    assert product.b == 0
    assert product.is_rational()
    assert product.a == x.norm()
    assert (x * y).norm() == x.norm() * y.norm()
    assert x.conjugate().conjugate() == x


# -- polynomials


@given(st.lists(small_ints, max_size=7), st.lists(small_ints, min_size=1, max_size=5))
def test_divmod_identity(a, b):
    p, q = poly(a), poly(b)
    assume(not q.is_zero())
    quot, rem = divmod(p, q)
    assert quot * q + rem == p
    assert rem.degree < q.degree


def test_gcd_is_monic_common_factor():
    p = (s - 1) * (s - 2)
    q = (s - 1) * (s + 3) * 5
    assert poly_gcd(p, q) == s - 1
    assert poly_arith(p, q, "gcd") == s - 1


def test_unknown_operation():
    with pytest.raises(DomainError):
        poly_arith(s, s, "^")


def test_variable_mismatch():
    with pytest.raises(FieldMismatchError):
        s + ExactPolynomial.gen("t")


def test_squarefree_factor():
    p = (s - 1) ** 2 * (s + 2) * (s * s - 10 * s + 1)
    factors = squarefree_factor(p)
    assert {(f.factor, f.multiplicity) for f in factors} == {
        (s - 1, 2),
        (s + 2, 1),
        (s * s - 10 * s + 1, 1),
    }
    assert all(f.irreducible for f in factors)
    assert expand_factors(factors) == p.monic()


def test_rational_roots():
    p = (10 * s - 1) * (9 * s - 1) * (s * s + 1)
    assert rational_roots(p) == [Fraction(1, 10), Fraction(1, 9)]


@given(st.lists(small_ints, min_size=1, max_size=5))
def test_poly_sqrt_of_square(coeffs):
    p = poly(coeffs)
    assume(not p.is_zero())
    root = poly_sqrt(p * p)
    assert root is not None
    assert root * root == p * p


def test_poly_sqrt_of_non_square():
    assert poly_sqrt(s * s + 1) is None
    assert poly_sqrt(s ** 3) is None


def test_valuation():
    p = s ** 12 * (10 * s - 1) ** 2
    assert p.valuation(s) == 12
    assert p.valuation((10 * s - 1).monic()) == 2
    assert p.valuation(s - 1) == 0


def test_reverse():
    p = poly([1, 2, 3])
    assert p.reverse(4) == poly([0, 0, 3, 2, 1])
    with pytest.raises(DomainError):
        p.reverse(1)


def test_rational_function_is_reduced():
    f = RationalFunction((s - 1) * (s + 1), (s - 1).scale(2))
    assert f.den == ExactPolynomial.constant(1)
    assert f.num == (s + 1).scale(Fraction(1, 2))
    assert f.is_polynomial()


def test_rational_function_arithmetic():
    f = RationalFunction.of(s) / (s + 1)
    g = 1 - f
    assert g.num == ExactPolynomial.constant(1)
    assert g.den == s + 1
    with pytest.raises(ZeroDivisionError):
        f / RationalFunction.of(ExactPolynomial.zero())


def test_polynomial_over_quadratic_field():
    K = QuadraticField(-3)
    w = ExactPolynomial.constant(K.generator, "s", K)
    x = ExactPolynomial.gen("s", K)
    p = (x - w) * (x + w)
    assert p == x * x + 3


# -- matrices


def test_bareiss_small():
    m = IntMatrix.from_rows([[2, -1, 0], [-1, 2, -1], [0, -1, 2]])
    assert det_exact(m) == 4
    assert det_exact(IntMatrix.identity(0)) == 1
    assert det_exact(IntMatrix.from_rows([[0, 1], [1, 0]])) == -1


def test_singular_matrix():
    assert det_exact(IntMatrix.from_rows([[1, 2], [2, 4]])) == 0


def test_non_square():
    with pytest.raises(DomainError):
        det_exact(IntMatrix.from_rows([[1, 2, 3]]))


@given(st.integers(min_value=1, max_value=5).flatmap(
    lambda n: st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=n, max_size=n)
))
def test_bareiss_matches_cofactor(rows):
    m = IntMatrix.from_rows(rows)
    assert det_exact(m) == det_cofactor(m)


def test_t2_determinant():
    assert det_exact(load_matrix("t2")) == 72


def test_recorded_values_fixture():
    assert RECORDED_VALUES_FILE == "paper_values.json"
    assert os.path.isfile(fixture_path(RECORDED_VALUES_FILE))
    values = load_recorded_values()
    assert values["ns20_det"]["value"] == -2592
    assert values["transcendental_det"]["value"] == 72
    assert all(set(entry) == {"value", "provenance"} for entry in values.values())


def test_ns20_determinants():
    m = load_matrix("ns20")
    assert not m.is_symmetric()
    assert m.asymmetric_entries() == [(1, 3)]
    report = gram_report(m)
    assert report["determinants"] == {"verbatim": -2160, "upper": -2592, "lower": -1728}
    assert report["matching"] == ["upper"]


def test_ns20_blocks_multiply_to_determinant():
    m = symmetrize(load_matrix("ns20"), "upper")
    blocks = block_determinants(m)
    assert sorted(len(idx) for idx, _ in blocks) == [1, 1, 2, 2, 3, 11]
    assert sorted(d for _, d in blocks) == [-12, -2, -2, 3, 3, 6]
    assert prod(d for _, d in blocks) == det_exact(m) == -2592


def test_symmetrize_modes():
    m = IntMatrix.from_rows([[1, 2], [3, 4]])
    assert symmetrize(m, "upper").to_rows() == [[1, 2], [2, 4]]
    assert symmetrize(m, "lower").to_rows() == [[1, 3], [3, 4]]
    with pytest.raises(DomainError):
        symmetrize(m, "diagonal")


def test_picard_index():
    assert picard_index_check(-2592, 6) == -72
    with pytest.raises(InconsistencyError):
        picard_index_check(-2592, 7)


def test_transcendental_candidates():
    out = transcendental_candidates()
    assert out["gram"].to_rows() == [[-6, 0, 0], [0, 12, 0], [0, 0, 6]]
    assert out["t2"].to_rows() == [[12, 0], [0, 6]]
    assert out["det_t2"] == 72


# -- symbols


@pytest.mark.parametrize(
    "a, n, expected",
    [(-3, 5, -1), (-3, 7, 1), (-8, 3, 1), (-8, 5, -1), (24, 5, 1), (24, 7, -1), (2, 7, 1), (6, 8, 0), (5, -1, 1), (-5, -1, -1)],
)
def test_kronecker_values(a, n, expected):
    assert kronecker_symbol(a, n) == expected


def test_kronecker_zero_modulus():
    with pytest.raises(DomainError):
        kronecker_symbol(3, 0)


@given(st.integers(min_value=-200, max_value=200), st.integers(min_value=1, max_value=200), st.integers(min_value=1, max_value=200))
def test_kronecker_multiplicative_in_modulus(a, m, n):
    assert kronecker_symbol(a, m * n) == kronecker_symbol(a, m) * kronecker_symbol(a, n)


@given(st.integers(min_value=-500, max_value=500), st.sampled_from([3, 5, 7, 11, 13, 97, 101]))
def test_kronecker_agrees_with_legendre(a, p):
    assert kronecker_symbol(a, p) == legendre_symbol(a, p)


def test_primes():
    assert primes_up_to(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert primes_up_to(1) == []
    assert [n for n in range(40) if is_prime(n)] == primes_up_to(39)
