import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from algebra.fields import QuadraticField
from lattice.characters import TRIVIAL, DirichletChar, d3_from_character, dirichlet_L, kronecker_character
from lattice.eisenstein import (
    TAU_K10,
    EisensteinSpec,
    eisenstein_mahler,
    half_lattice_sum,
    norm_forms,
    specialized_m10,
)
from lattice.shells import homogeneous_tail, min_eigenvalue, shell_partials, shell_points
from lattice.sums import (
    LatticeSumSpec,
    b_factor,
    b_factor_exact,
    central_value,
    d3,
    divisor_character_table,
    exact_constant_check,
    lattice_sum,
    r_n,
    r_n_table,
    theorem_constant,
    zagier_A,
    zagier_A_coefficients,
    zagier_A_product,
    zagier_B_identity,
)
from mahler.family import mahler_family
from modular.hauptmodul import invert_k
from utils.errors import DomainError
from utils.fixtures import recorded_value

mpmath.mp.dps = 30


def L_chi_m3(s) -> float:
    return float((mpmath.zeta(s, mpmath.mpf(1) / 3) - mpmath.zeta(s, mpmath.mpf(2) / 3)) / 3 ** s)


# -- shells


@pytest.mark.parametrize("r", [1, 2, 7])
def test_shell_points(r):
    k, m = shell_points(r)
    points = set(zip(k.tolist(), m.tolist()))
    assert len(k) == len(points) == 8 * r
    assert all(max(abs(a), abs(b)) == r for a, b in points)


def test_shell_index_must_be_positive():
    with pytest.raises(DomainError):
        shell_points(0)
    with pytest.raises(DomainError):
        shell_partials(lambda k, m: k, 0)


def test_partials_do_not_depend_on_threads():
    summand = lambda k, m: 1.0 / (k * k + 2 * m * m) ** 2
    assert shell_partials(summand, 200, threads=1) == shell_partials(summand, 200, threads=4)


def test_min_eigenvalue():
    assert min_eigenvalue((1, 0, 2)) == pytest.approx(1.0)
    assert min_eigenvalue((1, 1, 1)) == pytest.approx(0.5)


def test_homogeneous_tail_needs_decay():
    with pytest.raises(DomainError):
        homogeneous_tail(np.cos, -2, 10)


# -- lattice sums


@pytest.mark.parametrize(
    "form, num, s",
    [((1, 0, -2), "1", 2), ((1, 3, 1), "1", 2), ((1, 0, 2), "k^2", 2), ((1, 0, 2), "1/k", 3), ((1, 0, 2), "k - k", 3)],
)
def test_spec_validation(form, num, s):
    with pytest.raises(DomainError):
        LatticeSumSpec.of(form, num, s, 16)


def test_truncation_error_within_tail_bound():
    coarse = lattice_sum(LatticeSumSpec.of((1, 0, 2), "k^2 - 2*m^2", 3, 32))
    fine = lattice_sum(LatticeSumSpec.of((1, 0, 2), "k^2 - 2*m^2", 3, 256))
    assert abs(coarse.value - fine.value) <= coarse.tail_bound


def test_d3_routes_agree():
    value = d3(radius=128, tol=1e-5)
    assert value == pytest.approx(recorded_value("d3"), abs=1e-13)
    assert d3_from_character() == pytest.approx(value, abs=1e-15)


def test_central_value_is_stable():
    assert central_value(256).corrected == pytest.approx(central_value(1024).corrected, abs=1e-6)


def test_main_identity():
    S = central_value(1024).corrected
    rhs = 2 * recorded_value("d3") + 72 ** 1.5 / 9 * S / math.pi ** 3
    assert mahler_family(10, tol=1e-10).value == pytest.approx(rhs, abs=1e-7)


# -- characters


def test_kronecker_characters():
    assert kronecker_character(-3).values == (0, 1, -1)
    assert kronecker_character(-8).values == (0, 1, 0, 1, 0, -1, 0, -1)
    assert kronecker_character(-4).values == (0, 1, 0, -1)
    with pytest.raises(DomainError):
        kronecker_character(2)


@pytest.mark.parametrize("values", [(0, 1, -1, 1, -1), (0, 0, 1), (0, 2, 1)])
def test_invalid_character_tables(values):
    with pytest.raises(DomainError):
        DirichletChar(len(values), values)


@given(st.sampled_from([-3, -4, -8, 5, 8, 12, 24, -24]), st.integers(1, 300), st.integers(1, 300))
def test_characters_are_completely_multiplicative(d, a, b):
    chi = kronecker_character(d)
    assert chi(a * b) == chi(a) * chi(b)


def test_dirichlet_L_values():
    assert dirichlet_L(TRIVIAL, 2.0).value == pytest.approx(math.pi ** 2 / 6, abs=1e-12)
    assert dirichlet_L(TRIVIAL, 3.0).value == pytest.approx(float(mpmath.zeta(3)), abs=1e-12)
    assert dirichlet_L(kronecker_character(-4), 2.0).value == pytest.approx(float(mpmath.catalan), abs=1e-12)
    chi_m3 = dirichlet_L(kronecker_character(-3), 2.0).value
    assert chi_m3 == pytest.approx(L_chi_m3(2), abs=1e-12)
    assert chi_m3 == pytest.approx(recorded_value("L_chi_m3_2"), abs=1e-12)


def test_L_chi24_closed_form():
    two_L = 2 * dirichlet_L(kronecker_character(24), 2.0).value
    assert two_L == pytest.approx(math.pi ** 2 / (2 * math.sqrt(6)), abs=1e-12)
    assert two_L == pytest.approx(recorded_value("two_L_chi24_2"), abs=1e-12)


def test_dirichlet_L_domain():
    with pytest.raises(DomainError):
        dirichlet_L(TRIVIAL, 1.0)
    with pytest.raises(DomainError):
        dirichlet_L(TRIVIAL, 2.0, tol=0)


# -- the A and B identities


def test_A_coefficients():
    coeffs = zagier_A_coefficients(2000)
    assert np.array_equal(coeffs.lattice, coeffs.character)
    assert coeffs.lattice[:12].tolist() == [0, 2, -2, 0, 2, 0, 0, 0, -2, 0, 0, -4]


@pytest.mark.parametrize("s", [2.0, 3.0])
def test_A_lattice_sum_against_product(s):
    A = zagier_A(s, radius=256)
    assert abs(A.value - zagier_A_product(s)) <= A.tail_bound


def test_A_domain():
    with pytest.raises(DomainError):
        zagier_A(1.0)


def test_B_identity():
    r = zagier_B_identity(3.0, radius=512)
    assert r.factor == pytest.approx(10 / 9)
    assert abs(r.lhs - r.rhs) <= r.tail_bound
    with pytest.raises(DomainError):
        zagier_B_identity(2.5)


def test_B_factor():
    num, den = recorded_value("B3_factor")
    assert b_factor_exact(3) == Fraction(num, den)
    assert b_factor(3) == pytest.approx(num / den)


def test_r_n():
    assert [r_n(n) for n in range(1, 10)] == [1, 1, 2, 1, 0, 2, 0, 1, 3]
    assert r_n_table(60)[1:].tolist() == [r_n(n) for n in range(1, 61)]
    with pytest.raises(DomainError):
        r_n(0)


def test_r_n_is_divisor_sum_of_chi_minus_8():
    # r_n = sum over d | n of (-8/d)
    table = divisor_character_table(kronecker_character(-8), 500)
    assert table[1:].tolist() == r_n_table(500)[1:].tolist()


# -- the constant


def test_theorem_constant():
    assert theorem_constant(72) == QuadraticField(2).element(0, 48)
    assert theorem_constant(-72) == QuadraticField(2).element(0, 48)
    assert exact_constant_check(72)
    assert not exact_constant_check(50)
    with pytest.raises(DomainError):
        theorem_constant(11)


# -- Eisenstein-Kronecker series


def test_eisenstein_spec_validation():
    with pytest.raises(DomainError):
        EisensteinSpec(-1j)
    with pytest.raises(DomainError):
        EisensteinSpec(TAU_K10, radius=0)


def test_norm_forms():
    assert norm_forms() == [
        (pytest.approx(0.5), 1.0),
        (pytest.approx(2.0), 1.0),
        (pytest.approx(4.5), 1.0),
        (pytest.approx(18.0), 1.0),
    ]
    with pytest.raises(DomainError):
        norm_forms(0.5 + 1j)


def test_half_lattice_is_half_the_sum():
    spec = EisensteinSpec(TAU_K10, radius=48)
    full = eisenstein_mahler(spec)
    assert full.imaginary_residue < 1e-12
    assert 2 * half_lattice_sum(spec) == pytest.approx(full.value, abs=1e-13)


def test_specialization_is_termwise():
    radius = 96
    series = eisenstein_mahler(EisensteinSpec(TAU_K10, radius=radius))
    specialized = specialized_m10(radius)
    assert specialized.value == pytest.approx(series.value, abs=1e-12)


def test_eisenstein_value_of_m10():
    target = mahler_family(10, tol=1e-10).value
    ev = eisenstein_mahler(EisensteinSpec(TAU_K10, radius=512))
    assert abs(ev.value - target) <= ev.tail_bound
    assert specialized_m10(512).corrected == pytest.approx(target, abs=1e-8)


def test_eisenstein_value_of_m12():
    tau = invert_k(12.0)
    target = mahler_family(12, tol=1e-10).value
    ev = eisenstein_mahler(EisensteinSpec(tau, radius=512))
    assert ev.imaginary_residue < 1e-12
    assert abs(ev.value - target) <= ev.tail_bound
