import math
from fractions import Fraction

import pytest

from lattice.sums import central_value
from modular.hauptmodul import eval_t, hauptmodul_series, invert_k, k_of, truncation_bound
from modular.newform import (
    TraceRecord,
    cm_trace,
    euler_product_L3,
    hecke_prime_power_check,
    lf3_partial,
    multiplicativity_defects,
    newform_coeffs,
    trace_table,
)
from modular.qseries import QExpansion, eta_product, eta_q, qexp_mul, qexp_pow
from utils.errors import DomainError, InconsistencyError
from utils.fixtures import recorded_value

PARTITIONS = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56]


@pytest.fixture(scope="module")
def S():
    return central_value(256).corrected


# -- q-expansions


def test_expansion_normalizes_leading_zeros():
    f = QExpansion(Fraction(0), (0, 0, 1, 2))
    assert f.leading_exponent == 2
    assert f.coefficients == (1, 2)
    assert f.coefficient(3) == 2
    assert f.coefficient(1) == 0
    assert f.coefficient(Fraction(5, 2)) == 0
    with pytest.raises(DomainError):
        f.coefficient(4)
    with pytest.raises(DomainError):
        QExpansion(Fraction(0), ())


def test_eta_is_pentagonal():
    eta = eta_q(1, 10)
    assert eta.leading_exponent == Fraction(1, 24)
    assert eta.coefficients == (1, -1, -1, 0, 0, 1, 0, 1, 0, 0)
    assert eta_q(2, 6).coefficients == (1, 0, -1, 0, -1, 0)


def test_inverse_eta_counts_partitions():
    inv = qexp_pow(eta_q(1, len(PARTITIONS)), -1)
    assert inv.leading_exponent == Fraction(-1, 24)
    assert list(inv.coefficients) == PARTITIONS
    one = qexp_mul(inv, eta_q(1, len(PARTITIONS)))
    assert one.leading_exponent == 0
    assert one.coefficients == (1,) + (0,) * (len(PARTITIONS) - 1)


def test_eta_product_matches_repeated_multiplication():
    direct = eta_product(((1, 2), (2, 1)), 30)
    by_hand = eta_q(1, 30) * eta_q(1, 30) * eta_q(2, 30)
    assert direct == by_hand
    assert 3 * direct == QExpansion(direct.leading_exponent, tuple(3 * c for c in direct.coefficients))
    with pytest.raises(DomainError):
        eta_product((), 10)
    with pytest.raises(DomainError):
        eta_q(0, 10)


def test_large_powers_leave_int64():
    big = qexp_pow(eta_q(1, 40), -24)
    # 1/Delta has coefficients past 2^63 well before q^40
    assert big.coefficients[:3] == (1, 24, 324)
    assert max(abs(c) for c in big.coefficients) > 1 << 63


# -- the newform


def test_newform_prefix():
    want = recorded_value("newform_prefix")
    assert newform_coeffs(len(want)) == want
    with pytest.raises(DomainError):
        newform_coeffs(0)


def test_trace_table_matches_recorded_values():
    recorded = {int(p): A for p, A in recorded_value("trace_table").items()}
    table = trace_table(200)
    for p, A in recorded.items():
        assert table[p] == (A, A)
    assert all(a_p == A_p for a_p, A_p in table.values())
    assert 2 not in table


def test_eta_product_traces_match_cm_up_to_1000():
    table = trace_table(1000)
    assert max(table) == 997
    mismatches = [p for p, (a_p, A_p) in table.items() if a_p != A_p]
    assert mismatches == []
    assert all(table[p][0] == 0 for p in table if p % 8 in (5, 7))


@pytest.mark.parametrize("p, A, rep", [(3, -2, (1, 1)), (11, 14, (3, 1)), (17, 2, (3, 2)), (19, -34, (1, 3))])
def test_cm_trace_split(p, A, rep):
    record = cm_trace(p)
    assert record == TraceRecord(p, A, 1, rep)


@pytest.mark.parametrize("p", [5, 7, 13, 23])
def test_cm_trace_inert(p):
    assert cm_trace(p) == TraceRecord(p, 0, -1)


def test_cm_trace_rejects():
    for n in (2, 9, 1):
        with pytest.raises(DomainError):
            cm_trace(n)
    with pytest.raises(InconsistencyError):
        TraceRecord(5, 2, -1)
    with pytest.raises(InconsistencyError):
        TraceRecord(11, 14, 1, (1, 1))


def test_hecke_relations():
    coeffs = newform_coeffs(600)
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23):
        assert hecke_prime_power_check(p, coeffs) == []
    assert multiplicativity_defects(coeffs, 600) == []


def test_broken_coefficients_are_caught():
    coeffs = newform_coeffs(100)
    coeffs[8] += 1  # a_9
    assert hecke_prime_power_check(3, coeffs) == [1, 2, 3]
    assert (2, 9) in multiplicativity_defects(coeffs, 100)


def test_partial_L_against_lattice_sum(S):
    partial = lf3_partial(20_000)
    assert abs(partial.value - S) < partial.tail_model
    with pytest.raises(DomainError):
        lf3_partial(50)


def test_euler_product_against_lattice_sum(S):
    p_max = 2000
    assert euler_product_L3(p_max) == pytest.approx(S, abs=4 / (p_max * math.log(p_max)))


# -- Hauptmodul


def test_hauptmodul_series():
    t = hauptmodul_series(12)
    assert t.leading_exponent == Fraction(1, 2)
    assert t.coefficients[:2] == (1, -6)


def test_series_agrees_with_product():
    tau = 1.2j
    q = math.exp(-2 * math.pi * 1.2)
    t = hauptmodul_series(30)
    series = sum(c * q ** float(t.leading_exponent + n) for n, c in enumerate(t.coefficients))
    assert eval_t(tau).real == pytest.approx(series, rel=1e-12)
    assert abs(eval_t(tau).imag) < 1e-15


def test_t_at_the_k10_point():
    y = recorded_value("tau_k10")[1]
    t = eval_t(1j * y)
    assert t.real == pytest.approx(recorded_value("t_k10"), abs=1e-12)
    assert t.real == pytest.approx(5 - 2 * math.sqrt(6), abs=1e-12)
    assert k_of(1j * y).real == pytest.approx(10.0, abs=1e-10)
    assert truncation_bound(1j * y, 64) < 1e-15


def test_invert_k():
    tau = invert_k(10.0)
    assert tau.real == 0
    assert tau.imag == pytest.approx(recorded_value("tau_k10")[1], abs=1e-10)
    assert k_of(invert_k(20.0)).real == pytest.approx(20.0, abs=1e-9)


K_GRID = [6.2, 6.5, 7.0, 8.0, 10.0, 12.0, 20.0, 50.0, 100.0, 1000.0]


def test_invert_k_is_monotone_and_round_trips():
    heights = []
    for k in K_GRID:
        tau = invert_k(k)
        assert tau.real == 0
        assert k_of(tau).real == pytest.approx(k, rel=1e-10)
        heights.append(tau.imag)
    assert heights == sorted(heights)
    assert len(set(heights)) == len(heights)
    assert 1 / math.sqrt(6) < heights[0] and heights[-1] < 3


def test_invert_k_domain():
    with pytest.raises(DomainError):
        invert_k(6.0)
    with pytest.raises(DomainError):
        invert_k(1e9)
    with pytest.raises(DomainError):
        eval_t(-1j)
    with pytest.raises(DomainError):
        eval_t(1j, terms=4)
