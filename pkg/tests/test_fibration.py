from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from algebra.polynomial import ExactPolynomial
from fibration.curve import FunctionFieldCurve, check_weight, invariant_ratio, invariants, rescale_at_infinity
from fibration.fibers import (
    ADDITIVE,
    ShiodaInput,
    classify_fibers,
    component_counts,
    local_fiber,
    shioda_rank,
    valuation_sum,
)
from fibration.group_law import (
    CurvePoint,
    group_add,
    is_on_curve,
    multiply,
    negate,
    point_order,
    recover_y,
    verify_section,
)
from utils.errors import DomainError, InconsistencyError
from utils.fixtures import load_curve, sections_for

s = ExactPolynomial.gen("s")


@pytest.fixture(scope="module")
def es():
    return load_curve("es")


@pytest.fixture(scope="module")
def torsion():
    points = sections_for("es")
    return [points["zero"], points["s6"], points["2s6"], points["3s6"], points["4s6"], points["5s6"]]


def label(p: ExactPolynomial) -> str:
    return str(p.monic())


# -- curves


def test_singular_curve_rejected():
    with pytest.raises(DomainError):
        FunctionFieldCurve.from_lists([], [], [], [], [])


def test_invariant_identities(es):
    inv = invariants(es)
    assert (inv.delta.scale(1728)) == inv.c4 ** 3 - inv.c6 ** 2
    assert inv.b8.scale(4) == inv.b2 * inv.b6 - inv.b4 * inv.b4


def test_weight_bounds(es):
    check_weight(es, 2)
    with pytest.raises(DomainError):
        check_weight(es, 1)


def test_rescaling_at_infinity_matches_sigma_model(es):
    rescaled = rescale_at_infinity(es, 2)
    e_sigma = load_curve("e-sigma")
    assert rescaled.var == "sigma"
    assert rescaled.a1 == -e_sigma.a1
    assert rescaled.a2 == e_sigma.a2
    assert rescaled.a4 == e_sigma.a4
    assert invariant_ratio(e_sigma, rescaled, "delta") == 1


def test_invariant_ratio_of_scaled_model():
    E = FunctionFieldCurve.from_lists([], [], [], [0, 0, 1], [1])
    # (x, y) -> (x/4, y/8) multiplies a4 by 16, a6 by 64 and delta by 4^6
    F = FunctionFieldCurve.from_lists([], [], [], [0, 0, 16], [64])
    assert invariant_ratio(F, E, "delta") == 4 ** 6
    assert invariant_ratio(F, E, "c4") == 4 ** 2
    with pytest.raises(DomainError):
        invariant_ratio(F, E, "j")


# -- fibers


def test_es_fiber_table(es):
    reports = classify_fibers(es, 2)
    table = {r.label: r.kodaira for r in reports}
    assert table == {
        label(s): "I_12",
        label(10 * s - 1): "I_2",
        label(s * s - 10 * s + 1): "I_3",
        label(s - 1): "I_1",
        label(9 * s - 1): "I_1",
        "inf": "I_2",
    }
    assert valuation_sum(reports) == 24


def test_es_mordell_weil_rank(es):
    counts = component_counts(classify_fibers(es, 2))
    assert sorted(counts) == [1, 1, 2, 2, 3, 3, 12]
    assert shioda_rank(ShiodaInput(20, counts)) == 1


def test_fiber_places_are_ordered(es):
    places = [r.place for r in classify_fibers(es, 2) if not r.is_infinity]
    assert places == sorted(places, key=lambda p: p.sort_key())


def test_additive_fiber_flagged():
    E = FunctionFieldCurve.from_lists([], [], [], [], [0, 1])
    at_zero = local_fiber(E, s)
    assert at_zero.delta_valuation == 2
    assert at_zero.c4_valuation is None
    assert at_zero.kodaira == ADDITIVE
    with pytest.raises(DomainError):
        component_counts([at_zero])


def test_constant_discriminant_has_no_finite_fibers():
    E = FunctionFieldCurve.from_lists([], [], [], [], [1])
    assert [r for r in classify_fibers(E, 1) if not r.is_infinity] == []


@pytest.mark.parametrize(
    "rho, counts, rank",
    [(20, [12, 2, 2, 3, 3, 1, 1], 1), (2, [], 0), (10, [6, 3, 2, 1], 0)],
)
def test_shioda_rank(rho, counts, rank):
    assert shioda_rank(ShiodaInput(rho, counts)) == rank


def test_shioda_rank_negative():
    with pytest.raises(InconsistencyError):
        shioda_rank(ShiodaInput(3, [3]))
    with pytest.raises(DomainError):
        ShiodaInput(1, [])


# -- group law


def test_point_normalization():
    P = CurvePoint(s.scale(2), ExactPolynomial.constant(2), ExactPolynomial.constant(2))
    assert P == CurvePoint(s, ExactPolynomial.constant(1), ExactPolynomial.constant(1))
    with pytest.raises(DomainError):
        CurvePoint(s, ExactPolynomial.constant(1), ExactPolynomial.zero())


def test_torsion_points_on_curve(es, torsion):
    for P in torsion:
        assert verify_section(es, P).is_zero()


def test_section_over_q_sqrt_minus_3(es):
    sigma = sections_for("es")["sigma"]
    assert verify_section(es, sigma).is_zero()
    assert is_on_curve(es, sigma)
    assert recover_y(es, sigma.X, sigma.Z).exists
    assert point_order(es, sigma, 6) is None


def test_identity(es, torsion):
    O, s6 = torsion[0], torsion[1]
    assert O.is_infinity
    assert group_add(es, O, s6) == s6
    assert group_add(es, s6, O) == s6


def test_multiples_of_s6(es, torsion):
    s6 = torsion[1]
    for k in range(1, 6):
        assert multiply(es, s6, k) == torsion[k]
        assert not multiply(es, s6, k).is_infinity
    assert multiply(es, s6, 6).is_infinity
    assert multiply(es, s6, 2).X == s ** 4


def test_negation(es, torsion):
    s6 = torsion[1]
    assert negate(es, s6) == torsion[5]
    assert group_add(es, s6, torsion[5]).is_infinity
    assert multiply(es, s6, -1) == torsion[5]


def test_orders(es, torsion):
    assert [point_order(es, P) for P in torsion] == [1, 6, 3, 2, 3, 6]


def test_group_law_on_torsion_subgroup(es, torsion):
    for i, j in product(range(6), repeat=2):
        total = group_add(es, torsion[i], torsion[j])
        assert total == torsion[(i + j) % 6]
        assert total == group_add(es, torsion[j], torsion[i])


@given(st.integers(0, 5), st.integers(0, 5), st.integers(0, 5))
def test_associativity(i, j, k):
    es = load_curve("es")
    points = sections_for("es")
    t = [points[n] for n in ("zero", "s6", "2s6", "3s6", "4s6", "5s6")]
    left = group_add(es, group_add(es, t[i], t[j]), t[k])
    right = group_add(es, t[i], group_add(es, t[j], t[k]))
    assert left == right


def test_add_rejects_points_off_curve(es, torsion):
    off = CurvePoint(s, ExactPolynomial.constant(1), ExactPolynomial.constant(1))
    assert not is_on_curve(es, off)
    with pytest.raises(DomainError):
        group_add(es, off, torsion[1])


def test_recover_y(es, torsion):
    s6 = torsion[1]
    assert recover_y(es, s6.X, s6.Z).exists
    generic = recover_y(es, s, ExactPolynomial.constant(1))
    assert not generic.exists
    assert generic.y is None
    with pytest.raises(DomainError):
        recover_y(es, s, ExactPolynomial.zero())
