import io
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import make_positions, panel_csv
from crossnet.errors import (
    DuplicateRecord,
    EmptyPanel,
    GapInPeriods,
    MalformedHeader,
    MalformedPeriod,
    MalformedValue,
    RangeOutOfBounds,
    UnknownEntity,
)
from crossnet.ingest import (
    Panel,
    Role,
    RoleAssignment,
    average_position,
    classify_roles,
    compute_positions,
    format_panel,
    format_roles,
    parse_panel,
    quarter_index,
    quarter_label,
    rank_by_magnitude,
    slice_periods,
)

MINIMAL = """entity,period,claims,liabilities
US,1983Q1,5,3
US,1983Q2,0,7
AT,1983Q1,1.5,1.5
AT,1983Q2,2e3,10
"""


def parse(text):
    return parse_panel(io.StringIO(text))


def test_minimal_panel():
    p = parse(MINIMAL)
    assert p.entities == ("AT", "US")
    assert p.periods == ("1983Q1", "1983Q2")
    assert p.claims.shape == p.liabilities.shape == (2, 2)
    np.testing.assert_array_equal(p.claims, [[1.5, 2000.0], [5.0, 0.0]])


def test_shuffled_rows_give_identical_panel():
    header, *rows = MINIMAL.strip().split("\n")
    for seed in range(5):
        random.Random(seed).shuffle(rows)
        assert parse("\n".join([header, *rows])) == parse(MINIMAL)


def test_crlf_and_blank_lines():
    assert parse(MINIMAL.replace("\n", "\r\n") + "\r\n") == parse(MINIMAL)


def test_year_boundary_is_consecutive():
    text = "entity,period,claims,liabilities\nA,1983Q4,1,0\nA,1984Q1,2,0\n"
    assert parse(text).periods == ("1983Q4", "1984Q1")


def test_gap_in_periods():
    text = "entity,period,claims,liabilities\nA,1983Q1,1,0\nA,1983Q3,1,0\n"
    with pytest.raises(GapInPeriods, match="1983Q2"):
        parse(text)


def test_entity_missing_a_quarter_others_have():
    text = MINIMAL + "US,1983Q3,1,1\n"
    with pytest.raises(GapInPeriods, match="AT"):
        parse(text)


def test_duplicate_record():
    with pytest.raises(DuplicateRecord):
        parse(MINIMAL + "US,1983Q1,9,9\n")


@pytest.mark.parametrize("value", ["abc", "1,000", "nan", "inf", "1_000", ""])
def test_malformed_value(value):
    text = f'entity,period,claims,liabilities\nA,1983Q1,"{value}",0\n'
    with pytest.raises(MalformedValue):
        parse(text)


@pytest.mark.parametrize("label", ["1983Q5", "1983-Q1", "83Q1", "1983q1", "1983Q0"])
def test_malformed_period(label):
    with pytest.raises(MalformedPeriod):
        parse(f"entity,period,claims,liabilities\nA,{label},1,0\n")


def test_bad_header_and_empty():
    with pytest.raises(MalformedHeader):
        parse("country,quarter,c,l\nA,1983Q1,1,0\n")
    with pytest.raises(EmptyPanel):
        parse("")
    with pytest.raises(EmptyPanel):
        parse("entity,period,claims,liabilities\n")


def test_quarter_labels_round_trip():
    for label in ["1983Q1", "1997Q4", "2011Q2"]:
        assert quarter_label(quarter_index(label)) == label
    assert quarter_index("1984Q1") - quarter_index("1983Q4") == 1


def test_panel_is_read_only():
    p = parse(MINIMAL)
    with pytest.raises(ValueError):
        p.claims[0, 0] = 1.0


amounts = st.floats(-1e12, 1e12, allow_nan=False, allow_infinity=False)


@settings(max_examples=50, deadline=None)
@given(data=st.data(), N=st.integers(1, 4), n=st.integers(1, 6))
def test_round_trip(data, N, n):
    claims = data.draw(arrays(np.float64, (N, n), elements=amounts))
    liabilities = data.draw(arrays(np.float64, (N, n), elements=amounts))
    p = parse(panel_csv(claims, liabilities))
    assert parse(format_panel(p)) == p


# ----------------------------------------------------------------- positions


def test_positions_examples():
    m = compute_positions(parse(MINIMAL))
    assert m.series("US").tolist() == [2.0, -7.0]
    assert m.series("AT")[0] == 0.0


def test_equal_claims_and_liabilities_give_zero_positions():
    c = np.arange(12.0).reshape(3, 4)
    m = compute_positions(parse(panel_csv(c, c)))
    assert not m.positions.any()


@settings(max_examples=50, deadline=None)
@given(
    claims=arrays(np.float64, (3, 5), elements=st.floats(-1e6, 1e6)),
    liabilities=arrays(np.float64, (3, 5), elements=st.floats(-1e6, 1e6)),
    alpha=st.floats(-1e3, 1e3),
)
def test_positions_linear(claims, liabilities, alpha):
    base = compute_positions(Panel(("A", "B", "C"), ("1990Q1", "1990Q2", "1990Q3", "1990Q4", "1991Q1"), claims, liabilities))
    scaled = compute_positions(Panel(base.entities, base.periods, alpha * claims, alpha * liabilities))
    np.testing.assert_allclose(scaled.positions, alpha * base.positions, rtol=1e-12, atol=1e-12 * (1 + abs(alpha) * 2e6))


# ----------------------------------------------------------------- slicing


def test_identity_slice():
    m = make_positions(np.arange(20.0).reshape(2, 10))
    assert slice_periods(m, m.periods[0], m.periods[-1]) == m


def test_halves_concatenate_back():
    m = make_positions(np.random.default_rng(0).normal(size=(3, 110)))
    a = slice_periods(m, m.periods[0], m.periods[54])
    b = slice_periods(m, m.periods[55], m.periods[-1])
    assert len(a.periods) == len(b.periods) == 55
    assert a.periods + b.periods == m.periods
    np.testing.assert_array_equal(np.hstack([a.positions, b.positions]), m.positions)


def test_slice_errors():
    m = make_positions(np.zeros((1, 8)))
    with pytest.raises(RangeOutOfBounds):
        slice_periods(m, m.periods[5], m.periods[2])
    with pytest.raises(RangeOutOfBounds):
        slice_periods(m, "1970Q1", m.periods[2])


@settings(max_examples=50, deadline=None)
@given(data=st.data())
def test_slice_then_average(data):
    n = data.draw(st.integers(1, 12))
    values = data.draw(arrays(np.float64, (2, n), elements=st.floats(-1e6, 1e6)))
    a = data.draw(st.integers(0, n - 1))
    b = data.draw(st.integers(a, n - 1))
    m = make_positions(values)
    sliced = slice_periods(m, m.periods[a], m.periods[b])
    for i, e in enumerate(m.entities):
        assert average_position(sliced, e) == np.sum(values[i, a : b + 1]) / (b - a + 1)


# ----------------------------------------------------------------- roles


@pytest.mark.parametrize(
    "series, expected",
    [([2, 4], 3.0), ([0, 0, 0], 0.0), ([1, -1, 1, -1], 0.0)],
)
def test_average_position(series, expected):
    m = make_positions([series])
    assert average_position(m, "E00") == expected


def test_average_position_unknown_entity():
    with pytest.raises(UnknownEntity):
        average_position(make_positions([[1, 2]]), "XX")


def test_classify_roles():
    m = make_positions([[10, 10], [-10, -10], [5, -5]], entities=["ZZ", "AA", "MM"])
    roles = classify_roles(m)
    assert [(a.entity, a.role) for a in roles] == [
        ("AA", Role.DEBTOR),
        ("MM", Role.NEUTRAL),
        ("ZZ", Role.CREDITOR),
    ]
    assert roles[2].average_position == 10.0


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 6), st.integers(1, 5)), elements=st.floats(-1e3, 1e3)))
def test_roles_partition_entities(values):
    m = make_positions(values)
    roles = classify_roles(m)
    assert sorted(a.entity for a in roles) == sorted(m.entities)
    for a in roles:
        assert (a.role is Role.CREDITOR) == (a.average_position > 0)
        assert (a.role is Role.DEBTOR) == (a.average_position < 0)
        assert (a.role is Role.NEUTRAL) == (a.average_position == 0)


def _ra(entity, value):
    role = Role.CREDITOR if value > 0 else Role.DEBTOR if value < 0 else Role.NEUTRAL
    return RoleAssignment(entity, value, role)


def test_rank_by_magnitude():
    roles = [_ra("A", 5), _ra("B", 2), _ra("C", -9)]
    creditors, debtors = rank_by_magnitude(roles, 1)
    assert [a.entity for a in creditors] == ["A"]
    assert [a.entity for a in debtors] == ["C"]
    assert rank_by_magnitude(roles, 0) == ([], [])
    creditors, debtors = rank_by_magnitude(roles, 10)
    assert [a.entity for a in creditors] == ["A", "B"]
    assert [a.entity for a in debtors] == ["C"]


def test_rank_ties_broken_by_entity():
    roles = [_ra("Y", 3), _ra("X", 3), _ra("Q", -1), _ra("P", -1), _ra("N", 0)]
    creditors, debtors = rank_by_magnitude(roles, 2)
    assert [a.entity for a in creditors] == ["X", "Y"]
    assert [a.entity for a in debtors] == ["P", "Q"]


def test_roles_csv():
    text = format_roles([_ra("A", 0.1), _ra("B", -2.0), _ra("C", 0.0)])
    assert text == "entity,average_position,role\nA,0.10000000000000001,Creditor\nB,-2,Debtor\nC,0,Neutral\n"
