from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charnum.series import DiffOperator, SeriesTable, VarSpace, VariableMismatch, series_product

SP = VarSpace(("s",), ("u", "v", "w"))


def table(entries, dmax=6, space=SP):
    return SeriesTable(space, dmax, {(tuple(d), tuple(m)): Fraction(v) for (d, m), v in entries.items()})


def test_unit_product_adds_degrees():
    f = table({((1,), (0, 0, 0)): 1})
    g = table({((1,), (0, 0, 0)): 1})
    assert (f * g).entries == {((2,), (0, 0, 0)): 1}


def test_product_with_zero_table():
    f = table({((1,), (2, 0, 0)): 5})
    z = table({})
    assert (f * z).is_zero()


def test_egf_binomial_convolution():
    # v^1-coefficient tables multiply to a v^2 entry with binomial factor 2
    f = table({((1,), (0, 1, 0)): 1})
    assert (f * f).entries == {((2,), (0, 2, 0)): 2}


def test_degree_variable_derivative_scales():
    f = table({((3,), (1, 2, 0)): 7})
    assert f.partial("s").entries == {((3,), (1, 2, 0)): 21}


def test_exponent_derivative_shifts_index():
    f = table({((2,), (1, 3, 0)): 5})
    assert f.partial("v").entries == {((2,), (1, 2, 0)): 5}
    assert f.partial("w").is_zero()


def test_unknown_variable_rejected():
    f = table({((1,), (0, 0, 0)): 1})
    with pytest.raises(KeyError):
        f.partial("z")


def test_monomial_multiplication_egf_factor():
    # v * (v^b/b!) = (b+1) v^{b+1}/(b+1)!
    f = table({((1,), (0, 3, 0)): 1})
    assert f.times_monomial({"v": 1}).entries == {((1,), (0, 4, 0)): 4}
    assert f.times_monomial({"v": 2}).entries == {((1,), (0, 5, 0)): 20}


def test_operator_on_degree_stratum():
    L = DiffOperator.build([(1, {}, "s"), (2, {"v": 1}, "u")])
    f = table({((4,), (0, 0, 0)): 3})
    assert L(f).entries == {((4,), (0, 0, 0)): 12}


def test_point_operator_example():
    # on a (d;0,0,0) entry N only 2v d/ds acts: entry (d;0,1,0) value 2dN
    P = DiffOperator.build([(2, {"v": 1}, "s"), (2, {"v": 2}, "u"), (2, {"w": 1}, "u")])
    f = table({((3,), (0, 0, 0)): 5})
    assert P(f).entries == {((3,), (0, 1, 0)): 30}


def test_zero_operator():
    op = DiffOperator.build([(0, {}, "s")])
    f = table({((1,), (1, 1, 1)): 9})
    assert op(f).is_zero()


def test_variable_mismatch():
    other = SeriesTable(VarSpace(("t",), ("v",)), 4, {((1,), (0,)): Fraction(1)})
    f = table({((1,), (0, 0, 0)): 1})
    with pytest.raises(VariableMismatch):
        series_product(f, other)


def test_no_floats_accepted():
    with pytest.raises(TypeError):
        SeriesTable(SP, 4, {((1,), (0, 0, 0)): 0.5})
    f = table({((1,), (0, 0, 0)): 1})
    with pytest.raises(TypeError):
        f.scale(0.5)


def keys():
    return st.tuples(
        st.tuples(st.integers(0, 2)),
        st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2)),
    )


def tables():
    return st.dictionaries(keys(), st.fractions(min_value=-3, max_value=3), max_size=4).map(
        lambda d: SeriesTable(SP, 5, d)
    )


@settings(max_examples=60, deadline=None)
@given(tables(), tables())
def test_product_commutative(f, g):
    assert f * g == g * f


@settings(max_examples=40, deadline=None)
@given(tables(), tables(), tables())
def test_product_associative(f, g, h):
    assert (f * g) * h == f * (g * h)


@settings(max_examples=40, deadline=None)
@given(tables(), tables(), st.sampled_from(["s", "u", "v", "w"]))
def test_leibniz_rule(f, g, var):
    lhs = (f * g).partial(var)
    rhs = f.partial(var) * g + f * g.partial(var)
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(tables(), st.sampled_from(["s", "u", "v", "w"]), st.sampled_from(["s", "u", "v", "w"]))
def test_partials_commute(f, x, y):
    assert f.partial(x).partial(y) == f.partial(y).partial(x)


def test_serialization_roundtrip():
    f = table({((2,), (1, 0, 3)): Fraction(-7, 3), ((1,), (0, 2, 0)): 4})
    assert SeriesTable.from_text(f.to_text()) == f


def test_serialization_is_sorted():
    f = table({((2,), (0, 0, 0)): 1, ((1,), (5, 0, 0)): 2})
    body = f.to_text().splitlines()[2:]
    assert body == sorted(body)


def test_substitute_splits_variable():
    # x = u + v on an x^2/2! entry: every mixed stratum keeps the invariant
    src = VarSpace(("s",), ("x",))
    f = SeriesTable(src, 3, {((1,), (2,)): Fraction(6)})
    out = f.substitute(SP, {"x": [(1, "u"), (1, "v")]})
    assert out.entries == {
        ((1,), (2, 0, 0)): 6,
        ((1,), (1, 1, 0)): 6,
        ((1,), (0, 2, 0)): 6,
    }


def test_substitute_with_coefficient():
    src = VarSpace(("s",), ("x",))
    f = SeriesTable(src, 3, {((1,), (1,)): Fraction(1)})
    out = f.substitute(SP, {"x": [(1, "u"), (2, "v")]})
    assert out.entries == {((1,), (1, 0, 0)): 1, ((1,), (0, 1, 0)): 2}


def test_substitute_to_zero_kills_entries():
    src = VarSpace(("s",), ("x", "y"))
    f = SeriesTable(src, 3, {((1,), (1, 0)): Fraction(2), ((1,), (0, 1)): Fraction(3)})
    out = f.substitute(SP, {"x": [(1, "u")], "y": []})
    assert out.entries == {((1,), (1, 0, 0)): 2}
