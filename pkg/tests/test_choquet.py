from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

import _support as S
from lowerprev import (Capacity, DomainError, Partition, PowersetLowerProbability, Universe,
                       choquet_extension, choquet_integral, choquet_layer, choquet_signed,
                       comonotone, e_lp)


def test_reference_fixtures():
    lp, x, _ = S.envelope3()
    assert choquet_integral(lp, x) == F(9, 5) == e_lp(lp.to_assessment(), x).value
    lp4, z = S.four_atoms()
    assert choquet_integral(lp4, z) == F(2, 5)
    assert choquet_layer(lp4, z) == choquet_signed(lp4, z) == F(2, 5)


def test_indicators_give_back_the_capacity():
    lp, _ = S.four_atoms()
    ext = choquet_extension(lp)
    assert ext.guarantee == "2-coherent"
    for e in lp.events():
        assert ext(lp.universe.indicator(e)) == lp(e)


def test_capacity_validation():
    u = Universe("ab")
    p = u.singleton_partition()
    with pytest.raises(ValueError):
        Capacity(p, {u.empty: 0, u.event("a"): "0.5", u.event("b"): 0, u.omega: "0.4"})
    with pytest.raises(ValueError):
        Capacity(p, {u.empty: "0.1", u.event("a"): "0.5", u.event("b"): 0, u.omega: 1})
    over = PowersetLowerProbability(p, {u.empty: 0, u.event("a"): "0.7", u.event("b"): "0.7",
                                        u.omega: 1})
    assert choquet_extension(over).guarantee == "2-convex"


def test_non_measurable_gamble_is_rejected():
    u = Universe(["a1", "a2", "b"])
    p = Partition(u, [["a1", "a2"], ["b"]])
    mu = Capacity(p, lambda e: 1 if len(e) == 3 else 0)
    with pytest.raises(DomainError):
        choquet_integral(mu, u.gamble([0, 1, 2]))


def test_comonotone_examples():
    u = Universe(range(3))
    x = u.gamble([0, 2, 1])
    assert comonotone(x, x * x)
    assert comonotone(u.constant(3), x)
    two = Universe(range(2))
    assert not comonotone(two.gamble([0, 1]), two.gamble([1, 0]))


vals = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4), min_size=3, max_size=3)


@settings(max_examples=80, deadline=None)
@given(vals, st.integers(0, 10 ** 6))
def test_three_forms_agree(values, seed):
    import random
    rng = random.Random(seed)
    u = Universe(range(3))
    mu = S.random_capacity_values(rng, u.singleton_partition())
    x = u.gamble(values)
    assert choquet_integral(mu, x) == choquet_layer(mu, x) == choquet_signed(mu, x)
