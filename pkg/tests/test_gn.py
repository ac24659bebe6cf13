import itertools
from fractions import Fraction as F

import pytest

import _support as S
from lowerprev import (ConditionalEvent, DegenerateInputError, FullConditionalAssessment,
                       Partition, Universe, e_lp, gn_leq, gn_lower_extension, gn_upper_extension,
                       inner_conditional, inner_event, outer_conditional, outer_event)


def ce(u, c, d):
    return ConditionalEvent(u.event(c), u.event(d))


def _three_atoms():
    u = Universe(["a1", "a2", "b", "c"])
    return u, Partition(u, [["a1", "a2"], ["b"], ["c"]])


def test_gn_order_examples():
    u = Universe("abcd")
    assert gn_leq(ce(u, "a", "ab"), ce(u, "ac", "abc"))
    assert gn_leq(ce(u, "", "ab"), ce(u, "abcd", "cd"))
    x = ce(u, "a", "abc")
    assert gn_leq(x, x)


def test_inner_and_outer_events():
    u, p = _three_atoms()
    e = u.event(["a1", "a2", "b"])
    assert inner_event(e, p) == e == outer_event(e, p)
    assert inner_event(u.event(["a1"]), p) == u.empty
    assert outer_event(u.event(["a1"]), p) == u.event(["a1", "a2"])
    assert inner_event(u.event(["a1", "b"]), p) == u.event(["b"])
    assert outer_event(u.event(["a1", "b"]), p) == u.event(["a1", "a2", "b"])


def test_measurable_conditional_events_are_fixed_points():
    u, p = _three_atoms()
    cd = ce(u, ["b"], ["a1", "a2", "b"])
    assert inner_conditional(cd, p) == cd == outer_conditional(cd, p)


def test_unconditional_straddling_event():
    u = Universe(["a1", "a2", "b", "c", "d"])
    p = Partition(u, [["a1", "a2"], ["b"], ["c"], ["d"]])
    cd = ce(u, ["a1", "b"], u.worlds)
    lo = inner_conditional(cd, p)
    hi = outer_conditional(cd, p)
    assert lo.antecedent == u.event(["b"]) and lo.conditioning == u.omega
    assert hi.antecedent == u.event(["a1", "a2", "b"]) and hi.conditioning == u.omega


def test_trivial_queries_are_rejected():
    u, p = _three_atoms()
    with pytest.raises(DegenerateInputError):
        inner_conditional(ce(u, [], ["b"]), p)
    with pytest.raises(DegenerateInputError):
        outer_conditional(ce(u, ["b", "c"], ["b"]), p)
    with pytest.raises(DegenerateInputError):
        ce(u, ["b"], [])


def _conditional_events(u):
    events = [u.event(s) for s in S.subsets(u.worlds)]
    return [ConditionalEvent(c, d) for d in events if d for c in events]


def test_order_properties_exhaustively():
    u = Universe(["a1", "a2", "b"])
    p = Partition(u, [["a1", "a2"], ["b"]])
    nontrivial = [x for x in _conditional_events(u) if not x.is_trivial]
    for x in nontrivial:
        assert gn_leq(x, x)
    for x, y, z in itertools.product(nontrivial, repeat=3):
        if gn_leq(x, y) and gn_leq(y, z):
            assert gn_leq(x, z)
    for x, y in itertools.product(nontrivial, repeat=2):
        if gn_leq(x, y):
            assert gn_leq(inner_conditional(x, p), inner_conditional(y, p))
            assert gn_leq(outer_conditional(x, p), outer_conditional(y, p))


def test_full_assessment_totality_and_lookup():
    u, p = _three_atoms()
    pmfs = [{"a1": "0.1", "a2": "0.2", "b": "0.3", "c": "0.4"},
            {"a1": "0.3", "a2": "0.1", "b": "0.1", "c": "0.5"}]
    f = FullConditionalAssessment.lower_envelope(p, pmfs)
    cd = ce(u, ["b"], ["b", "c"])
    assert f(cd) == min(F(3, 7), F(1, 6))
    assert gn_lower_extension(f, cd) == f(cd) == gn_upper_extension(f, cd)
    partial = dict(list({(k.antecedent, k.conditioning): v for k, v in f.items()}.items())[:-1])
    with pytest.raises(ValueError):
        FullConditionalAssessment(p, partial)
    with pytest.raises(DegenerateInputError):
        FullConditionalAssessment.lower_envelope(p, [{"a1": "0.5", "a2": "0.5"}])


def test_unconditional_lower_extension_matches_natural_extension():
    u, p = _three_atoms()
    pmfs = [{"a1": "0.1", "a2": "0.2", "b": "0.3", "c": "0.4"},
            {"a1": "0.3", "a2": "0.1", "b": "0.1", "c": "0.5"}]
    f = FullConditionalAssessment.lower_envelope(p, pmfs)
    unconditional = f.to_assessment()
    from lowerprev import Assessment
    a = Assessment([(cg.gamble, v) for cg, v in unconditional if cg.is_unconditional])
    for c in S.subsets(u.worlds):
        cd = ConditionalEvent(u.event(c), u.omega)
        if cd.is_trivial:
            continue
        inner = p.inner(u.event(c))
        assert gn_lower_extension(f, cd) == e_lp(a, u.indicator(inner)).value
