import itertools
import random
from fractions import Fraction as F

import pytest

import _support as S
from lowerprev import (Assessment, DomainError, PowersetLowerProbability, PreconditionError,
                       SubspaceDomain, Universe, check_2coherent, check_2convex, check_coherent,
                       check_convex, e2_lp, e2_powerset, e2c_direct, e2c_plus_subspace,
                       e2c_powerset, e_lp, e_subspace, ec_lp, finiteness_report)
from lowerprev.consistency import expectation
from lowerprev.extensions import ExtensionResult


def _vacuous(u):
    n = len(u)
    return PowersetLowerProbability(u.singleton_partition(), lambda e: 1 if len(e) == n else 0)


def test_two_world_identities_at_two_fifths():
    u = Universe(["w0", "w1"])
    x = u.gamble([0, 1])
    a = Assessment([(x, "0.4")])
    assert e_lp(a, x * 2).value == F(4, 5)
    assert e2_lp(a, x * 2).value == F(4, 5)
    assert ec_lp(a, x * 2).value == F(2, 5)
    assert e2c_direct(a, x * 2).value == F(2, 5)


def test_unbounded_natural_extension_carries_a_ray():
    a = S.atoms_assessment(3, F(1, 10))
    r = e_lp(a, a.universe.constant(0))
    assert not r.is_finite and all(c >= 0 for c in r.achiever)


def test_finiteness_reports():
    assert finiteness_report(S.atoms_assessment(4, F(8, 10))) == \
        {"E": "infinite", "E2": "infinite", "Ec": "finite", "E2c": "finite"}
    assert finiteness_report(S.atoms_assessment(3, F(1, 10))) == \
        {"E": "infinite", "E2": "finite", "Ec": "finite", "E2c": "finite"}
    lp, _, _ = S.envelope3()
    assert set(finiteness_report(lp.to_assessment()).values()) == {"finite"}


def test_truncated_sequence_e2c_of_zero():
    a = S.truncated_sequence(5, F(1, 2))
    assert e2c_direct(a, a.universe.constant(0)).value == F(1, 2)


def test_closed_forms_on_simple_inputs():
    lp, z = S.four_atoms()
    u = lp.universe
    r = e2c_powerset(lp, z)
    assert r.value == F(-3, 10) and r.achiever == u.event("bcd")
    assert e2_powerset(lp, u.constant(7)).value == 7
    assert e2c_powerset(lp, u.constant(7)).value == 7
    vac = _vacuous(u)
    rng = random.Random(0)
    for _ in range(20):
        zz = S.random_measurable_gamble(rng, vac.partition)
        assert e2_powerset(vac, zz).value == zz.inf() == e2_lp(vac.to_assessment(), zz).value


def test_e2c_returns_the_assessment_on_indicators():
    lp, _ = S.four_atoms()
    u = lp.universe
    for e in lp.events():
        assert e2c_powerset(lp, u.indicator(e)).value == lp(e)


def test_closed_form_preconditions():
    u = Universe("ab")
    p = u.singleton_partition()
    bad = PowersetLowerProbability.from_atom_labels(p, {"": 0, "a": "0.7", "b": "0.7", "a b": 1})
    with pytest.raises(PreconditionError):
        e2_powerset(bad, u.gamble([0, 1]))
    lp, _ = S.four_atoms()
    from lowerprev import Partition
    coarse_u = Universe(["a1", "a2", "b"])
    coarse = PowersetLowerProbability(Partition(coarse_u, [["a1", "a2"], ["b"]]),
                                      lambda e: 1 if len(e) == 3 else 0)
    with pytest.raises(DomainError):
        e2_powerset(coarse, coarse_u.gamble([0, 1, 2]))


def test_extension_result_validates_kind():
    with pytest.raises(ValueError):
        ExtensionResult("nope", 0)


def test_subspace_fixture_values():
    lp, z, pmfs = S.envelope3()
    u = lp.universe
    d = SubspaceDomain([u.constant(1), u.indicator(["w1", "w2"])], pmfs[:2])
    # oracle: Y = c0 + c1 I(w1∨w2) <= Z on a grid of quarter steps
    best = None
    for c0, c1 in itertools.product([F(i, 4) for i in range(-16, 17)], repeat=2):
        y = u.constant(c0) + u.indicator(["w1", "w2"]) * c1
        if y <= z:
            v = min(expectation(q, y) for q in pmfs[:2])
            best = v if best is None or v > best else best
    assert best == F(7, 5)
    assert e_subspace(d, z).value == F(7, 5)
    assert e2c_plus_subspace(d, z).value == F(7, 5)
    const = SubspaceDomain([u.constant(1)], pmfs[:2])
    assert e_subspace(const, z).value == 0 == e2c_plus_subspace(const, z).value
    full = SubspaceDomain([u.constant(1), u.indicator(["w1"]), u.indicator(["w2"])], pmfs[:2])
    assert e_subspace(full, z).value == min(expectation(q, z) for q in pmfs[:2])
    assert e2c_plus_subspace(full, z).value == F(9, 5)


def test_subspace_domain_validation():
    u = Universe("ab")
    q = u.gamble(["0.5", "0.5"])
    with pytest.raises(ValueError):
        SubspaceDomain([u.gamble([1, 0])], [q])
    with pytest.raises(ValueError):
        SubspaceDomain([u.constant(1), u.constant(2)], [q])


def _random_general(rng):
    n = rng.choice([2, 3])
    u = Universe(range(n))
    items = {}
    for _ in range(rng.randint(1, 4)):
        g = u.gamble([rng.randint(-3, 3) for _ in range(n)])
        items.setdefault(g, F(rng.randint(4 * int(g.inf()) - 4, 4 * int(g.sup()) + 4), 4))
    return Assessment(list(items.items()))


def test_ordering_chain_with_infinities():
    rng = random.Random(21)
    for _ in range(200):
        a = _random_general(rng)
        z = a.universe.gamble([rng.randint(-4, 4) for _ in a.universe.worlds])
        e, e2, ec, e2c = (f(a, z).value for f in (e_lp, e2_lp, ec_lp, e2c_direct))
        assert e >= e2 >= e2c
        assert e >= ec >= e2c


def test_restriction_property():
    rng = random.Random(22)
    matched = 0
    for _ in range(200):
        a = _random_general(rng)
        pairs = ((check_coherent, e_lp), (check_2coherent, e2_lp),
                 (check_convex, ec_lp), (check_2convex, e2c_direct))
        for check, ext in pairs:
            if check(a):
                matched += 1
                for cg, v in a:
                    assert ext(a, cg.gamble).value == v
    assert matched > 100


def test_axioms_on_extensions_of_2coherent_powersets():
    rng = random.Random(23)
    for _ in range(60):
        lp = S.random_2coherent_powerset(rng)
        a = lp.to_assessment()
        z = S.random_measurable_gamble(rng, lp.partition, den=2)
        bump = S.random_measurable_gamble(rng, lp.partition, 0, 3)
        c = F(rng.randint(-8, 8), 3)
        lam = F(rng.randint(1, 8), 3)
        for ext in (e_lp, e2_lp, ec_lp, e2c_direct):
            v = ext(a, z).value
            assert ext(a, z + c).value == v + c
            assert ext(a, z + bump).value >= v
        for ext in (e_lp, e2_lp):
            assert ext(a, z * lam).value == ext(a, z).value * lam
        e2 = e2_lp(a, z).value
        assert z.inf() <= e2 <= z.sup()
        assert e2_lp(a, z * -lam).value <= e2 * -lam
        if check_coherent(a):
            assert z.inf() <= e_lp(a, z).value <= z.sup()
        e2c = e2c_powerset(lp, z).value
        assert z.inf() <= e2c <= z.sup()
        assert e2c_powerset(lp, z * lam).value <= lam * z.inf() + 1
