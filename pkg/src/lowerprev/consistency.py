"""Consistency checks for finite lower previsions.

Each check returns a :class:`ConsistencyVerdict`.  A failing verdict
carries a :class:`Witness`: the coefficients of a gain

    G = sum_i s_i B_i (X_i - P(X_i|B_i)) - s_0 B_0 (X_0 - P(X_0|B_0))

whose supremum over ``S(s)`` (the union of the conditioning events with a
non-zero coefficient) is negative.  :func:`gain_supremum` replays a
witness from scratch.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import lp as _lp
from .core import (Assessment, ConditionalGamble, Event, ExtendedRational, Gamble,
                   Number, PowersetLowerProbability, PreconditionError, to_rational)

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class Witness:
    """Coefficients of a gain with negative conditional supremum.

    ``sold`` is the index of the item entering with a minus sign (``None``
    when every term is bought); ``bought`` maps item indices to their
    non-negative coefficients.
    """

    bought: tuple
    sold: Optional[int] = None
    sold_coef: Fraction = _ZERO
    supremum: Optional[Fraction] = None

    def describe(self, a: Assessment) -> str:
        parts = [f"+{c}·[{a[i][0].label()} at {a[i][1]}]" for i, c in self.bought]
        if self.sold is not None:
            parts.append(f"-{self.sold_coef}·[{a[self.sold][0].label()} at {a[self.sold][1]}]")
        return " ".join(parts)


@dataclass(frozen=True)
class ConsistencyVerdict:
    holds: bool
    witness: Optional[Witness] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.holds


def _ok() -> ConsistencyVerdict:
    return ConsistencyVerdict(True)


def _fail(a: Optional[Assessment], w: Witness, reason: str) -> ConsistencyVerdict:
    if a is not None and w.supremum is None:
        w = Witness(w.bought, w.sold, w.sold_coef, gain_supremum(a, w))
    return ConsistencyVerdict(False, w, reason)


def gain(a: Assessment, w: Witness) -> tuple[Gamble, Event]:
    """The gain gamble of ``w`` and the event ``S(s)`` it is judged on."""
    u = a.universe
    g = u.constant(0)
    support = u.empty
    for i, c in w.bought:
        c = to_rational(c)
        if c < 0:
            raise ValueError("bought coefficients must be non-negative")
        if c == 0:
            continue
        cg, p = a[i]
        g = g + (cg.gamble - p).restricted(cg.conditioning) * c
        support = support | cg.conditioning
    if w.sold is not None and w.sold_coef != 0:
        if w.sold_coef < 0:
            raise ValueError("the sold coefficient must be non-negative")
        cg, p = a[w.sold]
        g = g - (cg.gamble - p).restricted(cg.conditioning) * w.sold_coef
        support = support | cg.conditioning
    return g, support


def gain_supremum(a: Assessment, w: Witness) -> Fraction:
    """``sup{G | S(s)}`` for the gain described by ``w``."""
    g, support = gain(a, w)
    if not support:
        raise ValueError("witness has no non-zero coefficient")
    return max(v for world, v in g.items() if world in support.members)


def _payoffs(a: Assessment) -> list[list[Fraction]]:
    # row i: B_i (X_i - P_i) evaluated world by world
    out = []
    for cg, p in a:
        cond = cg.conditioning.members
        out.append([(x - p) if w in cond else _ZERO for w, x in cg.gamble.items()])
    return out


def _minimax_lp(payoffs: Sequence[Sequence[Fraction]], offset: Sequence[Fraction],
                simplex: bool) -> _lp.LpOutcome:
    """min t  s.t.  t >= sum_i s_i payoffs[i][w] + offset[w] for every world.

    Variables are ``s_0 .. s_{k-1} >= 0`` and a free ``t`` (last); with
    ``simplex`` the coefficients must also sum to one.
    """
    k = len(payoffs)
    nw = len(offset)
    cons = []
    for w in range(nw):
        cons.append(_lp.Constraint([-payoffs[i][w] for i in range(k)] + [1], _lp.GE, offset[w]))
    if simplex:
        cons.append(_lp.Constraint([1] * k + [0], _lp.EQ, 1))
    bounds = [(0, None)] * k + [(None, None)]
    return _lp.solve(_lp.LinearProgram([0] * k + [1], cons, sense="min", bounds=bounds))


def check_coherent(a: Assessment) -> ConsistencyVerdict:
    """Williams coherence of an unconditional assessment.

    For each item ``X_0`` the selling coefficient is fixed to one and the
    buying coefficients range over ``s >= 0``; the assessment is coherent
    iff none of these programs has a negative (or unbounded) minimum.
    """
    a.require_unconditional("check_coherent")
    pay = _payoffs(a)
    for k in range(len(a)):
        offset = [-v for v in pay[k]]
        out = _minimax_lp(pay, offset, simplex=False)
        if out.status is _lp.Status.UNBOUNDED:
            ray = out.ray[:-1]
            w = Witness(tuple((i, c) for i, c in enumerate(ray) if c))
            return _fail(a, w, "avoids sure loss fails (unbounded gain program)")
        if out.value < 0:
            s = out.solution[:-1]
            w = Witness(tuple((i, c) for i, c in enumerate(s) if c), sold=k, sold_coef=_ONE)
            return _fail(a, w, f"selling item {k} against a combination loses surely")
    return _ok()


def check_convex(a: Assessment) -> ConsistencyVerdict:
    """Convexity: as coherence, but with buying coefficients summing to one."""
    a.require_unconditional("check_convex")
    pay = _payoffs(a)
    for k in range(len(a)):
        offset = [-v for v in pay[k]]
        out = _minimax_lp(pay, offset, simplex=True)
        if out.value < 0:
            s = out.solution[:-1]
            w = Witness(tuple((i, c) for i, c in enumerate(s) if c), sold=k, sold_coef=_ONE)
            return _fail(a, w, f"selling item {k} against a convex combination loses surely")
    return _ok()


def _asl_program(a: Assessment) -> _lp.LpOutcome:
    pay = _payoffs(a)
    return _minimax_lp(pay, [_ZERO] * len(a.universe), simplex=True)


def check_asl(a: Assessment) -> ConsistencyVerdict:
    """Avoiding sure loss: no convex combination of bought gains is uniformly negative."""
    a.require_unconditional("check_asl")
    out = _asl_program(a)
    if out.value < 0:
        s = out.solution[:-1]
        w = Witness(tuple((i, c) for i, c in enumerate(s) if c))
        return _fail(a, w, "a positive combination of bought gambles loses surely")
    return _ok()


def check_1asl(a: Assessment) -> ConsistencyVerdict:
    a.require_unconditional("check_1asl")
    for i, (cg, p) in enumerate(a):
        if p > cg.gamble.sup():
            return _fail(a, Witness(((i, _ONE),)), f"item {i} is priced above its supremum")
    return _ok()


def ausl_bound(a: Assessment) -> ExtendedRational:
    """Greatest ``k`` such that every convex combination of gains has ``sup >= k``."""
    a.require_unconditional("ausl_bound")
    return _asl_program(a).value


def one_ausl_bound(a: Assessment) -> ExtendedRational:
    a.require_unconditional("one_ausl_bound")
    return ExtendedRational(min(cg.gamble.sup() - p for cg, p in a))


def _pairs(n: int, involving: Optional[Iterable[int]]):
    if involving is None:
        return itertools.product(range(n), repeat=2)
    focus = set(involving)
    return ((i, j) for i, j in itertools.product(range(n), repeat=2)
            if i in focus or j in focus)


def check_2convex(a: Assessment, involving: Optional[Iterable[int]] = None) -> ConsistencyVerdict:
    """2-convexity: every unit bought/sold pair has a non-negative supremum.

    Ordered pairs ``(sold, bought)`` include an item paired with itself.
    ``involving`` restricts the scan to pairs touching the given indices,
    which is enough when the rest of the assessment is already known to pass.
    """
    pay = _payoffs(a)
    conds = [cg.conditioning.members for cg, _ in a]
    worlds = a.universe.worlds
    for i, j in _pairs(len(a), involving):
        support = conds[i] | conds[j]
        sup = max(pay[j][w] - pay[i][w] for w, world in enumerate(worlds) if world in support)
        if sup < 0:
            w = Witness(((j, _ONE),), sold=i, sold_coef=_ONE, supremum=sup)
            return _fail(a, w, f"buying item {j} and selling item {i} loses surely")
    return _ok()


def _pair_program(pi: Sequence[Fraction], pj: Sequence[Fraction], idx: Sequence[int],
                  buy_both: bool) -> Optional[tuple[Fraction, Fraction, Fraction]]:
    """Search for a loss on a pair of items restricted to worlds ``idx``.

    Without ``buy_both``: minimise ``max_w s*pj[w] - pi[w]`` over ``s >= 0``.
    With it: minimise ``max_w u*pi[w] + v*pj[w]`` over ``u + v = 1``.
    Returns ``(coef_i, coef_j, supremum)`` for a strictly negative optimum.
    """
    if buy_both:
        if any(pi[w] >= 0 and pj[w] >= 0 for w in idx):
            return None
        cons = [_lp.Constraint([-pi[w], -pj[w], 1], _lp.GE, 0) for w in idx]
        cons.append(_lp.Constraint([1, 1, 0], _lp.EQ, 1))
        out = _lp.solve(_lp.LinearProgram([0, 0, 1], cons, sense="min",
                                          bounds=[(0, None), (0, None), (None, None)]))
        if out.value < 0:
            u, v, t = out.solution
            return u, v, t
        return None
    if any(pj[w] >= 0 and -pi[w] >= 0 for w in idx):
        return None
    cons = [_lp.Constraint([-pj[w], 1], _lp.GE, -pi[w]) for w in idx]
    out = _lp.solve(_lp.LinearProgram([0, 1], cons, sense="min",
                                      bounds=[(0, None), (None, None)]))
    if out.status is _lp.Status.UNBOUNDED:
        # the loss grows without bound in s: double s until the sup is negative
        s = _ONE
        while max(s * pj[w] - pi[w] for w in idx) >= 0:
            s *= 2
        return _ONE, s, max(s * pj[w] - pi[w] for w in idx)
    if out.value < 0:
        s, t = out.solution
        return _ONE, s, t
    return None


def check_2coherent(a: Assessment, involving: Optional[Iterable[int]] = None) -> ConsistencyVerdict:
    """2-coherence: no two-term gain has a negative conditional supremum.

    For every ordered pair the following families are searched, each over
    the worlds of its own ``S(s)``:

    * one bought term alone (``s_0 = 0``): the price exceeds ``sup(X|B)``;
    * one sold term alone (``s_1 = 0``): the price is below ``inf(X|B)``;
    * one bought and one sold, both coefficients positive;
    * both terms bought, both coefficients positive.

    The last family is what forces ``lpr(A) + lpr(not A) <= 1`` on events.
    Conditional items are accepted.
    """
    pay = _payoffs(a)
    conds = [cg.conditioning.members for cg, _ in a]
    worlds = a.universe.worlds
    n = len(a)
    focus = None if involving is None else set(involving)
    for i in range(n):
        if focus is not None and i not in focus:
            continue
        cg, p = a[i]
        if p > max(pay[i][w] + p for w, world in enumerate(worlds) if world in conds[i]):
            return _fail(a, Witness(((i, _ONE),)), f"item {i} is priced above its supremum")
        if p < min(pay[i][w] + p for w, world in enumerate(worlds) if world in conds[i]):
            return _fail(a, Witness((), sold=i, sold_coef=_ONE),
                         f"item {i} is priced below its infimum")
    for i, j in _pairs(n, focus):
        support = conds[i] | conds[j]
        idx = [w for w, world in enumerate(worlds) if world in support]
        found = _pair_program(pay[i], pay[j], idx, buy_both=False)
        if found is not None:
            _, s, _ = found
            w = Witness(((j, s),), sold=i, sold_coef=_ONE)
            return _fail(a, w, f"buying item {j} and selling item {i} loses surely")
        if i < j:
            found = _pair_program(pay[i], pay[j], idx, buy_both=True)
            if found is not None:
                u, v, _ = found
                w = Witness(tuple((k, c) for k, c in ((i, u), (j, v)) if c))
                return _fail(a, w, f"buying items {i} and {j} together loses surely")
    return _ok()


def check_2coherent_powerset(lp: PowersetLowerProbability) -> ConsistencyVerdict:
    """Closed-form 2-coherence test for a lower probability on every atom-union.

    Monotone under implication, ``lp(A) + lp(not A) <= 1``, ``lp(∅) = 0`` and
    ``lp(Ω) = 1``.  Witnesses index into ``lp.to_assessment()``.
    """
    events = lp.events()
    pos = {e.members: k for k, e in enumerate(events)}
    a = lp.to_assessment()
    u = lp.universe
    if lp(u.empty) != 0:
        if lp(u.empty) > 0:
            return _fail(a, Witness(((pos[frozenset()], _ONE),)), "lp(∅) must be 0")
        return _fail(a, Witness((), sold=pos[frozenset()], sold_coef=_ONE), "lp(∅) must be 0")
    if lp(u.omega) != 1:
        k = pos[u.omega.members]
        if lp(u.omega) > 1:
            return _fail(a, Witness(((k, _ONE),)), "lp(Ω) must be 1")
        return _fail(a, Witness((), sold=k, sold_coef=_ONE), "lp(Ω) must be 1")
    for e in events:
        for f in events:
            if e.members < f.members and lp(e) > lp(f):
                w = Witness(((pos[e.members], _ONE),), sold=pos[f.members], sold_coef=_ONE)
                return _fail(a, w, f"not monotone: lp({e.label()}) > lp({f.label()})")
    for e in events:
        c = ~e
        if lp(e) + lp(c) > 1:
            w = Witness(((pos[e.members], _ONE), (pos[c.members], _ONE)))
            return _fail(a, w, f"lp({e.label()}) + lp({c.label()}) > 1")
    return _ok()


def check_2monotone(lp: PowersetLowerProbability) -> ConsistencyVerdict:
    """Supermodularity: ``lp(A∨B) + lp(A∧B) >= lp(A) + lp(B)`` for all pairs."""
    events = lp.events()
    for e, f in itertools.combinations(events, 2):
        if lp(e | f) + lp(e & f) < lp(e) + lp(f):
            return ConsistencyVerdict(
                False, None,
                f"lp({(e | f).label()}) + lp({(e & f).label()}) < "
                f"lp({e.label()}) + lp({f.label()})")
    return _ok()


def envelope_assessment(pmfs: Sequence[Gamble | dict], alphas: Sequence[Number],
                        domain: Sequence[ConditionalGamble | Gamble]) -> Assessment:
    """``min_j (P_j(X) + alpha_j)`` for every ``X`` in ``domain``.

    Each pmf is a gamble (or world mapping) of non-negative masses summing
    to one.
    """
    if not pmfs:
        raise ValueError("at least one pmf is required")
    if len(alphas) != len(pmfs):
        raise ValueError("one alpha per pmf")
    alphas = [to_rational(x) for x in alphas]
    items = []
    for x in domain:
        cg = x if isinstance(x, ConditionalGamble) else ConditionalGamble(x, x.universe.omega)
        if not cg.is_unconditional:
            raise PreconditionError("envelope_assessment supports unconditional domains only")
        masses = [_as_pmf(p, cg.universe) for p in pmfs]
        value = min(expectation(m, cg.gamble) + al for m, al in zip(masses, alphas))
        items.append((cg, value))
    return Assessment(items)


def _as_pmf(p, universe) -> Gamble:
    g = p if isinstance(p, Gamble) else Gamble(universe, p)
    if any(v < 0 for v in g.values) or sum(g.values) != 1:
        raise ValueError("a pmf needs non-negative masses summing to one")
    return g


def expectation(pmf: Gamble, x: Gamble) -> Fraction:
    return sum((m * v for m, v in zip(pmf.values, x.values)), _ZERO)
