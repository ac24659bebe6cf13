"""Choquet integrals of simple gambles against capacities on a partition."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Mapping, Union

from .consistency import check_2coherent_powerset
from .core import DomainError, Event, Gamble, Partition, PowersetLowerProbability, decumulative_event


class Capacity(PowersetLowerProbability):
    """A monotone set function with ``mu(∅) = 0`` and ``mu(Ω) = 1``.

    Validation happens at construction; a lower probability that fails it
    cannot be integrated against.
    """

    def __init__(self, partition: Partition,
                 values: Union[Mapping, Callable[[Event], object]]):
        super().__init__(partition, values)
        u = partition.universe
        if self(u.empty) != 0 or self(u.omega) != 1:
            raise ValueError("a capacity must map ∅ to 0 and Ω to 1")
        events = self.events()
        for e, f in itertools.product(events, repeat=2):
            if e.members < f.members and self(e) > self(f):
                raise ValueError(f"not monotone: mu({e.label()}) > mu({f.label()})")

    @classmethod
    def of(cls, lp: PowersetLowerProbability) -> "Capacity":
        if isinstance(lp, Capacity):
            return lp
        return cls(lp.partition, {e: v for e, v in lp.items()})

    def conjugate(self) -> "Capacity":
        return Capacity(self.partition, lambda e: 1 - self(~e))


def _checked(mu, x: Gamble) -> Capacity:
    mu = Capacity.of(mu)
    if not mu.partition.is_gamble_measurable(x):
        raise DomainError(f"{x!r} is not constant on the atoms")
    return mu


def choquet_integral(mu: PowersetLowerProbability, x: Gamble) -> Fraction:
    """``x_1 + sum_{i>=2} (x_i - x_{i-1}) mu(X >= x_i)`` over the sorted levels of ``x``."""
    mu = _checked(mu, x)
    levels = x.levels()
    total = levels[0]
    for lo, hi in zip(levels, levels[1:]):
        total += (hi - lo) * mu(decumulative_event(x, hi))
    return total


def _layer_integral(mu: Capacity, x: Gamble, start: Fraction, stop: Fraction) -> Fraction:
    # integral of t -> mu(X >= t) over [start, stop], a step function whose
    # jumps sit at the levels of x; sampled at the midpoint of each piece
    cuts = sorted({start, stop} | {v for v in x.levels() if start < v < stop})
    area = Fraction(0)
    for lo, hi in zip(cuts, cuts[1:]):
        area += (hi - lo) * mu(decumulative_event(x, (lo + hi) / 2))
    return area


def choquet_layer(mu: PowersetLowerProbability, x: Gamble) -> Fraction:
    """``inf X + integral from inf X to sup X of mu(X >= t) dt``."""
    mu = _checked(mu, x)
    return x.inf() + _layer_integral(mu, x, x.inf(), x.sup())


def choquet_signed(mu: PowersetLowerProbability, x: Gamble) -> Fraction:
    """``integral of X+ against mu`` minus ``integral of X- against the conjugate``."""
    mu = _checked(mu, x)
    u = x.universe
    pos = Gamble(u, [max(v, 0) for v in x.values])
    neg = Gamble(u, [max(-v, 0) for v in x.values])
    conj = mu.conjugate()
    return (_layer_integral(mu, pos, Fraction(0), max(pos.sup(), Fraction(0)))
            - _layer_integral(conj, neg, Fraction(0), max(neg.sup(), Fraction(0))))


class ChoquetExtension:
    """``X -> choquet_integral(lp, X)`` for atom-measurable gambles.

    ``guarantee`` records what the extension is known to satisfy:
    ``"2-coherent"`` when the lower probability passes the powerset
    2-coherence test, otherwise ``"2-convex"`` (any capacity gives that).
    """

    def __init__(self, lp: PowersetLowerProbability):
        self.capacity = Capacity.of(lp)
        self.guarantee = "2-coherent" if check_2coherent_powerset(self.capacity) else "2-convex"

    def __call__(self, x: Gamble) -> Fraction:
        return choquet_integral(self.capacity, x)


def choquet_extension(lp: PowersetLowerProbability) -> ChoquetExtension:
    return ChoquetExtension(lp)


def comonotone(x: Gamble, y: Gamble) -> bool:
    """No two worlds order ``x`` and ``y`` in opposite strict directions."""
    if x.universe != y.universe:
        raise DomainError("gambles live on different universes")
    pairs = list(zip(x.values, y.values))
    return not any((a1 - a2) * (b1 - b2) < 0
                   for (a1, b1), (a2, b2) in itertools.combinations(pairs, 2))
