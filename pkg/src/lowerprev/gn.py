"""Goodman–Nguyen order on conditional events and the GN-extensions.

Conditional events live on a universe of worlds; a :class:`Partition` of
that universe supplies the measurable events.  An arbitrary ``C|D`` is
approximated from below and above by measurable conditional events, and a
lower probability given on every measurable conditional event is extended
by evaluating it at those approximations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .core import (Assessment, ConditionalGamble, DegenerateInputError, DomainError, Event,
                   Gamble, Number, Partition, to_rational)


@dataclass(frozen=True)
class ConditionalEvent:
    antecedent: Event
    conditioning: Event

    def __post_init__(self):
        self.antecedent._check_universe(self.conditioning)
        if not self.conditioning:
            raise DegenerateInputError("the conditioning event is empty")

    @property
    def universe(self):
        return self.conditioning.universe

    @property
    def is_trivial(self) -> bool:
        """``C∧D`` is empty or equals ``D``, so the value is forced to 0 or 1."""
        both = self.antecedent & self.conditioning
        return not both or both == self.conditioning

    def canonical(self) -> "ConditionalEvent":
        return ConditionalEvent(self.antecedent & self.conditioning, self.conditioning)

    def as_conditional_gamble(self) -> ConditionalGamble:
        return ConditionalGamble(self.universe.indicator(self.antecedent), self.conditioning)

    def label(self) -> str:
        return f"{self.antecedent.label()} | {self.conditioning.label()}"

    def __repr__(self) -> str:
        return f"ConditionalEvent({self.label()})"


def gn_leq(a: ConditionalEvent, b: ConditionalEvent) -> bool:
    """``A|B <= C|D``: ``A∧B`` implies ``C∧D`` and ``not C ∧ D`` implies ``not A ∧ B``."""
    a.conditioning._check_universe(b.conditioning)
    A, B, C, D = a.antecedent, a.conditioning, b.antecedent, b.conditioning
    return (A & B) <= (C & D) and (~C & D) <= (~A & B)


def inner_event(e: Event, p: Partition) -> Event:
    """Union of the atoms contained in ``e``."""
    return p.inner(e)


def outer_event(e: Event, p: Partition) -> Event:
    """Union of the atoms meeting ``e``."""
    return p.outer(e)


def _require_nontrivial(cd: ConditionalEvent) -> None:
    if cd.is_trivial:
        raise DegenerateInputError(f"{cd.label()} is trivial")


def _build(p: Partition, a: Event, b: Event, cd: ConditionalEvent, which: str) -> ConditionalEvent:
    if not b:
        raise DegenerateInputError(
            f"{which} approximation of {cd.label()} has an empty conditioning event "
            f"(antecedent part {a.label()})")
    out = ConditionalEvent(a, b)
    assert p.is_measurable(a) and p.is_measurable(b)
    return out


def inner_conditional(cd: ConditionalEvent, p: Partition) -> ConditionalEvent:
    """Greatest measurable conditional event below ``cd`` in the GN order."""
    _require_nontrivial(cd)
    C, D = cd.antecedent, cd.conditioning
    a = p.inner(C & D)
    return _build(p, a, a | p.outer(~C & D), cd, "inner")


def outer_conditional(cd: ConditionalEvent, p: Partition) -> ConditionalEvent:
    """Least measurable conditional event above ``cd`` in the GN order."""
    _require_nontrivial(cd)
    C, D = cd.antecedent, cd.conditioning
    a = p.outer(C & D)
    return _build(p, a, a | p.inner(~C & D), cd, "outer")


class FullConditionalAssessment:
    """A lower probability on every ``A|B`` with ``A``, ``B`` measurable and ``B`` non-empty.

    ``A|B`` and ``(A∧B)|B`` name the same conditional event; either may be
    used as a key, but they must not carry different values.
    """

    def __init__(self, partition: Partition,
                 values: Mapping[tuple, Number]):
        self.partition = partition
        u = partition.universe
        table: dict = {}
        for (a, b), v in values.items():
            a = a if isinstance(a, Event) else Event(u, a)
            b = b if isinstance(b, Event) else Event(u, b)
            for e in (a, b):
                if not partition.is_measurable(e):
                    raise DomainError(f"{e.label()} is not a union of atoms")
            key = ConditionalEvent(a, b).canonical()
            v = to_rational(v)
            if not 0 <= v <= 1:
                raise ValueError(f"value {v} for {key.label()} lies outside [0, 1]")
            if key in table and table[key] != v:
                raise ValueError(f"conflicting values for {key.label()}")
            table[key] = v
        missing = [k for k in self._keys() if k not in table]
        if missing:
            raise ValueError(f"assessment is not total: {len(missing)} conditional events "
                             f"missing, e.g. {missing[0].label()}")
        self._table = table

    def _keys(self) -> list[ConditionalEvent]:
        events = self.partition.events()
        return [ConditionalEvent(a & b, b) for b in events if b for a in events if a <= b]

    @classmethod
    def lower_envelope(cls, partition: Partition,
                       pmfs: Sequence[Mapping | Gamble]) -> "FullConditionalAssessment":
        """Conditional lower envelope of pmfs that are positive on every atom."""
        if not pmfs:
            raise ValueError("at least one pmf is required")
        u = partition.universe
        masses = []
        for p in pmfs:
            g = p if isinstance(p, Gamble) else Gamble(u, {w: p.get(w, 0) for w in u.worlds})
            if any(v < 0 for v in g.values) or sum(g.values) != 1:
                raise ValueError("a pmf needs non-negative masses summing to one")
            masses.append(g)

        def prob(g, e):
            return sum((g[w] for w in e), Fraction(0))

        for g in masses:
            for atom in partition.atom_events():
                if prob(g, atom) <= 0:
                    raise DegenerateInputError("pmfs must give every atom positive mass")
        events = partition.events()
        values = {}
        for b in events:
            if not b:
                continue
            for a in events:
                if a <= b:
                    values[(a, b)] = min(prob(g, a) / prob(g, b) for g in masses)
        return cls(partition, values)

    def __call__(self, cd: ConditionalEvent) -> Fraction:
        try:
            return self._table[cd.canonical()]
        except KeyError:
            raise DomainError(f"{cd.label()} is not a measurable conditional event") from None

    def items(self) -> list[tuple[ConditionalEvent, Fraction]]:
        return [(k, self._table[k]) for k in self._keys()]

    def to_assessment(self, extra: Iterable[tuple[ConditionalEvent, Number]] = ()) -> Assessment:
        """Indicator items ``I_A | B``, optionally followed by ``extra`` events."""
        pairs = list(self.items()) + list(extra)
        return Assessment([(cd.as_conditional_gamble(), v) for cd, v in pairs])


def gn_lower_extension(f: FullConditionalAssessment, cd: ConditionalEvent) -> Fraction:
    return f(inner_conditional(cd, f.partition))


def gn_upper_extension(f: FullConditionalAssessment, cd: ConditionalEvent) -> Fraction:
    return f(outer_conditional(cd, f.partition))
