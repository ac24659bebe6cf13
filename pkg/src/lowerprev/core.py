"""Exact domain model: worlds, partitions, events, gambles and assessments.

Every numeric value is a :class:`fractions.Fraction`.  Decimal literals are
parsed from their text, so ``"0.3"`` is exactly ``3/10``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from numbers import Rational
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence, Union

World = Hashable
Number = Union[int, Fraction, str, float]


class DomainError(ValueError):
    """An object lies outside the domain an operation is defined on."""


class UnsupportedDomainError(DomainError):
    """Conditional items were passed to an unconditional-only operation."""


class PreconditionError(ValueError):
    """An operation's documented precondition does not hold."""


class DegenerateInputError(ValueError):
    """A construction collapsed (e.g. an empty conditioning event)."""


def to_rational(x: Number) -> Fraction:
    """Convert *x* to an exact :class:`Fraction`.

    Strings may be integers, decimals (``"-0.25"``, ``"1e-3"``) or
    fractions (``"3/10"``).  Floats are converted through their shortest
    ``repr``, so ``0.3`` becomes ``3/10`` and not the nearest binary value.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        if x != x or x in (float("inf"), float("-inf")):
            raise ValueError(f"non-finite float {x!r}")
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def format_rational(q: Fraction) -> str:
    """``p/q`` form, or just ``p`` for integers."""
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_decimal(q: Fraction, places: int = 12) -> str:
    """Decimal rendering; exact whenever the expansion terminates.

    Terminating expansions are printed in full (no rounding).  Others are
    rounded to *places* digits; callers that must not lose information pair
    this with :func:`format_rational`.
    """
    den = q.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den == 1:
        digits = max(twos, fives)
    else:
        digits = places
    scaled = q * 10**digits
    n = round(scaled)
    sign = "-" if n < 0 else ""
    n = abs(n)
    if digits == 0:
        return f"{sign}{n}"
    text = str(n).rjust(digits + 1, "0")
    whole, frac = text[:-digits], text[-digits:]
    frac = frac.rstrip("0")
    if not frac:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac}"


@total_ordering
class ExtendedRational:
    """A rational number or one of the two infinities.

    Subtracting like infinities raises :class:`ArithmeticError`; there is
    no NaN.  Instances compare and hash like the equivalent
    :class:`Fraction` when finite.
    """

    __slots__ = ("_value", "_inf")

    def __init__(self, value: Number | "ExtendedRational" = 0, *, inf: int = 0):
        if isinstance(value, ExtendedRational):
            self._value, self._inf = value._value, value._inf
            return
        if inf not in (-1, 0, 1):
            raise ValueError("inf must be -1, 0 or +1")
        self._inf = inf
        self._value = None if inf else to_rational(value)

    @classmethod
    def coerce(cls, x: Number | "ExtendedRational") -> "ExtendedRational":
        return x if isinstance(x, ExtendedRational) else cls(x)

    @property
    def is_finite(self) -> bool:
        return self._inf == 0

    @property
    def value(self) -> Fraction:
        if self._inf:
            raise ArithmeticError("infinite value has no rational part")
        return self._value

    def __repr__(self) -> str:
        if self._inf:
            return "ExtendedRational(+inf)" if self._inf > 0 else "ExtendedRational(-inf)"
        return f"ExtendedRational({format_rational(self._value)})"

    def __str__(self) -> str:
        if self._inf:
            return "+inf" if self._inf > 0 else "-inf"
        return format_rational(self._value)

    def __eq__(self, other) -> bool:
        try:
            other = ExtendedRational.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self._inf == other._inf and (self._inf != 0 or self._value == other._value)

    def __lt__(self, other) -> bool:
        try:
            other = ExtendedRational.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        if self._inf != other._inf:
            return self._inf < other._inf
        if self._inf:
            return False
        return self._value < other._value

    def __hash__(self) -> int:
        if self._inf:
            return hash(("ExtendedRational", self._inf))
        return hash(self._value)

    def __neg__(self) -> "ExtendedRational":
        if self._inf:
            return ExtendedRational(inf=-self._inf)
        return ExtendedRational(-self._value)

    def __add__(self, other) -> "ExtendedRational":
        other = ExtendedRational.coerce(other)
        if self._inf and other._inf and self._inf != other._inf:
            raise ArithmeticError("undefined sum of opposite infinities")
        if self._inf or other._inf:
            return ExtendedRational(inf=self._inf or other._inf)
        return ExtendedRational(self._value + other._value)

    __radd__ = __add__

    def __sub__(self, other) -> "ExtendedRational":
        return self + (-ExtendedRational.coerce(other))

    def __rsub__(self, other) -> "ExtendedRational":
        return ExtendedRational.coerce(other) + (-self)

    def __mul__(self, other) -> "ExtendedRational":
        k = to_rational(other)
        if self._inf:
            if k == 0:
                raise ArithmeticError("undefined product of infinity and zero")
            return ExtendedRational(inf=self._inf if k > 0 else -self._inf)
        return ExtendedRational(self._value * k)

    __rmul__ = __mul__


POS_INF = ExtendedRational(inf=1)
NEG_INF = ExtendedRational(inf=-1)


@dataclass(frozen=True)
class Universe:
    """Ordered finite set of distinct world identifiers."""

    worlds: tuple

    def __init__(self, worlds: Iterable[World]):
        ws = tuple(worlds)
        if not ws:
            raise ValueError("a universe needs at least one world")
        if len(set(ws)) != len(ws):
            raise ValueError("world identifiers must be unique")
        object.__setattr__(self, "worlds", ws)

    def __len__(self) -> int:
        return len(self.worlds)

    def __iter__(self) -> Iterator[World]:
        return iter(self.worlds)

    def __contains__(self, world) -> bool:
        return world in self._index

    @property
    def _index(self) -> dict:
        # cached lazily; the dataclass is frozen so bypass __setattr__
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = {w: i for i, w in enumerate(self.worlds)}
            object.__setattr__(self, "_idx", idx)
        return idx

    def index(self, world: World) -> int:
        try:
            return self._index[world]
        except KeyError:
            raise DomainError(f"unknown world {world!r}") from None

    def event(self, members: Iterable[World] = ()) -> "Event":
        return Event(self, members)

    @property
    def omega(self) -> "Event":
        return Event(self, self.worlds)

    @property
    def empty(self) -> "Event":
        return Event(self, ())

    def gamble(self, values: Mapping[World, Number] | Sequence[Number]) -> "Gamble":
        return Gamble(self, values)

    def constant(self, c: Number) -> "Gamble":
        c = to_rational(c)
        return Gamble(self, [c] * len(self.worlds))

    def indicator(self, event: "Event | Iterable[World]") -> "Gamble":
        if not isinstance(event, Event):
            event = self.event(event)
        event._check_universe(self)
        return Gamble(self, [1 if w in event.members else 0 for w in self.worlds])

    def singleton_partition(self) -> "Partition":
        return Partition(self, [[w] for w in self.worlds])


@dataclass(frozen=True)
class Event:
    """A subset of the worlds of a universe."""

    universe: Universe
    members: frozenset

    def __init__(self, universe: Universe, members: Iterable[World] = ()):
        ms = frozenset(members)
        for w in ms:
            if w not in universe:
                raise DomainError(f"unknown world {w!r}")
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "members", ms)

    def _check_universe(self, other: "Universe | Event | Gamble") -> None:
        u = other if isinstance(other, Universe) else other.universe
        if u is not self.universe and u != self.universe:
            raise DomainError("objects live on different universes")

    def __iter__(self) -> Iterator[World]:
        return (w for w in self.universe.worlds if w in self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __bool__(self) -> bool:
        return bool(self.members)

    def __contains__(self, world) -> bool:
        return world in self.members

    def __or__(self, other: "Event") -> "Event":
        self._check_universe(other)
        return Event(self.universe, self.members | other.members)

    def __and__(self, other: "Event") -> "Event":
        self._check_universe(other)
        return Event(self.universe, self.members & other.members)

    def __sub__(self, other: "Event") -> "Event":
        self._check_universe(other)
        return Event(self.universe, self.members - other.members)

    def __invert__(self) -> "Event":
        return Event(self.universe, set(self.universe.worlds) - self.members)

    def __le__(self, other: "Event") -> bool:
        """Implication: every world of ``self`` is in ``other``."""
        self._check_universe(other)
        return self.members <= other.members

    def __ge__(self, other: "Event") -> bool:
        return other <= self

    def __lt__(self, other: "Event") -> bool:
        return self <= other and self.members != other.members

    def __gt__(self, other: "Event") -> bool:
        return other < self

    def __repr__(self) -> str:
        return f"Event({{{', '.join(map(str, self))}}})"

    def label(self) -> str:
        if not self.members:
            return "∅"
        return "∨".join(map(str, self))


@dataclass(frozen=True)
class Gamble:
    """A total map from worlds to rationals."""

    universe: Universe
    values: tuple

    def __init__(self, universe: Universe, values: Mapping[World, Number] | Sequence[Number]):
        if isinstance(values, Mapping):
            missing = [w for w in universe.worlds if w not in values]
            if missing:
                raise DomainError(f"gamble undefined on worlds {missing!r}")
            extra = [w for w in values if w not in universe]
            if extra:
                raise DomainError(f"unknown worlds {extra!r}")
            vals = tuple(to_rational(values[w]) for w in universe.worlds)
        else:
            vals = tuple(to_rational(v) for v in values)
            if len(vals) != len(universe.worlds):
                raise DomainError(
                    f"expected {len(universe.worlds)} values, got {len(vals)}")
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "values", vals)

    def __getitem__(self, world: World) -> Fraction:
        return self.values[self.universe.index(world)]

    def items(self) -> Iterator[tuple[World, Fraction]]:
        return zip(self.universe.worlds, self.values)

    def as_dict(self) -> dict:
        return dict(self.items())

    def _same(self, other: "Gamble") -> None:
        if other.universe is not self.universe and other.universe != self.universe:
            raise DomainError("gambles live on different universes")

    def _lift(self, other) -> "Gamble":
        if isinstance(other, Gamble):
            self._same(other)
            return other
        return self.universe.constant(other)

    def __add__(self, other) -> "Gamble":
        other = self._lift(other)
        return Gamble(self.universe, [a + b for a, b in zip(self.values, other.values)])

    __radd__ = __add__

    def __sub__(self, other) -> "Gamble":
        other = self._lift(other)
        return Gamble(self.universe, [a - b for a, b in zip(self.values, other.values)])

    def __rsub__(self, other) -> "Gamble":
        return self._lift(other) - self

    def __neg__(self) -> "Gamble":
        return Gamble(self.universe, [-a for a in self.values])

    def __mul__(self, other) -> "Gamble":
        if isinstance(other, Gamble):
            self._same(other)
            return Gamble(self.universe, [a * b for a, b in zip(self.values, other.values)])
        k = to_rational(other)
        return Gamble(self.universe, [a * k for a in self.values])

    __rmul__ = __mul__

    def __le__(self, other: "Gamble") -> bool:
        """Pointwise dominance."""
        other = self._lift(other)
        return all(a <= b for a, b in zip(self.values, other.values))

    def __ge__(self, other: "Gamble") -> bool:
        other = self._lift(other)
        return all(a >= b for a, b in zip(self.values, other.values))

    def inf(self) -> Fraction:
        return min(self.values)

    def sup(self) -> Fraction:
        return max(self.values)

    def is_constant(self) -> bool:
        return len(set(self.values)) == 1

    def levels(self) -> list[Fraction]:
        """Distinct values in increasing order."""
        return sorted(set(self.values))

    def restricted(self, event: "Event") -> "Gamble":
        """``event`` times the gamble (zero off the event)."""
        event._check_universe(self.universe)
        return Gamble(self.universe, [v if w in event.members else 0
                                      for w, v in self.items()])

    def label(self) -> str:
        """``I(a∨b)`` for indicators, otherwise the world-by-world values."""
        if all(v in (0, 1) for v in self.values):
            return f"I({Event(self.universe, [w for w, v in self.items() if v == 1]).label()})"
        return "{" + ", ".join(f"{w}: {format_rational(v)}" for w, v in self.items()) + "}"

    def __repr__(self) -> str:
        body = ", ".join(f"{w}: {format_rational(v)}" for w, v in self.items())
        return f"Gamble({{{body}}})"


@dataclass(frozen=True)
class ConditionalGamble:
    gamble: Gamble
    conditioning: Event

    def __post_init__(self):
        self.conditioning._check_universe(self.gamble.universe)
        if not self.conditioning:
            raise DegenerateInputError("conditioning event must be non-empty")

    @property
    def universe(self) -> Universe:
        return self.gamble.universe

    @property
    def is_unconditional(self) -> bool:
        return len(self.conditioning) == len(self.universe)

    def label(self) -> str:
        head = self.gamble.label()
        return head if self.is_unconditional else f"{head} | {self.conditioning.label()}"


@dataclass(frozen=True)
class Assessment:
    """A finite list of (conditional gamble, lower value) pairs."""

    items: tuple = field()

    def __init__(self, items: Iterable[tuple[ConditionalGamble | Gamble, Number]]):
        normalized = []
        seen: dict = {}
        for cg, value in items:
            if isinstance(cg, Gamble):
                cg = ConditionalGamble(cg, cg.universe.omega)
            value = to_rational(value)
            prior = seen.get(cg)
            if prior is not None and prior != value:
                raise ValueError(f"conflicting values {prior} and {value} for {cg.label()}")
            seen[cg] = value
            normalized.append((cg, value))
        if not normalized:
            raise ValueError("an assessment needs at least one item")
        u = normalized[0][0].universe
        for cg, _ in normalized:
            if cg.universe != u:
                raise DomainError("assessment items live on different universes")
        object.__setattr__(self, "items", tuple(normalized))

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __getitem__(self, i: int) -> tuple[ConditionalGamble, Fraction]:
        return self.items[i]

    @property
    def universe(self) -> Universe:
        return self.items[0][0].universe

    @property
    def is_unconditional(self) -> bool:
        return all(cg.is_unconditional for cg, _ in self.items)

    def require_unconditional(self, what: str = "this operation") -> None:
        if not self.is_unconditional:
            raise UnsupportedDomainError(f"{what} supports unconditional assessments only")

    def gambles(self) -> list[Gamble]:
        return [cg.gamble for cg, _ in self.items]

    def values(self) -> list[Fraction]:
        return [v for _, v in self.items]

    def extended(self, *more: tuple[ConditionalGamble | Gamble, Number]) -> "Assessment":
        return Assessment(list(self.items) + list(more))

    def centered(self) -> "Assessment":
        """Add ``0|B`` with value 0 for every conditioning event ``B`` in use.

        Items already present are kept; a pre-existing ``0|B`` with a
        non-zero value makes the construction fail.
        """
        zero = self.universe.constant(0)
        extra = []
        for cg, _ in self.items:
            z = ConditionalGamble(zero, cg.conditioning)
            if z not in {c for c, _ in self.items} and (z, Fraction(0)) not in extra:
                extra.append((z, Fraction(0)))
        return Assessment(list(self.items) + extra)


def canonical_atom_subsets(n_atoms: int) -> Iterator[tuple[int, ...]]:
    """All subsets of ``range(n_atoms)``, by size, then lexicographically."""
    for k in range(n_atoms + 1):
        yield from itertools.combinations(range(n_atoms), k)


@dataclass(frozen=True)
class Partition:
    universe: Universe
    atoms: tuple

    def __init__(self, universe: Universe, atoms: Iterable[Iterable[World]]):
        atom_sets = tuple(frozenset(a) for a in atoms)
        if not atom_sets:
            raise ValueError("a partition needs at least one atom")
        seen: set = set()
        for a in atom_sets:
            if not a:
                raise ValueError("atoms must be non-empty")
            for w in a:
                if w not in universe:
                    raise DomainError(f"unknown world {w!r}")
                if w in seen:
                    raise ValueError(f"world {w!r} lies in more than one atom")
                seen.add(w)
        if len(seen) != len(universe):
            missing = [w for w in universe.worlds if w not in seen]
            raise ValueError(f"worlds {missing!r} are not covered by any atom")
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "atoms", atom_sets)

    def __len__(self) -> int:
        return len(self.atoms)

    def atom_events(self) -> list[Event]:
        return [Event(self.universe, a) for a in self.atoms]

    def union(self, atom_indices: Iterable[int]) -> Event:
        members: set = set()
        for i in atom_indices:
            members |= self.atoms[i]
        return Event(self.universe, members)

    def events(self) -> list[Event]:
        """Every atom-union, in canonical order (size, then atom order)."""
        return [self.union(s) for s in canonical_atom_subsets(len(self.atoms))]

    def atom_indices(self, event: Event) -> tuple[int, ...]:
        """Indices of the atoms whose union is ``event``; fails if not measurable."""
        self._require_measurable(event)
        return tuple(i for i, a in enumerate(self.atoms) if a <= event.members)

    def is_measurable(self, event: Event) -> bool:
        event._check_universe(self.universe)
        return all(a <= event.members or not (a & event.members) for a in self.atoms)

    def _require_measurable(self, event: Event) -> None:
        if not self.is_measurable(event):
            raise DomainError(f"{event!r} is not a union of atoms")

    def is_gamble_measurable(self, gamble: Gamble) -> bool:
        if gamble.universe != self.universe:
            raise DomainError("gamble lives on a different universe")
        return all(len({gamble[w] for w in a}) == 1 for a in self.atoms)

    def require_gamble_measurable(self, gamble: Gamble) -> None:
        if not self.is_gamble_measurable(gamble):
            raise DomainError(f"{gamble!r} is not constant on the atoms")

    def inner(self, event: Event) -> Event:
        event._check_universe(self.universe)
        return self.union(i for i, a in enumerate(self.atoms) if a <= event.members)

    def outer(self, event: Event) -> Event:
        event._check_universe(self.universe)
        return self.union(i for i, a in enumerate(self.atoms) if a & event.members)


class PowersetLowerProbability:
    """A lower probability given on every union of atoms of a partition."""

    def __init__(self, partition: Partition,
                 values: Mapping[Event | Iterable[World], Number] | Callable[[Event], Number]):
        self.partition = partition
        table: dict = {}
        if callable(values) and not isinstance(values, Mapping):
            for e in partition.events():
                table[e.members] = to_rational(values(e))
        else:
            for key, v in values.items():
                e = key if isinstance(key, Event) else Event(partition.universe, key)
                partition._require_measurable(e)
                if e.members in table and table[e.members] != to_rational(v):
                    raise ValueError(f"conflicting values for {e!r}")
                table[e.members] = to_rational(v)
        missing = [e for e in partition.events() if e.members not in table]
        if missing:
            raise ValueError(f"missing values for {len(missing)} events, e.g. {missing[0]!r}")
        self._table = table

    @classmethod
    def from_atom_labels(cls, partition: Partition,
                         values: Mapping[str, Number]) -> "PowersetLowerProbability":
        """Build from keys such as ``"a"``, ``"a b"`` or ``""`` naming worlds."""
        table = {}
        for key, v in values.items():
            table[Event(partition.universe, key.split())] = v
        return cls(partition, table)

    def __call__(self, event: Event | Iterable[World]) -> Fraction:
        if not isinstance(event, Event):
            event = Event(self.partition.universe, event)
        try:
            return self._table[event.members]
        except KeyError:
            raise DomainError(f"{event!r} is not a union of atoms") from None

    @property
    def universe(self) -> Universe:
        return self.partition.universe

    def events(self) -> list[Event]:
        return self.partition.events()

    def items(self) -> list[tuple[Event, Fraction]]:
        return [(e, self(e)) for e in self.events()]

    def to_assessment(self) -> Assessment:
        """The unconditional assessment of every event indicator."""
        u = self.universe
        return Assessment([(u.indicator(e), v) for e, v in self.items()])

    def conjugate(self) -> "PowersetLowerProbability":
        return PowersetLowerProbability(self.partition,
                                        lambda e: conjugate_upper(self, e))

    def __eq__(self, other) -> bool:
        return (isinstance(other, PowersetLowerProbability)
                and self.partition == other.partition and self._table == other._table)

    def __repr__(self) -> str:
        body = ", ".join(f"{e.label()}: {format_rational(v)}" for e, v in self.items())
        return f"PowersetLowerProbability({body})"


def conditional_inf(z: Gamble, b: Event) -> Fraction:
    """Minimum of ``z`` over the worlds of ``b``."""
    b._check_universe(z.universe)
    if not b:
        raise PreconditionError("conditioning event is empty")
    return min(v for w, v in z.items() if w in b.members)


def conditional_sup(z: Gamble, b: Event) -> Fraction:
    b._check_universe(z.universe)
    if not b:
        raise PreconditionError("conditioning event is empty")
    return max(v for w, v in z.items() if w in b.members)


def decumulative_event(z: Gamble, level: Number) -> Event:
    """The event ``(z >= level)``."""
    level = to_rational(level)
    return Event(z.universe, [w for w, v in z.items() if v >= level])


def conjugate_upper(lp: PowersetLowerProbability, a: Event) -> Fraction:
    """``1 - lp(complement of a)``."""
    lp.partition._require_measurable(a)
    return 1 - lp(~a)
