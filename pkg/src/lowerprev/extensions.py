"""Natural extensions E, E2, Ec and E2c of unconditional assessments.

The generic routines work on any finite :class:`Assessment`.  For lower
probabilities given on every atom-union of a partition there are closed
forms in terms of conditional infima of ``Z``; each closed form is
computed in more than one equivalent way and the results are compared.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from . import lp as _lp
from .consistency import check_1asl, check_2convex, check_2coherent_powerset, check_asl, expectation
from .core import (Assessment, Event, ExtendedRational, Gamble, PowersetLowerProbability,
                   PreconditionError, POS_INF, conditional_inf, decumulative_event)

KINDS = ("E", "E2", "Ec", "E2c", "Choquet", "GNlower", "GNupper")


@dataclass(frozen=True)
class ExtensionResult:
    kind: str
    value: ExtendedRational
    achiever: Any = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown extension kind {self.kind!r}")
        object.__setattr__(self, "value", ExtendedRational.coerce(self.value))

    @property
    def is_finite(self) -> bool:
        return self.value.is_finite


class FormulaMismatch(AssertionError):
    """Two formulas that must agree produced different values."""


def _require_same_universe(a: Assessment, z: Gamble) -> None:
    if z.universe != a.universe:
        raise ValueError("Z lives on a different universe than the assessment")


def _combination_lp(a: Assessment, z: Gamble, simplex: bool) -> _lp.LpOutcome:
    # variables s_1..s_n >= 0 and alpha (free, last):
    #   alpha + sum_i s_i (X_i(w) - P_i) <= Z(w)
    gambles = a.gambles()
    prices = a.values()
    n = len(gambles)
    cons = []
    for w in a.universe.worlds:
        cons.append(_lp.Constraint([x[w] - p for x, p in zip(gambles, prices)] + [1],
                                   _lp.LE, z[w]))
    if simplex:
        cons.append(_lp.Constraint([1] * n + [0], _lp.EQ, 1))
    bounds = [(0, None)] * n + [(None, None)]
    return _lp.solve(_lp.LinearProgram([0] * n + [1], cons, sense="max", bounds=bounds))


def e_lp(a: Assessment, z: Gamble) -> ExtensionResult:
    """Natural extension: sup of alpha with ``Z - alpha`` dominating a positive combination."""
    a.require_unconditional("e_lp")
    _require_same_universe(a, z)
    out = _combination_lp(a, z, simplex=False)
    if out.status is _lp.Status.UNBOUNDED:
        return ExtensionResult("E", POS_INF, out.ray[:-1])
    return ExtensionResult("E", out.value, out.solution[:-1])


def ec_lp(a: Assessment, z: Gamble) -> ExtensionResult:
    """Convex natural extension: as :func:`e_lp` with coefficients summing to one."""
    a.require_unconditional("ec_lp")
    _require_same_universe(a, z)
    out = _combination_lp(a, z, simplex=True)
    return ExtensionResult("Ec", out.value, out.solution[:-1])


def _max_concave_pl(intercepts: Sequence[Fraction], slopes: Sequence[Fraction]):
    """Maximise ``s -> min_k (intercepts[k] + s * slopes[k])`` over ``s >= 0``.

    Returns ``(value, argmax)``, or ``(None, None)`` when unbounded above.
    """
    if all(m > 0 for m in slopes):
        return None, None

    def f(s):
        return min(b + s * m for b, m in zip(intercepts, slopes))

    candidates = {Fraction(0)}
    lines = list(zip(intercepts, slopes))
    for i, (b1, m1) in enumerate(lines):
        for b2, m2 in lines[i + 1:]:
            if m1 != m2:
                s = (b2 - b1) / (m1 - m2)
                if s > 0:
                    candidates.add(s)
    best = max(sorted(candidates), key=f)
    return f(best), best


def e2_lp(a: Assessment, z: Gamble) -> ExtensionResult:
    """2-coherent natural extension via one bought item at a time.

    For each item the map ``s -> min_w (Z(w) - s (X(w) - P))`` is concave
    and piecewise linear, so its maximum sits at ``s = 0`` or at a crossing
    of two of its lines.  ``s = 0`` covers the empty combination, i.e.
    ``inf Z``.  The achiever is ``(item index, s)``.
    """
    a.require_unconditional("e2_lp")
    _require_same_universe(a, z)
    worlds = a.universe.worlds
    best, arg = ExtendedRational(z.inf()), None
    for i, (cg, p) in enumerate(a):
        x = cg.gamble
        value, s = _max_concave_pl([z[w] for w in worlds], [p - x[w] for w in worlds])
        if value is None:
            return ExtensionResult("E2", POS_INF, (i, None))
        if value > best:
            best, arg = ExtendedRational(value), (i, s)
    return ExtensionResult("E2", best, arg)


def e2c_direct(a: Assessment, z: Gamble) -> ExtensionResult:
    """2-convex natural extension: ``max_i P(X_i) + inf(Z - X_i)``."""
    a.require_unconditional("e2c_direct")
    _require_same_universe(a, z)
    scores = [p + (z - cg.gamble).inf() for cg, p in a]
    k = max(range(len(scores)), key=lambda i: (scores[i], -i))
    return ExtensionResult("E2c", scores[k], k)


# --- powerset closed forms -------------------------------------------------

def _inner_events(lp: PowersetLowerProbability) -> list[Event]:
    u = lp.universe
    return [e for e in lp.events() if e and e != u.omega]


def _best(pairs):
    """First pair with maximal score; ``pairs`` yields ``(score, tag)``."""
    best = None
    for score, tag in pairs:
        if best is None or score > best[0]:
            best = (score, tag)
    return best


def _e2_scores(lp, z, events):
    for e in events:
        hi, lo = conditional_inf(z, e), conditional_inf(z, ~e)
        if hi > lo:
            yield hi * lp(e) + lo * (1 - lp(e)), e


def e2_powerset(lp: PowersetLowerProbability, z: Gamble) -> ExtensionResult:
    """Closed form of E2 for a 2-coherent lower probability on all atom-unions.

    Computed once over every event ``E`` with ``inf(Z|E) > inf(Z|not E)``
    and once over the decumulative events ``(Z >= z)``, with ``z`` ranging
    over those conditional infima.  The achiever is the best event, or Ω when
    nothing beats ``inf Z``.
    """
    lp.partition.require_gamble_measurable(z)
    verdict = check_2coherent_powerset(lp)
    if not verdict:
        raise PreconditionError(f"lower probability is not 2-coherent: {verdict.reason}")
    u = lp.universe
    floor = z.inf()
    events = _inner_events(lp)
    full = _best(_e2_scores(lp, z, events))
    levels = sorted({conditional_inf(z, e) for e in events
                     if conditional_inf(z, e) > conditional_inf(z, ~e)})
    reduced = _best(_e2_scores(lp, z, [decumulative_event(z, t) for t in levels]))
    v_full = floor if full is None else max(floor, full[0])
    v_red = floor if reduced is None else max(floor, reduced[0])
    if v_full != v_red:
        raise FormulaMismatch(f"E2 closed forms disagree: {v_full} vs {v_red}")
    achiever = full[1] if full is not None and full[0] > floor else u.omega
    return ExtensionResult("E2", v_full, achiever)


def _e2c_term(lp, z, e):
    return lp(e) + min(conditional_inf(z, e) - 1, conditional_inf(z, ~e))


def _require_centered_2convex(lp: PowersetLowerProbability) -> None:
    u = lp.universe
    if lp(u.empty) != 0 or lp(u.omega) != 1:
        raise PreconditionError("lower probability must satisfy lp(∅) = 0 and lp(Ω) = 1")
    verdict = check_2convex(lp.to_assessment())
    if not verdict:
        raise PreconditionError(f"lower probability is not 2-convex: {verdict.reason}")


def e2c_powerset(lp: PowersetLowerProbability, z: Gamble) -> ExtensionResult:
    """Closed form of E2c for a centered 2-convex lower probability.

    Three equivalent expressions are evaluated: a scan over events with
    ``inf(Z|E) > inf(Z|not E) - 1``, the same scan over decumulative
    events, and a truncated scan that stops at level ``inf Z + 1``.
    """
    lp.partition.require_gamble_measurable(z)
    _require_centered_2convex(lp)
    floor = z.inf()
    events = [e for e in _inner_events(lp)
              if conditional_inf(z, e) > conditional_inf(z, ~e) - 1]
    full = _best((_e2c_term(lp, z, e), e) for e in events)
    levels = sorted({conditional_inf(z, e) for e in events})
    # (Z >= inf Z) is Ω itself, whose contribution is the floor inf Z
    deccum = _best((_e2c_term(lp, z, decumulative_event(z, t)), decumulative_event(z, t))
                   for t in levels if t > floor)
    v_full = floor if full is None else max(floor, full[0])
    v_dec = floor if deccum is None else max(floor, deccum[0])

    top = floor + 1
    f_top = decumulative_event(z, top)
    truncated = [(lp(f_top) + floor, f_top)]
    for t in levels:
        if t < top:
            f = decumulative_event(z, t)
            truncated.append((lp(f) + conditional_inf(z, f) - 1, f))
    trunc = _best(truncated)
    if not (v_full == v_dec == trunc[0]):
        raise FormulaMismatch(f"E2c closed forms disagree: {v_full}, {v_dec}, {trunc[0]}")
    achiever = full[1] if full is not None and full[0] > floor else lp.universe.omega
    return ExtensionResult("E2c", v_full, achiever)


# --- linear-space domains --------------------------------------------------

@dataclass(frozen=True)
class SubspaceDomain:
    """A linear space of gambles spanned by ``basis``, priced by a lower envelope.

    ``pmfs`` are probability mass functions over the worlds; the lower
    prevision of ``Y`` in the span is ``min_j P_j(Y)``.
    """

    basis: tuple
    pmfs: tuple

    def __init__(self, basis: Sequence[Gamble], pmfs: Sequence[Gamble]):
        basis = tuple(basis)
        pmfs = tuple(pmfs)
        if not basis:
            raise ValueError("empty basis")
        if not pmfs:
            raise ValueError("the envelope needs at least one pmf")
        u = basis[0].universe
        if any(b.universe != u for b in basis) or any(p.universe != u for p in pmfs):
            raise ValueError("basis and pmfs must share one universe")
        for p in pmfs:
            if any(v < 0 for v in p.values) or sum(p.values) != 1:
                raise ValueError("a pmf needs non-negative masses summing to one")
        if not _in_span(basis, u.constant(1)):
            raise ValueError("the basis must span the constant gambles")
        if _rank([b.values for b in basis]) != len(basis):
            raise ValueError("basis gambles must be linearly independent")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "pmfs", pmfs)

    @property
    def universe(self):
        return self.basis[0].universe

    def lower(self, y: Gamble) -> Fraction:
        return min(expectation(p, y) for p in self.pmfs)


def _rank(rows) -> int:
    m = [list(map(Fraction, r)) for r in rows]
    rank, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rank < len(m) and col < ncols:
        piv = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col] / m[rank][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
        col += 1
    return rank


def _in_span(basis, g) -> bool:
    rows = [b.values for b in basis]
    return _rank(rows + [g.values]) == _rank(rows)


def _subspace_rows(d: SubspaceDomain):
    worlds = d.universe.worlds
    means = [[expectation(p, b) for b in d.basis] for p in d.pmfs]
    pointwise = [[b[w] for b in d.basis] for w in worlds]
    return worlds, means, pointwise


def e_subspace(d: SubspaceDomain, z: Gamble) -> ExtensionResult:
    """``max { min_j P_j(Y) : Y <= Z, Y in span(basis) }``; achiever = coefficients of Y."""
    worlds, means, pointwise = _subspace_rows(d)
    k = len(d.basis)
    cons = [_lp.Constraint([-c for c in row] + [1], _lp.LE, 0) for row in means]
    cons += [_lp.Constraint(list(row) + [0], _lp.LE, z[w]) for w, row in zip(worlds, pointwise)]
    prog = _lp.LinearProgram([0] * k + [1], cons, sense="max", bounds=[(None, None)] * (k + 1))
    out = _lp.solve(prog)
    return ExtensionResult("E", out.value, out.solution[:-1])


def e2c_plus_subspace(d: SubspaceDomain, z: Gamble) -> ExtensionResult:
    """``max { min_j P_j(Y) + inf(Z - Y) : Y in span(basis) }``."""
    worlds, means, pointwise = _subspace_rows(d)
    k = len(d.basis)
    cons = [_lp.Constraint([-c for c in row] + [1, 0], _lp.LE, 0) for row in means]
    cons += [_lp.Constraint(list(row) + [0, 1], _lp.LE, z[w]) for w, row in zip(worlds, pointwise)]
    prog = _lp.LinearProgram([0] * k + [1, 1], cons, sense="max",
                             bounds=[(None, None)] * (k + 2))
    out = _lp.solve(prog)
    return ExtensionResult("E2c", out.value, out.solution[:-2])


def finiteness_report(a: Assessment) -> dict[str, str]:
    """Which of the four extensions stay finite on every gamble.

    E needs avoiding sure loss and E2 needs every price at most the
    supremum of its gamble; Ec and E2c are always finite on a finite domain.
    """
    a.require_unconditional("finiteness_report")

    def label(ok):
        return "finite" if ok else "infinite"

    return {"E": label(check_asl(a).holds), "E2": label(check_1asl(a).holds),
            "Ec": "finite", "E2c": "finite"}
