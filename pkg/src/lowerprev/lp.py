"""Exact rational linear programming.

A dense two-phase simplex over :class:`fractions.Fraction` with Bland's
pivoting rule, so it terminates on every input.  Unbounded and infeasible
programs come back with a certificate that can be checked independently:

* an *unbounded* outcome carries a ray ``d`` that keeps every constraint and
  bound satisfied when added to a feasible point and strictly improves the
  objective;
* an *infeasible* outcome carries Farkas multipliers ``y`` over
  :meth:`LinearProgram.rows` (non-negative on ``<=`` rows) with
  ``y @ A == 0`` and ``y @ b < 0``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .core import NEG_INF, POS_INF, ExtendedRational, Number, to_rational

LE, EQ, GE = "<=", "=", ">="

_ZERO = Fraction(0)


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple
    relation: str
    rhs: Fraction

    def __init__(self, coeffs: Iterable[Number], relation: str, rhs: Number):
        if relation not in (LE, EQ, GE):
            raise ValueError(f"unknown relation {relation!r}")
        object.__setattr__(self, "coeffs", tuple(to_rational(c) for c in coeffs))
        object.__setattr__(self, "relation", relation)
        object.__setattr__(self, "rhs", to_rational(rhs))

    def lhs(self, x: Sequence[Fraction]) -> Fraction:
        return sum((a * v for a, v in zip(self.coeffs, x)), _ZERO)

    def satisfied_by(self, x: Sequence[Fraction]) -> bool:
        v = self.lhs(x)
        if self.relation == LE:
            return v <= self.rhs
        if self.relation == GE:
            return v >= self.rhs
        return v == self.rhs


@dataclass(frozen=True)
class LinearProgram:
    """``max``/``min`` of ``objective @ x`` subject to constraints and bounds.

    ``bounds[j]`` is a ``(lower, upper)`` pair, either side ``None`` for no
    bound.  When omitted every variable is non-negative.
    """

    objective: tuple
    sense: str
    constraints: tuple
    bounds: tuple

    def __init__(self, objective: Iterable[Number], constraints: Iterable[Constraint] = (),
                 sense: str = "max",
                 bounds: Optional[Iterable[tuple[Optional[Number], Optional[Number]]]] = None):
        if sense not in ("max", "min"):
            raise ValueError("sense must be 'max' or 'min'")
        obj = tuple(to_rational(c) for c in objective)
        n = len(obj)
        cons = tuple(constraints)
        for c in cons:
            if len(c.coeffs) != n:
                raise ValueError(
                    f"constraint has {len(c.coeffs)} coefficients, objective has {n}")
        if bounds is None:
            bnds = ((_ZERO, None),) * n
        else:
            bnds = tuple((None if lo is None else to_rational(lo),
                          None if hi is None else to_rational(hi)) for lo, hi in bounds)
            if len(bnds) != n:
                raise ValueError(f"{len(bnds)} bounds for {n} variables")
            for lo, hi in bnds:
                if lo is not None and hi is not None and lo > hi:
                    raise ValueError(f"empty bound interval [{lo}, {hi}]")
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "sense", sense)
        object.__setattr__(self, "constraints", cons)
        object.__setattr__(self, "bounds", bnds)

    @property
    def n_vars(self) -> int:
        return len(self.objective)

    def rows(self) -> list[tuple[tuple, str, Fraction]]:
        """The system as ``<=``/``=`` rows in the original variables.

        Constraint rows come first (``>=`` negated), then one row per finite
        bound: ``-x_j <= -lo`` and ``x_j <= hi``, variable by variable.
        Farkas certificates index into this list.
        """
        out = []
        for c in self.constraints:
            if c.relation == GE:
                out.append((tuple(-a for a in c.coeffs), LE, -c.rhs))
            else:
                out.append((c.coeffs, c.relation, c.rhs))
        n = self.n_vars
        for j, (lo, hi) in enumerate(self.bounds):
            if lo is not None:
                out.append((tuple(Fraction(-1) if k == j else _ZERO for k in range(n)), LE, -lo))
            if hi is not None:
                out.append((tuple(Fraction(1) if k == j else _ZERO for k in range(n)), LE, hi))
        return out

    def is_feasible(self, x: Sequence[Fraction]) -> bool:
        if len(x) != self.n_vars:
            return False
        for (lo, hi), v in zip(self.bounds, x):
            if lo is not None and v < lo or hi is not None and v > hi:
                return False
        return all(c.satisfied_by(x) for c in self.constraints)

    def evaluate(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.objective, x)), _ZERO)


class Status(enum.Enum):
    OPTIMAL = "optimal"
    UNBOUNDED = "unbounded"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class LpOutcome:
    status: Status
    value: ExtendedRational
    solution: Optional[tuple] = None
    ray: Optional[tuple] = None
    farkas: Optional[tuple] = None

    @property
    def is_optimal(self) -> bool:
        return self.status is Status.OPTIMAL


# Variable substitutions used to reach the internal form (all columns >= 0).
_SHIFT, _MIRROR, _SPLIT = "shift", "mirror", "split"


class _Tableau:
    """Dense simplex tableau for ``A x = b, x >= 0, b >= 0``, minimising."""

    def __init__(self, a: list[list[Fraction]], b: list[Fraction]):
        m = len(a)
        self.n = len(a[0]) if m else 0
        # artificial columns n .. n+m-1 start as the basis
        self.t = [row[:] + [Fraction(int(i == k)) for k in range(m)] + [b[i]]
                  for i, row in enumerate(a)]
        self.basis = [self.n + i for i in range(m)]
        self.m = m
        self.width = self.n + m

    def set_costs(self, costs: list[Fraction]) -> None:
        self.costs = costs
        d = costs[:] + [_ZERO]
        for i, bv in enumerate(self.basis):
            cb = costs[bv]
            if cb:
                row = self.t[i]
                for j in range(self.width + 1):
                    if row[j]:
                        d[j] -= cb * row[j]
        self.d = d  # d[-1] is minus the objective value

    def pivot(self, r: int, c: int) -> None:
        t = self.t
        prow = t[r]
        p = prow[c]
        if p != 1:
            prow = [v / p for v in prow]
            t[r] = prow
        nz = [j for j, v in enumerate(prow) if v]
        for i in range(self.m):
            if i != r:
                f = t[i][c]
                if f:
                    row = t[i]
                    for j in nz:
                        row[j] -= f * prow[j]
        f = self.d[c]
        if f:
            for j in nz:
                self.d[j] -= f * prow[j]
        self.basis[r] = c

    def run(self, allowed: int) -> Optional[int]:
        """Bland's rule on columns ``< allowed``; returns an unbounded column or None."""
        while True:
            enter = next((j for j in range(allowed) if self.d[j] < 0), None)
            if enter is None:
                return None
            best = None
            for i in range(self.m):
                a = self.t[i][enter]
                if a > 0:
                    ratio = self.t[i][-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return enter
            self.pivot(best[1], enter)

    def drop_row(self, r: int) -> None:
        del self.t[r]
        del self.basis[r]
        self.m -= 1


def solve(lp: LinearProgram) -> LpOutcome:
    """Solve ``lp`` exactly.  Deterministic: the pivot sequence depends only on the input."""
    n = lp.n_vars
    # internal columns: each original variable maps to one or two columns
    kinds = []
    col_of: list[list[tuple[int, int]]] = []  # original j -> [(internal col, sign)]
    ncols = 0
    shift = []
    for lo, hi in lp.bounds:
        if lo is not None:
            kinds.append(_SHIFT)
            col_of.append([(ncols, 1)])
            shift.append(lo)
            ncols += 1
        elif hi is not None:
            kinds.append(_MIRROR)
            col_of.append([(ncols, -1)])
            shift.append(hi)
            ncols += 1
        else:
            kinds.append(_SPLIT)
            col_of.append([(ncols, 1), (ncols + 1, -1)])
            shift.append(_ZERO)
            ncols += 2

    def internal(coeffs: Sequence[Fraction]) -> list[Fraction]:
        out = [_ZERO] * ncols
        for j, a in enumerate(coeffs):
            if a:
                for col, sgn in col_of[j]:
                    out[col] = a if sgn > 0 else -a
        return out

    # internal rows (<= or =); remember which lp.rows() entry each one is
    orig_rows = lp.rows()
    rows: list[tuple[list[Fraction], str, Fraction, int]] = []
    n_cons = len(lp.constraints)
    for k, (coeffs, rel, rhs) in enumerate(orig_rows[:n_cons]):
        offset = sum((a * s for a, s in zip(coeffs, shift)), _ZERO)
        rows.append((internal(coeffs), rel, rhs - offset, k))
    bound_row_index = {}
    k = n_cons
    for j, (lo, hi) in enumerate(lp.bounds):
        if lo is not None:
            bound_row_index[(j, "lo")] = k
            k += 1
        if hi is not None:
            bound_row_index[(j, "hi")] = k
            k += 1
            if lo is not None:
                coeffs = [_ZERO] * ncols
                coeffs[col_of[j][0][0]] = Fraction(1)
                rows.append((coeffs, LE, hi - lo, bound_row_index[(j, "hi")]))

    m = len(rows)
    n_slack = sum(1 for r in rows if r[1] == LE)
    width = ncols + n_slack
    a: list[list[Fraction]] = []
    b: list[Fraction] = []
    signs: list[int] = []
    slack_col = ncols
    for coeffs, rel, rhs, _ in rows:
        row = coeffs + [_ZERO] * n_slack
        if rel == LE:
            row[slack_col] = Fraction(1)
            slack_col += 1
        sgn = -1 if rhs < 0 else 1
        if sgn < 0:
            row = [-v for v in row]
            rhs = -rhs
        signs.append(sgn)
        a.append(row)
        b.append(rhs)

    if m == 0:
        return _solve_unconstrained(lp, kinds, col_of, shift, ncols)

    tab = _Tableau(a, b)
    tab.set_costs([_ZERO] * width + [Fraction(1)] * m)
    tab.run(width + m)
    if tab.d[-1] != 0:
        # phase-1 optimum positive: y_i = 1 - d(artificial_i)
        y = [1 - tab.d[width + i] for i in range(m)]
        mult = [_ZERO] * len(orig_rows)
        for i, (_, _, _, origin) in enumerate(rows):
            mult[origin] += -signs[i] * y[i]
        # cancel residual column sums with the lower/upper bound rows
        for j in range(n):
            resid = sum((mult[r] * orig_rows[r][0][j] for r in range(len(orig_rows))), _ZERO)
            if resid == 0:
                continue
            if resid > 0:
                mult[bound_row_index[(j, "lo")]] += resid
            else:
                mult[bound_row_index[(j, "hi")]] += -resid
        value = NEG_INF if lp.sense == "max" else POS_INF
        return LpOutcome(Status.INFEASIBLE, value, farkas=tuple(mult))

    # drive remaining artificials out of the basis
    r = 0
    while r < tab.m:
        if tab.basis[r] >= width:
            col = next((j for j in range(width) if tab.t[r][j] != 0), None)
            if col is None:
                tab.drop_row(r)
                continue
            tab.pivot(r, col)
        r += 1

    sense = 1 if lp.sense == "min" else -1
    costs = [_ZERO] * (width + m)
    for j, c in enumerate(lp.objective):
        for col, sgn in col_of[j]:
            costs[col] = sense * c * sgn
    tab.set_costs(costs)
    unbounded_col = tab.run(width)

    x_int = [_ZERO] * width
    for i, bv in enumerate(tab.basis):
        if bv < width:
            x_int[bv] = tab.t[i][-1]

    if unbounded_col is not None:
        d_int = [_ZERO] * width
        d_int[unbounded_col] = Fraction(1)
        for i, bv in enumerate(tab.basis):
            if bv < width:
                d_int[bv] = -tab.t[i][unbounded_col]
        ray = _to_original(d_int, kinds, col_of, [_ZERO] * n, n, direction=True)
        value = POS_INF if lp.sense == "max" else NEG_INF
        return LpOutcome(Status.UNBOUNDED, value, ray=tuple(ray))

    x = _to_original(x_int, kinds, col_of, shift, n)
    return LpOutcome(Status.OPTIMAL, ExtendedRational(lp.evaluate(x)), solution=tuple(x))


def _to_original(v, kinds, col_of, shift, n, direction=False):
    out = []
    for j in range(n):
        val = _ZERO if direction else shift[j]
        for col, sgn in col_of[j]:
            val += v[col] if sgn > 0 else -v[col]
        out.append(val)
    return out


def _solve_unconstrained(lp, kinds, col_of, shift, ncols):
    # no rows at all: every internal column is free to grow
    sense = 1 if lp.sense == "max" else -1
    for j, c in enumerate(lp.objective):
        for col, sgn in col_of[j]:
            if sense * c * sgn > 0:
                d = [_ZERO] * ncols
                d[col] = Fraction(1)
                ray = _to_original(d, kinds, col_of, [_ZERO] * lp.n_vars, lp.n_vars,
                                   direction=True)
                value = POS_INF if lp.sense == "max" else NEG_INF
                return LpOutcome(Status.UNBOUNDED, value, ray=tuple(ray))
    x = list(shift)
    return LpOutcome(Status.OPTIMAL, ExtendedRational(lp.evaluate(x)), solution=tuple(x))


def check_ray(lp: LinearProgram, ray: Sequence[Fraction]) -> bool:
    """True iff ``ray`` is a recession direction that improves the objective."""
    for c in lp.constraints:
        v = c.lhs(ray)
        if c.relation == LE and v > 0 or c.relation == GE and v < 0 or \
                c.relation == EQ and v != 0:
            return False
    for (lo, hi), d in zip(lp.bounds, ray):
        if lo is not None and d < 0 or hi is not None and d > 0:
            return False
    gain = lp.evaluate(ray)
    return gain > 0 if lp.sense == "max" else gain < 0


def check_farkas(lp: LinearProgram, y: Sequence[Fraction]) -> bool:
    """True iff ``y`` proves ``lp`` infeasible (see module docstring)."""
    rows = lp.rows()
    if len(y) != len(rows):
        return False
    for (_, rel, _), yi in zip(rows, y):
        if rel == LE and yi < 0:
            return False
    for j in range(lp.n_vars):
        if sum((yi * r[0][j] for yi, r in zip(y, rows)), _ZERO) != 0:
            return False
    return sum((yi * r[2] for yi, r in zip(y, rows)), _ZERO) < 0
