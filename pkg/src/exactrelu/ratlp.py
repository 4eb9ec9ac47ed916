"""Exact rational linear programming.

Everything here works over :class:`fractions.Fraction`; there is no
tolerance anywhere.  The solver is a two-phase primal simplex on a dense
tableau using Bland's rule, which is plenty for systems with a few dozen
variables and a few hundred rows.

Variables are free (unrestricted in sign).  Internally each variable is
split as ``x = u - v`` with ``u, v >= 0``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

RationalLike = Union[int, Fraction, str]

RELATIONS = ("<=", ">=", "==", "<", ">")
STRICT = ("<", ">")


def as_fraction(value: RationalLike) -> Fraction:
    """Convert ``value`` to a Fraction, refusing anything inexact."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        # floats are dyadic rationals, so this is exact
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    # numpy integers, gmpy2 mpq, ... anything exposing a ratio
    try:
        return Fraction(value)
    except TypeError:
        raise TypeError(f"cannot interpret {value!r} as a rational") from None


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``.  Decimal notation is rejected."""
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"not a rational of the form p/q: {text!r}") from None
    if q == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return Fraction(p, q)


@dataclass(frozen=True)
class LinearConstraint:
    """``sum(coeffs[v] * x[v]) <relation> rhs``."""

    coeffs: Mapping[int, Fraction]
    relation: str
    rhs: Fraction

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")
        clean = {}
        for var, c in self.coeffs.items():
            if not isinstance(var, int) or var < 0:
                raise ValueError(f"variable ids must be non-negative ints, got {var!r}")
            c = as_fraction(c)
            if c:
                clean[var] = c
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))
        object.__setattr__(self, "rhs", as_fraction(self.rhs))

    @property
    def strict(self) -> bool:
        return self.relation in STRICT

    def lhs(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * x[v] for v, c in self.coeffs.items()), Fraction(0))

    def satisfied_by(self, x: Sequence[Fraction]) -> bool:
        lhs, rhs = self.lhs(x), self.rhs
        return {
            "<=": lhs <= rhs,
            ">=": lhs >= rhs,
            "==": lhs == rhs,
            "<": lhs < rhs,
            ">": lhs > rhs,
        }[self.relation]

    def max_var(self) -> int:
        return max(self.coeffs, default=-1)


def constraint(coeffs: Union[Mapping[int, RationalLike], Sequence[RationalLike]],
               relation: str, rhs: RationalLike) -> LinearConstraint:
    """Build a constraint from a dict or a dense coefficient list."""
    if not isinstance(coeffs, Mapping):
        coeffs = dict(enumerate(coeffs))
    return LinearConstraint(coeffs, relation, rhs)


@dataclass(frozen=True)
class Polyhedron:
    """``{x in Q^num_vars : every constraint holds}`` (non-strict rows only)."""

    num_vars: int
    constraints: tuple = ()

    def __post_init__(self):
        cons = tuple(self.constraints)
        for c in cons:
            if c.strict:
                raise ValueError("Polyhedron accepts only non-strict constraints; "
                                 "use strictly_feasible for strict rows")
            if c.max_var() >= self.num_vars:
                raise ValueError(f"constraint references variable {c.max_var()} "
                                 f"but num_vars={self.num_vars}")
        object.__setattr__(self, "constraints", cons)

    def contains(self, x: Sequence[Fraction]) -> bool:
        return len(x) == self.num_vars and all(c.satisfied_by(x) for c in self.constraints)

    def with_constraints(self, extra: Iterable[LinearConstraint]) -> "Polyhedron":
        return Polyhedron(self.num_vars, self.constraints + tuple(extra))


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpOutcome:
    status: LpStatus
    value: Optional[Fraction] = None
    witness: Optional[tuple] = field(default=None)

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


# --------------------------------------------------------------------------
# simplex internals


class _Tableau:
    """Dense simplex tableau.  Row ``i`` reads ``rows[i][:-1] . z = rows[i][-1]``."""

    def __init__(self, rows, basis, ncols):
        self.rows = rows
        self.basis = basis
        self.ncols = ncols
        self.obj = None

    def set_objective(self, cost):
        # reduced costs r = c - c_B B^-1 A; obj[-1] holds minus the objective value
        obj = list(cost) + [Fraction(0)]
        for row, b in zip(self.rows, self.basis):
            cb = cost[b]
            if cb:
                for j, v in enumerate(row):
                    if v:
                        obj[j] -= cb * v
        self.obj = obj

    def pivot(self, r, c):
        prow = self.rows[r]
        p = prow[c]
        if p != 1:
            prow = [v / p if v else v for v in prow]
            self.rows[r] = prow
        nz = [j for j, v in enumerate(prow) if v]
        for i, row in enumerate(self.rows):
            if i != r:
                f = row[c]
                if f:
                    for j in nz:
                        row[j] -= f * prow[j]
        f = self.obj[c]
        if f:
            obj = self.obj
            for j in nz:
                obj[j] -= f * prow[j]
        self.basis[r] = c

    def run(self, allowed):
        """Minimise the current objective with Bland's rule.

        Returns ``"optimal"`` or ``"unbounded"``.
        """
        obj = self.obj
        while True:
            enter = next((j for j in allowed if obj[j] < 0), None)
            if enter is None:
                return "optimal"
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    key = (row[-1] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded"
            self.pivot(best[1], enter)

    def values(self):
        z = [Fraction(0)] * self.ncols
        for row, b in zip(self.rows, self.basis):
            z[b] = row[-1]
        return z


def _to_le_rows(poly: Polyhedron):
    """Standard-form rows ``a . x <= b`` with equalities split in two."""
    n = poly.num_vars
    out = []
    for con in poly.constraints:
        dense = [Fraction(0)] * n
        for v, c in con.coeffs.items():
            dense[v] = c
        if con.relation in ("<=", "=="):
            out.append((dense, con.rhs))
        if con.relation in (">=", "=="):
            out.append(([-c for c in dense], -con.rhs))
    return out


def solve_lp(poly: Polyhedron, objective: Sequence[RationalLike],
             sense: str = "min") -> LpOutcome:
    """Optimise ``objective . x`` over ``poly`` exactly.

    ``sense`` is ``"min"`` or ``"max"``.  On an optimal outcome the witness
    satisfies every constraint of ``poly`` and attains ``value`` exactly.
    """
    n = poly.num_vars
    if len(objective) != n:
        raise ValueError(f"objective has length {len(objective)}, expected {n}")
    if sense not in ("min", "max"):
        raise ValueError(f"sense must be 'min' or 'max', not {sense!r}")
    objective = [as_fraction(v) for v in objective]
    c = [-v for v in objective] if sense == "max" else objective

    le_rows = _to_le_rows(poly)
    m = len(le_rows)
    # columns: u (n) | v (n) | slack (m) | artificial (one per negative rhs)
    need_art = [b < 0 for _, b in le_rows]
    n_art = sum(need_art)
    ncols = 2 * n + m + n_art
    zero = Fraction(0)
    rows, basis = [], []
    art = 2 * n + m
    for i, (a, b) in enumerate(le_rows):
        row = [zero] * (ncols + 1)
        sign = -1 if need_art[i] else 1
        for j, v in enumerate(a):
            if v:
                row[j] = sign * v
                row[n + j] = -sign * v
        row[2 * n + i] = Fraction(sign)
        row[-1] = sign * b
        if need_art[i]:
            row[art] = Fraction(1)
            basis.append(art)
            art += 1
        else:
            basis.append(2 * n + i)
        rows.append(row)

    tab = _Tableau(rows, basis, ncols)
    real_cols = range(2 * n + m)
    if n_art:
        phase1 = [zero] * (2 * n + m) + [Fraction(1)] * n_art
        tab.set_objective(phase1)
        tab.run(range(ncols))
        if tab.obj[-1] != 0:
            return LpOutcome(LpStatus.INFEASIBLE)
        # drive zero-valued artificials out of the basis; drop redundant rows
        i = 0
        while i < len(tab.rows):
            if tab.basis[i] >= 2 * n + m:
                row = tab.rows[i]
                col = next((j for j in real_cols if row[j]), None)
                if col is None:
                    del tab.rows[i]
                    del tab.basis[i]
                    continue
                tab.pivot(i, col)
            i += 1

    cost = [zero] * ncols
    for j, v in enumerate(c):
        cost[j] = v
        cost[n + j] = -v
    tab.set_objective(cost)
    if tab.run(real_cols) == "unbounded":
        return LpOutcome(LpStatus.UNBOUNDED)
    z = tab.values()
    x = tuple(z[j] - z[n + j] for j in range(n))
    value = sum((cj * xj for cj, xj in zip(objective, x)), zero)
    return LpOutcome(LpStatus.OPTIMAL, as_fraction(value), x)


def feasible(poly: Polyhedron) -> Optional[tuple]:
    """An exact point of ``poly``, or ``None`` when it is empty."""
    out = solve_lp(poly, [0] * poly.num_vars)
    return out.witness if out.optimal else None


def strictly_feasible(constraints: Iterable[LinearConstraint],
                      num_vars: int) -> Optional[tuple]:
    """Feasibility of a system that may contain strict rows.

    Each strict row ``a.x > b`` becomes ``a.x >= b + t`` (``<`` likewise),
    with ``t <= 1``; ``t`` is maximised and the system is strictly
    feasible iff the optimum is positive.
    """
    constraints = tuple(constraints)
    if not any(c.strict for c in constraints):
        return feasible(Polyhedron(num_vars, constraints))
    t = num_vars
    rows = []
    for con in constraints:
        if con.relation == ">":
            rows.append(LinearConstraint({**con.coeffs, t: -1}, ">=", con.rhs))
        elif con.relation == "<":
            rows.append(LinearConstraint({**con.coeffs, t: 1}, "<=", con.rhs))
        else:
            rows.append(con)
    rows.append(LinearConstraint({t: 1}, "<=", 1))
    poly = Polyhedron(num_vars + 1, rows)
    out = solve_lp(poly, [0] * num_vars + [1], "max")
    if out.status is LpStatus.INFEASIBLE:
        return None
    # t is capped, so the LP cannot be unbounded
    if out.value <= 0:
        return None
    return out.witness[:num_vars]


# --------------------------------------------------------------------------
# linear algebra over Q


def row_echelon(matrix: Sequence[Sequence[RationalLike]]):
    """Reduced row echelon form.  Returns ``(rows, pivot_columns)``."""
    rows = [[as_fraction(v) for v in r] for r in matrix]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pv = rows[r][c]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(matrix: Sequence[Sequence[RationalLike]]) -> int:
    return len(row_echelon(matrix)[1])


def solve_linear_system(a: Sequence[Sequence[RationalLike]],
                        b: Sequence[RationalLike],
                        num_vars: Optional[int] = None) -> Optional[tuple]:
    """Some exact solution of ``a x = b`` (free variables set to 0), or None."""
    if num_vars is None:
        num_vars = len(a[0]) if a else 0
    if len(a) != len(b):
        raise ValueError("row count of a and length of b differ")
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    rows, pivots = row_echelon(aug)
    if num_vars in pivots:
        return None
    x = [Fraction(0)] * num_vars
    for row, p in zip(rows, pivots):
        x[p] = row[-1]
    return tuple(x)


def affine_dimension(poly: Polyhedron) -> int:
    """Dimension of ``aff(poly)``; ``-1`` for the empty set.

    An inequality is an implicit equality when its minimum slack over the
    polyhedron is zero.  The affine hull is cut out by the explicit and
    implicit equalities together.
    """
    if feasible(poly) is None:
        return -1
    n = poly.num_vars
    eqs = []
    for con in poly.constraints:
        dense = [con.coeffs.get(v, Fraction(0)) for v in range(n)]
        if con.relation == "==":
            eqs.append(dense)
            continue
        # a.x <= b is tight everywhere iff its minimum already reaches b
        sense = "min" if con.relation == "<=" else "max"
        out = solve_lp(poly, dense, sense)
        if out.optimal and out.value == con.rhs:
            eqs.append(dense)
    return n - rank(eqs)
