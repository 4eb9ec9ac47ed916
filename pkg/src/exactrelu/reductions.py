"""Instance generators and witness networks for two hardness reductions.

* Positive one-in-three 3-SAT to 2-D exact fitting with ``4(m+n)`` ReLUs
  (or ``2(m+n)`` threshold units).  Every clause and every variable gets a
  selection gadget: a cluster of labelled points along the ``x2`` axis
  that admits exactly one levee per allowed slope.  Extra label-1 points
  where a clause levee meets a variable levee tie the choices together.
* Two-hyperplane separability in ``Q^d`` to exact fitting with 4 ReLUs in
  the same dimension.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .nets import (Activation, Instance, LabeledPoint, LTNetwork, ReluNetwork, Unit,
                   dot, levee_network, levee_value, stripe_network)
from .ratlp import as_fraction

ZERO, ONE = Fraction(0), Fraction(1)
THIRD = Fraction(1, 3)

# Stripe half-width used by the threshold reduction.  It must exceed 1 so
# that every label-1 gadget point is inside, and stay below 2 so that the
# label-0 points on the levee's outer edge |t| = 2 are outside.
LT_HALF_WIDTH = Fraction(3, 2)


class ReductionError(ValueError):
    pass


# --------------------------------------------------------------------------
# positive one-in-three 3-SAT


@dataclass(frozen=True)
class PoitsFormula:
    """CNF with three positive literals per clause; variables are 1-based."""

    n: int
    clauses: tuple

    def __post_init__(self):
        clauses = tuple(tuple(c) for c in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        if self.n < 1:
            raise ReductionError("a formula needs at least one variable")
        if not clauses:
            raise ReductionError("a formula needs at least one clause")
        for c in clauses:
            if len(c) != 3:
                raise ReductionError(f"clause {c} does not have exactly three literals")
            for v in c:
                if not isinstance(v, int) or not 1 <= v <= self.n:
                    raise ReductionError(f"literal {v!r} in clause {c} is not in 1..{self.n}")

    @property
    def m(self) -> int:
        return len(self.clauses)


def poits_verify(formula: PoitsFormula, true_vars) -> bool:
    """Every clause has exactly one true literal."""
    t = set(true_vars)
    return all(sum(v in t for v in c) == 1 for c in formula.clauses)


def true_positions(formula: PoitsFormula, true_vars) -> list:
    """``r_j``: the (1-based) position of the true literal in each clause."""
    t = set(true_vars)
    if not t <= set(range(1, formula.n + 1)):
        raise ReductionError(f"assignment {sorted(t)} names unknown variables")
    if not poits_verify(formula, t):
        raise ReductionError(f"{sorted(t)} does not set exactly one literal per clause")
    return [next(r for r, v in enumerate(c, 1) if v in t) for c in formula.clauses]


@dataclass(frozen=True)
class SelectionGadgetSpec:
    slopes: tuple
    offset: Fraction = ZERO
    epsilon: Fraction = THIRD

    def __post_init__(self):
        slopes = tuple(as_fraction(s) for s in self.slopes)
        object.__setattr__(self, "slopes", slopes)
        object.__setattr__(self, "offset", as_fraction(self.offset))
        object.__setattr__(self, "epsilon", as_fraction(self.epsilon))
        if len(slopes) < 2:
            raise ReductionError("a selection gadget needs at least two slopes")
        if any(a >= b for a, b in zip(slopes, slopes[1:])):
            raise ReductionError("gadget slopes must be strictly increasing")
        if self.epsilon <= 0:
            raise ReductionError("epsilon must be positive")
        bound = max_epsilon(slopes)
        if bound is not None and self.epsilon > bound:
            raise ReductionError(f"epsilon {self.epsilon} exceeds {bound}")


def max_epsilon(slopes: Sequence[Fraction]) -> Optional[Fraction]:
    """Largest admissible epsilon, ``min 1/(3|s|)`` over the extreme slopes.

    A zero slope imposes no bound; ``None`` means no bound at all.
    """
    bounds = [1 / (3 * abs(as_fraction(s))) for s in (slopes[0], slopes[-1]) if s]
    return min(bounds) if bounds else None


def _shift(points, z):
    return [LabeledPoint((x1, x2 + z), y) for (x1, x2), y in points]


H0_TABLE = [  # (x2, label) on the line x1 = 0
    (-4, 0), (-3, 0), (-2, 0), (Fraction(-5, 3), THIRD), (Fraction(-4, 3), 2 * THIRD),
    (-1, 1), (0, 1), (1, 1), (Fraction(4, 3), 2 * THIRD), (Fraction(5, 3), THIRD),
    (2, 0), (3, 0), (4, 0),
]


def selection_gadget_points(spec: SelectionGadgetSpec, fractional_rows: bool = True) -> list:
    """All data points of one selection gadget, shifted up by ``spec.offset``.

    With ``fractional_rows=False`` the four points with labels 1/3 and 2/3
    are left out (the threshold variant uses this).
    """
    s1, sl = spec.slopes[0], spec.slopes[-1]
    e = spec.epsilon
    pts = []
    for x2, y in H0_TABLE:
        y = as_fraction(y)
        if fractional_rows or y.denominator == 1:
            pts.append(((ZERO, as_fraction(x2)), y))
    left = [-4 - e * sl, -3 - e * sl, -2 - e * sl, -1 - e * s1, 0,
            1 - e * sl, 2 - e * s1, 3 - e * s1, 4 - e * s1]
    right = [-4 + e * s1, -3 + e * s1, -2 + e * s1, -1 + e * sl, 0,
             1 + e * s1, 2 + e * sl, 3 + e * sl, 4 + e * sl]
    labels = [0, 0, 0, 1, 1, 1, 0, 0, 0]
    pts += [((-e, as_fraction(x2)), as_fraction(y)) for x2, y in zip(left, labels)]
    pts += [((e, as_fraction(x2)), as_fraction(y)) for x2, y in zip(right, labels)]
    for a, b in zip(spec.slopes, spec.slopes[1:]):
        gap = b - a
        pts.append(((-4 / gap, -2 * (a + b) / gap), ZERO))
        pts.append(((4 / gap, 2 * (a + b) / gap), ZERO))
    return _shift(pts, spec.offset)


@dataclass(frozen=True)
class LeveeSpec:
    """One candidate levee of the global construction."""

    id: str
    slope: Fraction
    offset: Fraction

    def value(self, x) -> Fraction:
        return levee_value(self.slope, x[0], x[1] - self.offset)


def clause_levee_id(j: int, r: int) -> str:
    return f"clause{j}-slope{r}"


def variable_levee_id(i: int, slope: int) -> str:
    return f"var{i}-slope{slope:+d}"


@dataclass(frozen=True)
class GlobalConstruction:
    """Geometry shared by the ReLU and threshold reductions of a formula."""

    formula: PoitsFormula

    @property
    def delta(self) -> Fraction:
        """Smallest gap between consecutive clause-gadget slopes."""
        return Fraction(1, 2 * self.formula.m)

    @property
    def max_slope(self) -> Fraction:
        return ONE

    @property
    def spacing(self) -> Fraction:
        """Distance between neighbouring gadget centres, ``8S/delta + 6``."""
        return 8 * self.max_slope / self.delta + 6

    def clause_slope(self, j: int, r: int) -> Fraction:
        return (2 * j - 3 + r) * self.delta - 1

    def clause_gadget(self, j: int, epsilon=None) -> SelectionGadgetSpec:
        slopes = tuple(self.clause_slope(j, r) for r in (1, 2, 3))
        return SelectionGadgetSpec(slopes, j * self.spacing,
                                   self.epsilon if epsilon is None else epsilon)

    def variable_gadget(self, i: int, epsilon=None) -> SelectionGadgetSpec:
        return SelectionGadgetSpec((-ONE, ONE), -i * self.spacing,
                                   self.epsilon if epsilon is None else epsilon)

    def gadget_slopes(self) -> list:
        m, n = self.formula.m, self.formula.n
        out = [tuple(self.clause_slope(j, r) for r in (1, 2, 3)) for j in range(1, m + 1)]
        out += [(-ONE, ONE)] * n
        return out

    @property
    def epsilon(self) -> Fraction:
        """One epsilon for all gadgets: the minimum of their individual bounds."""
        bounds = [b for b in map(max_epsilon, self.gadget_slopes()) if b is not None]
        return min(bounds) if bounds else THIRD

    def gadgets(self) -> list:
        m, n = self.formula.m, self.formula.n
        return ([self.clause_gadget(j) for j in range(1, m + 1)]
                + [self.variable_gadget(i) for i in range(1, n + 1)])

    def gadget_offsets(self) -> list:
        return sorted(g.offset for g in self.gadgets())

    def consistency_point(self, j: int, r: int) -> tuple:
        """Where the clause-``j`` levee for literal ``r`` crosses its variable's slope-1 levee."""
        i = self.formula.clauses[j - 1][r - 1]
        x1 = self.spacing * (i + j) / (1 - self.clause_slope(j, r))
        return (x1, x1 - self.spacing * i)

    def consistency_points(self) -> list:
        return [LabeledPoint(self.consistency_point(j, r), ONE)
                for j in range(1, self.formula.m + 1) for r in (1, 2, 3)]

    def levee_catalog(self) -> list:
        out = []
        for j in range(1, self.formula.m + 1):
            for r in (1, 2, 3):
                out.append(LeveeSpec(clause_levee_id(j, r), self.clause_slope(j, r),
                                     j * self.spacing))
        for i in range(1, self.formula.n + 1):
            for s in (-1, 1):
                out.append(LeveeSpec(variable_levee_id(i, s), Fraction(s), -i * self.spacing))
        return out

    def chosen_levees(self, true_vars, check: bool = True) -> list:
        """The ``m+n`` levees summed by the witness for ``true_vars``.

        With ``check=False`` any assignment is accepted and each clause
        takes its first true literal (its first literal if none is true).
        """
        t = set(true_vars)
        if check:
            rs = true_positions(self.formula, t)
        else:
            if not t <= set(range(1, self.formula.n + 1)):
                raise ReductionError(f"assignment {sorted(t)} names unknown variables")
            rs = [next((r for r, v in enumerate(c, 1) if v in t), 1) for c in self.formula.clauses]
        cat = {lv.id: lv for lv in self.levee_catalog()}
        ids = [variable_levee_id(i, -1 if i in t else 1) for i in range(1, self.formula.n + 1)]
        ids += [clause_levee_id(j, r) for j, r in enumerate(rs, 1)]
        return [cat[i] for i in ids]


def _merge(points) -> tuple:
    """Drop exact duplicates; a coordinate with two labels is a bug."""
    seen = {}
    out = []
    for p in points:
        if p.x in seen:
            if seen[p.x] != p.y:
                raise ReductionError(f"point {p.x} generated with labels {seen[p.x]} and {p.y}")
            continue
        seen[p.x] = p.y
        out.append(p)
    return tuple(out)


def poits_reduction(formula: PoitsFormula) -> Instance:
    """2-D ReLU instance with ``k = 4(m+n)`` fittable iff ``formula`` is satisfiable."""
    g = GlobalConstruction(formula)
    pts = []
    for spec in g.gadgets():
        pts += selection_gadget_points(spec)
    pts += g.consistency_points()
    return Instance(2, _merge(pts), 4 * (formula.m + formula.n))


def poits_solution_network(formula: PoitsFormula, true_vars, check: bool = True) -> ReluNetwork:
    """Sum of the chosen levees, four ReLUs each.

    Raises unless ``true_vars`` satisfies the formula; ``check=False``
    builds the network anyway (it then misses some consistency point).
    """
    g = GlobalConstruction(formula)
    units = []
    for lv in g.chosen_levees(true_vars, check):
        units += levee_network(lv.slope, lv.offset).units
    return ReluNetwork(units, dim=2)


def nonzero_levees_at(construction: GlobalConstruction, j: int, r: int) -> set:
    """Ids of the catalog levees that do not vanish at the consistency point ``(j, r)``."""
    if not 1 <= j <= construction.formula.m or r not in (1, 2, 3):
        raise ReductionError(f"no consistency point ({j}, {r})")
    p = construction.consistency_point(j, r)
    return {lv.id for lv in construction.levee_catalog() if lv.value(p)}


def poits_reduction_lt(formula: PoitsFormula) -> Instance:
    """Threshold version: stripes replace levees, ``k = 2(m+n)``."""
    g = GlobalConstruction(formula)
    pts = []
    for spec in g.gadgets():
        pts += selection_gadget_points(spec, fractional_rows=False)
    pts += g.consistency_points()
    return Instance(2, _merge(pts), 2 * (formula.m + formula.n), activation=Activation.LT)


def poits_solution_lt(formula: PoitsFormula, true_vars, check: bool = True) -> LTNetwork:
    g = GlobalConstruction(formula)
    units = []
    for lv in g.chosen_levees(true_vars, check):
        units += stripe_network(lv.slope, lv.offset, LT_HALF_WIDTH).units
    return LTNetwork(units, dim=2)


# --------------------------------------------------------------------------
# two-hyperplane separability


@dataclass(frozen=True)
class HsepWitness:
    """Hyperplanes ``h1 . x + o1 = 0`` and ``h2 . x + o2 = 0``."""

    h1: tuple
    o1: Fraction
    h2: tuple
    o2: Fraction

    def __post_init__(self):
        for name in ("h1", "h2"):
            object.__setattr__(self, name, tuple(as_fraction(v) for v in getattr(self, name)))
        for name in ("o1", "o2"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if len(self.h1) != len(self.h2):
            raise ReductionError("witness normals have different lengths")


@dataclass(frozen=True)
class HsepInput:
    Q: tuple
    P: tuple
    witness: Optional[HsepWitness] = None

    def __post_init__(self):
        Q = tuple(tuple(as_fraction(v) for v in q) for q in self.Q)
        P = tuple(tuple(as_fraction(v) for v in p) for p in self.P)
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "P", P)
        if not Q or not P:
            raise ReductionError("Q and P must both be nonempty")
        dims = {len(x) for x in Q + P}
        if len(dims) != 1 or 0 in dims:
            raise ReductionError("all points must share one positive dimension")
        if self.witness is not None and len(self.witness.h1) != self.dim:
            raise ReductionError("witness dimension does not match the points")

    @property
    def dim(self) -> int:
        return len(self.Q[0])

    @property
    def m(self) -> int:
        return len(set(self.Q) | set(self.P))

    @property
    def epsilon(self) -> Fraction:
        """Required distance between every point and both hyperplanes, ``m**-3``."""
        return Fraction(1, self.m ** 3)


def _sign(v: Fraction) -> int:
    return (v > 0) - (v < 0)


def hsep_check_separation(data: HsepInput) -> bool:
    """Whether the witness satisfies the side and margin conditions exactly.

    Every ``q`` must be on the positive side of hyperplane 1 and the
    negative side of hyperplane 2; every ``p`` gets the same sign from
    both; and every point is farther than ``epsilon`` from both
    hyperplanes, compared in squared form.
    """
    w = data.witness
    if w is None:
        raise ReductionError("no witness hyperplanes to check")
    eps2 = data.epsilon ** 2
    planes = [(w.h1, w.o1), (w.h2, w.o2)]
    norms2 = [dot(h, h) for h, _ in planes]
    if 0 in norms2:
        return False
    for q in data.Q:
        if not dot(w.h1, q) + w.o1 > 0 > dot(w.h2, q) + w.o2:
            return False
    for p in data.P:
        if _sign(dot(w.h1, p) + w.o1) != _sign(dot(w.h2, p) + w.o2):
            return False
    for x in data.Q + data.P:
        for (h, o), n2 in zip(planes, norms2):
            if (dot(h, x) + o) ** 2 <= eps2 * n2:
                return False
    return True


def mixing_weight(q, p, epsilon: Fraction) -> Fraction:
    """``epsilon / (2 * |q - p|_1)``: moves at most ``epsilon/2`` along the segment."""
    l1 = sum(abs(a - b) for a, b in zip(q, p))
    if not l1:
        raise ReductionError(f"point {q} is in both Q and P")
    return epsilon / (2 * l1)


def segment_points(q, p, epsilon: Fraction) -> tuple:
    """``(r_qp, s_qp)``: points near ``q`` and near ``p`` on the segment ``qp``."""
    t = mixing_weight(q, p, epsilon)
    r = tuple((1 - t) * a + t * b for a, b in zip(q, p))
    s = tuple(t * a + (1 - t) * b for a, b in zip(q, p))
    return r, s


def hsep_reduction(data: HsepInput) -> Instance:
    """Points in ``Q^d`` fittable with 4 ReLUs iff ``Q`` and ``P`` are 2-separable."""
    overlap = set(data.Q) & set(data.P)
    if overlap:
        raise ReductionError(f"Q and P share points: {sorted(overlap)}")
    eps = data.epsilon
    pts = [LabeledPoint(q, ONE) for q in data.Q]
    pts += [LabeledPoint(p, ZERO) for p in data.P]
    for q in data.Q:
        for p in data.P:
            r, s = segment_points(q, p, eps)
            pts.append(LabeledPoint(r, ONE))
            pts.append(LabeledPoint(s, ZERO))
    return Instance(data.dim, _merge(pts), 4)


def step_slope(h: Sequence[Fraction], epsilon: Fraction) -> Fraction:
    """Scale turning ``h . x + o`` into a unit step of width below ``epsilon/4``.

    ``|h|_inf <= |h|_2``, so dividing by the max norm is a rational
    stand-in for normalising ``h``.
    """
    return 4 / (epsilon * max(abs(v) for v in h))


def hsep_solution_network(data: HsepInput) -> ReluNetwork:
    """Up-step across hyperplane 1 plus down-step across hyperplane 2."""
    if not hsep_check_separation(data):
        raise ReductionError("witness hyperplanes do not satisfy the separation conditions")
    w = data.witness
    eps = data.epsilon
    b1, b2 = step_slope(w.h1, eps), step_slope(w.h2, eps)
    w1 = tuple(b1 * v for v in w.h1)
    w2 = tuple(b2 * v for v in w.h2)
    return ReluNetwork([
        Unit(w1, b1 * w.o1, 1),
        Unit(w1, b1 * w.o1 - 1, -1),
        Unit(w2, b2 * w.o2, -1),
        Unit(w2, b2 * w.o2 - 1, 1),
    ], dim=data.dim)


GOLDEN_HSEP = HsepInput(
    Q=((1, 1),),
    P=((-1, -1), (3, 3)),
    witness=HsepWitness(h1=(1, 1), o1=Fraction(-1, 4), h2=(1, 1), o2=Fraction(-15, 4)),
)

DEMO_FORMULA = PoitsFormula(5, ((5, 4, 3), (4, 3, 2), (5, 2, 1)))
DEMO_TRUE = (1, 3)
