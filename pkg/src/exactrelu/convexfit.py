"""Exact fitting with convex two-layer ReLU networks (all ``a_j = +1``).

The search assigns every data point to one of the ``2**k`` affine pieces
of ``phi(x) = sum_j [w_j . x + b_j]_+``.  Bucket ``i`` stands for the set
``I(i)`` of active units, encoded by the bits of ``i``.  A partial
assignment defines a polyhedron in the ``k*(d+1)`` unknowns
``(w_1, b_1, ..., w_k, b_k)``; it is nonempty iff some network places each
assigned point on its prescribed piece.

After each branching step, unassigned points whose piece is implied by a
lower-bound LP are moved ("forced"), and branches are rejected as soon as
some point lies strictly below every network still allowed.  This keeps
the recursion depth at most ``k*(d+1) + 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .nets import Activation, Instance, LabeledPoint, ReluNetwork, Unit
from .ratlp import LinearConstraint, LpStatus, Polyhedron, feasible, solve_lp

#: Result of a lower-bound LP: a Fraction, or ``-math.inf`` (unbounded) /
#: ``math.inf`` (infeasible).  Comparisons with Fractions stay exact.
ExtendedRational = Union[Fraction, float]
NEG_INF = -math.inf
POS_INF = math.inf


def active_set(i: int, k: int) -> frozenset:
    """``I(i)``: the units whose bit is set in ``i``."""
    if not 0 <= i < 2 ** k:
        raise ValueError(f"bucket index {i} out of range for k={k}")
    return frozenset(j for j in range(k) if i >> j & 1)


def bucket_index(units) -> int:
    return sum(1 << j for j in units)


@dataclass(frozen=True)
class PieceAssignment:
    """Search state: unassigned point indices and the ``2**k`` buckets.

    Points are referred to by their index in ``points``; ``unassigned`` is
    kept sorted so that the lowest original index is picked first.
    """

    points: tuple
    k: int
    dim: int
    unassigned: tuple
    buckets: tuple

    @classmethod
    def initial(cls, points, k: int, dim: int) -> "PieceAssignment":
        points = tuple(points)
        return cls(points, k, dim, tuple(range(len(points))), ((),) * (2 ** k))

    @property
    def num_vars(self) -> int:
        return self.k * (self.dim + 1)

    def place(self, index: int, bucket: int) -> "PieceAssignment":
        if index not in self.unassigned:
            raise ValueError(f"point {index} is not unassigned")
        buckets = list(self.buckets)
        buckets[bucket] = buckets[bucket] + (index,)
        rest = tuple(j for j in self.unassigned if j != index)
        return PieceAssignment(self.points, self.k, self.dim, rest, tuple(buckets))

    def bucket_of(self, index: int) -> Optional[int]:
        for i, members in enumerate(self.buckets):
            if index in members:
                return i
        return None


def _unit_row(j: int, x, d: int) -> dict:
    """Coefficients of ``w_j . x + b_j`` in the flat variable vector."""
    base = j * (d + 1)
    row = {base + t: xt for t, xt in enumerate(x)}
    row[base + d] = Fraction(1)
    return row


def _piece_row(units, x, d: int) -> dict:
    """Coefficients of ``sum_{j in units} (w_j . x + b_j)``."""
    row = {}
    for j in units:
        for v, c in _unit_row(j, x, d).items():
            row[v] = row.get(v, 0) + c
    return row


def piece_polyhedron(assignment: PieceAssignment) -> Polyhedron:
    """Constraints placing every bucketed point on its piece.

    For a point ``(x, y)`` in bucket ``i``: ``w_j . x + b_j >= 0`` for
    ``j`` in ``I(i)``, ``<= 0`` otherwise, and the active units sum to ``y``.
    """
    k, d = assignment.k, assignment.dim
    rows = []
    for i, members in enumerate(assignment.buckets):
        active = active_set(i, k)
        for idx in members:
            p = assignment.points[idx]
            for j in range(k):
                rows.append(LinearConstraint(_unit_row(j, p.x, d),
                                             ">=" if j in active else "<=", 0))
            if active or p.y != 0:
                # with no active unit the row reads 0 == y
                rows.append(LinearConstraint(_piece_row(sorted(active), p.x, d), "==", p.y))
    return Polyhedron(assignment.num_vars, rows)


def network_from_vector(z, k: int, d: int) -> ReluNetwork:
    units = []
    for j in range(k):
        base = j * (d + 1)
        units.append(Unit(z[base:base + d], z[base + d], 1))
    return ReluNetwork(units, dim=d)


def check_feasibility(assignment: PieceAssignment) -> Optional[ReluNetwork]:
    """A convex network realising the bucket assignment, if there is one."""
    z = feasible(piece_polyhedron(assignment))
    if z is None:
        return None
    return network_from_vector(z, assignment.k, assignment.dim)


def lower_bound(x, i: int, assignment: PieceAssignment,
                polyhedron: Optional[Polyhedron] = None) -> ExtendedRational:
    """Minimum of ``sum_{j in I(i)} (w_j . x + b_j)`` over the current polyhedron."""
    poly = polyhedron if polyhedron is not None else piece_polyhedron(assignment)
    row = _piece_row(sorted(active_set(i, assignment.k)), x, assignment.dim)
    objective = [row.get(v, 0) for v in range(poly.num_vars)]
    out = solve_lp(poly, objective, "min")
    if out.status is LpStatus.INFEASIBLE:
        return POS_INF
    if out.status is LpStatus.UNBOUNDED:
        return NEG_INF
    return out.value


@dataclass
class SearchLog:
    """Replayable record of an ExactFit run.

    ``events`` holds dicts with an ``"event"`` key:

    * ``place``: ``point`` put into ``bucket`` by branching at ``depth``
      (the node being expanded; the root has depth 0)
    * ``forced``: ``point`` moved into ``bucket`` because ``mu == y``
    * ``reject``: branch closed because ``mu > y`` for ``point``/``bucket``
    * ``leaf``: all points assigned; ``feasible`` tells the LP verdict
    """

    events: list = field(default_factory=list)
    nodes: int = 0
    forced_moves: int = 0
    rejections: int = 0
    max_depth: int = 0

    def add(self, event: str, **data):
        self.events.append({"event": event, **data})

    def stats(self) -> dict:
        return {"nodes": self.nodes, "forced_moves": self.forced_moves,
                "rejections": self.rejections, "max_depth": self.max_depth}


def _fmt(mu: ExtendedRational) -> str:
    if mu == POS_INF:
        return "+inf"
    if mu == NEG_INF:
        return "-inf"
    return str(mu)


def check_forced_points(assignment: PieceAssignment,
                        log: Optional[SearchLog] = None) -> Optional[PieceAssignment]:
    """Move forced points into their buckets; ``None`` rejects the branch.

    On success every remaining unassigned ``(x, y)`` satisfies
    ``lower_bound(x, i) < y`` for every bucket ``i``.
    """
    restart = True
    while restart:
        restart = False
        poly = piece_polyhedron(assignment)
        for idx in assignment.unassigned:
            p = assignment.points[idx]
            for i in range(2 ** assignment.k):
                mu = lower_bound(p.x, i, assignment, poly)
                if mu == p.y:
                    assignment = assignment.place(idx, i)
                    if log is not None:
                        log.forced_moves += 1
                        log.add("forced", point=idx, bucket=i, mu=_fmt(mu))
                    restart = True
                    break
                if mu > p.y:
                    # includes +inf: the polyhedron is already empty
                    if log is not None:
                        log.rejections += 1
                        log.add("reject", point=idx, bucket=i, mu=_fmt(mu))
                    return None
            if restart:
                break
    return assignment


def depth_bound(k: int, d: int) -> int:
    return k * (d + 1) + 1


def _search(assignment: PieceAssignment, depth: int, log: SearchLog) -> Optional[ReluNetwork]:
    log.nodes += 1
    log.max_depth = max(log.max_depth, depth)
    if not assignment.unassigned:
        net = check_feasibility(assignment)
        log.add("leaf", depth=depth, feasible=net is not None)
        return net
    idx = assignment.unassigned[0]
    for i in range(2 ** assignment.k):
        log.add("place", point=idx, bucket=i, depth=depth)
        child = check_forced_points(assignment.place(idx, i), log)
        if child is None:
            continue
        net = _search(child, depth + 1, log)
        if net is not None:
            return net
    return None


def exact_fit_convex(instance: Instance,
                     log: Optional[SearchLog] = None) -> Optional[ReluNetwork]:
    """Decide whether a convex ``k``-unit ReLU network fits ``instance`` exactly.

    Returns such a network (every ``a_j = +1``) or ``None``.  Pass a
    :class:`SearchLog` to collect the search trace and statistics.
    """
    if instance.activation is not Activation.RELU:
        raise ValueError("exact_fit_convex needs a ReLU instance")
    if instance.gamma != 0:
        raise ValueError("only target error 0 is supported")
    if log is None:
        log = SearchLog()
    start = PieceAssignment.initial(instance.points, instance.k, instance.dim)
    return _search(start, 0, log)


def exact_fit_concave(instance: Instance,
                      log: Optional[SearchLog] = None) -> Optional[ReluNetwork]:
    """Concave case (all ``a_j = -1``) by fitting the negated labels."""
    flipped = Instance(instance.dim, [LabeledPoint(p.x, -p.y) for p in instance.points],
                       instance.k, instance.gamma, instance.activation)
    net = exact_fit_convex(flipped, log)
    if net is None:
        return None
    return ReluNetwork([Unit(u.w, u.b, -1) for u in net.units], dim=net.dim)
