"""Brute-force exact-fit deciders for tiny instances.

Both oracles enumerate every activation pattern (which unit is on at which
point) and ask an LP whether some parameters realise the pattern and hit
every label.  Patterns are visited in row-major lexicographic order: the
pattern of point 0 varies slowest, and a point's pattern is a bitmask over
the units.  The search is depth-first over points and skips a subtree when
the constraints of the points fixed so far are already infeasible, which
never changes which pattern is found first.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .nets import Activation, Instance, LTNetwork, ReluNetwork, Unit
from .ratlp import (LinearConstraint, Polyhedron, feasible, solve_linear_system,
                    strictly_feasible)

MAX_CELLS = 24


class OracleGuardError(ValueError):
    """The instance is too large to enumerate."""


def _guard(instance: Instance, activation: Activation):
    if instance.activation is not activation:
        raise ValueError(f"expected a {activation.value} instance")
    if instance.gamma != 0:
        raise ValueError("only target error 0 is supported")
    cells = instance.n * instance.k
    if cells > MAX_CELLS:
        raise OracleGuardError(
            f"n*k = {instance.n}*{instance.k} = {cells} exceeds the enumeration "
            f"guard of {MAX_CELLS} (2**{cells} activation patterns)")


def sign_vectors(k: int):
    """Output-coefficient vectors in binary order; bit ``j`` set means ``a_j = -1``."""
    for mask in range(2 ** k):
        yield tuple(-1 if mask >> j & 1 else 1 for j in range(k))


def _relu_rows(x, y, mask, signs, d):
    """Rows fixing which units are active at ``x`` and the output value ``y``."""
    k = len(signs)
    rows = []
    out = {}
    for j in range(k):
        base = j * (d + 1)
        row = {base + t: xt for t, xt in enumerate(x)}
        row[base + d] = Fraction(1)
        active = mask >> j & 1
        rows.append(LinearConstraint(row, ">=" if active else "<=", 0))
        if active:
            for v, c in row.items():
                out[v] = out.get(v, 0) + signs[j] * c
    rows.append(LinearConstraint(out, "==", y))
    return rows


def brute_force_fit_relu(instance: Instance, convex_only: bool = False) -> Optional[ReluNetwork]:
    """First ReLU network (in enumeration order) fitting ``instance`` exactly.

    With ``convex_only`` only ``a = (+1, ..., +1)`` is tried.
    """
    _guard(instance, Activation.RELU)
    k, d = instance.k, instance.dim
    nvars = k * (d + 1)
    points = instance.points
    sign_list = [(1,) * k] if convex_only else list(sign_vectors(k))

    for signs in sign_list:
        def dfs(t, rows, z):
            if t == len(points):
                return z
            p = points[t]
            for mask in range(2 ** k):
                extended = rows + _relu_rows(p.x, p.y, mask, signs, d)
                w = feasible(Polyhedron(nvars, extended))
                if w is None:
                    continue
                found = dfs(t + 1, extended, w)
                if found is not None:
                    return found
            return None

        z = dfs(0, [], feasible(Polyhedron(nvars)))
        if z is not None:
            units = [Unit(z[j * (d + 1):j * (d + 1) + d], z[j * (d + 1) + d], signs[j])
                     for j in range(k)]
            return ReluNetwork(units, dim=d)
    return None


def _halfspace_rows(xs, ons, d):
    rows = []
    for x, on in zip(xs, ons):
        row = {t: xt for t, xt in enumerate(x)}
        row[d] = Fraction(1)
        rows.append(LinearConstraint(row, ">" if on else "<=", 0))
    return rows


def brute_force_fit_lt(instance: Instance) -> Optional[LTNetwork]:
    """First linear-threshold network (in enumeration order) fitting exactly."""
    _guard(instance, Activation.LT)
    k, d = instance.k, instance.dim
    points = instance.points
    n = len(points)

    def consistent(masks):
        t = len(masks)
        xs = [p.x for p in points[:t]]
        # (a) output weights: sum of a_j over units on at point i equals y_i
        a_rows = [[1 if m >> j & 1 else 0 for j in range(k)] for m in masks]
        a = solve_linear_system(a_rows, [p.y for p in points[:t]], k)
        if a is None:
            return None
        # (b) each unit's on/off column must be a strict halfspace cut
        units = []
        for j in range(k):
            wb = strictly_feasible(_halfspace_rows(xs, [m >> j & 1 for m in masks], d), d + 1)
            if wb is None:
                return None
            units.append((wb[:d], wb[d]))
        return a, units

    def dfs(masks, solution):
        if len(masks) == n:
            return solution
        for mask in range(2 ** k):
            extended = masks + [mask]
            sol = consistent(extended)
            if sol is None:
                continue
            found = dfs(extended, sol)
            if found is not None:
                return found
        return None

    found = dfs([], consistent([]))
    if found is None:
        return None
    a, units = found
    return LTNetwork([Unit(w, b, aj) for (w, b), aj in zip(units, a)], dim=d)
