"""Two-layer ReLU and linear-threshold networks evaluated exactly.

A network with ``k`` hidden units computes

    phi(x) = sum_j a_j * act(w_j . x + b_j)

with ``act(t) = max(0, t)`` (ReLU) or ``act(t) = 1 if t > 0 else 0``
(linear threshold).  ReLU networks are normalised so that ``a_j`` is
``+1`` or ``-1``; threshold networks allow any rational ``a_j``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .ratlp import RationalLike, as_fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class Activation(str, enum.Enum):
    RELU = "relu"
    LT = "lt"


class LossKind(enum.Enum):
    """Losses with ``loss(yhat, y) == 0`` exactly when ``yhat == y``."""

    L0 = "l0"
    L1 = "l1"
    L2 = "l2"

    def __call__(self, yhat: Fraction, y: Fraction) -> Fraction:
        r = yhat - y
        if self is LossKind.L0:
            return ONE if r else ZERO
        if self is LossKind.L1:
            return abs(r)
        return r * r


def _vector(values: Iterable[RationalLike]) -> tuple:
    return tuple(as_fraction(v) for v in values)


def dot(w: Sequence[Fraction], x: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(w, x)), ZERO)


@dataclass(frozen=True)
class LabeledPoint:
    x: tuple
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", _vector(self.x))
        object.__setattr__(self, "y", as_fraction(self.y))
        if not self.x:
            raise ValueError("a data point needs at least one coordinate")

    @property
    def dim(self) -> int:
        return len(self.x)


@dataclass(frozen=True)
class Instance:
    """A training instance: points, number of hidden units, target error."""

    dim: int
    points: tuple
    k: int
    gamma: Fraction = ZERO
    activation: Activation = Activation.RELU

    def __post_init__(self):
        pts = tuple(p if isinstance(p, LabeledPoint) else LabeledPoint(*p)
                    for p in self.points)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "gamma", as_fraction(self.gamma))
        object.__setattr__(self, "activation", Activation(self.activation))
        if self.dim < 1:
            raise ValueError("dim must be at least 1")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.gamma < 0:
            raise ValueError("gamma must be non-negative")
        seen = {}
        for p in pts:
            if p.dim != self.dim:
                raise ValueError(f"point {p.x} has dimension {p.dim}, expected {self.dim}")
            if seen.setdefault(p.x, p.y) != p.y:
                raise ValueError(f"point {p.x} appears with labels {seen[p.x]} and {p.y}")

    @property
    def n(self) -> int:
        return len(self.points)

    def with_k(self, k: int) -> "Instance":
        return Instance(self.dim, self.points, k, self.gamma, self.activation)


@dataclass(frozen=True)
class Unit:
    """One hidden unit: weights ``w``, bias ``b``, output coefficient ``a``."""

    w: tuple
    b: Fraction
    a: Fraction

    def __post_init__(self):
        object.__setattr__(self, "w", _vector(self.w))
        object.__setattr__(self, "b", as_fraction(self.b))
        object.__setattr__(self, "a", as_fraction(self.a))

    def preactivation(self, x: Sequence[Fraction]) -> Fraction:
        return dot(self.w, x) + self.b


class _Network:
    activation: Activation

    def __init__(self, units: Iterable[Union[Unit, tuple]], dim: int = None):
        units = tuple(u if isinstance(u, Unit) else Unit(*u) for u in units)
        if dim is None:
            if not units:
                raise ValueError("cannot infer dim of a network without units")
            dim = len(units[0].w)
        for u in units:
            if len(u.w) != dim:
                raise ValueError(f"unit weight length {len(u.w)} != dim {dim}")
        self.units = units
        self.dim = dim
        self._check_coefficients()

    def _check_coefficients(self):
        pass

    @property
    def k(self) -> int:
        return len(self.units)

    def __eq__(self, other):
        return type(self) is type(other) and (self.dim, self.units) == (other.dim, other.units)

    def __hash__(self):
        return hash((type(self), self.dim, self.units))

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim}, k={self.k})"

    def __add__(self, other):
        """Concatenate hidden layers; the result computes the sum of both."""
        if type(self) is not type(other):
            return NotImplemented
        if self.dim != other.dim:
            raise ValueError("cannot add networks of different input dimension")
        return type(self)(self.units + other.units, self.dim)

    def _check_input(self, x) -> tuple:
        x = _vector(x)
        if len(x) != self.dim:
            raise ValueError(f"input has dimension {len(x)}, network expects {self.dim}")
        return x

    def __call__(self, x) -> Fraction:
        raise NotImplementedError


class ReluNetwork(_Network):
    activation = Activation.RELU

    def _check_coefficients(self):
        for u in self.units:
            if u.a not in (1, -1):
                raise ValueError(f"ReLU output coefficients must be +1 or -1, got {u.a}")

    @property
    def convex(self) -> bool:
        return all(u.a == 1 for u in self.units)

    def __call__(self, x) -> Fraction:
        return eval_relu(self, x)


class LTNetwork(_Network):
    activation = Activation.LT

    def __call__(self, x) -> Fraction:
        return eval_lt(self, x)


def eval_relu(net: ReluNetwork, x) -> Fraction:
    x = net._check_input(x)
    total = ZERO
    for u in net.units:
        t = u.preactivation(x)
        if t > 0:
            total += u.a * t
    return total


def eval_lt(net: LTNetwork, x) -> Fraction:
    x = net._check_input(x)
    # the indicator is strict: a unit with preactivation 0 is off
    return sum((u.a for u in net.units if u.preactivation(x) > 0), ZERO)


# --------------------------------------------------------------------------
# levees and stripes


def levee_value(s: RationalLike, x1: RationalLike, x2: RationalLike) -> Fraction:
    """The levee with slope ``s`` centred on the line ``x2 = s*x1``."""
    t = as_fraction(x2) - as_fraction(s) * as_fraction(x1)
    if abs(t) >= 2:
        return ZERO
    if abs(t) <= 1:
        return ONE
    if t < 0:
        return 2 + t
    return 2 - t


def levee_network(s: RationalLike, z: RationalLike = 0) -> ReluNetwork:
    """Four ReLUs computing ``levee_value(s, x1, x2 - z)``."""
    s, z = as_fraction(s), as_fraction(z)
    w = (-s, ONE)
    return ReluNetwork([
        Unit(w, 2 - z, 1),
        Unit(w, 1 - z, -1),
        Unit(w, -1 - z, -1),
        Unit(w, -2 - z, 1),
    ], dim=2)


def stripe_network(s: RationalLike, z: RationalLike = 0,
                   half_width: RationalLike = 2) -> LTNetwork:
    """Two threshold units equal to 1 on the band around ``x2 = s*x1 + z``.

    With ``t = x2 - s*x1 - z`` the value is 1 for ``-h < t <= h`` and 0
    otherwise (``h = half_width``).  The upper edge is closed because the
    second unit switches on only strictly above it.
    """
    s, z, h = as_fraction(s), as_fraction(z), as_fraction(half_width)
    if h <= 0:
        raise ValueError("half_width must be positive")
    w = (-s, ONE)
    return LTNetwork([Unit(w, h - z, 1), Unit(w, -h - z, -1)], dim=2)


# --------------------------------------------------------------------------
# fitting


def _check_compatible(net, instance: Instance):
    if net.activation is not instance.activation:
        raise ValueError(f"{net.activation.value} network used on "
                         f"{instance.activation.value} instance")
    if net.dim != instance.dim:
        raise ValueError(f"network dim {net.dim} != instance dim {instance.dim}")


def residuals(net, instance: Instance) -> list:
    """``phi(x_i) - y_i`` for every point, in instance order."""
    _check_compatible(net, instance)
    return [net(p.x) - p.y for p in instance.points]


def total_loss(net, instance: Instance, loss: LossKind = LossKind.L1) -> Fraction:
    _check_compatible(net, instance)
    return sum((loss(net(p.x), p.y) for p in instance.points), ZERO)


def is_exact_fit(net, instance: Instance) -> bool:
    return not any(residuals(net, instance))
