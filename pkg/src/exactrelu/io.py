"""JSON interchange.  Every number is a ``"p/q"`` or integer string."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .nets import Activation, Instance, LabeledPoint, LTNetwork, ReluNetwork, Unit
from .ratlp import as_fraction, parse_rational
from .reductions import HsepInput, HsepWitness, PoitsFormula


def rat(value) -> str:
    return str(as_fraction(value))


def _parse(value) -> Fraction:
    # JSON integers are accepted as a convenience; floats never are
    if isinstance(value, bool) or isinstance(value, float):
        raise ValueError(f"expected a rational string, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise ValueError(f"expected a rational string, got {value!r}")
    return parse_rational(value)


def _vec(values) -> tuple:
    return tuple(_parse(v) for v in values)


def instance_to_dict(inst: Instance) -> dict:
    return {
        "dim": inst.dim,
        "k": inst.k,
        "gamma": rat(inst.gamma),
        "activation": inst.activation.value,
        "points": [{"x": [rat(v) for v in p.x], "y": rat(p.y)} for p in inst.points],
    }


def instance_from_dict(d: dict) -> Instance:
    try:
        points = [LabeledPoint(_vec(p["x"]), _parse(p["y"])) for p in d["points"]]
        return Instance(int(d["dim"]), points, int(d["k"]), _parse(d.get("gamma", "0")),
                        Activation(d.get("activation", "relu")))
    except KeyError as e:
        raise ValueError(f"instance JSON is missing key {e}") from None


def network_to_dict(net) -> dict:
    return {
        "dim": net.dim,
        "activation": net.activation.value,
        "units": [{"w": [rat(v) for v in u.w], "b": rat(u.b), "a": rat(u.a)}
                  for u in net.units],
    }


def network_from_dict(d: dict):
    try:
        units = [Unit(_vec(u["w"]), _parse(u["b"]), _parse(u["a"])) for u in d["units"]]
        act = Activation(d.get("activation", "relu"))
        cls = ReluNetwork if act is Activation.RELU else LTNetwork
        return cls(units, dim=int(d["dim"]))
    except KeyError as e:
        raise ValueError(f"network JSON is missing key {e}") from None


def formula_to_dict(f: PoitsFormula) -> dict:
    return {"n": f.n, "clauses": [list(c) for c in f.clauses]}


def formula_from_dict(d: dict) -> PoitsFormula:
    try:
        return PoitsFormula(int(d["n"]), [tuple(int(v) for v in c) for c in d["clauses"]])
    except KeyError as e:
        raise ValueError(f"formula JSON is missing key {e}") from None


def hsep_to_dict(h: HsepInput) -> dict:
    d = {"Q": [[rat(v) for v in q] for q in h.Q], "P": [[rat(v) for v in p] for p in h.P]}
    if h.witness is not None:
        d["witness"] = witness_to_dict(h.witness)
    return d


def witness_to_dict(w: HsepWitness) -> dict:
    return {"h1": [rat(v) for v in w.h1], "o1": rat(w.o1),
            "h2": [rat(v) for v in w.h2], "o2": rat(w.o2)}


def witness_from_dict(d: dict) -> HsepWitness:
    try:
        return HsepWitness(_vec(d["h1"]), _parse(d["o1"]), _vec(d["h2"]), _parse(d["o2"]))
    except KeyError as e:
        raise ValueError(f"hyperplane witness JSON is missing key {e}") from None


def hsep_from_dict(d: dict) -> HsepInput:
    try:
        w = d.get("witness")
        return HsepInput([_vec(q) for q in d["Q"]], [_vec(p) for p in d["P"]],
                         witness_from_dict(w) if w is not None else None)
    except KeyError as e:
        raise ValueError(f"separability JSON is missing key {e}") from None


def assignment_from_dict(d: dict) -> tuple:
    """``{"T": [1, 3]}``: the variables set to true."""
    try:
        return tuple(int(v) for v in d["T"])
    except KeyError:
        raise ValueError("assignment JSON needs a \"T\" list of true variables") from None


def read_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def write_json(path, data: dict):
    Path(path).write_text(json.dumps(data, indent=1) + "\n", encoding="utf-8")
