import random
from fractions import Fraction as F
from itertools import combinations

import pytest
from hypothesis import assume, given, settings, strategies as st

from exactrelu.nets import dot, is_exact_fit, levee_network, residuals, stripe_network
from exactrelu.reductions import (DEMO_FORMULA, DEMO_TRUE, GOLDEN_HSEP, LT_HALF_WIDTH,
                                  GlobalConstruction, HsepInput, HsepWitness, PoitsFormula,
                                  ReductionError, SelectionGadgetSpec, hsep_check_separation,
                                  hsep_reduction, hsep_solution_network, max_epsilon,
                                  nonzero_levees_at, poits_reduction, poits_reduction_lt,
                                  poits_solution_lt, poits_solution_network, poits_verify,
                                  segment_points, selection_gadget_points)

STD = SelectionGadgetSpec((-1, 0, 1), 0, F(1, 3))


def fits(net, points):
    return all(net(p.x) == p.y for p in points)


def satisfying(formula):
    n = formula.n
    for size in range(n + 1):
        for t in combinations(range(1, n + 1), size):
            if poits_verify(formula, t):
                yield t


def test_poits_verify_examples():
    assert poits_verify(DEMO_FORMULA, {1, 3})
    assert not poits_verify(DEMO_FORMULA, set())
    assert not poits_verify(DEMO_FORMULA, {3, 4})


def test_formula_validation():
    with pytest.raises(ReductionError):
        PoitsFormula(3, ())
    with pytest.raises(ReductionError):
        PoitsFormula(3, ((1, 2, 4),))
    with pytest.raises(ReductionError):
        PoitsFormula(3, ((1, 2),))


def test_gadget_point_examples():
    pts = {p.x: p.y for p in selection_gadget_points(STD)}
    assert pts[(0, F(-5, 3))] == F(1, 3)
    assert pts[(F(-1, 3), F(-2, 3))] == 1
    assert pts[(4, -2)] == 0
    assert pts[(-4, 2)] == 0


def test_gadget_counts():
    assert len(selection_gadget_points(STD)) == 35
    assert len(selection_gadget_points(SelectionGadgetSpec((-1, 1)))) == 33
    assert len(selection_gadget_points(STD, fractional_rows=False)) == 31


def test_gadget_spec_validation():
    with pytest.raises(ReductionError):
        SelectionGadgetSpec((0, -1))
    with pytest.raises(ReductionError):
        SelectionGadgetSpec((-2, 1), epsilon=F(1, 3))
    assert max_epsilon((-2, 1)) == F(1, 6)
    assert max_epsilon((0, F(1, 2))) == F(2, 3)


@pytest.mark.parametrize("s", [-1, 0, 1])
def test_standard_gadget_fit(s):
    assert fits(levee_network(s), selection_gadget_points(STD))


@st.composite
def gadget_specs(draw):
    nums = draw(st.lists(st.fractions(-1, 1, max_denominator=12), min_size=2, max_size=4,
                         unique=True))
    slopes = tuple(sorted(nums))
    bound = max_epsilon(slopes) or F(1)
    eps = bound * draw(st.fractions(F(1, 10), 1, max_denominator=10))
    offset = draw(st.fractions(-100, 100, max_denominator=7))
    return SelectionGadgetSpec(slopes, offset, eps)


@settings(max_examples=80, deadline=None)
@given(gadget_specs())
def test_every_listed_levee_fits_its_gadget(spec):
    pts = selection_gadget_points(spec)
    for s in spec.slopes:
        assert fits(levee_network(s, spec.offset), pts)


@settings(max_examples=200)
@given(st.fractions(-2, 2, max_denominator=40))
def test_other_levees_miss_the_gadget(s):
    assume(s not in (-1, 0, 1))
    assert not fits(levee_network(s), selection_gadget_points(STD))


def test_half_slope_rejected():
    assert not fits(levee_network(F(1, 2)), selection_gadget_points(STD))


def test_demo_formula_counts():
    inst = poits_reduction(DEMO_FORMULA)
    assert inst.k == 32 and inst.dim == 2
    assert inst.n == 3 * 35 + 5 * 33 + 9 == 279
    lt = poits_reduction_lt(DEMO_FORMULA)
    assert lt.k == 16 and lt.n == 3 * 31 + 5 * 29 + 9


def test_demo_formula_consistency_point():
    g = GlobalConstruction(DEMO_FORMULA)
    assert g.delta == F(1, 6) and g.spacing == 54
    assert g.clause_slope(1, 1) == -1
    assert g.consistency_point(1, 1) == (162, -108)
    assert g.epsilon == F(1, 3)


def test_demo_formula_witness_fits():
    inst = poits_reduction(DEMO_FORMULA)
    net = poits_solution_network(DEMO_FORMULA, DEMO_TRUE)
    assert net.k == 32
    assert is_exact_fit(net, inst)


def test_non_witness_rejected():
    with pytest.raises(ReductionError):
        poits_solution_network(DEMO_FORMULA, {1, 2, 3, 4, 5})
    with pytest.raises(ReductionError):
        poits_solution_lt(DEMO_FORMULA, {2})


def test_non_witness_misses_consistency_point():
    inst = poits_reduction(DEMO_FORMULA)
    net = poits_solution_network(DEMO_FORMULA, {1, 2, 3, 4, 5}, check=False)
    ps = set(GlobalConstruction(DEMO_FORMULA).consistency_point(j, r)
             for j in (1, 2, 3) for r in (1, 2, 3))
    bad = [p.x for p, res in zip(inst.points, residuals(net, inst)) if res]
    assert bad and set(bad) <= ps


def test_two_levees_at_each_consistency_point():
    g = GlobalConstruction(DEMO_FORMULA)
    assert nonzero_levees_at(g, 1, 1) == {"clause1-slope1", "var5-slope+1"}
    for j in (1, 2, 3):
        for r in (1, 2, 3):
            ids = nonzero_levees_at(g, j, r)
            assert len(ids) == 2
            cat = {lv.id: lv for lv in g.levee_catalog()}
            assert all(cat[i].value(g.consistency_point(j, r)) == 1 for i in ids)


def test_single_clause():
    f = PoitsFormula(3, ((1, 2, 3),))
    inst = poits_reduction(f)
    assert inst.k == 16
    net = poits_solution_network(f, {2})
    assert net.k == 16 and is_exact_fit(net, inst)
    lt = poits_reduction_lt(f)
    assert lt.k == 8 and is_exact_fit(poits_solution_lt(f, {2}), lt)


@st.composite
def formulas(draw):
    n = draw(st.integers(3, 5))
    lit = st.integers(1, n)
    clauses = draw(st.lists(st.tuples(lit, lit, lit), min_size=1, max_size=3))
    return PoitsFormula(n, clauses)


@settings(max_examples=25, deadline=None)
@given(formulas())
def test_construction_invariants(formula):
    g = GlobalConstruction(formula)
    offs = g.gadget_offsets()
    assert all(b - a >= 8 * g.max_slope / g.delta + 6 for a, b in zip(offs, offs[1:]))
    for j in range(1, formula.m + 1):
        for r in (1, 2, 3):
            assert len(nonzero_levees_at(g, j, r)) == 2


@settings(max_examples=15, deadline=None)
@given(formulas())
def test_forward_soundness(formula):
    witnesses = list(satisfying(formula))[:2]
    if not witnesses:
        return
    inst, lt = poits_reduction(formula), poits_reduction_lt(formula)
    for t in witnesses:
        assert is_exact_fit(poits_solution_network(formula, t), inst)
        assert is_exact_fit(poits_solution_lt(formula, t), lt)


def test_lt_demo_formula():
    inst = poits_reduction_lt(DEMO_FORMULA)
    assert is_exact_fit(poits_solution_lt(DEMO_FORMULA, DEMO_TRUE), inst)
    bad = poits_solution_lt(DEMO_FORMULA, {1, 2, 3, 4, 5}, check=False)
    assert any(residuals(bad, inst))


def test_lt_stripe_width_matters():
    # the stripe with the levee's own half-width swallows the label-0 points at |t| = 2
    inst = poits_reduction_lt(DEMO_FORMULA)
    g = GlobalConstruction(DEMO_FORMULA)
    units = []
    for lv in g.chosen_levees(DEMO_TRUE):
        units += stripe_network(lv.slope, lv.offset, 2).units
    from exactrelu.nets import LTNetwork
    assert not is_exact_fit(LTNetwork(units, dim=2), inst)
    assert 1 < LT_HALF_WIDTH < 2


# --------------------------------------------------------------------------
# two-hyperplane separability


def test_golden_instance():
    assert hsep_check_separation(GOLDEN_HSEP)
    inst = hsep_reduction(GOLDEN_HSEP)
    assert inst.n == 7 and inst.k == 4 and inst.dim == 2
    net = hsep_solution_network(GOLDEN_HSEP)
    assert is_exact_fit(net, inst)
    assert all(net(q) == 1 for q in GOLDEN_HSEP.Q)
    assert all(net(p) == 0 for p in GOLDEN_HSEP.P)


def test_hsep_separation_examples():
    one_d = HsepWitness((1,), F(-1, 2), (1,), -5)
    assert not hsep_check_separation(HsepInput(((0,),), ((0,),), one_d))
    on_plane = HsepInput(((1, 1),), ((-1, -1), (2, 2)),
                         HsepWitness((1, 1), 0, (1, 1), -4))
    assert not hsep_check_separation(on_plane)
    axis = HsepInput(((1, 1),), ((-1, -1), (3, 3)),
                     HsepWitness((1, 0), F(-1, 2), (1, 0), F(-5, 2)))
    assert hsep_check_separation(axis)


def test_hsep_point_counts():
    w = HsepWitness((1, 0), F(-1, 2), (1, 0), F(-5, 2))
    assert hsep_reduction(HsepInput(((1, 0),), ((-1, 0),), w)).n == 4
    assert hsep_reduction(HsepInput(((1, 0), (1, 1)), ((-1, 0), (4, 0)), w)).n == 12


def test_hsep_overlap_rejected():
    with pytest.raises(ReductionError):
        hsep_reduction(HsepInput(((0,),), ((0,),)))


def test_hsep_bad_witness_rejected():
    w = HsepWitness((1, 0), F(-3, 2), (1, 0), F(-5, 2))
    with pytest.raises(ReductionError):
        hsep_solution_network(HsepInput(((1, 0),), ((-1, 0),), w))


def random_hsep(rng, d):
    """Separable input: Q between the two planes, P outside both."""
    while True:
        h1 = tuple(F(rng.randint(-3, 3)) for _ in range(d))
        if not any(h1):
            continue
        h2 = h1 if rng.random() < 0.5 else tuple(F(rng.randint(-3, 3)) for _ in range(d))
        if not any(h2):
            continue
        o1, o2 = F(rng.randint(-8, 8), 4), F(rng.randint(-8, 8), 4)
        w = HsepWitness(h1, o1, h2, o2)
        cloud = {tuple(F(rng.randint(-4, 4)) for _ in range(d)) for _ in range(8)}
        Q = [x for x in cloud if dot(h1, x) + o1 > 0 > dot(h2, x) + o2]
        P = [x for x in cloud if (dot(h1, x) + o1 > 0) == (dot(h2, x) + o2 > 0)]
        if not Q or not P:
            continue
        data = HsepInput(tuple(Q), tuple(P), w)
        if hsep_check_separation(data):
            return data


def test_hsep_forward_soundness_and_sides():
    rng = random.Random(2)
    for _ in range(40):
        data = random_hsep(rng, rng.choice((1, 2, 3)))
        inst = hsep_reduction(data)
        net = hsep_solution_network(data)
        assert is_exact_fit(net, inst)
        for q in data.Q:
            for p in data.P:
                r, s = segment_points(q, p, data.epsilon)
                for u in net.units:
                    for near, far in ((r, q), (s, p)):
                        v, ref = u.preactivation(near), u.preactivation(far)
                        assert v != 0 and (v > 0) == (ref > 0)
