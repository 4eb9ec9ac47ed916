"""Acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS|FAIL`` line (visible even
under output capture) before asserting.
"""

import random
import time
from fractions import Fraction as F

import pytest

from exactrelu.convexfit import SearchLog, depth_bound, exact_fit_convex
from exactrelu.corpus import random_corpus, random_instance
from exactrelu.nets import Activation, eval_relu, is_exact_fit, levee_network, levee_value, residuals
from exactrelu.oracle import MAX_CELLS, OracleGuardError, brute_force_fit_lt, brute_force_fit_relu
from exactrelu.reductions import (DEMO_FORMULA, GOLDEN_HSEP, GlobalConstruction,
                                  SelectionGadgetSpec, hsep_check_separation, hsep_reduction,
                                  hsep_solution_network, nonzero_levees_at, poits_reduction,
                                  poits_reduction_lt, poits_solution_lt, poits_solution_network,
                                  selection_gadget_points)


@pytest.fixture
def verdict(capsys):
    def emit(n, ok, detail=""):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return emit


def test_criterion_1_levee_identity(verdict):
    rng = random.Random(1)

    def r():
        q = rng.randint(1, 100)
        return F(rng.randint(-10 * q, 10 * q), q)

    start = time.perf_counter()
    bad = 0
    for _ in range(1000):
        s, x1, x2 = r(), r(), r()
        if eval_relu(levee_network(s), (x1, x2)) != levee_value(s, x1, x2):
            bad += 1
    elapsed = time.perf_counter() - start
    verdict(1, bad == 0 and elapsed < 5, f"1000 triples, {bad} mismatches, {elapsed:.2f}s")


def test_criterion_2_selection_gadget(verdict):
    spec = SelectionGadgetSpec((-1, 0, 1), 0, F(1, 3))
    pts = selection_gadget_points(spec)
    fitting = [s for s in (-1, 0, 1) if all(levee_network(s)(p.x) == p.y for p in pts)]
    half = levee_network(F(1, 2))
    misses = sum(half(p.x) != p.y for p in pts)
    ok = len(pts) == 35 and fitting == [-1, 0, 1] and misses >= 1
    verdict(2, ok, f"{len(pts)} points, fitting slopes {fitting}, slope 1/2 misses {misses}")


def test_criterion_3_demo_formula_end_to_end(verdict):
    start = time.perf_counter()
    inst = poits_reduction(DEMO_FORMULA)
    good = is_exact_fit(poits_solution_network(DEMO_FORMULA, {1, 3}), inst)
    bad_net = poits_solution_network(DEMO_FORMULA, {1, 2, 3, 4, 5}, check=False)
    g = GlobalConstruction(DEMO_FORMULA)
    ps = {g.consistency_point(j, r) for j in (1, 2, 3) for r in (1, 2, 3)}
    miss_at_p = [p.x for p, res in zip(inst.points, residuals(bad_net, inst)) if res and p.x in ps]
    elapsed = time.perf_counter() - start
    ok = good and bool(miss_at_p) and elapsed < 10
    verdict(3, ok, f"{inst.n} points, k={inst.k}, T={{1,3}} fits={good}, "
                   f"T={{1..5}} misses {len(miss_at_p)} consistency points, {elapsed:.2f}s")


def test_criterion_4_two_levees_per_consistency_point(verdict):
    g = GlobalConstruction(DEMO_FORMULA)
    cat = {lv.id: lv for lv in g.levee_catalog()}
    sizes, ones = [], True
    for j in (1, 2, 3):
        for r in (1, 2, 3):
            ids = nonzero_levees_at(g, j, r)
            sizes.append(len(ids))
            ones &= all(cat[i].value(g.consistency_point(j, r)) == 1 for i in ids)
    verdict(4, sizes == [2] * 9 and ones, f"sizes {sizes}, all values 1: {ones}")


def test_criterion_5_exactfit_vs_oracle(verdict):
    start = time.perf_counter()
    disagree, unsound, too_deep, yes = 0, 0, 0, 0
    for inst in random_corpus(20240501, 200):
        log = SearchLog()
        net = exact_fit_convex(inst, log)
        oracle = brute_force_fit_relu(inst, convex_only=True)
        disagree += (net is None) != (oracle is None)
        for w in (net, oracle):
            if w is not None and not is_exact_fit(w, inst):
                unsound += 1
        too_deep += log.max_depth > depth_bound(inst.k, inst.dim)
        yes += net is not None
    elapsed = time.perf_counter() - start
    ok = not (disagree or unsound or too_deep) and elapsed < 300
    verdict(5, ok, f"200 instances ({yes} fittable), {disagree} disagreements, "
                   f"{unsound} bad witnesses, {too_deep} depth violations, {elapsed:.1f}s")


def test_criterion_6_hsep_golden(verdict):
    separated = hsep_check_separation(GOLDEN_HSEP)
    inst = hsep_reduction(GOLDEN_HSEP)
    net = hsep_solution_network(GOLDEN_HSEP)
    fits = is_exact_fit(net, inst)
    q_ok = all(net(q) == 1 for q in GOLDEN_HSEP.Q)
    p_ok = all(net(p) == 0 for p in GOLDEN_HSEP.P)
    ok = separated and fits and q_ok and p_ok and net.k == 4
    verdict(6, ok, f"{inst.n} points, separation={separated}, fit={fits}, "
                   f"phi(Q)=1: {q_ok}, phi(P)=0: {p_ok}")


def test_criterion_7_linear_threshold(verdict):
    inst = poits_reduction_lt(DEMO_FORMULA)
    demo_fits = inst.k == 16 and is_exact_fit(poits_solution_lt(DEMO_FORMULA, {1, 3}), inst)
    rng = random.Random(77)
    broken, yes = 0, 0
    for _ in range(100):
        k, d = rng.choice((1, 2)), rng.choice((1, 2))
        small = random_instance(rng, dims=(d,), sizes=range(2, min(12 // k, 5 ** d) + 1),
                                ks=(k,), activation=Activation.LT)
        assert small.n * small.k <= 12
        net = brute_force_fit_lt(small)
        if net is None:
            continue
        yes += 1
        bigger = small.with_k(k + 1)
        net_up = brute_force_fit_lt(bigger)
        if not is_exact_fit(net, small) or net_up is None or not is_exact_fit(net_up, bigger):
            broken += 1
    verdict(7, demo_fits and broken == 0,
            f"demo formula LT witness fits={demo_fits}; 100 tiny instances, {yes} fittable, "
            f"{broken} monotonicity/witness failures")


NOT_REPRODUCIBLE = (
    "The converse directions of both hardness reductions (an unsatisfiable formula or a "
    "non-separable input yields an unfittable instance) and the uniqueness of gadget fits "
    "quantify over all continuous piecewise-linear functions. They cannot be decided by the "
    "enumeration oracle at reduction size and are covered only indirectly by criteria 2 to 4."
)


def test_criterion_8_non_reproducibility(verdict):
    inst = poits_reduction(DEMO_FORMULA)
    try:
        brute_force_fit_relu(inst)
        guarded = False
    except OracleGuardError:
        guarded = True
    cells = inst.n * inst.k
    verdict(8, guarded and cells > MAX_CELLS,
            f"not reproducible by design: the demo formula instance needs n*k = {cells} cells, "
            f"oracle limit {MAX_CELLS}. {NOT_REPRODUCIBLE}")
