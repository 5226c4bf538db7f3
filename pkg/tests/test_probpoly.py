import math
from fractions import Fraction

import numpy as np
import pytest

from polyham.errors import (
    DimensionMismatchError,
    InvalidParametersError,
    ResourceBudgetError,
)
from polyham.polyalg import interpolate_weights
from polyham.probpoly import (
    SymmetricFunctionSpec,
    ThresholdSpec,
    boundary_inputs,
    degree_bound,
    eval_circuit,
    expand_circuit,
    jump_sets,
    measure_symmetric_error,
    measure_threshold_error,
    sample_symmetric,
    sample_threshold,
    threshold_index,
    threshold_value,
)
from polyham.vectors import BitVector

HALF = Fraction(1, 2)


def test_threshold_spec_validation():
    with pytest.raises(InvalidParametersError):
        ThresholdSpec(3, Fraction(3, 2), Fraction(1, 10))
    with pytest.raises(InvalidParametersError):
        ThresholdSpec(3, HALF, Fraction(1))
    with pytest.raises(InvalidParametersError):
        ThresholdSpec(0, HALF, Fraction(1, 10))


def test_threshold_index_semantics():
    assert threshold_index(HALF, 4) == 2
    assert threshold_index(HALF, 5) == 3
    assert threshold_index(Fraction(0), 5) == 0
    assert threshold_index(Fraction(1), 5) == 5
    assert threshold_value(HALF, 3, 2) == 1
    assert threshold_value(HALF, 3, 1) == 0


def test_base_case_n1_is_identity():
    c = sample_threshold(ThresholdSpec(1, HALF, Fraction(1, 10)), np.random.default_rng(0))
    assert c.kind == "exact_base"
    poly = expand_circuit(c)
    assert poly.terms == {(0,): 1}  # the single variable


def test_base_case_rule_n100_eps_half():
    # bound 41*sqrt(100*ln 2) ~ 341 > 100 fires the base case
    c = sample_threshold(ThresholdSpec(100, HALF, HALF), np.random.default_rng(0))
    assert c.kind == "exact_base"
    assert degree_bound(100, HALF) > 100
    assert c.structural_degree() <= 100


def test_recursive_structure_n1e4_eps_half():
    c = sample_threshold(ThresholdSpec(10**4, HALF, HALF), np.random.default_rng(0))
    assert c.kind == "recursive"
    assert c.sample_map.shape == (10**3,)
    for child in (c.near_hi, c.near_lo, c.inner):
        assert child.spec.n == 10**3
        assert child.spec.eps == HALF / 4
    assert c.near_hi.spec.theta > HALF > c.near_lo.spec.theta
    assert c.inner.spec.theta == HALF


def test_recursion_depth_bound():
    for n, eps in ((10**4, Fraction(1, 10)), (10**5, Fraction(24, 100)), (200, HALF)):
        c = sample_threshold(ThresholdSpec(n, HALF, eps), np.random.default_rng(1))
        assert c.depth() <= math.ceil(math.log10(n)) + 1


def test_shared_sample_map_across_children_and_levels():
    # depth-2 instance: all three children recurse and must share their maps
    c = sample_threshold(
        ThresholdSpec(30_000, HALF, Fraction(99, 100)), np.random.default_rng(2)
    )
    assert c.kind == "recursive" and c.near_hi.kind == "recursive"
    kids = (c.near_hi, c.near_lo, c.inner)
    assert all(k.sample_map is c.near_hi.sample_map for k in kids)
    grandkids = (c.near_hi.near_hi, c.near_lo.inner, c.inner.near_lo)
    assert all(g.skeleton is c.skeleton for g in grandkids)


def test_eval_circuit_base_examples():
    c = sample_threshold(ThresholdSpec(3, HALF, Fraction(1, 10)), np.random.default_rng(0))
    assert c.kind == "exact_base"
    assert eval_circuit(c, BitVector.from_string("110")) == 1
    assert eval_circuit(c, BitVector.from_string("000")) == 0
    with pytest.raises(DimensionMismatchError):
        eval_circuit(c, BitVector.from_string("11"))


def test_base_expansion_equals_interpolation():
    c = sample_threshold(ThresholdSpec(3, HALF, Fraction(1, 10)), np.random.default_rng(0))
    expansion = expand_circuit(c)
    reference = interpolate_weights(3, -1, 4, [0, 0, 1, 1]).expand()
    assert expansion == reference


@pytest.mark.parametrize("n", [4, 8, 11, 12])
def test_circuit_expansion_equivalence_exhaustive(n):
    # eps close to 1 forces recursion at tiny n; 5 seeds per size, all inputs
    eps = Fraction(995, 1000)
    recursive_seen = False
    for seed in range(5):
        c = sample_threshold(ThresholdSpec(n, HALF, eps), np.random.default_rng(seed))
        recursive_seen |= c.kind == "recursive"
        poly = expand_circuit(c)
        bound = min(n, degree_bound(n, eps))
        assert poly.degree() <= bound
        for mask in range(1 << n):
            assert poly.eval_mask(mask) == eval_circuit(c, BitVector(n, mask))
    assert n < 11 or recursive_seen


def test_structural_degree_bound_grid():
    for n in (10, 50, 200, 10**3, 10**4):
        for eps in (Fraction(1, 100), Fraction(1, 10), Fraction(24, 100)):
            for seed in range(3):
                c = sample_threshold(ThresholdSpec(n, HALF, eps), np.random.default_rng(seed))
                assert c.structural_degree() <= min(n, degree_bound(n, eps))


def test_expansion_budget_error_names_count():
    c = sample_threshold(ThresholdSpec(10**4, HALF, Fraction(1, 10)), np.random.default_rng(0))
    with pytest.raises(ResourceBudgetError) as exc:
        expand_circuit(c, budget=10**6)
    assert exc.value.projected is not None and exc.value.projected > 10**6


def test_sampling_concentration():
    # empirical check of the one-sided sampling tail: over >= 10^4 draws of
    # the coordinate sample, the sampled density rarely falls a/sqrt(n)
    # below the true density (the analysis says at most eps/4).
    n, eps = 1000, 0.1
    m = n // 10
    a = math.sqrt(10 * math.log(1 / eps))
    rng = np.random.default_rng(3)
    x = np.zeros(n, dtype=np.uint8)
    x[: n // 2] = 1
    w = 0.5
    draws = 20_000
    idx = rng.integers(0, n, size=(draws, m))
    v = x[idx].sum(axis=1) / m
    frac = float((v <= w - a / math.sqrt(n)).mean())
    sigma = math.sqrt((eps / 4) * (1 - eps / 4) / draws)
    assert frac <= eps / 4 + 3 * sigma


def test_measure_error_exact_base_is_perfect():
    spec = ThresholdSpec(8, HALF, Fraction(1, 10))
    rng = np.random.default_rng(4)
    inputs = [BitVector.random(rng, 8) for _ in range(10)]
    reports = measure_threshold_error(spec, inputs, 50, rng)
    assert all(r.agreement == 1.0 for r in reports)


def test_measure_error_recursive_meets_guarantee():
    eps = Fraction(1, 10)
    spec = ThresholdSpec(10**4, HALF, eps)
    rng = np.random.default_rng(5)
    inputs = boundary_inputs(10**4, HALF)
    inputs += [BitVector.random(rng, 10**4) for _ in range(6)]
    trials = 120
    reports = measure_threshold_error(spec, inputs, trials, rng)
    sigma = math.sqrt(float(eps) * (1 - float(eps)) / trials)
    floor = 1 - float(eps) - 3 * sigma
    assert all(r.agreement >= floor for r in reports)
    # boundary weights are present
    t = threshold_index(HALF, 10**4)
    assert {reports[0].weight, reports[1].weight} == {t - 1, t}


def test_boundary_inputs_weights():
    vs = boundary_inputs(9, HALF)
    assert [v.weight() for v in vs] == [4, 5]
    assert [v.weight() for v in boundary_inputs(4, Fraction(0))] == [0]


def test_measure_error_requires_trials():
    from polyham.probpoly import measure_error

    with pytest.raises(InvalidParametersError):
        measure_error(lambda r: None, lambda x: 0, [], 0, np.random.default_rng(0))


def test_eps_above_quarter_accepted():
    spec = ThresholdSpec(50, HALF, Fraction(9, 10))
    c = sample_threshold(spec, np.random.default_rng(6))
    assert c.kind in ("exact_base", "recursive")


def test_band_poly_matches_window_values():
    c = sample_threshold(ThresholdSpec(40, HALF, Fraction(99, 100)), np.random.default_rng(7))
    assert c.kind == "recursive"
    poly = c.band_poly
    assert poly.is_symmetric_mode
    assert poly.degree() <= c.window.degree_cap()
    t = threshold_index(HALF, 40)
    for w in range(41):
        rep = (1 << w) - 1
        assert poly.eval_mask(rep) == c.window.value(w)
        if c.window.lo <= w <= c.window.hi:
            assert poly.eval_mask(rep) == int(w >= t)


# ---------------------------------------------------------------------------
# symmetric functions
# ---------------------------------------------------------------------------


def test_jump_sets_examples():
    # MAJORITY on 4 variables
    assert jump_sets((0, 0, 1, 1, 1)) == ([2], [])
    # alternating values on 3 variables
    assert jump_sets((0, 1, 0, 1)) == ([1, 3], [2])
    assert jump_sets((1, 1, 1)) == ([], [])


def test_constant_function_combination():
    spec = SymmetricFunctionSpec(5, (1,) * 6)
    comb = sample_symmetric(spec, Fraction(1, 10), np.random.default_rng(0))
    assert comb.circuits() == []
    for mask in (0, 0b10101, 0b11111):
        assert comb.eval(BitVector(5, mask)) == 1


def exact_decomposition_value(values, w):
    ups, downs = jump_sets(values)
    n = len(values) - 1
    total = values[0]
    total += sum(1 for i in ups if w >= i)
    total -= sum(1 for i in downs if w >= i)
    return total


def test_exact_decomposition_reproduces_f_all_small_n():
    # exhaustive over all weight tables for small n
    for n in range(1, 9):
        for table in range(1 << (n + 1)):
            values = tuple((table >> i) & 1 for i in range(n + 1))
            for w in range(n + 1):
                assert exact_decomposition_value(values, w) == values[w]


def test_exact_decomposition_random_tables_up_to_64():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        n = int(rng.integers(1, 65))
        values = tuple(int(b) for b in rng.integers(0, 2, size=n + 1))
        for w in range(n + 1):
            assert exact_decomposition_value(values, w) == values[w]


def test_majority_combination_is_single_threshold():
    spec = SymmetricFunctionSpec(4, (0, 0, 1, 1, 1))
    comb = sample_symmetric(spec, Fraction(1, 10), np.random.default_rng(1))
    assert comb.up_jumps == [2] and comb.down_jumps == []
    circs = comb.circuits()
    assert len(circs) == 1 and circs[0].spec.theta == Fraction(2, 4)
    for mask in range(1 << 4):
        assert comb.eval(BitVector(4, mask)) == spec.truth(BitVector(4, mask))


def test_symmetric_shared_skeleton_across_thresholds():
    n = 4000
    values = tuple(int(w % 2) for w in range(n + 1))
    comb = sample_symmetric(
        SymmetricFunctionSpec(n, values), Fraction(9, 10), np.random.default_rng(2)
    )
    circs = comb.circuits()
    assert comb.skeleton is not None
    assert all(c.skeleton is comb.skeleton for c in circs)
    maps0 = {id(c.sample_map) for c in circs if c.kind == "recursive"}
    assert len(maps0) == 1  # the level-0 draw is one shared array


def test_symmetric_fast_path_equals_generic():
    n = 4000
    values = tuple(int(w % 2) for w in range(n + 1))
    spec = SymmetricFunctionSpec(n, values)
    rng = np.random.default_rng(3)
    comb = sample_symmetric(spec, Fraction(9, 10), rng)
    assert comb.skeleton is not None and comb.skeleton.depth == 1
    from polyham.vectors import bit_matrix

    for _ in range(10):
        x = BitVector.random(rng, n)
        bits = bit_matrix([x])[0]
        profile = comb.skeleton.weight_profile(bits)
        generic = comb.f0
        generic += sum(c.eval_weights(profile) for c in comb.ups)
        generic -= sum(c.eval_weights(profile) for c in comb.downs)
        assert comb.eval_bits(bits) == generic


def test_sampled_symmetric_small_exhaustive_agreement():
    # at n <= 10 every threshold is exact, so the combination is exact
    rng = np.random.default_rng(8)
    for n in (3, 6, 9):
        values = tuple(int(b) for b in rng.integers(0, 2, size=n + 1))
        spec = SymmetricFunctionSpec(n, values)
        comb = sample_symmetric(spec, Fraction(1, 10), rng)
        for mask in range(1 << n):
            x = BitVector(n, mask)
            assert comb.eval(x) == spec.truth(x)


def test_measure_symmetric_error_exact_k():
    n = 10**4
    k0 = n // 2
    values = tuple(int(w == k0) for w in range(n + 1))
    spec = SymmetricFunctionSpec(n, values)
    assert jump_sets(values) == ([k0], [k0 + 1])
    eps = Fraction(1, 10)
    rng = np.random.default_rng(9)
    inputs = [BitVector(n, (1 << k0) - 1), BitVector(n, (1 << (k0 + 1)) - 1)]
    inputs += [BitVector.random(rng, n) for _ in range(4)]
    trials = 80
    reports = measure_symmetric_error(spec, eps, inputs, trials, rng)
    sigma = math.sqrt(float(eps) * (1 - float(eps)) / trials)
    assert all(r.agreement >= 1 - float(eps) - 3 * sigma for r in reports)
