import math

import numpy as np
import pytest
from scipy.stats import chisquare

from maqaoa import (
    AngleVector,
    Graph,
    PI8,
    STRATEGY_KINDS,
    StrategySpec,
    apply_cost_phase,
    apply_mixer_rotation,
    expectation,
    init_max_degree_zero,
    init_random_pi8,
    init_uniform_random,
    is_multiple_of_pi8,
    normalize_angle,
    normalize_angles,
    prepare_plus_state,
    round_angles,
    round_to_pi8,
    run_circuit,
    run_strategy,
)


# ----- normalize / round -----

def test_normalize_angle_examples():
    assert abs(normalize_angle(3 * math.pi / 2) - (-math.pi / 2)) < 1e-12
    assert normalize_angle(-math.pi) == -math.pi
    assert normalize_angle(math.pi) == -math.pi
    assert normalize_angle(0.0) == 0.0
    assert abs(normalize_angle(7 * math.pi) - (-math.pi)) < 1e-9


def test_normalize_angle_range_and_equivalence():
    rng = np.random.default_rng(0)
    for theta in rng.uniform(-50, 50, 200):
        out = normalize_angle(theta)
        assert -math.pi <= out < math.pi
        k = (theta - out) / (2 * math.pi)
        assert abs(k - round(k)) < 1e-9


def test_round_to_pi8_examples():
    assert abs(round_to_pi8(math.pi / 3) - 3 * PI8) < 1e-12
    assert round_to_pi8(PI8) == PI8
    assert round_to_pi8(math.pi / 16) == PI8  # tie rounds away from zero
    assert round_to_pi8(-math.pi / 16) == -PI8
    assert round_to_pi8(0.0) == 0.0


def test_round_to_pi8_bound_and_idempotence():
    rng = np.random.default_rng(1)
    for theta in rng.uniform(-math.pi, math.pi, 200):
        r = round_to_pi8(theta)
        assert abs(r - theta) <= math.pi / 16 + 1e-12
        assert round_to_pi8(r) == r
        assert abs(r / PI8 - round(r / PI8)) < 1e-9


def test_is_multiple_of_pi8():
    assert is_multiple_of_pi8(math.pi / 4)
    assert not is_multiple_of_pi8(math.pi / 4 + 0.01)
    assert is_multiple_of_pi8(2 * math.pi + PI8)
    assert is_multiple_of_pi8(math.pi / 4 + 0.01, tolerance=0.02)


def test_round_angles_vector_behavior():
    angles = AngleVector([[2 * math.pi + 0.01, math.pi / 3]], [[0.5, -0.3, PI8]])
    rounded = round_angles(angles)
    np.testing.assert_allclose(rounded.gamma[0], [0.0, 3 * PI8], atol=1e-12)
    np.testing.assert_allclose(rounded.beta[0], [PI8, -PI8, PI8], atol=1e-12)
    again = round_angles(rounded)
    np.testing.assert_array_equal(again.gamma, rounded.gamma)
    np.testing.assert_array_equal(again.beta, rounded.beta)


def test_round_angles_within_pi16_of_normalized():
    rng = np.random.default_rng(2)
    angles = AngleVector(rng.uniform(-9, 9, (2, 4)), rng.uniform(-9, 9, (2, 5)))
    rounded = round_angles(angles)
    norm = normalize_angles(angles)
    assert np.max(np.abs(rounded.gamma - norm.gamma)) <= math.pi / 16 + 1e-12
    assert np.max(np.abs(rounded.beta - norm.beta)) <= math.pi / 16 + 1e-12


# ----- initializers -----

def test_init_uniform_random_contract(k2):
    a = init_uniform_random(k2, 1, seed=5)
    b = init_uniform_random(k2, 1, seed=5)
    np.testing.assert_array_equal(a.flatten(), b.flatten())
    assert a.size == 3
    big = init_uniform_random(Graph(5, ((0, 1), (2, 3))), 4, seed=6)
    flat = big.flatten()
    assert ((-math.pi <= flat) & (flat < math.pi)).all()
    assert big.size == 4 * (2 + 5)


def test_init_random_pi8_all_multiples(path4):
    angles = init_random_pi8(path4, 3, seed=7)
    for theta in angles.flatten():
        assert is_multiple_of_pi8(theta, tolerance=1e-12)
    again = init_random_pi8(path4, 3, seed=7)
    np.testing.assert_array_equal(angles.flatten(), again.flatten())


def test_init_random_pi8_uniform_over_17_values():
    g = Graph(10, tuple((i, i + 1) for i in range(9)))
    draws = np.concatenate(
        [init_random_pi8(g, 9, seed=s).flatten() for s in range(600)]
    )
    assert draws.size >= 100000
    k = np.rint(draws / PI8).astype(int)
    assert k.min() >= -8 and k.max() <= 8
    counts = np.bincount(k + 8, minlength=17)
    assert chisquare(counts).pvalue > 0.01


def test_init_max_degree_zero_star(star4):
    angles = init_max_degree_zero(star4, 1, seed=8)
    np.testing.assert_array_equal(angles.gamma, np.zeros((1, 3)))
    assert angles.beta[0, 0] == 0.0
    for v in (1, 2, 3):
        assert is_multiple_of_pi8(angles.beta[0, v], tolerance=1e-12)


def test_init_max_degree_zero_k4_all_zero(k4):
    angles = init_max_degree_zero(k4, 2, seed=9)
    assert not angles.flatten().any()


def test_init_max_degree_zero_path(path4):
    angles = init_max_degree_zero(path4, 2, seed=10)
    np.testing.assert_array_equal(angles.gamma, np.zeros((2, 3)))
    np.testing.assert_array_equal(angles.beta[:, 1], np.zeros(2))
    np.testing.assert_array_equal(angles.beta[:, 2], np.zeros(2))
    free = np.concatenate([angles.beta[:, 0], angles.beta[:, 3]])
    assert all(is_multiple_of_pi8(t, tolerance=1e-12) for t in free)


# ----- run_strategy -----

def test_strategy_spec_validation():
    with pytest.raises(ValueError):
        StrategySpec(kind="bogus", seed=0, p=1)
    with pytest.raises(ValueError):
        StrategySpec(kind="normal", seed=0, p=0)
    assert StrategySpec(kind="rounded_no_opt", seed=0, p=1).requires_prior
    assert not StrategySpec(kind="normal", seed=0, p=1).requires_prior


def test_optimizing_strategies_solve_k2(k2):
    for kind in ("normal", "random_pi8_opt"):
        record = run_strategy(k2, StrategySpec(kind=kind, seed=11, p=1))
        assert abs(record.final_ar - 1.0) < 1e-6, kind
        assert record.converged
        assert record.final_ar >= record.initial_ar - 1e-12


def test_max_degree_zero_opt_sticks_on_regular_graphs(k2):
    # every vertex of a regular graph is max-degree, so the start is the
    # all-zero vector, an exact stationary point: the optimizer stays put
    record = run_strategy(k2, StrategySpec(kind="max_degree_zero_opt", seed=11, p=1))
    assert record.iterations == 0
    assert record.converged
    assert record.initial_ar == record.final_ar == 0.5


def test_max_degree_zero_opt_improves_off_regular_graphs(star4):
    record = run_strategy(star4, StrategySpec(kind="max_degree_zero_opt", seed=11, p=1))
    assert record.converged
    assert record.final_ar > record.initial_ar + 0.1


def test_no_opt_strategies_report_zero_iterations(k4):
    record = run_strategy(k4, StrategySpec(kind="max_degree_zero_no_opt", seed=12, p=1))
    assert record.iterations == 0
    assert record.function_evaluations == 1
    assert record.initial_ar == record.final_ar
    assert record.converged


def test_max_degree_zero_no_opt_k4_ar(k4):
    # the all-zero start leaves the uniform superposition: <C> = |E|/2 = 3,
    # MaxCut = 4, so AR = 0.75
    record = run_strategy(k4, StrategySpec(kind="max_degree_zero_no_opt", seed=13, p=2))
    assert abs(record.final_ar - 0.75) < 1e-12


def test_rounded_no_opt_requires_prior(path4):
    with pytest.raises(ValueError):
        run_strategy(path4, StrategySpec(kind="rounded_no_opt", seed=14, p=1))


def test_rounded_no_opt_fixed_point(triangle):
    normal = run_strategy(triangle, StrategySpec(kind="normal", seed=15, p=1))
    rounded = run_strategy(
        triangle, StrategySpec(kind="rounded_no_opt", seed=15, p=1), prior=normal
    )
    twice = run_strategy(
        triangle, StrategySpec(kind="rounded_no_opt", seed=15, p=1), prior=rounded
    )
    # rounding an already-rounded record changes nothing
    assert twice.final_ar == rounded.final_ar
    assert twice.final_angles == rounded.final_angles
    assert all(is_multiple_of_pi8(t, tolerance=1e-9) for t in rounded.final_angles)


def test_record_angles_reproduce_final_ar(four_vertex_graphs):
    from maqaoa import max_cut

    for g in four_vertex_graphs[:3]:
        for kind in ("normal", "max_degree_zero_no_opt"):
            record = run_strategy(g, StrategySpec(kind=kind, seed=16, p=2))
            value = expectation(g, run_circuit(g, record.angle_vector()))
            assert abs(value / max_cut(g) - record.final_ar) < 1e-10
            assert 0.0 <= record.final_ar <= 1.0
            flat = np.asarray(record.final_angles)
            assert ((-math.pi <= flat) & (flat < math.pi)).all()


def test_edgeless_graph_gets_ar_one():
    g = Graph(2)
    record = run_strategy(g, StrategySpec(kind="normal", seed=17, p=1))
    assert record.final_ar == 1.0


def test_zero_angle_gates_can_be_elided(star4):
    # gates whose angle is zero are identities: skipping them reproduces
    # the full circuit state
    angles = init_max_degree_zero(star4, 2, seed=18)
    full = run_circuit(star4, angles)
    manual = prepare_plus_state(4)
    for layer in range(2):
        for k, edge in enumerate(star4.edges):
            if angles.gamma[layer, k] != 0.0:
                apply_cost_phase(manual, edge, angles.gamma[layer, k])
        for v in range(4):
            if angles.beta[layer, v] != 0.0:
                apply_mixer_rotation(manual, v, angles.beta[layer, v])
    np.testing.assert_allclose(manual, full, atol=1e-12)


def test_strategy_kinds_are_stable():
    assert STRATEGY_KINDS == (
        "normal",
        "rounded_no_opt",
        "random_pi8_opt",
        "max_degree_zero_no_opt",
        "max_degree_zero_opt",
    )
