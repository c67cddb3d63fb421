"""
@FileName: test_constructions.py
@Description: profinite 预设、Bernoulli 标号、短圈比例、树型流水线与轨道等价扩张
@Author: HengLine
@Time: 2026/10
"""
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from soficlab.action.action_core import ActionMode, FiniteAction, GeneratorWord, orbit_partition, parse_word
from soficlab.build.bernoulli import bernoulli_labeling, cyclic_word_table
from soficlab.build.cycles import cycle_ratio, non_tree_ratio, short_cycle_vertices, treeable_distance_bound
from soficlab.build.orbit_extension import (WordRule, format_word_rule, oe_add_generator, parse_word_rule,
                                            read_word_rule, write_word_rule)
from soficlab.build.profinite import build_profinite
from soficlab.build.treeable import (RationalSolution, build_treeable, plan_treeable, rational_round,
                                     target_stats_free_involutions)
from soficlab.core.exceptions import InputError, ModeError
from soficlab.stats.nbhd_stats import (PairStatVector, StatVector, check_pair_equations, restrict_type, stat_vector,
                                       vertex_types)

from conftest import random_involution_action


# ---------------------------------------------------------------- profinite

def test_cyclic_preset_is_the_shift():
    action = build_profinite("cyclic", 5)
    np.testing.assert_array_equal(action.gens[0], [1, 2, 3, 4, 0])
    assert action.mode is ActionMode.FREE


def test_torus_generators_commute():
    action = build_profinite("torus", 16)
    a, b = action.gens
    np.testing.assert_array_equal(a[b], b[a])
    with pytest.raises(InputError):
        build_profinite("torus", 15)


def test_free_random_is_seeded():
    first = build_profinite("free-random", 50, d=3, seed=4)
    assert first == build_profinite("free-random", 50, d=3, seed=4)
    assert first != build_profinite("free-random", 50, d=3, seed=5)
    with pytest.raises(InputError):
        build_profinite("hyperbolic", 10)


def test_labels_follow_the_label_seed():
    assert not build_profinite("cyclic", 30, k=3).labels.any()
    labelled = build_profinite("cyclic", 30, k=3, label_seed=1)
    assert labelled.labels.any()
    assert labelled == build_profinite("cyclic", 30, k=3, label_seed=1)


# ---------------------------------------------------------------- Bernoulli

def test_bernoulli_labels_read_shifted_coins():
    base = build_profinite("cyclic", 40)
    action = bernoulli_labeling(base, cyclic_word_table(3), 3, seed=9)
    shift = base.gens[0]
    np.testing.assert_array_equal(action.labels[:, 1], action.labels[shift, 0])
    np.testing.assert_array_equal(action.labels[:, 2], action.labels[shift[shift], 0])


def test_bernoulli_word_table_must_cover_every_index():
    base = build_profinite("cyclic", 10)
    with pytest.raises(InputError):
        bernoulli_labeling(base, {1: GeneratorWord()}, 2, seed=0)


def test_bernoulli_tree_types_are_near_uniform():
    base = build_profinite("cyclic", 20000)
    stat = stat_vector(bernoulli_labeling(base, cyclic_word_table(3), 3, seed=2), 1)
    assert len(stat.entries) == 8
    for alpha, p in stat.items():
        assert alpha.is_tree()
        assert abs(float(p) - 1 / 8) <= 0.02


# ---------------------------------------------------------------- 短圈

def test_cycle_ratio_on_cycles():
    c5 = build_profinite("cyclic", 5)
    assert cycle_ratio(c5, 4) == 0
    assert cycle_ratio(c5, 5) == 1
    assert cycle_ratio(build_profinite("cyclic", 1), 1) == 1
    with pytest.raises(InputError):
        short_cycle_vertices(c5, 0)


def test_involution_swaps_are_not_cycles():
    swap = FiniteAction.build([[1, 0, 2]], mode=ActionMode.INVOLUTION)
    np.testing.assert_array_equal(short_cycle_vertices(swap, 4), [False, False, True])


def test_non_tree_ratio_on_small_cycles():
    assert non_tree_ratio(build_profinite("cyclic", 4), 1) == 0
    assert non_tree_ratio(build_profinite("cyclic", 4), 2) == 1


def test_distance_bound_formula():
    assert treeable_distance_bound(Fraction(1, 100), 8, 2, 1, Fraction(0), 3) == Fraction(8, 100) + Fraction(1, 4)
    with pytest.raises(InputError):
        treeable_distance_bound(0, 1, 1, 1, 0, 0)


# ---------------------------------------------------------------- 树型

def test_free_involution_targets():
    stat, pair = target_stats_free_involutions(2, 1)
    assert len(stat.entries) == 8
    assert set(stat.entries.values()) == {Fraction(1, 8)}
    assert set(pair.entries.values()) == {Fraction(1, 16)}
    assert len(pair.entries) == 32
    assert all(alpha.is_tree() for alpha in stat.entries)
    assert check_pair_equations(stat, pair) == []


def test_rational_round_keeps_exact_targets():
    targets = target_stats_free_involutions(2, 1)
    sol = rational_round(targets, Fraction(1, 1000))
    assert sol.w_alpha == targets[0].entries
    assert sol.violations() == []
    assert sol.denominator_lcm == 16


def test_rational_round_repairs_perturbed_targets():
    stat, pair = target_stats_free_involutions(2, 1)
    alphas = [a for a, _ in stat.items()]
    shifted = {a: 0.125 for a in alphas}
    shifted[alphas[0]] += 2e-5
    shifted[alphas[1]] -= 2e-5
    noisy_pairs = {key: float(v) + 1e-6 for key, v in pair.items()}
    eps = Fraction(1, 1000)
    sol = rational_round((StatVector(1, shifted), PairStatVector(1, 2, noisy_pairs)), eps)
    assert sol.violations() == []
    assert all(isinstance(v, Fraction) and v >= 0 for v in sol.w_alpha.values())
    for a in alphas:
        assert abs(sol.w_alpha[a] - Fraction(shifted[a])) <= eps


def test_rational_round_rejects_pairs_outside_the_support():
    stat, pair = target_stats_free_involutions(2, 1)
    first, *rest = [a for a, _ in stat.items()]
    reduced = StatVector(1, {a: Fraction(1, len(rest)) for a in rest})
    with pytest.raises(InputError):
        rational_round((reduced, pair), Fraction(1, 100))


def test_plan_and_build_treeable():
    sol = rational_round(target_stats_free_involutions(2, 1), Fraction(1, 1000))
    plan = plan_treeable(sol, 1000)
    assert plan.n == 1024
    action = build_treeable(sol, 1000, seed=3)
    assert action.n == 1024 and action.mode is ActionMode.INVOLUTION
    assert action == build_treeable(sol, 1000, seed=3)
    built = stat_vector(action, 1)
    for alpha, p in built.items():
        assert abs(p - sol.w_alpha.get(alpha, 0)) <= Fraction(16, 1024)


@pytest.mark.parametrize("q", [1, 2])
def test_treeable_balls_match_their_block_type(q):
    sol = rational_round(target_stats_free_involutions(2, 2), Fraction(1, 1000))
    plan = plan_treeable(sol, 8192)
    action = build_treeable(sol, 8192, seed=6)
    block_types = sorted(plan.type_sizes, key=lambda a: a.sort_key)
    block_of = np.repeat(np.arange(len(block_types)), [plan.type_sizes[a] for a in block_types])

    # q-球里不含长度 ≤ 2q+1 的圈：先标出圈上的顶点，再向外扩 q 步
    near_cycle = short_cycle_vertices(action, 2 * q + 1)
    for _ in range(q):
        near_cycle = near_cycle | np.any([near_cycle[g] for g in action.gens], axis=0)
    assert np.count_nonzero(~near_cycle) >= action.n // 2

    ids, types = vertex_types(action, q)
    restricted = {}
    for v in np.flatnonzero(~near_cycle).tolist():
        alpha = block_types[block_of[v]]
        if alpha not in restricted:
            restricted[alpha] = restrict_type(alpha, q)
        assert types[ids[v]] == restricted[alpha], f"vertex {v}"


def test_build_treeable_rejects_short_labels():
    sol = rational_round(target_stats_free_involutions(1, 1), Fraction(1, 100))
    with pytest.raises(InputError):
        build_treeable(sol, 10, seed=0, k=0)


def test_violations_flag_broken_solutions():
    sol = rational_round(target_stats_free_involutions(1, 1), Fraction(1, 100))
    broken = dict(sol.w_aib)
    key = next(iter(broken))
    broken[key] = broken[key] + Fraction(1, 64)
    assert RationalSolution(sol.r, sol.d, sol.w_alpha, broken).violations()


# ---------------------------------------------------------------- 轨道等价扩张

def test_constant_rule_has_no_bad_points():
    base = build_profinite("cyclic", 30)
    rule = WordRule.constant(parse_word("1"), parse_word("-1"))
    extended, report = oe_add_generator(base, rule, Fraction(1, 100))
    assert report.bad_ratio == 0 and report.patched == 0
    assert report.within_bound
    assert extended.d == 2
    np.testing.assert_array_equal(extended.gens[1], base.gens[0])
    np.testing.assert_array_equal(orbit_partition(extended), orbit_partition(base))


def _oracle_extension(labels: np.ndarray):
    """逐顶点穷举：标号 0 向前一步、标号 1 向后一步；逆字反过来"""
    n = labels.size
    image = np.array([(g + 1) % n if labels[g] == 0 else (g - 1) % n for g in range(n)])
    back = np.array([(y - 1) % n if labels[y] == 0 else (y + 1) % n for y in range(n)])
    bad = [g for g in range(n) if back[image[g]] != g]
    hit = {int(image[g]) for g in range(n) if g not in bad}
    free_targets = [t for t in range(n) if t not in hit]
    gamma = image.copy()
    for g, t in zip(bad, free_targets):
        gamma[g] = t
    return gamma, len(bad)


@seed(41)
@settings(max_examples=200, deadline=None)
@given(bits=st.lists(st.integers(min_value=0, max_value=1), min_size=16, max_size=16))
def test_bit_conditional_rule_matches_enumeration(bits):
    labels = np.array(bits, dtype=np.uint8)
    base = build_profinite("cyclic", 16, k=1).with_labels(labels.reshape(16, 1))
    rule = parse_word_rule("0 1 -1\n1 -1 1\n")
    extended, report = oe_add_generator(base, rule, Fraction(1, 4))
    gamma, n_bad = _oracle_extension(labels)
    assert report.bad_ratio == Fraction(n_bad, 16)
    np.testing.assert_array_equal(extended.gens[1], gamma)


def test_word_rule_file_round_trip(tmp_path):
    rule = parse_word_rule("# 按第一位选择方向\n0 1 -1\n1 -1,-1 1,1\n")
    assert rule.m == 1
    assert rule.lookup("1") == (parse_word("-1,-1"), parse_word("1,1"))
    path = tmp_path / "rule.txt"
    write_word_rule(rule, str(path))
    assert read_word_rule(str(path)).table == rule.table
    assert format_word_rule(WordRule.constant(parse_word("1"), parse_word("-1"))) == "- 1 -1\n"


def test_word_rule_errors():
    with pytest.raises(InputError, match="not total"):
        parse_word_rule("0 1 -1\n")
    with pytest.raises(InputError, match="line 2"):
        parse_word_rule("0 1 -1\n10 1 -1\n")


def test_extension_preconditions():
    rule = parse_word_rule("0 1 -1\n1 1 -1\n")
    with pytest.raises(InputError):
        oe_add_generator(build_profinite("cyclic", 8), rule, 0)
    with pytest.raises(ModeError):
        oe_add_generator(random_involution_action(1, 8, 1, 1), rule, 0)
