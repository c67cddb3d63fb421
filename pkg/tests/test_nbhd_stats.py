"""
@FileName: test_nbhd_stats.py
@Description: 邻域类型编码、统计向量、成对统计、限制、统计距离与同构校验
@Author: HengLine
@Time: 2026/10
"""
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from soficlab.action.action_core import ActionMode, FiniteAction, parse_word
from soficlab.build.profinite import build_profinite
from soficlab.core.exceptions import GuardRefusedError, InputError, ModeError
from soficlab.stats.nbhd_stats import (NeighborhoodType, PairStatVector, StatVector, ball_graph,
                                       check_pair_equations, default_ordering, forget_labels, iso_bruteforce,
                                       neighborhood_code, pair_stats, reroot, restrict_type, stat_family,
                                       stat_vector, statistical_distance, unlabeled_stats, vertex_types)
from soficlab.stats.stats_io import format_pair_csv, format_stat_csv, parse_stat_csv, read_pair_csv

from conftest import random_free_action, random_involution_action


def test_identity_action_collapses_to_root():
    action = FiniteAction.build([np.arange(3)], labels=["0", "0", "0"])
    alpha = neighborhood_code(action, 1, 1)
    assert alpha.word_classes == (0, 0, 0)
    assert alpha.size == 1
    assert not alpha.is_tree()


def test_cyclic_vertices_share_one_type():
    action = build_profinite("cyclic", 9, k=2)
    ids, types = vertex_types(action, 2)
    assert len(types) == 1
    assert set(ids.tolist()) == {0}
    assert types[0].is_tree()


def test_tree_shape_depends_on_cycle_length():
    assert not neighborhood_code(build_profinite("cyclic", 3, k=1), 0, 1).is_tree()
    assert neighborhood_code(build_profinite("cyclic", 4, k=1), 0, 1).is_tree()
    assert not neighborhood_code(build_profinite("cyclic", 4, k=2), 0, 2).is_tree()
    two = neighborhood_code(build_profinite("cyclic", 2, k=1), 0, 1)
    assert two.word_classes == (0, 1, 1)


def test_label_length_guard():
    action = build_profinite("cyclic", 6, k=1)
    with pytest.raises(InputError, match="label length < r"):
        stat_vector(action, 2)


def test_code_string_round_trip_is_canonical():
    action = random_free_action(21, 25, 2, 2)
    _, types = vertex_types(action, 2)
    for alpha in types:
        assert NeighborhoodType.from_code_string(alpha.code_string()) == alpha
    with pytest.raises(InputError):
        NeighborhoodType.from_code_string("1:1:f:0.1")


def test_identity_action_with_two_label_values():
    action = FiniteAction.build([np.arange(4)], labels=["0", "0", "1", "1"])
    stat = stat_vector(action, 1)
    assert sorted(stat.entries.values()) == [Fraction(1, 2), Fraction(1, 2)]


def test_stat_vector_validation():
    alpha = neighborhood_code(build_profinite("cyclic", 5, k=1), 0, 1)
    with pytest.raises(InputError):
        StatVector(1, {alpha: Fraction(1, 2)})
    with pytest.raises(InputError):
        StatVector(0, {alpha: Fraction(1)})


@seed(31)
@settings(max_examples=25, deadline=None)
@given(case=st.integers(min_value=0, max_value=10_000), free=st.booleans())
def test_statistics_are_consistent_across_radii(case, free):
    make = random_free_action if free else random_involution_action
    action = make(case, 20, 2, 2)
    stat2, stat1 = stat_vector(action, 2), stat_vector(action, 1)
    assert sum(stat2.entries.values()) == 1
    assert stat2.restrict(1).entries == stat1.entries
    for v in range(action.n):
        assert restrict_type(neighborhood_code(action, v, 2), 1) == neighborhood_code(action, v, 1)


def test_restrict_type_edge_cases():
    alpha = neighborhood_code(random_free_action(2, 15, 2, 2), 3, 2)
    assert restrict_type(alpha, 2) is alpha
    root = restrict_type(alpha, 0)
    assert root.word_classes == (0,) and root.class_labels == ("",)
    with pytest.raises(InputError):
        restrict_type(alpha, 3)


def test_reroot_reads_the_neighbour_type():
    action = random_involution_action(8, 24, 2, 2)
    v = 5
    alpha = neighborhood_code(action, v, 2)
    w = parse_word("1")
    neighbour = int(action.gens[0][v])
    assert reroot(alpha, w, 1) == neighborhood_code(action, neighbour, 1)
    with pytest.raises(InputError):
        reroot(alpha, parse_word("1,2"), 1)


def test_unlabeled_projection_is_the_label_marginal():
    action = random_free_action(14, 30, 2, 1)
    stat = stat_vector(action, 1)
    projected = unlabeled_stats(stat)
    ids, types = vertex_types(action, 1)
    shapes = [forget_labels(t) for t in types]
    for shape in set(shapes):
        expected = Fraction(sum(1 for v in range(action.n) if shapes[ids[v]] == shape), action.n)
        assert projected.get(shape) == expected


def test_pair_stats_on_a_swap():
    action = FiniteAction.build([[1, 0]], labels=["0", "0"], mode=ActionMode.INVOLUTION)
    pair = pair_stats(action, 1)
    (alpha, i, beta), value = pair.items()[0]
    assert len(pair.entries) == 1
    assert (i, alpha, value) == (1, beta, Fraction(1))


@seed(32)
@settings(max_examples=25, deadline=None)
@given(case=st.integers(min_value=0, max_value=10_000), r=st.integers(min_value=0, max_value=2))
def test_pair_stats_satisfy_the_consistency_equations(case, r):
    action = random_involution_action(case, 18, 3, 2)
    assert check_pair_equations(stat_vector(action, r), pair_stats(action, r)) == []


def test_pair_stats_need_involutions():
    with pytest.raises(ModeError):
        pair_stats(random_free_action(1, 10, 2, 1), 1)


def test_check_pair_equations_reports_asymmetry():
    action = FiniteAction.build([[1, 0, 3, 2]], labels=["0", "1", "0", "0"], mode=ActionMode.INVOLUTION)
    stat, pair = stat_vector(action, 1), pair_stats(action, 1)
    (alpha, i, beta), value = next((k, v) for k, v in pair.items() if k[0] != k[2])
    broken = dict(pair.entries)
    broken[(alpha, i, beta)] = value + Fraction(1, 4)
    assert check_pair_equations(stat, PairStatVector(1, 1, broken))


def test_statistical_distance_on_two_point_masses():
    action = FiniteAction.build([np.arange(2)], labels=["0", "1"])
    _, (a1, a2) = vertex_types(action, 1)
    s1, s2 = StatVector(1, {a1: Fraction(1)}), StatVector(1, {a2: Fraction(1)})
    assert statistical_distance(s1, s2, [a1, a2]) == Fraction(3, 4)
    assert statistical_distance(s1, s1) == 0
    assert statistical_distance(s1, s2) == statistical_distance(s2, s1)
    with pytest.raises(InputError):
        statistical_distance(s1, s2, [a1])


def test_statistical_distance_triangle_inequality():
    stats = [stat_family(random_free_action(s, 16, 2, 1), 1) for s in range(3)]
    ordering = default_ordering(*stats)
    d = lambda a, b: statistical_distance(a, b, ordering)  # noqa: E731
    assert d(stats[0], stats[2]) <= d(stats[0], stats[1]) + d(stats[1], stats[2])
    assert d(stats[0], stats[1]) <= 2


def test_iso_oracle_basics():
    action = random_involution_action(6, 20, 2, 2)
    alpha = neighborhood_code(action, 0, 2)
    assert iso_bruteforce(alpha, alpha)
    assert iso_bruteforce(alpha, ball_graph(action, 0, 2))
    path = neighborhood_code(build_profinite("cyclic", 9, k=1), 0, 1)
    loop = neighborhood_code(build_profinite("cyclic", 1, k=1), 0, 1)
    assert not iso_bruteforce(path, loop)


def test_iso_oracle_guard():
    alpha = neighborhood_code(random_free_action(3, 40, 3, 2), 0, 2)
    with pytest.raises(GuardRefusedError):
        iso_bruteforce(alpha, alpha)


def test_stat_csv_round_trip_and_errors(tmp_path):
    action = random_involution_action(10, 16, 2, 1)
    stat, pair = stat_vector(action, 1), pair_stats(action, 1)
    text = format_stat_csv(stat, action.n)
    assert text.splitlines()[0] == "type_code,count,p_num,p_den"
    assert parse_stat_csv(text).entries == stat.entries
    path = tmp_path / "pairs.csv"
    path.write_text(format_pair_csv(pair, action.n), encoding="utf-8")
    assert read_pair_csv(str(path)).entries == pair.entries
    with pytest.raises(InputError, match="line 2"):
        parse_stat_csv("type_code,count,p_num,p_den\nnot-a-code,1,1,1\n")
