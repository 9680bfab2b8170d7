import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import double_hub, trees
from abslab.enumeration import EnumSpec, enumerate_trees
from abslab.tree import (
    Graph,
    InternalPath,
    Tree,
    TreeFormatError,
    canonical_code,
    degree_sequence,
    edge_type_counts,
    format_tree,
    format_trees,
    internal_paths,
    leaf_partition,
    parse_tree,
    parse_trees,
    path_tree,
    pendent_count,
    read_tree,
    relabel,
    spider,
    star_tree,
    tree_center,
)


# -- construction and validation ---------------------------------------------------


def test_tree_rejects_wrong_edge_count():
    with pytest.raises(ValueError):
        Tree(4, ((0, 1), (1, 2)))


def test_tree_rejects_cycle_with_right_edge_count():
    with pytest.raises(ValueError):
        Tree(4, ((0, 1), (1, 2), (0, 2)))


@pytest.mark.parametrize("edges", [((0, 0),), ((0, 1), (1, 0)), ((0, 5),)])
def test_graph_rejects_loops_duplicates_and_bad_labels(edges):
    with pytest.raises(ValueError):
        Graph(3, edges)


def test_small_orders_are_valid_trees():
    assert Tree(1, ()).degrees == (0,)
    assert Tree(2, ((1, 0),)).edges == ((0, 1),)


# -- degree utilities ----------------------------------------------------------------


def test_degree_sequence_examples():
    assert sorted(degree_sequence(star_tree(4))) == [1, 1, 1, 3]
    assert sorted(degree_sequence(path_tree(4))) == [1, 1, 2, 2]
    assert degree_sequence(path_tree(2)) == (1, 1)


@pytest.mark.parametrize("p", range(2, 9))
def test_pendent_count_star(p):
    assert pendent_count(star_tree(p + 1)) == p


def test_pendent_count_path_and_spider():
    for n in range(2, 10):
        assert pendent_count(path_tree(n)) == 2
    assert pendent_count(spider([2, 2, 2])) == 3


@given(trees(min_order=2))
def test_degree_sum_and_positive_degrees(t):
    assert sum(degree_sequence(t)) == 2 * (t.order - 1)
    assert min(t.degrees) >= 1


# -- leaf partition ------------------------------------------------------------------


def test_leaf_partition_star():
    part = leaf_partition(star_tree(4))
    assert part.w1 == {1, 2, 3} and part.w2 == {0} and part.w3 == set()


def test_leaf_partition_path():
    part = leaf_partition(path_tree(5))
    assert part.w1 == {0, 4} and part.w2 == {1, 3} and part.w3 == {2}


def test_leaf_partition_spider():
    part = leaf_partition(spider([2, 2, 2]))
    assert (len(part.w1), len(part.w2), len(part.w3)) == (3, 3, 1)
    assert part.w3 == {0}


@pytest.mark.parametrize("n", [1, 2])
def test_leaf_partition_rejects_tiny_trees(n):
    with pytest.raises(ValueError):
        leaf_partition(path_tree(n))


@given(trees(min_order=3))
def test_leaf_partition_cells_are_disjoint_and_exhaustive(t):
    part = leaf_partition(t)
    assert part.w1 | part.w2 | part.w3 == set(range(t.order))
    assert not (part.w1 & part.w2 or part.w1 & part.w3 or part.w2 & part.w3)
    assert len(part.w1) == pendent_count(t)


# -- internal paths ------------------------------------------------------------------


def test_internal_paths_of_path_is_empty():
    assert internal_paths(path_tree(7)) == []


def test_internal_path_length_one():
    (ip,) = internal_paths(double_hub(0))
    assert double_hub(0).order == 10
    assert ip.length == 1


def test_internal_path_length_two():
    t = double_hub(1)
    (ip,) = internal_paths(t)
    assert t.order == 11
    assert ip.length == 2 and t.degree(ip.interior[0]) == 2


def _check_internal_paths(t: Tree):
    deg = t.degrees
    found = internal_paths(t)
    for ip in found:
        a, b = ip.ends
        assert deg[a] >= 3 and deg[b] >= 3 and ip.length >= 1
        assert all(deg[v] == 2 for v in ip.interior)
        assert all(t.has_edge(x, y) for x, y in zip(ip.vertices, ip.vertices[1:]))
    interior = {v for ip in found for v in ip.interior}
    # degree-2 vertices between two branching vertices: walk both directions
    expected = set()
    for v in range(t.order):
        if deg[v] != 2:
            continue
        ends = []
        for start in t.neighbors(v):
            prev, cur = v, start
            while deg[cur] == 2:
                a, c = t.neighbors(cur)
                prev, cur = cur, (c if a == prev else a)
            ends.append(deg[cur])
        if min(ends) >= 3:
            expected.add(v)
    assert interior == expected


@given(trees(min_order=2, max_order=16))
def test_internal_path_invariants_random(t):
    _check_internal_paths(t)


def test_internal_path_invariants_exhaustive():
    for n in range(2, 11):
        for t in enumerate_trees(EnumSpec(n)):
            _check_internal_paths(t)


def test_internal_path_helpers():
    ip = InternalPath((4, 7, 9))
    assert ip.length == 2 and ip.ends == (4, 9) and ip.interior == (7,)


# -- edge-type counts ---------------------------------------------------------------


def test_edge_type_counts_examples():
    assert edge_type_counts(star_tree(4)) == {(1, 3): 3}
    assert edge_type_counts(path_tree(5)) == {(1, 2): 2, (2, 2): 2}
    assert edge_type_counts(spider([2, 2, 2])) == {(1, 2): 3, (2, 3): 3}


@given(trees(min_order=2))
def test_edge_type_counts_total(t):
    counts = edge_type_counts(t)
    assert sum(counts.values()) == t.order - 1
    assert all(i <= j for i, j in counts)


# -- canonical codes ----------------------------------------------------------------


def test_canonical_code_relabel_path():
    a = path_tree(4)
    b = Tree(4, ((2, 0), (0, 3), (3, 1)))
    assert canonical_code(a) == canonical_code(b)


def test_canonical_code_distinguishes_path_and_star():
    assert canonical_code(path_tree(4)) != canonical_code(star_tree(4))


def test_tree_center():
    assert tree_center(path_tree(5)) == (2,)
    assert tree_center(path_tree(6)) == (2, 3)
    assert tree_center(star_tree(6)) == (0,)


@given(trees(max_order=14), st.randoms(use_true_random=False))
def test_canonical_code_is_label_invariant(t, rnd):
    perm = list(range(t.order))
    rnd.shuffle(perm)
    assert canonical_code(relabel(t, perm)) == canonical_code(t)


def test_canonical_code_matches_permutation_oracle():
    # every tree class up to order 8, plus two random relabelings of each
    rng = random.Random(11)
    for n in range(1, 9):
        pool = []
        for t in enumerate_trees(EnumSpec(n)):
            pool.append(t)
            for _ in range(2):
                perm = list(range(n))
                rng.shuffle(perm)
                pool.append(relabel(t, perm))
        codes = [canonical_code(t) for t in pool]
        for i in range(len(pool)):
            for j in range(i + 1, len(pool)):
                iso = oracles.isomorphic(n, pool[i].edges, n, pool[j].edges)
                assert (codes[i] == codes[j]) == iso, (pool[i], pool[j])


def test_deep_path_does_not_recurse():
    assert canonical_code(path_tree(5000)) == canonical_code(relabel(path_tree(5000), list(range(4999, -1, -1))))


# -- text format ---------------------------------------------------------------------


def test_format_is_bit_exact():
    assert format_tree(spider([1, 2])) == "4\n0 1\n0 2\n2 3\n"
    assert format_tree(Tree(1, ())) == "1\n"


@given(trees())
def test_format_parse_round_trip(t):
    assert parse_tree(format_tree(t)) == t


def test_parse_trees_stream():
    items = [path_tree(3), star_tree(5), Tree(1, ())]
    assert list(parse_trees(format_trees(items))) == items


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("", 1, "missing order"),
        ("x\n", 1, "integer"),
        ("3\n0 1\n", 2, "disconnected"),
        ("4\n0 1\n1 2\n0 2\n", 4, "cycle"),
        ("3\n1 0\n1 2\n", 2, "u < v"),
        ("3\n0 1\n1 3\n", 3, "u < v"),
        ("3\n0 1\n1\n", 3, "expected 'u v'"),
        ("3\n0 1\n1 b\n", 3, "non-integer"),
        ("0\n", 1, "positive"),
    ],
)
def test_parse_errors_name_the_line(text, line, fragment):
    with pytest.raises(TreeFormatError) as info:
        parse_tree(text, "t.txt")
    assert info.value.line == line
    assert fragment in str(info.value)
    assert str(info.value).startswith(f"t.txt:{line}:")


def test_read_tree_reports_file_name(tree_file):
    path = tree_file("3\n0 1\n0 1\n")
    with pytest.raises(TreeFormatError, match=str(path)):
        read_tree(path)
    assert read_tree(tree_file("2\n0 1\n")) == path_tree(2)
