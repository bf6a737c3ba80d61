"""Tests for tree-decomposition construction, nice form, and PACE files."""

import pytest
from hypothesis import given, settings, strategies as st

from fairorient import CapExceededError, InputError, Instance
from fairorient.decomp import (
    FORGET,
    INTRODUCE,
    JOIN,
    LEAF,
    NiceDecomposition,
    TreeDecomposition,
    exact_treewidth,
    heuristic_decomposition,
    make_nice,
    read_td,
    validate,
    write_td,
)


def unit(n, pairs):
    return Instance(n, [(u, v, 1, 1) for u, v in pairs])


def path_instance(n):
    return unit(n, [(i, i + 1) for i in range(n - 1)])


def complete_instance(n):
    return unit(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def random_instance(data, n_max=7, m_max=10):
    n = data.draw(st.integers(1, n_max))
    m = data.draw(st.integers(0, m_max))
    edges = []
    for _ in range(m):
        if n < 2:
            break
        u = data.draw(st.integers(0, n - 1))
        v = data.draw(st.integers(0, n - 2))
        if v >= u:
            v += 1
        edges.append((u, v, 1, 1))
    return Instance(n, edges)


def check_nice_structure(inst, nd):
    """Typing rules, single-forget rule, and the edge-handling contract."""
    referenced = set()
    for idx, node in enumerate(nd.nodes):
        for c in node.children:
            assert c < idx
            referenced.add(c)
        child_bags = [nd.nodes[c].bag for c in node.children]
        if node.kind == LEAF:
            assert node.bag == frozenset() and not node.children
        elif node.kind == INTRODUCE:
            (cb,) = child_bags
            assert node.vertex not in cb
            assert node.bag == cb | {node.vertex}
        elif node.kind == FORGET:
            (cb,) = child_bags
            assert node.vertex in cb
            assert node.bag == cb - {node.vertex}
        elif node.kind == JOIN:
            assert len(child_bags) == 2
            assert child_bags[0] == child_bags[1] == node.bag
        else:
            raise AssertionError(f"unknown node kind {node.kind}")
    assert referenced == set(range(len(nd.nodes))) - {nd.root}
    assert nd.nodes[nd.root].bag == frozenset()

    forget_of = {}
    for idx, node in enumerate(nd.nodes):
        if node.kind == FORGET:
            assert node.vertex not in forget_of, "vertex forgotten twice"
            forget_of[node.vertex] = idx
    covered = set()
    for node in nd.nodes:
        covered |= node.bag
    assert set(forget_of) == covered
    for u, v, _, _ in inst.edges:
        at_u = v in nd.nodes[forget_of[u]].bag
        at_v = u in nd.nodes[forget_of[v]].bag
        assert at_u != at_v, "edge must be handled at exactly one forget node"


def nice_as_td(nd, n):
    edges = []
    for idx, node in enumerate(nd.nodes):
        for c in node.children:
            edges.append((c, idx))
    return TreeDecomposition(n, tuple(node.bag for node in nd.nodes), tuple(edges))


class TestHeuristic:
    def test_tree_has_width_one(self):
        inst = unit(7, [(0, 1), (1, 2), (1, 3), (3, 4), (0, 5), (5, 6)])
        td = heuristic_decomposition(inst)
        assert td.width == 1
        assert validate(inst, td).ok

    def test_complete_graph(self):
        inst = complete_instance(4)
        td = heuristic_decomposition(inst)
        assert td.width == 3
        assert validate(inst, td).ok

    def test_single_vertex(self):
        td = heuristic_decomposition(Instance(1, []))
        assert td.width == 0
        assert td.bags == (frozenset([0]),)

    def test_edgeless_graph(self):
        inst = Instance(5, [])
        td = heuristic_decomposition(inst)
        assert td.width == 0
        assert validate(inst, td).ok

    def test_parallel_edges_collapse(self):
        inst = Instance(2, [(0, 1, 1, 1)] * 4)
        td = heuristic_decomposition(inst)
        assert td.width == 1
        assert validate(inst, td).ok

    def test_disconnected_graph_still_one_tree(self):
        inst = unit(6, [(0, 1), (2, 3), (4, 5)])
        td = heuristic_decomposition(inst)
        assert validate(inst, td).ok
        assert len(td.tree_edges) == len(td.bags) - 1

    def test_cycle(self):
        inst = unit(5, [(i, (i + 1) % 5) for i in range(5)])
        td = heuristic_decomposition(inst)
        assert td.width == 2
        assert validate(inst, td).ok

    @settings(max_examples=150, deadline=None)
    @given(st.data())
    def test_always_valid(self, data):
        inst = random_instance(data)
        td = heuristic_decomposition(inst)
        assert validate(inst, td).ok

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_width_at_least_exact(self, data):
        inst = random_instance(data, n_max=6, m_max=8)
        td = heuristic_decomposition(inst)
        assert td.width >= exact_treewidth(inst)


class TestValidate:
    def test_missing_edge_coverage(self):
        inst = unit(3, [(0, 1), (1, 2), (0, 2)])
        td = TreeDecomposition(
            3, (frozenset({0, 1}), frozenset({1, 2})), ((0, 1),)
        )
        rep = validate(inst, td)
        assert not rep.ok and rep.condition == "edge_coverage"

    def test_missing_vertex(self):
        inst = Instance(3, [(0, 1, 1, 1)])
        td = TreeDecomposition(3, (frozenset({0, 1}),), ())
        rep = validate(inst, td)
        assert not rep.ok and rep.condition == "vertex_coverage"

    def test_disconnected_occurrences(self):
        inst = unit(3, [(0, 1), (1, 2)])
        td = TreeDecomposition(
            3,
            (frozenset({0, 1}), frozenset({1, 2}), frozenset({0, 2})),
            ((0, 1), (1, 2)),
        )
        rep = validate(inst, td)
        assert not rep.ok and rep.condition == "connectivity"
        assert "0" in rep.detail

    def test_not_a_tree(self):
        inst = unit(2, [(0, 1)])
        td = TreeDecomposition(
            2, (frozenset({0, 1}), frozenset({0, 1})), ((0, 1), (1, 0))
        )
        rep = validate(inst, td)
        assert not rep.ok and rep.condition == "tree"

    def test_vertex_count_mismatch(self):
        inst = unit(2, [(0, 1)])
        td = TreeDecomposition(3, (frozenset({0, 1}),), ())
        rep = validate(inst, td)
        assert not rep.ok and rep.condition == "tree"

    def test_accepts_hand_written(self):
        inst = path_instance(4)
        td = TreeDecomposition(
            4,
            (frozenset({0, 1}), frozenset({1, 2}), frozenset({2, 3})),
            ((0, 1), (1, 2)),
        )
        assert validate(inst, td) == (True, None, "")


class TestMakeNice:
    def test_path_rooted_at_end_is_join_free(self):
        inst = path_instance(4)
        td = TreeDecomposition(
            4,
            (frozenset({0, 1}), frozenset({1, 2}), frozenset({2, 3})),
            ((0, 1), (1, 2)),
        )
        nd = make_nice(td, root_choice=0)
        assert nd.width == td.width == 1
        assert all(node.kind != JOIN for node in nd.nodes)
        check_nice_structure(inst, nd)

    def test_branching_tree_gets_joins(self):
        inst = unit(4, [(0, 1), (0, 2), (0, 3)])
        td = TreeDecomposition(
            4,
            (
                frozenset({0}),
                frozenset({0, 1}),
                frozenset({0, 2}),
                frozenset({0, 3}),
            ),
            ((0, 1), (0, 2), (0, 3)),
        )
        nd = make_nice(td)
        assert sum(1 for node in nd.nodes if node.kind == JOIN) == 2
        assert nd.width == 1
        check_nice_structure(inst, nd)

    def test_k4_width_preserved(self):
        inst = complete_instance(4)
        td = heuristic_decomposition(inst)
        nd = make_nice(td)
        assert nd.width == td.width == 3
        check_nice_structure(inst, nd)

    def test_rejects_wrong_edge_count(self):
        td = TreeDecomposition(2, (frozenset({0}), frozenset({1})), ())
        with pytest.raises(InputError):
            make_nice(td)

    def test_rejects_disconnected(self):
        td = TreeDecomposition(
            3,
            (frozenset({0}), frozenset({1}), frozenset({2})),
            ((1, 2), (2, 1)),
        )
        with pytest.raises(InputError):
            make_nice(td)

    def test_rejects_bad_root(self):
        td = TreeDecomposition(1, (frozenset({0}),), ())
        with pytest.raises(InputError):
            make_nice(td, root_choice=5)

    def test_node_count_linear_in_width_times_bags(self):
        inst = complete_instance(6)
        td = heuristic_decomposition(inst)
        nd = make_nice(td)
        assert len(nd.nodes) <= 4 * (td.width + 2) * len(td.bags) + 2

    @settings(max_examples=120, deadline=None)
    @given(st.data())
    def test_nice_form_roundtrip_properties(self, data):
        inst = random_instance(data)
        td = heuristic_decomposition(inst)
        root = data.draw(st.integers(0, len(td.bags) - 1))
        nd = make_nice(td, root_choice=root)
        assert nd.width == td.width
        check_nice_structure(inst, nd)
        assert validate(inst, nice_as_td(nd, inst.n)).ok


class TestExactTreewidth:
    def test_known_values(self):
        assert exact_treewidth(Instance(1, [])) == 0
        assert exact_treewidth(Instance(4, [])) == 0
        assert exact_treewidth(path_instance(5)) == 1
        assert exact_treewidth(unit(5, [(i, (i + 1) % 5) for i in range(5)])) == 2
        assert exact_treewidth(complete_instance(4)) == 3
        assert exact_treewidth(Instance(0, [])) == -1

    def test_cap(self):
        with pytest.raises(CapExceededError):
            exact_treewidth(Instance(11, []), cap=10)

    def test_heuristic_exact_on_trees(self):
        inst = unit(7, [(0, 1), (1, 2), (1, 3), (3, 4), (0, 5), (5, 6)])
        assert heuristic_decomposition(inst).width == exact_treewidth(inst) == 1


class TestPaceFormat:
    def test_canonical_output(self):
        td = TreeDecomposition(
            3, (frozenset({0, 1}), frozenset({1, 2})), ((1, 0),)
        )
        assert write_td(td) == "s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n"

    def test_roundtrip_bit_exact(self):
        inst = unit(6, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (4, 5)])
        td = heuristic_decomposition(inst)
        text = write_td(td)
        td2 = read_td(text)
        assert write_td(td2) == text
        assert validate(inst, td2).ok
        assert td2.width == td.width

    def test_read_with_comments_and_order(self):
        text = (
            "c tiny example\n"
            "s td 2 2 3\n"
            "c bags may come in any order\n"
            "b 2 2 3\n"
            "b 1 1 2\n"
            "1 2\n"
        )
        td = read_td(text)
        assert td.n == 3
        assert td.bags == (frozenset({0, 1}), frozenset({1, 2}))
        assert td.tree_edges == ((0, 1),)

    @pytest.mark.parametrize(
        "text",
        [
            "b 1 1\n",  # bag before header
            "1 2\n",  # edge before header
            "s td 1 1 1\ns td 1 1 1\n",  # duplicate header
            "s td x 1 1\n",  # malformed header
            "s td 1 1 1\nb 2 1\n",  # bag id out of range
            "s td 2 1 1\nb 1 1\nb 1 1\n1 2\n",  # duplicate bag id
            "s td 1 1 1\nb 1 5\n",  # vertex out of range
            "s td 2 2 2\nb 1 1\nb 2 2\n1 3\n",  # edge id out of range
            "s td 2 2 2\nb 1 1\nb 2 2\n1 2 3\n",  # malformed edge
            "s td 2 2 2\nb 1 1\n",  # missing bag
            "",  # missing header
        ],
    )
    def test_rejects_malformed(self, text):
        with pytest.raises(InputError):
            read_td(text)
