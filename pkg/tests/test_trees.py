import pytest

from conftest import leaves_under
from pathdelta import (
    TaxonSetMismatchError,
    TreeError,
    UnrootedTree,
    parse_newick,
    random_binary_tree,
    root_at_taxon,
    validate_pair,
)


def star3():
    return parse_newick("(A:1,B:2,C:3);")


def caterpillar4():
    return parse_newick("(A:1,B:1,(C:1,D:1):1);")


class TestUnrootedTree:
    def test_basic_attributes(self):
        t = star3()
        assert t.n_leaves == 3
        assert t.n_vertices == 4
        assert t.taxa == ("A", "B", "C")
        assert len(t.edges) == 3
        assert {t.degree(v) for v in range(4)} == {1, 3}

    def test_single_edge(self):
        t = UnrootedTree([(0, 1, 2.5)], {0: "x", 1: "y"})
        assert t.taxa == ("x", "y")
        assert t.degree(0) == 1

    def test_rejects_degree_two(self):
        with pytest.raises(TreeError):
            UnrootedTree(
                [(0, 1, 1.0), (1, 2, 1.0)], {0: "A", 2: "B"}
            )

    def test_rejects_disconnected(self):
        with pytest.raises(TreeError):
            UnrootedTree(
                [(0, 1, 1.0), (2, 3, 1.0)], {0: "A", 1: "B", 2: "C", 3: "D"}
            )

    def test_rejects_cycle(self):
        edges = [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]
        with pytest.raises(TreeError):
            UnrootedTree(edges, {})

    def test_rejects_duplicate_labels(self):
        with pytest.raises(TreeError):
            UnrootedTree(
                [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)],
                {1: "A", 2: "A", 3: "B"},
            )

    def test_rejects_bad_label(self):
        with pytest.raises(TreeError):
            UnrootedTree([(0, 1, 1.0)], {0: "a b", 1: "c"})

    def test_rejects_unlabelled_leaf(self):
        with pytest.raises(TreeError):
            UnrootedTree(
                [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)], {1: "A", 2: "B"}
            )

    def test_rejects_negative_length(self):
        with pytest.raises(TreeError):
            UnrootedTree([(0, 1, -1.0)], {0: "A", 1: "B"})

    def test_leaf_vertex_lookup(self):
        t = star3()
        for name in t.taxa:
            assert t.label_of(t.leaf_vertex(name)) == name


class TestRootedTree:
    def test_star3_structure(self):
        r = root_at_taxon(star3(), "A")
        assert r.n_leaves == 3
        assert r.n_edges == 3
        assert list(r.parent) == [-1, 0, 1, 1]
        assert list(r.edge_length) == [1.0, 2.0, 3.0]
        assert list(r.leaf_count) == [3, 2, 1, 1]
        assert r.children(0) == (1,)
        assert sorted(r.children(1)) == [2, 3]
        assert r.is_leaf(2) and r.is_leaf(3) and not r.is_leaf(1)

    def test_edge_indexing_convention(self):
        # edge i joins vertex i+1 to its parent
        r = root_at_taxon(caterpillar4(), "A")
        for i in range(r.n_edges):
            p, c = r.edge_endpoints(i)
            assert c == i + 1
            assert p == r.parent[c]

    def test_leaf_ranges_are_contiguous_subtrees(self):
        t = random_binary_tree(17, seed=5)
        r = root_at_taxon(t, t.taxa[0])
        order = list(r.leaf_order)
        assert sorted(order) == [v for v in range(r.n_vertices)
                                 if not r.children(v) or v == 0]
        for v in range(r.n_vertices):
            lo, hi = r.leaf_lo[v], r.leaf_hi[v]
            got = set(order[lo:hi])
            want = leaves_under(r, v)
            if v == 0:
                want.add(0)  # the root taxon counts toward the whole tree
            assert got == want

    def test_small_child_has_fewer_leaves(self):
        t = random_binary_tree(33, seed=2)
        r = root_at_taxon(t, t.taxa[0])
        for v in range(r.n_vertices):
            kids = r.children(v)
            if len(kids) == 2:
                s, l = r.small[v], r.large[v]
                assert {s, l} == set(kids)
                assert r.leaf_count[s] <= r.leaf_count[l]

    def test_path_lengths_preserved_by_rooting(self):
        # sum of parent distances reproduces unrooted leaf-to-leaf paths
        t = random_binary_tree(9, seed=11)
        r = root_at_taxon(t, t.taxa[0])

        def depth(v):
            d = 0.0
            while v != 0:
                d += r.parent_len[v]
                v = r.parent[v]
            return d

        from pathdelta import all_pairs_path_lengths

        m = all_pairs_path_lengths(t)
        rho = t.taxa[0]
        for name in t.taxa[1:]:
            assert depth(r.vertex_of_taxon[name]) == pytest.approx(
                m.get(rho, name)
            )

    def test_orig_edge_mapping(self):
        t = star3()
        r = root_at_taxon(t, "B")
        for i in range(r.n_edges):
            u, v = r.edge_endpoints(i)
            ou, ov = r.orig_vertex[u], r.orig_vertex[v]
            a, b, x = t.edges[r.orig_edge[i]]
            assert {ou, ov} == {a, b}
            assert x == r.edge_length[i]

    def test_edge_pendant_taxon(self):
        r = root_at_taxon(star3(), "A")
        names = {i: r.edge_pendant_taxon[i] for i in range(3)}
        # root edge carries the root taxon; leaf edges carry their taxon
        assert names[0] == r.taxon_idx[0]
        labels = sorted(r.taxa[names[i]] for i in range(3))
        assert labels == ["A", "B", "C"]

    def test_rooting_at_unknown_taxon(self):
        with pytest.raises(TreeError):
            root_at_taxon(star3(), "Z")


class TestValidatePair:
    def test_ok(self):
        pair = validate_pair(star3(), parse_newick("(A:2,B:1,C:3);"))
        assert pair.n == 3
        assert pair.rho == "A"
        assert pair.taxa == ("A", "B", "C")
        assert pair.t1.taxa == pair.t2.taxa

    def test_mismatch_lists_symmetric_difference(self):
        t1 = star3()
        t2 = parse_newick("(A:1,B:2,D:3);")
        with pytest.raises(TaxonSetMismatchError) as ei:
            validate_pair(t1, t2)
        assert ei.value.only_first == ("C",)
        assert ei.value.only_second == ("D",)
        assert "C" in str(ei.value) and "D" in str(ei.value)

    def test_roots_at_lexicographically_smallest(self):
        t1 = parse_newick("(b:1,a:2,c:3);")
        t2 = parse_newick("(c:1,a:2,b:3);")
        assert validate_pair(t1, t2).rho == "a"
