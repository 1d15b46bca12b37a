import pytest

from pathdelta import (
    Lcg,
    all_pairs_path_lengths,
    chi_tilde_bruteforce,
    delta_bruteforce,
    inner_product_bruteforce,
    parse_newick,
    random_binary_tree,
    squared_paths_bruteforce,
    write_newick,
)


class Blacks:
    # minimal colour source: anything with colour_of works for the oracle
    def __init__(self, taxa):
        self.taxa = set(taxa)

    def colour_of(self, t):
        return 1 if t in self.taxa else 0


T3A = "(A:1,B:2,C:3);"
T3B = "(A:2,B:1,C:3);"
T4A = "(A:1,B:1,(C:1,D:1):1);"
T4B = "(A:1,C:1,(B:1,D:1):1);"


class TestLcg:
    def test_raw_stream(self):
        g = Lcg(1)
        assert [g.next_u64() for _ in range(3)] == [
            7806831264735756412,
            9396908728118811419,
            11960119808228829710,
        ]

    def test_first_step_by_hand(self):
        # one application of the recurrence
        assert Lcg(1).next_u64() == (
            (6364136223846793005 * 1 + 1442695040888963407) % 2**64
        )

    def test_below_range_and_values(self):
        g = Lcg(1)
        draws = [g.below(9) for _ in range(8)]
        assert draws == [3, 4, 5, 3, 7, 4, 4, 0]
        g2 = Lcg(123)
        assert all(0 <= g2.below(7) < 7 for _ in range(1000))

    def test_unit_range_and_values(self):
        g = Lcg(1)
        assert g.unit() == pytest.approx(0.42320917087271326, abs=0)
        g2 = Lcg(9)
        assert all(0.0 <= g2.unit() < 1.0 for _ in range(1000))

    def test_seed_masking(self):
        assert Lcg(2**64 + 5).state == Lcg(5).state


class TestGenerator:
    def test_two_taxa(self):
        t = random_binary_tree(2, seed=1)
        assert t.taxa == ("T1", "T2")
        assert len(t.edges) == 1

    def test_edge_count(self):
        for n in (3, 4, 9, 40):
            t = random_binary_tree(n, seed=n)
            assert len(t.edges) == 2 * n - 3

    def test_deterministic(self):
        a = random_binary_tree(16, seed=7)
        b = random_binary_tree(16, seed=7)
        assert write_newick(a) == write_newick(b)

    def test_frozen_instances(self):
        assert (
            write_newick(random_binary_tree(6, seed=7))
            == "(T1:2,(T2:5,T6:1):1,(T3:2,(T4:6,T5:3):8):3);"
        )

    def test_int_lengths_in_range(self):
        t = random_binary_tree(50, seed=3)
        assert all(x == int(x) and 0 <= x <= 8 for _, _, x in t.edges)

    def test_real_lengths_in_range(self):
        t = random_binary_tree(50, seed=3, lengths="real")
        assert all(0.0 <= x < 1.0 for _, _, x in t.edges)

    def test_roundtrips_through_newick(self):
        t = random_binary_tree(64, seed=12)
        assert write_newick(parse_newick(write_newick(t))) == write_newick(t)

    def test_rejects_bad_args(self):
        with pytest.raises(ValueError):
            random_binary_tree(1, seed=1)
        with pytest.raises(ValueError):
            random_binary_tree(5, seed=1, lengths="gaussian")


class TestPathLengths:
    def test_star(self):
        m = all_pairs_path_lengths(parse_newick(T3A))
        assert m.get("A", "B") == 3.0
        assert m.get("A", "C") == 4.0
        assert m.get("B", "C") == 5.0
        assert m.get("B", "A") == 3.0

    def test_single_edge(self):
        m = all_pairs_path_lengths(parse_newick("(A:5,B:0);"))
        assert m.get("A", "B") == 5.0

    def test_four_taxon(self):
        m = all_pairs_path_lengths(parse_newick(T4A))
        want = {("A", "B"): 2, ("C", "D"): 2, ("A", "C"): 3,
                ("A", "D"): 3, ("B", "C"): 3, ("B", "D"): 3}
        for (a, b), d in want.items():
            assert m.get(a, b) == d


class TestDelta:
    def test_worked_three_taxon(self):
        t1, t2 = parse_newick(T3A), parse_newick(T3B)
        assert squared_paths_bruteforce(t1) == 50.0
        assert squared_paths_bruteforce(t2) == 50.0
        assert inner_product_bruteforce(t1, t2) == 49.0
        assert delta_bruteforce(t1, t2) == 2.0

    def test_worked_four_taxon(self):
        t1, t2 = parse_newick(T4A), parse_newick(T4B)
        assert squared_paths_bruteforce(t1) == 44.0
        assert delta_bruteforce(t1, t2) == 4.0

    def test_identical_trees(self):
        t = parse_newick(T3A)
        assert delta_bruteforce(t, t) == 0.0
        assert inner_product_bruteforce(t, t) == squared_paths_bruteforce(t)

    def test_zero_length_tree(self):
        t1 = parse_newick(T3A)
        t2 = parse_newick("(A:0,B:0,C:0);")
        assert inner_product_bruteforce(t1, t2) == 0.0
        assert squared_paths_bruteforce(t2) == 0.0

    def test_taxon_mismatch(self):
        with pytest.raises(ValueError):
            delta_bruteforce(parse_newick(T3A), parse_newick("(A:1,B:2,D:3);"))

    def test_internal_consistency(self):
        # the three terms of the expansion agree within the oracle itself
        for seed in range(20):
            t1 = random_binary_tree(12, seed=seed)
            t2 = random_binary_tree(12, seed=seed + 1000)
            lhs = delta_bruteforce(t1, t2)
            rhs = (
                squared_paths_bruteforce(t1)
                + squared_paths_bruteforce(t2)
                - 2.0 * inner_product_bruteforce(t1, t2)
            )
            assert lhs == rhs


class TestChiTilde:
    def test_star_single_black(self):
        t = parse_newick("(A:2,B:1,C:3);")
        col = Blacks({"A"})
        by_label = {}
        for eid, (u, v, _) in enumerate(t.edges):
            leaf = v if t.is_leaf(v) else u
            by_label[t.label_of(leaf)] = chi_tilde_bruteforce(t, col, eid)
        assert by_label == {"A": 2, "B": 1, "C": 1}

    def test_monochromatic(self):
        t = random_binary_tree(10, seed=4)
        col = Blacks(set())
        assert all(
            chi_tilde_bruteforce(t, col, e) == 0 for e in range(len(t.edges))
        )

    def test_pendant_edge_counts_opposites(self):
        t = random_binary_tree(14, seed=8)
        col = Blacks({x for i, x in enumerate(t.taxa) if i % 3 == 0})
        blacks = sum(1 for x in t.taxa if col.colour_of(x))
        for eid, (u, v, _) in enumerate(t.edges):
            leaf = v if t.is_leaf(v) else (u if t.is_leaf(u) else None)
            if leaf is None:
                continue
            name = t.label_of(leaf)
            opposite = (
                len(t.taxa) - blacks if col.colour_of(name) else blacks
            )
            assert chi_tilde_bruteforce(t, col, eid) == opposite
