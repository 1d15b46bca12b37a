import math

import pytest

from pathdelta import NewickParseError, parse_newick, write_newick
from pathdelta.trees import TreeError


def edge_set(tree):
    # {(label-or-vertex, label-or-vertex): length} with labelled leaves named
    def name(v):
        return tree.label_of(v) if tree.is_leaf(v) else f"#{v}"

    return {frozenset((name(u), name(v))): x for u, v, x in tree.edges}


def test_parse_trifurcation():
    t = parse_newick("(A:1,B:2,C:3);")
    assert t.taxa == ("A", "B", "C")
    assert t.n_leaves == 3
    assert edge_set(t) == {
        frozenset(("#0", "A")): 1.0,
        frozenset(("#0", "B")): 2.0,
        frozenset(("#0", "C")): 3.0,
    }


def test_parse_bifurcation_suppresses_root():
    # the two root branches become one edge with the summed length
    t = parse_newick("((A:1,B:1):0.5,(C:1,D:1):0.5);")
    lengths = sorted(x for _, _, x in t.edges)
    assert lengths == [1.0, 1.0, 1.0, 1.0, 1.0]
    assert t.n_leaves == 4


def test_parse_two_taxa():
    t = parse_newick("(A:5,B:0);")
    assert t.taxa == ("A", "B")
    assert len(t.edges) == 1
    assert t.edges[0][2] == 5.0


def test_parse_nested():
    t = parse_newick("((A:1,B:2):3,C:4);")
    # suppression joins the internal-to-root and C-to-root branches
    assert edge_set(t) == {
        frozenset(("#0", "A")): 1.0,
        frozenset(("#0", "B")): 2.0,
        frozenset(("#0", "C")): 7.0,
    }


def test_parse_whitespace_and_internal_labels():
    t = parse_newick(" ( A:1 , B:2 ,\n ( C:3 , D:4 )inner:5 ) ;")
    assert t.taxa == ("A", "B", "C", "D")
    assert len(t.edges) == 5


def test_topology_only_overrides_lengths():
    t = parse_newick("(A:9,B:9,(C:9,D:9):9);", topology_only=True)
    assert all(x == 1.0 for _, _, x in t.edges)
    u = parse_newick("(A,B,(C,D));", topology_only=True)
    assert all(x == 1.0 for _, _, x in u.edges)


def test_scientific_notation_lengths():
    t = parse_newick("(A:1e-3,B:2.5E2,C:3.0);")
    assert sorted(x for _, _, x in t.edges) == [0.001, 3.0, 250.0]


@pytest.mark.parametrize(
    "text",
    [
        "(A:1,B:2);extra",
        "(A:1,B:2,C:3)",
        "(A:1,B:2,C:3):1;",
        "(A:1,B:2,C:3,D:4);",
        "(A:1);",
        "((A:1,B:1,C:1):1,D:1);",
        "(A:1,,B:2);",
        "(A:1,B:2",
        "(A:1,A:2,C:3);",
        "(A:1,B,C:3);",
        "(A:1,B:-2,C:3);",
        "(A:1,B:inf,C:3);",
        "(A:1,B:nan,C:3);",
        "(A:1,B:2,C:);",
        "('A':1,B:2,C:3);",
        "",
    ],
)
def test_parse_rejects(text):
    with pytest.raises(NewickParseError):
        parse_newick(text)


def test_parse_error_carries_position():
    with pytest.raises(NewickParseError) as ei:
        parse_newick("(A:1,B:x,C:3);")
    assert ei.value.position == 7


def test_degree_two_vertex_rejected_structurally():
    # a lone nested pair creates a degree-2 vertex after suppression
    with pytest.raises((NewickParseError, TreeError)):
        parse_newick("((A:1):1,B:2,C:3);")


def test_write_canonical_trifurcation():
    t = parse_newick("(A:1,B:2,C:3);")
    assert write_newick(t) == "(A:1,B:2,C:3);"


def test_write_two_taxa():
    t = parse_newick("(B:2,A:3);")
    assert write_newick(t) == "(A:5,B:0);"


def test_roundtrip_is_exact():
    texts = [
        "(A:1,B:2,C:3);",
        "(A:1,B:1,(C:1,D:1):1);",
        "(T1:2,(T2:5,T6:1):1,(T3:2,(T4:6,T5:3):8):3);",
    ]
    for s in texts:
        t = parse_newick(s)
        assert write_newick(t) == s
        assert write_newick(parse_newick(write_newick(t))) == s


def test_roundtrip_preserves_real_lengths():
    s = "(A:0.1234567890123456,B:3.0000000000000004e-07,C:12345.678901234567);"
    t = parse_newick(s)
    u = parse_newick(write_newick(t))
    a = sorted(x for _, _, x in t.edges)
    b = sorted(x for _, _, x in u.edges)
    assert a == b  # exact, not approximate
    assert all(math.isfinite(x) for x in a)
