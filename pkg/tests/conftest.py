"""Shared brute-force helpers for the test suite.

These recompute structural facts from first principles, independently of
the library's own bookkeeping, so tests can use them as arbiters.
"""

from pathdelta.trees import RootedTree


def segment_properties(tree: RootedTree, edge_ids) -> tuple[bool, tuple]:
    """Brute-force (connected?, boundary) of a set of rooted edge indices.

    An edge index i joins parent[i+1] and i+1.  A subgraph of a tree is
    connected iff it touches exactly one more vertex than it has edges; the
    boundary is every touched vertex that also has an incident edge outside
    the set.
    """
    edge_ids = list(edge_ids)
    touched: dict[int, int] = {}
    for e in edge_ids:
        for v in (int(tree.parent[e + 1]), e + 1):
            touched[v] = touched.get(v, 0) + 1
    connected = len(touched) == len(edge_ids) + 1
    boundary = tuple(
        sorted(v for v, c in touched.items() if c < tree.vertex_degree(v))
    )
    return connected, boundary


def outside_counts(tree: RootedTree, td, v: int, colours) -> list[tuple[int, int]]:
    """Black/white taxon counts outside node v's segment, one pair per
    boundary vertex in stored order, recomputed by explicit flood fill.

    ``colours`` is indexed by taxon index (1 = black).  Each outside
    component of the tree attaches to exactly one boundary vertex; a taxon
    counts toward the vertex whose component contains its pendant edge.
    """
    inside = set(td.edges_of(v))

    def incident(y):
        out = []
        if y != 0:
            out.append((y - 1, int(tree.parent[y])))
        for c in tree.children(y):
            out.append((c - 1, c))
        return out

    res = []
    for x in td.boundary(v):
        seen = {x}
        stack = [x]
        b = w = 0
        while stack:
            y = stack.pop()
            for e, z in incident(y):
                if e in inside or z in seen:
                    continue
                seen.add(z)
                stack.append(z)
                t = int(tree.taxon_idx[z])
                if t >= 0:
                    if colours[t]:
                        b += 1
                    else:
                        w += 1
        res.append((b, w))
    return res


def leaves_under(tree: RootedTree, v: int) -> set[int]:
    """Leaf vertices in v's subtree, by explicit traversal."""
    out = set()
    stack = [v]
    while stack:
        u = stack.pop()
        kids = tree.children(u)
        if not kids:
            out.add(u)
        stack.extend(kids)
    return out
