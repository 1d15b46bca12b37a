"""Unrooted phylogenetic trees and leaf-rooted orientations.

An unrooted tree here is strictly binary: every vertex is either a leaf
(degree one, carrying a taxon label) or an internal vertex of degree three.
A tree on n >= 3 taxa has 2n - 2 vertices and 2n - 3 edges; the degenerate
two-taxon tree is a single edge.

Rooting happens at a taxon rather than at an internal vertex: the chosen
leaf becomes the root, its pendant edge becomes the root edge, and every
other edge is oriented towards it.  Vertices are renumbered in depth-first
preorder from the root, which gives a deterministic global index; all
downstream code (edge statistics, segment boundaries, colouring slots)
refers to vertices and edges in this rooted index space.

Edge indexing convention: in a rooted tree every vertex except the root has
exactly one parent edge, so edges are identified with their child vertex.
Edge index ``i`` (0-based, ``0 .. n_edges - 1``) is the parent edge of
vertex ``i + 1``; index 0 is always the root edge.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "TreeError",
    "TaxonSetMismatchError",
    "UnrootedTree",
    "RootedTree",
    "ValidatedPair",
    "root_at_taxon",
    "validate_pair",
]

_LABEL_RE = re.compile(r"[A-Za-z0-9_.\-]+\Z")


class TreeError(ValueError):
    """Raised for structurally invalid trees or invalid tree operations."""


class TaxonSetMismatchError(TreeError):
    """Raised when two trees do not carry the same taxon set."""

    def __init__(self, only_first, only_second):
        self.only_first = tuple(sorted(only_first))
        self.only_second = tuple(sorted(only_second))
        unshared = ", ".join(sorted(self.only_first + self.only_second))
        super().__init__("taxon sets differ; unshared taxa: " + unshared)


class UnrootedTree:
    """Binary unrooted tree with labelled leaves and non-negative lengths.

    Parameters
    ----------
    edges :
        Iterable of ``(u, v, length)`` triples over vertices ``0 .. V-1``.
    leaf_labels :
        Mapping from every degree-one vertex to its taxon label.

    Construction validates the whole contract: vertex degrees one or three
    only, exactly the degree-one vertices labelled, labels unique and drawn
    from ``[A-Za-z0-9_.-]``, lengths finite and >= 0, and the graph a single
    connected tree.  Instances are treated as immutable once built.
    """

    def __init__(self, edges, leaf_labels):
        self.edges = [(int(u), int(v), float(x)) for u, v, x in edges]
        if not self.edges:
            raise TreeError("a tree needs at least one edge (two taxa)")
        n_vertices = 0
        for u, v, x in self.edges:
            if u < 0 or v < 0 or u == v:
                raise TreeError(f"bad edge ({u}, {v})")
            if not np.isfinite(x):
                raise TreeError(f"edge ({u}, {v}) has non-finite length {x!r}")
            if x < 0:
                raise TreeError(f"edge ({u}, {v}) has negative length {x}")
            n_vertices = max(n_vertices, u + 1, v + 1)
        self.n_vertices = n_vertices
        if len(self.edges) != n_vertices - 1:
            raise TreeError(
                f"{len(self.edges)} edges for {n_vertices} vertices; not a tree"
            )

        adj: list[list[tuple[int, int]]] = [[] for _ in range(n_vertices)]
        for eid, (u, v, _) in enumerate(self.edges):
            adj[u].append((v, eid))
            adj[v].append((u, eid))
        self.adj = adj

        for v in range(n_vertices):
            d = len(adj[v])
            if d not in (1, 3):
                raise TreeError(f"vertex {v} has degree {d}; expected 1 or 3")

        # single component; vertex/edge count alone does not guarantee it
        seen = [False] * n_vertices
        stack = [0]
        seen[0] = True
        reached = 1
        while stack:
            v = stack.pop()
            for nbr, _ in adj[v]:
                if not seen[nbr]:
                    seen[nbr] = True
                    reached += 1
                    stack.append(nbr)
        if reached != n_vertices:
            raise TreeError("edge list does not form a connected tree")

        leaves = {v for v in range(n_vertices) if len(adj[v]) == 1}
        labelled = set(leaf_labels)
        if labelled != leaves:
            raise TreeError(
                "leaf labels must cover exactly the degree-one vertices; "
                f"unlabelled leaves {sorted(leaves - labelled)}, "
                f"labelled non-leaves {sorted(labelled - leaves)}"
            )
        self._label_of = {}
        self._vertex_of = {}
        for v, name in leaf_labels.items():
            name = str(name)
            if not _LABEL_RE.match(name):
                raise TreeError(f"invalid taxon label {name!r}")
            if name in self._vertex_of:
                raise TreeError(f"duplicate taxon label {name!r}")
            self._label_of[int(v)] = name
            self._vertex_of[name] = int(v)
        self.n_leaves = len(leaves)
        if self.n_leaves < 2:
            raise TreeError("a tree needs at least two taxa")
        self.taxa = tuple(sorted(self._vertex_of))

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def is_leaf(self, v: int) -> bool:
        return len(self.adj[v]) == 1

    def label_of(self, v: int) -> str:
        return self._label_of[v]

    def leaf_vertex(self, label: str) -> int:
        return self._vertex_of[label]

    def __repr__(self):
        return f"UnrootedTree(n_leaves={self.n_leaves})"


class RootedTree:
    """A leaf-rooted orientation of an :class:`UnrootedTree`.

    Vertices are renumbered in depth-first preorder from the root taxon, so
    vertex 0 is the root leaf and vertex 1 is its single neighbour.  Edge
    index ``i`` denotes the parent edge of vertex ``i + 1``; edge 0 is the
    root edge.

    Attributes
    ----------
    parent, parent_len : per-vertex parent and parent-edge length (root: -1).
    child1, child2 : children in preorder; the root has one child, internal
        vertices two, leaves none (-1 marks absence).
    leaf_count : taxa in the subtree of each vertex; the root counts all n.
    small, large : for internal vertices, the child with the smaller or
        larger leaf count (ties broken by the smaller vertex index).
    leaf_order : taxon-bearing vertices in preorder (the root leaf first).
    leaf_lo, leaf_hi : half-open range of ``leaf_order`` positions covered
        by each vertex's subtree.
    taxon_idx : per-vertex index into the sorted taxon list (-1 internal).
    edge_length : per-edge length, indexed by edge index.
    edge_pendant_taxon : taxon index for pendant edges, -1 for internal
        edges.  The root edge is pendant at the root taxon.
    orig_vertex, orig_edge : mapping back to the unrooted tree's vertex ids
        and edge ids (``orig_edge[0]`` pairs with vertex ``i + 1``).
    """

    def __init__(self, unrooted: UnrootedTree, root_taxon: str):
        try:
            start = unrooted.leaf_vertex(root_taxon)
        except KeyError:
            raise TreeError(f"taxon {root_taxon!r} not present in tree") from None
        self.unrooted = unrooted
        self.rho = root_taxon
        self.taxa = unrooted.taxa
        V = unrooted.n_vertices
        n = unrooted.n_leaves
        self.n_vertices = V
        self.n_leaves = n
        self.n_edges = V - 1

        order = np.empty(V, np.int32)
        new_id = np.full(V, -1, np.int32)
        parent = np.full(V, -1, np.int32)
        parent_len = np.zeros(V, np.float64)
        orig_edge_by_vertex = np.full(V, -1, np.int32)
        adj = unrooted.adj
        edges = unrooted.edges
        stack = [(start, -1, -1, 0.0)]
        k = 0
        while stack:
            v, pv, eid, ln = stack.pop()
            order[k] = v
            new_id[v] = k
            if pv >= 0:
                parent[k] = new_id[pv]
                parent_len[k] = ln
                orig_edge_by_vertex[k] = eid
            k += 1
            for nbr, e in reversed(adj[v]):
                if nbr != pv:
                    stack.append((nbr, v, e, edges[e][2]))
        assert k == V

        child1 = np.full(V, -1, np.int32)
        child2 = np.full(V, -1, np.int32)
        for v in range(1, V):
            p = parent[v]
            if child1[p] < 0:
                child1[p] = v
            elif child2[p] < 0:
                child2[p] = v
            else:
                raise TreeError(f"vertex {order[p]} has more than two children")
        if child2[0] >= 0 or child1[0] < 0:
            raise TreeError("root leaf must have exactly one neighbour")

        tax_index = {name: i for i, name in enumerate(self.taxa)}
        taxon_idx = np.full(V, -1, np.int64)
        vertex_of_taxon = {}
        for ov, name in unrooted._label_of.items():
            taxon_idx[new_id[ov]] = tax_index[name]
            vertex_of_taxon[name] = int(new_id[ov])

        leaf_count = np.zeros(V, np.int64)
        lo = np.full(V, V + 1, np.int64)
        hi = np.zeros(V, np.int64)
        leaf_order = np.empty(n, np.int32)
        pos = 0
        for v in range(V):
            if taxon_idx[v] >= 0:
                leaf_order[pos] = v
                lo[v] = pos
                hi[v] = pos + 1
                pos += 1
        assert pos == n
        for v in range(V - 1, 0, -1):
            p = parent[v]
            if child1[v] < 0:
                leaf_count[v] = 1
            leaf_count[p] += leaf_count[v]
            if lo[v] < lo[p]:
                lo[p] = lo[v]
            if hi[v] > hi[p]:
                hi[p] = hi[v]
        leaf_count[0] += 1  # the root taxon itself

        small = np.full(V, -1, np.int32)
        large = np.full(V, -1, np.int32)
        for v in range(V):
            a, b = child1[v], child2[v]
            if b >= 0:
                if (leaf_count[a], a) <= (leaf_count[b], b):
                    small[v], large[v] = a, b
                else:
                    small[v], large[v] = b, a

        self.parent = parent
        self.parent_len = parent_len
        self.child1 = child1
        self.child2 = child2
        self.leaf_count = leaf_count
        self.small = small
        self.large = large
        self.taxon_idx = taxon_idx
        self.vertex_of_taxon = vertex_of_taxon
        self.leaf_order = leaf_order
        self.leaf_lo = lo
        self.leaf_hi = hi
        self.leaf_order_taxon = taxon_idx[leaf_order]
        self.orig_vertex = order
        self.orig_edge = orig_edge_by_vertex[1:].copy()
        self.edge_length = parent_len[1:].copy()

        pend = np.full(self.n_edges, -1, np.int64)
        for i in range(self.n_edges):
            v = i + 1
            if child1[v] < 0:
                pend[i] = taxon_idx[v]
            elif parent[v] == 0:
                pend[i] = taxon_idx[0]
        self.edge_pendant_taxon = pend

    def children(self, v: int):
        a, b = self.child1[v], self.child2[v]
        if a < 0:
            return ()
        if b < 0:
            return (int(a),)
        return (int(a), int(b))

    def is_leaf(self, v: int) -> bool:
        """Leaf in the rooted sense: no children.  The root is not a leaf."""
        return self.child1[v] < 0

    def edge_endpoints(self, i: int) -> tuple[int, int]:
        """(parent vertex, child vertex) of edge index i."""
        return int(self.parent[i + 1]), i + 1

    def vertex_degree(self, v: int) -> int:
        """Degree in the underlying unrooted tree."""
        nc = 0 if self.child1[v] < 0 else (1 if self.child2[v] < 0 else 2)
        return nc + (0 if v == 0 else 1)

    def __repr__(self):
        return f"RootedTree(rho={self.rho!r}, n_leaves={self.n_leaves})"


def root_at_taxon(tree: UnrootedTree, taxon: str) -> RootedTree:
    """Orient ``tree`` towards the leaf carrying ``taxon``."""
    return RootedTree(tree, taxon)


@dataclass(frozen=True)
class ValidatedPair:
    """Two trees on the same taxa, both rooted at the smallest taxon."""

    t1: RootedTree
    t2: RootedTree
    rho: str
    taxa: tuple[str, ...]
    n: int = field(default=0)

    def __post_init__(self):
        object.__setattr__(self, "n", len(self.taxa))


def validate_pair(t1: UnrootedTree, t2: UnrootedTree) -> ValidatedPair:
    """Check the shared-taxa precondition and root both trees.

    Both trees are rooted at the lexicographically smallest shared taxon,
    which fixes the root edge and the vertex indexing used everywhere else.
    Raises :class:`TaxonSetMismatchError` listing the unshared taxa if the
    taxon sets differ.
    """
    s1, s2 = set(t1.taxa), set(t2.taxa)
    if s1 != s2:
        raise TaxonSetMismatchError(s1 - s2, s2 - s1)
    rho = t1.taxa[0]
    return ValidatedPair(
        t1=root_at_taxon(t1, rho),
        t2=root_at_taxon(t2, rho),
        rho=rho,
        taxa=t1.taxa,
    )
