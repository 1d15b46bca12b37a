"""Balanced segment decomposition of a tree's edge set.

A *segment* is a connected set Q of edges whose boundary (vertices touching
both an edge inside Q and an edge outside) has at most two vertices; the
boundary size is the segment's *degree*.  A segment decomposition is a
binary tree T_D whose leaves are the single edges, whose nodes are all
segments, and where every internal node is the disjoint union of its two
children.  The whole edge set (boundary empty) sits at the root.

Construction is agglomerative.  Starting from singleton edges, each round
merges disjoint pairs of adjacent segments whose unions are again segments:

1. Build the contracted graph G: its vertices are the current boundary
   vertices and its edges the degree-two segments.  G is a tree of maximum
   degree three.
2. Split G into maximal paths with no interior degree-three vertex.
3. Within each path, number the vertices 1..l along it and sort the
   segments whose boundaries lie on the path by (max position, min
   position), ties by segment creation order; a degree-one segment at
   position j counts as (j, j).
4. Pair consecutive entries of each sorted list.  Every such union is a
   valid segment, and at least a quarter of the segments get paired, so
   the number of maximal segments drops geometrically and the resulting
   T_D has height O(log n) with every subtree balanced against its size.

The contracted graph is rebuilt from the boundary bookkeeping each round
rather than updated in place; the bookkeeping itself (per boundary vertex,
the count of its incident edges owned by each touching segment) is updated
per merge in constant time, and a vertex stops being a boundary vertex as
soon as a single segment owns all of its edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .trees import RootedTree

__all__ = [
    "ContractedGraph",
    "GraphPath",
    "MergeState",
    "SegDecTree",
    "BuildStats",
    "DecompositionReport",
    "decompose_paths",
    "order_segments_on_path",
    "find_merge_pairs",
    "build_segment_decomposition",
    "verify_decomposition",
    "LOCAL_BALANCE_K",
]

# 1 / ln(4/3): turns the per-round 3/4 shrink into a height-per-size bound
LOCAL_BALANCE_K = 3.4761


def ceil_log_4_3(m: int) -> int:
    """Smallest k >= 0 with (4/3)**k >= m, computed exactly."""
    k = 0
    num = 1
    den = 1
    while num < m * den:
        k += 1
        num *= 4
        den *= 3
    return k


@dataclass
class GraphPath:
    """A maximal path of the contracted graph: its vertices in walk order
    and the segment ids of the degree-two segments along it."""

    vertices: list
    segments: list


class ContractedGraph:
    """The contracted graph G: boundary vertices joined by degree-two
    segments.  Vertices are kept sorted; adjacency follows segment order."""

    def __init__(self, vertices, edges):
        self.vertices = sorted(vertices)
        self.adj = {v: [] for v in self.vertices}
        self.n_edges = 0
        for u, v, sid in edges:
            self.adj[u].append((v, sid))
            self.adj[v].append((u, sid))
            self.n_edges += 1

    def degree(self, v) -> int:
        return len(self.adj[v])


def decompose_paths(g: ContractedGraph) -> list[GraphPath]:
    """Split a tree of maximum degree three into maximal paths whose
    interior vertices all have degree two.

    Degree-three vertices end up shared between the paths they terminate;
    a one-vertex graph yields the single trivial path.  Each path is walked
    from its smaller endpoint, so the result is deterministic.
    """
    if len(g.vertices) == 1 and g.n_edges == 0:
        return [GraphPath([g.vertices[0]], [])]
    paths = []
    used = set()
    for start in g.vertices:
        if g.degree(start) == 2:
            continue
        for nbr, sid in g.adj[start]:
            if sid in used:
                continue
            verts = [start]
            segs = []
            cur, edge = nbr, sid
            while True:
                used.add(edge)
                segs.append(edge)
                verts.append(cur)
                if g.degree(cur) != 2:
                    break
                cur, edge = next(
                    (n2, s2) for n2, s2 in g.adj[cur] if s2 != edge
                )
            paths.append(GraphPath(verts, segs))
    if len(used) != g.n_edges:
        raise ValueError("contracted graph is not a tree of maximum degree 3")
    return paths


def order_segments_on_path(path_vertices, items):
    """Sort ``items`` of the form (segment id, boundary tuple) along a path.

    Boundary vertices are renumbered 1..l by their position on the path; a
    degree-one boundary (v,) counts as the doubled position (j, j).  Sort
    key: max position, then min position, then segment id (creation order).
    Consecutive entries of the result always share a boundary vertex, which
    is what makes pairing them safe.
    """
    pos = {v: i + 1 for i, v in enumerate(path_vertices)}

    def key(item):
        sid, bnd = item
        if len(bnd) == 1:
            p = pos[bnd[0]]
            return (p, p, sid)
        a, b = pos[bnd[0]], pos[bnd[1]]
        if a > b:
            a, b = b, a
        return (b, a, sid)

    return sorted(items, key=key)


class MergeState:
    """The current partition of the edge set into maximal segments.

    ``segments`` maps segment id to its sorted boundary tuple, in creation
    order.  ``vertex_segments`` maps each active boundary vertex to the
    per-segment counts of its incident edges; a vertex is dropped the
    moment a single segment owns all of them.
    """

    def __init__(self, tree: RootedTree, segments, vertex_segments):
        self.tree = tree
        self.segments = segments
        self.vertex_segments = vertex_segments

    @classmethod
    def initial_singletons(cls, tree: RootedTree) -> "MergeState":
        """One segment per edge; boundary vertices are the internal ones."""
        segments = {}
        vertex_segments = {}
        parent = tree.parent
        for e in range(tree.n_edges):
            p, c = int(parent[e + 1]), e + 1
            bnd = []
            for v in (p, c):
                if tree.vertex_degree(v) >= 2:
                    bnd.append(v)
                    vertex_segments.setdefault(v, {})[e] = 1
            segments[e] = tuple(sorted(bnd))
        return cls(tree, segments, vertex_segments)

    @classmethod
    def from_partition(cls, tree: RootedTree, blocks) -> "MergeState":
        """Build a state from explicit edge-index blocks (mainly for tests).

        Validates that the blocks partition the edge set and that each one
        is a segment: connected with boundary of size at most two.
        """
        seen = set()
        segments = {}
        vertex_segments = {}
        parent = tree.parent
        for sid, block in enumerate(blocks):
            block = sorted(block)
            touched = {}
            for e in block:
                if e in seen:
                    raise ValueError(f"edge {e} appears in two blocks")
                seen.add(e)
                for v in (int(parent[e + 1]), e + 1):
                    touched[v] = touched.get(v, 0) + 1
            if len(touched) != len(block) + 1:
                raise ValueError(f"block {sid} is not connected")
            bnd = []
            for v, cnt in touched.items():
                if cnt < tree.vertex_degree(v):
                    bnd.append(v)
                    vertex_segments.setdefault(v, {})[sid] = cnt
            if len(bnd) > 2:
                raise ValueError(f"block {sid} has boundary of size {len(bnd)}")
            segments[sid] = tuple(sorted(bnd))
        if len(seen) != tree.n_edges:
            raise ValueError("blocks do not cover the whole edge set")
        return cls(tree, segments, vertex_segments)

    def contracted_graph(self) -> ContractedGraph:
        edges = [
            (bnd[0], bnd[1], sid)
            for sid, bnd in self.segments.items()
            if len(bnd) == 2
        ]
        return ContractedGraph(self.vertex_segments.keys(), edges)

    def merge(self, a: int, b: int, new_sid: int) -> tuple:
        """Union segments a and b under the id ``new_sid``; returns the new
        boundary.  Constant time: only the up-to-four boundary vertices of
        the two segments are touched."""
        affected = set(self.segments[a]) | set(self.segments[b])
        for v in affected:
            segs = self.vertex_segments[v]
            cnt = segs.pop(a, 0) + segs.pop(b, 0)
            segs[new_sid] = cnt
            if len(segs) == 1:
                del self.vertex_segments[v]
        new_bnd = tuple(sorted(v for v in affected if v in self.vertex_segments))
        assert len(new_bnd) <= 2, "merged pair is not a segment"
        del self.segments[a]
        del self.segments[b]
        self.segments[new_sid] = new_bnd
        return new_bnd


def find_merge_pairs(state: MergeState) -> list[tuple[int, int]]:
    """One round of pairing: the disjoint segment pairs to merge, each in
    sorted-path order, across all maximal paths of the contracted graph."""
    if len(state.segments) < 2:
        return []
    g = state.contracted_graph()
    paths = decompose_paths(g)
    vertex_path = {}
    seg_path = {}
    for i, p in enumerate(paths):
        for v in p.vertices:
            if g.degree(v) <= 2:
                vertex_path[v] = i
        for sid in p.segments:
            seg_path[sid] = i
    per_path: list[list] = [[] for _ in paths]
    for sid, bnd in state.segments.items():
        if len(bnd) == 2:
            per_path[seg_path[sid]].append((sid, bnd))
        else:
            # a degree-one segment's vertex never has contracted degree 3,
            # so it lies on exactly one path
            per_path[vertex_path[bnd[0]]].append((sid, bnd))
    pairs = []
    for i, items in enumerate(per_path):
        ordered = order_segments_on_path(paths[i].vertices, items)
        for j in range(0, len(ordered) - 1, 2):
            pairs.append((ordered[j][0], ordered[j + 1][0]))
    return pairs


@dataclass
class BuildStats:
    """Per-round sizes and pair counts from the agglomerative build."""

    sizes: list[int] = field(default_factory=list)
    pairs: list[int] = field(default_factory=list)

    @property
    def n_rounds(self) -> int:
        return len(self.sizes)

    @property
    def total_work(self) -> int:
        return sum(self.sizes)


class SegDecTree:
    """Array-backed segment decomposition tree.

    Nodes are numbered in creation order: leaves 0..M-1 coincide with the
    edge indices of the underlying tree, merged nodes follow, the root is
    the last node.  Children therefore always have smaller ids than their
    parent, so a scan by ascending id is a valid bottom-up order.
    """

    def __init__(self, tree, left, right, parent, node_edge, bnd1, bnd2,
                 q_count, stats):
        self.tree = tree
        self.n_nodes = len(left)
        self.n_edges = tree.n_edges
        self.left = np.asarray(left, np.int32)
        self.right = np.asarray(right, np.int32)
        self.parent = np.asarray(parent, np.int32)
        self.node_edge = np.asarray(node_edge, np.int32)
        self.bnd1 = np.asarray(bnd1, np.int32)
        self.bnd2 = np.asarray(bnd2, np.int32)
        self.q_count = np.asarray(q_count, np.int32)
        self.build_stats = stats
        self.root = self.n_nodes - 1

        depth = np.zeros(self.n_nodes, np.int32)
        for v in range(self.n_nodes - 2, -1, -1):
            depth[v] = depth[self.parent[v]] + 1
        self.depth = depth
        node_height = np.zeros(self.n_nodes, np.int32)
        for v in range(self.n_nodes):
            if self.left[v] >= 0:
                node_height[v] = 1 + max(
                    node_height[self.left[v]], node_height[self.right[v]]
                )
        self.node_height = node_height
        self.height = int(node_height[self.root])

    def degree(self, v: int) -> int:
        return int(self.bnd1[v] >= 0) + int(self.bnd2[v] >= 0)

    def boundary(self, v: int) -> tuple:
        out = []
        if self.bnd1[v] >= 0:
            out.append(int(self.bnd1[v]))
        if self.bnd2[v] >= 0:
            out.append(int(self.bnd2[v]))
        return tuple(out)

    def is_leaf(self, v: int) -> bool:
        return self.left[v] < 0

    def edges_of(self, v: int) -> list[int]:
        """Edge indices of the node's segment, collected from its leaves."""
        out = []
        stack = [v]
        while stack:
            u = stack.pop()
            if self.left[u] < 0:
                out.append(int(self.node_edge[u]))
            else:
                stack.append(int(self.right[u]))
                stack.append(int(self.left[u]))
        return out

    def dump(self) -> str:
        """Indented text form for golden-file comparison."""
        lines = []
        stack = [(self.root, 0)]
        while stack:
            v, ind = stack.pop()
            bnd = ",".join(str(b) for b in self.boundary(v))
            lines.append(
                f"{'  ' * ind}node {v} deg={self.degree(v)} "
                f"bnd=({bnd}) q={int(self.q_count[v])}"
            )
            if self.left[v] >= 0:
                stack.append((int(self.right[v]), ind + 1))
                stack.append((int(self.left[v]), ind + 1))
        return "\n".join(lines)


def build_segment_decomposition(tree: RootedTree) -> SegDecTree:
    """Agglomerative construction; see the module docstring.

    Asserts the contraction invariants as it goes: at least ceil(m/4) pairs
    per round, the maximal-segment count dropping to at most floor(3m/4)+1,
    and total work (sum of round sizes) at most 4 times the edge count.
    """
    M = tree.n_edges
    state = MergeState.initial_singletons(tree)
    left = [-1] * M
    right = [-1] * M
    node_edge = list(range(M))
    bnds = [state.segments[e] for e in range(M)]
    q_count = [1] * M
    stats = BuildStats()
    next_id = M
    while len(state.segments) > 1:
        m_before = len(state.segments)
        pairs = find_merge_pairs(state)
        assert len(pairs) >= -(-m_before // 4), "pairing round below m/4"
        for a, b in pairs:
            nid = next_id
            next_id += 1
            bnds.append(state.merge(a, b, nid))
            left.append(a)
            right.append(b)
            node_edge.append(-1)
            q_count.append(q_count[a] + q_count[b])
        m_after = len(state.segments)
        assert m_after <= (3 * m_before) // 4 + 1, "round shrank too little"
        stats.sizes.append(m_before)
        stats.pairs.append(len(pairs))
    assert stats.total_work <= 4 * M, "construction work exceeds 4|E|"

    n_nodes = len(left)
    assert n_nodes == 2 * M - 1
    assert bnds[-1] == (), "root segment must have empty boundary"
    parent = [-1] * n_nodes
    for v in range(n_nodes):
        if left[v] >= 0:
            parent[left[v]] = v
            parent[right[v]] = v
    bnd1 = [b[0] if len(b) >= 1 else -1 for b in bnds]
    bnd2 = [b[1] if len(b) == 2 else -1 for b in bnds]
    return SegDecTree(tree, left, right, parent, node_edge, bnd1, bnd2,
                      q_count, stats)


@dataclass
class DecompositionReport:
    """Outcome of ``verify_decomposition``: ok, or the first violation."""

    ok: bool
    failure: str | None = None


def verify_decomposition(td: SegDecTree, tree: RootedTree) -> DecompositionReport:
    """Re-check every decomposition property from scratch.

    Walks the claimed T_D bottom-up rebuilding each node's edge set, and
    verifies: the leaf/edge bijection, disjoint child unions, connectivity
    and boundary of every segment (recomputed, compared to the stored
    ordered boundary), the empty-boundary root with degree-one children,
    the global height bound ceil(log_{4/3} |E|), and per-node balance
    height(v) <= K * (1 + log2 |Q_v|) with K = 1/ln(4/3).
    """

    def fail(msg):
        return DecompositionReport(ok=False, failure=msg)

    M = tree.n_edges
    if td.n_nodes != 2 * M - 1:
        return fail(f"{td.n_nodes} nodes for {M} edges; expected {2 * M - 1}")
    leaves = [v for v in range(td.n_nodes) if td.left[v] < 0]
    if sorted(int(td.node_edge[v]) for v in leaves) != list(range(M)):
        return fail("leaves are not a bijection onto the edge set")
    roots = [v for v in range(td.n_nodes) if td.parent[v] < 0]
    if roots != [td.root]:
        return fail(f"expected a single root, found {roots}")

    parent_v = tree.parent
    deg = [tree.vertex_degree(v) for v in range(tree.n_vertices)]
    edge_sets: list[np.ndarray | None] = [None] * td.n_nodes
    for v in range(td.n_nodes):
        l, r = int(td.left[v]), int(td.right[v])
        if l < 0:
            edges = np.array([td.node_edge[v]], np.int64)
        else:
            if not (l < v and r < v):
                return fail(f"node {v} has a child with a larger id")
            edges = np.concatenate((edge_sets[l], edge_sets[r]))
            edges.sort()
            if len(np.unique(edges)) != len(edges):
                return fail(f"node {v}: children overlap (not a disjoint union)")
        edge_sets[v] = edges
        if int(td.q_count[v]) != len(edges):
            return fail(f"node {v}: stored size {int(td.q_count[v])} != {len(edges)}")
        touched: dict[int, int] = {}
        for e in edges:
            for w in (int(parent_v[e + 1]), int(e + 1)):
                touched[w] = touched.get(w, 0) + 1
        if len(touched) != len(edges) + 1:
            return fail(f"node {v}: segment is not connected")
        bnd = sorted(w for w, cnt in touched.items() if cnt < deg[w])
        if len(bnd) > 2:
            return fail(f"node {v}: boundary has {len(bnd)} vertices")
        if td.boundary(v) != tuple(bnd):
            return fail(
                f"node {v}: stored boundary {td.boundary(v)} != {tuple(bnd)}"
            )

    if td.boundary(td.root) != ():
        return fail("root boundary is not empty")
    if M >= 2:
        for c in (int(td.left[td.root]), int(td.right[td.root])):
            if td.degree(c) != 1:
                return fail(f"root child {c} has degree {td.degree(c)}")

    bound = ceil_log_4_3(M)
    if td.height > bound:
        return fail(f"height {td.height} exceeds ceil(log_4/3 {M}) = {bound}")
    for v in range(td.n_nodes):
        m = int(td.q_count[v])
        limit = LOCAL_BALANCE_K * (1.0 + math.log2(m))
        if td.node_height[v] > limit + 1e-9:
            return fail(
                f"node {v}: height {int(td.node_height[v])} over balance "
                f"limit {limit:.3f} for {m} edges"
            )
    return DecompositionReport(ok=True)
