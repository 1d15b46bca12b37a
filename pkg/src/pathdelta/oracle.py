"""Brute-force reference implementations and a portable tree generator.

Everything here is deliberately simple and quadratic: distances come from
one depth-first traversal per leaf and the inner-product and pair counts
are evaluated straight from their definitions.  The fast pipeline is tested
against this module, so nothing in here may share code with it.

Seeded tree generator
---------------------
``random_binary_tree`` must reproduce identical trees from the same seed in
any implementation language, so it avoids Python's ``random`` and uses an
explicit 64-bit linear congruential generator (Knuth's MMIX constants):

    state <- (6364136223846793005 * state + 1442695040888963407) mod 2**64

Draws consume one step each.  ``below(k)`` scales the top 32 bits:
``((state >> 32) * k) >> 32``.  ``unit()`` is ``(state >> 11) / 2**53``.

Growth process: start with taxa T1, T2 joined by an edge; for i = 3..n pick
an edge uniformly with ``below(len(edges))``, subdivide it, and attach leaf
Ti to the new vertex.  The split keeps the lower half of the old edge in
place and appends the upper half and the new pendant edge, in that order.
After the topology is complete each edge in list order receives a length:
``below(9)`` (0..8) in "int" mode or ``unit()`` in "real" mode.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .trees import UnrootedTree

__all__ = [
    "Lcg",
    "PathLengthMatrix",
    "all_pairs_path_lengths",
    "delta_bruteforce",
    "squared_paths_bruteforce",
    "inner_product_bruteforce",
    "chi_tilde_bruteforce",
    "random_binary_tree",
]

_MASK = (1 << 64) - 1
_MUL = 6364136223846793005
_ADD = 1442695040888963407


class Lcg:
    """The documented 64-bit linear congruential generator."""

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (_MUL * self.state + _ADD) & _MASK
        return self.state

    def below(self, k: int) -> int:
        """Uniform integer in [0, k) from the top 32 bits."""
        return ((self.next_u64() >> 32) * k) >> 32

    def unit(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) / 9007199254740992.0


def random_binary_tree(n: int, seed: int, lengths: str = "int") -> UnrootedTree:
    """Deterministic random tree on taxa T1..Tn; see the module docstring.

    ``lengths`` is "int" for integer lengths 0..8 or "real" for uniform
    [0, 1) lengths.
    """
    if n < 2:
        raise ValueError("need at least two taxa")
    if lengths not in ("int", "real"):
        raise ValueError(f"unknown length mode {lengths!r}")
    rng = Lcg(seed)
    edges = [(0, 1)]
    labels = {0: "T1", 1: "T2"}
    next_vertex = 2
    for i in range(3, n + 1):
        j = rng.below(len(edges))
        a, b = edges[j]
        mid = next_vertex
        leaf = next_vertex + 1
        next_vertex += 2
        edges[j] = (a, mid)
        edges.append((mid, b))
        edges.append((mid, leaf))
        labels[leaf] = f"T{i}"
    if lengths == "int":
        weighted = [(u, v, float(rng.below(9))) for u, v in edges]
    else:
        weighted = [(u, v, rng.unit()) for u, v in edges]
    return UnrootedTree(weighted, labels)


@dataclass
class PathLengthMatrix:
    """All leaf-to-leaf path lengths, indexed by sorted taxon order."""

    taxa: tuple[str, ...]
    matrix: np.ndarray

    def get(self, a: str, b: str) -> float:
        i = self.taxa.index(a)
        j = self.taxa.index(b)
        return float(self.matrix[i, j])


def _row_from_leaf(tree: UnrootedTree, start: int, dist: list) -> None:
    """Fill dist (per vertex) with path lengths from ``start`` by DFS."""
    for v in range(tree.n_vertices):
        dist[v] = -1.0
    dist[start] = 0.0
    stack = [start]
    adj = tree.adj
    edges = tree.edges
    while stack:
        v = stack.pop()
        dv = dist[v]
        for nbr, e in adj[v]:
            if dist[nbr] < 0:
                dist[nbr] = dv + edges[e][2]
                stack.append(nbr)


def all_pairs_path_lengths(tree: UnrootedTree) -> PathLengthMatrix:
    """Complete distance matrix via one depth-first traversal per leaf."""
    taxa = tree.taxa
    n = len(taxa)
    leaf_vs = [tree.leaf_vertex(t) for t in taxa]
    mat = np.zeros((n, n), np.float64)
    dist = [0.0] * tree.n_vertices
    for i, lv in enumerate(leaf_vs):
        _row_from_leaf(tree, lv, dist)
        for j, other in enumerate(leaf_vs):
            mat[i, j] = dist[other]
    return PathLengthMatrix(taxa=taxa, matrix=mat)


def _paired_rows(t1: UnrootedTree, t2: UnrootedTree):
    """Yield matching per-taxon distance rows of both trees as arrays."""
    taxa = t1.taxa
    if taxa != t2.taxa:
        raise ValueError("trees must share the same taxa")
    leaf1 = [t1.leaf_vertex(t) for t in taxa]
    leaf2 = [t2.leaf_vertex(t) for t in taxa]
    d1 = [0.0] * t1.n_vertices
    d2 = [0.0] * t2.n_vertices
    for i in range(len(taxa)):
        _row_from_leaf(t1, leaf1[i], d1)
        _row_from_leaf(t2, leaf2[i], d2)
        p = np.array([d1[v] for v in leaf1], np.float64)
        q = np.array([d2[v] for v in leaf2], np.float64)
        yield p, q


def delta_bruteforce(t1: UnrootedTree, t2: UnrootedTree) -> float:
    """Sum of (p_ij - q_ij)**2 over unordered taxon pairs.

    Evaluated row by row so the full n x n matrices never need to be held
    in memory at once; each unordered pair is seen twice, hence the final
    halving (exact, as 2 is a power of two).
    """
    total = 0.0
    for p, q in _paired_rows(t1, t2):
        d = p - q
        total += float(d @ d)
    return total / 2.0


def squared_paths_bruteforce(tree: UnrootedTree) -> float:
    """Sum of squared leaf-to-leaf path lengths, from the distance rows."""
    total = 0.0
    taxa = tree.taxa
    leaf_vs = [tree.leaf_vertex(t) for t in taxa]
    dist = [0.0] * tree.n_vertices
    for lv in leaf_vs:
        _row_from_leaf(tree, lv, dist)
        row = np.array([dist[v] for v in leaf_vs], np.float64)
        total += float(row @ row)
    return total / 2.0


def inner_product_bruteforce(t1: UnrootedTree, t2: UnrootedTree) -> float:
    """Sum of p_ij * q_ij over unordered taxon pairs."""
    total = 0.0
    for p, q in _paired_rows(t1, t2):
        total += float(p @ q)
    return total / 2.0


def chi_tilde_bruteforce(tree: UnrootedTree, colouring, edge_id: int) -> int:
    """Count taxon pairs that are bichromatic and separated by ``edge_id``.

    The edge splits the taxa in two; a pair is counted when its members sit
    on opposite sides and carry opposite colours.  Exact integer count.
    """
    u, v, _ = tree.edges[edge_id]
    side = [False] * tree.n_vertices
    side[u] = True
    stack = [u]
    while stack:
        w = stack.pop()
        for nbr, e in tree.adj[w]:
            if e != edge_id and not side[nbr]:
                side[nbr] = True
                stack.append(nbr)
    black_in = white_in = black_out = white_out = 0
    for t in tree.taxa:
        black = colouring.colour_of(t) == 1
        if side[tree.leaf_vertex(t)]:
            black_in += black
            white_in += not black
        else:
            black_out += black
            white_out += not black
    return black_in * white_out + white_in * black_out
