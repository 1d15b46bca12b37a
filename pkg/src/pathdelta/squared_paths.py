"""Sum of squared leaf-to-leaf path lengths in linear time.

Root the tree at a taxon and write x_e for the length of edge e and n(e)
for the number of leaves below e.  Let alpha(e) accumulate n(e') * x_e'
over every edge e' on or below e:

    external edge (child is a leaf):  n(e) = 1,  alpha(e) = x_e
    internal edge:  n(e) = n(eL) + n(eR),
                    alpha(e) = alpha(eL) + alpha(eR) + n(e) * x_e

Each unordered leaf pair {i, j} contributes (sum of edge lengths on the
i-j path) squared.  Grouping the cross terms x_e * x_e' by the higher of
the two edges gives a closed form over single edges:

    total = sum over all edges of  x_e * (n - n(e)) * (2*alpha(e) - n(e)*x_e)
          + sum over internal edges of  2 * alpha(eL) * alpha(eR)

The first term covers pairs whose connecting path runs through e with one
endpoint below e (the pair count for the x_e * x_e' product with e' on or
below e is n(e') * (n - n(e))); the second covers pairs whose path tops out
at e's child vertex, one endpoint under each child.  The root taxon takes
part like any other leaf: its pairs are exactly those routed through the
root edge, where n(root edge) = n - 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .trees import RootedTree

__all__ = ["EdgeStats", "compute_edge_stats", "sum_squared_paths"]


@dataclass
class EdgeStats:
    """Per-edge subtree statistics, indexed by edge index.

    ``leaf_count[i]`` is n(e) and ``alpha[i]`` the weighted partial sum
    alpha(e) for edge index i (the parent edge of vertex i + 1).
    """

    leaf_count: np.ndarray
    alpha: np.ndarray


def compute_edge_stats(tree: RootedTree) -> EdgeStats:
    """Bottom-up pass computing n(e) and alpha(e) for every edge."""
    V = tree.n_vertices
    n_e = np.zeros(V, np.int64)
    alpha = np.zeros(V, np.float64)
    child1 = tree.child1
    child2 = tree.child2
    x = tree.parent_len
    # vertices are numbered in preorder, so a reverse scan is bottom-up
    for v in range(V - 1, 0, -1):
        a, b = child1[v], child2[v]
        if a < 0:
            n_e[v] = 1
            alpha[v] = x[v]
        else:
            n_e[v] = n_e[a] + n_e[b]
            alpha[v] = alpha[a] + alpha[b] + n_e[v] * x[v]
    return EdgeStats(leaf_count=n_e[1:].copy(), alpha=alpha[1:].copy())


def sum_squared_paths(tree: RootedTree, stats: EdgeStats | None = None) -> float:
    """Sum of squared pairwise path lengths over all unordered taxon pairs."""
    if stats is None:
        stats = compute_edge_stats(tree)
    n = tree.n_leaves
    n_e = stats.leaf_count
    alpha = stats.alpha
    x = tree.edge_length
    child1 = tree.child1
    child2 = tree.child2
    total = 0.0
    for i in range(tree.n_edges):
        total += x[i] * (n - n_e[i]) * (2.0 * alpha[i] - n_e[i] * x[i])
        a = child1[i + 1]
        if a >= 0:
            b = child2[i + 1]
            total += 2.0 * alpha[a - 1] * alpha[b - 1]
    return total
