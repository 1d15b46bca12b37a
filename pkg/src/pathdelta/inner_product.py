"""Inner product of squared-path expansions: sum over taxon pairs of
p_ij * q_ij, in near-linear time.

The quadratic-looking double sum factors over edges: with x_e the first
tree's lengths, y_f the second's, and chi(c_e, f) the number of taxon
pairs separated by both e and f with opposite colours under the bipartition
c_e induced by e, the inner product is sum_e x_e * sum_f y_f * chi(c_e, f).
The inner sum is what the decorated decomposition tree evaluates at its
root in O(1); walking the first tree while recolouring leaves keeps the
decoration in sync with c_e for the edge currently visited.

The traversal (over the first tree, rooted at the shared root taxon) keeps
this invariant: on entry to a vertex u, the black taxa are exactly those
outside u's subtree, which is the bipartition of u's parent edge.  After
accumulating, the smaller child's subtree is painted black, the larger
child is traversed, the smaller child's subtree is painted white again and
traversed in turn.  Painting the smaller side first is what bounds the
total number of leaf repaints by O(n log n).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .segments import SegDecTree, build_segment_decomposition
from .trees import TreeError, ValidatedPair

__all__ = [
    "BLACK",
    "WHITE",
    "Colouring",
    "DecoratedTD",
    "decorate",
    "SumStats",
    "compute_inner_product",
    "inner_product_sum",
]

BLACK = 1
WHITE = 0


class Colouring:
    """Black/white assignment over a sorted taxon tuple.

    Backed by a uint8 array indexed by position in the sorted taxon order,
    which is the shared index space of both rooted trees.
    """

    def __init__(self, taxa, black=()):
        self.taxa = tuple(taxa)
        self._index = {t: i for i, t in enumerate(self.taxa)}
        self.colours = np.zeros(len(self.taxa), np.uint8)
        for t in black:
            self.colours[self._index[t]] = BLACK

    def colour_of(self, taxon: str) -> int:
        return int(self.colours[self._index[taxon]])

    def set_colour(self, taxon: str, colour: int) -> None:
        self.colours[self._index[taxon]] = colour

    @property
    def n_black(self) -> int:
        return int(self.colours.sum())

    @property
    def n_white(self) -> int:
        return len(self.taxa) - self.n_black

    def __repr__(self):
        return f"Colouring(n={len(self.taxa)}, black={self.n_black})"


class DecoratedTD:
    """A segment decomposition decorated for one mutable colouring.

    Per non-root node: incident black/white leaf counts and the outside
    polynomial (see ``_kernels``).  The object owns its colour array;
    recolouring updates exactly the nodes whose subtree gained or lost a
    flipped leaf, children before parents.
    """

    def __init__(self, td: SegDecTree, colouring: Colouring):
        tree = td.tree
        if td.n_edges < 2:
            raise TreeError("decoration needs a tree with at least 3 taxa")
        if tuple(colouring.taxa) != tree.taxa:
            raise TreeError("colouring is over a different taxon set")
        self.td = td
        self.n_taxa = len(colouring.taxa)
        self.colour = colouring.colours.copy()

        mask, sib, bad = _kernels.build_recipes(
            td.left, td.right, td.bnd1, td.bnd2
        )
        if bad >= 0:
            raise AssertionError(
                f"decomposition node {bad} violates the merge structure"
            )
        self._mask = mask
        self._sib = sib

        taxon_leaf = np.full(self.n_taxa, -1, np.int32)
        pend = tree.edge_pendant_taxon
        for i in range(td.n_edges):
            if pend[i] >= 0:
                taxon_leaf[pend[i]] = i
        assert int((taxon_leaf < 0).sum()) == 0
        self.taxon_leaf = taxon_leaf

        self._edge_len = np.ascontiguousarray(tree.edge_length, np.float64)
        self._pend = np.ascontiguousarray(pend, np.int64)
        self.b = np.zeros(td.n_nodes, np.int64)
        self.w = np.zeros(td.n_nodes, np.int64)
        self.phi = np.zeros((td.n_nodes, _kernels.N_COEF), np.float64)
        self._mark = np.zeros(td.n_nodes, np.int64)
        self._buf = np.zeros(td.n_nodes, np.int64)
        self._epoch = 0
        _kernels.decorate_all(
            td.n_edges, td.left, td.right, mask, sib,
            self._edge_len, self._pend, self.colour, self.b, self.w, self.phi,
        )

    def eval_root(self) -> float:
        """Sum over the second tree's edges of y_f * chi(c, f)."""
        return float(
            _kernels.eval_root(self.td.left, self.td.right,
                               self.b, self.w, self.phi)
        )

    def recolour(self, taxon_indices, colour: int) -> int:
        """Paint the given taxon indices; returns recomputed node count."""
        self._epoch += 1
        td = self.td
        touched, _ = _kernels.recolour_taxa(
            np.ascontiguousarray(taxon_indices, np.int64), colour,
            self.colour, self.taxon_leaf, td.parent, td.n_edges,
            self._mark, self._epoch, self._buf, td.left, td.right,
            self._mask, self._sib, self._edge_len, self._pend,
            self.b, self.w, self.phi,
        )
        return int(touched)

    def recolour_names(self, taxa, colour: int) -> int:
        """Recolour by taxon name (raises on unknown names)."""
        order = {t: i for i, t in enumerate(self.td.tree.taxa)}
        try:
            idx = np.array([order[t] for t in taxa], np.int64)
        except KeyError as e:
            raise TreeError(f"unknown taxon {e.args[0]!r}") from None
        return self.recolour(idx, colour)

    def phi_row(self, v: int) -> np.ndarray:
        return self.phi[v].copy()

    def eval_phi(self, v: int, args) -> float:
        """Evaluate node v's polynomial at explicit outside counts."""
        z = np.zeros(4, np.float64)
        for i, a in enumerate(args):
            z[i] = a
        return float(_kernels.eval_poly(self.phi[v], z))


def decorate(td: SegDecTree, colouring: Colouring) -> DecoratedTD:
    """Decorate ``td`` for ``colouring``; the colouring is copied in."""
    return DecoratedTD(td, colouring)


@dataclass
class SumStats:
    """Instrumentation from one full traversal."""

    touched_nodes: int = 0
    recolour_calls: int = 0
    leaf_recolourings: int = 0
    eval_calls: int = 0


def compute_inner_product(
    pair: ValidatedPair, check_invariants: bool = False,
    td: SegDecTree | None = None,
) -> tuple[float, SumStats]:
    """Inner product of the pair plus traversal statistics.

    ``check_invariants`` re-derives the expected black set from scratch at
    every step (quadratic; meant for tests).  A prebuilt decomposition of
    the pair's second tree may be passed to skip rebuilding it.
    """
    if pair.n < 3:
        raise ValueError("inner product traversal needs at least 3 taxa")
    t1, t2 = pair.t1, pair.t2
    if td is None:
        td = build_segment_decomposition(t2)
    col = Colouring(pair.taxa, black=(pair.rho,))
    d = DecoratedTD(td, col)
    stats = SumStats()

    x = t1.edge_length
    taxa_in_order = np.ascontiguousarray(t1.leaf_order_taxon, np.int64)
    lo, hi = t1.leaf_lo, t1.leaf_hi
    small, large = t1.small, t1.large
    n = pair.n

    def paint(v, colour):
        touched = d.recolour(taxa_in_order[lo[v]:hi[v]], colour)
        stats.touched_nodes += touched
        stats.recolour_calls += 1
        stats.leaf_recolourings += int(hi[v] - lo[v])

    def assert_entry_invariant(u):
        # black = complement of u's subtree, derived independently
        want = np.ones(n, bool)
        want[taxa_in_order[lo[u]:hi[u]]] = False
        got = d.colour.astype(bool)
        if not np.array_equal(got, want):
            raise AssertionError(
                f"traversal invariant broken entering vertex {u}"
            )

    acc = 0.0
    # phase 0: first visit; phase 1: large child finished
    stack = [(1, 0)]
    while stack:
        u, phase = stack.pop()
        if phase == 0:
            if check_invariants:
                assert_entry_invariant(u)
            acc += x[u - 1] * d.eval_root()
            stats.eval_calls += 1
            if t1.child1[u] < 0:
                paint(u, BLACK)
                continue
            s = small[u]
            paint(s, BLACK)
            stack.append((u, 1))
            stack.append((int(large[u]), 0))
        else:
            s = small[u]
            paint(s, WHITE)
            stack.append((int(s), 0))
    if check_invariants and int(d.colour.sum()) != n:
        raise AssertionError("not all taxa black after the traversal")
    return acc, stats


def inner_product_sum(pair: ValidatedPair) -> float:
    """Just the inner product value."""
    return compute_inner_product(pair)[0]
