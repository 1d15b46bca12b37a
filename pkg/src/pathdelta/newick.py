"""Strict Newick reader and writer for binary unrooted trees.

Dialect
-------
``tree := group ';'`` where the top-level ``group`` has two or three
children and every inner group exactly two.  Each child is either a leaf
``label:length`` or a nested group ``( .. , .. )label?:length``.  Labels are
drawn from ``[A-Za-z0-9_.-]``; internal node labels are tolerated and
dropped.  Quoted labels and ``[...]`` comments are outside the dialect and
rejected.  Whitespace (including newlines) is allowed between tokens.

Every branch must carry an explicit ``:length`` unless ``topology_only`` is
set, in which case every length is replaced by 1.0.  Lengths must be finite
and non-negative.  A length on the top-level group is rejected: the root of
an unrooted tree has no branch.

A top-level bifurcation is read as a rooted binary tree and unrooted by
suppressing the root: the two root branches are joined into one edge whose
length is their sum.  A top-level trifurcation is already unrooted and is
taken as-is.  ``write_newick`` always emits the trifurcation form (for two
taxa, the bifurcation ``(A:x,B:0);`` with the whole edge length on the
lexicographically smaller taxon), so parse(write(t)) reproduces t exactly.
"""

from __future__ import annotations

from .trees import TreeError, UnrootedTree
from ._text import format_number

__all__ = ["NewickParseError", "parse_newick", "write_newick"]

_LABEL_CHARS = frozenset(
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_.-"
)
_NUMBER_CHARS = frozenset("0123456789.eE+-")
_WS = frozenset(" \t\r\n")


class NewickParseError(ValueError):
    """Syntax or dialect violation, with the 0-based character position."""

    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} (at position {position})")


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        t, i = self.text, self.pos
        while i < len(t) and t[i] in _WS:
            i += 1
        self.pos = i

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str):
        if self.peek() != ch:
            got = self.peek() or "end of input"
            raise NewickParseError(f"expected {ch!r}, found {got!r}", self.pos)
        self.pos += 1

    def take_label(self) -> str:
        self.skip_ws()
        t, i = self.text, self.pos
        j = i
        while j < len(t) and t[j] in _LABEL_CHARS:
            j += 1
        if j == i:
            got = t[i] if i < len(t) else "end of input"
            raise NewickParseError(f"expected a label, found {got!r}", i)
        self.pos = j
        return t[i:j]

    def take_length(self) -> float:
        self.skip_ws()
        t, i = self.text, self.pos
        j = i
        while j < len(t) and t[j] in _NUMBER_CHARS:
            j += 1
        if j == i:
            raise NewickParseError("expected a branch length", i)
        try:
            x = float(t[i:j])
        except ValueError:
            raise NewickParseError(f"bad branch length {t[i:j]!r}", i) from None
        if x != x or x in (float("inf"), float("-inf")):
            raise NewickParseError(f"non-finite branch length {t[i:j]!r}", i)
        if x < 0:
            raise NewickParseError(f"negative branch length {t[i:j]!r}", i)
        self.pos = j
        return x


def parse_newick(text: str, topology_only: bool = False) -> UnrootedTree:
    """Parse one Newick tree into an :class:`UnrootedTree`.

    With ``topology_only`` every branch length becomes 1.0 whether or not
    the input spelled one out.  Structural validation (binary degrees,
    unique labels, and so on) happens in the ``UnrootedTree`` constructor
    and surfaces as :class:`TreeError`.
    """
    sc = _Scanner(text)
    edges: list[tuple[int, int, float]] = []
    labels: dict[int, str] = {}
    seen_labels: set[str] = set()
    next_vertex = 0

    sc.take("(")
    root = next_vertex
    next_vertex += 1
    # stack frames: [vertex id, children seen so far]
    stack: list[list[int]] = [[root, 0]]
    while stack:
        ch = sc.peek()
        if ch == "(":
            sc.take("(")
            v = next_vertex
            next_vertex += 1
            stack.append([v, 0])
            continue
        if ch in (")", ","):
            raise NewickParseError("empty subtree", sc.pos)
        # leaf: label, then its branch length
        at = sc.pos
        name = sc.take_label()
        if name in seen_labels:
            raise NewickParseError(f"duplicate taxon label {name!r}", at)
        seen_labels.add(name)
        v = next_vertex
        next_vertex += 1
        labels[v] = name
        edges.append((stack[-1][0], v, _branch_length(sc, topology_only)))
        stack[-1][1] += 1
        # close as many groups as the punctuation ends
        while True:
            ch = sc.peek()
            if ch == ",":
                sc.take(",")
                break
            if ch != ")":
                got = ch or "end of input"
                raise NewickParseError(f"expected ',' or ')', found {got!r}", sc.pos)
            sc.take(")")
            v, nchild = stack.pop()
            if sc.peek() in _LABEL_CHARS:
                sc.take_label()  # internal node label: tolerated, dropped
            if not stack:
                if nchild not in (2, 3):
                    raise NewickParseError(
                        f"top-level node has {nchild} children; expected 2 or 3",
                        sc.pos,
                    )
                if sc.peek() == ":":
                    raise NewickParseError(
                        "branch length on the top-level node", sc.pos
                    )
                sc.take(";")
                sc.skip_ws()
                if sc.pos != len(sc.text):
                    raise NewickParseError("trailing content after ';'", sc.pos)
                if nchild == 2:
                    edges = _suppress_root(edges, labels, root)
                return UnrootedTree(edges, labels)
            if nchild != 2:
                raise NewickParseError(
                    f"inner node has {nchild} children; expected 2 "
                    "(input tree is not binary)",
                    sc.pos,
                )
            edges.append((stack[-1][0], v, _branch_length(sc, topology_only)))
            stack[-1][1] += 1
    raise NewickParseError("unbalanced parentheses", sc.pos)  # pragma: no cover


def _branch_length(sc: _Scanner, topology_only: bool) -> float:
    if sc.peek() == ":":
        sc.take(":")
        x = sc.take_length()
        return 1.0 if topology_only else x
    if topology_only:
        return 1.0
    raise NewickParseError("missing ':length' on branch", sc.pos)


def _suppress_root(edges, labels, root):
    """Replace a degree-two root by one edge joining its two neighbours.

    The new edge length is the sum of the two root branches, preserving all
    leaf-to-leaf path lengths.  Vertex ids above the removed root shift down
    by one so the id range stays contiguous.
    """
    ab = [(v if u == root else u, x) for u, v, x in edges if root in (u, v)]
    (a, xa), (b, xb) = ab
    out = [(u, v, x) for u, v, x in edges if root not in (u, v)]
    out.append((a, b, xa + xb))

    def shift(v):
        return v - 1 if v > root else v

    shifted = [(shift(u), shift(v), x) for u, v, x in out]
    for v in sorted(labels):
        if v > root:
            labels[v - 1] = labels.pop(v)
    return shifted


def write_newick(tree: UnrootedTree) -> str:
    """Serialize in the canonical trifurcation form.

    The tree is laid out from the internal vertex next to the smallest
    taxon; children appear in adjacency order, so output is deterministic
    for a given tree.  For two taxa the bifurcation ``(A:x,B:0);`` is used,
    placing the whole edge length on the smaller label.
    """
    if tree.n_leaves == 2:
        a, b = tree.taxa
        x = tree.edges[0][2]
        return f"({a}:{format_number(x)},{b}:0);"

    top = tree.adj[tree.leaf_vertex(tree.taxa[0])][0][0]
    parts: dict[int, str] = {}
    # iterative post-order over (vertex, parent)
    stack: list[tuple[int, int, bool]] = [(top, -1, False)]
    while stack:
        v, pv, expanded = stack.pop()
        kids = [(nbr, e) for nbr, e in tree.adj[v] if nbr != pv]
        if tree.is_leaf(v):
            parts[v] = tree.label_of(v)
            continue
        if not expanded:
            stack.append((v, pv, True))
            for nbr, _ in reversed(kids):
                stack.append((nbr, v, False))
            continue
        inner = ",".join(
            f"{parts.pop(nbr)}:{format_number(tree.edges[e][2])}" for nbr, e in kids
        )
        parts[v] = f"({inner})"
    return parts.pop(top) + ";"
