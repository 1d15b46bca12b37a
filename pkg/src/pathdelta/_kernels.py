"""Compiled kernels for the colouring polynomials on the decomposition tree.

Polynomial representation
-------------------------
Every decomposition node carries a quadratic polynomial over at most four
variables z0..z3 = (b1, w1, b2, w2): the black/white counts of leaves
outside the node's segment, split by nearest boundary vertex (slot 1 is the
smaller boundary vertex).  Degree-one nodes use z0, z1 only.  Coefficients
sit in a dense float64 row of 15 monomials:

    index 0       : constant
    indices 1..4  : z0, z1, z2, z3
    indices 5..14 : zA*zB for (A,B) in (0,0),(0,1),(0,2),(0,3),(1,1),
                    (1,2),(1,3),(2,2),(2,3),(3,3)

Substitution recipes
--------------------
An internal node's polynomial is the sum of its children's polynomials
under an affine substitution of variables.  The children always share
exactly one boundary vertex u.  For a child slot at vertex x:

  * x != u: x is still a boundary vertex of the parent, and the leaves
    outside the child on that side are exactly the parent's; the child
    variable becomes the matching parent variable.
  * x == u: the outside of the child at u is the sibling's segment plus
    everything outside the parent not lying beyond the child's other
    boundary vertex; the child variable becomes the sibling's own
    black/white count plus every parent variable except the one at the
    child's other boundary vertex.

Both rules are forced by the counting semantics, so the recipe is computed
per node once (colouring-independent) as a parent-slot bitmask plus a
sibling-constant flag per (child, slot, colour), and validated: per child
the slot masks must partition the parent's slots.

Substituting an affine form into the dense quadratic is done monomial by
monomial; squares of sums enumerate ordered variable pairs, which doubles
the cross terms exactly as expansion requires.
"""

import numpy as np
from numba import njit

N_COEF = 15

PAIR_IDX = np.full((4, 4), -1, np.int64)
MON_VAR1 = np.full(N_COEF, -1, np.int64)
MON_VAR2 = np.full(N_COEF, -1, np.int64)
for _v in range(4):
    MON_VAR1[1 + _v] = _v
_k = 5
for _a in range(4):
    for _b in range(_a, 4):
        PAIR_IDX[_a, _b] = _k
        PAIR_IDX[_b, _a] = _k
        MON_VAR1[_k] = _a
        MON_VAR2[_k] = _b
        _k += 1
del _a, _b, _k, _v


@njit(cache=True)
def build_recipes(left, right, bnd1, bnd2):
    """Per-node substitution recipes; returns (mask, sib, failing_node).

    ``mask[v, child, slot]`` is the parent-slot bitmask (bit 0 = slot 1),
    ``sib[v, child, slot]`` flags adding the sibling's counts.  The third
    return value is -1 on success or the node id where the structural
    assumptions (one shared vertex, slot partition) failed.
    """
    n_nodes = left.shape[0]
    mask = np.zeros((n_nodes, 2, 2), np.uint8)
    sib = np.zeros((n_nodes, 2, 2), np.uint8)
    for v in range(n_nodes):
        l = left[v]
        if l < 0:
            continue
        r = right[v]
        u = -1
        shared = 0
        for xa in (bnd1[l], bnd2[l]):
            if xa >= 0 and (xa == bnd1[r] or xa == bnd2[r]):
                u = xa
                shared += 1
        if shared != 1:
            return mask, sib, v
        pv1, pv2 = bnd1[v], bnd2[v]
        full = (1 if pv1 >= 0 else 0) | (2 if pv2 >= 0 else 0)
        for ci in range(2):
            c = l if ci == 0 else r
            for si in range(2):
                x = bnd1[c] if si == 0 else bnd2[c]
                if x < 0:
                    continue
                if x != u:
                    if x == pv1:
                        mask[v, ci, si] = 1
                    elif x == pv2:
                        mask[v, ci, si] = 2
                    else:
                        return mask, sib, v
                else:
                    m = full
                    other = bnd2[c] if si == 0 else bnd1[c]
                    if other >= 0:
                        if other == pv1:
                            m = m & 2
                        elif other == pv2:
                            m = m & 1
                        else:
                            return mask, sib, v
                    mask[v, ci, si] = m
                    sib[v, ci, si] = 1
            m1, m2 = mask[v, ci, 0], mask[v, ci, 1]
            if (m1 | m2) != full or (m1 & m2) != 0:
                return mask, sib, v
    return mask, sib, -1


@njit(cache=True)
def _leaf_row(i, edge_len, pend, colour, b, w, phi):
    y = edge_len[i]
    for m in range(N_COEF):
        phi[i, m] = 0.0
    p = pend[i]
    if p >= 0:
        c = colour[p]
        b[i] = c
        w[i] = 1 - c
        # y * (b_out * w_in + w_out * b_in) in the slot-1 variables
        phi[i, 1] = y * w[i]
        phi[i, 2] = y * b[i]
    else:
        b[i] = 0
        w[i] = 0
        # y * (b1*w2 + w1*b2)
        phi[i, 8] = y
        phi[i, 10] = y


@njit(cache=True)
def _combine(v, left, right, mask, sib, b, w, phi):
    l, r = left[v], right[v]
    for m in range(N_COEF):
        phi[v, m] = 0.0
    b[v] = b[l] + b[r]
    w[v] = w[l] + w[r]
    exp_const = np.zeros(4, np.float64)
    exp_var = np.zeros((4, 2), np.int64)
    exp_nv = np.zeros(4, np.int64)
    for ci in range(2):
        c = l if ci == 0 else r
        s = r if ci == 0 else l
        for cv in range(4):
            slot = cv >> 1
            col = cv & 1
            k = 0
            bits = mask[v, ci, slot]
            if bits & 1:
                exp_var[cv, k] = col  # parent slot 1, same colour
                k += 1
            if bits & 2:
                exp_var[cv, k] = 2 + col
                k += 1
            exp_nv[cv] = k
            if sib[v, ci, slot]:
                exp_const[cv] = b[s] if col == 0 else w[s]
            else:
                exp_const[cv] = 0.0
        for m in range(N_COEF):
            coef = phi[c, m]
            if coef == 0.0:
                continue
            if m == 0:
                phi[v, 0] += coef
            elif m <= 4:
                cv = m - 1
                phi[v, 0] += coef * exp_const[cv]
                for j in range(exp_nv[cv]):
                    phi[v, 1 + exp_var[cv, j]] += coef
            else:
                a = MON_VAR1[m]
                d = MON_VAR2[m]
                ca = exp_const[a]
                cd = exp_const[d]
                phi[v, 0] += coef * ca * cd
                for j in range(exp_nv[a]):
                    phi[v, 1 + exp_var[a, j]] += coef * cd
                for j in range(exp_nv[d]):
                    phi[v, 1 + exp_var[d, j]] += coef * ca
                for j in range(exp_nv[a]):
                    va = exp_var[a, j]
                    for j2 in range(exp_nv[d]):
                        phi[v, PAIR_IDX[va, exp_var[d, j2]]] += coef


@njit(cache=True)
def decorate_all(n_edges, left, right, mask, sib,
                 edge_len, pend, colour, b, w, phi):
    """Bottom-up decoration of every non-root node (ids ascend bottom-up)."""
    n_nodes = left.shape[0]
    for v in range(n_nodes - 1):
        if v < n_edges:
            _leaf_row(v, edge_len, pend, colour, b, w, phi)
        else:
            _combine(v, left, right, mask, sib, b, w, phi)


@njit(cache=True)
def recolour_taxa(taxa, new_colour, colour, taxon_leaf, parent, n_edges,
                  mark, epoch, buf, left, right, mask, sib,
                  edge_len, pend, b, w, phi):
    """Set the given taxa to ``new_colour`` and recompute the decoration.

    Marks the union of leaf-to-root paths of the taxa whose colour actually
    changed (the root itself carries no polynomial and is skipped), then
    recomputes those nodes children-first, which for creation-ordered ids
    is just ascending id order.  Returns (recomputed nodes, flipped taxa).
    """
    root = left.shape[0] - 1
    k = 0
    changed = 0
    for idx in range(taxa.shape[0]):
        t = taxa[idx]
        if colour[t] == new_colour:
            continue
        colour[t] = new_colour
        changed += 1
        node = taxon_leaf[t]
        while node != root and mark[node] != epoch:
            mark[node] = epoch
            buf[k] = node
            k += 1
            node = parent[node]
    order = np.sort(buf[:k])
    for i in range(k):
        v = order[i]
        if v < n_edges:
            _leaf_row(v, edge_len, pend, colour, b, w, phi)
        else:
            _combine(v, left, right, mask, sib, b, w, phi)
    return k, changed


@njit(cache=True)
def eval_root(left, right, b, w, phi):
    """Evaluate the decomposition at its root: each degree-one root child
    sees exactly the other child's leaves as its outside."""
    root = left.shape[0] - 1
    l, r = left[root], right[root]
    bl = float(b[r])
    wl = float(w[r])
    out = (phi[l, 0] + phi[l, 1] * bl + phi[l, 2] * wl
           + phi[l, 5] * bl * bl + phi[l, 6] * bl * wl + phi[l, 9] * wl * wl)
    br = float(b[l])
    wr = float(w[l])
    out += (phi[r, 0] + phi[r, 1] * br + phi[r, 2] * wr
            + phi[r, 5] * br * br + phi[r, 6] * br * wr + phi[r, 9] * wr * wr)
    return out


def eval_poly(row, z):
    """Full 15-coefficient evaluation at z = (z0, z1, z2, z3); test helper."""
    total = float(row[0])
    for m in range(1, 5):
        total += row[m] * z[m - 1]
    for m in range(5, N_COEF):
        total += row[m] * z[MON_VAR1[m]] * z[MON_VAR2[m]]
    return total
