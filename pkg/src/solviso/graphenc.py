"""Colored-graph encodings of augmented composition pairs, and decoding.

A pair (P1, S2, g) becomes a vertex-colored graph in three steps: a
rank-ordered balanced binary tree over the elements of P1, the coset
tree of the series S2, and their leaf product, whose leaves are exactly
the group elements written as products x1*x2.  The leaf product of that
tree with itself, tipped with a three-pronged fork per leaf, hosts one
two-cross-edge gadget per multiplication rule x*y = z.  Distinct rank
colors on the P1 leaves pin the generator ordering, a dedicated color
marks the nodes (x1, identity), and the root carries its own color so
depths are recoverable from the graph alone.

``decode_Y`` reverses the construction purely structurally,
recovering the multiplication table, the image of P1, the series
subgroups and the generator sequence; every probe failure raises
:class:`MalformedEncoding`.

Debug dump format (bit-exact, lines sorted numerically):

    v <count> root <index>
    c <vertex> <color>        one line per vertex, ascending vertex
    e <u> <v>                 one line per undirected edge, u < v,
                              ascending (u, v)
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import MalformedEncoding, NotPairIso, ProductMismatch
from .group_core import GroupTable, Subgroup, bit_list, factorize, validate_table
from .ordering import GeneratingSequence, word_ranks
from .series import CompositionSeries

# Fixed color registry.
ROOT_COLOR = 0
INTERNAL_COLOR = 1
SECOND_IDENTITY_COLOR = 2
LEFT_COLOR = 3
RIGHT_COLOR = 4
EQUALS_COLOR = 5
RANK_COLOR_BASE = 6


@dataclass(frozen=True)
class AugmentedPair:
    """(P1, S2, g): a split's large part, a series of the small part, and
    an ordered generating sequence for P1."""

    P1: Subgroup
    S2: CompositionSeries
    g: GeneratingSequence

    @property
    def parent(self) -> GroupTable:
        return self.P1.parent


class RootedTree:
    """Rooted tree with per-node payload atoms and colors.

    Payloads are tuples of atoms; leaf products concatenate them, which
    realizes the flattened-tuple identification that makes the product
    associative.
    """

    __slots__ = ("parents", "payloads", "colors", "root", "leaves", "height")

    def __init__(self, parents, payloads, colors, root, leaves, height):
        self.parents: List[int] = parents
        self.payloads: List[tuple] = payloads
        self.colors: List[int] = colors
        self.root: int = root
        self.leaves: List[int] = leaves
        self.height: int = height

    @property
    def num_nodes(self) -> int:
        return len(self.parents)


def _pair_up(leaf_count: int) -> Tuple[List[int], List[Tuple[int, int]], int]:
    """Binary pairing levels over ``leaf_count`` ordered slots.

    Returns (parents-per-node (tree-local ids, leaves are 0..L-1),
    nodes-per-level metadata unused by callers, height).  Each level
    pairs adjacent nodes left to right; an odd tail gets a singleton
    parent.  At least one parent level is always built, so a single leaf
    still gets a root above it.
    """
    parents = [-1] * leaf_count
    level = list(range(leaf_count))
    next_id = leaf_count
    height = 0
    while len(level) > 1 or height == 0:
        nxt = []
        for i in range(0, len(level), 2):
            pid = next_id
            next_id += 1
            parents.append(-1)
            parents[level[i]] = pid
            if i + 1 < len(level):
                parents[level[i + 1]] = pid
            nxt.append(pid)
        level = nxt
        height += 1
    return parents, level, height


def build_T_P1(P1: Subgroup, g: GeneratingSequence) -> RootedTree:
    """Balanced binary tree over P1's elements in shortlex rank order.

    Leaves carry one distinct color per rank, which is what forces graph
    isomorphisms to respect the word order.
    """
    order = word_ranks(P1, g)
    pos_to_elem = sorted(order.rank, key=order.rank.get)
    tree = _p1_shape(P1.order)
    for r, elem in enumerate(pos_to_elem):
        tree.payloads[r] = (("p1", r, elem),)
    return tree


def _p1_shape(leaf_count: int) -> RootedTree:
    """The g-independent shape of the P1 tree, with positional payloads."""
    parents, top, height = _pair_up(leaf_count)
    payloads: List[tuple] = [(("p1pos", r),) for r in range(leaf_count)]
    colors = [RANK_COLOR_BASE + r for r in range(leaf_count)]
    # internal nodes carry (level, position); level 1 sits above the leaves
    current = list(range(leaf_count))
    level = 0
    while len(current) > 1 or level == 0:
        nxt = sorted({parents[v] for v in current})
        level += 1
        for pos, node in enumerate(nxt):
            payloads.append((("t1", level, pos),))
            colors.append(INTERNAL_COLOR)
        current = nxt
    root = current[0]
    return RootedTree(parents, payloads, colors, root, list(range(leaf_count)), height)


def build_T_S2(S2: CompositionSeries) -> RootedTree:
    """Coset tree of a composition series: root is the whole subgroup,
    children of a coset are the finer cosets inside it, leaves are the
    elements."""
    chain = S2.chain
    G = chain[0].parent
    m = S2.length
    parents: List[int] = []
    payloads: List[tuple] = []
    colors: List[int] = []
    leaves: List[int] = []

    def add_node(payload: tuple, parent: int) -> int:
        parents.append(parent)
        payloads.append(payload)
        colors.append(INTERNAL_COLOR)
        return len(parents) - 1

    def descend(level: int, coset_mask: int, parent: int) -> None:
        # level counts down the chain: this node is a coset of chain[level]
        if level == 0:
            elem = (coset_mask & -coset_mask).bit_length() - 1
            node = add_node((("e2", elem),), parent)
            leaves.append(node)
            return
        node = add_node((("cs", level, coset_mask),), parent)
        sub = chain[level - 1]
        sub_elems = np.fromiter(sub.elements(), dtype=np.int32)
        remaining = coset_mask
        while remaining:
            x = (remaining & -remaining).bit_length() - 1
            child_mask = 0
            for v in G.table[x, sub_elems]:
                child_mask |= 1 << int(v)
            descend(level - 1, child_mask, node)
            remaining &= ~child_mask

    if m == 0:
        elem = (chain[0].members & -chain[0].members).bit_length() - 1
        node = add_node((("e2", elem),), -1)
        leaves.append(node)
        return RootedTree(parents, payloads, colors, node, leaves, 0)

    descend(m, chain[-1].members, -1)
    # root was created first by descend
    return RootedTree(parents, payloads, colors, 0, leaves, m)


def _m_tree() -> RootedTree:
    parents = [-1, 0, 0, 0]
    payloads = [(("mroot",),), (("L",),), (("R",),), (("EQ",),)]
    colors = [INTERNAL_COLOR, LEFT_COLOR, RIGHT_COLOR, EQUALS_COLOR]
    return RootedTree(parents, payloads, colors, 0, [1, 2, 3], 1)


def leaf_product(T1: RootedTree, T2: RootedTree) -> RootedTree:
    """Identify each leaf of T1 with the root of a fresh copy of T2.

    The identified vertex keeps T1's payload and color; copied nodes get
    concatenated payload tuples.  A single-node T2 leaves T1 unchanged.
    """
    parents = list(T1.parents)
    payloads = list(T1.payloads)
    colors = list(T1.colors)
    t2_nonroot = [v for v in range(T2.num_nodes) if v != T2.root]
    if not t2_nonroot:
        return RootedTree(parents, payloads, colors, T1.root, list(T1.leaves), T1.height)

    leaves: List[int] = []
    for leaf in T1.leaves:
        base = len(parents)
        local: Dict[int, int] = {T2.root: leaf}
        for v in t2_nonroot:
            local[v] = base + len(local) - 1
        for v in t2_nonroot:
            parents.append(local[T2.parents[v]])
            payloads.append(payloads[leaf] + T2.payloads[v])
            colors.append(T2.colors[v])
        for lv in T2.leaves:
            leaves.append(local[lv])
    return RootedTree(parents, payloads, colors, T1.root, leaves, T1.height + T2.height)


class ColoredGraph:
    """Vertex-colored undirected graph with a designated root."""

    __slots__ = ("num_vertices", "colors", "edges", "root", "_adj", "_canonical")

    def __init__(self, num_vertices: int, colors: np.ndarray, edges: np.ndarray, root: int):
        self.num_vertices = int(num_vertices)
        self.colors = np.ascontiguousarray(colors, dtype=np.int64)
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        e = np.sort(e, axis=1)
        order = np.lexsort((e[:, 1], e[:, 0]))
        self.edges = e[order]
        self.root = int(root)
        self._adj = None
        self._canonical = None
        self.colors.setflags(write=False)
        self.edges.setflags(write=False)

    def adjacency(self) -> Tuple[np.ndarray, np.ndarray]:
        """CSR adjacency (indptr, indices), neighbors ascending."""
        if self._adj is None:
            n = self.num_vertices
            u = self.edges[:, 0]
            v = self.edges[:, 1]
            heads = np.concatenate([u, v])
            tails = np.concatenate([v, u])
            order = np.lexsort((tails, heads))
            heads = heads[order]
            tails = tails[order]
            indptr = np.zeros(n + 1, dtype=np.int64)
            np.add.at(indptr, heads + 1, 1)
            np.cumsum(indptr, out=indptr)
            self._adj = (indptr, tails.astype(np.int64))
        return self._adj

    def degrees(self) -> np.ndarray:
        indptr, _ = self.adjacency()
        return np.diff(indptr)


def dump_text(graph: ColoredGraph) -> str:
    lines = [f"v {graph.num_vertices} root {graph.root}"]
    for v in range(graph.num_vertices):
        lines.append(f"c {v} {int(graph.colors[v])}")
    for u, v in graph.edges:
        lines.append(f"e {int(u)} {int(v)}")
    return "\n".join(lines) + "\n"


class XEncoding(ColoredGraph):
    """A pair encoding: the colored graph plus construction metadata.

    The metadata (element-to-vertex map, tree heights, positional
    payloads) is not part of the graph contract; the decoder never uses
    it and works from the graph alone.
    """

    __slots__ = (
        "pair",
        "ell",
        "m",
        "element_vertex",
        "_skeleton",
        "_pos1_to_elem",
    )

    def __init__(self, graph_args, pair, ell, m, element_vertex, skeleton, pos1_to_elem):
        super().__init__(*graph_args)
        self.pair = pair
        self.ell = ell
        self.m = m
        self.element_vertex = element_vertex
        self._skeleton = skeleton
        self._pos1_to_elem = pos1_to_elem

    def payloads(self) -> List[tuple]:
        """Per-vertex payload atoms with P1 positions resolved to elements."""
        out = []
        for payload in self._skeleton.payloads:
            atoms = []
            for atom in payload:
                if atom[0] == "p1pos":
                    r = atom[1]
                    atoms.append(("p1", r, int(self._pos1_to_elem[r])))
                else:
                    atoms.append(atom)
            out.append(tuple(atoms))
        return out


class _Skeleton:
    """Everything about X(P1, S2, -) that does not depend on g."""

    __slots__ = (
        "G",
        "n",
        "L",
        "n2",
        "ell",
        "m",
        "num_vertices",
        "root",
        "tree_edges",
        "base_colors",
        "depth",
        "payloads",
        "pairleaf_vertex",
        "fork_left",
        "fork_right",
        "fork_equal",
        "s2_pos",
        "x1_of",
        "x2_of",
        "max_small_prime",
    )


@lru_cache(maxsize=32)
def _skeleton(G: GroupTable, p1_mask: int, s2_masks: Tuple[int, ...]) -> _Skeleton:
    P1 = Subgroup(G, p1_mask)
    chain = tuple(Subgroup(G, m) for m in s2_masks)
    S2 = CompositionSeries(chain)
    P2 = chain[-1]
    n = P1.order * P2.order

    t_p1 = _p1_shape(P1.order)
    t_s2 = build_T_S2(S2)
    t_pair = leaf_product(t_p1, t_s2)
    t_pp = leaf_product(t_pair, t_pair)
    full = leaf_product(t_pp, _m_tree())

    L = P1.order
    n2 = P2.order
    assert len(t_pair.leaves) == n
    assert len(t_pp.leaves) == n * n

    # breadth-first renumbering so the root is vertex 0
    children: Dict[int, List[int]] = {}
    for v, par in enumerate(full.parents):
        if par >= 0:
            children.setdefault(par, []).append(v)
    perm = np.full(full.num_nodes, -1, dtype=np.int64)
    frontier = [full.root]
    perm[full.root] = 0
    nxt_id = 1
    while frontier:
        upcoming = []
        for v in frontier:
            for c in children.get(v, ()):
                perm[c] = nxt_id
                nxt_id += 1
                upcoming.append(c)
        frontier = upcoming
    assert nxt_id == full.num_nodes, "tree must be connected"

    new_depth = np.zeros(full.num_nodes, dtype=np.int64)
    new_parents = np.full(full.num_nodes, -1, dtype=np.int64)
    new_colors = np.zeros(full.num_nodes, dtype=np.int64)
    new_payloads: List[tuple] = [()] * full.num_nodes
    for v in range(full.num_nodes):
        nv = int(perm[v])
        new_colors[nv] = full.colors[v]
        new_payloads[nv] = full.payloads[v]
        if full.parents[v] >= 0:
            new_parents[nv] = perm[full.parents[v]]
    for v in range(1, full.num_nodes):
        new_depth[v] = new_depth[new_parents[v]] + 1

    tree_edges = np.array(
        [[new_parents[v], v] for v in range(full.num_nodes) if new_parents[v] >= 0],
        dtype=np.int64,
    )

    # element decomposition x = x1 * x2, unique for a valid split
    x1_of = np.full(G.n, -1, dtype=np.int64)
    x2_of = np.full(G.n, -1, dtype=np.int64)
    for x1 in P1.elements():
        for x2 in P2.elements():
            x = G.mul(x1, x2)
            if x1_of[x] >= 0:
                raise ProductMismatch(f"element {x} has two factorizations")
            x1_of[x] = x1
            x2_of[x] = x2
    if n == G.n and np.any(x1_of < 0):
        raise ProductMismatch("some element has no factorization")

    s2_pos = np.full(G.n, -1, dtype=np.int64)
    for s, leaf in enumerate(t_s2.leaves):
        elem = t_s2.payloads[leaf][-1][1]
        s2_pos[elem] = s

    pairleaf_vertex = np.array([perm[v] for v in t_pair.leaves], dtype=np.int64)
    fork = np.array([perm[v] for v in full.leaves], dtype=np.int64).reshape(n * n, 3)

    sk = _Skeleton()
    sk.G = G
    sk.n = n
    sk.L = L
    sk.n2 = n2
    sk.ell = t_p1.height
    sk.m = S2.length
    sk.num_vertices = full.num_nodes
    sk.root = 0
    sk.tree_edges = tree_edges
    sk.depth = new_depth
    sk.payloads = new_payloads
    sk.pairleaf_vertex = pairleaf_vertex
    sk.fork_left = np.ascontiguousarray(fork[:, 0])
    sk.fork_right = np.ascontiguousarray(fork[:, 1])
    sk.fork_equal = np.ascontiguousarray(fork[:, 2])
    sk.s2_pos = s2_pos
    sk.x1_of = x1_of
    sk.x2_of = x2_of
    fact = factorize(P2.order)
    sk.max_small_prime = fact.factors[-1][0] if fact.factors else 1

    colors = new_colors
    colors[0] = ROOT_COLOR
    if sk.m > 0:
        s_e = int(s2_pos[G.identity])
        for r in range(L):
            colors[pairleaf_vertex[r * n2 + s_e]] = SECOND_IDENTITY_COLOR
    sk.base_colors = colors

    assert sk.depth[pairleaf_vertex[0]] == sk.ell + sk.m
    return sk


def build_X(pair: AugmentedPair) -> XEncoding:
    """Encode an augmented pair as a colored graph with one gadget per
    multiplication rule."""
    G = pair.parent
    P1 = pair.P1
    P2 = pair.S2.top
    sk = _skeleton(G, P1.members, pair.S2.masks())
    n = sk.n
    assert n == G.n, "pair must cover the whole group"

    order = word_ranks(P1, pair.g)
    pos1 = np.full(G.n, -1, dtype=np.int64)
    pos1_to_elem = np.zeros(sk.L, dtype=np.int64)
    for elem, r in order.rank.items():
        pos1[elem] = r
        pos1_to_elem[r] = elem

    li = pos1[sk.x1_of] * sk.n2 + sk.s2_pos[sk.x2_of]  # element -> pair-leaf index

    # gadget for (x, y): left tip under leaf (x, y), right tip under
    # (y, x), equals tip under (x*y, y)
    LX, LY = np.meshgrid(li, li, indexing="ij")
    f_xy = LX * n + LY
    f_yx = LY * n + LX
    f_zy = li[G.table.astype(np.int64)] * n + LY

    left = sk.fork_left[f_xy].ravel()
    right = sk.fork_right[f_yx].ravel()
    equal = sk.fork_equal[f_zy].ravel()
    cross = np.concatenate(
        [np.stack([left, right], axis=1), np.stack([right, equal], axis=1)]
    )
    edges = np.concatenate([sk.tree_edges, cross])

    element_vertex = sk.pairleaf_vertex[li]

    enc = XEncoding(
        (sk.num_vertices, sk.base_colors, edges, sk.root),
        pair,
        sk.ell,
        sk.m,
        element_vertex,
        sk,
        pos1_to_elem,
    )
    assert len(cross) == 2 * n * n
    assert enc.num_vertices <= 8 * n * n
    assert int(enc.degrees().max()) <= max(sk.max_small_prime + 1, 4)
    return enc


def apply_X_to_iso(enc_a: XEncoding, enc_b: XEncoding, phi: Sequence[int]) -> np.ndarray:
    """Lift a pair isomorphism to a vertex bijection between encodings.

    Validates that phi really is an augmented-pair isomorphism
    (homomorphism, bijection, matched subgroup/series/generator images);
    raises :class:`NotPairIso` otherwise.  The returned map is verified
    to preserve colors and adjacency.
    """
    A, B = enc_a.pair, enc_b.pair
    G, H = A.parent, B.parent
    n = G.n
    phi = np.asarray(phi, dtype=np.int64)
    if sorted(int(v) for v in phi) != list(range(n)) or H.n != n:
        raise NotPairIso("phi is not a bijection onto the codomain")
    if not np.array_equal(phi[G.table], H.table[np.ix_(phi, phi)]):
        raise NotPairIso("phi is not a homomorphism")
    if _image_mask(phi, A.P1.members) != B.P1.members:
        raise NotPairIso("phi does not map P1 onto Q1")
    if A.S2.length != B.S2.length:
        raise NotPairIso("series lengths differ")
    for sa, sb in zip(A.S2.chain, B.S2.chain):
        if _image_mask(phi, sa.members) != sb.members:
            raise NotPairIso("phi does not map the series correspondingly")
    if len(A.g.elems) != len(B.g.elems) or any(
        int(phi[x]) != y for x, y in zip(A.g.elems, B.g.elems)
    ):
        raise NotPairIso("phi does not map g to h")

    payload_to_vertex = {p: v for v, p in enumerate(enc_b.payloads())}

    def map_atom(atom):
        tag = atom[0]
        if tag == "p1":
            return ("p1", atom[1], int(phi[atom[2]]))
        if tag == "e2":
            return ("e2", int(phi[atom[1]]))
        if tag == "cs":
            return ("cs", atom[1], _image_mask(phi, atom[2]))
        return atom

    vmap = np.full(enc_a.num_vertices, -1, dtype=np.int64)
    for v, payload in enumerate(enc_a.payloads()):
        target = tuple(map_atom(a) for a in payload)
        if target not in payload_to_vertex:
            raise NotPairIso(f"no image vertex for payload {target}")
        vmap[v] = payload_to_vertex[target]

    assert np.array_equal(enc_a.colors, enc_b.colors[vmap]), "colors must transport"
    b_edges = {(int(u), int(v)) for u, v in enc_b.edges}
    for u, v in enc_a.edges:
        iu, iv = int(vmap[u]), int(vmap[v])
        assert (min(iu, iv), max(iu, iv)) in b_edges, "adjacency must transport"
    return vmap


def _image_mask(phi: np.ndarray, mask: int) -> int:
    out = 0
    for x in bit_list(mask):
        out |= 1 << int(phi[x])
    return out


@dataclass(frozen=True)
class DecodedPair:
    """Structure recovered from a pair encoding, over relabeled elements.

    Elements are numbered by ascending vertex id of their element nodes,
    so decoding a canonical graph yields a canonical relabeling.
    """

    table: np.ndarray
    identity: int
    p1: Tuple[int, ...]
    series: Tuple[Tuple[int, ...], ...]
    gens: Tuple[int, ...]
    ranks: Tuple[int, ...]  # rank of each P1 element, aligned with p1
    element_nodes: Tuple[int, ...]

    @property
    def n(self) -> int:
        return int(self.table.shape[0])


def decode_Y(graph: ColoredGraph, ell: int, m: int) -> DecodedPair:
    """Rebuild the pair data from any graph isomorphic to an encoding.

    Only the coloring and adjacency are used; ``ell`` and ``m`` are the
    two tree heights, which the encoding does not carry in-band.
    """
    colors = graph.colors
    roots = np.nonzero(colors == ROOT_COLOR)[0]
    if roots.size != 1:
        raise MalformedEncoding("exactly one root-colored vertex required")
    root = int(roots[0])

    nv = graph.num_vertices
    indptr, indices = graph.adjacency()
    depth = np.full(nv, -1, dtype=np.int64)
    parent = np.full(nv, -1, dtype=np.int64)
    depth[root] = 0
    frontier = [root]
    d = 0
    while frontier:
        nxt = []
        for v in frontier:
            for w in indices[indptr[v] : indptr[v + 1]]:
                w = int(w)
                if depth[w] < 0:
                    depth[w] = d + 1
                    parent[w] = v
                    nxt.append(w)
        frontier = nxt
        d += 1
    if np.any(depth < 0):
        raise MalformedEncoding("graph must be connected")

    deepest = int(depth.max())
    if deepest != 2 * (ell + m) + 1:
        raise MalformedEncoding("depth must equal 2*(ell+m)+1")

    elem_depth = ell + m
    element_nodes = np.nonzero(depth == elem_depth)[0]
    n = int(element_nodes.size)
    node_to_elem = {int(v): i for i, v in enumerate(element_nodes)}

    # cross edges join same-depth vertices and may only occur at the tips
    cross_adj: Dict[int, List[int]] = {}
    for u, v in graph.edges:
        u, v = int(u), int(v)
        if depth[u] == depth[v]:
            if depth[u] != deepest:
                raise MalformedEncoding("cross edge away from the tips")
            cross_adj.setdefault(u, []).append(v)
            cross_adj.setdefault(v, []).append(u)
        elif abs(int(depth[u] - depth[v])) != 1:
            raise MalformedEncoding("tree edge skipping a level")

    # ancestor at the element level, inherited level by level
    anc = np.full(nv, -1, dtype=np.int64)
    by_depth = np.argsort(depth, kind="stable")
    for v in by_depth:
        v = int(v)
        if depth[v] < elem_depth:
            continue
        anc[v] = v if depth[v] == elem_depth else anc[parent[v]]

    table = np.full((n, n), -1, dtype=np.int32)
    rules = 0
    for u in np.nonzero(colors == LEFT_COLOR)[0]:
        u = int(u)
        nbrs = cross_adj.get(u, [])
        if len(nbrs) != 1 or colors[nbrs[0]] != RIGHT_COLOR:
            raise MalformedEncoding("left tip must have one right cross neighbor")
        r = nbrs[0]
        others = [w for w in cross_adj.get(r, []) if w != u]
        if len(others) != 1 or colors[others[0]] != EQUALS_COLOR:
            raise MalformedEncoding("right tip must bridge left and equals")
        q = others[0]
        x = node_to_elem[int(anc[u])]
        y = node_to_elem[int(anc[r])]
        z = node_to_elem[int(anc[q])]
        if table[x, y] >= 0:
            raise MalformedEncoding("duplicate multiplication rule")
        table[x, y] = z
        rules += 1
    if rules != n * n or np.any(table < 0):
        raise MalformedEncoding("multiplication rules must cover all pairs")

    group = validate_table(table)
    identity = group.identity

    if m > 0:
        p1_nodes = [int(v) for v in np.nonzero(colors == SECOND_IDENTITY_COLOR)[0]]
        if any(depth[v] != elem_depth for v in p1_nodes):
            raise MalformedEncoding("second-identity vertex off the element level")
    else:
        p1_nodes = [int(v) for v in element_nodes if colors[v] >= RANK_COLOR_BASE]
    p1_nodes.sort()
    p1 = tuple(node_to_elem[v] for v in p1_nodes)
    if identity not in p1:
        raise MalformedEncoding("identity missing from the P1 image")

    # series subgroups: ancestors of the identity node at depths ell..ell+m
    id_node = int(element_nodes[identity])
    path = []
    v = id_node
    for _ in range(m + 1):
        path.append(v)
        v = int(parent[v])
    path.reverse()  # depth ell .. ell+m

    anc_level = {int(w): int(w) for w in element_nodes}
    series: List[Tuple[int, ...]] = []
    # walk ancestors upward level by level, collecting subtree memberships
    current = {int(w): int(w) for w in element_nodes}
    levels = []
    for k in range(m, -1, -1):
        levels.append(dict(current))
        current = {w: int(parent[a]) for w, a in current.items()}
    levels.reverse()  # levels[k][elem node] = its ancestor at depth ell+k
    for k in range(m + 1):
        marker = path[k]
        members = tuple(
            sorted(node_to_elem[w] for w, a in levels[k].items() if a == marker)
        )
        series.append(members)
    if series[0] != (identity,):
        raise MalformedEncoding("series must start at the identity")
    for lo, hi in zip(series, series[1:]):
        if not set(lo) <= set(hi):
            raise MalformedEncoding("series must be nested")
    if len(series[-1]) * len(p1) != n:
        raise MalformedEncoding("split sizes must multiply to n")

    # ranks from the P1-leaf colors above each P1 node
    ranks = {}
    for v in p1_nodes:
        a = v
        for _ in range(m):
            a = int(parent[a])
        c = int(colors[a])
        if c < RANK_COLOR_BASE:
            raise MalformedEncoding("missing rank color above a P1 node")
        ranks[node_to_elem[v]] = c - RANK_COLOR_BASE
    if sorted(ranks.values()) != list(range(len(p1))):
        raise MalformedEncoding("ranks must be a bijection onto 0..|P1|-1")
    if ranks[identity] != 0:
        raise MalformedEncoding("identity must have rank 0")

    by_rank = sorted(ranks, key=ranks.get)
    gens: List[int] = []
    closure = {identity}
    for elem in by_rank[1:]:
        if closure == set(p1):
            break
        gens.append(elem)
        frontier = list(closure | {elem})
        grown = set(frontier)
        while True:
            new = {int(table[a, b]) for a in grown for b in grown} | grown
            if new == grown:
                break
            grown = new
        closure = grown
    if closure != set(p1):
        raise MalformedEncoding("rank order must generate the P1 image")

    return DecodedPair(
        table=table,
        identity=identity,
        p1=p1,
        series=tuple(series),
        gens=tuple(gens),
        ranks=tuple(ranks[e] for e in p1),
        element_nodes=tuple(int(v) for v in element_nodes),
    )
