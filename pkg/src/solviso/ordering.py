"""Canonical element ordering from an ordered generating sequence.

Every element gets the shortlex-least word over the generators that
produces it (length first, then leftmost generator position); ranking
elements by those words gives a total order that any isomorphism
matching the generating sequences must preserve.  The words come from a
breadth-first sweep of the Cayley graph, visiting parents in rank order
so first discovery is lexicographic minimality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterator, List, Sequence, Tuple

from .errors import NotGenerating
from .group_core import GroupTable, Subgroup, bit_list, subgroup_closure


@dataclass(frozen=True)
class GeneratingSequence:
    """Ordered, irredundant generators of ``parent``.

    Irredundant means each entry lies outside the closure of the ones
    before it, so the length is at most log2 of the subgroup order.
    """

    parent: Subgroup
    elems: Tuple[int, ...]


@dataclass(frozen=True)
class WordOrder:
    """rank: element -> position; word: element -> generator-index tuple."""

    rank: Dict[int, int]
    word: Dict[int, Tuple[int, ...]]

    def position(self, x: int) -> int:
        return self.rank[x]


def word_ranks(P: Subgroup, g: GeneratingSequence) -> WordOrder:
    """Shortlex ranks of P under g via breadth-first word assignment.

    Raises :class:`NotGenerating` if g does not reach all of P.
    """
    G = P.parent
    e = G.identity
    word: Dict[int, Tuple[int, ...]] = {e: ()}
    order: List[int] = [e]
    frontier = [e]
    while frontier:
        nxt: List[int] = []
        for x in frontier:
            wx = word[x]
            for j, gen in enumerate(g.elems):
                y = G.mul(x, gen)
                if y not in word:
                    word[y] = wx + (j,)
                    nxt.append(y)
        order.extend(nxt)
        frontier = nxt
    if len(order) != P.order or any(x not in P for x in order):
        raise NotGenerating(
            f"sequence reaches {len(order)} of {P.order} elements"
        )
    rank = {x: i for i, x in enumerate(order)}
    return WordOrder(rank, word)


def greedy_generating_sequence(P: Subgroup) -> GeneratingSequence:
    """Repeatedly adjoin the smallest-index element outside the closure."""
    G = P.parent
    elems: List[int] = []
    closure = 1 << G.identity
    while closure != P.members:
        outside = P.members & ~closure
        x = (outside & -outside).bit_length() - 1
        elems.append(x)
        closure = subgroup_closure(G, elems).members
    return GeneratingSequence(P, tuple(elems))


def enumerate_generating_sequences(Q: Subgroup, k: int) -> Iterator[GeneratingSequence]:
    """All irredundant length-k sequences generating Q, in lex element order.

    Irredundancy is isomorphism-invariant, so the image of any
    irredundant length-k sequence under an isomorphism onto Q appears in
    this stream.
    """
    G = Q.parent
    target = Q.members

    def descend(prefix: Tuple[int, ...], closure: int) -> Iterator[GeneratingSequence]:
        remaining = k - len(prefix)
        if remaining == 0:
            if closure == target:
                yield GeneratingSequence(Q, prefix)
            return
        # each additional generator at least doubles the closure
        if closure.bit_count() << remaining < target.bit_count():
            return
        candidates = target & ~closure
        for x in bit_list(candidates):
            nxt = subgroup_closure(G, bit_list(closure) + [x]).members
            yield from descend(prefix + (x,), nxt)

    yield from descend((), 1 << G.identity)


def all_generating_sequences(Q: Subgroup) -> Iterator[GeneratingSequence]:
    """Irredundant generating sequences of every length.

    Lengths are bounded by log2 of the order, so the union is finite;
    it is isomorphism-invariant, which the fixed-length streams are not
    (greedy lengths depend on the labeling).
    """
    order = Q.order
    max_k = max(1, order.bit_length())
    if order == 1:
        yield GeneratingSequence(Q, ())
        return
    for k in range(1, max_k + 1):
        yield from enumerate_generating_sequences(Q, k)
