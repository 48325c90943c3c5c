"""Composition-series enumeration and the per-series reduction loop.

Chains are grown one subgroup at a time: the next link is generated by
the current link plus one representative per nontrivial coset, with
duplicate results pruned at each level.  That stream covers every
maximal subgroup chain; filtering by prime step indices and step
normality keeps exactly the composition series.  All inputs here are
solvable, so prime-index factors are the correct simplicity test.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Sequence, Tuple, TypeVar

from .decomposition import AlphaDecomposition
from .group_core import (
    GroupTable,
    Subgroup,
    bit_list,
    factorize,
    is_normal,
    left_cosets,
    subgroup_closure,
)

T = TypeVar("T")


@dataclass(frozen=True)
class CompositionSeries:
    """Chain {e} = C_0 < C_1 < ... < C_m = top, prime-index normal steps."""

    chain: Tuple[Subgroup, ...]

    @property
    def length(self) -> int:
        return len(self.chain) - 1

    @property
    def top(self) -> Subgroup:
        return self.chain[-1]

    def masks(self) -> Tuple[int, ...]:
        return tuple(s.members for s in self.chain)

    def factor_orders(self) -> Tuple[int, ...]:
        return tuple(
            self.chain[i + 1].order // self.chain[i].order for i in range(self.length)
        )


@dataclass(frozen=True)
class AlphaCompositionPair:
    """A split's large part P1 together with a composition series of P2."""

    P1: Subgroup
    S2: CompositionSeries


def enumerate_subgroup_chains(P: Subgroup) -> Iterator[Tuple[Subgroup, ...]]:
    """Stream ascending subgroup chains from the trivial group to P.

    Every maximal chain appears; non-maximal chains may appear too and
    are filtered by the caller.  Extensions are deduplicated per level so
    the emission count respects the coset-representative bound.
    """
    G = P.parent
    trivial = Subgroup(G, 1 << G.identity)

    def extend(chain: Tuple[Subgroup, ...]) -> Iterator[Tuple[Subgroup, ...]]:
        cur = chain[-1]
        if cur.members == P.members:
            yield chain
            return
        seen = set()
        for coset in left_cosets(cur, P):
            if coset & cur.members:
                continue
            rep = (coset & -coset).bit_length() - 1
            nxt = subgroup_closure(G, bit_list(cur.members) + [rep])
            if nxt.members in seen:
                continue
            seen.add(nxt.members)
            yield from extend(chain + (nxt,))

    yield from extend((trivial,))


def is_composition_series(chain: Sequence[Subgroup]) -> bool:
    """All consecutive indices prime and every step normal in the next."""
    for lower, upper in zip(chain, chain[1:]):
        if upper.order % lower.order:
            return False
        index = upper.order // lower.order
        if not _is_prime(index):
            return False
        if not is_normal(lower, upper):
            return False
    return True


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    p = 2
    while p * p <= m:
        if m % p == 0:
            return False
        p += 1
    return True


def enumerate_composition_series(
    P: Subgroup, chain_counter: Optional[list] = None
) -> List[CompositionSeries]:
    """All composition series of P in lexicographic bitset order."""
    out = {}
    for chain in enumerate_subgroup_chains(P):
        if chain_counter is not None:
            chain_counter.append(None)
        if is_composition_series(chain):
            key = tuple(s.members for s in chain)
            if key not in out:
                out[key] = CompositionSeries(chain)
    return [out[key] for key in sorted(out)]


def alpha_pair_iso_loop(
    dec_g: AlphaDecomposition,
    dec_h: AlphaDecomposition,
    pair_tester: Callable[[AlphaCompositionPair, AlphaCompositionPair], Optional[T]],
    counters=None,
) -> Optional[T]:
    """Fix the first series for P2; try all series of Q2 against it."""
    series_g = enumerate_composition_series(dec_g.P2)
    pair_g = AlphaCompositionPair(dec_g.P1, series_g[0])
    for s2p in enumerate_composition_series(dec_h.P2):
        if counters is not None:
            counters.series += 1
        result = pair_tester(pair_g, AlphaCompositionPair(dec_h.P1, s2p))
        if result:
            return result
    return None
