"""Threshold splits of a Sylow basis and the outer reduction loop.

A split at threshold ``alpha`` sends the Sylow subgroups for primes
greater than alpha into P1 and the rest into P2; permutability makes
both products subgroups, G = P1*P2 and P1 meets P2 trivially.  Testing
isomorphism of two groups reduces to testing their splits against the
splits of every conjugate basis of the second group.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, TypeVar

from .group_core import GroupTable, Subgroup, bit_list, factorize, subgroup_closure
from .sylow import SylowBasis, all_sylow_bases, sylow_basis

T = TypeVar("T")


@dataclass(frozen=True)
class AlphaDecomposition:
    """G = P1 * P2 with primes of |P1| above alpha and of |P2| at most alpha."""

    alpha: int
    P1: Subgroup
    P2: Subgroup

    @property
    def parent(self) -> GroupTable:
        return self.P1.parent


def alpha_split(basis: SylowBasis, alpha: int) -> AlphaDecomposition:
    """Split a Sylow basis at ``alpha`` (either side may be trivial)."""
    G = basis.parent
    big = []
    small = []
    for p, sub in basis.entries:
        (big if p > alpha else small).append(sub)

    def merged(parts: List[Subgroup]) -> Subgroup:
        seed = []
        for s in parts:
            seed.extend(s.elements())
        return subgroup_closure(G, seed)

    P1 = merged(big)
    P2 = merged(small)
    assert P1.order * P2.order == G.n, "split sides must multiply to n"
    assert P1.members & P2.members == 1 << G.identity
    return AlphaDecomposition(alpha, P1, P2)


def alpha_decomp_iso(
    G: GroupTable,
    H: GroupTable,
    alpha: int,
    pair_tester: Callable[[AlphaDecomposition, AlphaDecomposition], Optional[T]],
    counters=None,
) -> Optional[T]:
    """Fix one split of G; try it against every conjugate-basis split of H.

    Returns the first truthy tester result, or None.  The tester must be
    pure; the loop is an order-independent OR.
    """
    if G.n != H.n:
        return None
    dec_g = alpha_split(sylow_basis(G), alpha)
    for basis_h in all_sylow_bases(H):
        if counters is not None:
            counters.bases += 1
        dec_h = alpha_split(basis_h, alpha)
        result = pair_tester(dec_g, dec_h)
        if result:
            return result
    return None
