"""Sylow subgroups, Sylow bases, and the conjugate family of bases.

A Sylow basis picks one Sylow subgroup per prime divisor such that every
pair of picks permutes (P*Q = Q*P as sets); one exists exactly when the
group is solvable, and any two bases are conjugate, so the full family
is obtained by conjugating one basis and has at most n members.

The basis search is plain backtracking over the per-prime conjugacy
classes with incremental permutability pruning.  It is exponential in
the worst case but exact, and conjugate counts are tiny at the orders
this library targets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .errors import NoSuchPrime, NotSolvable
from .group_core import (
    GroupTable,
    Subgroup,
    bit_list,
    bitset,
    factorize,
    product_set,
    subgroup_closure,
)


@dataclass(frozen=True)
class SylowBasis:
    """One Sylow subgroup per prime divisor, pairwise permutable."""

    parent: GroupTable
    entries: Tuple[Tuple[int, Subgroup], ...]  # (prime, subgroup), primes increasing

    @property
    def primes(self) -> Tuple[int, ...]:
        return tuple(p for p, _ in self.entries)

    def subgroup_for(self, p: int) -> Subgroup:
        for q, s in self.entries:
            if q == p:
                return s
        raise NoSuchPrime(f"{p} is not a prime divisor")

    def masks(self) -> Tuple[int, ...]:
        return tuple(s.members for _, s in self.entries)


def _subgroup_key(mask: int) -> Tuple[int, ...]:
    """Lexicographic order key: the sorted member list."""
    return tuple(bit_list(mask))


def permutes(A: Subgroup, B: Subgroup) -> bool:
    """True iff AB = BA as sets.

    AB = BA holds exactly when the product set AB is closed under
    inversion, since (AB)^-1 = BA; that needs only one product-set pass.
    """
    G = A.parent
    ab = product_set(A, B)
    inv_mask = bitset(int(G.inverse[x]) for x in bit_list(ab))
    return inv_mask == ab


def sylow_subgroup(G: GroupTable, p: int) -> Subgroup:
    """One Sylow p-subgroup, built by constructive ascent.

    Start from the cyclic group on the smallest-index element of order p;
    while short of full order p^e, adjoin the smallest-index element of
    p-power order that normalizes the current subgroup and lies outside
    it.  Each step multiplies the order by p, so the ascent cannot stall
    on a valid group.
    """
    fact = factorize(G.n)
    e = fact.exponent(p)
    if e == 0:
        raise NoSuchPrime(f"{p} does not divide {G.n}")
    target = p**e

    seed = -1
    for x in range(G.n):
        if G.element_order(x) == p:
            seed = x
            break
    assert seed >= 0, "Cauchy guarantees an element of order p"
    P = subgroup_closure(G, [seed])

    while P.order < target:
        members = P.members
        elems = np.fromiter(bit_list(members), dtype=np.int32)
        extended = False
        for y in range(G.n):
            if (members >> y) & 1:
                continue
            conj = G.table[G.table[y, elems], G.inverse[y]]
            if bitset(int(c) for c in conj) != members:
                continue
            o = G.element_order(y)
            while o % p == 0:
                o //= p
            if o != 1:
                continue
            P = subgroup_closure(G, bit_list(members) + [y])
            extended = True
            break
        assert extended and P.order > members.bit_count(), "ascent stuck"
    return P


def all_sylow_subgroups(G: GroupTable, p: int) -> List[Subgroup]:
    """All conjugates of ``sylow_subgroup(G, p)`` in lexicographic order."""
    P = sylow_subgroup(G, p)
    elems = np.fromiter(P.elements(), dtype=np.int32)
    seen = set()
    for g in range(G.n):
        conj = G.table[G.table[g, elems], G.inverse[g]]
        seen.add(bitset(int(c) for c in conj))
    masks = sorted(seen, key=_subgroup_key)
    assert len(masks) % p == 1, "Sylow count must be 1 mod p"
    return [Subgroup(G, m) for m in masks]


def sylow_basis(G: GroupTable) -> SylowBasis:
    """First pairwise-permutable selection in deterministic order.

    Raises :class:`NotSolvable` when no selection works, which happens
    exactly for non-solvable groups.
    """
    fact = factorize(G.n)
    candidates = [all_sylow_subgroups(G, p) for p in fact.primes]

    chosen: List[Subgroup] = []

    def search(i: int) -> bool:
        if i == len(candidates):
            return True
        for cand in candidates[i]:
            if all(permutes(prev, cand) for prev in chosen):
                chosen.append(cand)
                if search(i + 1):
                    return True
                chosen.pop()
        return False

    if not search(0):
        raise NotSolvable(f"no Sylow basis for group of order {G.n}")
    return SylowBasis(G, tuple(zip(fact.primes, chosen)))


def all_sylow_bases(G: GroupTable) -> List[SylowBasis]:
    """The conjugates of one basis, deduplicated; at most n bases."""
    base = sylow_basis(G)
    member_arrays = [np.fromiter(s.elements(), dtype=np.int32) for _, s in base.entries]
    primes = base.primes

    seen: Dict[Tuple[int, ...], None] = {}
    out: List[SylowBasis] = []
    for g in range(G.n):
        masks = []
        for elems in member_arrays:
            conj = G.table[G.table[g, elems], G.inverse[g]]
            masks.append(bitset(int(c) for c in conj))
        key = tuple(masks)
        if key in seen:
            continue
        seen[key] = None
        entries = tuple((p, Subgroup(G, m)) for p, m in zip(primes, masks))
        out.append(SylowBasis(G, entries))
    assert len(out) <= G.n
    return out
