"""Cayley-table groups and elementary subgroup machinery.

Elements are 0-based indices internally; the identity is detected, not
assumed to sit at index 0.  Subgroups are bitsets (arbitrary-precision
ints), never element lists, so intersection/union/containment are
word-parallel.  All objects here are immutable after construction and
safe to share across workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, List, Sequence, Tuple

import numpy as np

from .errors import (
    MissingInverse,
    NoIdentity,
    NonAssociative,
    NotGenerating,
    NotLatinSquare,
    NotNested,
)


def bitset(elems: Iterable[int]) -> int:
    mask = 0
    for e in elems:
        mask |= 1 << e
    return mask


def bits(mask: int) -> Iterator[int]:
    """Iterate set bit positions in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bit_list(mask: int) -> List[int]:
    return list(bits(mask))


class GroupTable:
    """A validated finite group given by its n x n multiplication table.

    Construct via :func:`validate_table`; the constructor trusts its
    arguments.
    """

    __slots__ = ("n", "table", "identity", "inverse", "name")

    def __init__(self, table: np.ndarray, identity: int, inverse: np.ndarray, name: str = ""):
        self.n = int(table.shape[0])
        self.table = table
        self.identity = int(identity)
        self.inverse = inverse
        self.name = name
        table.setflags(write=False)
        inverse.setflags(write=False)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def conj(self, g: int, h: int) -> int:
        """g * h * g^-1."""
        return int(self.table[self.table[g, h], self.inverse[g]])

    def element_order(self, x: int) -> int:
        k = 1
        y = x
        while y != self.identity:
            y = int(self.table[y, x])
            k += 1
        return k

    def all_elements_mask(self) -> int:
        return (1 << self.n) - 1

    def __repr__(self) -> str:
        label = self.name or "group"
        return f"GroupTable({label}, n={self.n})"


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of ``parent`` stored as a membership bitset."""

    parent: GroupTable
    members: int
    order: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "order", self.members.bit_count())

    def __contains__(self, x: int) -> bool:
        return bool((self.members >> x) & 1)

    def elements(self) -> List[int]:
        return bit_list(self.members)

    def is_trivial(self) -> bool:
        return self.order == 1

    def __le__(self, other: "Subgroup") -> bool:
        return self.members & ~other.members == 0

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, members={self.elements()})"


@dataclass(frozen=True)
class PrimeFactorization:
    """n = prod p_i^e_i with primes in increasing order."""

    n: int
    factors: Tuple[Tuple[int, int], ...]

    @property
    def primes(self) -> Tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    @property
    def smallest_prime(self) -> int:
        """Smallest prime divisor; 2 for n = 1 by convention."""
        return self.factors[0][0] if self.factors else 2


def factorize(n: int) -> PrimeFactorization:
    """Trial-division factorization; n = 1 gives an empty factor list."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    factors = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        factors.append((m, 1))
    return PrimeFactorization(n, tuple(factors))


def validate_table(raw) -> GroupTable:
    """Check all four group axioms and return a :class:`GroupTable`.

    Raises :class:`NotLatinSquare`, :class:`NoIdentity`,
    :class:`NonAssociative` or :class:`MissingInverse`, naming the first
    witness in row-major order.
    """
    table = np.asarray(raw, dtype=np.int32)
    if table.ndim != 2 or table.shape[0] != table.shape[1]:
        raise NotLatinSquare("row", 0, -1)
    n = table.shape[0]
    if n == 0 or table.min() < 0 or table.max() >= n:
        raise NotLatinSquare("row", 0, int(table.max(initial=-1)))

    for i in range(n):
        row_seen = np.zeros(n, dtype=bool)
        for j in range(n):
            v = int(table[i, j])
            if row_seen[v]:
                raise NotLatinSquare("row", i, v)
            row_seen[v] = True
    for j in range(n):
        col_seen = np.zeros(n, dtype=bool)
        for i in range(n):
            v = int(table[i, j])
            if col_seen[v]:
                raise NotLatinSquare("column", j, v)
            col_seen[v] = True

    idx = np.arange(n, dtype=np.int32)
    identity = -1
    for e in range(n):
        if np.array_equal(table[e], idx) and np.array_equal(table[:, e], idx):
            identity = e
            break
    if identity < 0:
        raise NoIdentity()

    inverse = np.full(n, -1, dtype=np.int32)
    for x in range(n):
        hits = np.nonzero(table[x] == identity)[0]
        if hits.size == 0 or table[hits[0], x] != identity:
            raise MissingInverse(x)
        inverse[x] = hits[0]

    # Direct n^3 associativity check, vectorized: T[T[a,b],c] vs T[a,T[b,c]].
    lhs = table[table, :]
    rhs = table[:, table]
    if not np.array_equal(lhs, rhs):
        bad = np.argwhere(lhs != rhs)
        a, b, c = (int(v) for v in bad[0])
        raise NonAssociative(a, b, c)

    return GroupTable(table, identity, inverse)


def subgroup_closure(G: GroupTable, seed: Iterable[int]) -> Subgroup:
    """Smallest subgroup containing ``seed`` and the identity."""
    current = {G.identity}
    current.update(int(x) for x in seed)
    cur = np.fromiter(sorted(current), dtype=np.int32)
    while True:
        prods = np.unique(G.table[np.ix_(cur, cur)])
        if prods.size == cur.size:
            break
        cur = prods
    return Subgroup(G, bitset(int(x) for x in cur))


def closure_mask(G: GroupTable, seed_mask: int) -> int:
    """Bitset variant of :func:`subgroup_closure`."""
    return subgroup_closure(G, bits(seed_mask)).members


def is_normal(H: Subgroup, K: Subgroup) -> bool:
    """True iff k h k^-1 lies in H for all k in K, h in H.

    Requires H <= K (raises :class:`NotNested` otherwise).
    """
    if H.parent is not K.parent:
        raise NotNested("subgroups of different parents")
    if not H <= K:
        raise NotNested("H is not contained in K")
    G = H.parent
    hs = np.fromiter(H.elements(), dtype=np.int32)
    for k in K.elements():
        conj = G.table[G.table[k, hs], G.inverse[k]]
        for c in conj:
            if int(c) not in H:
                return False
    return True


def derived_series(G: GroupTable) -> List[Subgroup]:
    """G = D0 >= D1 >= ... until stabilization, D_{i+1} = [D_i, D_i].

    The last entry is trivial iff G is solvable.
    """
    series = [Subgroup(G, G.all_elements_mask())]
    while True:
        cur = series[-1]
        elems = np.fromiter(cur.elements(), dtype=np.int32)
        ia = G.inverse[elems]
        # commutator a^-1 b^-1 a b over all pairs
        left = G.table[np.ix_(ia, ia)]
        right = G.table[np.ix_(elems, elems)]
        comms = np.unique(G.table[left, right])
        nxt = subgroup_closure(G, (int(c) for c in comms))
        if nxt.members == cur.members:
            break
        series.append(nxt)
    return series


def is_solvable(G: GroupTable) -> bool:
    return derived_series(G)[-1].order == 1


def product_set(A: Subgroup, B: Subgroup) -> int:
    """Bitset of {a*b : a in A, b in B}."""
    if A.parent is not B.parent:
        raise NotNested("subgroups of different parents")
    G = A.parent
    prods = np.unique(G.table[np.ix_(A.elements(), B.elements())])
    return bitset(int(x) for x in prods)


def left_cosets(H: Subgroup, K: Subgroup) -> List[int]:
    """Left cosets xH inside K as bitsets, ordered by smallest member."""
    if not H <= K:
        raise NotNested("H is not contained in K")
    G = H.parent
    hs = np.fromiter(H.elements(), dtype=np.int32)
    remaining = K.members
    out = []
    while remaining:
        x = (remaining & -remaining).bit_length() - 1
        coset = bitset(int(v) for v in G.table[x, hs])
        out.append(coset)
        remaining &= ~coset
    return out


# --- .cayley text format ------------------------------------------------
#
# line 1: n
# lines 2..n+1: n whitespace-separated 1-based element indices; entry j of
# line i+1 is the product of element i and element j.


def parse_cayley(text: str) -> GroupTable:
    tokens = text.split()
    if not tokens:
        raise NotLatinSquare("row", 0, -1)
    n = int(tokens[0])
    body = tokens[1:]
    if len(body) != n * n:
        raise NotLatinSquare("row", 0, -1)
    raw = np.array([int(t) - 1 for t in body], dtype=np.int32).reshape(n, n)
    return validate_table(raw)


def load_cayley(path) -> GroupTable:
    with open(path, "r", encoding="ascii") as fh:
        return parse_cayley(fh.read())


def format_cayley(G: GroupTable) -> str:
    lines = [str(G.n)]
    for i in range(G.n):
        lines.append(" ".join(str(int(v) + 1) for v in G.table[i]))
    return "\n".join(lines) + "\n"


def save_cayley(G: GroupTable, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_cayley(G))


def relabel(G: GroupTable, perm: Sequence[int]) -> GroupTable:
    """Group with element i renamed to perm[i] (a bijection on 0..n-1)."""
    p = np.asarray(perm, dtype=np.int32)
    n = G.n
    if sorted(int(v) for v in p) != list(range(n)):
        raise ValueError("perm is not a permutation")
    new = np.empty_like(G.table)
    new[np.ix_(p, p)] = p[G.table]
    return validate_table(new)
