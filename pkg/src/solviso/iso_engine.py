"""Top-level drivers: brute-force oracle, pair testing, the full hybrid
isomorphism pipeline, and canonical forms at pair, split and group level.

The hybrid route composes the reduction loops: one split of G against
the splits of all conjugate bases of H; one series of P2 against all
series of Q2; one generating sequence of P1 against all equal-length
sequences of Q1; each innermost candidate decided through the graph
encodings.  Every positive answer carries a witness verified from
scratch before being returned.

The generator-enumeration brute force is the independent oracle for
everything else: it never touches the graph machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np

from .counters import RunCounters
from .decomposition import AlphaDecomposition, alpha_decomp_iso, alpha_split
from .errors import NotSolvable, WitnessVerificationFailed
from .graphenc import AugmentedPair, XEncoding, build_X, decode_Y
from .graphiso import are_graphs_isomorphic, canonize_colored_graph
from .group_core import GroupTable, Subgroup, bit_list, is_solvable, validate_table
from .ordering import (
    GeneratingSequence,
    all_generating_sequences,
    enumerate_generating_sequences,
    greedy_generating_sequence,
)
from .series import AlphaCompositionPair, alpha_pair_iso_loop, enumerate_composition_series
from .sylow import all_sylow_bases, sylow_basis


def verify_isomorphism(G: GroupTable, H: GroupTable, phi) -> bool:
    """Independent check: phi is a bijection and a homomorphism."""
    phi = np.asarray(phi, dtype=np.int64)
    if G.n != H.n or sorted(int(v) for v in phi) != list(range(G.n)):
        return False
    return bool(np.array_equal(phi[G.table], H.table[np.ix_(phi, phi)]))


def generator_enumeration_iso(
    G: GroupTable, H: GroupTable, counters: Optional[RunCounters] = None
) -> Optional[np.ndarray]:
    """Brute-force isomorphism search over generator images.

    Fixes the greedy generating sequence of G and backtracks over image
    tuples in H, extending each partial map multiplicatively and pruning
    on the first inconsistency.  The first witness in lexicographic
    image order is verified in full and returned.  This is the oracle
    for every other isomorphism claim in the package.
    """
    if G.n != H.n:
        return None
    n = G.n
    gens = greedy_generating_sequence(Subgroup(G, G.all_elements_mask())).elems
    k = len(gens)

    phi = np.full(n, -1, dtype=np.int64)
    owner = np.full(n, -1, dtype=np.int64)  # image -> preimage
    phi[G.identity] = H.identity
    owner[H.identity] = G.identity
    assigned: List[int] = [G.identity]

    def set_image(x: int, y: int, trail: List[int]) -> bool:
        cur = phi[x]
        if cur >= 0:
            return cur == y
        if owner[y] >= 0:
            return False
        phi[x] = y
        owner[y] = x
        assigned.append(x)
        trail.append(x)
        return True

    def close(new_start: int, trail: List[int]) -> bool:
        qi = new_start
        while qi < len(assigned):
            a = assigned[qi]
            qi += 1
            for idx in range(len(assigned)):
                b = assigned[idx]
                for x, y in ((a, b), (b, a)):
                    z = int(G.table[x, y])
                    w = int(H.table[phi[x], phi[y]])
                    if not set_image(z, w, trail):
                        return False
        return True

    def undo(trail: List[int], mark: int) -> None:
        while len(trail) > mark:
            x = trail.pop()
            owner[phi[x]] = -1
            phi[x] = -1
            assigned.pop()

    def search(i: int) -> Optional[np.ndarray]:
        if i == k:
            if len(assigned) != n:
                return None
            result = phi.copy()
            if verify_isomorphism(G, H, result):
                return result
            return None
        for y in range(n):
            if counters is not None:
                counters.sequences += 1
            trail: List[int] = []
            start = len(assigned)
            if set_image(int(gens[i]), y, trail) and close(start - 0, trail):
                found = search(i + 1)
                if found is not None:
                    return found
            undo(trail, 0)
        return None

    if k == 0:
        return phi.copy() if n == 1 else None
    return search(0)


def choose_alpha(n: int) -> int:
    """Threshold between the generator route and the series route.

    round(log2 n / log2 log2 n), clamped to at least 2; pinned to 2 for
    n < 4 where the formula degenerates.
    """
    if n < 4:
        return 2
    return max(2, round(math.log2(n) / math.log2(math.log2(n))))


@lru_cache(maxsize=16)
def _encode(pair: AugmentedPair) -> XEncoding:
    return build_X(pair)


def _vertex_to_element(enc: XEncoding) -> np.ndarray:
    out = np.full(enc.num_vertices, -1, dtype=np.int64)
    out[enc.element_vertex] = np.arange(len(enc.element_vertex), dtype=np.int64)
    return out


def augmented_pair_iso(
    pair_a: AugmentedPair, pair_b: AugmentedPair, counters: Optional[RunCounters] = None
) -> Optional[np.ndarray]:
    """Test two augmented pairs through their graph encodings.

    Cheap mismatches answer None immediately; otherwise the graph
    witness is pulled back to an element bijection and verified to be a
    group isomorphism matching P1, every series subgroup, and g.  A
    verification failure is a canonizer bug and raises.
    """
    G, H = pair_a.parent, pair_b.parent
    if G.n != H.n:
        return None
    if pair_a.P1.order != pair_b.P1.order:
        return None
    if pair_a.S2.length != pair_b.S2.length:
        return None
    if len(pair_a.g.elems) != len(pair_b.g.elems):
        return None

    enc_a = _encode(pair_a)
    enc_b = _encode(pair_b)
    vmap = are_graphs_isomorphic(enc_a, enc_b, counters)
    if vmap is None:
        return None

    b_elem = _vertex_to_element(enc_b)
    phi = b_elem[vmap[enc_a.element_vertex]]
    if np.any(phi < 0):
        raise WitnessVerificationFailed("graph witness does not map element nodes")
    if not verify_isomorphism(G, H, phi):
        raise WitnessVerificationFailed("graph witness is not a group isomorphism")
    if _image_mask(phi, pair_a.P1.members) != pair_b.P1.members:
        raise WitnessVerificationFailed("witness moves P1 off Q1")
    for sa, sb in zip(pair_a.S2.chain, pair_b.S2.chain):
        if _image_mask(phi, sa.members) != sb.members:
            raise WitnessVerificationFailed("witness breaks the series")
    if any(int(phi[x]) != y for x, y in zip(pair_a.g.elems, pair_b.g.elems)):
        raise WitnessVerificationFailed("witness does not map g to h")
    return phi


def _image_mask(phi: np.ndarray, mask: int) -> int:
    out = 0
    for x in bit_list(mask):
        out |= 1 << int(phi[x])
    return out


def solvable_iso(
    G: GroupTable,
    H: GroupTable,
    alpha: Optional[int] = None,
    counters: Optional[RunCounters] = None,
    check_oracle: bool = False,
) -> Optional[np.ndarray]:
    """Full hybrid pipeline; returns a verified isomorphism or None.

    Raises :class:`NotSolvable` on non-solvable input.  With
    ``check_oracle`` the verdict is asserted against the brute-force
    oracle (slow; meant for the test suite).
    """
    if not is_solvable(G) or not is_solvable(H):
        raise NotSolvable("hybrid pipeline requires solvable input")
    result = None
    if G.n == H.n:
        a = choose_alpha(G.n) if alpha is None else alpha

        def series_tester(pair_g: AlphaCompositionPair, pair_h: AlphaCompositionPair):
            g = greedy_generating_sequence(pair_g.P1)
            for h in enumerate_generating_sequences(pair_h.P1, len(g.elems)):
                if counters is not None:
                    counters.sequences += 1
                found = augmented_pair_iso(
                    AugmentedPair(pair_g.P1, pair_g.S2, g),
                    AugmentedPair(pair_h.P1, pair_h.S2, h),
                    counters,
                )
                if found is not None:
                    return found
            return None

        def split_tester(dec_g: AlphaDecomposition, dec_h: AlphaDecomposition):
            return alpha_pair_iso_loop(dec_g, dec_h, series_tester, counters)

        result = alpha_decomp_iso(G, H, a, split_tester, counters)
        if result is not None and not verify_isomorphism(G, H, result):
            raise WitnessVerificationFailed("pipeline produced a bad witness")

    if check_oracle:
        oracle = generator_enumeration_iso(G, H)
        assert (result is None) == (oracle is None), "hybrid and oracle disagree"
    return result


# --- canonical forms ----------------------------------------------------


@dataclass(frozen=True)
class CanonicalPairForm:
    """Relabeled table plus the images of P1 and every series subgroup.

    Two augmented pairs are isomorphic exactly when their forms (gens
    included) coincide; dropping gens characterizes plain pair
    isomorphism.
    """

    table: Tuple[Tuple[int, ...], ...]
    p1: Tuple[int, ...]
    series: Tuple[Tuple[int, ...], ...]
    gens: Tuple[int, ...]

    def key_bytes(self) -> bytes:
        """Serialization of (table, P1 image, series images), 1-based."""
        return _serialize(self.table, self.p1, self.series, None)

    def full_bytes(self) -> bytes:
        return _serialize(self.table, self.p1, self.series, self.gens)


@dataclass(frozen=True)
class CanonicalDecompForm:
    """(table, P1 image, P2 image): the split-level canonical form."""

    table: Tuple[Tuple[int, ...], ...]
    p1: Tuple[int, ...]
    p2: Tuple[int, ...]

    def key_bytes(self) -> bytes:
        return _serialize(self.table, self.p1, (self.p2,), None)


@dataclass(frozen=True)
class CanonicalGroupForm:
    """Canonical multiplication table; equal across a whole iso class."""

    table: Tuple[Tuple[int, ...], ...]

    def key_bytes(self) -> bytes:
        return _serialize(self.table, None, None, None)

    def text(self) -> str:
        """The table in the .cayley format (1-based entries)."""
        n = len(self.table)
        lines = [str(n)]
        for row in self.table:
            lines.append(" ".join(str(v + 1) for v in row))
        return "\n".join(lines) + "\n"


def _serialize(table, p1, series, gens) -> bytes:
    lines = [f"n {len(table)}"]
    for row in table:
        lines.append(" ".join(str(v + 1) for v in row))
    if p1 is not None:
        lines.append("p1 " + " ".join(str(v + 1) for v in p1))
    if series is not None:
        for i, level in enumerate(series):
            lines.append(f"s{i} " + " ".join(str(v + 1) for v in level))
    if gens is not None:
        lines.append("g " + " ".join(str(v + 1) for v in gens))
    return "\n".join(lines).encode("ascii")


def canon_augmented_pair(
    pair: AugmentedPair, counters: Optional[RunCounters] = None
) -> CanonicalPairForm:
    """Encode, canonize the graph, decode: a canonical form for pairs."""
    enc = _encode(pair)
    cg = canonize_colored_graph(enc, counters)
    dec = decode_Y(cg.graph, enc.ell, enc.m)
    return CanonicalPairForm(
        table=tuple(tuple(int(v) for v in row) for row in dec.table),
        p1=dec.p1,
        series=dec.series,
        gens=dec.gens,
    )


def canon_alpha_decomp(
    dec: AlphaDecomposition, counters: Optional[RunCounters] = None
) -> CanonicalDecompForm:
    """Least pair form over every series of P2 and every irredundant
    generating sequence of P1, projected to the split level.

    Sequences of all lengths are enumerated: the admissible set must be
    invariant under isomorphism for the minimum to be canonical, and
    fixed-length slices are not.
    """
    best: Optional[Tuple[bytes, CanonicalPairForm]] = None
    for s2 in enumerate_composition_series(dec.P2):
        if counters is not None:
            counters.series += 1
        for g in all_generating_sequences(dec.P1):
            if counters is not None:
                counters.sequences += 1
            form = canon_augmented_pair(AugmentedPair(dec.P1, s2, g), counters)
            key = form.key_bytes()
            if best is None or key < best[0]:
                best = (key, form)
    assert best is not None, "every subgroup has at least one series"
    form = best[1]
    return CanonicalDecompForm(table=form.table, p1=form.p1, p2=form.series[-1])


def canon_group(
    G: GroupTable,
    alpha: Optional[int] = None,
    counters: Optional[RunCounters] = None,
    check_oracle: bool = False,
) -> CanonicalGroupForm:
    """Least split form over all conjugate Sylow bases of G.

    The output table is revalidated as a group; with ``check_oracle`` it
    is also checked isomorphic to G by the brute-force oracle.
    """
    if not is_solvable(G):
        raise NotSolvable("canonical forms are defined for solvable input")
    a = choose_alpha(G.n) if alpha is None else alpha
    best: Optional[Tuple[bytes, CanonicalDecompForm]] = None
    memo = {}
    for basis in all_sylow_bases(G):
        if counters is not None:
            counters.bases += 1
        dec = alpha_split(basis, a)
        key = (dec.P1.members, dec.P2.members)
        if key not in memo:
            memo[key] = canon_alpha_decomp(dec, counters)
        form = memo[key]
        fk = form.key_bytes()
        if best is None or fk < best[0]:
            best = (fk, form)
    assert best is not None
    table = best[1].table
    out = CanonicalGroupForm(table=table)
    canon_table = validate_table(np.array(table, dtype=np.int32))
    if check_oracle:
        assert generator_enumeration_iso(G, canon_table) is not None
    return out
