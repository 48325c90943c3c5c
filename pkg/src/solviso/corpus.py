"""Group-family constructors, the test corpus, and the benchmark harness.

Families match the CLI surface: cyclic, elemabelian, dihedral,
quaternion8, heisenberg, semidirect, directprod.  A few classic groups
(symmetric, alternating, SL(2,p)) are built directly from permutations
and matrices for tests that need them; they are not CLI families.
"""

from __future__ import annotations

import itertools
import time
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .counters import RunCounters
from .errors import BadParams
from .group_core import GroupTable, validate_table
from .iso_engine import generator_enumeration_iso, solvable_iso


def cyclic(n: int) -> GroupTable:
    if n < 1:
        raise BadParams("cyclic order must be positive")
    idx = np.arange(n, dtype=np.int32)
    return validate_table(np.add.outer(idx, idx) % n)


def elemabelian(p: int, k: int) -> GroupTable:
    if not _is_prime(p) or k < 1:
        raise BadParams("elemabelian needs a prime p and k >= 1")
    n = p**k
    digits = np.array(
        [[(x // p**i) % p for i in range(k)] for x in range(n)], dtype=np.int64
    )
    powers = np.array([p**i for i in range(k)], dtype=np.int64)
    table = np.empty((n, n), dtype=np.int32)
    for x in range(n):
        summed = (digits[x] + digits) % p
        table[x] = summed @ powers
    return validate_table(table)


def dihedral(m: int) -> GroupTable:
    """Dihedral group of order 2m (symmetries of the m-gon for m >= 3)."""
    if m < 1:
        raise BadParams("dihedral needs m >= 1")
    n = 2 * m

    def idx(flip: int, rot: int) -> int:
        return flip * m + rot % m

    table = np.empty((n, n), dtype=np.int32)
    for f1 in (0, 1):
        for r1 in range(m):
            for f2 in (0, 1):
                for r2 in range(m):
                    if f2 == 0:
                        out = idx(f1, r1 + r2)
                    else:
                        out = idx(1 - f1, r2 - r1)
                    table[idx(f1, r1), idx(f2, r2)] = out
    return validate_table(table)


_Q8_ELEMS = [(1, 0), (-1, 0), (1, 1), (-1, 1), (1, 2), (-1, 2), (1, 3), (-1, 3)]
_Q8_CYCLE = {(1, 2): (1, 3), (2, 3): (1, 1), (3, 1): (1, 2),
             (2, 1): (-1, 3), (3, 2): (-1, 1), (1, 3): (-1, 2)}


def _qmul(x: Tuple[int, int], y: Tuple[int, int]) -> Tuple[int, int]:
    (sx, ax), (sy, ay) = x, y
    if ax == 0:
        return (sx * sy, ay)
    if ay == 0:
        return (sx * sy, ax)
    if ax == ay:
        return (-sx * sy, 0)
    s, a = _Q8_CYCLE[(ax, ay)]
    return (s * sx * sy, a)


def quaternion8() -> GroupTable:
    index = {e: i for i, e in enumerate(_Q8_ELEMS)}
    table = np.empty((8, 8), dtype=np.int32)
    for i, x in enumerate(_Q8_ELEMS):
        for j, y in enumerate(_Q8_ELEMS):
            table[i, j] = index[_qmul(x, y)]
    return validate_table(table)


def heisenberg(p: int) -> GroupTable:
    """Upper unitriangular 3x3 matrices over the p-element field."""
    if not _is_prime(p):
        raise BadParams("heisenberg needs a prime")
    n = p**3

    def idx(a: int, b: int, c: int) -> int:
        return (a % p) * p * p + (b % p) * p + (c % p)

    table = np.empty((n, n), dtype=np.int32)
    for a1, b1, c1 in itertools.product(range(p), repeat=3):
        for a2, b2, c2 in itertools.product(range(p), repeat=3):
            table[idx(a1, b1, c1), idx(a2, b2, c2)] = idx(
                a1 + a2, b1 + b2, c1 + c2 + a1 * b2
            )
    return validate_table(table)


def semidirect(p: int, q: int) -> GroupTable:
    """Z_q semidirect Z_p with the smallest faithful action; needs p | q-1."""
    if not _is_prime(p) or not _is_prime(q):
        raise BadParams("semidirect needs primes p and q")
    if (q - 1) % p != 0:
        raise BadParams(f"needs p | q-1, got p={p}, q={q}")
    t = -1
    for cand in range(2, q):
        if pow(cand, p, q) == 1 and cand != 1:
            ok = all(pow(cand, d, q) != 1 for d in range(1, p))
            if ok:
                t = cand
                break
    assert t > 0, "a generator of the order-p subgroup of (Z/q)* exists"
    n = p * q

    def idx(a: int, b: int) -> int:
        return (a % q) * p + (b % p)

    table = np.empty((n, n), dtype=np.int32)
    for a1 in range(q):
        for b1 in range(p):
            for a2 in range(q):
                for b2 in range(p):
                    table[idx(a1, b1), idx(a2, b2)] = idx(
                        a1 + a2 * pow(t, b1, q), b1 + b2
                    )
    return validate_table(table)


def directprod(A: GroupTable, B: GroupTable) -> GroupTable:
    na, nb = A.n, B.n
    table = (
        A.table.astype(np.int64)[:, None, :, None] * nb
        + B.table.astype(np.int64)[None, :, None, :]
    ).reshape(na * nb, na * nb)
    return validate_table(table.astype(np.int32))


def symmetric_group(k: int) -> GroupTable:
    perms = sorted(itertools.permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    n = len(perms)
    table = np.empty((n, n), dtype=np.int32)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            table[i, j] = index[tuple(p[q[x]] for x in range(k))]
    return validate_table(table)


def alternating_group(k: int) -> GroupTable:
    perms = sorted(p for p in itertools.permutations(range(k)) if _is_even(p))
    index = {p: i for i, p in enumerate(perms)}
    n = len(perms)
    table = np.empty((n, n), dtype=np.int32)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            table[i, j] = index[tuple(p[q[x]] for x in range(k))]
    return validate_table(table)


def special_linear_2(p: int) -> GroupTable:
    """SL(2, p): 2x2 matrices of determinant 1 over the p-element field."""
    if not _is_prime(p):
        raise BadParams("SL(2, p) needs a prime")
    mats = []
    for a, b, c, d in itertools.product(range(p), repeat=4):
        if (a * d - b * c) % p == 1:
            mats.append((a, b, c, d))
    index = {m: i for i, m in enumerate(mats)}
    n = len(mats)
    table = np.empty((n, n), dtype=np.int32)
    for i, (a, b, c, d) in enumerate(mats):
        for j, (e, f, g, h) in enumerate(mats):
            prod = ((a * e + b * g) % p, (a * f + b * h) % p,
                    (c * e + d * g) % p, (c * f + d * h) % p)
            table[i, j] = index[prod]
    return validate_table(table)


def _is_even(perm: Sequence[int]) -> bool:
    inv = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                inv += 1
    return inv % 2 == 0


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    d = 2
    while d * d <= m:
        if m % d == 0:
            return False
        d += 1
    return True


def make_family(family: str, params: Sequence) -> GroupTable:
    """CLI-facing family dispatcher; raises :class:`BadParams`."""
    try:
        if family == "cyclic":
            (n,) = params
            return cyclic(int(n))
        if family == "elemabelian":
            p, k = params
            return elemabelian(int(p), int(k))
        if family == "dihedral":
            (m,) = params
            return dihedral(int(m))
        if family == "quaternion8":
            if params:
                raise BadParams("quaternion8 takes no parameters")
            return quaternion8()
        if family == "heisenberg":
            (p,) = params
            return heisenberg(int(p))
        if family == "semidirect":
            p, q = params
            return semidirect(int(p), int(q))
        if family == "directprod":
            A, B = params
            if not isinstance(A, GroupTable) or not isinstance(B, GroupTable):
                raise BadParams("directprod takes two group tables")
            return directprod(A, B)
    except ValueError as exc:
        raise BadParams(str(exc)) from exc
    raise BadParams(f"unknown family {family!r}")


_CORPUS_CACHE: Optional[List[Tuple[str, GroupTable]]] = None


def solvable_corpus() -> List[Tuple[str, GroupTable]]:
    """The named solvable test corpus (orders <= 64, every family)."""
    global _CORPUS_CACHE
    if _CORPUS_CACHE is not None:
        return _CORPUS_CACHE
    entries: List[Tuple[str, GroupTable]] = []

    for n in (2, 3, 4, 6, 8, 9, 12, 15, 16, 21, 27, 32, 64):
        entries.append((f"cyclic_{n}", cyclic(n)))
    for p, k in ((2, 2), (2, 3), (2, 4), (3, 2), (5, 2)):
        entries.append((f"elemabelian_{p}_{k}", elemabelian(p, k)))
    for m in (3, 4, 5, 6, 8, 16):
        entries.append((f"dihedral_{m}", dihedral(m)))
    entries.append(("quaternion8", quaternion8()))
    entries.append(("heisenberg_2", heisenberg(2)))
    entries.append(("heisenberg_3", heisenberg(3)))
    for p, q in ((2, 5), (2, 7), (3, 7), (3, 13)):
        entries.append((f"semidirect_{p}_{q}", semidirect(p, q)))

    z2 = cyclic(2)
    z3 = cyclic(3)
    z4 = cyclic(4)
    entries.append(("prod_z4_z2", directprod(z4, z2)))
    entries.append(("prod_z2_z3", directprod(z2, z3)))
    entries.append(("prod_z6_z2", directprod(cyclic(6), z2)))
    entries.append(("prod_s3_z2", directprod(semidirect(2, 3), z2)))
    entries.append(("prod_z4_z4", directprod(z4, z4)))
    entries.append(("prod_z8_z2", directprod(cyclic(8), z2)))
    entries.append(("prod_z4_z2_z2", directprod(directprod(z4, z2), z2)))
    entries.append(("prod_d4_z2", directprod(dihedral(4), z2)))
    entries.append(("prod_q8_z2", directprod(quaternion8(), z2)))
    entries.append(("prod_z9_z3", directprod(cyclic(9), z3)))
    entries.append(("prod_z3_z7", directprod(z3, cyclic(7))))
    entries.append(("alternating_4", alternating_group(4)))
    entries.append(("symmetric_4", symmetric_group(4)))

    _CORPUS_CACHE = entries
    return entries


# --- benchmark harness ----------------------------------------------------

BENCH_ORDER_LIMIT = 64
CSV_HEADER = "group_a,group_b,order,algo,verdict,micros,bases,series,sequences,canon_nodes"


def run_bench(max_order: int, out_path, corpus=None) -> List[str]:
    """Compare the hybrid pipeline against generator enumeration.

    Runs both algorithms on every intra-order pair of the corpus (order
    capped at ``max_order``), asserts the verdicts agree, and writes one
    CSV row per (pair, algorithm) with wall time and loop counters.
    """
    if max_order > BENCH_ORDER_LIMIT:
        raise BadParams(f"max_order capped at {BENCH_ORDER_LIMIT}")
    groups = [(name, G) for name, G in (corpus or solvable_corpus()) if G.n <= max_order]
    rows = [CSV_HEADER]
    for (name_a, A), (name_b, B) in itertools.combinations_with_replacement(groups, 2):
        if A.n != B.n:
            continue
        verdicts = {}
        for algo in ("hybrid", "genenum"):
            counters = RunCounters()
            start = time.perf_counter()
            if algo == "hybrid":
                witness = solvable_iso(A, B, counters=counters)
            else:
                witness = generator_enumeration_iso(A, B, counters=counters)
            micros = int((time.perf_counter() - start) * 1e6)
            verdict = "iso" if witness is not None else "noniso"
            verdicts[algo] = verdict
            rows.append(
                f"{name_a},{name_b},{A.n},{algo},{verdict},{micros},"
                f"{counters.bases},{counters.series},{counters.sequences},{counters.canon_nodes}"
            )
        assert verdicts["hybrid"] == verdicts["genenum"], (name_a, name_b)
    text = "\n".join(rows) + "\n"
    if out_path is not None:
        with open(out_path, "w", encoding="ascii") as fh:
            fh.write(text)
    return rows
