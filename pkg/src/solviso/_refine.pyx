# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled equitable color refinement (twin of _kernels.refine_py).

Lexicographic re-keying is done with stable counting sorts column by
column, which matches numpy's lexsort ordering exactly; outputs are
byte-identical to the pure implementation.
"""

import numpy as np

cimport numpy as cnp
from libc.stdlib cimport free, malloc
from libc.string cimport memset

cnp.import_array()


def refine_colors(cnp.int64_t[::1] indptr, cnp.int64_t[::1] indices, cnp.int64_t[::1] colors_in):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t nnz = indices.shape[0]
    cdef Py_ssize_t v, i, j, k, deg, base, maxdeg = 0, classes, new_classes
    cdef cnp.int64_t key, tmp

    out_arr = np.array(colors_in, dtype=np.int64, copy=True)
    cdef cnp.int64_t[::1] colors = out_arr
    if n == 0 or nnz == 0:
        return out_arr

    for v in range(n):
        deg = indptr[v + 1] - indptr[v]
        if deg > maxdeg:
            maxdeg = deg

    cdef Py_ssize_t cols = maxdeg + 1
    cdef cnp.int64_t *keys = <cnp.int64_t *> malloc(n * cols * sizeof(cnp.int64_t))
    cdef Py_ssize_t *order = <Py_ssize_t *> malloc(n * sizeof(Py_ssize_t))
    cdef Py_ssize_t *order2 = <Py_ssize_t *> malloc(n * sizeof(Py_ssize_t))
    cdef Py_ssize_t *counts = <Py_ssize_t *> malloc((n + 2) * sizeof(Py_ssize_t))
    cdef cnp.int64_t *newc = <cnp.int64_t *> malloc(n * sizeof(cnp.int64_t))
    if keys == NULL or order == NULL or order2 == NULL or counts == NULL or newc == NULL:
        free(keys); free(order); free(order2); free(counts); free(newc)
        raise MemoryError()

    classes = 0
    for v in range(n):
        if colors[v] + 1 > classes:
            classes = colors[v] + 1

    try:
        while True:
            # build keys: own color, then neighbor colors sorted ascending
            # over a row padded at the front with -1
            for v in range(n):
                base = v * cols
                keys[base] = colors[v]
                deg = indptr[v + 1] - indptr[v]
                for j in range(maxdeg - deg):
                    keys[base + 1 + j] = -1
                k = maxdeg - deg
                for j in range(deg):
                    keys[base + 1 + k + j] = colors[indices[indptr[v] + j]]
                # insertion sort the padded row (degrees are tiny)
                for i in range(1, maxdeg):
                    tmp = keys[base + 1 + i]
                    j = i - 1
                    while j >= 0 and keys[base + 1 + j] > tmp:
                        keys[base + 1 + j + 1] = keys[base + 1 + j]
                        j -= 1
                    keys[base + 1 + j + 1] = tmp

            # stable counting sorts, least-significant column first
            for v in range(n):
                order[v] = v
            for i in range(cols - 1, -1, -1):
                memset(counts, 0, (n + 2) * sizeof(Py_ssize_t))
                for v in range(n):
                    counts[keys[order[v] * cols + i] + 2] += 1
                for k in range(1, n + 2):
                    counts[k] += counts[k - 1]
                for v in range(n):
                    key = keys[order[v] * cols + i]
                    order2[counts[key + 1]] = order[v]
                    counts[key + 1] += 1
                order, order2 = order2, order

            # walk in key order, bumping the id on every key change
            new_classes = 0
            newc[order[0]] = 0
            for v in range(1, n):
                for i in range(cols):
                    if keys[order[v] * cols + i] != keys[order[v - 1] * cols + i]:
                        new_classes += 1
                        break
                newc[order[v]] = new_classes
            new_classes += 1

            if new_classes == classes:
                return out_arr
            for v in range(n):
                colors[v] = newc[v]
            classes = new_classes
    finally:
        free(keys)
        free(order)
        free(order2)
        free(counts)
        free(newc)
