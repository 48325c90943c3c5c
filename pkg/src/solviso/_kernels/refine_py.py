"""Pure numpy equitable color refinement.

The compiled kernel in ``solviso._refine`` implements the identical
algorithm; both must produce byte-identical outputs.  The contract:
input colors are canonical class ids in [0, n); each round re-keys every
vertex by (own color, ascending neighbor colors padded at the front with
-1), reassigns ids in lexicographic key order, and stops when the class
count no longer grows.
"""

from __future__ import annotations

import numpy as np


def refine_colors(indptr: np.ndarray, indices: np.ndarray, colors: np.ndarray) -> np.ndarray:
    n = indptr.shape[0] - 1
    deg = np.diff(indptr)
    maxdeg = int(deg.max()) if n and indices.size else 0
    colors = colors.astype(np.int64, copy=True)

    if maxdeg == 0:
        return colors

    nbr = np.full((n, maxdeg), -1, dtype=np.int64)
    rows = np.repeat(np.arange(n), deg)
    cols = np.arange(indices.shape[0]) - np.repeat(indptr[:-1], deg)
    nbr[rows, cols] = indices
    pad = nbr < 0

    classes = int(colors.max()) + 1
    while True:
        nc = np.where(pad, np.int64(-1), colors[nbr])
        nc.sort(axis=1)
        keys = tuple(nc[:, j] for j in range(maxdeg - 1, -1, -1)) + (colors,)
        order = np.lexsort(keys)
        sk = np.concatenate([colors[order, None], nc[order]], axis=1)
        change = np.any(sk[1:] != sk[:-1], axis=1)
        ids = np.concatenate([[0], np.cumsum(change)])
        new_classes = int(ids[-1]) + 1
        if new_classes == classes:
            return colors
        out = np.empty(n, dtype=np.int64)
        out[order] = ids
        colors = out
        classes = new_classes
