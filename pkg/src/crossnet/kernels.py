"""Hot loops, each in a numba flavour (``*_nb``) and a numpy flavour (``*_np``).

Both flavours accumulate in the same left-to-right order, so they agree
bit for bit; the module-level names point at whichever one the backend
selected.  Inputs are assumed validated by the callers.
"""
from __future__ import annotations

import numpy as np

from crossnet._backend import USE_NUMBA, njit

# ---------------------------------------------------------------- distances


def _pair_distances_py(rho):
    # Euclidean distances between rows; row sums run left to right.
    N, n = rho.shape
    out = np.zeros((N, N))
    for i in range(N):
        for j in range(i + 1, N):
            acc = 0.0
            for t in range(n):
                diff = rho[i, t] - rho[j, t]
                acc += diff * diff
            d = np.sqrt(acc)
            if d > 2.0:
                d = 2.0
            out[i, j] = d
            out[j, i] = d
    return out


pair_distances_nb = njit(_pair_distances_py)


def pair_distances_np(rho):
    N = rho.shape[0]
    out = np.zeros((N, N))
    if N < 2:
        return out
    iu, ju = np.triu_indices(N, 1)
    diff = rho[iu] - rho[ju]
    sq = np.cumsum(diff * diff, axis=1)[:, -1]
    d = np.minimum(np.sqrt(sq), 2.0)
    out[iu, ju] = d
    out[ju, iu] = d
    return out


# ---------------------------------------------------------------- single link


def _single_link_py(D):
    # Slot s always holds the cluster whose smallest leaf is s, so scanning
    # a < b with a strict ``<`` realises the (smallest member, other member)
    # tie rule.
    N = D.shape[0]
    cd = D.copy()
    alive = np.ones(N, dtype=np.bool_)
    cid = np.arange(N)
    merges = np.zeros((N - 1, 3))
    for q in range(N - 1):
        best = np.inf
        ba = -1
        bb = -1
        for a in range(N):
            if not alive[a]:
                continue
            for b in range(a + 1, N):
                if alive[b] and (ba < 0 or cd[a, b] < best):
                    best = cd[a, b]
                    ba = a
                    bb = b
        merges[q, 0] = cid[ba]
        merges[q, 1] = cid[bb]
        merges[q, 2] = best
        for k in range(N):
            if cd[bb, k] < cd[ba, k]:
                cd[ba, k] = cd[bb, k]
                cd[k, ba] = cd[bb, k]
        alive[bb] = False
        cid[ba] = N + q
    return merges


single_link_nb = njit(_single_link_py)


def single_link_np(D):
    N = D.shape[0]
    cd = np.array(D, dtype=np.float64, copy=True)
    np.fill_diagonal(cd, np.inf)
    cid = np.arange(N)
    upper = np.triu(np.ones((N, N), dtype=bool), 1)
    merges = np.zeros((N - 1, 3))
    for q in range(N - 1):
        masked = np.where(upper, cd, np.inf)
        best = masked.min()
        a, b = np.argwhere(masked == best)[0]
        merges[q] = cid[a], cid[b], best
        row = np.minimum(cd[a], cd[b])
        cd[a, :] = row
        cd[:, a] = row
        cd[a, a] = np.inf
        cd[b, :] = np.inf
        cd[:, b] = np.inf
        cid[a] = N + q
    return merges


# ---------------------------------------------------------------- kruskal


def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


def _kruskal_py(iu, ju, N):
    # Edges arrive pre-sorted; returns positions of the accepted ones.
    parent = np.arange(N)
    rank = np.zeros(N, dtype=np.int64)
    chosen = np.empty(max(N - 1, 0), dtype=np.int64)
    count = 0
    for e in range(iu.shape[0]):
        if count == N - 1:
            break
        ra = _find(parent, iu[e])
        rb = _find(parent, ju[e])
        if ra == rb:
            continue
        if rank[ra] < rank[rb]:
            ra, rb = rb, ra
        parent[rb] = ra
        if rank[ra] == rank[rb]:
            rank[ra] += 1
        chosen[count] = e
        count += 1
    return chosen[:count]


_find_nb = njit(_find)


def _kruskal_nb_src(iu, ju, N):
    parent = np.arange(N)
    rank = np.zeros(N, dtype=np.int64)
    chosen = np.empty(max(N - 1, 0), dtype=np.int64)
    count = 0
    for e in range(iu.shape[0]):
        if count == N - 1:
            break
        ra = _find_nb(parent, iu[e])
        rb = _find_nb(parent, ju[e])
        if ra == rb:
            continue
        if rank[ra] < rank[rb]:
            ra, rb = rb, ra
        parent[rb] = ra
        if rank[ra] == rank[rb]:
            rank[ra] += 1
        chosen[count] = e
        count += 1
    return chosen[:count]


kruskal_nb = njit(_kruskal_nb_src)


def kruskal_np(iu, ju, N):
    # Union-find does not vectorise; plain Python over the sorted edges.
    return _kruskal_py(np.asarray(iu), np.asarray(ju), int(N))


# ---------------------------------------------------------------- residuality


def _inverse_sums_py(D, L, eps):
    # Returns (sum 1/d above L, sum 1/d at or below L, pairs at or below L,
    # pairs clamped to eps); unordered pairs in row-major i < j order.
    N = D.shape[0]
    above = 0.0
    below = 0.0
    m = 0
    clamped = 0
    for i in range(N):
        for j in range(i + 1, N):
            d = D[i, j]
            if d < eps:
                d = eps
                clamped += 1
            if D[i, j] <= L:
                below += 1.0 / d
                m += 1
            else:
                above += 1.0 / d
    return above, below, m, clamped


inverse_sums_nb = njit(_inverse_sums_py)


def inverse_sums_np(D, L, eps):
    N = D.shape[0]
    iu, ju = np.triu_indices(N, 1)
    d = D[iu, ju]
    inv = 1.0 / np.maximum(d, eps)
    keep = d <= L

    def seq_sum(x):
        return float(np.cumsum(x)[-1]) if x.size else 0.0

    return seq_sum(inv[~keep]), seq_sum(inv[keep]), int(keep.sum()), int((d < eps).sum())


if USE_NUMBA:
    pair_distances = pair_distances_nb
    single_link = single_link_nb
    kruskal = kruskal_nb
    inverse_sums = inverse_sums_nb
else:
    pair_distances = pair_distances_np
    single_link = single_link_np
    kruskal = kruskal_np
    inverse_sums = inverse_sums_np

__all__ = [
    "pair_distances",
    "single_link",
    "kruskal",
    "inverse_sums",
]
