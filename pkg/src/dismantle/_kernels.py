"""numba kernels for the hot loops: union-find replay, Brandes, collective influence."""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit(cache=True)
def replay_gcc(n, base_edges, plan_edges, offsets):
    """Largest component size after each batch.

    Works backwards: start from the graph with every plan edge gone
    (``base_edges`` are the survivors), then add batches back in reverse with
    a union-find. ``out[i]`` is the GCC size after batches ``0..i`` applied.
    """
    parent = np.arange(n)
    size = np.ones(n, dtype=np.int64)
    best = 1 if n > 0 else 0
    for k in range(base_edges.shape[0]):
        a = _find(parent, base_edges[k, 0])
        b = _find(parent, base_edges[k, 1])
        if a != b:
            if size[a] < size[b]:
                a, b = b, a
            parent[b] = a
            size[a] += size[b]
            if size[a] > best:
                best = size[a]
    nb = offsets.shape[0] - 1
    out = np.empty(nb, dtype=np.int64)
    for i in range(nb - 1, -1, -1):
        out[i] = best
        for k in range(offsets[i], offsets[i + 1]):
            a = _find(parent, plan_edges[k, 0])
            b = _find(parent, plan_edges[k, 1])
            if a != b:
                if size[a] < size[b]:
                    a, b = b, a
                parent[b] = a
                size[a] += size[b]
                if size[a] > best:
                    best = size[a]
    return out


@njit(cache=True)
def edge_betweenness(indptr, indices, edge_id, alive):
    """Brandes accumulation for unweighted graphs.

    ``edge_id[k]`` maps CSR slot ``k`` to its undirected edge index; edges
    with ``alive[e] == False`` are skipped. Returns betweenness per edge over
    unordered node pairs.
    """
    n = indptr.shape[0] - 1
    m = alive.shape[0]
    eb = np.zeros(m)
    sigma = np.zeros(n)
    dist = np.full(n, -1, dtype=np.int64)
    delta = np.zeros(n)
    stack = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for s in range(n):
        for i in range(n):
            sigma[i] = 0.0
            dist[i] = -1
            delta[i] = 0.0
        sigma[s] = 1.0
        dist[s] = 0
        head = 0
        tail = 0
        queue[tail] = s
        tail += 1
        top = 0
        while head < tail:
            v = queue[head]
            head += 1
            stack[top] = v
            top += 1
            for k in range(indptr[v], indptr[v + 1]):
                if not alive[edge_id[k]]:
                    continue
                w = indices[k]
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue[tail] = w
                    tail += 1
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
        while top > 0:
            top -= 1
            w = stack[top]
            for k in range(indptr[w], indptr[w + 1]):
                if not alive[edge_id[k]]:
                    continue
                v = indices[k]
                if dist[v] == dist[w] - 1:
                    c = sigma[v] / sigma[w] * (1.0 + delta[w])
                    eb[edge_id[k]] += c
                    delta[v] += c
    return eb / 2.0


@njit(cache=True)
def _ball_ci(i, radius, indptr, indices, alive, deg, stamp, mark, dist, queue):
    """Collective influence of node ``i`` on the residual graph."""
    if deg[i] <= 1:
        return 0.0
    mark[i] = stamp
    dist[i] = 0
    head = 0
    tail = 1
    queue[0] = i
    frontier = 0.0
    while head < tail:
        v = queue[head]
        head += 1
        if dist[v] == radius:
            frontier += deg[v] - 1
            continue
        for k in range(indptr[v], indptr[v + 1]):
            w = indices[k]
            if alive[w] and mark[w] != stamp:
                mark[w] = stamp
                dist[w] = dist[v] + 1
                queue[tail] = w
                tail += 1
    return (deg[i] - 1) * frontier


@njit(cache=True)
def ci_order(indptr, indices, radius):
    """Adaptive CI removal order, stopping once every CI value is zero.

    Returns the removed nodes in order plus the residual alive mask.
    """
    n = indptr.shape[0] - 1
    alive = np.ones(n, dtype=np.bool_)
    deg = np.empty(n, dtype=np.int64)
    for i in range(n):
        deg[i] = indptr[i + 1] - indptr[i]
    mark = np.zeros(n, dtype=np.int64)
    dist = np.zeros(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    region = np.empty(n, dtype=np.int64)
    stamp = 0
    ci = np.empty(n)
    for i in range(n):
        stamp += 1
        ci[i] = _ball_ci(i, radius, indptr, indices, alive, deg, stamp, mark, dist, queue)
    order = np.empty(n, dtype=np.int64)
    count = 0
    while True:
        best = -1
        bv = 0.0
        for i in range(n):
            if alive[i] and ci[i] > bv:
                bv = ci[i]
                best = i
        if best < 0:
            break
        # nodes whose CI can change: the (radius + 1)-ball around best
        stamp += 1
        mark[best] = stamp
        dist[best] = 0
        head = 0
        tail = 1
        region[0] = best
        while head < tail:
            v = region[head]
            head += 1
            if dist[v] == radius + 1:
                continue
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if alive[w] and mark[w] != stamp:
                    mark[w] = stamp
                    dist[w] = dist[v] + 1
                    region[tail] = w
                    tail += 1
        alive[best] = False
        ci[best] = -1.0
        for k in range(indptr[best], indptr[best + 1]):
            w = indices[k]
            if alive[w]:
                deg[w] -= 1
        deg[best] = 0
        order[count] = best
        count += 1
        for r in range(1, tail):
            v = region[r]
            stamp += 1
            ci[v] = _ball_ci(v, radius, indptr, indices, alive, deg, stamp, mark, dist, queue)
    return order[:count], alive
