"""Compiled kernels for regression-tree fitting on gradient/curvature stats.

The builder is exact greedy: every distinct feature value boundary is a
candidate threshold. It works level by level with one pass per feature
over globally presorted rows, dispatching each row to its current node's
running scan, so cost per level is O(n * d) regardless of node count.
Ties in gain resolve to the first candidate in (feature, value) order,
which keeps fits bit-deterministic.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def build_tree(X, sort_idx, grad, hess, max_depth, reg_lambda, min_child_weight):
    """Fit one tree; returns node arrays trimmed to the used size.

    Node encoding: feature[i] >= 0 marks an internal node with
    `x[feature] <= threshold` going left; feature[i] == -1 marks a leaf
    whose weight is value[i]. Also returns each training row's leaf id.
    """
    n, d = X.shape
    cap = 2 * n + 1

    feature = np.full(cap, -1, dtype=np.int64)
    threshold = np.zeros(cap, dtype=np.float64)
    left = np.full(cap, -1, dtype=np.int64)
    right = np.full(cap, -1, dtype=np.int64)
    value = np.zeros(cap, dtype=np.float64)
    node_g = np.zeros(cap, dtype=np.float64)
    node_h = np.zeros(cap, dtype=np.float64)

    best_gain = np.zeros(cap, dtype=np.float64)
    best_feat = np.full(cap, -1, dtype=np.int64)
    best_thr = np.zeros(cap, dtype=np.float64)
    searching = np.zeros(cap, dtype=np.bool_)
    did_split = np.zeros(cap, dtype=np.bool_)
    run_g = np.zeros(cap, dtype=np.float64)
    run_h = np.zeros(cap, dtype=np.float64)
    run_cnt = np.zeros(cap, dtype=np.int64)
    last_val = np.zeros(cap, dtype=np.float64)

    node_of_row = np.zeros(n, dtype=np.int64)
    node_g[0] = grad.sum()
    node_h[0] = hess.sum()
    n_nodes = 1

    alive = np.zeros(1, dtype=np.int64)

    for depth in range(max_depth + 1):
        n_alive = alive.shape[0]
        # a node splits only below max_depth and with enough curvature mass
        n_search = 0
        for ai in range(n_alive):
            nid = alive[ai]
            did_split[nid] = False
            if depth < max_depth and node_h[nid] >= min_child_weight:
                searching[nid] = True
                best_gain[nid] = 1e-12  # a split must strictly improve
                best_feat[nid] = -1
                n_search += 1
            else:
                searching[nid] = False
        if n_search == 0:
            for ai in range(n_alive):
                nid = alive[ai]
                value[nid] = -node_g[nid] / (node_h[nid] + reg_lambda)
            break

        for f in range(d):
            for ai in range(n_alive):
                nid = alive[ai]
                if searching[nid]:
                    run_g[nid] = 0.0
                    run_h[nid] = 0.0
                    run_cnt[nid] = 0
            for k in range(n):
                r = sort_idx[k, f]
                nid = node_of_row[r]
                if not searching[nid]:
                    continue
                x = X[r, f]
                if run_cnt[nid] > 0 and x > last_val[nid]:
                    gl = run_g[nid]
                    hl = run_h[nid]
                    gr = node_g[nid] - gl
                    hr = node_h[nid] - hl
                    gain = (
                        gl * gl / (hl + reg_lambda)
                        + gr * gr / (hr + reg_lambda)
                        - node_g[nid] * node_g[nid] / (node_h[nid] + reg_lambda)
                    )
                    if gain > best_gain[nid]:
                        best_gain[nid] = gain
                        best_feat[nid] = f
                        best_thr[nid] = 0.5 * (last_val[nid] + x)
                run_g[nid] += grad[r]
                run_h[nid] += hess[r]
                run_cnt[nid] += 1
                last_val[nid] = x

        n_children = 0
        for ai in range(n_alive):
            nid = alive[ai]
            if searching[nid] and best_feat[nid] >= 0:
                feature[nid] = best_feat[nid]
                threshold[nid] = best_thr[nid]
                left[nid] = n_nodes
                right[nid] = n_nodes + 1
                n_nodes += 2
                did_split[nid] = True
                n_children += 2
            else:
                searching[nid] = False
                value[nid] = -node_g[nid] / (node_h[nid] + reg_lambda)
        if n_children == 0:
            break

        for r in range(n):
            nid = node_of_row[r]
            if did_split[nid]:
                if X[r, feature[nid]] <= threshold[nid]:
                    child = left[nid]
                else:
                    child = right[nid]
                node_of_row[r] = child
                node_g[child] += grad[r]
                node_h[child] += hess[r]

        children = np.empty(n_children, dtype=np.int64)
        pos = 0
        for ai in range(n_alive):
            nid = alive[ai]
            if did_split[nid]:
                children[pos] = left[nid]
                children[pos + 1] = right[nid]
                pos += 2
        alive = children

    return (
        feature[:n_nodes].copy(),
        threshold[:n_nodes].copy(),
        left[:n_nodes].copy(),
        right[:n_nodes].copy(),
        value[:n_nodes].copy(),
        node_of_row,
    )


@njit(cache=True)
def add_tree_predictions(feature, threshold, left, right, value, X, scale, out):
    """Accumulate scale * leaf weight of each row into out."""
    for i in range(X.shape[0]):
        nid = 0
        while feature[nid] >= 0:
            if X[i, feature[nid]] <= threshold[nid]:
                nid = left[nid]
            else:
                nid = right[nid]
        out[i] += scale * value[nid]


def tree_depth(feature, left, right) -> int:
    """Longest root-to-leaf path, counted in splits."""
    depth = 0
    stack = [(0, 0)]
    while stack:
        nid, d = stack.pop()
        if feature[nid] < 0:
            depth = max(depth, d)
        else:
            stack.append((left[nid], d + 1))
            stack.append((right[nid], d + 1))
    return depth
