"""numba-compiled kernels. Signatures mirror :mod:`numpy_impl` exactly."""

import heapq

import numpy as np
from numba import njit

from ._common import INF


@njit(cache=True)
def hadd(state, cost, pre_ptr, pre_idx, add_ptr, add_idx, pre_of_ptr, pre_of_idx):
    """Additive costs and best supporters by generalised Dijkstra.

    Returns ``(atom_cost, supporter)``; unreachable atoms carry ``INF`` and
    atoms without a supporter (true in ``state`` or unreachable) carry -1.
    Among equal-cost achievers the lowest action index wins.
    """
    n_atoms = state.shape[0]
    n_actions = cost.shape[0]
    atom_cost = np.full(n_atoms, INF, dtype=np.int64)
    supporter = np.full(n_atoms, -1, dtype=np.int64)
    done = np.zeros(n_atoms, dtype=np.bool_)
    remaining = np.empty(n_actions, dtype=np.int64)
    act_val = np.empty(n_actions, dtype=np.int64)
    heap = [(np.int64(0), np.int64(0))]
    heap.pop()
    for p in range(n_atoms):
        if state[p]:
            atom_cost[p] = 0
            heapq.heappush(heap, (np.int64(0), np.int64(p)))
    for a in range(n_actions):
        remaining[a] = pre_ptr[a + 1] - pre_ptr[a]
        act_val[a] = cost[a]
    for a in range(n_actions):
        if remaining[a] == 0:
            v = act_val[a]
            for k in range(add_ptr[a], add_ptr[a + 1]):
                p = add_idx[k]
                if state[p] or done[p]:
                    continue
                if v < atom_cost[p] or (v == atom_cost[p] and a < supporter[p]):
                    atom_cost[p] = v
                    supporter[p] = a
                    heapq.heappush(heap, (v, np.int64(p)))
    while len(heap) > 0:
        c, p = heapq.heappop(heap)
        if done[p] or c > atom_cost[p]:
            continue
        done[p] = True
        for k in range(pre_of_ptr[p], pre_of_ptr[p + 1]):
            a = pre_of_idx[k]
            act_val[a] += c
            remaining[a] -= 1
            if remaining[a] == 0:
                v = act_val[a]
                for j in range(add_ptr[a], add_ptr[a + 1]):
                    q = add_idx[j]
                    if state[q] or done[q]:
                        continue
                    if v < atom_cost[q] or (v == atom_cost[q] and a < supporter[q]):
                        atom_cost[q] = v
                        supporter[q] = a
                        heapq.heappush(heap, (v, np.int64(q)))
    return atom_cost, supporter


@njit(cache=True)
def relaxed_plan(state, goal, atom_cost, supporter, cost, pre_ptr, pre_idx, del_count):
    """Backchain from the goal through best supporters.

    Returns ``(ff_value, op_count, ignored_deletes)``, or ``(-1, -1, -1)``
    when some goal atom is unreachable.
    """
    for i in range(goal.shape[0]):
        if atom_cost[goal[i]] >= INF:
            return -1, -1, -1
    n_atoms = state.shape[0]
    marked = np.zeros(cost.shape[0], dtype=np.bool_)
    seen = np.zeros(n_atoms, dtype=np.bool_)
    stack = np.empty(n_atoms, dtype=np.int64)
    top = 0
    for i in range(goal.shape[0]):
        g = goal[i]
        if not state[g] and not seen[g]:
            seen[g] = True
            stack[top] = g
            top += 1
    ff = 0
    ops = 0
    dels = 0
    while top > 0:
        top -= 1
        p = stack[top]
        a = supporter[p]
        if marked[a]:
            continue
        marked[a] = True
        ff += cost[a]
        ops += 1
        dels += del_count[a]
        for k in range(pre_ptr[a], pre_ptr[a + 1]):
            q = pre_idx[k]
            if not state[q] and not seen[q]:
                seen[q] = True
                stack[top] = q
                top += 1
    return ff, ops, dels


@njit(cache=True)
def mlp_forward(W1, b1, W2, b2, W3, b3, x):
    n1 = W1.shape[1]
    n2 = W2.shape[1]
    h1 = np.empty(n1)
    for j in range(n1):
        s = b1[j]
        for i in range(x.shape[0]):
            s += W1[i, j] * x[i]
        h1[j] = s if s > 0.0 else 0.0
    out = b3[0]
    for j in range(n2):
        s = b2[j]
        for i in range(n1):
            s += W2[i, j] * h1[i]
        if s > 0.0:
            out += W3[j, 0] * s
    return out


@njit(cache=True)
def mlp_predict(W1, b1, W2, b2, W3, b3, X):
    out = np.empty(X.shape[0])
    for r in range(X.shape[0]):
        out[r] = mlp_forward(W1, b1, W2, b2, W3, b3, X[r])
    return out


@njit(cache=True)
def _backprop(W1, b1, W2, b2, W3, b3, x, y, gW1, gb1, gW2, gb2, gW3, gb3):
    n0 = x.shape[0]
    n1 = W1.shape[1]
    n2 = W2.shape[1]
    z1 = np.empty(n1)
    h1 = np.empty(n1)
    for j in range(n1):
        s = b1[j]
        for i in range(n0):
            s += W1[i, j] * x[i]
        z1[j] = s
        h1[j] = s if s > 0.0 else 0.0
    z2 = np.empty(n2)
    h2 = np.empty(n2)
    out = b3[0]
    for j in range(n2):
        s = b2[j]
        for i in range(n1):
            s += W2[i, j] * h1[i]
        z2[j] = s
        h2[j] = s if s > 0.0 else 0.0
        out += W3[j, 0] * h2[j]
    err = out - y
    d = 2.0 * err
    gb3[0] = d
    dz2 = np.empty(n2)
    for j in range(n2):
        gW3[j, 0] = h2[j] * d
        dz2[j] = W3[j, 0] * d if z2[j] > 0.0 else 0.0
        gb2[j] = dz2[j]
    for i in range(n1):
        dh = 0.0
        for j in range(n2):
            gW2[i, j] = h1[i] * dz2[j]
            dh += W2[i, j] * dz2[j]
        dz1 = dh if z1[i] > 0.0 else 0.0
        gb1[i] = dz1
        for k in range(n0):
            gW1[k, i] = x[k] * dz1
    return err * err


@njit(cache=True)
def mlp_row_gradients(W1, b1, W2, b2, W3, b3, x, y):
    """Squared error of one row and its gradient w.r.t. every parameter."""
    gW1 = np.empty_like(W1)
    gb1 = np.empty_like(b1)
    gW2 = np.empty_like(W2)
    gb2 = np.empty_like(b2)
    gW3 = np.empty_like(W3)
    gb3 = np.empty_like(b3)
    loss = _backprop(W1, b1, W2, b2, W3, b3, x, y, gW1, gb1, gW2, gb2, gW3, gb3)
    return loss, gW1, gb1, gW2, gb2, gW3, gb3


@njit(cache=True)
def mlp_sgd_epoch(W1, b1, W2, b2, W3, b3, X, y, order, lr):
    """One pass of per-row SGD in ``order``; parameters are updated in place."""
    gW1 = np.empty_like(W1)
    gb1 = np.empty_like(b1)
    gW2 = np.empty_like(W2)
    gb2 = np.empty_like(b2)
    gW3 = np.empty_like(W3)
    gb3 = np.empty_like(b3)
    for r in order:
        _backprop(W1, b1, W2, b2, W3, b3, X[r], y[r], gW1, gb1, gW2, gb2, gW3, gb3)
        W1 -= lr * gW1
        b1 -= lr * gb1
        W2 -= lr * gW2
        b2 -= lr * gb2
        W3 -= lr * gW3
        b3 -= lr * gb3
