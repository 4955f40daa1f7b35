"""Pure-numpy kernels, used when numba is unavailable or disabled."""

import numpy as np

from ._common import INF


def _owners(ptr):
    return np.repeat(np.arange(ptr.shape[0] - 1), np.diff(ptr))


def hadd(state, cost, pre_ptr, pre_idx, add_ptr, add_idx, pre_of_ptr, pre_of_idx):
    """Additive costs by vectorised Bellman-Ford sweeps to the fixpoint.

    Supporters are the lowest-index actions attaining each atom's cost. This
    coincides with the numba kernel whenever action costs are positive.
    """
    n_atoms = state.shape[0]
    n_actions = cost.shape[0]
    in_state = state.astype(bool)
    pre_owner = _owners(pre_ptr)
    add_owner = _owners(add_ptr)
    atom_cost = np.where(in_state, 0.0, np.inf)
    cost_f = cost.astype(np.float64)
    while True:
        act_val = cost_f + np.bincount(pre_owner, weights=atom_cost[pre_idx], minlength=n_actions)
        best = np.full(n_atoms, np.inf)
        np.minimum.at(best, add_idx, act_val[add_owner])
        new = np.minimum(atom_cost, best)
        if np.array_equal(new, atom_cost):
            break
        atom_cost = new
    act_val = cost_f + np.bincount(pre_owner, weights=atom_cost[pre_idx], minlength=n_actions)
    attains = (act_val[add_owner] == atom_cost[add_idx]) & np.isfinite(atom_cost[add_idx])
    attains &= ~in_state[add_idx]
    supporter = np.full(n_atoms, n_actions, dtype=np.int64)
    np.minimum.at(supporter, add_idx[attains], add_owner[attains])
    supporter[supporter == n_actions] = -1
    out = np.full(n_atoms, INF, dtype=np.int64)
    finite = np.isfinite(atom_cost)
    out[finite] = atom_cost[finite].astype(np.int64)
    return out, supporter


def relaxed_plan(state, goal, atom_cost, supporter, cost, pre_ptr, pre_idx, del_count):
    if goal.shape[0] and (atom_cost[goal] >= INF).any():
        return -1, -1, -1
    marked = np.zeros(cost.shape[0], dtype=bool)
    seen = np.zeros(state.shape[0], dtype=bool)
    stack = [int(g) for g in goal if not state[g]]
    seen[stack] = True
    ff = ops = dels = 0
    while stack:
        a = supporter[stack.pop()]
        if marked[a]:
            continue
        marked[a] = True
        ff += int(cost[a])
        ops += 1
        dels += int(del_count[a])
        for q in pre_idx[pre_ptr[a] : pre_ptr[a + 1]]:
            if not state[q] and not seen[q]:
                seen[q] = True
                stack.append(int(q))
    return ff, ops, dels


def _layers(W1, b1, W2, b2, x):
    z1 = x @ W1 + b1
    h1 = np.maximum(z1, 0.0)
    z2 = h1 @ W2 + b2
    h2 = np.maximum(z2, 0.0)
    return z1, h1, z2, h2


def mlp_forward(W1, b1, W2, b2, W3, b3, x):
    _, _, _, h2 = _layers(W1, b1, W2, b2, x)
    return float(h2 @ W3[:, 0] + b3[0])


def mlp_predict(W1, b1, W2, b2, W3, b3, X):
    _, _, _, h2 = _layers(W1, b1, W2, b2, X)
    return h2 @ W3[:, 0] + b3[0]


def mlp_row_gradients(W1, b1, W2, b2, W3, b3, x, y):
    z1, h1, z2, h2 = _layers(W1, b1, W2, b2, x)
    err = h2 @ W3[:, 0] + b3[0] - y
    d = 2.0 * err
    gW3 = (h2 * d)[:, None]
    gb3 = np.array([d])
    dz2 = np.where(z2 > 0.0, W3[:, 0] * d, 0.0)
    gW2 = np.outer(h1, dz2)
    dz1 = np.where(z1 > 0.0, W2 @ dz2, 0.0)
    gW1 = np.outer(x, dz1)
    return float(err * err), gW1, dz1, gW2, dz2, gW3, gb3


def mlp_sgd_epoch(W1, b1, W2, b2, W3, b3, X, y, order, lr):
    for r in order:
        _, gW1, gb1, gW2, gb2, gW3, gb3 = mlp_row_gradients(W1, b1, W2, b2, W3, b3, X[r], y[r])
        W1 -= lr * gW1
        b1 -= lr * gb1
        W2 -= lr * gW2
        b2 -= lr * gb2
        W3 -= lr * gW3
        b3 -= lr * gb3
