"""Pure-numpy gate-application kernels.

Fallback used when the compiled extension is unavailable; same contract as
``_kernels_cy``.  Qubit ``t`` is bit ``t`` of the amplitude index (qubit 0 is
the least-significant bit).
"""
import numpy as np


def apply_single_qubit(state, gate, target):
    """Apply a 2x2 ``gate`` to ``target`` of a flat state vector."""
    n = state.shape[0]
    tk = 1 << target
    s = state.reshape(-1, 2, tk)
    out = np.empty_like(s)
    out[:, 0, :] = gate[0, 0] * s[:, 0, :] + gate[0, 1] * s[:, 1, :]
    out[:, 1, :] = gate[1, 0] * s[:, 0, :] + gate[1, 1] * s[:, 1, :]
    return out.reshape(n)


def apply_multi_qubit(state, gate, targets):
    """Apply a 2^k x 2^k ``gate``; ``targets[j]`` is the index bit bound to gate bit j."""
    n = state.shape[0]
    n_bits = n.bit_length() - 1
    k = len(targets)
    rest = [b for b in range(n_bits) if b not in targets]

    groups = np.arange(n >> k, dtype=np.intp)
    base = np.zeros(n >> k, dtype=np.intp)
    for j, b in enumerate(rest):
        base |= ((groups >> j) & 1) << b

    local = np.arange(1 << k, dtype=np.intp)
    offsets = np.zeros(1 << k, dtype=np.intp)
    for j, t in enumerate(targets):
        offsets |= ((local >> j) & 1) << t

    idx = offsets[:, None] + base[None, :]
    out = state.copy()
    out[idx] = gate @ state[idx]
    return out
