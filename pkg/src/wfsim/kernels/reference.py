"""Reference state-vector kernels using vectorized numpy.

These are the fallback implementations of the three hot operations; the
compiled extension in ``_statevec.pyx`` provides the same contracts.
Register position 0 is the most significant bit of the flat index.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

BACKEND_NAME = "reference"


def apply_matrix(
    amps: np.ndarray, n: int, u: np.ndarray, positions: Sequence[int]
) -> np.ndarray:
    """Apply a 2^k x 2^k matrix to the target register positions of an n-qubit state.

    ``positions[0]`` addresses the most significant bit of the matrix index.
    Returns a new contiguous amplitude array; the input is untouched.
    """
    k = len(positions)
    src = amps.reshape((2,) * n)
    moved = np.moveaxis(src, positions, range(k))
    mat = np.ascontiguousarray(moved).reshape(1 << k, -1)
    # one rounded multiply-add per term, like the compiled loop; a BLAS
    # matmul may fuse terms and turn exact cancellations into ~1e-17 dust
    out = np.empty_like(mat)
    for row in range(1 << k):
        acc = u[row, 0] * mat[0]
        for col in range(1, 1 << k):
            acc += u[row, col] * mat[col]
        out[row] = acc
    res = np.moveaxis(out.reshape((2,) * n), range(k), positions)
    return np.ascontiguousarray(res).reshape(1 << n)


def z_weights(amps: np.ndarray, n: int, position: int) -> tuple[float, float]:
    """Return (weight of bit 0, weight of bit 1) at a register position."""
    w = np.abs(amps.reshape((2,) * n)) ** 2
    w0 = float(w.take(0, axis=position).sum())
    w1 = float(w.take(1, axis=position).sum())
    return w0, w1


def project_z(
    amps: np.ndarray, n: int, position: int, bit: int
) -> tuple[np.ndarray, float]:
    """Project onto a Z outcome at a register position.

    Returns the renormalized post-projection amplitudes (zeros where the
    position's bit differs from ``bit``) and the pre-projection weight.
    The state is returned unnormalized when the weight is zero.
    """
    kept = amps.reshape((2,) * n).copy()
    index: list[slice | int] = [slice(None)] * n
    index[position] = 1 - bit
    kept[tuple(index)] = 0.0
    flat = kept.reshape(1 << n)
    weight = float(np.sum(np.abs(flat) ** 2))
    if weight > 0.0:
        flat = flat / np.sqrt(weight)
    return flat, weight
