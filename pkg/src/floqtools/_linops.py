"""Small dense linear-algebra helpers shared by the solvers."""
from __future__ import annotations

import numpy as np


def chain_matmul(mats):
    """Time-ordered product mats[-1] @ ... @ mats[0] by pairwise reduction.

    Pairwise reduction keeps the number of sequential matmuls logarithmic,
    which matters for the 10^4..10^5 step chains the integrators produce.
    """
    m = np.asarray(mats)
    if m.ndim != 3 or m.shape[0] == 0:
        raise ValueError("expected a non-empty stack of matrices")
    while m.shape[0] > 1:
        even = m.shape[0] - (m.shape[0] % 2)
        head = np.matmul(m[1:even:2], m[0:even:2])
        if even == m.shape[0]:
            m = head
        else:
            m = np.concatenate([head, m[-1:]], axis=0)
    return m[0]


def oscillator_blocks(betas, dts):
    """Exact (q, p) flow blocks of q'' + beta^2 q = 0 with beta frozen per step.

    betas == 0 degenerates to the free-motion shear [[1, dt], [0, 1]].
    Every block has unit determinant, so products stay area preserving.
    """
    betas = np.asarray(betas, dtype=float)
    dts = np.asarray(dts, dtype=float)
    phi = betas * dts
    c = np.cos(phi)
    s = np.sin(phi)
    safe = np.where(betas == 0.0, 1.0, betas)
    upper = np.where(betas == 0.0, dts, s / safe)
    blocks = np.empty(betas.shape + (2, 2))
    blocks[..., 0, 0] = c
    blocks[..., 0, 1] = upper
    blocks[..., 1, 0] = -betas * s
    blocks[..., 1, 1] = c
    return blocks


def rotation2(theta):
    """2x2 rotation [[cos, sin], [-sin, cos]]."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [-s, c]])
