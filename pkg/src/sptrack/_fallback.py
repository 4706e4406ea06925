"""Pure-Python / numpy implementations of the hot kernels.

Each function here has a twin in ``_ckernels.pyx`` with the same signature
and the same tie-breaking, so the two backends are interchangeable.
"""
from __future__ import annotations

import numpy as np


def kbest_paths(mi, mj, gain, k):
    """k best chains of strictly increasing (i, j) match nodes.

    ``mi``, ``mj`` and ``gain`` describe candidate match nodes sorted by
    (i, j).  A chain scores the sum of its node gains; the empty chain is not
    reported.  Ties are broken by (predecessor node, predecessor rank), which
    makes the output a deterministic function of the input order.

    Returns a list of ``(score, node_indices)`` best first.
    """
    n = len(mi)
    if n == 0 or k <= 0:
        return []
    # per node: list of (score, pred_node, pred_rank), best first
    table: list[list[tuple[float, int, int]]] = []
    for a in range(n):
        ia, ja = mi[a], mj[a]
        pool = [(0.0, -1, -1)]
        for b in range(a):
            if mi[b] < ia and mj[b] < ja:
                for r, entry in enumerate(table[b]):
                    pool.append((entry[0], b, r))
        pool.sort(key=lambda e: (-e[0], e[1], e[2]))
        g = float(gain[a])
        table.append([(s + g, b, r) for s, b, r in pool[:k]])
    finals = [(table[a][r][0], a, r) for a in range(n) for r in range(len(table[a]))]
    finals.sort(key=lambda e: (-e[0], e[1], e[2]))
    out = []
    for score, a, r in finals[:k]:
        path = []
        while a >= 0:
            path.append(a)
            _, pb, pr = table[a][r]
            a, r = pb, pr
        out.append((score, tuple(reversed(path))))
    return out


def sample_patches(image, centers, w, h):
    """Bilinear samples of ``w``x``h`` boxes centred at ``centers`` (N, 2).

    Pixel (row i, col j) has its centre at continuous coordinate
    (x=j+0.5, y=i+0.5).  Samples outside the image clamp to the border.
    Returns (N, h*w) row-major patches.
    """
    image = np.asarray(image, dtype=np.float64)
    centers = np.atleast_2d(np.asarray(centers, dtype=np.float64))
    H, W = image.shape
    cols = np.arange(w, dtype=np.float64) - w / 2.0
    rows = np.arange(h, dtype=np.float64) - h / 2.0
    # continuous sample coordinate minus 0.5 -> pixel-index coordinate
    u = centers[:, 0:1] + cols[None, :]  # (N, w)
    v = centers[:, 1:2] + rows[None, :]  # (N, h)
    u = np.clip(u, 0.0, W - 1.0)
    v = np.clip(v, 0.0, H - 1.0)
    u0 = np.minimum(np.floor(u).astype(np.intp), W - 2 if W > 1 else 0)
    v0 = np.minimum(np.floor(v).astype(np.intp), H - 2 if H > 1 else 0)
    fu = u - u0
    fv = v - v0
    u1 = np.minimum(u0 + 1, W - 1)
    v1 = np.minimum(v0 + 1, H - 1)
    V0 = v0[:, :, None]
    V1 = v1[:, :, None]
    U0 = u0[:, None, :]
    U1 = u1[:, None, :]
    FU = fu[:, None, :]
    FV = fv[:, :, None]
    top = image[V0, U0] * (1.0 - FU) + image[V0, U1] * FU
    bot = image[V1, U0] * (1.0 - FU) + image[V1, U1] * FU
    out = top * (1.0 - FV) + bot * FV
    return out.reshape(len(centers), h * w)


def sq_residuals(image, centers, w, h, mean, basis):
    """Squared subspace-reconstruction residual of each sampled patch."""
    X = sample_patches(image, centers, w, h) - np.asarray(mean)[None, :]
    basis = np.asarray(basis, dtype=np.float64)
    if basis.shape[1]:
        X = X - (X @ basis) @ basis.T
    return np.einsum("ij,ij->i", X, X)


def ncc_map(image, template):
    """Normalised cross-correlation of ``template`` at every valid offset.

    Windows (or templates) with zero variance score 0.
    """
    image = np.asarray(image, dtype=np.float64)
    t = np.asarray(template, dtype=np.float64)
    th, tw = t.shape
    win = np.lib.stride_tricks.sliding_window_view(image, (th, tw))
    tz = t - t.mean()
    tn = np.sqrt((tz * tz).sum())
    wm = win.mean(axis=(2, 3), keepdims=True)
    wz = win - wm
    wn = np.sqrt((wz * wz).sum(axis=(2, 3)))
    num = np.einsum("abij,ij->ab", wz, tz)
    den = wn * tn
    out = np.zeros(num.shape)
    ok = den > 1e-12
    out[ok] = num[ok] / den[ok]
    return out
