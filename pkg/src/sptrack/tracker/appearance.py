"""Subspace appearance model over grayscale patches.

The model keeps a sliding window of recent patches; the mean and an
orthonormal basis ``U`` (thin SVD of the centred window) are recomputed on
every update.  A patch is scored by how well ``U`` reconstructs it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

WINDOW = 16


@dataclass
class AppearanceModel:
    mean: np.ndarray
    basis: np.ndarray             # (n, d) orthonormal columns
    samples_seen: int = 1
    max_dim: int = 8
    window: list = field(default_factory=list)
    window_size: int = WINDOW

    @classmethod
    def from_patch(cls, patch, max_dim: int = 8, window_size: int = WINDOW) -> "AppearanceModel":
        p = np.asarray(patch, dtype=float).ravel().copy()
        return cls(p.copy(), np.zeros((p.size, 0)), 1, max_dim, [p], window_size)

    @property
    def n(self) -> int:
        return self.mean.size

    @property
    def d(self) -> int:
        return self.basis.shape[1]

    def reconstruct(self, patch) -> np.ndarray:
        c = np.asarray(patch, dtype=float) - self.mean
        if self.d:
            return self.mean + self.basis @ (self.basis.T @ c)
        return self.mean.copy()

    def residual(self, patch) -> np.ndarray:
        c = np.asarray(patch, dtype=float) - self.mean
        if self.d:
            c = c - self.basis @ (self.basis.T @ c)
        return c

    def updated(self, patch) -> "AppearanceModel":
        """Model after appending ``patch`` to the window."""
        p = np.asarray(patch, dtype=float).ravel()
        if p.size != self.n:
            raise ValueError(f"patch has {p.size} values, model expects {self.n}")
        window = (self.window + [p.copy()])[-self.window_size:]
        seen = self.samples_seen + 1
        X = np.stack(window)
        mean = X.mean(axis=0)
        d = min(self.max_dim, seen, self.n, len(window))
        if d:
            U, _, _ = np.linalg.svd((X - mean).T, full_matrices=False)
            basis = np.ascontiguousarray(U[:, :d])
        else:
            basis = np.zeros((self.n, 0))
        return AppearanceModel(mean, basis, seen, self.max_dim, window, self.window_size)


def observation_likelihood(patch, model: AppearanceModel, lam: float = 8.0) -> float:
    """exp(-lam * ||residual||^2 / n), in (0, 1]."""
    p = np.asarray(patch, dtype=float).ravel()
    if p.size != model.n:
        raise ValueError(f"patch has {p.size} values, model expects {model.n}")
    if lam <= 0:
        raise ValueError("lam must be positive")
    r = model.residual(p)
    return math.exp(-lam * float(r @ r) / model.n)


def masked_residual(values, model: AppearanceModel, mask) -> np.ndarray:
    """Residual of a partial patch after least-squares fit on the masked rows."""
    mask = np.asarray(mask, dtype=bool).ravel()
    c = np.asarray(values, dtype=float).ravel() - model.mean[mask]
    if model.d:
        B = model.basis[mask]
        coef, *_ = np.linalg.lstsq(B, c, rcond=None)
        c = c - B @ coef
    return c


def selective_update(model: AppearanceModel, patch, overlap_mask, tau: float) -> AppearanceModel:
    """Update using observed pixels except occluded ones that reconstruct badly.

    Pixels outside ``overlap_mask`` are taken as observed.  A masked pixel
    keeps its observed value only when its squared reconstruction error is
    at most ``tau``; otherwise the model's reconstruction stands in.
    """
    p = np.asarray(patch, dtype=float).ravel()
    mask = np.asarray(overlap_mask, dtype=bool).ravel()
    if mask.size != p.size:
        raise ValueError("mask and patch sizes differ")
    if tau <= 0:
        raise ValueError("tau must be positive")
    if not mask.any():
        return model.updated(p)
    rec = model.reconstruct(p)
    err = (p - rec) ** 2
    composite = p.copy()
    reject = mask & ~(err <= tau)
    composite[reject] = rec[reject]
    return model.updated(composite)
