"""Binary PGM (P5, 8-bit) reading and writing for [0, 1] grayscale arrays."""
from __future__ import annotations

from pathlib import Path

import numpy as np


class PGMError(ValueError):
    pass


def to_bytes(img: np.ndarray) -> bytes:
    img = np.asarray(img, dtype=float)
    if img.ndim != 2:
        raise PGMError("PGM images are 2-D")
    q = np.clip(np.floor(img * 255.0 + 0.5), 0, 255).astype(np.uint8)
    h, w = q.shape
    return f"P5\n{w} {h}\n255\n".encode("ascii") + q.tobytes()


def from_bytes(data: bytes) -> np.ndarray:
    tokens = []
    pos = 0
    while len(tokens) < 4:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise PGMError("truncated PGM header")
        tokens.append(data[start:pos])
    if tokens[0] != b"P5":
        raise PGMError(f"not a binary PGM (magic {tokens[0]!r})")
    try:
        w, h, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise PGMError("bad PGM header") from None
    if w < 1 or h < 1 or not 0 < maxval < 256:
        raise PGMError("unsupported PGM dimensions or maxval")
    pos += 1  # single whitespace after maxval
    raw = data[pos:pos + w * h]
    if len(raw) != w * h:
        raise PGMError("truncated PGM pixel data")
    return np.frombuffer(raw, dtype=np.uint8).reshape(h, w).astype(float) / maxval


def write_pgm(path: str | Path, img: np.ndarray) -> None:
    Path(path).write_bytes(to_bytes(img))


def read_pgm(path: str | Path) -> np.ndarray:
    return from_bytes(Path(path).read_bytes())
