"""Image input and 16-bit PGM output with affine-scaling sidecars."""

from pathlib import Path

import numpy as np
from PIL import Image

PGM_MAXVAL = 65535


def load_grayscale(path):
    """Load any image Pillow can read as a float array in [0, 1]."""
    path = Path(path)
    if path.suffix.lower() == ".pgm":
        return read_pgm16(path)[0]
    with Image.open(path) as img:
        arr = np.asarray(img.convert("F"), dtype=float)
    if arr.max() > 1.0:
        arr = arr / 255.0
    return arr


def load_series(directory):
    """Load all images in a directory (sorted by name) as a K-stack."""
    directory = Path(directory)
    paths = sorted(
        p for p in directory.iterdir()
        if p.suffix.lower() in (".pgm", ".png", ".tif", ".tiff", ".jpg", ".jpeg", ".bmp")
    )
    if len(paths) < 2:
        raise ValueError(f"need at least two images in {directory}")
    frames = [load_grayscale(p) for p in paths]
    shape = frames[0].shape
    for p, f in zip(paths, frames):
        if f.shape != shape:
            raise ValueError(f"shape mismatch in series at {p}")
    return np.stack(frames)


def write_pgm16(path, field, lo=None, hi=None):
    """Write a float field as binary 16-bit PGM plus a .scale sidecar.

    The sidecar records the affine map value = lo + (hi - lo) * raw/65535
    so the float field is recoverable.
    """
    path = Path(path)
    field = np.asarray(field, dtype=float)
    if field.ndim != 2:
        raise ValueError("PGM output expects a 2D field")
    lo = float(field.min()) if lo is None else float(lo)
    hi = float(field.max()) if hi is None else float(hi)
    span = hi - lo if hi > lo else 1.0
    raw = np.clip(np.round((field - lo) / span * PGM_MAXVAL), 0, PGM_MAXVAL)
    raw = raw.astype(">u2")
    rows, cols = field.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{cols} {rows}\n{PGM_MAXVAL}\n".encode())
        fh.write(raw.tobytes())
    sidecar = path.with_suffix(path.suffix + ".scale")
    sidecar.write_text(f"lo = {lo:.17g}\nhi = {hi:.17g}\nmaxval = {PGM_MAXVAL}\n")


def read_pgm16(path):
    """Read a binary PGM (8 or 16 bit); returns (field in [0,1], maxval)."""
    data = Path(path).read_bytes()
    if not data.startswith(b"P5"):
        raise ValueError("not a binary PGM file")
    # parse header tokens, skipping comments
    tokens = []
    pos = 2
    while len(tokens) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if data[pos : pos + 1] == b"#":
            while data[pos : pos + 1] not in (b"\n", b""):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        tokens.append(data[start:pos])
    pos += 1  # single whitespace after maxval
    cols, rows, maxval = (int(t) for t in tokens)
    dtype = ">u2" if maxval > 255 else "u1"
    raw = np.frombuffer(data, dtype=dtype, count=rows * cols, offset=pos)
    return raw.reshape(rows, cols).astype(float) / maxval, maxval
