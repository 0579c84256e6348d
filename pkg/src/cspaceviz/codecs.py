"""Byte-exact image encoders: binary PPM (P6) and PNG."""

from __future__ import annotations

import io
import re
from pathlib import Path

import numpy as np
from PIL import Image

from ._validation import check_image
from .exceptions import InputError


def encode_ppm(img) -> bytes:
    img = check_image(img)
    h, w, _ = img.shape
    return f"P6\n{w} {h}\n255\n".encode("ascii") + np.ascontiguousarray(img).tobytes()


_PPM_TOKEN = re.compile(rb"(?:\s|#[^\n]*\n)*(\S+)")


def decode_ppm(data: bytes) -> np.ndarray:
    """Decode an 8-bit binary PPM; header comments are tolerated."""
    pos = 0
    tokens = []
    for _ in range(4):
        m = _PPM_TOKEN.match(data, pos)
        if m is None:
            raise InputError("truncated PPM header")
        tokens.append(m.group(1))
        pos = m.end()
    if tokens[0] != b"P6":
        raise InputError(f"not a binary PPM (magic {tokens[0]!r})")
    try:
        w, h, maxval = (int(t) for t in tokens[1:])
    except ValueError as exc:
        raise InputError(f"bad PPM header: {exc}") from exc
    if maxval != 255:
        raise InputError("only 8-bit PPM (maxval 255) is supported")
    pos += 1  # single whitespace byte after maxval
    body = data[pos:pos + w * h * 3]
    if len(body) != w * h * 3:
        raise InputError("truncated PPM pixel data")
    return np.frombuffer(body, dtype=np.uint8).reshape(h, w, 3).copy()


def encode_png(img) -> bytes:
    img = check_image(img)
    buf = io.BytesIO()
    Image.fromarray(np.ascontiguousarray(img), "RGB").save(buf, format="PNG")
    return buf.getvalue()


def decode_png(data: bytes) -> np.ndarray:
    try:
        with Image.open(io.BytesIO(data)) as im:
            return np.array(im.convert("RGB"), dtype=np.uint8)
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot decode PNG: {exc}") from exc


def write_image(path, img) -> None:
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".ppm":
        path.write_bytes(encode_ppm(img))
    elif suffix == ".png":
        path.write_bytes(encode_png(img))
    else:
        raise InputError(f"unsupported image extension {suffix!r} (use .ppm or .png)")


def read_image(path) -> np.ndarray:
    path = Path(path)
    data = path.read_bytes()
    if data[:2] == b"P6":
        return decode_ppm(data)
    if data[:8] == b"\x89PNG\r\n\x1a\n":
        return decode_png(data)
    raise InputError(f"{path}: neither a binary PPM nor a PNG")
