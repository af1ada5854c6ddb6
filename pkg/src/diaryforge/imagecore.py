"""
Raster primitives used before segmentation and before similarity analysis.

Images are plain numpy arrays:

- gray:   ``(h, w)`` ``uint8``
- rgb:    ``(h, w, 3)`` ``uint8``
- binary: ``(h, w)`` ``uint8`` holding only 0 and 255 (255 = ink)

All functions return new arrays and never modify their inputs.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np
from PIL import Image

LINE_KERNEL = (51, 9)  # (w, h)
WORD_KERNEL = (3, 3)
PAGE_WIDTH_CAP = 1000
INK_THRESHOLD = 155

_SHARPEN = np.array([[0, -1, 0], [-1, 5, -1], [0, -1, 0]], dtype=np.int64)


def _check_image(img: np.ndarray) -> np.ndarray:
    img = np.asarray(img)
    if img.ndim not in (2, 3) or (img.ndim == 3 and img.shape[2] != 3):
        raise ValueError(f"expected (h, w) or (h, w, 3) image, got shape {img.shape}")
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise ValueError("image must be at least 1x1")
    return img


def _round_half_up(x: np.ndarray) -> np.ndarray:
    return np.floor(x + 0.5)


def resize(img: np.ndarray, target_w: int, target_h: int) -> np.ndarray:
    """Bilinear resize to exactly ``target_w`` x ``target_h``.

    Uses pixel-centre alignment with edge clamping, so resizing to the
    current size returns an identical image.
    """
    img = _check_image(img)
    if target_w < 1 or target_h < 1:
        raise ValueError(f"target size must be positive, got {target_w}x{target_h}")
    h, w = img.shape[:2]
    if (w, h) == (target_w, target_h):
        return img.copy()

    def axis(n_src, n_dst):
        pos = (np.arange(n_dst) + 0.5) * (n_src / n_dst) - 0.5
        pos = np.clip(pos, 0, n_src - 1)
        lo = np.floor(pos).astype(np.intp)
        hi = np.minimum(lo + 1, n_src - 1)
        return lo, hi, pos - lo

    y0, y1, fy = axis(h, target_h)
    x0, x1, fx = axis(w, target_w)
    src = img.astype(np.float64)
    if img.ndim == 3:
        fx = fx[None, :, None]
        fy = fy[:, None, None]
    else:
        fx = fx[None, :]
        fy = fy[:, None]
    top = src[y0][:, x0] * (1 - fx) + src[y0][:, x1] * fx
    bottom = src[y1][:, x0] * (1 - fx) + src[y1][:, x1] * fx
    out = top * (1 - fy) + bottom * fy
    return np.clip(_round_half_up(out), 0, 255).astype(np.uint8)


def resize_capped(img: np.ndarray, cap: int = PAGE_WIDTH_CAP) -> np.ndarray:
    """Shrink ``img`` so its width is at most ``cap``, keeping the aspect ratio."""
    if cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap}")
    img = _check_image(img)
    h, w = img.shape[:2]
    if w <= cap:
        return img.copy()
    new_h = max(1, math.floor(h * cap / w + 0.5))
    return resize(img, cap, new_h)


def grayscale(img: np.ndarray) -> np.ndarray:
    """Rec.601 luminance, rounded half-up. Gray input is returned as a copy."""
    img = _check_image(img)
    if img.ndim == 2:
        return img.copy()
    rgb = img.astype(np.float64)
    lum = 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]
    return np.clip(_round_half_up(lum), 0, 255).astype(np.uint8)


def threshold_inverse(img: np.ndarray, t: int = INK_THRESHOLD, maxval: int = 255) -> np.ndarray:
    """Inverse binary threshold: pixels ``> t`` become 0, the rest ``maxval``.

    Dark ink therefore ends up as the white foreground.
    """
    if not 0 <= t < maxval <= 255:
        raise ValueError(f"need 0 <= t < maxval <= 255, got t={t}, maxval={maxval}")
    img = _check_image(img)
    if img.ndim != 2:
        raise ValueError("threshold_inverse expects a grayscale image")
    return np.where(img > t, 0, maxval).astype(np.uint8)


def _sliding_max(a: np.ndarray, size: int, axis: int) -> np.ndarray:
    if size == 1:
        return a
    r = size // 2
    pad = [(0, 0), (0, 0)]
    pad[axis] = (r, r)
    padded = np.pad(a, pad, mode="edge")
    n = a.shape[axis]
    out = np.take(padded, np.arange(n), axis=axis)
    for k in range(1, size):
        out = np.maximum(out, np.take(padded, np.arange(k, k + n), axis=axis))
    return out


def dilate(img: np.ndarray, kernel_w: int = 3, kernel_h: int = 3, iterations: int = 1) -> np.ndarray:
    """Binary dilation with a ``kernel_w`` x ``kernel_h`` box of ones.

    Borders are handled by edge replication.
    """
    if kernel_w < 1 or kernel_h < 1 or kernel_w % 2 == 0 or kernel_h % 2 == 0:
        raise ValueError(f"kernel dimensions must be odd and >= 1, got {kernel_w}x{kernel_h}")
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    out = _check_image(img)
    if out.ndim != 2:
        raise ValueError("dilate expects a binary (h, w) image")
    for _ in range(iterations):
        # a box kernel is separable: max over rows, then over columns
        out = _sliding_max(_sliding_max(out, kernel_w, axis=1), kernel_h, axis=0)
    return out.astype(np.uint8, copy=True)


def convolve3x3(img: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Correlate a 2-D image with a 3x3 integer kernel (edge-replicated border), unclamped."""
    padded = np.pad(img.astype(np.int64), 1, mode="edge")
    h, w = img.shape
    out = np.zeros((h, w), dtype=np.int64)
    for dy in range(3):
        for dx in range(3):
            k = kernel[dy, dx]
            if k:
                out += k * padded[dy:dy + h, dx:dx + w]
    return out


def sharpen(img: np.ndarray) -> np.ndarray:
    """3x3 sharpen (centre 5, 4-neighbours -1), clamped to [0, 255].

    RGB images are sharpened channel by channel.
    """
    img = _check_image(img)
    if img.ndim == 3:
        return np.stack([sharpen(img[..., c]) for c in range(3)], axis=-1)
    return np.clip(convolve3x3(img, _SHARPEN), 0, 255).astype(np.uint8)


def read_image(path: str | Path) -> np.ndarray:
    """Read a PNG or TIFF into a gray or RGB ``uint8`` array.

    16-bit data is scaled to 8 bits by a right shift; alpha is dropped.
    """
    with Image.open(path) as im:
        mode = im.mode
        arr = np.array(im)
    if mode in ("I;16", "I;16B", "I;16L", "I;16N") or arr.dtype == np.uint16:
        arr = (arr.astype(np.uint32) >> 8).astype(np.uint8)
    elif mode == "I":
        arr = (np.clip(arr, 0, 65535).astype(np.uint32) >> 8).astype(np.uint8)
    elif mode == "1":
        arr = np.where(arr, 255, 0).astype(np.uint8)
    elif mode in ("P", "LA", "CMYK", "YCbCr", "F"):
        with Image.open(path) as im:
            conv = im.convert("RGB" if mode != "F" else "L")
            arr = np.array(conv)
    if arr.ndim == 3 and arr.shape[2] == 4:
        arr = arr[..., :3]
    if arr.ndim == 3 and arr.shape[2] == 2:
        arr = arr[..., 0]
    return np.ascontiguousarray(arr, dtype=np.uint8)


def png_bytes(img: np.ndarray) -> bytes:
    """Encode an 8-bit gray or RGB array as PNG bytes."""
    import io

    img = _check_image(img)
    buf = io.BytesIO()
    Image.fromarray(np.ascontiguousarray(img, dtype=np.uint8)).save(buf, format="PNG")
    return buf.getvalue()


def write_png(path: str | Path, img: np.ndarray) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(png_bytes(img))
