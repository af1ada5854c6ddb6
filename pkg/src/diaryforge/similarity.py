"""
Pairwise word-image similarity: MSE, windowed SSIM and projection-profile DTW.

MSE is a distance (0 = identical); SSIM and DTW are similarities (1 = identical).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numba
import numpy as np

from . import imagecore

METRICS = ("mse", "ssim", "dtw")
SNIPPET_SIZE = (128, 64)  # (w, h)

C1 = (0.01 * 255) ** 2
C2 = (0.03 * 255) ** 2


@dataclass(frozen=True)
class SimilarityMatrix:
    labels: tuple[str, ...]
    metric: str
    values: np.ndarray

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}")
        n = len(self.labels)
        if self.values.shape != (n, n):
            raise ValueError(f"values shape {self.values.shape} does not match {n} labels")

    def __len__(self):
        return len(self.labels)


@dataclass(frozen=True)
class ComparisonRow:
    label: str
    mse: float
    ssim: float
    dtw: float


@dataclass(frozen=True)
class ComparisonTable:
    reference: str
    rows: tuple[ComparisonRow, ...]


def _images(group) -> list[np.ndarray]:
    return [np.asarray(getattr(g, "image", g)) for g in group]


def _labels(group, labels) -> tuple[str, ...]:
    if labels is not None:
        labels = tuple(str(x) for x in labels)
        if len(labels) != len(group):
            raise ValueError("labels must match group size")
        return labels
    out = []
    for i, g in enumerate(group):
        name = getattr(g, "name", None)
        out.append(name if isinstance(name, str) else str(i + 1))
    return tuple(out)


def common_resize(group: Sequence, target_w: int = SNIPPET_SIZE[0], target_h: int = SNIPPET_SIZE[1]) -> list[np.ndarray]:
    """Bring snippets (or raw images) to a common size: resize, sharpen, then grayscale."""
    if len(group) == 0:
        raise ValueError("common_resize needs a non-empty group")
    return [
        imagecore.grayscale(imagecore.sharpen(imagecore.resize(img, target_w, target_h)))
        for img in _images(group)
    ]


def _pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"image shapes differ: {a.shape} vs {b.shape}")
    return a, b


def mse(a: np.ndarray, b: np.ndarray) -> float:
    a, b = _pair(a, b)
    d = a.astype(np.int64) - b.astype(np.int64)
    return float(np.mean(d * d))


def _window_sums(x: np.ndarray, win: int) -> np.ndarray:
    c = np.zeros((x.shape[0] + 1, x.shape[1] + 1), dtype=np.int64)
    c[1:, 1:] = x.cumsum(0).cumsum(1)
    return c[win:, win:] - c[:-win, win:] - c[win:, :-win] + c[:-win, :-win]


def gaussian_window(size: int = 11, sigma: float = 1.5) -> np.ndarray:
    g = np.exp(-((np.arange(size) - size // 2) ** 2) / (2 * sigma**2))
    g /= g.sum()
    return np.outer(g, g)


def _ssim_gaussian(a: np.ndarray, b: np.ndarray, win: int, sigma: float) -> float:
    from numpy.lib.stride_tricks import sliding_window_view

    w = gaussian_window(win, sigma)

    def filt(x):
        return np.einsum("ijkl,kl->ij", sliding_window_view(x, (win, win)), w)

    a = a.astype(np.float64)
    b = b.astype(np.float64)
    mu_a, mu_b = filt(a), filt(b)
    var_a = filt(a * a) - mu_a * mu_a
    var_b = filt(b * b) - mu_b * mu_b
    cov = filt(a * b) - mu_a * mu_b
    num = (2 * mu_a * mu_b + C1) * (2 * cov + C2)
    den = (mu_a * mu_a + mu_b * mu_b + C1) * (var_a + var_b + C2)
    return float(np.mean(num / den))


def ssim(a: np.ndarray, b: np.ndarray, window: int = 7, gaussian: bool = False, sigma: float = 1.5) -> float:
    """Mean structural similarity over all ``window`` x ``window`` positions fully inside the image.

    The uniform window uses population (1/N) statistics computed from exact
    integer window sums. ``gaussian=True`` switches to a Gaussian-weighted window.
    """
    a, b = _pair(a, b)
    if a.ndim != 2:
        raise ValueError("ssim expects grayscale images")
    if window < 1 or a.shape[0] < window or a.shape[1] < window:
        raise ValueError(f"images {a.shape[1]}x{a.shape[0]} are smaller than the {window}x{window} window")
    if gaussian:
        return _ssim_gaussian(a, b, window, sigma)

    ai = a.astype(np.int64)
    bi = b.astype(np.int64)
    n = window * window
    sa, sb = _window_sums(ai, window), _window_sums(bi, window)
    saa, sbb, sab = _window_sums(ai * ai, window), _window_sums(bi * bi, window), _window_sums(ai * bi, window)
    # everything scaled by n^2 so the sufficient statistics stay integral
    c1, c2 = C1 * n * n, C2 * n * n
    lum = (2 * sa * sb + c1) / (sa * sa + sb * sb + c1)
    cs = (2 * (n * sab - sa * sb) + c2) / ((n * saa - sa * sa) + (n * sbb - sb * sb) + c2)
    return float(np.mean(lum * cs))


def vertical_projection(img: np.ndarray, t: int = imagecore.INK_THRESHOLD, ink: str = "auto") -> np.ndarray:
    """Per-column ink count of the binarised image, scaled so the max is 1.

    ``ink="dark"`` binarises with the inverse threshold (dark strokes on
    light paper), ``ink="light"`` counts pixels above ``t`` (light strokes on a
    dark ground, as in binarised snippets). ``"auto"`` picks whichever
    polarity leaves the ink in the minority.
    """
    img = np.asarray(img)
    if img.ndim == 3:
        img = imagecore.grayscale(img)
    dark = imagecore.threshold_inverse(img, t) > 0
    if ink == "auto":
        ink = "dark" if dark.sum() * 2 <= dark.size else "light"
    if ink == "dark":
        fg = dark
    elif ink == "light":
        fg = ~dark
    else:
        raise ValueError(f"ink must be 'auto', 'dark' or 'light', got {ink!r}")
    counts = fg.sum(axis=0).astype(np.float64)
    peak = counts.max() if counts.size else 0.0
    return counts / peak if peak > 0 else counts


@numba.njit(cache=True)
def _dtw_path(p, q):
    n, m = p.shape[0], q.shape[0]
    cost = np.empty((n, m))
    length = np.empty((n, m), dtype=np.int64)
    for i in range(n):
        for j in range(m):
            c = abs(p[i] - q[j])
            if i == 0 and j == 0:
                cost[i, j] = c
                length[i, j] = 1
                continue
            best_c = np.inf
            best_l = 0
            if i > 0:
                best_c, best_l = cost[i - 1, j], length[i - 1, j]
            if j > 0:
                cc, ll = cost[i, j - 1], length[i, j - 1]
                if cc < best_c or (cc == best_c and ll > best_l):
                    best_c, best_l = cc, ll
            if i > 0 and j > 0:
                cc, ll = cost[i - 1, j - 1], length[i - 1, j - 1]
                if cc < best_c or (cc == best_c and ll > best_l):
                    best_c, best_l = cc, ll
            cost[i, j] = best_c + c
            length[i, j] = best_l + 1
    return cost[n - 1, m - 1], length[n - 1, m - 1]


def dtw_alignment(p: Sequence[float], q: Sequence[float]) -> tuple[float, int]:
    """Cost and length of the optimal endpoint-pinned monotone alignment.

    Steps are (1,0), (0,1) and (1,1) with per-step cost ``|p_i - q_j|``.
    Among minimum-cost paths the longest one is taken.
    """
    p = np.ascontiguousarray(p, dtype=np.float64)
    q = np.ascontiguousarray(q, dtype=np.float64)
    if p.ndim != 1 or q.ndim != 1 or p.size == 0 or q.size == 0:
        raise ValueError("DTW needs two non-empty 1-D profiles")
    c, n = _dtw_path(p, q)
    return float(c), int(n)


def dtw_similarity(p: Sequence[float], q: Sequence[float]) -> float:
    """1 minus the per-step cost of the optimal alignment, clamped to [0, 1]."""
    cost, steps = dtw_alignment(p, q)
    return min(1.0, max(0.0, 1.0 - cost / steps))


def _pairwise(items, fn, diagonal: float) -> np.ndarray:
    n = len(items)
    out = np.empty((n, n))
    for i in range(n):
        out[i, i] = diagonal
        for j in range(i + 1, n):
            out[i, j] = out[j, i] = fn(items[i], items[j])
    return out


def similarity_matrix(
    group: Sequence,
    metric: str = "dtw",
    labels: Sequence[str] | None = None,
    window: int = 7,
    gaussian: bool = False,
) -> SimilarityMatrix:
    """All-pairs matrix for one word group (images or snippets of equal size)."""
    if metric not in METRICS:
        raise ValueError(f"metric must be one of {METRICS}, got {metric!r}")
    if len(group) < 2:
        raise ValueError("similarity_matrix needs at least 2 items")
    names = _labels(group, labels)
    imgs = _images(group)
    if metric == "mse":
        values = _pairwise(imgs, mse, 0.0)
    elif metric == "ssim":
        values = _pairwise(imgs, lambda a, b: ssim(a, b, window, gaussian), 1.0)
    else:
        values = _pairwise([vertical_projection(x) for x in imgs], dtw_similarity, 1.0)
    return SimilarityMatrix(names, metric, values)


def comparison_table(
    group: Sequence,
    reference_index: int = 0,
    labels: Sequence[str] | None = None,
    window: int = 7,
    gaussian: bool = False,
) -> ComparisonTable:
    """Compare every member of ``group`` against the reference with all three metrics."""
    if not 0 <= reference_index < len(group):
        raise IndexError(f"reference_index {reference_index} out of range for group of {len(group)}")
    names = _labels(group, labels)
    imgs = _images(group)
    ref = imgs[reference_index]
    ref_profile = vertical_projection(ref)
    rows = []
    for name, img in zip(names, imgs):
        rows.append(ComparisonRow(
            name,
            mse(ref, img),
            ssim(ref, img, window, gaussian),
            dtw_similarity(ref_profile, vertical_projection(img)),
        ))
    return ComparisonTable(names[reference_index], tuple(rows))
