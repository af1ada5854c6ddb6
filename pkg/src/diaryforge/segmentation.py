"""Two-pass dilation segmentation of a diary page into word snippets."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import ndimage

from . import imagecore

Point = tuple[int, int]
Period = tuple[int, int, int]

# Moore neighbourhood, clockwise on screen (y grows downwards), starting west.
_DX = (-1, -1, 0, 1, 1, 1, 0, -1)
_DY = (0, -1, -1, -1, 0, 1, 1, 1)
_DIR = {(dx, dy): i for i, (dx, dy) in enumerate(zip(_DX, _DY))}

_EIGHT = np.ones((3, 3), dtype=bool)


class BoundingBox(NamedTuple):
    x: int
    y: int
    w: int
    h: int

    @property
    def area(self) -> int:
        return self.w * self.h

    @property
    def center(self) -> tuple[float, float]:
        return (self.x + (self.w - 1) / 2, self.y + (self.h - 1) / 2)

    def contains(self, px: float, py: float) -> bool:
        return self.x <= px <= self.x + self.w - 1 and self.y <= py <= self.y + self.h - 1

    def vertical_overlap(self, other: "BoundingBox") -> int:
        return max(0, min(self.y + self.h, other.y + other.h) - max(self.y, other.y))


@dataclass(frozen=True)
class Contour:
    """Outer boundary of one 8-connected component, as an 8-adjacent point chain."""

    points: tuple[Point, ...]

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class WordSnippet:
    image: np.ndarray = field(repr=False, compare=False)
    box: BoundingBox
    page_id: str
    line_index: int
    word_index: int
    period: Period | None = None
    label: str | None = None

    @property
    def name(self) -> str:
        return f"{self.page_id}_{self.line_index}_{self.word_index}"


@dataclass(frozen=True)
class SegmentationConfig:
    threshold: int = imagecore.INK_THRESHOLD
    line_kernel: tuple[int, int] = imagecore.LINE_KERNEL  # (w, h)
    word_kernel: tuple[int, int] = imagecore.WORD_KERNEL
    line_iterations: int = 1
    word_iterations: int = 1
    min_area: int = 64
    crop_from: str = "binary"

    def validate(self) -> None:
        if not 0 <= self.threshold < 255:
            raise ValueError(f"threshold must be in [0, 255), got {self.threshold}")
        for name in ("line_kernel", "word_kernel"):
            kw, kh = getattr(self, name)
            if kw < 1 or kh < 1 or kw % 2 == 0 or kh % 2 == 0:
                raise ValueError(f"{name} dimensions must be odd and >= 1, got {kw}x{kh}")
        if self.line_iterations < 1 or self.word_iterations < 1:
            raise ValueError("dilation iterations must be >= 1")
        if self.min_area < 0:
            raise ValueError(f"min_area must be >= 0, got {self.min_area}")
        if self.crop_from not in ("binary", "gray"):
            raise ValueError(f"crop_from must be 'binary' or 'gray', got {self.crop_from!r}")


def _trace_border(labels: np.ndarray, lab: int, sx: int, sy: int) -> list[Point]:
    """Moore-neighbour trace starting from the component's first raster pixel."""
    h, w = labels.shape

    def inside(x, y):
        return 0 <= x < w and 0 <= y < h and labels[y, x] == lab

    points = [(sx, sy)]
    cx, cy = sx, sy
    back = 0  # the pixel west of the first raster pixel is background
    first_move = None
    while True:
        for k in range(1, 9):
            d = (back + k) % 8
            nx, ny = cx + _DX[d], cy + _DY[d]
            if inside(nx, ny):
                prev = (back + k - 1) % 8
                bx, by = cx + _DX[prev], cy + _DY[prev]
                break
        else:
            return points  # isolated pixel
        move = (cx, cy, nx, ny)
        if first_move is None:
            first_move = move
        elif move == first_move:
            break
        cx, cy = nx, ny
        points.append((cx, cy))
        back = _DIR[(bx - cx, by - cy)]
    if len(points) > 1 and points[-1] == points[0]:
        points.pop()
    return points


def _components(img: np.ndarray) -> tuple[np.ndarray, list[tuple[int, int, int]]]:
    """Label 8-connected foreground components; return labels and (y, x, lab) starts in scan order."""
    labels, n = ndimage.label(np.asarray(img) > 0, structure=_EIGHT)
    starts = []
    for lab, sl in enumerate(ndimage.find_objects(labels), start=1):
        if sl is None:
            continue
        y0, x0 = sl[0].start, sl[1].start
        row = labels[y0, sl[1]]
        x = x0 + int(np.argmax(row == lab))
        starts.append((y0, x, lab))
    starts.sort()
    return labels, starts


def find_contours(img: np.ndarray) -> list[Contour]:
    """One full-point outer contour per 8-connected foreground component, in scanline order."""
    img = np.asarray(img)
    if img.ndim != 2:
        raise ValueError("find_contours expects a binary (h, w) image")
    labels, starts = _components(img)
    return [Contour(tuple(_trace_border(labels, lab, x, y))) for y, x, lab in starts]


def contour_box(contour: Contour) -> BoundingBox:
    xs = [p[0] for p in contour.points]
    ys = [p[1] for p in contour.points]
    return BoundingBox(min(xs), min(ys), max(xs) - min(xs) + 1, max(ys) - min(ys) + 1)


def bounding_boxes(contours: list[Contour], min_area: int = 64) -> list[BoundingBox]:
    """Tight boxes around ``contours``; boxes smaller than ``min_area`` are dropped."""
    boxes = (contour_box(c) for c in contours if c.points)
    return [b for b in boxes if b.area >= min_area]


def _assign_line(box: BoundingBox, lines: list[BoundingBox]) -> int:
    best, best_overlap = 0, -1
    for i, line in enumerate(lines):
        ov = box.vertical_overlap(line)
        if ov > best_overlap:  # strict: ties stay with the upper line
            best, best_overlap = i, ov
    if best_overlap == 0:
        cy = box.center[1]
        best = min(range(len(lines)), key=lambda i: (abs(lines[i].center[1] - cy), i))
    return best


def segment_page(
    page: np.ndarray,
    cfg: SegmentationConfig | None = None,
    page_id: str = "page",
    period: Period | None = None,
) -> list[WordSnippet]:
    """Segment a resize-capped grayscale page into word snippets.

    Snippets are ordered top-to-bottom by line and left-to-right within a line.
    """
    cfg = cfg or SegmentationConfig()
    cfg.validate()
    page = np.asarray(page)
    if page.ndim != 2:
        raise ValueError("segment_page expects a grayscale page")
    h, w = page.shape
    for kw, kh in (cfg.line_kernel, cfg.word_kernel):
        if w < kw or h < kh:
            raise ValueError(f"page {w}x{h} is smaller than kernel {kw}x{kh}")

    binary = imagecore.threshold_inverse(page, cfg.threshold)
    line_img = imagecore.dilate(binary, *cfg.line_kernel, iterations=cfg.line_iterations)
    lines = bounding_boxes(find_contours(line_img), cfg.min_area)
    if not lines:
        return []
    lines.sort(key=lambda b: (b.y, b.x))

    word_img = imagecore.dilate(binary, *cfg.word_kernel, iterations=cfg.word_iterations)
    words = bounding_boxes(find_contours(word_img), cfg.min_area)

    per_line: dict[int, list[BoundingBox]] = {}
    for box in words:
        per_line.setdefault(_assign_line(box, lines), []).append(box)

    source = binary if cfg.crop_from == "binary" else page
    snippets = []
    for line_index, li in enumerate(sorted(per_line)):
        for word_index, b in enumerate(sorted(per_line[li], key=lambda b: (b.x, b.y))):
            crop = source[b.y:b.y + b.h, b.x:b.x + b.w].copy()
            snippets.append(WordSnippet(crop, b, page_id, line_index, word_index, period))
    return snippets
