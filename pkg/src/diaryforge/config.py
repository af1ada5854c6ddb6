"""Run configuration shared by the pipeline and the command line."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from . import imagecore
from .segmentation import SegmentationConfig
from .similarity import METRICS, SNIPPET_SIZE


@dataclass(frozen=True)
class Config:
    threshold: int = imagecore.INK_THRESHOLD
    page_cap: int = imagecore.PAGE_WIDTH_CAP
    line_kernel: tuple[int, int] = imagecore.LINE_KERNEL
    word_kernel: tuple[int, int] = imagecore.WORD_KERNEL
    line_iterations: int = 1
    word_iterations: int = 1
    min_area: int = 64
    crop_from: str = "binary"
    snippet_size: tuple[int, int] = SNIPPET_SIZE
    ssim_window: int = 7
    ssim_gaussian: bool = False
    metric: str = "dtw"
    clusters: int = 2
    lexicon: str | None = None
    neutral_band: tuple[float, float] | None = None

    def validate(self) -> "Config":
        self.segmentation().validate()
        if self.page_cap < 1:
            raise ValueError(f"page_cap must be >= 1, got {self.page_cap}")
        w, h = self.snippet_size
        if w < 1 or h < 1:
            raise ValueError(f"snippet_size must be positive, got {w}x{h}")
        if self.ssim_window < 1 or self.ssim_window > min(w, h):
            raise ValueError(f"ssim_window {self.ssim_window} does not fit snippet size {w}x{h}")
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}, got {self.metric!r}")
        if self.clusters < 2:
            raise ValueError(f"clusters must be >= 2, got {self.clusters}")
        if self.neutral_band is not None:
            lo, hi = self.neutral_band
            if not 1 <= lo < hi <= 9:
                raise ValueError(f"neutral_band must satisfy 1 <= lo < hi <= 9, got {self.neutral_band}")
        return self

    def segmentation(self) -> SegmentationConfig:
        return SegmentationConfig(
            self.threshold, tuple(self.line_kernel), tuple(self.word_kernel),
            self.line_iterations, self.word_iterations, self.min_area, self.crop_from,
        )

    def as_dict(self) -> dict:
        d = asdict(self)
        return {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}

    def merged(self, overrides: dict) -> "Config":
        known = {f.name for f in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
        clean = {}
        for k, v in overrides.items():
            clean[k] = tuple(v) if isinstance(v, list) else v
        return replace(self, **clean)


def load_config(path: str | Path | None, overrides: dict | None = None) -> Config:
    """Defaults, then the JSON file, then ``overrides`` (flags win)."""
    cfg = Config()
    if path is not None:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        if not isinstance(data, dict):
            raise ValueError("config file must hold a JSON object")
        cfg = cfg.merged(data)
    if overrides:
        cfg = cfg.merged({k: v for k, v in overrides.items() if v is not None})
    return cfg.validate()
