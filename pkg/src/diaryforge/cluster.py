"""Outlier removal by spectral bipartition, and canonical-form blending."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import similarity as sim

log = logging.getLogger(__name__)

EIG_TOL = 1e-10


@dataclass(frozen=True)
class ClusterAssignment:
    labels: np.ndarray
    main_cluster: int

    @property
    def main_members(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.labels == self.main_cluster)]


@dataclass(frozen=True)
class CanonicalForm:
    image: np.ndarray
    word_label: str
    period: tuple[int, int, int] | None
    member_count: int
    members: tuple[str, ...] = ()


def to_affinity(m: sim.SimilarityMatrix) -> np.ndarray:
    """Turn a similarity matrix into a non-negative affinity with zero diagonal.

    SSIM is clamped to [0, 1], DTW is used as is, and MSE goes through
    ``exp(-v / median)`` with the median of the off-diagonal entries.
    """
    v = np.array(m.values, dtype=np.float64)
    n = v.shape[0]
    off = ~np.eye(n, dtype=bool)
    if m.metric == "ssim":
        a = np.clip(v, 0.0, 1.0)
    elif m.metric == "dtw":
        a = v.copy()
    else:
        med = float(np.median(v[off])) if n > 1 else 0.0
        a = np.ones_like(v) if med <= 0 else np.exp(-v / med)
    a = (a + a.T) / 2
    np.fill_diagonal(a, 0.0)
    return a


def normalized_cut(a: np.ndarray, side: np.ndarray) -> float:
    """Normalized cut of the bipartition ``side`` (boolean mask) of affinity ``a``."""
    side = np.asarray(side, dtype=bool)
    cut = a[side][:, ~side].sum()
    deg = a.sum(axis=1)
    va, vb = deg[side].sum(), deg[~side].sum()
    if va == 0 or vb == 0:
        return np.inf
    return float(cut / va + cut / vb)


def _fiedler(a: np.ndarray) -> tuple[np.ndarray, bool]:
    """Second eigenvector of the symmetric normalized Laplacian, sign-fixed.

    Also reports whether the second eigenvalue is degenerate.
    """
    deg = a.sum(axis=1)
    d = 1.0 / np.sqrt(deg)
    lap = np.eye(len(a)) - d[:, None] * a * d[None, :]
    w, v = np.linalg.eigh(lap)
    vec = v[:, 1]
    nz = np.flatnonzero(np.abs(vec) > EIG_TOL)
    if nz.size and vec[nz[0]] < 0:
        vec = -vec
    degenerate = len(w) > 2 and abs(w[2] - w[1]) < EIG_TOL * max(1.0, abs(w[1]))
    return vec, degenerate


def spectral_bipartition(a: np.ndarray) -> ClusterAssignment:
    """Split the nodes of affinity ``a`` in two by the sign of the Fiedler vector.

    Isolated nodes go to the minority side. A degenerate spectrum (e.g. a
    uniform affinity) falls back to an index split: the first ``ceil(n/2)``
    nodes against the rest.
    """
    a = np.asarray(a, dtype=np.float64)
    n = a.shape[0]
    if a.ndim != 2 or a.shape != (n, n):
        raise ValueError("affinity must be a square matrix")
    if n < 2:
        raise ValueError("spectral_bipartition needs at least 2 nodes")
    if np.any(a < 0) or not np.allclose(a, a.T):
        raise ValueError("affinity must be symmetric and non-negative")
    a = a.copy()
    np.fill_diagonal(a, 0.0)

    deg = a.sum(axis=1)
    isolated = deg <= 0
    active = np.flatnonzero(~isolated)
    positive = np.zeros(n, dtype=bool)
    if active.size >= 2:
        sub = a[np.ix_(active, active)]
        vec, degenerate = _fiedler(sub)
        if degenerate:
            side = np.arange(active.size) < (active.size + 1) // 2
        else:
            side = vec > EIG_TOL
            if side.all() or not side.any():
                side = np.ones(active.size, dtype=bool)
                side[np.argmin(sub.sum(axis=1))] = False
        positive[active] = side
    elif active.size == 1:
        positive[active] = True
    else:
        positive[: (n + 1) // 2] = True
        isolated[:] = False

    if isolated.any():
        # isolated nodes join the side that is smaller among connected nodes
        n_pos = int(positive[active].sum())
        positive[isolated] = n_pos < active.size - n_pos

    labels = np.where(positive, 0, 1)
    sizes = [(labels == 0).sum(), (labels == 1).sum()]
    if sizes[0] != sizes[1]:
        main = int(np.argmax(sizes))
    else:
        main = int(labels[int(np.argmax(deg))])
    return ClusterAssignment(labels, main)


def spectral_clusters(a: np.ndarray, k: int = 2, seed: int = 0) -> ClusterAssignment:
    """k-way spectral clustering (k-means on the first k eigenvectors); ``k == 2`` is the Fiedler split."""
    if k == 2:
        return spectral_bipartition(a)
    if k < 2:
        raise ValueError("k must be >= 2")
    from scipy.cluster.vq import kmeans2

    a = np.asarray(a, dtype=np.float64).copy()
    np.fill_diagonal(a, 0.0)
    deg = a.sum(axis=1)
    d = np.where(deg > 0, 1.0 / np.sqrt(np.where(deg > 0, deg, 1.0)), 0.0)
    lap = np.eye(len(a)) - d[:, None] * a * d[None, :]
    _, v = np.linalg.eigh(lap)
    emb = v[:, :k]
    norms = np.linalg.norm(emb, axis=1, keepdims=True)
    emb = emb / np.where(norms > 0, norms, 1.0)
    _, labels = kmeans2(emb, k, minit="++", seed=np.random.default_rng(seed))
    counts = np.bincount(labels, minlength=k)
    return ClusterAssignment(labels, int(np.argmax(counts)))


def blend_canonical(
    members: Sequence[np.ndarray],
    word_label: str = "",
    period: tuple[int, int, int] | None = None,
    names: Sequence[str] = (),
) -> CanonicalForm:
    """Equal-weight pixel mean of ``members``, rounded half-up."""
    if len(members) == 0:
        raise ValueError("blend_canonical needs at least one image")
    imgs = [np.asarray(m) for m in members]
    shape = imgs[0].shape
    if any(im.shape != shape for im in imgs):
        raise ValueError("all members must share the same dimensions")
    total = np.sum([im.astype(np.int64) for im in imgs], axis=0)
    k = len(imgs)
    blended = ((2 * total + k) // (2 * k)).astype(np.uint8)
    return CanonicalForm(blended, word_label, period, k, tuple(names))


def canonical_pipeline(
    group: Sequence,
    metric: str = "dtw",
    word_label: str = "",
    period: tuple[int, int, int] | None = None,
    size: tuple[int, int] = sim.SNIPPET_SIZE,
    labels: Sequence[str] | None = None,
    window: int = 7,
    gaussian: bool = False,
    k: int = 2,
) -> CanonicalForm:
    """Resize the group, cluster it on ``metric`` and blend the largest cluster."""
    if len(group) < 2:
        raise ValueError("canonical_pipeline needs at least 2 snippets")
    names = sim._labels(group, labels)
    imgs = sim.common_resize(group, *size)
    matrix = sim.similarity_matrix(imgs, metric, labels=names, window=window, gaussian=gaussian)
    assignment = spectral_clusters(to_affinity(matrix), k)
    keep = assignment.main_members
    log.debug("canonical %s %s keeps %d of %d", word_label, period, len(keep), len(imgs))
    return blend_canonical([imgs[i] for i in keep], word_label, period, [names[i] for i in keep])


def compare_canonicals(
    forms: Sequence[CanonicalForm],
    labels: Sequence[str] | None = None,
    window: int = 7,
    gaussian: bool = False,
) -> tuple[dict[str, sim.SimilarityMatrix], sim.ComparisonTable]:
    """All three similarity matrices across periods, plus a table against the first form."""
    if len(forms) < 2:
        raise ValueError("compare_canonicals needs at least 2 canonical forms")
    imgs = [f.image for f in forms]
    if any(im.shape != imgs[0].shape for im in imgs):
        raise ValueError("canonical forms must share the same dimensions")
    if labels is None:
        labels = [period_label(f.period) if f.period else str(i + 1) for i, f in enumerate(forms)]
    matrices = {m: sim.similarity_matrix(imgs, m, labels, window, gaussian) for m in sim.METRICS}
    return matrices, sim.comparison_table(imgs, 0, labels, window, gaussian)


def period_label(period: tuple[int, int, int]) -> str:
    year, month, week = period
    return f"{year}_{month:02d}_week{week}"
