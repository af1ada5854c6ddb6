"""
Independent reference implementations, written for clarity over speed.

None of these import the library code they are used to check.
"""

import numpy as np

C1 = (0.01 * 255) ** 2
C2 = (0.03 * 255) ** 2


def dtw_paths(n, m):
    """Every monotone path from (0, 0) to (n-1, m-1) with unit steps right, down or diagonal."""
    def walk(i, j, path):
        if (i, j) == (n - 1, m - 1):
            yield path
            return
        for di, dj in ((1, 0), (0, 1), (1, 1)):
            a, b = i + di, j + dj
            if a < n and b < m:
                yield from walk(a, b, path + [(a, b)])
    yield from walk(0, 0, [(0, 0)])


def dtw_brute(p, q):
    """Minimum-cost alignment by enumeration; ties go to the longest path. Returns (cost, steps, similarity)."""
    best = None
    for path in dtw_paths(len(p), len(q)):
        cost = sum(abs(p[i] - q[j]) for i, j in path)
        key = (cost, -len(path))
        if best is None or key < best:
            best = key
    cost, steps = best[0], -best[1]
    return cost, steps, min(1.0, max(0.0, 1.0 - cost / steps))


def ssim_direct(a, b, win=7):
    """Mean SSIM over all win x win windows fully inside the image, population statistics."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    h, w = a.shape
    vals = []
    for y in range(h - win + 1):
        for x in range(w - win + 1):
            pa = a[y:y + win, x:x + win].ravel()
            pb = b[y:y + win, x:x + win].ravel()
            ma, mb = pa.mean(), pb.mean()
            va = ((pa - ma) ** 2).mean()
            vb = ((pb - mb) ** 2).mean()
            cov = ((pa - ma) * (pb - mb)).mean()
            vals.append((2 * ma * mb + C1) * (2 * cov + C2) / ((ma * ma + mb * mb + C1) * (va + vb + C2)))
    return float(np.mean(vals))


def ncut_value(a, members):
    n = len(a)
    inside = set(members)
    cut = sum(a[i][j] for i in inside for j in range(n) if j not in inside)
    vol_a = sum(a[i][j] for i in inside for j in range(n))
    vol_b = sum(a[i][j] for i in range(n) if i not in inside for j in range(n))
    if vol_a == 0 or vol_b == 0:
        return float("inf")
    return cut / vol_a + cut / vol_b


def brute_min_ncut(a):
    """Exhaustive minimum normalized cut over all bipartitions. Returns (value, frozenset side containing node 0).

    Every bipartition with node 0 on side A is enumerated as a row of a 0/1
    mask matrix, so the whole search is a few matrix products.
    """
    a = np.asarray(a, dtype=np.float64)
    n = len(a)
    codes = np.arange(1, 2 ** (n - 1))  # code 0 would put every node in A
    bits = ((codes[:, None] >> np.arange(n - 1)[None, :]) & 1).astype(bool)
    side_a = np.ones((len(codes), n), dtype=bool)
    side_a[:, 1:] = ~bits  # node k joins B when bit k-1 is set
    sa = side_a.astype(np.float64)
    sb = 1.0 - sa
    deg = a.sum(axis=1)
    cut = np.einsum("ki,ij,kj->k", sa, a, sb)
    vol_a, vol_b = sa @ deg, sb @ deg
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.where((vol_a > 0) & (vol_b > 0), cut / vol_a + cut / vol_b, np.inf)
    k = int(np.argmin(val))
    return float(val[k]), frozenset(np.flatnonzero(side_a[k]).tolist())


def bilinear_pixel(src, x, y):
    """Sample ``src`` at continuous pixel-centre coordinates with clamping."""
    h, w = src.shape
    x = min(max(x, 0.0), w - 1.0)
    y = min(max(y, 0.0), h - 1.0)
    x0, y0 = int(np.floor(x)), int(np.floor(y))
    x1, y1 = min(x0 + 1, w - 1), min(y0 + 1, h - 1)
    fx, fy = x - x0, y - y0
    top = src[y0, x0] * (1 - fx) + src[y0, x1] * fx
    bot = src[y1, x0] * (1 - fx) + src[y1, x1] * fx
    return top * (1 - fy) + bot * fy
