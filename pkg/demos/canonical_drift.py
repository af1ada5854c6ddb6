# Build a canonical "of" per year and look at how the handwriting drifts.
#
# The fixture slants and enlarges the script a little every year, so the
# canonical forms should grow less similar to 1917 as the years go by.

import tempfile

import numpy as np

from diaryforge import cluster, fixtures, pipeline
from diaryforge.config import Config

root = tempfile.mkdtemp(prefix="drift-")
layout = fixtures.generate_fixture_corpus(3, fixtures.FixtureSpec(), root)
cfg = Config()

by_period = pipeline.segment_corpus(layout, cfg)
forms = pipeline.canonical_forms(by_period, "of", cfg, weeks=[4])
for f in forms:
    print(cluster.period_label(f.period), "kept", f.member_count, "of 7:", " ".join(f.members))

matrices, table = cluster.compare_canonicals(forms)
labels = matrices["dtw"].labels
np.set_printoptions(precision=3, suppress=True)
for metric in ("dtw", "ssim"):
    print(f"\n{metric.upper()} similarity between yearly canonicals")
    print(" " * 14 + " ".join(f"{lab[:4]:>6}" for lab in labels))
    for lab, row in zip(labels, matrices[metric].values):
        print(f"{lab:>14}" + " ".join(f"{v:6.3f}" for v in row))

print("\nfirst row against", table.reference)
for row in table.rows:
    print(f"  {row.label}: dtw {row.dtw:.3f}  ssim {row.ssim:.3f}  mse {row.mse:.0f}")
print("\nfiles under", root)
