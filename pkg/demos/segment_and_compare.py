# Segment one synthetic diary page and compare all snippets of one word.
#
# Run from the repository root:  python3 demos/segment_and_compare.py

import numpy as np

from diaryforge import fixtures, imagecore, similarity as sim
from diaryforge.corpus import label_snippets
from diaryforge.segmentation import segment_page

rng = np.random.default_rng(5)
spec = fixtures.FixtureSpec()
page = fixtures.render_page(spec, rng, 1917)
print("page", page.image.shape, "with", len(page.stamps), "stamped words")

gray = imagecore.grayscale(imagecore.resize_capped(page.image))
snippets = segment_page(gray, page_id="p1")
print("segmented", len(snippets), "snippets on",
      len({s.line_index for s in snippets}), "lines")

# attach the ground-truth labels so we can pull out one word group
truth = [{"box": list(s.box), "label": s.label} for s in page.stamps]
snippets = label_snippets(snippets, truth)
group = [s for s in snippets if s.label == "of"]
outlier = [s.name for s in group
           if any(st.outlier and s.box.contains(st.box[0] + st.box[2] / 2, st.box[1] + st.box[3] / 2)
                  for st in page.stamps if st.label == "of")]
print("'of' group:", [s.name for s in group], "planted outlier:", outlier)

imgs = sim.common_resize(group)
table = sim.comparison_table(imgs, 0, [s.name for s in group])
print(f"\n{'snippet':>10} {'MSE':>9} {'SSIM':>6} {'DTW':>6}   (vs {table.reference})")
for row in table.rows:
    flag = "  <- outlier" if row.label in outlier else ""
    print(f"{row.label:>10} {row.mse:9.1f} {row.ssim:6.3f} {row.dtw:6.3f}{flag}")
