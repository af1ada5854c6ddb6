import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays
from scipy import ndimage

from diaryforge import fixtures, imagecore
from diaryforge.segmentation import (
    BoundingBox, Contour, SegmentationConfig, bounding_boxes, contour_box, find_contours, segment_page,
)


def square(h, w, y, x, side):
    img = np.zeros((h, w), np.uint8)
    img[y:y + side, x:x + side] = 255
    return img


def test_find_contours_blank():
    assert find_contours(np.zeros((10, 10), np.uint8)) == []


def test_find_contours_square_boundary():
    cs = find_contours(square(10, 10, 3, 3, 4))
    assert len(cs) == 1
    pts = set(cs[0].points)
    ring = {(x, y) for y in range(3, 7) for x in range(3, 7) if x in (3, 6) or y in (3, 6)}
    assert pts == ring and len(cs[0]) == 12


def test_find_contours_scanline_order():
    img = square(20, 30, 10, 2, 3) | square(20, 30, 1, 20, 3)
    cs = find_contours(img)
    assert len(cs) == 2
    assert contour_box(cs[0]) == BoundingBox(20, 1, 3, 3)
    assert contour_box(cs[1]) == BoundingBox(2, 10, 3, 3)


def test_single_pixel_and_diagonal_components():
    img = np.zeros((6, 6), np.uint8)
    img[1, 1] = 255
    img[3, 3] = img[4, 4] = 255  # 8-connected diagonal pair
    cs = find_contours(img)
    assert [contour_box(c) for c in cs] == [BoundingBox(1, 1, 1, 1), BoundingBox(3, 3, 2, 2)]


@settings(max_examples=60, deadline=None)
@given(arrays(np.bool_, st.tuples(st.integers(1, 16), st.integers(1, 16))))
def test_contours_match_components(mask):
    img = np.where(mask, 255, 0).astype(np.uint8)
    cs = find_contours(img)
    lab, n = ndimage.label(mask, structure=np.ones((3, 3)))
    assert len(cs) == n
    expected = sorted(
        (sl[1].start, sl[0].start, sl[1].stop - sl[1].start, sl[0].stop - sl[0].start)
        for sl in ndimage.find_objects(lab)
    )
    assert sorted(contour_box(c) for c in cs) == expected
    for c in cs:
        # an outer contour is a closed chain of 8-adjacent foreground pixels
        for (x0, y0), (x1, y1) in zip(c.points, c.points[1:] + c.points[:1]):
            assert max(abs(x0 - x1), abs(y0 - y1)) <= 1
            assert mask[y0, x0]


def test_bounding_boxes_area_filter():
    small = Contour(tuple((x, y) for y in range(10, 14) for x in range(10, 14)))
    assert contour_box(small) == BoundingBox(10, 10, 4, 4)
    assert bounding_boxes([small]) == []
    big = find_contours(square(20, 20, 2, 2, 10))
    assert bounding_boxes(big) == [BoundingBox(2, 2, 10, 10)]


def test_l_shape_box():
    img = np.zeros((25, 15), np.uint8)
    img[0:20, 0:2] = 255
    img[18:20, 0:10] = 255
    assert bounding_boxes(find_contours(img)) == [BoundingBox(0, 0, 10, 20)]


@settings(max_examples=30, deadline=None)
@given(arrays(np.bool_, (20, 20)), st.integers(0, 40), st.integers(0, 40))
def test_min_area_monotone(mask, a1, a2):
    cs = find_contours(np.where(mask, 255, 0).astype(np.uint8))
    lo, hi = sorted((a1, a2))
    assert len(bounding_boxes(cs, hi)) <= len(bounding_boxes(cs, lo))


def test_blank_page():
    assert segment_page(np.full((200, 300), 230, np.uint8)) == []


def test_page_smaller_than_kernel():
    with pytest.raises(ValueError):
        segment_page(np.full((5, 5), 230, np.uint8))


def test_config_validation():
    with pytest.raises(ValueError):
        SegmentationConfig(line_kernel=(4, 9)).validate()
    with pytest.raises(ValueError):
        SegmentationConfig(crop_from="color").validate()
    with pytest.raises(ValueError):
        SegmentationConfig(threshold=300).validate()


def stamped_page(seed, labels, words_per_line):
    spec = fixtures.FixtureSpec(words_per_line=words_per_line, specks=0)
    rng = np.random.default_rng(seed)
    page = fixtures.render_page(spec, rng, 1917, labels, [False] * len(labels))
    return imagecore.grayscale(page.image), page.stamps


def test_three_lines_of_four_words():
    labels = ["the", "of", "to", "in", "a", "the", "of", "to", "in", "a", "the", "of"]
    gray, stamps = stamped_page(5, labels, 4)
    snippets = segment_page(gray, page_id="p")
    assert len(snippets) == 12
    for s in snippets:
        hits = [st for st in stamps if s.box.contains(*BoundingBox(*st.box).center)]
        assert len(hits) == 1
        assert (s.line_index, s.word_index) == (hits[0].line, hits[0].word)
    assert [s.name for s in snippets[:2]] == ["p_0_0", "p_0_1"]


def test_one_word_box_close_to_stamp():
    gray, stamps = stamped_page(6, ["of"], 7)
    snippets = segment_page(gray)
    assert len(snippets) == 1
    got, want = snippets[0].box, stamps[0].box
    assert all(abs(a - b) <= 2 for a, b in zip(got, want))


def test_snippet_crop_modes():
    gray, _ = stamped_page(7, ["the", "of"], 7)
    binary = segment_page(gray)
    grey = segment_page(gray, SegmentationConfig(crop_from="gray"))
    assert [s.box for s in binary] == [s.box for s in grey]
    assert set(np.unique(binary[0].image)) <= {0, 255}
    b = grey[0].box
    assert np.array_equal(grey[0].image, gray[b.y:b.y + b.h, b.x:b.x + b.w])


def test_fixture_page_invariants():
    spec = fixtures.FixtureSpec()
    page = fixtures.render_page(spec, np.random.default_rng(21), 1919)
    gray = imagecore.grayscale(page.image)
    snippets = segment_page(gray, page_id="x", period=(1919, 10, 1))
    h, w = gray.shape
    centres = [BoundingBox(*s.box).center for s in page.stamps]
    for s in snippets:
        b = s.box
        assert 0 <= b.x and 0 <= b.y and b.x + b.w <= w and b.y + b.h <= h
        assert sum(b.contains(*c) for c in centres) <= 1
        assert s.period == (1919, 10, 1)
    keys = [(s.line_index, s.word_index) for s in snippets]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)
    again = segment_page(gray, page_id="x", period=(1919, 10, 1))
    assert [(s.box, s.name) for s in again] == [(s.box, s.name) for s in snippets]
    assert all(np.array_equal(a.image, b.image) for a, b in zip(snippets, again))
