"""Handwriting drift and sentiment analysis for scanned, transcribed diaries."""

from .cluster import CanonicalForm, ClusterAssignment, canonical_pipeline, spectral_bipartition, to_affinity
from .config import Config, load_config
from .corpus import Artifact, CorpusLayout, load_entries, scan, write_outputs
from .entities import EntityMention, EntitySpec, entity_sentiment, find_mentions
from .hedonometer import DiaryEntry, Lexicon, clean_text, load_lexicon, score_text, weekly_series, year_stats
from .segmentation import BoundingBox, SegmentationConfig, WordSnippet, segment_page
from .similarity import SimilarityMatrix, comparison_table, common_resize, dtw_similarity, similarity_matrix, ssim

__version__ = "0.1.0"
