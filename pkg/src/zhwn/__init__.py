"""zhwn: build and evaluate bilingual English-Chinese wordnets.

Parse Princeton-WordNet-format databases, expand synsets with dictionary
translations, screen candidates by embedding geometry, run human review
through an auditable edit log, and score the result on relatedness,
conceptual similarity and word sense disambiguation.
"""

from .embeddings import EmbeddingTable, Projection2D, compose, cosine, load_embeddings, pca_fit_project
from .errors import ZhwnError
from .lexicon import BilingualLexicon, CandidateLemma, DictionaryEntry, classify, merge, translate_synsets
from .corrections import CorrectionEdit, EditLog, apply_edits, flag_hard_translation, mark_affix, normalize_name
from .relatedness import GlossStandard, evaluate, f_score, gloss_vector
from .review import ReviewItem, ReviewQueue, build_queue, decide
from .screening import ScreeningConfig, ScreeningOutcome, magnitude, screen_all, select_lemmas
from .similarity import IcParams, WordPairSet, evaluate_pairs, lcs, lin_sim, msim, spearman, zhou_ic
from .store import VersionMap, WordnetDb, coverage_report, depth, hyponym_count, load_db, map_id
from .synsets import Relation, Synset, SynsetId
from .wsd import SenseInventory, WsdInstance, context_vector, context_window, disambiguate, preprocess, score

__version__ = "0.1.0"
