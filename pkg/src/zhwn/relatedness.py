"""Relatedness scoring against a gloss standard: recall, precision, F.

Each lemma of each standard synset is matched against *all* standard
glosses by cosine between the lemma vector and the gloss vector (mean of
in-vocabulary gloss tokens).  A lemma is right when its best gloss is its
own synset's; a concept is right when all of its lemmas are.  R = right
concepts / gloss count, P = right lemmas / lemma count, F = 2PR/(P+R).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional

import numpy as np

from .embeddings import EmbeddingTable, cosine
from .errors import ConsistencyError, ParseError, ZhwnError
from .lexicon import BilingualLexicon
from .synsets import SynsetId
from .tokenization import CHINESE_STOPWORDS, GreedyTokenizer, remove_stopwords

# Canonical gloss sets: sizes and the noun:verb:adj:adv sampling weights.
CANONICAL_SIZES = {"C_gloss180": 180, "C_gloss240": 240}
POS_WEIGHTS = {"n": 3, "v": 1, "a": 1, "r": 1}


@dataclass
class GlossStandard:
    """Translated glosses keyed by synset; the relatedness gold standard."""

    entries: list[tuple[SynsetId, str]]
    label: str = "standard"

    def __post_init__(self):
        seen = set()
        for sid, gloss in self.entries:
            if sid in seen:
                raise ConsistencyError(f"duplicate synset {sid} in {self.label}")
            if not gloss.strip():
                raise ConsistencyError(f"empty gloss for {sid} in {self.label}")
            seen.add(sid)

    def validate_canonical(self) -> None:
        """Canonical sets must have their declared size and a 3:1:1:1 POS mix."""
        size = CANONICAL_SIZES.get(self.label)
        if size is None:
            return
        if len(self.entries) != size:
            raise ConsistencyError(f"{self.label} must have {size} entries, found {len(self.entries)}")
        counts = {pos: 0 for pos in POS_WEIGHTS}
        for sid, _ in self.entries:
            counts[sid.pos] += 1
        total_weight = sum(POS_WEIGHTS.values())
        for pos, weight in POS_WEIGHTS.items():
            expected = size * weight / total_weight
            if abs(counts[pos] - expected) > 1:
                raise ConsistencyError(
                    f"{self.label}: {counts[pos]} {pos} entries, expected about {expected:.0f}"
                )


def load_standard(path, label: Optional[str] = None) -> GlossStandard:
    """Read a UTF-8 TSV of synset-id<TAB>chinese-gloss lines."""
    entries = []
    text = Path(path).read_text(encoding="utf-8")
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ParseError("standard line needs synset-id and gloss", line=number)
        entries.append((SynsetId.parse(parts[0]), parts[1]))
    std = GlossStandard(entries, label or Path(path).stem)
    std.validate_canonical()
    return std


def gloss_vector(gloss: str, table: EmbeddingTable,
                 tokenizer: Callable[[str], list[str]],
                 stoplist: Iterable[str] = ()) -> Optional[np.ndarray]:
    """Mean of in-vocabulary token vectors; None when nothing is in vocabulary."""
    if not gloss.strip():
        raise ZhwnError("empty gloss")
    tokens = remove_stopwords(tokenizer(gloss), stoplist)
    vectors = [table[t] for t in tokens if t in table]
    if not vectors:
        return None
    return np.mean(vectors, axis=0)


def f_score(precision: float, recall: float) -> float:
    """Harmonic F-measure; defined as 0 when both inputs are 0."""
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


@dataclass
class ConceptDetail:
    synset: SynsetId
    right: bool
    lemmas: list[dict] = field(default_factory=list)
    note: str = ""


@dataclass
class RelatednessReport:
    label: str
    ng: int
    right_concepts: int   # E of the recall formula
    total_lemmas: int     # S of the precision formula
    right_lemmas: int     # L of the precision formula
    oov_lemmas: int
    oov_glosses: int
    absent_concepts: int
    details: list[ConceptDetail] = field(default_factory=list)
    relatedness_function: str = "cosine(lemma vector, mean gloss-token vector)"

    @property
    def recall(self) -> float:
        return self.right_concepts / self.ng if self.ng else 0.0

    @property
    def precision(self) -> float:
        return self.right_lemmas / self.total_lemmas if self.total_lemmas else 0.0

    @property
    def f(self) -> float:
        return f_score(self.precision, self.recall)

    def as_dict(self) -> dict:
        return {
            "label": self.label,
            "ng": self.ng,
            "right_concepts": self.right_concepts,
            "total_lemmas": self.total_lemmas,
            "right_lemmas": self.right_lemmas,
            "oov_lemmas": self.oov_lemmas,
            "oov_glosses": self.oov_glosses,
            "absent_concepts": self.absent_concepts,
            "recall": self.recall,
            "precision": self.precision,
            "f": self.f,
            "relatedness_function": self.relatedness_function,
        }

    def detail_rows(self) -> str:
        lines = ["synset\tlemma\tright\tbest_gloss\tnote"]
        for detail in self.details:
            if not detail.lemmas:
                lines.append(f"{detail.synset}\t\t{detail.right}\t\t{detail.note}")
            for row in detail.lemmas:
                lines.append(
                    f"{detail.synset}\t{row['lemma']}\t{row['right']}\t{row['best']}\t{row['note']}"
                )
        return "\n".join(lines) + "\n"


def evaluate(lex: BilingualLexicon, std: GlossStandard, table: EmbeddingTable,
             tokenizer: Optional[Callable[[str], list[str]]] = None,
             stoplist: Iterable[str] = CHINESE_STOPWORDS) -> RelatednessReport:
    """Score the lexicon's active lemmas against every gloss in the standard.

    Argmax ties go to the lowest-index gloss.  Out-of-vocabulary lemmas and
    glosses count as wrong and are tallied separately, never skipped;
    standard synsets missing from the lexicon count as wrong concepts.
    """
    if not std.entries:
        raise ZhwnError("empty gloss standard")
    if tokenizer is None:
        tokenizer = GreedyTokenizer(table.tokens())

    vectors = [gloss_vector(gloss, table, tokenizer, stoplist) for _, gloss in std.entries]
    report = RelatednessReport(std.label, len(std.entries), 0, 0, 0, 0, 0, 0)
    report.oov_glosses = sum(1 for v in vectors if v is None)

    for own_index, (sid, _gloss) in enumerate(std.entries):
        detail = ConceptDetail(sid, right=False)
        lemmas = lex.active(sid)
        if not lemmas:
            report.absent_concepts += 1
            detail.note = "no active lemmas in lexicon"
            report.details.append(detail)
            continue
        concept_right = vectors[own_index] is not None
        if vectors[own_index] is None:
            detail.note = "gloss fully out of vocabulary"
        for lemma in lemmas:
            report.total_lemmas += 1
            row = {"lemma": lemma, "right": False, "best": "", "note": ""}
            vec = table.get(lemma)
            if vec is None:
                report.oov_lemmas += 1
                concept_right = False
                row["note"] = "lemma out of vocabulary"
            else:
                best_index, best_value = -1, -np.inf
                for gloss_index, gvec in enumerate(vectors):
                    if gvec is None:
                        continue
                    value = cosine(vec, gvec)
                    if value > best_value:  # strict: ties keep the lowest index
                        best_index, best_value = gloss_index, value
                row["best"] = str(std.entries[best_index][0]) if best_index >= 0 else ""
                if best_index == own_index:
                    row["right"] = True
                    report.right_lemmas += 1
                else:
                    concept_right = False
            detail.lemmas.append(row)
        detail.right = concept_right
        if concept_right:
            report.right_concepts += 1
        report.details.append(detail)
    return report


def write_report(report: RelatednessReport, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(report.as_dict(), handle, ensure_ascii=False, indent=2)
        handle.write("\n")
