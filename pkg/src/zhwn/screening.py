"""Machine screening of candidate lemmas via 2D projection magnitudes.

For each synset the candidates are compared by the absolute distance of
their projected 2D points from the origin.  Candidates whose pairwise
magnitude difference stays under the threshold (default 0.21) form a
coherence graph; with more than two in-vocabulary candidates the largest
connected component is kept and the rest dropped.  Sets of one or two
candidates are never filtered.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .embeddings import EmbeddingTable, Projection2D, pca_fit_project
from .errors import DegenerateInputError, ZhwnError
from .lexicon import (
    HUMAN_DROPPED,
    HUMAN_KEPT,
    MACHINE_DROPPED,
    MACHINE_KEPT,
    BilingualLexicon,
    CandidateLemma,
)
from .synsets import POS_LETTERS, SynsetId

OOV_POLICIES = ("review", "keep", "drop")


@dataclass
class ScreeningConfig:
    threshold: float = 0.21
    min_candidates_to_filter: int = 3
    oov_policy: str = "review"

    def __post_init__(self):
        if self.threshold <= 0:
            raise ValueError("threshold must be positive")
        if self.min_candidates_to_filter < 2:
            raise ValueError("min_candidates_to_filter must be >= 2")
        if self.oov_policy not in OOV_POLICIES:
            raise ValueError(f"oov_policy must be one of {OOV_POLICIES}")


@dataclass
class ScreeningOutcome:
    """Per-synset screening verdict; kept/dropped/deferred partition the input."""

    synset: SynsetId
    kept: list[str] = field(default_factory=list)
    dropped: list[str] = field(default_factory=list)
    deferred: list[str] = field(default_factory=list)
    magnitudes: dict[str, float] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "synset": str(self.synset),
            "kept": self.kept,
            "dropped": self.dropped,
            "deferred": self.deferred,
            "magnitudes": self.magnitudes,
        }


def magnitude(projection: Projection2D, lemma: str) -> float:
    """Euclidean norm of the lemma's 2D point; KeyError signals OOV to the caller."""
    point = projection[lemma]
    return math.hypot(float(point[0]), float(point[1]))


def _components(texts: list[str], mags: dict[str, float], threshold: float) -> list[list[str]]:
    """Connected components of the |magnitude difference| < threshold graph."""
    ordered = sorted(texts)
    parent = {t: t for t in ordered}

    def find(t):
        while parent[t] != t:
            parent[t] = parent[parent[t]]
            t = parent[t]
        return t

    for i, a in enumerate(ordered):
        for b in ordered[i + 1 :]:
            if abs(mags[a] - mags[b]) < threshold:
                parent[find(a)] = find(b)
    groups: dict[str, list[str]] = {}
    for t in ordered:
        groups.setdefault(find(t), []).append(t)
    return list(groups.values())


def select_lemmas(candidates: list[CandidateLemma], projection: Projection2D,
                  cfg: ScreeningConfig | None = None) -> ScreeningOutcome:
    """Screen one synset's candidates; decisions depend only on magnitudes.

    With fewer in-vocabulary candidates than the filter minimum everything
    in vocabulary is kept.  Otherwise the largest connected component of
    the threshold graph survives; size ties go to the component holding
    the lexicographically smallest lemma.  Out-of-vocabulary candidates
    follow the configured policy.  Candidate statuses are updated in place.
    """
    cfg = cfg or ScreeningConfig()
    if not candidates:
        raise ZhwnError("select_lemmas needs at least one candidate")
    synsets = {c.synset for c in candidates}
    if len(synsets) != 1:
        raise ZhwnError(f"candidates span several synsets: {sorted(map(str, synsets))}")
    outcome = ScreeningOutcome(synset=candidates[0].synset)

    in_vocab: list[CandidateLemma] = []
    for cand in candidates:
        if cand.text in projection:
            in_vocab.append(cand)
            outcome.magnitudes[cand.text] = magnitude(projection, cand.text)
        elif cfg.oov_policy == "review":
            outcome.deferred.append(cand.text)
        elif cfg.oov_policy == "keep":
            outcome.kept.append(cand.text)
        else:
            outcome.dropped.append(cand.text)

    if in_vocab:
        texts = [c.text for c in in_vocab]
        if len(texts) < cfg.min_candidates_to_filter:
            kept = set(texts)
        else:
            components = _components(texts, outcome.magnitudes, cfg.threshold)
            largest = max(len(grp) for grp in components)
            tied = [grp for grp in components if len(grp) == largest]
            # size ties: keep the component holding the smallest lemma by code point
            kept = set(min(tied, key=lambda grp: min(grp)))
        outcome.kept.extend(t for t in texts if t in kept)
        outcome.dropped.extend(t for t in texts if t not in kept)

    by_text = {c.text: c for c in candidates}
    for text in outcome.kept:
        by_text[text].status = MACHINE_KEPT
    for text in outcome.dropped:
        by_text[text].status = MACHINE_DROPPED
    # deferred candidates stay proposed for the review queue

    outcome.kept.sort()
    outcome.dropped.sort()
    outcome.deferred.sort()
    return outcome


@dataclass
class ScreeningSummary:
    per_pos: dict[str, dict[str, int]]

    def total(self) -> dict[str, int]:
        agg = {"kept": 0, "dropped": 0, "deferred": 0, "frozen": 0}
        for row in self.per_pos.values():
            for key in agg:
                agg[key] += row[key]
        return agg

    def as_tsv(self) -> str:
        lines = ["pos\tkept\tdropped\tdeferred\tfrozen"]
        for pos in POS_LETTERS:
            row = self.per_pos[pos]
            lines.append(f"{pos}\t{row['kept']}\t{row['dropped']}\t{row['deferred']}\t{row['frozen']}")
        total = self.total()
        lines.append(f"total\t{total['kept']}\t{total['dropped']}\t{total['deferred']}\t{total['frozen']}")
        return "\n".join(lines) + "\n"


def screen_all(lex: BilingualLexicon, table: EmbeddingTable,
               cfg: ScreeningConfig | None = None) -> tuple[list[ScreeningOutcome], ScreeningSummary]:
    """Screen every candidate-bearing synset; human-decided candidates are frozen.

    The PCA projection is fitted over exactly the candidate tokens taking
    part in this run (logged in the summary as the fit size).  Outcomes
    come back sorted by synset id so identical inputs give identical output.
    """
    cfg = cfg or ScreeningConfig()
    screenable: dict[SynsetId, list[CandidateLemma]] = {}
    frozen: dict[SynsetId, list[CandidateLemma]] = {}
    tokens: list[str] = []
    for sid in sorted(lex.synset_ids()):
        for cand in lex.candidates(sid):
            if cand.status in (HUMAN_KEPT, HUMAN_DROPPED):
                frozen.setdefault(sid, []).append(cand)
            else:
                screenable.setdefault(sid, []).append(cand)
                tokens.append(cand.text)

    try:
        projection = pca_fit_project(table, tokens)
    except DegenerateInputError:
        # under 3 in-table tokens in the whole run: every synset is on the
        # small-set path, so magnitudes are moot; park known tokens at the origin
        known = {t: [0.0, 0.0] for t in dict.fromkeys(tokens) if t in table}
        projection = Projection2D.from_points(known)

    outcomes = []
    per_pos = {pos: {"kept": 0, "dropped": 0, "deferred": 0, "frozen": 0} for pos in POS_LETTERS}
    for sid in sorted(set(screenable) | set(frozen)):
        cands = screenable.get(sid)
        if cands:
            outcome = select_lemmas(cands, projection, cfg)
        else:
            outcome = ScreeningOutcome(synset=sid)
        for cand in frozen.get(sid, ()):  # frozen decisions pass through untouched
            if cand.status == HUMAN_KEPT:
                outcome.kept.append(cand.text)
            else:
                outcome.dropped.append(cand.text)
            per_pos[sid.pos]["frozen"] += 1
        outcome.kept.sort()
        outcome.dropped.sort()
        row = per_pos[sid.pos]
        row["kept"] += len(outcome.kept) - sum(1 for c in frozen.get(sid, ()) if c.status == HUMAN_KEPT)
        row["dropped"] += len(outcome.dropped) - sum(1 for c in frozen.get(sid, ()) if c.status == HUMAN_DROPPED)
        row["deferred"] += len(outcome.deferred)
        outcomes.append(outcome)
    return outcomes, ScreeningSummary(per_pos)


def write_outcomes(outcomes: list[ScreeningOutcome], path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for outcome in outcomes:
            handle.write(json.dumps(outcome.as_dict(), ensure_ascii=False) + "\n")


def load_outcomes(path) -> list[ScreeningOutcome]:
    outcomes = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            if not line.strip():
                continue
            row = json.loads(line)
            outcomes.append(
                ScreeningOutcome(
                    SynsetId.parse(row["synset"]),
                    list(row.get("kept", [])),
                    list(row.get("dropped", [])),
                    list(row.get("deferred", [])),
                    {k: float(v) for k, v in row.get("magnitudes", {}).items()},
                )
            )
    return outcomes
