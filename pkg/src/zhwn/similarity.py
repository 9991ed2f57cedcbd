"""Conceptual similarity: depth-and-hyponym information content, Lin
similarity over the lowest common subsumer, max over sense pairs, and
Spearman rank correlation against human judgments.

IC(C) = k*(1 - log(hypo(C)+1)/log(max_nodes))
      + (1-k)*(log(depth(C)+1)/log(max_depth))

with natural logs (the ratios are base-invariant), depth counted in edges
from the taxonomy root (root = 0), and max_nodes including the virtual
root, which makes IC(root) exactly 0.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import ConstantInputError, ParseError, ZhwnError
from .lexicon import BilingualLexicon
from .store import WordnetDb
from .synsets import SynsetId, normalize_pos

logger = logging.getLogger("zhwn.similarity")


@dataclass
class IcParams:
    """Weight factor plus the taxonomy extents the IC formula needs."""

    k: float = 0.5
    max_nodes: int = 1
    max_depth: int = 1

    def __post_init__(self):
        if not 0.0 <= self.k <= 1.0:
            raise ValueError("k must be within [0, 1]")
        if self.max_nodes < 1 or self.max_depth < 1:
            raise ValueError("max_nodes and max_depth must be >= 1")


def params_for(db: WordnetDb, pos: str = "n", k: float = 0.5) -> IcParams:
    tax = db.taxonomy(pos)
    return IcParams(k=k, max_nodes=tax.node_count, max_depth=max(1, tax.max_depth))


def ic_from_counts(hypo: int, depth: int, params: IcParams) -> float:
    """The IC formula on raw hyponym/depth counts (shared with test oracles)."""
    if params.max_nodes > 1:
        node_term = 1.0 - math.log(hypo + 1) / math.log(params.max_nodes)
    else:
        node_term = 0.0
    if params.max_depth > 1:
        depth_term = math.log(depth + 1) / math.log(params.max_depth)
    else:
        depth_term = 0.0  # degenerate flat taxonomy: no depth signal to scale
    return params.k * node_term + (1.0 - params.k) * depth_term


def zhou_ic(db: WordnetDb, sid: SynsetId, params: Optional[IcParams] = None) -> float:
    tax = db.taxonomy(sid.pos)
    params = params or params_for(db, sid.pos)
    return ic_from_counts(tax.hyponym_count(sid), tax.depth(sid), params)


def lcs(db: WordnetDb, c1: SynsetId, c2: SynsetId,
        params: Optional[IcParams] = None) -> SynsetId:
    """Closest common ancestor (the nodes included), maximum IC, ties to
    the smaller offset.  The virtual root guarantees one always exists.

    Only *minimal* common ancestors compete: in a multi-parent graph a
    remote ancestor can sit deeper (by min-path) than the nodes themselves
    and out-score them on IC, which would break lin_sim(c, c) = 1.
    """
    if c1.pos != c2.pos:
        raise ZhwnError(f"{c1} and {c2} are in different taxonomies")
    tax = db.taxonomy(c1.pos)
    params = params or params_for(db, c1.pos)
    shared = tax.ancestors(c1) & tax.ancestors(c2)
    if not shared:
        raise ZhwnError(f"no common ancestor for {c1} and {c2}")  # unreachable with a root
    minimal = [
        s for s in shared
        if not any(s is not t and s != t and s in tax.ancestors(t) for t in shared)
    ]
    if not minimal:  # mutually-cyclic shared set (data artifact): fall back
        minimal = list(shared)
    return max(
        minimal,
        key=lambda s: (ic_from_counts(tax.hyponym_count(s), tax.depth(s), params), -s.offset),
    )


def lin_sim(db: WordnetDb, c1: SynsetId, c2: SynsetId,
            params: Optional[IcParams] = None) -> float:
    """2*IC(LCS)/(IC(c1)+IC(c2)); both-roots (zero denominator) gives 1.0."""
    params = params or params_for(db, c1.pos)
    denominator = zhou_ic(db, c1, params) + zhou_ic(db, c2, params)
    if denominator == 0.0:
        # both arguments carry zero information: identical by convention
        logger.warning("lin_sim(%s, %s): zero IC on both sides, returning 1.0", c1, c2)
        return 1.0
    ancestor = lcs(db, c1, c2, params)
    return 2.0 * zhou_ic(db, ancestor, params) / denominator


class SenseLookup:
    """word -> synset ids, through the bilingual lexicon or the English index."""

    def __init__(self, db: WordnetDb, lex: Optional[BilingualLexicon] = None,
                 language: str = "chinese", pos: str = "n"):
        if language not in ("chinese", "english"):
            raise ValueError("language must be 'chinese' or 'english'")
        if language == "chinese" and lex is None:
            raise ZhwnError("Chinese lookup needs a bilingual lexicon")
        self.db = db
        self.lex = lex
        self.language = language
        self.pos = normalize_pos(pos)

    def __call__(self, word: str) -> list[SynsetId]:
        if self.language == "chinese":
            return self.lex.synsets_for_text(word, self.pos)
        return list(self.db.lookup(word, self.pos))


def msim(db: WordnetDb, lookup: SenseLookup, w1: str, w2: str,
         params: Optional[IcParams] = None) -> Optional[float]:
    """Max Lin similarity over the cross-product of the two words' senses.

    None marks a miss: one of the words has no synset under the lookup.
    """
    ids1 = lookup(w1)
    ids2 = lookup(w2)
    if not ids1 or not ids2:
        return None
    params = params or params_for(db, lookup.pos)
    return max(lin_sim(db, a, b, params) for a in ids1 for b in ids2)


def average_ranks(values) -> np.ndarray:
    """1-based ranks, ties sharing the average of their positions."""
    values = np.asarray(values, dtype=float)
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=float)
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(x, y) -> float:
    """Pearson correlation of average-ranked values (tie-aware)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ZhwnError("spearman needs two equally long vectors")
    if len(x) < 2:
        raise ZhwnError("spearman needs at least 2 observations")
    rx = average_ranks(x)
    ry = average_ranks(y)
    dx = rx - rx.mean()
    dy = ry - ry.mean()
    sx = float(np.sqrt(np.dot(dx, dx)))
    sy = float(np.sqrt(np.dot(dy, dy)))
    if sx == 0.0 or sy == 0.0:
        raise ConstantInputError("spearman undefined for constant input")
    return float(np.dot(dx, dy) / (sx * sy))


@dataclass
class WordPairSet:
    pairs: list[tuple[str, str, float]]
    label: str = "pairs"

    def __post_init__(self):
        seen = set()
        for w1, w2, _score in self.pairs:
            if (w1, w2) in seen:
                raise ParseError(f"duplicate pair ({w1}, {w2}) in {self.label}")
            seen.add((w1, w2))


def load_pairs(path, label: Optional[str] = None) -> WordPairSet:
    """Read word1<TAB>word2<TAB>human-score lines (UTF-8)."""
    pairs = []
    for number, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ParseError("pair line needs word1, word2, score", line=number)
        try:
            pairs.append((parts[0], parts[1], float(parts[2])))
        except ValueError:
            raise ParseError(f"bad human score {parts[2]!r}", line=number) from None
    return WordPairSet(pairs, label or Path(path).stem)


@dataclass
class SimilarityReport:
    label: str
    rows: list[dict] = field(default_factory=list)
    misses: list[tuple[str, str]] = field(default_factory=list)
    spearman_all: Optional[float] = None       # misses scored 0
    spearman_covered: Optional[float] = None   # misses excluded
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "label": self.label,
            "pairs": len(self.rows),
            "misses": [list(m) for m in self.misses],
            "spearman_all": self.spearman_all,
            "spearman_covered": self.spearman_covered,
            "note": self.note,
            "rows": self.rows,
        }

    def detail_rows(self) -> str:
        lines = ["word1\tword2\thuman\tmsim\tmiss"]
        for row in self.rows:
            lines.append(
                f"{row['word1']}\t{row['word2']}\t{row['human']}\t{row['msim']}\t{row['miss']}"
            )
        return "\n".join(lines) + "\n"


def evaluate_pairs(db: WordnetDb, lookup: SenseLookup, pair_set: WordPairSet,
                   params: Optional[IcParams] = None) -> SimilarityReport:
    """msim per pair plus Spearman against the human scores.

    Missed pairs score 0 in the primary correlation and are excluded from
    the secondary one; both are reported.
    """
    if not pair_set.pairs:
        raise ZhwnError("empty word-pair set")
    params = params or params_for(db, lookup.pos)
    report = SimilarityReport(pair_set.label)
    for w1, w2, human in pair_set.pairs:
        value = msim(db, lookup, w1, w2, params)
        miss = value is None
        if miss:
            report.misses.append((w1, w2))
        report.rows.append(
            {"word1": w1, "word2": w2, "human": human,
             "msim": 0.0 if miss else value, "miss": miss}
        )
    human_scores = [row["human"] for row in report.rows]
    machine_scores = [row["msim"] for row in report.rows]
    try:
        report.spearman_all = spearman(machine_scores, human_scores)
    except (ConstantInputError, ZhwnError) as exc:
        report.note = f"spearman_all undefined: {exc}"
    covered = [(row["msim"], row["human"]) for row in report.rows if not row["miss"]]
    if len(covered) >= 2:
        try:
            report.spearman_covered = spearman([c[0] for c in covered], [c[1] for c in covered])
        except ConstantInputError as exc:
            report.note = (report.note + "; " if report.note else "") + f"spearman_covered undefined: {exc}"
    return report


def write_report(report: SimilarityReport, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(report.as_dict(), handle, ensure_ascii=False, indent=2)
        handle.write("\n")
