"""Bilingual lexicon: Chinese candidate lemmas attached to synsets.

Candidates move through a one-way lifecycle: proposed -> machine-kept /
machine-dropped -> human-kept / human-dropped.  Human decisions override
machine ones and are never walked back by re-screening.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from .errors import ConfigurationError, ConsistencyError, ParseError
from .store import VersionMap, WordnetDb, map_id
from .synsets import SynsetId

PROPOSED = "proposed"
MACHINE_KEPT = "machine-kept"
MACHINE_DROPPED = "machine-dropped"
HUMAN_KEPT = "human-kept"
HUMAN_DROPPED = "human-dropped"

STATUSES = (PROPOSED, MACHINE_KEPT, MACHINE_DROPPED, HUMAN_KEPT, HUMAN_DROPPED)
_TIER = {PROPOSED: 0, MACHINE_KEPT: 1, MACHINE_DROPPED: 1, HUMAN_KEPT: 2, HUMAN_DROPPED: 2}
DROPPED = (MACHINE_DROPPED, HUMAN_DROPPED)


@dataclass
class DictionaryEntry:
    """One bilingual dictionary row: an English lemma and its translations."""

    english: str
    chinese: list[str]
    source: str

    def __post_init__(self):
        if not self.english:
            raise ValueError("empty english lemma")
        if not self.chinese:
            raise ValueError(f"{self.english!r}: needs at least one Chinese lemma")
        for text in self.chinese:
            if "\t" in text or "\n" in text:
                raise ValueError(f"{self.english!r}: Chinese lemma contains tab/newline")


@dataclass
class CandidateLemma:
    """A Chinese lemma proposed for one synset, with its lifecycle status."""

    synset: SynsetId
    text: str
    source: str
    status: str = PROPOSED
    note: Optional[str] = None

    def active(self) -> bool:
        return self.status not in DROPPED


class BilingualLexicon:
    """Mapping synset -> candidate lemmas, with provenance metadata."""

    def __init__(self, wordnet_version: str = "3.0", label: str = "unlabeled",
                 dict_labels: Iterable[str] = (), built_at: str = "",
                 applied_through: Optional[str] = None):
        self.wordnet_version = wordnet_version
        self.label = label
        self.dict_labels = list(dict_labels)
        self.built_at = built_at
        self.applied_through = applied_through
        self._by_synset: dict[SynsetId, dict[str, CandidateLemma]] = {}
        self._reverse: Optional[dict[str, list[SynsetId]]] = None

    # -- mutation ---------------------------------------------------------

    def add(self, cand: CandidateLemma) -> None:
        bucket = self._by_synset.setdefault(cand.synset, {})
        if cand.text in bucket:
            raise ConsistencyError(f"duplicate candidate ({cand.synset}, {cand.text!r})")
        bucket[cand.text] = cand
        self._reverse = None

    def set_status(self, sid: SynsetId, text: str, status: str) -> None:
        """Advance a candidate's status; backwards transitions are rejected."""
        cand = self.require(sid, text)
        if status not in STATUSES:
            raise ValueError(f"unknown status {status!r}")
        if _TIER[status] < _TIER[cand.status]:
            raise ConsistencyError(
                f"({sid}, {text!r}): cannot move {cand.status} back to {status}"
            )
        cand.status = status
        self._reverse = None

    def rename(self, sid: SynsetId, old: str, new: str) -> None:
        """Rewrite a candidate's text in place (normalization edits)."""
        bucket = self._by_synset.get(sid, {})
        if old not in bucket:
            raise ConsistencyError(f"no candidate ({sid}, {old!r})")
        if new == old:
            return
        if new in bucket:
            raise ConsistencyError(f"({sid}, {new!r}) already exists")
        rebuilt = {}
        for text, cand in bucket.items():  # keep insertion order stable
            if text == old:
                cand.text = new
                rebuilt[new] = cand
            else:
                rebuilt[text] = cand
        self._by_synset[sid] = rebuilt
        self._reverse = None

    def remove(self, sid: SynsetId, text: str) -> None:
        bucket = self._by_synset.get(sid, {})
        if text not in bucket:
            raise ConsistencyError(f"no candidate ({sid}, {text!r})")
        del bucket[text]
        if not bucket:
            del self._by_synset[sid]
        self._reverse = None

    # -- queries ----------------------------------------------------------

    def get(self, sid: SynsetId, text: str) -> Optional[CandidateLemma]:
        return self._by_synset.get(sid, {}).get(text)

    def require(self, sid: SynsetId, text: str) -> CandidateLemma:
        cand = self.get(sid, text)
        if cand is None:
            raise ConsistencyError(f"no candidate ({sid}, {text!r})")
        return cand

    def candidates(self, sid: SynsetId) -> list[CandidateLemma]:
        return list(self._by_synset.get(sid, {}).values())

    def active(self, sid: SynsetId) -> list[str]:
        return [c.text for c in self._by_synset.get(sid, {}).values() if c.active()]

    def synset_ids(self) -> list[SynsetId]:
        return list(self._by_synset)

    def all_candidates(self) -> Iterable[CandidateLemma]:
        for bucket in self._by_synset.values():
            yield from bucket.values()

    def synsets_for_text(self, text: str, pos: Optional[str] = None) -> list[SynsetId]:
        """Synsets where ``text`` is an active candidate, optionally one POS."""
        if self._reverse is None:
            reverse: dict[str, list[SynsetId]] = {}
            for cand in self.all_candidates():
                if cand.active():
                    reverse.setdefault(cand.text, []).append(cand.synset)
            self._reverse = reverse
        ids = self._reverse.get(text, [])
        if pos is not None:
            ids = [s for s in ids if s.pos == pos]
        return list(ids)

    def counts(self) -> dict[str, int]:
        synsets = active_synsets = lemmas = active_lemmas = 0
        for sid, bucket in self._by_synset.items():
            synsets += 1
            lemmas += len(bucket)
            live = sum(1 for c in bucket.values() if c.active())
            active_lemmas += live
            if live:
                active_synsets += 1
        return {
            "synsets": synsets,
            "lemmas": lemmas,
            "active_synsets": active_synsets,
            "active_lemmas": active_lemmas,
        }

    def copy(self) -> "BilingualLexicon":
        clone = BilingualLexicon(self.wordnet_version, self.label, self.dict_labels,
                                 self.built_at, self.applied_through)
        for cand in self.all_candidates():
            clone.add(CandidateLemma(cand.synset, cand.text, cand.source, cand.status, cand.note))
        return clone

    def __eq__(self, other):
        if not isinstance(other, BilingualLexicon):
            return NotImplemented
        return (
            self.wordnet_version == other.wordnet_version
            and {s: list(b.values()) for s, b in self._by_synset.items()}
            == {s: list(b.values()) for s, b in other._by_synset.items()}
        )

    # -- persistence (JSON lines, one candidate per line) ------------------

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as handle:
            meta = {
                "record": "meta",
                "wordnet_version": self.wordnet_version,
                "label": self.label,
                "dict_labels": self.dict_labels,
                "built_at": self.built_at,
                "applied_through": self.applied_through,
            }
            handle.write(json.dumps(meta, ensure_ascii=False) + "\n")
            for cand in self.all_candidates():
                row = {
                    "record": "candidate",
                    "synset": str(cand.synset),
                    "text": cand.text,
                    "source": cand.source,
                    "status": cand.status,
                    "note": cand.note,
                }
                handle.write(json.dumps(row, ensure_ascii=False) + "\n")

    @classmethod
    def load(cls, path) -> "BilingualLexicon":
        lex = cls()
        with open(path, encoding="utf-8") as handle:
            for number, line in enumerate(handle, start=1):
                if not line.strip():
                    continue
                try:
                    row = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ParseError(f"bad lexicon line: {exc}", line=number) from None
                if row.get("record") == "meta":
                    lex.wordnet_version = row.get("wordnet_version", "3.0")
                    lex.label = row.get("label", "unlabeled")
                    lex.dict_labels = list(row.get("dict_labels", []))
                    lex.built_at = row.get("built_at", "")
                    lex.applied_through = row.get("applied_through")
                    continue
                if row.get("status", PROPOSED) not in STATUSES:
                    raise ParseError(f"unknown status {row.get('status')!r}", line=number)
                lex.add(
                    CandidateLemma(
                        SynsetId.parse(row["synset"]),
                        row["text"],
                        row.get("source", ""),
                        row.get("status", PROPOSED),
                        row.get("note"),
                    )
                )
        return lex


# -- dictionary ingestion --------------------------------------------------


def load_dictionary(path) -> list[DictionaryEntry]:
    """Read a UTF-8 TSV dictionary: english<TAB>chinese1|chinese2<TAB>source."""
    entries = []
    text = Path(path).read_text(encoding="utf-8")
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ParseError("dictionary line needs english, translations, source", line=number)
        english, translations, source = parts
        chinese = [t for t in translations.split("|") if t]
        try:
            entries.append(DictionaryEntry(english, chinese, source))
        except ValueError as exc:
            raise ParseError(str(exc), line=number) from None
    return entries


class _Lookup:
    """Exact lookup with an underscores-to-spaces, case-folded fallback."""

    def __init__(self, entries: Iterable[DictionaryEntry]):
        self.table: dict[str, list[tuple[str, str]]] = {}
        for entry in entries:
            bucket = self.table.setdefault(entry.english, [])
            for text in entry.chinese:
                bucket.append((text, entry.source))

    def translations(self, lemma: str) -> list[tuple[str, str]]:
        for key in (lemma, lemma.lower(), lemma.replace("_", " "), lemma.replace("_", " ").lower()):
            if key in self.table:
                return self.table[key]
        return []


def translate_synsets(db: WordnetDb, dicts: Iterable[DictionaryEntry],
                      label: str = "dict", built_at: str = "") -> tuple[BilingualLexicon, list]:
    """Attach dictionary translations of each synset's English lemmas.

    Returns the proposed-status lexicon plus a miss report: (synset, lemma)
    pairs for English lemmas with no entry in any dictionary.
    """
    entries = list(dicts)
    lookup = _Lookup(entries)
    sources = []
    for entry in entries:
        if entry.source not in sources:
            sources.append(entry.source)
    lex = BilingualLexicon("3.0" if db is None else db.version, label, sources, built_at)
    misses = []
    for sid, syn in db.synsets.items():
        seen: set[str] = set()
        for lemma in syn.lemmas:
            found = lookup.translations(lemma)
            if not found:
                misses.append((sid, lemma))
                continue
            for text, source in found:
                if text in seen:
                    continue
                seen.add(text)
                lex.add(CandidateLemma(sid, text, source))
    return lex, misses


def write_miss_report(misses, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("synset\tlemma\n")
        for sid, lemma in misses:
            handle.write(f"{sid}\t{lemma}\n")


# -- classification ---------------------------------------------------------


@dataclass
class SynsetCategory:
    synset: SynsetId
    category: int  # 1, 2 or 3


@dataclass
class ClassificationReport:
    categories: list[SynsetCategory]
    uncategorized: list[SynsetId]
    unresolved: list[SynsetId]

    def counts(self) -> dict[str, int]:
        tally = {"1": 0, "2": 0, "3": 0}
        for cat in self.categories:
            tally[str(cat.category)] += 1
        tally["uncategorized"] = len(self.uncategorized)
        tally["unresolved"] = len(self.unresolved)
        return tally


def classify(db: WordnetDb, lex: BilingualLexicon) -> ClassificationReport:
    """Sort candidate-bearing synsets into the three arity categories.

    1: one English lemma, one candidate; 2: one English lemma, several
    candidates; 3: several English lemmas, several candidates.  Anything
    else (several English lemmas, a single candidate) is reported as
    uncategorized rather than forced into a bucket.
    """
    categories = []
    uncategorized = []
    unresolved = []
    for sid in lex.synset_ids():
        active = lex.active(sid)
        if not active:
            continue
        if sid not in db.synsets:
            unresolved.append(sid)
            continue
        english = len(db.synsets[sid].lemmas)
        chinese = len(active)
        if english == 1 and chinese == 1:
            categories.append(SynsetCategory(sid, 1))
        elif english == 1 and chinese >= 2:
            categories.append(SynsetCategory(sid, 2))
        elif english >= 2 and chinese >= 2:
            categories.append(SynsetCategory(sid, 3))
        else:
            uncategorized.append(sid)
    return ClassificationReport(categories, uncategorized, unresolved)


# -- merge and remap ---------------------------------------------------------


def merge(base: BilingualLexicon, new: BilingualLexicon,
          built_at: Optional[str] = None) -> BilingualLexicon:
    """Per-synset union of candidates; base wins on (synset, text) collisions."""
    if base.wordnet_version != new.wordnet_version:
        raise ConfigurationError(
            f"cannot merge lexicons for different wordnet versions: "
            f"{base.wordnet_version!r} vs {new.wordnet_version!r}"
        )
    label = base.label if base.label == new.label else f"{base.label}+{new.label}"
    dict_labels = list(base.dict_labels)
    for item in new.dict_labels:
        if item not in dict_labels:
            dict_labels.append(item)
    merged = BilingualLexicon(base.wordnet_version, label, dict_labels,
                              built_at if built_at is not None else base.built_at)
    for cand in base.all_candidates():
        merged.add(CandidateLemma(cand.synset, cand.text, cand.source, cand.status, cand.note))
    for cand in new.all_candidates():
        if merged.get(cand.synset, cand.text) is None:
            merged.add(CandidateLemma(cand.synset, cand.text, cand.source, cand.status, cand.note))
    return merged


def remap(lex: BilingualLexicon, vmap: VersionMap) -> tuple[BilingualLexicon, list[SynsetId]]:
    """Carry a lexicon across a version map; unmapped synsets are reported."""
    mapped = BilingualLexicon(vmap.to_version, lex.label, lex.dict_labels, lex.built_at)
    unmapped = []
    for sid in lex.synset_ids():
        target = map_id(vmap, sid)
        if target is None:
            unmapped.append(sid)
            continue
        for cand in lex.candidates(sid):
            mapped.add(CandidateLemma(target, cand.text, cand.source, cand.status, cand.note))
    return mapped, unmapped
