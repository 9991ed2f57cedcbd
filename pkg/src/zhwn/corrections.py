"""Manual-correction machinery: an append-only, hash-chained edit log.

Every human decision becomes one CorrectionEdit.  Each record carries the
SHA-256 digest of the previous record, so reordering or tampering with a
stored log is detectable.  Replaying a log over its base lexicon is the
only sanctioned way to reconstruct state; application is atomic (a bad
edit rejects the whole log).
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Iterable, Optional

from .errors import ChainError, EditApplyError, ZhwnError
from .lexicon import (
    HUMAN_DROPPED,
    HUMAN_KEPT,
    BilingualLexicon,
    CandidateLemma,
)
from .store import WordnetDb
from .synsets import SynsetId, normalize_pos

logger = logging.getLogger("zhwn.corrections")

GENESIS = "0" * 64

EDIT_KINDS = ("delete-lemma", "replace-lemma", "add-lemma", "retag-note", "normalize")
EDIT_RULES = (
    "wrong-meaning",
    "pos-mismatch",
    "polysemy-split",
    "unify-place-language",
    "unify-affix",
    "unify-single-sense",
    "unify-name-dots",
    "unify-multiword",
    "hard-translation",
    "other",
)

MANUAL_SOURCE = "manual"


@dataclass
class CorrectionEdit:
    """One auditable decision applied to a candidate lemma."""

    id: str
    synset: SynsetId
    kind: str
    old: Optional[str]
    new: Optional[str]
    author: str
    timestamp: str
    rationale: str
    rule: str
    prev: str
    digest: str = ""

    def payload(self) -> dict:
        return {
            "id": self.id,
            "synset": str(self.synset),
            "kind": self.kind,
            "old": self.old,
            "new": self.new,
            "author": self.author,
            "timestamp": self.timestamp,
            "rationale": self.rationale,
            "rule": self.rule,
            "prev": self.prev,
        }

    def compute_digest(self) -> str:
        canonical = json.dumps(self.payload(), sort_keys=True, ensure_ascii=False,
                               separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def to_json(self) -> str:
        row = self.payload()
        row["digest"] = self.digest
        return json.dumps(row, ensure_ascii=False)

    FIELDS = ("id", "synset", "kind", "old", "new", "author", "timestamp",
              "rationale", "rule", "prev", "digest")

    @classmethod
    def from_dict(cls, row: dict) -> "CorrectionEdit":
        """Strict reader: the JSONL schema has fixed field names, so missing
        or unknown keys are corruption, not optionality."""
        missing = set(cls.FIELDS) - set(row)
        unknown = set(row) - set(cls.FIELDS)
        if missing or unknown:
            raise ValueError(f"bad record fields (missing {sorted(missing)}, "
                             f"unknown {sorted(unknown)})")
        return cls(
            id=row["id"],
            synset=SynsetId.parse(row["synset"]),
            kind=row["kind"],
            old=row["old"],
            new=row["new"],
            author=row["author"],
            timestamp=row["timestamp"],
            rationale=row["rationale"],
            rule=row["rule"],
            prev=row["prev"],
            digest=row["digest"],
        )


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class EditLog:
    """Append-only JSONL edit log bound to an optional file path.

    Appends are flushed and fsynced before returning, so an acknowledged
    record survives a crash.  Loading verifies the whole chain; with
    ``recover=True`` a truncated *final* line (an unacknowledged partial
    write) is dropped and the file truncated, anything else still fails.
    """

    def __init__(self, path=None):
        self.path = path
        self.records: list[CorrectionEdit] = []

    @property
    def tip(self) -> str:
        return self.records[-1].digest if self.records else GENESIS

    @property
    def tip_id(self) -> Optional[str]:
        return self.records[-1].id if self.records else None

    @classmethod
    def open(cls, path, recover: bool = False) -> "EditLog":
        log = cls(path)
        if os.path.exists(path):
            log.records = _read_records(path, recover=recover)
        return log

    def append(self, synset: SynsetId, kind: str, *, old: Optional[str] = None,
               new: Optional[str] = None, author: str, rationale: str = "",
               rule: str = "other", timestamp: Optional[str] = None) -> CorrectionEdit:
        if kind not in EDIT_KINDS:
            raise ValueError(f"unknown edit kind {kind!r}")
        if rule not in EDIT_RULES:
            raise ValueError(f"unknown edit rule {rule!r}")
        edit = CorrectionEdit(
            id=f"e{len(self.records) + 1:06d}",
            synset=synset,
            kind=kind,
            old=old,
            new=new,
            author=author,
            timestamp=timestamp if timestamp is not None else _now(),
            rationale=rationale,
            rule=rule,
            prev=self.tip,
        )
        edit.digest = edit.compute_digest()
        if self.path is not None:
            with open(self.path, "a", encoding="utf-8") as handle:
                handle.write(edit.to_json() + "\n")
                handle.flush()
                os.fsync(handle.fileno())
        self.records.append(edit)
        return edit

    def records_after(self, edit_id: Optional[str]) -> list[CorrectionEdit]:
        """Records strictly after ``edit_id`` (all of them when it is None)."""
        if edit_id is None:
            return list(self.records)
        for i, record in enumerate(self.records):
            if record.id == edit_id:
                return list(self.records[i + 1 :])
        raise ChainError(f"edit id {edit_id!r} not present in the log")

    def verify(self) -> None:
        _verify_chain(self.records)


def _verify_chain(records: Iterable[CorrectionEdit]) -> None:
    tip = GENESIS
    for record in records:
        if record.prev != tip:
            raise ChainError(f"{record.id}: prev digest mismatch")
        if record.compute_digest() != record.digest:
            raise ChainError(f"{record.id}: record digest mismatch")
        tip = record.digest


def _read_records(path, recover: bool = False) -> list[CorrectionEdit]:
    raw = open(path, "rb").read()
    lines = raw.split(b"\n")
    if lines and lines[-1] == b"":
        lines.pop()
    records = []
    for number, line in enumerate(lines, start=1):
        try:
            row = json.loads(line.decode("utf-8"))
        except (ValueError, UnicodeDecodeError) as exc:
            # a crash mid-write leaves a truncated, JSON-invalid final line;
            # that (and only that) is recoverable
            if recover and number == len(lines):
                logger.warning("dropping partial trailing record at line %d", number)
                keep = b"\n".join(lines[:-1]) + (b"\n" if len(lines) > 1 else b"")
                with open(path, "wb") as handle:
                    handle.write(keep)
                break
            raise ChainError(f"line {number}: unreadable record ({exc})") from None
        try:
            record = CorrectionEdit.from_dict(row)
        except (KeyError, ValueError, ZhwnError) as exc:
            raise ChainError(f"line {number}: corrupt record ({exc})") from None
        records.append(record)
    _verify_chain(records)
    return records


def verify_log_file(path) -> int:
    """Strict audit: verify the stored chain, return the record count."""
    return len(_read_records(path, recover=False))


# -- applying edits ----------------------------------------------------------


def _keep_upsert(lex: BilingualLexicon, sid: SynsetId, text: str, edit_id: str) -> None:
    cand = lex.get(sid, text)
    if cand is None:
        lex.add(CandidateLemma(sid, text, MANUAL_SOURCE, HUMAN_KEPT))
    elif cand.status in (HUMAN_KEPT, HUMAN_DROPPED):
        raise EditApplyError(f"({sid}, {text!r}) already human-decided", edit_id)
    else:
        lex.set_status(sid, text, HUMAN_KEPT)


def validate_edit(lex: BilingualLexicon, edit: CorrectionEdit,
                  db: Optional[WordnetDb] = None) -> None:
    """Check that ``edit`` would apply cleanly to ``lex`` without applying it."""
    if db is not None and edit.synset not in db.synsets:
        raise EditApplyError(f"synset {edit.synset} not in the wordnet", edit.id)
    sid = edit.synset
    if edit.kind in ("delete-lemma", "replace-lemma", "retag-note", "normalize"):
        if edit.old is None:
            raise EditApplyError(f"{edit.kind} needs an old lemma", edit.id)
        cand = lex.get(sid, edit.old)
        if cand is None:
            raise EditApplyError(f"target ({sid}, {edit.old!r}) absent", edit.id)
        if edit.kind != "normalize" and cand.status == HUMAN_DROPPED:
            raise EditApplyError(f"target ({sid}, {edit.old!r}) already dropped", edit.id)
    if edit.kind in ("replace-lemma", "add-lemma"):
        if edit.new is None:
            raise EditApplyError(f"{edit.kind} needs a new lemma", edit.id)
        existing = lex.get(sid, edit.new)
        if existing is not None and existing.status in (HUMAN_KEPT, HUMAN_DROPPED):
            raise EditApplyError(f"({sid}, {edit.new!r}) already human-decided", edit.id)
    if edit.kind == "normalize":
        if edit.new is None:
            raise EditApplyError("normalize needs a new lemma", edit.id)
        if edit.new != edit.old and lex.get(sid, edit.new) is not None:
            raise EditApplyError(f"({sid}, {edit.new!r}) already exists", edit.id)


def apply_one(lex: BilingualLexicon, edit: CorrectionEdit,
              db: Optional[WordnetDb] = None) -> None:
    """Validate then apply a single edit to ``lex`` in place."""
    validate_edit(lex, edit, db)
    sid = edit.synset
    if edit.kind == "delete-lemma":
        lex.set_status(sid, edit.old, HUMAN_DROPPED)
    elif edit.kind == "replace-lemma":
        lex.set_status(sid, edit.old, HUMAN_DROPPED)
        _keep_upsert(lex, sid, edit.new, edit.id)
    elif edit.kind == "add-lemma":
        _keep_upsert(lex, sid, edit.new, edit.id)
    elif edit.kind == "retag-note":
        lex.set_status(sid, edit.old, HUMAN_KEPT)
        cand = lex.require(sid, edit.old)
        cand.note = edit.rationale or cand.note
    elif edit.kind == "normalize":
        lex.rename(sid, edit.old, edit.new)
    else:
        raise EditApplyError(f"unknown kind {edit.kind!r}", edit.id)


def apply_edits(lex: BilingualLexicon, records: Iterable[CorrectionEdit],
                db: Optional[WordnetDb] = None) -> BilingualLexicon:
    """Replay edits in log order over a copy of ``lex``.

    Any inapplicable edit rejects the whole log: the input lexicon is
    untouched and nothing partial is returned.  The result records the
    last applied edit id as its provenance tip.
    """
    result = lex.copy()
    last_id = lex.applied_through
    for edit in records:
        apply_one(result, edit, db)
        last_id = edit.id
    result.applied_through = last_id
    return result


# -- unification helpers -----------------------------------------------------

NAME_DOT = "·"  # the middle dot separating Chinese name segments


def normalize_name(lemma: str, segments: list[str]) -> tuple[str, bool]:
    """Join person-name segments with dots; single segments are a no-op.

    Returns (new text, changed flag).
    """
    parts = [s for s in segments if s]
    if len(parts) < 2:
        return lemma, False
    joined = NAME_DOT.join(parts)
    return joined, joined != lemma


def mark_affix(lemma: str, pos: str) -> str:
    """Insert the affix marker "+" for verb/adverb/adjective patterns.

    Verbs: 使X -> 使+X and X于 -> X+于; adverbs: X地 -> X+地; adjectives:
    X的 -> X+的.  Other parts of speech and already-marked lemmas come
    back unchanged (the operation is idempotent).
    """
    pos = normalize_pos(pos)
    if pos == "v":
        if lemma.startswith("使") and len(lemma) > 1 and not lemma.startswith("使+"):
            lemma = "使+" + lemma[1:]
        if lemma.endswith("于") and len(lemma) > 1 and not lemma.endswith("+于"):
            lemma = lemma[:-1] + "+于"
        return lemma
    if pos == "r":
        if lemma.endswith("地") and len(lemma) > 1 and not lemma.endswith("+地"):
            return lemma[:-1] + "+地"
        return lemma
    if pos == "a":
        if lemma.endswith("的") and len(lemma) > 1 and not lemma.endswith("+的"):
            return lemma[:-1] + "+的"
        return lemma
    return lemma


@dataclass
class HardTranslationConfig:
    """Surface heuristics for gloss-like translations that are not words."""

    max_length: int = 4
    interior_particles: tuple[str, ...] = ("的", "地")
    extra_patterns: list[str] = field(default_factory=list)

    def compiled(self):
        return [(p, re.compile(p)) for p in self.extra_patterns]


def flag_hard_translation(lemma: str, cfg: HardTranslationConfig | None = None
                          ) -> tuple[bool, Optional[str]]:
    """True when the lemma looks like a descriptive phrase, with the matched rule."""
    cfg = cfg or HardTranslationConfig()
    if len(lemma) > cfg.max_length:
        return True, f"length>{cfg.max_length}"
    for particle in cfg.interior_particles:
        if particle in lemma[1:-1]:
            return True, f"interior-{particle}"
    for pattern, compiled in cfg.compiled():
        if compiled.search(lemma):
            return True, f"pattern:{pattern}"
    return False, None
