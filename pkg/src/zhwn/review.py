"""Review queue: the human decision stream behind secondary screening.

Items come from screening deferrals and rule flags; each open item takes
exactly one terminal decision (accept / reject / edit), which appends a
CorrectionEdit to the log and is applied to the live lexicon.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .corrections import (
    CorrectionEdit,
    EditLog,
    HardTranslationConfig,
    apply_one,
    flag_hard_translation,
    validate_edit,
)
from .errors import ConflictError, ZhwnError
from .lexicon import BilingualLexicon
from .screening import ScreeningOutcome
from .store import WordnetDb
from .synsets import SynsetId

REASONS = ("screening-deferred", "rule-flagged", "conflict")
OPEN = "open"
TERMINAL = {"accept": "accepted", "reject": "rejected", "edit": "edited"}


@dataclass
class ReviewItem:
    id: str
    synset: SynsetId
    candidate: str
    reason: str
    status: str = OPEN
    magnitude: Optional[float] = None
    decided_by: Optional[str] = None
    edit_id: Optional[str] = None

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "synset": str(self.synset),
            "candidate": self.candidate,
            "reason": self.reason,
            "status": self.status,
            "magnitude": self.magnitude,
            "decided_by": self.decided_by,
            "edit_id": self.edit_id,
        }

    @classmethod
    def from_dict(cls, row: dict) -> "ReviewItem":
        return cls(
            id=row["id"],
            synset=SynsetId.parse(row["synset"]),
            candidate=row["candidate"],
            reason=row["reason"],
            status=row.get("status", OPEN),
            magnitude=row.get("magnitude"),
            decided_by=row.get("decided_by"),
            edit_id=row.get("edit_id"),
        )


class ReviewQueue:
    def __init__(self, items: Optional[list[ReviewItem]] = None):
        self.items: dict[str, ReviewItem] = {}
        self._keys: set[tuple[SynsetId, str]] = set()
        for item in items or []:
            self.items[item.id] = item
            self._keys.add((item.synset, item.candidate))

    def __len__(self):
        return len(self.items)

    def add(self, synset: SynsetId, candidate: str, reason: str,
            magnitude: Optional[float] = None) -> Optional[ReviewItem]:
        """Queue a candidate once; later duplicates of (synset, text) are ignored."""
        if reason not in REASONS:
            raise ValueError(f"unknown reason {reason!r}")
        if (synset, candidate) in self._keys:
            return None
        item = ReviewItem(f"q{len(self.items) + 1:06d}", synset, candidate, reason)
        item.magnitude = magnitude
        self.items[item.id] = item
        self._keys.add((synset, candidate))
        return item

    def get(self, item_id: str) -> Optional[ReviewItem]:
        return self.items.get(item_id)

    def select(self, status: Optional[str] = None, pos: Optional[str] = None,
               reason: Optional[str] = None) -> list[ReviewItem]:
        rows = list(self.items.values())
        if status:
            rows = [r for r in rows if r.status == status]
        if pos:
            rows = [r for r in rows if r.synset.pos == pos]
        if reason:
            rows = [r for r in rows if r.reason == reason]
        return rows

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as handle:
            for item in self.items.values():
                handle.write(json.dumps(item.as_dict(), ensure_ascii=False) + "\n")

    @classmethod
    def load(cls, path) -> "ReviewQueue":
        items = []
        with open(path, encoding="utf-8") as handle:
            for line in handle:
                if line.strip():
                    items.append(ReviewItem.from_dict(json.loads(line)))
        return cls(items)

    def reconcile(self, log: EditLog) -> int:
        """Make queue state agree with the authoritative log.

        Closes open items whose decision edit is in the log (queue snapshot
        lagged behind) and reopens closed items whose recorded edit id is
        not in the log (the edit was lost to a crash before it was
        acknowledged).  Returns the number of items changed.
        """
        changed = 0
        for edit in log.records:
            marker = _item_marker(edit.rationale)
            if marker is None:
                continue
            item = self.items.get(marker)
            if item is None or item.status != OPEN:
                continue
            item.status = {"retag-note": "accepted", "delete-lemma": "rejected",
                           "replace-lemma": "edited"}.get(edit.kind, "accepted")
            item.decided_by = edit.author
            item.edit_id = edit.id
            changed += 1
        known = {record.id for record in log.records}
        for item in self.items.values():
            if item.status != OPEN and item.edit_id and item.edit_id not in known:
                item.status = OPEN
                item.decided_by = None
                item.edit_id = None
                changed += 1
        return changed


def _item_marker(rationale: str) -> Optional[str]:
    if rationale.startswith("[") and "]" in rationale:
        return rationale[1 : rationale.index("]")]
    return None


def build_queue(outcomes: list[ScreeningOutcome], lex: BilingualLexicon,
                hard_cfg: HardTranslationConfig | None = None) -> ReviewQueue:
    """Derive the review queue from screening results plus rule flags."""
    queue = ReviewQueue()
    for outcome in outcomes:
        for text in outcome.deferred:
            queue.add(outcome.synset, text, "screening-deferred",
                      outcome.magnitudes.get(text))
        for text in outcome.kept:
            flagged, _ = flag_hard_translation(text, hard_cfg)
            if flagged:
                queue.add(outcome.synset, text, "rule-flagged",
                          outcome.magnitudes.get(text))
    return queue


def decide(item: ReviewItem, decision: str, author: str, log: EditLog,
           lex: BilingualLexicon, db: Optional[WordnetDb] = None,
           new_text: Optional[str] = None, rationale: str = "",
           timestamp: Optional[str] = None):
    """Close an open item: append the matching edit and apply it to ``lex``.

    accept -> retag-note (human-kept), reject -> delete-lemma, edit ->
    replace-lemma with ``new_text``.  Deciding a closed item raises
    ConflictError; the edit's rationale carries the item id so a restarted
    service can reconcile queue state from the log.
    """
    if item.status != OPEN:
        raise ConflictError(f"item {item.id} already {item.status} by {item.decided_by}")
    if decision not in TERMINAL:
        raise ZhwnError(f"unknown decision {decision!r}")
    if decision == "edit" and not new_text:
        raise ZhwnError("edit decision needs the replacement text")

    kind = {"accept": "retag-note", "reject": "delete-lemma", "edit": "replace-lemma"}[decision]
    tagged = f"[{item.id}] {rationale}".rstrip()
    new = new_text if decision == "edit" else None
    # dry-run against the live lexicon before the record hits the log
    probe = CorrectionEdit(id="probe", synset=item.synset, kind=kind,
                           old=item.candidate, new=new, author=author,
                           timestamp="", rationale=tagged, rule="other", prev="")
    validate_edit(lex, probe, db)

    edit = log.append(item.synset, kind, old=item.candidate, new=new, author=author,
                      rationale=tagged, rule="other", timestamp=timestamp)
    apply_one(lex, edit, db)
    item.status = TERMINAL[decision]
    item.decided_by = author
    item.edit_id = edit.id
    return edit
