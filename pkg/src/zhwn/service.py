"""HTTP service for the review workflow: queue, decisions, browsing, stats.

All writes funnel through one lock and the append-only edit log; the log
is the source of truth, so a restart replays it over the base lexicon and
reconciles queue state from the decision markers.  A second decision on
the same item gets a 409.
"""

from __future__ import annotations

import os
import threading
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.responses import FileResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .corrections import EditLog, apply_edits
from .errors import ConflictError, EditApplyError, ZhwnError
from .lexicon import BilingualLexicon
from .review import OPEN, ReviewQueue, decide
from .screening import ScreeningSummary, load_outcomes
from .store import WordnetDb, coverage_report, load_db
from .synsets import POS_LETTERS, SynsetId


class ServiceState:
    """Everything the endpoints need, with a single writer lock."""

    def __init__(self, db: WordnetDb, lexicon: BilingualLexicon, log: EditLog,
                 queue: ReviewQueue, screening: Optional[list] = None,
                 queue_path=None):
        self.db = db
        self.lexicon = lexicon
        self.log = log
        self.queue = queue
        self.screening = screening
        self.queue_path = queue_path
        self.lock = threading.Lock()

    @classmethod
    def load(cls, wordnet_dir, lexicon_path, log_path, queue_path=None,
             screening_path=None) -> "ServiceState":
        db = load_db(wordnet_dir)
        log = EditLog.open(log_path, recover=True)
        base = BilingualLexicon.load(lexicon_path)
        lexicon = apply_edits(base, log.records_after(base.applied_through), db)
        if queue_path and Path(queue_path).exists():
            queue = ReviewQueue.load(queue_path)
        else:
            queue = ReviewQueue()
        queue.reconcile(log)
        screening = load_outcomes(screening_path) if screening_path else None
        return cls(db, lexicon, log, queue, screening, queue_path)

    def persist_queue(self) -> None:
        if not self.queue_path:
            return
        tmp = Path(str(self.queue_path) + ".tmp")
        self.queue.save(tmp)
        os.replace(tmp, self.queue_path)

    def item_view(self, item) -> dict:
        row = item.as_dict()
        syn = self.db.synsets.get(item.synset)
        if syn is not None:
            row["english_lemmas"] = list(syn.lemmas)
            row["gloss"] = syn.gloss
        cand = self.lexicon.get(item.synset, item.candidate)
        row["candidate_status"] = cand.status if cand else None
        return row


class DecisionBody(BaseModel):
    decision: str
    newText: Optional[str] = None
    author: Optional[str] = None
    rationale: str = ""


def create_app(state: ServiceState, frontend_dir=None) -> FastAPI:
    app = FastAPI(title="zhwn review service")

    @app.get("/api/queue")
    def get_queue(status: Optional[str] = Query(None), pos: Optional[str] = Query(None),
                  reason: Optional[str] = Query(None), page: int = Query(1, ge=1),
                  page_size: int = Query(10, ge=1, le=200)):
        rows = state.queue.select(status=status, pos=pos, reason=reason)
        total = len(rows)
        pages = max(1, -(-total // page_size))
        start = (page - 1) * page_size
        items = [state.item_view(item) for item in rows[start : start + page_size]]
        return {"items": items, "total": total, "page": page,
                "page_size": page_size, "pages": pages}

    @app.post("/api/queue/{item_id}/decision")
    def post_decision(item_id: str, body: DecisionBody, request: Request):
        author = body.author or request.headers.get("x-author")
        if not author:
            raise HTTPException(400, "author required (body or X-Author header)")
        if body.decision not in ("accept", "reject", "edit"):
            raise HTTPException(400, f"unknown decision {body.decision!r}")
        if body.decision == "edit" and not body.newText:
            raise HTTPException(400, "edit decision needs newText")
        with state.lock:
            item = state.queue.get(item_id)
            if item is None:
                raise HTTPException(404, f"no review item {item_id}")
            try:
                edit = decide(item, body.decision, author, state.log, state.lexicon,
                              state.db, new_text=body.newText, rationale=body.rationale)
            except ConflictError as exc:
                raise HTTPException(409, str(exc)) from None
            except (EditApplyError, ZhwnError) as exc:
                raise HTTPException(422, str(exc)) from None
            state.persist_queue()
            return {"item": state.item_view(item), "edit": edit.payload() | {"digest": edit.digest}}

    @app.get("/api/synset/{sid}")
    def get_synset(sid: str):
        try:
            synset_id = SynsetId.parse(sid)
            syn = state.db.get(synset_id)
        except ZhwnError as exc:
            raise HTTPException(404, str(exc)) from None
        candidates = [
            {"text": c.text, "source": c.source, "status": c.status, "note": c.note}
            for c in state.lexicon.candidates(synset_id)
        ]
        edits = [r.payload() | {"digest": r.digest} for r in state.log.records
                 if r.synset == synset_id]
        return {
            "synset": {"id": str(synset_id), "pos": synset_id.pos,
                       "lemmas": list(syn.lemmas), "gloss": syn.gloss},
            "candidates": candidates,
            "edits": edits,
        }

    @app.get("/api/stats")
    def get_stats():
        coverage = coverage_report(state.db, state.lexicon).as_dict()
        queue_counts = {
            status: len(state.queue.select(status=status))
            for status in (OPEN, "accepted", "rejected", "edited")
        }
        screening = None
        if state.screening is not None:
            per_pos = {p: {"kept": 0, "dropped": 0, "deferred": 0, "frozen": 0}
                       for p in POS_LETTERS}
            for outcome in state.screening:
                row = per_pos[outcome.synset.pos]
                row["kept"] += len(outcome.kept)
                row["dropped"] += len(outcome.dropped)
                row["deferred"] += len(outcome.deferred)
            screening = ScreeningSummary(per_pos).total()
        return {"coverage": coverage["coverage"], "queue": queue_counts,
                "screening": screening, "edits": len(state.log.records)}

    @app.get("/api/search")
    def search(lemma: str = Query(...), pos: Optional[str] = Query(None)):
        results = []
        seen = set()
        pos_list = [pos] if pos else list(POS_LETTERS)
        for p in pos_list:
            for sid in state.db.lookup(lemma, p):
                seen.add(sid)
        for sid in state.lexicon.synsets_for_text(lemma, pos):
            seen.add(sid)
        for sid in sorted(seen):
            syn = state.db.synsets.get(sid)
            results.append({
                "id": str(sid),
                "lemmas": list(syn.lemmas) if syn else [],
                "gloss": syn.gloss if syn else "",
                "candidates": state.lexicon.active(sid),
            })
        return {"results": results}

    if frontend_dir is not None and Path(frontend_dir).is_dir():
        index = Path(frontend_dir) / "index.html"

        @app.get("/")
        def root():
            return FileResponse(index)

        app.mount("/", StaticFiles(directory=frontend_dir), name="frontend")

    return app
