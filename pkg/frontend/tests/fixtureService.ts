/** In-memory stand-in for the review service, implementing the documented
 * API semantics: paged queue, single-winner decisions (409 on a closed
 * item), per-synset edit history, stats.  Exposes a fetch-compatible
 * function so the real client code runs against it unchanged.
 */

import type { EditRecord, QueueItem } from "../src/types.js";
import type { FetchLike } from "../src/api.js";

interface FixtureSynset {
  id: string;
  lemmas: string[];
  gloss: string;
}

export class FixtureService {
  items = new Map<string, QueueItem>();
  synsets = new Map<string, FixtureSynset>();
  candidates = new Map<string, { text: string; source: string; status: string; note: string | null }[]>();
  edits: EditRecord[] = [];
  failNetwork = false;
  requestCount = 0;

  addSynset(id: string, lemmas: string[], gloss: string): void {
    this.synsets.set(id, { id, lemmas, gloss });
    if (!this.candidates.has(id)) this.candidates.set(id, []);
  }

  addItem(synset: string, candidate: string, reason = "screening-deferred",
          magnitude: number | null = null): QueueItem {
    const id = `q${String(this.items.size + 1).padStart(6, "0")}`;
    const item: QueueItem = {
      id, synset, candidate, reason, status: "open",
      magnitude, decided_by: null, edit_id: null,
    };
    this.items.set(id, item);
    const bucket = this.candidates.get(synset) ?? [];
    if (!bucket.some((c) => c.text === candidate)) {
      bucket.push({ text: candidate, source: "fixture", status: "machine-kept", note: null });
    }
    this.candidates.set(synset, bucket);
    return item;
  }

  fetch: FetchLike = async (url, init) => {
    this.requestCount += 1;
    if (this.failNetwork) {
      throw new TypeError("fetch failed");
    }
    const parsed = new URL(url, "http://fixture");
    const path = parsed.pathname;
    if (path === "/api/queue" && (!init || !init.method || init.method === "GET")) {
      return this.handleQueue(parsed.searchParams);
    }
    const decision = path.match(/^\/api\/queue\/([^/]+)\/decision$/);
    if (decision && init?.method === "POST") {
      return this.handleDecision(decision[1]!, JSON.parse(String(init.body)));
    }
    const synset = path.match(/^\/api\/synset\/([^/]+)$/);
    if (synset) {
      return this.handleSynset(synset[1]!);
    }
    if (path === "/api/stats") {
      return json(200, { coverage: {}, queue: this.queueCounts(), screening: null, edits: this.edits.length });
    }
    return json(404, { detail: `no route ${path}` });
  };

  private handleQueue(params: URLSearchParams): Response {
    let rows = [...this.items.values()];
    const status = params.get("status");
    const pos = params.get("pos");
    const reason = params.get("reason");
    if (status) rows = rows.filter((r) => r.status === status);
    if (pos) rows = rows.filter((r) => r.synset.endsWith(`-${pos}`));
    if (reason) rows = rows.filter((r) => r.reason === reason);
    const page = Number(params.get("page") ?? "1");
    const pageSize = Number(params.get("page_size") ?? "10");
    const total = rows.length;
    const pages = Math.max(1, Math.ceil(total / pageSize));
    const start = (page - 1) * pageSize;
    const items = rows.slice(start, start + pageSize).map((item) => this.view(item));
    return json(200, { items, total, page, page_size: pageSize, pages });
  }

  private view(item: QueueItem): QueueItem {
    const syn = this.synsets.get(item.synset);
    return {
      ...item,
      english_lemmas: syn?.lemmas ?? [],
      gloss: syn?.gloss ?? "",
      candidate_status: this.candidates.get(item.synset)
        ?.find((c) => c.text === item.candidate)?.status ?? null,
    };
  }

  private handleDecision(itemId: string, body: {
    decision: string; newText?: string | null; author?: string | null;
  }): Response {
    const item = this.items.get(itemId);
    if (!item) return json(404, { detail: `no review item ${itemId}` });
    if (!body.author) return json(400, { detail: "author required" });
    if (item.status !== "open") {
      return json(409, { detail: `item ${itemId} already ${item.status} by ${item.decided_by}` });
    }
    const kind = body.decision === "accept" ? "retag-note"
      : body.decision === "reject" ? "delete-lemma" : "replace-lemma";
    const edit: EditRecord = {
      id: `e${String(this.edits.length + 1).padStart(6, "0")}`,
      synset: item.synset,
      kind,
      old: item.candidate,
      new: body.decision === "edit" ? body.newText ?? null : null,
      author: body.author,
      timestamp: "2020-01-01T00:00:00+00:00",
      rationale: `[${item.id}]`,
      rule: "other",
      prev: this.edits.length ? this.edits[this.edits.length - 1]!.digest : "0".repeat(64),
      digest: `d${this.edits.length + 1}`,
    };
    this.edits.push(edit);
    const bucket = this.candidates.get(item.synset) ?? [];
    const cand = bucket.find((c) => c.text === item.candidate);
    if (cand) {
      cand.status = body.decision === "accept" ? "human-kept" : "human-dropped";
    }
    if (body.decision === "edit" && body.newText) {
      bucket.push({ text: body.newText, source: "manual", status: "human-kept", note: null });
    }
    item.status = body.decision === "accept" ? "accepted"
      : body.decision === "reject" ? "rejected" : "edited";
    item.decided_by = body.author;
    item.edit_id = edit.id;
    return json(200, { item: this.view(item), edit });
  }

  private handleSynset(id: string): Response {
    const syn = this.synsets.get(id);
    if (!syn) return json(404, { detail: `no synset ${id}` });
    return json(200, {
      synset: { id, pos: id.slice(-1), lemmas: syn.lemmas, gloss: syn.gloss },
      candidates: this.candidates.get(id) ?? [],
      edits: this.edits.filter((e) => e.synset === id),
    });
  }

  private queueCounts(): Record<string, number> {
    const counts: Record<string, number> = { open: 0, accepted: 0, rejected: 0, edited: 0 };
    for (const item of this.items.values()) {
      counts[item.status] = (counts[item.status] ?? 0) + 1;
    }
    return counts;
  }
}

function json(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export function seededService(openItems: number): FixtureService {
  const service = new FixtureService();
  for (let i = 0; i < openItems; i += 1) {
    const synset = `${String(23271 + i).padStart(8, "0")}-n`;
    service.addSynset(synset, [`lemma_${i}`], `gloss of concept ${i}`);
    service.addItem(synset, `候选${i}`, i % 2 === 0 ? "screening-deferred" : "rule-flagged", 0.1 * i);
  }
  return service;
}
