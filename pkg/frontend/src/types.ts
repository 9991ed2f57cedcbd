/** Payload shapes of the review service API (the only data source). */

export interface QueueItem {
  id: string;
  synset: string;
  candidate: string;
  reason: string;
  status: string;
  magnitude: number | null;
  decided_by: string | null;
  edit_id: string | null;
  english_lemmas?: string[];
  gloss?: string;
  candidate_status?: string | null;
}

export interface QueuePage {
  items: QueueItem[];
  total: number;
  page: number;
  page_size: number;
  pages: number;
}

export interface EditRecord {
  id: string;
  synset: string;
  kind: string;
  old: string | null;
  new: string | null;
  author: string;
  timestamp: string;
  rationale: string;
  rule: string;
  prev: string;
  digest: string;
}

export interface DecisionResponse {
  item: QueueItem;
  edit: EditRecord;
}

export interface SynsetView {
  synset: { id: string; pos: string; lemmas: string[]; gloss: string };
  candidates: { text: string; source: string; status: string; note: string | null }[];
  edits: EditRecord[];
}

export interface StatsView {
  coverage: Record<string, { concepts: number; translated: number; ratio: number; lemmas: number }>;
  queue: Record<string, number>;
  screening: Record<string, number> | null;
  edits: number;
}

export type Decision = "accept" | "reject" | "edit";

export interface QueueFilters {
  status?: string;
  pos?: string;
  reason?: string;
}
