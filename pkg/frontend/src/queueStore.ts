/** Queue state: paging, filters, decisions with optimistic reconciliation.
 *
 * Rendered rows come only from API responses.  A decision optimistically
 * closes the row, then reconciles with the server's item; a conflict
 * reloads server truth and surfaces a notice with the winning decision.
 */

import { ApiClient, ConflictError, OfflineError } from "./api.js";
import type { Decision, QueueFilters, QueueItem } from "./types.js";

export interface QueueState {
  items: QueueItem[];
  filters: QueueFilters;
  page: number;
  pageSize: number;
  pages: number;
  total: number;
  offline: boolean;
  notice: string;
  selected: number;
  loading: boolean;
}

type Listener = (state: QueueState) => void;

export class QueueStore {
  readonly state: QueueState = {
    items: [],
    filters: { status: "open" },
    page: 1,
    pageSize: 10,
    pages: 1,
    total: 0,
    offline: false,
    notice: "",
    selected: 0,
    loading: false,
  };

  private listeners: Listener[] = [];

  constructor(readonly api: ApiClient) {}

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  async load(): Promise<void> {
    this.state.loading = true;
    this.emit();
    try {
      const page = await this.api.queue(this.state.filters, this.state.page, this.state.pageSize);
      this.state.items = page.items;
      this.state.total = page.total;
      this.state.pages = page.pages;
      this.state.page = page.page;
      this.state.offline = false;
      if (this.state.selected >= page.items.length) {
        this.state.selected = Math.max(0, page.items.length - 1);
      }
    } catch (error) {
      if (error instanceof OfflineError) {
        this.state.offline = true; // banner only; the user retries explicitly
      } else {
        throw error;
      }
    } finally {
      this.state.loading = false;
      this.emit();
    }
  }

  async setFilters(filters: QueueFilters): Promise<void> {
    this.state.filters = filters;
    this.state.page = 1;
    await this.load();
  }

  async goToPage(page: number): Promise<void> {
    this.state.page = Math.min(Math.max(1, page), this.state.pages);
    await this.load();
  }

  select(index: number): void {
    if (this.state.items.length === 0) return;
    this.state.selected = Math.min(Math.max(0, index), this.state.items.length - 1);
    this.emit();
  }

  selectedItem(): QueueItem | null {
    return this.state.items[this.state.selected] ?? null;
  }

  /** Decide an item: optimistic close, server reconciliation, conflict refresh. */
  async decide(itemId: string, decision: Decision, newText?: string): Promise<boolean> {
    const row = this.state.items.find((item) => item.id === itemId);
    if (!row || row.status !== "open") return false;
    const before = { ...row };
    row.status = decision === "accept" ? "accepted" : decision === "reject" ? "rejected" : "edited";
    this.state.notice = "";
    this.emit();
    try {
      const response = await this.api.decide(itemId, decision, newText);
      Object.assign(row, response.item); // server truth replaces the optimistic guess
      this.state.notice = `${response.item.status}: ${row.candidate} (${response.edit.id})`;
      this.emit();
      return true;
    } catch (error) {
      Object.assign(row, before); // roll back the optimistic state
      if (error instanceof ConflictError) {
        this.state.notice = `conflict: ${error.message}`;
        await this.load(); // row refreshes to server truth
        return false;
      }
      if (error instanceof OfflineError) {
        this.state.offline = true;
        this.emit();
        return false;
      }
      this.state.notice = `error: ${error instanceof Error ? error.message : String(error)}`;
      this.emit();
      return false;
    }
  }
}
