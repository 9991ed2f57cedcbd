/** DOM layer: queue table, filters, pagination, keyboard shortcuts.
 *
 * Shortcuts: j/k move the selection, a accepts, r rejects, e opens the
 * inline replacement editor on the selected row.  Everything shown comes
 * from the store, which only holds server responses.
 */

import { QueueStore } from "./queueStore.js";
import type { QueueState } from "./queueStore.js";
import type { QueueItem } from "./types.js";

const REASONS = ["", "screening-deferred", "rule-flagged", "conflict"];
const STATUSES = ["", "open", "accepted", "rejected", "edited"];
const POS = ["", "n", "v", "a", "r"];

export class ReviewApp {
  private editingId: string | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly store: QueueStore,
  ) {
    store.subscribe((state) => this.render(state));
  }

  async start(): Promise<void> {
    this.bindKeys();
    await this.store.load();
  }

  bindKeys(): void {
    this.root.ownerDocument.addEventListener("keydown", (event) => {
      const target = event.target as HTMLElement | null;
      if (target && (target.tagName === "INPUT" || target.tagName === "SELECT")) return;
      const state = this.store.state;
      switch (event.key) {
        case "j":
          this.store.select(state.selected + 1);
          break;
        case "k":
          this.store.select(state.selected - 1);
          break;
        case "a":
          void this.decideSelected("accept");
          break;
        case "r":
          void this.decideSelected("reject");
          break;
        case "e":
          this.openEditor();
          break;
      }
    });
  }

  private async decideSelected(decision: "accept" | "reject"): Promise<void> {
    const item = this.store.selectedItem();
    if (item && item.status === "open") {
      await this.store.decide(item.id, decision);
    }
  }

  private openEditor(): void {
    const item = this.store.selectedItem();
    if (item && item.status === "open") {
      this.editingId = item.id;
      this.render(this.store.state);
      const input = this.root.querySelector<HTMLInputElement>(".edit-input");
      input?.focus();
    }
  }

  render(state: QueueState): void {
    this.root.replaceChildren(
      this.banner(state),
      this.toolbar(state),
      state.items.length === 0 ? this.emptyState(state) : this.table(state),
      this.pager(state),
      this.noticeBar(state),
    );
  }

  private el(tag: string, className: string, text = ""): HTMLElement {
    const node = this.root.ownerDocument.createElement(tag);
    if (className) node.className = className;
    if (text) node.textContent = text;
    return node;
  }

  private banner(state: QueueState): HTMLElement {
    const banner = this.el("div", "offline-banner", "service unreachable - showing last known state");
    banner.hidden = !state.offline;
    if (state.offline) {
      const retry = this.el("button", "retry", "retry");
      retry.addEventListener("click", () => void this.store.load());
      banner.append(" ", retry);
    }
    return banner;
  }

  private toolbar(state: QueueState): HTMLElement {
    const bar = this.el("div", "toolbar");
    bar.append(
      this.filterSelect("status", STATUSES, state.filters.status ?? ""),
      this.filterSelect("pos", POS, state.filters.pos ?? ""),
      this.filterSelect("reason", REASONS, state.filters.reason ?? ""),
    );
    const author = this.el("input", "author-input") as HTMLInputElement;
    author.placeholder = "your name";
    author.value = this.store.api.author;
    author.addEventListener("change", () => {
      this.store.api.author = author.value;
    });
    bar.append(author);
    return bar;
  }

  private filterSelect(name: string, options: string[], current: string): HTMLElement {
    const select = this.el("select", `filter-${name}`) as HTMLSelectElement;
    for (const value of options) {
      const option = this.el("option", "", value || `any ${name}`) as HTMLOptionElement;
      option.value = value;
      option.selected = value === current;
      select.append(option);
    }
    select.addEventListener("change", () => {
      void this.store.setFilters({ ...this.store.state.filters, [name]: select.value || undefined });
    });
    return select;
  }

  private emptyState(state: QueueState): HTMLElement {
    const label = state.filters.status === "open" || !state.filters.status
      ? "no open items"
      : "nothing matches these filters";
    return this.el("div", "empty-state", label);
  }

  private table(state: QueueState): HTMLElement {
    const table = this.el("table", "queue-table") as HTMLTableElement;
    const head = this.el("tr", "");
    for (const column of ["candidate", "synset", "gloss", "reason", "|L|", "status", "actions"]) {
      head.append(this.el("th", "", column));
    }
    table.append(head);
    state.items.forEach((item, index) => {
      table.append(this.row(item, index === state.selected));
    });
    return table;
  }

  private row(item: QueueItem, selected: boolean): HTMLElement {
    const row = this.el("tr", selected ? "item-row selected" : "item-row");
    row.dataset.itemId = item.id;
    row.append(
      this.el("td", "candidate zh", item.candidate),
      this.el("td", "synset", item.synset),
      this.el("td", "gloss", item.gloss ?? ""),
      this.el("td", "reason", item.reason),
      this.el("td", "magnitude", item.magnitude == null ? "—" : item.magnitude.toFixed(3)),
      this.el("td", `status status-${item.status}`, item.status),
    );
    const actions = this.el("td", "actions");
    if (item.status === "open") {
      if (this.editingId === item.id) {
        actions.append(this.editor(item));
      } else {
        actions.append(
          this.actionButton(item, "accept", "✓"),
          this.actionButton(item, "reject", "✗"),
          this.editButton(item),
        );
      }
    } else {
      actions.append(this.el("span", "decided-by", item.decided_by ?? ""));
    }
    row.append(actions);
    return row;
  }

  private actionButton(item: QueueItem, decision: "accept" | "reject", label: string): HTMLElement {
    const button = this.el("button", `btn-${decision}`, label);
    button.addEventListener("click", () => void this.store.decide(item.id, decision));
    return button;
  }

  private editButton(item: QueueItem): HTMLElement {
    const button = this.el("button", "btn-edit", "✎");
    button.addEventListener("click", () => {
      this.editingId = item.id;
      this.render(this.store.state);
    });
    return button;
  }

  private editor(item: QueueItem): HTMLElement {
    const wrap = this.el("span", "editor");
    const input = this.el("input", "edit-input zh") as HTMLInputElement;
    input.value = item.candidate;
    const confirm = this.el("button", "btn-confirm-edit", "save");
    confirm.addEventListener("click", () => void this.submitEdit(item, input.value));
    input.addEventListener("keydown", (event) => {
      if (event.key === "Enter") void this.submitEdit(item, input.value);
      if (event.key === "Escape") {
        this.editingId = null;
        this.render(this.store.state);
      }
    });
    wrap.append(input, confirm);
    return wrap;
  }

  private async submitEdit(item: QueueItem, newText: string): Promise<void> {
    if (!newText || newText === item.candidate) return;
    this.editingId = null;
    await this.store.decide(item.id, "edit", newText);
  }

  private pager(state: QueueState): HTMLElement {
    const pager = this.el("div", "pager");
    const previous = this.el("button", "page-prev", "‹ prev") as HTMLButtonElement;
    previous.disabled = state.page <= 1;
    previous.addEventListener("click", () => void this.store.goToPage(state.page - 1));
    const next = this.el("button", "page-next", "next ›") as HTMLButtonElement;
    next.disabled = state.page >= state.pages;
    next.addEventListener("click", () => void this.store.goToPage(state.page + 1));
    pager.append(
      previous,
      this.el("span", "page-label", `page ${state.page} / ${state.pages} (${state.total} items)`),
      next,
    );
    return pager;
  }

  private noticeBar(state: QueueState): HTMLElement {
    const notice = this.el("div", "notice", state.notice);
    notice.hidden = !state.notice;
    return notice;
  }
}
