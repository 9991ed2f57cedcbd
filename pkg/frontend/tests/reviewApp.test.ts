/** UI-level tests: rows render from API data only, shortcuts drive
 * decisions, and the acceptance round trip (10 decisions -> 10 edits,
 * concurrent double-decision -> one winner) runs through the DOM. */

import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { ReviewApp } from "../src/app.js";
import { QueueStore } from "../src/queueStore.js";
import { FixtureService, seededService } from "./fixtureService.js";

function mount(service: FixtureService, author = "alice") {
  document.body.innerHTML = '<main id="app"></main>';
  const api = new ApiClient("", service.fetch);
  api.author = author;
  const store = new QueueStore(api);
  const app = new ReviewApp(document.getElementById("app")!, store);
  return { app, store, api };
}

function press(key: string): void {
  document.dispatchEvent(new KeyboardEvent("keydown", { key, bubbles: true }));
}

async function settle(): Promise<void> {
  await new Promise((resolve) => setTimeout(resolve, 0));
}

describe("rendering", () => {
  it("empty queue shows the explicit no-open-items state", async () => {
    const { app } = mount(new FixtureService());
    await app.start();
    const empty = document.querySelector(".empty-state");
    expect(empty?.textContent).toBe("no open items");
  });

  it("rows show candidate, synset, gloss, reason and magnitude", async () => {
    const service = seededService(2);
    const { app } = mount(service);
    await app.start();
    const row = document.querySelector(".item-row")!;
    expect(row.querySelector(".candidate")!.textContent).toBe("候选0");
    expect(row.querySelector(".synset")!.textContent).toBe("00023271-n");
    expect(row.querySelector(".gloss")!.textContent).toBe("gloss of concept 0");
    expect(row.querySelector(".reason")!.textContent).toBe("screening-deferred");
    expect(row.querySelector(".magnitude")!.textContent).toBe("0.000");
  });

  it("pager reflects 25 items at page size 10 as 3 pages", async () => {
    const { app } = mount(seededService(25));
    await app.start();
    expect(document.querySelector(".page-label")!.textContent).toContain("page 1 / 3");
  });

  it("offline banner appears when the service is unreachable", async () => {
    const service = seededService(1);
    const { app, store } = mount(service);
    await app.start();
    service.failNetwork = true;
    await store.load();
    const banner = document.querySelector<HTMLElement>(".offline-banner")!;
    expect(banner.hidden).toBe(false);
  });
});

describe("keyboard shortcuts", () => {
  let service: FixtureService;

  beforeEach(() => {
    service = seededService(4);
  });

  it("j/k move the selection", async () => {
    const { app, store } = mount(service);
    await app.start();
    expect(store.state.selected).toBe(0);
    press("j");
    press("j");
    expect(store.state.selected).toBe(2);
    press("k");
    expect(store.state.selected).toBe(1);
    expect(document.querySelectorAll(".item-row.selected")).toHaveLength(1);
  });

  it("a accepts and r rejects the selected row", async () => {
    const { app, store } = mount(service);
    await app.start();
    press("a");
    await settle();
    expect(service.edits).toHaveLength(1);
    expect(service.edits[0]!.kind).toBe("retag-note");
    press("j");
    press("r");
    await settle();
    expect(service.edits).toHaveLength(2);
    expect(service.edits[1]!.kind).toBe("delete-lemma");
    expect(store.state.items[0]!.status).toBe("accepted");
    expect(store.state.items[1]!.status).toBe("rejected");
  });

  it("e opens the inline editor and Enter submits a replace", async () => {
    const { app } = mount(service);
    await app.start();
    press("e");
    const input = document.querySelector<HTMLInputElement>(".edit-input")!;
    expect(input).not.toBeNull();
    input.value = "替换词";
    input.dispatchEvent(new KeyboardEvent("keydown", { key: "Enter", bubbles: true }));
    await settle();
    expect(service.edits).toHaveLength(1);
    expect(service.edits[0]!.kind).toBe("replace-lemma");
    expect(service.edits[0]!.new).toBe("替换词");
  });
});

describe("acceptance round trip", () => {
  it("10 decisions through the UI produce exactly 10 edits in history", async () => {
    const service = seededService(10);
    const { app, store, api } = mount(service);
    await app.start();

    for (let i = 0; i < 10; i += 1) {
      const open = document.querySelector<HTMLElement>(
        '.item-row .btn-accept, .item-row .btn-reject, .item-row .btn-edit',
      );
      expect(open).not.toBeNull();
      const row = open!.closest<HTMLElement>(".item-row")!;
      if (i % 3 === 0) {
        row.querySelector<HTMLButtonElement>(".btn-accept")!.click();
      } else if (i % 3 === 1) {
        row.querySelector<HTMLButtonElement>(".btn-reject")!.click();
      } else {
        row.querySelector<HTMLButtonElement>(".btn-edit")!.click();
        const input = document.querySelector<HTMLInputElement>(".edit-input")!;
        input.value = `改写${i}`;
        input.dispatchEvent(new KeyboardEvent("keydown", { key: "Enter", bubbles: true }));
      }
      await settle();
      await store.setFilters({ status: "open" }); // page refreshes to server truth
    }

    expect(service.edits).toHaveLength(10);
    let visible = 0;
    for (const synsetId of service.synsets.keys()) {
      const view = await api.synset(synsetId);
      visible += view.edits.length;
      for (const edit of view.edits) {
        expect(edit.synset).toBe(synsetId);
      }
    }
    expect(visible).toBe(10);
    expect(store.state.items).toHaveLength(0); // nothing left open
  });

  it("concurrent double-decision yields one success and one conflict", async () => {
    const service = seededService(1);
    const first = mount(service, "alice");
    await first.app.start();
    const firstRow = document.querySelector<HTMLElement>(".item-row")!;
    const itemId = firstRow.dataset.itemId!;

    // a second tab over the same service
    const otherApi = new ApiClient("", service.fetch);
    otherApi.author = "bob";
    const otherStore = new QueueStore(otherApi);
    await otherStore.load();

    const [a, b] = await Promise.all([
      first.store.decide(itemId, "accept"),
      otherStore.decide(itemId, "reject"),
    ]);
    expect([a, b].filter(Boolean)).toHaveLength(1);
    expect(service.edits).toHaveLength(1);
    const loser = a ? otherStore : first.store;
    expect(loser.state.notice).toContain("conflict");
    const winnerStatus = service.edits[0]!.kind === "retag-note" ? "accepted" : "rejected";
    expect([...service.items.values()][0]!.status).toBe(winnerStatus);
  });
});
