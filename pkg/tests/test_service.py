"""HTTP review service: queue paging, decisions, conflicts, crash recovery."""

import threading

import pytest
from fastapi.testclient import TestClient

from conftest import FIXTURES, make_lexicon
from zhwn.corrections import EditLog, verify_log_file
from zhwn.review import ReviewQueue
from zhwn.service import ServiceState, create_app
from zhwn.synsets import SynsetId


@pytest.fixture()
def served(tmp_path, toy_db):
    lex = make_lexicon(
        [("00023271-n", "感情", "machine-kept"), ("00023271-n", "感觉"),
         ("02958343-n", "汽车", "machine-kept"), ("02958343-n", "车子")]
    )
    queue = ReviewQueue()
    queue.add(SynsetId.parse("00023271-n"), "感觉", "screening-deferred", 0.42)
    queue.add(SynsetId.parse("02958343-n"), "车子", "rule-flagged", 1.9)
    queue_path = tmp_path / "queue.jsonl"
    queue.save(queue_path)
    log = EditLog.open(tmp_path / "edits.jsonl")
    state = ServiceState(toy_db, lex, log, queue, queue_path=queue_path)
    return state, TestClient(create_app(state)), tmp_path


class TestQueueEndpoint:
    def test_empty_queue_page(self, tmp_path, toy_db):
        state = ServiceState(toy_db, make_lexicon([]), EditLog(), ReviewQueue())
        client = TestClient(create_app(state))
        body = client.get("/api/queue").json()
        assert body == {"items": [], "total": 0, "page": 1, "page_size": 10, "pages": 1}

    def test_pagination_25_items_3_pages(self, toy_db):
        lex = make_lexicon([])
        queue = ReviewQueue()
        for i in range(25):
            queue.add(SynsetId(1740, "n"), f"词{i}", "screening-deferred")
        state = ServiceState(toy_db, lex, EditLog(), queue)
        client = TestClient(create_app(state))
        body = client.get("/api/queue", params={"page_size": 10}).json()
        assert body["total"] == 25 and body["pages"] == 3
        last = client.get("/api/queue", params={"page_size": 10, "page": 3}).json()
        assert len(last["items"]) == 5

    def test_items_carry_synset_context(self, served):
        _state, client, _ = served
        items = client.get("/api/queue", params={"status": "open"}).json()["items"]
        feel = [i for i in items if i["candidate"] == "感觉"][0]
        assert feel["gloss"] == "an emotional state of mind"
        assert feel["english_lemmas"] == ["feeling"]
        assert feel["magnitude"] == 0.42

    def test_status_filter(self, served):
        state, client, _ = served
        item = next(iter(state.queue.items.values()))
        client.post(f"/api/queue/{item.id}/decision",
                    json={"decision": "reject", "author": "ed"})
        open_items = client.get("/api/queue", params={"status": "open"}).json()["items"]
        rejected = client.get("/api/queue", params={"status": "rejected"}).json()["items"]
        assert len(open_items) == 1 and len(rejected) == 1


class TestDecisions:
    def test_accept_then_reject_conflicts(self, served):
        state, client, _ = served
        item_id = next(iter(state.queue.items))
        first = client.post(f"/api/queue/{item_id}/decision",
                            json={"decision": "accept", "author": "alice"})
        assert first.status_code == 200
        assert first.json()["edit"]["id"] == "e000001"
        second = client.post(f"/api/queue/{item_id}/decision",
                             json={"decision": "reject", "author": "bob"})
        assert second.status_code == 409

    def test_decision_round_trip_visible_in_history(self, served):
        state, client, _ = served
        item = [i for i in state.queue.items.values() if i.candidate == "感觉"][0]
        response = client.post(f"/api/queue/{item.id}/decision",
                               json={"decision": "edit", "newText": "感受", "author": "alice"})
        assert response.status_code == 200
        edit_id = response.json()["edit"]["id"]
        synset = client.get("/api/synset/00023271-n").json()
        assert [e["id"] for e in synset["edits"]] == [edit_id]
        statuses = {c["text"]: c["status"] for c in synset["candidates"]}
        assert statuses["感觉"] == "human-dropped"
        assert statuses["感受"] == "human-kept"

    def test_invalid_edit_rejected_before_log(self, served):
        state, client, _ = served
        # 感情 is already machine-kept; decide 感觉 first so 感情 becomes human-decided
        feel = [i for i in state.queue.items.values() if i.candidate == "感觉"][0]
        client.post(f"/api/queue/{feel.id}/decision",
                    json={"decision": "edit", "newText": "感情", "author": "a"})
        # replacing the other item's candidate with the now-human-kept text must fail
        car = [i for i in state.queue.items.values() if i.candidate == "车子"][0]
        state.queue.add(feel.synset, "感情", "rule-flagged")
        again = [i for i in state.queue.items.values() if i.candidate == "感情"][0]
        response = client.post(f"/api/queue/{again.id}/decision",
                               json={"decision": "edit", "newText": "感情", "author": "b"})
        assert response.status_code == 422
        assert len(state.log.records) == 1  # the failed attempt left no record
        assert state.queue.get(again.id).status == "open"
        assert car.status == "open"

    def test_unknown_item_404(self, served):
        _, client, _ = served
        response = client.post("/api/queue/q999999/decision",
                               json={"decision": "accept", "author": "x"})
        assert response.status_code == 404

    def test_author_required(self, served):
        state, client, _ = served
        item_id = next(iter(state.queue.items))
        assert client.post(f"/api/queue/{item_id}/decision",
                           json={"decision": "accept"}).status_code == 400
        ok = client.post(f"/api/queue/{item_id}/decision",
                         json={"decision": "accept"}, headers={"X-Author": "ed"})
        assert ok.status_code == 200

    def test_concurrent_double_decision_single_winner(self, served):
        state, client, _ = served
        item_id = next(iter(state.queue.items))
        results = []

        def fire(decision, author):
            response = client.post(f"/api/queue/{item_id}/decision",
                                   json={"decision": decision, "author": author})
            results.append(response.status_code)

        threads = [threading.Thread(target=fire, args=("accept", "a")),
                   threading.Thread(target=fire, args=("reject", "b"))]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert sorted(results) == [200, 409]
        assert len(state.log.records) == 1


class TestBrowsing:
    def test_synset_view(self, served):
        _, client, _ = served
        body = client.get("/api/synset/02958343-n").json()
        assert body["synset"]["lemmas"] == ["car", "auto", "automobile"]
        assert {c["text"] for c in body["candidates"]} == {"汽车", "车子"}

    def test_unknown_synset_404(self, served):
        _, client, _ = served
        assert client.get("/api/synset/00000042-n").status_code == 404
        assert client.get("/api/synset/not-an-id").status_code == 404

    def test_search_english_and_chinese(self, served):
        _, client, _ = served
        english = client.get("/api/search", params={"lemma": "car"}).json()["results"]
        assert [r["id"] for r in english] == ["02958343-n"]
        chinese = client.get("/api/search", params={"lemma": "感情"}).json()["results"]
        assert [r["id"] for r in chinese] == ["00023271-n"]

    def test_stats_shape(self, served):
        _, client, _ = served
        body = client.get("/api/stats").json()
        assert body["coverage"]["noun"]["translated"] == 2
        assert body["queue"]["open"] == 2
        assert body["edits"] == 0


class TestPersistenceAndRecovery:
    def test_state_load_round_trip(self, served, tmp_path):
        state, client, base = served
        item = [i for i in state.queue.items.values() if i.candidate == "车子"][0]
        client.post(f"/api/queue/{item.id}/decision",
                    json={"decision": "reject", "author": "ed"})
        lex_path = base / "lex.jsonl"
        # persist the PRE-decision base lexicon: the log replay must restore state
        make_lexicon(
            [("00023271-n", "感情", "machine-kept"), ("00023271-n", "感觉"),
             ("02958343-n", "汽车", "machine-kept"), ("02958343-n", "车子")]
        ).save(lex_path)
        reloaded = ServiceState.load(FIXTURES / "wn_toy", lex_path, base / "edits.jsonl",
                                     queue_path=base / "queue.jsonl")
        assert reloaded.lexicon.get(SynsetId.parse("02958343-n"), "车子").status == "human-dropped"
        assert reloaded.queue.get(item.id).status == "rejected"

    def test_crash_mid_write_recovers_and_chain_verifies(self, served):
        state, client, base = served
        item_ids = list(state.queue.items)
        client.post(f"/api/queue/{item_ids[0]}/decision",
                    json={"decision": "accept", "author": "ed"})
        client.post(f"/api/queue/{item_ids[1]}/decision",
                    json={"decision": "reject", "author": "ed"})
        log_path = base / "edits.jsonl"
        raw = log_path.read_bytes()
        log_path.write_bytes(raw[:-25])  # drop the tail of the final record
        lex_path = base / "lex.jsonl"
        make_lexicon(
            [("00023271-n", "感情", "machine-kept"), ("00023271-n", "感觉"),
             ("02958343-n", "汽车", "machine-kept"), ("02958343-n", "车子")]
        ).save(lex_path)
        reloaded = ServiceState.load(FIXTURES / "wn_toy", lex_path, log_path,
                                     queue_path=base / "queue.jsonl")
        assert len(reloaded.log.records) == 1  # partial record invisible
        assert verify_log_file(log_path) == 1  # chain verifies after recovery
        # the item whose decision was lost is open again for re-decision
        statuses = sorted(i.status for i in reloaded.queue.items.values())
        assert statuses == ["accepted", "open"]
