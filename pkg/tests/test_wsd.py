"""The four-step disambiguation pipeline and its micro/macro scoring."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import make_lexicon, make_table
from zhwn.errors import NotFoundError, ZhwnError
from zhwn.lexicon import CandidateLemma
from zhwn.store import WordnetDb
from zhwn.synsets import Synset, SynsetId
from zhwn.tokenization import GreedyTokenizer, whitespace_tokens
from zhwn.wsd import (
    SenseInventory,
    Sense,
    WsdInstance,
    build_inventory,
    context_vector,
    context_window,
    disambiguate,
    evaluate_instances,
    load_inventory,
    load_instances,
    load_semeval_task5,
    preprocess,
    save_instances,
    score,
)

FIG3_SENTENCE = "他们排起长长的队伍"
FIG3_SPAN = (7, 9)


def duiwu_fixture():
    """English-gloss wordnet, lexicon and vectors for the 队伍 example.

    Gloss token vectors are engineered so the queue-like sense wins on the
    "formed a long <target>" context.
    """
    rows = {
        "08000001-n": ("troops", "soldiers in an army unit"),
        "08000002-n": ("ranks", "a line of people waiting"),
        "08000003-n": ("contingent", "a group assembled to travel"),
        "10000001-v": ("form_up", "begin to form a line"),
        "10000002-a": ("long", "extending over a line of great length"),
    }
    synsets = {}
    for sid_text, (lemma, gloss) in rows.items():
        sid = SynsetId.parse(sid_text)
        synsets[sid] = Synset(sid, (lemma,), gloss, ())
    db = WordnetDb("3.0", synsets)
    lex = make_lexicon(
        [("08000001-n", "队伍"), ("08000002-n", "队伍"), ("08000003-n", "队伍"),
         ("10000001-v", "起"), ("10000002-a", "长长的")]
    )
    table = make_table(
        {
            "line": [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            "people": [0.5, 1.0, 0.0, 0.0, 0.0, 0.0],
            "waiting": [0.5, 0.0, 1.0, 0.0, 0.0, 0.0],
            "soldiers": [0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
            "army": [0.0, 0.0, 0.0, 1.0, 0.5, 0.0],
            "unit": [0.0, 0.0, 0.0, 0.8, 0.2, 0.0],
            "group": [0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
            "assembled": [0.0, 0.0, 0.0, 0.0, 1.0, 1.0],
            "travel": [0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
            "begin": [1.0, 0.2, 0.0, 0.0, 0.0, 0.0],
            "form": [1.0, 0.0, 0.2, 0.0, 0.0, 0.0],
            "extending": [1.0, 0.0, 0.0, 0.0, 0.1, 0.0],
            "great": [1.0, 0.1, 0.0, 0.0, 0.0, 0.0],
            "length": [1.0, 0.0, 0.1, 0.0, 0.0, 0.0],
        }
    )
    inventory = build_inventory(lex, db, ["队伍"])
    return db, lex, table, inventory


class TestPreprocess:
    def test_single_stopword_sentence(self):
        tokenizer = GreedyTokenizer({"的"})
        assert preprocess("的", tokenizer) == []

    def test_fig3_fragment_contains_context_words(self):
        tokenizer = GreedyTokenizer({"起", "长长的", "队伍"})
        tokens = preprocess(FIG3_SENTENCE, tokenizer)
        assert "起" in tokens and "长长的" in tokens
        target = tokens.index("队伍")
        assert tokens[target - 2 : target] == ["起", "长长的"]

    def test_matches_hand_segmentation(self):
        tokenizer = GreedyTokenizer({"汽车", "快", "开"})
        assert preprocess("他开汽车很快", tokenizer) == ["开", "汽车", "快"]

    def test_empty_sentence_error(self):
        with pytest.raises(ZhwnError):
            preprocess("", whitespace_tokens)


class TestContextWindow:
    def test_target_at_start(self):
        assert context_window(["目", "a", "b", "c"], 0) == ["a", "b"]

    def test_middle_of_five(self):
        assert context_window(["a", "b", "目", "c", "d"], 2) == ["a", "b", "c", "d"]

    def test_fig3_window(self):
        tokens = ["们", "排", "起", "长长的", "队伍"]
        assert context_window(tokens, 4, width=2) == ["起", "长长的"]

    def test_width_one(self):
        assert context_window(["a", "b", "目", "c", "d"], 2, width=1) == ["b", "c"]

    def test_bad_position(self):
        with pytest.raises(ZhwnError):
            context_window(["a"], 5)


class TestContextVector:
    def test_single_token_single_synset(self):
        db, lex, table, _ = duiwu_fixture()
        vec = context_vector(["起"], lex, db, table)
        from zhwn.relatedness import gloss_vector
        from zhwn.tokenization import ENGLISH_STOPWORDS, simple_tokens

        expected = gloss_vector("begin to form a line", table, simple_tokens, ENGLISH_STOPWORDS)
        assert np.allclose(vec, expected)

    def test_empty_window_signals_none(self):
        db, lex, table, _ = duiwu_fixture()
        assert context_vector([], lex, db, table) is None

    def test_sum_over_synsets_hand_oracle(self):
        db, lex, table, _ = duiwu_fixture()
        from zhwn.relatedness import gloss_vector
        from zhwn.tokenization import ENGLISH_STOPWORDS, simple_tokens

        vec = context_vector(["起", "长长的"], lex, db, table)
        expected = gloss_vector("begin to form a line", table, simple_tokens, ENGLISH_STOPWORDS) + \
            gloss_vector("extending over a line of great length", table, simple_tokens, ENGLISH_STOPWORDS)
        assert np.allclose(vec, expected, atol=1e-9)

    def test_unknown_tokens_contribute_nothing(self):
        db, lex, table, _ = duiwu_fixture()
        with_noise = context_vector(["起", "无关"], lex, db, table)
        clean = context_vector(["起"], lex, db, table)
        assert np.allclose(with_noise, clean)


class TestDisambiguate:
    def test_single_sense_short_circuits(self):
        db, lex, table, _ = duiwu_fixture()
        inventory = SenseInventory()
        inventory.add("词", Sense("08000001-n", "soldiers in an army unit", "troops"))
        instance = WsdInstance("i1", "词", "词", (0, 1), "词", "08000001-n")
        assert disambiguate(instance, inventory, lex, db, table) == "08000001-n"

    def test_fig3_context_selects_gold_sense(self):
        db, lex, table, inventory = duiwu_fixture()
        instance = WsdInstance("i1", FIG3_SENTENCE, "队伍", FIG3_SPAN, "队伍", "08000002-n")
        assert disambiguate(instance, inventory, lex, db, table) == "08000002-n"

    def test_engineered_separability_army_context(self):
        db, lex, table, inventory = duiwu_fixture()
        # context token mapping straight to the troops gloss wins that sense
        lex.add(CandidateLemma(SynsetId.parse("08000001-n"), "军", "test"))
        sentence = "军队伍"
        instance = WsdInstance("i2", sentence, "队伍", (1, 3), "队伍", "08000001-n")
        assert disambiguate(instance, inventory, lex, db, table) == "08000001-n"

    def test_empty_context_falls_back_to_first_sense(self):
        db, lex, table, inventory = duiwu_fixture()
        instance = WsdInstance("i3", "就队伍", "队伍", (1, 3), "队伍", "08000001-n")
        predicted = disambiguate(instance, inventory, lex, db, table)
        assert predicted == inventory.senses("队伍")[0].sense_id

    def test_target_missing_from_inventory(self):
        db, lex, table, inventory = duiwu_fixture()
        instance = WsdInstance("i4", "别的词", "别的词", (0, 3), "x", "s")
        with pytest.raises(NotFoundError):
            disambiguate(instance, inventory, lex, db, table)

    def test_lemma_representation_mode(self):
        db, lex, table, inventory = duiwu_fixture()
        extended = make_table({**{t: list(table[t]) for t in table.tokens()},
                               "troops": [0, 0, 0, 1, 0, 0],
                               "ranks": [1, 0, 0, 0, 0, 0],
                               "contingent": [0, 0, 0, 0, 0.5, 1]})
        instance = WsdInstance("i5", FIG3_SENTENCE, "队伍", FIG3_SPAN, "队伍", "08000002-n")
        predicted = disambiguate(instance, inventory, lex, db, extended,
                                 representation="lemma")
        assert predicted == "08000002-n"


class TestScore:
    def test_all_correct(self):
        result = score([("a", True), ("b", True), ("b", True)])
        assert result.micro == 1.0 and result.macro == 1.0

    def test_documented_two_type_case(self):
        outcomes = [("t1", True), ("t1", False), ("t2", True), ("t2", True), ("t2", True)]
        result = score(outcomes)
        assert result.per_type == {"t1": (1, 2), "t2": (3, 3)}
        assert result.micro == pytest.approx(0.8)
        assert result.macro == pytest.approx(0.75)

    def test_first_sense_baseline_matches_tally(self):
        db, lex, table, inventory = duiwu_fixture()
        instances = [
            WsdInstance("b1", FIG3_SENTENCE, "队伍", FIG3_SPAN, "队伍", "08000001-n"),
            WsdInstance("b2", FIG3_SENTENCE, "队伍", FIG3_SPAN, "队伍", "08000002-n"),
        ]
        first = inventory.senses("队伍")[0].sense_id
        expected = [inst.gold == first for inst in instances]
        outcomes = [(inst.word_type, inst.gold == first) for inst in instances]
        result = score(outcomes)
        assert result.micro == sum(expected) / len(expected)

    @settings(max_examples=40)
    @given(st.lists(st.tuples(st.sampled_from(["t1", "t2", "t3"]), st.booleans()),
                    min_size=1, max_size=30))
    def test_micro_macro_bounds_and_duplication(self, outcomes):
        result = score(outcomes)
        assert 0.0 <= result.micro <= 1.0
        assert 0.0 <= result.macro <= 1.0
        doubled = score(outcomes + outcomes)
        assert doubled.micro == pytest.approx(result.micro)
        assert doubled.macro == pytest.approx(result.macro)

    @settings(max_examples=40)
    @given(st.integers(1, 5), st.data())
    def test_micro_equals_macro_when_counts_equal(self, per_type, data):
        outcomes = []
        for word_type in ("t1", "t2", "t3"):
            for _ in range(per_type):
                outcomes.append((word_type, data.draw(st.booleans())))
        result = score(outcomes)
        assert result.micro == pytest.approx(result.macro, abs=1e-12)


class TestPipelines:
    def test_evaluate_instances_end_to_end(self):
        db, lex, table, inventory = duiwu_fixture()
        instances = [
            WsdInstance("p1", FIG3_SENTENCE, "队伍", FIG3_SPAN, "队伍", "08000002-n"),
            WsdInstance("p2", "军队伍", "队伍", (1, 3), "队伍", "08000001-n"),
        ]
        lex.add(CandidateLemma(SynsetId.parse("08000001-n"), "军", "test"))
        result = evaluate_instances(instances, inventory, lex, db, table)
        assert result.micro == 1.0
        assert all(p["correct"] for p in result.predictions)

    def test_instances_round_trip(self, tmp_path):
        instances = [WsdInstance("r1", FIG3_SENTENCE, "队伍", FIG3_SPAN, "队伍", "08000002-n")]
        path = tmp_path / "instances.jsonl"
        save_instances(instances, path)
        loaded = load_instances(path)
        assert loaded == instances

    def test_inventory_tsv(self, tmp_path):
        path = tmp_path / "inv.tsv"
        path.write_text(
            "队伍\t08000001-n\ttroops\tsoldiers in an army unit\n"
            "队伍\t08000002-n\tranks\ta line of people waiting\n",
            encoding="utf-8",
        )
        inventory = load_inventory(path)
        assert [s.sense_id for s in inventory.senses("队伍")] == ["08000001-n", "08000002-n"]

    def test_semeval_import(self, tmp_path):
        xml = tmp_path / "task.xml"
        xml.write_text(
            "<corpus lang=\"zh\">\n<lexelt item=\"队伍\" pos=\"n\">\n"
            "<instance id=\"duiwu.01\">\n<context>他们 排 起 长长的 <head>队伍</head></context>\n"
            "</instance>\n</lexelt>\n</corpus>\n",
            encoding="utf-8",
        )
        key = tmp_path / "task.key"
        key.write_text("队伍 duiwu.01 08000002-n\n", encoding="utf-8")
        (instance,) = load_semeval_task5(xml, key)
        assert instance.word_type == "队伍"
        assert instance.target == "队伍"
        assert instance.sentence.endswith("队伍")
        assert instance.gold == "08000002-n"
        lo, hi = instance.span
        assert instance.sentence[lo:hi] == "队伍"

    def test_semeval_whitespace_tokens_pipeline(self, tmp_path):
        db, lex, table, inventory = duiwu_fixture()
        xml = tmp_path / "task.xml"
        xml.write_text(
            "<corpus lang=\"zh\"><lexelt item=\"队伍\" pos=\"n\">"
            "<instance id=\"duiwu.01\"><context>他们 排 起 长长的 <head>队伍</head></context>"
            "</instance></lexelt></corpus>",
            encoding="utf-8",
        )
        key = tmp_path / "task.key"
        key.write_text("队伍 duiwu.01 08000002-n\n", encoding="utf-8")
        instances = load_semeval_task5(xml, key)
        result = evaluate_instances(instances, inventory, lex, db, table,
                                    tokenizer=whitespace_tokens)
        assert result.micro == 1.0
