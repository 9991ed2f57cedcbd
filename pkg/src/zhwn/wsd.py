"""Word sense disambiguation over sentence context, gloss vectors, cosine.

Four steps: segment the sentence and drop stopwords; take up to two
content tokens each side of the target as context; map every context
token to its synsets and sum their English-gloss vectors into one context
vector; pick the sense whose own vector is most cosine-similar.  Ties and
empty contexts fall back to the first listed sense, which doubles as the
first-sense baseline.
"""

from __future__ import annotations

import json
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional

import numpy as np

from .embeddings import EmbeddingTable, cosine
from .errors import NotFoundError, ParseError, ZhwnError
from .lexicon import BilingualLexicon
from .relatedness import gloss_vector
from .store import WordnetDb
from .tokenization import (
    CHINESE_STOPWORDS,
    ENGLISH_STOPWORDS,
    GreedyTokenizer,
    remove_stopwords,
    simple_tokens,
)

@dataclass
class WsdInstance:
    instance_id: str
    sentence: str
    target: str
    span: tuple[int, int]   # character span of the target inside sentence
    word_type: str
    gold: str               # sense id, SynsetId string or task-native key

    def __post_init__(self):
        lo, hi = self.span
        if self.sentence[lo:hi] != self.target:
            raise ValueError(
                f"{self.instance_id}: span {self.span} does not cover {self.target!r}"
            )


@dataclass
class Sense:
    sense_id: str
    gloss: str
    english: str


class SenseInventory:
    """target word -> candidate senses, each with a gloss and English lemma."""

    def __init__(self):
        self._senses: dict[str, list[Sense]] = {}

    def add(self, word: str, sense: Sense) -> None:
        bucket = self._senses.setdefault(word, [])
        if any(s.sense_id == sense.sense_id for s in bucket):
            raise ValueError(f"duplicate sense {sense.sense_id!r} for {word!r}")
        bucket.append(sense)

    def senses(self, word: str) -> list[Sense]:
        if word not in self._senses:
            raise NotFoundError(f"{word!r} not in the sense inventory")
        return self._senses[word]

    def __contains__(self, word: str) -> bool:
        return word in self._senses

    def words(self):
        return self._senses.keys()


def load_inventory(path) -> SenseInventory:
    """Read word<TAB>sense-id<TAB>english-lemma<TAB>gloss lines."""
    inventory = SenseInventory()
    for number, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise ParseError("inventory line needs word, sense-id, english, gloss", line=number)
        word, sense_id, english, gloss = parts
        try:
            inventory.add(word, Sense(sense_id, gloss, english))
        except ValueError as exc:
            raise ParseError(str(exc), line=number) from None
    return inventory


def build_inventory(lex: BilingualLexicon, db: WordnetDb, words: Iterable[str]) -> SenseInventory:
    """Senses of each word = synsets where it is an active candidate."""
    inventory = SenseInventory()
    for word in words:
        for sid in lex.synsets_for_text(word):
            syn = db.get(sid)
            inventory.add(word, Sense(str(sid), syn.gloss, syn.lemmas[0]))
    return inventory


def lexicon_tokenizer(lex: BilingualLexicon) -> GreedyTokenizer:
    """Greedy longest-match over the lexicon's active lemmas, chars as fallback."""
    return GreedyTokenizer({c.text for c in lex.all_candidates() if c.active()})


def preprocess(sentence: str, tokenizer: Callable[[str], list[str]],
               stoplist: Iterable[str] = CHINESE_STOPWORDS) -> list[str]:
    """Segment and drop stopwords; an empty result signals an empty context."""
    if not sentence:
        raise ZhwnError("empty sentence")
    return remove_stopwords(tokenizer(sentence), stoplist)


def context_window(tokens: list[str], target_position: int, width: int = 2) -> list[str]:
    """Up to ``width`` tokens each side of the target, target excluded."""
    if not 0 <= target_position < len(tokens):
        raise ZhwnError(f"target position {target_position} out of range")
    left = tokens[max(0, target_position - width) : target_position]
    right = tokens[target_position + 1 : target_position + 1 + width]
    return left + right


def context_vector(window: list[str], lex: BilingualLexicon, db: WordnetDb,
                   table: EmbeddingTable,
                   gloss_tokenizer: Callable[[str], list[str]] = simple_tokens,
                   gloss_stoplist: Iterable[str] = ENGLISH_STOPWORDS) -> Optional[np.ndarray]:
    """Sum of the gloss vectors of every synset of every window token.

    Tokens with no synset contribute nothing; None signals an empty context.
    """
    pieces = []
    for token in window:
        for sid in lex.synsets_for_text(token):
            vec = gloss_vector(db.get(sid).gloss, table, gloss_tokenizer, gloss_stoplist)
            if vec is not None:
                pieces.append(vec)
    if not pieces:
        return None
    return np.sum(pieces, axis=0)


def sense_vector(sense: Sense, table: EmbeddingTable, representation: str = "gloss",
                 gloss_tokenizer: Callable[[str], list[str]] = simple_tokens,
                 gloss_stoplist: Iterable[str] = ENGLISH_STOPWORDS) -> Optional[np.ndarray]:
    """A sense's vector: its gloss vector (default) or its English lemma's."""
    if representation == "gloss":
        return gloss_vector(sense.gloss, table, gloss_tokenizer, gloss_stoplist)
    if representation == "lemma":
        parts = [table[p] for p in sense.english.lower().split("_") if p in table]
        return np.mean(parts, axis=0) if parts else None
    raise ValueError(f"unknown sense representation {representation!r}")


def disambiguate(instance: WsdInstance, inventory: SenseInventory,
                 lex: BilingualLexicon, db: WordnetDb, table: EmbeddingTable,
                 tokenizer: Optional[Callable[[str], list[str]]] = None,
                 stoplist: Iterable[str] = CHINESE_STOPWORDS,
                 window_width: int = 2,
                 representation: str = "gloss") -> str:
    """Predict a sense id for the instance's target word.

    The target is segmented as its own token regardless of the tokenizer,
    never removed as a stopword.  Ties and empty contexts return the first
    listed sense.
    """
    senses = inventory.senses(instance.target)
    if len(senses) == 1:
        return senses[0].sense_id
    if tokenizer is None:
        tokenizer = lexicon_tokenizer(lex)
    lo, hi = instance.span
    left = preprocess(instance.sentence[:lo], tokenizer, stoplist) if lo else []
    right = preprocess(instance.sentence[hi:], tokenizer, stoplist) if hi < len(instance.sentence) else []
    tokens = left + [instance.target] + right
    window = context_window(tokens, len(left), window_width)
    ctx = context_vector(window, lex, db, table)
    if ctx is None:
        return senses[0].sense_id
    best = senses[0].sense_id
    best_value = -np.inf
    for sense in senses:
        svec = sense_vector(sense, table, representation)
        if svec is None:
            continue
        value = cosine(ctx, svec)
        if value > best_value:  # strict: ties keep the first listed sense
            best, best_value = sense.sense_id, value
    return best


@dataclass
class WsdResult:
    predictions: list[dict] = field(default_factory=list)
    per_type: dict[str, tuple[int, int]] = field(default_factory=dict)  # type -> (m, n)
    micro: float = 0.0
    macro: float = 0.0

    def as_dict(self) -> dict:
        return {
            "micro": self.micro,
            "macro": self.macro,
            "word_types": {
                t: {"correct": m, "instances": n, "accuracy": m / n}
                for t, (m, n) in self.per_type.items()
            },
            "predictions": self.predictions,
        }

    def per_type_rows(self) -> str:
        lines = ["word_type\tcorrect\tinstances\taccuracy"]
        for word_type, (m, n) in sorted(self.per_type.items()):
            lines.append(f"{word_type}\t{m}\t{n}\t{m / n:.4f}")
        lines.append(f"micro\t\t\t{self.micro:.4f}")
        lines.append(f"macro\t\t\t{self.macro:.4f}")
        return "\n".join(lines) + "\n"


def score(outcomes: list[tuple[str, bool]]) -> WsdResult:
    """Micro/macro precision from (word-type, correct) pairs.

    micro = pooled correct/total; macro = mean of per-type accuracies.
    """
    result = WsdResult()
    tally: dict[str, list[int]] = {}
    for word_type, correct in outcomes:
        bucket = tally.setdefault(word_type, [0, 0])
        bucket[1] += 1
        if correct:
            bucket[0] += 1
    if not tally:
        raise ZhwnError("nothing to score")
    result.per_type = {t: (m, n) for t, (m, n) in tally.items()}
    total_m = sum(m for m, _ in result.per_type.values())
    total_n = sum(n for _, n in result.per_type.values())
    result.micro = total_m / total_n
    result.macro = sum(m / n for m, n in result.per_type.values()) / len(result.per_type)
    return result


def evaluate_instances(instances: list[WsdInstance], inventory: SenseInventory,
                       lex: BilingualLexicon, db: WordnetDb, table: EmbeddingTable,
                       tokenizer: Optional[Callable[[str], list[str]]] = None,
                       stoplist: Iterable[str] = CHINESE_STOPWORDS,
                       window_width: int = 2,
                       representation: str = "gloss") -> WsdResult:
    if tokenizer is None:
        tokenizer = lexicon_tokenizer(lex)
    outcomes = []
    predictions = []
    for instance in instances:
        predicted = disambiguate(instance, inventory, lex, db, table,
                                 tokenizer, stoplist, window_width, representation)
        correct = predicted == instance.gold
        outcomes.append((instance.word_type, correct))
        predictions.append(
            {"instance": instance.instance_id, "predicted": predicted,
             "gold": instance.gold, "correct": correct, "word_type": instance.word_type}
        )
    result = score(outcomes)
    result.predictions = predictions
    return result


# -- instance files ----------------------------------------------------------


def load_instances(path) -> list[WsdInstance]:
    """JSONL instances: instance_id, sentence, target, span, word_type, gold."""
    instances = []
    with open(path, encoding="utf-8") as handle:
        for number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
                instances.append(
                    WsdInstance(
                        row["instance_id"], row["sentence"], row["target"],
                        (int(row["span"][0]), int(row["span"][1])),
                        row["word_type"], row["gold"],
                    )
                )
            except (ValueError, KeyError) as exc:
                raise ParseError(f"bad instance: {exc}", line=number) from None
    return instances


def save_instances(instances: list[WsdInstance], path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for inst in instances:
            row = {
                "instance_id": inst.instance_id, "sentence": inst.sentence,
                "target": inst.target, "span": list(inst.span),
                "word_type": inst.word_type, "gold": inst.gold,
            }
            handle.write(json.dumps(row, ensure_ascii=False) + "\n")


def load_semeval_task5(xml_path, key_path) -> list[WsdInstance]:
    """Import the multilingual lexical-sample layout used at SemEval-2007.

    Expects <lexelt item=...> elements containing <instance id=...> with a
    <context> whose <head> marks the ambiguous word, plus a key file of
    whitespace-separated ``lexelt-item instance-id sense-id`` lines.
    """
    gold: dict[str, str] = {}
    for number, line in enumerate(Path(key_path).read_text(encoding="utf-8").splitlines(), start=1):
        parts = line.split()
        if not parts:
            continue
        if len(parts) == 3:
            gold[parts[1]] = parts[2]
        elif len(parts) == 2:
            gold[parts[0]] = parts[1]
        else:
            raise ParseError("key line needs [lexelt] instance-id sense-id", line=number)

    text = Path(xml_path).read_text(encoding="utf-8")
    try:
        root = ET.fromstring(text)
    except ET.ParseError:
        root = ET.fromstring(f"<corpus>{text}</corpus>")

    instances = []
    for lexelt in root.iter("lexelt"):
        word_type = lexelt.get("item", "")
        for node in lexelt.iter("instance"):
            instance_id = node.get("id", "")
            context = node.find("context")
            head = None if context is None else context.find("head")
            if context is None or head is None:
                raise ParseError(f"instance {instance_id!r} lacks a <context>/<head>")
            before = (context.text or "")
            target = (head.text or "").strip()
            after = (head.tail or "")
            before_clean = re.sub(r"\s+", " ", before).lstrip()
            after_clean = re.sub(r"\s+", " ", after).rstrip()
            sentence = f"{before_clean}{target}{after_clean}"
            span = (len(before_clean), len(before_clean) + len(target))
            if instance_id not in gold:
                raise ParseError(f"instance {instance_id!r} missing from the key file")
            instances.append(
                WsdInstance(instance_id, sentence, target, span, word_type, gold[instance_id])
            )
    return instances
