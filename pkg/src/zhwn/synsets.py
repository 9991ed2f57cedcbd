"""Core wordnet value types: synset ids, synsets, relations."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import NamedTuple

from .errors import ParseError

# Part-of-speech letters used in file names / ids and their long names.
POS_LETTERS = ("n", "v", "a", "r")
POS_NAMES = {"n": "noun", "v": "verb", "a": "adj", "r": "adv"}
POS_BY_NAME = {name: letter for letter, name in POS_NAMES.items()}

# Parts of speech that carry a hypernym taxonomy.
TAXONOMIC_POS = ("n", "v")

_ID_RE = re.compile(r"^(\d{8})-([nvar])$")


def normalize_pos(pos: str) -> str:
    """Accept either a letter ('n') or a long name ('noun'); return the letter."""
    if pos in POS_NAMES:
        return pos
    if pos in POS_BY_NAME:
        return POS_BY_NAME[pos]
    raise ValueError(f"unknown part of speech: {pos!r}")


@dataclass(frozen=True, order=True)
class SynsetId:
    """A wordnet concept id: 8-digit offset plus part-of-speech letter."""

    offset: int
    pos: str

    def __post_init__(self):
        if not 0 <= self.offset <= 99999999:
            raise ValueError(f"offset out of range: {self.offset}")
        if self.pos not in POS_LETTERS:
            raise ValueError(f"bad pos letter: {self.pos!r}")

    def __str__(self) -> str:
        return f"{self.offset:08d}-{self.pos}"

    @classmethod
    def parse(cls, text: str) -> "SynsetId":
        m = _ID_RE.match(text.strip())
        if m is None:
            raise ParseError(f"not a synset id: {text!r}")
        return cls(int(m.group(1)), m.group(2))


class Relation(NamedTuple):
    """One typed edge from the owning synset to ``target``."""

    kind: str
    target: SynsetId


# Inverse pairs we enforce on load; other relation kinds are carried as-is.
INVERSE_KINDS = {
    "hypernym": "hyponym",
    "hyponym": "hypernym",
    "instance_hypernym": "instance_hyponym",
    "instance_hyponym": "instance_hypernym",
}

HYPERNYM_KINDS = ("hypernym", "instance_hypernym")
HYPONYM_KINDS = ("hyponym", "instance_hyponym")


@dataclass(frozen=True)
class Synset:
    """One concept: id, ordered English lemmas, gloss, outgoing relations.

    Lemmas keep their underscores exactly as stored in the source files.
    """

    id: SynsetId
    lemmas: tuple[str, ...]
    gloss: str
    relations: tuple[Relation, ...] = ()

    def __post_init__(self):
        if not self.lemmas:
            raise ValueError(f"{self.id}: synset needs at least one lemma")
        if not self.gloss.strip():
            raise ValueError(f"{self.id}: empty gloss")

    def targets(self, *kinds: str):
        """Yield relation targets whose kind is one of ``kinds``."""
        for rel in self.relations:
            if rel.kind in kinds:
                yield rel.target
