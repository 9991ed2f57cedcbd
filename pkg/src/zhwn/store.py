"""Immutable wordnet database: loading, taxonomy queries, coverage.

A WordnetDb never changes after load_db returns, so every query here is
pure and safe under concurrent readers.  Taxonomies (nouns, verbs) get a
single virtual root when the POS has several roots, making depth and
lowest-common-subsumer queries total.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Optional

from . import pwn
from .errors import ConfigurationError, ConsistencyError, NotFoundError, ParseError, UnsupportedPosError
from .synsets import (
    HYPERNYM_KINDS,
    HYPONYM_KINDS,
    INVERSE_KINDS,
    POS_LETTERS,
    POS_NAMES,
    TAXONOMIC_POS,
    Synset,
    SynsetId,
    normalize_pos,
)

if TYPE_CHECKING:
    from .lexicon import BilingualLexicon

logger = logging.getLogger("zhwn.store")


class WordnetDb:
    """Parsed wordnet: synset map plus the (lemma, pos) -> synsets index.

    The index keys lemmas lowercased, matching the index.* file convention.
    """

    def __init__(self, version: str, synsets: dict[SynsetId, Synset]):
        self.version = version
        self.synsets = synsets
        self.index: dict[tuple[str, str], tuple[SynsetId, ...]] = {}
        for sid, syn in synsets.items():
            for lemma in syn.lemmas:
                key = (lemma.lower(), sid.pos)
                self.index[key] = self.index.get(key, ()) + (sid,)
        self._taxonomies: dict[str, Taxonomy] = {}

    def __eq__(self, other):
        if not isinstance(other, WordnetDb):
            return NotImplemented
        return (
            self.version == other.version
            and self.synsets == other.synsets
            and self.index == other.index
        )

    def __len__(self):
        return len(self.synsets)

    def get(self, sid: SynsetId) -> Synset:
        try:
            return self.synsets[sid]
        except KeyError:
            raise NotFoundError(f"no synset {sid}") from None

    def lookup(self, lemma: str, pos: str) -> tuple[SynsetId, ...]:
        return self.index.get((lemma.lower(), normalize_pos(pos)), ())

    def pos_counts(self) -> dict[str, int]:
        counts = {pos: 0 for pos in POS_LETTERS}
        for sid in self.synsets:
            counts[sid.pos] += 1
        return counts

    def taxonomy(self, pos: str) -> "Taxonomy":
        pos = normalize_pos(pos)
        if pos not in TAXONOMIC_POS:
            raise UnsupportedPosError(f"{POS_NAMES[pos]} has no hypernym taxonomy")
        if pos not in self._taxonomies:
            self._taxonomies[pos] = Taxonomy(self, pos)
        return self._taxonomies[pos]


class Taxonomy:
    """Hypernym/hyponym hierarchy of one POS, rooted (virtually if needed)."""

    def __init__(self, db: WordnetDb, pos: str):
        self.pos = pos
        members = [sid for sid in db.synsets if sid.pos == pos]
        self.children: dict[SynsetId, tuple[SynsetId, ...]] = {}
        self.parents: dict[SynsetId, tuple[SynsetId, ...]] = {}
        for sid in members:
            syn = db.synsets[sid]
            self.children[sid] = tuple(t for t in syn.targets(*HYPONYM_KINDS) if t.pos == pos)
            self.parents[sid] = tuple(t for t in syn.targets(*HYPERNYM_KINDS) if t.pos == pos)

        roots = [sid for sid in members if not self.parents[sid]]
        reached = self._reachable(roots)
        stray = sorted(set(members) - reached)  # cycle components with no root
        if stray:
            logger.warning("%s taxonomy: %d synsets only reachable through cycles (e.g. %s)",
                           POS_NAMES[pos], len(stray), stray[0])
        self.virtual = len(roots) != 1 or bool(stray)
        if self.virtual:
            self.root = self._free_id(db)
            top = list(roots)
            while stray:  # adopt one representative, then drop what it reaches
                rep = stray[0]
                top.append(rep)
                reached |= self._reachable([rep])
                stray = sorted(set(stray) - reached)
            self.children[self.root] = tuple(sorted(top))
            self.parents[self.root] = ()
            for child in self.children[self.root]:
                self.parents[child] = self.parents[child] + (self.root,)
        else:
            self.root = roots[0]

        self.depths = self._depth_map()
        self.max_depth = max(self.depths.values(), default=0)
        self.node_count = len(members) + (1 if self.virtual else 0)
        self._hypo_counts: dict[SynsetId, int] = {}
        self._ancestor_cache: dict[SynsetId, frozenset[SynsetId]] = {}

    def _free_id(self, db: WordnetDb) -> SynsetId:
        offset = 0
        while SynsetId(offset, self.pos) in db.synsets:
            offset += 1
        return SynsetId(offset, self.pos)

    def _reachable(self, seeds) -> set[SynsetId]:
        seen = set(seeds)
        queue = deque(seeds)
        while queue:
            node = queue.popleft()
            for child in self.children.get(node, ()):
                if child not in seen:
                    seen.add(child)
                    queue.append(child)
        return seen

    def _depth_map(self) -> dict[SynsetId, int]:
        depths = {self.root: 0}
        queue = deque([self.root])
        while queue:
            node = queue.popleft()
            for child in self.children.get(node, ()):
                if child not in depths:  # BFS order gives the minimum
                    depths[child] = depths[node] + 1
                    queue.append(child)
        return depths

    def __contains__(self, sid: SynsetId) -> bool:
        return sid in self.children

    def depth(self, sid: SynsetId) -> int:
        if sid not in self.depths:
            raise NotFoundError(f"{sid} not in the {POS_NAMES[self.pos]} taxonomy")
        return self.depths[sid]

    def hyponym_count(self, sid: SynsetId) -> int:
        """Distinct descendants below ``sid`` (itself excluded), cycle-safe."""
        if sid not in self.children:
            raise NotFoundError(f"{sid} not in the {POS_NAMES[self.pos]} taxonomy")
        if sid not in self._hypo_counts:
            seen = {sid}
            stack = [sid]
            while stack:
                for child in self.children[stack.pop()]:
                    if child not in seen:
                        seen.add(child)
                        stack.append(child)
            self._hypo_counts[sid] = len(seen) - 1
        return self._hypo_counts[sid]

    def ancestors(self, sid: SynsetId) -> frozenset[SynsetId]:
        """``sid`` plus everything reachable via hypernym edges, cycle-safe."""
        if sid not in self.children:
            raise NotFoundError(f"{sid} not in the {POS_NAMES[self.pos]} taxonomy")
        if sid not in self._ancestor_cache:
            seen = {sid}
            stack = [sid]
            while stack:
                for parent in self.parents[stack.pop()]:
                    if parent not in seen:
                        seen.add(parent)
                        stack.append(parent)
            self._ancestor_cache[sid] = frozenset(seen)
        return self._ancestor_cache[sid]


def hyponym_count(db: WordnetDb, sid: SynsetId) -> int:
    return db.taxonomy(sid.pos).hyponym_count(sid)


def depth(db: WordnetDb, sid: SynsetId) -> int:
    return db.taxonomy(sid.pos).depth(sid)


_DATA_FILES = {pos: f"data.{POS_NAMES[pos]}" for pos in POS_LETTERS}
_INDEX_FILES = {pos: f"index.{POS_NAMES[pos]}" for pos in POS_LETTERS}


def load_db(directory, version: str = "3.0") -> WordnetDb:
    """Load data.* and index.* from ``directory`` into a linked WordnetDb.

    Raises ConfigurationError for missing files, LinkError for dangling
    relation targets, ConsistencyError when the index files disagree with
    the data files or hypernym/hyponym edges are not mutual inverses.
    """
    directory = Path(directory)
    for name in list(_DATA_FILES.values()) + list(_INDEX_FILES.values()):
        if not (directory / name).is_file():
            raise ConfigurationError(f"missing wordnet file: {directory / name}")

    synsets: dict[SynsetId, Synset] = {}
    for pos, name in _DATA_FILES.items():
        for syn in pwn.parse_data_file((directory / name).read_bytes(), pos):
            if syn.id in synsets:
                raise ConsistencyError(f"duplicate synset id in {name}", [syn.id])
            synsets[syn.id] = syn

    dangling = sorted(
        {rel.target for syn in synsets.values() for rel in syn.relations if rel.target not in synsets}
    )
    if dangling:
        from .errors import LinkError

        raise LinkError(dangling)

    offenders = []
    for syn in synsets.values():
        for rel in syn.relations:
            inverse = INVERSE_KINDS.get(rel.kind)
            if inverse is None:
                continue
            back = synsets[rel.target].relations
            if not any(r.kind == inverse and r.target == syn.id for r in back):
                offenders.append(f"{syn.id} -{rel.kind}-> {rel.target} lacks inverse")
    if offenders:
        raise ConsistencyError("hypernym/hyponym edges not mutually inverse", offenders)

    db = WordnetDb(version, synsets)

    mismatches = []
    for pos, name in _INDEX_FILES.items():
        listed = pwn.parse_index_file((directory / name).read_bytes(), pos)
        inverse = {
            lemma: set(ids)
            for (lemma, p), ids in db.index.items()
            if p == pos
        }
        for lemma, ids in listed.items():
            if set(ids) != inverse.get(lemma, set()):
                mismatches.append(f"{name}: {lemma!r} lists {sorted(map(str, ids))}")
        for lemma in set(inverse) - set(listed):
            mismatches.append(f"{name}: {lemma!r} missing from index")
    if mismatches:
        raise ConsistencyError("index files disagree with data files", mismatches)
    return db


def save_db(db: WordnetDb, directory) -> None:
    """Write the database back out in the data.*/index.* grammar."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for pos in POS_LETTERS:
        members = [syn for sid, syn in db.synsets.items() if sid.pos == pos]
        (directory / _DATA_FILES[pos]).write_bytes(pwn.serialize_data_file(members, pos))
        (directory / _INDEX_FILES[pos]).write_bytes(pwn.serialize_index_file(members, pos))


@dataclass
class VersionMap:
    """Synset-id mapping between two wordnet versions, injective on its domain."""

    from_version: str
    to_version: str
    pairs: dict[SynsetId, SynsetId] = field(default_factory=dict)


def load_version_map(path, from_version: str, to_version: str) -> VersionMap:
    """Read a UTF-8 TSV of ``from-id<TAB>to-id`` lines into a VersionMap."""
    pairs: dict[SynsetId, SynsetId] = {}
    targets: set[SynsetId] = set()
    text = Path(path).read_text(encoding="utf-8")
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ParseError("version map line needs exactly two tab-separated ids", line=number)
        src, dst = SynsetId.parse(parts[0]), SynsetId.parse(parts[1])
        if src in pairs:
            raise ConsistencyError("duplicate source id in version map", [src])
        if dst in targets:
            raise ConsistencyError("version map not injective, duplicate target", [dst])
        pairs[src] = dst
        targets.add(dst)
    return VersionMap(from_version, to_version, pairs)


def map_id(vmap: VersionMap, sid: SynsetId) -> Optional[SynsetId]:
    """Mapped id, or None as the explicit unmapped marker (never an error)."""
    return vmap.pairs.get(sid)


@dataclass
class CoverageRow:
    concepts: int = 0
    translated: int = 0
    lemmas: int = 0

    @property
    def ratio(self) -> float:
        return self.translated / self.concepts if self.concepts else 0.0


@dataclass
class CoverageReport:
    per_pos: dict[str, CoverageRow]
    total: CoverageRow
    unresolved: list[SynsetId]

    def as_dict(self) -> dict:
        rows = {
            POS_NAMES[pos]: {
                "concepts": row.concepts,
                "translated": row.translated,
                "ratio": row.ratio,
                "lemmas": row.lemmas,
            }
            for pos, row in self.per_pos.items()
        }
        rows["total"] = {
            "concepts": self.total.concepts,
            "translated": self.total.translated,
            "ratio": self.total.ratio,
            "lemmas": self.total.lemmas,
        }
        return {"coverage": rows, "unresolved_ids": [str(s) for s in self.unresolved]}


def coverage_report(db: WordnetDb, lexicon: "BilingualLexicon") -> CoverageReport:
    """Per-POS concept/translation/lemma counts in the shape of a coverage table.

    A synset counts as translated when it has at least one active (not
    dropped) candidate; lemma counts are distinct (synset, text) pairs.
    Lexicon ids that do not resolve in ``db`` are reported, not dropped.
    """
    per_pos = {pos: CoverageRow() for pos in POS_LETTERS}
    for sid in db.synsets:
        per_pos[sid.pos].concepts += 1
    unresolved = []
    for sid in lexicon.synset_ids():
        if sid not in db.synsets:
            unresolved.append(sid)
            continue
        active = lexicon.active(sid)
        if active:
            per_pos[sid.pos].translated += 1
            per_pos[sid.pos].lemmas += len(active)
    total = CoverageRow(
        concepts=sum(r.concepts for r in per_pos.values()),
        translated=sum(r.translated for r in per_pos.values()),
        lemmas=sum(r.lemmas for r in per_pos.values()),
    )
    return CoverageReport(per_pos, total, sorted(unresolved))
