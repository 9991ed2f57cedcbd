"""Reader and writer for Princeton-WordNet-3.0-format database files.

Handles the ``data.<pos>`` and ``index.<pos>`` line grammars: copyright
header lines (two leading spaces) are skipped, lemma underscores are kept,
the gloss is the trimmed text after the first ``|``.  Files must be UTF-8.
"""

from __future__ import annotations

import re

from .errors import LinkError, ParseError
from .synsets import POS_NAMES, Relation, Synset, SynsetId, normalize_pos

# Pointer symbols from the wndb grammar.  Unlisted symbols are carried
# through verbatim as the relation kind so nothing is silently dropped.
POINTER_SYMBOLS = {
    "!": "antonym",
    "@": "hypernym",
    "@i": "instance_hypernym",
    "~": "hyponym",
    "~i": "instance_hyponym",
    "#m": "member_holonym",
    "#s": "substance_holonym",
    "#p": "part_holonym",
    "%m": "member_meronym",
    "%s": "substance_meronym",
    "%p": "part_meronym",
    "=": "attribute",
    "+": "derivation",
    ";c": "domain_topic",
    "-c": "domain_topic_member",
    ";r": "domain_region",
    "-r": "domain_region_member",
    ";u": "domain_usage",
    "-u": "domain_usage_member",
    "*": "entailment",
    ">": "cause",
    "^": "also_see",
    "$": "verb_group",
    "&": "similar_to",
    "<": "participle",
    "\\": "pertainym",
}
KIND_SYMBOLS = {kind: sym for sym, kind in POINTER_SYMBOLS.items()}

# Adjective words may carry a syntactic marker: wet(p), certain(ip), ...
_MARKER_RE = re.compile(r"\((a|p|ip)\)$")

_HEX_DIGITS = set("0123456789abcdefABCDEF")


def _decode_lines(content: bytes):
    """Yield (line_number, byte_offset, text) for every line, UTF-8 only."""
    offset = 0
    for number, raw in enumerate(content.split(b"\n"), start=1):
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not UTF-8: {exc}", line=number, offset=offset) from None
        yield number, offset, text
        offset += len(raw) + 1


def _is_header(text: str) -> bool:
    return text.startswith("  ")


def _target_pos(letter: str, line: int, offset: int) -> str:
    if letter == "s":  # satellites live in the adjective file
        return "a"
    if letter not in POS_NAMES:
        raise ParseError(f"bad pointer pos {letter!r}", line=line, offset=offset)
    return letter


def parse_data_file(content: bytes, pos: str) -> list[Synset]:
    """Parse one ``data.<pos>`` file into synsets, in file order.

    Same-POS relation targets must resolve within the file; cross-POS
    targets are only checkable once all four files are loaded (load_db).
    """
    pos = normalize_pos(pos)
    synsets: list[Synset] = []
    seen: set[int] = set()
    for number, byte_offset, text in _decode_lines(content):
        if not text.strip() or _is_header(text):
            continue
        try:
            synsets.append(_parse_data_line(text, pos, number, byte_offset))
        except (ValueError, IndexError) as exc:
            raise ParseError(f"malformed data line: {exc}", line=number, offset=byte_offset) from None
        seen.add(synsets[-1].id.offset)
    unresolved = sorted(
        {
            rel.target
            for syn in synsets
            for rel in syn.relations
            if rel.target.pos == pos and rel.target.offset not in seen
        }
    )
    if unresolved:
        raise LinkError(unresolved)
    return synsets


def _parse_data_line(text: str, pos: str, number: int, byte_offset: int) -> Synset:
    head, sep, gloss = text.partition("|")
    if not sep:
        raise ValueError("no '|' gloss separator")
    gloss = gloss.strip()
    fields = head.split()
    offset = int(fields[0], 10)
    if len(fields[0]) != 8:
        raise ValueError(f"offset field must be 8 digits, got {fields[0]!r}")
    int(fields[1], 10)  # lex_filenum, validated and discarded
    ss_type = fields[2]
    if ss_type == "s":
        ss_type = "a"
    if ss_type != pos:
        raise ValueError(f"ss_type {fields[2]!r} does not match file pos {pos!r}")

    w_cnt = int(fields[3], 16)
    if w_cnt < 1:
        raise ValueError("word count must be >= 1")
    lemmas = []
    cursor = 4
    for _ in range(w_cnt):
        word = fields[cursor]
        if fields[cursor + 1] not in _HEX_DIGITS:
            raise ValueError(f"bad lex_id {fields[cursor + 1]!r}")
        lemmas.append(_MARKER_RE.sub("", word))
        cursor += 2

    p_cnt = int(fields[cursor], 10)
    cursor += 1
    relations = []
    for _ in range(p_cnt):
        symbol, target_offset, target_pos, _source = fields[cursor : cursor + 4]
        kind = POINTER_SYMBOLS.get(symbol, symbol)
        target = SynsetId(int(target_offset, 10), _target_pos(target_pos, number, byte_offset))
        relations.append(Relation(kind, target))
        cursor += 4

    if pos == "v":
        f_cnt = int(fields[cursor], 10)
        cursor += 1 + 3 * f_cnt  # each frame is "+ f_num w_num"
    if cursor != len(fields):
        raise ValueError(f"{len(fields) - cursor} unexpected trailing fields")

    return Synset(SynsetId(offset, pos), tuple(lemmas), gloss, tuple(relations))


def parse_index_file(content: bytes, pos: str) -> dict[str, list[SynsetId]]:
    """Parse one ``index.<pos>`` file into lemma -> synset ids (file order)."""
    pos = normalize_pos(pos)
    entries: dict[str, list[SynsetId]] = {}
    for number, byte_offset, text in _decode_lines(content):
        if not text.strip() or _is_header(text):
            continue
        fields = text.split()
        try:
            lemma = fields[0]
            if fields[1] not in POS_NAMES:
                raise ValueError(f"bad pos {fields[1]!r}")
            synset_cnt = int(fields[2], 10)
            p_cnt = int(fields[3], 10)
            cursor = 4 + p_cnt  # skip the pointer-symbol list
            int(fields[cursor], 10)      # sense_cnt
            int(fields[cursor + 1], 10)  # tagsense_cnt
            offsets = fields[cursor + 2 :]
            if len(offsets) != synset_cnt:
                raise ValueError(f"expected {synset_cnt} offsets, found {len(offsets)}")
            if lemma in entries:
                raise ValueError(f"duplicate index entry for {lemma!r}")
            entries[lemma] = [SynsetId(int(o, 10), pos) for o in offsets]
        except (ValueError, IndexError) as exc:
            raise ParseError(f"malformed index line: {exc}", line=number, offset=byte_offset) from None
    return entries


def serialize_data_file(synsets: list[Synset], pos: str) -> bytes:
    """Render synsets back to the ``data.<pos>`` grammar.

    Fields the Synset type does not keep (lex_filenum, lex_ids, pointer
    source/target words) are written as zeros; re-parsing the output gives
    an identical database.
    """
    pos = normalize_pos(pos)
    lines = [
        "  1 This file is in the Princeton WordNet 3.0 database format.",
        "  2 Generated by zhwn; header lines begin with two spaces.",
    ]
    for syn in synsets:
        if syn.id.pos != pos:
            raise ValueError(f"{syn.id} does not belong in data.{POS_NAMES[pos]}")
        fields = [f"{syn.id.offset:08d}", "00", pos, f"{len(syn.lemmas):02x}"]
        for lemma in syn.lemmas:
            fields += [lemma, "0"]
        fields.append(f"{len(syn.relations):03d}")
        for rel in syn.relations:
            symbol = KIND_SYMBOLS.get(rel.kind, rel.kind)
            fields += [symbol, f"{rel.target.offset:08d}", rel.target.pos, "0000"]
        if pos == "v":
            fields.append("00")
        lines.append(" ".join(fields) + " | " + syn.gloss)
    return ("\n".join(lines) + "\n").encode("utf-8")


def serialize_index_file(synsets: list[Synset], pos: str) -> bytes:
    """Render the inverse lemma index for ``synsets`` in index.<pos> grammar."""
    pos = normalize_pos(pos)
    by_lemma: dict[str, list[Synset]] = {}
    for syn in synsets:
        for lemma in syn.lemmas:
            by_lemma.setdefault(lemma.lower(), []).append(syn)
    lines = [
        "  1 This file is in the Princeton WordNet 3.0 index format.",
        "  2 Generated by zhwn; header lines begin with two spaces.",
    ]
    for lemma in sorted(by_lemma):
        members = by_lemma[lemma]
        symbols = sorted({KIND_SYMBOLS.get(r.kind, r.kind) for s in members for r in s.relations})
        fields = [lemma, pos, str(len(members)), str(len(symbols))]
        fields += symbols
        fields += [str(len(members)), "0"]
        fields += [f"{s.id.offset:08d}" for s in members]
        lines.append(" ".join(fields))
    return ("\n".join(lines) + "\n").encode("utf-8")
