"""Tokenizers and stopword lists for gloss and sentence processing.

A tokenizer is any callable text -> list of tokens.  Chinese text gets a
greedy longest-match segmenter over a supplied vocabulary (single
characters as fallback); English glosses get a lowercasing word splitter.
"""

from __future__ import annotations

import re
from pathlib import Path

_WORD_RE = re.compile(r"[A-Za-z0-9_']+")

# Small built-in lists; pass your own for serious runs.
CHINESE_STOPWORDS = frozenset(
    "的 了 在 是 我 你 他 她 它 们 我们 你们 他们 这 那 和 与 或 都 被 把 就 也 很 而 于 对 向 等 着 过 吗 呢 啊 之 其 已经".split()
)
ENGLISH_STOPWORDS = frozenset(
    "a an the of or and to in on for with by at as is are was were be been"
    " being that this those these it its from into s".split()
)


def simple_tokens(text: str) -> list[str]:
    """Lowercased word tokens; fine for English glosses."""
    return [m.group(0).lower() for m in _WORD_RE.finditer(text)]


def whitespace_tokens(text: str) -> list[str]:
    """Split on whitespace; for pre-segmented corpora."""
    return text.split()


class GreedyTokenizer:
    """Longest-match segmentation against a vocabulary, per character fallback."""

    def __init__(self, vocabulary, max_token_len: int | None = None):
        self.vocabulary = set(vocabulary)
        if max_token_len is None:
            max_token_len = max((len(t) for t in self.vocabulary), default=1)
        self.max_token_len = max(1, max_token_len)

    def __call__(self, text: str) -> list[str]:
        tokens = []
        i = 0
        while i < len(text):
            if text[i].isspace():
                i += 1
                continue
            for length in range(min(self.max_token_len, len(text) - i), 0, -1):
                piece = text[i : i + length]
                if length == 1 or piece in self.vocabulary:
                    tokens.append(piece)
                    i += length
                    break
        return tokens


def remove_stopwords(tokens, stoplist) -> list[str]:
    stops = set(stoplist)
    return [t for t in tokens if t not in stops]


def load_stoplist(path) -> frozenset[str]:
    """One stopword per line, UTF-8; blank lines and # comments skipped."""
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        word = line.strip()
        if word and not word.startswith("#"):
            words.add(word)
    return frozenset(words)
