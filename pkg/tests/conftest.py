import json
from pathlib import Path

import pytest

from zhwn.embeddings import EmbeddingTable, Projection2D
from zhwn.lexicon import BilingualLexicon, CandidateLemma
from zhwn.store import load_db
from zhwn.synsets import SynsetId

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def toy_db():
    return load_db(FIXTURES / "wn_toy")


@pytest.fixture()
def fig2():
    """The shipped 4-candidate screening geometry for 08272961-n."""
    payload = json.loads((FIXTURES / "fig2_points.json").read_text(encoding="utf-8"))
    projection = Projection2D.from_points(payload["points"])
    return SynsetId.parse(payload["synset"]), projection, payload["threshold"]


def make_lexicon(entries, version="3.0", label="test") -> BilingualLexicon:
    """entries: iterable of (synset-id string, chinese text[, status])."""
    lex = BilingualLexicon(version, label)
    for entry in entries:
        sid, text = entry[0], entry[1]
        status = entry[2] if len(entry) > 2 else "proposed"
        lex.add(CandidateLemma(SynsetId.parse(sid), text, "test", status))
    return lex


def make_table(vectors: dict) -> EmbeddingTable:
    dim = len(next(iter(vectors.values())))
    table = EmbeddingTable(dim)
    for token, vector in vectors.items():
        table.put(token, vector)
    return table
