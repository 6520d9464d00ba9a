"""Sentence-level passage indexing and centroid-distance ranking.

Each document is split into sentences; each sentence becomes a passage
carrying two precomputed centroids (uniform and document-idf weighted).
Ranking compares the question centroid against the matching passage
centroid under one of three schemes:

* ``cd``      uniform question centroid vs uniform passage centroid
* ``cd-idf``  document-idf question centroid vs idf passage centroid
* ``cd-q``    question-corpus-idf question centroid vs idf passage centroid

plus a seeded random baseline (``rnd``). Output order is total: ascending
distance, ties broken by ascending passage id.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import IO, Iterable, Sequence

import numpy as np

from .embeddings import EmbeddingTable
from .idf import IdfTable
from .semantic import SemanticVector, centroid, cosine_distance
from .text import split_sentences, tokenize


class Method(str, Enum):
    CD = "cd"
    CD_IDF = "cd-idf"
    CD_Q = "cd-q"
    RND = "rnd"


@dataclass
class Passage:
    """One indexed sentence with its precomputed centroids."""

    passage_id: str
    doc_id: str
    text: str
    uniform_centroid: SemanticVector
    idf_centroid: SemanticVector


@dataclass
class PassageIndex:
    """Immutable sentence index; passages are kept sorted by passage id."""

    dim: int
    passages: list[Passage] = field(default_factory=list)
    doc_index: dict[str, list[str]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self._by_id = {p.passage_id: p for p in self.passages}

    def get(self, passage_id: str) -> Passage | None:
        return self._by_id.get(passage_id)

    def __len__(self) -> int:
        return len(self.passages)


@dataclass
class RankedList:
    """Top-k retrieval result: (passage_id, distance) pairs in rank order."""

    question_id: str
    method: Method
    items: list[tuple[str, float]] = field(default_factory=list)


def build_index(
    documents: Iterable[tuple[str, str]],
    embeddings: EmbeddingTable,
    doc_idf: IdfTable,
) -> PassageIndex:
    """Sentence-split documents and precompute both centroids per passage.

    Passage ids are ``<doc_id>#<sentence_ordinal>``. Duplicate document ids
    raise ValueError.
    """
    passages: list[Passage] = []
    doc_index: dict[str, list[str]] = {}
    for doc_id, text in documents:
        if doc_id in doc_index:
            raise ValueError(f"duplicate doc_id {doc_id!r}")
        doc_index[doc_id] = []
        for ordinal, (sentence, _offset) in enumerate(split_sentences(text)):
            tokens = tokenize(sentence)
            passage = Passage(
                passage_id=f"{doc_id}#{ordinal}",
                doc_id=doc_id,
                text=sentence,
                uniform_centroid=centroid(tokens, embeddings),
                idf_centroid=centroid(tokens, embeddings, doc_idf),
            )
            passages.append(passage)
            doc_index[doc_id].append(passage.passage_id)
    passages.sort(key=lambda p: p.passage_id)
    return PassageIndex(dim=embeddings.dim, passages=passages, doc_index=doc_index)


def _candidate_passages(
    index: PassageIndex, candidate_docs: set[str] | None
) -> list[Passage]:
    if candidate_docs is None:
        return index.passages
    unknown = sorted(d for d in candidate_docs if d not in index.doc_index)
    if unknown:
        raise ValueError(f"unknown doc_id(s) in candidate set: {', '.join(unknown)}")
    return [p for p in index.passages if p.doc_id in candidate_docs]


def rank(
    index: PassageIndex,
    question: Sequence[str],
    method: Method | str,
    k: int,
    embeddings: EmbeddingTable,
    doc_idf: IdfTable | None = None,
    question_idf: IdfTable | None = None,
    candidate_docs: set[str] | None = None,
    question_id: str = "",
) -> RankedList:
    """Score candidate passages against the question and return the top k.

    The question centroid follows the method (uniform for ``cd``, document
    idf for ``cd-idf``, question idf for ``cd-q``); the passage side uses
    the uniform centroid for ``cd`` and the idf centroid otherwise. When
    ``candidate_docs`` is given, only passages from those documents are
    scored; unknown ids raise ValueError.
    """
    method = Method(method)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if method is Method.CD:
        question_vec = centroid(question, embeddings)
    elif method is Method.CD_IDF:
        if doc_idf is None:
            raise ValueError("cd-idf requires a document idf table")
        question_vec = centroid(question, embeddings, doc_idf)
    elif method is Method.CD_Q:
        if question_idf is None:
            raise ValueError("cd-q requires a question idf table")
        question_vec = centroid(question, embeddings, question_idf)
    else:
        raise ValueError("rnd has no distance ranking; use random_baseline()")

    use_uniform = method is Method.CD
    scored = []
    for passage in _candidate_passages(index, candidate_docs):
        passage_vec = passage.uniform_centroid if use_uniform else passage.idf_centroid
        distance = cosine_distance(question_vec, passage_vec)
        scored.append((distance, passage.passage_id))
    scored.sort()
    return RankedList(
        question_id=question_id,
        method=method,
        items=[(pid, dist) for dist, pid in scored[:k]],
    )


def random_baseline(
    index: PassageIndex,
    candidate_docs: set[str] | None,
    k: int,
    seed: int,
    question_id: str = "",
) -> RankedList:
    """Draw k distinct candidate passages uniformly, deterministic in seed.

    Scores are recorded as 0.0; the selection is reported in passage-id
    order (the tie rule for equal scores). Raises ValueError when the
    candidate set is empty or k < 1.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    candidates = _candidate_passages(index, candidate_docs)
    if not candidates:
        raise ValueError("empty candidate set")
    rng = random.Random(seed)
    chosen = rng.sample([p.passage_id for p in candidates], min(k, len(candidates)))
    return RankedList(
        question_id=question_id,
        method=Method.RND,
        items=[(pid, 0.0) for pid in sorted(chosen)],
    )


_ESCAPES = [("\\", "\\\\"), ("\t", "\\t"), ("\n", "\\n")]


def _escape(text: str) -> str:
    for raw, escaped in _ESCAPES:
        text = text.replace(raw, escaped)
    return text


def _unescape(text: str) -> str:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\\" and i + 1 < len(text):
            nxt = text[i + 1]
            if nxt == "\\":
                out.append("\\")
            elif nxt == "t":
                out.append("\t")
            elif nxt == "n":
                out.append("\n")
            else:
                out.append(ch)
                out.append(nxt)
            i += 2
            continue
        out.append(ch)
        i += 1
    return "".join(out)


def _format_components(vec: SemanticVector) -> str:
    return ",".join(repr(float(c)) for c in vec.components)


def save_index(index: PassageIndex, sink) -> None:
    """Write '#dim <d>' then one tab-separated line per passage."""
    if hasattr(sink, "write"):
        _write_index(index, sink)
    else:
        with open(sink, "w", encoding="utf-8") as handle:
            _write_index(index, handle)


def _write_index(index: PassageIndex, handle: IO[str]) -> None:
    handle.write(f"#dim {index.dim}\n")
    for p in index.passages:
        handle.write(
            "\t".join(
                (
                    p.passage_id,
                    p.doc_id,
                    _escape(p.text),
                    _format_components(p.uniform_centroid),
                    _format_components(p.idf_centroid),
                )
            )
            + "\n"
        )


def _parse_components(text: str, dim: int, line_no: int) -> np.ndarray:
    try:
        values = np.array([float(v) for v in text.split(",")], dtype=np.float64)
    except ValueError:
        raise ValueError(f"line {line_no}: malformed centroid components") from None
    if values.shape != (dim,):
        raise ValueError(f"line {line_no}: expected {dim} components, got {len(values)}")
    values.flags.writeable = False
    return values


def _restore_centroid(components: np.ndarray, text: str) -> SemanticVector:
    # Coverage counts are not persisted; a reloaded centroid only records
    # whether anything was covered at all.
    total = len(tokenize(text))
    covered = 0 if not np.any(components) else total
    return SemanticVector(components=components, covered_tokens=covered, total_tokens=total)


def load_index(source) -> PassageIndex:
    """Parse an index written by :func:`save_index`."""
    if hasattr(source, "read"):
        lines = list(source)
    else:
        with open(source, "r", encoding="utf-8") as handle:
            lines = list(handle)
    if not lines:
        raise ValueError("empty index stream")
    header = lines[0].rstrip("\n")
    parts = header.split(" ")
    if len(parts) != 2 or parts[0] != "#dim":
        raise ValueError(f"line 1: expected '#dim <d>', got {header!r}")
    try:
        dim = int(parts[1])
    except ValueError:
        raise ValueError(f"line 1: malformed dimension {parts[1]!r}") from None

    passages: list[Passage] = []
    doc_index: dict[str, list[str]] = {}
    for line_no, raw_line in enumerate(lines[1:], start=2):
        line = raw_line.rstrip("\n")
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != 5:
            raise ValueError(f"line {line_no}: expected 5 tab-separated fields")
        passage_id, doc_id, escaped_text, uniform_text, idf_text = fields
        text = _unescape(escaped_text)
        passage = Passage(
            passage_id=passage_id,
            doc_id=doc_id,
            text=text,
            uniform_centroid=_restore_centroid(
                _parse_components(uniform_text, dim, line_no), text
            ),
            idf_centroid=_restore_centroid(
                _parse_components(idf_text, dim, line_no), text
            ),
        )
        passages.append(passage)
        doc_index.setdefault(doc_id, []).append(passage_id)
    passages.sort(key=lambda p: p.passage_id)
    return PassageIndex(dim=dim, passages=passages, doc_index=doc_index)
