"""Inverse-document-frequency tables.

A table is built from one corpus and carries a provenance label; the
retrieval pipeline keeps two of them, one over the document collection and
one over a question collection, because the two word distributions differ
sharply (question words are ubiquitous in questions but rare in prose).

Weights use the smoothed form ln((N + 1) / (df + 1)), which is finite and
non-negative for every token, including unseen ones (df = 0).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence, Union

PathOrIO = Union[str, os.PathLike, IO[str]]


@dataclass
class IdfTable:
    """Document-frequency statistics for one corpus."""

    n_docs: int
    df: dict[str, int] = field(default_factory=dict)
    corpus_label: str = ""

    def __post_init__(self) -> None:
        if self.n_docs < 1:
            raise ValueError(f"n_docs must be >= 1, got {self.n_docs}")
        for token, count in self.df.items():
            if not 1 <= count <= self.n_docs:
                raise ValueError(
                    f"df[{token!r}] = {count} outside [1, {self.n_docs}]"
                )

    def weight(self, token: str) -> float:
        """ln((n_docs + 1) / (df + 1)); unseen tokens use df = 0."""
        return math.log((self.n_docs + 1) / (self.df.get(token, 0) + 1))


def build_idf(corpus: Iterable[Sequence[str]], label: str = "") -> IdfTable:
    """Count document frequencies over an iterable of token sequences.

    Each sequence is one corpus unit; a token is counted once per unit it
    appears in. Raises ValueError on an empty corpus.
    """
    df: dict[str, int] = {}
    n_docs = 0
    for unit in corpus:
        n_docs += 1
        for token in set(unit):
            df[token] = df.get(token, 0) + 1
    if n_docs == 0:
        raise ValueError("cannot build an idf table from an empty corpus")
    return IdfTable(n_docs=n_docs, df=df, corpus_label=label)


def idf_weight(table: IdfTable, token: str) -> float:
    return table.weight(token)


def save_idf(table: IdfTable, sink: PathOrIO) -> None:
    """Write a table as '#n_docs <N> <label>' plus token<TAB>df lines."""
    if hasattr(sink, "write"):
        _write_idf(table, sink)  # type: ignore[arg-type]
    else:
        with open(sink, "w", encoding="utf-8") as handle:
            _write_idf(table, handle)


def _write_idf(table: IdfTable, handle: IO[str]) -> None:
    label = table.corpus_label
    if "\t" in label or "\n" in label:
        raise ValueError("corpus_label must not contain tabs or newlines")
    handle.write(f"#n_docs {table.n_docs} {label}\n")
    for token in sorted(table.df):
        if "\t" in token or "\n" in token:
            raise ValueError(f"token {token!r} contains tab or newline")
        handle.write(f"{token}\t{table.df[token]}\n")


def load_idf(source: PathOrIO) -> IdfTable:
    """Parse a table written by :func:`save_idf`.

    Raises ValueError naming the line for malformed rows or counts that
    violate 1 <= df <= n_docs.
    """
    if hasattr(source, "read"):
        lines = list(source)  # type: ignore[arg-type]
    else:
        with open(source, "r", encoding="utf-8") as handle:
            lines = list(handle)

    if not lines:
        raise ValueError("empty idf stream")
    header = lines[0].rstrip("\n")
    parts = header.split(" ", 2)
    if len(parts) < 2 or parts[0] != "#n_docs":
        raise ValueError(f"line 1: expected '#n_docs <N> <label>', got {header!r}")
    try:
        n_docs = int(parts[1])
    except ValueError:
        raise ValueError(f"line 1: malformed document count {parts[1]!r}") from None
    label = parts[2] if len(parts) == 3 else ""

    df: dict[str, int] = {}
    for line_no, raw_line in enumerate(lines[1:], start=2):
        line = raw_line.rstrip("\n")
        if not line:
            continue
        token, sep, count_text = line.partition("\t")
        if not sep or not token:
            raise ValueError(f"line {line_no}: expected '<token>\\t<df>', got {line!r}")
        try:
            count = int(count_text)
        except ValueError:
            raise ValueError(f"line {line_no}: malformed df {count_text!r}") from None
        if not 1 <= count <= n_docs:
            raise ValueError(
                f"line {line_no}: df {count} outside [1, {n_docs}] for {token!r}"
            )
        df[token] = count
    return IdfTable(n_docs=n_docs, df=df, corpus_label=label)
