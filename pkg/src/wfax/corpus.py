"""Corpus handling: alphabet construction, tokenization, embeddings, synonyms.

The alphabet assigns every token a frequency rank (1 = most frequent),
which downstream modules use both for augmentation probabilities and for
deterministic tie-breaking.
"""

from __future__ import annotations

import logging
import string
from dataclasses import dataclass, field

import numpy as np

logger = logging.getLogger(__name__)

UNK = "<unk>"


@dataclass(frozen=True)
class Sentence:
    """A tokenized sentence with an optional class label."""

    words: tuple[str, ...]
    label: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "words", tuple(self.words))

    def __len__(self) -> int:
        return len(self.words)


@dataclass
class Alphabet:
    """Token inventory of a corpus with occurrence counts and frequency ranks.

    Ranks are a bijection onto 1..len(tokens): descending by count, ties
    broken by first occurrence in the corpus.
    """

    tokens: list[str]
    counts: dict[str, int]
    freq_rank: dict[str, int]

    def __contains__(self, token: str) -> bool:
        return token in self.counts

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def total_words(self) -> int:
        return sum(self.counts.values())

    def rank(self, token: str) -> int:
        return self.freq_rank[token]


def build_alphabet(sentences) -> Alphabet:
    """Count token occurrences and assign frequency ranks.

    Rank 1 is the most frequent token; equal counts are ordered by first
    occurrence so the ranking is reproducible.
    """
    sentences = list(sentences)
    if not sentences:
        raise ValueError("empty corpus")
    counts: dict[str, int] = {}
    first_seen: dict[str, int] = {}
    pos = 0
    for s in sentences:
        for w in s.words:
            counts[w] = counts.get(w, 0) + 1
            if w not in first_seen:
                first_seen[w] = pos
            pos += 1
    ordered = sorted(counts, key=lambda t: (-counts[t], first_seen[t]))
    freq_rank = {t: i + 1 for i, t in enumerate(ordered)}
    return Alphabet(tokens=ordered, counts=counts, freq_rank=freq_rank)


@dataclass
class EmbeddingTable:
    """Token -> vector map with a uniform dimension."""

    dim: int
    vectors: dict[str, np.ndarray]
    skipped: list[str] = field(default_factory=list)

    def __contains__(self, token: str) -> bool:
        return token in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)


def load_embeddings(path, alphabet: Alphabet) -> EmbeddingTable:
    """Parse a GloVe-style text embedding file restricted to the alphabet.

    One token per line: ``token v1 v2 ... vd``.  Alphabet tokens missing
    from the file are collected in the table's skip report; duplicate
    lines keep the last occurrence (with a warning).
    """
    vectors: dict[str, np.ndarray] = {}
    dim: int | None = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split(" ")
            if len(parts) < 2:
                raise ValueError(f"malformed embedding line {lineno}: {line!r}")
            token = parts[0]
            try:
                vec = np.array([float(x) for x in parts[1:]], dtype=np.float64)
            except ValueError as exc:
                raise ValueError(f"malformed embedding line {lineno}: {exc}") from exc
            if dim is None:
                dim = vec.size
            elif vec.size != dim:
                raise ValueError(
                    f"inconsistent embedding dimension at line {lineno}: "
                    f"expected {dim}, got {vec.size}"
                )
            if token not in alphabet:
                continue
            if token in vectors:
                logger.warning("duplicate embedding for %r; keeping last", token)
            vectors[token] = vec
    if dim is None:
        raise ValueError("embedding file is empty")
    skipped = [t for t in alphabet.tokens if t not in vectors]
    return EmbeddingTable(dim=dim, vectors=vectors, skipped=skipped)


def synonyms(table: EmbeddingTable, token: str, k: int,
             alphabet: Alphabet | None = None) -> list[str]:
    """Return the k nearest tokens to `token` in embedding space.

    Euclidean distance, ascending; the query token itself is excluded.
    Exact distance ties are broken by alphabet frequency rank when an
    alphabet is given, otherwise by table insertion order.
    """
    if token not in table:
        raise KeyError(f"no embedding for token {token!r}")
    if k < 1:
        raise ValueError("k must be >= 1")
    query = table.vectors[token]
    others = [t for t in table.vectors if t != token]
    if k > len(others):
        raise ValueError(f"k={k} exceeds available vocabulary ({len(others)})")
    mat = np.stack([table.vectors[t] for t in others])
    dists = np.linalg.norm(mat - query, axis=1)
    if alphabet is not None:
        tie = [alphabet.freq_rank.get(t, len(alphabet) + 1) for t in others]
    else:
        tie = list(range(len(others)))
    order = sorted(range(len(others)), key=lambda i: (dists[i], tie[i]))
    return [others[i] for i in order[:k]]


_PUNCT = string.punctuation


def tokenize(text: str) -> list[str]:
    """Whitespace tokenization with lowercasing and boundary punctuation strip."""
    out = []
    for raw in text.lower().split():
        w = raw.strip(_PUNCT)
        if w:
            out.append(w)
    return out


def read_corpus(path) -> list[Sentence]:
    """Read a corpus file: one sentence per line, ``<label><TAB><tok tok ...>``."""
    sentences = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            try:
                label_str, text = line.split("\t", 1)
                label = int(label_str)
            except ValueError as exc:
                raise ValueError(f"malformed corpus line {lineno}: {line!r}") from exc
            if label < 0:
                raise ValueError(f"negative label at line {lineno}")
            words = text.split()
            if not words:
                raise ValueError(f"empty sentence at line {lineno}")
            sentences.append(Sentence(words=tuple(words), label=label))
    return sentences


def write_corpus(path, sentences) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for s in sentences:
            label = 0 if s.label is None else s.label
            fh.write(f"{label}\t{' '.join(s.words)}\n")
