"""Data augmentation: frequency-weighted synonym replacement and dropout.

Each original sentence yields `epochs` additional variants.  Per word, the
synonym stage fires first with probability 1/(rank+1); words it leaves
untouched are dropped to `<unk>` with probability `dropout_prob`.  A word
is never both replaced and dropped.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import UNK, Alphabet, EmbeddingTable, Sentence, synonyms


@dataclass
class AugmentConfig:
    epochs: int = 2
    synonym_k: int = 5
    dropout_prob: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if self.synonym_k < 1:
            raise ValueError("synonym_k must be >= 1")
        if not 0.0 <= self.dropout_prob <= 1.0:
            raise ValueError("dropout_prob must be in [0, 1]")


def replace_probability(rank: int) -> float:
    """Probability that the token of frequency rank `rank` gets replaced."""
    if rank < 1:
        raise ValueError("rank must be >= 1")
    return 1.0 / (rank + 1)


def _synonym_cache(alphabet: Alphabet, table: EmbeddingTable | None, k: int):
    cache: dict[str, list[str]] = {}

    def lookup(token: str) -> list[str]:
        if token not in cache:
            if table is None or token not in table or len(table) < 2:
                cache[token] = []
            else:
                kk = min(k, len(table) - 1)
                cache[token] = synonyms(table, token, kk, alphabet)
        return cache[token]

    return lookup


def augment_sentence(s: Sentence, alphabet: Alphabet,
                     table: EmbeddingTable | None, cfg: AugmentConfig,
                     rng: np.random.Generator,
                     _lookup=None) -> Sentence:
    """Generate one augmented variant of `s` (same length, same label)."""
    if len(s) == 0:
        raise ValueError("cannot augment an empty sentence")
    if _lookup is None:
        _lookup = _synonym_cache(alphabet, table, cfg.synonym_k)
    out = []
    for w in s.words:
        cands = _lookup(w) if w in alphabet else []
        if cands and rng.random() < replace_probability(alphabet.rank(w)):
            out.append(cands[rng.integers(len(cands))])
        elif rng.random() < cfg.dropout_prob:
            out.append(UNK)
        else:
            out.append(w)
    return Sentence(words=tuple(out), label=s.label)


def augment_dataset(d0, alphabet: Alphabet, table: EmbeddingTable | None,
                    cfg: AugmentConfig) -> list[Sentence]:
    """Return the originals followed by `epochs` variants of each sentence.

    |result| = (epochs + 1) * |d0|.  Each variant's random stream is
    derived from (seed, epoch, sentence index), so results do not depend
    on iteration schedule.
    """
    d0 = list(d0)
    out = list(d0)
    lookup = _synonym_cache(alphabet, table, cfg.synonym_k)
    for epoch in range(cfg.epochs):
        for i, s in enumerate(d0):
            rng = np.random.default_rng(
                np.random.SeedSequence(entropy=cfg.seed, spawn_key=(epoch, i)))
            out.append(augment_sentence(s, alphabet, table, cfg, rng, lookup))
    return out
