"""Transition matrix construction and model assembly.

Observed rows are count frequencies.  Rows never observed (missing rows)
are filled per strategy: `empirical` imitates other states' behavior
with softmin distance weights at reference rate beta, keeping still with
the remainder; `uniform` spreads mass evenly; `null` leaves the row at
zero.  Every matrix is then blended toward the identity with the static
probability alpha, which lets the automaton carry context forward.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .abstraction import AbstractStateSet, fit_states, trace_to_transitions
from .corpus import UNK

MODEL_FORMAT_VERSION = "1"

FILL_STRATEGIES = ("empirical", "uniform", "null")


@dataclass
class BuildConfig:
    beta: float = 0.3
    alpha: float = 0.2
    fill_strategy: str = "empirical"

    def __post_init__(self):
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError("beta must be in [0, 1]")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must be in [0, 1]")
        if self.fill_strategy not in FILL_STRATEGIES:
            raise ValueError(f"unknown fill strategy {self.fill_strategy!r}")


def count_transitions(transitions, k: int) -> dict[str, np.ndarray]:
    """Accumulate (from, token, to) triples into per-token count matrices."""
    counts: dict[str, np.ndarray] = {}
    for src, tok, dst in transitions:
        if not (0 <= src <= k and 0 <= dst <= k):
            raise ValueError(f"state index out of range in ({src}, {tok!r}, {dst})")
        mat = counts.get(tok)
        if mat is None:
            mat = counts[tok] = np.zeros((k + 1, k + 1), dtype=np.int64)
        mat[src, dst] += 1
    return counts


def build_transition_matrix(count: np.ndarray, distance: np.ndarray,
                            cfg: BuildConfig) -> np.ndarray:
    """Turn one token's count matrix into a transition matrix.

    Rows with observed transitions become count frequencies; missing
    rows follow the configured fill strategy.  With empirical fill and a
    token that was never observed at all, every row degenerates to the
    identity row (keep still with probability 1).
    """
    count = np.asarray(count, dtype=np.float64)
    n = count.shape[0]
    row_sums = count.sum(axis=1)
    out = np.zeros((n, n))
    observed = row_sums > 0
    out[observed] = count[observed] / row_sums[observed, None]

    missing = ~observed
    if not np.any(missing):
        return out
    if cfg.fill_strategy == "null":
        return out
    if cfg.fill_strategy == "uniform":
        out[missing] = 1.0 / n
        return out

    # empirical fill; shift distances per-row before exponentiating so the
    # result is exactly invariant under a constant offset of the matrix
    for i in np.nonzero(missing)[0]:
        w = np.exp(-(distance[i] - distance[i].min()))
        ref = w @ count
        total = ref.sum()
        if total == 0.0:
            out[i, i] = 1.0
        else:
            out[i] = cfg.beta * ref / total
            out[i, i] += 1.0 - cfg.beta
    return out


def enhance_context(matrix: np.ndarray, alpha: float) -> np.ndarray:
    """Blend a transition matrix toward the identity with weight alpha."""
    n = matrix.shape[0]
    return alpha * np.eye(n) + (1.0 - alpha) * matrix


@dataclass
class Wfa:
    """Extracted weighted automaton over the trace alphabet plus `<unk>`."""

    states: AbstractStateSet
    matrices: dict[str, np.ndarray]   # token -> (k+1, k+1)
    initial: np.ndarray               # (k+1,), one-hot at the start state
    config: BuildConfig
    token_counts: dict[str, int] = field(default_factory=dict)
    missing_rows: dict[str, int] = field(default_factory=dict)

    @property
    def k(self) -> int:
        return self.states.n_clusters

    @property
    def n_labels(self) -> int:
        return self.states.n_labels

    @property
    def final(self) -> np.ndarray:
        """Final matrix: row i is the center of state i."""
        return self.states.centers

    def matrix_for(self, token: str) -> np.ndarray:
        """Transition matrix for a token, falling back to `<unk>`."""
        mat = self.matrices.get(token)
        return mat if mat is not None else self.matrices[UNK]


def build_wfa(traces, k: int, cfg: BuildConfig, seed: int = 0,
              states: AbstractStateSet | None = None) -> Wfa:
    """Run the full extraction: cluster, count, fill, enhance, assemble.

    A pre-fitted state set may be supplied to share clustering across
    several build configurations.
    """
    traces = list(traces)
    if not traces:
        raise ValueError("no traces to build from")
    if states is None:
        all_outputs = np.concatenate([t.outputs for t in traces], axis=0)
        states = fit_states(all_outputs, k, seed)

    triples = []
    for t in traces:
        triples.extend(trace_to_transitions(states, t))
    counts = count_transitions(triples, states.n_clusters)

    token_counts = {tok: int(mat.sum()) for tok, mat in counts.items()}
    zero = np.zeros((states.n_clusters + 1, states.n_clusters + 1), dtype=np.int64)
    if UNK not in counts:
        counts[UNK] = zero
        token_counts[UNK] = 0

    matrices = {}
    missing_rows = {}
    for tok, cmat in counts.items():
        missing_rows[tok] = int(np.sum(cmat.sum(axis=1) == 0))
        e = build_transition_matrix(cmat, states.distance, cfg)
        matrices[tok] = enhance_context(e, cfg.alpha)

    initial = np.zeros(states.n_clusters + 1)
    initial[0] = 1.0
    return Wfa(states=states, matrices=matrices, initial=initial, config=cfg,
               token_counts=token_counts, missing_rows=missing_rows)


def save_model(path, model: Wfa) -> None:
    """Serialize a model to a single JSON document."""
    tokens = sorted(model.matrices)
    doc = {
        "version": MODEL_FORMAT_VERSION,
        "k": model.k,
        "m": model.n_labels,
        "alpha": model.config.alpha,
        "beta": model.config.beta,
        "fill_strategy": model.config.fill_strategy,
        "centers": model.states.centers.tolist(),
        "centroids": model.states.centroids.tolist(),
        "cluster_sizes": model.states.cluster_sizes.tolist(),
        "alphabet": {tok: i for i, tok in enumerate(tokens)},
        "matrices": {tok: model.matrices[tok].ravel().tolist() for tok in tokens},
        "initial": model.initial.tolist(),
        "token_counts": model.token_counts,
        "missing_rows": model.missing_rows,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)


def load_model(path) -> Wfa:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("version") != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model version {doc.get('version')!r}")
    k = doc["k"]
    centers = np.array(doc["centers"])
    centroids = np.array(doc["centroids"])
    diff = centers[:, None, :] - centers[None, :, :]
    distance = np.sqrt(np.sum(diff ** 2, axis=2))
    np.fill_diagonal(distance, 0.0)
    states = AbstractStateSet(
        n_clusters=k, centroids=centroids, centers=centers, distance=distance,
        cluster_sizes=np.array(doc["cluster_sizes"], dtype=np.int64))
    cfg = BuildConfig(beta=doc["beta"], alpha=doc["alpha"],
                      fill_strategy=doc["fill_strategy"])
    matrices = {tok: np.array(flat).reshape(k + 1, k + 1)
                for tok, flat in doc["matrices"].items()}
    return Wfa(states=states, matrices=matrices,
               initial=np.array(doc["initial"]), config=cfg,
               token_counts=dict(doc.get("token_counts", {})),
               missing_rows=dict(doc.get("missing_rows", {})))
