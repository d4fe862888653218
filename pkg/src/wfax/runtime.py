"""Model execution and evaluation.

Weights are computed as repeated vector-matrix products, so a sentence
costs O(|w| * (k+1)^2).  The consistency rate compares the automaton's
argmax label against the teacher's on a test set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .builder import Wfa
from .corpus import Sentence


@dataclass
class EvalReport:
    consistency_rate: float
    n_total: int
    n_agree: int
    confusion: np.ndarray    # (m, m): [teacher label, model label]
    oov_rate: float
    n_degenerate: int = 0    # sentences whose weight vector was all zero

    def to_dict(self) -> dict:
        return {
            "consistency_rate": self.consistency_rate,
            "n_total": self.n_total,
            "n_agree": self.n_agree,
            "confusion": self.confusion.tolist(),
            "oov_rate": self.oov_rate,
            "n_degenerate": self.n_degenerate,
        }


def state_trajectory(model: Wfa, s: Sentence) -> np.ndarray:
    """Distributions over states after each prefix; row 0 is the initial vector."""
    if len(s) == 0:
        raise ValueError("empty sentence")
    traj = np.empty((len(s) + 1, model.k + 1))
    f = model.initial
    traj[0] = f
    for i, w in enumerate(s.words):
        f = f @ model.matrix_for(w)
        traj[i + 1] = f
    return traj


def weight(model: Wfa, s: Sentence) -> np.ndarray:
    """I * E_w1 * ... * E_wn * F, evaluated left to right."""
    if len(s) == 0:
        raise ValueError("empty sentence")
    f = model.initial
    for w in s.words:
        f = f @ model.matrix_for(w)
    return f @ model.final


def predict(model: Wfa, s: Sentence) -> int:
    """Argmax label of the weight vector; ties go to the lowest index."""
    return int(np.argmax(weight(model, s)))


def consistency_rate(model: Wfa, labeled) -> EvalReport:
    """Fraction of sentences where the model's prediction matches the label.

    `labeled` yields (Sentence, teacher label) pairs.  Also reports the
    out-of-vocabulary token rate and how many weight vectors degenerated
    to all zeros (possible under null filling).
    """
    labeled = list(labeled)
    if not labeled:
        raise ValueError("empty test set")
    m = model.n_labels
    confusion = np.zeros((m, m), dtype=np.int64)
    n_agree = 0
    n_tokens = 0
    n_oov = 0
    n_degenerate = 0
    for s, ref in labeled:
        w = weight(model, s)
        if not np.any(w):
            n_degenerate += 1
        pred = int(np.argmax(w))
        confusion[ref, pred] += 1
        if pred == ref:
            n_agree += 1
        n_tokens += len(s)
        n_oov += sum(1 for tok in s.words if tok not in model.matrices)
    return EvalReport(
        consistency_rate=n_agree / len(labeled),
        n_total=len(labeled),
        n_agree=n_agree,
        confusion=confusion,
        oov_rate=n_oov / n_tokens if n_tokens else 0.0,
        n_degenerate=n_degenerate,
    )


def estimate_median_transitions(m: int, n_words: int) -> float:
    """Zipf estimate of the median per-token transition count: 2N/(m ln m)."""
    if m < 2:
        raise ValueError("alphabet size must be >= 2")
    if n_words < 1:
        raise ValueError("total word count must be >= 1")
    return 2.0 * n_words / (m * math.log(m))


def check_context_decay(model: Wfa, s: Sentence) -> float:
    """Verify the geometric context decay identity on one sentence.

    Computes the state distribution recursively through the enhanced
    matrices and independently via the closed form
    (1-a) * sum_k a^(i-k) * M_k + a^i * I, where M_k is the decision of
    the un-enhanced matrix at step k.  Returns the max absolute
    elementwise deviation over all steps.
    """
    if len(s) == 0:
        raise ValueError("empty sentence")
    alpha = model.config.alpha
    n = model.k + 1
    f = model.initial
    decisions: list[np.ndarray] = []
    max_dev = 0.0
    for i, w in enumerate(s.words, start=1):
        enhanced = model.matrix_for(w)
        if alpha == 1.0:
            plain = np.zeros_like(enhanced)  # decision term carries no weight
        else:
            plain = (enhanced - alpha * np.eye(n)) / (1.0 - alpha)
        decisions.append(f @ plain)
        f = f @ enhanced
        closed = (alpha ** i) * model.initial
        if alpha != 1.0:
            for k_step, m_k in enumerate(decisions, start=1):
                closed = closed + (1.0 - alpha) * (alpha ** (i - k_step)) * m_k
        max_dev = max(max_dev, float(np.max(np.abs(f - closed))))
    return max_dev
