"""Black-box teacher models and output-trace IO.

A teacher is anything that yields, for each sentence, one probability
vector over labels per prefix.  The built-in synthetic teacher is a
hidden-state belief machine: the belief over h hidden states is pushed
through a per-token row-stochastic matrix at every step and read out
through an emission matrix.  Traces are exchanged as JSON Lines; that
file format is the only boundary the extractor ever sees.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .corpus import UNK, Alphabet, Sentence

ROW_SUM_TOL = 1e-4


@dataclass
class Trace:
    """Per-prefix probabilistic outputs of a teacher for one sentence."""

    sentence: Sentence
    outputs: np.ndarray  # (len(sentence), m)

    def __post_init__(self):
        self.outputs = np.asarray(self.outputs, dtype=np.float64)
        if self.outputs.ndim != 2 or self.outputs.shape[0] != len(self.sentence):
            raise ValueError("trace must have one output row per word")


@dataclass
class SyntheticTeacher:
    """Hidden-state belief machine standing in for a trained network."""

    start: np.ndarray                 # (h,)
    trans: dict[str, np.ndarray]      # token -> (h, h) row-stochastic
    emit: np.ndarray                  # (h, m) row-stochastic

    def __post_init__(self):
        self.start = np.asarray(self.start, dtype=np.float64)
        self.emit = np.asarray(self.emit, dtype=np.float64)
        _check_stochastic(self.start[None, :], "start")
        _check_stochastic(self.emit, "emit")
        for tok, mat in self.trans.items():
            self.trans[tok] = np.asarray(mat, dtype=np.float64)
            _check_stochastic(self.trans[tok], f"trans[{tok}]")

    @property
    def n_hidden(self) -> int:
        return self.start.size

    @property
    def n_labels(self) -> int:
        return self.emit.shape[1]


def _check_stochastic(mat: np.ndarray, name: str, tol: float = 1e-9) -> None:
    if np.any(mat < 0):
        raise ValueError(f"{name} has negative entries")
    if not np.allclose(mat.sum(axis=1), 1.0, atol=tol):
        raise ValueError(f"{name} rows must sum to 1")


def run_trace(teacher: SyntheticTeacher, s: Sentence) -> Trace:
    """Propagate the belief state through `s` and record per-prefix outputs."""
    belief = teacher.start.copy()
    outputs = np.empty((len(s), teacher.n_labels))
    for i, w in enumerate(s.words):
        mat = teacher.trans.get(w)
        if mat is None:
            mat = teacher.trans.get(UNK)
        if mat is None:
            raise KeyError(f"teacher has no transition matrix for {w!r}")
        belief = belief @ mat
        belief /= belief.sum()
        outputs[i] = belief @ teacher.emit
    return Trace(sentence=s, outputs=outputs)


def teacher_predict(teacher: SyntheticTeacher, s: Sentence) -> int:
    """Label = argmax of the final prefix output; ties go to the lowest index."""
    return int(np.argmax(run_trace(teacher, s).outputs[-1]))


def sample_teacher(alphabet: Alphabet, h: int, m: int, seed: int,
                   include_unk: bool = True) -> SyntheticTeacher:
    """Draw a random teacher with Dirichlet(0.5) rows, deterministically."""
    if h < 1:
        raise ValueError("h must be >= 1")
    if m < 2:
        raise ValueError("m must be >= 2")
    rng = np.random.default_rng(seed)
    conc = np.full(h, 0.5)
    start = rng.dirichlet(conc)
    tokens = list(alphabet.tokens)
    if include_unk and UNK not in tokens:
        tokens.append(UNK)
    trans = {tok: rng.dirichlet(conc, size=h) for tok in tokens}
    emit = rng.dirichlet(np.full(m, 0.5), size=h)
    return SyntheticTeacher(start=start, trans=trans, emit=emit)


def save_teacher(path, teacher: SyntheticTeacher) -> None:
    doc = {
        "start": teacher.start.tolist(),
        "emit": teacher.emit.tolist(),
        "trans": {tok: mat.tolist() for tok, mat in teacher.trans.items()},
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)


def load_teacher(path) -> SyntheticTeacher:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return SyntheticTeacher(
        start=np.array(doc["start"]),
        trans={tok: np.array(mat) for tok, mat in doc["trans"].items()},
        emit=np.array(doc["emit"]),
    )


def write_traces(path, traces) -> None:
    """Write traces as JSON Lines: {"tokens": [...], "label": int, "outputs": [[...]]}."""
    with open(path, "w", encoding="utf-8") as fh:
        for t in traces:
            rec = {
                "tokens": list(t.sentence.words),
                "label": t.sentence.label,
                "outputs": t.outputs.tolist(),
            }
            fh.write(json.dumps(rec) + "\n")


def read_traces(path) -> list[Trace]:
    """Read and validate a trace file; raises with the offending record index."""
    traces = []
    with open(path, encoding="utf-8") as fh:
        for idx, line in enumerate(fh):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"record {idx}: invalid JSON: {exc}") from exc
            traces.append(_parse_record(rec, idx))
    return traces


def _parse_record(rec: dict, idx: int) -> Trace:
    for key in ("tokens", "outputs"):
        if key not in rec:
            raise ValueError(f"record {idx}: missing field {key!r}")
    tokens = rec["tokens"]
    outputs = np.asarray(rec["outputs"], dtype=np.float64)
    if not tokens or not all(isinstance(t, str) and t for t in tokens):
        raise ValueError(f"record {idx}: tokens must be non-empty strings")
    if outputs.ndim != 2 or outputs.shape[0] != len(tokens):
        raise ValueError(
            f"record {idx}: outputs length {outputs.shape[0] if outputs.ndim else 0} "
            f"!= token count {len(tokens)}")
    if np.any(outputs < 0):
        raise ValueError(f"record {idx}: negative probability")
    sums = outputs.sum(axis=1)
    bad = np.nonzero(np.abs(sums - 1.0) > ROW_SUM_TOL)[0]
    if bad.size:
        raise ValueError(
            f"record {idx}: output row {bad[0]} sums to {sums[bad[0]]:.6f}, not 1")
    label = rec.get("label")
    if label is not None and (not isinstance(label, int) or label < 0):
        raise ValueError(f"record {idx}: label must be a non-negative integer")
    sent = Sentence(words=tuple(tokens), label=label)
    return Trace(sentence=sent, outputs=outputs)
