"""Weighted finite automaton extraction from black-box sequence classifiers."""

__version__ = "0.1.0"

from .abstraction import AbstractStateSet, assign, fit_states, trace_to_transitions
from .augment import AugmentConfig, augment_dataset, augment_sentence, replace_probability
from .builder import (BuildConfig, Wfa, build_transition_matrix, build_wfa,
                      count_transitions, enhance_context, load_model, save_model)
from .corpus import (UNK, Alphabet, EmbeddingTable, Sentence, build_alphabet,
                     load_embeddings, read_corpus, synonyms, tokenize, write_corpus)
from .runtime import (EvalReport, check_context_decay, consistency_rate,
                      estimate_median_transitions, predict, state_trajectory, weight)
from .teacher import (SyntheticTeacher, Trace, load_teacher, read_traces,
                      run_trace, sample_teacher, save_teacher, teacher_predict,
                      write_traces)

__all__ = [
    "UNK", "Alphabet", "EmbeddingTable", "Sentence", "build_alphabet",
    "load_embeddings", "read_corpus", "synonyms", "tokenize", "write_corpus",
    "AugmentConfig", "augment_dataset", "augment_sentence", "replace_probability",
    "SyntheticTeacher", "Trace", "load_teacher", "read_traces", "run_trace",
    "sample_teacher", "save_teacher", "teacher_predict", "write_traces",
    "AbstractStateSet", "assign", "fit_states", "trace_to_transitions",
    "BuildConfig", "Wfa", "build_transition_matrix", "build_wfa",
    "count_transitions", "enhance_context", "load_model", "save_model",
    "EvalReport", "check_context_decay", "consistency_rate",
    "estimate_median_transitions", "predict", "state_trajectory", "weight",
]
