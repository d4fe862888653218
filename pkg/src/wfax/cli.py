"""Command-line entry point wiring the extraction pipeline stages.

Stages communicate only through files, so each subcommand can be run
standalone on a previous stage's output.  One master seed governs every
stage through named sub-seeds, which keeps reruns byte-identical.
"""

from __future__ import annotations

import argparse
import configparser
import hashlib
import json
import os
import sys
from dataclasses import dataclass, fields

import numpy as np

from . import __version__
from .abstraction import fit_states
from .augment import AugmentConfig, augment_dataset
from .builder import BuildConfig, build_wfa, load_model, save_model
from .corpus import build_alphabet, load_embeddings, read_corpus, write_corpus
from .runtime import consistency_rate, estimate_median_transitions
from .teacher import (load_teacher, read_traces, run_trace, sample_teacher,
                      write_traces)


def derive_seed(master: int, stage: str) -> int:
    """Stable per-stage sub-seed; adding a stage never perturbs the others."""
    digest = hashlib.sha256(f"{master}:{stage}".encode()).digest()
    return int.from_bytes(digest[:8], "big") % (2 ** 63)


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class PipelineConfig:
    corpus: str = ""
    embeddings: str = ""
    traces: str = "traces.jsonl"
    test_traces: str = ""
    model: str = "model.json"
    report: str = "report.json"
    clusters: int = 10
    alpha: float = 0.2
    beta: float = 0.3
    fill_strategy: str = "empirical"
    epochs: int = 0
    synonym_k: int = 5
    dropout_prob: float = 0.1
    hidden: int = 5
    labels: int = 0
    seed: int = 0


def load_config(path) -> PipelineConfig:
    """Read the [pipeline] section of a key=value config file."""
    parser = configparser.ConfigParser()
    with open(path, encoding="utf-8") as fh:
        parser.read_file(fh)
    if not parser.has_section("pipeline"):
        raise ValueError("config file has no [pipeline] section")
    known = {f.name: f.type for f in fields(PipelineConfig)}
    kwargs = {}
    for key, value in parser.items("pipeline"):
        if key not in known:
            raise ValueError(f"unknown config key {key!r}")
        typ = known[key]
        if typ is int or typ == "int":
            kwargs[key] = int(value)
        elif typ is float or typ == "float":
            kwargs[key] = float(value)
        else:
            kwargs[key] = value
    return PipelineConfig(**kwargs)


def _labels_in(sentences) -> int:
    return max((s.label or 0) for s in sentences) + 1


def cmd_augment(args) -> int:
    sentences = read_corpus(args.corpus)
    alphabet = build_alphabet(sentences)
    table = load_embeddings(args.embeddings, alphabet) if args.embeddings else None
    cfg = AugmentConfig(epochs=args.epochs, synonym_k=args.synonyms,
                        dropout_prob=args.dropout,
                        seed=derive_seed(args.seed, "augment"))
    augmented = augment_dataset(sentences, alphabet, table, cfg)
    write_corpus(args.out, augmented)
    print(f"augment: {len(sentences)} -> {len(augmented)} sentences -> {args.out}")
    return 0


def cmd_teach(args) -> int:
    sentences = read_corpus(args.corpus)
    if args.teacher == "random":
        alphabet = build_alphabet(sentences)
        m = args.labels or _labels_in(sentences)
        teacher = sample_teacher(alphabet, args.hidden, m,
                                 derive_seed(args.seed, "teach"))
    else:
        teacher = load_teacher(args.teacher)
    traces = [run_trace(teacher, s) for s in sentences]
    write_traces(args.out, traces)
    print(f"teach: {len(traces)} traces -> {args.out}")
    return 0


def cmd_extract(args) -> int:
    traces = read_traces(args.traces)
    cfg = BuildConfig(beta=args.beta, alpha=args.alpha, fill_strategy=args.fill)
    model = build_wfa(traces, args.clusters, cfg,
                      seed=derive_seed(args.seed, "extract"))
    save_model(args.out, model)
    print(f"extract: {len(traces)} traces, k={args.clusters} -> {args.out}")
    return 0


def cmd_eval(args) -> int:
    model = load_model(args.model)
    traces = read_traces(args.traces)
    labeled = [(t.sentence, int(np.argmax(t.outputs[-1]))) for t in traces]
    report = consistency_rate(model, labeled)
    with open(args.report, "w", encoding="utf-8") as fh:
        json.dump(report.to_dict(), fh, indent=2)
    print(f"eval: CR={report.consistency_rate:.4f} "
          f"({report.n_agree}/{report.n_total}) -> {args.report}")
    return 0


def cmd_inspect(args) -> int:
    model = load_model(args.model)
    sizes = model.states.cluster_sizes
    centers = model.states.centers
    with np.errstate(divide="ignore", invalid="ignore"):
        logp = np.where(centers > 0, np.log(centers), 0.0)
    entropy = -(centers * logp).sum(axis=1)
    print(f"model: k={model.k} m={model.n_labels} "
          f"alpha={model.config.alpha} beta={model.config.beta} "
          f"fill={model.config.fill_strategy}")
    print("cluster sizes:", " ".join(str(int(s)) for s in sizes))
    print("center entropy:", " ".join(f"{h:.3f}" for h in entropy))

    counted = [(tok, c) for tok, c in model.token_counts.items() if tok in model.missing_rows]
    if counted:
        m_alpha = len(counted)
        n_words = sum(c for _, c in counted)
        print(f"alphabet size: {m_alpha}, observed transitions: {n_words}")
        if m_alpha >= 2:
            est = estimate_median_transitions(m_alpha, n_words)
            print(f"estimated median transitions/token (Zipf): {est:.3f}")
        counted.sort(key=lambda tc: -tc[1])
        n_rows = model.k + 1
        print("missing rows by frequency decile:")
        for d in range(10):
            lo = d * m_alpha // 10
            hi = (d + 1) * m_alpha // 10
            if hi <= lo:
                continue
            group = counted[lo:hi]
            frac = sum(model.missing_rows[t] for t, _ in group) / (len(group) * n_rows)
            print(f"  decile {d + 1}: {frac:6.1%} missing "
                  f"({len(group)} tokens)")
    return 0


def cmd_compare(args) -> int:
    train = read_traces(args.traces)
    test = read_traces(args.test)
    labeled = [(t.sentence, int(np.argmax(t.outputs[-1]))) for t in test]
    all_outputs = np.concatenate([t.outputs for t in train], axis=0)
    states = fit_states(all_outputs, args.clusters,
                        derive_seed(args.seed, "extract"))
    rows = []
    for fill in ("null", "uniform", "empirical"):
        for alpha, tag in ((0.0, "off"), (args.alpha, "on")):
            cfg = BuildConfig(beta=args.beta, alpha=alpha, fill_strategy=fill)
            model = build_wfa(train, args.clusters, cfg, states=states)
            cr = consistency_rate(model, labeled).consistency_rate
            rows.append((fill, tag, cr))
    print(f"{'fill':<10} {'context':<8} CR")
    for fill, tag, cr in rows:
        print(f"{fill:<10} {tag:<8} {cr:.4f}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump([{"fill": f, "context": t, "cr": c} for f, t, c in rows],
                      fh, indent=2)
    return 0


PIPELINE_STAGES = ("augment", "teach", "extract", "eval")


def cmd_pipeline(args) -> int:
    cfg = load_config(args.config) if args.config else PipelineConfig()
    if args.seed is not None:
        cfg.seed = args.seed
    if not cfg.corpus:
        print("pipeline: no corpus configured", file=sys.stderr)
        return 2

    manifest = {"version": __version__, "seed": cfg.seed, "stages": {}}
    augmented_path = cfg.corpus
    stage = ""
    produced: list[str] = []
    try:
        if cfg.epochs > 0:
            stage = "augment"
            sentences = read_corpus(cfg.corpus)
            alphabet = build_alphabet(sentences)
            table = (load_embeddings(cfg.embeddings, alphabet)
                     if cfg.embeddings else None)
            aug_cfg = AugmentConfig(epochs=cfg.epochs, synonym_k=cfg.synonym_k,
                                    dropout_prob=cfg.dropout_prob,
                                    seed=derive_seed(cfg.seed, "augment"))
            augmented = augment_dataset(sentences, alphabet, table, aug_cfg)
            augmented_path = cfg.traces + ".augmented.txt"
            write_corpus(augmented_path, augmented)
            produced.append(augmented_path)
            manifest["stages"]["augment"] = {
                "seed": aug_cfg.seed, "out": augmented_path,
                "sha256": file_sha256(augmented_path)}

        stage = "teach"
        sentences = read_corpus(augmented_path)
        alphabet = build_alphabet(sentences)
        m = cfg.labels or _labels_in(sentences)
        teach_seed = derive_seed(cfg.seed, "teach")
        teacher = sample_teacher(alphabet, cfg.hidden, m, teach_seed)
        write_traces(cfg.traces, [run_trace(teacher, s) for s in sentences])
        produced.append(cfg.traces)
        manifest["stages"]["teach"] = {
            "seed": teach_seed, "out": cfg.traces,
            "sha256": file_sha256(cfg.traces)}

        stage = "extract"
        traces = read_traces(cfg.traces)
        build_cfg = BuildConfig(beta=cfg.beta, alpha=cfg.alpha,
                                fill_strategy=cfg.fill_strategy)
        extract_seed = derive_seed(cfg.seed, "extract")
        model = build_wfa(traces, cfg.clusters, build_cfg, seed=extract_seed)
        save_model(cfg.model, model)
        produced.append(cfg.model)
        manifest["stages"]["extract"] = {
            "seed": extract_seed, "out": cfg.model,
            "sha256": file_sha256(cfg.model)}

        stage = "eval"
        eval_traces = read_traces(cfg.test_traces or cfg.traces)
        labeled = [(t.sentence, int(np.argmax(t.outputs[-1])))
                   for t in eval_traces]
        report = consistency_rate(model, labeled)
        with open(cfg.report, "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, indent=2)
        produced.append(cfg.report)
        manifest["stages"]["eval"] = {
            "out": cfg.report, "sha256": file_sha256(cfg.report),
            "consistency_rate": report.consistency_rate}
    except Exception as exc:
        for path in produced:
            if os.path.exists(path):
                os.unlink(path)
        print(f"pipeline failed at stage {stage!r}: {exc}", file=sys.stderr)
        return 1

    manifest_path = cfg.report + ".manifest.json"
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
    print(f"pipeline: done, CR={report.consistency_rate:.4f}, "
          f"manifest -> {manifest_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wfax",
        description="Extract weighted finite automata from sequence "
                    "classifier output traces.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=1,
                       help="worker cap for parallel stages")

    p = sub.add_parser("augment", help="generate an augmented corpus")
    common(p)
    p.add_argument("--corpus", required=True)
    p.add_argument("--embeddings", default="")
    p.add_argument("--epochs", type=int, default=2)
    p.add_argument("--synonyms", type=int, default=5)
    p.add_argument("--dropout", type=float, default=0.1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("teach", help="run a teacher over a corpus, record traces")
    common(p)
    p.add_argument("--teacher", default="random",
                   help="teacher spec file, or 'random' for a sampled one")
    p.add_argument("--corpus", required=True)
    p.add_argument("--hidden", type=int, default=5)
    p.add_argument("--labels", type=int, default=0,
                   help="label count (default: inferred from corpus)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_teach)

    p = sub.add_parser("extract", help="build a model from traces")
    common(p)
    p.add_argument("--traces", required=True)
    p.add_argument("--clusters", type=int, default=10)
    p.add_argument("--alpha", type=float, default=0.2)
    p.add_argument("--beta", type=float, default=0.3)
    p.add_argument("--fill", default="empirical",
                   choices=("empirical", "uniform", "null"))
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("eval", help="evaluate a model against test traces")
    common(p)
    p.add_argument("--model", required=True)
    p.add_argument("--traces", required=True)
    p.add_argument("--report", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("inspect", help="print model statistics")
    common(p)
    p.add_argument("--model", required=True)
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("compare", help="CR table across filling strategies")
    common(p)
    p.add_argument("--traces", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--clusters", type=int, default=10)
    p.add_argument("--alpha", type=float, default=0.2)
    p.add_argument("--beta", type=float, default=0.3)
    p.add_argument("--out", default="")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("pipeline", help="run all stages from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
