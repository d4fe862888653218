import json

import numpy as np
import pytest

from wfax.cli import derive_seed, load_config, main


@pytest.fixture
def corpus(tmp_path):
    rng = np.random.default_rng(0)
    words = [f"w{i}" for i in range(12)]
    path = tmp_path / "corpus.txt"
    lines = []
    for _ in range(40):
        n = rng.integers(2, 7)
        toks = " ".join(rng.choice(words, size=n))
        lines.append(f"{rng.integers(0, 2)}\t{toks}")
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def embeddings(tmp_path):
    rng = np.random.default_rng(1)
    path = tmp_path / "emb.txt"
    lines = [f"w{i} " + " ".join(f"{x:.4f}" for x in rng.normal(size=3))
             for i in range(12)]
    path.write_text("\n".join(lines) + "\n")
    return path


def test_derive_seed_stable_and_stage_dependent():
    assert derive_seed(1, "augment") == derive_seed(1, "augment")
    assert derive_seed(1, "augment") != derive_seed(1, "teach")
    assert derive_seed(1, "augment") != derive_seed(2, "augment")


def test_augment_command(corpus, embeddings, tmp_path):
    out = tmp_path / "aug.txt"
    rc = main(["augment", "--corpus", str(corpus), "--embeddings",
               str(embeddings), "--epochs", "2", "--out", str(out)])
    assert rc == 0
    assert len(out.read_text().splitlines()) == 120


def test_teach_extract_eval_inspect(corpus, tmp_path, capsys):
    traces = tmp_path / "traces.jsonl"
    model = tmp_path / "model.json"
    report = tmp_path / "report.json"
    assert main(["teach", "--corpus", str(corpus), "--out", str(traces),
                 "--seed", "3"]) == 0
    assert main(["extract", "--traces", str(traces), "--clusters", "3",
                 "--out", str(model), "--seed", "3"]) == 0
    assert main(["eval", "--model", str(model), "--traces", str(traces),
                 "--report", str(report)]) == 0
    rep = json.loads(report.read_text())
    assert 0.0 <= rep["consistency_rate"] <= 1.0
    assert main(["inspect", "--model", str(model)]) == 0
    out = capsys.readouterr().out
    assert "cluster sizes" in out


def test_extract_determinism(corpus, tmp_path):
    traces = tmp_path / "traces.jsonl"
    main(["teach", "--corpus", str(corpus), "--out", str(traces)])
    m1, m2 = tmp_path / "m1.json", tmp_path / "m2.json"
    for m in (m1, m2):
        assert main(["extract", "--traces", str(traces), "--clusters", "3",
                     "--out", str(m), "--seed", "9"]) == 0
    assert m1.read_bytes() == m2.read_bytes()


def test_compare_emits_six_cells(corpus, tmp_path):
    traces = tmp_path / "traces.jsonl"
    table = tmp_path / "table.json"
    main(["teach", "--corpus", str(corpus), "--out", str(traces)])
    assert main(["compare", "--traces", str(traces), "--test", str(traces),
                 "--clusters", "3", "--out", str(table)]) == 0
    cells = json.loads(table.read_text())
    assert len(cells) == 6
    assert all(0.0 <= c["cr"] <= 1.0 for c in cells)


def write_config(tmp_path, corpus, **overrides):
    cfg = tmp_path / "pipeline.cfg"
    values = {
        "corpus": str(corpus),
        "traces": str(tmp_path / "traces.jsonl"),
        "model": str(tmp_path / "model.json"),
        "report": str(tmp_path / "report.json"),
        "clusters": 3,
        "seed": 5,
    }
    values.update(overrides)
    body = "\n".join(f"{k} = {v}" for k, v in values.items())
    cfg.write_text(f"[pipeline]\n{body}\n")
    return cfg


def test_pipeline_smoke(corpus, tmp_path):
    cfg = write_config(tmp_path, corpus)
    assert main(["pipeline", "--config", str(cfg)]) == 0
    assert (tmp_path / "model.json").exists()
    assert (tmp_path / "report.json").exists()
    manifest = json.loads((tmp_path / "report.json.manifest.json").read_text())
    assert set(manifest["stages"]) == {"teach", "extract", "eval"}


def test_pipeline_rerun_identical_hashes(corpus, tmp_path):
    cfg = write_config(tmp_path, corpus)
    main(["pipeline", "--config", str(cfg)])
    first = json.loads((tmp_path / "report.json.manifest.json").read_text())
    main(["pipeline", "--config", str(cfg)])
    second = json.loads((tmp_path / "report.json.manifest.json").read_text())
    assert first == second


def test_pipeline_missing_embeddings_names_stage(corpus, tmp_path, capsys):
    cfg = write_config(tmp_path, corpus, epochs=2,
                       embeddings=str(tmp_path / "nope.txt"))
    assert main(["pipeline", "--config", str(cfg)]) == 1
    assert "augment" in capsys.readouterr().err


def test_config_unknown_key_rejected(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("[pipeline]\nbogus_key = 1\n")
    with pytest.raises(ValueError, match="bogus_key"):
        load_config(cfg)


def test_error_exit_code(tmp_path):
    assert main(["extract", "--traces", str(tmp_path / "missing.jsonl"),
                 "--out", str(tmp_path / "m.json")]) == 1
