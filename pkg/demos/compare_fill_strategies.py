"""Compare the three strategies for completing unobserved transition rows
(null / uniform / empirical) with and without the context term, on a corpus
skewed so that rare tokens dominate the test set.

Run with:  python3 demos/compare_fill_strategies.py
"""

import numpy as np

import wfax


def zipf_sentences(tokens, probs, n, rng):
    out = []
    for _ in range(n):
        length = rng.integers(5, 15)
        out.append(wfax.Sentence(tuple(rng.choice(tokens, size=length, p=probs))))
    return out


def main():
    rng = np.random.default_rng(21)
    tokens = [f"w{i:02d}" for i in range(40)]
    probs = 1.0 / np.arange(1, 41) ** 1.6
    probs /= probs.sum()

    # Train on head-heavy text, test on tail-heavy text so that many
    # (state, token) rows are never observed during counting.
    train = zipf_sentences(tokens, probs, 2500, rng)
    test = zipf_sentences(tokens, probs[::-1], 600, rng)

    alphabet = wfax.build_alphabet(train)
    teacher = wfax.sample_teacher(alphabet, h=6, m=4, seed=5)
    traces = [wfax.run_trace(teacher, s) for s in train]
    labeled = [(s, wfax.teacher_predict(teacher, s)) for s in test]

    # One shared clustering so the cells differ only in fill/context.
    outputs = np.concatenate([t.outputs for t in traces])
    states = wfax.fit_states(outputs, k=10, seed=3)

    print(f"{'fill':<10} {'alpha':>5} {'CR':>7} {'missing rows':>13}")
    for fill in ("null", "uniform", "empirical"):
        for alpha in (0.0, 0.2):
            cfg = wfax.BuildConfig(beta=0.3, alpha=alpha, fill_strategy=fill)
            model = wfax.build_wfa(traces, k=10, cfg=cfg, states=states)
            report = wfax.consistency_rate(model, labeled)
            n_missing = sum(model.missing_rows.values())
            print(f"{fill:<10} {alpha:>5.1f} {report.consistency_rate:>7.3f} "
                  f"{n_missing:>13}")

    est = wfax.estimate_median_transitions(len(alphabet.tokens),
                                           sum(len(s.words) for s in train))
    print(f"\nexpected median per-token transition count: {est:.1f}")


if __name__ == "__main__":
    main()
