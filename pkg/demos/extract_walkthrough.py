"""End-to-end walkthrough: sample a hidden-state teacher, record traces,
cluster its outputs into abstract states, build a weighted automaton, and
measure how often it agrees with the teacher on held-out sentences.

Run with:  python3 demos/extract_walkthrough.py
"""

import numpy as np

import wfax


def random_sentences(tokens, n, rng):
    out = []
    for _ in range(n):
        length = rng.integers(4, 12)
        out.append(wfax.Sentence(tuple(rng.choice(tokens, size=length))))
    return out


def main():
    rng = np.random.default_rng(7)
    tokens = [f"w{i:02d}" for i in range(30)]
    train = random_sentences(tokens, 1500, rng)
    test = random_sentences(tokens, 400, rng)
    alphabet = wfax.build_alphabet(train)

    # The teacher stands in for any black-box probabilistic classifier:
    # all we ever observe is its output distribution after each prefix.
    teacher = wfax.sample_teacher(alphabet, h=6, m=4, seed=11)
    traces = [wfax.run_trace(teacher, s) for s in train]
    print(f"recorded {len(traces)} traces over {len(alphabet.tokens)} tokens")

    model = wfax.build_wfa(
        traces, k=8, cfg=wfax.BuildConfig(beta=0.3, alpha=0.2), seed=3)
    n_missing = sum(model.missing_rows.values())
    print(f"built automaton: {model.states.n_clusters} clusters, "
          f"{len(model.matrices)} transition matrices, "
          f"{n_missing} rows filled from neighbouring states")

    labeled = [(s, wfax.teacher_predict(teacher, s)) for s in test]
    report = wfax.consistency_rate(model, labeled)
    print(f"consistency rate on {report.n_total} held-out sentences: "
          f"{report.consistency_rate:.3f}")

    s = test[0]
    print(f"\nexample sentence: {' '.join(s.words)}")
    traj = wfax.state_trajectory(model, s)
    print(f"  most likely state after each token: "
          f"{np.argmax(traj, axis=1).tolist()}")
    print(f"  automaton weight: {np.round(wfax.weight(model, s), 3)}")
    print(f"  automaton label {wfax.predict(model, s)}, "
          f"teacher label {wfax.teacher_predict(teacher, s)}")


if __name__ == "__main__":
    main()
