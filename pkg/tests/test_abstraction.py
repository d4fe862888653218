import numpy as np
import pytest

from wfax import (Sentence, assign, build_alphabet, fit_states, run_trace,
                  sample_teacher, trace_to_transitions)
from wfax.abstraction import assign_many


def sent(*words, label=None):
    return Sentence(tuple(words), label)


def two_point_set():
    outputs = np.array([[1.0, 0.0]] * 10 + [[0.0, 1.0]] * 10)
    return fit_states(outputs, k=2, seed=0)


class TestFitStates:
    def test_two_point_clusters_exact(self):
        states = two_point_set()
        got = sorted(states.centroids.tolist())
        assert got == [[0.0, 1.0], [1.0, 0.0]]

    def test_k1_is_global_mean(self):
        outputs = np.array([[1.0, 0.0], [0.0, 1.0], [0.5, 0.5], [0.2, 0.8]])
        states = fit_states(outputs, k=1, seed=0)
        assert np.allclose(states.centroids[0], outputs.mean(axis=0))

    def test_distance_matrix(self):
        states = two_point_set()
        # distance between the two cluster centers is sqrt(2)
        assert states.distance[1, 2] == pytest.approx(np.sqrt(2))
        assert np.allclose(states.distance, states.distance.T)
        assert np.all(np.diag(states.distance) == 0)

    def test_start_state_center_uniform(self):
        states = two_point_set()
        assert np.allclose(states.centers[0], [0.5, 0.5])

    def test_k_too_large(self):
        outputs = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        with pytest.raises(ValueError, match="k too large"):
            fit_states(outputs, k=3, seed=0)

    def test_determinism(self):
        rng = np.random.default_rng(0)
        outputs = rng.dirichlet([1, 1, 1], size=200)
        a = fit_states(outputs, k=5, seed=42)
        b = fit_states(outputs, k=5, seed=42)
        assert np.array_equal(a.centroids, b.centroids)
        assert np.array_equal(a.centers, b.centers)

    def test_partition_property(self):
        rng = np.random.default_rng(1)
        outputs = rng.dirichlet([1, 1], size=300)
        states = fit_states(outputs, k=4, seed=0)
        assert states.cluster_sizes.sum() == 300

    def test_centers_are_member_means(self):
        rng = np.random.default_rng(2)
        outputs = rng.dirichlet([1, 1, 1], size=500)
        states = fit_states(outputs, k=6, seed=3)
        labels = assign_many(states, outputs)
        for j in range(1, 7):
            members = outputs[labels == j]
            if members.size:
                assert np.allclose(states.centers[j], members.mean(axis=0),
                                   atol=1e-9)

    def test_triangle_inequality_spot_check(self):
        rng = np.random.default_rng(3)
        outputs = rng.dirichlet([1, 1, 1, 1], size=400)
        d = fit_states(outputs, k=8, seed=0).distance
        n = d.shape[0]
        for _ in range(50):
            i, j, k = rng.integers(n, size=3)
            assert d[i, j] <= d[i, k] + d[k, j] + 1e-12


class TestAssign:
    def test_centroid_maps_to_itself(self):
        states = two_point_set()
        for j in range(2):
            assert assign(states, states.centroids[j]) == j + 1

    def test_never_returns_start_state(self):
        states = two_point_set()
        rng = np.random.default_rng(0)
        for o in rng.dirichlet([1, 1], size=100):
            assert 1 <= assign(states, o) <= 2

    def test_tie_goes_to_lowest(self):
        outputs = np.array([[1.0, 0.0]] * 5 + [[0.0, 1.0]] * 5)
        states = fit_states(outputs, k=2, seed=0)
        # midpoint is equidistant from both centroids
        assert assign(states, [0.5, 0.5]) == 1


class TestTraceToTransitions:
    @pytest.fixture
    def setup(self):
        al = build_alphabet([sent("a", "b", "c")])
        teacher = sample_teacher(al, h=3, m=2, seed=0)
        sentences = [sent("a", "b", "c"), sent("b", "a"), sent("c",)]
        traces = [run_trace(teacher, s) for s in sentences]
        outputs = np.concatenate([t.outputs for t in traces])
        states = fit_states(outputs, k=2, seed=0)
        return states, traces

    def test_first_transition_leaves_start(self, setup):
        states, traces = setup
        for t in traces:
            triples = trace_to_transitions(states, t)
            assert triples[0][0] == 0
            assert len(triples) == len(t.sentence)

    def test_chaining(self, setup):
        states, traces = setup
        for t in traces:
            triples = trace_to_transitions(states, t)
            for prev, nxt in zip(triples, triples[1:]):
                assert nxt[0] == prev[2]

    def test_prefix_property(self, setup):
        states, traces = setup
        t = traces[0]
        full = trace_to_transitions(states, t)
        from wfax.teacher import Trace
        prefix = Trace(sentence=sent(*t.sentence.words[:2]),
                       outputs=t.outputs[:2])
        assert trace_to_transitions(states, prefix) == full[:2]
