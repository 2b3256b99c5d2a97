import math

import numpy as np
import pytest

from motifshap import (
    ConfigurationError,
    DegenerateTrainingError,
    Graph,
    GroundTruthScorer,
    LabeledDataset,
    LinearSurrogate,
    Motif,
    SynthConfig,
    TrainConfig,
    UniverseMismatchError,
    accuracy,
    generate,
    train_linear_surrogate,
)
from motifshap.blackbox import sigmoid

from conftest import philox, random_graph, random_motif_set, random_weighted_graph

TRIANGLE = Motif(0, frozenset({(0, 1), (1, 2), (0, 2)}), 1)


def test_sigmoid_at_zero():
    assert sigmoid(0.0) == 0.5


def test_scorer_neutral_when_overlap_is_half():
    # a single 2-edge motif with exactly one edge present: overlap 0.5
    m = Motif(0, frozenset({(0, 1), (1, 2)}), 1)
    bb = GroundTruthScorer(4, [m], [1.0])
    assert bb.evaluate(Graph.from_edges(4, [(0, 1)])) == 0.5


def test_scorer_fully_present_and_absent_motif():
    bb = GroundTruthScorer(4, [TRIANGLE], [1.0], beta=2.0)
    present = bb.evaluate(Graph.from_edges(4, [(0, 1), (1, 2), (0, 2)]))
    absent = bb.evaluate(Graph.from_edges(4, []))
    assert present == pytest.approx(1.0 / (1.0 + math.exp(-2.0)), abs=1e-12)
    assert absent == pytest.approx(1.0 - present, abs=1e-12)


def test_scorer_zero_importances_always_half():
    bb = GroundTruthScorer(6, random_motif_set(6, 2, 2, philox(3)), [0.0, 0.0])
    for seed in range(10):
        assert bb.evaluate(random_graph(6, 0.4, philox(seed))) == 0.5


def test_scorer_monotone_in_positive_motif_overlap():
    bb = GroundTruthScorer(4, [TRIANGLE], [0.7], beta=3.0)
    edges = frozenset({(0, 1), (1, 2), (0, 2)})
    previous = -1.0
    for w in (0.0, 0.2, 0.5, 0.8, 1.0):
        g = Graph(4, edges, {e: w for e in edges})
        value = bb.evaluate(g)
        assert value >= previous
        previous = value


def test_scorer_output_in_unit_interval():
    rng = philox(42)
    motifs = random_motif_set(10, 3, 3, rng)
    bb = GroundTruthScorer(10, motifs, [2.0, 0.5, 1.5], beta=5.0)
    for seed in range(30):
        g = random_weighted_graph(10, 0.4, philox(seed))
        assert 0.0 <= bb.evaluate(g) <= 1.0


def test_scorer_validation():
    with pytest.raises(ConfigurationError):
        GroundTruthScorer(4, [TRIANGLE], [1.0, 2.0])
    with pytest.raises(ConfigurationError):
        GroundTruthScorer(4, [TRIANGLE], [-1.0])
    with pytest.raises(ConfigurationError):
        GroundTruthScorer(4, [TRIANGLE], [1.0], beta=0.0)
    with pytest.raises(ConfigurationError):
        GroundTruthScorer(4, [Motif(0, frozenset({(0, 1)}))], [1.0])
    with pytest.raises(UniverseMismatchError):
        GroundTruthScorer(2, [TRIANGLE], [1.0])
    bb = GroundTruthScorer(4, [TRIANGLE], [1.0])
    with pytest.raises(UniverseMismatchError):
        bb.evaluate(Graph.from_edges(5, []))


def test_evaluate_batch_matches_elementwise():
    bb = GroundTruthScorer(8, random_motif_set(8, 2, 2, philox(9)), [1.0, 0.5])
    graphs = [random_graph(8, 0.3, philox(s)) for s in range(8)]
    assert bb.evaluate_batch(graphs) == [bb.evaluate(g) for g in graphs]


def _edge_split_dataset(n_graphs: int = 20) -> LabeledDataset:
    # class decided by the presence of edge (0, 1) alone
    graphs = []
    labels = []
    for i in range(n_graphs):
        rng = philox(7000 + i)
        g = random_graph(6, 0.3, rng)
        label = i % 2
        edges = set(g.edges)
        if label:
            edges.add((0, 1))
        else:
            edges.discard((0, 1))
        graphs.append(Graph(6, frozenset(edges)))
        labels.append(label)
    return LabeledDataset(6, tuple(graphs), tuple(labels))


def test_surrogate_zero_epochs_predicts_half():
    d = _edge_split_dataset()
    bb = train_linear_surrogate(d, TrainConfig(epochs=0))
    assert all(float(w) == 0.0 for w in bb.weights)
    assert bb.bias == 0.0
    for g in d.graphs:
        assert bb.evaluate(g) == 0.5


def test_surrogate_separates_linearly_separable_data():
    d = _edge_split_dataset()
    bb = train_linear_surrogate(d, TrainConfig(learning_rate=0.5, epochs=300))
    assert bb.train_accuracy == 1.0
    assert accuracy(bb, d) == 1.0


def test_surrogate_training_is_deterministic():
    d = _edge_split_dataset()
    a = train_linear_surrogate(d, TrainConfig())
    b = train_linear_surrogate(d, TrainConfig())
    assert np.array_equal(a.weights, b.weights)
    assert a.bias == b.bias
    g = random_graph(6, 0.5, philox(1))
    assert a.evaluate(g) == b.evaluate(g)


def test_surrogate_output_in_unit_interval():
    d = _edge_split_dataset()
    bb = train_linear_surrogate(d)
    for seed in range(20):
        g = random_weighted_graph(6, 0.5, philox(seed))
        assert 0.0 <= bb.evaluate(g) <= 1.0


def test_surrogate_rejects_single_class_data():
    g = Graph.from_edges(3, [(0, 1)])
    with pytest.raises(DegenerateTrainingError):
        train_linear_surrogate(LabeledDataset(3, (g, g), (1, 1)))
    with pytest.raises(DegenerateTrainingError):
        train_linear_surrogate(LabeledDataset(3, (), ()))


def test_surrogate_weight_vector_dimension_checked():
    with pytest.raises(ConfigurationError):
        LinearSurrogate(5, np.zeros(3), 0.0)
    with pytest.raises(UniverseMismatchError):
        LinearSurrogate(3, np.zeros(3), 0.0).evaluate(Graph.from_edges(4, []))


def test_accuracy_empty_dataset_rejected():
    bb = LinearSurrogate(3, np.zeros(3), 0.0)
    with pytest.raises(DegenerateTrainingError):
        accuracy(bb, LabeledDataset(3, (), ()))


def test_surrogate_generalizes_to_held_out_graphs():
    """Trained on 150 synthetic graphs, the surrogate must classify at
    least 75% of the remaining 50 correctly."""
    cfg = SynthConfig(n=100, n_graphs=200, density=0.2, motif_spec=(6, 10),
                      rho=(0.0, 0.2, 0.4, 0.6, 0.8, 1.0), seed=0)
    dataset, _, _ = generate(cfg)
    train = LabeledDataset(100, dataset.graphs[:150], dataset.labels[:150])
    held_out = LabeledDataset(100, dataset.graphs[150:], dataset.labels[150:])
    bb = train_linear_surrogate(train)
    assert accuracy(bb, held_out) >= 0.75
