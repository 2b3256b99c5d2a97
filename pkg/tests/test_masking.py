import pytest

from motifshap import (
    ConfigurationError,
    Graph,
    LabeledDataset,
    MaskingStrategy,
    Motif,
    UniverseMismatchError,
)

from conftest import philox, random_graph, random_motif_set, random_weighted_graph


G = Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (4, 5)])
PATH = Motif(0, frozenset({(0, 1), (1, 2)}))
STAR = Motif(1, frozenset({(2, 3), (3, 4)}))


def test_remove_deletes_union_edges():
    out = MaskingStrategy.remove().mask(G, [PATH, STAR])
    assert out.edges == frozenset({(4, 5)})
    assert out.weights is None


def test_remove_of_absent_edges_is_noop():
    out = MaskingStrategy.remove().mask(G, [Motif(9, frozenset({(0, 5)}))])
    assert out.edges == G.edges


def test_toggle_flips_presence():
    # (0,1),(1,2) present -> dropped; (2,4) absent -> appears
    m = Motif(0, frozenset({(0, 1), (1, 2), (2, 4)}))
    out = MaskingStrategy.toggle().mask(G, [m])
    assert out.edges == frozenset({(2, 3), (4, 5), (2, 4)})
    assert out.weights is None


def test_empty_motif_collection_returns_input_for_unweighted():
    for strat in (MaskingStrategy.remove(), MaskingStrategy.toggle()):
        assert strat.mask(G, []) is G


def test_weighted_input_comes_out_unweighted():
    g = Graph(4, frozenset({(0, 1), (1, 2)}), {(0, 1): 0.5})
    for strat in (MaskingStrategy.remove(), MaskingStrategy.toggle()):
        out = strat.mask(g, [Motif(0, frozenset({(1, 2)}))])
        assert out.weights is None
        out_empty = strat.mask(g, [])
        assert out_empty.weights is None
        assert out_empty.edges == g.edges


def test_motif_beyond_universe_rejected():
    small = Graph.from_edges(3, [(0, 1)])
    for strat in (MaskingStrategy.remove(), MaskingStrategy.toggle()):
        with pytest.raises(UniverseMismatchError):
            strat.mask(small, [Motif(0, frozenset({(2, 3)}))])


def test_toggle_involution_seeded():
    strat = MaskingStrategy.toggle()
    for seed in range(50):
        rng = philox(seed)
        g = random_graph(12, 0.3, rng)
        motifs = random_motif_set(12, 3, 3, rng)
        once = strat.mask(g, motifs)
        twice = strat.mask(once, motifs)
        assert twice.edges == g.edges


def test_remove_idempotence_seeded():
    strat = MaskingStrategy.remove()
    for seed in range(50):
        rng = philox(1000 + seed)
        g = random_graph(12, 0.3, rng)
        motifs = random_motif_set(12, 3, 3, rng)
        once = strat.mask(g, motifs)
        twice = strat.mask(once, motifs)
        assert twice.edges == once.edges


def _background() -> LabeledDataset:
    graphs = (
        Graph.from_edges(6, [(0, 1), (1, 2)]),
        Graph.from_edges(6, [(0, 1)]),
        Graph.from_edges(6, [(0, 1), (2, 3)]),
        Graph.from_edges(6, [(4, 5)]),
    )
    return LabeledDataset(6, graphs, (0, 0, 1, 1))


def test_average_uses_background_frequencies():
    """Union edges stay present at their background frequency, even when
    the frequency is zero; everything else keeps the input weight."""
    strat = MaskingStrategy.average(_background())
    m = Motif(0, frozenset({(0, 1), (1, 2), (0, 5)}))
    out = strat.mask(G, [m])
    assert out.weights is not None
    # frequencies over the 4 background graphs: (0,1) in 3, (1,2) in 1,
    # (0,5) in none
    assert out.weight((0, 1)) == pytest.approx(0.75)
    assert out.weight((1, 2)) == pytest.approx(0.25)
    assert out.weight((0, 5)) == 0.0
    assert (0, 5) in out.edges
    # outside the union: untouched
    assert out.weight((2, 3)) == 1.0
    assert out.weight((4, 5)) == 1.0
    assert out.weight((3, 4)) == 0.0


def test_average_preserves_outside_weights():
    g = Graph(6, frozenset({(0, 1), (2, 3)}), {(2, 3): 0.4})
    strat = MaskingStrategy.average(_background())
    out = strat.mask(g, [Motif(0, frozenset({(0, 1)}))])
    assert out.weight((2, 3)) == 0.4
    assert out.weight((0, 1)) == pytest.approx(0.75)


def test_average_empty_coalition_keeps_weights():
    strat = MaskingStrategy.average(_background())
    out = strat.mask(G, [])
    assert out.edges == G.edges
    for e in G.edges:
        assert out.weight(e) == 1.0


def test_average_needs_nonempty_background():
    with pytest.raises(ConfigurationError):
        MaskingStrategy.average(LabeledDataset(4, (), ()))


def test_average_background_universe_must_match():
    strat = MaskingStrategy.average(_background())
    with pytest.raises(UniverseMismatchError):
        strat.mask(Graph.from_edges(5, [(0, 1)]), [Motif(0, frozenset({(0, 1)}))])


def test_average_outside_edges_bit_identical_seeded():
    strat = MaskingStrategy.average(_background())
    for seed in range(20):
        rng = philox(2000 + seed)
        g = random_weighted_graph(6, 0.4, rng)
        motifs = random_motif_set(6, 2, 2, rng)
        union = set()
        for m in motifs:
            union |= m.edges
        out = strat.mask(g, motifs)
        for e in g.edges | union:
            if e in union:
                continue
            assert out.weight(e) == g.weight(e)


def test_unknown_strategy_kind_rejected():
    with pytest.raises(ConfigurationError):
        MaskingStrategy("erase")
