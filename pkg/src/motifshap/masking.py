"""Masking strategies: build the graph variant in which a set of motifs
is hidden from the black box.

A coalition is described by the union of the masked motifs' edge sets.
Three strategies are provided:

* remove:  delete every union edge from the input graph.
* toggle:  flip the presence of every union edge (XOR).
* average: keep all union edges present but weighted by their frequency
  in a background dataset; edges outside the union keep the input
  graph's own weight.

Remove and toggle emit unweighted graphs. Average emits a weighted graph
and therefore requires a black box that accepts edge weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import ConfigurationError, UniverseMismatchError
from .graphs import Edge, Graph, LabeledDataset, Motif, edge_frequency


@dataclass(frozen=True)
class MaskingStrategy:
    """One of the three masking rules, constructed via the factories
    remove(), toggle() and average(background)."""

    kind: str
    background: LabeledDataset | None = None
    _freq_cache: dict = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def remove(cls) -> "MaskingStrategy":
        return cls("remove")

    @classmethod
    def toggle(cls) -> "MaskingStrategy":
        return cls("toggle")

    @classmethod
    def average(cls, background: LabeledDataset) -> "MaskingStrategy":
        if len(background) == 0:
            raise ConfigurationError("average masking needs a nonempty background dataset")
        return cls("average", background)

    def __post_init__(self):
        if self.kind not in ("remove", "toggle", "average"):
            raise ConfigurationError(f"unknown masking strategy {self.kind!r}")
        if self.kind == "average" and self.background is None:
            raise ConfigurationError("average masking needs a background dataset")

    @property
    def weighted_output(self) -> bool:
        return self.kind == "average"

    def _frequency(self, e: Edge) -> float:
        try:
            return self._freq_cache[e]
        except KeyError:
            f = edge_frequency(self.background, e)
            self._freq_cache[e] = f
            return f

    def mask(self, g: Graph, motifs: Iterable[Motif]) -> Graph:
        """Graph presented to the black box when the given motifs are
        masked in g. An empty motif collection returns g itself for the
        unweighted strategies; average still normalizes the output to its
        weighted form so that coalition values stay comparable."""
        union: set[Edge] = set()
        for m in motifs:
            union |= m.edges
        for _, v in union:
            if v >= g.n:
                raise UniverseMismatchError(
                    f"motif edge beyond the graph's node universe [0, {g.n})")

        if self.kind == "remove":
            if not union:
                return g if g.weights is None else Graph(g.n, g.edges, None)
            return Graph(g.n, g.edges - union, None)

        if self.kind == "toggle":
            if not union:
                return g if g.weights is None else Graph(g.n, g.edges, None)
            return Graph(g.n, g.edges ^ union, None)

        # average: union edges are always present, carrying their
        # background frequency (possibly 0.0); other edges keep the
        # weight they have in g.
        if self.background.n != g.n:
            raise UniverseMismatchError(
                f"background over {self.background.n} nodes, graph over {g.n}")
        edges = set(g.edges) | union
        weights = {}
        for e in edges:
            if e in union:
                weights[e] = self._frequency(e)
            else:
                weights[e] = g.weight(e)
        return Graph(g.n, frozenset(edges), weights)
