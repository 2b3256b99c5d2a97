"""Exact and depth-limited Shapley explanation scores over the coalition
lattice of masked motif sets.

For a graph g, black box B, motifs M and masking strategy, the score of
motif i is

    xi_i = sum over masked sets S subseteq M\\{i} of
           weight(|S|) * (B(G_S) - B(G_{S u {i}}))

where G_S is g with the motifs in S masked. Exact computation evaluates
all 2^|M| coalitions once each; the depth-d approximation keeps only the
terms whose masked sets lie within distance d of the fully-masked
lattice node (|S| >= |M| - d) and at d = |M| reproduces the exact result
bit for bit.

Scores are accumulated with math.fsum in a fixed coalition-index order,
so results do not depend on evaluation order or parallelism.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from .blackbox import BlackBox
from .errors import (
    ConfigurationError,
    LatticeTooLargeError,
    ParameterError,
    UniverseMismatchError,
)
from .graphs import Graph, Motif
from .masking import MaskingStrategy

THREADS_ENV = "MOTIF_SHAP_THREADS"

#: Largest motif set exact_explain will enumerate (2^20 coalitions).
DEFAULT_EXACT_LIMIT = 20


@dataclass(frozen=True)
class WeightingScheme:
    """Coalition weight as a function of masked-set size.

    classic        s!*(m-s-1)!/m!      the Shapley kernel; the only
                                       variant with the efficiency and
                                       [-1,1] range guarantees
    paper-inverse  1/((m+1)*C(m+1,s))  inverse-binomial variant
    paper-direct   C(m+1,s)            direct-binomial variant
    """

    variant: str

    _KNOWN = ("classic", "paper-inverse", "paper-direct")

    def __post_init__(self):
        if self.variant not in self._KNOWN:
            raise ConfigurationError(f"unknown weighting variant {self.variant!r}")

    @classmethod
    def classic(cls) -> "WeightingScheme":
        return cls("classic")

    @classmethod
    def paper_inverse(cls) -> "WeightingScheme":
        return cls("paper-inverse")

    @classmethod
    def paper_direct(cls) -> "WeightingScheme":
        return cls("paper-direct")

    def weight(self, masked_size: int, n_motifs: int) -> float:
        """Weight of a marginal term whose masked set (excluding the
        motif being scored) has the given size; 0 <= masked_size < n_motifs."""
        s, m = masked_size, n_motifs
        if not 0 <= s < m:
            raise ParameterError(f"masked-set size {s} out of range for {m} motifs")
        if self.variant == "classic":
            return math.factorial(s) * math.factorial(m - s - 1) / math.factorial(m)
        if self.variant == "paper-inverse":
            return 1.0 / ((m + 1) * math.comb(m + 1, s))
        return float(math.comb(m + 1, s))


@dataclass(frozen=True)
class CoalitionLattice:
    """Black-box values of the evaluated coalitions, keyed by the
    masked-set bitmask (bit i set = motif i masked)."""

    n_motifs: int
    values: dict[int, float]
    query_count: int


@dataclass(frozen=True)
class Explanation:
    """Scores for one graph. depth is the integer approximation depth or
    the string "exact"; query_count is the number of distinct black-box
    evaluations actually made (content-duplicate coalitions are merged)."""

    graph_id: int
    motif_ids: tuple[int, ...]
    scores: tuple[float, ...]
    strategy: str
    weighting: str
    depth: int | str
    query_count: int

    def by_motif(self) -> dict[int, float]:
        return dict(zip(self.motif_ids, self.scores))


def query_budget(n_motifs: int, depth: int | str) -> int:
    """Distinct coalition evaluations needed: 2^n for exact, otherwise
    sum_{k=0..d} C(n, k) counting from the fully-masked node."""
    if n_motifs < 0:
        raise ParameterError("motif count must be nonnegative")
    if depth == "exact":
        return 2 ** n_motifs
    d = int(depth)
    if d < 0:
        raise ParameterError("depth must be nonnegative")
    return sum(math.comb(n_motifs, k) for k in range(min(d, n_motifs) + 1))


def _worker_count() -> int:
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    try:
        threads = int(raw)
    except ValueError as exc:
        raise ParameterError(f"{THREADS_ENV} must be an integer, got {raw!r}") from exc
    return max(threads, 1)


def _evaluate_graphs(bb: BlackBox, graphs: list[Graph]) -> list[float]:
    threads = _worker_count()
    if threads > 1 and bb.concurrency_safe and len(graphs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(bb.evaluate, graphs))
    return bb.evaluate_batch(graphs)


def _graph_key(g: Graph):
    if g.weights is None:
        return (g.edges, None)
    return (g.edges, tuple(sorted(g.weights.items())))


def _check_motifs(g: Graph, motifs: Sequence[Motif]) -> None:
    if not motifs:
        raise ParameterError("at least one motif is required")
    ids = [m.id for m in motifs]
    if len(set(ids)) != len(ids):
        raise ParameterError(f"duplicate motif ids: {sorted(ids)}")
    for m in motifs:
        if m.max_node() >= g.n:
            raise UniverseMismatchError(
                f"motif {m.id} exceeds the graph's node universe [0, {g.n})")


def evaluate_lattice(g: Graph, bb: BlackBox, motifs: Sequence[Motif],
                     strategy: MaskingStrategy,
                     masks: Sequence[int]) -> CoalitionLattice:
    """Evaluate the black box on the given masked-set bitmasks, merging
    coalitions whose masked graphs are identical and submitting one batch."""
    m = len(motifs)
    unique_graphs: list[Graph] = []
    slot_by_key: dict = {}
    slot_by_mask: dict[int, int] = {}
    for mask in masks:
        subset = [motifs[i] for i in range(m) if mask >> i & 1]
        masked = strategy.mask(g, subset)
        key = _graph_key(masked)
        slot = slot_by_key.get(key)
        if slot is None:
            slot = len(unique_graphs)
            slot_by_key[key] = slot
            unique_graphs.append(masked)
        slot_by_mask[mask] = slot
    values = _evaluate_graphs(bb, unique_graphs)
    return CoalitionLattice(
        n_motifs=m,
        values={mask: values[slot] for mask, slot in slot_by_mask.items()},
        query_count=len(unique_graphs),
    )


def _masks_at_least(m: int, min_size: int) -> list[int]:
    """Bitmasks of all subsets of m motifs with size >= min_size, in
    ascending integer order (the fixed summation order)."""
    masks = []
    for size in range(max(min_size, 0), m + 1):
        for combo in itertools.combinations(range(m), size):
            masks.append(sum(1 << i for i in combo))
    masks.sort()
    return masks


def _explain(g: Graph, bb: BlackBox, motifs: Sequence[Motif],
             strategy: MaskingStrategy, weighting: WeightingScheme,
             depth: int, depth_label: int | str, graph_id: int,
             normalize: bool) -> Explanation:
    m = len(motifs)
    masks = _masks_at_least(m, m - depth)
    lattice = evaluate_lattice(g, bb, motifs, strategy, masks)
    values = lattice.values
    query_count = lattice.query_count

    scores = []
    for i in range(m):
        bit = 1 << i
        terms = []
        for mask in masks:
            if mask & bit:
                continue
            size = mask.bit_count()
            if size < m - depth:
                continue
            w = weighting.weight(size, m)
            terms.append(w * (values[mask] - values[mask | bit]))
        scores.append(math.fsum(terms))

    if normalize and depth < m:
        # rescale so the truncated scores reproduce the exact-efficiency
        # gap B(G_empty) - B(G_allmasked); needs one extra evaluation for
        # the unmasked coalition
        extra = evaluate_lattice(g, bb, motifs, strategy, [0])
        query_count += extra.query_count
        gap = extra.values[0] - values[(1 << m) - 1]
        total = math.fsum(scores)
        if total != 0.0:
            scores = [x * gap / total for x in scores]

    return Explanation(
        graph_id=graph_id,
        motif_ids=tuple(mot.id for mot in motifs),
        scores=tuple(scores),
        strategy=strategy.kind,
        weighting=weighting.variant,
        depth=depth_label,
        query_count=query_count,
    )


def exact_explain(g: Graph, bb: BlackBox, motifs: Sequence[Motif],
                  strategy: MaskingStrategy,
                  weighting: WeightingScheme | None = None,
                  graph_id: int = 0,
                  exact_limit: int = DEFAULT_EXACT_LIMIT) -> Explanation:
    """Exact scores over the full coalition lattice (2^|M| coalitions)."""
    _check_motifs(g, motifs)
    m = len(motifs)
    if m > exact_limit:
        raise LatticeTooLargeError(
            f"{m} motifs means 2^{m} coalitions, above the limit of "
            f"{exact_limit}; use approx_explain with a depth bound")
    weighting = weighting or WeightingScheme.classic()
    return _explain(g, bb, motifs, strategy, weighting,
                    depth=m, depth_label="exact", graph_id=graph_id,
                    normalize=False)


def approx_explain(g: Graph, bb: BlackBox, motifs: Sequence[Motif],
                   strategy: MaskingStrategy,
                   weighting: WeightingScheme | None = None,
                   depth: int = 1,
                   graph_id: int = 0,
                   normalize: bool = False) -> Explanation:
    """Depth-limited scores: only marginal terms for masked sets within
    distance ``depth`` of the fully-masked coalition are summed. At
    depth = |M| the result equals exact_explain bit for bit."""
    _check_motifs(g, motifs)
    m = len(motifs)
    if not 1 <= depth <= m:
        raise ParameterError(f"depth must be in [1, {m}], got {depth}")
    weighting = weighting or WeightingScheme.classic()
    return _explain(g, bb, motifs, strategy, weighting,
                    depth=depth, depth_label=depth, graph_id=graph_id,
                    normalize=normalize)
