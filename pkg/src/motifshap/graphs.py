"""Graph, motif and dataset model over a fixed node universe.

Every graph in a dataset is defined over the same node set 0..n-1, so a
node index means the same entity in every graph and subgraph matching
reduces to comparing edge identities. Edges are stored canonically as
(u, v) tuples with u < v; edge sets additionally expose a bit-level
representation indexed by the fixed enumeration of all n*(n-1)/2 node
pairs, which makes intersection/union counting and support checks cheap.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence

from .errors import (
    EmptyDatasetError,
    InputFormatError,
    ParameterError,
    UniverseMismatchError,
)

Edge = tuple[int, int]


def canonical_edge(u: int, v: int) -> Edge:
    """Return (min, max); self-loops are rejected."""
    if u == v:
        raise ParameterError(f"self-loop on node {u} is not a valid edge")
    return (u, v) if u < v else (v, u)


def pair_index(u: int, v: int, n: int) -> int:
    """Index of canonical pair (u, v), u < v, in the fixed enumeration
    of all n*(n-1)/2 node pairs (row-major upper triangle)."""
    return u * n - (u * (u + 1)) // 2 + (v - u - 1)


@lru_cache(maxsize=8)
def all_pairs(n: int) -> tuple[Edge, ...]:
    """All canonical node pairs of an n-node universe, in pair_index order."""
    return tuple((u, v) for u in range(n) for v in range(u + 1, n))


def _canonicalize(edges: Iterable[Sequence[int]], n: int) -> frozenset[Edge]:
    out = set()
    for e in edges:
        u, v = int(e[0]), int(e[1])
        e = canonical_edge(u, v)
        if e[0] < 0 or e[1] >= n:
            raise ParameterError(f"edge {e} outside node universe [0, {n})")
        out.add(e)
    return frozenset(out)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on nodes 0..n-1, optionally edge-weighted.

    Unweighted graphs are equivalent to weight 1.0 on every listed edge;
    weights, when present, cover a subset of the listed edges with values
    in [0, 1]. Instances are immutable and safe to share across threads.
    """

    n: int
    edges: frozenset[Edge]
    weights: Mapping[Edge, float] | None = None

    def __post_init__(self):
        if self.n < 0:
            raise ParameterError("node count must be nonnegative")
        object.__setattr__(self, "edges", _canonicalize(self.edges, self.n))
        if self.weights is not None:
            w = {canonical_edge(*e): float(x) for e, x in self.weights.items()}
            for e, x in w.items():
                if e not in self.edges:
                    raise ParameterError(f"weighted edge {e} is not listed in the edge set")
                if not 0.0 <= x <= 1.0:
                    raise ParameterError(f"edge weight {x} outside [0, 1]")
            object.__setattr__(self, "weights", w)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]],
                   weights: Mapping[Edge, float] | None = None) -> "Graph":
        return cls(n, frozenset(canonical_edge(int(e[0]), int(e[1])) for e in edges), weights)

    def weight(self, e: Edge) -> float:
        """Weight of edge e: listed weight, 1.0 for an unweighted listed
        edge, 0.0 for an absent edge."""
        if e not in self.edges:
            return 0.0
        if self.weights is None:
            return 1.0
        return self.weights.get(e, 1.0)

    @cached_property
    def edge_bits(self) -> int:
        """Edge set packed into one integer, bit i = pair_index i present."""
        buf = bytearray((self.n * (self.n - 1) // 2 + 7) // 8)
        for u, v in self.edges:
            i = pair_index(u, v, self.n)
            buf[i >> 3] |= 1 << (i & 7)
        return int.from_bytes(buf, "little")

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)


def is_connected(edges: Iterable[Edge]) -> bool:
    """True iff the graph induced by the edges on their incident nodes has
    exactly one connected component. The empty edge set is not connected
    (a motif must be nonempty)."""
    edges = list(edges)
    if not edges:
        return False
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        parent.setdefault(u, u)
        parent.setdefault(v, v)
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    roots = {find(x) for x in parent}
    return len(roots) == 1


@dataclass(frozen=True)
class Motif:
    """Connected, nonempty edge set over the shared node universe.

    ``class_sign`` is +1 for a motif predictive of class 1, -1 for class 0,
    or None when no class is associated. Connectivity is checked here so
    downstream code may assume it.
    """

    id: int
    edges: frozenset[Edge]
    class_sign: int | None = None

    def __post_init__(self):
        edges = frozenset(canonical_edge(int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        if not edges:
            raise ParameterError(f"motif {self.id}: edge set must be nonempty")
        if not is_connected(edges):
            raise ParameterError(f"motif {self.id}: edge set must be connected")
        if self.class_sign not in (None, -1, 1):
            raise ParameterError(f"motif {self.id}: class_sign must be -1, +1 or None")

    def max_node(self) -> int:
        return max(v for _, v in self.edges)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)


@dataclass(frozen=True)
class LabeledDataset:
    """Graphs over one node universe with binary labels and an optional
    injection record I, where I[i][k] is +1/-1/0 for motif k having been
    added to / removed from / left untouched in graph i."""

    n: int
    graphs: tuple[Graph, ...]
    labels: tuple[int, ...]
    injections: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "graphs", tuple(self.graphs))
        object.__setattr__(self, "labels", tuple(int(x) for x in self.labels))
        if len(self.graphs) != len(self.labels):
            raise ParameterError("graphs and labels must have equal length")
        for g in self.graphs:
            if g.n != self.n:
                raise UniverseMismatchError(
                    f"graph over {g.n} nodes in a dataset over {self.n}")
        for lab in self.labels:
            if lab not in (0, 1):
                raise ParameterError(f"label {lab} is not binary")
        if self.injections is not None:
            inj = tuple(tuple(int(x) for x in row) for row in self.injections)
            if len(inj) != len(self.graphs):
                raise ParameterError("injection record must have one row per graph")
            widths = {len(row) for row in inj}
            if len(widths) > 1:
                raise ParameterError("injection record must be rectangular")
            for row in inj:
                for x in row:
                    if x not in (-1, 0, 1):
                        raise ParameterError(f"injection entry {x} not in {{-1, 0, +1}}")
            object.__setattr__(self, "injections", inj)

    def __len__(self) -> int:
        return len(self.graphs)

    def label_indices(self, label: int) -> tuple[int, ...]:
        return tuple(i for i, lab in enumerate(self.labels) if lab == label)


def jaccard_distance(a: Graph, b: Graph) -> float:
    """1 - |Ea n Eb| / |Ea u Eb|; two empty graphs are at distance 0."""
    if a.n != b.n:
        raise UniverseMismatchError(f"graphs over {a.n} and {b.n} nodes")
    union = (a.edge_bits | b.edge_bits).bit_count()
    if union == 0:
        return 0.0
    inter = (a.edge_bits & b.edge_bits).bit_count()
    return 1.0 - inter / union


def edge_set_jaccard(a: frozenset[Edge], b: frozenset[Edge]) -> float:
    """Jaccard distance between two raw edge sets (used on motifs)."""
    if not a and not b:
        return 0.0
    return 1.0 - len(a & b) / len(a | b)


def edge_frequency(d: LabeledDataset, e: Edge) -> float:
    """Fraction of the dataset's graphs containing edge e."""
    if len(d) == 0:
        raise EmptyDatasetError("edge frequency over an empty dataset")
    e = canonical_edge(*e)
    return sum(1 for g in d.graphs if e in g.edges) / len(d)


def support(m: Iterable[Edge], d: LabeledDataset, label_filter: int | None = None) -> int:
    """Number of graphs (optionally restricted to one label) whose edge set
    contains every edge of m. The empty set is supported by all graphs."""
    edges = frozenset(canonical_edge(*e) for e in m)
    for _, v in edges:
        if v >= d.n:
            raise UniverseMismatchError(f"motif edge beyond node universe [0, {d.n})")
    count = 0
    for g, lab in zip(d.graphs, d.labels):
        if label_filter is not None and lab != label_filter:
            continue
        if edges <= g.edges:
            count += 1
    return count


# --- JSON file formats -------------------------------------------------
#
# Dataset:  {"n": int, "graphs": [{"label": 0|1, "edges": [[u,v], ...]}, ...],
#            "injections": [[+1|-1|0, ...], ...]?}
# Motifs:   {"n": int, "motifs": [{"id": int, "class": 0|1?, "edges": [[u,v], ...]}, ...]}
# Graph:    {"n": int, "edges": [[u,v], ...]}
#
# Serializers sort edge lists by (u, v) so parse -> serialize round-trips
# byte-identically.


def _read_json(path: str | os.PathLike) -> object:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{path}: invalid JSON: {exc}") from exc


def atomic_write_text(path: str | os.PathLike, text: str) -> None:
    """Write text to path atomically (temp file in the same directory,
    then rename)."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_dataset(path: str | os.PathLike) -> LabeledDataset:
    doc = _read_json(path)
    try:
        n = int(doc["n"])
        graphs = []
        labels = []
        for entry in doc["graphs"]:
            labels.append(int(entry["label"]))
            graphs.append(Graph.from_edges(n, entry["edges"]))
        injections = doc.get("injections")
        if injections is not None:
            injections = tuple(tuple(int(x) for x in row) for row in injections)
        return LabeledDataset(n, tuple(graphs), tuple(labels), injections)
    except InputFormatError:
        raise
    except (KeyError, TypeError, ValueError, IndexError, ParameterError) as exc:
        raise InputFormatError(f"{path}: malformed dataset: {exc}") from exc


def dataset_to_json(d: LabeledDataset) -> str:
    doc: dict = {
        "n": d.n,
        "graphs": [
            {"label": lab, "edges": [list(e) for e in g.sorted_edges()]}
            for g, lab in zip(d.graphs, d.labels)
        ],
    }
    if d.injections is not None:
        doc["injections"] = [list(row) for row in d.injections]
    return json.dumps(doc, separators=(",", ":"))


def save_dataset(d: LabeledDataset, path: str | os.PathLike) -> None:
    atomic_write_text(path, dataset_to_json(d) + "\n")


def _motif_from_entry(n: int, entry: Mapping) -> Motif:
    cls = entry.get("class")
    sign = None if cls is None else (1 if int(cls) == 1 else -1)
    edges = _canonicalize(entry["edges"], n)
    return Motif(int(entry["id"]), edges, sign)


def load_motifs(path: str | os.PathLike) -> tuple[int, list[Motif]]:
    """Load a motif file; returns (n, motifs)."""
    doc = _read_json(path)
    try:
        n = int(doc["n"])
        return n, [_motif_from_entry(n, entry) for entry in doc["motifs"]]
    except InputFormatError:
        raise
    except (KeyError, TypeError, ValueError, IndexError, ParameterError) as exc:
        raise InputFormatError(f"{path}: malformed motif file: {exc}") from exc


def motifs_to_json(n: int, motifs: Sequence[Motif],
                   cs_scores: Sequence[float] | None = None) -> str:
    entries = []
    for i, m in enumerate(motifs):
        entry: dict = {"id": m.id}
        if m.class_sign is not None:
            entry["class"] = 1 if m.class_sign > 0 else 0
        entry["edges"] = [list(e) for e in m.sorted_edges()]
        if cs_scores is not None:
            entry["cs"] = cs_scores[i]
        entries.append(entry)
    return json.dumps({"n": n, "motifs": entries}, separators=(",", ":"))


def save_motifs(n: int, motifs: Sequence[Motif], path: str | os.PathLike,
                cs_scores: Sequence[float] | None = None) -> None:
    atomic_write_text(path, motifs_to_json(n, motifs, cs_scores) + "\n")


def load_graph_file(path: str | os.PathLike) -> Graph:
    doc = _read_json(path)
    try:
        return Graph.from_edges(int(doc["n"]), doc["edges"])
    except (KeyError, TypeError, ValueError, IndexError, ParameterError) as exc:
        raise InputFormatError(f"{path}: malformed graph file: {exc}") from exc
