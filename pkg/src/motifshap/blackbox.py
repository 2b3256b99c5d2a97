"""Black-box classifiers: B maps a graph over the shared node universe to
a class-1 probability in [0, 1].

Two built-in surrogates are provided. GroundTruthScorer scores a graph by
how much of each planted motif it contains and is the deterministic
stand-in for a trained model on synthetic benchmarks. LinearSurrogate is
a logistic model over node-pair features trained by full-batch gradient
descent. ExternalBlackBox adapts any real classifier reachable as a
child process speaking a line-delimited JSON protocol; serve() is the
matching server side.

All black boxes read edges through Graph.weight, so a missing edge
counts 0, an unweighted present edge counts 1, and weighted graphs (as
produced by average masking) need no special handling.
"""

from __future__ import annotations

import json
import math
import os
import select
import subprocess
import sys
import time
from dataclasses import dataclass
from typing import IO, Sequence

import numpy as np

from .errors import (
    ConfigurationError,
    DegenerateTrainingError,
    InputFormatError,
    TransportError,
    UniverseMismatchError,
)
from .graphs import Graph, LabeledDataset, Motif, pair_index

PROTOCOL_HELLO = "motif-shap/1"


def sigmoid(x: float) -> float:
    # piecewise form avoids overflow in exp for large |x|
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    z = math.exp(x)
    return z / (1.0 + z)


class BlackBox:
    """Base contract: deterministic evaluate(g) in [0,1] plus a batch
    entry point the lattice engine calls with deduplicated graphs."""

    #: True when evaluate may be called from several threads at once.
    concurrency_safe = False

    def evaluate(self, g: Graph) -> float:
        raise NotImplementedError

    def evaluate_batch(self, graphs: Sequence[Graph]) -> list[float]:
        return [self.evaluate(g) for g in graphs]


class GroundTruthScorer(BlackBox):
    """Scores a graph by signed, importance-weighted motif overlap.

    overlap_k is the mean edge weight of motif k's edges in the graph,
    so 1 when fully present and 0 when fully absent. The raw score sums
    class_sign_k * (2*overlap_k - 1) * u_k and is squashed through a
    logistic with steepness beta.
    """

    concurrency_safe = True

    def __init__(self, n: int, motifs: Sequence[Motif],
                 importances: Sequence[float], beta: float = 2.0):
        if len(importances) != len(motifs):
            raise ConfigurationError("one importance per motif required")
        if beta <= 0:
            raise ConfigurationError("steepness beta must be positive")
        for m in motifs:
            if m.class_sign is None:
                raise ConfigurationError(f"motif {m.id} has no class sign")
            if m.max_node() >= n:
                raise UniverseMismatchError(
                    f"motif {m.id} exceeds node universe [0, {n})")
        for u in importances:
            if u < 0:
                raise ConfigurationError("importances must be nonnegative")
        self.n = n
        self.motifs = tuple(motifs)
        self.importances = tuple(float(u) for u in importances)
        self.beta = float(beta)

    def evaluate(self, g: Graph) -> float:
        if g.n != self.n:
            raise UniverseMismatchError(
                f"graph over {g.n} nodes, scorer over {self.n}")
        raw = 0.0
        for m, u in zip(self.motifs, self.importances):
            overlap = sum(g.weight(e) for e in m.edges) / len(m.edges)
            raw += m.class_sign * (2.0 * overlap - 1.0) * u
        return sigmoid(self.beta * raw)


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters for the linear surrogate. The optimizer is
    full-batch with zero initialization, so it uses no randomness; seed
    is kept for interface stability and reproducibility records."""

    learning_rate: float = 0.5
    epochs: int = 300
    seed: int = 0


class LinearSurrogate(BlackBox):
    """Logistic model over the n*(n-1)/2 node-pair weight features."""

    concurrency_safe = True

    def __init__(self, n: int, weights: np.ndarray, bias: float,
                 config: TrainConfig | None = None,
                 train_accuracy: float | None = None):
        dim = n * (n - 1) // 2
        weights = np.asarray(weights, dtype=np.float64)
        if weights.shape != (dim,):
            raise ConfigurationError(
                f"weight vector must have length {dim}, got {weights.shape}")
        self.n = n
        self.weights = weights
        self.bias = float(bias)
        self.config = config
        self.train_accuracy = train_accuracy

    def _features(self, g: Graph) -> np.ndarray:
        if g.n != self.n:
            raise UniverseMismatchError(
                f"graph over {g.n} nodes, surrogate over {self.n}")
        x = np.zeros(self.n * (self.n - 1) // 2, dtype=np.float64)
        for u, v in g.edges:
            x[pair_index(u, v, self.n)] = g.weight((u, v))
        return x

    def evaluate(self, g: Graph) -> float:
        z = float(self.weights @ self._features(g)) + self.bias
        return sigmoid(z)


def _feature_matrix(d: LabeledDataset) -> np.ndarray:
    x = np.zeros((len(d), d.n * (d.n - 1) // 2), dtype=np.float64)
    for i, g in enumerate(d.graphs):
        for u, v in g.edges:
            x[i, pair_index(u, v, d.n)] = g.weight((u, v))
    return x


def train_linear_surrogate(d: LabeledDataset,
                           config: TrainConfig | None = None) -> LinearSurrogate:
    """Fit the logistic surrogate by full-batch gradient descent on the
    cross-entropy loss. Deterministic: zero initialization, fixed epoch
    count, no sampling."""
    config = config or TrainConfig()
    if len(d) == 0:
        raise DegenerateTrainingError("cannot train on an empty dataset")
    labels = np.asarray(d.labels, dtype=np.float64)
    if labels.min() == labels.max():
        raise DegenerateTrainingError("training data contains a single class")
    x = _feature_matrix(d)
    w = np.zeros(x.shape[1], dtype=np.float64)
    b = 0.0
    lr = config.learning_rate
    m = float(len(d))
    for _ in range(config.epochs):
        z = x @ w + b
        p = 1.0 / (1.0 + np.exp(-np.clip(z, -500, 500)))
        err = p - labels
        w -= lr * (x.T @ err) / m
        b -= lr * float(err.sum()) / m
    z = x @ w + b
    acc = float(np.mean((z > 0).astype(np.float64) == labels))
    return LinearSurrogate(d.n, w, b, config, acc)


def accuracy(bb: BlackBox, d: LabeledDataset) -> float:
    """Fraction of graphs whose thresholded prediction matches the label."""
    if len(d) == 0:
        raise DegenerateTrainingError("accuracy over an empty dataset")
    hits = 0
    for g, lab in zip(d.graphs, d.labels):
        hits += int((bb.evaluate(g) > 0.5) == (lab == 1))
    return hits / len(d)


# --- external process client and server --------------------------------


def _graph_wire_edges(g: Graph) -> list[list[float]]:
    return [[u, v, g.weight((u, v))] for u, v in g.sorted_edges()]


class ExternalBlackBox(BlackBox):
    """Client for a classifier running as a child process.

    Protocol (one JSON object per line, over the child's stdin/stdout):
    the client opens with {"hello": "motif-shap/1"} and expects
    {"ready": true}; each query {"id", "n", "edges": [[u, v, w], ...]}
    is answered by {"id", "p"} with matching id and p in [0, 1]. One
    request is in flight at a time. Any deviation (process exit,
    malformed reply, id mismatch, out-of-range p, timeout) raises
    TransportError; there are no silent fallbacks.
    """

    concurrency_safe = False

    def __init__(self, command: Sequence[str], timeout: float = 30.0):
        if not command:
            raise ConfigurationError("external black-box command is empty")
        self.command = list(command)
        self.timeout = float(timeout)
        self._next_id = 0
        self._rxbuf = bytearray()
        try:
            self._proc = subprocess.Popen(
                self.command, stdin=subprocess.PIPE, stdout=subprocess.PIPE,
                bufsize=0)
        except OSError as exc:
            raise TransportError(f"cannot start {self.command[0]}: {exc}") from exc
        try:
            self._send({"hello": PROTOCOL_HELLO})
            reply = self._recv()
            if reply.get("ready") is not True:
                raise TransportError(f"bad handshake reply: {reply!r}")
        except BaseException:
            self.close()
            raise

    def _send(self, obj: dict) -> None:
        line = json.dumps(obj, separators=(",", ":")) + "\n"
        try:
            self._proc.stdin.write(line.encode("utf-8"))
            self._proc.stdin.flush()
        except (OSError, ValueError, BrokenPipeError) as exc:
            raise TransportError(f"write to external black-box failed: {exc}") from exc

    def _recv(self) -> dict:
        deadline = time.monotonic() + self.timeout
        fd = self._proc.stdout.fileno()
        while b"\n" not in self._rxbuf:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                raise TransportError(
                    f"external black-box timed out after {self.timeout}s")
            readable, _, _ = select.select([fd], [], [], remaining)
            if not readable:
                continue
            chunk = os.read(fd, 65536)
            if not chunk:
                raise TransportError("external black-box closed its output")
            self._rxbuf.extend(chunk)
        line, _, rest = bytes(self._rxbuf).partition(b"\n")
        self._rxbuf = bytearray(rest)
        try:
            obj = json.loads(line.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise TransportError(f"malformed reply line: {line!r}") from exc
        if not isinstance(obj, dict):
            raise TransportError(f"reply is not a JSON object: {obj!r}")
        return obj

    def evaluate(self, g: Graph) -> float:
        if self._proc.poll() is not None:
            raise TransportError(
                f"external black-box exited with code {self._proc.returncode}")
        rid = self._next_id
        self._next_id += 1
        self._send({"id": rid, "n": g.n, "edges": _graph_wire_edges(g)})
        reply = self._recv()
        if reply.get("id") != rid:
            raise TransportError(
                f"reply id {reply.get('id')!r} does not match request {rid}")
        p = reply.get("p")
        if not isinstance(p, (int, float)) or isinstance(p, bool):
            raise TransportError(f"reply probability is not a number: {p!r}")
        p = float(p)
        if not 0.0 <= p <= 1.0 or math.isnan(p):
            raise TransportError(f"reply probability {p} outside [0, 1]")
        return p

    def close(self) -> None:
        proc = getattr(self, "_proc", None)
        if proc is None:
            return
        try:
            if proc.stdin:
                proc.stdin.close()
        except OSError:
            pass
        try:
            proc.wait(timeout=5.0)
        except subprocess.TimeoutExpired:
            proc.kill()
            proc.wait()

    def __enter__(self) -> "ExternalBlackBox":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def _parse_wire_graph(obj: dict) -> Graph:
    n = int(obj["n"])
    edges = {}
    for item in obj["edges"]:
        u, v, w = int(item[0]), int(item[1]), float(item[2])
        if not 0.0 <= w <= 1.0:
            raise ValueError(f"edge weight {w} outside [0, 1]")
        edges[(u, v)] = w
    return Graph.from_edges(n, list(edges), edges)


def serve(bb: BlackBox, stdin: IO[str] | None = None,
          stdout: IO[str] | None = None) -> None:
    """Run the server side of the wire protocol until end of input.

    Replies in request order. A malformed line raises InputFormatError so
    the CLI can exit with the format-error code instead of answering
    garbage."""
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout

    def reply(obj: dict) -> None:
        stdout.write(json.dumps(obj, separators=(",", ":")) + "\n")
        stdout.flush()

    first = stdin.readline()
    if not first:
        return
    try:
        hello = json.loads(first)
        if hello.get("hello") != PROTOCOL_HELLO:
            raise ValueError(f"unexpected handshake {hello!r}")
    except (json.JSONDecodeError, AttributeError, ValueError) as exc:
        raise InputFormatError(f"bad handshake: {exc}") from exc
    reply({"ready": True})

    for line in stdin:
        line = line.strip()
        if not line:
            continue
        try:
            req = json.loads(line)
            rid = req["id"]
            g = _parse_wire_graph(req)
        except (json.JSONDecodeError, KeyError, TypeError, ValueError, IndexError) as exc:
            raise InputFormatError(f"bad request: {exc}") from exc
        reply({"id": rid, "p": bb.evaluate(g)})
