"""Command-line interface.

Subcommands cover the full workflow: synth (benchmark generation), mine
and rank (motif discovery), explain (Shapley scores for one graph, every
graph, or a graph file), eval (separability / expected / approx-corr /
global reports), pipeline (declarative stage list), and blackbox-serve
(expose a built-in black box over the external wire protocol).

Every output file is written atomically and gets a sidecar
<out>.manifest.json recording the tool version, subcommand, resolved
configuration, input digests, seed and timestamp, so runs can be audited
and reproduced. All randomness flows from explicit --seed flags; errors
are printed to stderr as one-line JSON and mapped to exit codes 2
(usage), 3 (input format) and 4 (black-box transport).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import shlex
import statistics
import sys
from datetime import datetime, timezone
from typing import Sequence

from .blackbox import (
    BlackBox,
    ExternalBlackBox,
    GroundTruthScorer,
    TrainConfig,
    serve,
    train_linear_surrogate,
)
from .engine import (
    DEFAULT_EXACT_LIMIT,
    Explanation,
    WeightingScheme,
    approx_explain,
    exact_explain,
)
from .errors import (
    InputFormatError,
    MotifShapError,
    ParameterError,
    UndefinedCorrelationError,
)
from .graphs import (
    Graph,
    LabeledDataset,
    Motif,
    atomic_write_text,
    dataset_to_json,
    load_dataset,
    load_graph_file,
    load_motifs,
    motifs_to_json,
)
from .masking import MaskingStrategy
from .mining import MinerConfig, RankerConfig, cross_support, mine, rank_and_select
from .stats import expected_scores, global_ranking, pearson, separability
from .synth import InjectionRecord, SynthConfig, generate

TOOL_VERSION = "0.1.0"
FORMAT_VERSION = "1"

_WEIGHT_CHOICES = {
    "classic": WeightingScheme.classic,
    "paper": WeightingScheme.paper_inverse,
    "paper-direct": WeightingScheme.paper_direct,
}


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so the CLI controls exit
    codes and error formatting."""

    def error(self, message):
        raise ParameterError(message)


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _jsonable_config(args: argparse.Namespace) -> dict:
    skip = {"cmd", "evalcmd"}
    out = {}
    for key, value in sorted(vars(args).items()):
        if key in skip:
            continue
        out[key] = value
    return out


def _write_manifest(out_path: str, subcommand: str, args: argparse.Namespace,
                    inputs: Sequence[str], seed: int | None,
                    extra: dict | None = None) -> None:
    manifest = {
        "tool": "motifshap",
        "tool_version": TOOL_VERSION,
        "format_version": FORMAT_VERSION,
        "subcommand": subcommand,
        "config": _jsonable_config(args),
        "inputs": {p: _sha256(p) for p in inputs},
        "output": out_path,
        "output_digest": _sha256(out_path),
        "seed": seed,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    if extra:
        manifest["extra"] = extra
    atomic_write_text(out_path + ".manifest.json",
                      json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _parse_rho(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(tok) for tok in text.split(",") if tok.strip() != "")
    except ValueError as exc:
        raise ParameterError(f"cannot parse rho list {text!r}: {exc}") from exc
    if not values:
        raise ParameterError("rho list is empty")
    return values


def _load_correlation(spec: str, n_m: int) -> tuple[tuple[float, ...], ...] | None:
    """Correlation matrix from a JSON file of sparse symmetric entries,
    or None for the identity."""
    if spec == "identity":
        return None
    doc_path = spec
    try:
        with open(doc_path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputFormatError(f"cannot read {doc_path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{doc_path}: invalid JSON: {exc}") from exc
    try:
        file_n_m = int(doc["n_m"])
        entries = doc["entries"]
        mat = [[0.0] * file_n_m for _ in range(file_n_m)]
        for i in range(file_n_m):
            mat[i][i] = 1.0
        for item in entries:
            i, j, c = int(item[0]), int(item[1]), float(item[2])
            if not 0 <= i < file_n_m or not 0 <= j < file_n_m:
                raise ValueError(f"entry ({i}, {j}) out of range")
            if not 0.0 <= c <= 1.0:
                raise ValueError(f"correlation {c} outside [0, 1]")
            mat[i][j] = c
            mat[j][i] = c
        for i in range(file_n_m):
            mat[i][i] = 1.0
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise InputFormatError(f"{doc_path}: malformed correlation file: {exc}") from exc
    if file_n_m != n_m:
        raise ParameterError(
            f"correlation file covers {file_n_m} motifs, expected {n_m}")
    return tuple(tuple(row) for row in mat)


# --- black-box construction --------------------------------------------


def _add_blackbox_flags(p: argparse.ArgumentParser, serve_mode: bool = False) -> None:
    choices = ["scorer", "surrogate"] if serve_mode else ["scorer", "surrogate", "external"]
    p.add_argument("--blackbox", choices=choices, default="scorer",
                   help="black box to query (default: scorer)")
    p.add_argument("--rho", default=None,
                   help="comma-separated motif importances for the scorer")
    p.add_argument("--beta", type=float, default=2.0,
                   help="scorer logistic steepness (default 2.0)")
    p.add_argument("--train-dataset", default=None,
                   help="dataset to train the surrogate on (default: --dataset)")
    p.add_argument("--lr", type=float, default=0.5,
                   help="surrogate learning rate (default 0.5)")
    p.add_argument("--epochs", type=int, default=300,
                   help="surrogate training epochs (default 300)")
    if not serve_mode:
        p.add_argument("--external-cmd", default=None,
                       help="command line of an external black-box process")
        p.add_argument("--timeout", type=float, default=30.0,
                       help="external black-box reply timeout in seconds")


def _build_blackbox(args: argparse.Namespace, n: int, motifs: Sequence[Motif],
                    inputs: list[str]) -> BlackBox:
    if args.blackbox == "scorer":
        if args.rho is None:
            raise ParameterError(
                "--blackbox scorer needs --rho (one importance per motif; "
                "use the generator's rho values on synthetic data)")
        rho = _parse_rho(args.rho)
        return GroundTruthScorer(n, motifs, rho, args.beta)
    if args.blackbox == "surrogate":
        train_path = args.train_dataset or getattr(args, "dataset", None)
        if train_path is None:
            raise ParameterError("--blackbox surrogate needs --train-dataset")
        if train_path not in inputs:
            inputs.append(train_path)
        train_data = load_dataset(train_path)
        cfg = TrainConfig(learning_rate=args.lr, epochs=args.epochs)
        return train_linear_surrogate(train_data, cfg)
    command = shlex.split(args.external_cmd or "")
    if not command:
        raise ParameterError("--blackbox external needs --external-cmd")
    return ExternalBlackBox(command, timeout=args.timeout)


def _close_blackbox(bb: BlackBox) -> None:
    if isinstance(bb, ExternalBlackBox):
        bb.close()


def _strategy(kind: str, dataset: LabeledDataset | None) -> MaskingStrategy:
    if kind == "remove":
        return MaskingStrategy.remove()
    if kind == "toggle":
        return MaskingStrategy.toggle()
    if dataset is None:
        raise ParameterError("--mask average needs --dataset as background")
    return MaskingStrategy.average(dataset)


def _explain_graph(g: Graph, graph_id: int, bb: BlackBox,
                   motifs: Sequence[Motif], strategy: MaskingStrategy,
                   weighting: WeightingScheme, depth: str,
                   normalize: bool, exact_limit: int) -> Explanation:
    if depth == "exact":
        return exact_explain(g, bb, motifs, strategy, weighting,
                             graph_id=graph_id, exact_limit=exact_limit)
    try:
        d = int(depth)
    except ValueError as exc:
        raise ParameterError(f"--depth must be 'exact' or an integer, got {depth!r}") from exc
    return approx_explain(g, bb, motifs, strategy, weighting, depth=d,
                          graph_id=graph_id, normalize=normalize)


def _explanation_doc(ex: Explanation) -> dict:
    return {
        "graph": ex.graph_id,
        "depth": ex.depth,
        "mask": ex.strategy,
        "weights": ex.weighting,
        "queries": ex.query_count,
        "scores": [{"motif": mid, "xi": xi}
                   for mid, xi in zip(ex.motif_ids, ex.scores)],
    }


def _write_csv(path: str, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    atomic_write_text(path, buf.getvalue())


# --- subcommand implementations -----------------------------------------


def _cmd_synth(args: argparse.Namespace) -> int:
    rho = _parse_rho(args.rho)
    corr = _load_correlation(args.corr, args.motifs)
    cfg = SynthConfig(
        n=args.nodes, n_graphs=args.graphs, density=args.density,
        motif_spec=(args.motifs, args.motif_edges), rho=rho,
        correlation=corr, seed=args.seed)
    dataset, record, motifs = generate(cfg)
    inputs = [] if args.corr == "identity" else [args.corr]
    extra = {"injection_rates": list(record.rates())}

    atomic_write_text(args.out, dataset_to_json(dataset) + "\n")
    _write_manifest(args.out, "synth", args, inputs, args.seed, extra)
    atomic_write_text(args.motifs_out, motifs_to_json(args.nodes, motifs) + "\n")
    _write_manifest(args.motifs_out, "synth", args, inputs, args.seed, extra)
    return 0


def _cmd_mine(args: argparse.Namespace) -> int:
    dataset = load_dataset(args.dataset)
    cfg = MinerConfig(support_threshold=args.support, max_size=args.max_size,
                      label=args.label)
    motifs = mine(dataset, cfg)
    atomic_write_text(args.out, motifs_to_json(dataset.n, motifs) + "\n")
    _write_manifest(args.out, "mine", args, [args.dataset], None,
                    {"motif_count": len(motifs)})
    return 0


def _cmd_rank(args: argparse.Namespace) -> int:
    dataset = load_dataset(args.dataset)
    n, motifs = load_motifs(args.motifs)
    if n != dataset.n:
        raise ParameterError(
            f"motif file over {n} nodes, dataset over {dataset.n}")
    cfg = RankerConfig(dt=args.dt, st=args.st, k=args.k)
    selected = rank_and_select(motifs, dataset, cfg)
    scores = [cross_support(m, dataset) for m in selected]
    atomic_write_text(args.out, motifs_to_json(n, selected, scores) + "\n")
    _write_manifest(args.out, "rank", args, [args.dataset, args.motifs], None,
                    {"selected": len(selected)})
    return 0


def _cmd_explain(args: argparse.Namespace) -> int:
    n, motifs = load_motifs(args.motifs)
    inputs = [args.motifs]
    dataset = None
    if args.dataset is not None:
        dataset = load_dataset(args.dataset)
        inputs.append(args.dataset)
        if dataset.n != n:
            raise ParameterError(
                f"motif file over {n} nodes, dataset over {dataset.n}")

    strategy = _strategy(args.mask, dataset)
    weighting = _WEIGHT_CHOICES[args.weights]()
    bb = _build_blackbox(args, n, motifs, inputs)
    try:
        if args.graph == "all":
            if dataset is None:
                raise ParameterError("--graph all needs --dataset")
            docs = []
            for i, g in enumerate(dataset.graphs):
                ex = _explain_graph(g, i, bb, motifs, strategy, weighting,
                                    args.depth, args.normalize, args.exact_limit)
                docs.append(_explanation_doc(ex))
            payload = json.dumps(docs, separators=(",", ":"))
        else:
            try:
                index = int(args.graph)
            except ValueError:
                index = None
            if index is not None:
                if dataset is None:
                    raise ParameterError("--graph <index> needs --dataset")
                if not 0 <= index < len(dataset):
                    raise ParameterError(
                        f"graph index {index} out of range [0, {len(dataset)})")
                g, gid = dataset.graphs[index], index
            else:
                g, gid = load_graph_file(args.graph), 0
                inputs.append(args.graph)
                if g.n != n:
                    raise ParameterError(
                        f"graph file over {g.n} nodes, motifs over {n}")
            ex = _explain_graph(g, gid, bb, motifs, strategy, weighting,
                                args.depth, args.normalize, args.exact_limit)
            payload = json.dumps(_explanation_doc(ex), separators=(",", ":"))
    finally:
        _close_blackbox(bb)

    atomic_write_text(args.out, payload + "\n")
    _write_manifest(args.out, "explain", args, inputs, None)
    return 0


def _cmd_eval_separability(args: argparse.Namespace) -> int:
    dataset = load_dataset(args.dataset)
    report = separability(dataset, max_pairs=args.max_pairs, seed=args.seed)
    doc = {
        "ks_statistic": report.ks_statistic,
        "p_value": report.p_value,
        "n_intra": report.n_intra,
        "n_inter": report.n_inter,
    }
    atomic_write_text(args.out, json.dumps(doc, separators=(",", ":")) + "\n")
    _write_manifest(args.out, "eval separability", args, [args.dataset], args.seed)
    if args.csv:
        _write_csv(args.csv, ["ks_statistic", "p_value", "n_intra", "n_inter"],
                   [[report.ks_statistic, report.p_value,
                     report.n_intra, report.n_inter]])
    return 0


def _cmd_eval_expected(args: argparse.Namespace) -> int:
    dataset = load_dataset(args.dataset)
    if dataset.injections is None:
        raise ParameterError(f"{args.dataset} carries no injection record")
    n, motifs = load_motifs(args.motifs)
    rho = _parse_rho(args.rho)
    table = expected_scores(InjectionRecord(dataset.injections), motifs, rho)
    doc = {
        "n_g": len(table.matrix),
        "n_m": len(motifs),
        "matrix": [list(row) for row in table.matrix],
    }
    atomic_write_text(args.out, json.dumps(doc, separators=(",", ":")) + "\n")
    _write_manifest(args.out, "eval expected", args,
                    [args.dataset, args.motifs], None)
    if args.csv:
        rows = [[i, motifs[j].id, table.matrix[i][j]]
                for i in range(len(table.matrix)) for j in range(len(motifs))]
        _write_csv(args.csv, ["graph", "motif", "expected_score"], rows)
    return 0


def _select_graph_indices(dataset: LabeledDataset, limit: int | None) -> list[int]:
    indices = list(range(len(dataset)))
    if limit is not None:
        if limit < 1:
            raise ParameterError("--limit must be >= 1")
        indices = indices[:limit]
    return indices


def _cmd_eval_approx_corr(args: argparse.Namespace) -> int:
    dataset = load_dataset(args.dataset)
    n, motifs = load_motifs(args.motifs)
    if n != dataset.n:
        raise ParameterError(f"motif file over {n} nodes, dataset over {dataset.n}")
    try:
        depths = sorted({int(tok) for tok in args.depths.split(",") if tok.strip()})
    except ValueError as exc:
        raise ParameterError(f"cannot parse depth list {args.depths!r}") from exc
    if not depths:
        raise ParameterError("depth list is empty")
    for d in depths:
        if not 1 <= d <= len(motifs):
            raise ParameterError(f"depth {d} out of range [1, {len(motifs)}]")

    strategy = _strategy(args.mask, dataset)
    weighting = _WEIGHT_CHOICES[args.weights]()
    inputs = [args.dataset, args.motifs]
    bb = _build_blackbox(args, n, motifs, inputs)
    per_graph = []
    rows = []
    by_depth: dict[int, list[float]] = {d: [] for d in depths}
    skipped = 0
    try:
        for i in _select_graph_indices(dataset, args.limit):
            g = dataset.graphs[i]
            exact = exact_explain(g, bb, motifs, strategy, weighting,
                                  graph_id=i, exact_limit=args.exact_limit)
            entry: dict = {"graph": i, "pearson": {}}
            for d in depths:
                approx = approx_explain(g, bb, motifs, strategy, weighting,
                                        depth=d, graph_id=i)
                try:
                    r = pearson(approx.scores, exact.scores)
                except UndefinedCorrelationError:
                    r = None
                    skipped += 1
                entry["pearson"][str(d)] = r
                rows.append([i, d, "" if r is None else r])
                if r is not None:
                    by_depth[d].append(r)
            per_graph.append(entry)
    finally:
        _close_blackbox(bb)

    summary = {str(d): (statistics.median(v) if v else None)
               for d, v in by_depth.items()}
    doc = {
        "depths": depths,
        "median_pearson": summary,
        "undefined": skipped,
        "per_graph": per_graph,
    }
    atomic_write_text(args.out, json.dumps(doc, separators=(",", ":")) + "\n")
    _write_manifest(args.out, "eval approx-corr", args, inputs, None)
    if args.csv:
        _write_csv(args.csv, ["graph", "depth", "pearson"], rows)
    return 0


def _cmd_eval_global(args: argparse.Namespace) -> int:
    dataset = load_dataset(args.dataset)
    n, motifs = load_motifs(args.motifs)
    if n != dataset.n:
        raise ParameterError(f"motif file over {n} nodes, dataset over {dataset.n}")
    strategy = _strategy(args.mask, dataset)
    weighting = _WEIGHT_CHOICES[args.weights]()
    inputs = [args.dataset, args.motifs]
    bb = _build_blackbox(args, n, motifs, inputs)
    explanations = []
    try:
        for i in _select_graph_indices(dataset, args.limit):
            explanations.append(
                _explain_graph(dataset.graphs[i], i, bb, motifs, strategy,
                               weighting, args.depth, False, args.exact_limit))
    finally:
        _close_blackbox(bb)

    ranking = global_ranking(explanations)
    position = {mid: pos for pos, mid in enumerate(explanations[0].motif_ids)}
    signed = {}
    for mid, _ in ranking:
        pos = position[mid]
        signed[mid] = sum(ex.scores[pos] for ex in explanations) / len(explanations)
    rho = _parse_rho(args.rho) if args.rho else None
    entries = []
    for mid, mean_abs in ranking:
        entry = {"motif": mid, "mean_abs_xi": mean_abs, "mean_xi": signed[mid]}
        entries.append(entry)
    doc = {"graphs": len(explanations), "ranking": entries}
    atomic_write_text(args.out, json.dumps(doc, separators=(",", ":")) + "\n")
    _write_manifest(args.out, "eval global", args, inputs, None)
    if args.csv:
        rows = []
        for mid, mean_abs in ranking:
            rho_val = ""
            if rho is not None and 0 <= position[mid] < len(rho):
                rho_val = rho[position[mid]]
            rows.append([mid, rho_val, signed[mid], mean_abs])
        _write_csv(args.csv, ["motif", "rho", "mean_xi", "mean_abs_xi"], rows)
    return 0


def _cmd_pipeline(args: argparse.Namespace) -> int:
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputFormatError(f"cannot read {args.config}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{args.config}: invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("stages"), list):
        raise InputFormatError(
            f"{args.config}: pipeline config must be an object with a 'stages' list")
    stages = doc["stages"]
    for pos, stage in enumerate(stages):
        if (not isinstance(stage, dict) or not isinstance(stage.get("run"), str)
                or not isinstance(stage.get("args"), list)
                or not all(isinstance(a, str) for a in stage["args"])):
            raise InputFormatError(
                f"{args.config}: stage {pos} must be "
                "{\"run\": <subcommand>, \"args\": [<string>, ...]}")
        if stage["run"] == "pipeline":
            raise ParameterError("pipelines cannot nest pipeline stages")
    for stage in stages:
        code = run([stage["run"], *stage["args"]])
        if code != 0:
            return code
    return 0


def _cmd_blackbox_serve(args: argparse.Namespace) -> int:
    if args.blackbox == "scorer":
        n, motifs = load_motifs(args.motifs)
        if args.rho is None:
            raise ParameterError("--blackbox scorer needs --rho")
        bb: BlackBox = GroundTruthScorer(n, motifs, _parse_rho(args.rho), args.beta)
    else:
        if args.train_dataset is None:
            raise ParameterError("--blackbox surrogate needs --train-dataset")
        train_data = load_dataset(args.train_dataset)
        bb = train_linear_surrogate(
            train_data, TrainConfig(learning_rate=args.lr, epochs=args.epochs))
    serve(bb)
    return 0


# --- parser -------------------------------------------------------------


def _add_explain_engine_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mask", choices=["remove", "average", "toggle"],
                   default="remove", help="masking strategy (default remove)")
    p.add_argument("--weights", choices=sorted(_WEIGHT_CHOICES), default="classic",
                   help="coalition weighting (default classic)")
    p.add_argument("--exact-limit", type=int, default=DEFAULT_EXACT_LIMIT,
                   help="largest motif count allowed for exact lattices")


def build_parser() -> _Parser:
    parser = _Parser(prog="motifshap",
                     description="Shapley-based motif explanations for "
                                 "black-box graph classifiers")
    parser.add_argument(
        "--version", action="version",
        version=f"motifshap {TOOL_VERSION} "
                f"(file format {FORMAT_VERSION}, wire protocol motif-shap/1)")
    sub = parser.add_subparsers(dest="cmd", required=True, metavar="<command>")

    p = sub.add_parser("synth", help="generate a synthetic benchmark dataset")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--graphs", type=int, required=True)
    p.add_argument("--density", type=float, required=True)
    p.add_argument("--motifs", type=int, required=True,
                   help="number of motifs to sample and inject")
    p.add_argument("--motif-edges", type=int, required=True)
    p.add_argument("--rho", required=True,
                   help="comma-separated injection probabilities, one per motif")
    p.add_argument("--corr", default="identity",
                   help="correlation matrix JSON file, or 'identity'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="dataset output path")
    p.add_argument("--motifs-out", required=True, help="motif file output path")

    p = sub.add_parser("mine", help="mine frequent connected motifs")
    p.add_argument("--dataset", required=True)
    p.add_argument("--support", type=int, required=True)
    p.add_argument("--max-size", type=int, required=True,
                   help="largest motif size in edges")
    p.add_argument("--label", type=int, choices=[0, 1], default=None,
                   help="mine only graphs of this label")
    p.add_argument("--out", required=True)

    p = sub.add_parser("rank", help="rank motifs by cross-support and select "
                                    "a diverse subset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--motifs", required=True)
    p.add_argument("--dt", type=float, default=0.85,
                   help="minimum Jaccard distance between selections")
    p.add_argument("--st", type=int, default=3, help="minimum edge count")
    p.add_argument("--k", type=int, default=10, help="number of motifs to keep")
    p.add_argument("--out", required=True)

    p = sub.add_parser("explain", help="compute explanation scores for a graph")
    p.add_argument("--motifs", required=True)
    p.add_argument("--dataset", default=None,
                   help="dataset file (graph indices, masking background, "
                        "surrogate training)")
    p.add_argument("--graph", required=True,
                   help="graph index into --dataset, a graph JSON file, or 'all'")
    p.add_argument("--depth", default="exact",
                   help="'exact' or an approximation depth >= 1")
    p.add_argument("--normalize", action="store_true",
                   help="rescale approximate scores to the exact efficiency gap")
    _add_explain_engine_flags(p)
    _add_blackbox_flags(p)
    p.add_argument("--out", required=True)

    p = sub.add_parser("eval", help="evaluation statistics")
    esub = p.add_subparsers(dest="evalcmd", required=True, metavar="<report>")

    q = esub.add_parser("separability", help="KS separation of intra/inter "
                                             "class Jaccard distances")
    q.add_argument("--dataset", required=True)
    q.add_argument("--max-pairs", type=int, default=None,
                   help="subsample each distance list to this many pairs")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--out", required=True)
    q.add_argument("--csv", default=None)

    q = esub.add_parser("expected", help="expected explanation scores from "
                                         "the injection record")
    q.add_argument("--dataset", required=True)
    q.add_argument("--motifs", required=True)
    q.add_argument("--rho", required=True)
    q.add_argument("--out", required=True)
    q.add_argument("--csv", default=None)

    q = esub.add_parser("approx-corr", help="per-graph correlation of "
                                            "depth-limited vs exact scores")
    q.add_argument("--dataset", required=True)
    q.add_argument("--motifs", required=True)
    q.add_argument("--depths", required=True, help="comma-separated depths")
    q.add_argument("--limit", type=int, default=None,
                   help="explain only the first N graphs")
    _add_explain_engine_flags(q)
    _add_blackbox_flags(q)
    q.add_argument("--out", required=True)
    q.add_argument("--csv", default=None)

    q = esub.add_parser("global", help="global motif ranking by mean |score|")
    q.add_argument("--dataset", required=True)
    q.add_argument("--motifs", required=True)
    q.add_argument("--depth", default="exact")
    q.add_argument("--limit", type=int, default=None)
    _add_explain_engine_flags(q)
    _add_blackbox_flags(q)
    q.add_argument("--out", required=True)
    q.add_argument("--csv", default=None)

    p = sub.add_parser("pipeline", help="run a declarative stage list")
    p.add_argument("config", help="pipeline config JSON")

    p = sub.add_parser("blackbox-serve",
                       help="serve a built-in black box over the wire protocol")
    p.add_argument("--motifs", default=None,
                   help="motif file for the scorer black box")
    _add_blackbox_flags(p, serve_mode=True)

    return parser


_DISPATCH = {
    "synth": _cmd_synth,
    "mine": _cmd_mine,
    "rank": _cmd_rank,
    "explain": _cmd_explain,
    "pipeline": _cmd_pipeline,
    "blackbox-serve": _cmd_blackbox_serve,
}

_EVAL_DISPATCH = {
    "separability": _cmd_eval_separability,
    "expected": _cmd_eval_expected,
    "approx-corr": _cmd_eval_approx_corr,
    "global": _cmd_eval_global,
}


def run(argv: Sequence[str]) -> int:
    """Parse and execute; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
        if args.cmd == "eval":
            return _EVAL_DISPATCH[args.evalcmd](args)
        if args.cmd == "blackbox-serve" and args.blackbox == "scorer" \
                and args.motifs is None:
            raise ParameterError("blackbox-serve --blackbox scorer needs --motifs")
        return _DISPATCH[args.cmd](args)
    except MotifShapError as exc:
        line = json.dumps(
            {"error": type(exc).__name__, "detail": str(exc)},
            separators=(",", ":"))
        print(line, file=sys.stderr)
        return exc.exit_code


def console_entry() -> None:
    sys.exit(run(sys.argv[1:]))
