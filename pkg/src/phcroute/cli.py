"""Command-line entry point.

Every subcommand is a thin wrapper: it loads inputs, calls the library and
renders the result. Exit codes: 0 success, 1 usage error, 2 data error,
3 backend error. Credentials for the http backend come from the environment
variable named in the config file (default ``PHCROUTE_API_KEY``).
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import OrderedDict
from pathlib import Path

import numpy as np

from . import __version__
from .anchoring import AmplitudeParams, prediction_table
from .backends import API_KEY_ENV, Backends, FixtureRetriever, InlineRetriever, build_generator, load_backend_config
from .corpus import RunCache, load_dataset, stratify
from .data import fixture
from .exceptions import BackendError, DataError
from .interventions import SIGNALS as SWEEP_SIGNALS
from .interventions import chr_by_condition, parse_conditions, run_sweep
from .oracle import gap_closed, oracle_labels, phc
from .pipeline import SignalConfig, cost_account, evaluate_routing_cached, run_system
from .reports import ReportTable, emit_report, phc_table
from .router import POST_GEN_FEATURES, PRE_GEN_FEATURES, cv_oof, fit, load_model, save_model, threshold_for_rate
from .router.features import FEATURE_NAMES
from .stats import auc, paired_bootstrap

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_BACKEND = 0, 1, 2, 3
MODEL_KINDS = {"logistic": "logistic", "gb": "gb_stumps", "gb_stumps": "gb_stumps"}
PHC_SIGNALS = ("lexical", "blended", "ssc", "rating")
VARIANTS = {"plain": "plain", "m1": "m1_humility", "m2": "m2_elicitation"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so dispatch owns exit codes."""

    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _rates(text: str) -> list[float]:
    try:
        out = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad rate list {text!r}") from None
    if not out or any(not 0.0 < r < 1.0 for r in out):
        raise argparse.ArgumentTypeError("rates must lie in (0, 1)")
    return out


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from None


def _read_jsonl(path) -> list[dict]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if line.strip():
                try:
                    rows.append(json.loads(line))
                except json.JSONDecodeError as exc:
                    raise DataError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from exc
    return rows


def _emit(tables, args, out=None) -> None:
    """Print tables to stdout, and also write them when --report is set."""
    out = out or sys.stdout
    for t in tables:
        out.write(t.to_markdown() if args.format == "markdown" else t.to_csv())
    if getattr(args, "report", None):
        emit_report(tables, args.format, args.report)


# ---------------------------------------------------------------------------
# ingest


def cmd_ingest(args) -> int:
    records = load_dataset(args.dataset)
    t = ReportTable(f"Strata by {args.stratify}", ["stratum", "N"])
    for label, rs in stratify(records, args.stratify).items():
        t.add(label, len(rs))
    t.footnotes.append(f"{len(records)} queries loaded from {Path(args.dataset).name}.")
    _emit([t], args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# run


def _backends(args, queries) -> Backends:
    config = load_backend_config(args.config) if args.config else {}
    lookup = {q.id: q for q in queries}
    if args.backend == "synthetic":
        config.setdefault("synthetic", {}).setdefault("seed", args.seed)
    generator = build_generator(args.backend, config, args.replay or (), lookup)
    retriever = FixtureRetriever(args.retrieval) if args.retrieval else InlineRetriever(queries)
    graph = FixtureRetriever(args.graph_retrieval) if args.graph_retrieval else None
    return Backends(
        generator=generator,
        retriever=retriever,
        graph_retriever=graph,
        top_k=args.top_k,
        max_inflight=args.max_inflight,
    )


def _final_answers(queries, runs):
    """Per-query final record: the escalated record when present, else vanilla."""
    final = {}
    for r in runs:
        if r.condition_tag == "escalated" or r.query_id not in final:
            final[r.query_id] = r
    return [final[q.id] for q in queries if q.id in final]


def run_summary(queries, runs, title: str) -> ReportTable:
    datasets = {q.id: q.dataset for q in queries}
    final = _final_answers(queries, runs)
    cost = cost_account(runs, datasets=datasets)
    t = ReportTable(title, ["dataset", "N", "F1", "EM", "esc_rate", "VR_calls", "GR_calls", "aux_calls", "latency_ms"],
                    precision={"latency_ms": 1})
    by: dict[str, list] = OrderedDict()
    for r in final:
        by.setdefault(datasets[r.query_id], []).append(r)
    f1_means = []
    for name in sorted(by):
        rs = by[name]
        f1 = float(np.mean([r.f1 for r in rs]))
        f1_means.append(f1)
        d = cost.per_dataset[name]
        t.add(name, len(rs), f1, float(np.mean([r.em for r in rs])), d["escalation_rate"],
              d["vr_calls"], d["gr_calls"], d["aux_calls"], d["latency_ms"])
    t.add("macro", len(final), float(np.mean(f1_means)) if f1_means else 0.0,
          float(np.mean([r.em for r in final])) if final else 0.0, cost.escalation_rate,
          cost.vr_calls, cost.gr_calls, cost.aux_calls, cost.macro_latency_ms)
    t.footnotes.append("F1 = token-overlap F1 of the final answer; macro = mean over datasets.")
    return t


def cmd_run(args) -> int:
    queries = load_dataset(args.dataset)
    backends = _backends(args, queries)
    model = load_model(args.model) if args.model else None
    if args.policy == "learned" and model is None:
        raise UsageError("--policy learned needs --model")
    cache = RunCache(args.cache) if args.cache else None
    runs = run_system(queries, backends, system=args.system, policy=args.policy,
                      signal_config=SignalConfig(preset=args.preset), model=model,
                      escalation_rate=args.escalation_rate, tau=args.tau, cache=cache)
    _emit([run_summary(queries, runs, f"Run: {args.system} / {args.policy}")], args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# phc


def cache_pairs(queries, runs, signal: str):
    """(query, conf, vr_f1, gr_f1) for queries with both a vanilla and an escalated record."""
    vanilla, graph = {}, {}
    for r in runs:
        if r.system == "vanilla":
            vanilla[r.query_id] = r
        elif r.condition_tag == "escalated":
            graph[r.query_id] = r
    out = []
    for q in queries:
        if q.id in vanilla and q.id in graph:
            conf = (vanilla[q.id].signals or {}).get(signal)
            if conf is None:
                raise DataError(f"query {q.id}: vanilla record has no {signal!r} signal")
            out.append((q, float(conf), vanilla[q.id].f1, graph[q.id].f1))
    return out


def _stratum_filter(stratum: str):
    if stratum == "all":
        return lambda q: True
    key, _, value = stratum.partition("=")
    if key == "hop" and value:
        return lambda q: q.hop_count == int(value)
    if key == "type" and value:
        return lambda q: q.query_type == value
    if key == "dataset" and value:
        return lambda q: q.dataset == value
    raise UsageError(f"bad --stratum {stratum!r}; use all, hop=N, type=T or dataset=D")


def cmd_phc(args) -> int:
    queries = load_dataset(args.dataset)
    runs = RunCache(args.cache).read()
    keep = _stratum_filter(args.stratum)
    rows = [row for row in cache_pairs(queries, runs, args.signal) if keep(row[0])]
    if not rows:
        raise DataError(f"no queries with vanilla and graph records in stratum {args.stratum}")
    conf = [r[1] for r in rows]
    labels = oracle_labels([r[2] for r in rows], [r[3] for r in rows])
    res = phc(conf, labels, B=args.permutations, seed=args.seed, stratum=args.stratum)
    _emit([phc_table([(res.stratum, args.signal, res)])], args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# route-train


def _feature_names(spec: str) -> tuple[str, ...]:
    if spec == "all":
        return FEATURE_NAMES
    if spec == "pre":
        return PRE_GEN_FEATURES
    if spec == "post":
        return POST_GEN_FEATURES
    names = tuple(x.strip() for x in spec.split(",") if x.strip())
    unknown = [n for n in names if n not in FEATURE_NAMES]
    if unknown or not names:
        raise UsageError(f"unknown features {unknown}; choose from {', '.join(FEATURE_NAMES)}")
    return names


def _training_matrix(args):
    if args.simworld:
        from .simworld import gen_routing_world

        world = gen_routing_world(N=args.n, seed=args.seed)
        return world.features, world.labels
    if not (args.dataset and args.cache):
        raise UsageError("route-train needs --simworld or both --dataset and --cache")
    from .router.features import build_features, passages_meta
    from .signals import SignalVector

    queries = load_dataset(args.dataset)
    runs = RunCache(args.cache).read()
    retriever = FixtureRetriever(args.retrieval) if args.retrieval else InlineRetriever(queries)
    vanilla = {r.query_id: r for r in runs if r.system == "vanilla"}
    rows, labels = [], []
    for q, _, vr, gr in cache_pairs(queries, runs, "lexical"):
        meta = passages_meta(q.question, retriever.retrieve(q.id, q.question, args.top_k))
        rows.append(build_features(q, meta, SignalVector.from_json(vanilla[q.id].signals)).to_array())
        labels.append(int(gr > vr))
    if not rows:
        raise DataError("no queries with both vanilla and escalated records in the cache")
    return np.vstack(rows), np.asarray(labels)


def cmd_route_train(args) -> int:
    X_all, y = _training_matrix(args)
    names = _feature_names(args.features)
    X = X_all[:, [FEATURE_NAMES.index(n) for n in names]]
    kind = MODEL_KINDS[args.model]
    oof = cv_oof(X, y, k=args.folds, seed=args.seed, estimator=kind, feature_names=names)
    model = fit(X, y, kind=kind, seed=args.seed, feature_names=names)
    t = ReportTable(f"Router: {kind}", ["feature", "importance"])
    for name, value in sorted(model.feature_importance().items(), key=lambda kv: (-kv[1], kv[0])):
        t.add(name, float(value))
    t.footnotes.append(f"OOF AUC ({args.folds}-fold, N={len(y)}): {auc(oof, y):.3f}")
    if args.out:
        save_model(model, args.out)
        t.footnotes.append(f"Model written to {args.out}.")
    _emit([t], args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# route-eval


def routing_eval_table(rows, rates, bootstrap_col=None, n_boot=10000, seed=42) -> list[ReportTable]:
    """Matched-rate evaluation of a cached per-query routing table."""
    groups = [r["dataset"] for r in rows]
    pairs = [(float(r["vr_f1"]), float(r["gr_f1"])) for r in rows]
    scores = np.array([float(r["score"]) for r in rows])
    N = len(rows)
    vr_macro, _ = evaluate_routing_cached(pairs, np.zeros(N, bool), groups)
    gr_macro, _ = evaluate_routing_cached(pairs, np.ones(N, bool), groups)
    oracle = oracle_labels([p[0] for p in pairs], [p[1] for p in pairs]).astype(bool)
    or_macro, _ = evaluate_routing_cached(pairs, oracle, groups)

    t = ReportTable("Routing evaluation", ["system", "esc_rate", "GR_calls", "macro_F1", "gap_closed"])
    t.add("VanillaRAG", 0.0, 0, vr_macro, 0.0)
    per_rate = {}
    for rate in rates:
        d = scores >= threshold_for_rate(scores, rate)
        macro, per_query = evaluate_routing_cached(pairs, d, groups)
        per_rate[rate] = per_query
        t.add(f"learned@{rate:.2f}", float(d.mean()), int(d.sum()), macro, gap_closed(macro, vr_macro, or_macro))
    t.add("GraphRAG", 1.0, N, gr_macro, gap_closed(gr_macro, vr_macro, or_macro))
    t.add("Oracle", float(oracle.mean()), int(oracle.sum()), or_macro, 1.0)
    t.footnotes.append("F1 = token-overlap. Oracle = per-query best. Macro = mean over datasets.")
    tables = [t]
    if bootstrap_col:
        if bootstrap_col not in rows[0]:
            raise DataError(f"routing table has no column {bootstrap_col!r}")
        other = np.array([bool(int(r[bootstrap_col])) for r in rows])
        o_macro, o_f1 = evaluate_routing_cached(pairs, other, groups)
        b = ReportTable(f"Paired bootstrap vs {bootstrap_col}", ["system", "other_F1", "delta", "ci_low", "ci_high", "p"],
                        precision={"p": 4})
        for rate in rates:
            res = paired_bootstrap(per_rate[rate], o_f1, n=n_boot, seed=seed, groups=groups)
            b.add(f"learned@{rate:.2f}", o_macro, res.delta, res.ci_low, res.ci_high, res.p_value)
        b.footnotes.append(f"{n_boot} resamples within datasets, seed {seed}.")
        tables.append(b)
    return tables


def cmd_route_eval(args) -> int:
    rows = _read_jsonl(args.cached or fixture("routing_table.jsonl"))
    if not rows:
        raise DataError("routing table is empty")
    for i, r in enumerate(rows):
        missing = [k for k in ("dataset", "vr_f1", "gr_f1", "score") if k not in r]
        if missing:
            raise DataError(f"routing table row {i}: missing {missing}")
    _emit(routing_eval_table(rows, args.rates, args.bootstrap_vs, args.bootstrap_n, args.seed), args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# intervene


def cmd_intervene(args) -> int:
    dataset = args.dataset or fixture("sweep_queries.jsonl")
    queries = load_dataset(dataset)
    oracle_path = args.oracle or (fixture("sweep_oracle.json") if not args.dataset else None)
    if oracle_path is None:
        raise UsageError("intervene needs --oracle with fixed oracle labels")
    with open(oracle_path, encoding="utf-8") as fh:
        fixed = {k: int(v) for k, v in json.load(fh).items()}
    if not args.dataset:
        args.retrieval = args.retrieval or str(fixture("sweep_retrieval.jsonl"))
        if args.backend == "replay" and not args.replay:
            args.replay = [str(fixture("sweep_replay.jsonl"))]
    conditions = parse_conditions(args.conditions, retrieval_present=not args.zero_retrieval,
                                  variant=VARIANTS[args.variant])
    backends = _backends(args, queries)
    signal = args.signal or ("elicited" if args.variant == "m2" else "lexical")
    res = run_sweep(queries, conditions, fixed, backends, signal=signal, B=args.permutations, seed=args.seed)
    t = phc_table(res.rows, title="Intervention sweep")
    chr_t = ReportTable("Confident hallucination rate", ["condition", "CHR"])
    if signal != "elicited":
        for tag, value in chr_by_condition(queries, res.answers, signal).items():
            chr_t.add(tag, value)
    t.footnotes.append(f"Fixed oracle labels: {sum(fixed[q.id] for q in queries)} of {len(queries)} positive.")
    _emit([t, chr_t] if chr_t.rows else [t], args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# simulate


def cmd_simulate(args) -> int:
    from . import simworld

    if args.kind == "sweep":
        targets = args.targets or [0.613, 0.656, 0.595, 0.536]
        measured = np.zeros((args.seeds, len(targets)))
        for s in range(args.seeds):
            sw = simworld.gen_sweep(targets, N=args.n, seed=args.seed + s)
            measured[s] = [auc(c, sw.labels) for c in sw.conf]
        t = ReportTable("Simulated sweep", ["condition", "target", "mean_PHC", "sd"])
        for i, target in enumerate(targets):
            t.add(f"k={i}", target, float(measured[:, i].mean()), float(measured[:, i].std(ddof=1)))
        if len(targets) > 1:
            t.footnotes.append(f"k=1 spike positive in {np.mean(measured[:, 1] > measured[:, 0]):.3f} of {args.seeds} seeds.")
        tables = [t]
    elif args.kind == "routing":
        world = simworld.gen_routing_world(N=args.n, q_g=args.qg, seed=args.seed)
        conf = world.columns(["lexical_conf"])[:, 0]
        t = ReportTable(f"Routing gain (Q_G={args.qg})", ["rate", "measured", "predicted"], precision={"measured": 4, "predicted": 4})
        for rate in args.rates:
            d = -conf >= threshold_for_rate(-conf, rate)
            t.add(rate, simworld.routing_gain(world, d), simworld.predicted_gain(world, d, args.qg))
        tables = [t]
    else:
        params = AmplitudeParams(args.alpha, args.beta)
        t = ReportTable("Anchoring predictions", ["n", "k_star", "r", "relative_amplitude", "no_interior_amplification"])
        for p in prediction_table(tuple(range(2, args.max_hops + 1)), params):
            t.add(p.n, p.k_star, p.r, p.relative_amplitude, p.no_interior_amplification)
        tables = [t]
    _emit(tables, args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# report


def cmd_report(args) -> int:
    tables = []
    if args.cache:
        if not args.dataset:
            raise UsageError("report --cache needs --dataset")
        queries = load_dataset(args.dataset)
        runs = RunCache(args.cache).read()
        systems = sorted({r.system for r in runs if r.condition_tag == "escalated"}) or ["vanilla"]
        tables.append(run_summary(queries, runs, f"Run summary ({', '.join(systems)})"))
    if args.routing or not tables:
        rows = _read_jsonl(args.routing_table or fixture("routing_table.jsonl"))
        tables.extend(routing_eval_table(rows, args.rates))
    if not args.report:
        raise UsageError("report needs --report OUT")
    emit_report(tables, args.format, args.report)
    sys.stdout.write(f"wrote {len(tables)} table(s) to {args.report}\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _add_output(p) -> None:
    p.add_argument("--format", choices=("markdown", "csv"), default="markdown")
    p.add_argument("--report", help="also write the tables to this path")


def _add_backend(p) -> None:
    p.add_argument("--backend", choices=("replay", "http", "synthetic"), default="replay")
    p.add_argument("--replay", action="append", help="replay fixture JSONL (repeatable)")
    p.add_argument("--retrieval", help="vector retrieval fixture JSONL")
    p.add_argument("--graph-retrieval", help="graph retrieval fixture JSONL")
    p.add_argument("--config", help=f"backend config JSON (the API key is read from ${API_KEY_ENV})")
    p.add_argument("--max-inflight", type=int, default=4)
    p.add_argument("--top-k", type=int, default=5)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="phcroute", description="Confidence-inversion analysis and escalation routing for RAG.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("ingest", help="validate a dataset and print its strata")
    p.add_argument("--dataset", required=True)
    p.add_argument("--stratify", choices=("hop", "type", "dataset", "hop_and_type"), default="hop")
    _add_output(p)

    p = sub.add_parser("run", help="answer, route and escalate a dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--system", choices=("vanilla", "graph", "cascaded", "direct"), default="vanilla")
    p.add_argument("--policy", choices=("threshold", "type_aware", "learned"), default="threshold")
    p.add_argument("--model", help="trained router JSON for --policy learned")
    p.add_argument("--escalation-rate", type=float)
    p.add_argument("--tau", type=float)
    p.add_argument("--preset", choices=("detector", "extractor"), default="detector")
    p.add_argument("--cache", help="append run records to this JSONL run cache")
    p.add_argument("--seed", type=int, default=0)
    _add_backend(p)
    _add_output(p)

    p = sub.add_parser("phc", help="PHC of a confidence signal against oracle labels from a run cache")
    p.add_argument("--dataset", required=True)
    p.add_argument("--cache", required=True)
    p.add_argument("--stratum", default="all")
    p.add_argument("--signal", choices=PHC_SIGNALS, default="lexical")
    p.add_argument("--permutations", type=int, default=5000)
    p.add_argument("--seed", type=int, default=0)
    _add_output(p)

    p = sub.add_parser("route-train", help="train a learned router and report OOF AUC")
    p.add_argument("--model", choices=sorted(MODEL_KINDS), default="gb")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--features", default="all", help="all, pre, post or a comma list")
    p.add_argument("--simworld", action="store_true", help="train on a simulated routing world")
    p.add_argument("--n", type=int, default=1800)
    p.add_argument("--dataset")
    p.add_argument("--cache")
    p.add_argument("--retrieval")
    p.add_argument("--top-k", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the fitted model JSON here")
    _add_output(p)

    p = sub.add_parser("route-eval", help="matched-rate evaluation on a cached per-query table")
    p.add_argument("--cached", help="routing table JSONL (default: shipped fixture)")
    p.add_argument("--rates", type=_rates, default=[0.32, 0.60, 0.72])
    p.add_argument("--bootstrap-vs", help="0/1 column of a comparison router")
    p.add_argument("--bootstrap-n", type=int, default=10000)
    p.add_argument("--seed", type=int, default=42)
    _add_output(p)

    p = sub.add_parser("intervene", help="fact-injection sweep with fixed oracle labels")
    p.add_argument("--dataset", help="queries with decompositions (default: shipped sweep)")
    p.add_argument("--oracle", help="JSON {query_id: 0/1}")
    p.add_argument("--conditions", default="k=0..3")
    p.add_argument("--variant", choices=sorted(VARIANTS), default="plain")
    p.add_argument("--zero-retrieval", action="store_true")
    p.add_argument("--signal", choices=SWEEP_SIGNALS)
    p.add_argument("--permutations", type=int, default=5000)
    p.add_argument("--seed", type=int, default=0)
    _add_backend(p)
    _add_output(p)

    p = sub.add_parser("simulate", help="simulation checks: sweep, routing or anchoring")
    p.add_argument("kind", choices=("sweep", "routing", "anchoring"))
    p.add_argument("--targets", type=_floats)
    p.add_argument("--seeds", type=int, default=200)
    p.add_argument("--n", type=int)
    p.add_argument("--qg", type=float, default=0.5)
    p.add_argument("--rates", type=_rates, default=[0.1, 0.3, 0.5, 0.7, 0.9])
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=2.0)
    p.add_argument("--max-hops", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    _add_output(p)

    p = sub.add_parser("report", help="write summary tables to a file")
    p.add_argument("--dataset")
    p.add_argument("--cache")
    p.add_argument("--routing", action="store_true", help="include the routing evaluation table")
    p.add_argument("--routing-table")
    p.add_argument("--rates", type=_rates, default=[0.32, 0.60, 0.72])
    p.add_argument("--format", choices=("markdown", "csv"), default="markdown")
    p.add_argument("--report", help="output path")
    return parser


COMMANDS = {
    "ingest": cmd_ingest,
    "run": cmd_run,
    "phc": cmd_phc,
    "route-train": cmd_route_train,
    "route-eval": cmd_route_eval,
    "intervene": cmd_intervene,
    "simulate": cmd_simulate,
    "report": cmd_report,
}


def dispatch(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        if not argv:
            raise UsageError(parser.format_help())
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_help())
        if args.command == "simulate" and args.n is None:
            args.n = 160 if args.kind == "sweep" else 1800
        return COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except BackendError as exc:
        sys.stderr.write(f"backend error: {exc}\n")
        return EXIT_BACKEND
    except (DataError, FileNotFoundError, KeyError, ValueError) as exc:
        sys.stderr.write(f"data error: {exc}\n")
        return EXIT_DATA


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
