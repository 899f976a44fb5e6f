"""Command-line entry point: train, audit, sweep, report.

Every command is a pure function of its inputs, flags, and seed; rerunning
an invocation reproduces its output files byte for byte. Exit codes:
0 success, 1 computational infeasibility, 2 usage or input error.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import __version__, baselines, experiments
from .acquisition import AcquisitionStrategy
from .data import (
    Dataset,
    IngestError,
    SchemaError,
    Split,
    base_rate,
    load_csv,
    load_schema,
    rebind_groups,
    split,
)
from .forest import ForestConfig, load_forest, predict_full, save_forest, train
from .metrics import (
    UndefinedRateError,
    auc,
    calibration_bins,
    calibration_line_deviation,
    disparity,
    generalized_rates,
    rates,
)
from .policy import (
    GroupBudgetPolicy,
    IndividualPolicy,
    InquiryTrace,
    classify_group_budget,
    mean_budget,
    simulate_inquiry_paths,
    static_score_paths,
    run_inquiry,
    tune_early_stopping,
    write_trace_file,
)

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_USAGE = 2


class InfeasibleError(RuntimeError):
    """A requested computation has no solution (not a usage problem)."""


def _json_dump(payload, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(experiments._jsonable(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _out_dir(args):
    out = args.out_dir or os.environ.get("FAIRACQ_OUT") or "."
    os.makedirs(out, exist_ok=True)
    return out


def _load_dataset(args):
    schema = load_schema(args.schema)
    return load_csv(args.data, schema)


def _forest_config(args, seed):
    return ForestConfig(
        n_trees=args.n_trees,
        max_depth=args.max_depth,
        min_leaf=args.min_leaf,
        mtry=args.mtry,
        bootstrap=not args.no_bootstrap,
        leaf_smoothing=args.leaf_smoothing,
        seed=seed,
    )


def _split_sets(dataset, sp):
    dataset = rebind_groups(dataset, sp)
    return dataset, dataset.take(sp.train_indices), dataset.take(sp.test_indices)


def cmd_train(args) -> int:
    out = _out_dir(args)
    dataset = _load_dataset(args)
    sp = split(dataset, args.fraction, args.seed)
    dataset, train_set, test_set = _split_sets(dataset, sp)
    config = _forest_config(args, args.seed)
    forest = train(train_set, config)

    save_forest(forest, os.path.join(out, "forest.json"))
    _json_dump(
        {
            "seed": sp.seed,
            "fraction": args.fraction,
            "train_indices": sp.train_indices.tolist(),
            "test_indices": sp.test_indices.tolist(),
        },
        os.path.join(out, "split.json"),
    )
    report = {
        "data": args.data,
        "n": dataset.n,
        "d": dataset.d,
        "n_train": len(sp.train_indices),
        "n_test": len(sp.test_indices),
        "base_rate": base_rate(dataset),
        "base_rate_train_a": base_rate(train_set, "a"),
        "base_rate_train_b": base_rate(train_set, "b"),
        "group_a_fraction": float(dataset.group_a.mean()),
        "group_info": dataset.group_info,
        "test_auc_full_information": auc(predict_full(forest, test_set.X), test_set.y),
        "forest_config": config,
        "package_version": __version__,
    }
    _json_dump(report, os.path.join(out, "train_report.json"))
    print(f"trained forest -> {out}/forest.json "
          f"(test AUC {report['test_auc_full_information']:.3f})")
    return EXIT_OK


def _load_run(args):
    forest = load_forest(args.forest)
    with open(args.split, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    sp = Split(
        np.array(raw["train_indices"], dtype=int),
        np.array(raw["test_indices"], dtype=int),
        int(raw["seed"]),
    )
    dataset = _load_dataset(args)
    dataset, train_set, test_set = _split_sets(dataset, sp)
    return forest, dataset, train_set, test_set


def _strategy(args, forest):
    if args.selection == "static":
        return AcquisitionStrategy.static(forest)
    return AcquisitionStrategy.greedy(args.max_candidates)


def _group_diag(scores, labels, mask, mu, n_bins):
    bins, gap = calibration_bins(scores, labels, mask, n_bins)
    gfpr = float(scores[mask & (labels == 0)].mean())
    gfnr = float(1.0 - scores[mask & (labels == 1)].mean())
    return {
        "calibration_max_gap": gap,
        "calibration_bins": [
            {"mean_score": m, "positive_rate": p, "count": c} for m, p, c in bins
        ],
        "calibration_line_deviation": calibration_line_deviation(gfpr, gfnr, mu),
    }


def cmd_audit(args) -> int:
    out = _out_dir(args)
    forest, dataset, train_set, test_set = _load_run(args)
    strategy = _strategy(args, forest)
    mu_a = base_rate(train_set, "a")
    mu_b = base_rate(train_set, "b")

    traces = None
    if args.family == "group":
        policy = GroupBudgetPolicy(args.b_a, args.b_b, strategy, args.threshold)
        result = classify_group_budget(forest, test_set, policy)
        scores, decisions, budgets = result.scores, result.decisions, result.budgets
        params = {"family": "group", "b_a": args.b_a, "b_b": args.b_b,
                  "threshold": args.threshold, "selection": args.selection}
    else:
        policy = IndividualPolicy(
            args.alpha_lo, args.alpha_hi, strategy, args.threshold,
            early_stop_eps=args.early_stop_eps,
            early_stop_window=args.early_stop_window,
        )
        if strategy.mode == "static":
            S = static_score_paths(forest, test_set.X, strategy.ranking)
            outc = simulate_inquiry_paths(S, policy)
            traces = [
                InquiryTrace(
                    list(strategy.ranking[: outc.budgets[i]]),
                    [float(v) for v in S[i, : outc.budgets[i] + 1]],
                    outc.stop_reasons[i],
                    int(outc.decisions[i]),
                )
                for i in range(test_set.n)
            ]
        else:
            traces = [run_inquiry(forest, x, policy) for x in test_set.X]
        scores = np.array([t.final_score for t in traces])
        decisions = np.array([t.decision for t in traces], dtype=np.int8)
        budgets = np.array([t.budget for t in traces])
        params = {"family": "individual", "alpha_lo": args.alpha_lo,
                  "alpha_hi": args.alpha_hi, "threshold": args.threshold,
                  "selection": args.selection,
                  "early_stop_eps": args.early_stop_eps,
                  "early_stop_window": args.early_stop_window}

    hard = rates(decisions, test_set.y, test_set.group_a)
    gen = generalized_rates(scores, test_set.y, test_set.group_a)
    report = {
        "params": params,
        "rates": hard,
        "generalized_rates": gen,
        "disparity": disparity(hard, gen, args.eps),
        "mean_budget": mean_budget(budgets),
        "mean_budget_a": mean_budget(budgets[test_set.group_a]),
        "mean_budget_b": mean_budget(budgets[~test_set.group_a]),
        "group_a": _group_diag(scores, test_set.y, test_set.group_a, mu_a, args.bins),
        "group_b": _group_diag(scores, test_set.y, ~test_set.group_a, mu_b, args.bins),
    }
    _json_dump(report, os.path.join(out, "audit.json"))
    if traces is not None and args.traces:
        write_trace_file(os.path.join(out, "traces.jsonl"), traces, test_set.group_a)
    print(
        f"audit -> {out}/audit.json  "
        f"FPR A/B {hard.fpr_a:.3f}/{hard.fpr_b:.3f}  "
        f"FNR A/B {hard.fnr_a:.3f}/{hard.fnr_b:.3f}  "
        f"mean budget {report['mean_budget']:.2f}"
    )
    return EXIT_OK


def _grids(args, d):
    t = np.round(np.arange(args.t_step, 1.0 - args.t_step / 2, args.t_step), 10)
    budgets = experiments.default_budgets(d, args.budget_cap)
    alpha_step = args.alpha_step or args.t_step
    lattice = np.round(np.arange(alpha_step, 1.0 - alpha_step / 2, alpha_step), 10)
    alphas = experiments.default_alpha_pairs(lattice)
    fractions = np.round(np.arange(0.0, 1.0 + args.f_step / 2, args.f_step), 10)
    return t, budgets, alphas, fractions


def cmd_sweep(args) -> int:
    out = _out_dir(args)
    forest, dataset, train_set, test_set = _load_run(args)
    strategy = _strategy(args, forest)
    mu_a = base_rate(train_set, "a")
    mu_b = base_rate(train_set, "b")
    thresholds, budgets, alphas, fractions = _grids(args, forest.d)
    b_max = args.b_max if args.b_max is not None else forest.d / 2.0

    early_eps = args.early_stop_eps
    if args.tune_budget is not None:
        carve = split(train_set, 0.9, seed=train_set.n)
        validation = train_set.take(carve.test_indices)
        early_eps = tune_early_stopping(
            forest,
            validation,
            IndividualPolicy(0.25, 0.75, strategy),
            args.tune_budget,
            args.eps_grid,
        )

    families = (
        ["group", "individual", "randomized"] if args.family == "all" else [args.family]
    )
    results = {}
    for family in families:
        if family == "group":
            results[family] = experiments.sweep_group_budgets(
                forest, test_set, mu_a, mu_b, strategy,
                budgets_a=budgets, budgets_b=budgets, thresholds=thresholds,
            )
        elif family == "individual":
            results[family] = experiments.sweep_individual(
                forest, test_set, mu_a, mu_b, strategy,
                alpha_pairs=alphas, thresholds=thresholds,
                early_stop_eps=early_eps, early_stop_window=args.early_stop_window,
            )
        else:
            results[family] = experiments.sweep_randomized(
                forest, test_set, mu_a, mu_b,
                fractions=fractions, thresholds=thresholds,
            )

    some = next(iter(results.values()))
    manifest = {
        "data": args.data,
        "schema": args.schema,
        "forest_file": args.forest,
        "split_file": args.split,
        "seed": args.seed,
        "selection": args.selection,
        "eps": args.eps,
        "b_max": b_max,
        "early_stop_eps": early_eps,
        "early_stop_window": args.early_stop_window,
        "families": sorted(results),
        "grids": {
            "thresholds": thresholds,
            "budgets": budgets,
            "n_alpha_pairs": len(alphas),
            "fractions": fractions,
        },
        "n_a": some.n_a,
        "n_b": some.n_b,
        "d": forest.d,
        "mu_a": mu_a,
        "mu_b": mu_b,
        "forest_config": forest.config,
    }
    paths = experiments.emit_report(results, out, eps=args.eps, manifest=manifest)
    for family in sorted(results):
        print(f"{family}: {len(results[family].points)} points -> {paths[family]}")

    if args.equal_odds:
        _equal_odds_outputs(results, out, args.eps, b_max, forest, test_set,
                            train_set, mu_a, mu_b)
    return EXIT_OK


def _equal_odds_outputs(results, out, eps, b_max, forest, test_set, train_set,
                        mu_a, mu_b):
    sols = {}
    for family, region in results.items():
        sol = experiments.filter_equal_odds(region, eps, b_max)
        sols[family] = sol
        sub = experiments.RegionResult(family, sol.points, region.meta)
        if not sol.points:
            raise InfeasibleError(
                f"no {family} designs satisfy equal odds at eps={eps}, b_max={b_max}"
            )
        experiments.write_region_csv(
            os.path.join(out, f"equal_odds_{family}.csv"), sub, eps
        )
    summary = {"eps": eps, "b_max": b_max, "solutions": {f: len(s.points) for f, s in sols.items()}}
    pairs = [("group", "randomized"), ("individual", "group")]
    for better, worse in pairs:
        if better in sols and worse in sols:
            rep = experiments.dominance_report(sols[better], sols[worse])
            summary[f"{better}_dominates_{worse}"] = {
                "frontier_points": rep.n_frontier,
                "dominated": rep.n_dominated,
                "fraction": rep.fraction,
            }
    scores = predict_full(forest, test_set.X)
    fit = baselines.equal_odds_randomize(
        scores, test_set.y, test_set.group_a, mu_a, mu_b, 0.5, eps
    )
    summary["single_threshold_randomization"] = {
        "threshold": 0.5,
        "feasible": fit.feasible,
        "randomized_group": fit.randomized_group,
        "fraction": fit.fraction,
        "detail": fit.detail,
    }
    _json_dump(summary, os.path.join(out, "equal_odds_summary.json"))
    print(f"equal-odds solutions -> {out}/equal_odds_summary.json")


def cmd_report(args) -> int:
    out = _out_dir(args)
    with open(os.path.join(args.tables, "manifest.json"), "r", encoding="utf-8") as fh:
        manifest = json.load(fh)
    n_a, n_b = manifest["n_a"], manifest["n_b"]
    b_max = args.b_max if args.b_max is not None else manifest["b_max"]
    summary = {"eps": args.eps, "b_max": b_max, "solutions": {}}
    pooled = {}
    for family in manifest["families"]:
        path = os.path.join(args.tables, f"sweep_{family}.csv")
        rows = _read_table(path)
        kept = [
            r for r in rows
            if r["d_fpr"] <= args.eps and r["d_fnr"] <= args.eps
            and r["mean_budget"] <= b_max
        ]
        summary["solutions"][family] = len(kept)
        pooled[family] = [
            (
                (n_a * r["fpr_a"] + n_b * r["fpr_b"]) / (n_a + n_b),
                (n_a * r["fnr_a"] + n_b * r["fnr_b"]) / (n_a + n_b),
            )
            for r in kept
        ]
        _write_rows(os.path.join(out, f"equal_odds_{family}.csv"), kept)
    for better, worse in (("group", "randomized"), ("individual", "group")):
        if pooled.get(better) and pooled.get(worse):
            frontier = _frontier(pooled[worse])
            flags = [
                any(c[0] <= q[0] and c[1] <= q[1] for c in pooled[better])
                for q in frontier
            ]
            summary[f"{better}_dominates_{worse}"] = {
                "frontier_points": len(frontier),
                "dominated": sum(flags),
                "fraction": sum(flags) / len(frontier),
            }
    _json_dump(summary, os.path.join(out, "equal_odds_summary.json"))
    print(f"report -> {out}/equal_odds_summary.json")
    if any(n == 0 for n in summary["solutions"].values()):
        raise InfeasibleError("a family has no equal-odds solutions")
    return EXIT_OK


def _read_table(path):
    import csv as _csv

    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = _csv.DictReader(fh)
        rows = []
        for raw in reader:
            row = dict(raw)
            for key in ("fpr_a", "fnr_a", "fpr_b", "fnr_b", "mean_budget",
                        "d_fpr", "d_fnr"):
                row[key] = float(raw[key])
            rows.append(row)
    return rows


def _write_rows(path, rows):
    import csv as _csv

    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = _csv.DictWriter(
            fh, fieldnames=experiments.REPORT_COLUMNS, lineterminator="\n"
        )
        writer.writeheader()
        for r in rows:
            writer.writerow({k: r.get(k, "") for k in experiments.REPORT_COLUMNS})


def _frontier(points):
    kept = []
    for p in points:
        if not any(
            (q[0] <= p[0] and q[1] <= p[1]) and (q[0] < p[0] or q[1] < p[1])
            for q in points
        ):
            kept.append(p)
    return sorted(set(kept))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fairacq",
        description="Budget-aware fair classification via adaptive feature acquisition.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="JSON file of flag defaults (flags win)")
        p.add_argument("--data", required=True, help="dataset CSV")
        p.add_argument("--schema", required=True, help="schema sidecar JSON")
        p.add_argument("--out-dir", default=None, help="output directory (env FAIRACQ_OUT)")
        p.add_argument("--seed", type=int, default=0)

    p_train = sub.add_parser("train", help="train a forest and write run artifacts")
    add_common(p_train)
    p_train.add_argument("--fraction", type=float, default=0.8)
    p_train.add_argument("--n-trees", type=int, default=100)
    p_train.add_argument("--max-depth", type=int, default=8)
    p_train.add_argument("--min-leaf", type=int, default=5)
    p_train.add_argument("--mtry", type=int, default=None)
    p_train.add_argument("--no-bootstrap", action="store_true")
    p_train.add_argument("--leaf-smoothing", type=float, default=1.0)

    def add_run_inputs(p):
        p.add_argument("--forest", required=True, help="forest.json from train")
        p.add_argument("--split", required=True, help="split.json from train")
        p.add_argument("--selection", choices=("static", "greedy"), default="static")
        p.add_argument("--max-candidates", type=int, default=64)
        p.add_argument("--eps", type=float, default=0.02)

    p_audit = sub.add_parser("audit", help="metrics report for a single policy")
    add_common(p_audit)
    add_run_inputs(p_audit)
    p_audit.add_argument("--family", choices=("group", "individual"), required=True)
    p_audit.add_argument("--b-a", type=int, default=0)
    p_audit.add_argument("--b-b", type=int, default=0)
    p_audit.add_argument("--alpha-lo", type=float, default=0.25)
    p_audit.add_argument("--alpha-hi", type=float, default=0.75)
    p_audit.add_argument("--threshold", type=float, default=0.5)
    p_audit.add_argument("--early-stop-eps", type=float, default=0.0)
    p_audit.add_argument("--early-stop-window", type=int, default=1)
    p_audit.add_argument("--bins", type=int, default=10)
    p_audit.add_argument("--traces", action="store_true", help="write traces.jsonl")

    p_sweep = sub.add_parser("sweep", help="parameter sweeps per policy family")
    add_common(p_sweep)
    add_run_inputs(p_sweep)
    p_sweep.add_argument(
        "--family", choices=("group", "individual", "randomized", "all"), required=True
    )
    p_sweep.add_argument("--t-step", type=float, default=0.02)
    p_sweep.add_argument("--alpha-step", type=float, default=None)
    p_sweep.add_argument("--f-step", type=float, default=0.05)
    p_sweep.add_argument("--budget-cap", type=int, default=30)
    p_sweep.add_argument("--b-max", type=float, default=None)
    p_sweep.add_argument("--equal-odds", action="store_true")
    p_sweep.add_argument("--early-stop-eps", type=float, default=0.0)
    p_sweep.add_argument("--early-stop-window", type=int, default=1)
    p_sweep.add_argument("--tune-budget", type=float, default=None,
                         help="tune early-stop eps for this mean budget")
    p_sweep.add_argument("--eps-grid", type=float, nargs="+",
                         default=[0.0, 0.001, 0.005, 0.01, 0.02, 0.05])

    p_report = sub.add_parser("report", help="equal-odds filtering over sweep tables")
    p_report.add_argument("--config", help="JSON file of flag defaults (flags win)")
    p_report.add_argument("--tables", required=True, help="directory with sweep CSVs")
    p_report.add_argument("--out-dir", default=None)
    p_report.add_argument("--eps", type=float, default=0.02)
    p_report.add_argument("--b-max", type=float, default=None)

    return parser


def _apply_config(parser, argv):
    """Config file supplies defaults; explicit flags win."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    try:
        path = argv[idx + 1]
    except IndexError:
        parser.error("--config needs a path")
    try:
        with open(path, "r", encoding="utf-8") as fh:
            conf = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(f"cannot read config {path}: {exc}")
    extra = []
    for key, value in sorted(conf.items()):
        flag = "--" + key.replace("_", "-")
        if flag in argv:
            continue
        if isinstance(value, bool):
            if value:
                extra.append(flag)
        elif isinstance(value, list):
            extra.append(flag)
            extra.extend(str(v) for v in value)
        else:
            extra.extend([flag, str(value)])
    return argv[:1] + extra + argv[1:]


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    if argv:
        argv = [argv[0]] + _apply_config(parser, argv[1:])
    args = parser.parse_args(argv)
    handlers = {
        "train": cmd_train,
        "audit": cmd_audit,
        "sweep": cmd_sweep,
        "report": cmd_report,
    }
    try:
        return handlers[args.command](args)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except UndefinedRateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (IngestError, SchemaError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
