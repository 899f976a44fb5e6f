"""Parameter sweeps over classifier designs and their plot-ready exports.

Each sweep produces one operating point per parameter combination; the
filters then carve out equal-odds solution sets under a budget cap and
compare policy families by Pareto dominance. Exports are byte-stable:
identical inputs give identical files.
"""

import csv
import dataclasses
import json
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .acquisition import AcquisitionStrategy
from .baselines import RandomizedDesign, derandomized_rates, randomized_budget
from .data import Dataset
from .forest import Forest, PartialObservation, predict_full, predict_partial
from .metrics import (
    OperatingPoint,
    UndefinedRateError,
    calibration_line_deviation,
    covers,
    pareto_filter,
)
from .policy import IndividualPolicy, simulate_inquiry_paths, static_score_paths


def default_thresholds() -> np.ndarray:
    return np.round(np.arange(1, 50) * 0.02, 10)


def default_budgets(d: int, cap: int = 30) -> list[int]:
    if d + 1 <= cap:
        return list(range(d + 1))
    return sorted(set(int(round(b)) for b in np.linspace(0, d, cap)))


def default_alpha_pairs(lattice=None) -> list[tuple[float, float]]:
    lattice = default_thresholds() if lattice is None else np.asarray(lattice)
    return [
        (float(lo), float(hi))
        for i, lo in enumerate(lattice)
        for hi in lattice[i + 1:]
    ]


def default_fractions() -> np.ndarray:
    return np.round(np.arange(0, 21) * 0.05, 10)


@dataclass
class RegionResult:
    family: str
    points: list[OperatingPoint]
    meta: dict = field(default_factory=dict)

    @property
    def n_a(self) -> int:
        return self.meta["n_a"]

    @property
    def n_b(self) -> int:
        return self.meta["n_b"]

    def pooled(self, point: OperatingPoint) -> tuple[float, float]:
        return point.pooled(self.n_a, self.n_b)


def _class_masks(test: Dataset):
    y = test.y
    masks = {}
    for name, g in (("a", test.group_a), ("b", ~test.group_a)):
        neg = g & (y == 0)
        pos = g & (y == 1)
        if not neg.any() or not pos.any():
            raise UndefinedRateError(f"test group {name} lacks a label class")
        masks[name] = (pos.astype(float), neg.astype(float))
    return masks


def _rates_over_thresholds(scores, thresholds, masks):
    """Hard per-group rates for every threshold at once (thresholds x 1)."""
    dec = (scores[None, :] >= thresholds[:, None]).astype(float)
    out = {}
    for name, (pos, neg) in masks.items():
        fp = dec @ neg
        tp = dec @ pos
        out[name] = (fp / neg.sum(), 1.0 - tp / pos.sum())
    return out


def _generalized(scores, masks):
    out = {}
    for name, (pos, neg) in masks.items():
        out[name] = (
            float(scores @ neg / neg.sum()),
            float(1.0 - scores @ pos / pos.sum()),
        )
    return out


def _meta(test: Dataset, forest: Forest, mu_a, mu_b, selection) -> dict:
    return {
        "n_a": int(test.group_a.sum()),
        "n_b": int((~test.group_a).sum()),
        "d": forest.d,
        "mu_a": float(mu_a),
        "mu_b": float(mu_b),
        "selection": selection,
    }


def greedy_score_paths(forest: Forest, X: np.ndarray, max_candidates: int = 64) -> np.ndarray:
    """Per-row greedy acquisition paths: S[i, b] = score after b greedy picks."""
    from .acquisition import next_feature_greedy

    X = np.asarray(X, dtype=float)
    n, d = X.shape
    S = np.empty((n, d + 1))
    for i in range(n):
        obs = PartialObservation(X[i].copy(), np.zeros(d, dtype=bool))
        S[i, 0] = predict_partial(forest, obs)
        for b in range(1, d + 1):
            j = next_feature_greedy(forest, obs, max_candidates)
            obs = obs.with_feature(j, X[i, j])
            S[i, b] = predict_partial(forest, obs)
    return S


def _score_paths(forest, test, strategy):
    if strategy.mode == "static":
        return static_score_paths(forest, test.X, strategy.ranking)
    return greedy_score_paths(forest, test.X, strategy.max_candidates)


def sweep_group_budgets(
    forest: Forest,
    test: Dataset,
    mu_a: float,
    mu_b: float,
    strategy: AcquisitionStrategy,
    budgets_a=None,
    budgets_b=None,
    thresholds=None,
) -> RegionResult:
    """One operating point per (budget_a, budget_b, threshold)."""
    d = forest.d
    budgets_a = default_budgets(d) if budgets_a is None else list(budgets_a)
    budgets_b = default_budgets(d) if budgets_b is None else list(budgets_b)
    thresholds = default_thresholds() if thresholds is None else np.asarray(thresholds, float)
    masks = _class_masks(test)
    S = _score_paths(forest, test, strategy)
    n_a = int(test.group_a.sum())
    n_b = test.n - n_a

    points = []
    for b_a in budgets_a:
        for b_b in budgets_b:
            scores = np.where(test.group_a, S[:, b_a], S[:, b_b])
            gen = _generalized(scores, masks)
            hard = _rates_over_thresholds(scores, thresholds, masks)
            b_mean = (n_a * b_a + n_b * b_b) / test.n
            for k, t in enumerate(thresholds):
                points.append(
                    OperatingPoint(
                        float(hard["a"][0][k]), float(hard["a"][1][k]),
                        float(hard["b"][0][k]), float(hard["b"][1][k]),
                        gen["a"][0], gen["a"][1], gen["b"][0], gen["b"][1],
                        b_mean,
                        {
                            "family": "group", "selection": strategy.mode,
                            "b_a": int(b_a), "b_b": int(b_b), "threshold": float(t),
                        },
                    )
                )
    return RegionResult("group", points, _meta(test, forest, mu_a, mu_b, strategy.mode))


def sweep_individual(
    forest: Forest,
    test: Dataset,
    mu_a: float,
    mu_b: float,
    strategy: AcquisitionStrategy,
    alpha_pairs=None,
    thresholds=None,
    early_stop_eps: float = 0.0,
    early_stop_window: int = 1,
) -> RegionResult:
    """One operating point per (alpha_lo, alpha_hi, threshold)."""
    alpha_pairs = default_alpha_pairs() if alpha_pairs is None else list(alpha_pairs)
    thresholds = default_thresholds() if thresholds is None else np.asarray(thresholds, float)
    masks = _class_masks(test)
    S = _score_paths(forest, test, strategy)
    group_a = test.group_a

    points = []
    for lo, hi in alpha_pairs:
        policy = IndividualPolicy(
            lo, hi, strategy,
            early_stop_eps=early_stop_eps, early_stop_window=early_stop_window,
        )
        out = simulate_inquiry_paths(S, policy)
        gen = _generalized(out.scores, masks)
        hard = _rates_over_thresholds(out.scores, thresholds, masks)
        b_mean = float(out.budgets.mean())
        b_mean_a = float(out.budgets[group_a].mean())
        b_mean_b = float(out.budgets[~group_a].mean())
        for k, t in enumerate(thresholds):
            points.append(
                OperatingPoint(
                    float(hard["a"][0][k]), float(hard["a"][1][k]),
                    float(hard["b"][0][k]), float(hard["b"][1][k]),
                    gen["a"][0], gen["a"][1], gen["b"][0], gen["b"][1],
                    b_mean,
                    {
                        "family": "individual", "selection": strategy.mode,
                        "alpha_lo": float(lo), "alpha_hi": float(hi),
                        "threshold": float(t),
                        "b_mean_a": b_mean_a, "b_mean_b": b_mean_b,
                        "early_stop_eps": early_stop_eps,
                        "early_stop_window": early_stop_window,
                    },
                )
            )
    return RegionResult("individual", points, _meta(test, forest, mu_a, mu_b, strategy.mode))


RANDOMIZED_MODES = ("a", "b", "both")


def sweep_randomized(
    forest: Forest,
    test: Dataset,
    mu_a: float,
    mu_b: float,
    fractions=None,
    thresholds=None,
    modes=RANDOMIZED_MODES,
) -> RegionResult:
    """Randomization baselines: fraction grid x threshold grid x which group.

    Scores come from the full-information forest; evaluation is the exact
    derandomized expectation, and budget accounting charges d features for
    non-randomized individuals and 0 for randomized ones.
    """
    fractions = default_fractions() if fractions is None else np.asarray(fractions, float)
    thresholds = default_thresholds() if thresholds is None else np.asarray(thresholds, float)
    scores = predict_full(forest, test.X)
    n_a = int(test.group_a.sum())
    n_b = test.n - n_a

    points = []
    for mode in modes:
        for f in fractions:
            f_a = float(f) if mode in ("a", "both") else 0.0
            f_b = float(f) if mode in ("b", "both") else 0.0
            for t in thresholds:
                design = RandomizedDesign(f_a, f_b, float(t))
                hard, gen = derandomized_rates(
                    scores, test.y, test.group_a, mu_a, mu_b, design
                )
                points.append(
                    OperatingPoint(
                        hard.fpr_a, hard.fnr_a, hard.fpr_b, hard.fnr_b,
                        gen.gfpr_a, gen.gfnr_a, gen.gfpr_b, gen.gfnr_b,
                        randomized_budget(design, forest.d, n_a, n_b),
                        {
                            "family": "randomized", "mode": mode,
                            "f_a": f_a, "f_b": f_b, "threshold": float(t),
                        },
                    )
                )
    return RegionResult("randomized", points, _meta(test, forest, mu_a, mu_b, "full"))


# ---------------------------------------------------------------------------
# Filtering and comparison


@dataclass
class EqualOddsSolutions:
    family: str
    points: list[OperatingPoint]
    eps: float
    b_max: float
    n_a: int
    n_b: int

    def pooled_points(self) -> list[tuple[float, float]]:
        return [p.pooled(self.n_a, self.n_b) for p in self.points]


def filter_equal_odds(region: RegionResult, eps: float, b_max: float) -> EqualOddsSolutions:
    """Points with both disparities <= eps and mean budget <= b_max."""
    kept = [
        p
        for p in region.points
        if abs(p.fpr_a - p.fpr_b) <= eps
        and abs(p.fnr_a - p.fnr_b) <= eps
        and p.mean_budget <= b_max
    ]
    return EqualOddsSolutions(region.family, kept, eps, b_max, region.n_a, region.n_b)


@dataclass
class DominanceReport:
    n_frontier: int
    n_dominated: int
    flags: list[bool]

    @property
    def fraction(self) -> float:
        return self.n_dominated / self.n_frontier if self.n_frontier else 0.0


def dominance_report(set_1: EqualOddsSolutions, set_2: EqualOddsSolutions) -> DominanceReport:
    """For each frontier point of set_2, is it matched-or-beaten by set_1?

    Dominance here is coordinatewise <= on the pooled (FPR, FNR), so a
    point is dominated by an exact copy of itself.
    """
    if not set_1.points or not set_2.points:
        raise ValueError("dominance_report needs non-empty solution sets")
    pool_2 = {id(p): p.pooled(set_2.n_a, set_2.n_b) for p in set_2.points}
    frontier = pareto_filter(set_2.points, lambda p: pool_2[id(p)])
    candidates = [p.pooled(set_1.n_a, set_1.n_b) for p in set_1.points]
    flags = [
        any(covers(c, pool_2[id(q)]) for c in candidates)
        for q in frontier
    ]
    return DominanceReport(len(frontier), sum(flags), flags)


# ---------------------------------------------------------------------------
# Export

REPORT_COLUMNS = [
    "family", "selection", "b_a", "b_b", "alpha_lo", "alpha_hi",
    "f_a", "f_b", "mode", "threshold",
    "fpr_a", "fnr_a", "fpr_b", "fnr_b",
    "gfpr_a", "gfnr_a", "gfpr_b", "gfnr_b",
    "mean_budget", "d_fpr", "d_fnr", "eo_pass",
    "cal_dev_a", "cal_dev_b",
]

_SORT_KEYS = ["b_a", "b_b", "alpha_lo", "alpha_hi", "f_a", "f_b", "mode", "threshold"]


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _point_row(point: OperatingPoint, region: RegionResult, eps: float) -> dict:
    p = point.params
    d_fpr = abs(point.fpr_a - point.fpr_b)
    d_fnr = abs(point.fnr_a - point.fnr_b)
    return {
        "family": p.get("family", region.family),
        "selection": p.get("selection", region.meta.get("selection", "")),
        "b_a": p.get("b_a"), "b_b": p.get("b_b"),
        "alpha_lo": p.get("alpha_lo"), "alpha_hi": p.get("alpha_hi"),
        "f_a": p.get("f_a"), "f_b": p.get("f_b"),
        "mode": p.get("mode"), "threshold": p.get("threshold"),
        "fpr_a": point.fpr_a, "fnr_a": point.fnr_a,
        "fpr_b": point.fpr_b, "fnr_b": point.fnr_b,
        "gfpr_a": point.gfpr_a, "gfnr_a": point.gfnr_a,
        "gfpr_b": point.gfpr_b, "gfnr_b": point.gfnr_b,
        "mean_budget": point.mean_budget,
        "d_fpr": d_fpr, "d_fnr": d_fnr,
        "eo_pass": d_fpr <= eps and d_fnr <= eps,
        "cal_dev_a": calibration_line_deviation(
            point.gfpr_a, point.gfnr_a, region.meta["mu_a"]
        ),
        "cal_dev_b": calibration_line_deviation(
            point.gfpr_b, point.gfnr_b, region.meta["mu_b"]
        ),
    }


def write_region_csv(path, region: RegionResult, eps: float = 0.02) -> None:
    rows = [_point_row(p, region, eps) for p in region.points]
    rows.sort(
        key=lambda r: tuple(
            (-1.0, "") if r[k] is None else ((0.0, r[k]) if isinstance(r[k], str) else (float(r[k]), ""))
            for k in _SORT_KEYS
        )
    )
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        for r in rows:
            writer.writerow([_fmt(r[c]) for c in REPORT_COLUMNS])


def write_manifest(path, **entries) -> None:
    """Run manifest: every input that determines the outputs, no timestamps."""
    payload = {"package_version": __version__}
    payload.update(entries)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_jsonable(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if dataclasses.is_dataclass(v) and not isinstance(v, type):
        return _jsonable(dataclasses.asdict(v))
    return v


def emit_report(results: dict[str, RegionResult], out_dir, eps: float = 0.02, manifest=None):
    """One sorted CSV per sweep family plus a manifest; byte-stable."""
    import os

    os.makedirs(out_dir, exist_ok=True)
    paths = {}
    for family in sorted(results):
        path = os.path.join(out_dir, f"sweep_{family}.csv")
        write_region_csv(path, results[family], eps)
        paths[family] = path
    manifest_path = os.path.join(out_dir, "manifest.json")
    write_manifest(manifest_path, **(manifest or {}))
    paths["manifest"] = manifest_path
    return paths


# ---------------------------------------------------------------------------
# Provenance


def regenerate_point(
    forest: Forest,
    test: Dataset,
    params: dict,
    mu_a: float,
    mu_b: float,
    strategy: AcquisitionStrategy | None = None,
) -> OperatingPoint:
    """Recompute a single operating point from its recorded parameters."""
    family = params["family"]
    if family == "group":
        region = sweep_group_budgets(
            forest, test, mu_a, mu_b, strategy,
            budgets_a=[params["b_a"]], budgets_b=[params["b_b"]],
            thresholds=[params["threshold"]],
        )
    elif family == "individual":
        region = sweep_individual(
            forest, test, mu_a, mu_b, strategy,
            alpha_pairs=[(params["alpha_lo"], params["alpha_hi"])],
            thresholds=[params["threshold"]],
            early_stop_eps=params.get("early_stop_eps", 0.0),
            early_stop_window=params.get("early_stop_window", 1),
        )
    elif family == "randomized":
        region = sweep_randomized(
            forest, test, mu_a, mu_b,
            fractions=[max(params["f_a"], params["f_b"])],
            thresholds=[params["threshold"]],
            modes=[params["mode"]],
        )
    else:
        raise ValueError(f"unknown family {family!r}")
    assert len(region.points) == 1
    return region.points[0]
