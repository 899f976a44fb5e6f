"""Error rates, their score-level generalizations, disparities, calibration
diagnostics, AUC, and Pareto utilities."""

from dataclasses import dataclass, field

import numpy as np


class UndefinedRateError(ValueError):
    """A group lacks the label class a rate is conditioned on."""


@dataclass(frozen=True)
class GroupRates:
    fpr_a: float
    fnr_a: float
    fpr_b: float
    fnr_b: float
    n_pos_a: int = 0
    n_neg_a: int = 0
    n_pos_b: int = 0
    n_neg_b: int = 0


@dataclass(frozen=True)
class GeneralizedRates:
    gfpr_a: float
    gfnr_a: float
    gfpr_b: float
    gfnr_b: float


@dataclass(frozen=True)
class DisparityReport:
    d_fpr: float
    d_fnr: float
    d_gfpr: float | None
    d_gfnr: float | None
    eps: float
    equal_opportunity_ok: bool
    equal_odds_ok: bool


@dataclass
class OperatingPoint:
    """One classifier design: its per-group rates, mean budget, and provenance."""

    fpr_a: float
    fnr_a: float
    fpr_b: float
    fnr_b: float
    gfpr_a: float
    gfnr_a: float
    gfpr_b: float
    gfnr_b: float
    mean_budget: float
    params: dict = field(default_factory=dict)

    def pooled(self, n_a: int, n_b: int) -> tuple[float, float]:
        """Group-size-weighted (FPR, FNR)."""
        n = n_a + n_b
        return (
            (n_a * self.fpr_a + n_b * self.fpr_b) / n,
            (n_a * self.fnr_a + n_b * self.fnr_b) / n,
        )


def _group_arrays(values, labels, group_a):
    values = np.asarray(values, dtype=float)
    labels = np.asarray(labels)
    group_a = np.asarray(group_a, dtype=bool)
    if not (len(values) == len(labels) == len(group_a)):
        raise ValueError("length mismatch")
    return values, labels, group_a


def _rate_pair(values, labels, mask, name):
    neg = mask & (labels == 0)
    pos = mask & (labels == 1)
    if not neg.any() or not pos.any():
        raise UndefinedRateError(f"group {name} lacks a label class; rates undefined")
    fpr = float(values[neg].mean())
    fnr = float(1.0 - values[pos].mean())
    return fpr, fnr, int(pos.sum()), int(neg.sum())


def rates(decisions, labels, group_a) -> GroupRates:
    """Per-group FPR = FP/(FP+TN) and FNR = FN/(FN+TP) of hard decisions."""
    decisions, labels, group_a = _group_arrays(decisions, labels, group_a)
    if not np.isin(decisions, (0.0, 1.0)).all():
        raise ValueError("decisions must be 0/1")
    fpr_a, fnr_a, pa, na = _rate_pair(decisions, labels, group_a, "A")
    fpr_b, fnr_b, pb, nb = _rate_pair(decisions, labels, ~group_a, "B")
    return GroupRates(fpr_a, fnr_a, fpr_b, fnr_b, pa, na, pb, nb)


def generalized_rates(scores, labels, group_a) -> GeneralizedRates:
    """GFPR = mean score over true negatives; GFNR = mean(1 - score) over positives."""
    scores, labels, group_a = _group_arrays(scores, labels, group_a)
    ga = _rate_pair(scores, labels, group_a, "A")
    gb = _rate_pair(scores, labels, ~group_a, "B")
    return GeneralizedRates(ga[0], ga[1], gb[0], gb[1])


def disparity(
    r: GroupRates, gen: GeneralizedRates | None = None, eps: float = 0.02
) -> DisparityReport:
    d_fpr = abs(r.fpr_a - r.fpr_b)
    d_fnr = abs(r.fnr_a - r.fnr_b)
    d_gfpr = None if gen is None else abs(gen.gfpr_a - gen.gfpr_b)
    d_gfnr = None if gen is None else abs(gen.gfnr_a - gen.gfnr_b)
    return DisparityReport(
        d_fpr,
        d_fnr,
        d_gfpr,
        d_gfnr,
        eps,
        equal_opportunity_ok=d_fnr <= eps,
        equal_odds_ok=d_fpr <= eps and d_fnr <= eps,
    )


def calibration_line_deviation(gfpr: float, gfnr: float, mu: float) -> float:
    """Perpendicular distance of (GFPR, GFNR) from the calibrated-classifier line.

    For a group with base rate mu, every calibrated score distribution has
    GFNR = GFPR * (1 - mu) / mu, a line through the origin.
    """
    if not 0.0 < mu < 1.0:
        raise ValueError(f"base rate must be in (0,1), got {mu}")
    slope = (1.0 - mu) / mu
    return float(abs(slope * gfpr - gfnr) / np.hypot(slope, 1.0))


def calibration_bins(scores, labels, mask=None, n_bins: int = 10):
    """Equal-width reliability bins and the largest |mean score - positive rate|.

    Returns (bins, max_gap), bins being (mean_score, positive_rate, count)
    per occupied bin; empty bins are skipped.
    """
    if n_bins < 1:
        raise ValueError("n_bins must be >= 1")
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    if mask is not None:
        scores = scores[np.asarray(mask, dtype=bool)]
        labels = labels[np.asarray(mask, dtype=bool)]
    idx = np.minimum((scores * n_bins).astype(int), n_bins - 1)
    bins = []
    max_gap = 0.0
    for b in range(n_bins):
        sel = idx == b
        if not sel.any():
            continue
        m = float(scores[sel].mean())
        p = float(labels[sel].mean())
        bins.append((m, p, int(sel.sum())))
        max_gap = max(max_gap, abs(m - p))
    return bins, max_gap


def equal_cost(gen: GeneralizedRates, w_fp: float, w_fn: float):
    """Per-group weighted generalized cost and the between-group gap."""
    if w_fp < 0 or w_fn < 0 or (w_fp == 0 and w_fn == 0):
        raise ValueError("weights must be non-negative and not both zero")
    cost_a = w_fp * gen.gfpr_a + w_fn * gen.gfnr_a
    cost_b = w_fp * gen.gfpr_b + w_fn * gen.gfnr_b
    return cost_a, cost_b, abs(cost_a - cost_b)


def auc(scores, labels) -> float:
    """Rank-based (Mann-Whitney) AUC; tied scores contribute 1/2."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    pos = labels == 1
    n_pos = int(pos.sum())
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise UndefinedRateError("AUC needs both classes")
    order = np.argsort(scores, kind="stable")
    ranks = np.empty(len(scores))
    sorted_scores = scores[order]
    # average ranks over tie groups
    boundaries = np.flatnonzero(np.diff(sorted_scores)) + 1
    starts = np.concatenate(([0], boundaries))
    ends = np.concatenate((boundaries, [len(scores)]))
    for s, e in zip(starts, ends):
        ranks[order[s:e]] = 0.5 * (s + e - 1) + 1.0
    return float((ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def weakly_dominates(a, b) -> bool:
    """a <= b in every coordinate and < in at least one (lower is better)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return bool(np.all(a <= b) and np.any(a < b))


def covers(a, b) -> bool:
    """a <= b in every coordinate (equality allowed everywhere)."""
    return bool(np.all(np.asarray(a, dtype=float) <= np.asarray(b, dtype=float)))


def pareto_filter(points, objective) -> list:
    """Points not weakly dominated by any other, sorted by the first coordinate.

    `objective` maps a point to a (x, y) pair where lower is better.
    Duplicates of a frontier point are all kept (neither strictly beats the
    other).
    """
    points = list(points)
    if not points:
        raise ValueError("no points to filter")
    coords = np.array([objective(p) for p in points], dtype=float)
    keep = []
    for i in range(len(points)):
        dominated = np.any(
            np.all(coords <= coords[i], axis=1) & np.any(coords < coords[i], axis=1)
        )
        if not dominated:
            keep.append(i)
    keep.sort(key=lambda i: (coords[i][0], coords[i][1]))
    return [points[i] for i in keep]
