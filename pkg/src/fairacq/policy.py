"""The two budgeted classifiers.

Group-level: every member of group A is scored on exactly `budget_a`
features (and B on `budget_b`), chosen by the acquisition strategy.

Individual-level: features are acquired one at a time until the predicted
probability leaves the confidence band (alpha_lo, alpha_hi), the features
run out, or recent acquisitions stopped moving the score. The decision is
then thresholded at t.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .acquisition import AcquisitionStrategy, next_feature
from .data import Dataset
from .forest import Forest, PartialObservation, predict_masked_matrix, predict_partial
from .metrics import auc

STOP_HIGH = "confident_high"
STOP_LOW = "confident_low"
STOP_EXHAUSTED = "exhausted"
STOP_EARLY = "early_stop"


@dataclass(frozen=True)
class GroupBudgetPolicy:
    budget_a: int
    budget_b: int
    strategy: AcquisitionStrategy
    threshold: float = 0.5

    def __post_init__(self):
        for b in (self.budget_a, self.budget_b):
            if b < 0:
                raise ValueError("budgets must be non-negative")


@dataclass(frozen=True)
class IndividualPolicy:
    alpha_lo: float
    alpha_hi: float
    strategy: AcquisitionStrategy
    threshold: float = 0.5
    early_stop_eps: float = 0.0  # 0 disables early stopping
    early_stop_window: int = 1

    def __post_init__(self):
        if not 0.0 < self.alpha_lo < self.alpha_hi < 1.0:
            raise ValueError("need 0 < alpha_lo < alpha_hi < 1")
        if self.early_stop_eps < 0:
            raise ValueError("early_stop_eps must be >= 0")
        if self.early_stop_window < 1:
            raise ValueError("early_stop_window must be >= 1")


@dataclass
class InquiryTrace:
    acquired: list[int]
    probabilities: list[float]  # index 0 = empty-mask score
    stop_reason: str
    decision: int

    @property
    def budget(self) -> int:
        return len(self.acquired)

    @property
    def final_score(self) -> float:
        return self.probabilities[-1]


def validate_trace(trace: InquiryTrace, policy: IndividualPolicy, d: int) -> None:
    """Assert the coherence invariants that must hold for any trace."""
    assert len(trace.probabilities) == len(trace.acquired) + 1
    assert len(set(trace.acquired)) == len(trace.acquired) <= d
    s = trace.final_score
    if trace.stop_reason == STOP_HIGH:
        assert s > policy.alpha_hi
    elif trace.stop_reason == STOP_LOW:
        assert s < policy.alpha_lo
    elif trace.stop_reason == STOP_EXHAUSTED:
        assert len(trace.acquired) == d
    elif trace.stop_reason == STOP_EARLY:
        assert early_stopping(
            trace.probabilities, policy.early_stop_eps, policy.early_stop_window
        )
    else:
        raise AssertionError(f"unknown stop reason {trace.stop_reason!r}")
    assert trace.decision == int(s >= policy.threshold)


def early_stopping(scores, eps: float, window: int) -> bool:
    """True iff each of the last `window` acquisitions moved the score by < eps.

    `scores` starts with the empty-mask score, so acquisitions made is
    len(scores) - 1; fewer than `window` of them means no trigger. eps = 0
    never triggers (the comparison is strict).
    """
    made = len(scores) - 1
    if made < window:
        return False
    recent = np.diff(np.asarray(scores[-(window + 1):], dtype=float))
    return bool(np.all(np.abs(recent) < eps))


def _stop_reason(score, policy, early):
    if score > policy.alpha_hi:
        return STOP_HIGH
    if score < policy.alpha_lo:
        return STOP_LOW
    if early:
        return STOP_EARLY
    return STOP_EXHAUSTED


def run_inquiry(forest: Forest, x_full: np.ndarray, policy: IndividualPolicy) -> InquiryTrace:
    """Adaptive inquiry for one individual, revealing values from `x_full`.

    The loop continues while the score stays inside [alpha_lo, alpha_hi]
    (boundary values continue), features remain, and early stopping has not
    fired; the acquisition that triggers early stopping is kept.
    """
    x_full = np.asarray(x_full, dtype=float)
    d = forest.d
    obs = PartialObservation(x_full.copy(), np.zeros(d, dtype=bool))
    score = predict_partial(forest, obs)
    probabilities = [score]
    acquired: list[int] = []
    early = False
    while policy.alpha_lo <= score <= policy.alpha_hi and len(acquired) < d and not early:
        j = next_feature(forest, obs, policy.strategy)
        obs = obs.with_feature(j, x_full[j])
        score = predict_partial(forest, obs)
        acquired.append(j)
        probabilities.append(score)
        early = early_stopping(probabilities, policy.early_stop_eps, policy.early_stop_window)
    reason = _stop_reason(score, policy, early)
    return InquiryTrace(acquired, probabilities, reason, int(score >= policy.threshold))


# ---------------------------------------------------------------------------
# Vectorized engine for static selection


def static_score_paths(forest: Forest, X: np.ndarray, ranking) -> np.ndarray:
    """Score matrix S[i, b] after acquiring the top-b ranked features of row i.

    Column 0 is the empty-mask score. With static selection every
    individual acquires features in the same order, so one matrix covers
    every budget and every confidence band.
    """
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    d = forest.d
    S = np.empty((n, d + 1))
    mask = np.zeros(d, dtype=bool)
    S[:, 0] = predict_masked_matrix(forest, X, mask)
    for b, j in enumerate(ranking, start=1):
        mask = mask.copy()
        mask[j] = True
        S[:, b] = predict_masked_matrix(forest, X, mask)
    return S


@dataclass
class InquiryOutcome:
    """Vectorized per-row inquiry results (static selection)."""

    budgets: np.ndarray
    scores: np.ndarray
    stop_reasons: list[str]
    decisions: np.ndarray = field(default=None)

    def decide(self, threshold: float) -> np.ndarray:
        return (self.scores >= threshold).astype(np.int8)


def simulate_inquiry_paths(S: np.ndarray, policy: IndividualPolicy) -> InquiryOutcome:
    """Replay the inquiry loop against precomputed per-row score paths.

    Works for any acquisition order whose path scores are in S (static
    ranking prefixes or per-row greedy paths) and produces exactly what
    per-row `run_inquiry` would: the first step at which the score exits
    the band, early stopping fires, or features run out.
    """
    n, cols = S.shape
    d = cols - 1
    w = policy.early_stop_window
    eps = policy.early_stop_eps
    inside = (S >= policy.alpha_lo) & (S <= policy.alpha_hi)
    if eps > 0:
        small = np.abs(np.diff(S, axis=1)) < eps
        run = np.zeros(n, dtype=int)
    budgets = np.full(n, -1, dtype=int)
    reasons = np.empty(n, dtype=object)
    active = inside[:, 0].copy()
    budgets[~active] = 0
    for b in range(1, d + 1):
        if eps > 0:
            run = np.where(small[:, b - 1], run + 1, 0)
            early_now = active & (run >= w)
        else:
            early_now = np.zeros(n, dtype=bool)
        exited = active & (~inside[:, b] | early_now)
        budgets[exited] = b
        active &= ~exited
        if not active.any():
            break
    budgets[active] = d
    scores = S[np.arange(n), budgets]
    hi = scores > policy.alpha_hi
    lo = scores < policy.alpha_lo
    for i in range(n):
        if hi[i]:
            reasons[i] = STOP_HIGH
        elif lo[i]:
            reasons[i] = STOP_LOW
        elif budgets[i] < d:
            reasons[i] = STOP_EARLY
        else:
            reasons[i] = STOP_EXHAUSTED
    out = InquiryOutcome(budgets, scores, list(reasons))
    out.decisions = out.decide(policy.threshold)
    return out


# ---------------------------------------------------------------------------
# Classifiers over datasets


@dataclass
class GroupBudgetResult:
    scores: np.ndarray
    decisions: np.ndarray
    budgets: np.ndarray


def classify_group_budget(
    forest: Forest, test: Dataset, policy: GroupBudgetPolicy
) -> GroupBudgetResult:
    """Score every row with its group's budget; decision = score >= t."""
    d = forest.d
    if max(policy.budget_a, policy.budget_b) > d:
        raise ValueError("budget exceeds feature count")
    scores = np.empty(test.n)
    for group_mask, budget in (
        (test.group_a, policy.budget_a),
        (~test.group_a, policy.budget_b),
    ):
        if not group_mask.any():
            continue
        rows = test.X[group_mask]
        if policy.strategy.mode == "static":
            chosen = policy.strategy.ranking[:budget]
            mask = np.zeros(d, dtype=bool)
            if chosen:
                mask[list(chosen)] = True
            scores[group_mask] = predict_masked_matrix(forest, rows, mask)
        else:
            vals = np.empty(len(rows))
            for i, x in enumerate(rows):
                obs = PartialObservation(x.copy(), np.zeros(d, dtype=bool))
                for _ in range(budget):
                    j = next_feature(forest, obs, policy.strategy)
                    obs = obs.with_feature(j, x[j])
                vals[i] = predict_partial(forest, obs)
            scores[group_mask] = vals
    budgets = np.where(test.group_a, policy.budget_a, policy.budget_b)
    return GroupBudgetResult(scores, (scores >= policy.threshold).astype(np.int8), budgets)


def classify_individual(
    forest: Forest, test: Dataset, policy: IndividualPolicy
) -> InquiryOutcome:
    """Adaptive inquiry over a whole test set.

    Static selection runs through the vectorized path engine; greedy
    selection falls back to per-row inquiry.
    """
    if policy.strategy.mode == "static":
        S = static_score_paths(forest, test.X, policy.strategy.ranking)
        return simulate_inquiry_paths(S, policy)
    traces = [run_inquiry(forest, x, policy) for x in test.X]
    out = InquiryOutcome(
        np.array([t.budget for t in traces]),
        np.array([t.final_score for t in traces]),
        [t.stop_reason for t in traces],
    )
    out.decisions = out.decide(policy.threshold)
    return out


def mean_budget(budgets) -> float:
    budgets = np.asarray(budgets)
    if budgets.size == 0:
        raise ValueError("no budgets")
    return float(budgets.mean())


def tune_early_stopping(
    forest: Forest,
    validation: Dataset,
    policy_template: IndividualPolicy,
    budget_target: float,
    eps_grid,
) -> float:
    """Pick the eps whose inquiry maximizes validation AUC within budget.

    Among grid members whose realized mean budget is <= `budget_target`,
    the one with the highest AUC wins (ties -> smaller eps). If none fits
    the budget, the one with the smallest realized mean budget wins.
    """
    eps_grid = sorted(float(e) for e in eps_grid)
    if not eps_grid:
        raise ValueError("empty eps grid")
    if validation.n == 0:
        raise ValueError("empty validation set")
    rows = []
    for eps in eps_grid:
        policy = IndividualPolicy(
            policy_template.alpha_lo,
            policy_template.alpha_hi,
            policy_template.strategy,
            policy_template.threshold,
            early_stop_eps=eps,
            early_stop_window=policy_template.early_stop_window,
        )
        out = classify_individual(forest, validation, policy)
        rows.append((eps, mean_budget(out.budgets), auc(out.scores, validation.y)))
    feasible = [r for r in rows if r[1] <= budget_target]
    if feasible:
        best = max(feasible, key=lambda r: (r[2], -r[0]))
    else:
        best = min(rows, key=lambda r: (r[1], r[0]))
    return best[0]


def write_trace_file(path, traces, groups=None) -> None:
    """Line-delimited JSON audit export, one record per individual."""
    with open(path, "w", encoding="utf-8") as fh:
        for i, t in enumerate(traces):
            rec = {
                "row": i,
                "group": None if groups is None else ("A" if groups[i] else "B"),
                "acquired": list(map(int, t.acquired)),
                "scores": [float(p) for p in t.probabilities],
                "stop_reason": t.stop_reason,
                "decision": int(t.decision),
            }
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
