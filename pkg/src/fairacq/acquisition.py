"""Choosing which feature to query next.

Static selection walks a fixed importance ranking; greedy selection picks
the unacquired feature whose answer is expected to move the predicted
probability the most, averaging the absolute change over the feature's
training marginal.
"""

from dataclasses import dataclass

import numpy as np

from .forest import Forest, PartialObservation, feature_importance, predict_partial


class FeaturesExhausted(ValueError):
    """Asked for the next feature when every feature is already acquired."""


@dataclass(frozen=True)
class AcquisitionStrategy:
    """mode "static" carries a full feature ranking; "greedy" re-scores candidates."""

    mode: str
    ranking: tuple[int, ...] | None = None
    value_source: str = "train_marginal"
    max_candidates: int = 64

    def __post_init__(self):
        if self.mode not in ("static", "greedy"):
            raise ValueError(f"unknown acquisition mode {self.mode!r}")
        if self.value_source != "train_marginal":
            raise ValueError(f"unsupported value source {self.value_source!r}")
        if self.mode == "static":
            if self.ranking is None:
                raise ValueError("static selection needs a ranking")
            r = sorted(self.ranking)
            if r != list(range(len(r))):
                raise ValueError("ranking must be a permutation of 0..d-1")

    @classmethod
    def static(cls, forest: Forest) -> "AcquisitionStrategy":
        return cls("static", tuple(int(j) for j in feature_importance(forest)))

    @classmethod
    def greedy(cls, max_candidates: int = 64) -> "AcquisitionStrategy":
        return cls("greedy", max_candidates=max_candidates)


def next_feature_static(ranking, acquired) -> int:
    """Highest-ranked feature not yet acquired."""
    acquired = set(acquired)
    for j in ranking:
        if j not in acquired:
            return int(j)
    raise FeaturesExhausted("all features acquired")


def candidate_values(forest: Forest, j: int, max_candidates: int = 64):
    """Candidate values and weights for querying feature j.

    Categorical features enumerate every training code. Numeric features
    are piecewise constant between the forest's split thresholds for j, so
    one representative per induced interval is exact; interval weights come
    from the training marginal. Lists longer than `max_candidates` are
    deterministically quantile-subsampled.
    """
    values, probs = forest.marginals[j]
    if forest.feature_kinds[j] == "numeric":
        thresholds = forest.thresholds_for(j)
        if thresholds.size:
            reps = np.append(thresholds, thresholds[-1] + 1.0)
            bucket = np.searchsorted(thresholds, values, side="left")
            weights = np.bincount(bucket, weights=probs, minlength=len(reps))
            keep = weights > 0
            values, probs = reps[keep], weights[keep]
    if len(values) > max_candidates:
        cum = np.cumsum(probs)
        targets = (np.arange(max_candidates) + 0.5) / max_candidates
        idx = np.searchsorted(cum, targets * cum[-1])
        values = values[idx]
        probs = np.full(max_candidates, 1.0 / max_candidates)
    return values, probs / probs.sum()


def expected_change(
    forest: Forest, obs: PartialObservation, j: int, max_candidates: int = 64
) -> float:
    """Mean absolute score change from querying feature j, over its marginal."""
    if not 0 <= j < forest.d:
        raise ValueError(f"feature index {j} out of range")
    if obs.mask[j]:
        raise ValueError(f"feature {j} already acquired")
    if not forest.uses_feature(j):
        return 0.0
    base = predict_partial(forest, obs)
    values, weights = candidate_values(forest, j, max_candidates)
    total = 0.0
    for v, w in zip(values, weights):
        total += w * abs(predict_partial(forest, obs.with_feature(j, float(v))) - base)
    return float(total)


def next_feature_greedy(
    forest: Forest, obs: PartialObservation, max_candidates: int = 64
) -> int:
    """argmax of expected_change over unacquired features; ties -> lowest index."""
    best_j, best_score = None, -1.0
    for j in range(forest.d):
        if obs.mask[j]:
            continue
        score = expected_change(forest, obs, j, max_candidates)
        if score > best_score:
            best_j, best_score = j, score
    if best_j is None:
        raise FeaturesExhausted("all features acquired")
    return best_j


def next_feature(forest: Forest, obs: PartialObservation, strategy: AcquisitionStrategy) -> int:
    if strategy.mode == "static":
        return next_feature_static(strategy.ranking, np.nonzero(obs.mask)[0])
    return next_feature_greedy(forest, obs, strategy.max_candidates)
