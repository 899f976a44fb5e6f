"""Randomization baselines to compare budgeted classifiers against.

A randomized design replaces the scores of a fraction of a group's
individuals with that group's training base rate. Evaluation defaults to
the derandomized expectation, where each randomizable individual
contributes both outcomes with weights (1-f, f), so frontier plots carry
no Monte-Carlo noise; a seeded sampling mode exists for audit realism.
"""

from dataclasses import dataclass

import numpy as np

from .metrics import GeneralizedRates, GroupRates, UndefinedRateError
from .seeds import stream_rng


@dataclass(frozen=True)
class RandomizedDesign:
    """Fractions randomized per group, the base threshold, and the seed."""

    f_a: float = 0.0
    f_b: float = 0.0
    threshold: float = 0.5
    seed: int = 0

    def __post_init__(self):
        for f in (self.f_a, self.f_b):
            if not 0.0 <= f <= 1.0:
                raise ValueError(f"fraction must be in [0,1], got {f}")


def randomize_calibrated(scores, group_a, mu_a, mu_b, design: RandomizedDesign):
    """One seeded realization: replace a fraction of each group's scores by
    the group's training base rate (Pleiss-style withholding)."""
    scores = np.asarray(scores, dtype=float).copy()
    group_a = np.asarray(group_a, dtype=bool)
    rng = stream_rng(design.seed, "randomize")
    for mask, f, mu in ((group_a, design.f_a, mu_a), (~group_a, design.f_b, mu_b)):
        idx = np.flatnonzero(mask)
        k = int(np.floor(f * len(idx) + 0.5))
        if k:
            chosen = rng.permutation(idx)[:k]
            scores[chosen] = mu
    return scores


def randomized_budget(design: RandomizedDesign, d: int, n_a: int, n_b: int) -> float:
    """Mean feature cost: randomized individuals cost 0, the rest cost d."""
    n = n_a + n_b
    return d * ((1.0 - design.f_a) * n_a + (1.0 - design.f_b) * n_b) / n


def _expectation_rates(values, labels, mask, f, replacement):
    """Weighted per-group (fpr-like, fnr-like) mixing original and replaced values."""
    neg = mask & (labels == 0)
    pos = mask & (labels == 1)
    if not neg.any() or not pos.any():
        raise UndefinedRateError("group lacks a label class; rates undefined")
    fpr = (1.0 - f) * float(values[neg].mean()) + f * replacement
    fnr = (1.0 - f) * float(1.0 - values[pos].mean()) + f * (1.0 - replacement)
    return fpr, fnr, int(pos.sum()), int(neg.sum())


def derandomized_rates(scores, labels, group_a, mu_a, mu_b, design: RandomizedDesign):
    """Exact expected (GroupRates, GeneralizedRates) under a randomized design.

    Hard rates threshold both branches at the design threshold; generalized
    rates mix the raw scores with the constant base-rate score. Both are
    affine in the fractions, which is the whole point.
    """
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    group_a = np.asarray(group_a, dtype=bool)
    t = design.threshold
    decisions = (scores >= t).astype(float)

    hard_a = _expectation_rates(decisions, labels, group_a, design.f_a, float(mu_a >= t))
    hard_b = _expectation_rates(decisions, labels, ~group_a, design.f_b, float(mu_b >= t))
    gen_a = _expectation_rates(scores, labels, group_a, design.f_a, mu_a)
    gen_b = _expectation_rates(scores, labels, ~group_a, design.f_b, mu_b)

    hard = GroupRates(
        hard_a[0], hard_a[1], hard_b[0], hard_b[1],
        hard_a[2], hard_a[3], hard_b[2], hard_b[3],
    )
    gen = GeneralizedRates(gen_a[0], gen_a[1], gen_b[0], gen_b[1])
    return hard, gen


@dataclass(frozen=True)
class EqualOddsFit:
    """Outcome of trying to equalize both error rates by randomizing one group."""

    feasible: bool
    randomized_group: str | None  # "A", "B", or None when already equal
    fraction: float | None
    point_a: tuple[float, float]
    point_b: tuple[float, float]
    detail: str = ""


def _trivial_point(mu: float, t: float) -> tuple[float, float]:
    """Operating point when everyone gets the constant score mu."""
    return (1.0, 0.0) if mu >= t else (0.0, 1.0)


def _feasible_fraction(p0, p1, target, eps):
    """Smallest f in [0,1] with the mixed point within eps (max-norm) of target.

    The mixed point (1-f)*p0 + f*p1 is linear in f, so each coordinate's
    |mix - target| <= eps constraint is an interval; intersect them.
    """
    lo, hi = 0.0, 1.0
    for c in range(2):
        delta = p1[c] - p0[c]
        gap = target[c] - p0[c]
        if abs(delta) < 1e-15:
            if abs(gap) > eps:
                return None
            continue
        bounds = sorted(((gap - eps) / delta, (gap + eps) / delta))
        lo, hi = max(lo, bounds[0]), min(hi, bounds[1])
    if lo > hi:
        return None
    return lo


def equal_odds_randomize(
    scores, labels, group_a, mu_a, mu_b, threshold: float, eps: float = 0.02
) -> EqualOddsFit:
    """Fit a Hardt-style single-group randomization achieving equal odds.

    If the groups' operating points already agree within eps, no
    randomization is needed. Otherwise only a group whose point weakly
    dominates the other's (better in both rates) can be degraded toward its
    trivial base-rate point; infeasibility is reported as a result, not an
    error, and mirrors datasets whose achievable regions do not overlap.
    """
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    group_a = np.asarray(group_a, dtype=bool)
    decisions = (scores >= threshold).astype(float)
    ra = _expectation_rates(decisions, labels, group_a, 0.0, 0.0)[:2]
    rb = _expectation_rates(decisions, labels, ~group_a, 0.0, 0.0)[:2]

    gap = max(abs(ra[0] - rb[0]), abs(ra[1] - rb[1]))
    if gap <= eps:
        return EqualOddsFit(True, None, 0.0, ra, rb, "groups already within tolerance")

    candidates = []
    for name, own, other, mu in (("A", ra, rb, mu_a), ("B", rb, ra, mu_b)):
        if not (own[0] <= other[0] and own[1] <= other[1]):
            continue  # only the advantaged (dominating) group may be degraded
        triv = _trivial_point(mu, threshold)
        f = _feasible_fraction(own, triv, other, eps)
        if f is not None:
            candidates.append((f, name))
    if not candidates:
        return EqualOddsFit(
            False, None, None, ra, rb,
            "no single-group randomization reaches the other group's rates",
        )
    f, name = min(candidates)
    return EqualOddsFit(True, name, f, ra, rb)
