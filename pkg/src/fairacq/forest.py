"""Bagged decision trees that can score arbitrarily incomplete observations.

Trees are grown on full feature vectors (Gini splits, bootstrap bags).
At prediction time an observation may carry any subset of its features:
the traversal follows the decided branch where the split feature is
available and both branches, weighted by the training fractions that went
each way, where it is not. A tree's score is the weight-averaged smoothed
leaf purity over every leaf the traversal lands on, and the forest score
is the plain average over trees.
"""

import dataclasses
import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .data import Dataset
from .seeds import stream_rng

FORMAT_VERSION = 1


@dataclass(frozen=True)
class ForestConfig:
    n_trees: int = 100
    max_depth: int = 8
    min_leaf: int = 5
    mtry: int | None = None  # None -> ceil(sqrt(d))
    bootstrap: bool = True
    leaf_smoothing: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        if self.min_leaf < 1:
            raise ValueError("min_leaf must be >= 1")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.leaf_smoothing < 0:
            raise ValueError("leaf_smoothing must be >= 0")

    def resolve_mtry(self, d: int) -> int:
        m = self.mtry if self.mtry is not None else math.ceil(math.sqrt(d))
        if not 1 <= m <= d:
            raise ValueError(f"mtry must be in [1, {d}], got {m}")
        return m


@dataclass(frozen=True)
class PartialObservation:
    """A length-d value vector of which only the masked entries are known."""

    values: np.ndarray
    mask: np.ndarray

    def __post_init__(self):
        if self.values.shape != self.mask.shape:
            raise ValueError("values and mask must have the same length")
        if self.mask.dtype != np.bool_:
            object.__setattr__(self, "mask", self.mask.astype(bool))

    @classmethod
    def from_indices(cls, values, indices, d=None) -> "PartialObservation":
        values = np.asarray(values, dtype=float)
        d = len(values) if d is None else d
        mask = np.zeros(d, dtype=bool)
        idx = list(indices)
        if idx:
            mask[np.asarray(idx, dtype=int)] = True
        return cls(values, mask)

    @property
    def budget(self) -> int:
        return int(self.mask.sum())

    def with_feature(self, j: int, value: float) -> "PartialObservation":
        values = self.values.copy()
        values[j] = value
        mask = self.mask.copy()
        mask[j] = True
        return PartialObservation(values, mask)


@dataclass
class Tree:
    """Array-of-nodes tree in preorder (parents before children).

    feature[i] is -1 for leaves; threshold[i] holds the numeric split value
    (go left when x <= threshold) or the categorical code (go left when
    x == code, flagged by is_cat[i]).
    """

    feature: np.ndarray
    threshold: np.ndarray
    is_cat: np.ndarray
    left: np.ndarray
    right: np.ndarray
    n_train: np.ndarray
    n_pos: np.ndarray
    purity: np.ndarray = field(default=None, repr=False)
    frac_left: np.ndarray = field(default=None, repr=False)
    base_score: float = field(default=None, repr=False)

    def finalize(self, smoothing: float) -> "Tree":
        s = smoothing
        self.purity = (self.n_pos + s) / (self.n_train + 2.0 * s)
        with np.errstate(invalid="ignore"):
            self.frac_left = np.where(
                self.feature >= 0,
                self.n_train[np.maximum(self.left, 0)] / self.n_train,
                0.0,
            )
        leaves = self.feature < 0
        # Derived directly from the leaf arrays, independent of traversal.
        self.base_score = float(
            np.sum(self.n_train[leaves] / self.n_train[0] * self.purity[leaves])
        )
        return self

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    def goes_left(self, i: int, value: float) -> bool:
        if self.is_cat[i]:
            return value == self.threshold[i]
        return value <= self.threshold[i]

    def score(self, values: np.ndarray, mask: np.ndarray) -> float:
        """Multi-path score of one partial observation."""

        def rec(i):
            j = self.feature[i]
            if j < 0:
                return self.purity[i]
            if mask[j]:
                nxt = self.left[i] if self.goes_left(i, values[j]) else self.right[i]
                return rec(nxt)
            fl = self.frac_left[i]
            return fl * rec(self.left[i]) + (1.0 - fl) * rec(self.right[i])

        return float(rec(0))

    def leaf_weights(self, values: np.ndarray, mask: np.ndarray) -> dict[int, float]:
        """Leaf index -> traversal weight; weights of reached leaves sum to 1."""
        out: dict[int, float] = {}

        def rec(i, w):
            if w == 0.0:
                return
            j = self.feature[i]
            if j < 0:
                out[i] = out.get(i, 0.0) + w
                return
            if mask[j]:
                nxt = self.left[i] if self.goes_left(i, values[j]) else self.right[i]
                rec(nxt, w)
            else:
                fl = self.frac_left[i]
                rec(self.left[i], w * fl)
                rec(self.right[i], w * (1.0 - fl))

        rec(0, 1.0)
        return out

    def scores_masked(self, X: np.ndarray, mask: np.ndarray) -> np.ndarray:
        """Vectorized multi-path scores for many rows sharing one mask."""
        n = X.shape[0]
        weights = np.zeros((self.n_nodes, n))
        weights[0] = 1.0
        scores = np.zeros(n)
        for i in range(self.n_nodes):
            j = self.feature[i]
            w = weights[i]
            if j < 0:
                scores += w * self.purity[i]
                continue
            if mask[j]:
                if self.is_cat[i]:
                    go = X[:, j] == self.threshold[i]
                else:
                    go = X[:, j] <= self.threshold[i]
                weights[self.left[i]] = w * go
                weights[self.right[i]] = w * ~go
            else:
                fl = self.frac_left[i]
                weights[self.left[i]] = w * fl
                weights[self.right[i]] = w * (1.0 - fl)
        return scores


@dataclass
class Forest:
    trees: list[Tree]
    config: ForestConfig
    importances: np.ndarray
    feature_names: list[str]
    feature_kinds: list[str]
    marginals: list[tuple[np.ndarray, np.ndarray]]
    _thresholds: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def d(self) -> int:
        return len(self.feature_names)

    @property
    def base_score(self) -> float:
        """Forest score of the empty observation."""
        return float(np.mean([t.base_score for t in self.trees]))

    def thresholds_for(self, j: int) -> np.ndarray:
        """Sorted distinct split values the forest uses for feature j."""
        if j not in self._thresholds:
            vals = np.concatenate(
                [t.threshold[(t.feature == j)] for t in self.trees]
            )
            self._thresholds[j] = np.unique(vals)
        return self._thresholds[j]

    def uses_feature(self, j: int) -> bool:
        return self.thresholds_for(j).size > 0


# ---------------------------------------------------------------------------
# Training


class _Builder:
    def __init__(self, X, y, kinds, config, rng, importances):
        self.X = X
        self.y = y
        self.numeric = np.array([k == "numeric" for k in kinds])
        self.cfg = config
        self.mtry = config.resolve_mtry(X.shape[1])
        self.rng = rng
        self.imp = importances
        self.cols = {
            "feature": [],
            "threshold": [],
            "is_cat": [],
            "left": [],
            "right": [],
            "n_train": [],
            "n_pos": [],
        }

    def build(self, rows) -> Tree:
        self._grow(rows, depth=0)
        c = self.cols
        return Tree(
            feature=np.array(c["feature"], dtype=np.int32),
            threshold=np.array(c["threshold"], dtype=float),
            is_cat=np.array(c["is_cat"], dtype=bool),
            left=np.array(c["left"], dtype=np.int32),
            right=np.array(c["right"], dtype=np.int32),
            n_train=np.array(c["n_train"], dtype=float),
            n_pos=np.array(c["n_pos"], dtype=float),
        )

    def _push(self, n, pos):
        i = len(self.cols["feature"])
        for key, val in (
            ("feature", -1),
            ("threshold", 0.0),
            ("is_cat", False),
            ("left", -1),
            ("right", -1),
            ("n_train", float(n)),
            ("n_pos", float(pos)),
        ):
            self.cols[key].append(val)
        return i

    def _grow(self, rows, depth):
        y = self.y[rows]
        n = len(rows)
        pos = int(y.sum())
        node = self._push(n, pos)
        if depth >= self.cfg.max_depth or n < 2 * self.cfg.min_leaf or pos in (0, n):
            return node
        d = self.X.shape[1]
        feats = self.rng.choice(d, size=self.mtry, replace=False)
        best = self._best_split(rows, np.sort(feats))
        if best is None:
            return node
        cost, j, thr, gain, left_rows, right_rows = best
        self.imp[j] += gain
        self.cols["feature"][node] = j
        self.cols["threshold"][node] = thr
        self.cols["is_cat"][node] = not self.numeric[j]
        self.cols["left"][node] = self._grow(left_rows, depth + 1)
        self.cols["right"][node] = self._grow(right_rows, depth + 1)
        return node

    def _best_split(self, rows, feats):
        y = self.y[rows].astype(float)
        n = len(rows)
        total_pos = y.sum()
        parent_cost = _gini_cost(n, total_pos)
        best = None
        for j in feats:
            col = self.X[rows, j]
            if self.numeric[j]:
                found = self._scan_numeric(col, y, n, total_pos)
            else:
                found = self._scan_categorical(col, y, n, total_pos)
            if found is None:
                continue
            cost, thr = found
            if best is None or cost < best[0] - 1e-12:
                best = (cost, int(j), thr)
        if best is None or best[0] >= parent_cost - 1e-12:
            return None
        cost, j, thr = best
        col = self.X[rows, j]
        go = (col == thr) if not self.numeric[j] else (col <= thr)
        return cost, j, thr, parent_cost - cost, rows[go], rows[~go]

    def _scan_numeric(self, col, y, n, total_pos):
        order = np.argsort(col, kind="stable")
        cs = col[order]
        pos = np.cumsum(y[order])[:-1]
        k = np.arange(1, n, dtype=float)
        valid = (cs[1:] != cs[:-1]) & (k >= self.cfg.min_leaf) & (n - k >= self.cfg.min_leaf)
        if not valid.any():
            return None
        nl = k[valid]
        pl = pos[valid]
        cost = _gini_cost(nl, pl) + _gini_cost(n - nl, total_pos - pl)
        i = int(np.argmin(cost))
        boundary = np.nonzero(valid)[0][i]
        thr = 0.5 * (cs[boundary] + cs[boundary + 1])
        return float(cost[i]), float(thr)

    def _scan_categorical(self, col, y, n, total_pos):
        codes, inverse = np.unique(col, return_inverse=True)
        counts = np.bincount(inverse).astype(float)
        pos = np.bincount(inverse, weights=y)
        valid = (counts >= self.cfg.min_leaf) & (n - counts >= self.cfg.min_leaf)
        if not valid.any():
            return None
        nl = counts[valid]
        pl = pos[valid]
        cost = _gini_cost(nl, pl) + _gini_cost(n - nl, total_pos - pl)
        i = int(np.argmin(cost))
        return float(cost[i]), float(codes[valid][i])


def _gini_cost(n, pos):
    """Row-count-weighted binary Gini impurity: n * (1 - p^2 - (1-p)^2)."""
    neg = n - pos
    return n - (pos * pos + neg * neg) / n


def fit_arrays(X, y, config: ForestConfig, kinds=None, names=None) -> Forest:
    """Train on raw arrays; `kinds` defaults to all-numeric."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=np.int8)
    n, d = X.shape
    kinds = list(kinds) if kinds is not None else ["numeric"] * d
    names = list(names) if names is not None else [f"x{k}" for k in range(d)]
    if y.min() == y.max():
        warnings.warn("training labels are a single class; forest is constant")

    importances = np.zeros(d)
    trees = []
    for t in range(config.n_trees):
        rng = stream_rng(config.seed, "train", t)
        rows = rng.integers(0, n, size=n) if config.bootstrap else np.arange(n)
        tree = _Builder(X, y, kinds, config, rng, importances).build(rows)
        trees.append(tree.finalize(config.leaf_smoothing))

    total = importances.sum()
    importances = importances / total if total > 0 else np.full(d, 1.0 / d)
    return Forest(trees, config, importances, names, kinds, _marginals(X, kinds))


def train(train_set: Dataset, config: ForestConfig) -> Forest:
    """Train a forest on a dataset's full feature matrix."""
    return fit_arrays(
        train_set.X,
        train_set.y,
        config,
        kinds=train_set.schema.feature_kinds,
        names=train_set.schema.feature_names,
    )


_MAX_MARGINAL = 256


def _marginals(X, kinds):
    """Per-feature empirical value distributions (compressed for wide numerics)."""
    out = []
    for j, kind in enumerate(kinds):
        values, counts = np.unique(X[:, j], return_counts=True)
        probs = counts / counts.sum()
        if kind == "numeric" and len(values) > _MAX_MARGINAL:
            cum = np.cumsum(probs)
            targets = (np.arange(_MAX_MARGINAL) + 0.5) / _MAX_MARGINAL
            idx = np.searchsorted(cum, targets)
            values = values[idx]
            probs = np.full(_MAX_MARGINAL, 1.0 / _MAX_MARGINAL)
        out.append((values, probs))
    return out


# ---------------------------------------------------------------------------
# Prediction


def predict_partial(forest: Forest, obs: PartialObservation) -> float:
    """Forest probability for a partial observation (mean of tree scores)."""
    if len(obs.values) != forest.d:
        raise ValueError("observation length does not match forest")
    return float(np.mean([t.score(obs.values, obs.mask) for t in forest.trees]))


def predict_masked_matrix(forest: Forest, X: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Scores for every row of X with the same acquisition mask."""
    X = np.asarray(X, dtype=float)
    total = np.zeros(X.shape[0])
    for tree in forest.trees:
        total += tree.scores_masked(X, mask)
    return total / len(forest.trees)


def predict_full(forest: Forest, X: np.ndarray) -> np.ndarray:
    """Classical full-information prediction."""
    return predict_masked_matrix(forest, X, np.ones(forest.d, dtype=bool))


def feature_importance(forest: Forest) -> np.ndarray:
    """Feature indices in descending importance; ties broken by lower index."""
    d = forest.d
    return np.lexsort((np.arange(d), -forest.importances))


# ---------------------------------------------------------------------------
# Serialization


def forest_to_dict(forest: Forest) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "config": dataclasses.asdict(forest.config),
        "feature_names": forest.feature_names,
        "feature_kinds": forest.feature_kinds,
        "importances": forest.importances.tolist(),
        "marginals": [
            {"values": v.tolist(), "probs": p.tolist()} for v, p in forest.marginals
        ],
        "trees": [
            {
                "feature": t.feature.tolist(),
                "threshold": t.threshold.tolist(),
                "is_cat": t.is_cat.tolist(),
                "left": t.left.tolist(),
                "right": t.right.tolist(),
                "n_train": t.n_train.tolist(),
                "n_pos": t.n_pos.tolist(),
            }
            for t in forest.trees
        ],
    }


def forest_from_dict(raw: dict) -> Forest:
    if raw.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported forest file version {raw.get('format_version')!r}")
    config = ForestConfig(**raw["config"])
    trees = [
        Tree(
            feature=np.array(t["feature"], dtype=np.int32),
            threshold=np.array(t["threshold"], dtype=float),
            is_cat=np.array(t["is_cat"], dtype=bool),
            left=np.array(t["left"], dtype=np.int32),
            right=np.array(t["right"], dtype=np.int32),
            n_train=np.array(t["n_train"], dtype=float),
            n_pos=np.array(t["n_pos"], dtype=float),
        ).finalize(config.leaf_smoothing)
        for t in raw["trees"]
    ]
    marginals = [
        (np.array(m["values"], dtype=float), np.array(m["probs"], dtype=float))
        for m in raw["marginals"]
    ]
    return Forest(
        trees,
        config,
        np.array(raw["importances"], dtype=float),
        list(raw["feature_names"]),
        list(raw["feature_kinds"]),
        marginals,
    )


def save_forest(forest: Forest, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(forest_to_dict(forest), fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def load_forest(path) -> Forest:
    with open(path, "r", encoding="utf-8") as fh:
        return forest_from_dict(json.load(fh))
