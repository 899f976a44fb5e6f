"""Dataset ingestion, schema validation, group partitioning, and splits.

A dataset is a fully observed numeric matrix (categoricals as integer
codes), a binary target, and a two-way group partition taken from a single
sensitive column. Ingestion is strict: missing cells, non-binary targets,
and empty groups are errors, not silent fixes.
"""

import csv
import dataclasses
import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .seeds import stream_rng

KINDS = ("numeric", "categorical")
ROLES = ("feature", "target", "sensitive")


class SchemaError(ValueError):
    """Schema file is malformed or internally inconsistent."""


class IngestError(ValueError):
    """CSV contents violate the schema contract."""


@dataclass(frozen=True)
class Column:
    name: str
    kind: str
    role: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"column {self.name!r}: unknown kind {self.kind!r}")
        if self.role not in ROLES:
            raise SchemaError(f"column {self.name!r}: unknown role {self.role!r}")


@dataclass(frozen=True)
class GroupRule:
    """How the sensitive column is binarized into groups A and B.

    mode "equals": A = rows whose sensitive value equals `value`.
    mode "below_mean": A = rows whose (numeric) sensitive value is below the
    mean; the mean is recomputed on the training rows by `rebind_groups`.
    """

    mode: str
    value: str | None = None

    def __post_init__(self):
        if self.mode not in ("equals", "below_mean"):
            raise SchemaError(f"unknown group rule {self.mode!r}")
        if self.mode == "equals" and self.value is None:
            raise SchemaError("group rule 'equals' needs a value")


@dataclass(frozen=True)
class Schema:
    columns: tuple[Column, ...]
    group_a: GroupRule
    positive_label: str | None = None
    codes: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise SchemaError("duplicate column names")
        if sum(c.role == "target" for c in self.columns) != 1:
            raise SchemaError("schema needs exactly one target column")
        if sum(c.role == "sensitive" for c in self.columns) != 1:
            raise SchemaError("schema needs exactly one sensitive column")
        if not self.feature_names:
            raise SchemaError("schema needs at least one feature column")
        sens = self.sensitive_column
        if self.group_a.mode == "below_mean" and sens.kind != "numeric":
            raise SchemaError("group rule 'below_mean' needs a numeric sensitive column")
        if self.group_a.mode == "equals" and sens.kind != "categorical":
            raise SchemaError("group rule 'equals' needs a categorical sensitive column")

    @property
    def feature_names(self) -> list[str]:
        return [c.name for c in self.columns if c.role == "feature"]

    @property
    def feature_kinds(self) -> list[str]:
        return [c.kind for c in self.columns if c.role == "feature"]

    @property
    def target_column(self) -> Column:
        return next(c for c in self.columns if c.role == "target")

    @property
    def sensitive_column(self) -> Column:
        return next(c for c in self.columns if c.role == "sensitive")

    @property
    def n_features(self) -> int:
        return len(self.feature_names)


def load_schema(path) -> Schema:
    """Read a schema sidecar (JSON: column list + group rule + target label)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise SchemaError(f"schema file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"schema file {path} is not valid JSON: {exc}") from None
    try:
        columns = tuple(
            Column(c["name"], c["kind"], c["role"]) for c in raw["columns"]
        )
        rule_raw = raw["group_a"]
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"schema file {path} missing field: {exc}") from None
    if "equals" in rule_raw:
        rule = GroupRule("equals", str(rule_raw["equals"]))
    elif rule_raw.get("below") == "train_mean":
        rule = GroupRule("below_mean")
    else:
        raise SchemaError(f"unrecognized group_a rule in {path}: {rule_raw}")
    positive = raw.get("target", {}).get("positive")
    return Schema(columns, rule, None if positive is None else str(positive))


def save_schema(schema: Schema, path) -> None:
    raw = {
        "columns": [dataclasses.asdict(c) for c in schema.columns],
        "group_a": (
            {"equals": schema.group_a.value}
            if schema.group_a.mode == "equals"
            else {"below": "train_mean"}
        ),
    }
    if schema.positive_label is not None:
        raw["target"] = {"positive": schema.positive_label}
    if schema.codes:
        raw["codes"] = schema.codes
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(raw, fh, indent=2, sort_keys=True)
        fh.write("\n")


@dataclass(frozen=True)
class Dataset:
    """Fully observed feature matrix with binary labels and a group split.

    `group_a` marks membership in group A; everyone else is group B.
    `sensitive` keeps the raw sensitive values (codes for categoricals) so
    groups can be re-derived once a train/test split is known.
    """

    X: np.ndarray
    y: np.ndarray
    group_a: np.ndarray
    sensitive: np.ndarray
    schema: Schema
    group_info: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        n = len(self.y)
        if self.X.shape != (n, self.schema.n_features):
            raise IngestError("feature matrix shape does not match schema")
        if not np.isfinite(self.X).all():
            raise IngestError("feature matrix contains non-finite values")
        if not np.isin(self.y, (0, 1)).all():
            raise IngestError("labels must be 0/1")
        _check_groups(self.y, self.group_a)

    @property
    def n(self) -> int:
        return len(self.y)

    @property
    def d(self) -> int:
        return self.schema.n_features

    def take(self, indices) -> "Dataset":
        """Row subset (used for train/test views)."""
        idx = np.asarray(indices)
        return dataclasses.replace(
            self,
            X=self.X[idx],
            y=self.y[idx],
            group_a=self.group_a[idx],
            sensitive=self.sensitive[idx],
        )


def _check_groups(y, group_a):
    n_a = int(group_a.sum())
    if n_a == 0 or n_a == len(group_a):
        raise IngestError("sensitive column yields an empty group")
    rate = float(y.mean())
    if not 0.0 < rate < 1.0:
        raise IngestError("target has a single class")
    for name, mask in (("A", group_a), ("B", ~group_a)):
        r = float(y[mask].mean())
        if not 0.0 < r < 1.0:
            warnings.warn(
                f"group {name} has a single label class; error-rate metrics "
                "will be undefined for it",
                stacklevel=3,
            )


def load_csv(path, schema: Schema) -> Dataset:
    """Ingest a CSV against `schema`.

    Categorical values are mapped to stable integer codes (sorted lexical
    order) recorded in the returned dataset's schema. Row order is
    preserved; any missing or unparseable cell is an error.
    """
    try:
        fh = open(path, "r", encoding="utf-8", newline="")
    except FileNotFoundError:
        raise IngestError(f"data file not found: {path}") from None
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise IngestError(f"{path}: empty file") from None
        rows = list(reader)

    col_idx = {}
    for col in schema.columns:
        if col.name not in header:
            raise IngestError(f"{path}: missing column {col.name!r}")
        col_idx[col.name] = header.index(col.name)
    if not rows:
        raise IngestError(f"{path}: no data rows")

    def cells(col):
        i = col_idx[col.name]
        out = []
        for r, row in enumerate(rows):
            if i >= len(row) or row[i].strip() == "":
                raise IngestError(f"{path}: missing value for {col.name!r} at row {r + 2}")
            out.append(row[i].strip())
        return out

    codes: dict[str, dict[str, int]] = {}

    def encode(col, values):
        if col.kind == "numeric":
            try:
                return np.array([float(v) for v in values])
            except ValueError:
                bad = next(v for v in values if not _is_float(v))
                raise IngestError(
                    f"{path}: unparseable numeric cell {bad!r} in column {col.name!r}"
                ) from None
        table = {v: i for i, v in enumerate(sorted(set(values)))}
        codes[col.name] = table
        return np.array([table[v] for v in values], dtype=float)

    features = [encode(c, cells(c)) for c in schema.columns if c.role == "feature"]
    X = np.column_stack(features)

    tcol = schema.target_column
    tvals = cells(tcol)
    distinct = sorted(set(tvals))
    if len(distinct) != 2:
        raise IngestError(
            f"{path}: target {tcol.name!r} has {len(distinct)} distinct values, need 2"
        )
    positive = schema.positive_label
    if positive is None:
        if distinct == ["0", "1"]:
            positive = "1"
        else:
            raise IngestError(
                f"{path}: target values {distinct} need schema target.positive"
            )
    if positive not in distinct:
        raise IngestError(
            f"{path}: positive label {positive!r} absent from target column"
        )
    y = np.array([1 if v == positive else 0 for v in tvals], dtype=np.int8)

    scol = schema.sensitive_column
    svals = cells(scol)
    if scol.kind == "numeric":
        sensitive = encode(scol, svals)
    else:
        table = {v: i for i, v in enumerate(sorted(set(svals)))}
        codes[scol.name] = table
        sensitive = np.array([table[v] for v in svals], dtype=float)

    rule = schema.group_a
    if rule.mode == "equals":
        table = codes[scol.name]
        if rule.value not in table:
            raise IngestError(
                f"{path}: group value {rule.value!r} absent from {scol.name!r}"
            )
        group_a = sensitive == table[rule.value]
        info = {"rule": "equals", "value": rule.value}
    else:
        thr = float(sensitive.mean())
        group_a = sensitive < thr
        info = {"rule": "below_mean", "threshold": thr, "basis": "all"}

    schema = dataclasses.replace(schema, codes=codes)
    return Dataset(X, y, group_a, sensitive, schema, info)


def _is_float(v):
    try:
        float(v)
        return True
    except ValueError:
        return False


@dataclass(frozen=True)
class Split:
    train_indices: np.ndarray
    test_indices: np.ndarray
    seed: int

    def __post_init__(self):
        if np.intersect1d(self.train_indices, self.test_indices).size:
            raise ValueError("train and test indices overlap")


def split(dataset: Dataset, fraction: float = 0.8, seed: int = 0) -> Split:
    """Random train/test split; train size = round(fraction * n)."""
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"fraction must be in (0,1), got {fraction}")
    n = dataset.n
    order = stream_rng(seed, "split").permutation(n)
    n_train = int(np.floor(fraction * n + 0.5))
    n_train = min(max(n_train, 1), n - 1)
    return Split(np.sort(order[:n_train]), np.sort(order[n_train:]), seed)


def rebind_groups(dataset: Dataset, sp: Split) -> Dataset:
    """Recompute the group partition using statistics of the training rows.

    Only affects the "below_mean" rule, whose threshold is defined on the
    training split; "equals" datasets are returned unchanged.
    """
    if dataset.schema.group_a.mode != "below_mean":
        return dataset
    thr = float(dataset.sensitive[sp.train_indices].mean())
    group_a = dataset.sensitive < thr
    _check_groups(dataset.y, group_a)
    info = {"rule": "below_mean", "threshold": thr, "basis": "train"}
    return dataclasses.replace(dataset, group_a=group_a, group_info=info)


def base_rate(dataset: Dataset, group: str = "all") -> float:
    """Fraction of positive labels in group "a", "b", or "all"."""
    if group == "all":
        mask = np.ones(dataset.n, dtype=bool)
    elif group == "a":
        mask = dataset.group_a
    elif group == "b":
        mask = ~dataset.group_a
    else:
        raise ValueError(f"group must be 'a', 'b', or 'all', got {group!r}")
    if not mask.any():
        raise ValueError(f"group {group!r} is empty")
    return float(dataset.y[mask].mean())


def synthesize(
    n: int,
    d: int,
    group_separabilities: tuple[float, float],
    seed: int = 0,
) -> Dataset:
    """Two-group dataset whose groups differ in how predictable they are.

    Labels follow a clean linear rule on the features, then each group's
    labels are flipped with probability (1 - separability) / 2, so a
    separability of 1 would be noiseless and 0.5 moderately noisy.
    """
    if n < 10:
        raise ValueError("n must be at least 10")
    if d < 2:
        raise ValueError("d must be at least 2")
    sep_a, sep_b = group_separabilities
    for s in (sep_a, sep_b):
        if not 0.0 < s < 1.0:
            raise ValueError(f"separability must be strictly inside (0,1), got {s}")

    rng = stream_rng(seed, "synthesize", n, d)
    X = rng.standard_normal((n, d))
    group_a = rng.random(n) < 0.5
    weights = 0.85 ** np.arange(d)
    z = X @ weights
    clean = (z > 0).astype(np.int8)
    flip_p = np.where(group_a, (1.0 - sep_a) / 2.0, (1.0 - sep_b) / 2.0)
    flips = rng.random(n) < flip_p
    y = np.where(flips, 1 - clean, clean).astype(np.int8)

    columns = tuple(
        [Column(f"x{k}", "numeric", "feature") for k in range(d)]
        + [Column("grp", "categorical", "sensitive"), Column("label", "numeric", "target")]
    )
    schema = Schema(columns, GroupRule("equals", "a"), codes={"grp": {"a": 1, "b": 0}})
    return Dataset(
        X,
        y,
        group_a,
        group_a.astype(float),
        schema,
        {"rule": "equals", "value": "a", "separabilities": (sep_a, sep_b)},
    )
