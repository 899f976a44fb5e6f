"""Budget-aware fair classification via adaptive feature acquisition.

Classifiers that decide, per group or per individual, how many features to
buy before classifying, so that predictive performance can be balanced
across population subgroups without randomizing anyone's decision.
"""

__version__ = "0.1.0"

from . import acquisition, baselines, data, experiments, forest, metrics, policy

__all__ = [
    "acquisition",
    "baselines",
    "data",
    "experiments",
    "forest",
    "metrics",
    "policy",
    "__version__",
]
