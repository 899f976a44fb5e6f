"""Deterministic surrogate datasets with documented marginal statistics.

The three public benchmark datasets used in the experiments are not
redistributable inside this repository, so these builders synthesize
stand-ins that match their documented scale, base rates, and group mixes,
and reproduce the qualitative group structure the experiments rely on
(e.g. one dataset whose groups' achievable error regions do not overlap).
Ingestion treats the generated CSVs exactly like the real files; drop-in
replacement with the originals is a schema-file edit away.

Labels are always drawn from a single shared conditional P(y | x), so any
per-group score structure emerges from group differences in the feature
distributions, never from a group-specific labeling rule; this keeps a
pooled model per-group calibrated by construction.
"""

import csv
import os

import numpy as np

from .seeds import stream_rng

ADULT_SEED_STREAM = 11
GERMAN_SEED_STREAM = 12
_GERMAN_SALT = 1
HEART_SEED_STREAM = 13


def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


def _solve_intercept(z, target, u=None):
    """Intercept b with mean(sigmoid(z + b)) == target, by bisection.

    Given the uniform draws `u` that will decide the labels, targets the
    realized positive fraction instead of its expectation, pinning the
    dataset's base rate to within 1/n.
    """
    lo, hi = -30.0, 30.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        rate = (
            _sigmoid(z + mid).mean() if u is None else (u < _sigmoid(z + mid)).mean()
        )
        if rate < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _cat(rng, mask_a, names, p_a, p_b):
    """Categorical column with group-conditional distributions."""
    n = len(mask_a)
    out = np.empty(n, dtype=object)
    for mask, probs in ((mask_a, p_a), (~mask_a, p_b)):
        k = int(mask.sum())
        if k:
            out[mask] = rng.choice(names, size=k, p=probs)
    return out


def _effect(values, table):
    return np.array([table[v] for v in values], dtype=float)


def _write_csv(path, header, columns):
    rows = zip(*columns)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _write_schema(path, columns, group_rule, positive):
    import json

    raw = {
        "columns": [{"name": n, "kind": k, "role": r} for n, k, r in columns],
        "group_a": group_rule,
        "target": {"positive": positive},
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(raw, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _ints(values):
    return [str(int(v)) for v in values]


def _floats(values, nd=2):
    return [format(round(float(v), nd), f".{nd}f") for v in values]


_EDU_NAMES = [
    "Preschool", "1st-4th", "5th-6th", "7th-8th", "9th", "10th", "11th",
    "12th", "HS-grad", "Some-college", "Assoc-voc", "Assoc-acdm",
    "Bachelors", "Masters", "Prof-school", "Doctorate",
]

_OCC = {
    "Exec-managerial": 0.55, "Prof-specialty": 0.50, "Sales": 0.20,
    "Craft-repair": 0.05, "Adm-clerical": -0.05, "Transport-moving": -0.10,
    "Machine-op-inspct": -0.25, "Other-service": -0.45,
}
_OCC_P_W = [0.15, 0.14, 0.12, 0.14, 0.12, 0.09, 0.10, 0.14]
_OCC_P_N = [0.10, 0.10, 0.10, 0.13, 0.13, 0.10, 0.13, 0.21]

_WORK = {
    "Private": 0.00, "Self-emp-inc": 0.30, "Self-emp-not-inc": 0.05,
    "Federal-gov": 0.15, "Local-gov": 0.05, "State-gov": 0.00,
}
_WORK_P_W = [0.70, 0.04, 0.08, 0.03, 0.08, 0.07]
_WORK_P_N = [0.72, 0.02, 0.05, 0.05, 0.09, 0.07]

_COUNTRY = ["United-States", "Mexico", "Philippines", "Germany", "India",
            "China", "El-Salvador", "Jamaica"]
_COUNTRY_P_W = [0.95, 0.01, 0.005, 0.015, 0.005, 0.005, 0.005, 0.005]
_COUNTRY_P_N = [0.72, 0.08, 0.05, 0.01, 0.05, 0.04, 0.03, 0.02]


def make_adult(out_dir, seed: int = 0, n: int = 49000):
    """Income-style dataset: two groups of very different size and signal.

    The minority group's features sit in flatter, lower-probability regions
    of the shared conditional, which compresses its scores downward: at any
    one threshold it sees fewer false positives but many more false
    negatives than the majority, so neither group's operating point
    dominates the other's.
    """
    rng = stream_rng(seed, "synthesize", ADULT_SEED_STREAM)
    white = rng.random(n) < 0.86
    race = np.empty(n, dtype=object)
    race[white] = "White"
    k = int((~white).sum())
    race[~white] = rng.choice(
        ["Black", "Asian-Pac-Islander", "Amer-Indian-Eskimo", "Other"],
        size=k, p=[0.50, 0.29, 0.10, 0.11],
    )

    age = np.clip(np.round(17 + rng.gamma(2.3, 8.5, n) + white), 17, 90)
    edu_center = np.where(white, 10.45, 9.15)
    edu = np.clip(np.round(rng.normal(edu_center, 2.6)), 1, 16)
    education = np.array([_EDU_NAMES[int(e) - 1] for e in edu], dtype=object)
    has_gain = rng.random(n) < np.where(white, 0.055, 0.018)
    capital_gain = np.where(has_gain, np.round(np.exp(rng.normal(8.7, 0.6, n))), 0.0)
    has_loss = rng.random(n) < np.where(white, 0.035, 0.02)
    capital_loss = np.where(has_loss, np.clip(np.round(rng.normal(1850, 250, n)), 300, 4000), 0.0)
    hours = np.clip(np.round(rng.normal(np.where(white, 42, 38), 11)), 1, 99)
    married = rng.random(n) < np.where(white, 0.50, 0.40)
    marital = np.where(
        married, "Married-civ-spouse",
        np.where(rng.random(n) < 0.62, "Never-married", "Divorced"),
    ).astype(object)
    male = rng.random(n) < np.where(white, 0.68, 0.60)
    sex = np.where(male, "Male", "Female").astype(object)
    relationship = np.where(
        married,
        np.where(male, "Husband", "Wife"),
        np.array(["Not-in-family", "Own-child", "Unmarried"], dtype=object)[
            rng.choice(3, size=n, p=[0.60, 0.25, 0.15])
        ],
    ).astype(object)
    occupation = _cat(rng, white, list(_OCC), _OCC_P_W, _OCC_P_N)
    workclass = _cat(rng, white, list(_WORK), _WORK_P_W, _WORK_P_N)
    country = _cat(rng, white, _COUNTRY, _COUNTRY_P_W, _COUNTRY_P_N)
    fnlwgt = np.round(np.exp(rng.normal(11.7, 0.55, n)))

    age_hump = -(((age - 47.0) / 14.0) ** 2)
    z = (
        1.20 * (edu - 9.5) / 2.6
        + 0.55 * age_hump
        + 1.05 * (married.astype(float) - 0.5)
        + _effect(occupation, _OCC)
        + 0.45 * (hours - 40.0) / 11.0
        + 2.9 * has_gain.astype(float)
        + 0.35 * has_loss.astype(float)
        + 0.25 * (male.astype(float) - 0.5)
        + _effect(workclass, _WORK)
        + np.where(country == "United-States", 0.05, -0.12)
    )
    z = 1.15 * z
    u = rng.random(n)
    y = u < _sigmoid(z + _solve_intercept(z, 0.25, u))
    income = np.where(y, ">50K", "<=50K").astype(object)

    header = [
        "age", "workclass", "fnlwgt", "education", "education_num",
        "marital_status", "occupation", "relationship", "race", "sex",
        "capital_gain", "capital_loss", "hours_per_week", "native_country",
        "income",
    ]
    columns = [
        _ints(age), workclass, _ints(fnlwgt), education, _ints(edu),
        marital, occupation, relationship, race, sex,
        _ints(capital_gain), _ints(capital_loss), _ints(hours), country,
        income,
    ]
    schema_cols = [
        ("age", "numeric", "feature"),
        ("workclass", "categorical", "feature"),
        ("fnlwgt", "numeric", "feature"),
        ("education", "categorical", "feature"),
        ("education_num", "numeric", "feature"),
        ("marital_status", "categorical", "feature"),
        ("occupation", "categorical", "feature"),
        ("relationship", "categorical", "feature"),
        ("race", "categorical", "sensitive"),
        ("sex", "categorical", "feature"),
        ("capital_gain", "numeric", "feature"),
        ("capital_loss", "numeric", "feature"),
        ("hours_per_week", "numeric", "feature"),
        ("native_country", "categorical", "feature"),
        ("income", "categorical", "target"),
    ]
    csv_path = os.path.join(out_dir, "adult.csv")
    schema_path = os.path.join(out_dir, "adult.schema.json")
    _write_csv(csv_path, header, columns)
    _write_schema(schema_path, schema_cols, {"equals": "White"}, ">50K")
    return csv_path, schema_path


_CHECKING = {"no-account": 1.90, ">=200DM": 0.30, "0-200DM": -0.10, "<0DM": -2.00}
_CHECKING_P = [0.09, 0.38, 0.45, 0.08]
_HISTORY = {"critical-account": 1.70, "all-paid": 0.20, "existing-paid": 0.00,
            "delayed": -1.70, "no-credits": -0.25}
_HISTORY_P = [0.07, 0.26, 0.55, 0.06, 0.06]
_PURPOSE = {"car-new": -0.10, "car-used": 0.20, "furniture": 0.00,
            "radio-tv": 0.10, "education": -0.15, "business": -0.05}
_SAVINGS = {"none": -0.25, "<100DM": 0.00, "100-500DM": 0.10,
            "500-1000DM": 0.60, ">=1000DM": 1.50}
_SAVINGS_P = [0.48, 0.21, 0.16, 0.08, 0.07]
_EMPLOY = {"unemployed": -1.60, "<1yr": -0.30, "1-4yr": 0.00, "4-7yr": 0.25, ">=7yr": 0.80}
_EMPLOY_P = [0.06, 0.16, 0.40, 0.21, 0.17]
_PROPERTY = {"real-estate": 0.70, "life-insurance": 0.10, "car-other": 0.00, "none": -0.70}
_PROPERTY_P = [0.24, 0.21, 0.35, 0.20]
_HOUSING = {"own": 0.30, "rent": -0.40, "free": -0.10}
_HOUSING_P = [0.60, 0.25, 0.15]
_JOB = {"unskilled": -0.30, "skilled": 0.00, "management": 0.50, "unemployed-job": -0.90}
_JOB_P = [0.20, 0.60, 0.15, 0.05]
_DEBTORS = {"none": 0.00, "co-applicant": -1.20, "guarantor": 1.00}
_DEBTORS_P = [0.90, 0.04, 0.06]
_OTHER_INST = {"bank": -0.80, "stores": -0.40, "none": 0.10}
_OTHER_INST_P = [0.12, 0.05, 0.83]


def _cat_sparse(rng, n, table, probs, tilt=None):
    """Categorical column; optional per-row multiplier on rare-level odds."""
    names = list(table)
    probs = np.asarray(probs, dtype=float)
    if tilt is None:
        return rng.choice(names, size=n, p=probs / probs.sum())
    logit = np.log(probs)[None, :] + np.abs(
        np.array([table[t] for t in names])
    )[None, :] * tilt[:, None]
    pr = np.exp(logit)
    pr /= pr.sum(axis=1, keepdims=True)
    u = rng.random(n)
    idx = (u[:, None] > np.cumsum(pr, axis=1)).sum(axis=1)
    return np.array(names, dtype=object)[idx]


def make_german(out_dir, seed: int = 0, n: int = 1000):
    """Credit-style dataset; groups are the young/old halves around mean age.

    Risk signal is deliberately sparse: most applicants carry neutral values
    everywhere and a minority carry one or two decisive flags (no checking
    account, critical history, very long duration, a guarantor), so the
    number of features needed to judge an applicant varies a lot from
    person to person. The young/old groups differ only mildly, in how often
    decisive values occur.
    """
    rng_age = stream_rng(seed, "synthesize", GERMAN_SEED_STREAM)
    age = np.clip(np.round(19 + rng_age.gamma(2.0, 8.25, n)), 19, 75)
    rng = stream_rng(seed, "synthesize", GERMAN_SEED_STREAM, _GERMAN_SALT)
    older = (age - age.mean()) / age.std()
    tilt = 0.03 * older  # older people show decisive values slightly more often

    checking = _cat_sparse(rng, n, _CHECKING, _CHECKING_P, tilt)
    duration = np.clip(np.round(rng.normal(21, 10, n)), 4, 72)
    history = _cat_sparse(rng, n, _HISTORY, _HISTORY_P, tilt)
    purpose = rng.choice(list(_PURPOSE), size=n)
    amount = np.round(np.exp(rng.normal(7.8, 0.75, n)))
    savings = _cat_sparse(rng, n, _SAVINGS, _SAVINGS_P, tilt)
    employment = _cat_sparse(rng, n, _EMPLOY, _EMPLOY_P, tilt)
    installment_rate = rng.integers(1, 5, n)
    personal = rng.choice(["single", "married", "divorced"], size=n, p=[0.55, 0.35, 0.1])
    debtors = _cat_sparse(rng, n, _DEBTORS, _DEBTORS_P, tilt)
    residence = np.clip(np.round(2.2 + rng.normal(0, 0.9, n)), 1, 4)
    prop = _cat_sparse(rng, n, _PROPERTY, _PROPERTY_P, tilt)
    other_inst = _cat_sparse(rng, n, _OTHER_INST, _OTHER_INST_P, tilt)
    housing = _cat_sparse(rng, n, _HOUSING, _HOUSING_P, tilt)
    existing_credits = np.clip(np.round(rng.gamma(2.0, 0.8, n)), 1, 4)
    job = _cat_sparse(rng, n, _JOB, _JOB_P, tilt)
    people_liable = np.where(rng.random(n) < 0.85, 1, 2)
    telephone = rng.choice(["yes", "none"], size=n, p=[0.4, 0.6])
    foreign = rng.choice(["yes", "no"], size=n, p=[0.04, 0.96])
    years_at_bank = np.clip(np.round(8.0 * rng.beta(2, 5, n)), 0, 40)
    monthly_income = np.round(np.exp(rng.normal(7.6, 0.4, n)))
    recent_inquiries = np.minimum(rng.poisson(1.1, n), 6)
    overdraft_days = np.minimum(np.round(rng.gamma(0.8, 9.0, n)), 90)

    log_inc = np.log(monthly_income)
    z = (
        _effect(checking, _CHECKING)
        + _effect(history, _HISTORY)
        - 1.60 * (duration >= 42) + 0.90 * (duration <= 9) - 0.15 * (duration - 21.0) / 10.0
        + _effect(purpose, _PURPOSE)
        - 1.50 * (np.log(amount) > 8.9) - 0.10 * (np.log(amount) - 7.8) / 0.75
        + _effect(savings, _SAVINGS)
        + _effect(employment, _EMPLOY)
        - 0.50 * (installment_rate == 4)
        + _effect(debtors, _DEBTORS)
        + 0.05 * (residence - 2.2)
        + _effect(prop, _PROPERTY)
        + _effect(other_inst, _OTHER_INST)
        + _effect(housing, _HOUSING)
        - 0.40 * (existing_credits >= 3)
        + _effect(job, _JOB)
        - 0.25 * (people_liable == 2)
        + 0.15 * (telephone == "yes")
        - 0.90 * (foreign == "yes")
        + 0.80 * (years_at_bank >= 8)
        + 1.20 * (log_inc > 8.15) - 0.80 * (log_inc < 7.05) + 0.10 * (log_inc - 7.6) / 0.4
        - 1.00 * (recent_inquiries >= 3)
        - 1.30 * (overdraft_days >= 25)
    )
    u = rng.random(n)
    y = u < _sigmoid(z + _solve_intercept(z, 0.70, u))
    credit = np.where(y, "good", "bad").astype(object)
    header = [
        "checking_status", "duration_months", "credit_history", "purpose",
        "credit_amount", "savings", "employment_since", "installment_rate",
        "personal_status", "other_debtors", "residence_since", "property",
        "other_installments", "housing", "existing_credits", "job",
        "people_liable", "telephone", "foreign_worker", "years_at_bank",
        "monthly_income", "recent_inquiries", "overdraft_days", "age",
        "credit",
    ]
    columns = [
        checking, _ints(duration), history, purpose, _ints(amount), savings,
        employment, _ints(installment_rate), personal, debtors,
        _ints(residence), prop, other_inst, housing, _ints(existing_credits),
        job, _ints(people_liable), telephone, foreign, _ints(years_at_bank),
        _ints(monthly_income), _ints(recent_inquiries), _ints(overdraft_days),
        _ints(age), credit,
    ]
    kinds = {
        "checking_status": "categorical", "duration_months": "numeric",
        "credit_history": "categorical", "purpose": "categorical",
        "credit_amount": "numeric", "savings": "categorical",
        "employment_since": "categorical", "installment_rate": "numeric",
        "personal_status": "categorical", "other_debtors": "categorical",
        "residence_since": "numeric", "property": "categorical",
        "other_installments": "categorical", "housing": "categorical",
        "existing_credits": "numeric", "job": "categorical",
        "people_liable": "numeric", "telephone": "categorical",
        "foreign_worker": "categorical", "years_at_bank": "numeric",
        "monthly_income": "numeric", "recent_inquiries": "numeric",
        "overdraft_days": "numeric",
    }
    schema_cols = [(name, kinds[name], "feature") for name in header[:-2]]
    schema_cols.append(("age", "numeric", "sensitive"))
    schema_cols.append(("credit", "categorical", "target"))
    csv_path = os.path.join(out_dir, "german.csv")
    schema_path = os.path.join(out_dir, "german.schema.json")
    _write_csv(csv_path, header, columns)
    _write_schema(schema_path, schema_cols, {"below": "train_mean"}, "good")
    return csv_path, schema_path



_CHEST = {"asymptomatic": 1.00, "typical-angina": -0.75, "atypical-angina": -0.45,
          "non-anginal": -0.15}
_SLOPE = {"flat": 0.40, "down": 0.30, "up": -0.40}
_THAL = {"reversible-defect": 0.50, "fixed-defect": 0.30, "normal": -0.30}


def _age_tilted(rng, age, names, table, young_shift, spread_shift=0.0):
    """Sample categories whose odds tilt with age.

    `young_shift` moves younger rows toward lower-effect categories (a
    level difference); `spread_shift` concentrates EXTREME categories, of
    either sign, in older rows, leaving younger rows in neutral ones (a
    predictability difference).
    """
    effects = np.array([table[t] for t in names])
    std_age = (age - age.mean()) / age.std()
    logits = (
        effects[None, :] * (1.0 + young_shift * std_age[:, None])
        + np.abs(effects)[None, :] * spread_shift * std_age[:, None]
    )
    probs = np.exp(logits)
    probs /= probs.sum(axis=1, keepdims=True)
    cum = np.cumsum(probs, axis=1)
    u = rng.random(len(age))
    idx = (u[:, None] > cum).sum(axis=1)
    return np.array(names, dtype=object)[idx]


def make_heart(out_dir, seed: int = 0, n: int = 906):
    """Cardiac-style dataset; groups are the young/old halves around mean age.

    The age link is mostly a predictability difference: diagnostic features
    take decisive values far more often for older patients, while younger
    patients' features cluster in neutral ranges, so classifying them well
    needs many weak signals combined.
    """
    rng = stream_rng(seed, "synthesize", HEART_SEED_STREAM)
    age = np.clip(np.round(94 - rng.gamma(8.0, 4.15, n)), 30, 88)
    std_age = (age - age.mean()) / age.std()
    # informative-value spread grows with age
    sharp = np.clip(1.0 + 0.55 * std_age, 0.25, 2.2)

    max_hr = np.clip(np.round(rng.normal(152 - 1.5 * std_age, 6.0 + 13.0 * sharp)), 90, 202)
    st_dep = np.round(np.maximum(0.0, rng.normal(0.05 + 0.05 * std_age, 0.48 * sharp, n)), 1)
    vessels = np.clip(np.round(rng.gamma(1.0, 0.6, n) * (0.50 + 0.55 * sharp)), 0, 3)
    chest = _age_tilted(rng, age, list(_CHEST), _CHEST, 0.06, spread_shift=0.85)
    angina = np.where(rng.random(n) < _sigmoid(-1.0 + 0.06 * std_age), "yes", "no").astype(object)
    slope = _age_tilted(rng, age, list(_SLOPE), _SLOPE, 0.08, spread_shift=0.7)
    thal = _age_tilted(rng, age, list(_THAL), _THAL, 0.08, spread_shift=0.7)
    male = rng.random(n) < 0.68
    sex = np.where(male, "male", "female").astype(object)
    resting_bp = np.clip(np.round(rng.normal(127 + 0.14 * age, 14)), 90, 210)
    chol = np.clip(np.round(rng.normal(218 + 0.45 * age, 40)), 110, 480)
    fbs = np.where(rng.random(n) < _sigmoid(-1.9 + 0.2 * std_age), "true", "false").astype(object)
    ecg = rng.choice(["normal", "st-abnormality", "lv-hypertrophy"], size=n, p=[0.55, 0.2, 0.25])
    smoker = np.where(rng.random(n) < _sigmoid(-0.6 - 0.15 * std_age), "yes", "no").astype(object)
    exercise_hours = np.round(np.maximum(0.0, rng.gamma(2.0, 1.4, n) - 0.25 * np.maximum(std_age, 0)), 1)
    bmi = np.round(rng.normal(25.5 + 0.45 * std_age, 3.8), 1)
    family = np.where(rng.random(n) < 0.3, "yes", "no").astype(object)
    diabetes = np.where(rng.random(n) < _sigmoid(-1.8 + 0.25 * std_age), "yes", "no").astype(object)

    z = (
        -1.15 * (max_hr - 152.0) / 19.0
        + 0.75 * (st_dep - 0.3) / 0.6
        + 0.62 * (vessels - 0.7)
        + _effect(chest, _CHEST)
        + 0.55 * (angina == "yes")
        + _effect(slope, _SLOPE)
        + _effect(thal, _THAL)
        + 0.35 * (male.astype(float) - 0.5)
        + 0.15 * (resting_bp - 135.0) / 14.0
        + 0.10 * (chol - 245.0) / 40.0
        + 0.15 * (fbs == "true")
        + 0.15 * (ecg == "lv-hypertrophy") - 0.05 * (ecg == "normal")
        + 0.28 * (smoker == "yes")
        - 0.20 * (exercise_hours - 2.3) / 1.9
        + 0.15 * (bmi - 25.5) / 3.8
        + 0.28 * (family == "yes")
        + 0.22 * (diabetes == "yes")
    )
    z = 1.10 * z
    u = rng.random(n)
    y = u < _sigmoid(z + _solve_intercept(z, 0.54, u))
    condition = np.where(y, "present", "absent").astype(object)

    header = [
        "chest_pain", "resting_bp", "cholesterol", "fasting_blood_sugar",
        "resting_ecg", "max_heart_rate", "exercise_angina", "st_depression",
        "st_slope", "major_vessels", "thalassemia", "sex", "smoker",
        "exercise_hours", "bmi", "family_history", "diabetes", "age",
        "condition",
    ]
    columns = [
        chest, _ints(resting_bp), _ints(chol), fbs, ecg, _ints(max_hr),
        angina, _floats(st_dep, 1), slope, _ints(vessels), thal, sex, smoker,
        _floats(exercise_hours, 1), _floats(bmi, 1), family, diabetes,
        _ints(age), condition,
    ]
    kinds = {
        "chest_pain": "categorical", "resting_bp": "numeric",
        "cholesterol": "numeric", "fasting_blood_sugar": "categorical",
        "resting_ecg": "categorical", "max_heart_rate": "numeric",
        "exercise_angina": "categorical", "st_depression": "numeric",
        "st_slope": "categorical", "major_vessels": "numeric",
        "thalassemia": "categorical", "sex": "categorical",
        "smoker": "categorical", "exercise_hours": "numeric",
        "bmi": "numeric", "family_history": "categorical",
        "diabetes": "categorical",
    }
    schema_cols = [(name, kinds[name], "feature") for name in header[:-2]]
    schema_cols.append(("age", "numeric", "sensitive"))
    schema_cols.append(("condition", "categorical", "target"))
    csv_path = os.path.join(out_dir, "heart.csv")
    schema_path = os.path.join(out_dir, "heart.schema.json")
    _write_csv(csv_path, header, columns)
    _write_schema(schema_path, schema_cols, {"below": "train_mean"}, "present")
    return csv_path, schema_path


def make_all(out_dir, seed: int = 0):
    os.makedirs(out_dir, exist_ok=True)
    return {
        "adult": make_adult(out_dir, seed),
        "german": make_german(out_dir, seed),
        "heart": make_heart(out_dir, seed),
    }


def main(argv=None):
    import argparse

    parser = argparse.ArgumentParser(description="Build the surrogate datasets.")
    parser.add_argument("out_dir")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    paths = make_all(args.out_dir, args.seed)
    for name, (csv_path, schema_path) in sorted(paths.items()):
        print(f"{name}: {csv_path} + {schema_path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
