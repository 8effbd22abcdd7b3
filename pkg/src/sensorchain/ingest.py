"""CSV ingestion and feature pipeline for beach water sensor records.

Raw rows go through mean imputation, one-hot encoding of the beach name,
and min-max scaling to [0, 1] before any model sees them. Scaling (and the
imputation means) are always captured from training data and reused, with
clamping, on test or live readings.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, replace
from datetime import datetime
from typing import IO, Iterable

import numpy as np

DEFAULT_COLUMNS = {
    "beach_name": "Beach Name",
    "measurement_timestamp": "Measurement Timestamp",
    "water_temperature": "Water Temperature",
    "turbidity": "Turbidity",
    "transducer_depth": "Transducer Depth",
    "wave_height": "Wave Height",
    "wave_period": "Wave Period",
    "battery_life": "Battery Life",
}

# Fixed order of the numeric feature columns in every matrix.
NUMERIC_FEATURES = (
    "water_temperature",
    "turbidity",
    "transducer_depth",
    "wave_height",
    "wave_period",
)

HOUR_FEATURE = "hour_of_day"


class MissingColumnError(ValueError):
    """CSV header lacks a mapped column."""


class MalformedRowError(ValueError):
    """Non-empty, non-numeric text in a numeric CSV cell."""

    def __init__(self, line_no: int, column: str, value: str):
        super().__init__(f"line {line_no}: column {column!r} has non-numeric value {value!r}")
        self.line_no = line_no
        self.column = column


class AllMissingColumnError(ValueError):
    """A column has zero observed values, so no mean exists."""

    def __init__(self, column: str):
        super().__init__(f"column {column!r} has no observed values to average")
        self.column = column


class MissingTargetError(ValueError):
    """A training row has no battery-life value."""


class TooFewRowsError(ValueError):
    """Not enough rows to split into train and test."""


@dataclass(frozen=True)
class SensorRecord:
    """One raw sensor reading; None marks a missing value."""

    beach_name: str
    measurement_timestamp: str | None
    water_temperature: float | None
    turbidity: float | None
    transducer_depth: float | None
    wave_height: float | None
    wave_period: float | None
    battery_life: float | None


@dataclass(frozen=True)
class ScalingParams:
    """Per-feature affine transform x' = (x - offset) / scale.

    Columns with apply=False (one-hot indicators) pass through unchanged.
    kind is "minmax" (clamped to [0, 1] on reuse) or "zscore".
    """

    offset: np.ndarray
    scale: np.ndarray
    apply: np.ndarray
    kind: str = "minmax"


@dataclass
class FeatureMatrix:
    """Numeric design matrix plus target vector.

    The first n_indicator_cols columns are the one-hot beach indicators;
    the rest follow NUMERIC_FEATURES order (plus hour_of_day if enabled).
    """

    X: np.ndarray
    y: np.ndarray
    feature_names: list[str]
    n_indicator_cols: int
    scaling: ScalingParams | None = None

    @property
    def rows(self) -> int:
        return self.X.shape[0]


def _parse_cell(raw: str, line_no: int, column: str) -> float | None:
    text = raw.strip()
    if text == "":
        return None
    try:
        value = float(text)
    except ValueError:
        raise MalformedRowError(line_no, column, text) from None
    if not np.isfinite(value):
        raise MalformedRowError(line_no, column, text)
    return value


def parse_csv(source: bytes | str | IO, columns: dict[str, str] | None = None) -> list[SensorRecord]:
    """Parse CSV content into SensorRecords, empty cells becoming None.

    source may be bytes, text, or a readable file object. Raises
    MissingColumnError if the header lacks a mapped column and
    MalformedRowError (with its line number) on non-numeric text in a
    numeric cell.
    """
    columns = columns or DEFAULT_COLUMNS
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    reader = csv.reader(io.StringIO(source))
    try:
        header = next(reader)
    except StopIteration:
        raise MissingColumnError("empty file: no header row") from None
    header = [h.strip() for h in header]
    index: dict[str, int] = {}
    for field_name, column_name in columns.items():
        if column_name not in header:
            raise MissingColumnError(f"header lacks column {column_name!r} for field {field_name!r}")
        index[field_name] = header.index(column_name)

    records = []
    for row in reader:
        if not row or all(cell.strip() == "" for cell in row):
            continue
        line_no = reader.line_num

        def cell(field_name: str) -> str:
            i = index[field_name]
            return row[i] if i < len(row) else ""

        ts = cell("measurement_timestamp").strip()
        records.append(SensorRecord(
            beach_name=cell("beach_name").strip(),
            measurement_timestamp=ts or None,
            water_temperature=_parse_cell(cell("water_temperature"), line_no, "water_temperature"),
            turbidity=_parse_cell(cell("turbidity"), line_no, "turbidity"),
            transducer_depth=_parse_cell(cell("transducer_depth"), line_no, "transducer_depth"),
            wave_height=_parse_cell(cell("wave_height"), line_no, "wave_height"),
            wave_period=_parse_cell(cell("wave_period"), line_no, "wave_period"),
            battery_life=_parse_cell(cell("battery_life"), line_no, "battery_life"),
        ))
    return records


def column_means(records: Iterable[SensorRecord], fields: tuple[str, ...] = NUMERIC_FEATURES) -> dict[str, float]:
    """Arithmetic mean of observed values per column.

    Raises AllMissingColumnError for a column with zero observed values.
    """
    means = {}
    records = list(records)
    for name in fields:
        observed = [getattr(r, name) for r in records if getattr(r, name) is not None]
        if not observed:
            raise AllMissingColumnError(name)
        means[name] = float(np.mean(observed))
    return means


def impute_means(records: list[SensorRecord]) -> list[SensorRecord]:
    """Replace each missing numeric cell with its column mean.

    Non-missing cells are untouched; the operation is idempotent. The
    battery-life target is never imputed.
    """
    if not records:
        return []
    means = column_means(records)
    out = []
    for record in records:
        fills = {
            name: means[name]
            for name in NUMERIC_FEATURES
            if getattr(record, name) is None
        }
        out.append(replace(record, **fills) if fills else record)
    return out


def hour_of_day(timestamp: str | None) -> int | None:
    """Hour 0-23 from an ISO-like timestamp, or None if unparseable."""
    if not timestamp:
        return None
    for parser in (
        datetime.fromisoformat,
        lambda t: datetime.strptime(t, "%m/%d/%Y %I:%M:%S %p"),
    ):
        try:
            return parser(timestamp).hour
        except ValueError:
            continue
    return None


def encode_one_hot(
    records: list[SensorRecord],
    categories: list[str] | None = None,
    include_hour: bool = False,
) -> FeatureMatrix:
    """Expand beach_name into indicator columns and assemble the matrix.

    Categories are ordered lexicographically when learned from the data;
    passing a stored category list reproduces the training layout, with
    unseen names mapping to an all-zero indicator group. Records must
    already be imputed and carry a battery-life target.
    """
    if categories is None:
        categories = sorted({r.beach_name for r in records})
    cat_index = {name: i for i, name in enumerate(categories)}
    k = len(categories)

    numeric_names = list(NUMERIC_FEATURES) + ([HOUR_FEATURE] if include_hour else [])
    feature_names = [f"beach_name={c}" for c in categories] + numeric_names

    hour_values = None
    if include_hour:
        hours = [hour_of_day(r.measurement_timestamp) for r in records]
        observed = [h for h in hours if h is not None]
        if not observed:
            raise AllMissingColumnError(HOUR_FEATURE)
        hour_mean = float(np.mean(observed))
        hour_values = [float(h) if h is not None else hour_mean for h in hours]

    X = np.zeros((len(records), k + len(numeric_names)))
    y = np.zeros(len(records))
    for i, record in enumerate(records):
        if record.battery_life is None:
            raise MissingTargetError(f"record {i} has no battery_life value")
        j = cat_index.get(record.beach_name)
        if j is not None:
            X[i, j] = 1.0
        for f, name in enumerate(NUMERIC_FEATURES):
            value = getattr(record, name)
            if value is None:
                raise ValueError(f"record {i} field {name!r} is missing; run impute_means first")
            X[i, k + f] = value
        if include_hour:
            X[i, k + len(NUMERIC_FEATURES)] = hour_values[i]
        y[i] = record.battery_life
    return FeatureMatrix(X=X, y=y, feature_names=feature_names, n_indicator_cols=k)


def scale_minmax(m: FeatureMatrix, params: ScalingParams | None = None) -> tuple[FeatureMatrix, ScalingParams]:
    """Scale numeric columns to [0, 1]; indicators pass through.

    With params=None the per-column min/max are captured from m (the
    training path). Given stored params (test/inference path) they are
    reused and results are clamped to [0, 1]. A constant column maps to 0.
    """
    n_features = m.X.shape[1]
    if params is None:
        apply = np.zeros(n_features, dtype=bool)
        apply[m.n_indicator_cols:] = True
        offset = np.zeros(n_features)
        scale = np.ones(n_features)
        col_min = m.X.min(axis=0) if m.rows else np.zeros(n_features)
        col_max = m.X.max(axis=0) if m.rows else np.zeros(n_features)
        offset[apply] = col_min[apply]
        span = col_max - col_min
        span[span == 0.0] = 1.0
        scale[apply] = span[apply]
        params = ScalingParams(offset=offset, scale=scale, apply=apply, kind="minmax")
    elif params.kind != "minmax":
        raise ValueError(f"expected minmax params, got {params.kind!r}")

    X = m.X.copy()
    X[:, params.apply] = (X[:, params.apply] - params.offset[params.apply]) / params.scale[params.apply]
    X[:, params.apply] = np.clip(X[:, params.apply], 0.0, 1.0)
    return replace(m, X=X, scaling=params), params


def scale_zscore(m: FeatureMatrix, params: ScalingParams | None = None) -> tuple[FeatureMatrix, ScalingParams]:
    """Standardize numeric columns to zero mean, unit variance.

    Alternate to the default [0, 1] scaling; no clamping. A constant
    column maps to 0.
    """
    n_features = m.X.shape[1]
    if params is None:
        apply = np.zeros(n_features, dtype=bool)
        apply[m.n_indicator_cols:] = True
        offset = np.zeros(n_features)
        scale = np.ones(n_features)
        if m.rows:
            mean = m.X.mean(axis=0)
            std = m.X.std(axis=0)
            std[std == 0.0] = 1.0
            offset[apply] = mean[apply]
            scale[apply] = std[apply]
        params = ScalingParams(offset=offset, scale=scale, apply=apply, kind="zscore")
    elif params.kind != "zscore":
        raise ValueError(f"expected zscore params, got {params.kind!r}")

    X = m.X.copy()
    X[:, params.apply] = (X[:, params.apply] - params.offset[params.apply]) / params.scale[params.apply]
    return replace(m, X=X, scaling=params), params


def inverse_scale(X: np.ndarray, params: ScalingParams) -> np.ndarray:
    """Undo scale_minmax/scale_zscore on a scaled matrix."""
    out = np.asarray(X, dtype=float).copy()
    out[:, params.apply] = out[:, params.apply] * params.scale[params.apply] + params.offset[params.apply]
    return out


def split_train_test(m: FeatureMatrix, test_fraction: float, seed: int) -> tuple[FeatureMatrix, FeatureMatrix]:
    """Deterministic seeded shuffle into disjoint train/test matrices.

    Test size is round(rows * test_fraction), half rounding away from zero.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ValueError(f"test_fraction must be in (0, 1), got {test_fraction}")
    if m.rows < 2:
        raise TooFewRowsError(f"need at least 2 rows to split, got {m.rows}")
    n_test = int(m.rows * test_fraction + 0.5)
    perm = np.random.default_rng(seed).permutation(m.rows)
    test_idx, train_idx = perm[:n_test], perm[n_test:]

    def take(idx: np.ndarray) -> FeatureMatrix:
        return replace(m, X=m.X[idx].copy(), y=m.y[idx].copy())

    return take(train_idx), take(test_idx)


@dataclass
class PreprocessorState:
    """Everything needed to turn a raw reading into a model input.

    Captured at training time and persisted with the model so inference
    is self-contained: beach categories, imputation means, the optional
    hour-of-day feature, and the fitted scaling parameters.
    """

    categories: list[str]
    numeric_means: dict[str, float]
    scaling: ScalingParams
    feature_names: list[str]
    include_hour: bool = False

    def transform_raw(self, reading: dict) -> np.ndarray:
        """Feature vector for one raw reading dict (keyed by field name).

        Missing numeric fields are imputed with the stored training means;
        an unseen or absent beach name yields an all-zero indicator group.
        """
        k = len(self.categories)
        numeric_names = list(NUMERIC_FEATURES) + ([HOUR_FEATURE] if self.include_hour else [])
        x = np.zeros(k + len(numeric_names))
        beach = reading.get("beach_name")
        if beach is not None and str(beach) in self.categories:
            x[self.categories.index(str(beach))] = 1.0
        for f, name in enumerate(numeric_names):
            if name == HOUR_FEATURE:
                hour = hour_of_day(reading.get("measurement_timestamp"))
                value = float(hour) if hour is not None else self.numeric_means[HOUR_FEATURE]
            else:
                raw = reading.get(name)
                value = float(raw) if raw is not None else self.numeric_means[name]
            if not np.isfinite(value):
                raise ValueError(f"field {name!r} is not finite: {value}")
            x[k + f] = value
        scaled = (x - self.scaling.offset) / self.scaling.scale
        scaled[~self.scaling.apply] = x[~self.scaling.apply]
        if self.scaling.kind == "minmax":
            scaled[self.scaling.apply] = np.clip(scaled[self.scaling.apply], 0.0, 1.0)
        return scaled


def _preprocessor_state(
    matrix: FeatureMatrix,
    means: dict[str, float],
    params: ScalingParams,
    include_hour: bool,
) -> PreprocessorState:
    categories = [n.split("=", 1)[1] for n in matrix.feature_names[:matrix.n_indicator_cols]]
    return PreprocessorState(
        categories=categories,
        numeric_means=means,
        scaling=params,
        feature_names=matrix.feature_names,
        include_hour=include_hour,
    )


def _means_with_hour(records: list[SensorRecord], include_hour: bool) -> dict[str, float]:
    means = column_means(records)
    if include_hour:
        hours = [h for h in (hour_of_day(r.measurement_timestamp) for r in records) if h is not None]
        means[HOUR_FEATURE] = float(np.mean(hours))
    return means


def prepare_full(
    records: list[SensorRecord],
    scaling: str = "minmax",
    include_hour: bool = False,
) -> tuple[FeatureMatrix, PreprocessorState]:
    """Pipeline over every row, for training a production model."""
    filled = impute_means(records)
    means = _means_with_hour(records, include_hour)
    matrix = encode_one_hot(filled, include_hour=include_hour)
    scaler = {"minmax": scale_minmax, "zscore": scale_zscore}[scaling]
    scaled, params = scaler(matrix)
    return scaled, _preprocessor_state(matrix, means, params, include_hour)


def prepare_train_test(
    records: list[SensorRecord],
    test_fraction: float = 0.2,
    seed: int = 42,
    scaling: str = "minmax",
    include_hour: bool = False,
) -> tuple[FeatureMatrix, FeatureMatrix, PreprocessorState]:
    """Full pipeline: impute, encode, split, then scale with train params.

    Test rows are scaled with the training parameters (clamped), never
    their own, so no test statistics leak into the features.
    """
    filled = impute_means(records)
    means = _means_with_hour(records, include_hour)
    matrix = encode_one_hot(filled, include_hour=include_hour)
    train, test = split_train_test(matrix, test_fraction, seed)
    scaler = {"minmax": scale_minmax, "zscore": scale_zscore}[scaling]
    train, params = scaler(train)
    test, _ = scaler(test, params)
    return train, test, _preprocessor_state(matrix, means, params, include_hour)
