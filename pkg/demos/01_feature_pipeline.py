"""Walk the raw CSV through the full feature pipeline, step by step.

Shows what each stage does to the data: imputation fills gaps with
column means, the beach name expands to indicator columns, and min-max
scaling puts every numeric feature in [0, 1].
"""

import importlib.resources

import numpy as np

from sensorchain import ingest

csv_path = importlib.resources.files("sensorchain") / "data" / "beach_water_sample.csv"
with open(str(csv_path), "rb") as f:
    records = ingest.parse_csv(f)
print(f"parsed {len(records)} records")

missing = {
    name: sum(1 for r in records if getattr(r, name) is None)
    for name in ingest.NUMERIC_FEATURES
}
print("missing cells per column:", missing)

filled = ingest.impute_means(records)
means = ingest.column_means(records)
print("imputation means:", {k: round(v, 3) for k, v in means.items()})
assert all(getattr(r, n) is not None for r in filled for n in ingest.NUMERIC_FEATURES)

matrix = ingest.encode_one_hot(filled)
print(f"\ndesign matrix: {matrix.rows} rows x {len(matrix.feature_names)} columns")
print("columns:", matrix.feature_names)
print("first row before scaling:", np.round(matrix.X[0], 3))

train, test = ingest.split_train_test(matrix, test_fraction=0.2, seed=42)
train_scaled, params = ingest.scale_minmax(train)
test_scaled, _ = ingest.scale_minmax(test, params)  # reuse training params
print(f"\nsplit: {train.rows} train / {test.rows} test")
print("first training row after scaling:", np.round(train_scaled.X[0], 3))
print("train feature range:", train_scaled.X.min(), "to", train_scaled.X.max())
print("test feature range (clamped):", test_scaled.X.min(), "to", test_scaled.X.max())

group_sums = train_scaled.X[:, :train_scaled.n_indicator_cols].sum(axis=1)
print("every one-hot group sums to 1:", bool(np.all(group_sums == 1.0)))
