"""Train the regressor and both baselines, then rank them on held-out data.

Uses a reduced network and epoch count so the demo finishes in seconds;
`sensorchain evaluate <csv>` runs the full-size configuration.
"""

import importlib.resources

from sensorchain import baselines, ingest, metrics, network

csv_path = importlib.resources.files("sensorchain") / "data" / "beach_water_sample.csv"
with open(str(csv_path), "rb") as f:
    records = ingest.parse_csv(f)

train_m, test_m, _ = ingest.prepare_train_test(records, test_fraction=0.2, seed=42)
print(f"training on {train_m.rows} rows, evaluating on {test_m.rows}")

cfg = network.TrainConfig(epochs=60, batch_size=32, seed=42)
params, history = network.train(train_m, [32, 16], cfg)
print(f"dnn epoch loss: first {history[0]:.2f} -> last {history[-1]:.4f}")

linear = baselines.fit_linear(train_m)
gbt = baselines.fit_gbt(train_m, n_trees=100, max_depth=3, shrinkage=0.1)

reports = {
    "dnn": metrics.evaluate(test_m.y, network.predict_batch(params, test_m.X)),
    "linear_regression": metrics.evaluate(
        test_m.y, baselines.predict_baseline_batch(linear, test_m.X)
    ),
    "gbt": metrics.evaluate(test_m.y, baselines.predict_baseline_batch(gbt, test_m.X)),
}
ranked = metrics.compare_models(reports)
print()
print(metrics.format_table(ranked))
print("\n(lower rmse is better; evs reads higher-is-better, 1.0 = perfect)")
