"""Generate the bundled beach-water sample CSV.

Seeded synthetic stand-in for the public beach sensor feed: six beaches,
summer readings, column-specific missing-cell rates (the depth transducer
is the flakiest channel, as in the real feed), and a battery-life target
driven by smooth nonlinear feature effects plus noise. Regenerate with:

    python3 scripts/make_sample_data.py src/sensorchain/data/beach_water_sample.csv
"""

import csv
import sys
from datetime import datetime, timedelta

import numpy as np

BEACHES = [
    "63rd Street Beach",
    "Calumet Beach",
    "Montrose Beach",
    "Ohio Street Beach",
    "Osterman Beach",
    "Rainbow Beach",
]

BEACH_EFFECT = {
    "63rd Street Beach": -2.0,
    "Calumet Beach": 1.5,
    "Montrose Beach": 3.0,
    "Ohio Street Beach": -3.0,
    "Osterman Beach": 0.5,
    "Rainbow Beach": -1.0,
}

N_ROWS = 2000
SEED = 20200715
NOISE_STD = 0.4

MISSING_RATES = {
    "Water Temperature": 0.01,
    "Turbidity": 0.01,
    "Transducer Depth": 0.08,
    "Wave Height": 0.02,
    "Wave Period": 0.02,
}


def battery_life(beach, temp, turb, depth, height, period, rng):
    # Smooth nonlinear response: saturating turbidity drain, a mid-range
    # temperature dip, a rotated wave/temperature ridge, and a quadratic
    # depth term.
    zt = (temp - 21.0) / 3.0
    zp = (period - 4.0) / 1.0
    zh = (height - 0.35) / 0.25
    value = 74.0
    value -= 9.0 / (1.0 + np.exp(-(turb - 9.0) / 2.5))
    value -= 5.0 * np.sin(np.pi * (temp - 14.0) / 16.0) ** 2
    value -= 4.0 * np.tanh(0.9 * zt + 0.8 * zp - 0.5 * zh)
    value += 3.0 * (depth - 1.5) ** 2
    value -= 2.5 * height * period / 4.0
    value += BEACH_EFFECT[beach]
    value += rng.normal(0.0, NOISE_STD)
    return float(np.clip(value, 48.0, 85.0))


def main(out_path):
    rng = np.random.default_rng(SEED)
    start = datetime(2020, 6, 1, 5, 0, 0)
    rows = []
    for i in range(N_ROWS):
        beach = BEACHES[int(rng.integers(len(BEACHES)))]
        ts = start + timedelta(hours=int(rng.integers(0, 24 * 100)))
        temp = float(np.clip(rng.normal(21.0, 3.0), 14.0, 30.0))
        turb = float(np.clip(rng.lognormal(1.6, 0.8), 0.2, 30.0))
        depth = float(np.clip(rng.normal(1.5, 0.3), 0.7, 2.4))
        height = float(np.clip(abs(rng.normal(0.35, 0.25)), 0.05, 1.5))
        period = float(np.clip(rng.normal(4.0, 1.0), 2.0, 8.0))
        bl = battery_life(beach, temp, turb, depth, height, period, rng)

        cells = {
            "Water Temperature": f"{temp:.2f}",
            "Turbidity": f"{turb:.2f}",
            "Transducer Depth": f"{depth:.3f}",
            "Wave Height": f"{height:.3f}",
            "Wave Period": f"{period:.2f}",
        }
        # Blank cells per channel; the target always stays present.
        for name, rate in MISSING_RATES.items():
            if rng.random() < rate:
                cells[name] = ""
        rows.append([
            beach,
            ts.isoformat(),
            cells["Water Temperature"],
            cells["Turbidity"],
            cells["Transducer Depth"],
            cells["Wave Height"],
            cells["Wave Period"],
            f"{bl:.2f}",
        ])

    with open(out_path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow([
            "Beach Name", "Measurement Timestamp", "Water Temperature", "Turbidity",
            "Transducer Depth", "Wave Height", "Wave Period", "Battery Life",
        ])
        writer.writerows(rows)
    print(f"wrote {len(rows)} rows to {out_path}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/sensorchain/data/beach_water_sample.csv")
