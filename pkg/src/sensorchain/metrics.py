"""Regression evaluation: MAE, MSE, RMSE, and explained variance score.

The explained variance score uses population (1/n) variances, matching
the 1/n in MSE, and reads "higher is better": 1 is perfect, 0 is what
predicting the target mean earns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class EmptyInputError(ValueError):
    """Zero-length input vectors."""


class LengthMismatchError(ValueError):
    """y_true and y_pred have different lengths."""


class EmptyMapError(ValueError):
    """No model reports to compare."""


@dataclass(frozen=True)
class MetricsReport:
    mae: float
    mse: float
    evs: float
    n: int

    @property
    def rmse(self) -> float:
        # Derived, never stored, so rmse = sqrt(mse) holds by construction.
        return math.sqrt(self.mse)


def evaluate(y_true: np.ndarray, y_pred: np.ndarray) -> MetricsReport:
    """Compute the standard regression metrics for one model.

    evs = 1 - Var(y - y_hat)/Var(y) with population variances; a constant
    target yields evs 1 for a perfect fit and 0 otherwise.
    """
    y_true = np.asarray(y_true, dtype=float)
    y_pred = np.asarray(y_pred, dtype=float)
    if y_true.shape != y_pred.shape or y_true.ndim != 1:
        raise LengthMismatchError(f"shapes differ: {y_true.shape} vs {y_pred.shape}")
    if y_true.size == 0:
        raise EmptyInputError("cannot evaluate empty vectors")
    if not (np.all(np.isfinite(y_true)) and np.all(np.isfinite(y_pred))):
        raise ValueError("inputs must be finite")
    residual = y_pred - y_true
    mae = float(np.mean(np.abs(residual)))
    mse = float(np.mean(residual**2))
    var_y = float(np.var(y_true))
    var_r = float(np.var(residual))
    if var_y == 0.0:
        evs = 1.0 if var_r == 0.0 else 0.0
    else:
        evs = 1.0 - var_r / var_y
    return MetricsReport(mae=mae, mse=mse, evs=evs, n=y_true.size)


def compare_models(reports: dict[str, MetricsReport]) -> list[tuple[str, MetricsReport]]:
    """Rank models ascending by rmse, ties broken by mae then name."""
    if not reports:
        raise EmptyMapError("no reports to compare")
    return sorted(reports.items(), key=lambda item: (item[1].rmse, item[1].mae, item[0]))


def comparison_json(ranked: list[tuple[str, MetricsReport]]) -> list[dict]:
    """Machine-readable rows: {"model", "mae", "mse", "rmse", "evs", "n"}."""
    return [
        {
            "model": name,
            "mae": r.mae,
            "mse": r.mse,
            "rmse": r.rmse,
            "evs": r.evs,
            "n": r.n,
        }
        for name, r in ranked
    ]


def format_table(ranked: list[tuple[str, MetricsReport]]) -> str:
    """Aligned text table of the ranked comparison."""
    headers = ["model", "mae", "mse", "rmse", "evs", "n"]
    rows = [
        [name, f"{r.mae:.4f}", f"{r.mse:.4f}", f"{r.rmse:.4f}", f"{r.evs:.4f}", str(r.n)]
        for name, r in ranked
    ]
    widths = [max(len(h), *(len(row[i]) for row in rows)) for i, h in enumerate(headers)]
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)),
        "  ".join("-" * w for w in widths),
    ]
    lines += ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)) for row in rows]
    return "\n".join(lines)
