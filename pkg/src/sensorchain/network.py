"""Dense feed-forward regressor built on numpy.

ReLU hidden layers, a single linear output unit, mean-squared-error loss,
analytic backpropagation, and an ADAM optimizer with bias correction.
Training is mini-batch, fully deterministic under a seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ingest import FeatureMatrix

# Five hidden layers, first dense layer 128 wide, widths within 64-256.
DEFAULT_HIDDEN = [128, 256, 128, 64, 64]


class DimensionMismatchError(ValueError):
    """Input vector length does not match the network input dimension."""


class ShapeMismatchError(ValueError):
    """Parameter, gradient, and optimizer state shapes disagree."""


@dataclass
class LayerParams:
    """Weights (out x in) and biases (out,) of one dense layer."""

    W: np.ndarray
    b: np.ndarray


@dataclass
class ModelParameters:
    """Ordered dense layers; all hidden layers ReLU, output linear."""

    layers: list[LayerParams]

    @property
    def input_dim(self) -> int:
        return self.layers[0].W.shape[1]

    @property
    def layer_sizes(self) -> list[int]:
        return [self.input_dim] + [layer.W.shape[0] for layer in self.layers]


@dataclass
class AdamState:
    """First/second moment accumulators shaped like the parameters."""

    m: list[LayerParams]
    v: list[LayerParams]
    t: int = 0

    @classmethod
    def zeros_like(cls, params: ModelParameters) -> "AdamState":
        return cls(
            m=[LayerParams(np.zeros_like(l.W), np.zeros_like(l.b)) for l in params.layers],
            v=[LayerParams(np.zeros_like(l.W), np.zeros_like(l.b)) for l in params.layers],
            t=0,
        )


@dataclass
class TrainConfig:
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    epochs: int = 500
    batch_size: int = 32
    seed: int = 42

    def __post_init__(self):
        if not (0.0 < self.beta1 < 1.0 and 0.0 < self.beta2 < 1.0):
            raise ValueError("beta1 and beta2 must lie in (0, 1)")
        if self.epsilon <= 0.0 or self.learning_rate <= 0.0:
            raise ValueError("epsilon and learning_rate must be positive")
        if self.batch_size < 1 or self.epochs < 0:
            raise ValueError("batch_size must be >= 1 and epochs >= 0")


@dataclass
class ForwardCache:
    """Pre- and post-activation values retained for backprop.

    activations[0] is the input; activations[i+1] = layer i output.
    """

    pre_activations: list[np.ndarray]
    activations: list[np.ndarray]


def init_network(input_dim: int, hidden: list[int], seed: int | np.random.Generator) -> ModelParameters:
    """He-uniform weights (bound sqrt(6/fan_in)), zero biases.

    Deterministic under an integer seed; pass a Generator to share a
    stream with the training loop.
    """
    if input_dim < 1:
        raise ValueError(f"input_dim must be >= 1, got {input_dim}")
    if not hidden:
        raise ValueError("hidden layer list must be non-empty")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    sizes = [input_dim] + list(hidden) + [1]
    layers = []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        bound = np.sqrt(6.0 / fan_in)
        W = rng.uniform(-bound, bound, size=(fan_out, fan_in))
        layers.append(LayerParams(W=W, b=np.zeros(fan_out)))
    return ModelParameters(layers=layers)


def _forward_batch(p: ModelParameters, X: np.ndarray) -> ForwardCache:
    if X.ndim != 2 or X.shape[1] != p.input_dim:
        raise DimensionMismatchError(
            f"expected input of width {p.input_dim}, got shape {X.shape}"
        )
    pre, acts = [], [X]
    a = X
    last = len(p.layers) - 1
    for i, layer in enumerate(p.layers):
        z = a @ layer.W.T + layer.b
        pre.append(z)
        a = z if i == last else np.maximum(z, 0.0)
        acts.append(a)
    return ForwardCache(pre_activations=pre, activations=acts)


def forward(p: ModelParameters, x: np.ndarray) -> tuple[float, ForwardCache]:
    """Run one input vector through the network.

    Returns the scalar prediction and the cached activations backprop
    needs.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DimensionMismatchError(f"expected a 1-d input vector, got shape {x.shape}")
    cache = _forward_batch(p, x.reshape(1, -1))
    return float(cache.activations[-1][0, 0]), cache


def predict(p: ModelParameters, features: np.ndarray) -> float:
    """Pure forward pass; the value committed to the ledger."""
    return forward(p, features)[0]


def predict_batch(p: ModelParameters, X: np.ndarray) -> np.ndarray:
    """Predictions for each row of X."""
    return _forward_batch(p, np.asarray(X, dtype=float)).activations[-1][:, 0]


def loss_mse(p: ModelParameters, batch: FeatureMatrix) -> float:
    """Mean squared error of the network over a batch."""
    preds = predict_batch(p, batch.X)
    return float(np.mean((preds - batch.y) ** 2))


def backward(p: ModelParameters, batch: FeatureMatrix) -> list[LayerParams]:
    """Analytic gradient of loss_mse w.r.t. every weight and bias.

    Gradients come back shaped like the parameters. The ReLU subgradient
    at exactly 0 is taken as 0.
    """
    cache = _forward_batch(p, batch.X)
    n = batch.X.shape[0]
    preds = cache.activations[-1][:, 0]
    # d(mean e^2)/d(pred) = 2e/n
    delta = (2.0 * (preds - batch.y) / n).reshape(-1, 1)
    grads: list[LayerParams] = [None] * len(p.layers)
    for i in range(len(p.layers) - 1, -1, -1):
        a_in = cache.activations[i]
        grads[i] = LayerParams(W=delta.T @ a_in, b=delta.sum(axis=0))
        if i > 0:
            delta = (delta @ p.layers[i].W) * (cache.pre_activations[i - 1] > 0.0)
    return grads


def _check_shapes(p: ModelParameters, g: list[LayerParams], s: AdamState) -> None:
    if len(p.layers) != len(g) or len(p.layers) != len(s.m):
        raise ShapeMismatchError("layer counts of parameters, gradients, and state differ")
    for layer, grad, m, v in zip(p.layers, g, s.m, s.v):
        for a, b in ((layer.W, grad.W), (layer.b, grad.b), (layer.W, m.W), (layer.W, v.W)):
            if a.shape != b.shape:
                raise ShapeMismatchError(f"shape mismatch: {a.shape} vs {b.shape}")


def adam_step(
    p: ModelParameters,
    g: list[LayerParams],
    s: AdamState,
    cfg: TrainConfig,
) -> tuple[ModelParameters, AdamState]:
    """One ADAM update; returns new parameters and state, inputs untouched."""
    _check_shapes(p, g, s)
    t = s.t + 1
    b1, b2 = cfg.beta1, cfg.beta2
    bias1 = 1.0 - b1 ** t
    bias2 = 1.0 - b2 ** t
    new_layers, new_m, new_v = [], [], []
    for layer, grad, m, v in zip(p.layers, g, s.m, s.v):
        mW = b1 * m.W + (1.0 - b1) * grad.W
        mb = b1 * m.b + (1.0 - b1) * grad.b
        vW = b2 * v.W + (1.0 - b2) * grad.W ** 2
        vb = b2 * v.b + (1.0 - b2) * grad.b ** 2
        W = layer.W - cfg.learning_rate * (mW / bias1) / (np.sqrt(vW / bias2) + cfg.epsilon)
        b = layer.b - cfg.learning_rate * (mb / bias1) / (np.sqrt(vb / bias2) + cfg.epsilon)
        new_layers.append(LayerParams(W=W, b=b))
        new_m.append(LayerParams(W=mW, b=mb))
        new_v.append(LayerParams(W=vW, b=vb))
    return ModelParameters(layers=new_layers), AdamState(m=new_m, v=new_v, t=t)


def train(
    data: FeatureMatrix,
    hidden: list[int],
    cfg: TrainConfig,
) -> tuple[ModelParameters, list[float]]:
    """Mini-batch ADAM training; deterministic under cfg.seed.

    Each epoch reshuffles the rows with the seeded generator; the history
    records the mean training loss per epoch (computed on each batch
    before its update). epochs=0 returns the untouched initialization.
    """
    if data.rows < cfg.batch_size:
        raise ValueError(f"data has {data.rows} rows, fewer than batch_size {cfg.batch_size}")
    rng = np.random.default_rng(cfg.seed)
    params = init_network(data.X.shape[1], hidden, rng)
    state = AdamState.zeros_like(params)
    history = []
    n = data.rows
    for _ in range(cfg.epochs):
        perm = rng.permutation(n)
        squared_error = 0.0
        for start in range(0, n, cfg.batch_size):
            idx = perm[start:start + cfg.batch_size]
            Xb, yb = data.X[idx], data.y[idx]
            cache = _forward_batch(params, Xb)
            residual = cache.activations[-1][:, 0] - yb
            squared_error += float(residual @ residual)
            delta = (2.0 * residual / len(idx)).reshape(-1, 1)
            grads: list[LayerParams] = [None] * len(params.layers)
            for i in range(len(params.layers) - 1, -1, -1):
                grads[i] = LayerParams(W=delta.T @ cache.activations[i], b=delta.sum(axis=0))
                if i > 0:
                    delta = (delta @ params.layers[i].W) * (cache.pre_activations[i - 1] > 0.0)
            params, state = adam_step(params, grads, state, cfg)
        history.append(squared_error / n)
    return params, history
