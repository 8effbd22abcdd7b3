"""Battery-life regression for beach water sensors, with every committed
prediction stored as a signed block on a replicated hash chain."""

from . import baselines, ingest, ledger, metrics, model_io, network, peers

__version__ = "0.1.0"

__all__ = [
    "baselines",
    "ingest",
    "ledger",
    "metrics",
    "model_io",
    "network",
    "peers",
    "__version__",
]
