"""HTTP service for predictions and ledger access.

Admin block creation sits behind a static bearer token; stakeholder
reads are open. Appends are serialized through one lock and the chain
snapshot is swapped atomically after each successful append, so readers
never see a half-written state.
"""

from __future__ import annotations

import json
import logging
import secrets
import threading
import time
from dataclasses import dataclass
from pathlib import Path

from fastapi import Body, FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import ledger
from .ingest import NUMERIC_FEATURES
from .model_io import ModelBundle, load_model
from .peers import PeerNode, broadcast, resolve, spawn_network

PREDICT_FIELDS = ("beach_name", "measurement_timestamp") + NUMERIC_FEATURES

logger = logging.getLogger(__name__)


@dataclass
class ApiConfig:
    chain_path: str
    authority_key_path: str
    admin_token: str
    model_path: str | None = None
    metrics_path: str | None = None
    peer_count: int = 3
    cors_origin: str = "*"

    def __post_init__(self):
        if not self.admin_token:
            raise ValueError("admin token must be non-empty when block creation is enabled")


class _Service:
    """Mutable service state shared by the route handlers."""

    def __init__(self, config: ApiConfig):
        self.config = config
        key_path = Path(config.authority_key_path)
        if key_path.exists():
            self.keys = ledger.AuthorityKeys.from_file(key_path)
        else:
            self.keys = ledger.AuthorityKeys.generate("authority-1")
            self.keys.to_file(key_path)
        self.registry = ledger.KeyRegistry.from_authorities(self.keys)
        # Trust anchors for offline verification (sensorchain chain-verify).
        self.registry.to_file(str(config.chain_path) + ".pub")

        chain_path = Path(config.chain_path)
        if chain_path.exists():
            self.chain = ledger.read_chain_file(chain_path)
        else:
            genesis = ledger.create_genesis(self.keys)
            self.chain = ledger.ChainState(blocks=(genesis,))
            ledger.persist(self.chain, chain_path)

        self.peers: list[PeerNode] = spawn_network(
            config.peer_count, self.registry, self.chain.blocks[0]
        )
        for node in self.peers:
            resolve(node, self.chain)

        self.bundle: ModelBundle | None = None
        if config.model_path and Path(config.model_path).exists():
            self.bundle = load_model(config.model_path)

        self.write_lock = threading.Lock()


def _error(status: int, code: str, message: str, field: str | None = None) -> JSONResponse:
    body = {"error": {"code": code, "message": message}}
    if field is not None:
        body["error"]["field"] = field
    return JSONResponse(status_code=status, content=body)


def create_app(config: ApiConfig) -> FastAPI:
    service = _Service(config)
    app = FastAPI(title="sensorchain", docs_url=None, redoc_url=None)
    app.state.service = service
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[config.cors_origin],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def authorized(request: Request) -> bool:
        header = request.headers.get("authorization", "")
        scheme, _, token = header.partition(" ")
        return scheme.lower() == "bearer" and secrets.compare_digest(
            token.strip(), config.admin_token
        )

    @app.post("/api/predict")
    def predict_endpoint(reading: dict = Body(...)):
        if service.bundle is None:
            return _error(503, "no-model", "no model is loaded")
        if not isinstance(reading, dict):
            return _error(422, "bad-body", "body must be a JSON object")
        known = {k: v for k, v in reading.items() if k in PREDICT_FIELDS}
        if not known:
            return _error(
                422,
                "missing-fields",
                f"body must supply at least one of: {', '.join(PREDICT_FIELDS)}",
            )
        try:
            value = service.bundle.predict_raw(known)
        except (TypeError, ValueError) as exc:
            return _error(422, "bad-reading", str(exc))
        return {"predicted_battery_life": value}

    @app.post("/api/blocks", status_code=201)
    def create_block_endpoint(request: Request, payload: dict = Body(...)):
        if not authorized(request):
            return _error(401, "unauthorized", "missing or invalid admin token")
        for name in ("network_id", "predicted_battery_life", "date_of_prediction"):
            if name not in payload:
                return _error(422, "missing-field", f"{name} is required", field=name)
        if not isinstance(payload["network_id"], str) or not payload["network_id"].strip():
            return _error(422, "bad-field", "network_id must be a non-empty string", field="network_id")
        if not isinstance(payload["predicted_battery_life"], (int, float)) or isinstance(
            payload["predicted_battery_life"], bool
        ):
            return _error(
                422, "bad-field", "predicted_battery_life must be a number",
                field="predicted_battery_life",
            )

        with service.write_lock:
            try:
                block = ledger.create_block(
                    network_id=payload["network_id"].strip(),
                    bl=float(payload["predicted_battery_life"]),
                    date=str(payload["date_of_prediction"]),
                    chain=service.chain,
                    keys=service.keys,
                    registry=service.registry,
                    created_at=int(time.time()),
                )
            except ledger.BadDateError as exc:
                return _error(422, "bad-field", str(exc), field="date_of_prediction")
            except ledger.NonFiniteValueError as exc:
                return _error(422, "bad-field", str(exc), field="predicted_battery_life")
            except ledger.UnauthorizedKeyError as exc:
                return _error(401, "unauthorized-key", str(exc))
            except ledger.TamperDetectedError as exc:
                return _error(409, "chain-invalid", str(exc))

            report = broadcast(service.peers, block)
            if report.rejected:
                # Should not happen with an honest authority; surface it.
                logger.warning("peers rejected block %d: %s", block.index, report.rejected)
                return _error(
                    409,
                    "peer-rejected",
                    f"peers rejected the block: {report.rejected}",
                )
            try:
                new_chain = ledger.append(service.chain, block, service.registry)
            except (ledger.BlockValidationError, ledger.TamperDetectedError) as exc:
                return _error(409, "append-failed", str(exc))
            ledger.persist(new_chain, config.chain_path)
            service.chain = new_chain
        return JSONResponse(status_code=201, content={"block": block.to_dict()})

    @app.get("/api/blocks")
    def query_blocks_endpoint(request: Request):
        network_id = request.query_params.get("network_id")
        if network_id is None:
            return _error(400, "missing-param", "network_id query parameter is required")
        blocks = ledger.query_by_network_id(service.chain, network_id)
        return {"blocks": [b.to_dict() for b in blocks]}

    @app.get("/api/chain")
    def chain_status_endpoint():
        snapshot = service.chain
        failure = ledger.validate_chain(snapshot, service.registry)
        body = {
            "length": len(snapshot),
            "head_hash": snapshot.head_hash,
            "valid": failure is None,
        }
        if failure is not None:
            body["tamper_index"] = failure.index
        return body

    @app.get("/api/metrics")
    def metrics_endpoint():
        path = Path(config.metrics_path) if config.metrics_path else None
        if path is None or not path.exists():
            return _error(404, "no-metrics", "no evaluation has been run yet")
        return json.loads(path.read_text(encoding="utf-8"))

    return app
