"""Drive the HTTP service end to end: predict, commit, search, verify.

Trains a quick model, starts the service on a free port, and exercises
the admin and stakeholder endpoints exactly as the web console does.
"""

import importlib.resources
import json
import socket
import tempfile
import threading
import urllib.request
from pathlib import Path

import uvicorn

from sensorchain import ingest, model_io, network
from sensorchain.service import ApiConfig, create_app

workdir = Path(tempfile.mkdtemp(prefix="sensorchain-demo-"))
csv_path = importlib.resources.files("sensorchain") / "data" / "beach_water_sample.csv"
with open(str(csv_path), "rb") as f:
    records = ingest.parse_csv(f)

print("training a small model for the demo…")
matrix, state = ingest.prepare_full(records[:400])
params, _ = network.train(matrix, [16, 8], network.TrainConfig(epochs=40, seed=42))
model_io.save_model(workdir / "model.json", "dnn", params, state)

config = ApiConfig(
    chain_path=str(workdir / "chain.jsonl"),
    authority_key_path=str(workdir / "authority_key.json"),
    admin_token="demo-token",
    model_path=str(workdir / "model.json"),
)
app = create_app(config)

with socket.socket() as s:
    s.bind(("127.0.0.1", 0))
    port = s.getsockname()[1]
server = uvicorn.Server(uvicorn.Config(app, host="127.0.0.1", port=port, log_level="error"))
threading.Thread(target=server.run, daemon=True).start()
while not server.started:
    pass
base = f"http://127.0.0.1:{port}"
print(f"service listening on {base}\n")


def call(method, path, body=None, token=None):
    request = urllib.request.Request(f"{base}{path}", method=method)
    request.add_header("Content-Type", "application/json")
    if token:
        request.add_header("Authorization", f"Bearer {token}")
    data = json.dumps(body).encode() if body is not None else None
    try:
        with urllib.request.urlopen(request, data=data) as response:
            return response.status, json.loads(response.read())
    except urllib.error.HTTPError as err:
        return err.code, json.loads(err.read())


status, body = call("POST", "/api/predict",
                    {"beach_name": "Montrose Beach", "turbidity": 4.0, "water_temperature": 21.0})
print(f"POST /api/predict -> {status}: {body}")
bl = round(body["predicted_battery_life"], 2)

status, body = call("POST", "/api/blocks",
                    {"network_id": "NET-01", "predicted_battery_life": bl,
                     "date_of_prediction": "2020-07-15"})
print(f"POST /api/blocks (no token) -> {status}: {body['error']['code']}")

status, body = call("POST", "/api/blocks",
                    {"network_id": "NET-01", "predicted_battery_life": bl,
                     "date_of_prediction": "2020-07-15"}, token="demo-token")
print(f"POST /api/blocks (admin) -> {status}: block {body['block']['index']} "
      f"hash={body['block']['hash'][:12]}…")

status, body = call("GET", "/api/blocks?network_id=NET-01")
print(f"GET /api/blocks?network_id=NET-01 -> {status}: {len(body['blocks'])} block(s)")

status, body = call("GET", "/api/chain")
print(f"GET /api/chain -> {status}: length={body['length']} valid={body['valid']}")

server.should_exit = True
print(f"\nstate persisted under {workdir}")
print(f"verify offline with: sensorchain chain-verify {workdir / 'chain.jsonl'}")
