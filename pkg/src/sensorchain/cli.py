"""Operator command line: train, evaluate, predict, verify, simulate, serve.

Exit codes are a stable scripting contract: 0 success, 1 domain failure
(invalid chain, non-converged scenario), 2 usage or IO error.
"""

from __future__ import annotations

import argparse
import json
import os
import socket
import sys
from pathlib import Path

from . import baselines, ingest, ledger, metrics, model_io, network, peers


def _parse_hidden(text: str) -> list[int]:
    try:
        sizes = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad hidden layer list {text!r}") from None
    if not sizes or any(s < 1 for s in sizes):
        raise argparse.ArgumentTypeError("hidden layer sizes must be positive integers")
    return sizes


def _read_records(csv_path: str) -> list[ingest.SensorRecord]:
    with open(csv_path, "rb") as f:
        return ingest.parse_csv(f)


def _train_config(args) -> network.TrainConfig:
    return network.TrainConfig(
        learning_rate=args.lr,
        epochs=args.epochs,
        batch_size=args.batch_size,
        seed=args.seed,
    )


def cmd_train(args) -> int:
    records = _read_records(args.csv)
    matrix, state = ingest.prepare_full(records, scaling=args.scaling, include_hour=args.include_hour)
    params, history = network.train(matrix, args.hidden, _train_config(args))
    model_io.save_model(args.out, "dnn", params, state)
    final_loss = history[-1] if history else network.loss_mse(params, matrix)
    print(f"trained on {matrix.rows} rows; final training loss {final_loss:.6f}")
    print(f"model written to {args.out}")
    return 0


def cmd_evaluate(args) -> int:
    records = _read_records(args.csv)
    train_m, test_m, _ = ingest.prepare_train_test(
        records,
        test_fraction=args.test_fraction,
        seed=args.seed,
        scaling=args.scaling,
        include_hour=args.include_hour,
    )
    params, _ = network.train(train_m, args.hidden, _train_config(args))
    linear = baselines.fit_linear(train_m, ridge=args.ridge)
    gbt = baselines.fit_gbt(
        train_m,
        n_trees=args.trees,
        max_depth=args.max_depth,
        shrinkage=args.shrinkage,
        seed=args.seed,
    )
    reports = {
        "dnn": metrics.evaluate(test_m.y, network.predict_batch(params, test_m.X)),
        "linear_regression": metrics.evaluate(
            test_m.y, baselines.predict_baseline_batch(linear, test_m.X)
        ),
        "gbt": metrics.evaluate(test_m.y, baselines.predict_baseline_batch(gbt, test_m.X)),
    }
    ranked = metrics.compare_models(reports)
    Path(args.out).write_text(
        json.dumps(metrics.comparison_json(ranked), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    print(metrics.format_table(ranked))
    print(f"metrics written to {args.out}")
    return 0


def cmd_predict(args) -> int:
    try:
        reading = json.loads(args.json)
    except json.JSONDecodeError as exc:
        print(f"error: bad reading JSON: {exc}", file=sys.stderr)
        return 2
    if not isinstance(reading, dict):
        print("error: reading must be a JSON object", file=sys.stderr)
        return 2
    bundle = model_io.load_model(args.model)
    print(bundle.predict_raw(reading))
    return 0


def cmd_chain_verify(args) -> int:
    registry_path = args.registry or str(args.chain) + ".pub"
    registry = ledger.KeyRegistry.from_file(registry_path)
    try:
        chain = ledger.load(args.chain, registry)
    except ledger.CorruptChainFileError as exc:
        print(f"INVALID at index {exc.index}: {exc.reason}")
        return 1
    print(f"OK length={len(chain)}")
    return 0


def cmd_scenario(args) -> int:
    try:
        script = json.loads(Path(args.script).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        print(f"error: bad scenario JSON: {exc}", file=sys.stderr)
        return 2
    if not isinstance(script, list):
        print("error: scenario script must be a JSON list of events", file=sys.stderr)
        return 2
    trace = peers.run_scenario(script, n_nodes=args.nodes)
    Path(args.out).write_text(trace.to_json() + "\n", encoding="utf-8")
    final = trace.entries[-1]["nodes"]
    offline = [n for n, s in final.items() if not s["online"]]
    print(f"ran {len(trace.entries) - 1} events over {args.nodes} nodes; trace written to {args.out}")
    if offline:
        print(f"offline at end (excluded from convergence): {', '.join(sorted(offline))}")
    if trace.final_online_heads_equal:
        print("online nodes converged")
        return 0
    print("online nodes DIVERGED")
    return 1


def cmd_serve(args) -> int:
    import uvicorn

    from .service import ApiConfig, create_app

    token = args.admin_token or os.environ.get("ADMIN_TOKEN", "")
    if not token:
        print("error: --admin-token or ADMIN_TOKEN is required", file=sys.stderr)
        return 2
    port = args.port
    if port == 0:
        with socket.socket() as s:
            s.bind((args.host, 0))
            port = s.getsockname()[1]
        print(f"listening on port {port}", flush=True)
    config = ApiConfig(
        chain_path=args.chain_path,
        authority_key_path=args.authority_key,
        admin_token=token,
        model_path=args.model_path,
        metrics_path=args.metrics_path,
        peer_count=args.peers,
        cors_origin=args.cors_origin,
    )
    app = create_app(config)
    uvicorn.run(app, host=args.host, port=port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sensorchain")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_nn_flags(p):
        p.add_argument("--hidden", type=_parse_hidden, default=network.DEFAULT_HIDDEN,
                       help="comma-separated hidden layer widths")
        p.add_argument("--epochs", type=int, default=500)
        p.add_argument("--batch-size", type=int, default=32)
        p.add_argument("--lr", type=float, default=1e-3)
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--scaling", choices=("minmax", "zscore"), default="minmax")
        p.add_argument("--include-hour", action="store_true",
                       help="add hour-of-day from the timestamp as a feature")

    p = sub.add_parser("train", help="train the battery-life regressor on a CSV")
    p.add_argument("csv")
    p.add_argument("--out", default="model.json")
    add_nn_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="compare dnn, linear, and gbt on a seeded split")
    p.add_argument("csv")
    p.add_argument("--out", default="metrics.json")
    p.add_argument("--test-fraction", type=float, default=0.2)
    p.add_argument("--ridge", type=float, default=1e-8)
    p.add_argument("--trees", type=int, default=100)
    p.add_argument("--max-depth", type=int, default=3)
    p.add_argument("--shrinkage", type=float, default=0.1)
    add_nn_flags(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("predict", help="predict battery life for one reading")
    p.add_argument("model")
    p.add_argument("--json", required=True, help="reading as a JSON object")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("chain-verify", help="validate a chain file end to end")
    p.add_argument("chain")
    p.add_argument("--registry", help="trusted key registry (default: <chain>.pub)")
    p.set_defaults(func=cmd_chain_verify)

    p = sub.add_parser("scenario", help="run a peer replication scenario script")
    p.add_argument("script")
    p.add_argument("--nodes", type=int, default=5)
    p.add_argument("--out", default="trace.json")
    p.set_defaults(func=cmd_scenario)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--chain-path", default="chain.jsonl")
    p.add_argument("--model-path", default=None)
    p.add_argument("--metrics-path", default="metrics.json")
    p.add_argument("--admin-token", default=None)
    p.add_argument("--authority-key", default="authority_key.json")
    p.add_argument("--peers", type=int, default=3)
    p.add_argument("--cors-origin", default="*")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ingest.MissingColumnError, ingest.MalformedRowError,
            model_io.UnsupportedModelFileError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ledger.TamperDetectedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
