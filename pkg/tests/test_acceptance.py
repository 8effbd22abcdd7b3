"""End-to-end acceptance suite; one test per release criterion.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
PASS lines. The comparative test trains the full-size network on the
bundled sample and is the slow one (a minute or two).
"""

import json
import random
import re
import threading
import time

import numpy as np
import pytest
from fastapi.testclient import TestClient

from sensorchain import baselines, ingest, ledger, metrics, model_io, network, peers
from sensorchain.service import ApiConfig, create_app

from conftest import MUTABLE_FIELDS, TESTDATA, build_chain, mutate_field
from test_metrics import ACTUAL, PREDICTED, loop_oracle
from test_network import (
    finite_difference_grads,
    matrix,
    max_relative_error,
    sample_smooth_case,
)


def ok(name):
    print(f"\nACCEPTANCE {name}: PASS")


def test_gradient_oracle_on_twenty_random_networks():
    started = time.monotonic()
    rng = np.random.default_rng(2024)
    checked = 0
    while checked < 20:
        n_hidden = int(rng.integers(1, 3))
        dims = [int(rng.integers(2, 8))] + [int(rng.integers(2, 9)) for _ in range(n_hidden)] + [1]
        params, batch = sample_smooth_case(rng, dims)
        n_params = sum(l.W.size + l.b.size for l in params.layers)
        assert n_params <= 200
        analytic = network.backward(params, batch)
        numeric = finite_difference_grads(params, batch)
        assert max_relative_error(analytic, numeric) < 1e-4, dims
        checked += 1
    elapsed = time.monotonic() - started
    assert elapsed < 10.0, f"gradient oracle took {elapsed:.1f}s"
    ok(f"gradient-oracle ({checked} networks, {elapsed:.2f}s)")


def test_optimizer_contract():
    cfg = network.TrainConfig()
    params = network.init_network(5, [7, 3], seed=3)
    state = network.AdamState.zeros_like(params)
    zero = [network.LayerParams(np.zeros_like(l.W), np.zeros_like(l.b)) for l in params.layers]
    updated, _ = network.adam_step(params, zero, state, cfg)
    for before, after in zip(params.layers, updated.layers):
        assert before.W.tobytes() == after.W.tobytes()
        assert before.b.tobytes() == after.b.tobytes()

    theta, g = 1.0, 4.0
    scalar = network.ModelParameters(
        layers=[network.LayerParams(W=np.array([[theta]]), b=np.zeros(1))]
    )
    grads = [network.LayerParams(W=np.array([[g]]), b=np.zeros(1))]
    stepped, _ = network.adam_step(scalar, grads, network.AdamState.zeros_like(scalar), cfg)
    m_hat = ((1 - cfg.beta1) * g) / (1 - cfg.beta1)
    v_hat = ((1 - cfg.beta2) * g * g) / (1 - cfg.beta2)
    expected = theta - cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.epsilon)
    assert abs(stepped.layers[0].W[0, 0] - expected) < 1e-9
    ok("optimizer-contract (zero-gradient identity bit-exact, first step to 1e-9)")


def test_metrics_oracle():
    rng = np.random.default_rng(77)
    for _ in range(100):
        n = int(rng.integers(1, 1000))
        y = rng.normal(scale=rng.uniform(0.1, 100), size=n)
        p = y + rng.normal(scale=rng.uniform(0.01, 50), size=n)
        r = metrics.evaluate(y, p)
        mae, mse, evs = loop_oracle(y.tolist(), p.tolist())
        assert r.mae == pytest.approx(mae, rel=1e-9)
        assert r.mse == pytest.approx(mse, rel=1e-9)
        assert r.evs == pytest.approx(evs, rel=1e-9, abs=1e-9)

    table = metrics.evaluate(np.array(ACTUAL), np.array(PREDICTED))
    assert table.mae == pytest.approx(9.1043, abs=1e-3)
    assert table.mse == pytest.approx(113.018, abs=1e-3)
    assert table.rmse == pytest.approx(10.631, abs=1e-3)
    ok("metrics-oracle (100 random vectors at 1e-9; reference comparison at 1e-3)")


def test_preprocessing_exhaustive(sample_records):
    train_m, test_m, _ = ingest.prepare_train_test(sample_records)
    for m in (train_m, test_m):
        k = m.n_indicator_cols
        for i in range(m.rows):
            row = m.X[i]
            assert np.all(np.isfinite(row)), i
            assert row.min() >= 0.0 and row.max() <= 1.0 + 1e-12, i
            assert row[:k].sum() == 1.0, i
            assert np.isfinite(m.y[i]), i
    ok(f"preprocessing ({train_m.rows + test_m.rows} rows, every row asserted)")


def test_comparative_claim(sample_records, tmp_path):
    started = time.monotonic()
    train_m, test_m, _ = ingest.prepare_train_test(sample_records, seed=42)

    params, _ = network.train(train_m, network.DEFAULT_HIDDEN, network.TrainConfig(seed=42))
    linear = baselines.fit_linear(train_m)
    gbt = baselines.fit_gbt(train_m, seed=42)

    reports = {
        "dnn": metrics.evaluate(test_m.y, network.predict_batch(params, test_m.X)),
        "linear_regression": metrics.evaluate(
            test_m.y, baselines.predict_baseline_batch(linear, test_m.X)
        ),
        "gbt": metrics.evaluate(test_m.y, baselines.predict_baseline_batch(gbt, test_m.X)),
    }
    ranked = metrics.compare_models(reports)
    out = tmp_path / "metrics.json"
    out.write_text(json.dumps(metrics.comparison_json(ranked), indent=2, sort_keys=True))
    rows = json.loads(out.read_text())
    assert {r["model"] for r in rows} == {"dnn", "linear_regression", "gbt"}

    dnn = reports["dnn"].rmse
    assert dnn <= reports["gbt"].rmse * 1.10, (dnn, reports["gbt"].rmse)
    assert dnn <= reports["linear_regression"].rmse, (dnn, reports["linear_regression"].rmse)
    elapsed = time.monotonic() - started
    assert elapsed < 300.0, f"comparative run took {elapsed:.0f}s"
    ok(
        "comparative-claim (dnn rmse "
        f"{dnn:.3f} <= gbt {reports['gbt'].rmse:.3f} * 1.10 and <= linear "
        f"{reports['linear_regression'].rmse:.3f}; {elapsed:.0f}s)"
    )


def test_tamper_evidence_thousand_trials(authority, registry):
    chain = build_chain(authority, registry, [50.0 + 0.25 * i for i in range(49)])
    assert len(chain) == 50
    rng = random.Random(4242)
    detected = 0
    for _ in range(1000):
        index = rng.randrange(0, len(chain) - 1)  # non-head block
        field = rng.choice(MUTABLE_FIELDS)
        mutated = mutate_field(chain.blocks[index], field, rng)
        tampered = ledger.ChainState(
            blocks=chain.blocks[:index] + (mutated,) + chain.blocks[index + 1:]
        )
        if ledger.validate_chain(tampered, registry) is not None:
            detected += 1
    assert detected == 1000
    ok("tamper-evidence (1000/1000 single-field mutations detected)")


def test_replication_convergence_golden_traces():
    started = time.monotonic()
    for name in ("fault_free", "offline_sync"):
        script = json.loads((TESTDATA / f"scenario_{name}.json").read_text())
        expected = json.loads((TESTDATA / f"scenario_{name}.trace.json").read_text())
        trace = peers.run_scenario(script, n_nodes=5)
        assert json.loads(trace.to_json()) == expected, name
        assert trace.final_online_heads_equal, name

    fault_free = json.loads((TESTDATA / "scenario_fault_free.json").read_text())
    assert sum(1 for e in fault_free if e["event"] == "broadcast") == 10
    trace = peers.run_scenario(fault_free, n_nodes=5)
    final = trace.entries[-1]["nodes"]
    assert len({s["head"] for s in final.values()}) == 1
    assert {s["length"] for s in final.values()} == {11}
    elapsed = time.monotonic() - started
    assert elapsed < 5.0, f"replication scenarios took {elapsed:.1f}s"
    ok(f"replication-convergence (golden traces, {elapsed:.2f}s)")


def test_persistence_round_trip_and_byte_edits(authority, registry, tmp_path):
    chain = build_chain(authority, registry, [50.0 + 0.1 * i for i in range(99)])
    assert len(chain) == 100
    path = tmp_path / "chain.jsonl"
    ledger.persist(chain, path)
    loaded = ledger.load(path, registry)
    assert loaded == chain
    assert ledger.validate_chain(loaded, registry) is None

    text = path.read_text()
    spans = [m for m in re.finditer(r'"predicted_battery_life": (\d+\.\d+)', text)]
    rng = random.Random(7)
    rejected = 0
    trials = 25
    for _ in range(trials):
        span = rng.choice(spans)
        digit_pos = span.start(1) + rng.randrange(len(span.group(1)))
        old = text[digit_pos]
        new = "1" if old != "1" else "2"
        if old == ".":
            new = "5"
        edited = text[:digit_pos] + new + text[digit_pos + 1:]
        (tmp_path / "edited.jsonl").write_text(edited)
        with pytest.raises(ledger.CorruptChainFileError):
            ledger.load(tmp_path / "edited.jsonl", registry)
        rejected += 1
    assert rejected == trials
    ok(f"persistence (100-block round trip; {trials}/{trials} single-byte edits rejected)")


def test_api_consistency(tmp_path):
    config = ApiConfig(
        chain_path=str(tmp_path / "chain.jsonl"),
        authority_key_path=str(tmp_path / "key.json"),
        admin_token="acceptance-token",
    )
    app = create_app(config)
    headers = {"Authorization": "Bearer acceptance-token"}
    with TestClient(app) as client:
        response = client.post(
            "/api/blocks",
            json={"network_id": "NET-RW", "predicted_battery_life": 57.15,
                  "date_of_prediction": "2020-07-15"},
            headers=headers,
        )
        assert response.status_code == 201
        created = response.json()["block"]
        listed = client.get("/api/blocks", params={"network_id": "NET-RW"}).json()["blocks"]
        assert created in listed

        statuses = []
        def post_one(i):
            r = client.post(
                "/api/blocks",
                json={"network_id": "NET-CC", "predicted_battery_life": 50.0 + i,
                      "date_of_prediction": "2020-07-16"},
                headers=headers,
            )
            statuses.append(r.status_code)

        threads = [threading.Thread(target=post_one, args=(i,)) for i in range(20)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert statuses == [201] * 20

        blocks = client.get("/api/blocks", params={"network_id": "NET-CC"}).json()["blocks"]
        indices = [b["index"] for b in blocks]
        assert len(indices) == 20
        assert len(set(indices)) == 20
        assert indices == list(range(min(indices), min(indices) + 20))
        status = client.get("/api/chain").json()
        assert status["valid"] is True and status["length"] == 22
    ok("api-consistency (read-your-write; 20 concurrent posts, consecutive indices)")
