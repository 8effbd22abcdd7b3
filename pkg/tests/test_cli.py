import json

import numpy as np
import pytest

from sensorchain import model_io, network
from sensorchain.cli import main

from conftest import TESTDATA

FAST = ["--hidden", "8,4", "--epochs", "3", "--batch-size", "16"]


@pytest.fixture(scope="module")
def small_csv(sample_csv_path, tmp_path_factory):
    lines = sample_csv_path.read_text().splitlines()[:121]
    path = tmp_path_factory.mktemp("csv") / "small.csv"
    path.write_text("\n".join(lines) + "\n")
    return str(path)


class TestTrain:
    def test_writes_model_file(self, small_csv, tmp_path, capsys):
        out = str(tmp_path / "model.json")
        assert main(["train", small_csv, "--out", out, *FAST]) == 0
        assert model_io.load_model(out).kind == "dnn"
        assert "final training loss" in capsys.readouterr().out

    def test_missing_file_exits_2(self, tmp_path, capsys):
        assert main(["train", str(tmp_path / "nope.csv"), *FAST]) == 2
        assert "error" in capsys.readouterr().err

    def test_zero_epochs_model_equals_initialization(self, small_csv, tmp_path):
        out = str(tmp_path / "init.json")
        assert main(["train", small_csv, "--out", out, "--hidden", "8,4",
                     "--epochs", "0", "--seed", "7"]) == 0
        bundle = model_io.load_model(out)
        input_dim = bundle.model.input_dim
        init = network.init_network(input_dim, [8, 4], np.random.default_rng(7))
        for a, b in zip(bundle.model.layers, init.layers):
            assert np.array_equal(a.W, b.W) and np.array_equal(a.b, b.b)


class TestEvaluate:
    def test_writes_three_model_entries(self, small_csv, tmp_path, capsys):
        out = str(tmp_path / "metrics.json")
        assert main(["evaluate", small_csv, "--out", out, *FAST, "--trees", "10"]) == 0
        rows = json.loads(open(out).read())
        assert {r["model"] for r in rows} == {"dnn", "linear_regression", "gbt"}
        for r in rows:
            assert abs(r["rmse"] - r["mse"] ** 0.5) < 1e-12
        table = capsys.readouterr().out
        assert "rmse" in table

    def test_same_seed_identical_json(self, small_csv, tmp_path):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        for out in (a, b):
            assert main(["evaluate", small_csv, "--out", str(out), *FAST, "--trees", "10"]) == 0
        assert a.read_bytes() == b.read_bytes()


@pytest.fixture(scope="module")
def model_file(small_csv, tmp_path_factory):
    out = str(tmp_path_factory.mktemp("model") / "model.json")
    main(["train", small_csv, "--out", out, *FAST])
    return out


class TestPredict:
    def test_prints_plain_number(self, model_file, capsys):
        reading = json.dumps({"beach_name": "Montrose Beach", "turbidity": 4.0})
        assert main(["predict", model_file, "--json", reading]) == 0
        printed = capsys.readouterr().out.strip()
        assert np.isfinite(float(printed))

    def test_malformed_json_exits_2(self, model_file, capsys):
        assert main(["predict", model_file, "--json", "{not json"]) == 2
        assert "error" in capsys.readouterr().err

    def test_deterministic_output(self, model_file, capsys):
        reading = json.dumps({"turbidity": 4.0})
        main(["predict", model_file, "--json", reading])
        first = capsys.readouterr().out
        main(["predict", model_file, "--json", reading])
        assert capsys.readouterr().out == first


class TestChainVerify:
    def test_golden_chain_ok(self, capsys):
        assert main(["chain-verify", str(TESTDATA / "golden_chain.jsonl")]) == 0
        assert capsys.readouterr().out.strip() == "OK length=11"

    def test_tampered_chain_names_index(self, capsys):
        assert main(["chain-verify", str(TESTDATA / "tampered_chain.jsonl")]) == 1
        assert "index 4" in capsys.readouterr().out

    def test_empty_file_fails(self, tmp_path, capsys):
        path = tmp_path / "empty.jsonl"
        path.write_text("")
        (tmp_path / "empty.jsonl.pub").write_text("{}")
        assert main(["chain-verify", str(path)]) == 1
        assert "INVALID" in capsys.readouterr().out

    def test_missing_registry_exits_2(self, tmp_path):
        path = tmp_path / "chain.jsonl"
        path.write_text("{}\n")
        assert main(["chain-verify", str(path)]) == 2


class TestScenario:
    def test_fault_free_converges(self, tmp_path, capsys):
        out = str(tmp_path / "trace.json")
        code = main(["scenario", str(TESTDATA / "scenario_fault_free.json"), "--out", out])
        assert code == 0
        assert "converged" in capsys.readouterr().out
        trace = json.loads(open(out).read())
        assert trace["final_online_heads_equal"] is True

    def test_desynced_offline_node_still_exits_0(self, tmp_path, capsys):
        script = [
            {"t": 1, "event": "broadcast", "network_id": "N", "bl": 51.0, "date": "2020-08-01"},
            {"t": 2, "event": "set_offline", "node": "node-1"},
            {"t": 3, "event": "broadcast", "network_id": "N", "bl": 52.0, "date": "2020-08-02"},
        ]
        path = tmp_path / "script.json"
        path.write_text(json.dumps(script))
        out = str(tmp_path / "trace.json")
        assert main(["scenario", str(path), "--out", out]) == 0
        printed = capsys.readouterr().out
        assert "node-1" in printed
        trace = json.loads(open(out).read())
        assert trace["entries"][-1]["nodes"]["node-1"]["length"] == 2

    def test_invalid_script_json_exits_2(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("[{,")
        assert main(["scenario", str(path)]) == 2

    def test_non_list_script_exits_2(self, tmp_path):
        path = tmp_path / "obj.json"
        path.write_text("{}")
        assert main(["scenario", str(path)]) == 2


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as err:
        main(["no-such-command"])
    assert err.value.code == 2


class TestServe:
    def test_port_zero_serves_and_stops_cleanly(self, tmp_path):
        import signal
        import subprocess
        import sys as _sys
        import time
        import urllib.request

        proc = subprocess.Popen(
            [_sys.executable, "-m", "sensorchain.cli", "serve",
             "--port", "0",
             "--chain-path", str(tmp_path / "chain.jsonl"),
             "--authority-key", str(tmp_path / "key.json"),
             "--admin-token", "smoke-token"],
            stdout=subprocess.PIPE, stderr=subprocess.DEVNULL, text=True,
        )
        try:
            line = proc.stdout.readline()
            assert line.startswith("listening on port ")
            port = int(line.split()[-1])
            body = None
            for _ in range(50):
                try:
                    with urllib.request.urlopen(f"http://127.0.0.1:{port}/api/chain", timeout=1) as r:
                        body = json.loads(r.read())
                    break
                except OSError:
                    time.sleep(0.1)
            assert body is not None, "service never came up"
            assert body["valid"] is True and body["length"] == 1
            # Chain file was created with a genesis block.
            assert (tmp_path / "chain.jsonl").exists()
            proc.send_signal(signal.SIGINT)
            assert proc.wait(timeout=10) == 0
        finally:
            if proc.poll() is None:
                proc.kill()
                proc.wait()
