"""Generate the frozen test fixtures under tests/testdata/.

The block preimage hex is built here with inline struct packing, kept
deliberately independent of the library's serializer so the golden-file
test cross-checks the byte layout rather than replaying it.

    python3 scripts/gen_fixtures.py
"""

import json
import struct
from pathlib import Path

from sensorchain import ledger, peers

TESTDATA = Path(__file__).resolve().parent.parent / "tests" / "testdata"

FIXTURE_KEY_SEED = b"\x11" * 32
FIXTURE_KEY_ID = "fixture-authority"

TABLE_BL = [57.15, 63.34, 60.95, 57.98, 58.30, 62.39, 63.84, 59.41, 61.02, 60.47]


def independent_preimage(block: dict) -> bytes:
    """Length-prefixed UTF-8 fields in documented order, packed by hand."""
    rendered = [
        str(block["index"]),
        block["network_id"],
        repr(block["predicted_battery_life"]),
        block["date_of_prediction"],
        str(block["created_at"]),
        block["prev_hash"],
        block["creator_key_id"],
    ]
    out = b""
    for text in rendered:
        raw = text.encode("utf-8")
        out += struct.pack(">I", len(raw)) + raw
    return out


def main():
    TESTDATA.mkdir(parents=True, exist_ok=True)
    keys = ledger.AuthorityKeys.generate(FIXTURE_KEY_ID, seed=FIXTURE_KEY_SEED)
    registry = ledger.KeyRegistry.from_authorities(keys)

    # Golden chain: genesis + 10 blocks over two sensor groups.
    chain = ledger.ChainState(blocks=(ledger.create_genesis(keys),))
    for i, bl in enumerate(TABLE_BL):
        block = ledger.create_block(
            network_id=f"NET-{i % 2 + 1:02d}",
            bl=bl,
            date=f"2020-07-{15 + i:02d}",
            chain=chain,
            keys=keys,
            registry=registry,
            created_at=1000 + i,
        )
        chain = ledger.append(chain, block, registry)
    ledger.persist(chain, TESTDATA / "golden_chain.jsonl")
    registry.to_file(TESTDATA / "golden_chain.jsonl.pub")

    # Golden block: the first non-genesis block, with its preimage written
    # by the independent serializer above.
    golden = chain.blocks[1].to_dict()
    (TESTDATA / "golden_block.json").write_text(json.dumps(golden, indent=2, sort_keys=True) + "\n")
    (TESTDATA / "golden_block_preimage.hex").write_text(independent_preimage(golden).hex() + "\n")

    # Tampered chain: edit one stored battery-life value in the file text.
    text = (TESTDATA / "golden_chain.jsonl").read_text()
    tampered = text.replace('"predicted_battery_life": 57.98', '"predicted_battery_life": 75.98')
    assert tampered != text
    (TESTDATA / "tampered_chain.jsonl").write_text(tampered)
    (TESTDATA / "tampered_chain.jsonl.pub").write_text((TESTDATA / "golden_chain.jsonl.pub").read_text())

    # Scenario scripts and their golden traces.
    fault_free = [
        {"t": t, "event": "broadcast", "network_id": "NET-01", "bl": 55.0 + t, "date": f"2020-08-{t:02d}"}
        for t in range(1, 11)
    ]
    offline_sync = [
        {"t": 1, "event": "broadcast", "network_id": "NET-01", "bl": 57.15, "date": "2020-08-01"},
        {"t": 2, "event": "set_offline", "node": "node-2"},
        {"t": 3, "event": "broadcast", "network_id": "NET-02", "bl": 63.34, "date": "2020-08-03"},
        {"t": 4, "event": "broadcast", "network_id": "NET-01", "bl": 60.95, "date": "2020-08-04"},
        {"t": 5, "event": "broadcast", "network_id": "NET-02", "bl": 57.98, "date": "2020-08-05"},
        {"t": 6, "event": "set_online", "node": "node-2"},
        {"t": 7, "event": "sync", "node": "node-2"},
    ]
    for name, script in [("fault_free", fault_free), ("offline_sync", offline_sync)]:
        (TESTDATA / f"scenario_{name}.json").write_text(json.dumps(script, indent=2) + "\n")
        trace = peers.run_scenario(script, n_nodes=5)
        (TESTDATA / f"scenario_{name}.trace.json").write_text(trace.to_json() + "\n")

    print(f"fixtures written to {TESTDATA}")


if __name__ == "__main__":
    main()
