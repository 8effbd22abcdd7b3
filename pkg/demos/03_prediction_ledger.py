"""Commit predictions to the hash chain, then show tamper-evidence.

Every block is signed by the authority key and carries its predecessor's
hash, so editing any committed value is caught by a full-chain scan.
"""

import dataclasses

from sensorchain import ledger

keys = ledger.AuthorityKeys.generate("coastal-committee", seed=b"\x42" * 32)
registry = ledger.KeyRegistry.from_authorities(keys)

chain = ledger.ChainState(blocks=(ledger.create_genesis(keys),))
for i, bl in enumerate([57.15, 63.34, 60.95, 57.98]):
    block = ledger.create_block(
        network_id="NET-01" if i % 2 == 0 else "NET-02",
        bl=bl,
        date=f"2020-07-{15 + i}",
        chain=chain,
        keys=keys,
        registry=registry,
        created_at=1000 + i,
    )
    chain = ledger.append(chain, block, registry)
    print(f"appended block {block.index}: {block.network_id} bl={bl} hash={block.hash[:12]}…")

print("\nchain valid:", ledger.validate_chain(chain, registry) is None)
print("blocks for NET-01:", [b.index for b in ledger.query_by_network_id(chain, "NET-01")])

# An attacker rewrites a committed prediction.
forged = dataclasses.replace(chain.blocks[2], predicted_battery_life=99.9)
tampered = ledger.ChainState(blocks=chain.blocks[:2] + (forged,) + chain.blocks[3:])
failure = ledger.validate_chain(tampered, registry)
print(f"\nafter editing block 2: detected at index {failure.index} ({failure.error.code})")

# Even the key holder cannot rewrite history without breaking the links.
resigned = ledger.resign_block(chain.blocks[2], keys, predicted_battery_life=99.9)
insider = ledger.ChainState(blocks=chain.blocks[:2] + (resigned,) + chain.blocks[3:])
failure = ledger.validate_chain(insider, registry)
print(f"after re-signing block 2:  detected at index {failure.index} ({failure.error.code})")
