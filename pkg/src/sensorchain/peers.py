"""Simulated peer-to-peer replication of the prediction ledger.

Nodes exchange in-process messages under a deterministic, single-threaded
schedule: every new block is announced to all online nodes, each node
validates against its own replica, and nodes that fall behind catch up by
requesting a full chain and adopting the longest valid one. No sockets,
no timing nondeterminism, so replication claims are directly testable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .ledger import (
    AuthorityKeys,
    ChainState,
    KeyRegistry,
    PredictionBlock,
    create_block,
    create_genesis,
    validate_block,
    validate_chain,
)

BLOCK_ANNOUNCE = "block-announce"
CHAIN_REQUEST = "chain-request"
CHAIN_RESPONSE = "chain-response"

# Fixed signing seed so scenario traces are identical across runs.
SCENARIO_KEY_SEED = b"sensorchain-scenario-authority\x00\x00"
SCENARIO_KEY_ID = "scenario-authority"


@dataclass
class PeerMessage:
    kind: str
    payload: PredictionBlock | ChainState
    from_id: str

    def __post_init__(self):
        wants_chain = self.kind in (CHAIN_RESPONSE,)
        if wants_chain != isinstance(self.payload, ChainState):
            raise ValueError(f"payload type does not match message kind {self.kind!r}")


@dataclass
class PeerNode:
    node_id: str
    replica: ChainState
    registry: KeyRegistry
    online: bool = True


@dataclass
class ReceiveResult:
    status: str  # "accept" | "reject" | "response"
    reason: str | None = None
    response: PeerMessage | None = None


@dataclass
class DeliveryReport:
    accepted: list[str] = field(default_factory=list)
    rejected: dict[str, str] = field(default_factory=dict)
    unreachable: list[str] = field(default_factory=list)


def spawn_network(n: int, registry: KeyRegistry, genesis: PredictionBlock) -> list[PeerNode]:
    """n online nodes, each seeded with the same genesis replica."""
    chain = ChainState(blocks=(genesis,))
    return [PeerNode(node_id=f"node-{i}", replica=chain, registry=registry) for i in range(n)]


def resolve(node: PeerNode, candidate: ChainState) -> ChainState:
    """Adopt the candidate replica iff it is valid, shares our genesis,
    and is strictly longer. Equal-length chains with differing heads keep
    whichever head hash is lexicographically smaller; otherwise the local
    replica wins. Updates and returns the node's replica.
    """
    local = node.replica
    if validate_chain(candidate, node.registry) is not None:
        return local
    if candidate.blocks[0].hash != local.blocks[0].hash:
        return local
    adopt = len(candidate) > len(local) or (
        len(candidate) == len(local)
        and candidate.head_hash != local.head_hash
        and candidate.head_hash < local.head_hash
    )
    if adopt:
        node.replica = candidate
    return node.replica


def node_receive(node: PeerNode, msg: PeerMessage) -> ReceiveResult:
    """Process one message against the node's local replica."""
    if not node.online:
        return ReceiveResult(status="reject", reason="offline")
    if msg.kind == CHAIN_REQUEST:
        return ReceiveResult(
            status="response",
            response=PeerMessage(CHAIN_RESPONSE, node.replica, node.node_id),
        )
    if msg.kind == CHAIN_RESPONSE:
        before = node.replica
        after = resolve(node, msg.payload)
        if after is not before:
            return ReceiveResult(status="accept", reason="adopted")
        return ReceiveResult(status="reject", reason="kept-local")
    if msg.kind == BLOCK_ANNOUNCE:
        block = msg.payload
        head = node.replica.head
        if block.index <= head.index:
            return ReceiveResult(status="reject", reason="already-have")
        if block.index > head.index + 1:
            return ReceiveResult(status="reject", reason="needs-sync")
        error = validate_block(block, head, node.registry)
        if error is not None:
            return ReceiveResult(status="reject", reason=error.code)
        node.replica = ChainState(blocks=node.replica.blocks + (block,))
        return ReceiveResult(status="accept")
    return ReceiveResult(status="reject", reason=f"unknown-kind:{msg.kind}")


def broadcast(nodes: list[PeerNode], block: PredictionBlock) -> DeliveryReport:
    """Announce a block to every node; offline nodes are unreachable."""
    report = DeliveryReport()
    announce = PeerMessage(BLOCK_ANNOUNCE, block, "authority")
    for node in nodes:
        if not node.online:
            report.unreachable.append(node.node_id)
            continue
        result = node_receive(node, announce)
        if result.status == "accept":
            report.accepted.append(node.node_id)
        else:
            report.rejected[node.node_id] = result.reason or "rejected"
    return report


def sync_node(node: PeerNode, nodes: list[PeerNode]) -> bool:
    """One sync round: request every online peer's chain and resolve.

    Returns True if the node adopted a longer replica.
    """
    if not node.online:
        return False
    adopted = False
    for peer in nodes:
        if peer is node or not peer.online:
            continue
        reply = node_receive(peer, PeerMessage(CHAIN_REQUEST, node.replica.head, node.node_id))
        if reply.response is None:
            continue
        result = node_receive(node, reply.response)
        adopted = adopted or result.status == "accept"
    return adopted


@dataclass
class ScenarioTrace:
    """Per-event snapshot of every node's head hash and length."""

    entries: list[dict]
    final_online_heads_equal: bool

    def to_json(self) -> str:
        return json.dumps(
            {
                "entries": self.entries,
                "final_online_heads_equal": self.final_online_heads_equal,
            },
            indent=2,
            sort_keys=True,
        )


def _snapshot(t: int, event: str, nodes: list[PeerNode]) -> dict:
    return {
        "t": t,
        "event": event,
        "nodes": {
            n.node_id: {
                "head": n.replica.head_hash,
                "length": len(n.replica),
                "online": n.online,
            }
            for n in nodes
        },
    }


def _find_node(nodes: list[PeerNode], node_id: str) -> PeerNode:
    for node in nodes:
        if node.node_id == node_id:
            return node
    raise KeyError(f"no such node {node_id!r}")


def run_scenario(script: list[dict], n_nodes: int = 5) -> ScenarioTrace:
    """Execute a timed event script against a fresh network.

    Events (processed in ascending t, stable for ties):
      {"t": 1, "event": "broadcast", "network_id": ..., "bl": ..., "date": ...}
      {"t": 2, "event": "set_offline", "node": "node-1"}
      {"t": 3, "event": "set_online", "node": "node-1"}
      {"t": 4, "event": "sync", "node": "node-1"}   # omit node: sync all

    The authority keypair is fixed, block timestamps come from the event
    times, and message order is the node order, so the trace is fully
    deterministic.
    """
    keys = AuthorityKeys.generate(SCENARIO_KEY_ID, seed=SCENARIO_KEY_SEED)
    registry = KeyRegistry.from_authorities(keys)
    genesis = create_genesis(keys)
    nodes = spawn_network(n_nodes, registry, genesis)
    authority_chain = ChainState(blocks=(genesis,))

    entries = [_snapshot(0, "init", nodes)]
    for event in sorted(script, key=lambda e: e["t"]):
        kind = event["event"]
        t = int(event["t"])
        if kind == "broadcast":
            block = create_block(
                network_id=event["network_id"],
                bl=float(event["bl"]),
                date=event["date"],
                chain=authority_chain,
                keys=keys,
                registry=registry,
                created_at=t,
            )
            authority_chain = ChainState(blocks=authority_chain.blocks + (block,))
            broadcast(nodes, block)
        elif kind == "set_offline":
            _find_node(nodes, event["node"]).online = False
        elif kind == "set_online":
            _find_node(nodes, event["node"]).online = True
        elif kind == "sync":
            targets = [_find_node(nodes, event["node"])] if "node" in event else nodes
            for node in targets:
                sync_node(node, nodes)
        else:
            raise ValueError(f"unknown scenario event {kind!r}")
        entries.append(_snapshot(t, kind, nodes))

    online_heads = {n.replica.head_hash for n in nodes if n.online}
    return ScenarioTrace(entries=entries, final_online_heads_equal=len(online_heads) <= 1)
