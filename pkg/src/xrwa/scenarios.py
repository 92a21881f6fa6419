"""Executable scenarios: the full cross-chain trade and the two settlement
routes used for cost comparison.

Each scenario builds its own fresh world from a seed, so runs are
reproducible byte for byte, and replaying with the same seed yields an
identical op log.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import credential, identity, settlement, xauth
from .fixtures import fixture_items
from .ledger import World, WorldConfig
from .primitives import KeyPair, digest, keygen

__all__ = [
    "Actors",
    "build_actors",
    "TRANSFER_DISCLOSURE",
    "run_e2e",
    "run_htlc_route",
    "run_channel_route",
]

# fields a presentation discloses when an asset crosses chains: enough to
# rebuild the anchored commitment plus the compliance region list
TRANSFER_DISCLOSURE = [
    "asset.assetId",
    "asset.assetType",
    "asset.tokenBinding",
    "compliance.sellableRegions",
    "identity.attributes",
]


@dataclass(frozen=True)
class Actors:
    issuer: KeyPair
    holder: KeyPair  # asset owner; the seller in settlement scenarios
    buyer: KeyPair


def build_actors(world: World, seed: int, key_seeds: dict[str, int] | None = None) -> Actors:
    key_seeds = key_seeds or {}

    def key_for(name: str) -> KeyPair:
        tag = key_seeds.get(name, seed).to_bytes(8, "big")
        return keygen(digest(b"actor-" + name.encode() + b"-" + tag))

    actors = Actors(issuer=key_for("issuer"), holder=key_for("holder"), buyer=key_for("buyer"))
    identity.did_create(world, actors.issuer)
    identity.did_create(world, actors.holder)
    return actors


def _issue_on_source(world: World, actors: Actors, items: dict) -> credential.CompositeCredential:
    req = credential.request(items, actors.holder)
    cred = credential.issue(world, req, actors.issuer)
    world.mint_asset(world.config.chains[0], actors.holder.pk, cred.asset["assetId"])
    return cred


def run_e2e(
    seed: int = 42,
    n_updates: int = 50,
    relay_every: int = 1,
    actor_seeds: dict[str, int] | None = None,
) -> dict:
    """Full trade: issue on the source chain, anchor, relay, authenticate on
    the destination, migrate the asset, then open a channel, negotiate
    off-chain, and settle one batch without closing the channel."""
    source, dest = "C1", "C2"
    world = World(WorldConfig(seed=seed))
    actors = build_actors(world, seed, actor_seeds)
    world.mint(source, actors.buyer.pk, 1_000_000)

    cred = _issue_on_source(world, actors, fixture_items("RE"))
    asset_id = cred.asset["assetId"]

    presentation = credential.prove(cred, actors.holder, TRANSFER_DISCLOSURE)
    epoch = len(world.chains[source].blocks)
    commitment = xauth.make_commitment(
        world, source, presentation, cred.asset["tokenBinding"], epoch, world.rng.randbytes(16)
    )
    tx_id, header = xauth.anchor(world, source, commitment, actors.issuer)
    # relay policy: headers move in batches of `relay_every`; any remainder
    # is flushed before authentication since relays must stay gapless
    relay_every = max(relay_every, 1)
    view = world.relayed.setdefault((dest, source), [])
    while len(view) + relay_every <= header.height + 1:
        for _ in range(relay_every):
            world.relay_header(dest, source, world.header_at(source, len(view)))
    world.relay_chain(dest, source)
    proof = xauth.spv_prove(world, tx_id, (source, header.height))
    tx = next(t for t in world.chains[source].blocks[header.height].txs if t.tx_id == tx_id)
    record = xauth.authenticate(world, dest, tx, proof, presentation)

    # burn-and-reissue migration: the token now lives on the destination chain
    world.burn_asset(source, actors.holder.pk, asset_id)
    world.mint_asset(dest, actors.holder.pk, asset_id)

    channel = settlement.chan_open(
        world, actors.buyer, actors.holder, 500_000, [asset_id],
        chain_funds=source, chain_assets=dest,
    )
    price = 0
    for i in range(n_updates):
        price = 400_000 + i * 100
        state = settlement.make_state(
            channel, batch=[asset_id], net_payment=price,
            buyer=actors.buyer, seller=actors.holder,
        )
        settlement.chan_update(channel, state)

    preimage = digest(b"e2e-settlement-" + seed.to_bytes(8, "big"))
    t2, t1 = world.clock + 2, world.clock + 4
    settlement.chan_lock(world, channel, digest(preimage), t1, t2)
    settlement.chan_unlock(world, channel, preimage, at=world.clock + 1)

    world.check_all()
    xauth.check_acceptance_soundness(world)
    identity.check_authorization(world)

    return {
        "world": world,
        "channel": channel,
        "credential": cred,
        "acceptance": record,
        "proofBundle": {
            "proof": proof.to_json(),
            "tx": tx.to_json(),
            "headers": [h.to_json() for h in world.relayed[(dest, source)]],
        },
        "results": {
            "acceptanceRecords": len(world.acceptance_records[dest]),
            "settledBatch": sorted(channel.settled_assets),
            "settledPayment": channel.settled_payment,
            "negotiatedPrice": price,
            "updates": n_updates,
            "channelPhase": channel.phase,
            "sourceVerifications": world.verify_counts.get(source, 0),
            "destVerifications": world.verify_counts.get(dest, 0),
            "buyerHoldsAsset": asset_id in world.assets_of(dest, actors.buyer.pk),
            "sellerPaid": world.balance(source, actors.holder.pk) == price,
        },
    }


def _settlement_world(seed: int, n_assets: int) -> tuple[World, Actors, list[str]]:
    """World with funds on C1 and locally issued assets on C2, ready for
    either settlement route."""
    world = World(WorldConfig(seed=seed))
    actors = build_actors(world, seed)
    world.mint("C1", actors.buyer.pk, 10_000_000)
    assets = []
    for i in range(n_assets):
        asset_id = f"did:xrwa:lot-{i:04d}"
        world.mint_asset("C2", actors.holder.pk, asset_id)
        assets.append(asset_id)
    return world, actors, assets


def run_htlc_route(seed: int, n: int, price_each: int = 1_000) -> World:
    """n cross-chain interactions over plain hash-timelock escrows: every
    interaction locks and unlocks on both chains."""
    world, actors, assets = _settlement_world(seed, n)
    for i, asset_id in enumerate(assets):
        rho = digest(b"htlc-rho-" + i.to_bytes(4, "big") + seed.to_bytes(8, "big"))
        cond = digest(rho)
        t1, t2 = world.clock + 4, world.clock + 2
        funds = settlement.htlc_lock(
            world, "C1", actors.buyer.pk, actors.holder.pk, {"value": price_each}, cond, t1
        )
        asset = settlement.htlc_lock(
            world, "C2", actors.holder.pk, actors.buyer.pk, {"asset": asset_id}, cond, t2
        )
        settlement.htlc_unlock(world, asset, rho, at=world.clock + 1)
        settlement.htlc_unlock(world, funds, rho, at=world.clock + 1)
    world.check_all()
    return world


def run_channel_route(seed: int, n: int, price_each: int = 1_000) -> World:
    """n cross-chain interactions inside one channel: open once, negotiate n
    signed off-chain states, then a single lock/unlock settles the union."""
    world, actors, assets = _settlement_world(seed, n)
    channel = settlement.chan_open(
        world, actors.buyer, actors.holder, price_each * n, list(assets)
    )
    for i in range(n):
        state = settlement.make_state(
            channel,
            batch=assets[: i + 1],
            net_payment=price_each * (i + 1),
            buyer=actors.buyer,
            seller=actors.holder,
        )
        settlement.chan_update(channel, state)
    rho = digest(b"channel-rho-" + seed.to_bytes(8, "big"))
    t2, t1 = world.clock + 2, world.clock + 4
    settlement.chan_lock(world, channel, digest(rho), t1, t2)
    settlement.chan_unlock(world, channel, rho, at=world.clock + 1)
    world.check_all()
    return world
