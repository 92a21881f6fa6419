"""Cross-chain authentication: anchor once, prove inclusion, accept elsewhere.

The source chain carries a commitment transaction binding an asset id, the
digest of a presentation's disclosed subset, the token binding, an epoch
(source-chain height at anchoring) and a nonce. A destination chain that has
accepted the source header via relay can then authenticate the asset from
the compact inclusion proof alone.

The destination side performs digest and commitment recomputation plus
status and registry lookups only; it never re-runs credential signature
verification. That work happens exactly once, on the source chain, inside
``make_commitment``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import canonical
from .credential import Presentation, status_clear, verify as verify_presentation
from .errors import (
    CommitmentMismatch,
    InvalidPresentation,
    InvariantViolation,
    IssuerDeactivated,
    JurisdictionBlocked,
    NotFound,
    Revoked,
    SpvFailed,
    TxNotInBlock,
)
from .identity import did_resolve
from .ledger import BlockHeader, ChainId, Transaction, World
from .primitives import KeyPair, MerklePath, digest, merkle_prove, merkle_verify

__all__ = [
    "Commitment",
    "SpvProof",
    "AcceptanceRecord",
    "disclosed_subset_digest",
    "token_binding_digest",
    "make_commitment",
    "anchor",
    "spv_prove",
    "spv_verify",
    "authenticate",
    "has_acceptance",
]

_COMMIT_DOMAIN = b"xrwa/commit/v1"
_SUBSET_DOMAIN = b"xrwa/subset/v1"

NONCE_SIZE = 16


def _lp(data: bytes) -> bytes:
    return len(data).to_bytes(4, "big") + data


def disclosed_subset_digest(presentation: Presentation) -> bytes:
    """Digest of the disclosed subset: credential id, disclosed fields, and
    the four section hashes (so the subset pins one specific credential)."""
    body = {
        "credentialId": presentation.credential_id,
        "disclosed": presentation.disclosed,
        "sectionHashes": {
            k: canonical.to_hex(v) for k, v in sorted(presentation.section_hashes.items())
        },
    }
    return digest(_SUBSET_DOMAIN + canonical.dumps_bytes(body))


def token_binding_digest(token_binding: dict) -> bytes:
    return digest(canonical.dumps_bytes(token_binding))


@dataclass(frozen=True)
class Commitment:
    """Anchor payload: fixed-order, length-prefixed fields under a domain tag."""

    asset_id: str
    cred_digest: bytes
    token_binding_digest: bytes
    epoch: int
    nonce: bytes

    def commitment_digest(self) -> bytes:
        return digest(
            _COMMIT_DOMAIN
            + _lp(self.asset_id.encode("utf-8"))
            + _lp(self.cred_digest)
            + _lp(self.token_binding_digest)
            + self.epoch.to_bytes(8, "big")
            + _lp(self.nonce)
        )

    def to_body(self) -> dict:
        return {
            "assetId": self.asset_id,
            "credDigest": canonical.to_hex(self.cred_digest),
            "tokenBindingDigest": canonical.to_hex(self.token_binding_digest),
            "epoch": self.epoch,
            "nonce": canonical.to_hex(self.nonce),
            "commitmentDigest": canonical.to_hex(self.commitment_digest()),
        }

    @classmethod
    def from_body(cls, body: dict) -> "Commitment":
        c = cls(
            asset_id=body["assetId"],
            cred_digest=canonical.from_hex(body["credDigest"]),
            token_binding_digest=canonical.from_hex(body["tokenBindingDigest"]),
            epoch=body["epoch"],
            nonce=canonical.from_hex(body["nonce"]),
        )
        if canonical.to_hex(c.commitment_digest()) != body["commitmentDigest"]:
            raise CommitmentMismatch("stored commitment digest does not recompute")
        return c


@dataclass(frozen=True)
class SpvProof:
    """Inclusion proof against one specific header of one chain."""

    path: MerklePath
    root: bytes
    chain: ChainId
    height: int

    def to_json(self) -> dict:
        return {
            "path": self.path.to_json(),
            "root": canonical.to_hex(self.root),
            "chain": self.chain,
            "height": self.height,
            "leafIndex": self.path.leaf_index,
        }

    @classmethod
    def from_json(cls, data: dict) -> "SpvProof":
        return cls(
            path=MerklePath.from_json(data["path"], data["leafIndex"]),
            root=canonical.from_hex(data["root"]),
            chain=data["chain"],
            height=data["height"],
        )


@dataclass(frozen=True)
class AcceptanceRecord:
    credential_id: str
    asset_id: str
    source_chain: ChainId
    dest_chain: ChainId
    accepted_at: int
    commitment_digest: bytes
    checks_passed: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "credentialId": self.credential_id,
            "assetId": self.asset_id,
            "sourceChain": self.source_chain,
            "destChain": self.dest_chain,
            "acceptedAt": self.accepted_at,
            "commitmentDigest": canonical.to_hex(self.commitment_digest),
            "checksPassed": list(self.checks_passed),
        }


def make_commitment(
    world: World,
    source_chain: ChainId,
    presentation: Presentation,
    token_binding: dict,
    epoch: int,
    nonce: bytes,
) -> Commitment:
    """Source-side commitment over a locally verified presentation.

    This is the single full credential verification in a cross-chain
    transfer; it is counted against `source_chain`.
    """
    if len(nonce) != NONCE_SIZE:
        raise InvalidPresentation(f"nonce must be {NONCE_SIZE} bytes")
    result = verify_presentation(world, presentation, chain=source_chain)
    if not result.ok:
        raise InvalidPresentation(f"presentation fails local verification: {result}")
    asset_id = presentation.disclosed.get("asset.assetId")
    if asset_id is None:
        raise InvalidPresentation("asset.assetId must be disclosed for anchoring")
    disclosed_tb = presentation.disclosed.get("asset.tokenBinding")
    if disclosed_tb is None:
        raise InvalidPresentation("asset.tokenBinding must be disclosed for anchoring")
    if disclosed_tb != token_binding:
        raise InvalidPresentation("token binding does not match the disclosed one")
    return Commitment(
        asset_id=asset_id,
        cred_digest=disclosed_subset_digest(presentation),
        token_binding_digest=token_binding_digest(token_binding),
        epoch=epoch,
        nonce=nonce,
    )


def anchor(
    world: World,
    chain: ChainId,
    commitment: Commitment,
    issuer: KeyPair,
    seal: bool = True,
) -> tuple[bytes, Optional[BlockHeader]]:
    """Submit the commitment transaction; by default seal it into a block and
    return the containing header."""
    issuer_did = world.controller_index.get(canonical.to_hex(issuer.pk))
    if issuer_did is None or did_resolve(world, issuer_did).status != "Active":
        raise IssuerDeactivated("anchoring key does not control an active did")
    # a nonce may serve one (asset, epoch) pair only
    slot = (commitment.asset_id, commitment.epoch, commitment.nonce)
    if slot in world.anchor_nonces:
        raise CommitmentMismatch(
            f"nonce already anchored for {commitment.asset_id} at epoch {commitment.epoch}"
        )
    world.anchor_nonces.add(slot)
    tx = Transaction.make("anchor", commitment.to_body(), issuer, world.next_nonce())
    tx_id = world.submit_tx(chain, tx)
    header = world.seal_block(chain) if seal else None
    return tx_id, header


def spv_prove(world: World, tx_id: bytes, header_ref: tuple[ChainId, int]) -> SpvProof:
    chain, height = header_ref
    header = world.header_at(chain, height)
    block = world.chains[chain].blocks[height]
    leaves = [tx.tx_id for tx in block.txs]
    try:
        index = leaves.index(tx_id)
    except ValueError:
        raise TxNotInBlock(f"tx not in {chain} block {height}") from None
    return SpvProof(
        path=merkle_prove(leaves, index),
        root=header.merkle_root,
        chain=chain,
        height=height,
    )


def spv_verify(world: World, observer_chain: ChainId, tx: Transaction, proof: SpvProof) -> bool:
    """True iff the proof's root belongs to a header the observer accepted
    via relay, and the path recomputation from digest(tx) reaches it."""
    header = world.relayed_header_at(observer_chain, proof.chain, proof.height)
    if header is None or header.merkle_root != proof.root:
        return False
    leaf = digest(tx.payload_bytes())
    return merkle_verify(leaf, proof.path, proof.root)


def authenticate(
    world: World,
    dest_chain: ChainId,
    tx: Transaction,
    proof: SpvProof,
    presentation: Presentation,
) -> AcceptanceRecord:
    """Destination-side acceptance: digest and commitment recomputation plus
    status and registry lookups. No credential signatures are re-verified.

    An undisclosed compliance section does not block acceptance; the record
    is flagged compliance-unverified instead.
    """
    checks: list[str] = []

    if not spv_verify(world, dest_chain, tx, proof):
        raise SpvFailed("inclusion proof does not verify against relayed headers")
    checks.append("spv")

    commitment = Commitment.from_body(tx.body)
    asset_id = presentation.disclosed.get("asset.assetId")
    disclosed_tb = presentation.disclosed.get("asset.tokenBinding")
    if asset_id != commitment.asset_id:
        raise CommitmentMismatch("disclosed asset id differs from anchored commitment")
    if disclosed_subset_digest(presentation) != commitment.cred_digest:
        raise CommitmentMismatch("disclosed subset digest differs from anchored commitment")
    if disclosed_tb is None or token_binding_digest(disclosed_tb) != commitment.token_binding_digest:
        raise CommitmentMismatch("token binding differs from anchored commitment")
    checks.append("commitment")

    try:
        issuer_doc = did_resolve(world, presentation.issuer)
    except NotFound:
        raise IssuerDeactivated(f"issuer {presentation.issuer} is not registered") from None
    if issuer_doc.status != "Active":
        raise IssuerDeactivated(f"issuer {presentation.issuer} is deactivated")
    checks.append("issuer_active")

    consulted = {sel.split(".", 1)[0] for sel in presentation.disclosed}
    consulted.add("asset")
    for section in sorted(consulted):
        ref = presentation.disclosed.get(f"{section}.sStatus")
        if ref is None:
            raise Revoked(f"status reference for {section} is not disclosed")
        failure = status_clear(world, world.status_lists, ref, section)
        if failure is not None:
            raise Revoked(str(failure))
    checks.append("status_clear")

    regions = presentation.disclosed.get("compliance.sellableRegions")
    if regions is not None:
        dest_jurisdiction = world.config.jurisdiction(dest_chain)
        if dest_jurisdiction not in regions:
            raise JurisdictionBlocked(
                f"{dest_jurisdiction} not in disclosed sellable regions {regions}"
            )
        checks.append("jurisdiction")
    else:
        checks.append("compliance-unverified")

    record = AcceptanceRecord(
        credential_id=presentation.credential_id,
        asset_id=commitment.asset_id,
        source_chain=proof.chain,
        dest_chain=dest_chain,
        accepted_at=world.clock,
        commitment_digest=commitment.commitment_digest(),
        checks_passed=tuple(checks),
    )
    world.acceptance_records[dest_chain].append(record)
    world.log_op(dest_chain, "acceptance", descriptor=record.to_json())
    return record


def has_acceptance(world: World, chain: ChainId, asset_id: str) -> bool:
    return any(r.asset_id == asset_id for r in world.acceptance_records.get(chain, []))


def offline_verify(proof_json: dict, tx_json: dict, headers_json: list[dict]) -> bool:
    """Standalone proof check from serialized artifacts, no world required:
    validates header linkage from genesis, then the inclusion path against
    the referenced header's root."""
    from .ledger import GENESIS_PREV

    headers = [BlockHeader.from_json(h) for h in headers_json]
    if not headers or headers[0].prev != GENESIS_PREV or headers[0].height != 0:
        return False
    for prev, cur in zip(headers, headers[1:]):
        if cur.prev != prev.header_digest() or cur.height != prev.height + 1:
            return False
    proof = SpvProof.from_json(proof_json)
    if not 0 <= proof.height < len(headers):
        return False
    header = headers[proof.height]
    if header.chain != proof.chain or header.merkle_root != proof.root:
        return False
    tx = Transaction.from_json(tx_json)
    return merkle_verify(digest(tx.payload_bytes()), proof.path, proof.root)


def check_acceptance_soundness(world: World) -> None:
    """Audit: every acceptance record must trace back to an anchor tx in a
    source-chain block whose header the destination accepted via relay, with
    a matching anchor entry in the op log."""
    anchor_log_ids = {
        rec.tx_id for rec in world.op_log if rec.op_kind == "anchor"
    }
    for dest, records in world.acceptance_records.items():
        for rec in records:
            wanted = canonical.to_hex(rec.commitment_digest)
            carrier = None
            for block in world.chains[rec.source_chain].blocks:
                for tx in block.txs:
                    if tx.kind == "anchor" and tx.body.get("commitmentDigest") == wanted:
                        carrier = (block, tx)
            if carrier is None:
                raise InvariantViolation(
                    f"acceptance {wanted} has no anchor tx on {rec.source_chain}"
                )
            block, tx = carrier
            if canonical.to_hex(tx.tx_id) not in anchor_log_ids:
                raise InvariantViolation(f"anchor tx {wanted} missing from op log")
            view = world.relayed.get((dest, rec.source_chain), [])
            if block.header not in view:
                raise InvariantViolation(
                    f"anchor block for {wanted} was never relayed to {dest}"
                )
