"""Composite credentials for tokenized real-world assets.

A credential has four sections (asset, identity, compliance, custody), each
independently revocable and provable, plus a top-level proof over the four
section hashes. Section bodies are canonical JSON objects using camelCase
field names; the canonical serialization is also what size measurements run
over.

Selective disclosure is a hash-commitment scheme, not zero knowledge:

- every top-level section field gets a per-field digest
  fd = digest("xrwa/field/v1" | salt | selector | canonical(value)),
  with the salt derived from a per-credential secret nonce;
- a section hash commits to the selector-sorted sequence of field digests;
- the top proof signs digest(asset_hash | identity_hash | compliance_hash |
  custody_hash) along with the credential id and holder binding;
- a presentation reveals (salt, value) for chosen selectors and bare field
  digests for the rest, so undisclosed values never appear in its bytes.

Revocation and suspension live in issuer-owned status lists held by the
world. Each section is allocated one index, valid in both of the issuer's
lists (revocation flips one way; suspension is reversible). The asset
section is always consulted during verification regardless of disclosure,
since it carries the token binding that gives the credential meaning.

Dates are ISO-8601 strings compared lexicographically after syntactic
validation; there is no timezone arithmetic anywhere in this module.
"""

from __future__ import annotations

import dataclasses
import re
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Optional

from . import canonical
from .errors import (
    BadSignature,
    Expired,
    IssuerDeactivated,
    MissingField,
    NotFound,
    NotOwner,
    StatusListFull,
    UnknownSelector,
)
from .identity import Did, did_resolve, resolve_version
from .ledger import World
from .primitives import KeyPair, digest, sign, verify_sig

__all__ = [
    "SECTIONS",
    "StatusList",
    "SectionProof",
    "CredentialRequest",
    "CompositeCredential",
    "Presentation",
    "VerifyResult",
    "request",
    "issue",
    "prove",
    "verify",
    "status_clear",
    "revoke",
    "reinstate",
    "audit_credential",
    "canonical_serialize",
    "measured_size_kb",
    "selectors_of",
]

SECTIONS = ("asset", "identity", "compliance", "custody")

_FIELD_DOMAIN = b"xrwa/field/v1"
_SALT_DOMAIN = b"xrwa/salt/v1"
_SECTION_DOMAIN = b"xrwa/section/v1"

_DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}$")

REQUIRED_FIELDS: dict[str, tuple[str, ...]] = {
    "asset": ("assetId", "assetType", "category", "classDid", "tokenBinding"),
    "identity": (
        "schemaVersion",
        "identitySchema",
        "identifiers",
        "taxonomies",
        "spatialFootprint",
        "documents",
        "relations",
        "attributes",
        "custom",
    ),
    "compliance": (
        "licenseId",
        "sellableRegions",
        "restrictions",
        "effectiveFrom",
        "effectiveTo",
        "regulatorDid",
    ),
    "custody": ("custodianDid", "location", "policy", "auditCycleDays", "insurancePolicyRef"),
}

STATUS_LIST_CAPACITY = 4096


def _lp(data: bytes) -> bytes:
    return len(data).to_bytes(4, "big") + data


# ------------------------------------------------------------ status lists --

@dataclass
class StatusList:
    """Issuer-owned bit list; one bit per allocated section index."""

    issuer: str
    purpose: str  # "Revocation" | "Suspension"
    bits: bytearray = field(default_factory=lambda: bytearray(STATUS_LIST_CAPACITY // 8))
    version: int = 1
    next_index: int = 0

    @property
    def uri(self) -> str:
        suffix = Did.parse(self.issuer).id_string[:16]
        return f"urn:xrwa:status:{suffix}:{self.purpose.lower()}"

    def bit(self, index: int) -> int:
        if not 0 <= index < STATUS_LIST_CAPACITY:
            raise IndexError(f"status index {index} outside list")
        return (self.bits[index // 8] >> (index % 8)) & 1

    def set_bit(self, index: int) -> None:
        self.bits[index // 8] |= 1 << (index % 8)
        self.version += 1

    def clear_bit(self, index: int) -> None:
        if self.purpose == "Revocation":
            raise ValueError("revocation bits are one-directional")
        self.bits[index // 8] &= ~(1 << (index % 8))
        self.version += 1

    def allocate(self) -> int:
        if self.next_index >= STATUS_LIST_CAPACITY:
            raise StatusListFull(f"{self.uri} exhausted at {STATUS_LIST_CAPACITY} entries")
        self.next_index += 1
        return self.next_index - 1

    def to_json(self) -> dict:
        return {
            "issuer": self.issuer,
            "purpose": self.purpose,
            "bits": canonical.to_hex(bytes(self.bits)),
            "version": self.version,
            "nextIndex": self.next_index,
        }


def _issuer_lists(world: World, issuer_did: str) -> tuple[StatusList, StatusList]:
    """Fetch or create the issuer's revocation and suspension lists."""
    lists = []
    for purpose in ("Revocation", "Suspension"):
        probe = StatusList(issuer=issuer_did, purpose=purpose)
        existing = world.status_lists.get(probe.uri)
        if existing is None:
            world.status_lists[probe.uri] = probe
            existing = probe
        lists.append(existing)
    return lists[0], lists[1]


# ------------------------------------------------- commitments and hashing --

def field_salt(nonce: bytes, selector: str) -> bytes:
    return digest(_SALT_DOMAIN + nonce + selector.encode("utf-8"))[:16]


def field_digest(selector: str, value: Any, salt: bytes) -> bytes:
    return digest(
        _FIELD_DOMAIN
        + _lp(salt)
        + _lp(selector.encode("utf-8"))
        + _lp(canonical.dumps_bytes(value))
    )


def section_hash_from_digests(digests: Mapping[str, bytes]) -> bytes:
    acc = _SECTION_DOMAIN
    for selector in sorted(digests):
        acc += _lp(selector.encode("utf-8")) + digests[selector]
    return digest(acc)


def section_field_digests(section: str, body: Mapping[str, Any], nonce: bytes) -> dict[str, bytes]:
    out = {}
    for key, value in body.items():
        if key == "sProof":
            continue
        selector = f"{section}.{key}"
        out[selector] = field_digest(selector, value, field_salt(nonce, selector))
    return out


def top_hash(section_hashes: Mapping[str, bytes]) -> bytes:
    return digest(b"".join(section_hashes[s] for s in SECTIONS))


# ------------------------------------------------------------------ proofs --

@dataclass(frozen=True)
class SectionProof:
    issuer: str
    issued: str
    expires: str
    section_hash: bytes
    proof_value: bytes
    issuer_key_version: int
    proof_purpose: str = "assertionMethod"

    def to_json(self) -> dict:
        return {
            "issuer": self.issuer,
            "issued": self.issued,
            "expires": self.expires,
            "proofPurpose": self.proof_purpose,
            "sectionHash": canonical.to_hex(self.section_hash),
            "proofValue": canonical.to_hex(self.proof_value),
            "issuerKeyVersion": self.issuer_key_version,
        }

    @classmethod
    def from_json(cls, data: dict) -> "SectionProof":
        return cls(
            issuer=data["issuer"],
            issued=data["issued"],
            expires=data["expires"],
            section_hash=canonical.from_hex(data["sectionHash"]),
            proof_value=canonical.from_hex(data["proofValue"]),
            issuer_key_version=data["issuerKeyVersion"],
            proof_purpose=data["proofPurpose"],
        )


def _proof_message(
    credential_id: str,
    section: str,
    section_hash: bytes,
    issuer: str,
    issued: str,
    expires: str,
    key_version: int,
    holder_pk_hex: Optional[str] = None,
) -> bytes:
    body = {
        "credentialId": credential_id,
        "expires": expires,
        "issued": issued,
        "issuer": issuer,
        "issuerKeyVersion": key_version,
        "proofPurpose": "assertionMethod",
        "section": section,
        "sectionHash": canonical.to_hex(section_hash),
    }
    if holder_pk_hex is not None:
        body["holderPk"] = holder_pk_hex
    return canonical.dumps_bytes(body)


# -------------------------------------------------------------- credential --

@dataclass(frozen=True)
class CredentialRequest:
    items: dict
    holder_pk: bytes
    sig: bytes

    def verify(self) -> bool:
        return verify_sig(self.holder_pk, canonical.dumps_bytes(self.items), self.sig)

    def to_json(self) -> dict:
        return {
            "items": self.items,
            "holderPk": canonical.to_hex(self.holder_pk),
            "sig": canonical.to_hex(self.sig),
        }


@dataclass(frozen=True)
class CompositeCredential:
    """Issued four-section credential; `sections` maps name to body dict
    (body includes sStatus, excludes sProof)."""

    id: str
    holder_pk: bytes
    disclosure_nonce: bytes
    sections: dict[str, dict]
    section_proofs: dict[str, SectionProof]
    top_proof: SectionProof

    @property
    def asset(self) -> dict:
        return self.sections["asset"]

    @property
    def identity(self) -> dict:
        return self.sections["identity"]

    @property
    def compliance(self) -> dict:
        return self.sections["compliance"]

    @property
    def custody(self) -> dict:
        return self.sections["custody"]

    @property
    def issuer(self) -> str:
        return self.top_proof.issuer

    def section_hashes(self) -> dict[str, bytes]:
        return {
            name: section_hash_from_digests(
                section_field_digests(name, body, self.disclosure_nonce)
            )
            for name, body in self.sections.items()
        }

    def status_ref(self, section: str) -> dict:
        return self.sections[section]["sStatus"]

    def to_json(self) -> dict:
        doc: dict[str, Any] = {"id": self.id}
        for name in SECTIONS:
            body = dict(self.sections[name])
            body["sProof"] = self.section_proofs[name].to_json()
            doc[name] = body
        doc["holderPk"] = canonical.to_hex(self.holder_pk)
        doc["disclosureNonce"] = canonical.to_hex(self.disclosure_nonce)
        doc["proof"] = self.top_proof.to_json()
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "CompositeCredential":
        sections = {}
        proofs = {}
        for name in SECTIONS:
            body = dict(doc[name])
            proofs[name] = SectionProof.from_json(body.pop("sProof"))
            sections[name] = body
        return cls(
            id=doc["id"],
            holder_pk=canonical.from_hex(doc["holderPk"]),
            disclosure_nonce=canonical.from_hex(doc["disclosureNonce"]),
            sections=sections,
            section_proofs=proofs,
            top_proof=SectionProof.from_json(doc["proof"]),
        )


def canonical_serialize(cred: CompositeCredential) -> bytes:
    return canonical.dumps_bytes(cred.to_json())


def measured_size_kb(cred: CompositeCredential) -> float:
    return round(len(canonical_serialize(cred)) / 1024, 2)


def selectors_of(cred: CompositeCredential) -> list[str]:
    out = []
    for name in SECTIONS:
        out.extend(f"{name}.{key}" for key in cred.sections[name] if key != "sProof")
    return sorted(out)


# -------------------------------------------------------------- validation --

def _require_date(value: str, where: str) -> None:
    if not isinstance(value, str) or not _DATE_RE.match(value):
        raise MissingField(f"{where} must be an ISO date (YYYY-MM-DD), got {value!r}")


def _require_digest_hex(value: str, where: str) -> None:
    try:
        raw = canonical.from_hex(value)
    except (ValueError, TypeError):
        raise MissingField(f"{where} must be a 0x-prefixed digest") from None
    if len(raw) != 32:
        raise MissingField(f"{where} must be a 32-byte digest")


def _validate_sections(sections: Mapping[str, Mapping[str, Any]]) -> None:
    for name in SECTIONS:
        body = sections[name]
        for key in REQUIRED_FIELDS[name]:
            if key not in body:
                raise MissingField(f"{name}.{key} is required")
        if "sStatus" not in body:
            raise MissingField(f"{name}.sStatus is required")

    asset = sections["asset"]
    Did.parse(asset["assetId"])
    tb = asset["tokenBinding"]
    for key in ("standard", "chain", "contract", "tokenId"):
        if not tb.get(key):
            raise MissingField(f"asset.tokenBinding.{key} must be non-empty")
    if ":" not in tb["chain"]:
        raise MissingField("asset.tokenBinding.chain must look like namespace:reference")

    ident = sections["identity"]
    if not isinstance(ident["schemaVersion"], int) or ident["schemaVersion"] < 1:
        raise MissingField("identity.schemaVersion must be an integer >= 1")
    for doc in ident["documents"]:
        _require_digest_hex(doc["hash"], "identity.documents[].hash")
    geometry = ident["spatialFootprint"].get("geometry", {})
    if geometry.get("type") == "Polygon":
        for ring in geometry.get("coordinates", []):
            if ring and ring[0] != ring[-1]:
                raise MissingField("polygon rings must close (first point == last point)")

    comp = sections["compliance"]
    _require_date(comp["effectiveFrom"], "compliance.effectiveFrom")
    _require_date(comp["effectiveTo"], "compliance.effectiveTo")
    if comp["effectiveFrom"] > comp["effectiveTo"]:
        raise MissingField("compliance.effectiveFrom must not be after effectiveTo")

    cust = sections["custody"]
    if not isinstance(cust["auditCycleDays"], int) or cust["auditCycleDays"] < 1:
        raise MissingField("custody.auditCycleDays must be an integer >= 1")
    _require_digest_hex(cust["insurancePolicyRef"]["hash"], "custody.insurancePolicyRef.hash")


def _section_defaults(items: Mapping[str, Any]) -> dict[str, dict]:
    asset_id = items.get("asset", {}).get("assetId", "")
    filler_hash = canonical.to_hex(digest(b"xrwa/default-doc/" + str(asset_id).encode()))
    defaults: dict[str, dict] = {
        "asset": {
            "category": "General",
            "classDid": "did:web:registry.example.org:class:GENERIC",
        },
        "identity": {
            "schemaVersion": 1,
            "identitySchema": "https://example.org/schemas/rwa-identity-v2.json",
            "identifiers": [],
            "taxonomies": [],
            "spatialFootprint": {
                "encoding": "GeoJSON",
                "geometry": {"type": "Point", "coordinates": [0.0, 0.0]},
                "granularity": "site",
            },
            "documents": [],
            "relations": [],
            "attributes": [],
            "custom": {},
        },
        "compliance": {
            "licenseId": "unlicensed",
            "sellableRegions": [],
            "restrictions": [],
            "effectiveFrom": "2020-01-01",
            "effectiveTo": "2099-01-01",
            "regulatorDid": "did:web:regulator.example.gov",
        },
        "custody": {
            "custodianDid": "did:web:custody.example.bank",
            "location": "unspecified",
            "policy": "unspecified",
            "auditCycleDays": 365,
            "insurancePolicyRef": {"hash": filler_hash},
        },
    }
    merged = {}
    for name in SECTIONS:
        body = dict(defaults[name])
        body.update(items.get(name, {}))
        merged[name] = body
    return merged


# -------------------------------------------------------------- operations --

def request(items: Mapping[str, Any], holder: KeyPair) -> CredentialRequest:
    """Holder-signed canonical request for a credential over `items`, a map
    of section name to section content."""
    asset_items = items.get("asset") or {}
    if not asset_items.get("assetType"):
        raise MissingField("request must carry asset.assetType")
    if not asset_items.get("assetId"):
        raise MissingField("request must carry asset.assetId")
    items = {k: dict(v) for k, v in items.items()}
    sig = sign(holder.sk, canonical.dumps_bytes(items))
    return CredentialRequest(items=items, holder_pk=holder.pk, sig=sig)


def _issuer_did_for(world: World, issuer: KeyPair) -> tuple[str, int]:
    did = world.controller_index.get(canonical.to_hex(issuer.pk))
    if did is None:
        # the key may have controlled a did that has since been deactivated
        for text, entry in world.did_registry.items():
            if entry.head.controller_pk == issuer.pk:
                raise IssuerDeactivated(f"issuer did {text} is deactivated")
        raise NotFound("issuer key controls no registered did")
    doc = did_resolve(world, did)
    if doc.status != "Active":
        raise IssuerDeactivated(f"issuer did {did} is deactivated")
    return did, doc.version


def issue(world: World, req: CredentialRequest, issuer: KeyPair) -> CompositeCredential:
    """Issue a four-section credential against a holder request.

    Allocates one status-list index per section, computes per-field
    commitments, and signs four section proofs plus the top proof.
    """
    issuer_did, key_version = _issuer_did_for(world, issuer)
    if not req.verify():
        raise BadSignature("request signature does not verify under holder key")

    sections = _section_defaults(req.items)
    revocation, suspension = _issuer_lists(world, issuer_did)
    for name in SECTIONS:
        index = revocation.allocate()
        if suspension.allocate() != index:
            raise StatusListFull("status list index spaces diverged")
        sections[name]["sStatus"] = {
            "statusPurpose": "Revocation",
            "statusListCredential": revocation.uri,
            "statusListIndex": index,
        }
    _validate_sections(sections)

    nonce = world.rng.randbytes(32)
    cred_id = "did:xrwa:" + digest(
        b"xrwa/credid/v1" + nonce + issuer_did.encode() + sections["asset"]["assetId"].encode()
    ).hex()

    issued = world.config.current_date + "T00:00:00Z"
    year = int(world.config.current_date[:4])
    expires = f"{year + 1}{world.config.current_date[4:]}T00:00:00Z"

    hashes = {
        name: section_hash_from_digests(section_field_digests(name, sections[name], nonce))
        for name in SECTIONS
    }
    proofs = {}
    for name in SECTIONS:
        message = _proof_message(
            cred_id, name, hashes[name], issuer_did, issued, expires, key_version
        )
        proofs[name] = SectionProof(
            issuer=issuer_did,
            issued=issued,
            expires=expires,
            section_hash=hashes[name],
            proof_value=sign(issuer.sk, message),
            issuer_key_version=key_version,
        )
    holder_hex = canonical.to_hex(req.holder_pk)
    top = top_hash(hashes)
    top_message = _proof_message(
        cred_id, "top", top, issuer_did, issued, expires, key_version, holder_pk_hex=holder_hex
    )
    top_proof = SectionProof(
        issuer=issuer_did,
        issued=issued,
        expires=expires,
        section_hash=top,
        proof_value=sign(issuer.sk, top_message),
        issuer_key_version=key_version,
    )
    return CompositeCredential(
        id=cred_id,
        holder_pk=req.holder_pk,
        disclosure_nonce=nonce,
        sections=sections,
        section_proofs=proofs,
        top_proof=top_proof,
    )


# ------------------------------------------------------------ presentation --

@dataclass(frozen=True)
class Presentation:
    credential_id: str
    holder_pk: bytes
    issuer: str
    disclosed: dict[str, Any]
    field_salts: dict[str, bytes]
    section_digests: dict[str, dict[str, bytes]]
    section_hashes: dict[str, bytes]
    top_proof: SectionProof
    holder_sig: bytes

    def body_json(self) -> dict:
        return {
            "credentialId": self.credential_id,
            "holderPk": canonical.to_hex(self.holder_pk),
            "issuer": self.issuer,
            "disclosed": self.disclosed,
            "fieldSalts": {k: canonical.to_hex(v) for k, v in self.field_salts.items()},
            "sectionDigests": {
                sec: {k: canonical.to_hex(v) for k, v in digests.items()}
                for sec, digests in self.section_digests.items()
            },
            "sectionHashes": {k: canonical.to_hex(v) for k, v in self.section_hashes.items()},
            "proof": self.top_proof.to_json(),
        }

    def to_json(self) -> dict:
        out = self.body_json()
        out["holderSignature"] = canonical.to_hex(self.holder_sig)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Presentation":
        return cls(
            credential_id=data["credentialId"],
            holder_pk=canonical.from_hex(data["holderPk"]),
            issuer=data["issuer"],
            disclosed=data["disclosed"],
            field_salts={k: canonical.from_hex(v) for k, v in data["fieldSalts"].items()},
            section_digests={
                sec: {k: canonical.from_hex(v) for k, v in digests.items()}
                for sec, digests in data["sectionDigests"].items()
            },
            section_hashes={k: canonical.from_hex(v) for k, v in data["sectionHashes"].items()},
            top_proof=SectionProof.from_json(data["proof"]),
            holder_sig=canonical.from_hex(data["holderSignature"]),
        )

    def serialize(self) -> bytes:
        return canonical.dumps_bytes(self.to_json())


def prove(
    cred: CompositeCredential,
    holder: KeyPair,
    disclosure: Iterable[str],
    current_date: Optional[str] = None,
) -> Presentation:
    """Build a presentation disclosing exactly the selected fields.

    Status metadata rides along: the asset section's sStatus is always
    disclosed (verifiers always consult it), as is the sStatus of any
    section with at least one disclosed field.
    """
    known = set(selectors_of(cred))
    requested = set(disclosure)
    unknown = requested - known
    if unknown:
        raise UnknownSelector(f"no such fields: {sorted(unknown)}")
    if current_date is not None and current_date + "T00:00:00Z" > cred.top_proof.expires:
        raise Expired(f"credential expired {cred.top_proof.expires}")

    effective = set(requested)
    effective.add("asset.sStatus")
    for sel in requested:
        effective.add(sel.split(".", 1)[0] + ".sStatus")

    nonce = cred.disclosure_nonce
    all_digests = {
        name: section_field_digests(name, body, nonce) for name, body in cred.sections.items()
    }
    touched = {sel.split(".", 1)[0] for sel in effective}
    disclosed: dict[str, Any] = {}
    salts: dict[str, bytes] = {}
    for sel in sorted(effective):
        section, key = sel.split(".", 1)
        disclosed[sel] = cred.sections[section][key]
        salts[sel] = field_salt(nonce, sel)

    presentation = Presentation(
        credential_id=cred.id,
        holder_pk=cred.holder_pk,
        issuer=cred.issuer,
        disclosed=disclosed,
        field_salts=salts,
        section_digests={sec: all_digests[sec] for sec in sorted(touched)},
        section_hashes={
            name: section_hash_from_digests(all_digests[name]) for name in SECTIONS
        },
        top_proof=cred.top_proof,
        holder_sig=b"",
    )
    sig = sign(holder.sk, canonical.dumps_bytes(presentation.body_json()))
    return dataclasses.replace(presentation, holder_sig=sig)


# ------------------------------------------------------------ verification --

@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    reason: Optional[str] = None
    detail: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return f"{self.reason}({self.detail})" if self.detail else str(self.reason)


def _fail(reason: str, detail: Optional[str] = None) -> VerifyResult:
    return VerifyResult(ok=False, reason=reason, detail=detail)


def status_clear(
    world: World,
    status_lists: Mapping[str, StatusList],
    status_ref: Mapping[str, Any],
    section: str,
) -> Optional[VerifyResult]:
    rev_uri = status_ref["statusListCredential"]
    index = status_ref["statusListIndex"]
    revocation = status_lists.get(rev_uri)
    if revocation is None:
        return _fail("StatusListMissing", section)
    if not isinstance(index, int) or not 0 <= index < revocation.next_index:
        return _fail("StatusIndexOutOfRange", section)
    if revocation.bit(index):
        return _fail("SectionRevoked", section)
    susp_uri = rev_uri.rsplit(":", 1)[0] + ":suspension"
    suspension = status_lists.get(susp_uri)
    if suspension is not None and suspension.bit(index):
        return _fail("SectionSuspended", section)
    return None


def verify(
    world: World,
    presentation: Presentation,
    status_lists: Optional[Mapping[str, StatusList]] = None,
    issuer_did: Optional[str] = None,
    chain: Optional[str] = None,
) -> VerifyResult:
    """Full presentation verification; False results carry a structured reason.

    Checks, in order: hash consistency of every disclosed field and section,
    the top proof binding, issuer signature and registry status, holder
    signature, status bits of consulted sections (disclosed plus asset), and
    disclosed effective windows against the world's current date.

    Counts as one full credential-signature verification on `chain`.
    """
    world.count_verification(chain)
    if status_lists is None:
        status_lists = world.status_lists

    # field digests of disclosed values must match the committed digests
    for sel, value in presentation.disclosed.items():
        section = sel.split(".", 1)[0]
        digests = presentation.section_digests.get(section)
        if digests is None or sel not in digests:
            return _fail("HashMismatch", sel)
        salt = presentation.field_salts.get(sel)
        if salt is None or field_digest(sel, value, salt) != digests[sel]:
            return _fail("HashMismatch", sel)

    # disclosed sections' hashes must recompute from their digest lists
    for section, digests in presentation.section_digests.items():
        if section_hash_from_digests(digests) != presentation.section_hashes.get(section):
            return _fail("HashMismatch", section)

    if set(presentation.section_hashes) != set(SECTIONS):
        return _fail("HashMismatch", "sectionHashes")
    if top_hash(presentation.section_hashes) != presentation.top_proof.section_hash:
        return _fail("HashMismatch", "top")

    if issuer_did is not None and issuer_did != presentation.issuer:
        return _fail("IssuerMismatch", presentation.issuer)
    if presentation.top_proof.issuer != presentation.issuer:
        return _fail("IssuerMismatch", presentation.top_proof.issuer)
    try:
        head = did_resolve(world, presentation.issuer)
    except NotFound:
        return _fail("IssuerUnknown", presentation.issuer)
    if head.status != "Active":
        return _fail("IssuerDeactivated", presentation.issuer)
    try:
        issuer_doc = resolve_version(
            world, presentation.issuer, presentation.top_proof.issuer_key_version
        )
    except NotFound:
        return _fail("IssuerKeyVersionUnknown", presentation.issuer)

    top_message = _proof_message(
        presentation.credential_id,
        "top",
        presentation.top_proof.section_hash,
        presentation.top_proof.issuer,
        presentation.top_proof.issued,
        presentation.top_proof.expires,
        presentation.top_proof.issuer_key_version,
        holder_pk_hex=canonical.to_hex(presentation.holder_pk),
    )
    if not verify_sig(issuer_doc.controller_pk, top_message, presentation.top_proof.proof_value):
        return _fail("BadIssuerSignature")

    if not verify_sig(
        presentation.holder_pk,
        canonical.dumps_bytes(presentation.body_json()),
        presentation.holder_sig,
    ):
        return _fail("BadHolderSignature")

    now = world.config.current_date
    if presentation.top_proof.expires < now + "T00:00:00Z":
        return _fail("Expired")

    consulted = {sel.split(".", 1)[0] for sel in presentation.disclosed}
    consulted.add("asset")
    for section in sorted(consulted):
        ref = presentation.disclosed.get(f"{section}.sStatus")
        if ref is None:
            return _fail("StatusListMissing", section)
        failure = status_clear(world, status_lists, ref, section)
        if failure is not None:
            return failure

    frm = presentation.disclosed.get("compliance.effectiveFrom")
    to = presentation.disclosed.get("compliance.effectiveTo")
    if frm is not None and now < frm:
        return _fail("OutsideEffectiveWindow", f"not effective until {frm}")
    if to is not None and now > to:
        return _fail("OutsideEffectiveWindow", f"lapsed {to}")

    return VerifyResult(ok=True)


def audit_credential(world: World, cred: CompositeCredential, chain: Optional[str] = None) -> VerifyResult:
    """Verify the full credential in place: all four section proofs, the top
    proof, and every hash recomputation. Counts as one full verification."""
    world.count_verification(chain)
    hashes = cred.section_hashes()
    for name in SECTIONS:
        proof = cred.section_proofs[name]
        if proof.section_hash != hashes[name]:
            return _fail("HashMismatch", name)
        try:
            issuer_doc = resolve_version(world, proof.issuer, proof.issuer_key_version)
        except NotFound:
            return _fail("IssuerUnknown", proof.issuer)
        if proof.issuer != cred.top_proof.issuer:
            return _fail("IssuerMismatch", name)
        message = _proof_message(
            cred.id, name, proof.section_hash, proof.issuer, proof.issued,
            proof.expires, proof.issuer_key_version,
        )
        if not verify_sig(issuer_doc.controller_pk, message, proof.proof_value):
            return _fail("BadIssuerSignature", name)
    if cred.top_proof.section_hash != top_hash(hashes):
        return _fail("HashMismatch", "top")
    try:
        head = did_resolve(world, cred.issuer)
    except NotFound:
        return _fail("IssuerUnknown", cred.issuer)
    if head.status != "Active":
        return _fail("IssuerDeactivated", cred.issuer)
    issuer_doc = resolve_version(world, cred.issuer, cred.top_proof.issuer_key_version)
    top_message = _proof_message(
        cred.id, "top", cred.top_proof.section_hash, cred.top_proof.issuer,
        cred.top_proof.issued, cred.top_proof.expires,
        cred.top_proof.issuer_key_version,
        holder_pk_hex=canonical.to_hex(cred.holder_pk),
    )
    if not verify_sig(issuer_doc.controller_pk, top_message, cred.top_proof.proof_value):
        return _fail("BadIssuerSignature", "top")
    return VerifyResult(ok=True)


# -------------------------------------------------------------- revocation --

def _owned_list(world: World, status_list: StatusList | str, issuer: KeyPair) -> StatusList:
    sl = world.status_lists.get(status_list) if isinstance(status_list, str) else status_list
    if sl is None:
        raise NotFound(f"no status list {status_list!r}")
    owner_did = world.controller_index.get(canonical.to_hex(issuer.pk))
    if owner_did is None:
        raise BadSignature("key controls no active did")
    if owner_did != sl.issuer:
        raise NotOwner(f"{owner_did} does not own {sl.uri}")
    return sl


def revoke(
    world: World,
    status_list: StatusList | str,
    cred: CompositeCredential,
    section: str,
    issuer: KeyPair,
) -> StatusList:
    """Set the targeted section's bit in the given list (idempotent on the
    bit; the list version still increments)."""
    sl = _owned_list(world, status_list, issuer)
    index = cred.status_ref(section)["statusListIndex"]
    sl.set_bit(index)
    world.log_op(
        world.config.chains[0], "revoke",
        descriptor={"list": sl.uri, "index": index, "v": sl.version},
    )
    return sl


def reinstate(
    world: World,
    status_list: StatusList | str,
    cred: CompositeCredential,
    section: str,
    issuer: KeyPair,
) -> StatusList:
    """Clear a suspension bit; rejected for revocation lists."""
    sl = _owned_list(world, status_list, issuer)
    index = cred.status_ref(section)["statusListIndex"]
    sl.clear_bit(index)
    world.log_op(
        world.config.chains[0], "reinstate",
        descriptor={"list": sl.uri, "index": index, "v": sl.version},
    )
    return sl
