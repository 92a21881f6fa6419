"""Canonical JSON encoding used for every hashed or signed artifact.

One encoding everywhere: UTF-8, sorted keys, no insignificant whitespace.
Two canonical serializations of equal values are byte-identical, so digests
and signatures over canonical bytes are stable across runs and platforms.
"""

from __future__ import annotations

import json
from typing import Any

__all__ = ["dumps", "dumps_bytes", "loads", "to_hex", "from_hex"]


def dumps(value: Any) -> str:
    """Canonical JSON text: sorted keys, compact separators, raw UTF-8."""
    return json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def dumps_bytes(value: Any) -> bytes:
    return dumps(value).encode("utf-8")


def loads(data: str | bytes) -> Any:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return json.loads(data)


def to_hex(raw: bytes) -> str:
    """Lowercase 0x-prefixed hex, the wire form of digests, keys and signatures."""
    return "0x" + raw.hex()


def from_hex(text: str) -> bytes:
    if not isinstance(text, str) or not text.startswith("0x"):
        raise ValueError(f"expected 0x-prefixed hex string, got {text!r}")
    return bytes.fromhex(text[2:])
