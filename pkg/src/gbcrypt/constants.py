"""Deterministic pseudo-random field elements from a seed.

Value j of stream ``label`` is SHA-256(seed || b"/" || label || j as 8-byte
big endian) read as a big-endian integer and reduced mod q.  The 256-bit
digest makes the modular bias negligible for every supported q.
"""

from __future__ import annotations

import hashlib
from typing import Iterator

DEFAULT_SEED = b"gbcrypt-default"


def as_seed(seed: bytes | str | int) -> bytes:
    if isinstance(seed, bytes):
        return seed
    return str(seed).encode()


def field_stream(seed: bytes | str | int, label: bytes, q: int) -> Iterator[int]:
    seed = as_seed(seed)
    j = 0
    while True:
        digest = hashlib.sha256(seed + b"/" + label + j.to_bytes(8, "big")).digest()
        yield int.from_bytes(digest, "big") % q
        j += 1
