"""Small shared helpers."""

import hashlib


def derive_seed(base: int, *tags) -> int:
    """Derive a child seed from a base seed and a sequence of tags.

    Stable across processes and platforms, so every consumer of the same
    (base, tags) gets the same stream.
    """
    material = ":".join([str(base)] + [str(t) for t in tags])
    digest = hashlib.sha256(material.encode("utf-8")).digest()
    # fits everything downstream, including 32-bit RandomState seeds
    return int.from_bytes(digest[:4], "big")


def short_digest(text: str, length: int = 12) -> str:
    """First `length` hex chars of the sha256 of `text`."""
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:length]
