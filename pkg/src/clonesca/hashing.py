"""64-bit FNV-1a, the digest primitive used throughout.

The exact byte layout is part of the index file contract: feature
hashes must be reproducible bit-for-bit by any other implementation.
"""

from __future__ import annotations

from dataclasses import dataclass

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
_MASK = 0xFFFFFFFFFFFFFFFF


def fnv1a64(data: bytes) -> int:
    h = FNV_OFFSET
    for b in data:
        h ^= b
        h = (h * FNV_PRIME) & _MASK
    return h


@dataclass(frozen=True, order=True)
class FeatureHash:
    """A 64-bit digest with its canonical 16-char lowercase hex form."""

    value: int

    def __post_init__(self) -> None:
        if not 0 <= self.value <= _MASK:
            raise ValueError(f"hash out of 64-bit range: {self.value}")

    @property
    def hex(self) -> str:
        return f"{self.value:016x}"

    @classmethod
    def from_hex(cls, text: str) -> "FeatureHash":
        if len(text) != 16:
            raise ValueError(f"expected 16 hex chars, got {text!r}")
        return cls(int(text, 16))

    def __str__(self) -> str:
        return self.hex
