"""The four placement algorithms: letter, ascii-sum, counter mapping, md5."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .errors import NothingToSum
from .model import Placement, Username, char_index

_HEX_CHARS = set("0123456789abcdef")


@dataclass(frozen=True, slots=True)
class LetterConfig:
    """Letter expansion: one directory level per leading character, up to six."""

    levels: int = 6

    def __post_init__(self) -> None:
        if not 1 <= self.levels <= 6:
            raise ValueError(f"levels must be in 1..6, got {self.levels}")

    @property
    def level_moduli(self) -> tuple[int, ...]:
        return (37,) * self.levels


@dataclass(frozen=True, slots=True)
class AsciiSumConfig:
    """ASCII-sum modulo: level k sums bytes after dropping the first k characters."""

    level_moduli: tuple[int, ...] = (31, 33)

    def __post_init__(self) -> None:
        if not self.level_moduli:
            raise ValueError("level_moduli must not be empty")
        # Modulus 1 is degenerate (every name lands in bucket 0) but legal.
        for m in self.level_moduli:
            if m < 1:
                raise ValueError(f"modulus {m} must be positive")
        object.__setattr__(self, "level_moduli", tuple(self.level_moduli))


@dataclass(frozen=True, slots=True)
class MappingConfig:
    """Counter mapping: fixed-size buckets of sequential IDs, round-robin to servers."""

    bucket_size: int
    num_servers: int

    def __post_init__(self) -> None:
        if self.bucket_size < 1:
            raise ValueError(f"bucket_size must be >= 1, got {self.bucket_size}")
        if self.num_servers < 1:
            raise ValueError(f"num_servers must be >= 1, got {self.num_servers}")


@dataclass(frozen=True, slots=True)
class Md5Config:
    """Multi-level MD5: level k consumes the hex pair at positions (2k, 2k+1)."""

    level_moduli: tuple[int, ...] = (64, 64, 128)

    def __post_init__(self) -> None:
        if not self.level_moduli:
            raise ValueError("level_moduli must not be empty")
        if len(self.level_moduli) > 16:
            raise ValueError("a digest has 32 hex characters: at most 16 levels")
        # A hex pair spans 0..255, so a modulus above 256 can never fill.
        for m in self.level_moduli:
            if not 2 <= m <= 256:
                raise ValueError(f"modulus {m} outside 2..256")
        object.__setattr__(self, "level_moduli", tuple(self.level_moduli))


class HexDigest(str):
    """Exactly 32 lowercase hexadecimal characters."""

    __slots__ = ()

    def __new__(cls, hex_chars: str) -> "HexDigest":
        if len(hex_chars) != 32:
            raise ValueError(f"digest must be 32 hex characters, got {len(hex_chars)}")
        if not set(hex_chars) <= _HEX_CHARS:
            raise ValueError("digest must be lowercase hexadecimal")
        return super().__new__(cls, hex_chars)


def letter_placement(u: Username, cfg: LetterConfig = LetterConfig()) -> Placement:
    """Bucket by successive characters; depth truncates to the name length."""
    depth = min(cfg.levels, len(u))
    return Placement(tuple((char_index(c), 37) for c in u[:depth]))


def ascii_sum(u: Username, drop: int = 0) -> int:
    """Sum the byte values of the characters at positions drop..len(u)."""
    if drop >= len(u):
        raise NothingToSum(f"drop {drop} leaves no characters of {len(u)}")
    return sum(u.encode("ascii")[drop:])


def ascii_sum_placement(u: Username, cfg: AsciiSumConfig = AsciiSumConfig()) -> Placement:
    """Level k buckets ascii_sum(u, k) mod level_moduli[k].

    Depth is min(len(u), len(level_moduli)) so every level sums at least
    one character; short names truncate rather than summing nothing.
    """
    depth = min(len(u), len(cfg.level_moduli))
    return Placement(
        tuple(
            (ascii_sum(u, k) % cfg.level_moduli[k], cfg.level_moduli[k])
            for k in range(depth)
        )
    )


def counter_placement(member_id: int, cfg: MappingConfig) -> tuple[int, int]:
    """Map a 1-based counter ID to (bucket, server).

    Bucket b holds IDs b*S+1 ..= (b+1)*S; consecutive buckets round-robin
    across servers, so within one bucket every ID shares a server.
    """
    if member_id < 1:
        raise ValueError(f"member_id must be >= 1, got {member_id}")
    bucket = (member_id - 1) // cfg.bucket_size
    return bucket, bucket % cfg.num_servers


def md5_digest(u: Username) -> HexDigest:
    """MD5 of the newline-terminated name, as 32 lowercase hex characters.

    The trailing newline matches `echo name | md5sum` output, the form the
    worked placement examples are pinned to; md5_hex() digests raw bytes.
    """
    return HexDigest(hashlib.md5(u.encode("ascii") + b"\n").hexdigest())


def md5_hex(data: bytes) -> HexDigest:
    """The digest core: MD5 of exactly the given bytes."""
    return HexDigest(hashlib.md5(data).hexdigest())


def hex_pair_value(d: HexDigest, pair_index: int) -> int:
    """Interpret hex characters at positions (2k, 2k+1) as one 0..255 integer."""
    if not 0 <= pair_index <= 15:
        raise ValueError(f"pair_index {pair_index} outside 0..15")
    return int(d[2 * pair_index : 2 * pair_index + 2], 16)


def placement_from_digest(d: HexDigest, cfg: Md5Config) -> Placement:
    """Bucket each configured level by its hex pair mod the level modulus."""
    return Placement(
        tuple(
            (hex_pair_value(d, k) % m, m)
            for k, m in enumerate(cfg.level_moduli)
        )
    )


def md5_placement(u: Username, cfg: Md5Config = Md5Config()) -> Placement:
    """Digest the name and bucket each level by its hex pair mod the modulus."""
    return placement_from_digest(md5_digest(u), cfg)
