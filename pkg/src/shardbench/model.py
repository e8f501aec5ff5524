"""Username alphabet, validation, and the shared placement vocabulary."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyName, InvalidCharacter, TooLong

ALPHABET = "0123456789abcdefghijklmnopqrstuvwxyz_"
ALPHABET_SIZE = len(ALPHABET)  # 37
MAX_USERNAME_LENGTH = 64

_CHAR_INDEX = {c: i for i, c in enumerate(ALPHABET)}


class Username(str):
    """A validated name: 1..=64 characters, each from the 37-char alphabet.

    Construction validates but does not normalize; use normalize_username()
    to fold case and trim whitespace first.
    """

    __slots__ = ()

    def __new__(cls, value: str) -> "Username":
        if not value:
            raise EmptyName("username is empty")
        if len(value) > MAX_USERNAME_LENGTH:
            raise TooLong(f"username has {len(value)} characters, max {MAX_USERNAME_LENGTH}")
        for position, char in enumerate(value):
            if char not in _CHAR_INDEX:
                raise InvalidCharacter(char, position)
        return super().__new__(cls, value)


def normalize_username(raw: str) -> Username:
    """Trim surrounding whitespace, fold ASCII case, and validate.

    Out-of-alphabet characters are rejected rather than stripped; stripping
    would let distinct raw names collapse to the same Username.
    """
    trimmed = raw.strip()
    if not trimmed:
        raise EmptyName("name is empty after trimming whitespace")
    folded = "".join(
        chr(ord(c) + 32) if "A" <= c <= "Z" else c for c in trimmed
    )
    return Username(folded)


def char_index(c: str) -> int:
    """Map an alphabet character to its index: '0'-'9' to 0-9, 'a'-'z' to 10-35, '_' to 36."""
    try:
        return _CHAR_INDEX[c]
    except KeyError:
        raise InvalidCharacter(c, 0) from None


def index_to_char(index: int) -> str:
    """Inverse of char_index; exists for testing, not part of the placement API."""
    if not 0 <= index < ALPHABET_SIZE:
        raise ValueError(f"index {index} outside 0..{ALPHABET_SIZE - 1}")
    return ALPHABET[index]


@dataclass(frozen=True, slots=True)
class Placement:
    """Per-level bucket assignments: one (bucket_index, modulus) pair per level."""

    levels: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        for bucket, modulus in self.levels:
            if modulus < 1:
                raise ValueError(f"modulus {modulus} must be positive")
            if not 0 <= bucket < modulus:
                raise ValueError(f"bucket {bucket} outside 0..{modulus - 1}")

    @property
    def depth(self) -> int:
        return len(self.levels)

    def bucket(self, level: int) -> int:
        return self.levels[level][0]

    def modulus(self, level: int) -> int:
        return self.levels[level][1]
