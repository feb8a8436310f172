"""Bitmask helpers for coalitions.

Players are 0-based bit positions; a coalition is an int whose set bits are
its members. All enumeration-heavy code in the package works on these masks.
"""

from typing import Iterator


def coalition(*players: int) -> int:
    mask = 0
    for p in players:
        mask |= 1 << p
    return mask


def members(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def submasks(mask: int) -> Iterator[int]:
    """Yield every submask of ``mask`` in decreasing order, ending with 0."""
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask
