"""Vertex sets as Python int bitsets (bit i set <=> vertex i in the set)"""
from typing import Iterable, Iterator


def mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit indices of mask in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


def to_tuple(mask: int) -> tuple[int, ...]:
    return tuple(bits(mask))


def union_of(masks: tuple[int, ...], mask: int) -> int:
    """OR of masks[v] over every v in mask."""
    out = 0
    for v in bits(mask):
        out |= masks[v]
    return out
