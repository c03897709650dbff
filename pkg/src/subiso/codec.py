"""Byte serialization of configuration lists.

Record stream layout, little-endian base-128 varints (7 payload bits per
byte, high bit set on continuation bytes):

    per entry: bag_size varints  -- target vertex ids in bag order
               varint k >= 1     -- number of color sets
               k varints         -- first color-set mask raw, each following
                                    value the difference to the previous mask
                                    (strictly positive; sets are stored in
                                    ascending mask order)

Entries are concatenated; the list length is implied by the buffer end.
"""

from __future__ import annotations

_SEVEN = 0x7F
_CONT = 0x80


class CodecError(ValueError):
    """Corrupt or truncated buffer; remembers the failing byte offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte offset {offset}")
        self.offset = offset


def compress(entries) -> bytes:
    """Serialize (mapping, colorsets) pairs; colorsets must be ascending."""
    buf = bytearray()
    append = buf.append
    for mapping, colorsets in entries:
        for value in mapping:
            while value > _SEVEN:
                append(value & _SEVEN | _CONT)
                value >>= 7
            append(value)
        value = len(colorsets)
        if value == 0:
            raise ValueError("entry with empty color-set list")
        while value > _SEVEN:
            append(value & _SEVEN | _CONT)
            value >>= 7
        append(value)
        previous = -1
        for mask in colorsets:
            if mask <= previous:
                raise ValueError("color sets not strictly ascending")
            value = mask if previous < 0 else mask - previous
            previous = mask
            while value > _SEVEN:
                append(value & _SEVEN | _CONT)
                value >>= 7
            append(value)
    return bytes(buf)


def decompress(buf: bytes, bag_size: int) -> list[tuple[tuple[int, ...], list[int]]]:
    """Inverse of :func:`compress` for a known bag size."""
    entries = []
    pos = 0
    end = len(buf)
    while pos < end:
        start = pos
        mapping = []
        for _ in range(bag_size):
            value, pos = _read_varint(buf, pos, end)
            mapping.append(value)
        count, pos = _read_varint(buf, pos, end)
        if count < 1:
            raise CodecError("color-set count must be at least 1", start)
        first, pos = _read_varint(buf, pos, end)
        colorsets = [first]
        for _ in range(count - 1):
            at = pos
            delta, pos = _read_varint(buf, pos, end)
            if delta <= 0:
                raise CodecError("color-set delta must be positive", at)
            colorsets.append(colorsets[-1] + delta)
        entries.append((tuple(mapping), colorsets))
    return entries


def _read_varint(buf: bytes, pos: int, end: int) -> tuple[int, int]:
    result = 0
    shift = 0
    start = pos
    while True:
        if pos >= end:
            raise CodecError("truncated varint", start)
        byte = buf[pos]
        pos += 1
        result |= (byte & _SEVEN) << shift
        if not byte & _CONT:
            return result, pos
        shift += 7
        if shift > 63:
            raise CodecError("varint too long", start)
