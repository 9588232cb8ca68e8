"""LEB128 unsigned varints for the on-disk format."""
from __future__ import annotations


class Writer:
    def __init__(self):
        self._buf = bytearray()

    def uint(self, x: int) -> None:
        if x < 0:
            raise ValueError("varints are unsigned")
        buf = self._buf
        while x >= 0x80:
            buf.append((x & 0x7F) | 0x80)
            x >>= 7
        buf.append(x)

    def raw(self, data: bytes) -> None:
        self.uint(len(data))
        self._buf += data

    def getvalue(self) -> bytes:
        return bytes(self._buf)


class Reader:
    def __init__(self, data: bytes, pos: int = 0):
        self.data = data
        self.pos = pos

    def uint(self) -> int:
        x = shift = 0
        data = self.data
        while True:
            if self.pos >= len(data):
                raise ValueError("truncated varint")
            b = data[self.pos]
            self.pos += 1
            x |= (b & 0x7F) << shift
            if b < 0x80:
                return x
            shift += 7

    def raw(self) -> bytes:
        n = self.uint()
        if self.pos + n > len(self.data):
            raise ValueError("truncated byte string")
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return bytes(out)

    def expect_end(self) -> None:
        if self.pos != len(self.data):
            raise ValueError(f"{len(self.data) - self.pos} trailing bytes")
