"""LSB-first bit stream helpers with separate payload/framing accounting."""

from __future__ import annotations


class BitWriter:
    def __init__(self):
        self.buf = bytearray()
        self.cur = 0
        self.curbits = 0
        self.payload_bits = 0
        self.framing_bits = 0

    def _push(self, value: int, width: int):
        if width == 0:
            return
        if value < 0 or value >> width:
            raise ValueError(f"value {value} does not fit {width} bits")
        cur = self.cur | (value << self.curbits)
        bits = self.curbits + width
        if bits >= 8:
            nbytes = bits >> 3
            self.buf += (cur & ((1 << (nbytes * 8)) - 1)).to_bytes(nbytes, "little")
            cur >>= nbytes * 8
            bits &= 7
        self.cur = cur
        self.curbits = bits

    def write(self, value: int, width: int):
        self.payload_bits += width
        self._push(value, width)

    def write_fields(self, fields):
        """Compose many (value, width) payload fields into one push."""
        acc = 0
        off = 0
        for value, width in fields:
            if value < 0 or value >> width:
                raise ValueError(f"value {value} does not fit {width} bits")
            acc |= value << off
            off += width
        self.payload_bits += off
        self._push(acc, off)

    def write_framing(self, value: int, width: int):
        self.framing_bits += width
        self._push(value, width)

    def write_flag(self, flag: bool):
        self.write(1 if flag else 0, 1)

    def getvalue(self) -> bytes:
        out = bytes(self.buf)
        if self.curbits:
            out += bytes([self.cur & 0xFF])
        return out

    @property
    def total_bits(self) -> int:
        return self.payload_bits + self.framing_bits


class BitReader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def read(self, width: int) -> int:
        if width == 0:
            return 0
        out = 0
        got = 0
        while got < width:
            byte_i, bit_i = divmod(self.pos, 8)
            take = min(8 - bit_i, width - got)
            chunk = (self.data[byte_i] >> bit_i) & ((1 << take) - 1)
            out |= chunk << got
            got += take
            self.pos += take
        return out

    def read_flag(self) -> bool:
        return bool(self.read(1))
