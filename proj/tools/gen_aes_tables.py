#!/usr/bin/env python3
"""Emits the .data tables (S-box, xtime, rcon) used by data/aes128.s."""


def gmul(a, b):
    p = 0
    for _ in range(8):
        if b & 1:
            p ^= a
        hi = a & 0x80
        a = (a << 1) & 0xFF
        if hi:
            a ^= 0x1B
        b >>= 1
    return p


def sbox():
    inv = [0] * 256
    for x in range(1, 256):
        for y in range(1, 256):
            if gmul(x, y) == 1:
                inv[x] = y
                break
    out = []
    for x in range(256):
        b = inv[x]
        s = b
        for i in range(1, 5):
            s ^= ((b << i) | (b >> (8 - i))) & 0xFF
        out.append(s ^ 0x63)
    return out


def table(name, values):
    lines = [f"{name}:"]
    for i in range(0, len(values), 16):
        lines.append("    .byte " + ", ".join(f"0x{v:02x}" for v in values[i:i + 16]))
    return "\n".join(lines)


if __name__ == "__main__":
    print(table("sbox", sbox()))
    print(table("xtime", [gmul(x, 2) for x in range(256)]))
    print(table("rcon", [0x00, 0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40, 0x80, 0x1B, 0x36, 0, 0, 0, 0, 0]))
