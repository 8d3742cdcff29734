"""AES-128/192/256 reference implementation plus a vectorized batch path.

The S-box is computed at import time from GF(2^8) inversion followed by
the fixed affine transform, never transcribed. The scalar functions below
are the reference path (state = 16 bytes, column-major: byte i holds row
i % 4 of column i // 4); ``AesBlockCipher`` adds a table-driven numpy path
for bulk work, equivalence-tested against the reference.
"""

from __future__ import annotations

import numpy as np

AES_POLY = 0x11B  # x^8 + x^4 + x^3 + x + 1
NUM_ROUNDS_BY_KEY_BYTES = {16: 10, 24: 12, 32: 14}


def gf_mul(a: int, b: int) -> int:
    """Multiply two bytes in GF(2^8) modulo the AES polynomial."""
    p = 0
    for _ in range(8):
        if b & 1:
            p ^= a
        carry = a & 0x80
        a = (a << 1) & 0xFF
        if carry:
            a ^= AES_POLY & 0xFF
        b >>= 1
    return p


def gf_pow(a: int, e: int) -> int:
    out = 1
    base = a
    while e:
        if e & 1:
            out = gf_mul(out, base)
        base = gf_mul(base, base)
        e >>= 1
    return out


def gf_inv(a: int) -> int:
    """Multiplicative inverse (0 maps to 0, as the S-box construction wants)."""
    return gf_pow(a, 254) if a else 0


def _rotl8(x: int, s: int) -> int:
    return ((x << s) | (x >> (8 - s))) & 0xFF


def _build_sbox() -> bytes:
    out = bytearray(256)
    for x in range(256):
        inv = gf_inv(x)
        out[x] = (
            inv
            ^ _rotl8(inv, 1)
            ^ _rotl8(inv, 2)
            ^ _rotl8(inv, 3)
            ^ _rotl8(inv, 4)
            ^ 0x63
        )
    return bytes(out)


SBOX = _build_sbox()
INV_SBOX = bytes(SBOX.index(x) for x in range(256))

# Product tables for the mix-columns coefficients, derived from gf_mul.
_MUL = {c: bytes(gf_mul(x, c) for x in range(256)) for c in (2, 3, 9, 11, 13, 14)}


def _build_rcon() -> tuple[int, ...]:
    out = []
    r = 1
    for _ in range(10):
        out.append(r)
        r = gf_mul(r, 2)
    return tuple(out)


RCON = _build_rcon()


def sub_bytes(state: bytes) -> bytes:
    return bytes(SBOX[b] for b in state)


def inv_sub_bytes(state: bytes) -> bytes:
    return bytes(INV_SBOX[b] for b in state)


def shift_rows(state: bytes) -> bytes:
    """Rotate row r left by r positions."""
    out = bytearray(16)
    for c in range(4):
        for r in range(4):
            out[r + 4 * c] = state[r + 4 * ((c + r) % 4)]
    return bytes(out)


def inv_shift_rows(state: bytes) -> bytes:
    out = bytearray(16)
    for c in range(4):
        for r in range(4):
            out[r + 4 * c] = state[r + 4 * ((c - r) % 4)]
    return bytes(out)


def mix_columns(state: bytes) -> bytes:
    """Multiply each column by the fixed circulant matrix over GF(2^8)."""
    m2, m3 = _MUL[2], _MUL[3]
    out = bytearray(16)
    for c in range(0, 16, 4):
        a0, a1, a2, a3 = state[c : c + 4]
        out[c] = m2[a0] ^ m3[a1] ^ a2 ^ a3
        out[c + 1] = a0 ^ m2[a1] ^ m3[a2] ^ a3
        out[c + 2] = a0 ^ a1 ^ m2[a2] ^ m3[a3]
        out[c + 3] = m3[a0] ^ a1 ^ a2 ^ m2[a3]
    return bytes(out)


def inv_mix_columns(state: bytes) -> bytes:
    m9, m11, m13, m14 = _MUL[9], _MUL[11], _MUL[13], _MUL[14]
    out = bytearray(16)
    for c in range(0, 16, 4):
        a0, a1, a2, a3 = state[c : c + 4]
        out[c] = m14[a0] ^ m11[a1] ^ m13[a2] ^ m9[a3]
        out[c + 1] = m9[a0] ^ m14[a1] ^ m11[a2] ^ m13[a3]
        out[c + 2] = m13[a0] ^ m9[a1] ^ m14[a2] ^ m11[a3]
        out[c + 3] = m11[a0] ^ m13[a1] ^ m9[a2] ^ m14[a3]
    return bytes(out)


def add_round_key(state: bytes, round_key: bytes) -> bytes:
    if len(round_key) != 16:
        raise ValueError(f"round key must be 16 bytes, got {len(round_key)}")
    return bytes(s ^ k for s, k in zip(state, round_key))


def key_expansion(key: bytes) -> tuple[bytes, ...]:
    """Expand raw key material into the per-round keys (always 16 bytes each)."""
    if len(key) not in NUM_ROUNDS_BY_KEY_BYTES:
        raise ValueError(f"key must be 16, 24, or 32 bytes, got {len(key)}")
    nk = len(key) // 4
    nr = NUM_ROUNDS_BY_KEY_BYTES[len(key)]
    words = [list(key[4 * i : 4 * i + 4]) for i in range(nk)]
    for i in range(nk, 4 * (nr + 1)):
        temp = list(words[i - 1])
        if i % nk == 0:
            temp = temp[1:] + temp[:1]
            temp = [SBOX[b] for b in temp]
            temp[0] ^= RCON[i // nk - 1]
        elif nk > 6 and i % nk == 4:
            temp = [SBOX[b] for b in temp]
        words.append([w ^ t for w, t in zip(words[i - nk], temp)])
    flat = bytes(b for w in words for b in w)
    return tuple(flat[16 * r : 16 * r + 16] for r in range(nr + 1))


def _round_keys(key) -> tuple[bytes, ...]:
    if isinstance(key, tuple):
        return key
    return key_expansion(key)


def aes_encrypt_block(block: bytes, key) -> bytes:
    """Encrypt one 16-byte block; ``key`` is raw bytes or expanded round keys."""
    if len(block) != 16:
        raise ValueError(f"block must be 16 bytes, got {len(block)}")
    rks = _round_keys(key)
    nr = len(rks) - 1
    state = add_round_key(bytes(block), rks[0])
    for rnd in range(1, nr):
        state = add_round_key(mix_columns(shift_rows(sub_bytes(state))), rks[rnd])
    state = add_round_key(shift_rows(sub_bytes(state)), rks[nr])
    return state


def aes_decrypt_block(block: bytes, key) -> bytes:
    """Inverse of ``aes_encrypt_block``; round keys applied in reverse order."""
    if len(block) != 16:
        raise ValueError(f"block must be 16 bytes, got {len(block)}")
    rks = _round_keys(key)
    nr = len(rks) - 1
    state = add_round_key(bytes(block), rks[nr])
    for rnd in range(nr - 1, 0, -1):
        state = inv_mix_columns(add_round_key(inv_sub_bytes(inv_shift_rows(state)), rks[rnd]))
    state = add_round_key(inv_sub_bytes(inv_shift_rows(state)), rks[0])
    return state


# ----------------------------------------------------------------------
# Batch path: blocks as (n, 16) uint8 arrays, S-box gathers and product
# tables vectorized over every block at once.

_SBOX_NP = np.frombuffer(SBOX, dtype=np.uint8)
_INV_SBOX_NP = np.frombuffer(INV_SBOX, dtype=np.uint8)
_MUL_NP = {c: np.frombuffer(t, dtype=np.uint8) for c, t in _MUL.items()}
_SHIFT_IDX = np.array([(i % 4) + 4 * (((i // 4) + (i % 4)) % 4) for i in range(16)])
_INV_SHIFT_IDX = np.array([(i % 4) + 4 * (((i // 4) - (i % 4)) % 4) for i in range(16)])


def _np_mix_columns(state: np.ndarray) -> np.ndarray:
    s = state.reshape(-1, 4, 4)
    m2, m3 = _MUL_NP[2], _MUL_NP[3]
    out = np.empty_like(s)
    a0, a1, a2, a3 = s[:, :, 0], s[:, :, 1], s[:, :, 2], s[:, :, 3]
    out[:, :, 0] = m2[a0] ^ m3[a1] ^ a2 ^ a3
    out[:, :, 1] = a0 ^ m2[a1] ^ m3[a2] ^ a3
    out[:, :, 2] = a0 ^ a1 ^ m2[a2] ^ m3[a3]
    out[:, :, 3] = m3[a0] ^ a1 ^ a2 ^ m2[a3]
    return out.reshape(state.shape)


def _np_inv_mix_columns(state: np.ndarray) -> np.ndarray:
    s = state.reshape(-1, 4, 4)
    m9, m11, m13, m14 = _MUL_NP[9], _MUL_NP[11], _MUL_NP[13], _MUL_NP[14]
    out = np.empty_like(s)
    a0, a1, a2, a3 = s[:, :, 0], s[:, :, 1], s[:, :, 2], s[:, :, 3]
    out[:, :, 0] = m14[a0] ^ m11[a1] ^ m13[a2] ^ m9[a3]
    out[:, :, 1] = m9[a0] ^ m14[a1] ^ m11[a2] ^ m13[a3]
    out[:, :, 2] = m13[a0] ^ m9[a1] ^ m14[a2] ^ m11[a3]
    out[:, :, 3] = m11[a0] ^ m13[a1] ^ m9[a2] ^ m14[a3]
    return out.reshape(state.shape)


class AesBlockCipher:
    """Stream-facing wrapper with the same surface as the PCA cipher."""

    scheme = "aes"
    block_size = 16

    def __init__(self, key_bytes: bytes):
        self.round_keys = key_expansion(key_bytes)
        self._raw = bytes(key_bytes)
        self._rk_np = [np.frombuffer(rk, dtype=np.uint8) for rk in self.round_keys]

    @property
    def spec_args(self) -> tuple:
        return (self.scheme, self._raw, {})

    def encrypt_block_bytes(self, block: bytes) -> bytes:
        return aes_encrypt_block(block, self.round_keys)

    def decrypt_block_bytes(self, block: bytes) -> bytes:
        return aes_decrypt_block(block, self.round_keys)

    def encrypt_blocks(self, blocks: np.ndarray) -> np.ndarray:
        nr = len(self.round_keys) - 1
        state = blocks ^ self._rk_np[0]
        for rnd in range(1, nr):
            state = _SBOX_NP[state][:, _SHIFT_IDX]
            state = _np_mix_columns(state) ^ self._rk_np[rnd]
        state = _SBOX_NP[state][:, _SHIFT_IDX] ^ self._rk_np[nr]
        return state

    def decrypt_blocks(self, blocks: np.ndarray) -> np.ndarray:
        nr = len(self.round_keys) - 1
        state = blocks ^ self._rk_np[nr]
        for rnd in range(nr - 1, 0, -1):
            state = _INV_SBOX_NP[state[:, _INV_SHIFT_IDX]] ^ self._rk_np[rnd]
            state = _np_inv_mix_columns(state)
        state = _INV_SBOX_NP[state[:, _INV_SHIFT_IDX]] ^ self._rk_np[0]
        return state
