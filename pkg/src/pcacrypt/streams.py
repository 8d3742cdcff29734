"""Padded ECB and counter-mode streaming over 16-byte block ciphers.

Blocks have no cross-block state in either mode, so payloads are cut into
contiguous block-aligned chunks and farmed out to worker processes; the
ordered reassembly makes the output bit-identical for any worker count.

ECB always pads (every pad byte equals the pad length, 1..16, with a full
extra block when the payload is already aligned). CTR keeps the payload
length and prepends a 16-byte header holding an 8-byte nonce and the
initial counter; the nonce is derived deterministically from the key and a
checksum of the plaintext, so identical inputs produce identical output.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .aes import AesBlockCipher
from .cipher import PcaBlockCipher

BLOCK = 16
MODES = ("ecb", "ctr")


class CorruptCiphertextError(ValueError):
    """Ciphertext that cannot have been produced by these routines."""


def make_cipher(scheme: str, key_bytes: bytes, **options):
    if scheme == "pca":
        return PcaBlockCipher(key_bytes, **options)
    if scheme == "aes":
        return AesBlockCipher(key_bytes, **options)
    raise ValueError(f"unknown scheme {scheme!r}; expected 'pca' or 'aes'")


def pad(data: bytes) -> bytes:
    n = BLOCK - len(data) % BLOCK
    return data + bytes([n]) * n


def unpad(data: bytes) -> bytes:
    if not data or len(data) % BLOCK:
        raise CorruptCiphertextError("plaintext is not a whole number of blocks")
    n = data[-1]
    if not 1 <= n <= BLOCK or data[-n:] != bytes([n]) * n:
        raise CorruptCiphertextError("bad padding")
    return data[:-n]


def _as_blocks(data: bytes) -> np.ndarray:
    return np.frombuffer(data, dtype=np.uint8).reshape(-1, BLOCK)


def _counter_blocks(header: bytes, start: int, count: int) -> np.ndarray:
    """Counter blocks header+start .. header+start+count-1, big-endian add."""
    base = int.from_bytes(header[8:], "big") + start
    out = np.empty((count, BLOCK), dtype=np.uint8)
    out[:, :8] = np.frombuffer(header[:8], dtype=np.uint8)
    lows = np.arange(count, dtype=np.uint64) + np.uint64(base & ((1 << 64) - 1))
    out[:, 8:] = lows.astype(">u8").view(np.uint8).reshape(count, 8)
    return out


def _apply_chunk(task: tuple) -> bytes:
    op, spec_args, payload, block_offset, header = task
    cipher = make_cipher(spec_args[0], spec_args[1], **spec_args[2])
    if op == "ecb_enc":
        return cipher.encrypt_blocks(_as_blocks(payload)).tobytes()
    if op == "ecb_dec":
        return cipher.decrypt_blocks(_as_blocks(payload)).tobytes()
    if op == "ctr":
        nblocks = -(-len(payload) // BLOCK)
        keystream = cipher.encrypt_blocks(_counter_blocks(header, block_offset, nblocks))
        data = np.frombuffer(payload, dtype=np.uint8)
        return (data ^ keystream.reshape(-1)[: len(payload)]).tobytes()
    raise ValueError(f"unknown chunk op {op!r}")


def _chunk_tasks(op, cipher, data: bytes, workers: int, header: bytes = b"") -> list[tuple]:
    nblocks = -(-len(data) // BLOCK)
    pieces = min(max(workers, 1), max(nblocks, 1))
    tasks = []
    offset = 0
    for w in range(pieces):
        take = (nblocks // pieces) + (1 if w < nblocks % pieces else 0)
        if take == 0:
            continue
        lo, hi = offset * BLOCK, min((offset + take) * BLOCK, len(data))
        tasks.append((op, cipher.spec_args, data[lo:hi], offset, header))
        offset += take
    return tasks


def _run_tasks(tasks: list[tuple], workers: int) -> list[bytes]:
    if workers <= 1 or len(tasks) <= 1:
        return [_apply_chunk(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        return list(pool.map(_apply_chunk, tasks))


def _derive_nonce_header(data: bytes, cipher) -> bytes:
    """16-byte header: keyed checksum nonce (8 bytes) then a zero counter."""
    checksum = np.frombuffer(len(data).to_bytes(BLOCK, "big"), dtype=np.uint8).copy()
    if data:
        checksum ^= np.bitwise_xor.reduce(_as_blocks(pad(data)), axis=0)
    nonce = cipher.encrypt_block_bytes(checksum.tobytes())[:8]
    return nonce + b"\x00" * 8


def encrypt_stream(data: bytes, cipher, mode: str = "ecb", workers: int = 1) -> bytes:
    if mode == "ecb":
        chunks = _run_tasks(_chunk_tasks("ecb_enc", cipher, pad(data), workers), workers)
        return b"".join(chunks)
    if mode == "ctr":
        header = _derive_nonce_header(data, cipher)
        if not data:
            return header
        chunks = _run_tasks(_chunk_tasks("ctr", cipher, data, workers, header), workers)
        return header + b"".join(chunks)
    raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")


def decrypt_stream(data: bytes, cipher, mode: str = "ecb", workers: int = 1) -> bytes:
    if mode == "ecb":
        if not data or len(data) % BLOCK:
            raise CorruptCiphertextError("ciphertext is not a whole number of blocks")
        chunks = _run_tasks(_chunk_tasks("ecb_dec", cipher, data, workers), workers)
        return unpad(b"".join(chunks))
    if mode == "ctr":
        if len(data) < BLOCK:
            raise CorruptCiphertextError("ciphertext is shorter than its header")
        header, body = data[:BLOCK], data[BLOCK:]
        if not body:
            return b""
        chunks = _run_tasks(_chunk_tasks("ctr", cipher, body, workers, header), workers)
        return b"".join(chunks)
    raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
