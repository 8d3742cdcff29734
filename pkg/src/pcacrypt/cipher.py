"""Block cipher built from programmable-CA state cycles.

A 128-bit block is split into 32 four-cell lanes, each an independent
null-boundary PCA over the rules {51, 195, 153}. Per round, a rule-30
keystream CA derived from the key supplies one (C1, C2) control pair per
cell plus a step count; every lane's selected rule vector must be a
permutation of its 16 states with all orbits of length 4, and any lane
failing that check is remapped to the canonical <51,51,195,153> vector.
Encrypting a round advances every lane ``forward_steps`` positions along
its state cycle; decrypting replays rounds in reverse and completes each
cycle with the remaining ``cycle_length - forward_steps`` positions.

Between rounds the whole block passes through an inter-lane mixing layer:
a left rotation by 11 bits followed by two xorshift folds (XOR with the
block shifted left 37 and right 23). The folds are unipotent, so they
invert in closed form, and unlike a bare permutation they keep doubling a
flipped bit's footprint instead of carrying it along a single path. Pass
``mix_rotation=False`` for the pure per-lane variant with no inter-lane
mixing at all. Pass ``whole_block=True`` to drive a single 128-cell PCA
instead of lanes, with the round cycle length obtained algebraically
(slower; no batch path).

None of this is production cryptography; it exists for CA-dynamics study
and benchmarking against the AES reference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .eca import Boundary
from .pca import select_rule, _pca_step_word
from .transitions import NotBijectiveError, affine_order, build_graph, find_cycles, is_group_ca

LANE_WIDTH = 4
LANES_PER_BLOCK = 32
BLOCK_BITS = 128
BLOCK_BYTES = 16
CANONICAL_LANE = (51, 51, 195, 153)
LANE_CYCLE_LENGTH = 4
MIX_ROTATION_BITS = 11
MIX_SHIFT_LEFT = 37
MIX_SHIFT_RIGHT = 23
KEYSTREAM_RULE = 30
KEYSTREAM_WARMUP = 64
ROUNDS_BY_KEY_BYTES = {16: 10, 24: 12, 32: 14}

_MASK128 = (1 << 128) - 1
_MASK64 = (1 << 64) - 1


class KeyFormatError(ValueError):
    """Raw key material has the wrong size or encoding."""


@dataclass(frozen=True)
class LaneProfile:
    """Orbit structure of one lane rule vector on its 16 states."""

    vector: tuple[int, ...]
    permutation: tuple[int, ...]
    bijective: bool
    uniform: bool
    cycle_length: int


@dataclass(frozen=True)
class LaneLayout:
    """How a 128-bit block decomposes into independent PCA lanes.

    Instantiating one re-verifies that the canonical lane vector is a
    permutation whose orbits all share the advertised cycle length.
    """

    lane_width: int = LANE_WIDTH
    lanes_per_block: int = LANES_PER_BLOCK
    boundary: Boundary = Boundary.NULL
    base_rules: frozenset = frozenset({51, 195, 153})
    cycle_length: int = LANE_CYCLE_LENGTH

    def __post_init__(self) -> None:
        if self.lane_width * self.lanes_per_block != BLOCK_BITS:
            raise ValueError(
                f"{self.lane_width} x {self.lanes_per_block} lanes do not cover "
                f"{BLOCK_BITS} cells"
            )
        profile = _lane_profile(CANONICAL_LANE)
        if not (profile.bijective and profile.uniform
                and profile.cycle_length == self.cycle_length):
            raise ValueError("canonical lane vector fails the orbit-structure check")


@lru_cache(maxsize=None)
def _lane_profile(vector: tuple[int, ...]) -> LaneProfile:
    graph = build_graph(vector, Boundary.NULL, LANE_WIDTH)
    bijective = is_group_ca(graph)
    decomposition = find_cycles(graph)
    lengths = decomposition.cycle_lengths
    uniform = bijective and len(set(lengths)) == 1
    cycle_length = math.lcm(*lengths) if bijective else 0
    return LaneProfile(
        vector, tuple(int(s) for s in graph.successor), bijective, uniform, cycle_length
    )


def _lane_acceptable(vector: tuple[int, ...]) -> bool:
    p = _lane_profile(vector)
    return p.bijective and p.uniform and p.cycle_length == LANE_CYCLE_LENGTH


DEFAULT_LAYOUT = LaneLayout()


@lru_cache(maxsize=None)
def _lane_table(vector: tuple[int, ...], steps: int) -> tuple[int, ...]:
    """The lane permutation composed ``steps`` times."""
    perm = _lane_profile(vector).permutation
    table = tuple(range(16))
    for _ in range(steps):
        table = tuple(perm[x] for x in table)
    return table


def _fold_key(raw: bytes) -> int:
    """XOR-fold zero-padded 16-byte key chunks into a 128-bit seed."""
    padded = raw + b"\x00" * (-len(raw) % BLOCK_BYTES)
    seed = 0
    for i in range(0, len(padded), BLOCK_BYTES):
        seed ^= int.from_bytes(padded[i : i + BLOCK_BYTES], "big")
    return seed


class KeystreamCA:
    """Rule-30 ring of 128 cells emitting its 64 center cells per clock.

    The update is the closed form of rule 30 (left XOR (center OR right));
    bits become available only after a fixed warm-up, oldest first.
    """

    def __init__(self, seed: int):
        self._state = seed & _MASK128
        for _ in range(KEYSTREAM_WARMUP):
            self._clock()
        self._buffer = 0
        self._buffered = 0

    def _clock(self) -> None:
        v = self._state
        left = (v >> 1) | ((v & 1) << 127)
        right = ((v << 1) & _MASK128) | (v >> 127)
        self._state = left ^ (v | right)

    def take(self, count: int) -> int:
        """The next ``count`` keystream bits, oldest bit most significant."""
        while self._buffered < count:
            self._clock()
            self._buffer = (self._buffer << 64) | ((self._state >> 32) & _MASK64)
            self._buffered += 64
        self._buffered -= count
        out = self._buffer >> self._buffered
        self._buffer &= (1 << self._buffered) - 1
        return out


@dataclass(frozen=True)
class RoundSpec:
    """One round: the drawn control bits, checked rule vectors, orbit data.

    ``control_bits`` keeps the 256 bits exactly as drawn from the keystream
    (C1 then C2 per cell, cell 0 first, before any lane remap) so schedules
    can be compared bit for bit. ``vectors`` holds 32 lane vectors, or a
    single 128-cell vector in whole-block mode; the step tables are the
    lane permutations already composed for this round's step counts.
    """

    control_bits: int
    vectors: tuple[tuple[int, ...], ...]
    cycle_length: int
    forward_steps: int
    enc_tables: tuple[tuple[int, ...], ...] | None
    dec_tables: tuple[tuple[int, ...], ...] | None

    @property
    def signals(self) -> tuple[tuple[int, int], ...]:
        """Per-cell (C1, C2) pairs as drawn."""
        bits = self.control_bits
        return tuple(
            ((bits >> (255 - 2 * i)) & 1, (bits >> (254 - 2 * i)) & 1)
            for i in range(BLOCK_BITS)
        )


@dataclass(frozen=True)
class RoundSchedule:
    rounds: tuple[RoundSpec, ...]
    whole_block: bool
    mix_rotation: bool


@dataclass(frozen=True)
class CipherKey:
    """Raw key bytes plus everything derived from them."""

    raw: bytes
    seed: int
    rounds: int
    schedule: RoundSchedule


@lru_cache(maxsize=256)
def _lane_vector_from_byte(control_byte: int) -> tuple[int, ...]:
    """The checked lane vector for one lane's 8 control bits (4 pairs)."""
    vec = tuple(
        select_rule((control_byte >> (7 - 2 * j)) & 1, (control_byte >> (6 - 2 * j)) & 1)
        for j in range(LANE_WIDTH)
    )
    return vec if _lane_acceptable(vec) else CANONICAL_LANE


def _draw_round(stream: KeystreamCA, whole_block: bool) -> RoundSpec:
    bits = stream.take(2 * BLOCK_BITS)
    step_byte = stream.take(8)
    if whole_block:
        vector = tuple(
            select_rule((bits >> (255 - 2 * i)) & 1, (bits >> (254 - 2 * i)) & 1)
            for i in range(BLOCK_BITS)
        )
        try:
            length = affine_order(vector, Boundary.NULL, BLOCK_BITS).length
        except NotBijectiveError:
            vector = CANONICAL_LANE * LANES_PER_BLOCK
            length = affine_order(vector, Boundary.NULL, BLOCK_BITS).length
        forward = 1 + step_byte % (length - 1)
        return RoundSpec(bits, (vector,), length, forward, None, None)
    vectors = tuple(
        _lane_vector_from_byte((bits >> (248 - 8 * lane)) & 0xFF)
        for lane in range(LANES_PER_BLOCK)
    )
    length = LANE_CYCLE_LENGTH
    forward = 1 + step_byte % (length - 1)
    enc = tuple(_lane_table(vec, forward) for vec in vectors)
    dec = tuple(_lane_table(vec, length - forward) for vec in vectors)
    return RoundSpec(bits, vectors, length, forward, enc, dec)


def key_schedule(
    raw: bytes, *, whole_block: bool = False, mix_rotation: bool = True
) -> tuple[CipherKey, RoundSchedule]:
    """Derive the full round schedule from 16-, 24-, or 32-byte key material."""
    if not isinstance(raw, (bytes, bytearray)):
        raise KeyFormatError(f"key must be bytes, got {type(raw).__name__}")
    raw = bytes(raw)
    if len(raw) not in ROUNDS_BY_KEY_BYTES:
        raise KeyFormatError(f"key must be 16, 24, or 32 bytes, got {len(raw)}")
    seed = _fold_key(raw)
    stream = KeystreamCA(seed)
    rounds = tuple(
        _draw_round(stream, whole_block) for _ in range(ROUNDS_BY_KEY_BYTES[len(raw)])
    )
    schedule = RoundSchedule(rounds, whole_block, mix_rotation)
    return CipherKey(raw, seed, len(rounds), schedule), schedule


def _rotl128(x: int, k: int) -> int:
    k %= 128
    return ((x << k) | (x >> (128 - k))) & _MASK128 if k else x


def _rotr128(x: int, k: int) -> int:
    return _rotl128(x, 128 - (k % 128))


def _mix(state: int) -> int:
    """Inter-lane mixing: rotate left 11 bits, then two xorshift folds."""
    y = _rotl128(state, MIX_ROTATION_BITS)
    y ^= (y << MIX_SHIFT_LEFT) & _MASK128
    y ^= y >> MIX_SHIFT_RIGHT
    return y


def _unmix(state: int) -> int:
    # a fold x ^= x >> s is I + N with N nilpotent, so its inverse is the
    # doubling product (I + N)(I + N^2)(I + N^4)...
    y = state
    k = MIX_SHIFT_RIGHT
    while k < BLOCK_BITS:
        y ^= y >> k
        k <<= 1
    k = MIX_SHIFT_LEFT
    while k < BLOCK_BITS:
        y ^= (y << k) & _MASK128
        k <<= 1
    return _rotr128(y, MIX_ROTATION_BITS)


def _evolve_whole_block(state: int, spec: RoundSpec, steps: int) -> int:
    value = state
    for _ in range(steps):
        value = _pca_step_word(value, BLOCK_BITS, spec.vectors[0], Boundary.NULL)
    return value


def _apply_lane_tables(state: int, tables: tuple[tuple[int, ...], ...]) -> int:
    out = 0
    shift = BLOCK_BITS - LANE_WIDTH
    for table in tables:
        out |= table[(state >> shift) & 0xF] << shift
        shift -= LANE_WIDTH
    return out


def _check_block(block: int) -> None:
    if not 0 <= block < (1 << BLOCK_BITS):
        raise ValueError(f"block must be a 128-bit value, got {block}")


def encrypt_block(block: int, key: CipherKey) -> int:
    """Advance every lane along its cycle, round by round."""
    _check_block(block)
    state = block
    mix = key.schedule.mix_rotation
    for spec in key.schedule.rounds:
        if spec.enc_tables is None:
            state = _evolve_whole_block(state, spec, spec.forward_steps)
        else:
            state = _apply_lane_tables(state, spec.enc_tables)
        if mix:
            state = _mix(state)
    return state


def decrypt_block(block: int, key: CipherKey) -> int:
    """Complete every cycle begun by ``encrypt_block``; exact inverse."""
    _check_block(block)
    state = block
    mix = key.schedule.mix_rotation
    for spec in reversed(key.schedule.rounds):
        if mix:
            state = _unmix(state)
        if spec.dec_tables is None:
            state = _evolve_whole_block(state, spec, spec.cycle_length - spec.forward_steps)
        else:
            state = _apply_lane_tables(state, spec.dec_tables)
    return state


# ----------------------------------------------------------------------
# Vectorized batch path: blocks as (n, 16) uint8 arrays. Each round is 16
# per-byte table gathers (two lanes per byte) plus the mixing layer,
# applied to every block at once.


def _round_byte_tables(lane_tables: tuple[tuple[int, ...], ...]) -> np.ndarray:
    tables = np.empty((BLOCK_BYTES, 256), dtype=np.uint8)
    for k in range(BLOCK_BYTES):
        hi, lo = lane_tables[2 * k], lane_tables[2 * k + 1]
        tables[k] = [(hi[b >> 4] << 4) | lo[b & 0xF] for b in range(256)]
    return tables


# The batch pipeline keeps blocks in a byte-permuted layout where each
# 8-byte half reads as a native little-endian uint64, so the mixing layer
# runs on (hi, lo) word columns instead of 16 byte columns.
_WORD_LAYOUT = np.array([7, 6, 5, 4, 3, 2, 1, 0, 15, 14, 13, 12, 11, 10, 9, 8])


def _shl_words(hi: np.ndarray, lo: np.ndarray, k: int):
    if k < 64:
        return (hi << k) | (lo >> (64 - k)), lo << k
    if k == 64:
        return lo, lo & 0
    return lo << (k - 64), lo & 0


def _shr_words(hi: np.ndarray, lo: np.ndarray, k: int):
    if k < 64:
        return hi >> k, (lo >> k) | (hi << (64 - k))
    if k == 64:
        return hi & 0, hi
    return hi & 0, hi >> (k - 64)


def _np_mix_words(hi: np.ndarray, lo: np.ndarray):
    hi, lo = (hi << 11) | (lo >> 53), (lo << 11) | (hi >> 53)
    sh, sl = _shl_words(hi, lo, MIX_SHIFT_LEFT)
    hi, lo = hi ^ sh, lo ^ sl
    sh, sl = _shr_words(hi, lo, MIX_SHIFT_RIGHT)
    return hi ^ sh, lo ^ sl


def _np_unmix_words(hi: np.ndarray, lo: np.ndarray):
    k = MIX_SHIFT_RIGHT
    while k < BLOCK_BITS:
        sh, sl = _shr_words(hi, lo, k)
        hi, lo = hi ^ sh, lo ^ sl
        k <<= 1
    k = MIX_SHIFT_LEFT
    while k < BLOCK_BITS:
        sh, sl = _shl_words(hi, lo, k)
        hi, lo = hi ^ sh, lo ^ sl
        k <<= 1
    return (hi >> 11) | (lo << 53), (lo >> 11) | (hi << 53)


def _gather_bytes(state: np.ndarray, tables: np.ndarray) -> np.ndarray:
    out = np.empty_like(state)
    for k in range(BLOCK_BYTES):
        out[:, k] = tables[k][state[:, k]]
    return out


class PcaBlockCipher:
    """Stream-facing wrapper: scalar block ops plus vectorized batch paths."""

    scheme = "pca"
    block_size = BLOCK_BYTES

    def __init__(self, key_bytes: bytes, *, whole_block: bool = False, mix_rotation: bool = True):
        self.key, self.schedule = key_schedule(
            key_bytes, whole_block=whole_block, mix_rotation=mix_rotation
        )
        self._enc_tables: list[np.ndarray] | None = None
        self._dec_tables: list[np.ndarray] | None = None

    @property
    def spec_args(self) -> tuple:
        """Picklable recipe for rebuilding this cipher in a worker process."""
        return (
            self.scheme,
            self.key.raw,
            {
                "whole_block": self.schedule.whole_block,
                "mix_rotation": self.schedule.mix_rotation,
            },
        )

    def encrypt_block_bytes(self, block: bytes) -> bytes:
        return encrypt_block(int.from_bytes(block, "big"), self.key).to_bytes(
            BLOCK_BYTES, "big"
        )

    def decrypt_block_bytes(self, block: bytes) -> bytes:
        return decrypt_block(int.from_bytes(block, "big"), self.key).to_bytes(
            BLOCK_BYTES, "big"
        )

    def _scalar_blocks(self, blocks: np.ndarray, op) -> np.ndarray:
        flat = blocks.tobytes()
        out = bytearray(len(flat))
        for i in range(0, len(flat), BLOCK_BYTES):
            out[i : i + BLOCK_BYTES] = op(flat[i : i + BLOCK_BYTES])
        return np.frombuffer(bytes(out), dtype=np.uint8).reshape(blocks.shape)

    def encrypt_blocks(self, blocks: np.ndarray) -> np.ndarray:
        """Encrypt an (n, 16) uint8 array of blocks in one vectorized pass."""
        if self.schedule.whole_block:
            return self._scalar_blocks(blocks, self.encrypt_block_bytes)
        if self._enc_tables is None:
            self._enc_tables = [
                _round_byte_tables(spec.enc_tables)[_WORD_LAYOUT]
                for spec in self.schedule.rounds
            ]
        state = np.ascontiguousarray(blocks[:, _WORD_LAYOUT])
        for tables in self._enc_tables:
            state = _gather_bytes(state, tables)
            if self.schedule.mix_rotation:
                words = state.view(np.uint64)
                words[:, 0], words[:, 1] = _np_mix_words(words[:, 0], words[:, 1])
        return state[:, _WORD_LAYOUT]

    def decrypt_blocks(self, blocks: np.ndarray) -> np.ndarray:
        if self.schedule.whole_block:
            return self._scalar_blocks(blocks, self.decrypt_block_bytes)
        if self._dec_tables is None:
            self._dec_tables = [
                _round_byte_tables(spec.dec_tables)[_WORD_LAYOUT]
                for spec in self.schedule.rounds
            ]
        state = np.ascontiguousarray(blocks[:, _WORD_LAYOUT])
        for tables in reversed(self._dec_tables):
            if self.schedule.mix_rotation:
                words = state.view(np.uint64)
                words[:, 0], words[:, 1] = _np_unmix_words(words[:, 0], words[:, 1])
            state = _gather_bytes(state, tables)
        return state[:, _WORD_LAYOUT]
