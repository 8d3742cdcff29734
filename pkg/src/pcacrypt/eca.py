"""Elementary one-dimensional binary cellular automata.

Rules follow the Wolfram numbering: the next state of a cell with
neighborhood (left, center, right) is bit ``4*left + 2*center + right`` of
the rule number. Configurations are stored packed in a single integer with
the leftmost cell in the most significant bit, so the packed value doubles
as the configuration's decimal value. The packed form is what makes wide
automata cheap: one update touches every cell through a handful of
word-level shifts and masks, and the same code path accepts numpy integer
arrays so a whole state space can be stepped at once.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable


class Boundary(enum.Enum):
    """How the terminal cells obtain their missing neighbors."""

    NULL = "null"          # virtual neighbors held at constant 0
    PERIODIC = "periodic"  # ends wrap around like a ring

    @classmethod
    def parse(cls, name: str) -> "Boundary":
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise ValueError(
                f"unknown boundary {name!r}; expected 'null' or 'periodic'"
            ) from None


class RuleClass(enum.Enum):
    """Rule classification by the exhaustive additivity test.

    An affine rule with zero output on the all-zero neighborhood is XOR-only
    (LINEAR); with output one it is XNOR-only (COMPLEMENT). A single output
    bit admits no other affine shape, so AFFINE_GENERAL is never produced
    for elementary rules; it exists so the classification domain is closed.
    """

    LINEAR = "linear"
    COMPLEMENT = "complement"
    AFFINE_GENERAL = "affine-general"
    NONLINEAR = "nonlinear"

    @property
    def is_affine(self) -> bool:
        return self is not RuleClass.NONLINEAR


@dataclass(frozen=True)
class RuleTable:
    """One elementary rule: its number and 8-entry truth table.

    ``bits[k]`` is the next state for the neighborhood whose 3-bit encoding
    is ``k`` (so ``bits[7]`` answers neighborhood 111, ``bits[0]`` 000).
    """

    number: int
    bits: tuple[int, ...]

    @property
    def table(self) -> dict[tuple[int, int, int], int]:
        """Truth table keyed by (left, center, right)."""
        return {((k >> 2) & 1, (k >> 1) & 1, k & 1): self.bits[k] for k in range(8)}


@lru_cache(maxsize=256)
def rule_from_number(number: int) -> RuleTable:
    if not 0 <= number <= 255:
        raise ValueError(f"rule number out of range [0, 255]: {number}")
    return RuleTable(number, tuple((number >> k) & 1 for k in range(8)))


def rule_number_from_table(table: dict[tuple[int, int, int], int]) -> int:
    """Encode an 8-entry truth table back into its rule number."""
    if len(table) != 8:
        raise ValueError(f"truth table must have 8 entries, got {len(table)}")
    number = 0
    for (left, center, right), bit in table.items():
        number |= (bit & 1) << ((left << 2) | (center << 1) | right)
    return number


def apply_rule(rule: RuleTable, left: int, center: int, right: int) -> int:
    """Next state of one cell from its neighborhood."""
    return rule.bits[((left & 1) << 2) | ((center & 1) << 1) | (right & 1)]


@dataclass(frozen=True)
class Configuration:
    """A row of ``width`` cells packed into an int, leftmost cell first.

    The decimal value of a configuration weights the leftmost cell highest,
    so ``value`` itself is that decimal value and ``from_decimal`` is the
    inverse of reading it off.
    """

    width: int
    value: int

    def __post_init__(self) -> None:
        if self.width < 1:
            raise ValueError(f"width must be positive: {self.width}")
        if not 0 <= self.value < (1 << self.width):
            raise ValueError(f"value {self.value} does not fit in {self.width} cells")

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "Configuration":
        cells = tuple(int(b) for b in bits)
        if any(b not in (0, 1) for b in cells):
            raise ValueError("cells must be 0 or 1")
        value = 0
        for b in cells:
            value = (value << 1) | b
        return cls(len(cells), value)

    @classmethod
    def from_decimal(cls, value: int, width: int) -> "Configuration":
        return cls(width, value)

    @property
    def cells(self) -> tuple[int, ...]:
        return tuple((self.value >> (self.width - 1 - i)) & 1 for i in range(self.width))

    @property
    def decimal(self) -> int:
        return self.value

    def __str__(self) -> str:
        return format(self.value, f"0{self.width}b")


def _neighbor_words(value, width: int, boundary: Boundary):
    """Left/right neighbor values aligned to each cell's bit position.

    Cell i sits at bit ``width - 1 - i``, so shifting right by one exposes
    every cell's left neighbor and shifting left its right neighbor; the
    bits falling off the ends realize the null boundary for free, and the
    periodic boundary just wraps them back in. Works on ints and on numpy
    integer arrays alike.
    """
    mask = (1 << width) - 1
    left = value >> 1
    right = (value << 1) & mask
    if boundary is Boundary.PERIODIC:
        left = left | ((value & 1) << (width - 1))
        right = right | (value >> (width - 1))
    return left, right


def _step_word(value, width: int, rule_bits: tuple[int, ...], boundary: Boundary):
    """One synchronous update of a packed configuration (int or ndarray)."""
    mask = (1 << width) - 1
    left, right = _neighbor_words(value, width, boundary)
    out = value & 0  # zero of the same type as `value`
    for k in range(8):
        if not rule_bits[k]:
            continue
        term = mask & (left if k & 4 else left ^ mask)
        term = term & (value if k & 2 else value ^ mask)
        term = term & (right if k & 1 else right ^ mask)
        out = out | term
    return out


def step_uniform(cfg: Configuration, rule: RuleTable, boundary: Boundary) -> Configuration:
    """Advance every cell one tick under a single shared rule."""
    return Configuration(cfg.width, _step_word(cfg.value, cfg.width, rule.bits, boundary))


def evolve_uniform(
    cfg: Configuration, rule: RuleTable, boundary: Boundary, steps: int
) -> Configuration:
    """Apply ``step_uniform`` ``steps`` times (0 steps is the identity)."""
    if steps < 0:
        raise ValueError(f"step count must be non-negative: {steps}")
    value = cfg.value
    for _ in range(steps):
        value = _step_word(value, cfg.width, rule.bits, boundary)
    return Configuration(cfg.width, value)


def classify_rule(rule: RuleTable) -> RuleClass:
    """Classify a rule as linear, complement, or nonlinear.

    The check is exhaustive over all pairs of neighborhoods: the rule is
    affine exactly when f(x) ^ f(y) ^ f(0) == f(x ^ y) always holds.
    """
    f = rule.bits
    for x in range(8):
        for y in range(8):
            if f[x] ^ f[y] ^ f[0] != f[x ^ y]:
                return RuleClass.NONLINEAR
    return RuleClass.COMPLEMENT if f[0] else RuleClass.LINEAR
