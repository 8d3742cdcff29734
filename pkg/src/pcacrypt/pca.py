"""Programmable CA: per-cell rules chosen at run time by control signals.

Each cell carries a pair of control bits (C1, C2) that picks its update
rule from a fixed four-row selection table; a hybrid automaton is then one
whose rule vector assigns a possibly different rule to every cell. Steps
are computed by running each distinct rule's uniform update over the whole
word and stitching the results together with per-rule cell masks.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .eca import Boundary, Configuration, _step_word, rule_from_number

RuleVector = tuple[int, ...]

#: Control pair -> rule number. Two pairs intentionally select the same
#: rule, so only three distinct rules are reachable.
RULE_SELECTION: dict[tuple[int, int], int] = {
    (0, 0): 51,
    (0, 1): 51,
    (1, 0): 195,
    (1, 1): 153,
}


def select_rule(c1: int, c2: int) -> int:
    """Rule number driven onto a cell by the control pair (c1, c2)."""
    if c1 not in (0, 1) or c2 not in (0, 1):
        raise ValueError(f"control signals must be bits, got ({c1!r}, {c2!r})")
    return RULE_SELECTION[(c1, c2)]


def as_rule_vector(rules: Sequence[int]) -> RuleVector:
    """Normalize and validate a per-cell rule assignment."""
    vec = tuple(int(r) for r in rules)
    if not vec:
        raise ValueError("rule vector must not be empty")
    for r in vec:
        if not 0 <= r <= 255:
            raise ValueError(f"rule number out of range [0, 255]: {r}")
    return vec


@dataclass(frozen=True)
class ControlSignals:
    """One (C1, C2) control pair per cell."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        pairs = tuple(tuple(p) for p in self.pairs)
        if not pairs:
            raise ValueError("control signals need at least one cell")
        for p in pairs:
            if len(p) != 2 or p[0] not in (0, 1) or p[1] not in (0, 1):
                raise ValueError(f"bad control pair: {p!r}")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def broadcast(cls, c1: int, c2: int, width: int) -> "ControlSignals":
        """The same control pair applied to every cell."""
        return cls(((c1, c2),) * width)

    @property
    def width(self) -> int:
        return len(self.pairs)

    def rule_vector(self) -> RuleVector:
        return tuple(select_rule(c1, c2) for c1, c2 in self.pairs)


@dataclass(frozen=True)
class ControlProgram:
    """A sequence of per-round control signals driving a PCA."""

    schedule: tuple[ControlSignals, ...]

    def __post_init__(self) -> None:
        schedule = tuple(self.schedule)
        widths = {s.width for s in schedule}
        if len(widths) > 1:
            raise ValueError(f"inconsistent widths in program: {sorted(widths)}")
        object.__setattr__(self, "schedule", schedule)


@lru_cache(maxsize=4096)
def _rule_masks(rules: RuleVector) -> tuple[tuple[int, int], ...]:
    """(rule number, mask of the cells using it), cell i at bit width-1-i."""
    width = len(rules)
    masks: dict[int, int] = {}
    for i, r in enumerate(rules):
        masks[r] = masks.get(r, 0) | (1 << (width - 1 - i))
    return tuple(sorted(masks.items()))


def _pca_step_word(value, width: int, rules: RuleVector, boundary: Boundary):
    """One hybrid step on a packed configuration (int or ndarray)."""
    out = value & 0
    for number, sel in _rule_masks(rules):
        out = out | (_step_word(value, width, rule_from_number(number).bits, boundary) & sel)
    return out


def pca_step(cfg: Configuration, rules: Sequence[int], boundary: Boundary) -> Configuration:
    """One synchronous update with cell i governed by rules[i]."""
    vec = as_rule_vector(rules)
    if len(vec) != cfg.width:
        raise ValueError(f"rule vector length {len(vec)} != width {cfg.width}")
    return Configuration(cfg.width, _pca_step_word(cfg.value, cfg.width, vec, boundary))


def pca_evolve(
    cfg: Configuration, rules: Sequence[int], boundary: Boundary, steps: int
) -> Configuration:
    """Apply ``pca_step`` ``steps`` times (0 steps is the identity)."""
    if steps < 0:
        raise ValueError(f"step count must be non-negative: {steps}")
    vec = as_rule_vector(rules)
    if len(vec) != cfg.width:
        raise ValueError(f"rule vector length {len(vec)} != width {cfg.width}")
    value = cfg.value
    for _ in range(steps):
        value = _pca_step_word(value, cfg.width, vec, boundary)
    return Configuration(cfg.width, value)


def pca_run_program(
    cfg: Configuration, program: ControlProgram, boundary: Boundary, steps_per_round: int
) -> Configuration:
    """Evolve through a control program, reselecting rules between rounds.

    Each schedule entry is turned into a rule vector cell by cell, and the
    automaton then runs ``steps_per_round`` steps under it before the next
    entry takes over.
    """
    if not program.schedule:
        raise ValueError("control program is empty")
    if program.schedule[0].width != cfg.width:
        raise ValueError(
            f"program width {program.schedule[0].width} != configuration width {cfg.width}"
        )
    out = cfg
    for signals in program.schedule:
        out = pca_evolve(out, signals.rule_vector(), boundary, steps_per_round)
    return out
