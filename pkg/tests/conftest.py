"""Shared independent oracles for the test suite.

These deliberately avoid the package's packed-integer fast paths: states
are plain bit lists and every cell is updated by reading its rule bits
straight out of the rule number.
"""

from __future__ import annotations


def naive_step(cells: list[int], rules: list[int], boundary: str) -> list[int]:
    n = len(cells)
    out = []
    for i in range(n):
        if boundary == "null":
            left = cells[i - 1] if i > 0 else 0
            right = cells[i + 1] if i < n - 1 else 0
        else:
            left = cells[(i - 1) % n]
            right = cells[(i + 1) % n]
        k = 4 * left + 2 * cells[i] + right
        out.append((rules[i] >> k) & 1)
    return out


def naive_evolve(cells: list[int], rules: list[int], boundary: str, steps: int) -> list[int]:
    for _ in range(steps):
        cells = naive_step(cells, rules, boundary)
    return cells


def bits_of(value: int, width: int) -> list[int]:
    return [(value >> (width - 1 - i)) & 1 for i in range(width)]


def value_of(cells: list[int]) -> int:
    out = 0
    for b in cells:
        out = (out << 1) | b
    return out
