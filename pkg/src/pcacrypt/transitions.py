"""State-transition analysis of programmable CA steps.

One hybrid step over ``n`` cells induces a functional graph on all ``2^n``
states. For widths inside the enumeration cap the graph is built outright
(vectorized over the whole state range) and decomposed into attractor
cycles plus transient tails. For affine rule vectors the same step is also
available as a GF(2) matrix/offset pair, which yields cycle lengths
algebraically for widths far beyond enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import gf2
from .eca import Boundary, RuleClass, classify_rule, rule_from_number
from .pca import RuleVector, as_rule_vector, _pca_step_word

DEFAULT_ENUMERATION_CAP = 24


class NonAffineRuleError(ValueError):
    """A rule vector contains a rule outside the linear/complement classes."""


class NotBijectiveError(ValueError):
    """The step map is not a bijection, so no finite order exists."""


@dataclass
class TransitionGraph:
    """Successor table of one PCA step over every width-n state."""

    width: int
    boundary: Boundary
    rules: RuleVector
    successor: np.ndarray

    @property
    def size(self) -> int:
        return 1 << self.width


def build_graph(
    rules: Sequence[int],
    boundary: Boundary,
    width: int | None = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> TransitionGraph:
    """Enumerate the successor of every state under one hybrid step."""
    vec = as_rule_vector(rules)
    if width is None:
        width = len(vec)
    if width != len(vec):
        raise ValueError(f"width {width} != rule vector length {len(vec)}")
    if width > cap:
        raise ValueError(
            f"width {width} exceeds the enumeration cap {cap}; "
            "for affine rule vectors use affine_order instead"
        )
    states = np.arange(1 << width, dtype=np.int64)
    successor = _pca_step_word(states, width, vec, boundary)
    return TransitionGraph(width, boundary, vec, successor)


@dataclass
class CycleDecomposition:
    """Attractor cycles and transient tails of a transition graph.

    Cycles are canonicalized to start at their smallest state and follow
    successor order; they are sorted by that smallest state. ``distance``
    is 0 exactly on cycle states.
    """

    cycles: tuple[tuple[int, ...], ...]
    cycle_id: np.ndarray
    distance: np.ndarray

    @property
    def cycle_lengths(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.cycles)

    @property
    def transients(self) -> dict[int, tuple[int, int]]:
        """state -> (attractor cycle id, distance to it), for off-cycle states."""
        return {
            int(s): (int(self.cycle_id[s]), int(self.distance[s]))
            for s in np.nonzero(self.distance)[0]
        }


def find_cycles(graph: TransitionGraph) -> CycleDecomposition:
    """Decompose the functional graph into cycles and transients."""
    succ = graph.successor
    size = graph.size
    color = np.zeros(size, dtype=np.uint8)  # 0 new, 1 on current path, 2 done
    cycle_id = np.full(size, -1, dtype=np.int64)
    distance = np.zeros(size, dtype=np.int64)
    raw_cycles: list[tuple[int, ...]] = []

    for start in range(size):
        if color[start]:
            continue
        path: list[int] = []
        v = start
        while color[v] == 0:
            color[v] = 1
            path.append(v)
            v = int(succ[v])
        if color[v] == 1:
            # closed a new cycle; rotate it to start at its minimum state
            pivot = path.index(v)
            cyc = path[pivot:]
            low = cyc.index(min(cyc))
            cyc = cyc[low:] + cyc[:low]
            cid = len(raw_cycles)
            raw_cycles.append(tuple(cyc))
            for u in cyc:
                color[u] = 2
                cycle_id[u] = cid
            tail = path[:pivot]
        else:
            tail = path
        for u in reversed(tail):
            color[u] = 2
            nxt = int(succ[u])
            cycle_id[u] = cycle_id[nxt]
            distance[u] = distance[nxt] + 1

    order = sorted(range(len(raw_cycles)), key=lambda i: raw_cycles[i][0])
    remap = np.empty(len(raw_cycles), dtype=np.int64)
    for new_id, old_id in enumerate(order):
        remap[old_id] = new_id
    if len(raw_cycles):
        cycle_id = remap[cycle_id]
    return CycleDecomposition(tuple(raw_cycles[i] for i in order), cycle_id, distance)


class OrbitPosition(NamedTuple):
    """Where one state sits relative to its attractor."""

    on_cycle: bool
    cycle_length: int
    distance: int


def cycle_length_of(graph: TransitionGraph, state: int) -> OrbitPosition:
    """Walk one orbit to find its attractor's length and the entry distance.

    Walks the successor table directly, so the answer is independent of
    (and checkable against) `find_cycles`.
    """
    if not 0 <= state < graph.size:
        raise ValueError(f"state {state} out of range [0, {graph.size})")
    seen: dict[int, int] = {}
    v = state
    i = 0
    while v not in seen:
        seen[v] = i
        v = int(graph.successor[v])
        i += 1
    entry = seen[v]
    return OrbitPosition(entry == 0, i - entry, entry)


def is_group_ca(graph: TransitionGraph) -> bool:
    """True when the step map is a permutation (every state on a cycle)."""
    counts = np.bincount(graph.successor, minlength=graph.size)
    return int(counts.max()) == 1


def _bit_reverse(x: int, width: int) -> int:
    out = 0
    for i in range(width):
        out |= ((x >> i) & 1) << (width - 1 - i)
    return out


@dataclass(frozen=True)
class AffineMap:
    """One PCA step as ``state -> M . state ^ offset`` over GF(2).

    Rows use coordinate i = cell i (LSB first); ``apply`` converts from and
    to packed configuration values, whose bit order is reversed.
    """

    width: int
    rows: gf2.Matrix
    offset_vec: int

    @property
    def offset(self) -> int:
        """The image of the all-zero state, as a packed state value."""
        return _bit_reverse(self.offset_vec, self.width)

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def apply(self, state: int) -> int:
        vec = _bit_reverse(state, self.width)
        out = gf2.mat_vec(self.rows, vec) ^ self.offset_vec
        return _bit_reverse(out, self.width)


def affine_map_of(rules: Sequence[int], boundary: Boundary, width: int | None = None) -> AffineMap:
    """Matrix/offset form of one hybrid step; affine rules only.

    Every affine elementary rule decomposes as a XOR of a neighbor subset
    plus a constant, so row i collects the coefficients of cells i-1, i,
    i+1 (dropped at a null edge, wrapped at a periodic one). The result is
    verified against the real step on the zero state and all basis states.
    """
    vec = as_rule_vector(rules)
    if width is None:
        width = len(vec)
    if width != len(vec):
        raise ValueError(f"width {width} != rule vector length {len(vec)}")
    rows = []
    offset_vec = 0
    for i, number in enumerate(vec):
        rule = rule_from_number(number)
        if classify_rule(rule) is RuleClass.NONLINEAR:
            raise NonAffineRuleError(f"rule {number} at cell {i} is not affine")
        f = rule.bits
        alpha, beta, gamma, delta = f[4] ^ f[0], f[2] ^ f[0], f[1] ^ f[0], f[0]
        row = 0
        if beta:
            row ^= 1 << i
        if alpha:
            if i > 0:
                row ^= 1 << (i - 1)
            elif boundary is Boundary.PERIODIC:
                row ^= 1 << (width - 1)
        if gamma:
            if i < width - 1:
                row ^= 1 << (i + 1)
            elif boundary is Boundary.PERIODIC:
                row ^= 1
        rows.append(row)
        offset_vec |= delta << i
    amap = AffineMap(width, tuple(rows), offset_vec)

    for probe in (0, *(1 << (width - 1 - i) for i in range(width))):
        expected = _pca_step_word(probe, width, vec, boundary)
        if amap.apply(probe) != expected:
            raise AssertionError(f"affine map disagrees with the step on state {probe}")
    return amap


class AffineOrder(NamedTuple):
    """Global cycle length of an affine step and whether every orbit has it."""

    length: int
    uniform: bool


def affine_order(rules: Sequence[int], boundary: Boundary, width: int | None = None) -> AffineOrder:
    """Smallest t with t steps acting as the identity on every state.

    For F(x) = Mx ^ c the order is ord(M) when the accumulated offset
    (I + M + ... + M^(ord-1)) c vanishes and 2*ord(M) otherwise. The
    uniformity flag reports whether any state closes its orbit at a proper
    divisor of that length, i.e. whether all cycles share it.
    """
    amap = affine_map_of(rules, boundary, width)
    n = amap.width
    if not gf2.is_invertible(amap.rows):
        raise NotBijectiveError(
            "the linear part is singular, so the step map is not a bijection"
        )
    length = gf2.matrix_order(amap.rows)
    if gf2.mat_vec(gf2.geometric_series(amap.rows, length), amap.offset_vec):
        length *= 2

    uniform = True
    for p in gf2.factorize(length) if length > 1 else ():
        t = length // p
        lhs = gf2.mat_add(gf2.mat_pow(amap.rows, t), gf2.identity(n))
        rhs = gf2.mat_vec(gf2.geometric_series(amap.rows, t), amap.offset_vec)
        if gf2.solvable(lhs, rhs, n):
            uniform = False
            break
    return AffineOrder(length, uniform)


_DOT_PALETTE = (
    "red", "blue", "green", "orange", "purple",
    "brown", "cyan", "magenta", "gold", "darkgreen",
)


def export_dot(graph: TransitionGraph, decomposition: CycleDecomposition | None = None) -> str:
    """Render the transition graph as a DOT digraph.

    Every state gets one node (cycle membership in the ``cycle`` attribute,
    colored per cycle; transients gray with cycle=-1) and one outgoing edge.
    """
    dec = decomposition if decomposition is not None else find_cycles(graph)
    lines = ["digraph state_transitions {", "  rankdir=LR;"]
    for s in range(graph.size):
        binary = format(s, f"0{graph.width}b")
        if dec.distance[s] == 0:
            cid = int(dec.cycle_id[s])
            color = _DOT_PALETTE[cid % len(_DOT_PALETTE)]
            lines.append(f'  s{s} [label="{s} ({binary})" cycle={cid} color={color}];')
        else:
            lines.append(f'  s{s} [label="{s} ({binary})" cycle=-1 color=gray];')
    for s in range(graph.size):
        lines.append(f"  s{s} -> s{int(graph.successor[s])};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_csv(graph: TransitionGraph, decomposition: CycleDecomposition | None = None) -> str:
    """Tabulate the graph: one row per state with its attractor data."""
    dec = decomposition if decomposition is not None else find_cycles(graph)
    lengths = dec.cycle_lengths
    lines = ["state,successor,cycle_id,cycle_length,distance_to_cycle"]
    for s in range(graph.size):
        cid = int(dec.cycle_id[s])
        lines.append(
            f"{s},{int(graph.successor[s])},{cid},{lengths[cid]},{int(dec.distance[s])}"
        )
    return "\n".join(lines) + "\n"
