"""Emptier strategies: greedy, randomized proportional, and a brute-force oracle.

Greedy always drains the p fullest cups; ties among equal fills are resolved
by a pluggable policy (the post-round multiset is the same either way, only
the recorded indices differ).  Proportional emptying realizes the
circular-interval construction: cup j is selected with probability exactly
q_j when the q_j sum to the integer p.
"""

from __future__ import annotations

import itertools
import math
import random
from bisect import bisect_right
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from .core import (
    ONE,
    ZERO,
    CupGameError,
    CupState,
    EmptierMove,
    FillerMove,
    GameVariant,
    InvalidMoveError,
    VariantKind,
    apply_emptier_move,
    apply_filler_move,
    backlog,
    normalize_filler_move,
    rat,
    validate_filler_move,
)


class TieKind(Enum):
    LOWEST_INDEX = "lowest"
    HIGHEST_INDEX = "highest"
    RANDOM = "random"


@dataclass
class TiePolicy:
    kind: TieKind = TieKind.LOWEST_INDEX
    seed: Optional[int] = None
    _rng: Optional[random.Random] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.kind is TieKind.RANDOM:
            if self.seed is None:
                raise CupGameError("random tie policy needs a seed")
            self._rng = random.Random(self.seed)

    def pick(self, candidates: list[int], count: int) -> list[int]:
        if self.kind is TieKind.LOWEST_INDEX:
            return candidates[:count]
        if self.kind is TieKind.HIGHEST_INDEX:
            return candidates[-count:]
        assert self._rng is not None
        return self._rng.sample(candidates, count)


LOWEST_INDEX = TiePolicy(TieKind.LOWEST_INDEX)


def greedy_empty(state_after_fill: CupState, p: int, tie: Optional[TiePolicy] = None) -> EmptierMove:
    """Indices (1-based) of a maximum-fill selection of p cups."""
    n = state_after_fill.n
    if not 1 <= p <= n:
        raise InvalidMoveError(f"p={p} outside [1, {n}]")
    tie = tie or LOWEST_INDEX
    fills = state_after_fill.fills
    threshold = fills[p - 1]
    forced = [i + 1 for i in range(p) if fills[i] > threshold]
    tied = [i + 1 for i in range(n) if fills[i] == threshold]
    chosen = forced + tie.pick(tied, p - len(forced))
    return EmptierMove(tuple(chosen))


class GreedyEmptier:
    """Stateless greedy emptier with a fixed tie policy."""

    def __init__(self, tie: Optional[TiePolicy] = None):
        self.tie = tie or LOWEST_INDEX

    def next_move(self, state_after_fill: CupState, filler_move: FillerMove) -> EmptierMove:
        return greedy_empty(state_after_fill, filler_move.p, self.tie)


class IntervalSampler:
    """Circular-interval sampler with precomputed integer boundaries.

    Partitions [0, p) into half-open intervals of lengths q_j and samples the
    lattice u, u+1, ..., u+p-1 (mod p) for a single uniform u.  u is drawn as
    a rational with denominator 2**64, so marginals are exact to 2**-64; all
    comparisons run on scaled integers.
    """

    def __init__(self, q: Sequence[Fraction]):
        total = sum(q, ZERO)
        if total.denominator != 1 or total < 1:
            raise InvalidMoveError("proportional sample needs integer sum(q) >= 1")
        self.p = int(total)
        den = 1
        for j, qj in enumerate(q):
            if not ZERO <= qj <= ONE:
                raise InvalidMoveError(f"q[{j}] = {qj} outside [0, 1]")
            den = math.lcm(den, qj.denominator)
        # Scale: den * 2**64 makes both the boundaries and u exact integers.
        self._unit = den << 64
        self._wrap = self.p * self._unit
        self._u_step = self.p * den
        bounds = [0]
        acc = ZERO
        for qj in q:
            acc += qj
            bounds.append(int(acc * den) << 64)
        self._bounds = bounds

    def draw(self, rng: random.Random) -> EmptierMove:
        u = rng.getrandbits(64) * self._u_step
        chosen = []
        for _ in range(self.p):
            chosen.append(bisect_right(self._bounds, u) - 1)
            u += self._unit
            if u >= self._wrap:
                u -= self._wrap
        if len(set(chosen)) != self.p:
            raise AssertionError("interval sampler selected a duplicate index")
        return EmptierMove(tuple(i + 1 for i in chosen))


def proportional_sample(q: Sequence[Fraction], rng: random.Random) -> EmptierMove:
    """Select p distinct indices so that Pr[j selected] = q_j exactly."""
    return IntervalSampler(q).draw(rng)


def proportional_emptier_round(filler_move: FillerMove, rng: random.Random) -> EmptierMove:
    """Proportional emptying for one round: q = the filler's additions."""
    return proportional_sample(filler_move.additions, rng)


class ProportionalEmptier:
    def __init__(self, seed: int):
        self.seed = seed
        self._rng = random.Random(seed)

    def next_move(self, state_after_fill: CupState, filler_move: FillerMove) -> EmptierMove:
        return proportional_emptier_round(filler_move, self._rng)


def wlog_transform(move: FillerMove, epsilon: Fraction, n: int) -> FillerMove:
    """Rewrite a move so every cup receives at least eps*p/n water.

    Scales every addition by (1 - eps) and adds eps*p/n to each cup; the sum
    stays exactly p and each addition stays in [eps*p/n, 1].
    """
    epsilon = rat(epsilon)
    if not ZERO < epsilon <= Fraction(1, 2):
        raise InvalidMoveError("wlog transform needs epsilon in (0, 1/2]")
    if len(move.additions) != n:
        raise InvalidMoveError("move length does not match n")
    floor_add = epsilon * move.p / n
    additions = tuple((ONE - epsilon) * a + floor_add for a in move.additions)
    return FillerMove(move.p, additions)


class OracleBudgetError(CupGameError):
    """The game-tree search exceeded its node budget."""


@dataclass(frozen=True)
class OracleConfig:
    grid: Fraction = Fraction(1, 2)
    horizon: int = 3
    max_nodes: int = 2_000_000

    def __post_init__(self) -> None:
        if self.grid <= 0 or (1 / self.grid).denominator != 1:
            raise CupGameError("grid must be a positive unit fraction 1/g")
        if self.horizon < 0:
            raise CupGameError("horizon must be non-negative")


def _grid_vectors(n: int, units_left: int, cap: int, prefix: tuple, out: list) -> None:
    if n == 0:
        if units_left == 0:
            out.append(prefix)
        return
    lo = max(0, units_left - cap * (n - 1))
    hi = min(cap, units_left)
    for u in range(lo, hi + 1):
        _grid_vectors(n - 1, units_left - u, cap, prefix + (u,), out)


def enumerate_filler_moves(n: int, grid: Fraction) -> list[FillerMove]:
    """All valid moves whose additions are multiples of `grid`."""
    g = int(1 / grid)
    moves = []
    for p in range(1, n + 1):
        vectors: list[tuple] = []
        _grid_vectors(n, p * g, g, (), vectors)
        for vec in vectors:
            moves.append(FillerMove(p, tuple(Fraction(u, g) for u in vec)))
    return moves


class _OracleSolver:
    def __init__(self, variant: GameVariant, cfg: OracleConfig, force_greedy: bool):
        self.variant = variant
        self.cfg = cfg
        self.force_greedy = force_greedy
        self.memo: dict = {}
        self.nodes = 0
        self._moves_by_n: dict[int, list[FillerMove]] = {}

    def moves(self, n: int) -> list[FillerMove]:
        if n not in self._moves_by_n:
            self._moves_by_n[n] = enumerate_filler_moves(n, self.cfg.grid)
        return self._moves_by_n[n]

    def value(self, fills: tuple, t: int) -> Fraction:
        if t == 0:
            return fills[0]
        key = (fills, t)
        if key in self.memo:
            return self.memo[key]
        self.nodes += 1
        if self.nodes > self.cfg.max_nodes:
            raise OracleBudgetError(
                f"oracle exceeded max_nodes={self.cfg.max_nodes}"
            )
        state = CupState(fills, self.variant)
        n = len(fills)
        best: Optional[Fraction] = None
        seen_posts = set()
        for move in self.moves(n):
            post = apply_filler_move(state, move)
            dedup = (post.fills, move.p)
            if dedup in seen_posts:
                continue
            seen_posts.add(dedup)
            if self.force_greedy:
                nxt = apply_emptier_move(post, greedy_empty(post, move.p))
                reply = self.value(nxt.fills, t - 1)
            else:
                reply = None
                for subset in itertools.combinations(range(1, n + 1), move.p):
                    nxt = apply_emptier_move(post, EmptierMove(subset))
                    v = self.value(nxt.fills, t - 1)
                    if reply is None or v < reply:
                        reply = v
                assert reply is not None
            if best is None or reply > best:
                best = reply
        assert best is not None
        self.memo[key] = best
        return best


def opt_oracle(
    state: CupState, cfg: OracleConfig, force_greedy: bool = False
) -> Fraction:
    """Exhaustive sup-min value of the grid-discretized game tree.

    With force_greedy=True the emptier is pinned to greedy responses, which
    by greedy optimality must yield the same value on these instances.
    """
    solver = _OracleSolver(state.variant, cfg, force_greedy)
    return solver.value(state.fills, cfg.horizon)
