"""Filler strategies: warmup, flat splits, amplification phases, and wrappers.

The constructions all ride on one primitive: a flat split at level v turns 2q
cups of fill exactly v into q cups at v+1/2 and q at v-1/2, with every cup
above v topped up by a full unit so the greedy emptier is forced to drain it.
Against greedy emptying in the negative-fill game the net effect is exact and
independent of how greedy breaks ties, which is what lets the multi-phase
strategies precompute their entire move streams against an internal shadow
of the game.
"""

from __future__ import annotations

import math
import random
from bisect import insort
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .core import (
    HALF,
    NEGATIVE_FILL,
    ONE,
    ZERO,
    CupGameError,
    CupState,
    FillerMove,
    GameVariant,
    InvalidMoveError,
    is_half_integer_state,
    rat,
)


class InfeasiblePlanError(CupGameError):
    """The requested backlog target cannot be planned at this cup count."""


def hold_state_move(n: int) -> FillerMove:
    """p=n, one unit everywhere; a no-op round against any emptier."""
    return FillerMove(n, (ONE,) * n)


def warmup_move(state: CupState) -> Optional[FillerMove]:
    """One round of the tie-splitting warmup; None once fills are strictly decreasing.

    Finds the smallest p with x_p = x_{p+1}, tops up cups 1..p-1, and puts a
    half unit into cups p and p+1.
    """
    if not is_half_integer_state(state):
        raise InvalidMoveError("warmup needs half-integer fills")
    fills = state.fills
    for p in range(1, state.n):
        if fills[p - 1] == fills[p]:
            additions = (ONE,) * (p - 1) + (HALF, HALF) + (ZERO,) * (state.n - p - 1)
            return FillerMove(p, additions)
    return None


class WarmupFiller:
    """Drives the warmup until fills are strictly decreasing (backlog (n-1)/2)."""

    def next_move(self, state: CupState) -> Optional[FillerMove]:
        return warmup_move(state)


def _first_index_at(fills: Sequence[Fraction], level: Fraction) -> int:
    """0-based index of the first cup at exactly `level`; -1 if absent."""
    for i, f in enumerate(fills):
        if f == level:
            return i
        if f < level:
            return -1
    return -1


def flat_split_move(state: CupState, level, q: int) -> FillerMove:
    """Move that splits 2q cups at `level` into q at level+1/2 and q at level-1/2."""
    level = rat(level)
    if q < 1:
        raise InvalidMoveError("q must be positive")
    first = _first_index_at(state.fills, level)
    if first < 0:
        raise InvalidMoveError(f"no cups at level {level}")
    count = sum(1 for f in state.fills[first:] if f == level)
    if count < 2 * q:
        raise InvalidMoveError(f"only {count} cups at level {level}, need {2 * q}")
    n = state.n
    additions = (ONE,) * first + (HALF,) * (2 * q) + (ZERO,) * (n - first - 2 * q)
    return FillerMove(first + q, additions)


class _Multiset:
    """Fill multiset with level counts; levels kept sorted ascending."""

    def __init__(self, fills: Sequence[Fraction]):
        self.counts: dict[Fraction, int] = {}
        for f in fills:
            self.counts[f] = self.counts.get(f, 0) + 1
        self.levels = sorted(self.counts)
        self.n = len(fills)

    def count_at(self, v: Fraction) -> int:
        return self.counts.get(v, 0)

    def count_above(self, v: Fraction) -> int:
        total = 0
        for lvl in reversed(self.levels):
            if lvl <= v:
                break
            total += self.counts[lvl]
        return total

    def max_level(self) -> Fraction:
        return self.levels[-1]

    def _add(self, v: Fraction, c: int) -> None:
        cur = self.counts.get(v, 0) + c
        if cur < 0:
            raise AssertionError("negative multiset count")
        if cur == 0:
            if v in self.counts:
                del self.counts[v]
                self.levels.remove(v)
        else:
            if v not in self.counts:
                insort(self.levels, v)
            self.counts[v] = cur

    def apply_split(self, v: Fraction, q: int) -> None:
        """Net effect of a flat split vs a greedy emptier (negative-fill game)."""
        if self.count_at(v) < 2 * q:
            raise AssertionError("shadow lacks cups for the planned split")
        self._add(v, -2 * q)
        self._add(v + HALF, q)
        self._add(v - HALF, q)


class _AdvancedCore:
    """Block bookkeeping for the amplification step procedure.

    Tracks counts per half-level offset j (fill = base + j/2) for a notional
    block of m cups, fires levels with at least m/2k cups moving m/4k up and
    m/4k down, and pairs the +-j firings so the symmetry invariant holds at
    pair boundaries.  Done when no interior level can fire, at which point at
    least m/4 block cups sit at base + k/2.
    """

    def __init__(self, base: Fraction, k: int, m: int):
        if k < 1:
            raise InvalidMoveError("k must be positive")
        if m % (4 * k) != 0:
            raise InvalidMoveError(f"4k = {4 * k} must divide m = {m}")
        self.base = base
        self.k = k
        self.m = m
        self.q_step = m // (4 * k)
        self.hist: dict[int, int] = {0: m}
        self.pending: Optional[int] = None
        self.rounds = 0
        self.phi_gain = ZERO
        self.budget = 8 * k**3

    def _candidate(self) -> Optional[int]:
        if self.pending is not None:
            j = self.pending
            self.pending = None
            return j
        threshold = 2 * self.q_step
        for mag in range(self.k):
            for j in (mag, -mag) if mag else (0,):
                if self.hist.get(j, 0) >= threshold:
                    if j != 0:
                        self.pending = -j
                    return j
        return None

    def step(self) -> Optional[tuple[Fraction, int]]:
        """(level, q) for the next split, or None when the phase is finished."""
        j = self._candidate()
        if j is None:
            if self.hist.get(self.k, 0) < self.m // 4:
                raise AssertionError("phase ended without m/4 cups at the top")
            return None
        q = self.q_step
        self.hist[j] = self.hist.get(j, 0) - 2 * q
        self.hist[j + 1] = self.hist.get(j + 1, 0) + q
        self.hist[j - 1] = self.hist.get(j - 1, 0) + q
        self.rounds += 1
        if self.rounds > self.budget:
            raise AssertionError("phase exceeded its 8k^3 round budget")
        self.phi_gain += Fraction(self.m, 8 * self.k)
        return self.base + Fraction(j, 2), q

    def at_pair_boundary(self) -> bool:
        return self.pending is None

    def finished(self) -> bool:
        if self.pending is not None:
            return False
        threshold = 2 * self.q_step
        return not any(
            self.hist.get(j, 0) >= threshold for j in range(-(self.k - 1), self.k)
        )

    def check_invariants(self) -> None:
        """The four step-procedure invariants, valid at pair boundaries."""
        unit = self.q_step
        for j, c in self.hist.items():
            if c < 0 or c % unit != 0:
                raise AssertionError(f"level {j} count {c} not a multiple of m/4k")
            if abs(j) > self.k:
                raise AssertionError(f"level {j} outside [-k, k]")
            if c != self.hist.get(-j, 0):
                raise AssertionError(f"asymmetric counts at +-{j}")
        if sum(self.hist.values()) != self.m:
            raise AssertionError("block lost cups")


class AdvancedFiller:
    """State-driven amplification phase: m cups at `base` -> m/4 at base + k/2."""

    def __init__(self, base, k: int, m: int):
        self.core = _AdvancedCore(rat(base), k, m)

    def next_move(self, state: CupState) -> Optional[FillerMove]:
        split = self.core.step()
        if split is None:
            return None
        level, q = split
        return flat_split_move(state, level, q)


def _emit_split(shadow: _Multiset, level: Fraction, q: int) -> FillerMove:
    prefix = shadow.count_above(level)
    if shadow.count_at(level) < 2 * q:
        raise AssertionError("shadow lacks cups for emission")
    n = shadow.n
    additions = (ONE,) * prefix + (HALF,) * (2 * q) + (ZERO,) * (n - prefix - 2 * q)
    return FillerMove(prefix + q, additions)


def force_upward(state: CupState, base, k: int, m: int) -> list[FillerMove]:
    """Move sequence raising >= m/4 of the cups at `base` to base + k/2.

    The sequence is exact against a greedy emptier in the negative-fill game
    (any tie policy); it completes within 8k^3 rounds.
    """
    base = rat(base)
    shadow = _Multiset(state.fills)
    if shadow.count_at(base) < m:
        raise InvalidMoveError(f"need {m} cups at fill {base}")
    core = _AdvancedCore(base, k, m)
    moves = []
    while True:
        split = core.step()
        if split is None:
            return moves
        level, q = split
        moves.append(_emit_split(shadow, level, q))
        shadow.apply_split(level, q)


PLAN_HALVING = "halving"
PLAN_QUARTERING = "quartering"
PLAN_TARGETED = "targeted"


@dataclass(frozen=True)
class MainFillerPlan:
    """Amplification schedule and its self-reported guarantees.

    For quartering plans: h force-upward phases each raise the surviving
    quarter of the block by k'/2, so the achieved backlog is h*k'/2 and r =
    h // 2 counts full-k' amplification pairs.  The guarantee pair is
    (backlog >= r*k', rounds <= 8*r*k'^3 + k); each phase is hard-bounded by
    2*k'^3 rounds via its potential accounting, so the budget always holds.
    """

    kind: str
    n: int
    k: int
    c: float
    k_prime: Optional[int] = None
    h: Optional[int] = None
    r: Optional[int] = None
    n_prime: Optional[int] = None
    backlog_guarantee: Fraction = ZERO
    rounds_budget: int = 0

    def describe(self) -> str:
        if self.kind == PLAN_HALVING:
            return f"halving plan: backlog {self.backlog_guarantee} in <= {self.rounds_budget} rounds"
        return (
            f"{self.kind} plan: k'={self.k_prime} h={self.h} r={self.r} "
            f"n'={self.n_prime}, backlog >= {self.backlog_guarantee}, "
            f"rounds <= {self.rounds_budget}"
        )

    @property
    def achieved_backlog(self) -> Fraction:
        """Backlog the schedule actually delivers (>= the reported guarantee)."""
        if self.kind == PLAN_HALVING:
            return Fraction(self.k, 2)
        return Fraction(self.h * self.k_prime, 2)

    @property
    def hard_rounds_bound(self) -> int:
        """Worst-case rounds by exact potential accounting (2k'^3 per phase)."""
        if self.kind == PLAN_HALVING:
            return self.k
        return 2 * self.h * self.k_prime**3


def _quartering_plan(n: int, k: int, c: float) -> Optional[MainFillerPlan]:
    if k >= n:
        return None
    k_prime = max(2, math.ceil(k / (c * math.log(n / k))))
    h = 0
    while k_prime * 4 ** (h + 1) <= n:
        h += 1
    if h < 2:
        return None
    r = h // 2
    return MainFillerPlan(
        kind=PLAN_QUARTERING,
        n=n,
        k=k,
        c=c,
        k_prime=k_prime,
        h=h,
        r=r,
        n_prime=k_prime * 4**h,
        backlog_guarantee=Fraction(r * k_prime),
        rounds_budget=8 * r * k_prime**3 + k,
    )


def _targeted_plan(n: int, k: int, c: float) -> Optional[MainFillerPlan]:
    best: Optional[MainFillerPlan] = None
    best_cost = None
    s = 1
    while 2 * 4**s <= n:
        k2 = math.ceil(2 * k / s)
        if k2 * 4**s <= n:
            cost = 2 * s * k2**3
            if best_cost is None or cost < best_cost:
                best_cost = cost
                best = MainFillerPlan(
                    kind=PLAN_TARGETED,
                    n=n,
                    k=k,
                    c=c,
                    k_prime=k2,
                    h=s,
                    r=s // 2,
                    n_prime=k2 * 4**s,
                    backlog_guarantee=Fraction(s * k2, 2),
                    rounds_budget=8 * s * k2**3 + k,
                )
        s += 1
    return best


def make_plan(n: int, k: int, c: float = 2.0, ensure_target: bool = False) -> MainFillerPlan:
    """Choose the amplification schedule for backlog scale k over n cups.

    Small targets (2^k <= n) use the binary-halving branch: backlog k/2 in k
    rounds.  Otherwise the quartering schedule applies with k' from the
    c-calibrated formula.  With ensure_target=True the plan must guarantee
    backlog >= k, searching over schedules if the default undershoots.
    """
    if n < 2 or k < 1:
        raise InfeasiblePlanError("need n >= 2 and k >= 1")
    if k > c * n:
        raise InfeasiblePlanError(f"k = {k} exceeds c*n = {c * n}")
    if not ensure_target:
        if k <= math.log2(n):
            return MainFillerPlan(
                kind=PLAN_HALVING,
                n=n,
                k=k,
                c=c,
                backlog_guarantee=Fraction(k, 2),
                rounds_budget=k,
            )
        plan = _quartering_plan(n, k, c)
        if plan is None:
            raise InfeasiblePlanError(
                f"no quartering schedule for k={k} at n={n} (k too large relative to n)"
            )
        return plan
    candidates = []
    if 2 * k <= math.log2(n):
        candidates.append(
            MainFillerPlan(
                kind=PLAN_HALVING,
                n=n,
                k=2 * k,
                c=c,
                backlog_guarantee=Fraction(k),
                rounds_budget=2 * k,
            )
        )
    targeted = _targeted_plan(n, k, c)
    if targeted is not None:
        candidates.append(targeted)
    if not candidates:
        raise InfeasiblePlanError(f"cannot guarantee backlog {k} with {n} cups")
    return min(candidates, key=lambda p: p.rounds_budget)


class MainFiller:
    """The amplification filler: executes its plan's move stream obliviously.

    The stream is computed against an internal shadow that assumes a greedy
    emptier in the negative-fill game, where every planned net effect is
    exact for any tie policy.  Run under other variants or emptiers the
    moves remain valid but the guarantees apply only to the intended game.
    """

    denominator_hint = 2

    def __init__(
        self,
        n: int,
        k: int,
        c: float = 2.0,
        ensure_target: bool = False,
        variant: GameVariant = NEGATIVE_FILL,
        plan: Optional[MainFillerPlan] = None,
    ):
        self.n = n
        self.k = k
        self.variant = variant
        self.plan = plan if plan is not None else make_plan(n, k, c, ensure_target)
        self.shadow = _Multiset((ZERO,) * n)
        self.rounds_used = 0
        self.plan_complete = False
        self._halving_round = 0
        self._phase_index = 0
        self._phase: Optional[_AdvancedCore] = None

    def achieved_backlog(self) -> Fraction:
        return self.shadow.max_level()

    def _next_split(self) -> Optional[tuple[Fraction, int]]:
        plan = self.plan
        if plan.kind == PLAN_HALVING:
            i = self._halving_round
            if i >= plan.k:
                return None
            self._halving_round += 1
            return Fraction(i, 2), 2 ** (plan.k - i - 1)
        assert plan.k_prime is not None and plan.h is not None and plan.n_prime is not None
        while True:
            if self._phase is None:
                if self._phase_index >= plan.h:
                    return None
                j = self._phase_index
                base = Fraction(j * plan.k_prime, 2)
                m = plan.n_prime // 4**j
                self._phase = _AdvancedCore(base, plan.k_prime, m)
            split = self._phase.step()
            if split is not None:
                return split
            self._phase = None
            self._phase_index += 1

    def _probe_complete(self) -> None:
        if self.plan.kind == PLAN_HALVING:
            done = self._halving_round >= self.plan.k
        else:
            done = self._phase_index >= self.plan.h or (
                self._phase_index == self.plan.h - 1
                and self._phase is not None
                and self._phase.finished()
            )
        if done:
            self.plan_complete = True

    def _emit(self) -> Optional[tuple[int, int]]:
        """Advance the plan one round; returns (prefix, run) or None when done."""
        split = self._next_split()
        if split is None:
            self.plan_complete = True
            return None
        level, q = split
        prefix = self.shadow.count_above(level)
        self.shadow.apply_split(level, q)
        self.rounds_used += 1
        self._probe_complete()
        return prefix, 2 * q

    def next_move(self, state: CupState) -> FillerMove:
        pattern = self._emit()
        if pattern is None:
            return hold_state_move(self.n)
        prefix, run = pattern
        additions = (ONE,) * prefix + (HALF,) * run + (ZERO,) * (self.n - prefix - run)
        return FillerMove(prefix + run // 2, additions)

    def next_move_ints(self, fills: np.ndarray, den: int) -> tuple[int, np.ndarray]:
        pattern = self._emit()
        additions = np.zeros(self.n, dtype=np.int64)
        if pattern is None:
            additions[:] = den
            return self.n, additions
        prefix, run = pattern
        additions[:prefix] = den
        additions[prefix : prefix + run] = den // 2
        return prefix + run // 2, additions


class ChangeLimitedFiller:
    """Wraps a filler so p moves by at most 1 and only after `gap` steady rounds.

    Skip rounds put one unit into each of the current p fullest cups, which a
    greedy emptier immediately drains; the wrapped stream is therefore
    state-equivalent to the inner stream against greedy.  The inner strategy
    is polled while the state is paused on skips, which is sound for exactly
    that reason.
    """

    def __init__(self, inner, gap: int, record_p: bool = False):
        if gap < 1:
            raise InvalidMoveError("gap must be >= 1")
        self.inner = inner
        self.gap = gap
        self.current_p: Optional[int] = None
        self.stint = 0
        self.pending_move: Optional[FillerMove] = None
        self.pending_move_ints: Optional[tuple[int, np.ndarray]] = None
        self.pending_skips = 0
        self.total_rounds = 0
        self.inserted_rounds = 0
        self.record_p = record_p
        self.p_history: list[int] = []
        self.denominator_hint = getattr(inner, "denominator_hint", 2)

    @staticmethod
    def skip_move(n: int, p: int) -> FillerMove:
        return FillerMove(p, (ONE,) * p + (ZERO,) * (n - p))

    def _decide(self, fetch_inner) -> tuple[str, int]:
        """(action, p): action is "skip", "inner", or "done"."""
        if self.pending_skips > 0:
            self.pending_skips -= 1
            self.stint += 1
            assert self.current_p is not None
            return "skip", self.current_p
        if self.pending_move is None and self.pending_move_ints is None:
            if not fetch_inner():
                return "done", 0
        target = (
            self.pending_move.p
            if self.pending_move is not None
            else self.pending_move_ints[0]
        )
        if self.current_p is None or target == self.current_p:
            self.current_p = target
            self.stint += 1
            return "inner", target
        if self.stint < self.gap:
            self.stint += 1
            return "skip", self.current_p
        self.current_p += 1 if target > self.current_p else -1
        self.stint = 1
        # gap skip rounds at each intermediate value, and at the target
        # before the real move plays there.
        self.pending_skips = self.gap - 1
        return "skip", self.current_p

    def _log(self, action: str, p: int) -> None:
        self.total_rounds += 1
        if action == "skip":
            self.inserted_rounds += 1
        if self.record_p:
            self.p_history.append(p)

    def next_move(self, state: CupState) -> Optional[FillerMove]:
        def fetch() -> bool:
            self.pending_move = self.inner.next_move(state)
            return self.pending_move is not None

        action, p = self._decide(fetch)
        if action == "done":
            return None
        self._log(action, p)
        if action == "skip":
            return self.skip_move(state.n, p)
        move = self.pending_move
        self.pending_move = None
        return move

    def next_move_ints(self, fills: np.ndarray, den: int) -> tuple[int, np.ndarray]:
        def fetch() -> bool:
            self.pending_move_ints = self.inner.next_move_ints(fills, den)
            return True

        action, p = self._decide(fetch)
        self._log(action, p)
        if action == "skip":
            additions = np.zeros(len(fills), dtype=np.int64)
            additions[:p] = den
            return p, additions
        assert self.pending_move_ints is not None
        result = self.pending_move_ints
        self.pending_move_ints = None
        return result


class RandomFiller:
    """Uniform random p and a random valid grid-quantized addition vector."""

    def __init__(self, n: int, seed: int, grid=HALF):
        grid = rat(grid)
        if grid <= 0 or (1 / grid).denominator != 1:
            raise InvalidMoveError("grid must be a positive unit fraction")
        self.n = n
        self.seed = seed
        self.grid = grid
        self.g = int(1 / grid)
        self.denominator_hint = self.g
        self._rng = random.Random(seed)
        self._np_rng = np.random.RandomState(seed)

    def next_move(self, state: CupState) -> FillerMove:
        n, g = self.n, self.g
        p = self._rng.randint(1, n)
        remaining = p * g
        units = [0] * n
        order = list(range(n))
        self._rng.shuffle(order)
        for slot, pos in enumerate(order):
            slots_left = n - slot - 1
            lo = max(0, remaining - g * slots_left)
            hi = min(g, remaining)
            u = self._rng.randint(lo, hi)
            units[pos] = u
            remaining -= u
        assert remaining == 0
        return FillerMove(p, tuple(Fraction(u, g) for u in units))

    def next_move_ints(self, fills: np.ndarray, den: int) -> tuple[int, np.ndarray]:
        n, g = self.n, self.g
        rng = self._np_rng
        p = int(rng.randint(1, n + 1))
        units = rng.multinomial(p * g, np.full(n, 1.0 / n))
        excess = int(np.maximum(units - g, 0).sum())
        units = np.minimum(units, g)
        while excess > 0:
            room = np.flatnonzero(units < g)
            take = room[: min(excess, room.size)]
            units[take] += 1
            excess -= take.size
        return p, units.astype(np.int64) * (den // g)


class WlogFiller:
    """Applies the minimum-fill-per-cup rewrite to an inner filler's moves."""

    def __init__(self, inner, epsilon, n: int):
        self.inner = inner
        self.epsilon = rat(epsilon)
        self.n = n
        inner_hint = getattr(inner, "denominator_hint", 2)
        self.denominator_hint = inner_hint * self.epsilon.denominator * n

    def next_move(self, state: CupState) -> Optional[FillerMove]:
        from .emptiers import wlog_transform

        move = self.inner.next_move(state)
        if move is None:
            return None
        return wlog_transform(move, self.epsilon, self.n)

    def next_move_ints(self, fills: np.ndarray, den: int) -> tuple[int, np.ndarray]:
        inner_hint = getattr(self.inner, "denominator_hint", 2)
        p, units = self.inner.next_move_ints(fills, inner_hint)
        pe, qe = self.epsilon.numerator, self.epsilon.denominator
        base = den // (inner_hint * qe * self.n)
        out = ((qe - pe) * units * self.n + pe * p * inner_hint) * base
        return p, out


class ScriptFiller:
    """Replays a fixed move list; used for cross-engine validation."""

    def __init__(self, moves: Sequence[FillerMove]):
        self.moves = list(moves)
        self._i = 0
        dens = [a.denominator for m in moves for a in m.additions] or [1]
        self.denominator_hint = math.lcm(*dens)

    def next_move(self, state: CupState) -> Optional[FillerMove]:
        if self._i >= len(self.moves):
            return None
        move = self.moves[self._i]
        self._i += 1
        return move

    def next_move_ints(self, fills: np.ndarray, den: int) -> tuple[int, np.ndarray]:
        move = self.moves[self._i]
        self._i += 1
        units = np.array(
            [a.numerator * (den // a.denominator) for a in move.additions],
            dtype=np.int64,
        )
        return move.p, units
