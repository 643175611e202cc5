"""Stone-variant and checkpoint (l-variant) games, potentials, and verifiers.

The stone game works on integer positions: a move picks a level k holding at
least 2q stones and sends q up to k+1 and q down to k-1.  The l-variant adds
checkpoints at multiples of l >= 1: positions are non-negative, and a move at
a checkpoint level keeps its down-stones in place, so a stone never drops
below a checkpoint it has reached.

Two potentials drive the upper-bound accounting: the sum of squared
positions, and n times the total absolute position plus all pairwise
absolute differences.  Their banded versions restrict to the top n_a cups
through the clamp f(x) = max(0, min(x - a*l, l)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .core import CupGameError, InvalidMoveError


@dataclass(frozen=True)
class StoneState:
    """Sorted (non-increasing) integer positions; checkpoint_len marks the l-variant."""

    positions: tuple[int, ...]
    checkpoint_len: Optional[int] = None

    def __post_init__(self) -> None:
        if len(self.positions) < 1:
            raise CupGameError("need at least one stone")
        if any(
            self.positions[i] < self.positions[i + 1]
            for i in range(len(self.positions) - 1)
        ):
            raise CupGameError("positions must be sorted non-increasing")
        if self.checkpoint_len is not None:
            if self.checkpoint_len < 1:
                raise CupGameError("checkpoint length must be >= 1")
            if self.positions[-1] < 0:
                raise CupGameError("l-variant positions must be non-negative")

    @property
    def n(self) -> int:
        return len(self.positions)

    @property
    def is_checkpointed(self) -> bool:
        return self.checkpoint_len is not None


def stone_state(values: Iterable[int], checkpoint_len: Optional[int] = None) -> StoneState:
    return StoneState(tuple(sorted(values, reverse=True)), checkpoint_len)


def stone_zeros(n: int, checkpoint_len: Optional[int] = None) -> StoneState:
    return StoneState((0,) * n, checkpoint_len)


@dataclass(frozen=True)
class StoneMove:
    level: int
    count: int

    def __post_init__(self) -> None:
        if self.count < 1:
            raise InvalidMoveError("stone move count must be >= 1")


def is_checkpoint(level: int, checkpoint_len: Optional[int]) -> bool:
    return checkpoint_len is not None and level % checkpoint_len == 0


def apply_stone_move(state: StoneState, move: StoneMove) -> StoneState:
    """q stones k -> k+1 and q stones k -> k-1 (down-stones stay at checkpoints)."""
    k, q = move.level, move.count
    have = sum(1 for x in state.positions if x == k)
    checkpoint = is_checkpoint(k, state.checkpoint_len)
    needed = q if checkpoint else 2 * q
    if have < needed:
        raise InvalidMoveError(
            f"{have} stones at level {k}, move needs {needed}"
        )
    out = list(state.positions)
    ups = downs = q
    for i, x in enumerate(out):
        if x != k:
            continue
        if ups > 0:
            out[i] = k + 1
            ups -= 1
        elif not checkpoint and downs > 0:
            out[i] = k - 1
            downs -= 1
    out.sort(reverse=True)
    return StoneState(tuple(out), state.checkpoint_len)


def enumerate_valid_moves(state: StoneState) -> list[tuple[int, int]]:
    """All (level, q_max) pairs; empty means the game is over."""
    counts: dict[int, int] = {}
    for x in state.positions:
        counts[x] = counts.get(x, 0) + 1
    return sorted(
        ((k, c // 2) for k, c in counts.items() if c >= 2), reverse=True
    )


def phi(positions: Sequence[int]) -> int:
    """Sum of squared positions."""
    return sum(x * x for x in positions)


def psi(positions: Sequence[int]) -> int:
    """n * sum|x| + all pairwise |x_i - x_j|, in O(n log n) via sorted prefix sums.

    For x sorted non-increasing the pairwise sum is sum_i (n - 2i + 1) x_i.
    """
    xs = sorted(positions, reverse=True)
    n = len(xs)
    pairwise = sum((n - 2 * i + 1) * x for i, x in enumerate(xs, start=1))
    return n * sum(abs(x) for x in xs) + pairwise


def f_al(x: int, a: int, l: int) -> int:
    """Clamp of the offset into band a: max(0, min(x - a*l, l))."""
    if a < 0 or l < 1:
        raise CupGameError("need a >= 0 and l >= 1")
    return max(0, min(x - a * l, l))


def _band_values(positions: Sequence[int], a: int, l: int, n_a: int) -> list[int]:
    if not 0 <= n_a <= len(positions):
        raise CupGameError(f"n_a = {n_a} outside [0, {len(positions)}]")
    top = sorted(positions, reverse=True)[:n_a]
    return [f_al(x, a, l) for x in top]


def phi_a(positions: Sequence[int], a: int, l: int, n_a: int) -> int:
    return sum(v * v for v in _band_values(positions, a, l, n_a))


def psi_a(positions: Sequence[int], a: int, l: int, n_a: int) -> int:
    vals = _band_values(positions, a, l, n_a)
    m = len(vals)
    pairwise = sum((m - 2 * i + 1) * v for i, v in enumerate(vals, start=1))
    return n_a * sum(vals) + pairwise


def no_gaps_check(state: StoneState) -> Optional[int]:
    """None if gap-free; else the violating level.

    Every occupied level k >= 3 needs an occupied level at k-1 or k-2; in the
    plain stone game the mirrored condition applies for k <= -3.
    """
    occupied = sorted(set(state.positions))
    for i, k in enumerate(occupied):
        if k >= 3:
            below = occupied[i - 1] if i > 0 else None
            if below is None or below < k - 2:
                return k
        if k <= -3 and state.checkpoint_len is None:
            above = occupied[i + 1] if i + 1 < len(occupied) else None
            if above is None or above > k + 2:
                return k
    return None


@dataclass
class BandRow:
    band: int
    steps: int = 0
    phi_gain: int = 0
    sum_q: int = 0
    sum_q_sq: int = 0
    final_phi: int = 0
    final_psi: int = 0
    n_a: int = 0

    @property
    def cauchy_schwarz_bound(self) -> Fraction:
        if self.sum_q_sq == 0:
            return Fraction(0)
        return Fraction(self.sum_q**2, self.sum_q_sq)


@dataclass
class LevelReport:
    l: int
    n: int
    total_steps: int
    bands: list[BandRow] = field(default_factory=list)
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def level_report(
    initial: StoneState,
    moves: Sequence[StoneMove],
    l: Optional[int] = None,
    spot_check_stride: int = 97,
) -> LevelReport:
    """Bucket each step into its band and verify the potential accounting.

    Per step at band a (= moved level // l): the banded squared potential
    gains exactly q_t (2q interior, q at checkpoints) and the banded pairwise
    potential gains at least q_t^2 / 2.  Steps outside a band leave that
    band's potentials unchanged; the clamp makes this structural, so it is
    re-verified numerically only every `spot_check_stride` steps.  Band sizes
    n_a come from the final state: the cups that ever reach checkpoint a are
    exactly those at or above a*l at the end.  Verifies the Cauchy-Schwarz
    step bound |T_a| >= (sum q)^2 / (sum q^2) and the final-state bounds
    phi_a <= n_a l^2 and psi_a <= 2 n_a^2 l.
    """
    if l is None:
        if initial.checkpoint_len is None:
            raise CupGameError("level_report needs an l-variant trace")
        l = initial.checkpoint_len
    final = initial
    for mv in moves:
        final = apply_stone_move(final, mv)
    max_band = max((x // l for x in final.positions), default=0)
    n_a = {
        a: sum(1 for x in final.positions if x >= a * l) for a in range(max_band + 2)
    }

    report = LevelReport(l=l, n=initial.n, total_steps=len(moves))
    rows = {a: BandRow(band=a, n_a=n_a[a]) for a in range(max_band + 2)}
    state = initial
    for step, mv in enumerate(moves, start=1):
        a = mv.level // l
        checkpoint = is_checkpoint(mv.level, state.checkpoint_len)
        others = list(rows) if step % spot_check_stride == 0 else []
        before_phi = {b: phi_a(state.positions, b, l, n_a[b]) for b in (*others, a)}
        before_psi = {b: psi_a(state.positions, b, l, n_a[b]) for b in (*others, a)}
        state = apply_stone_move(state, mv)
        for b in before_phi:
            d_phi = phi_a(state.positions, b, l, n_a[b]) - before_phi[b]
            d_psi = psi_a(state.positions, b, l, n_a[b]) - before_psi[b]
            if b != a:
                if d_phi != 0 or d_psi != 0:
                    report.violations.append(
                        f"step {step}: band {b} potentials moved on a band-{a} step"
                    )
                continue
            q_t = mv.count if checkpoint else 2 * mv.count
            if d_phi != q_t:
                report.violations.append(
                    f"step {step}: band {a} phi gained {d_phi}, expected {q_t}"
                )
            if 2 * d_psi < q_t * q_t:
                report.violations.append(
                    f"step {step}: band {a} psi gained {d_psi} < q^2/2 = {q_t * q_t}/2"
                )
            row = rows[a]
            row.steps += 1
            row.phi_gain += d_phi
            row.sum_q += q_t
            row.sum_q_sq += q_t * q_t

    for a, row in rows.items():
        row.final_phi = phi_a(state.positions, a, l, n_a[a])
        row.final_psi = psi_a(state.positions, a, l, n_a[a])
        if row.sum_q_sq > 0 and row.steps * row.sum_q_sq < row.sum_q**2:
            report.violations.append(
                f"band {a}: step count {row.steps} below Cauchy-Schwarz bound"
            )
        if row.final_phi > row.n_a * l * l:
            report.violations.append(f"band {a}: final phi exceeds n_a*l^2")
        if row.final_psi > 2 * row.n_a**2 * l:
            report.violations.append(f"band {a}: final psi exceeds 2*n_a^2*l")
        report.bands.append(row)
    if sum(r.steps for r in rows.values()) != len(moves):
        report.violations.append("steps not partitioned among bands")
    return report


def bound_b_of_t(n: int, t: int) -> Fraction:
    """Optimal-backlog trade-off curve b(t), as a fixed-precision rational.

    Piecewise: t up to log2(n); then t^(1/3) * log2(n^3/t + 1)^(2/3); then n
    once t passes n^3.  Base-2 logs make the pieces meet continuously.
    """
    if n < 2 or t < 1:
        raise CupGameError("need n >= 2 and t >= 1")
    if t <= math.log2(n):
        value = float(t)
    elif t <= n**3:
        value = t ** (1 / 3) * math.log2(n**3 / t + 1) ** (2 / 3)
    else:
        value = float(n)
    return Fraction(round(value * 2**30), 2**30)


def bound_t_of_b(n: int, b: int) -> Fraction:
    """Inverse trade-off t(b) = b + b^3 / log2(n/b + 1)^2, fixed precision.

    The +1 inside the log keeps the expression finite at b = n, where the
    curve is Theta(n^3) anyway.
    """
    if n < 2 or not 1 <= b <= n:
        raise CupGameError("need n >= 2 and 1 <= b <= n")
    value = b + b**3 / math.log2(n / b + 1) ** 2
    return Fraction(round(value * 2**30), 2**30)
