"""Co-simulation of a negative-fill cup game with stone-game shadow traces.

A random cup game against a greedy emptier is mirrored round by round:

* a stone trace S with 2*S majorizing the cup fills, built by pushing each
  cup move through the majorization transfer onto 2*S and then covering the
  transferred round by a symmetric +-2 stone step;
* a checkpointed trace W dominating S, built with the domination transfer.

All arithmetic runs on integers: cup fills are half-integers stored doubled,
so 2*S doubles again to scale 4.  Every round asserts the two invariants the
reduction promises, and the W moves are collected for the per-level
potential accounting.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .core import CupGameError, normalize_additions
from .fillers import RandomFiller
from .order import (
    greedy_round,
    stone_transfer,
    transfer_move_across,
)
from .stonegame import StoneMove, StoneState, apply_stone_move


def _prefix_majorizes(x: list, y: list) -> bool:
    px = py = 0
    for a, b in zip(x, y):
        px += a
        py += b
        if px < py:
            return False
    return px == py


@dataclass
class CosimResult:
    n: int
    rounds: int
    seed: int
    ell: int
    violations: list[str] = field(default_factory=list)
    stone_moves: list[StoneMove] = field(default_factory=list)
    ell_moves: list[StoneMove] = field(default_factory=list)
    final_cup_backlog: Fraction = Fraction(0)
    cup_backlogs_x2: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def run_cosim(n: int, rounds: int, seed: int, ell: int = 4) -> CosimResult:
    """Play a random negative-fill game vs greedy and verify the shadow chain.

    After every round: 2 * stone positions majorizes the cup fills, and the
    checkpointed trace dominates the stone trace pointwise.
    """
    if n < 2 or rounds < 0 or ell < 1:
        raise CupGameError("need n >= 2, rounds >= 0, ell >= 1")
    result = CosimResult(n=n, rounds=rounds, seed=seed, ell=ell)
    filler = RandomFiller(n, seed=seed)
    unit = 2  # one unit of water, at doubled (half-integer) scale
    cups = [0] * n  # cup fills x2
    stones = [0] * n  # stone positions
    ell_state = StoneState((0,) * n, checkpoint_len=ell)

    for rnd in range(1, rounds + 1):
        move = filler.next_move(None)  # random filler ignores the state
        adds = [int(a * 2) for a in move.additions]
        adds = list(normalize_additions(cups, adds, unit))
        new_cups = list(greedy_round(cups, adds, move.p, unit))

        # Everything lives at doubled scale: cups = 2*y, even = 2*(2*stones).
        # majorizes(2*stones, y) is majorizes(even, cups) here.
        even = [4 * s for s in stones]
        t_p, t_adds = transfer_move_across(even, cups, move.p, adds, unit=unit)
        covered = greedy_round(even, t_adds, t_p, unit)
        new_stones = list(stones)
        stone_move = None
        if t_p < n:
            level = even[t_p - 1]
            count = sum(1 for v in even if v == level) // 2
            if count >= 1:
                k = level // 4
                moved_up = moved_down = count
                for i, v in enumerate(new_stones):
                    if v != k:
                        continue
                    if moved_up:
                        new_stones[i] = k + 1
                        moved_up -= 1
                    elif moved_down:
                        new_stones[i] = k - 1
                        moved_down -= 1
                new_stones.sort(reverse=True)
                stone_move = StoneMove(level=k, count=count)

        new_even = [4 * s for s in new_stones]
        if not _prefix_majorizes(new_even, list(covered)):
            result.violations.append(
                f"round {rnd}: stone cover lost majorization over the transferred round"
            )
        if not _prefix_majorizes(new_even, new_cups):
            result.violations.append(
                f"round {rnd}: 2*stones no longer majorizes the cup fills"
            )

        if stone_move is not None:
            result.stone_moves.append(stone_move)
            w_move = stone_transfer(
                ell_state, StoneState(tuple(stones)), stone_move
            )
            if w_move is not None:
                ell_state = apply_stone_move(ell_state, w_move)
                result.ell_moves.append(w_move)
            if any(
                w < s for w, s in zip(ell_state.positions, new_stones)
            ):
                result.violations.append(
                    f"round {rnd}: checkpointed trace no longer dominates the stones"
                )

        cups = new_cups
        stones = new_stones
        result.cup_backlogs_x2.append(cups[0])

    result.final_cup_backlog = Fraction(cups[0], 2)
    return result
