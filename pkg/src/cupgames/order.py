"""Majorization, domination, monopolization, and the transfer constructions.

These are the order-theoretic tools that move a round of play from a
"better" state to a "worse" one while preserving the order relation:

* weak monopolization drives the greedy-is-optimal argument (one unit of
  water moved down from a fuller cup, or plain domination);
* majorization (prefix-sum dominance at equal sums) relates cup play to
  stone play; a round on the majorized side can always be mirrored on the
  majorizing side, possibly with a different processor count;
* domination (pointwise after sorting) relates the stone game to its
  checkpointed variant.

Every transfer here is closed-loop testable: apply the constructed move and
re-check the predicate.  The internal single-perturbation transfer is
parameterized by the scaled value of one unit of water so that half-integer
co-simulations can run on plain ints.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import (
    ONE,
    ZERO,
    CupGameError,
    CupState,
    EmptierMove,
    FillerMove,
    InvalidMoveError,
    normalize_additions,
    rat,
)
from .emptiers import greedy_empty
from .fillers import hold_state_move
from .stonegame import StoneMove, StoneState


def _sorted_desc(values) -> tuple:
    return tuple(sorted(values, reverse=True))


def majorizes(x: Sequence, y: Sequence) -> bool:
    """Prefix-sum dominance of x over y; requires equal lengths and sums."""
    if len(x) != len(y):
        raise CupGameError("majorization needs equal lengths")
    xs, ys = _sorted_desc(x), _sorted_desc(y)
    if sum(xs) != sum(ys):
        return False
    px = py = 0
    for a, b in zip(xs, ys):
        px += a
        py += b
        if px < py:
            return False
    return True


def dominates(x: Sequence, y: Sequence) -> bool:
    """Pointwise dominance after sorting both sequences."""
    if len(x) != len(y):
        raise CupGameError("domination needs equal lengths")
    return all(a >= b for a, b in zip(_sorted_desc(x), _sorted_desc(y)))


@dataclass(frozen=True)
class Perturbation:
    """Move `amount` from the cup at sorted position from_index to to_index.

    Indices are 1-based positions in the sorted (non-increasing) sequence;
    the receiver to_index precedes the giver from_index.
    """

    from_index: int
    to_index: int
    amount: Fraction

    def __post_init__(self) -> None:
        if not self.to_index < self.from_index:
            raise CupGameError("receiver must precede giver in sorted order")


def apply_perturbation(seq: Sequence, pert: Perturbation) -> tuple:
    out = list(seq)
    out[pert.to_index - 1] += pert.amount
    out[pert.from_index - 1] -= pert.amount
    return tuple(out)


def _next_transform(x: Sequence, z: Sequence) -> Optional[tuple[int, int, object]]:
    """Next sortedness-preserving transfer (j, k, delta), 0-based, or None.

    j is the first position where z differs from x (there x exceeds z is
    impossible; x majorizes z forces x[j] > z[j]), k the last position of the
    tie block around the first deficit after j.  Moving delta from k to j
    keeps z sorted and keeps x majorizing z; repeating converges to x.
    """
    n = len(x)
    j = next((i for i in range(n) if x[i] != z[i]), None)
    if j is None:
        return None
    if x[j] < z[j]:
        raise CupGameError("x does not majorize z")
    k = next(i for i in range(j + 1, n) if x[i] < z[i])
    while k + 1 < n and z[k + 1] == z[k]:
        k += 1
    delta = min(x[j] - z[j], z[k] - x[k])
    if k + 1 < n:
        delta = min(delta, z[k] - z[k + 1])
    if delta <= 0:
        raise AssertionError("stalled majorization transform")
    return j, k, delta


def perturbation_chain(x: Sequence, y: Sequence) -> list[Perturbation]:
    """Perturbations (each with amount in (0,1)) transforming y into x.

    Every intermediate sequence stays sorted and majorized by x.  Transfers
    larger than a unit are emitted as equal pieces of delta/(floor(delta)+1),
    so a whole-unit transfer becomes two half-unit perturbations.
    """
    if not majorizes(x, y):
        raise CupGameError("perturbation chain needs majorizes(x, y)")
    xs = _sorted_desc(rat(v) for v in x)
    z = list(_sorted_desc(rat(v) for v in y))
    chain: list[Perturbation] = []
    while True:
        step = _next_transform(xs, z)
        if step is None:
            break
        j, k, delta = step
        pieces = int(delta) + 1 if delta >= 1 else 1
        eps = delta / pieces
        for _ in range(pieces):
            chain.append(Perturbation(from_index=k + 1, to_index=j + 1, amount=eps))
        z[j] += delta
        z[k] -= delta
    return chain


@dataclass(frozen=True)
class MonopolizationWitness:
    """Cup labeling certifying that A monopolizes B (all positions 0-based)."""

    pos_a1: int
    pos_a2: int
    pos_b1: int
    pos_b2: int
    c: Fraction
    mapping: tuple[tuple[int, int], ...]  # (posA, posB) pairs for cups 3..n


def find_monopolization(a_fills: Sequence, b_fills: Sequence) -> Optional[MonopolizationWitness]:
    """Search the O(n^2) candidate labelings for a monopolization witness."""
    n = len(a_fills)
    if n < 2 or len(b_fills) != n:
        return None
    count_b = Counter(b_fills)
    seen_a1 = set()
    for pos_a1, a1 in enumerate(a_fills):
        if a1 in seen_a1:
            continue
        seen_a1.add(a1)
        b1 = a1 - 1
        if count_b.get(b1, 0) == 0:
            continue
        pos_b1 = b_fills.index(b1)
        seen_b2 = set()
        for pos_b2, b2 in enumerate(b_fills):
            if pos_b2 == pos_b1 or b2 in seen_b2:
                continue
            seen_b2.add(b2)
            if not b2 < a1:
                continue
            rest_a = Counter(a_fills)
            rest_a[a1] -= 1
            rest_b = Counter(b_fills)
            rest_b[b1] -= 1
            rest_b[b2] -= 1
            diff = rest_a - rest_b
            back = rest_b - rest_a
            if sum(back.values()) != 0 or sum(diff.values()) != 1:
                continue
            (a2,) = diff.elements()
            c = b2 - a2
            if not ZERO <= c <= 1:
                continue
            pos_a2 = next(
                i for i, v in enumerate(a_fills) if v == a2 and i != pos_a1
            )
            used_a = {pos_a1, pos_a2}
            used_b = {pos_b1, pos_b2}
            rest_pos_a = [i for i in range(n) if i not in used_a]
            rest_pos_b = [i for i in range(n) if i not in used_b]
            rest_pos_a.sort(key=lambda i: a_fills[i], reverse=True)
            rest_pos_b.sort(key=lambda i: b_fills[i], reverse=True)
            return MonopolizationWitness(
                pos_a1=pos_a1,
                pos_a2=pos_a2,
                pos_b1=pos_b1,
                pos_b2=pos_b2,
                c=c,
                mapping=tuple(zip(rest_pos_a, rest_pos_b)),
            )
    return None


def weakly_monopolizes(a: CupState, b: CupState) -> bool:
    """A dominates B, or A monopolizes B under some cup labeling."""
    if a.n != b.n or a.variant != b.variant:
        raise CupGameError("states must share n and variant")
    if dominates(a.fills, b.fills):
        return True
    return find_monopolization(a.fills, b.fills) is not None


def transfer_filler_move(a: CupState, b: CupState, move_b: FillerMove) -> FillerMove:
    """Filler move on A preserving weak monopolization over B's move result."""
    if dominates(a.fills, b.fills):
        return move_b
    witness = find_monopolization(a.fills, b.fills)
    if witness is None:
        raise CupGameError("transfer needs weakly_monopolizes(A, B)")
    adds = [ZERO] * a.n
    adds[witness.pos_a1] = move_b.additions[witness.pos_b1]
    adds[witness.pos_a2] = move_b.additions[witness.pos_b2]
    for pa, pb in witness.mapping:
        adds[pa] = move_b.additions[pb]
    cup1_filled = a.fills[witness.pos_a1] + adds[witness.pos_a1]
    b2_after = b.fills[witness.pos_b2] + move_b.additions[witness.pos_b2]
    if cup1_filled > b2_after:
        return FillerMove(move_b.p, tuple(adds))
    r = move_b.additions[witness.pos_b1]
    w2 = move_b.additions[witness.pos_b2]
    q = a.fills[witness.pos_a1] - b.fills[witness.pos_b2]
    s = w2 - r - q
    if s < 0:
        raise AssertionError("monopolization gap accounting failed")
    adds[witness.pos_a1] = r + s
    adds[witness.pos_a2] = q + r
    return FillerMove(move_b.p, tuple(adds))


def transfer_emptier_move(a: CupState, b: CupState, p: int) -> EmptierMove:
    """Emptier move on B matching greedy emptying of A, preserving the order."""
    selected_a = {i - 1 for i in greedy_empty(a, p).indices}
    if dominates(a.fills, b.fills):
        return EmptierMove(tuple(i + 1 for i in selected_a))
    witness = find_monopolization(a.fills, b.fills)
    if witness is None:
        raise CupGameError("transfer needs weakly_monopolizes(A, B)")
    partner = {witness.pos_a1: witness.pos_b1, witness.pos_a2: witness.pos_b2}
    partner.update(dict(witness.mapping))
    has_cup1 = witness.pos_a1 in selected_a
    has_cup2 = witness.pos_a2 in selected_a
    if has_cup2 and not has_cup1:
        raise AssertionError("greedy selected cup 2 without the fuller cup 1")
    chosen_b = {partner[i] for i in selected_a}
    if has_cup1 and not has_cup2:
        chosen_b.discard(witness.pos_b1)
        chosen_b.add(witness.pos_b2)
    return EmptierMove(tuple(i + 1 for i in chosen_b))


def greedy_round(fills: Sequence, additions: Sequence, p: int, unit=ONE) -> tuple:
    """Negative-fill round: add, sort, drain a unit from the p fullest."""
    post = sorted((f + a for f, a in zip(fills, additions)), reverse=True)
    return _sorted_desc(v - unit if i < p else v for i, v in enumerate(post))


def _neg_reverse(values: Sequence) -> tuple:
    return tuple(-v for v in reversed(values))


def _transfer_single(
    z: Sequence, y: Sequence, p: int, additions: Sequence, j: int, k: int, eps, unit
):
    """Move on z mirroring (p, additions) on y, where z = y + eps at j, - eps at k.

    Implements the four-case analysis; case 4 (a_k = 1) reduces to cases 2/3
    through the negation symmetry of the negative-fill game.  Returns
    (p', additions'), not necessarily normalized.  0-based j < k.
    """
    n = len(y)
    if p == n:
        return n, (unit,) * n
    a = list(additions)
    if a[j] > 0 and a[k] < unit:
        reduce_by = min(a[j], unit - a[k], eps)
        a[j] -= reduce_by
        a[k] += reduce_by
        if reduce_by == eps:
            return p, tuple(a)
        eps = eps - reduce_by
        y = list(y)
        y[j] += reduce_by
        y[k] -= reduce_by
    if a[j] == 0:
        if p <= j:
            return p, tuple(a)
        a[j] = unit
        return p + 1, tuple(a)
    if a[k] == unit:
        neg_add = tuple(unit - v for v in reversed(a))
        res_p, res_add = _transfer_single(
            _neg_reverse(z), _neg_reverse(y), n - p, neg_add, n - 1 - k, n - 1 - j, eps, unit
        )
        if res_p == n:
            return n, (unit,) * n
        return n - res_p, tuple(unit - v for v in reversed(res_add))
    raise AssertionError("perturbation transfer cases not exhaustive")


def transfer_move_across(x: Sequence, y: Sequence, p: int, additions: Sequence, unit=ONE):
    """(p', additions') on x whose greedy-emptied result majorizes y's result.

    x and y are sorted with equal sums and x majorizes y; additions must be
    normalized against y.  Walks the perturbation decomposition from y up to
    x, pushing the move through one perturbation at a time.
    """
    z = list(y)
    move_p, move_add = p, tuple(additions)
    while True:
        step = _next_transform(x, z)
        if step is None:
            break
        j, k, delta = step
        z2 = list(z)
        z2[j] += delta
        z2[k] -= delta
        move_p, move_add = _transfer_single(z2, z, move_p, move_add, j, k, delta, unit)
        move_add = normalize_additions(z2, move_add, unit)
        z = z2
    return move_p, move_add


def majorization_transfer(x: Sequence, y: Sequence, move_y: FillerMove) -> FillerMove:
    """Filler move on x (negative-fill game, greedy emptier) covering move_y on y."""
    xs = _sorted_desc(rat(v) for v in x)
    ys = _sorted_desc(rat(v) for v in y)
    if not majorizes(xs, ys):
        raise CupGameError("majorization transfer needs majorizes(x, y)")
    adds = normalize_additions(ys, move_y.additions)
    p, adds = transfer_move_across(xs, ys, move_y.p, adds)
    return FillerMove(p, adds) if p < len(xs) else hold_state_move(len(xs))


def stone_transfer(x: StoneState, y: StoneState, move_y: StoneMove) -> Optional[StoneMove]:
    """Stone move on x preserving dominance over y's move result; None = no-op.

    Follows the index-window construction: if every x above the moved level
    already clears it, nothing needs to move; otherwise the raise window
    shifts to start where x first touches the level.
    """
    if not dominates(x.positions, y.positions):
        raise CupGameError("stone transfer needs dominates(x, y)")
    k, q = move_y.level, move_y.count
    ys = y.positions
    n = len(ys)
    block = [i for i, v in enumerate(ys) if v == k]
    if len(block) < 2 * q:
        raise InvalidMoveError("move does not fit y's level block")
    bstart = block[0]
    raise_end = bstart + q - 1
    xs = x.positions
    r = next((i for i, v in enumerate(xs) if v <= k), n)
    if r > raise_end:
        return None
    count = raise_end - r + 1
    if any(xs[i] != k for i in range(r, r + 2 * count)):
        raise AssertionError("domination did not pin x's level block")
    return StoneMove(level=k, count=count)


def stone_cover_move(x: Sequence, move: FillerMove) -> tuple[int, int]:
    """Level and count of the symmetric +-2 stone step covering a cup round.

    x holds even integers sorted non-increasing; `move` (normalized against
    x) plus greedy emptying produces some x'.  Raising `count` of the cups at
    the returned level by 2 and lowering `count` by 2 majorizes sorted(x').
    """
    xs = tuple(x)
    if any(v % 2 for v in xs):
        raise CupGameError("cover move needs even integer fills")
    k = xs[move.p - 1]
    block = [i for i, v in enumerate(xs) if v == k]
    return k, len(block) // 2


def negate_round(move: FillerMove, n: int) -> FillerMove:
    """Mirror of a move: additions' = reversed(1 - additions), p' = n - p.

    The hold-state move (p = n) mirrors to itself: its literal mirror would
    need p = 0, and both are no-ops against greedy emptying.
    """
    if move.p == n:
        return hold_state_move(n)
    return FillerMove(n - move.p, tuple(ONE - a for a in reversed(move.additions)))


def negate_state(state: CupState) -> CupState:
    return CupState(_sorted_desc(-f for f in state.fills), state.variant)
