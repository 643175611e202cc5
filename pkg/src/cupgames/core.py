"""Exact-arithmetic engine for variable-processor cup games.

Three variants share one engine: the standard game (emptying floors at 0),
the negative-fill game (emptying always subtracts a full unit), and the
resource-augmented game (emptying subtracts 1+eps, floored at 0).

All fills, additions and potentials are `fractions.Fraction`; nothing is
ever rounded.  States are multisets: every stored fill sequence is sorted
non-increasing, and moves address cups by their position in that sorted
order.  Cup indices in `EmptierMove` are 1-based to match the usual
"cups 1..n" convention.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, Optional, Protocol, Sequence, Union

Rational = Fraction
RationalLike = Union[Fraction, int, str]

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


class CupGameError(Exception):
    """Base class for all engine errors."""


class InvalidMoveError(CupGameError):
    """A filler or emptier move violates its invariants."""


class InvalidStateError(CupGameError):
    """A cup state violates its invariants."""


def rat(value: RationalLike) -> Fraction:
    """Coerce ints, 'num/den' strings, or Fractions to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_rational(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text)


class VariantKind(Enum):
    STANDARD = "standard"
    NEGATIVE_FILL = "negative_fill"
    AUGMENTED = "augmented"


@dataclass(frozen=True)
class GameVariant:
    """Which emptying rule is in force, plus epsilon for the augmented game."""

    kind: VariantKind
    epsilon: Optional[Fraction] = None

    def __post_init__(self) -> None:
        if self.kind is VariantKind.AUGMENTED:
            if self.epsilon is None or not (ZERO < self.epsilon <= ONE):
                raise InvalidStateError("augmented variant needs epsilon in (0, 1]")
        elif self.epsilon is not None:
            raise InvalidStateError(f"{self.kind.value} variant takes no epsilon")

    @property
    def removal(self) -> Fraction:
        """Units removed from each selected cup (before any flooring)."""
        if self.kind is VariantKind.AUGMENTED:
            assert self.epsilon is not None
            return ONE + self.epsilon
        return ONE

    @property
    def floors_at_zero(self) -> bool:
        return self.kind is not VariantKind.NEGATIVE_FILL

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "epsilon": format_rational(self.epsilon) if self.epsilon else None,
        }

    @staticmethod
    def from_json(obj: dict) -> "GameVariant":
        eps = obj.get("epsilon")
        return GameVariant(VariantKind(obj["kind"]), rat(eps) if eps else None)


STANDARD = GameVariant(VariantKind.STANDARD)
NEGATIVE_FILL = GameVariant(VariantKind.NEGATIVE_FILL)


def augmented(epsilon: RationalLike) -> GameVariant:
    return GameVariant(VariantKind.AUGMENTED, rat(epsilon))


def _sorted_desc(values: Iterable[Fraction]) -> tuple[Fraction, ...]:
    return tuple(sorted(values, reverse=True))


@dataclass(frozen=True)
class CupState:
    """Sorted (non-increasing) cup fills together with the variant tag."""

    fills: tuple[Fraction, ...]
    variant: GameVariant = NEGATIVE_FILL

    def __post_init__(self) -> None:
        if len(self.fills) < 1:
            raise InvalidStateError("need at least one cup")
        if any(self.fills[i] < self.fills[i + 1] for i in range(len(self.fills) - 1)):
            raise InvalidStateError("fills must be sorted non-increasing")
        if self.variant.floors_at_zero and self.fills[-1] < 0:
            raise InvalidStateError("negative fill outside the negative-fill game")

    @property
    def n(self) -> int:
        return len(self.fills)


def cup_state(values: Iterable[RationalLike], variant: GameVariant = NEGATIVE_FILL) -> CupState:
    """Build a CupState from unsorted values."""
    return CupState(_sorted_desc(rat(v) for v in values), variant)


def zeros(n: int, variant: GameVariant = NEGATIVE_FILL) -> CupState:
    return CupState((ZERO,) * n, variant)


def backlog(state: CupState) -> Fraction:
    """Maximum fill (not maximum absolute fill)."""
    return state.fills[0]


@dataclass(frozen=True)
class FillerMove:
    """One filler half-move: p processors and per-sorted-position additions."""

    p: int
    additions: tuple[Fraction, ...]


@dataclass(frozen=True)
class EmptierMove:
    """One emptier half-move: the 1-based sorted positions to empty from."""

    indices: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(set(self.indices)) != len(self.indices):
            raise InvalidMoveError("emptier indices must be distinct")
        object.__setattr__(self, "indices", tuple(sorted(self.indices)))


def validate_filler_move(state: CupState, move: FillerMove) -> Optional[str]:
    """Return None if the move is legal; otherwise a violation description."""
    n = state.n
    if not 1 <= move.p <= n:
        return f"p={move.p} outside [1, {n}]"
    if len(move.additions) != n:
        return f"additions has length {len(move.additions)}, expected {n}"
    for i, a in enumerate(move.additions):
        if not ZERO <= a <= ONE:
            return f"addition {format_rational(a)} at position {i + 1} outside [0, 1]"
    total = sum(move.additions, ZERO)
    if total != move.p:
        return f"additions sum to {format_rational(total)}, expected p={move.p}"
    return None


def require_valid_filler_move(state: CupState, move: FillerMove) -> None:
    reason = validate_filler_move(state, move)
    if reason is not None:
        raise InvalidMoveError(reason)


def normalize_additions(
    fills: Sequence, additions: Sequence, unit=ONE
) -> tuple:
    """Reorder additions via the bubble-exchange so post-fills are non-increasing.

    The terminal point of the exchange is additions' = sorted(fills + additions)
    minus fills, pointwise; each exchange keeps every addition in [0, unit], so
    the direct formula is safe.  Works for Fractions and for integer-scaled
    fills where `unit` is the scaled full unit of water.
    """
    post = sorted((f + a for f, a in zip(fills, additions)), reverse=True)
    out = tuple(y - f for y, f in zip(post, fills))
    for a in out:
        if a < 0 or a > unit:
            raise InvalidMoveError("normalization left an addition outside [0, 1]")
    return out


def normalize_filler_move(state: CupState, move: FillerMove) -> FillerMove:
    """Equivalent move (same post-fill multiset) with non-increasing post-fills."""
    require_valid_filler_move(state, move)
    return FillerMove(move.p, normalize_additions(state.fills, move.additions))


def apply_filler_move(state: CupState, move: FillerMove) -> CupState:
    """Post-fill state (re-sorted), before the emptier acts."""
    require_valid_filler_move(state, move)
    post = _sorted_desc(f + a for f, a in zip(state.fills, move.additions))
    return CupState(post, state.variant)


def apply_emptier_move(state_after_fill: CupState, move: EmptierMove) -> CupState:
    """Remove water from the selected cups per the variant's emptying rule."""
    n = state_after_fill.n
    for i in move.indices:
        if not 1 <= i <= n:
            raise InvalidMoveError(f"emptier index {i} outside [1, {n}]")
    removal = state_after_fill.variant.removal
    floors = state_after_fill.variant.floors_at_zero
    selected = set(move.indices)
    out = []
    for pos, f in enumerate(state_after_fill.fills, start=1):
        if pos in selected:
            f = f - removal
            if floors and f < 0:
                f = ZERO
        out.append(f)
    return CupState(_sorted_desc(out), state_after_fill.variant)


class FillerStrategy(Protocol):
    def next_move(self, state: CupState) -> Optional[FillerMove]:
        """Move for the current round, or None to declare the strategy done."""
        ...


class EmptierStrategy(Protocol):
    def next_move(self, state_after_fill: CupState, filler_move: FillerMove) -> EmptierMove:
        ...


@dataclass(frozen=True)
class RoundRecord:
    filler_move: FillerMove
    emptier_move: EmptierMove
    state_after: CupState
    round_index: int


class RecordLevel(Enum):
    FULL = "full"
    BACKLOG_ONLY = "backlog"


@dataclass
class GameTrace:
    initial_state: CupState
    rounds: list[RoundRecord] = field(default_factory=list)
    backlogs: list[Fraction] = field(default_factory=list)
    seed: Optional[int] = None
    stop_reason: str = "completed"

    @property
    def final_state(self) -> CupState:
        return self.rounds[-1].state_after if self.rounds else self.initial_state

    @property
    def rounds_played(self) -> int:
        return len(self.backlogs)

    @property
    def max_backlog(self) -> Fraction:
        return max(self.backlogs, default=backlog(self.initial_state))

    def replay(self) -> bool:
        """Re-apply every recorded move; True iff each state_after matches."""
        state = self.initial_state
        for rec in self.rounds:
            state = apply_emptier_move(
                apply_filler_move(state, rec.filler_move), rec.emptier_move
            )
            if state.fills != rec.state_after.fills:
                return False
        return True


def play_round(
    state: CupState, filler: FillerStrategy, emptier: EmptierStrategy, round_index: int = 1
) -> tuple[CupState, Optional[RoundRecord]]:
    """One full round: filler move (normalized), then emptier move.

    Returns (state, None) when the filler declares itself done.
    """
    move = filler.next_move(state)
    if move is None:
        return state, None
    move = normalize_filler_move(state, move)
    after_fill = apply_filler_move(state, move)
    emove = emptier.next_move(after_fill, move)
    if len(emove.indices) != move.p:
        raise InvalidMoveError(
            f"emptier chose {len(emove.indices)} cups, round has p={move.p}"
        )
    final = apply_emptier_move(after_fill, emove)
    return final, RoundRecord(move, emove, final, round_index)


def run_game(
    initial: CupState,
    filler: FillerStrategy,
    emptier: EmptierStrategy,
    t: int,
    record_level: RecordLevel = RecordLevel.FULL,
    stop_backlog: Optional[Fraction] = None,
    seed: Optional[int] = None,
    round_hook: Optional[Callable[[int, CupState], None]] = None,
) -> GameTrace:
    """Play up to t rounds; stops early on filler-done or a reached stop_backlog."""
    if t < 0:
        raise CupGameError("t must be non-negative")
    trace = GameTrace(initial_state=initial, seed=seed)
    state = initial
    for i in range(1, t + 1):
        state, rec = play_round(state, filler, emptier, i)
        if rec is None:
            trace.stop_reason = "filler_done"
            break
        if record_level is RecordLevel.FULL:
            trace.rounds.append(rec)
        trace.backlogs.append(backlog(state))
        if round_hook is not None:
            round_hook(i, state)
        if stop_backlog is not None and backlog(state) >= stop_backlog:
            trace.stop_reason = "target_reached"
            break
    return trace


TRACE_SCHEMA = "cupgames-trace-v1"
BACKLOG_CSV_HEADER = ("round", "backlog_num", "backlog_den")


def trace_to_json(trace: GameTrace) -> str:
    obj = {
        "schema": TRACE_SCHEMA,
        "variant": trace.initial_state.variant.to_json(),
        "n": trace.initial_state.n,
        "seed": trace.seed,
        "stop_reason": trace.stop_reason,
        "initial": [format_rational(f) for f in trace.initial_state.fills],
        "rounds": [
            {
                "p": rec.filler_move.p,
                "additions": [format_rational(a) for a in rec.filler_move.additions],
                "emptied_indices": list(rec.emptier_move.indices),
                "backlog": format_rational(backlog(rec.state_after)),
            }
            for rec in trace.rounds
        ],
    }
    return json.dumps(obj, indent=2)


def trace_from_json(text: str) -> GameTrace:
    obj = json.loads(text)
    if obj.get("schema") != TRACE_SCHEMA:
        raise CupGameError(
            f"unknown trace schema {obj.get('schema')!r}, expected {TRACE_SCHEMA!r}"
        )
    variant = GameVariant.from_json(obj["variant"])
    state = CupState(tuple(rat(f) for f in obj["initial"]), variant)
    trace = GameTrace(initial_state=state, seed=obj.get("seed"))
    trace.stop_reason = obj.get("stop_reason", "completed")
    for i, rec in enumerate(obj["rounds"], start=1):
        move = FillerMove(rec["p"], tuple(rat(a) for a in rec["additions"]))
        emove = EmptierMove(tuple(rec["emptied_indices"]))
        state = apply_emptier_move(apply_filler_move(state, move), emove)
        trace.rounds.append(RoundRecord(move, emove, state, i))
        trace.backlogs.append(backlog(state))
    return trace


def backlogs_to_csv(trace: GameTrace, path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(BACKLOG_CSV_HEADER)
        for i, b in enumerate(trace.backlogs, start=1):
            writer.writerow([i, b.numerator, b.denominator])


def backlogs_from_csv(path: str) -> list[Fraction]:
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != BACKLOG_CSV_HEADER:
            raise CupGameError(f"unexpected backlog CSV header {header!r}")
        for row in reader:
            out.append(Fraction(int(row[1]), int(row[2])))
    return out


def total_fill(state: CupState) -> Fraction:
    return sum(state.fills, ZERO)


def is_half_integer_state(state: CupState) -> bool:
    return all(f.denominator in (1, 2) for f in state.fills)
