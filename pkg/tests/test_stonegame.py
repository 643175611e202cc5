import math
import random
from fractions import Fraction as F

import pytest

import cupgames as cg
from cupgames.stonegame import (
    BandRow,
    StoneMove,
    apply_stone_move,
    bound_b_of_t,
    bound_t_of_b,
    enumerate_valid_moves,
    f_al,
    level_report,
    no_gaps_check,
    phi,
    phi_a,
    psi,
    psi_a,
    stone_state,
    stone_zeros,
)
from cupgames.core import CupGameError, InvalidMoveError


class TestMoves:
    def test_plain_split(self):
        s = stone_zeros(4)
        out = apply_stone_move(s, StoneMove(0, 2))
        assert out.positions == (1, 1, -1, -1)

    def test_checkpoint_keeps_down_stones(self):
        s = stone_zeros(4, checkpoint_len=5)
        out = apply_stone_move(s, StoneMove(0, 2))
        assert out.positions == (1, 1, 0, 0)

    def test_interior_checkpoint(self):
        s = stone_state([2, 2, 1, 0], checkpoint_len=2)
        out = apply_stone_move(s, StoneMove(2, 1))
        assert out.positions == (3, 2, 1, 0)

    def test_insufficient_stones(self):
        with pytest.raises(InvalidMoveError):
            apply_stone_move(stone_state([1, 0]), StoneMove(0, 1))

    def test_enumerate(self):
        assert enumerate_valid_moves(stone_state([1, 0, 0, -1])) == [(0, 1)]
        assert enumerate_valid_moves(stone_state([3, 1, -1])) == []
        assert enumerate_valid_moves(stone_zeros(4)) == [(0, 2)]

    def test_plain_moves_conserve_sum_and_flip_parity(self):
        rng = random.Random(5)
        state = stone_zeros(10)
        for _ in range(200):
            options = enumerate_valid_moves(state)
            if not options:
                break
            k, qmax = options[rng.randrange(len(options))]
            q = rng.randint(1, qmax)
            before = state
            state = apply_stone_move(state, StoneMove(k, q))
            assert sum(state.positions) == sum(before.positions)
            # moved stones land at k +- 1: parity at the level flips
            assert sum(1 for x in state.positions if x == k) == sum(
                1 for x in before.positions if x == k
            ) - 2 * q

    def test_checkpoint_never_recrossed(self):
        rng = random.Random(2)
        state = stone_zeros(12, checkpoint_len=3)
        reached = [0] * 12
        for _ in range(400):
            options = enumerate_valid_moves(state)
            if not options:
                break
            k, qmax = options[rng.randrange(len(options))]
            state = apply_stone_move(state, StoneMove(k, rng.randint(1, qmax)))
            for i, x in enumerate(state.positions):
                reached[i] = max(reached[i], (x // 3) * 3)
            assert all(x >= 0 for x in state.positions)


class TestPotentials:
    def test_direct_values(self):
        xs = [1, -1, 0, 0]
        assert phi(xs) == 2
        assert psi(xs) == 4 * 2 + 6

    def test_split_laws_on_zeros(self):
        s = stone_zeros(4)
        out = apply_stone_move(s, StoneMove(0, 2))
        assert phi(out.positions) - phi(s.positions) == 4  # 2q
        d_psi = psi(out.positions) - psi(s.positions)
        assert d_psi == 24 and d_psi >= 2 * 2 * 2

    def test_checkpoint_laws(self):
        s = stone_zeros(5, checkpoint_len=5)
        out = apply_stone_move(s, StoneMove(0, 3))
        assert phi(out.positions) - phi(s.positions) == 3  # q
        assert psi(out.positions) - psi(s.positions) >= 9  # q^2

    def test_psi_matches_quadratic_reference(self):
        rng = random.Random(11)
        for _ in range(100):
            xs = [rng.randint(-9, 9) for _ in range(rng.randint(1, 12))]
            n = len(xs)
            ref = n * sum(abs(x) for x in xs) + sum(
                abs(xs[i] - xs[j]) for i in range(n) for j in range(i + 1, n)
            )
            assert psi(xs) == ref


class TestBandPotentials:
    def test_clamp(self):
        assert f_al(7, 1, 5) == 2
        assert f_al(3, 1, 5) == 0
        assert f_al(12, 1, 5) == 5

    def test_zero_state(self):
        xs = [0] * 6
        assert phi_a(xs, 1, 4, 3) == 0 and psi_a(xs, 1, 4, 3) == 0

    def test_tie_break_independence(self):
        xs = [5, 3, 3, 3, 1]
        # any top-3 selection among the tied 3s gives the same values
        assert phi_a(xs, 0, 4, 3) == phi_a([5, 3, 3, 3, 1][::-1], 0, 4, 3)
        a, b = psi_a(xs, 0, 4, 3), psi_a(list(reversed(xs)), 0, 4, 3)
        assert a == b

    def test_final_state_bounds_on_game(self):
        rng = random.Random(3)
        state = stone_zeros(20, checkpoint_len=3)
        for _ in range(300):
            options = enumerate_valid_moves(state)
            if not options:
                break
            k, qmax = options[rng.randrange(len(options))]
            state = apply_stone_move(state, StoneMove(k, rng.randint(1, qmax)))
        l = 3
        for a in range(4):
            n_a = sum(1 for x in state.positions if x >= a * l)
            assert phi_a(state.positions, a, l, n_a) <= n_a * l * l
            assert psi_a(state.positions, a, l, n_a) <= 2 * n_a * n_a * l


class TestNoGaps:
    def test_examples(self):
        assert no_gaps_check(stone_state([5, 4, 1, 0], checkpoint_len=1)) == 4
        assert no_gaps_check(stone_state([3, 2, 0], checkpoint_len=1)) is None

    def test_mirrored_condition_plain_variant(self):
        assert no_gaps_check(stone_state([0, -5])) == -5
        assert no_gaps_check(stone_state([0, -2, -4, -5])) is None


class TestLevelReport:
    def test_single_move(self):
        init = stone_zeros(4, checkpoint_len=5)
        rep = level_report(init, [StoneMove(0, 2)])
        assert rep.ok
        band0 = rep.bands[0]
        assert band0.steps == 1
        assert band0.sum_q == 2  # checkpoint move: q_t = q
        assert band0.cauchy_schwarz_bound == F(4, 4)
        assert sum(r.steps for r in rep.bands) == rep.total_steps

    def test_random_trace_accounting(self):
        rng = random.Random(7)
        init = stone_zeros(24, checkpoint_len=2)
        state = init
        moves = []
        for _ in range(400):
            options = enumerate_valid_moves(state)
            if not options:
                break
            k, qmax = options[rng.randrange(len(options))]
            move = StoneMove(k, rng.randint(1, qmax))
            state = apply_stone_move(state, move)
            moves.append(move)
        rep = level_report(init, moves, spot_check_stride=10)
        assert rep.ok, rep.violations[:3]


class TestBounds:
    def test_b_of_t_first_branch(self):
        assert bound_b_of_t(16, 4) == 4

    def test_b_of_t_continuity_at_cube(self):
        n = 16
        assert abs(float(bound_b_of_t(n, n**3)) - n) < 1e-6

    def test_b_of_t_saturates(self):
        assert bound_b_of_t(16, 16**3 + 1) == 16

    def test_t_of_b_monotone_and_finite(self):
        n = 64
        values = [float(bound_t_of_b(n, b)) for b in range(1, n + 1)]
        assert all(b2 >= b1 for b1, b2 in zip(values, values[1:]))
        assert values[-1] >= n**3 / math.log2(2 * n) ** 2

    def test_domain_errors(self):
        with pytest.raises(CupGameError):
            bound_b_of_t(1, 5)
        with pytest.raises(CupGameError):
            bound_t_of_b(16, 0)
        with pytest.raises(CupGameError):
            bound_t_of_b(16, 17)
