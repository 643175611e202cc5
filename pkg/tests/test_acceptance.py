"""Acceptance gate: one test per criterion, each printing its PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
summary lines.  Tolerances and case counts are pinned here, not configurable.
"""

import math
import time
from fractions import Fraction as F

import cupgames as cg
from cupgames import harness
from cupgames.core import RecordLevel, run_game, zeros
from cupgames.emptiers import TieKind, TiePolicy
from cupgames.fastsim import run_game_fast
from cupgames.fillers import MainFiller, RandomFiller, WlogFiller
from cupgames.stonegame import bound_b_of_t


def report(criterion: str, detail: str) -> None:
    print(f"PASS {criterion}: {detail}")


def least_squares_slope(xs, ys) -> float:
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    num = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    den = sum((x - mx) ** 2 for x in xs)
    return num / den


class TestCriterion1Warmup:
    def test_warmup_reaches_half_n_minus_one(self):
        start = time.perf_counter()
        ties = [
            TiePolicy(TieKind.LOWEST_INDEX),
            TiePolicy(TieKind.HIGHEST_INDEX),
            TiePolicy(TieKind.RANDOM, seed=1),
        ]
        for n in (4, 8, 16, 32):
            target = F(n - 1, 2)
            for tie in ties:
                trace = run_game(
                    zeros(n, cg.STANDARD),
                    cg.WarmupFiller(),
                    cg.GreedyEmptier(tie),
                    n**3,
                    record_level=RecordLevel.BACKLOG_ONLY,
                    stop_backlog=target,
                )
                reached = max(trace.max_backlog, cg.backlog(trace.final_state))
                assert reached >= target, (n, tie.kind, reached)
                assert trace.rounds_played <= n**3
                ok, worst, wt = harness.check_backlog_envelope(
                    n, [float(b) for b in trace.backlogs]
                )
                assert ok, f"criterion 10 envelope violated at t={wt} ({worst:.3f})"
        elapsed = time.perf_counter() - start
        assert elapsed < 10, f"criterion 1 exceeded its 10 s budget: {elapsed:.1f}s"
        report(
            "criterion-1 warmup",
            f"n in {{4,8,16,32}} x 3 tie policies reach (n-1)/2 within n^3 rounds "
            f"({elapsed:.1f}s)",
        )


class TestCriterion2MainLowerBound:
    def test_plan_guarantees_and_scaling_law(self):
        start = time.perf_counter()
        # Exact plan-guarantee accounting at n = 1024.
        for k in (8, 16, 32, 64):
            filler = MainFiller(1024, k)
            plan = filler.plan
            result = run_game_fast(1024, cg.NEGATIVE_FILL, filler, plan.rounds_budget)
            assert filler.plan_complete
            used = filler.rounds_used
            achieved = result.max_backlog
            if plan.kind == "halving":
                assert achieved >= F(plan.k, 2) and used <= plan.k
            else:
                assert achieved >= plan.r * plan.k_prime
                assert used <= 8 * plan.r * plan.k_prime**3 + k
            assert achieved == filler.achieved_backlog()
            ok, worst, wt = harness.check_backlog_envelope(
                1024, result.backlog_floats()[: result.rounds]
            )
            assert ok, f"criterion 10 envelope violated at t={wt} ({worst:.3f})"

        # Scaling-law regression at n = 4096.
        ks = (16, 32, 64, 128)
        rounds_used = []
        for k in ks:
            filler = MainFiller(4096, k)
            plan = filler.plan
            result = run_game_fast(4096, cg.NEGATIVE_FILL, filler, plan.rounds_budget)
            assert filler.plan_complete
            assert result.max_backlog >= plan.r * plan.k_prime
            assert filler.rounds_used <= 8 * plan.r * plan.k_prime**3 + k
            rounds_used.append(filler.rounds_used)
        slope = least_squares_slope(
            [math.log(k) for k in ks], [math.log(r) for r in rounds_used]
        )
        assert 2.5 <= slope <= 3.5, (slope, rounds_used)
        elapsed = time.perf_counter() - start
        assert elapsed < 300, f"criterion 2 exceeded its 5 min budget: {elapsed:.0f}s"
        report(
            "criterion-2 main lower bound",
            f"plan guarantees hold; log-log slope {slope:.2f} in [2.5, 3.5] "
            f"rounds={rounds_used} ({elapsed:.0f}s)",
        )


class TestCriterion3GreedyEqualsOpt:
    def test_exhaustive_small_instances(self):
        start = time.perf_counter()
        rep = harness.verify_oracle_equivalence(t_max=3)
        assert rep.passed, rep.violations[:5]
        elapsed = time.perf_counter() - start
        assert elapsed < 600
        report(
            "criterion-3 greedy = OPT",
            f"{rep.cases} (state, t) pairs over both variants, exact equality "
            f"({elapsed:.0f}s)",
        )


class TestCriterion4PotentialLaws:
    def test_exact_laws_100k_moves(self):
        start = time.perf_counter()
        rep = harness.verify_potentials(moves_total=100_000)
        assert rep.passed and rep.cases >= 100_000, rep.violations[:5]
        elapsed = time.perf_counter() - start
        assert elapsed < 60, f"criterion 4 exceeded its 1 min budget: {elapsed:.0f}s"
        report(
            "criterion-4 potential laws",
            f"{rep.cases} moves, zero violations ({elapsed:.0f}s)",
        )


class TestCriteria5And6CheckpointGames:
    def test_no_gaps_and_level_accounting(self):
        start = time.perf_counter()
        rep, traces = harness.verify_no_gaps(games=1000, moves_per_game=1000)
        assert rep.passed, rep.violations[:5]
        report(
            "criterion-5 no-gaps",
            f"{len(traces)} games, {rep.cases} reachable states clean "
            f"({rep.elapsed:.0f}s)",
        )
        rep6 = harness.verify_level_reports(traces)
        assert rep6.passed and rep6.cases == len(traces), rep6.violations[:5]
        elapsed = time.perf_counter() - start
        report(
            "criterion-6 level accounting",
            f"Cauchy-Schwarz and final-state bounds exact on {rep6.cases} traces "
            f"({elapsed:.0f}s)",
        )


class TestCriterion7ReductionChain:
    def test_cosimulation_1000_games(self):
        start = time.perf_counter()
        rep, ell_traces = harness.verify_cosimulation(games=1000)
        assert rep.passed, rep.violations[:5]
        # criterion 6 also applies to these traces
        rep6 = harness.verify_level_reports(ell_traces)
        assert rep6.passed, rep6.violations[:5]
        elapsed = time.perf_counter() - start
        assert elapsed < 600, f"criterion 7 exceeded its 10 min budget: {elapsed:.0f}s"
        report(
            "criterion-7 reduction chain",
            f"{rep.cases} co-simulated rounds, shadows stayed ahead; "
            f"{rep6.cases} checkpoint traces re-verified ({elapsed:.0f}s)",
        )


class TestCriterion8TransferFuzz:
    def test_transfer_ops_10k_cases(self):
        start = time.perf_counter()
        rep = harness.verify_order_fuzz(iterations=10_000)
        assert rep.passed and rep.cases >= 10_000, rep.violations[:5]
        mirror = harness.verify_mirror(rounds_total=10_000)
        assert mirror.passed and mirror.cases >= 10_000, mirror.violations[:3]
        elapsed = time.perf_counter() - start
        report(
            "criterion-8 transfer fuzz",
            f"{rep.cases} fuzz cases across all transfer ops + {mirror.cases} "
            f"mirrored rounds, zero violations ({elapsed:.0f}s)",
        )


class TestCriterion9ResourceAugmentation:
    def test_augmented_backlog_bound(self):
        start = time.perf_counter()
        n, t, cbound = 256, 100_000, 10.0
        epsilons = (F(1, 8), F(1, 2), F(1))

        def fillers_for(eps, seed):
            wlog_eps = min(eps, F(1, 2))
            return {
                "main": MainFiller(n, 32),
                "random_wlog": WlogFiller(RandomFiller(n, seed=seed), wlog_eps, n),
            }

        # Greedy runs: hard bound on every round's backlog.
        for eps in epsilons:
            limit = cbound * float(1 / eps) * math.log(n)
            for name, filler in fillers_for(eps, seed=0).items():
                result = run_game_fast(n, cg.augmented(eps), filler, t)
                worst = float(result.max_backlog)
                assert worst <= limit, (name, float(eps), worst, limit)

        # Proportional emptying: the bound holds with high probability.
        good = 0
        runs = 100
        for seed in range(runs):
            eps = epsilons[seed % len(epsilons)]
            limit = cbound * float(1 / eps) * math.log(n)
            name = "main" if (seed // len(epsilons)) % 2 == 0 else "random_wlog"
            filler = fillers_for(eps, seed=seed)[name]
            result = run_game_fast(
                n, cg.augmented(eps), filler, t,
                emptier="proportional", emptier_seed=seed,
            )
            if float(result.max_backlog) <= limit:
                good += 1
        assert good >= 99, f"only {good}/100 proportional runs stayed in bound"
        elapsed = time.perf_counter() - start
        report(
            "criterion-9 resource augmentation",
            f"greedy runs bounded by 10/eps*ln n; proportional {good}/100 "
            f"({elapsed:.0f}s)",
        )


class TestCriterion10UpperEnvelope:
    def test_curve_runs_within_envelope(self, tmp_path):
        start = time.perf_counter()
        n = 256
        ts = [2**i for i in range(4, 21, 2)]
        out = tmp_path / "curve.csv"
        rows = harness.run_curve(n, ts, str(out))  # raises on envelope violation
        measured = [r[3] for r in rows]
        assert measured == sorted(measured)
        for r in rows:
            assert r[4] == float(bound_b_of_t(n, r[0]))
        elapsed = time.perf_counter() - start
        report(
            "criterion-10 upper envelope",
            f"all curve runs within 10x min(b(t), sqrt(t)ln n); "
            f"measured up to {measured[-1]} at t={ts[-1]} ({elapsed:.0f}s)",
        )


class TestCriterion11ChangeLimited:
    def test_wrapped_main_filler(self):
        start = time.perf_counter()
        n = 64
        gap = n
        inner = MainFiller(n, n // 8, ensure_target=True)
        wrapped = cg.ChangeLimitedFiller(inner, gap, record_p=True)
        result = run_game_fast(
            n, cg.NEGATIVE_FILL, wrapped, 10_000_000, stop_backlog=F(n, 8)
        )
        best = result.max_backlog
        assert best >= F(n, 8), best
        ps = wrapped.p_history[: result.rounds]
        assert all(abs(a - b) <= 1 for a, b in zip(ps, ps[1:]))
        stint = 1
        for a, b in zip(ps, ps[1:]):
            if a == b:
                stint += 1
            else:
                assert stint >= gap, f"p changed after only {stint} rounds"
                stint = 1
        elapsed = time.perf_counter() - start
        report(
            "criterion-11 change-limited filler",
            f"backlog {best} >= n/8 with unit p-steps after >= {gap}-round stints; "
            f"{result.rounds} total rounds ({inner.rounds_used} productive) "
            f"({elapsed:.0f}s)",
        )


class TestCriterion12ProportionalMarginals:
    def test_marginals_within_3_sigma(self):
        start = time.perf_counter()
        rep = harness.verify_proportional_marginals(draws=100_000, vectors=20)
        assert rep.passed and rep.cases == 20, rep.violations[:5]
        elapsed = time.perf_counter() - start
        report(
            "criterion-12 proportional marginals",
            f"20 vectors x 100k draws within 3 sigma, always p distinct indices "
            f"({elapsed:.0f}s)",
        )
