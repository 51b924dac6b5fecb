"""Evaluation accounting, trajectories, bounds, and seed mixing."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopbench.core import (
    Bounds,
    BudgetExhausted,
    EvalBudget,
    Evaluator,
    ObjectiveError,
    Problem,
    TargetReached,
    Trajectory,
    clip_to_bounds,
    make_rng,
    mix_seed,
)

BOX = Bounds(np.full(3, -5.0), np.full(3, 5.0))


def sphere(x):
    return float(np.dot(x, x))


def make_problem(objective=sphere, optimum=0.0):
    return Problem("p", BOX, objective, known_optimum=optimum)


class TestBounds:
    def test_cube(self):
        b = Bounds.cube(-5.0, 5.0, 4)
        assert b.dimension == 4
        assert b.width[0] == 10.0

    def test_validation(self):
        with pytest.raises(ValueError):
            Bounds(np.array([0.0, 0.0]), np.array([1.0]))
        with pytest.raises(ValueError):
            Bounds(np.array([1.0]), np.array([0.0]))
        with pytest.raises(ValueError):
            Bounds(np.array([np.nan]), np.array([1.0]))

    def test_contains_and_clip(self):
        x = np.array([6.0, -7.0, 0.5])
        assert not BOX.contains(x)
        clipped = clip_to_bounds(x, BOX)
        assert BOX.contains(clipped)
        assert clipped[0] == 5.0 and clipped[1] == -5.0 and clipped[2] == 0.5

    @given(
        st.lists(
            st.floats(-100, 100, allow_nan=False), min_size=3, max_size=3
        )
    )
    def test_clip_idempotent(self, values):
        x = np.asarray(values)
        once = clip_to_bounds(x, BOX)
        twice = clip_to_bounds(once, BOX)
        assert np.array_equal(once, twice)

    def test_interior_point_unchanged(self):
        x = np.array([1.0, -2.0, 3.0])
        assert np.array_equal(clip_to_bounds(x, BOX), x)


class TestBudget:
    def test_validation(self):
        with pytest.raises(ValueError):
            EvalBudget(cap=0)
        with pytest.raises(ValueError):
            EvalBudget(cap=10, target_error=-1.0)

    def test_counting(self):
        b = EvalBudget(cap=3)
        assert b.remaining == 3 and not b.exhausted
        b.used = 3
        assert b.exhausted and b.remaining == 0


class TestTrajectory:
    def test_records_must_improve(self):
        t = Trajectory()
        t.record(1, 5.0)
        with pytest.raises(ValueError):
            t.record(2, 5.0)
        with pytest.raises(ValueError):
            t.record(2, 6.0)

    def test_indices_must_increase(self):
        t = Trajectory()
        t.record(3, 5.0)
        with pytest.raises(ValueError):
            t.record(3, 4.0)
        t.record(4, 4.0)
        assert t.events == [(3, 5.0), (4, 4.0)]

    def test_best(self):
        t = Trajectory()
        assert t.best is None
        t.record(1, 2.0)
        assert t.best == 2.0


class TestEvaluator:
    def test_counts_and_best(self):
        ev = Evaluator(make_problem(), EvalBudget(cap=10, target_error=1e-8))
        v = ev(np.array([1.0, 2.0, 2.0]))
        assert v == 9.0
        assert ev.budget.used == 1
        assert ev.best_f == 9.0
        ev(np.array([3.0, 0.0, 0.0]))  # same value, no new event
        assert ev.best_f == 9.0
        assert ev.trajectory.events == [(1, 9.0)]

    def test_budget_exhaustion_before_spending(self):
        ev = Evaluator(make_problem(), EvalBudget(cap=1, target_error=1e-8))
        ev(np.array([1.0, 0.0, 0.0]))
        with pytest.raises(BudgetExhausted):
            ev(np.array([1.0, 0.0, 0.0]))
        assert ev.budget.used == 1  # failed call charged nothing
        assert ev.stop_reason == "budget"

    def test_error_clipping_at_target(self):
        # An exact optimum hit is recorded as the target floor, then stops.
        ev = Evaluator(make_problem(), EvalBudget(cap=10, target_error=1e-8))
        ev(np.array([2.0, 0.0, 0.0]))
        with pytest.raises(TargetReached):
            ev(np.zeros(3))
        assert ev.trajectory.events == [(1, 4.0), (2, 1e-8)]
        assert ev.stop_reason == "target"
        assert ev.best_error == 1e-8

    def test_target_stop_at_hitting_eval(self):
        ev = Evaluator(make_problem(), EvalBudget(cap=10, target_error=0.5))
        ev(np.array([1.0, 1.0, 0.0]))
        with pytest.raises(TargetReached):
            ev(np.array([0.5, 0.0, 0.0]))  # error 0.25 <= 0.5
        assert ev.budget.used == 2
        # the hitting evaluation is recorded with its clipped error
        assert ev.trajectory.events[-1] == (2, 0.5)

    def test_calls_after_target_keep_raising(self):
        ev = Evaluator(make_problem(), EvalBudget(cap=10, target_error=10.0))
        with pytest.raises(TargetReached):
            ev(np.zeros(3))
        with pytest.raises(TargetReached):
            ev(np.ones(3))
        assert ev.budget.used == 1

    def test_non_finite_value_raises_and_charges(self):
        def bad(x):
            return math.nan

        ev = Evaluator(
            Problem("bad", BOX, bad, known_optimum=None), EvalBudget(cap=5)
        )
        with pytest.raises(ObjectiveError):
            ev(np.zeros(3))
        assert ev.budget.used == 1
        assert isinstance(ObjectiveError("x"), ValueError)

    def test_value_mode_records_raw_values(self):
        ev = Evaluator(
            Problem("raw", BOX, sphere, known_optimum=None),
            EvalBudget(cap=10, target_error=0.0),
        )
        ev(np.array([2.0, 0.0, 0.0]))
        ev(np.array([1.0, 0.0, 0.0]))
        assert ev.trajectory.events == [(1, 4.0), (2, 1.0)]
        assert ev.stop_reason is None  # no optimum: never a target stop

    def test_error_mode_events_strictly_decreasing(self):
        rng = np.random.default_rng(0)
        ev = Evaluator(make_problem(), EvalBudget(cap=500, target_error=1e-8))
        try:
            for _ in range(500):
                ev(rng.uniform(-5, 5, 3))
        except (BudgetExhausted, TargetReached):
            pass
        events = ev.trajectory.events
        assert all(
            events[i][0] < events[i + 1][0] for i in range(len(events) - 1)
        )
        assert all(
            events[i][1] > events[i + 1][1] for i in range(len(events) - 1)
        )
        assert all(value >= 1e-8 for _, value in events)


class TestProblem:
    def test_objective_must_be_callable(self):
        with pytest.raises(TypeError):
            Problem("p", BOX, 42, known_optimum=None)

    def test_optimum_x_shape_checked(self):
        with pytest.raises(ValueError):
            Problem(
                "p", BOX, sphere, known_optimum=0.0, optimum_x=np.zeros(2)
            )


class TestSeedMixing:
    def test_deterministic(self):
        assert mix_seed(1, 2, 3) == mix_seed(1, 2, 3)

    def test_order_sensitive(self):
        assert mix_seed(1, 2) != mix_seed(2, 1)

    def test_distinct_across_parts(self):
        seeds = {mix_seed(0, i, j) for i in range(30) for j in range(30)}
        assert len(seeds) == 900

    def test_64_bit_range(self):
        s = mix_seed(2**63, -1, 10**18)
        assert 0 <= s < 2**64

    def test_make_rng_deterministic(self):
        a = make_rng(42).standard_normal(5)
        b = make_rng(42).standard_normal(5)
        assert np.array_equal(a, b)
