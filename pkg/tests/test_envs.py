import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from offpolicy_bench.envs import (
    CONTACT_RADIUS,
    EFFECTOR_SPEED,
    GRASP_OFFSET,
    PICKPLACE,
    PUSH,
    REACH,
    SLIDE,
    SLIDE_REACH_RADIUS,
    TABLE_Z,
    TASKS,
    default_task_spec,
    is_success,
    observe,
    reset,
    sparse_reward,
    step,
)
from offpolicy_bench.envs.tasks import _GEOMETRY


def rollout(task, seed, policy):
    spec = default_task_spec(task)
    rng = np.random.default_rng(seed)
    state, obs = reset(spec, rng)
    history = [(state, obs)]
    for t in range(spec.horizon):
        state, obs, reward, done = step(state, policy(t, rng), spec)
        history.append((state, obs, reward, done))
    return spec, history


class TestSparseReward:
    def test_equal_points_succeed(self):
        assert sparse_reward(np.zeros(3), np.zeros(3), 0.05) == 0.0

    def test_outside_tolerance_fails(self):
        a = np.array([0.1, 0.0, 0.0])
        assert sparse_reward(a, np.zeros(3), 0.05) == -1.0

    def test_boundary_is_strict(self):
        a = np.array([0.05, 0.0, 0.0])
        assert sparse_reward(a, np.zeros(3), 0.05) == -1.0

    def test_just_inside_succeeds(self):
        a = np.array([0.05 - 1e-12, 0.0, 0.0])
        assert sparse_reward(a, np.zeros(3), 0.05) == 0.0

    def test_rejects_bad_tolerance(self):
        with pytest.raises(ValueError):
            sparse_reward(np.zeros(3), np.zeros(3), 0.0)

    def test_is_success_consistent_fuzz(self):
        rng = np.random.default_rng(0)
        for _ in range(10_000):
            a = rng.uniform(-0.3, 0.3, 3)
            d = rng.uniform(-0.3, 0.3, 3)
            r = sparse_reward(a, d, 0.05)
            assert r in (-1.0, 0.0)
            assert is_success(a, d, 0.05) == (r == 0.0)


class TestReset:
    @pytest.mark.parametrize("task", TASKS)
    def test_fixed_start_pose(self, task):
        spec = default_task_spec(task)
        expected = np.array(_GEOMETRY[task].start_pose)
        for seed in (0, 1, 99):
            state, _ = reset(spec, np.random.default_rng(seed))
            assert np.array_equal(state.effector_position, expected)

    @pytest.mark.parametrize("task", TASKS)
    def test_same_seed_same_state(self, task):
        spec = default_task_spec(task)
        s1, o1 = reset(spec, np.random.default_rng(7))
        s2, o2 = reset(spec, np.random.default_rng(7))
        assert np.array_equal(s1.desired_goal, s2.desired_goal)
        assert np.array_equal(s1.object_position, s2.object_position)
        assert np.array_equal(o1.flat(), o2.flat())

    def test_slide_goal_beyond_effector_reach(self):
        spec = default_task_spec(SLIDE)
        start = np.array(_GEOMETRY[SLIDE].start_pose)
        for seed in range(1000):
            state, _ = reset(spec, np.random.default_rng(seed))
            assert np.linalg.norm(state.desired_goal - start) > SLIDE_REACH_RADIUS

    def test_slide_reach_radius_covers_strike_zone(self):
        # The documented radius must dominate every point the effector can
        # actually reach (the strike zone corners).
        geom = _GEOMETRY[SLIDE]
        start = np.array(geom.start_pose)
        lo, hi = np.array(geom.effector_bounds.lo), np.array(geom.effector_bounds.hi)
        corners = [np.where(np.array(m), hi, lo)
                   for m in np.ndindex(2, 2, 2)]
        worst = max(np.linalg.norm(c - start) for c in corners)
        assert worst <= SLIDE_REACH_RADIUS

    def test_push_goal_on_table_and_separated(self):
        spec = default_task_spec(PUSH)
        for seed in range(200):
            state, _ = reset(spec, np.random.default_rng(seed))
            assert state.desired_goal[2] == TABLE_Z
            assert state.object_position[2] == TABLE_Z
            gap = np.linalg.norm(state.desired_goal - state.object_position)
            assert gap >= 0.1

    def test_pickplace_mixes_air_and_table_goals(self):
        spec = default_task_spec(PICKPLACE)
        heights = [reset(spec, np.random.default_rng(s))[0].desired_goal[2]
                   for s in range(400)]
        air = sum(1 for z in heights if z > TABLE_Z)
        assert 120 < air < 280  # ~50% each way

    def test_reach_observation_has_no_object(self):
        spec = default_task_spec(REACH)
        _, obs = reset(spec, np.random.default_rng(0))
        assert obs.observation.shape == (7,)
        assert obs.flat().shape == (13,)

    def test_push_observation_has_object(self):
        spec = default_task_spec(PUSH)
        _, obs = reset(spec, np.random.default_rng(0))
        assert obs.observation.shape == (13,)
        assert obs.flat().shape == (19,)


class TestStep:
    def test_reach_zero_action_is_stationary(self):
        spec = default_task_spec(REACH)
        state, obs0 = reset(spec, np.random.default_rng(3))
        new_state, obs, _, _ = step(state, np.zeros(4), spec)
        assert np.array_equal(new_state.effector_position, state.effector_position)
        assert np.array_equal(obs.achieved_goal, obs0.achieved_goal)

    def test_push_no_contact_leaves_object(self):
        spec = default_task_spec(PUSH)
        state, _ = reset(spec, np.random.default_rng(4))
        state.object_position = np.array([0.12, 0.12, TABLE_Z])
        before = state.object_position.copy()
        new_state, _, _, _ = step(state, np.array([-1.0, -1.0, 0.0, 0.0]), spec)
        assert np.array_equal(new_state.object_position, before)

    def test_push_gripper_forced_closed(self):
        spec = default_task_spec(PUSH)
        state, _ = reset(spec, np.random.default_rng(0))
        new_state, _, _, _ = step(state, np.array([0.0, 0.0, 0.0, 1.0]), spec)
        assert new_state.gripper_open == 0.0

    def test_slide_travel_matches_geometric_series(self):
        # Strike the object once, then hold still; decay must follow the
        # closed form v0 * dt * sum_k (1 - mu)^k over the remaining steps.
        spec = default_task_spec(SLIDE)
        state, _ = reset(spec, np.random.default_rng(5))
        # park the effector in contact, object dead ahead
        state.effector_position = np.array([-0.1, 0.0, TABLE_Z])
        state.object_position = np.array([-0.1 + 0.04, 0.0, TABLE_Z])

        strike = np.array([1.0, 0.0, 0.0, 0.0])
        state, _, _, _ = step(state, strike, spec)
        v0 = state.object_velocity[0] / (1.0 - spec.friction)  # speed imparted
        assert v0 == pytest.approx(EFFECTOR_SPEED)
        x_after_strike = state.object_position[0]

        m = 20
        for _ in range(m):
            state, _, _, _ = step(state, np.zeros(4), spec)
        expected_extra = sum(
            v0 * spec.dt * (1.0 - spec.friction) ** k for k in range(1, m + 1))
        assert state.object_position[0] - x_after_strike == pytest.approx(
            expected_extra, rel=1e-12)

    def test_pickplace_grasp_and_carry(self):
        spec = default_task_spec(PICKPLACE)
        state, _ = reset(spec, np.random.default_rng(6))
        state.effector_position = state.object_position - GRASP_OFFSET
        state, _, _, _ = step(state, np.array([0.0, 0.0, 0.0, -1.0]), spec)
        assert state.grasped
        state, _, _, _ = step(state, np.array([0.0, 0.0, 1.0, -1.0]), spec)
        assert np.allclose(state.object_position,
                           state.effector_position + GRASP_OFFSET)
        # opening drops the object back to the table plane
        state, _, _, _ = step(state, np.array([0.0, 0.0, 0.0, 1.0]), spec)
        assert not state.grasped
        assert state.object_position[2] == TABLE_Z

    def test_rejects_out_of_range_action(self):
        spec = default_task_spec(REACH)
        state, _ = reset(spec, np.random.default_rng(0))
        with pytest.raises(ValueError):
            step(state, np.array([1.5, 0.0, 0.0, 0.0]), spec)

    def test_rejects_step_after_horizon(self):
        spec = default_task_spec(REACH, horizon=2)
        state, _ = reset(spec, np.random.default_rng(0))
        for _ in range(2):
            state, _, _, done = step(state, np.zeros(4), spec)
        assert done
        with pytest.raises(ValueError):
            step(state, np.zeros(4), spec)

    @pytest.mark.parametrize("task", TASKS)
    def test_done_only_at_horizon(self, task):
        def policy(t, rng):
            return rng.uniform(-1, 1, 4)

        spec, history = rollout(task, 11, policy)
        flags = [entry[3] for entry in history[1:]]
        assert flags == [False] * (spec.horizon - 1) + [True]

    @pytest.mark.parametrize("task", TASKS)
    def test_trajectory_deterministic(self, task):
        def policy(t, rng):
            return np.tanh(np.array([np.sin(t), np.cos(t), np.sin(2 * t), -1.0]))

        _, h1 = rollout(task, 21, policy)
        _, h2 = rollout(task, 21, policy)
        for (s1, *_), (s2, *_) in zip(h1[1:], h2[1:]):
            assert np.array_equal(s1.effector_position, s2.effector_position)
            assert np.array_equal(s1.object_position, s2.object_position)

    @settings(max_examples=30, deadline=None)
    @given(task=st.sampled_from(TASKS), seed=st.integers(0, 10_000))
    def test_invariants_under_random_actions(self, task, seed):
        spec = default_task_spec(task)
        rng = np.random.default_rng(seed)
        state, _ = reset(spec, rng)
        lo = np.array(spec.workspace_bounds.lo) - 1e-9
        hi = np.array(spec.workspace_bounds.hi) + 1e-9
        for _ in range(spec.horizon):
            state, obs, reward, done = step(state, rng.uniform(-1, 1, 4), spec)
            assert reward in (-1.0, 0.0)
            assert np.all(state.effector_position >= lo)
            assert np.all(state.effector_position <= hi)
            if spec.has_object:
                assert np.all(state.object_position >= lo)
                assert np.all(state.object_position <= hi)
            if state.grasped:
                assert np.allclose(state.object_position,
                                   state.effector_position + GRASP_OFFSET)
        assert done
        assert state.step_index == spec.horizon


class TestObserve:
    def test_achieved_goal_is_effector_for_reach(self):
        spec = default_task_spec(REACH)
        state, _ = reset(spec, np.random.default_rng(0))
        assert np.array_equal(observe(state, spec).achieved_goal,
                              state.effector_position)

    @pytest.mark.parametrize("task", (PUSH, SLIDE, PICKPLACE))
    def test_achieved_goal_is_object_for_object_tasks(self, task):
        spec = default_task_spec(task)
        state, _ = reset(spec, np.random.default_rng(0))
        assert np.array_equal(observe(state, spec).achieved_goal,
                              state.object_position)

    def test_flat_layout_ends_with_desired_goal(self):
        spec = default_task_spec(PUSH)
        state, obs = reset(spec, np.random.default_rng(0))
        flat = obs.flat()
        assert np.array_equal(flat[-3:], state.desired_goal)
        assert np.array_equal(flat[-6:-3], obs.achieved_goal)
