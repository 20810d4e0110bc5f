"""Desk-scale goal-conditioned manipulation analogs: Reach, Push, Slide, PickPlace.

All four tasks share one control interface: a 4-vector in [-1, 1]^4 commanding
3-D effector velocity plus a gripper open/close channel.  Dynamics are
kinematic (sphere-proximity contact, geometric velocity decay), deterministic
given the reset rng, and run on fixed-length episodes: ``done`` is raised only
when ``step_index`` hits the horizon, never early.

Rewards are sparse and binary: 0 when the achieved goal is strictly within
``goal_tolerance`` of the desired goal, else -1.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

REACH = "reach"
PUSH = "push"
SLIDE = "slide"
PICKPLACE = "pickplace"
TASKS = (REACH, PUSH, SLIDE, PICKPLACE)

EFFECTOR_SPEED = 0.25     # max effector speed, distance units per time unit
CONTACT_RADIUS = 0.05     # effector-object proximity that couples motion
GRASP_RADIUS = 0.05       # effector-object proximity that allows grasping
GRASP_OFFSET = np.array([0.0, 0.0, -0.02])
GRIP_RATE = 0.5           # gripper open/close fraction per unit command per step
TABLE_Z = 0.02            # object center height when resting on the table

# Max distance the effector can get from its Slide start pose: the far corner
# of the strike zone.  Slide goals are sampled strictly beyond this.
SLIDE_REACH_RADIUS = 0.25


@dataclass(frozen=True)
class Box:
    lo: tuple[float, float, float]
    hi: tuple[float, float, float]

    def clamp(self, p: np.ndarray) -> np.ndarray:
        return np.clip(p, self.lo, self.hi)

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(self.lo, self.hi)

    def contains(self, p: np.ndarray, atol: float = 1e-12) -> bool:
        return bool(np.all(p >= np.array(self.lo) - atol)
                    and np.all(p <= np.array(self.hi) + atol))


@dataclass(frozen=True)
class TaskSpec:
    """Per-task configuration; defaults come from :func:`default_task_spec`."""

    task: str
    horizon: int = 50
    goal_tolerance: float = 0.05
    workspace_bounds: Box = Box((-0.2, -0.2, TABLE_Z), (0.2, 0.2, 0.3))
    dt: float = 0.1
    friction: float = 0.0
    action_dim: int = 4

    def __post_init__(self):
        if self.task not in TASKS:
            raise ValueError(f"unknown task {self.task!r}")
        if self.goal_tolerance <= 0:
            raise ValueError("goal_tolerance must be positive")
        if self.horizon < 1:
            raise ValueError("horizon must be at least 1")
        if not 0.0 <= self.friction < 1.0:
            raise ValueError("friction must lie in [0, 1)")

    @property
    def has_object(self) -> bool:
        return self.task != REACH

    @property
    def observation_dim(self) -> int:
        return 13 if self.has_object else 7

    @property
    def state_dim(self) -> int:
        # observation + achieved goal + desired goal
        return self.observation_dim + 6


@dataclass(frozen=True)
class _Geometry:
    """Static poses and sampling regions for one task."""

    start_pose: tuple[float, float, float]
    goal_region: Box
    object_region: Box | None = None
    # Effector confinement tighter than the workspace: the strike zone for
    # Slide, and a raised floor for PickPlace so a grasped object (held at
    # GRASP_OFFSET below the effector) never dips under the table plane.
    effector_bounds: Box | None = None
    air_goal_region: Box | None = None   # PickPlace in-air goals
    min_object_goal_separation: float = 0.0


_GEOMETRY: dict[str, _Geometry] = {
    # Reach goals stay within one effector-hop of the start pose; the tight
    # box keeps chance successes frequent enough that the sparse reward is
    # learnable without relabeling.
    REACH: _Geometry(
        start_pose=(0.0, 0.0, 0.15),
        goal_region=Box((-0.05, -0.05, 0.10), (0.05, 0.05, 0.20)),
    ),
    PUSH: _Geometry(
        start_pose=(0.0, 0.0, 0.05),
        goal_region=Box((-0.12, -0.12, TABLE_Z), (0.12, 0.12, TABLE_Z)),
        object_region=Box((-0.12, -0.12, TABLE_Z), (0.12, 0.12, TABLE_Z)),
        min_object_goal_separation=0.1,
    ),
    SLIDE: _Geometry(
        start_pose=(-0.2, 0.0, 0.03),
        goal_region=Box((0.18, -0.12, TABLE_Z), (0.38, 0.12, TABLE_Z)),
        object_region=Box((-0.14, -0.1, TABLE_Z), (-0.08, 0.1, TABLE_Z)),
        effector_bounds=Box((-0.25, -0.15, TABLE_Z), (-0.02, 0.15, 0.1)),
    ),
    PICKPLACE: _Geometry(
        start_pose=(0.0, 0.0, 0.08),
        goal_region=Box((-0.1, -0.1, TABLE_Z), (0.1, 0.1, TABLE_Z)),
        object_region=Box((-0.1, -0.1, TABLE_Z), (0.1, 0.1, TABLE_Z)),
        effector_bounds=Box((-0.15, -0.15, TABLE_Z + 0.02), (0.15, 0.15, 0.3)),
        air_goal_region=Box((-0.1, -0.1, 0.1), (0.1, 0.1, 0.25)),
        min_object_goal_separation=0.1,
    ),
}

_WORKSPACES = {
    REACH: Box((-0.05, -0.05, 0.10), (0.05, 0.05, 0.20)),
    PUSH: Box((-0.2, -0.2, TABLE_Z), (0.2, 0.2, 0.3)),
    SLIDE: Box((-0.25, -0.2, TABLE_Z), (0.45, 0.2, 0.15)),
    PICKPLACE: Box((-0.15, -0.15, TABLE_Z), (0.15, 0.15, 0.3)),
}

_FRICTION = {REACH: 0.0, PUSH: 0.1, SLIDE: 0.04, PICKPLACE: 0.0}


def default_task_spec(task: str, **overrides) -> TaskSpec:
    if task not in TASKS:
        raise ValueError(f"unknown task {task!r}, expected one of {TASKS}")
    kwargs = dict(
        task=task,
        workspace_bounds=_WORKSPACES[task],
        friction=_FRICTION[task],
    )
    kwargs.update(overrides)
    return TaskSpec(**kwargs)


@dataclass
class EnvState:
    effector_position: np.ndarray
    effector_velocity: np.ndarray
    gripper_open: float
    object_position: np.ndarray
    object_velocity: np.ndarray
    grasped: bool
    desired_goal: np.ndarray
    step_index: int


@dataclass
class GoalObservation:
    """Environment output: proprioception plus achieved/desired goals."""

    observation: np.ndarray
    achieved_goal: np.ndarray
    desired_goal: np.ndarray

    def flat(self) -> np.ndarray:
        """Network input layout: observation + achieved + desired."""
        return np.concatenate([self.observation, self.achieved_goal, self.desired_goal])


def sparse_reward(achieved: np.ndarray, desired: np.ndarray, tolerance: float) -> float:
    """0 when the L2 distance is strictly below tolerance, else -1."""
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    delta = np.asarray(achieved, dtype=np.float64) - np.asarray(desired, dtype=np.float64)
    return 0.0 if float(np.sqrt(np.dot(delta, delta))) < tolerance else -1.0


def is_success(achieved: np.ndarray, desired: np.ndarray, tolerance: float) -> bool:
    return sparse_reward(achieved, desired, tolerance) == 0.0


def achieved_goal_of(state: EnvState, spec: TaskSpec) -> np.ndarray:
    """Effector position for Reach, object position otherwise."""
    if spec.has_object:
        return state.object_position.copy()
    return state.effector_position.copy()


def observe(state: EnvState, spec: TaskSpec) -> GoalObservation:
    parts = [state.effector_position, state.effector_velocity,
             np.array([state.gripper_open])]
    if spec.has_object:
        parts += [state.object_position, state.object_velocity]
    return GoalObservation(
        observation=np.concatenate(parts),
        achieved_goal=achieved_goal_of(state, spec),
        desired_goal=state.desired_goal.copy(),
    )


def _sample_goal(geom: _Geometry, object_position: np.ndarray | None,
                 rng: np.random.Generator) -> np.ndarray:
    region = geom.goal_region
    if geom.air_goal_region is not None and rng.random() < 0.5:
        region = geom.air_goal_region
    goal = region.sample(rng)
    if object_position is not None and geom.min_object_goal_separation > 0:
        while np.linalg.norm(goal - object_position) < geom.min_object_goal_separation:
            goal = region.sample(rng)
    return goal


def reset(spec: TaskSpec, rng: np.random.Generator) -> tuple[EnvState, GoalObservation]:
    """Start an episode: fixed effector pose, randomized object and goal."""
    geom = _GEOMETRY[spec.task]
    object_position = np.zeros(3)
    if geom.object_region is not None:
        object_position = geom.object_region.sample(rng)
    goal = _sample_goal(geom, object_position if spec.has_object else None, rng)
    state = EnvState(
        effector_position=np.array(geom.start_pose),
        effector_velocity=np.zeros(3),
        gripper_open=1.0 if spec.task != PUSH else 0.0,
        object_position=object_position,
        object_velocity=np.zeros(3),
        grasped=False,
        desired_goal=goal,
        step_index=0,
    )
    return state, observe(state, spec)


def step(state: EnvState, action: np.ndarray, spec: TaskSpec
         ) -> tuple[EnvState, GoalObservation, float, bool]:
    """Advance one control step; returns (state, observation, reward, done)."""
    action = np.asarray(action, dtype=np.float64)
    if action.shape != (spec.action_dim,):
        raise ValueError(f"action must have shape ({spec.action_dim},)")
    if np.max(np.abs(action)) > 1.0:
        raise ValueError("action components must lie in [-1, 1]")
    if state.step_index >= spec.horizon:
        raise ValueError("episode already finished; reset the environment")

    geom = _GEOMETRY[spec.task]
    effector_bounds = geom.effector_bounds or spec.workspace_bounds

    velocity = action[:3] * EFFECTOR_SPEED
    new_effector = effector_bounds.clamp(state.effector_position + velocity * spec.dt)
    actual_velocity = (new_effector - state.effector_position) / spec.dt

    grip_cmd = action[3]
    if spec.task == PUSH:
        gripper_open = 0.0   # gripper forced closed for Push
    else:
        gripper_open = float(np.clip(state.gripper_open + GRIP_RATE * grip_cmd, 0.0, 1.0))

    object_position = state.object_position
    object_velocity = state.object_velocity
    grasped = state.grasped

    if spec.task == PUSH:
        in_contact = np.linalg.norm(new_effector - object_position) < CONTACT_RADIUS
        if in_contact:
            planar = np.array([actual_velocity[0], actual_velocity[1], 0.0])
            displacement = planar * spec.dt * (1.0 - spec.friction)
            object_position = spec.workspace_bounds.clamp(object_position + displacement)
            object_position[2] = TABLE_Z
            object_velocity = displacement / spec.dt
        else:
            object_velocity = np.zeros(3)
    elif spec.task == SLIDE:
        in_contact = np.linalg.norm(new_effector - object_position) < CONTACT_RADIUS
        planar_speed = float(np.hypot(actual_velocity[0], actual_velocity[1]))
        if in_contact and planar_speed > 0.0:
            object_velocity = np.array([actual_velocity[0], actual_velocity[1], 0.0])
        object_position = spec.workspace_bounds.clamp(
            object_position + object_velocity * spec.dt)
        object_position[2] = TABLE_Z
        object_velocity = object_velocity * (1.0 - spec.friction)
    elif spec.task == PICKPLACE:
        if grasped and grip_cmd > 0.0:
            grasped = False
            object_position = object_position.copy()
            object_position[2] = TABLE_Z   # released object settles on the table
            object_velocity = np.zeros(3)
        elif not grasped and grip_cmd < 0.0:
            if np.linalg.norm(new_effector - object_position) < GRASP_RADIUS:
                grasped = True
        if grasped:
            object_position = new_effector + GRASP_OFFSET
            object_velocity = actual_velocity.copy()

    new_state = replace(
        state,
        effector_position=new_effector,
        effector_velocity=actual_velocity,
        gripper_open=gripper_open,
        object_position=object_position,
        object_velocity=object_velocity,
        grasped=grasped,
        step_index=state.step_index + 1,
    )
    obs = observe(new_state, spec)
    reward = sparse_reward(obs.achieved_goal, obs.desired_goal, spec.goal_tolerance)
    done = new_state.step_index == spec.horizon
    return new_state, obs, reward, done
