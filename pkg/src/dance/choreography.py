"""Box-step sequencing, leading signals and the hand-deflection stop rule.

Ground-plane vectors are (forward, lateral) in the base frame, +lateral to
the robot's left. The sequencer counts whole ticks so steps start and end on
exact tick boundaries; the base pose is snapped to the step target when a
step completes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Dict, List, Mapping, Tuple

import numpy as np
import numpy.typing as npt

from kinematics.spatial import Vector, Wrench
from models.config import ScheduleConfig, StepConfig, parse_signal_set
from models.enums import STEP_COUNT_WORDS, STEP_DESCRIPTIONS, HandId, Signal
from models.errors import ConfigurationError, ContractViolation

_SIDE = {HandId.LEFT: 1.0, HandId.RIGHT: -1.0}
_TIME_SLACK = 1e-9


# ---------------------------------------------------------------------------
# Steps
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class StepSpec:
    index: int
    foot: HandId
    displacement: Vector
    duration: float = 1.0

    @property
    def ground_direction(self) -> Vector:
        """Unit (x, y, 0) direction of the step; zero for an in-place step."""
        norm = float(np.linalg.norm(self.displacement))
        if norm == 0.0:
            return np.zeros(3)
        return np.array([self.displacement[0] / norm, self.displacement[1] / norm, 0.0])


def step_sequence(config: StepConfig) -> List[StepSpec]:
    steps = []
    for i, entry in enumerate(config.pattern, start=1):
        displacement = np.array([entry.forward * config.forward_distance, entry.lateral * config.lateral_distance])
        displacement.setflags(write=False)
        steps.append(StepSpec(index=i, foot=entry.foot, displacement=displacement, duration=config.duration))
    return steps


# ---------------------------------------------------------------------------
# Leading signals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LeadingSignalSchedule:
    signals: frozenset[Signal]
    hw_magnitude: float = 1.5
    hd_magnitude: float = 0.05
    tr_magnitude: float = 0.2
    ramp_duration: float = 0.5
    audio_lead_time: float = 0.3

    def __post_init__(self) -> None:
        if Signal.NS in self.signals and len(self.signals) > 1:
            raise ConfigurationError("NS excludes every other signal")
        if min(self.hw_magnitude, self.hd_magnitude, self.tr_magnitude) < 0:
            raise ConfigurationError("Signal magnitudes must be >= 0")
        if self.ramp_duration <= 0:
            raise ConfigurationError("Ramp duration must be > 0")

    @classmethod
    def from_config(cls, config: ScheduleConfig) -> "LeadingSignalSchedule":
        return cls(
            signals=parse_signal_set(config.signals),
            hw_magnitude=config.hw_magnitude,
            hd_magnitude=config.hd_magnitude,
            tr_magnitude=config.tr_magnitude,
            ramp_duration=config.ramp_duration,
            audio_lead_time=config.audio_lead_time,
        )

    def has(self, signal: Signal) -> bool:
        return signal in self.signals


@dataclass(frozen=True)
class Utterance:
    text: str
    time: float
    step_index: int
    signal: Signal


@dataclass(frozen=True, eq=False)
class SignalAction:
    applied: Mapping[HandId, Wrench] = field(default_factory=dict)
    active_axes: Mapping[HandId, npt.NDArray[np.bool_]] = field(default_factory=dict)
    setpoint_offsets: Mapping[HandId, Vector] = field(default_factory=dict)
    torso_yaw_offset: float = 0.0
    utterances: Tuple[Utterance, ...] = ()

    @property
    def is_zero(self) -> bool:
        return (
            self.torso_yaw_offset == 0.0
            and all(not np.any(w.vector) for w in self.applied.values())
            and all(not np.any(o) for o in self.setpoint_offsets.values())
        )


def envelope(schedule: LeadingSignalSchedule, step: StepSpec, t_in_step: float) -> float:
    """Trapezoid: linear up over ramp_duration, hold, linear down to 0 at step end."""
    ramp = schedule.ramp_duration
    return max(0.0, min(t_in_step / ramp, (step.duration - t_in_step) / ramp, 1.0))


def torso_yaw_sign(step: StepSpec) -> float:
    """Yaw sign that moves the stepping-foot shoulder along the step.

    Forward or diagonal steps: the shoulder leads in x. Pure lateral steps:
    yaw toward the stepping side.
    """
    dx, dy = float(step.displacement[0]), float(step.displacement[1])
    if dx != 0.0:
        return -_SIDE[step.foot] * math.copysign(1.0, dx)
    if dy != 0.0:
        return math.copysign(1.0, dy)
    return 0.0


def step_description(step: StepSpec) -> str:
    """What the follower should do, mirroring the leader's step."""
    dx, dy = float(step.displacement[0]), float(step.displacement[1])
    if dx != 0.0 and dy != 0.0:
        return STEP_DESCRIPTIONS["side"]
    if dx > 0.0:
        return STEP_DESCRIPTIONS["back"]
    if dx < 0.0:
        return STEP_DESCRIPTIONS["forward"]
    return STEP_DESCRIPTIONS["close"]


def utterances_for(schedule: LeadingSignalSchedule, step: StepSpec, step_onset: float) -> List[Utterance]:
    time = step_onset - schedule.audio_lead_time
    spoken = []
    if schedule.has(Signal.SC):
        spoken.append(Utterance(STEP_COUNT_WORDS.get(step.index, str(step.index)), time, step.index, Signal.SC))
    if schedule.has(Signal.SD):
        spoken.append(Utterance(step_description(step), time, step.index, Signal.SD))
    return spoken


def signal_actions(
    schedule: LeadingSignalSchedule, step: StepSpec, t_in_step: float, step_onset: float = 0.0
) -> SignalAction:
    if not -_TIME_SLACK <= t_in_step <= step.duration + _TIME_SLACK:
        raise ContractViolation(f"t_in_step={t_in_step} outside step {step.index} of {step.duration} s")
    utterances = tuple(utterances_for(schedule, step, step_onset))
    if schedule.has(Signal.NS):
        return SignalAction()

    env = envelope(schedule, step, t_in_step)
    direction = step.ground_direction
    hand = step.foot
    applied: Dict[HandId, Wrench] = {}
    active: Dict[HandId, npt.NDArray[np.bool_]] = {}
    offsets: Dict[HandId, Vector] = {}

    if schedule.has(Signal.HW):
        force = schedule.hw_magnitude * env * direction
        applied[hand] = Wrench.from_force(force)
        rising = t_in_step <= step.duration - schedule.ramp_duration + _TIME_SLACK
        active[hand] = np.concatenate([(force != 0.0) & rising, np.zeros(3, dtype=bool)])
    if schedule.has(Signal.HD):
        offsets[hand] = schedule.hd_magnitude * env * direction
    yaw = schedule.tr_magnitude * env * torso_yaw_sign(step) if schedule.has(Signal.TR) else 0.0

    return SignalAction(
        applied=applied, active_axes=active, setpoint_offsets=offsets, torso_yaw_offset=yaw, utterances=utterances
    )


# ---------------------------------------------------------------------------
# Stop rule
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StopMonitor:
    threshold: float = 0.15
    stopped: bool = False
    hand: HandId | None = None
    time: float | None = None
    deflection: float | None = None


def check_stop(monitor: StopMonitor, pose_errors: Mapping[HandId, npt.ArrayLike], t: float = 0.0) -> StopMonitor:
    """Latch when any hand's position error norm exceeds the threshold."""
    if monitor.stopped:
        return monitor
    worst: Tuple[float, HandId] | None = None
    for hand, err in pose_errors.items():
        deflection = float(np.linalg.norm(np.asarray(err, dtype=float)[:3]))
        if deflection > monitor.threshold and (worst is None or deflection > worst[0]):
            worst = (deflection, hand)
    if worst is None:
        return monitor
    return replace(monitor, stopped=True, hand=worst[1], time=t, deflection=worst[0])


# ---------------------------------------------------------------------------
# Sequencer
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FootEvent:
    kind: str
    time: float
    step: int
    cycle: int
    foot: HandId
    base: Tuple[float, float]


@dataclass(frozen=True, eq=False)
class SequencerState:
    steps: Tuple[StepSpec, ...]
    ticks_per_step: int
    position: int = 0
    tick: int = 0
    total_ticks: int = 0
    completed: int = 0
    origin: Vector = field(default_factory=lambda: np.zeros(2))
    base: Vector = field(default_factory=lambda: np.zeros(2))

    @classmethod
    def start(cls, steps: List[StepSpec], dt: float) -> "SequencerState":
        if not steps:
            raise ConfigurationError("Step sequence is empty")
        ticks = round(steps[0].duration / dt)
        if ticks < 1 or abs(ticks * dt - steps[0].duration) > 1e-6 * steps[0].duration:
            raise ConfigurationError(f"Step duration {steps[0].duration} s is not a whole number of {dt} s ticks")
        return cls(steps=tuple(steps), ticks_per_step=ticks)

    @property
    def current(self) -> StepSpec:
        return self.steps[self.position]

    def t_in_step(self, dt: float) -> float:
        return self.tick * dt

    def step_onset(self, dt: float) -> float:
        return (self.total_ticks - self.tick) * dt

    @property
    def cycle(self) -> int:
        return self.completed // len(self.steps) + 1


def advance(state: SequencerState, dt: float, stopped: bool) -> Tuple[SequencerState, List[FootEvent], StepSpec]:
    """Move one tick along the box; a stopped sequencer stays put."""
    step = state.current
    if stopped:
        return state, [], step

    events: List[FootEvent] = []
    now = state.total_ticks * dt
    cycle = state.cycle
    if state.tick == 0:
        events.append(FootEvent("step_onset", now, step.index, cycle, step.foot, _pair(state.origin)))

    tick = state.tick + 1
    if tick < state.ticks_per_step:
        base = state.origin + step.displacement * (tick / state.ticks_per_step)
        return replace(state, tick=tick, total_ticks=state.total_ticks + 1, base=base), events, step

    origin = state.origin + step.displacement
    events.append(FootEvent("step_complete", now + dt, step.index, cycle, step.foot, _pair(origin)))
    next_state = replace(
        state,
        position=(state.position + 1) % len(state.steps),
        tick=0,
        total_ticks=state.total_ticks + 1,
        completed=state.completed + 1,
        origin=origin,
        base=origin,
    )
    return next_state, events, step


def _pair(values: Vector) -> Tuple[float, float]:
    return float(values[0]), float(values[1])
