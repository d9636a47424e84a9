"""Deterministic trial loop.

Per tick, at t = k * dt:

1. observe hand poses, Jacobians and twists at the measured configuration,
2. read the partner's wrist wrenches, then move the partner hands,
3. evaluate the leading signals for the current step (nothing once stopped),
4. check the stop rule on the pose errors against those setpoints; a tick
   that latches the stop drops its signals,
5. run the controller cascade,
6. advance the step sequencer (frozen once stopped),
7. append the log row.
"""

from __future__ import annotations

import logging
from typing import List, Mapping

import numpy as np

from control.cascade import ControlInputs, ControllerState, ControllerStep, Observation, UpperBodyController
from control.jointspace import JointGains
from control.taskspace import TaskGains
from dance.choreography import (
    LeadingSignalSchedule,
    SequencerState,
    SignalAction,
    StopMonitor,
    advance,
    check_stop,
    signal_actions,
    step_sequence,
)
from dance.partner import PartnerModel, PartnerState, init_partner, measured_wrench, step_partner
from kinematics.chain import KinematicModel
from kinematics.loader import default_model
from kinematics.spatial import Wrench
from models.config import TrialConfig, format_signal_set
from models.enums import HandId, Signal
from pipeline.events import EventRecorder
from pipeline.log import TrialLog, frame_rows, tick_columns

logger = logging.getLogger(__name__)


def _row(
    header: List[float],
    model: KinematicModel,
    action: SignalAction,
    observation: Observation,
    state: ControllerState,
    record: ControllerStep,
    measured: Mapping[HandId, Wrench],
    partner_state: PartnerState,
    hold_positions: Mapping[HandId, np.ndarray],
) -> np.ndarray:
    parts: List[np.ndarray] = [
        np.array(header + [action.torso_yaw_offset]),
        observation.q,
        state.command.q_c,
        state.command.qdot_c,
        state.command.blend,
    ]
    zero3 = np.zeros(3)
    for hand in model.hands:
        pose = observation.poses[hand]
        fade = state.fades[hand]
        applied = action.applied.get(hand)
        parts += [
            np.array(
                [
                    fade.lam,
                    float(record.over[hand]),
                    float(np.linalg.norm(pose.position - hold_positions[hand])),
                ]
            ),
            fade.mu,
            measured[hand].vector,
            applied.vector if applied is not None else np.zeros(6),
            record.virtual[hand].vector,
            record.impedance[hand].vector,
            pose.position,
            pose.orientation,
            action.setpoint_offsets.get(hand, zero3),
            record.pose_errors[hand],
            partner_state.positions[hand],
        ]
    return np.concatenate(parts)


def run_trial(config: TrialConfig, model: KinematicModel | None = None) -> TrialLog:
    model = model or default_model(config.model)
    dt = config.timestep

    controller = UpperBodyController(
        model, TaskGains.from_config(config.task), JointGains.from_config(config.joint, model)
    )
    schedule = LeadingSignalSchedule.from_config(config.schedule)
    steps = step_sequence(config.steps)
    if schedule.has(Signal.HW) or schedule.has(Signal.HD):
        for step in steps:
            model.check_hand(step.foot)
    partner = PartnerModel.from_config(config.partner, seed=config.seed)

    sequencer = SequencerState.start(steps, dt)
    monitor = StopMonitor(threshold=config.schedule.stop_deflection)
    state = controller.initial_state()
    partner_state = init_partner(controller.hold_poses)
    hold_positions = {hand: pose.position for hand, pose in controller.hold_poses.items()}
    recorder = EventRecorder()
    columns = tick_columns(list(model.joint_names), [h.value for h in model.hands])
    rows: List[np.ndarray] = []

    logger.info("Trial %s: %d ticks of %.4f s, partner %s", config.name, config.tick_count, dt, partner.mode)
    for k in range(config.tick_count):
        t = k * dt
        observation = controller.observe(state)
        measured = {
            hand: measured_wrench(partner, partner_state, hand, observation.poses[hand], observation.twists[hand], t)
            for hand in model.hands
        }
        partner_state = step_partner(partner, partner_state, observation.poses, dt, t)

        action = SignalAction()
        targets = None
        if not monitor.stopped:
            action = signal_actions(schedule, sequencer.current, sequencer.t_in_step(dt), sequencer.step_onset(dt))
            targets = controller.pose_errors(observation, action.setpoint_offsets)
            monitor = check_stop(monitor, targets[1], t)
            if monitor.stopped:
                action, targets = SignalAction(), None
                recorder.add(t, "stop", hand=monitor.hand.value, deflection=monitor.deflection)
                logger.info(
                    "Trial %s: stop at t=%.3f s (%s hand, %.3f m)", config.name, t, monitor.hand, monitor.deflection
                )
            elif sequencer.tick == 0:
                for utterance in action.utterances:
                    recorder.add(
                        utterance.time,
                        "utterance",
                        text=utterance.text,
                        step=utterance.step_index,
                        signal=utterance.signal.value,
                    )

        inputs = ControlInputs(
            measured=measured,
            applied=action.applied,
            active_axes=action.active_axes,
            setpoint_offsets=action.setpoint_offsets,
            torso_yaw_offset=action.torso_yaw_offset,
        )
        state, record = controller.step(state, observation, inputs, dt, targets)

        step, phase, cycle = sequencer.current, sequencer.t_in_step(dt), sequencer.cycle
        sequencer, foot_events, _ = advance(sequencer, dt, monitor.stopped)
        for event in foot_events:
            recorder.add(
                event.time, event.kind, step=event.step, cycle=event.cycle, foot=event.foot.value, base=list(event.base)
            )
        header = [t, step.index, phase, cycle, float(monitor.stopped), sequencer.base[0], sequencer.base[1]]
        rows.append(_row(header, model, action, observation, state, record, measured, partner_state, hold_positions))

    meta = {
        "label": config.name,
        "signals": format_signal_set(schedule.signals),
        "seed": config.seed,
        "timestep": dt,
        "duration": config.duration,
        "tick_count": config.tick_count,
        "joint_names": list(model.joint_names),
        "hands": [h.value for h in model.hands],
        "torso_yaw_joint": model.joint_names[model.torso_yaw_index] if model.torso_yaw_index is not None else None,
        "hold_positions": {h.value: [float(v) for v in p] for h, p in hold_positions.items()},
        "steps_completed": sequencer.completed,
        "stop": {
            "stopped": monitor.stopped,
            "hand": monitor.hand.value if monitor.hand else None,
            "time": monitor.time,
            "deflection": monitor.deflection,
        },
        "config": config.model_dump(mode="json"),
    }
    logger.info("Trial %s done: %d steps completed", config.name, sequencer.completed)
    return TrialLog(label=config.name, ticks=frame_rows(rows, columns), events=recorder.snapshot(), meta=meta)
