"""Trial, gain and geometry configuration.

Every file the simulator reads is YAML validated into the models below. Defaults
carry the study parameters (0.13 m / 0.145 m steps, 1.5 N hand wrench, 5 cm hand
displacement, 0.2 rad torso rotation, 0.15 m stop deflection, [5 N, 1.5 N·m]
wrench threshold, 0.6 torso blend floor) so an empty trial file is a valid NS
trial. Values the study never published (gains, geometry) are tuning values.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from models.enums import BOX_STEP_PATTERN, PROTOCOL_BLOCKS, SIGNAL_ORDER, HandId, PartnerMode, Signal
from models.errors import ConfigurationError

Vector3 = Tuple[float, float, float]
Vector6 = Tuple[float, float, float, float, float, float]


class _Config(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


# ---------------------------------------------------------------------------
# Geometry
# ---------------------------------------------------------------------------


class JointConfig(_Config):
    name: str
    axis: Vector3
    offset: Vector3 = (0.0, 0.0, 0.0)
    limits: Tuple[float, float]
    velocity_limit: float
    hold: float = 0.0

    @model_validator(mode="after")
    def _check(self) -> "JointConfig":
        norm = math.sqrt(sum(a * a for a in self.axis))
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"joint {self.name}: axis must have unit norm, got {norm}")
        if not all(math.isfinite(v) for v in self.offset):
            raise ValueError(f"joint {self.name}: offset must be finite")
        lower, upper = self.limits
        if not lower < upper:
            raise ValueError(f"joint {self.name}: limits must satisfy min < max")
        if not self.velocity_limit > 0:
            raise ValueError(f"joint {self.name}: velocity limit must be > 0")
        if not lower <= self.hold <= upper:
            raise ValueError(f"joint {self.name}: hold posture outside limits")
        return self


class ArmConfig(_Config):
    frame: str
    joints: List[JointConfig] = Field(min_length=1)
    hand_offset: Vector3 = (0.0, 0.0, 0.0)


class ModelConfig(_Config):
    base_frame: str = "base_link"
    torso: List[JointConfig] = Field(default_factory=list)
    arms: Dict[HandId, ArmConfig]
    torso_yaw_joint: Optional[str] = None
    # Expected layout; None skips the check (test rigs, single-arm models).
    torso_joint_count: Optional[int] = 2
    arm_joint_count: Optional[int] = 7

    @model_validator(mode="after")
    def _check(self) -> "ModelConfig":
        if not self.arms:
            raise ValueError("model needs at least one arm")
        names = [j.name for j in self.torso] + [j.name for arm in self.arms.values() for j in arm.joints]
        if len(set(names)) != len(names):
            raise ValueError("joint names must be unique")
        if self.torso_joint_count is not None and len(self.torso) != self.torso_joint_count:
            raise ValueError(f"expected {self.torso_joint_count} torso joints, got {len(self.torso)}")
        if self.arm_joint_count is not None:
            for hand, arm in self.arms.items():
                if len(arm.joints) != self.arm_joint_count:
                    raise ValueError(f"expected {self.arm_joint_count} joints in {hand} arm, got {len(arm.joints)}")
        if self.torso_yaw_joint is not None and self.torso_yaw_joint not in {j.name for j in self.torso}:
            raise ValueError(f"torso yaw joint {self.torso_yaw_joint!r} is not a torso joint")
        return self


# ---------------------------------------------------------------------------
# Controller gains
# ---------------------------------------------------------------------------


class TaskGainsConfig(_Config):
    admittance: Vector6 = (0.1, 0.1, 0.1, 0.05, 0.05, 0.05)
    stiffness: Vector6 = (400.0, 400.0, 400.0, 5.0, 5.0, 5.0)
    damping: Vector6 = (0.5, 0.5, 0.5, 0.05, 0.05, 0.05)
    force_threshold: float = Field(5.0, gt=0)
    moment_threshold: float = Field(1.5, gt=0)
    fade_duration: float = Field(0.5, gt=0)

    @field_validator("admittance", "stiffness", "damping")
    @classmethod
    def _non_negative(cls, value: Vector6) -> Vector6:
        if any(v < 0 or not math.isfinite(v) for v in value):
            raise ValueError("task gains must be finite and >= 0")
        return value


class JointGainOverride(_Config):
    stiffness: Optional[float] = Field(None, ge=0)
    damping: Optional[float] = Field(None, ge=0)
    admittance: Optional[float] = Field(None, ge=0)
    blend_min: Optional[float] = Field(None, ge=0)
    blend_max: Optional[float] = Field(None, ge=0)


class JointGainsConfig(_Config):
    torso_stiffness: float = Field(10.0, ge=0)
    arm_stiffness: float = Field(2.0, ge=0)
    torso_damping: float = Field(0.1, ge=0)
    arm_damping: float = Field(0.1, ge=0)
    admittance: float = Field(1.0, ge=0)
    blend_max: float = Field(1.0, ge=0)
    torso_blend_min: float = Field(0.6, ge=0)
    arm_blend_min: float = Field(0.0, ge=0)
    blend_fade_duration: float = Field(0.5, gt=0)
    overrides: Dict[str, JointGainOverride] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check(self) -> "JointGainsConfig":
        if self.torso_blend_min > self.blend_max or self.arm_blend_min > self.blend_max:
            raise ValueError("blend minimum must not exceed blend maximum")
        return self


# ---------------------------------------------------------------------------
# Choreography
# ---------------------------------------------------------------------------


class StepPatternEntry(_Config):
    foot: HandId
    forward: float
    lateral: float


class StepConfig(_Config):
    forward_distance: float = Field(0.13, gt=0)
    lateral_distance: float = Field(0.145, gt=0)
    duration: float = Field(1.0, gt=0)
    pattern: List[StepPatternEntry] = Field(
        default_factory=lambda: [
            StepPatternEntry(foot=HandId(foot), forward=fwd, lateral=lat) for foot, fwd, lat in BOX_STEP_PATTERN
        ],
        min_length=1,
    )


class ScheduleConfig(_Config):
    signals: str = "NS"
    hw_magnitude: float = Field(1.5, ge=0)
    hd_magnitude: float = Field(0.05, ge=0)
    tr_magnitude: float = Field(0.2, ge=0)
    ramp_duration: float = Field(0.5, gt=0)
    audio_lead_time: float = Field(0.3, gt=0)
    stop_deflection: float = Field(0.15, gt=0)

    @field_validator("signals")
    @classmethod
    def _known_signals(cls, value: str) -> str:
        parse_signal_set(value)
        return value


class PartnerConfig(_Config):
    mode: PartnerMode = PartnerMode.ABSENT
    stiffness: float = Field(150.0, ge=0)
    damping: float = Field(20.0, ge=0)
    lag: float = Field(0.3, ge=0)
    push_distance: float = Field(0.3, ge=0)
    push_direction: Vector3 = (-1.0, 0.0, 0.0)
    push_onset: float = Field(5.0, ge=0)
    push_release: Optional[float] = None
    push_force: Vector3 = (6.0, 0.0, 0.0)
    push_hands: List[HandId] = Field(default_factory=lambda: [HandId.LEFT])
    noise: float = Field(0.0, ge=0)

    @model_validator(mode="after")
    def _check(self) -> "PartnerConfig":
        if self.push_release is not None and self.push_release <= self.push_onset:
            raise ValueError("push_release must come after push_onset")
        if math.sqrt(sum(v * v for v in self.push_direction)) == 0:
            raise ValueError("push_direction must be non-zero")
        return self


# ---------------------------------------------------------------------------
# Trials
# ---------------------------------------------------------------------------


class TrialConfig(_Config):
    label: Optional[str] = None
    model: Optional[Path] = None
    task: TaskGainsConfig = Field(default_factory=TaskGainsConfig)
    joint: JointGainsConfig = Field(default_factory=JointGainsConfig)
    schedule: ScheduleConfig = Field(default_factory=ScheduleConfig)
    steps: StepConfig = Field(default_factory=StepConfig)
    partner: PartnerConfig = Field(default_factory=PartnerConfig)
    duration: float = Field(30.0, gt=0)
    timestep: float = Field(0.005, gt=0, le=0.02)
    seed: int = Field(0, ge=0)
    output: Optional[Path] = None

    @model_validator(mode="after")
    def _check(self) -> "TrialConfig":
        _require_whole_ticks(self.duration, self.timestep, "duration")
        _require_whole_ticks(self.steps.duration, self.timestep, "step duration")
        return self

    @property
    def name(self) -> str:
        return self.label or self.schedule.signals

    @property
    def tick_count(self) -> int:
        return int(round(self.duration / self.timestep))


class ProtocolConfig(_Config):
    defaults: TrialConfig = Field(default_factory=TrialConfig)
    blocks: List[List[str]] = Field(default_factory=lambda: [list(b) for b in PROTOCOL_BLOCKS])

    def trial_configs(self) -> List[List[TrialConfig]]:
        """Expand block labels into trial configs; repeated labels get a ``#n`` suffix."""
        expanded: List[List[TrialConfig]] = []
        for block in self.blocks:
            seen: Dict[str, int] = {}
            configs = []
            for signals in block:
                canonical = format_signal_set(parse_signal_set(signals))
                seen[canonical] = seen.get(canonical, 0) + 1
                label = canonical if seen[canonical] == 1 else f"{canonical}#{seen[canonical]}"
                schedule = self.defaults.schedule.model_copy(update={"signals": canonical})
                configs.append(self.defaults.model_copy(update={"label": label, "schedule": schedule}))
            expanded.append(configs)
        return expanded


def _require_whole_ticks(span: float, timestep: float, what: str) -> None:
    ticks = span / timestep
    if abs(ticks - round(ticks)) > 1e-6:
        raise ValueError(f"{what} {span} s is not a whole number of {timestep} s ticks")


# ---------------------------------------------------------------------------
# Signal labels
# ---------------------------------------------------------------------------


def parse_signal_set(label: str) -> frozenset[Signal]:
    """Parse a trial label such as ``"HW+HD"`` or ``"SC + TR"``."""
    base = label.split("#", 1)[0]
    parts = [p.strip().upper() for p in base.split("+") if p.strip()]
    if not parts:
        raise ValueError(f"empty signal label {label!r}")
    try:
        signals = frozenset(Signal(p) for p in parts)
    except ValueError as exc:
        raise ValueError(f"unknown signal in {label!r}") from exc
    if Signal.NS in signals and len(signals) > 1:
        raise ValueError("NS cannot be combined with other signals")
    return signals


def format_signal_set(signals: frozenset[Signal]) -> str:
    return "+".join(s.value for s in SIGNAL_ORDER if s in signals)


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------


def _read_yaml(path: Path) -> Dict[str, Any]:
    if not path.exists():
        raise ConfigurationError(f"Missing config file: {path}")
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"Cannot parse {path}: {exc}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigurationError(f"{path}: top level must be a mapping")
    return data


def _resolve(path: Optional[Path], root: Path) -> Optional[Path]:
    if path is None or path.is_absolute():
        return path
    return (root / path).resolve()


def load_model_config(path: str | Path) -> ModelConfig:
    path = Path(path)
    try:
        return ModelConfig.model_validate(_read_yaml(path))
    except ValidationError as exc:
        raise ConfigurationError(f"Invalid model file {path}:\n{exc}") from exc


def load_trial_config(path: str | Path) -> TrialConfig:
    path = Path(path)
    try:
        config = TrialConfig.model_validate(_read_yaml(path))
    except ValidationError as exc:
        raise ConfigurationError(f"Invalid trial file {path}:\n{exc}") from exc
    root = path.resolve().parent
    return config.model_copy(update={"model": _resolve(config.model, root), "output": _resolve(config.output, root)})


def load_protocol_config(path: str | Path) -> ProtocolConfig:
    path = Path(path)
    try:
        config = ProtocolConfig.model_validate(_read_yaml(path))
    except ValidationError as exc:
        raise ConfigurationError(f"Invalid protocol file {path}:\n{exc}") from exc
    root = path.resolve().parent
    defaults = config.defaults.model_copy(
        update={"model": _resolve(config.defaults.model, root), "output": _resolve(config.defaults.output, root)}
    )
    return config.model_copy(update={"defaults": defaults})
