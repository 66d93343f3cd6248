"""Risk-driven scanning policy.

Each authentication outcome moves an ordinal risk level: accept steps it
down (never below low), escalate steps it up, reject jumps straight to
lockdown, where the sensor scans continuously until an accept brings the
risk back down.  The risk level picks the duty fraction for the next
scheduling frame.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .energy import DutyCycleSchedule, duty_schedule
from .exceptions import DataError
from .profile import AuthDecision, Verdict

__all__ = ["RiskLevel", "PolicyConfig", "policy_step"]


class RiskLevel(enum.IntEnum):
    LOW = 0
    REGULAR = 1
    ELEVATED = 2
    LOCKDOWN = 3


_DEFAULT_DUTY = {
    RiskLevel.LOW: 0.05,
    RiskLevel.REGULAR: 0.10,
    RiskLevel.ELEVATED: 0.50,
    RiskLevel.LOCKDOWN: 1.00,
}


@dataclass(frozen=True)
class PolicyConfig:
    """Duty fractions per risk level, all overridable.

    idle_duty applies only when the device is idle at low risk with no
    authentication outcome this frame.  spot_check_rate is a hook for
    randomized extra probes; 0 disables it, and the caller supplies the
    coin flip through `force_probe`.
    """

    frame_length: float = 60.0
    duty_fractions: dict = field(default_factory=lambda: dict(_DEFAULT_DUTY))
    idle_duty: float = 0.01
    spot_check_rate: float = 0.0

    def __post_init__(self):
        fractions = {RiskLevel(k): float(v) for k, v in self.duty_fractions.items()}
        object.__setattr__(self, "duty_fractions", fractions)
        missing = [level.name for level in RiskLevel if level not in fractions]
        if missing:
            raise DataError(f"duty_fractions missing levels: {missing}")


def _verdict_of(decision) -> Verdict | None:
    if decision is None:
        return None
    if isinstance(decision, Verdict):
        return decision
    if isinstance(decision, AuthDecision):
        return decision.verdict
    raise DataError(f"cannot read a verdict from {type(decision).__name__}")


def policy_step(
    risk: RiskLevel,
    last_decision: AuthDecision | Verdict | None = None,
    idle_context: bool = False,
    config: PolicyConfig = PolicyConfig(),
    force_probe: bool = False,
) -> tuple[DutyCycleSchedule, RiskLevel]:
    """One table-driven transition: (schedule for next frame, new risk)."""
    verdict = _verdict_of(last_decision)
    if verdict is Verdict.ACCEPT:
        new_risk = RiskLevel(max(int(risk) - 1, int(RiskLevel.LOW)))
    elif verdict is Verdict.ESCALATE:
        new_risk = RiskLevel(min(int(risk) + 1, int(RiskLevel.LOCKDOWN)))
    elif verdict is Verdict.REJECT:
        new_risk = RiskLevel.LOCKDOWN
    else:
        new_risk = risk

    if force_probe:
        duty = 1.0
    elif idle_context and new_risk is RiskLevel.LOW and verdict is None:
        duty = config.idle_duty
    else:
        duty = config.duty_fractions[new_risk]
    schedule = duty_schedule(duty, frame_length=config.frame_length)
    return schedule, new_risk
