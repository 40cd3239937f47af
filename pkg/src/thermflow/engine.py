"""Hybrid semantics: urgent discrete rules and the guarded tick.

Phase changes of water entities and smart-heater switching are
instantaneous.  Time may only advance when none of them is enabled.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .errors import LivelockError, RuleNotEnabled, UrgencyViolation
from .model import (
    CompMode,
    Configuration,
    HeatGenerator,
    Phase,
    Status,
    SystemState,
    ThermalEntity,
)
from .numeric import Rational, rat
from .physics import DEFAULT_CONSTANTS, PhysConstants, compute_qdots, compute_temps


class Rule(str, Enum):
    SOLID_TO_MELTING = "solid-to-melting"
    MELTING_TO_LIQUID = "melting-to-liquid"
    LIQUID_TO_EVAPORATING = "liquid-to-evaporating"
    EVAPORATING_TO_GAS = "evaporating-to-gas"
    GAS_TO_CONDENSING = "gas-to-condensing"
    CONDENSING_TO_LIQUID = "condensing-to-liquid"
    LIQUID_TO_FREEZING = "liquid-to-freezing"
    FREEZING_TO_SOLID = "freezing-to-solid"
    TURN_ON = "turnOn"
    TURN_OFF = "turnOff"

    def __str__(self):
        return self.value


HEATER_RULES = frozenset({Rule.TURN_ON, Rule.TURN_OFF})

# rule -> (source phase, target phase)
_PHASE_EDGES = {
    Rule.SOLID_TO_MELTING: (Phase.SOLID, Phase.MELTING),
    Rule.MELTING_TO_LIQUID: (Phase.MELTING, Phase.LIQUID),
    Rule.LIQUID_TO_EVAPORATING: (Phase.LIQUID, Phase.EVAPORATING),
    Rule.EVAPORATING_TO_GAS: (Phase.EVAPORATING, Phase.GAS),
    Rule.GAS_TO_CONDENSING: (Phase.GAS, Phase.CONDENSING),
    Rule.CONDENSING_TO_LIQUID: (Phase.CONDENSING, Phase.LIQUID),
    Rule.LIQUID_TO_FREEZING: (Phase.LIQUID, Phase.FREEZING),
    Rule.FREEZING_TO_SOLID: (Phase.FREEZING, Phase.SOLID),
}


@dataclass(frozen=True, order=True)
class RuleInstance:
    rule: Rule
    subject: str

    def __str__(self):
        return f"{self.rule}({self.subject})"


def _phase_guard(rule: Rule, e: ThermalEntity, c: PhysConstants) -> bool:
    # Heating-direction entries are non-strict, cooling-direction entries strict,
    # so leaving a transitional phase never re-enters one at the same temperature.
    if rule is Rule.SOLID_TO_MELTING:
        return e.temp >= c.melt_point
    if rule is Rule.LIQUID_TO_EVAPORATING:
        return e.temp >= c.boil_point
    if rule is Rule.GAS_TO_CONDENSING:
        return e.temp < c.boil_point
    if rule is Rule.LIQUID_TO_FREEZING:
        return e.temp < c.melt_point
    per_kg = e.heat_trans / e.mass
    if rule is Rule.MELTING_TO_LIQUID:
        return per_kg >= c.latent_fusion
    if rule is Rule.EVAPORATING_TO_GAS:
        return per_kg >= c.latent_vapor
    if rule is Rule.CONDENSING_TO_LIQUID:
        return per_kg <= -c.latent_vapor
    if rule is Rule.FREEZING_TO_SOLID:
        return per_kg <= -c.latent_fusion
    raise ValueError(rule)


def _heater_rule(g: HeatGenerator, config: Configuration):
    s = g.smart
    if s is None:
        return None
    temp = config.get_entity(g.entity).temp
    if s.status is Status.ON and temp >= s.high_temp:
        return Rule.TURN_OFF
    if s.status is Status.OFF and temp <= s.low_temp:
        return Rule.TURN_ON
    return None


def _is_enabled(config: Configuration, r: RuleInstance, consts: PhysConstants) -> bool:
    obj = config.get(r.subject)
    if r.rule in HEATER_RULES:
        return isinstance(obj, HeatGenerator) and _heater_rule(obj, config) is r.rule
    if not isinstance(obj, ThermalEntity) or not obj.is_water:
        return False
    source, _ = _PHASE_EDGES[r.rule]
    return obj.phase is source and _phase_guard(r.rule, obj, consts)


def enabled_rules(
    config: Configuration, consts: PhysConstants = DEFAULT_CONSTANTS
) -> list[RuleInstance]:
    """All enabled instances; phase rules first, then heater rules, each by subject id."""
    found = []
    for e in config.entities():
        if not e.is_water:
            continue
        for rule, (source, _) in _PHASE_EDGES.items():
            if e.phase is source and _phase_guard(rule, e, consts):
                found.append(RuleInstance(rule, e.id))
    for g in config.heaters():
        rule = _heater_rule(g, config)
        if rule is not None:
            found.append(RuleInstance(rule, g.id))
    return found


def apply_rule(
    config: Configuration, r: RuleInstance, consts: PhysConstants = DEFAULT_CONSTANTS
) -> Configuration:
    if not _is_enabled(config, r, consts):
        raise RuleNotEnabled(f"{r} is not enabled")
    obj = config.get(r.subject)
    if r.rule is Rule.TURN_OFF:
        return config.replace(
            replace(obj, qdot=rat(0), smart=replace(obj.smart, status=Status.OFF))
        )
    if r.rule is Rule.TURN_ON:
        return config.replace(
            replace(obj, qdot=obj.smart.capacity, smart=replace(obj.smart, status=Status.ON))
        )
    _, target = _PHASE_EDGES[r.rule]
    if target.transitional:
        new = replace(obj, phase=target, mode=CompMode.PHASE_CHANGE, heat_trans=rat(0))
    else:
        new = replace(obj, phase=target, mode=CompMode.DEFAULT)
    return config.replace(new)


def time_can_advance(config: Configuration, consts: PhysConstants = DEFAULT_CONSTANTS) -> bool:
    return not enabled_rules(config, consts)


def normalize_discrete(
    config: Configuration, consts: PhysConstants = DEFAULT_CONSTANTS
) -> Configuration:
    """Fire enabled rules in canonical order until the configuration is quiescent."""
    cap = 4 * max(len(config), 1)
    for _ in range(cap):
        enabled = enabled_rules(config, consts)
        if not enabled:
            return config
        config = apply_rule(config, enabled[0], consts)
    if enabled_rules(config, consts):
        raise LivelockError(
            f"discrete rules still enabled after {cap} firings: "
            + ", ".join(str(r) for r in enabled_rules(config, consts))
        )
    return config


def tick(
    state: SystemState, h: Rational, consts: PhysConstants = DEFAULT_CONSTANTS
) -> SystemState:
    if h <= 0:
        raise ValueError("time step must be positive")
    pending = enabled_rules(state.config, consts)
    if pending:
        raise UrgencyViolation(
            "time cannot advance while rules are enabled: " + ", ".join(map(str, pending))
        )
    config = compute_temps(compute_qdots(state.config, consts), h)
    return SystemState(config, state.clock + h)


def step(
    state: SystemState, h: Rational, consts: PhysConstants = DEFAULT_CONSTANTS
) -> SystemState:
    """Canonical successor: settle all discrete rules, then advance time by ``h``."""
    settled = SystemState(normalize_discrete(state.config, consts), state.clock)
    return tick(settled, h, consts)
