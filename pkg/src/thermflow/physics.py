"""Continuous dynamics: heat flow rates and the explicit Euler step.

A tick is two passes.  First every interaction's flow is recomputed from
the entity temperatures at the start of the step, then every entity is
advanced from the sum of those new flows.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .model import (
    CompMode,
    Conduction,
    Configuration,
    Convection,
    Radiation,
    ThermalInteraction,
)
from .numeric import Rational, rat, rat_pow


@dataclass(frozen=True)
class PhysConstants:
    stef_bolz: Rational = rat(567, 10**13)  # kW/(m^2.K^4)
    latent_fusion: Rational = rat(334)  # kJ/kg
    latent_vapor: Rational = rat(2257)  # kJ/kg
    melt_point: Rational = rat(0)  # C
    boil_point: Rational = rat(100)  # C

    def __post_init__(self):
        for name in ("stef_bolz", "latent_fusion", "latent_vapor"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.melt_point >= self.boil_point:
            raise ValueError("melt_point must be below boil_point")


DEFAULT_CONSTANTS = PhysConstants()


def flow_rate(
    interaction: ThermalInteraction,
    t1: Rational,
    t2: Rational,
    consts: PhysConstants = DEFAULT_CONSTANTS,
) -> Rational:
    """Heat flow rate in kW from entity1 (at ``t1``) to entity2 (at ``t2``).

    Radiation raises the stored temperatures to the fourth power as given;
    scenes using it should store absolute temperatures.
    """
    p = interaction.params
    if isinstance(p, Radiation):
        return (p.emissiv * consts.stef_bolz * interaction.area) * (
            rat_pow(t1, 4) - rat_pow(t2, 4)
        )
    return _conductance(interaction) * (t1 - t2)


def _conductance(interaction: ThermalInteraction) -> Rational:
    """kW per degree of temperature difference, for the linear laws."""
    p = interaction.params
    if isinstance(p, Conduction):
        return p.therm_cond * interaction.area / p.thickness
    if isinstance(p, Convection):
        return p.conv_coeff * interaction.area
    raise TypeError(f"{type(p).__name__} is not a linear heat transfer law")


def compute_qdots(
    config: Configuration, consts: PhysConstants = DEFAULT_CONSTANTS
) -> Configuration:
    interactions = config.interactions()
    if not interactions:
        return config
    updated = []
    diffs = {}  # temperature differences are large rationals; share them per entity pair
    for i in interactions:
        t1 = config.get_entity(i.entity1).temp
        t2 = config.get_entity(i.entity2).temp
        if isinstance(i.params, Radiation):
            qdot = flow_rate(i, t1, t2, consts)
        else:
            key = (i.entity1, i.entity2)
            if key not in diffs:
                diffs[key] = t1 - t2
            qdot = _conductance(i) * diffs[key]
        updated.append(replace(i, qdot=qdot))
    return config.replace(*updated)


def sum_qdots(config: Configuration, entity_id: str) -> Rational:
    """Net heat flow into ``entity_id``: interactions signed by direction, plus generators."""
    total = rat(0)
    for i in config.interactions():
        if i.entity1 == entity_id:
            total -= i.qdot
        elif i.entity2 == entity_id:
            total += i.qdot
    for g in config.heaters():
        if g.entity == entity_id:
            total += g.qdot
    return total


def euler_step(yn: Rational, h: Rational, fyn: Rational) -> Rational:
    return yn + h * fyn


def compute_temps(config: Configuration, h: Rational) -> Configuration:
    """Advance every entity one Euler step from the flows already stored in ``config``.

    Entities in phase-change mode hold their temperature and accumulate
    latent heat instead.
    """
    updated = []
    for e in config.entities():
        net = sum_qdots(config, e.id)
        if net == 0:
            continue
        if e.mode is CompMode.PHASE_CHANGE:
            updated.append(replace(e, heat_trans=euler_step(e.heat_trans, h, net)))
        else:
            updated.append(replace(e, temp=euler_step(e.temp, h, net / (e.mass * e.heat_cap))))
    if not updated:
        return config
    return config.replace(*updated)
