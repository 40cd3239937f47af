"""Thermal entities, interactions, heat generators and the configuration holding them.

Entities carry the effort variable (temperature), interactions carry the
flow variable (heat flow rate in kW).  Every object is an immutable value;
the engine derives new configurations instead of mutating old ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Optional, Union

from .errors import RoleMismatchError, ValidationError
from .numeric import Rational, rat


class Phase(str, Enum):
    SOLID = "solid"
    LIQUID = "liquid"
    GAS = "gas"
    MELTING = "melting"
    EVAPORATING = "evaporating"
    CONDENSING = "condensing"
    FREEZING = "freezing"

    @property
    def transitional(self) -> bool:
        return self in TRANSITIONAL_PHASES

    def __str__(self):
        return self.value


MAIN_PHASES = frozenset({Phase.SOLID, Phase.LIQUID, Phase.GAS})
TRANSITIONAL_PHASES = frozenset(
    {Phase.MELTING, Phase.EVAPORATING, Phase.CONDENSING, Phase.FREEZING}
)


class CompMode(str, Enum):
    DEFAULT = "default"
    PHASE_CHANGE = "phaseChange"

    def __str__(self):
        return self.value


class EntityKind(str, Enum):
    BASIC = "basic"
    WATER = "water"

    def __str__(self):
        return self.value


class Status(str, Enum):
    ON = "on"
    OFF = "off"

    def __str__(self):
        return self.value


def mode_for(phase: Optional[Phase]) -> CompMode:
    if phase is not None and phase.transitional:
        return CompMode.PHASE_CHANGE
    return CompMode.DEFAULT


@dataclass(frozen=True)
class ThermalEntity:
    id: str
    heat_cap: Rational  # kJ/(kg.C)
    mass: Rational  # kg
    temp: Rational  # C
    kind: EntityKind = EntityKind.BASIC
    mode: CompMode = CompMode.DEFAULT
    phase: Optional[Phase] = None
    heat_trans: Rational = field(default_factory=lambda: rat(0))  # kJ, latent heat

    @property
    def is_water(self) -> bool:
        return self.kind is EntityKind.WATER


@dataclass(frozen=True)
class Conduction:
    therm_cond: Rational  # kW/(m.C)
    thickness: Rational  # m

    name = "conduction"


@dataclass(frozen=True)
class Convection:
    conv_coeff: Rational  # kW/(m^2.C)

    name = "convection"


@dataclass(frozen=True)
class Radiation:
    emissiv: Rational

    name = "radiation"


InteractionParams = Union[Conduction, Convection, Radiation]


@dataclass(frozen=True)
class ThermalInteraction:
    id: str
    params: InteractionParams
    entity1: str
    entity2: str
    area: Rational  # m^2
    qdot: Rational = field(default_factory=lambda: rat(0))  # kW, positive from entity1 to entity2


@dataclass(frozen=True)
class SmartParams:
    status: Status
    low_temp: Rational
    high_temp: Rational
    capacity: Rational  # kW delivered while on


@dataclass(frozen=True)
class HeatGenerator:
    id: str
    entity: str
    qdot: Rational  # kW
    smart: Optional[SmartParams] = None


ThermalObject = Union[ThermalEntity, ThermalInteraction, HeatGenerator]

_ROLE_NAMES = {
    ThermalEntity: "entity",
    ThermalInteraction: "interaction",
    HeatGenerator: "heater",
}


def role_of(obj) -> str:
    return _ROLE_NAMES[type(obj)]


class Configuration:
    """Immutable, id-keyed multiset of thermal objects.

    Iteration is always in lexicographic id order, so results never depend
    on the order objects were supplied in.
    """

    __slots__ = ("_objects", "_hash")

    def __init__(self, objects: Iterable[ThermalObject] = ()):
        by_id = {}
        duplicates = []
        for obj in objects:
            if obj.id in by_id:
                duplicates.append(obj.id)
            by_id[obj.id] = obj
        if duplicates:
            raise ValidationError(
                [Violation(d, "id", "duplicate id") for d in sorted(set(duplicates))]
            )
        self._objects = {k: by_id[k] for k in sorted(by_id)}
        self._hash = None

    def __iter__(self) -> Iterator[ThermalObject]:
        return iter(self._objects.values())

    def __len__(self):
        return len(self._objects)

    def __contains__(self, oid):
        return oid in self._objects

    def __eq__(self, other):
        if not isinstance(other, Configuration):
            return NotImplemented
        return self._objects == other._objects

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._objects.values()))
        return self._hash

    def __repr__(self):
        return f"Configuration({list(self._objects.values())!r})"

    def ids(self):
        return list(self._objects)

    def get(self, oid: str):
        return self._objects.get(oid)

    def _get_role(self, oid, cls):
        obj = self._objects.get(oid)
        if obj is None:
            return None
        if not isinstance(obj, cls):
            raise RoleMismatchError(
                f"{oid!r} is a {role_of(obj)}, not a {_ROLE_NAMES[cls]}"
            )
        return obj

    def get_entity(self, oid: str) -> Optional[ThermalEntity]:
        return self._get_role(oid, ThermalEntity)

    def get_interaction(self, oid: str) -> Optional[ThermalInteraction]:
        return self._get_role(oid, ThermalInteraction)

    def get_heater(self, oid: str) -> Optional[HeatGenerator]:
        return self._get_role(oid, HeatGenerator)

    def entities(self) -> list[ThermalEntity]:
        return [o for o in self._objects.values() if isinstance(o, ThermalEntity)]

    def interactions(self) -> list[ThermalInteraction]:
        return [o for o in self._objects.values() if isinstance(o, ThermalInteraction)]

    def heaters(self) -> list[HeatGenerator]:
        return [o for o in self._objects.values() if isinstance(o, HeatGenerator)]

    def replace(self, *objects: ThermalObject) -> "Configuration":
        """Return a copy with the given objects substituted by id."""
        new = Configuration.__new__(Configuration)
        merged = dict(self._objects)
        for obj in objects:
            if obj.id not in merged:
                raise KeyError(obj.id)
            merged[obj.id] = obj
        new._objects = merged
        new._hash = None
        return new


@dataclass(frozen=True)
class SystemState:
    config: Configuration
    clock: Rational


@dataclass(frozen=True)
class Violation:
    id: str
    field: str
    message: str

    def __str__(self):
        return f"{self.id}.{self.field}: {self.message}"


def _check_entity(e: ThermalEntity, out: list):
    if e.heat_cap <= 0:
        out.append(Violation(e.id, "heatCap", "heatCap must be positive"))
    if e.mass <= 0:
        out.append(Violation(e.id, "mass", "mass must be positive"))
    if e.kind is EntityKind.BASIC:
        if e.phase is not None:
            out.append(Violation(e.id, "phase", "basic entities have no phase"))
        if e.mode is not CompMode.DEFAULT:
            out.append(Violation(e.id, "mode", "basic entities must be in mode default"))
    else:
        if e.phase is None:
            out.append(Violation(e.id, "phase", "water entities need a phase"))
        elif e.mode is not mode_for(e.phase):
            out.append(
                Violation(e.id, "mode", f"phase {e.phase} requires mode {mode_for(e.phase)}")
            )


def _check_entity_ref(config, owner, fieldname, ref, out):
    target = config.get(ref)
    if target is None:
        out.append(Violation(owner, fieldname, f"unknown entity {ref!r}"))
    elif not isinstance(target, ThermalEntity):
        out.append(Violation(owner, fieldname, f"{ref!r} is a {role_of(target)}, not an entity"))


def _check_interaction(config, i: ThermalInteraction, out: list):
    _check_entity_ref(config, i.id, "entity1", i.entity1, out)
    _check_entity_ref(config, i.id, "entity2", i.entity2, out)
    if i.entity1 == i.entity2:
        out.append(Violation(i.id, "entity2", "an interaction needs two distinct entities"))
    if i.area <= 0:
        out.append(Violation(i.id, "area", "area must be positive"))
    p = i.params
    if isinstance(p, Conduction):
        if p.therm_cond <= 0:
            out.append(Violation(i.id, "thermCond", "thermCond must be positive"))
        if p.thickness <= 0:
            out.append(Violation(i.id, "thickness", "thickness must be positive"))
    elif isinstance(p, Convection):
        if p.conv_coeff <= 0:
            out.append(Violation(i.id, "convCoeff", "convCoeff must be positive"))
    elif isinstance(p, Radiation):
        if not 0 < p.emissiv <= 1:
            out.append(Violation(i.id, "emissiv", "emissiv must lie in (0, 1]"))


def _check_heater(config, g: HeatGenerator, out: list):
    _check_entity_ref(config, g.id, "entity", g.entity, out)
    if g.qdot < 0:
        out.append(Violation(g.id, "qdot", "qdot must be non-negative"))
    s = g.smart
    if s is None:
        return
    if s.low_temp >= s.high_temp:
        out.append(Violation(g.id, "lowTemp", "lowTemp must be below highTemp"))
    if s.capacity <= 0:
        out.append(Violation(g.id, "capacity", "capacity must be positive"))
    if s.status is Status.OFF and g.qdot != 0:
        out.append(Violation(g.id, "qdot", "a heater that is off must have qdot 0"))
    if s.status is Status.ON and g.qdot != s.capacity:
        out.append(Violation(g.id, "qdot", "a heater that is on must deliver its capacity"))


def validate(objects) -> list[Violation]:
    """Check every object invariant; an empty list means the configuration is valid.

    Accepts a :class:`Configuration` or any iterable of objects (the latter
    lets duplicate ids be reported instead of raised).
    """
    out: list[Violation] = []
    if not isinstance(objects, Configuration):
        objects = list(objects)
        seen = set()
        for obj in objects:
            if obj.id in seen:
                out.append(Violation(obj.id, "id", "duplicate id"))
            seen.add(obj.id)
        objects = Configuration({o.id: o for o in objects}.values())
    for obj in objects:
        if not obj.id:
            out.append(Violation(obj.id, "id", "id must be non-empty"))
        if isinstance(obj, ThermalEntity):
            _check_entity(obj, out)
        elif isinstance(obj, ThermalInteraction):
            _check_interaction(objects, obj, out)
        else:
            _check_heater(objects, obj, out)
    return out


def check(config: Configuration) -> Configuration:
    """Raise :class:`ValidationError` unless ``config`` is valid."""
    violations = validate(config)
    if violations:
        raise ValidationError(violations)
    return config
