"""Scene files: a small line-oriented language describing an initial state.

Example::

    # a cup of coffee in a room
    [params] timeStep=1 precision=10
    [entity coffee] heatCap=21/5 mass=396/875 temp=70
    [entity room]   heatCap=21/20 mass=384/5 temp=20
    [interaction crConvect] type=convection entity1=coffee entity2=room
                            area=22/4375 convCoeff=1/50
    [prop close] expr=abs(temp(coffee) - temp(room)) <= 1/1000

A section header is followed by ``key=value`` pairs, on the header line or
on continuation lines.  ``expr=`` in a ``[prop]`` section takes the rest of
its line.  ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .errors import SceneError
from .model import (
    Conduction,
    Configuration,
    Convection,
    EntityKind,
    HeatGenerator,
    Phase,
    Radiation,
    SmartParams,
    Status,
    SystemState,
    ThermalEntity,
    ThermalInteraction,
    check,
    mode_for,
    validate,
)
from .numeric import DEFAULT_PRECISION, Rational, parse_rational, rat, to_text
from .physics import DEFAULT_CONSTANTS, PhysConstants
from .predicate import Predicate, parse_predicate

_CONSTANT_KEYS = {
    "stefBolz": "stef_bolz",
    "latentFusion": "latent_fusion",
    "latentVapor": "latent_vapor",
    "meltPoint": "melt_point",
    "boilPoint": "boil_point",
}


@dataclass(frozen=True)
class SceneParams:
    time_step: Rational = rat(1)
    precision: int = DEFAULT_PRECISION
    constants: PhysConstants = DEFAULT_CONSTANTS


@dataclass(frozen=True)
class SceneDef:
    params: SceneParams
    objects: tuple
    props: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(sorted(self.objects, key=lambda o: o.id)))

    def initial_config(self) -> Configuration:
        return check(Configuration(self.objects))

    def initial_state(self) -> SystemState:
        return SystemState(self.initial_config(), rat(0))

    def with_time_step(self, h) -> "SceneDef":
        h = rat(h)
        if h <= 0:
            raise ValueError("time step must be positive")
        return replace(self, params=replace(self.params, time_step=h))

    def with_props(self, extra: dict) -> "SceneDef":
        return replace(self, props={**self.props, **extra})


# parsing -------------------------------------------------------------------

_HEADER = re.compile(r"\s*\[\s*([A-Za-z]+)(?:\s+([^\]\s]+))?\s*\]")
_PAIR = re.compile(r"([A-Za-z][A-Za-z0-9_]*)=(\S*)")
_ID = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*(?:-[A-Za-z0-9_]+)*$")


@dataclass
class _Section:
    kind: str
    name: str
    line: int
    column: int
    pairs: dict = field(default_factory=dict)  # key -> (value, line, column)

    def loc(self, key=None):
        if key is not None and key in self.pairs:
            _, line, col = self.pairs[key]
            return line, col
        return self.line, self.column

    def fail(self, message, key=None):
        line, col = self.loc(key)
        return SceneError(message, line=line, column=col)


_ALLOWED = {
    "params": {"timeStep", "precision", *_CONSTANT_KEYS},
    "entity": {"kind", "heatCap", "mass", "temp", "phase", "heatTrans"},
    "interaction": {
        "type",
        "entity1",
        "entity2",
        "area",
        "qdot",
        "thermCond",
        "thickness",
        "convCoeff",
        "emissiv",
    },
    "heater": {"entity", "qdot", "status", "lowTemp", "highTemp", "capacity"},
    "prop": {"expr"},
}


def _split_sections(text: str) -> list[_Section]:
    sections: list[_Section] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        pos = 0
        m = _HEADER.match(line)
        if m:
            kind = m.group(1)
            if kind not in _ALLOWED:
                raise SceneError(f"unknown section [{kind}]", line=lineno, column=m.start(1) + 1)
            name = m.group(2) or ""
            if kind == "params":
                if name:
                    raise SceneError("[params] takes no name", line=lineno, column=m.start(2) + 1)
                if any(s.kind == "params" for s in sections):
                    raise SceneError("duplicate [params] section", line=lineno, column=1)
            elif not _ID.match(name):
                raise SceneError(
                    f"[{kind}] needs a valid identifier", line=lineno, column=m.start(1) + 1
                )
            sections.append(_Section(kind, name, lineno, line.index("[") + 1))
            pos = m.end()
        elif not sections:
            raise SceneError("expected a [section] header", line=lineno, column=1)
        sec = sections[-1]
        while pos < len(line):
            while pos < len(line) and line[pos].isspace():
                pos += 1
            if pos >= len(line):
                break
            if sec.kind == "prop" and line.startswith("expr=", pos):
                _add_pair(sec, "expr", line[pos + 5 :].strip(), lineno, pos + 6)
                break
            pm = _PAIR.match(line, pos)
            if pm is None:
                raise SceneError("expected key=value", line=lineno, column=pos + 1)
            key, value = pm.group(1), pm.group(2)
            if not value:
                raise SceneError(f"missing value for {key!r}", line=lineno, column=pos + 1)
            _add_pair(sec, key, value, lineno, pm.start(2) + 1)
            pos = pm.end()
    return sections


def _add_pair(sec: _Section, key, value, line, column):
    if key not in _ALLOWED[sec.kind]:
        raise SceneError(f"unknown key {key!r} in [{sec.kind}]", line=line, column=column)
    if key in sec.pairs:
        raise SceneError(f"duplicate key {key!r}", line=line, column=column)
    sec.pairs[key] = (value, line, column)


def _rational(sec: _Section, key, default=None) -> Rational:
    if key not in sec.pairs:
        if default is not None:
            return rat(default)
        raise sec.fail(f"[{sec.kind} {sec.name}] is missing {key!r}")
    value = sec.pairs[key][0]
    try:
        return parse_rational(value)
    except ValueError:
        raise sec.fail(f"invalid rational {value!r} for {key!r}", key) from None


def _choice(sec: _Section, key, enum, default=None):
    if key not in sec.pairs:
        if default is not None:
            return default
        raise sec.fail(f"[{sec.kind} {sec.name}] is missing {key!r}")
    value = sec.pairs[key][0]
    try:
        return enum(value)
    except ValueError:
        allowed = ", ".join(e.value for e in enum)
        raise sec.fail(f"invalid {key} {value!r} (expected one of {allowed})", key) from None


def _word(sec: _Section, key) -> str:
    if key not in sec.pairs:
        raise sec.fail(f"[{sec.kind} {sec.name}] is missing {key!r}")
    return sec.pairs[key][0]


def _build_params(sec) -> SceneParams:
    if sec is None:
        return SceneParams()
    step = _rational(sec, "timeStep", 1)
    if step <= 0:
        raise sec.fail("timeStep must be positive", "timeStep")
    precision = DEFAULT_PRECISION
    if "precision" in sec.pairs:
        value = sec.pairs["precision"][0]
        if not value.isdigit() or int(value) < 1:
            raise sec.fail("precision must be a positive integer", "precision")
        precision = int(value)
    overrides = {
        attr: _rational(sec, key) for key, attr in _CONSTANT_KEYS.items() if key in sec.pairs
    }
    try:
        constants = replace(DEFAULT_CONSTANTS, **overrides)
    except ValueError as exc:
        raise sec.fail(str(exc)) from None
    return SceneParams(step, precision, constants)


def _build_entity(sec) -> ThermalEntity:
    kind = _choice(sec, "kind", EntityKind, EntityKind.BASIC)
    phase = None
    if kind is EntityKind.WATER:
        phase = _choice(sec, "phase", Phase)
    elif "phase" in sec.pairs:
        raise sec.fail("only water entities have a phase", "phase")
    return ThermalEntity(
        id=sec.name,
        heat_cap=_rational(sec, "heatCap"),
        mass=_rational(sec, "mass"),
        temp=_rational(sec, "temp"),
        kind=kind,
        mode=mode_for(phase),
        phase=phase,
        heat_trans=_rational(sec, "heatTrans", 0),
    )


_INTERACTION_KEYS = {
    "conduction": {"thermCond", "thickness"},
    "convection": {"convCoeff"},
    "radiation": {"emissiv"},
}


def _build_interaction(sec) -> ThermalInteraction:
    kind = _word(sec, "type")
    if kind not in _INTERACTION_KEYS:
        raise sec.fail(
            f"unknown interaction type {kind!r} (expected conduction, convection or radiation)",
            "type",
        )
    for other, keys in _INTERACTION_KEYS.items():
        if other != kind:
            for key in keys & set(sec.pairs):
                raise sec.fail(f"{key!r} does not apply to {kind}", key)
    if kind == "conduction":
        params = Conduction(_rational(sec, "thermCond"), _rational(sec, "thickness"))
    elif kind == "convection":
        params = Convection(_rational(sec, "convCoeff"))
    else:
        params = Radiation(_rational(sec, "emissiv"))
    return ThermalInteraction(
        id=sec.name,
        params=params,
        entity1=_word(sec, "entity1"),
        entity2=_word(sec, "entity2"),
        area=_rational(sec, "area"),
        qdot=_rational(sec, "qdot", 0),
    )


def _build_heater(sec) -> HeatGenerator:
    smart_keys = {"status", "lowTemp", "highTemp", "capacity"}
    present = smart_keys & set(sec.pairs)
    if not present:
        return HeatGenerator(sec.name, _word(sec, "entity"), _rational(sec, "qdot"))
    missing = sorted(smart_keys - present)
    if missing:
        raise sec.fail(f"smart heater {sec.name!r} is missing {', '.join(missing)}")
    smart = SmartParams(
        status=_choice(sec, "status", Status),
        low_temp=_rational(sec, "lowTemp"),
        high_temp=_rational(sec, "highTemp"),
        capacity=_rational(sec, "capacity"),
    )
    default_qdot = smart.capacity if smart.status is Status.ON else 0
    return HeatGenerator(sec.name, _word(sec, "entity"), _rational(sec, "qdot", default_qdot), smart)


_FIELD_KEYS = {"heatCap", "mass", "phase", "mode", "entity1", "entity2", "area", "thermCond",
               "thickness", "convCoeff", "emissiv", "entity", "qdot", "lowTemp", "capacity"}


def parse_scene(text: str) -> SceneDef:
    """Parse scene text; every failure is a :class:`SceneError` with a location."""
    sections = _split_sections(text)
    by_name = {}
    objects = []
    params_sec = None
    prop_secs = []
    builders = {"entity": _build_entity, "interaction": _build_interaction, "heater": _build_heater}
    for sec in sections:
        if sec.kind == "params":
            params_sec = sec
            continue
        if sec.kind == "prop":
            if any(p.name == sec.name for p in prop_secs):
                raise sec.fail(f"duplicate proposition {sec.name!r}")
            prop_secs.append(sec)
            continue
        if sec.name in by_name:
            raise sec.fail(f"duplicate id {sec.name!r}")
        by_name[sec.name] = sec
        objects.append(builders[sec.kind](sec))
    params = _build_params(params_sec)

    violations = validate(objects)
    if violations:
        v = violations[0]
        sec = by_name.get(v.id)
        key = v.field if sec is not None and v.field in _FIELD_KEYS else None
        where = sec.loc(key) if sec is not None else (None, None)
        raise SceneError(str(v.message) + f" ({v.id}.{v.field})", line=where[0], column=where[1])

    props = {}
    for sec in prop_secs:
        if "expr" not in sec.pairs:
            raise sec.fail(f"[prop {sec.name}] is missing 'expr'")
        expr, line, col = sec.pairs["expr"]
        props[sec.name] = parse_predicate(expr, objects, line=line, col_offset=col - 1)
    return SceneDef(params, tuple(objects), props)


def load_scene(ref: str) -> SceneDef:
    """Load ``builtin:<name>`` or a scene file path."""
    if ref.startswith("builtin:"):
        from .cases import builtin

        return builtin(ref[len("builtin:"):])
    return parse_scene(Path(ref).read_text(encoding="utf-8"))


# serialization -------------------------------------------------------------


def _entity_text(e: ThermalEntity) -> str:
    parts = [f"[entity {e.id}]", f"kind={e.kind}", f"heatCap={to_text(e.heat_cap)}",
             f"mass={to_text(e.mass)}", f"temp={to_text(e.temp)}"]
    if e.phase is not None:
        parts.append(f"phase={e.phase}")
    if e.heat_trans != 0 or e.is_water:
        parts.append(f"heatTrans={to_text(e.heat_trans)}")
    return " ".join(parts)


def _interaction_text(i: ThermalInteraction) -> str:
    parts = [f"[interaction {i.id}]", f"type={i.params.name}", f"entity1={i.entity1}",
             f"entity2={i.entity2}", f"area={to_text(i.area)}"]
    names = {"therm_cond": "thermCond", "thickness": "thickness",
             "conv_coeff": "convCoeff", "emissiv": "emissiv"}
    for f in fields(i.params):
        parts.append(f"{names[f.name]}={to_text(getattr(i.params, f.name))}")
    if i.qdot != 0:
        parts.append(f"qdot={to_text(i.qdot)}")
    return " ".join(parts)


def _heater_text(g: HeatGenerator) -> str:
    parts = [f"[heater {g.id}]", f"entity={g.entity}", f"qdot={to_text(g.qdot)}"]
    if g.smart is not None:
        s = g.smart
        parts += [f"status={s.status}", f"lowTemp={to_text(s.low_temp)}",
                  f"highTemp={to_text(s.high_temp)}", f"capacity={to_text(s.capacity)}"]
    return " ".join(parts)


def serialize_scene(scene: SceneDef) -> str:
    p = scene.params
    head = [f"[params] timeStep={to_text(p.time_step)} precision={p.precision}"]
    for key, attr in _CONSTANT_KEYS.items():
        head.append(f"  {key}={to_text(getattr(p.constants, attr))}")
    lines = head
    for obj in scene.objects:
        if isinstance(obj, ThermalEntity):
            lines.append(_entity_text(obj))
        elif isinstance(obj, ThermalInteraction):
            lines.append(_interaction_text(obj))
        else:
            lines.append(_heater_text(obj))
    for name, pred in scene.props.items():
        lines.append(f"[prop {name}] expr={pred}")
    return "\n".join(lines) + "\n"
