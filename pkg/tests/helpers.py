"""Shared generators and oracles for the test suite."""

from fractions import Fraction

from thermflow.engine import apply_rule, enabled_rules
from thermflow.model import (
    CompMode,
    Configuration,
    Convection,
    EntityKind,
    HeatGenerator,
    Phase,
    SmartParams,
    Status,
    ThermalEntity,
    ThermalInteraction,
    mode_for,
    validate,
)
from thermflow.numeric import rat

# temperatures on and around every guard threshold
EDGE_TEMPS = [Fraction(t) for t in (-20, -1, Fraction(-1, 3), 0, Fraction(1, 2), 50,
                                    70, 75, 80, 99, 100, 101, 120)]
PHASES = list(Phase)


def random_entity(rng, eid):
    mass = rat(rng.choice([Fraction(1, 2), 1, Fraction(396, 875)]))
    temp = rat(rng.choice(EDGE_TEMPS))
    if rng.random() < 0.25:
        return ThermalEntity(eid, rat(rng.choice([1, 4])), mass, temp)
    phase = rng.choice(PHASES)
    heat_trans = rat(0)
    if phase.transitional:
        latent = rng.choice([334, 2257])
        heat_trans = mass * rat(rng.choice([-2, -1, 0, Fraction(1, 2), 1, 2]) * latent)
    return ThermalEntity(eid, rat(4), mass, temp, EntityKind.WATER, mode_for(phase), phase,
                         heat_trans)


def random_heater(rng, gid, entity):
    low = rat(rng.choice(EDGE_TEMPS[:-1]))
    high = low + rat(rng.choice([Fraction(1, 2), 5, 10]))
    status = rng.choice(list(Status))
    capacity = rat(rng.choice([1, Fraction(3, 2)]))
    qdot = capacity if status is Status.ON else rat(0)
    return HeatGenerator(gid, entity, qdot, SmartParams(status, low, high, capacity))


def random_config(rng) -> Configuration:
    """A valid configuration with several water entities and smart heaters near their guards."""
    while True:
        n = rng.randint(1, 4)
        ents = [random_entity(rng, f"e{k}") for k in range(n)]
        objs = list(ents)
        for k in range(rng.randint(0, 3)):
            objs.append(random_heater(rng, f"g{k}", rng.choice(ents).id))
        if n > 1 and rng.random() < 0.5:
            objs.append(ThermalInteraction("link", Convection(rat(1, 50)), "e0", "e1", rat(1)))
        if not validate(objs):
            return Configuration(objs)


def normal_forms(config, consts=None, limit=100):
    """Every terminal configuration reachable by firing rules in any order (exhaustive DFS)."""
    kwargs = {} if consts is None else {"consts": consts}
    terminals, seen, stack = set(), {config}, [(config, 0)]
    while stack:
        c, depth = stack.pop()
        if depth > limit:
            raise RuntimeError("rule firing did not terminate")
        enabled = enabled_rules(c, **kwargs)
        if not enabled:
            terminals.add(c)
        for r in enabled:
            nxt = apply_rule(c, r, **kwargs)
            if nxt not in seen:
                seen.add(nxt)
                stack.append((nxt, depth + 1))
    return terminals


def phase_mode_coherent(config) -> bool:
    for e in config.entities():
        if e.is_water:
            if e.mode is not mode_for(e.phase):
                return False
        elif e.phase is not None or e.mode is not CompMode.DEFAULT:
            return False
    return True


def coffee_room_oracle(coffee_temp, boiler=0, h=Fraction(1)):
    """Endless Euler series of (clock, coffee temp, room temp) for the coffee/room pair.

    Plain Fraction arithmetic with the table constants written out again here
    rather than imported from the package.  Phase changes are not modelled.
    """
    m_c, c_c, t_c = Fraction(396, 875), Fraction(42, 10), Fraction(coffee_temp)
    m_r, c_r, t_r = Fraction(384, 5), Fraction(105, 100), Fraction(20)
    conductance = (Fraction(15, 10000) * Fraction(121, 4375) / Fraction(1, 200)
                   + Fraction(20, 1000) * Fraction(22, 4375))
    boiler, h, clock = Fraction(boiler), Fraction(h), Fraction(0)
    while True:
        yield clock, t_c, t_r
        flow = conductance * (t_c - t_r)
        t_c, t_r = t_c + h * (boiler - flow) / (m_c * c_c), t_r + h * flow / (m_r * c_r)
        clock += h


def cs2_melting_oracle():
    """Clock at which the iced coffee of cs2 first reaches 0 degrees, and its temperature then."""
    for clock, t_c, _ in coffee_room_oracle(-10, boiler=Fraction(3, 2)):
        if t_c >= 0:
            return clock, t_c
