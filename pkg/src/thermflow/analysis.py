"""Simulation, timed search, find-earliest and time-bounded LTL model checking.

Discrete rules are confluent, so by default the stepped system has a single
run: settle the urgent rules, tick, repeat.  With ``interleave=True`` every
individual rule firing is a separate transition, and search and model
checking explore all orders in which simultaneously enabled rules can fire.
"""

from __future__ import annotations

import csv
import os
from collections import deque
from dataclasses import dataclass
from typing import Iterator, Optional

from .engine import apply_rule, enabled_rules, normalize_discrete, tick
from .errors import InconclusiveError, LivelockError
from .ltl import (
    Always,
    Eventually,
    Until,
    check_bound,
    evaluate_lasso,
    parse_formula,
    propositions,
)
from .model import Configuration, HeatGenerator, SystemState, ThermalEntity, ThermalInteraction
from .numeric import Rational, display, rat
from .predicate import Predicate
from .scene import SceneDef

DEFAULT_STEP_CAP = 10**6
MAX_PATHS = 10_000


def default_step_cap() -> int:
    value = os.environ.get("THERMFLOW_STEP_CAP")
    if value:
        try:
            cap = int(value)
        except ValueError:
            raise ValueError(f"THERMFLOW_STEP_CAP must be an integer, got {value!r}") from None
        if cap < 1:
            raise ValueError("THERMFLOW_STEP_CAP must be positive")
        return cap
    return DEFAULT_STEP_CAP


@dataclass(frozen=True)
class Sample:
    clock: Rational
    config: Configuration


@dataclass
class Trace:
    samples: list

    def __iter__(self):
        return iter(self.samples)

    def __len__(self):
        return len(self.samples)

    def __getitem__(self, i):
        return self.samples[i]

    @property
    def final(self) -> Sample:
        return self.samples[-1]


@dataclass
class CheckResult:
    holds: bool
    counterexample: Optional[Trace] = None
    paths: int = 1

    @property
    def verdict(self) -> str:
        return "holds" if self.holds else "violated"


def _check_bound(scene: SceneDef, time_bound) -> Rational:
    bound = rat(time_bound)
    if bound < 0:
        raise ValueError("time bound must be non-negative")
    if (bound / scene.params.time_step).denominator != 1:
        raise ValueError("time bound must be a multiple of the time step")
    return bound


def run(scene: SceneDef, until=None, interleave: bool = False) -> Iterator[Sample]:
    """Yield every visited state of the canonical run, up to clock ``until`` if given.

    Without ``interleave`` a whole discrete settlement is one sample; with it,
    each rule firing (in canonical order) is its own sample.
    """
    consts = scene.params.constants
    h = scene.params.time_step
    state = scene.initial_state()
    yield Sample(state.clock, state.config)
    while True:
        config = state.config
        if interleave:
            cap = 4 * max(len(config), 1)
            fired = 0
            while True:
                enabled = enabled_rules(config, consts)
                if not enabled:
                    break
                if fired == cap:
                    raise LivelockError(f"discrete rules still enabled after {cap} firings")
                config = apply_rule(config, enabled[0], consts)
                fired += 1
                yield Sample(state.clock, config)
        else:
            settled = normalize_discrete(config, consts)
            if settled is not config:
                config = settled
                yield Sample(state.clock, config)
        if until is not None and state.clock >= until:
            return
        state = tick(SystemState(config, state.clock), h, consts)
        yield Sample(state.clock, state.config)


def simulate(scene: SceneDef, time_bound, interleave: bool = False) -> Trace:
    bound = _check_bound(scene, time_bound)
    return Trace(list(run(scene, bound, interleave)))


def _successors(config: Configuration, clock, scene: SceneDef):
    consts = scene.params.constants
    enabled = enabled_rules(config, consts)
    if enabled:
        return [(apply_rule(config, r, consts), clock) for r in enabled]
    state = tick(SystemState(config, clock), scene.params.time_step, consts)
    return [(state.config, state.clock)]


def _search_all_orders(scene, pred, bound, max_solutions, cap) -> list:
    """Breadth-first over every interleaving, one clock level at a time."""
    consts = scene.params.constants
    h = scene.params.time_step
    frontier = [scene.initial_config()]
    clock = rat(0)
    found = []
    ticks = 0
    while True:
        seen = set(frontier)
        queue = deque(frontier)
        quiescent = []
        while queue:
            config = queue.popleft()
            if pred(config):
                found.append(Sample(clock, config))
                if len(found) >= max_solutions:
                    return found
            enabled = enabled_rules(config, consts)
            if not enabled:
                quiescent.append(config)
            for r in enabled:
                nxt = apply_rule(config, r, consts)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
            if len(seen) > MAX_PATHS:
                raise InconclusiveError("too many interleaved states at one instant")
        if bound is not None and clock >= bound:
            return found
        if bound is None and ticks >= cap:
            if found:
                return found
            raise InconclusiveError(f"no solution within the step cap of {cap} ticks")
        nxt_frontier = []
        for config in quiescent:
            after = tick(SystemState(config, clock), h, consts).config
            if after not in nxt_frontier:
                nxt_frontier.append(after)
        frontier = nxt_frontier
        clock += h
        ticks += 1


def timed_search(
    scene: SceneDef,
    pred: Predicate,
    time_bound=None,
    max_solutions: int = 1,
    step_cap: Optional[int] = None,
    interleave: bool = False,
) -> list:
    """States satisfying ``pred``, in clock order, at most ``max_solutions`` of them.

    Without a time bound the search runs until enough solutions are found or
    ``step_cap`` ticks have elapsed; hitting the cap with no solution raises
    :class:`InconclusiveError`.
    """
    if max_solutions < 1:
        raise ValueError("max_solutions must be at least 1")
    bound = None if time_bound is None else _check_bound(scene, time_bound)
    cap = default_step_cap() if step_cap is None else step_cap
    if interleave:
        return _search_all_orders(scene, pred, bound, max_solutions, cap)
    h = scene.params.time_step
    found = []
    for sample in run(scene, bound):
        if pred(sample.config):
            found.append(sample)
            if len(found) >= max_solutions:
                break
        if bound is None and sample.clock >= cap * h:
            if found:
                break
            raise InconclusiveError(f"no solution within the step cap of {cap} ticks")
    return found


def find_earliest(
    scene: SceneDef, pred: Predicate, step_cap: Optional[int] = None, interleave: bool = False
) -> Sample:
    """First visited state satisfying ``pred``; raises :class:`InconclusiveError` at the cap."""
    return timed_search(scene, pred, None, 1, step_cap, interleave)[0]


def _labels(samples, props, names):
    return [{n: props[n](s.config) for n in names} for s in samples]


def _is_temporal(f) -> bool:
    if isinstance(f, (Always, Eventually, Until)):
        return True
    return any(_is_temporal(c) for c in vars(f).values() if not isinstance(c, str))


def _witness(formula, samples, labels) -> Trace:
    # A violated [] p with propositional p is witnessed by the prefix up to the first bad state.
    if isinstance(formula, Always) and not _is_temporal(formula.arg):
        values = evaluate_lasso(formula.arg, labels)
        first_bad = values.index(False)
        return Trace(list(samples[: first_bad + 1]))
    return Trace(list(samples))


def _paths(scene: SceneDef, bound: Rational) -> Iterator[list]:
    """Every maximal path up to ``bound``, each ending in a quiescent state at the bound."""
    memo = {}
    consts = scene.params.constants

    def succ(config, clock):
        key = (config, clock)
        if key not in memo:
            memo[key] = _successors(config, clock, scene)
        return memo[key]

    start = Sample(rat(0), scene.initial_config())
    stack = [(start, 0)]
    path = []
    while stack:
        sample, depth = stack.pop()
        del path[depth:]
        path.append(sample)
        if sample.clock >= bound and not enabled_rules(sample.config, consts):
            yield list(path)
            continue
        children = succ(sample.config, sample.clock)
        for config, clock in reversed(children):
            stack.append((Sample(clock, config), depth + 1))


def model_check(
    scene: SceneDef, formula, time_bound, interleave: bool = False
) -> CheckResult:
    """Decide ``formula`` on the run up to ``time_bound``, closing the last state with a self-loop."""
    if isinstance(formula, str):
        formula = parse_formula(formula)
    check_bound(formula, scene.props)
    bound = _check_bound(scene, time_bound)
    names = sorted(propositions(formula))
    if not interleave:
        samples = simulate(scene, bound).samples
        labels = _labels(samples, scene.props, names)
        if evaluate_lasso(formula, labels)[0]:
            return CheckResult(True)
        return CheckResult(False, _witness(formula, samples, labels))
    count = 0
    for samples in _paths(scene, bound):
        count += 1
        if count > MAX_PATHS:
            raise InconclusiveError(f"more than {MAX_PATHS} interleaved paths")
        labels = _labels(samples, scene.props, names)
        if not evaluate_lasso(formula, labels)[0]:
            return CheckResult(False, _witness(formula, samples, labels), count)
    return CheckResult(True, None, count)


# CSV ----------------------------------------------------------------------


def csv_columns(config: Configuration, temps_only: bool = False) -> list:
    """Column keys as (object id, attribute) pairs: entities, then interactions, then heaters."""
    cols = []
    for e in config.entities():
        cols.append((e.id, "temp"))
        if e.is_water and not temps_only:
            cols.append((e.id, "heatTrans"))
    if not temps_only:
        cols += [(i.id, "qdot") for i in config.interactions()]
        cols += [(g.id, "qdot") for g in config.heaters()]
    return cols


_ATTRS = {"temp": "temp", "heatTrans": "heat_trans", "qdot": "qdot"}


def attribute(config: Configuration, oid: str, attr: str) -> Rational:
    return getattr(config.get(oid), _ATTRS[attr])


def write_csv(trace: Trace, stream, precision: int = 10, temps_only: bool = False) -> None:
    """One row per sample; every value rendered with :func:`display`."""
    cols = csv_columns(trace[0].config, temps_only)
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["time"] + [f"{oid}.{attr}" for oid, attr in cols])
    for s in trace:
        writer.writerow(
            [display(s.clock, precision)]
            + [display(attribute(s.config, oid, attr), precision) for oid, attr in cols]
        )


def bindings(config: Configuration, precision: int = 10) -> dict:
    """Displayed attributes of every object, keyed ``<id>.<attr>``."""
    out = {}
    for obj in config:
        if isinstance(obj, ThermalEntity):
            out[f"{obj.id}.temp"] = display(obj.temp, precision)
            if obj.is_water:
                out[f"{obj.id}.phase"] = str(obj.phase)
                out[f"{obj.id}.heatTrans"] = display(obj.heat_trans, precision)
        elif isinstance(obj, ThermalInteraction):
            out[f"{obj.id}.qdot"] = display(obj.qdot, precision)
        elif isinstance(obj, HeatGenerator):
            out[f"{obj.id}.qdot"] = display(obj.qdot, precision)
            if obj.smart is not None:
                out[f"{obj.id}.status"] = str(obj.smart.status)
    return out
