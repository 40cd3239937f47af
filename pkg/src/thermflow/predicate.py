"""State predicates over object attributes, e.g. ``abs(temp(coffee) - temp(room)) <= 1/1000``.

Grammar, loosest binding first::

    or  -> and ('or' and)*
    and -> not ('and' not)*
    not -> 'not' not | cmp
    cmp -> sum (('=' | '==' | '!=' | '<' | '<=' | '>' | '>=') sum)?
    sum -> prod (('+' | '-') prod)*
    prod -> unary (('*' | '/') unary)*
    unary -> '-' unary | atom
    atom -> number | 'true' | 'false' | '(' or ')'
          | temp(id) | qdot(id) | heatTrans(id) | abs(sum)
          | phaseIs(id, phase) | statusIs(id, on|off)

``1/1000`` is an exact division, so rational literals need no special syntax.
"""

from __future__ import annotations

import operator
import re
from dataclasses import dataclass, field

from .errors import SceneError, ThermflowError
from .model import (
    Configuration,
    HeatGenerator,
    Phase,
    Status,
    ThermalEntity,
    ThermalInteraction,
)
from .numeric import Rational, parse_rational, to_text


class EvaluationError(ThermflowError):
    """A predicate could not be evaluated on a configuration (e.g. division by zero)."""


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*(?:-[A-Za-z0-9_]+)*)"
    r"|(?P<op><=|>=|==|!=|≤|≥|≠|[-+*/()<>=,]))"
)

_CMP = {
    "=": operator.eq,
    "==": operator.eq,
    "!=": operator.ne,
    "≠": operator.ne,
    "<": operator.lt,
    "<=": operator.le,
    "≤": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
    "≥": operator.ge,
}
_CANONICAL_CMP = {"==": "=", "≠": "!=", "≤": "<=", "≥": ">="}
_ARITH = {"+": operator.add, "-": operator.sub, "*": operator.mul, "/": operator.truediv}


# AST ----------------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: Rational

    def eval(self, config):
        return self.value

    def __str__(self):
        return to_text(self.value) if self.value >= 0 else f"({to_text(self.value)})"


@dataclass(frozen=True)
class Attr:
    attr: str  # temp | qdot | heatTrans
    oid: str

    def eval(self, config):
        obj = config.get(self.oid)
        if obj is None:
            raise EvaluationError(f"object {self.oid!r} is absent")
        if self.attr == "temp":
            return obj.temp
        if self.attr == "heatTrans":
            return obj.heat_trans
        return obj.qdot

    def __str__(self):
        return f"{self.attr}({self.oid})"


@dataclass(frozen=True)
class Neg:
    arg: object

    def eval(self, config):
        return -self.arg.eval(config)

    def __str__(self):
        return f"-({self.arg})"


@dataclass(frozen=True)
class Abs:
    arg: object

    def eval(self, config):
        return abs(self.arg.eval(config))

    def __str__(self):
        return f"abs({self.arg})"


@dataclass(frozen=True)
class Arith:
    op: str
    left: object
    right: object

    def eval(self, config):
        try:
            return _ARITH[self.op](self.left.eval(config), self.right.eval(config))
        except ZeroDivisionError:
            raise EvaluationError(f"division by zero in {self}") from None

    def __str__(self):
        return f"({self.left} {self.op} {self.right})"


@dataclass(frozen=True)
class Compare:
    op: str
    left: object
    right: object

    def eval(self, config):
        return _CMP[self.op](self.left.eval(config), self.right.eval(config))

    def __str__(self):
        return f"{self.left} {self.op} {self.right}"


@dataclass(frozen=True)
class PhaseIs:
    oid: str
    phase: Phase

    def eval(self, config):
        return config.get(self.oid).phase is self.phase

    def __str__(self):
        return f"phaseIs({self.oid}, {self.phase})"


@dataclass(frozen=True)
class StatusIs:
    oid: str
    status: Status

    def eval(self, config):
        return config.get(self.oid).smart.status is self.status

    def __str__(self):
        return f"statusIs({self.oid}, {self.status})"


@dataclass(frozen=True)
class BoolConst:
    value: bool

    def eval(self, config):
        return self.value

    def __str__(self):
        return "true" if self.value else "false"


@dataclass(frozen=True)
class And:
    left: object
    right: object

    def eval(self, config):
        return self.left.eval(config) and self.right.eval(config)

    def __str__(self):
        return f"({self.left} and {self.right})"


@dataclass(frozen=True)
class Or:
    left: object
    right: object

    def eval(self, config):
        return self.left.eval(config) or self.right.eval(config)

    def __str__(self):
        return f"({self.left} or {self.right})"


@dataclass(frozen=True)
class Not:
    arg: object

    def eval(self, config):
        return not self.arg.eval(config)

    def __str__(self):
        return f"not ({self.arg})"


_BOOL_NODES = (Compare, PhaseIs, StatusIs, BoolConst, And, Or, Not)


@dataclass(frozen=True)
class Predicate:
    """A parsed, resolved state predicate.  Equality ignores the source text."""

    expr: object
    source: str = field(default="", compare=False)

    def __call__(self, config: Configuration) -> bool:
        return bool(self.expr.eval(config))

    def __str__(self):
        return self.source or str(self.expr)


# parser -------------------------------------------------------------------


def tokenize(text: str, line=None, col_offset=0):
    """Return (kind, value, column) triples; column is 1-based."""
    pos = 0
    tokens = []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise SceneError(
                f"unexpected character {text[pos]!r}", line=line, column=pos + 1 + col_offset
            )
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    tokens.append(("end", "", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text, objects, line=None, col_offset=0):
        self.text = text
        self.tokens = tokenize(text, line, col_offset)
        self.i = 0
        self.objects = objects
        self.line = line
        self.col_offset = col_offset

    def error(self, message, tok=None):
        tok = tok or self.tokens[self.i]
        return SceneError(message, line=self.line, column=tok[2] + self.col_offset)

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def accept(self, value):
        if self.peek()[1] == value and self.peek()[0] != "end":
            return self.next()
        return None

    def expect(self, value):
        tok = self.next()
        if tok[1] != value or tok[0] == "end":
            raise self.error(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok)
        return tok

    # typing helpers
    def want_bool(self, node, tok):
        if not isinstance(node, _BOOL_NODES):
            raise self.error("expected a condition, found a numeric expression", tok)
        return node

    def want_num(self, node, tok):
        if isinstance(node, _BOOL_NODES):
            raise self.error("expected a numeric expression, found a condition", tok)
        return node

    def parse(self):
        start = self.peek()
        node = self.want_bool(self.or_(), start)
        if self.peek()[0] != "end":
            raise self.error(f"unexpected {self.peek()[1]!r}")
        return node

    def or_(self):
        tok = self.peek()
        node = self.and_()
        while self.accept("or"):
            rtok = self.peek()
            node = Or(self.want_bool(node, tok), self.want_bool(self.and_(), rtok))
        return node

    def and_(self):
        tok = self.peek()
        node = self.not_()
        while self.accept("and"):
            rtok = self.peek()
            node = And(self.want_bool(node, tok), self.want_bool(self.not_(), rtok))
        return node

    def not_(self):
        if self.accept("not"):
            tok = self.peek()
            return Not(self.want_bool(self.not_(), tok))
        return self.cmp()

    def cmp(self):
        tok = self.peek()
        left = self.sum()
        if self.peek()[0] == "op" and self.peek()[1] in _CMP:
            op = self.next()[1]
            rtok = self.peek()
            right = self.sum()
            return Compare(
                _CANONICAL_CMP.get(op, op),
                self.want_num(left, tok),
                self.want_num(right, rtok),
            )
        return left

    def sum(self):
        tok = self.peek()
        node = self.prod()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.next()[1]
            rtok = self.peek()
            node = Arith(op, self.want_num(node, tok), self.want_num(self.prod(), rtok))
        return node

    def prod(self):
        tok = self.peek()
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op = self.next()[1]
            rtok = self.peek()
            node = Arith(op, self.want_num(node, tok), self.want_num(self.unary(), rtok))
        return node

    def unary(self):
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.next()
            tok = self.peek()
            return Neg(self.want_num(self.unary(), tok))
        return self.atom()

    def object_ref(self, roles, what):
        tok = self.next()
        if tok[0] != "name":
            raise self.error("expected an object id", tok)
        obj = self.objects.get(tok[1])
        if obj is None:
            raise self.error(f"unknown object {tok[1]!r}", tok)
        if not isinstance(obj, roles):
            raise self.error(f"{tok[1]!r} is not {what}", tok)
        return obj

    def atom(self):
        tok = self.next()
        kind, value, _ = tok
        if kind == "num":
            return Const(parse_rational(value))
        if kind == "op" and value == "(":
            node = self.or_()
            self.expect(")")
            return node
        if kind != "name":
            raise self.error(f"unexpected {value or 'end of input'!r}", tok)
        if value in ("true", "false"):
            return BoolConst(value == "true")
        if value in ("temp", "heatTrans"):
            self.expect("(")
            obj = self.object_ref(ThermalEntity, "a thermal entity")
            self.expect(")")
            return Attr(value, obj.id)
        if value == "qdot":
            self.expect("(")
            obj = self.object_ref((ThermalInteraction, HeatGenerator), "an interaction or heater")
            self.expect(")")
            return Attr(value, obj.id)
        if value == "abs":
            self.expect("(")
            arg_tok = self.peek()
            node = self.want_num(self.sum(), arg_tok)
            self.expect(")")
            return Abs(node)
        if value == "phaseIs":
            self.expect("(")
            obj = self.object_ref(ThermalEntity, "a thermal entity")
            if not obj.is_water:
                raise self.error(f"{obj.id!r} has no phase", tok)
            self.expect(",")
            ptok = self.next()
            try:
                phase = Phase(ptok[1])
            except ValueError:
                raise self.error(f"unknown phase {ptok[1]!r}", ptok) from None
            self.expect(")")
            return PhaseIs(obj.id, phase)
        if value == "statusIs":
            self.expect("(")
            obj = self.object_ref(HeatGenerator, "a heater")
            if obj.smart is None:
                raise self.error(f"{obj.id!r} is not a smart heater", tok)
            self.expect(",")
            stok = self.next()
            try:
                status = Status(stok[1])
            except ValueError:
                raise self.error(f"unknown status {stok[1]!r}", stok) from None
            self.expect(")")
            return StatusIs(obj.id, status)
        raise self.error(f"unknown function or keyword {value!r}", tok)


def _object_index(scope) -> dict:
    if isinstance(scope, Configuration):
        return {o.id: o for o in scope}
    objects = getattr(scope, "objects", scope)
    return {o.id: o for o in objects}


def parse_predicate(text: str, scope, line=None, col_offset=0) -> Predicate:
    """Parse ``text`` and resolve every reference against ``scope``.

    ``scope`` is a SceneDef, a Configuration or an iterable of objects.
    """
    parser = _Parser(text, _object_index(scope), line=line, col_offset=col_offset)
    return Predicate(parser.parse(), text.strip())
