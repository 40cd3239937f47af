"""LTL formulas over named propositions and their evaluation on lasso paths.

Surface syntax follows Maude's LTL module, including its precedences
(tightest first): ``~ [] <>``, then ``/\\``, ``\\/``, ``U``, and finally
right-associative ``->``.  Word aliases ``not and or always eventually
until`` and ``!`` are accepted as well.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import SceneError


@dataclass(frozen=True)
class TrueF:
    def __str__(self):
        return "True"


@dataclass(frozen=True)
class FalseF:
    def __str__(self):
        return "False"


@dataclass(frozen=True)
class Prop:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class NotF:
    arg: object

    def __str__(self):
        return f"~ {_wrap(self.arg)}"


@dataclass(frozen=True)
class AndF:
    left: object
    right: object

    def __str__(self):
        return f"({self.left} /\\ {self.right})"


@dataclass(frozen=True)
class OrF:
    left: object
    right: object

    def __str__(self):
        return f"({self.left} \\/ {self.right})"


@dataclass(frozen=True)
class Implies:
    left: object
    right: object

    def __str__(self):
        return f"({self.left} -> {self.right})"


@dataclass(frozen=True)
class Always:
    arg: object

    def __str__(self):
        return f"[] {_wrap(self.arg)}"


@dataclass(frozen=True)
class Eventually:
    arg: object

    def __str__(self):
        return f"<> {_wrap(self.arg)}"


@dataclass(frozen=True)
class Until:
    left: object
    right: object

    def __str__(self):
        return f"({self.left} U {self.right})"


def _wrap(f):
    s = str(f)
    return s if isinstance(f, (Prop, TrueF, FalseF)) or s.startswith("(") else f"({s})"


_TOKEN = re.compile(
    r"\s*(?:(?P<op>\[\]|<>|/\\|\\/|->|[~!()])"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*(?:-[A-Za-z0-9_]+)*))"
)

_ALIASES = {
    "!": "~",
    "not": "~",
    "always": "[]",
    "eventually": "<>",
    "and": "/\\",
    "or": "\\/",
    "until": "U",
    "true": "True",
    "false": "False",
}


def _tokenize(text):
    pos, out = 0, []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise SceneError(f"unexpected character {text[pos]!r}", column=pos + 1)
        value = m.group(m.lastgroup)
        out.append((_ALIASES.get(value, value), m.start(m.lastgroup) + 1))
        pos = m.end()
    out.append(("", len(text) + 1))
    return out


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message):
        return SceneError(message, column=self.tokens[self.i][1])

    def parse(self):
        f = self.implies()
        if self.peek():
            raise self.error(f"unexpected {self.peek()!r}")
        return f

    def implies(self):
        left = self.until()
        if self.peek() == "->":
            self.next()
            return Implies(left, self.implies())
        return left

    def until(self):
        left = self.disj()
        while self.peek() == "U":
            self.next()
            left = Until(left, self.disj())
        return left

    def disj(self):
        left = self.conj()
        while self.peek() == "\\/":
            self.next()
            left = OrF(left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.peek() == "/\\":
            self.next()
            left = AndF(left, self.unary())
        return left

    def unary(self):
        tok = self.peek()
        if tok == "~":
            self.next()
            return NotF(self.unary())
        if tok == "[]":
            self.next()
            return Always(self.unary())
        if tok == "<>":
            self.next()
            return Eventually(self.unary())
        if tok == "(":
            self.next()
            f = self.implies()
            if self.peek() != ")":
                raise self.error("expected ')'")
            self.next()
            return f
        if tok == "True":
            self.next()
            return TrueF()
        if tok == "False":
            self.next()
            return FalseF()
        if tok and tok not in ("U", "->", "/\\", "\\/", ")"):
            self.next()
            return Prop(tok)
        raise self.error(f"unexpected {tok or 'end of input'!r}")


def parse_formula(text: str):
    return _Parser(text).parse()


def propositions(formula) -> set:
    if isinstance(formula, Prop):
        return {formula.name}
    names = set()
    for child in vars(formula).values():
        names |= propositions(child)
    return names


def check_bound(formula, props) -> None:
    missing = sorted(propositions(formula) - set(props))
    if missing:
        raise SceneError("unbound proposition(s): " + ", ".join(missing))


def evaluate_lasso(formula, labels: list) -> list:
    """Truth value of ``formula`` at every position of a lasso path.

    ``labels[i]`` maps proposition names to their value at position ``i``;
    the last position carries a self-loop, so every path is infinite.
    """
    n = len(labels)
    if n == 0:
        raise ValueError("a path needs at least one state")

    def ev(f):
        if isinstance(f, TrueF):
            return [True] * n
        if isinstance(f, FalseF):
            return [False] * n
        if isinstance(f, Prop):
            return [bool(lab[f.name]) for lab in labels]
        if isinstance(f, NotF):
            return [not v for v in ev(f.arg)]
        if isinstance(f, AndF):
            return [a and b for a, b in zip(ev(f.left), ev(f.right))]
        if isinstance(f, OrF):
            return [a or b for a, b in zip(ev(f.left), ev(f.right))]
        if isinstance(f, Implies):
            return [(not a) or b for a, b in zip(ev(f.left), ev(f.right))]
        if isinstance(f, (Always, Eventually)):
            sub = ev(f.arg)
            out = [False] * n
            acc = sub[-1]
            for i in range(n - 1, -1, -1):
                if isinstance(f, Always):
                    acc = sub[i] and acc
                else:
                    acc = sub[i] or acc
                out[i] = acc
            return out
        if isinstance(f, Until):
            left, right = ev(f.left), ev(f.right)
            out = [False] * n
            # least fixpoint on the self-loop: only the right operand can discharge it
            acc = right[-1]
            for i in range(n - 1, -1, -1):
                acc = right[i] or (left[i] and acc)
                out[i] = acc
            return out
        raise TypeError(f"not a formula: {f!r}")

    return ev(formula)
