"""Line-oriented description language for interferometer runs (``.mzi`` files).

Example::

    # delayed-choice setting that sends the snarl to the right arm
    bs1
    tuner theta=pi
    phase phi=0
    preselect delayed
    postselect delayed
    measure zR method=analytic
    measure xL method=meter g=1e-3

Angles are radians; ``pi`` is the only named constant and numeric literals
may be joined to it directly (``2pi``).  ``#`` starts a comment.  Several
``tuner`` or ``phase`` lines accumulate, since the elements compose
additively.  Only a ``delayed`` preselection sees the tuner and phase
settings.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from .errors import (
    CircuitRuntimeError,
    CircuitSyntaxError,
    DuplicatePostselect,
    DuplicatePreselect,
    MissingPostselect,
    MissingPreselect,
    UnknownObservable,
)
from .operators import OBSERVABLES
from .scenarios import ExperimentConfig, MeasureResult, measure_one
from .weak import DEFAULT_G, Method

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[=+\-*/()])
    """,
    re.VERBOSE,
)

SELECT_VARIANTS = ("delayed", "original")
METHODS = tuple(m.value for m in Method)
_ELEMENT_PARAM = {"tuner": "theta", "phase": "phi"}
_STATEMENTS = "statement (bs1, tuner, phase, preselect, postselect, measure)"


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    column: int  # 1-based


def tokenize(text: str, line: int = 1) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise CircuitSyntaxError(line, pos + 1, "token", text[pos])
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, m.group(), pos + 1))
        pos = m.end()
    return tokens


class _Cursor:
    def __init__(self, tokens: list[Token], line: int, end_column: int):
        self.tokens = tokens
        self.i = 0
        self.line = line
        self.end_column = end_column

    def peek(self) -> Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self) -> Token | None:
        tok = self.peek()
        self.i += 1
        return tok

    def fail(self, expected: str):
        tok = self.peek()
        if tok is None:
            raise CircuitSyntaxError(self.line, self.end_column, expected, "end of line")
        raise CircuitSyntaxError(self.line, tok.column, expected, tok.text)

    def expect(self, kind: str, text: str | None = None, expected: str | None = None) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != kind or (text is not None and tok.text != text):
            self.fail(expected or (repr(text) if text else kind))
        self.i += 1
        return tok

    def at(self, kind: str, text: str | None = None) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == kind and (text is None or tok.text == text)

    def done(self) -> bool:
        return self.i >= len(self.tokens)


@dataclass(frozen=True)
class Expr:
    """Angle or strength expression, kept with its whitespace-free source."""

    source: str
    value: float

    def __float__(self):
        return self.value


# expr   := term (('+'|'-') term)*
# term   := unary (('*'|'/') unary | implicit)*
# unary  := ('+'|'-') unary | atom
# atom   := NUMBER | 'pi' | '(' expr ')'
# a NUMBER directly followed by 'pi' or '(' multiplies implicitly
def _parse_expr(cur: _Cursor) -> tuple[str, float]:
    src, val = _parse_term(cur)
    while cur.at("op", "+") or cur.at("op", "-"):
        op = cur.next().text
        rsrc, rval = _parse_term(cur)
        src, val = src + op + rsrc, val + rval if op == "+" else val - rval
    return src, val


def _parse_term(cur: _Cursor) -> tuple[str, float]:
    src, val, was_number = _parse_unary(cur)
    while True:
        if cur.at("op", "*") or cur.at("op", "/"):
            op = cur.next().text
            rsrc, rval, was_number = _parse_unary(cur)
            if op == "/" and rval == 0:
                raise CircuitSyntaxError(cur.line, cur.tokens[cur.i - 1].column, "nonzero divisor")
            src, val = src + op + rsrc, val * rval if op == "*" else val / rval
        elif was_number and (cur.at("ident", "pi") or cur.at("op", "(")):
            rsrc, rval, was_number = _parse_unary(cur)
            src, val = src + rsrc, val * rval
        else:
            return src, val


def _parse_unary(cur: _Cursor) -> tuple[str, float, bool]:
    if cur.at("op", "+") or cur.at("op", "-"):
        op = cur.next().text
        src, val, _ = _parse_unary(cur)
        return op + src, val if op == "+" else -val, False
    tok = cur.peek()
    if tok is None:
        cur.fail("number, 'pi' or '('")
    if tok.kind == "number":
        cur.next()
        return tok.text, float(tok.text), True
    if tok.kind == "ident" and tok.text == "pi":
        cur.next()
        return "pi", math.pi, False
    if tok.kind == "op" and tok.text == "(":
        cur.next()
        src, val = _parse_expr(cur)
        cur.expect("op", ")", "')'")
        return "(" + src + ")", val, False
    cur.fail("number, 'pi' or '('")


def _expr(cur: _Cursor) -> Expr:
    start = cur.peek()
    src, val = _parse_expr(cur)
    if not math.isfinite(val):
        raise CircuitSyntaxError(cur.line, start.column, "finite value", src)
    return Expr(src, val)


def parse_angle(text: str) -> float:
    """Evaluate a standalone expression such as ``"3*pi/4"`` or ``"2pi"``."""
    cur = _Cursor(tokenize(text), 1, len(text) + 1)
    e = _expr(cur)
    if not cur.done():
        cur.fail("end of expression")
    return e.value


@dataclass(frozen=True)
class Element:
    name: str
    params: tuple[tuple[str, Expr], ...] = ()
    line: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Preselect:
    variant: str
    line: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Postselect:
    variant: str
    line: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Measure:
    observable: str
    method: str
    g: Expr | None = None
    shots: int | None = None
    seed: int | None = None
    line: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class CircuitProgram:
    statements: tuple

    @property
    def elements(self) -> list[Element]:
        return [s for s in self.statements if isinstance(s, Element)]

    @property
    def preselect(self) -> Preselect:
        return next(s for s in self.statements if isinstance(s, Preselect))

    @property
    def postselect(self) -> Postselect:
        return next(s for s in self.statements if isinstance(s, Postselect))

    @property
    def measures(self) -> list[Measure]:
        return [s for s in self.statements if isinstance(s, Measure)]

    def settings(self) -> tuple[float, float]:
        """Total tuner angle and path phase."""
        theta = phi = 0.0
        for el in self.elements:
            for key, e in el.params:
                if key == "theta":
                    theta += e.value
                elif key == "phi":
                    phi += e.value
        return theta, phi


def _integer(cur: _Cursor, what: str) -> int:
    tok = cur.peek()
    if tok is None or tok.kind != "number" or not tok.text.isdigit():
        cur.fail(f"nonnegative integer for {what}")
    cur.next()
    return int(tok.text)


def _keyword_value(cur: _Cursor, key: str):
    cur.expect("op", "=", "'='")
    if key == "method":
        tok = cur.peek()
        if tok is None or tok.kind != "ident" or tok.text not in METHODS:
            cur.fail("method (" + "|".join(METHODS) + ")")
        cur.next()
        return tok.text
    if key in ("shots", "seed"):
        return _integer(cur, key)
    return _expr(cur)


def _parse_statement(cur: _Cursor):
    head = cur.peek()
    if head is None or head.kind != "ident":
        cur.fail(_STATEMENTS)
    cur.next()
    word, line = head.text, cur.line

    if word == "bs1":
        stmt = Element("bs1", (), line)
    elif word in _ELEMENT_PARAM:
        key = _ELEMENT_PARAM[word]
        cur.expect("ident", key, f"'{key}'")
        cur.expect("op", "=", "'='")
        stmt = Element(word, ((key, _expr(cur)),), line)
    elif word in ("preselect", "postselect"):
        tok = cur.peek()
        if tok is None or tok.kind != "ident" or tok.text not in SELECT_VARIANTS:
            cur.fail("delayed|original")
        cur.next()
        stmt = (Preselect if word == "preselect" else Postselect)(tok.text, line)
    elif word == "measure":
        tok = cur.expect("ident", expected="observable")
        if tok.text not in OBSERVABLES:
            raise UnknownObservable(
                f"column {tok.column}: unknown observable {tok.text!r}; "
                f"expected one of {', '.join(OBSERVABLES)}",
                line,
            )
        opts = {}
        while not cur.done():
            key_tok = cur.expect("ident", expected="option (method, g, shots, seed)")
            key = key_tok.text
            if key not in ("method", "g", "shots", "seed"):
                raise CircuitSyntaxError(line, key_tok.column, "option (method, g, shots, seed)", key)
            if key in opts:
                raise CircuitSyntaxError(line, key_tok.column, f"at most one {key}=", key)
            opts[key] = _keyword_value(cur, key)
        if "method" not in opts:
            raise CircuitSyntaxError(line, cur.end_column, "method=<analytic|meter|sample>", "end of line")
        stmt = Measure(tok.text, opts["method"], opts.get("g"), opts.get("shots"), opts.get("seed"), line)
    else:
        raise CircuitSyntaxError(line, head.column, _STATEMENTS, word)

    if not cur.done():
        cur.fail("end of line")
    return stmt


def parse(source: str) -> CircuitProgram:
    """Parse ``.mzi`` source text (LF or CRLF line endings)."""
    statements = []
    pre = post = None
    for lineno, raw in enumerate(source.splitlines(), start=1):
        text = raw.split("#", 1)[0]
        tokens = tokenize(text, lineno)
        if not tokens:
            continue
        stmt = _parse_statement(_Cursor(tokens, lineno, len(text.rstrip()) + 1))
        if isinstance(stmt, Preselect):
            if pre is not None:
                raise DuplicatePreselect(f"preselect already given on line {pre.line}", lineno)
            pre = stmt
        elif isinstance(stmt, Postselect):
            if post is not None:
                raise DuplicatePostselect(f"postselect already given on line {post.line}", lineno)
            post = stmt
        statements.append(stmt)
    if pre is None:
        raise MissingPreselect("program has no preselect statement")
    if post is None:
        raise MissingPostselect("program has no postselect statement")
    return CircuitProgram(tuple(statements))


def pretty_print(program: CircuitProgram) -> str:
    lines = []
    for s in program.statements:
        if isinstance(s, Element):
            lines.append(" ".join([s.name] + [f"{k}={e.source}" for k, e in s.params]))
        elif isinstance(s, Preselect):
            lines.append(f"preselect {s.variant}")
        elif isinstance(s, Postselect):
            lines.append(f"postselect {s.variant}")
        else:
            parts = [f"measure {s.observable}", f"method={s.method}"]
            if s.g is not None:
                parts.append(f"g={s.g.source}")
            if s.shots is not None:
                parts.append(f"shots={s.shots}")
            if s.seed is not None:
                parts.append(f"seed={s.seed}")
            lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def compile_and_run(program: CircuitProgram) -> list[MeasureResult]:
    """One result per ``measure`` statement, in source order.

    Poles come back as results flagged ``diverged``; any other failure is
    re-raised as :class:`CircuitRuntimeError` naming the measure line.
    """
    theta, phi = program.settings()
    pre, post = program.preselect.variant, program.postselect.variant
    results = []
    for m in program.measures:
        try:
            cfg = ExperimentConfig(
                theta,
                phi,
                g=m.g.value if m.g is not None else DEFAULT_G,
                shots=m.shots or 0,
                seed=m.seed or 0,
                method=m.method,
            )
            res = measure_one(m.observable, cfg, pre, post)
        except (ValueError, ArithmeticError) as exc:
            raise CircuitRuntimeError(m.line, exc) from exc
        results.append(MeasureResult(**{**res.__dict__, "line": m.line}))
    return results


def run_source(source: str) -> list[MeasureResult]:
    return compile_and_run(parse(source))
