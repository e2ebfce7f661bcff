"""Formula syntax: AST, parser, printer, and desugaring.

The concrete grammar, in decreasing binding strength:

    unary  :  ~f   [a]f   <a>f   [{(f,a,f),...}]f   <{...}>f   [*]f   <*>f
    &      (right associative)
    |      (right associative)
    ->     (right associative)
    <->    (right associative)

Atoms are identifiers over [A-Za-z0-9_]; `true` and `false` are reserved.
Agent names inside modalities use the same identifier syntax.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError


class Formula:
    """Base class; all nodes are frozen dataclasses and hash/compare structurally."""

    __slots__ = ()


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Box(Formula):
    agent: str
    body: Formula


@dataclass(frozen=True)
class Diamond(Formula):
    agent: str
    body: Formula


@dataclass(frozen=True)
class Clause:
    """One arrow clause (source condition, agent, target condition)."""

    pre: Formula
    agent: str
    post: Formula


@dataclass(frozen=True)
class Update:
    """A nonempty list of clauses. An arrow survives if some clause admits it."""

    clauses: tuple[Clause, ...]

    def __post_init__(self):
        if not self.clauses:
            raise ValueError("an update needs at least one clause")


@dataclass(frozen=True)
class UpdateBox(Formula):
    update: Update
    body: Formula


@dataclass(frozen=True)
class UpdateDiamond(Formula):
    update: Update
    body: Formula


@dataclass(frozen=True)
class ArbBox(Formula):
    """Body holds after every update built from quantifier-free clauses."""

    body: Formula


@dataclass(frozen=True)
class ArbDiamond(Formula):
    """Body holds after some update built from quantifier-free clauses."""

    body: Formula


TOP = Top()
BOT = Bot()


def conj(parts) -> Formula:
    """Right-fold a sequence into a conjunction; empty sequence gives true."""
    parts = list(parts)
    if not parts:
        return TOP
    out = parts[-1]
    for f in reversed(parts[:-1]):
        out = And(f, out)
    return out


def disj(parts) -> Formula:
    """Right-fold a sequence into a disjunction; empty sequence gives false."""
    parts = list(parts)
    if not parts:
        return BOT
    out = parts[-1]
    for f in reversed(parts[:-1]):
        out = Or(f, out)
    return out


def flatten_conj(f: Formula) -> tuple[Formula, ...]:
    """Peel right-nested And nodes; inverse of conj on its output."""
    out = []
    while isinstance(f, And):
        out.append(f.left)
        f = f.right
    out.append(f)
    return tuple(out)


# ---------------------------------------------------------------- tokenizer

_TOKEN_RE = re.compile(
    r"""
    (?P<WS>\s+)
  | (?P<IFF><->)
  | (?P<ARBBOX>\[\*\])
  | (?P<ARBDIA><\*>)
  | (?P<IMP>->)
  | (?P<IDENT>[A-Za-z0-9_]+)
  | (?P<LBRACK>\[) | (?P<RBRACK>\])
  | (?P<LANGLE><)  | (?P<RANGLE>>)
  | (?P<LPAREN>\() | (?P<RPAREN>\))
  | (?P<LBRACE>\{) | (?P<RBRACE>\})
  | (?P<COMMA>,) | (?P<AMP>&) | (?P<PIPE>\|) | (?P<TILDE>~)
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "WS":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("EOF", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def next(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, what: str) -> str:
        k, value, pos = self.next()
        if k != kind:
            raise ParseError(f"expected {what}, found {value or 'end of input'!r}", pos)
        return value

    def done(self, what: str):
        k, value, pos = self.tokens[self.i]
        if k != "EOF":
            raise ParseError(f"trailing input after {what}: {value!r}", pos)

    # precedence ladder, loosest first

    def formula(self) -> Formula:
        left = self.imp()
        if self.peek() == "IFF":
            self.next()
            return Iff(left, self.formula())
        return left

    def imp(self) -> Formula:
        left = self.or_()
        if self.peek() == "IMP":
            self.next()
            return Implies(left, self.imp())
        return left

    def or_(self) -> Formula:
        left = self.and_()
        if self.peek() == "PIPE":
            self.next()
            return Or(left, self.or_())
        return left

    def and_(self) -> Formula:
        left = self.unary()
        if self.peek() == "AMP":
            self.next()
            return And(left, self.and_())
        return left

    def unary(self) -> Formula:
        kind, value, pos = self.next()
        if kind == "TILDE":
            return Not(self.unary())
        if kind == "ARBBOX":
            return ArbBox(self.unary())
        if kind == "ARBDIA":
            return ArbDiamond(self.unary())
        if kind == "LBRACK":
            if self.peek() == "LBRACE":
                upd = self.update()
                self.expect("RBRACK", "']'")
                return UpdateBox(upd, self.unary())
            agent = self.expect("IDENT", "an agent name")
            self.expect("RBRACK", "']'")
            return Box(agent, self.unary())
        if kind == "LANGLE":
            if self.peek() == "LBRACE":
                upd = self.update()
                self.expect("RANGLE", "'>'")
                return UpdateDiamond(upd, self.unary())
            agent = self.expect("IDENT", "an agent name")
            self.expect("RANGLE", "'>'")
            return Diamond(agent, self.unary())
        if kind == "LPAREN":
            f = self.formula()
            self.expect("RPAREN", "')'")
            return f
        if kind == "IDENT":
            if value == "true":
                return TOP
            if value == "false":
                return BOT
            return Atom(value)
        raise ParseError(f"expected a formula, found {value or 'end of input'!r}", pos)

    def update(self) -> Update:
        self.expect("LBRACE", "'{'")
        clauses = [self.clause()]
        while self.peek() == "COMMA":
            self.next()
            clauses.append(self.clause())
        self.expect("RBRACE", "'}'")
        return Update(tuple(clauses))

    def clause(self) -> Clause:
        self.expect("LPAREN", "'('")
        pre = self.formula()
        self.expect("COMMA", "','")
        agent = self.expect("IDENT", "an agent name")
        self.expect("COMMA", "','")
        post = self.formula()
        self.expect("RPAREN", "')'")
        return Clause(pre, agent, post)


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    p.done("formula")
    return f


def parse_update(text: str) -> Update:
    """Parse a bare update literal, e.g. "{(p,a,true),(true,b,~q)}"."""
    p = _Parser(text)
    u = p.update()
    p.done("update")
    return u


# ------------------------------------------------------------------ printer

_PREC_IFF, _PREC_IMP, _PREC_OR, _PREC_AND, _PREC_UNARY = 1, 2, 3, 4, 5


def print_formula(f: Formula) -> str:
    """Canonical text: minimal parentheses, single spaces around binary operators.

    parse_formula(print_formula(f)) == f for every formula.
    """
    return _print(f, 0)


def _print(f: Formula, ctx: int) -> str:
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bot):
        return "false"
    if isinstance(f, Not):
        return "~" + _print(f.body, _PREC_UNARY)
    if isinstance(f, Box):
        return f"[{f.agent}]" + _print(f.body, _PREC_UNARY)
    if isinstance(f, Diamond):
        return f"<{f.agent}>" + _print(f.body, _PREC_UNARY)
    if isinstance(f, UpdateBox):
        return f"[{print_update(f.update)}]" + _print(f.body, _PREC_UNARY)
    if isinstance(f, UpdateDiamond):
        return f"<{print_update(f.update)}>" + _print(f.body, _PREC_UNARY)
    if isinstance(f, ArbBox):
        return "[*]" + _print(f.body, _PREC_UNARY)
    if isinstance(f, ArbDiamond):
        return "<*>" + _print(f.body, _PREC_UNARY)
    if isinstance(f, And):
        return _print_binary(f.left, "&", f.right, _PREC_AND, ctx)
    if isinstance(f, Or):
        return _print_binary(f.left, "|", f.right, _PREC_OR, ctx)
    if isinstance(f, Implies):
        return _print_binary(f.left, "->", f.right, _PREC_IMP, ctx)
    if isinstance(f, Iff):
        return _print_binary(f.left, "<->", f.right, _PREC_IFF, ctx)
    raise TypeError(f"not a formula: {f!r}")


def _print_binary(left: Formula, op: str, right: Formula, prec: int, ctx: int) -> str:
    # right associative: the left child needs strictly tighter binding
    text = f"{_print(left, prec + 1)} {op} {_print(right, prec)}"
    if prec < ctx:
        return f"({text})"
    return text


def print_update(u: Update) -> str:
    inner = ",".join(
        f"({print_formula(c.pre)},{c.agent},{print_formula(c.post)})" for c in u.clauses
    )
    return "{" + inner + "}"


# ----------------------------------------------------------------- analysis

def desugar(f: Formula) -> Formula:
    """Rewrite to the core connectives: Atom, Top, Not, And, Box, UpdateBox, ArbBox.

    <a>f becomes ~[a]~f, <U>f becomes ~[U]~f, <*>f becomes ~[*]~f, and the
    remaining boolean connectives unfold into ~ and &. Update clauses are
    desugared as well. The evaluator only ever sees core nodes.
    """
    if isinstance(f, (Atom, Top)):
        return f
    if isinstance(f, Bot):
        return Not(TOP)
    if isinstance(f, Not):
        return Not(desugar(f.body))
    if isinstance(f, And):
        return And(desugar(f.left), desugar(f.right))
    if isinstance(f, Or):
        return Not(And(Not(desugar(f.left)), Not(desugar(f.right))))
    if isinstance(f, Implies):
        return Not(And(desugar(f.left), Not(desugar(f.right))))
    if isinstance(f, Iff):
        left, right = desugar(f.left), desugar(f.right)
        return And(Not(And(left, Not(right))), Not(And(right, Not(left))))
    if isinstance(f, Box):
        return Box(f.agent, desugar(f.body))
    if isinstance(f, Diamond):
        return Not(Box(f.agent, Not(desugar(f.body))))
    if isinstance(f, UpdateBox):
        return UpdateBox(_desugar_update(f.update), desugar(f.body))
    if isinstance(f, UpdateDiamond):
        return Not(UpdateBox(_desugar_update(f.update), Not(desugar(f.body))))
    if isinstance(f, ArbBox):
        return ArbBox(desugar(f.body))
    if isinstance(f, ArbDiamond):
        return Not(ArbBox(Not(desugar(f.body))))
    raise TypeError(f"not a formula: {f!r}")


def _desugar_update(u: Update) -> Update:
    return Update(tuple(Clause(desugar(c.pre), c.agent, desugar(c.post)) for c in u.clauses))


def signature(f: Formula) -> tuple[frozenset[str], frozenset[str]]:
    """The (atoms, agents) mentioned anywhere in the formula, clauses included."""
    atoms: set[str] = set()
    agents: set[str] = set()
    _walk_signature(f, atoms, agents)
    return frozenset(atoms), frozenset(agents)


def _walk_signature(f: Formula, atoms: set, agents: set):
    if isinstance(f, Atom):
        atoms.add(f.name)
    elif isinstance(f, (Top, Bot)):
        pass
    elif isinstance(f, Not):
        _walk_signature(f.body, atoms, agents)
    elif isinstance(f, (And, Or, Implies, Iff)):
        _walk_signature(f.left, atoms, agents)
        _walk_signature(f.right, atoms, agents)
    elif isinstance(f, (Box, Diamond)):
        agents.add(f.agent)
        _walk_signature(f.body, atoms, agents)
    elif isinstance(f, (UpdateBox, UpdateDiamond)):
        for c in f.update.clauses:
            agents.add(c.agent)
            _walk_signature(c.pre, atoms, agents)
            _walk_signature(c.post, atoms, agents)
        _walk_signature(f.body, atoms, agents)
    elif isinstance(f, (ArbBox, ArbDiamond)):
        _walk_signature(f.body, atoms, agents)
    else:
        raise TypeError(f"not a formula: {f!r}")


def is_quantifier_free(f: Formula) -> bool:
    """True when no [*]/<*> occurs anywhere, update clauses included.

    The arbitrary-update modalities quantify over exactly the updates whose
    clause formulas satisfy this predicate.
    """
    if isinstance(f, (Atom, Top, Bot)):
        return True
    if isinstance(f, Not):
        return is_quantifier_free(f.body)
    if isinstance(f, (And, Or, Implies, Iff)):
        return is_quantifier_free(f.left) and is_quantifier_free(f.right)
    if isinstance(f, (Box, Diamond)):
        return is_quantifier_free(f.body)
    if isinstance(f, (UpdateBox, UpdateDiamond)):
        return all(
            is_quantifier_free(c.pre) and is_quantifier_free(c.post)
            for c in f.update.clauses
        ) and is_quantifier_free(f.body)
    if isinstance(f, (ArbBox, ArbDiamond)):
        return False
    raise TypeError(f"not a formula: {f!r}")
