"""Expression language for the ``expr`` subcommand.

Grammar (LL(1), lowest precedence first)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/' | '∘' | '·') unary)*
    unary   := '-' unary | power
    power   := atom ('^' ['-'] INT)?
    atom    := INT | NAME | '(' expr ')' | ctor
    ctor    := ('Uy' | 'Ux' | 'Ua' | 'chi') '{' args '}'
             | 'Q' '{' INT '}' '(' expr ')'
             | 'phi' '(' expr ',' ['-'] INT ')'

``@`` and ``.`` are ASCII spellings of ``∘`` and ``·``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

VARIABLE = re.compile(r"(?:[yxa](?:[1-9][0-9]*)?|q|t|s|eps|X)$")
CONSTRUCTORS = ("Uy", "Ux", "Ua", "Q", "chi", "phi")
SPACES = ("Gr", "X", "Xdual")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


# -- AST --------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ∘ ·
    lhs: object
    rhs: object


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


@dataclass(frozen=True)
class Ctor:
    kind: str
    params: tuple
    arg: object = None


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "∘": 2, "·": 2}


def to_text(node, parent: int = 0) -> str:
    """Canonical text; parses back to an equal tree."""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        out = "-" + to_text(node.arg, 3)
        return f"({out})" if parent >= 3 else out
    if isinstance(node, Pow):
        return f"{to_text(node.base, 4)}^{node.exp}"
    if isinstance(node, BinOp):
        p = _PREC[node.op]
        # left-associative: the right operand needs parentheses at equal precedence
        out = f"{to_text(node.lhs, p)} {node.op} {to_text(node.rhs, p + 1)}"
        return f"({out})" if parent > p else out
    if isinstance(node, Ctor):
        if node.kind == "Q":
            return f"Q{{{node.params[0]}}}({to_text(node.arg)})"
        if node.kind == "phi":
            return f"phi({to_text(node.arg)}, {node.params[0]})"
        return f"{node.kind}{{{','.join(str(p) for p in node.params)}}}"
    raise TypeError(f"not an expression node: {node!r}")


# -- tokens -------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<int>[0-9]+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[-+*/^(){},∘·@.]))")
_ALIAS = {"@": "∘", ".": "·"}


@dataclass(frozen=True)
class Token:
    kind: str  # int, name, sym, end
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    line, line_start = 1, 0
    while True:
        while pos < len(text) and text[pos].isspace():
            if text[pos] == "\n":
                line += 1
                line_start = pos + 1
            pos += 1
        if pos >= len(text):
            out.append(Token("end", "", line, pos - line_start + 1))
            return out
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        val = m.group(kind)
        if kind == "sym":
            val = _ALIAS.get(val, val)
        out.append(Token(kind, val, line, col))
        pos = m.end()


# -- parser -----------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.col)

    def accept(self, text: str) -> bool:
        if self.tok.kind == "sym" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.tok
        if not self.accept(text):
            self.error(f"expected {text!r}, found {tok.text or 'end of input'!r}")
        return tok

    def integer(self, signed: bool = False) -> int:
        neg = signed and self.accept("-")
        tok = self.tok
        if tok.kind != "int":
            self.error(f"expected an integer, found {tok.text or 'end of input'!r}")
        self.i += 1
        return -int(tok.text) if neg else int(tok.text)

    # grammar
    def parse(self):
        node = self.expr()
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.text!r}")
        return node

    def expr(self):
        node = self.term()
        while self.tok.kind == "sym" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.tok.kind == "sym" and self.tok.text in ("*", "/", "∘", "·"):
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.accept("-"):
            return Neg(self.unary())
        return self.power()

    def power(self):
        node = self.atom()
        if self.accept("^"):
            node = Pow(node, self.integer(signed=True))
        return node

    def atom(self):
        tok = self.tok
        if tok.kind == "int":
            self.i += 1
            return Num(int(tok.text))
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind == "name":
            self.i += 1
            if tok.text in CONSTRUCTORS:
                return self.ctor(tok)
            if not VARIABLE.match(tok.text):
                self.error(f"unknown identifier {tok.text!r}", tok)
            return Var(tok.text)
        self.error(f"unexpected {tok.text or 'end of input'!r}")

    def _brace_args(self) -> tuple[list, Token]:
        start = self.expect("{")
        args = []
        while True:
            tok = self.tok
            if tok.kind == "name":
                self.i += 1
                args.append(tok.text)
            else:
                args.append(self.integer(signed=True))
            if not self.accept(","):
                break
        self.expect("}")
        return args, start

    def ctor(self, head: Token):
        kind = head.text
        if kind == "phi":
            self.expect("(")
            arg = self.expr()
            self.expect(",")
            power = self.integer(signed=True)
            self.expect(")")
            return Ctor("phi", (power,), arg)
        args, start = self._brace_args()
        if kind == "Q":
            if len(args) != 1 or not isinstance(args[0], int):
                self.error("arity error: Q takes {n}", start)
            if args[0] < 1:
                self.error("arity error: Q needs n >= 1", start)
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return Ctor("Q", (args[0],), arg)
        if kind == "chi":
            return Ctor("chi", self._chi_params(args, start))
        if len(args) != 2 or not all(isinstance(a, int) for a in args):
            self.error(f"arity error: {kind} takes {{k,n}}", start)
        k, n = args
        if n < 1:
            self.error("arity error: n must be at least 1", start)
        if kind == "Ua":
            if k not in (1, -1):
                self.error("arity error: Ua takes a sign 1 or -1", start)
        elif not 0 <= k <= n:
            self.error("arity error: k > n" if k > n else "arity error: k < 0", start)
        return Ctor(kind, (k, n))

    def _chi_params(self, args, start):
        if not args or args[0] not in SPACES:
            self.error("chi needs a space Gr, X or Xdual first", start)
        space, rest = args[0], args[1:]
        want = 2 if space == "Gr" else 3
        if len(rest) != want or not all(isinstance(a, int) for a in rest):
            self.error(f"arity error: chi{{{space},...}} takes {want} integers", start)
        k, n = rest[0], rest[1]
        if not 0 <= k <= n:
            self.error("arity error: k > n" if k > n else "arity error: k < 0", start)
        if space != "Gr" and not 1 <= rest[2] <= n:
            self.error("arity error: need 1 <= m <= n", start)
        return (space, *rest)


def parse_expr(text: str):
    """Parse ``text``; raises :class:`ParseError` with line and column."""
    return _Parser(text).parse()
