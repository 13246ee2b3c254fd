"""Complex-valued expressions in the single variable ``z``.

Grammar (``^`` is right-associative and binds tighter than unary minus, so
``-z^2`` is ``-(z^2)`` and ``z^-1`` is ``z^(-1)``)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := ("+" | "-") unary | power
    power   := atom ("^" unary)?
    atom    := NUMBER | "z" | "pi" | "e" | FUNC "(" expr ")" | "(" expr ")"
    FUNC    := "exp" | "sin" | "cos" | "sqrt" | "log" | "abs"
    NUMBER  := digits ["." digits] [("e"|"E") ["+"|"-"] digits]

There is no implicit multiplication: ``2z`` is a parse error.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from typing import List, Union

import numpy as np

from .core import EvalError, ZtinvError

FUNCTIONS = ("exp", "sin", "cos", "sqrt", "log", "abs")
CONSTANTS = {"pi": math.pi, "e": math.e}
VARIABLE = "z"


class LexError(ZtinvError, ValueError):
    def __init__(self, position: int, char: str = ""):
        super().__init__(f"unexpected character {char!r} at offset {position}")
        self.position = position


class ParseError(ZtinvError, ValueError):
    def __init__(self, position: int, expectation: str):
        super().__init__(f"at offset {position}: expected {expectation}")
        self.position = position
        self.expectation = expectation


class TokenKind(enum.Enum):
    NUMBER = "Number"
    IDENTIFIER = "Identifier"
    PLUS = "+"
    MINUS = "-"
    STAR = "*"
    SLASH = "/"
    CARET = "^"
    LPAREN = "("
    RPAREN = ")"
    COMMA = ","
    END = "end of input"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    lexeme: str
    position: int


_NUMBER = re.compile(r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_PUNCT = {
    "+": TokenKind.PLUS, "-": TokenKind.MINUS, "−": TokenKind.MINUS,
    "*": TokenKind.STAR, "/": TokenKind.SLASH, "^": TokenKind.CARET,
    "(": TokenKind.LPAREN, ")": TokenKind.RPAREN, ",": TokenKind.COMMA,
}


def tokenize(source: str) -> List[Token]:
    """Split ``source`` into tokens; positions are UTF-8 byte offsets."""
    tokens = []
    i = 0
    while i < len(source):
        ch = source[i]
        offset = len(source[:i].encode("utf-8"))
        if ch.isspace():
            i += 1
            continue
        if ch in _PUNCT:
            tokens.append(Token(_PUNCT[ch], ch, offset))
            i += 1
            continue
        m = _NUMBER.match(source, i) or _IDENT.match(source, i)
        if m is None or not m.group():
            raise LexError(offset, ch)
        kind = TokenKind.IDENTIFIER if _IDENT.fullmatch(m.group()) else TokenKind.NUMBER
        tokens.append(Token(kind, m.group(), offset))
        i = m.end()
    return tokens


# AST nodes


@dataclass(frozen=True)
class Constant:
    value: complex


@dataclass(frozen=True)
class VariableZ:
    pass


@dataclass(frozen=True)
class Unary:
    op: str
    child: "ExprAst"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "ExprAst"
    right: "ExprAst"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "ExprAst"


ExprAst = Union[Constant, VariableZ, Unary, Binary, Call]


class _Parser:
    def __init__(self, source: str):
        self.tokens = tokenize(source)
        end = len(source.encode("utf-8"))
        self.tokens.append(Token(TokenKind.END, "", end))
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: TokenKind, what: str) -> Token:
        if self.tok.kind is not kind:
            raise ParseError(self.tok.position, what)
        return self.advance()

    def parse(self) -> ExprAst:
        node = self.expr()
        if self.tok.kind is not TokenKind.END:
            raise ParseError(self.tok.position, "operator or end of input")
        return node

    def expr(self):
        node = self.term()
        while self.tok.kind in (TokenKind.PLUS, TokenKind.MINUS):
            op = self.advance().kind.value
            node = Binary(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.tok.kind in (TokenKind.STAR, TokenKind.SLASH):
            op = self.advance().kind.value
            node = Binary(op, node, self.unary())
        return node

    def unary(self):
        if self.tok.kind in (TokenKind.PLUS, TokenKind.MINUS):
            op = self.advance().kind.value
            return Unary(op, self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok.kind is TokenKind.CARET:
            self.advance()
            return Binary("^", base, self.unary())
        return base

    def atom(self):
        tok = self.tok
        if tok.kind is TokenKind.NUMBER:
            self.advance()
            return Constant(complex(float(tok.lexeme)))
        if tok.kind is TokenKind.LPAREN:
            self.advance()
            node = self.expr()
            self.expect(TokenKind.RPAREN, "')'")
            return node
        if tok.kind is TokenKind.IDENTIFIER:
            self.advance()
            name = tok.lexeme
            if name in FUNCTIONS:
                self.expect(TokenKind.LPAREN, f"'(' after {name}")
                if self.tok.kind is TokenKind.RPAREN:
                    raise ParseError(self.tok.position, f"an argument to {name}()")
                arg = self.expr()
                self.expect(TokenKind.RPAREN, f"')' closing {name}(")
                return Call(name, arg)
            if name == VARIABLE:
                return VariableZ()
            if name in CONSTANTS:
                return Constant(complex(CONSTANTS[name]))
            raise ParseError(tok.position, f"z, pi, e or one of {', '.join(FUNCTIONS)} "
                                           f"(got unknown name {name!r})")
        raise ParseError(tok.position, "a number, name or '('")


def parse(source: str) -> ExprAst:
    return _Parser(source).parse()


def to_source(node: ExprAst) -> str:
    """Fully parenthesized printing that :func:`parse` maps back to ``node``."""
    if isinstance(node, Constant):
        if node.value.imag != 0 or node.value.real < 0:
            raise ValueError(f"constant {node.value} has no literal form")
        return repr(node.value.real)
    if isinstance(node, VariableZ):
        return VARIABLE
    if isinstance(node, Unary):
        return f"({node.op}{to_source(node.child)})"
    if isinstance(node, Binary):
        return f"({to_source(node.left)}{node.op}{to_source(node.right)})"
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    raise TypeError(f"not an expression node: {node!r}")


def contains_z(node: ExprAst) -> bool:
    if isinstance(node, VariableZ):
        return True
    if isinstance(node, Constant):
        return False
    if isinstance(node, Unary):
        return contains_z(node.child)
    if isinstance(node, Binary):
        return contains_z(node.left) or contains_z(node.right)
    return contains_z(node.arg)


def _integer_exponent(value) -> Union[int, None]:
    value = complex(value)
    if value.imag == 0 and value.real.is_integer() and abs(value.real) < 2**31:
        return int(value.real)
    return None


def _checked(values, what: str):
    if not np.all(np.isfinite(values)):
        raise EvalError(f"non-finite value in {what}")
    return values


_UFUNCS = {"exp": np.exp, "sin": np.sin, "cos": np.cos, "sqrt": np.sqrt, "abs": np.abs}


def _eval(node, z):
    if isinstance(node, Constant):
        return np.full(z.shape, node.value, dtype=complex)
    if isinstance(node, VariableZ):
        return z
    if isinstance(node, Unary):
        child = _eval(node.child, z)
        return -child if node.op == "-" else child
    if isinstance(node, Call):
        arg = _eval(node.arg, z)
        if node.func == "log":
            if np.any(arg == 0):
                raise EvalError("log(0)")
            return np.log(arg)
        return _checked(_UFUNCS[node.func](arg).astype(complex), f"{node.func}()")
    left = _eval(node.left, z)
    if node.op == "^" and not contains_z(node.right):
        k = _integer_exponent(_eval(node.right, np.zeros(1, dtype=complex))[0])
        if k is not None:
            if k < 0 and np.any(left == 0):
                raise EvalError("division by zero (negative power of 0)")
            return _checked(left ** k if k >= 0 else 1 / left ** -k, "integer power")
    right = _eval(node.right, z)
    if node.op == "+":
        out = left + right
    elif node.op == "-":
        out = left - right
    elif node.op == "*":
        out = left * right
    elif node.op == "/":
        if np.any(right == 0):
            raise EvalError("division by zero")
        out = left / right
    else:
        if np.any(left == 0):
            raise EvalError("log(0) in non-integer power of 0")
        out = np.exp(right * np.log(left))
    return _checked(out, f"'{node.op}'")


def evaluate(node: ExprAst, z):
    """Evaluate ``node`` at a complex scalar or at every entry of an array.

    Raises :class:`EvalError` on division by zero, log(0) or any non-finite
    intermediate value.
    """
    scalar = np.ndim(z) == 0
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    with np.errstate(all="ignore"):
        out = _eval(node, zz)
    if scalar:
        return complex(out[0])
    return out


def has_fractional_power_of_z(node: ExprAst) -> bool:
    """True when ``z`` is raised to a constant non-integer power or sits under sqrt.

    Such a function is multi-valued in ``z`` and therefore is not the
    Z-transform of any sequence.
    """
    if isinstance(node, (Constant, VariableZ)):
        return False
    if isinstance(node, Unary):
        return has_fractional_power_of_z(node.child)
    if isinstance(node, Call):
        if node.func == "sqrt" and contains_z(node.arg):
            return True
        return has_fractional_power_of_z(node.arg)
    if node.op == "^" and contains_z(node.left) and not contains_z(node.right):
        try:
            exponent = evaluate(node.right, 0j)
        except EvalError:
            exponent = None
        if exponent is not None and _integer_exponent(exponent) is None:
            return True
    return has_fractional_power_of_z(node.left) or has_fractional_power_of_z(node.right)


class Expression:
    """A parsed X(z), callable on scalars or numpy arrays of points."""

    vectorized = True

    def __init__(self, source: str):
        self.source = source
        self.ast = parse(source)

    def __call__(self, z):
        return evaluate(self.ast, z)

    @property
    def has_fractional_power(self) -> bool:
        return has_fractional_power_of_z(self.ast)

    def __repr__(self):
        return f"Expression({self.source!r})"

