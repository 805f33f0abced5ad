"""Text formats for graphs: composition expressions, LCF notation, edge lists.

Expression grammar (``+`` binds loosest, then ``box``, then ``*``; all
left-associative)::

    expr    := boxed ('+' boxed)*
    boxed   := joined ('box' joined)*
    joined  := atom ('*' atom)*
    atom    := NAME ['(' [INT (',' INT)*] ')']
             | 'wedge' '(' expr ',' INT ',' expr ',' INT ')'
             | 'lcf' '(' lcf ')' | lcf
             | '[' [item (',' item)*] ']'          item := INT '-' INT | 'n' '=' INT
             | '(' expr ')'
    lcf     := '[' SINT (',' SINT)* ']' '^' INT

``+`` is disjoint union, ``box`` the cartesian product and ``*`` the join
(not a product).
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from typing import Union

from . import graph as gr
from .graph import Graph, GraphError


class DslError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Family:
    name: str
    args: tuple[int, ...] = ()


@dataclass(frozen=True)
class EdgeList:
    n: int | None
    edges: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class Lcf:
    jumps: tuple[int, ...]
    repeats: int


@dataclass(frozen=True)
class BinOp:
    op: str  # '+', 'box' or '*'
    left: "GraphExpr"
    right: "GraphExpr"


@dataclass(frozen=True)
class Wedge:
    left: "GraphExpr"
    left_base: int
    right: "GraphExpr"
    right_base: int


GraphExpr = Union[Family, EdgeList, Lcf, BinOp, Wedge]

_PRECEDENCE = {"+": 0, "box": 1, "*": 2}


# ---------------------------------------------------------------------------
# tokenizer
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[-+*(),\[\]^=]))")


@dataclass(frozen=True)
class _Tok:
    kind: str  # 'int', 'name', 'sym', 'end'
    text: str
    line: int
    column: int


def _position(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = pos + len(text[pos:]) - len(text[pos:].lstrip())
            if rest >= len(text):
                break
            line, col = _position(text, rest)
            raise DslError(f"unexpected character {text[rest]!r}", line, col)
        kind = m.lastgroup
        line, col = _position(text, m.start(kind))
        toks.append(_Tok(kind, m.group(kind), line, col))
        pos = m.end()
    line, col = _position(text, len(text))
    toks.append(_Tok("end", "", line, col))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, message, tok=None):
        tok = tok or self.tok
        return DslError(message, tok.line, tok.column)

    def advance(self) -> _Tok:
        t = self.tok
        self.i += 1
        return t

    def is_sym(self, s) -> bool:
        return self.tok.kind == "sym" and self.tok.text == s

    def is_word(self, w) -> bool:
        return self.tok.kind == "name" and self.tok.text.lower() == w

    def expect_sym(self, s):
        if not self.is_sym(s):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {s!r}, found {found!r}")
        return self.advance()

    def expect_int(self, signed=False) -> int:
        sign = 1
        if signed and self.tok.kind == "sym" and self.tok.text in "+-":
            sign = -1 if self.advance().text == "-" else 1
        if self.tok.kind != "int":
            found = self.tok.text or "end of input"
            raise self.error(f"expected an integer, found {found!r}")
        return sign * int(self.advance().text)

    # grammar -------------------------------------------------------------

    def parse(self) -> GraphExpr:
        node = self.expr()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")
        return node

    def expr(self) -> GraphExpr:
        node = self.boxed()
        while self.is_sym("+"):
            self.advance()
            node = BinOp("+", node, self.boxed())
        return node

    def boxed(self) -> GraphExpr:
        node = self.joined()
        while self.is_word("box"):
            self.advance()
            node = BinOp("box", node, self.joined())
        return node

    def joined(self) -> GraphExpr:
        node = self.atom()
        while self.is_sym("*"):
            self.advance()
            node = BinOp("*", node, self.atom())
        return node

    def atom(self) -> GraphExpr:
        tok = self.tok
        if self.is_sym("("):
            self.advance()
            node = self.expr()
            self.expect_sym(")")
            return node
        if self.is_sym("["):
            return self.bracket()
        if tok.kind != "name":
            raise self.error(f"expected a graph, found {tok.text or 'end of input'!r}")
        word = tok.text.lower()
        if word == "box":
            raise self.error("'box' needs a left operand")
        if word == "wedge":
            self.advance()
            self.expect_sym("(")
            left = self.expr()
            self.expect_sym(",")
            lb = self.expect_int()
            self.expect_sym(",")
            right = self.expr()
            self.expect_sym(",")
            rb = self.expect_int()
            self.expect_sym(")")
            return Wedge(left, lb, right, rb)
        if word == "lcf":
            self.advance()
            self.expect_sym("(")
            node = self.lcf()
            self.expect_sym(")")
            return node
        self.advance()
        try:
            name = gr.canonical_family(tok.text)
        except GraphError:
            raise self.error(f"unknown graph family {tok.text!r}", tok) from None
        args = []
        if self.is_sym("("):
            self.advance()
            if not self.is_sym(")"):
                args.append(self.expect_int())
                while self.is_sym(","):
                    self.advance()
                    args.append(self.expect_int())
            self.expect_sym(")")
        arity = gr.family_arity(name)
        if len(args) != arity:
            raise self.error(f"family {name!r} takes {arity} argument(s), got {len(args)}", tok)
        return Family(name, tuple(args))

    def _bracket_is_lcf(self) -> bool:
        j = self.i + 1
        toks = self.toks
        if toks[j].kind == "sym" and toks[j].text in "+-":
            return True
        if toks[j].kind == "int" and toks[j + 1].kind == "sym" and toks[j + 1].text in ",]":
            return True
        return False

    def bracket(self) -> GraphExpr:
        if self._bracket_is_lcf():
            return self.lcf()
        self.expect_sym("[")
        n = None
        edges = []
        if not self.is_sym("]"):
            while True:
                if self.is_word("n"):
                    self.advance()
                    self.expect_sym("=")
                    n = self.expect_int()
                else:
                    start = self.tok
                    u = self.expect_int()
                    self.expect_sym("-")
                    v = self.expect_int()
                    if u == v:
                        raise self.error(f"loop at vertex {u}", start)
                    edges.append((u, v))
                if not self.is_sym(","):
                    break
                self.advance()
        self.expect_sym("]")
        return EdgeList(n, tuple(edges))

    def lcf(self) -> Lcf:
        self.expect_sym("[")
        jumps = [self.expect_int(signed=True)]
        while self.is_sym(","):
            self.advance()
            jumps.append(self.expect_int(signed=True))
        self.expect_sym("]")
        self.expect_sym("^")
        tok = self.tok
        r = self.expect_int()
        if r < 1:
            raise self.error("LCF exponent must be positive", tok)
        return Lcf(tuple(jumps), r)


def parse_expr(text: str) -> GraphExpr:
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# printing and evaluation
# ---------------------------------------------------------------------------

def to_text(node: GraphExpr) -> str:
    """Render an expression so that ``parse_expr(to_text(e)) == e``."""
    if isinstance(node, Family):
        return node.name + ("(" + ", ".join(map(str, node.args)) + ")" if node.args else "")
    if isinstance(node, EdgeList):
        items = ([f"n={node.n}"] if node.n is not None else []) + [f"{u}-{v}" for u, v in node.edges]
        return "[" + ", ".join(items) + "]"
    if isinstance(node, Lcf):
        return "lcf([" + ", ".join(map(str, node.jumps)) + f"]^{node.repeats})"
    if isinstance(node, Wedge):
        return (f"wedge({to_text(node.left)}, {node.left_base}, "
                f"{to_text(node.right)}, {node.right_base})")
    if isinstance(node, BinOp):
        p = _PRECEDENCE[node.op]
        left, right = to_text(node.left), to_text(node.right)
        if isinstance(node.left, BinOp) and _PRECEDENCE[node.left.op] < p:
            left = f"({left})"
        if isinstance(node.right, BinOp) and _PRECEDENCE[node.right.op] <= p:
            right = f"({right})"
        return f"{left} {node.op} {right}"
    raise TypeError(f"not a graph expression: {node!r}")


def evaluate(node: GraphExpr) -> Graph:
    if isinstance(node, Family):
        return gr.build_named(node.name, *node.args)
    if isinstance(node, EdgeList):
        return Graph.from_edges(node.edges, n=_edge_list_size(node.n, node.edges))
    if isinstance(node, Lcf):
        return gr.lcf_graph(node.jumps, node.repeats)
    if isinstance(node, Wedge):
        return gr.wedge(evaluate(node.left), node.left_base, evaluate(node.right), node.right_base)
    if isinstance(node, BinOp):
        left, right = evaluate(node.left), evaluate(node.right)
        if node.op == "+":
            return gr.disjoint_union(left, right)
        if node.op == "box":
            return gr.box_product(left, right)
        return gr.join(left, right)
    raise TypeError(f"not a graph expression: {node!r}")


def _edge_list_size(n, edges) -> int:
    needed = 1 + max((max(e) for e in edges), default=-1)
    return needed if n is None else max(n, needed)


# ---------------------------------------------------------------------------
# standalone formats
# ---------------------------------------------------------------------------

_LCF_SHAPE = re.compile(r"^\s*(lcf\s*\()?\s*\[[-+\d,\s]*\]\s*\^\s*\d+\s*\)?\s*$", re.I)


def looks_like_lcf(text: str) -> bool:
    return bool(_LCF_SHAPE.match(text))


def parse_lcf(text: str) -> Graph:
    """Parse ``[j_1, ..., j_m]^r`` (optionally wrapped in ``lcf(...)``)."""
    p = _Parser(text)
    wrapped = p.is_word("lcf")
    if wrapped:
        p.advance()
        p.expect_sym("(")
    node = p.lcf()
    if wrapped:
        p.expect_sym(")")
    if p.tok.kind != "end":
        raise p.error(f"unexpected {p.tok.text!r}")
    return gr.lcf_graph(node.jumps, node.repeats)


def parse_edge_list(text: str) -> Graph:
    """Lines ``u v``; an optional ``n=<int>`` line raises the vertex count.

    Blank lines and ``#`` comments are ignored.
    """
    n = None
    edges = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        col = raw.index(line[0]) + 1
        m = re.fullmatch(r"n\s*=\s*(-?\d+)", line)
        if m:
            n = int(m.group(1))
            if n < 0:
                raise DslError("vertex count must be nonnegative", lineno, col)
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 2 or not all(re.fullmatch(r"-?\d+", s) for s in parts):
            raise DslError(f"expected 'u v', got {line!r}", lineno, col)
        u, v = int(parts[0]), int(parts[1])
        if u < 0 or v < 0:
            raise DslError("negative vertex index", lineno, col)
        if u == v:
            raise DslError(f"loop at vertex {u}", lineno, col)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DslError(f"duplicate edge {key}", lineno, col)
        seen.add(key)
        edges.append(key)
    return Graph.from_edges(edges, n=_edge_list_size(n, edges))


def load_graph(spec: str) -> Graph:
    """Resolve a graph argument: edge-list file, LCF string, or expression."""
    if os.path.isfile(spec):
        with open(spec, encoding="utf-8") as fh:
            return parse_edge_list(fh.read())
    try:
        if looks_like_lcf(spec):
            return parse_lcf(spec)
        return evaluate(parse_expr(spec))
    except GraphError as exc:
        raise DslError(str(exc)) from exc
