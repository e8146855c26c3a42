"""A small textual language of let-bound algebra expressions.

Scripts are UTF-8, one ``NAME = expr`` statement per line, with ``#``
line comments. The grammar (normative, versioned with this module):

    program   := stmt*
    stmt      := NAME '=' expr
    expr      := NAME | op '(' args ')'
    op        := 'nsel'|'lsel'|'union'|'intersect'|'nminus'|'lminus'
               | 'compose'|'semijoin'|'naggr'|'laggr'|'paggr'
    condition := '[' (pred (',' pred)*)? (';' 'kw' ':' STRING)? ']'
    pred      := NAME ('='|'!='|'<'|'<='|'>'|'>=') literal
               | NAME 'has' '{' literal (',' literal)* '}'
    direction := 'src' | 'tgt'
    delta     := '(' direction ',' direction ')'
    aggspec   := 'count' | 'sum' '(' aref ')' | 'avg' '(' aref ')'
               | 'min' '(' aref ')' | 'max' '(' aref ')'
               | 'set' '(' aref ')' | 'any' '(' aref ')'
               | 'const' '(' STRING ')'
    aref      := NAME ('@' INT)?
    specmap   := '{' NAME ':' aggspec (',' NAME ':' aggspec)* '}'
    cexpr     := 'copy' '(' side '.' NAME ')'
               | 'jaccard' '(' side '.' NAME ',' side '.' NAME ')'
               | aggspec
    side      := 'l' | 'r' | 'lsrc' | 'ltgt' | 'rsrc' | 'rtgt'
    compfn    := '{' NAME ':' cexpr (',' NAME ':' cexpr)* '}'
    pattern   := 'path' '(' condition '@' direction
                          (',' condition '@' direction)* ')'

Operator argument shapes:

    nsel(e, condition)                lsel(e, condition)
    union(e, e)  intersect(e, e)  nminus(e, e)  lminus(e, e)
    semijoin(e, e, delta)             compose(e, e, delta, compfn)
    naggr(e, condition, direction, NAME, aggspec)
    laggr(e, condition, specmap)      paggr(e, pattern, specmap)

``parse`` builds a Program, ``compile`` folds it into a shared operator
DAG (structurally equal subexpressions are merged), and ``execute``
evaluates the DAG strictly in topological order, which is bit-identical
to running the corresponding algebra calls by hand.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import algebra
from .aggfn import (
    COUNT,
    AggSpec,
    CompositionFn,
    ConstString,
    CopyAny,
    CopyFrom,
    JaccardOf,
    SafExpr,
    avg_of,
    max_of,
    min_of,
    sum_of,
)
from .algebra import GraphPattern, SetOpKind
from .errors import (
    DslSyntaxError,
    DuplicateBindingError,
    ExecutionError,
    SocialGraphError,
    UnboundReferenceError,
    UnknownOperatorError,
)
from .graph import Condition, DirectionalCondition, SocialContentGraph, StructPredicate

OPS = (
    "nsel",
    "lsel",
    "union",
    "intersect",
    "nminus",
    "lminus",
    "compose",
    "semijoin",
    "naggr",
    "laggr",
    "paggr",
)

_SIDES = {
    "l": "left-link",
    "r": "right-link",
    "lsrc": "left-src",
    "ltgt": "left-tgt",
    "rsrc": "right-src",
    "rtgt": "right-tgt",
}

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER_RE = re.compile(r"\d+(?:\.\d+)?(?:[eE][+-]?\d+)?")
_TWO_CHAR = ("!=", "<=", ">=")
_ONE_CHAR = "()[]{},;:@.<>=-"


@dataclass(frozen=True)
class Token:
    kind: str  # NAME | NUMBER | STRING | PUNCT | EOL
    value: str
    line: int
    col: int


def _tokenize_line(text: str, line_no: int) -> list:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "#":
            break
        if ch.isspace():
            i += 1
            continue
        col = i + 1
        if ch == "'":
            end = text.find("'", i + 1)
            if end < 0:
                raise DslSyntaxError(line_no, col, "closing quote")
            tokens.append(Token("STRING", text[i + 1 : end], line_no, col))
            i = end + 1
            continue
        m = _NAME_RE.match(text, i)
        if m:
            tokens.append(Token("NAME", m.group(), line_no, col))
            i = m.end()
            continue
        m = _NUMBER_RE.match(text, i)
        if m:
            tokens.append(Token("NUMBER", m.group(), line_no, col))
            i = m.end()
            continue
        two = text[i : i + 2]
        if two in _TWO_CHAR:
            tokens.append(Token("PUNCT", two, line_no, col))
            i += 2
            continue
        if ch in _ONE_CHAR:
            tokens.append(Token("PUNCT", ch, line_no, col))
            i += 1
            continue
        raise DslSyntaxError(line_no, col, f"a token (found {ch!r})")
    tokens.append(Token("EOL", "", line_no, len(text) + 1))
    return tokens


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Ref:
    name: str


@dataclass(frozen=True)
class OpCall:
    op: str
    args: tuple  # sub-expressions first, then operator parameters


Expr = object  # Ref | OpCall


@dataclass(frozen=True)
class Program:
    stmts: tuple  # of (name, Expr)


class _Parser:
    def __init__(self, tokens: list):
        self.tokens = tokens
        self.pos = 0

    @property
    def cur(self) -> Token:
        return self.tokens[self.pos]

    def fail(self, expected: str):
        raise DslSyntaxError(self.cur.line, self.cur.col, expected)

    def take(self) -> Token:
        tok = self.cur
        self.pos += 1
        return tok

    def expect(self, value: str) -> Token:
        if self.cur.kind == "PUNCT" and self.cur.value == value:
            return self.take()
        self.fail(f"{value!r}")

    def expect_name(self, what: str = "a name") -> Token:
        if self.cur.kind == "NAME":
            return self.take()
        self.fail(what)

    def at(self, value: str) -> bool:
        return self.cur.kind == "PUNCT" and self.cur.value == value

    def at_name(self, value: str) -> bool:
        return self.cur.kind == "NAME" and self.cur.value == value

    # -- expressions --------------------------------------------------------

    def parse_stmt(self):
        name = self.expect_name("a binding name")
        self.expect("=")
        expr = self.parse_expr()
        if self.cur.kind != "EOL":
            self.fail("end of statement")
        return name.value, expr

    def parse_expr(self):
        tok = self.expect_name("a graph reference or operator")
        if not self.at("("):
            return Ref(tok.value)
        if tok.value not in OPS:
            raise UnknownOperatorError(tok.value, tok.line, tok.col)
        self.expect("(")
        op = tok.value
        if op in ("nsel", "lsel"):
            e = self.parse_expr()
            self.expect(",")
            cond = self.parse_condition()
            args = (e, cond)
        elif op in ("union", "intersect", "nminus", "lminus"):
            e1 = self.parse_expr()
            self.expect(",")
            e2 = self.parse_expr()
            args = (e1, e2)
        elif op == "semijoin":
            e1 = self.parse_expr()
            self.expect(",")
            e2 = self.parse_expr()
            self.expect(",")
            delta = self.parse_delta()
            args = (e1, e2, delta)
        elif op == "compose":
            e1 = self.parse_expr()
            self.expect(",")
            e2 = self.parse_expr()
            self.expect(",")
            delta = self.parse_delta()
            self.expect(",")
            fn = self.parse_compfn()
            args = (e1, e2, delta, fn)
        elif op == "naggr":
            e = self.parse_expr()
            self.expect(",")
            cond = self.parse_condition()
            self.expect(",")
            d = self.parse_direction()
            self.expect(",")
            att = self.expect_name("a destination attribute").value
            self.expect(",")
            spec = self.parse_aggspec()
            args = (e, cond, d, att, spec)
        elif op == "laggr":
            e = self.parse_expr()
            self.expect(",")
            cond = self.parse_condition()
            self.expect(",")
            specs = self.parse_specmap()
            args = (e, cond, specs)
        else:  # paggr
            e = self.parse_expr()
            self.expect(",")
            pattern = self.parse_pattern()
            self.expect(",")
            specs = self.parse_specmap()
            args = (e, pattern, specs)
        self.expect(")")
        return OpCall(op, args)

    # -- parameter forms ----------------------------------------------------

    def parse_literal(self):
        if self.cur.kind == "STRING":
            return self.take().value
        negate = False
        if self.at("-"):
            self.take()
            negate = True
        if self.cur.kind == "NUMBER":
            value = float(self.take().value)
            return -value if negate else value
        self.fail("a string or number literal")

    def parse_condition(self) -> Condition:
        self.expect("[")
        preds = []
        while self.cur.kind == "NAME":
            attr = self.take().value
            if self.at_name("has"):
                self.take()
                self.expect("{")
                operands = [self.parse_literal()]
                while self.at(","):
                    self.take()
                    operands.append(self.parse_literal())
                self.expect("}")
                preds.append(StructPredicate(attr, "contains-all", tuple(operands)))
            elif self.cur.kind == "PUNCT" and self.cur.value in ("=", "!=", "<", "<=", ">", ">="):
                op = self.take().value
                preds.append(StructPredicate(attr, op, (self.parse_literal(),)))
            else:
                self.fail("a comparison operator or 'has'")
            if self.at(","):
                self.take()
            else:
                break
        keywords = ()
        if self.at(";"):
            self.take()
            if not self.at_name("kw"):
                self.fail("'kw'")
            self.take()
            self.expect(":")
            if self.cur.kind != "STRING":
                self.fail("a quoted keyword string")
            keywords = tuple(self.take().value.split())
        self.expect("]")
        return Condition(preds=tuple(preds), keywords=keywords)

    def parse_direction(self) -> str:
        tok = self.expect_name("'src' or 'tgt'")
        if tok.value not in ("src", "tgt"):
            raise DslSyntaxError(tok.line, tok.col, "'src' or 'tgt'")
        return tok.value

    def parse_delta(self) -> DirectionalCondition:
        self.expect("(")
        d1 = self.parse_direction()
        self.expect(",")
        d2 = self.parse_direction()
        self.expect(")")
        return DirectionalCondition(d1, d2)

    def parse_aref(self):
        attr = self.expect_name("an attribute name").value
        step = None
        if self.at("@"):
            self.take()
            if self.cur.kind != "NUMBER":
                self.fail("a chain position")
            step = int(float(self.take().value))
        return attr, step

    def parse_aggspec(self) -> AggSpec:
        tok = self.expect_name("an aggregate (count/sum/avg/min/max/set/any/const)")
        kind = tok.value
        if kind == "count":
            return COUNT
        makers = {"sum": sum_of, "avg": avg_of, "min": min_of, "max": max_of}
        if kind in makers:
            self.expect("(")
            attr, step = self.parse_aref()
            self.expect(")")
            return makers[kind](attr, step)
        if kind == "set":
            self.expect("(")
            attr, step = self.parse_aref()
            self.expect(")")
            return SafExpr(attr, step)
        if kind == "any":
            self.expect("(")
            attr, step = self.parse_aref()
            self.expect(")")
            return CopyAny(attr, step)
        if kind == "const":
            self.expect("(")
            if self.cur.kind != "STRING":
                self.fail("a quoted string")
            value = self.take().value
            self.expect(")")
            return ConstString(value)
        raise DslSyntaxError(tok.line, tok.col, "an aggregate (count/sum/avg/min/max/set/any/const)")

    def parse_specmap(self) -> tuple:
        self.expect("{")
        specs = [self.parse_spec_entry()]
        while self.at(","):
            self.take()
            specs.append(self.parse_spec_entry())
        self.expect("}")
        return tuple(specs)

    def parse_spec_entry(self):
        att = self.expect_name("a destination attribute").value
        self.expect(":")
        return att, self.parse_aggspec()

    def parse_side(self) -> str:
        tok = self.expect_name("a side (l/r/lsrc/ltgt/rsrc/rtgt)")
        side = _SIDES.get(tok.value)
        if side is None:
            raise DslSyntaxError(tok.line, tok.col, "a side (l/r/lsrc/ltgt/rsrc/rtgt)")
        return side

    def parse_cexpr(self):
        if self.at_name("copy"):
            self.take()
            self.expect("(")
            side = self.parse_side()
            self.expect(".")
            attr = self.expect_name("an attribute name").value
            self.expect(")")
            return CopyFrom(side, attr)
        if self.at_name("jaccard"):
            self.take()
            self.expect("(")
            ls = self.parse_side()
            self.expect(".")
            la = self.expect_name("an attribute name").value
            self.expect(",")
            rs = self.parse_side()
            self.expect(".")
            ra = self.expect_name("an attribute name").value
            self.expect(")")
            return JaccardOf(ls, la, rs, ra)
        return self.parse_aggspec()

    def parse_compfn(self) -> CompositionFn:
        self.expect("{")
        outputs = [self.parse_compfn_entry()]
        while self.at(","):
            self.take()
            outputs.append(self.parse_compfn_entry())
        self.expect("}")
        return CompositionFn(tuple(outputs))

    def parse_compfn_entry(self):
        att = self.expect_name("an output attribute").value
        self.expect(":")
        return att, self.parse_cexpr()

    def parse_pattern(self) -> GraphPattern:
        if not self.at_name("path"):
            self.fail("'path'")
        self.take()
        self.expect("(")
        steps = [self.parse_pattern_step()]
        while self.at(","):
            self.take()
            steps.append(self.parse_pattern_step())
        self.expect(")")
        return GraphPattern(tuple(steps))

    def parse_pattern_step(self):
        cond = self.parse_condition()
        self.expect("@")
        d = self.parse_direction()
        return cond, d


def _references(expr) -> list:
    if isinstance(expr, Ref):
        return [expr.name]
    out = []
    for arg in expr.args:
        if isinstance(arg, (Ref, OpCall)):
            out.extend(_references(arg))
    return out


def parse(text: str) -> Program:
    """Parse a script into a Program; errors carry line and column."""
    stmts = []
    defined: dict = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        tokens = _tokenize_line(raw, line_no)
        if tokens[0].kind == "EOL":
            continue
        name, expr = _Parser(tokens).parse_stmt()
        if name in defined:
            raise DuplicateBindingError(name, line_no)
        defined[name] = len(stmts)
        stmts.append((name, expr))
    # Bindings may only be referenced after their definition.
    for idx, (_, expr) in enumerate(stmts):
        for ref in _references(expr):
            if ref in defined and defined[ref] >= idx:
                raise UnboundReferenceError(ref)
    return Program(stmts=tuple(stmts))


# ---------------------------------------------------------------------------
# Plans


@dataclass(frozen=True)
class PlanNode:
    """One operator (or input leaf) in the compiled DAG."""

    kind: str
    inputs: tuple  # of PlanNode
    params: tuple


@dataclass(frozen=True)
class Plan:
    bindings: tuple  # of (name, PlanNode), in program order
    leaves: tuple  # input graph names, in first-use order

    def node_count(self) -> int:
        seen = set()

        def walk(n: PlanNode):
            if id(n) in seen:
                return
            seen.add(id(n))
            for child in n.inputs:
                walk(child)

        for _, n in self.bindings:
            walk(n)
        return len(seen)


def compile(program: Program, inputs=None) -> Plan:
    """Fold a Program into a Plan, merging structurally equal subtrees.

    Free names become input leaves. When ``inputs`` (a collection of
    permitted input names) is given, any other free name raises
    UnboundReference at compile time instead of at execution.
    """
    intern: dict = {}
    env: dict = {}
    leaves: list = []

    def mk(kind: str, node_inputs: tuple, params: tuple) -> PlanNode:
        candidate = PlanNode(kind, node_inputs, params)
        return intern.setdefault(candidate, candidate)

    def build(expr) -> PlanNode:
        if isinstance(expr, Ref):
            if expr.name in env:
                return env[expr.name]
            if inputs is not None and expr.name not in inputs:
                raise UnboundReferenceError(expr.name)
            leaf = mk("input", (), (expr.name,))
            if expr.name not in leaves:
                leaves.append(expr.name)
            return leaf
        children = tuple(build(a) for a in expr.args if isinstance(a, (Ref, OpCall)))
        params = tuple(a for a in expr.args if not isinstance(a, (Ref, OpCall)))
        return mk(expr.op, children, params)

    bindings = []
    for name, expr in program.stmts:
        node = build(expr)
        env[name] = node
        bindings.append((name, node))
    return Plan(bindings=tuple(bindings), leaves=tuple(leaves))


def _run_node(node: PlanNode, inputs: dict, memo: dict) -> SocialContentGraph:
    cached = memo.get(node)
    if cached is not None:
        return cached
    args = [_run_node(child, inputs, memo) for child in node.inputs]
    kind, params = node.kind, node.params
    if kind == "input":
        name = params[0]
        if name not in inputs:
            raise UnboundReferenceError(name)
        result = inputs[name]
    elif kind == "nsel":
        result = algebra.node_select(args[0], params[0])
    elif kind == "lsel":
        result = algebra.link_select(args[0], params[0])
    elif kind == "union":
        result = algebra.set_op(SetOpKind.UNION, args[0], args[1])
    elif kind == "intersect":
        result = algebra.set_op(SetOpKind.INTERSECT, args[0], args[1])
    elif kind == "nminus":
        result = algebra.set_op(SetOpKind.NODE_MINUS, args[0], args[1])
    elif kind == "lminus":
        result = algebra.link_minus(args[0], args[1])
    elif kind == "semijoin":
        result = algebra.semi_join(args[0], args[1], params[0])
    elif kind == "compose":
        result = algebra.compose(args[0], args[1], params[0], params[1])
    elif kind == "naggr":
        cond, d, att, spec = params
        result = algebra.node_aggregate(args[0], cond, d, att, spec)
    elif kind == "laggr":
        cond, specs = params
        result = algebra.link_aggregate(args[0], cond, specs)
    else:  # paggr
        pattern, specs = params
        result = algebra.pattern_aggregate(args[0], pattern, specs)
    memo[node] = result
    return result


def execute(plan: Plan, inputs: dict) -> dict:
    """Evaluate every binding; failures are wrapped with the binding name."""
    memo: dict = {}
    results: dict = {}
    for name, node in plan.bindings:
        try:
            results[name] = _run_node(node, inputs, memo)
        except ExecutionError:
            raise
        except SocialGraphError as e:
            raise ExecutionError(name, e) from e
    return results


def run_script(text: str, inputs: dict) -> dict:
    """parse + compile + execute in one call."""
    return execute(compile(parse(text)), inputs)


def parse_condition(text: str) -> Condition:
    """Parse a standalone condition in the script grammar, e.g.
    "[type='destination'; kw:'near denver']"."""
    tokens = _tokenize_line(text, 1)
    parser = _Parser(tokens)
    cond = parser.parse_condition()
    if parser.cur.kind != "EOL":
        parser.fail("end of condition")
    return cond
